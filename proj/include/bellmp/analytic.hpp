#ifndef BELLMP_ANALYTIC_HPP
#define BELLMP_ANALYTIC_HPP

// Closed-form d = 4 extrema of the Bell value under Bell-multiport
// measurements.  Constants and branch formulas are templated on the scalar so
// the same expressions can be checked in extended precision.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "bellmp/core.hpp"

namespace bellmp {

// Constants ------------------------------------------------------------------

template <typename Scalar = double>
struct GammaConstants {
  Scalar gamma1;  ///< sqrt(10 - sqrt2)(2 + 3 sqrt2)/21
  Scalar gamma2;  ///< sqrt2/3
  Scalar gamma3;  ///< sqrt(10 - sqrt2)(4 - sqrt2)/21
};

template <typename Scalar = double>
[[nodiscard]] GammaConstants<Scalar> gamma_constants() {
  using std::sqrt;
  const Scalar r2 = sqrt(Scalar(2));
  const Scalar root = sqrt(Scalar(10) - r2);
  return {root * (Scalar(2) + Scalar(3) * r2) / Scalar(21), r2 / Scalar(3), root * (Scalar(4) - r2) / Scalar(21)};
}

// Vertex tables --------------------------------------------------------------

enum class VertexMagnitude { Gamma1, Gamma2, Gamma3, TwoThirds, OneThird };

struct SignedMagnitude {
  int sign;  // +1 or -1
  VertexMagnitude magnitude;

  [[nodiscard]] double value() const;
  friend bool operator==(const SignedMagnitude&, const SignedMagnitude&) = default;
};

/// One row of the vertex tables.  Slots are the label pairs
/// [ab], [ac], [ad], [bc], [bd], [cd].
struct VertexPattern {
  int table_id;  // 1..3
  int row;       // 1..8
  std::array<SignedMagnitude, 6> slots;

  friend bool operator==(const VertexPattern&, const VertexPattern&) = default;
};

/// Label pairs of the six slots, labels a..d as 0..3.
inline constexpr std::array<std::array<int, 2>, 6> kVertexSlotPairs{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

/// The 24 reference rows, transcribed as tabulated.
[[nodiscard]] const std::vector<VertexPattern>& printed_vertex_tables();

/// The rows used for evaluation.  Identical to the printed tables except
/// table 2, row 4, whose [bc] entry is sign-flipped (-G1 -> +G1) so the row
/// belongs to the sign-flip orbit of the table's first row like every other
/// row does.
[[nodiscard]] const std::vector<VertexPattern>& vertex_tables();

// Sorted magnitudes and branch formulas -----------------------------------------

struct SortedMagnitudes {
  std::array<double, 4> values;  ///< A0 >= A1 >= A2 >= A3 >= 0
  std::array<int, 4> perm;       ///< perm[slot] = original coefficient index
};

/// |a_i| in decreasing order; equal magnitudes keep their index order.
[[nodiscard]] SortedMagnitudes sort_magnitudes(const PureState& state);

template <typename Scalar = double>
struct BranchMax {
  Scalar b1, b2, max;
};

template <typename Scalar = double>
struct BranchMin {
  Scalar s1, s2, min;
};

template <typename Scalar>
[[nodiscard]] BranchMax<Scalar> branch_values_max(const std::array<Scalar, 4>& A) {
  const auto g = gamma_constants<Scalar>();
  const Scalar b1 = A[0] * A[1] * g.gamma1 + (A[0] * A[2] + A[1] * A[3]) * g.gamma2 +
                    (A[0] * A[3] + A[1] * A[2] + A[2] * A[3]) * g.gamma3;
  const Scalar b2 = A[0] * A[1] * g.gamma3 + (A[0] * A[2] + A[1] * A[3]) * g.gamma2 +
                    (A[0] * A[3] + A[1] * A[2] - A[2] * A[3]) * g.gamma1;
  return {b1, b2, std::max(b1, b2)};
}

template <typename Scalar>
[[nodiscard]] BranchMin<Scalar> branch_values_min(const std::array<Scalar, 4>& A) {
  const auto g = gamma_constants<Scalar>();
  const Scalar s1 = -(A[0] * A[1] + A[0] * A[3] + A[1] * A[2]) * g.gamma1 - (A[0] * A[2] + A[1] * A[3]) * g.gamma2 +
                    A[2] * A[3] * g.gamma3;
  const Scalar s2 = -Scalar(2) * (A[0] * A[1] + A[0] * A[3] + A[1] * A[2] + A[2] * A[3]) / Scalar(3) -
                    (A[0] * A[2] + A[1] * A[3]) / Scalar(3);
  return {s1, s2, std::min(s1, s2)};
}

/// Branch values of a d = 4 state (through its sorted magnitudes).
[[nodiscard]] BranchMax<double> branch_values_max(const PureState& state);
[[nodiscard]] BranchMin<double> branch_values_min(const PureState& state);

// Optimal states ---------------------------------------------------------------

struct OptimalState {
  PureState state;  ///< (plus, plus, minus, minus)
  double plus;
  double minus;
  double value;
};

/// The (A+, A+, A-, A-) state maximizing the d = 4 maximum, with its value.
[[nodiscard]] OptimalState optimal_max_state();

/// The (K+, K+, K-, K-) state minimizing the d = 4 minimum, with its value.
[[nodiscard]] OptimalState optimal_min_state();

/// 1 - 2 / value: the largest isotropic-noise fraction that keeps I above 2.
/// Non-positive results mean no violation.  Throws DomainError for value <= 0.
[[nodiscard]] double threshold_noise(double bell_value);

// Vertex enumeration -----------------------------------------------------------

struct VertexWitness {
  VertexPattern pattern;
  std::array<int, 4> assignment;  ///< assignment[label] = sorted-magnitude slot
};

struct VertexCandidates {
  double max;
  double min;
  VertexWitness max_witness;
  VertexWitness min_witness;
};

/// Value of one pattern under one assignment of sorted magnitudes to labels.
[[nodiscard]] double vertex_value(const VertexPattern& pattern, const std::array<int, 4>& assignment,
                                  const std::array<double, 4>& sorted);

/// Extrema of sum_slots A_x A_y * pattern over every pattern of `tables`
/// (default vertex_tables()) and all 24 label assignments.  Ties resolve to the
/// first (table, row, lexicographic assignment).
[[nodiscard]] VertexCandidates vertex_candidates(const PureState& state);
[[nodiscard]] VertexCandidates vertex_candidates(const PureState& state, const std::vector<VertexPattern>& tables);

// Reference angles & results -------------------------------------------------------

/// Reference optimal angles (as tabulated) for the (A+, A+, A-, A-) state with a_i > 0.
[[nodiscard]] MeasurementSettings reference_optimal_angles();

/// An extremal Bell value with the state (and settings, when known) that reaches it.
struct ExtremalResult {
  double value;
  PureState state;
  std::optional<MeasurementSettings> settings;
  std::string branch;  ///< B1 | B2 | S1 | S2 | numeric
  std::vector<std::string> diagnostics;
};

}  // namespace bellmp

#endif  // BELLMP_ANALYTIC_HPP
