#ifndef BELLMP_QUANTUM_HPP
#define BELLMP_QUANTUM_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <utility>

#include <Eigen/Dense>

#include "bellmp/core.hpp"

namespace bellmp {

using Complex = std::complex<double>;

/// gamma_d^e = exp(2 pi i e / d), with the exponent reduced mod d first.
[[nodiscard]] Complex root_of_unity(long long exponent, int d);

// Multiport -----------------------------------------------------------------

/// Transition matrix of an unbiased Bell multiport with per-input phase
/// shifters: U_ij = gamma_d^{ij} exp(i phi_j) / sqrt(d), 0-based i (output), j (input).
struct MultiportUnitary {
  Dimension dim;
  Eigen::MatrixXcd entries;
};

[[nodiscard]] MultiportUnitary multiport_unitary(Dimension dim, const PhaseVector& phases);

// Joint probabilities --------------------------------------------------------

/// P(A_i = m, B_j = n) for the four setting pairs.  Each (i,j) slice is a d x d
/// matrix indexed (m, n) and sums to one.
class JointProbabilityTable {
 public:
  /// Slices ordered (1,1), (1,2), (2,1), (2,2).  Entries down to -1e-14 are
  /// clamped to zero; anything more negative, or a slice not summing to one
  /// within 1e-12, throws DomainError.
  JointProbabilityTable(Dimension dim, std::array<Eigen::MatrixXd, 4> slices);

  [[nodiscard]] static JointProbabilityTable uniform(Dimension dim);

  [[nodiscard]] Dimension dim() const noexcept { return dim_; }
  [[nodiscard]] const Eigen::MatrixXd& slice(int i, int j) const;
  [[nodiscard]] double operator()(int i, int j, int m, int n) const { return slice(i, j)(m, n); }

 private:
  Dimension dim_;
  std::array<Eigen::MatrixXd, 4> slices_;
};

/// Row-major slot of setting pair (i, j) in {1,2}^2.
[[nodiscard]] constexpr int pair_slot(int i, int j) noexcept { return 2 * (i - 1) + (j - 1); }

[[nodiscard]] JointProbabilityTable joint_probabilities(const PureState& state,
                                                        const MeasurementSettings& settings);

/// (1 - F) * table + F * uniform.
[[nodiscard]] JointProbabilityTable mix_with_noise(const JointProbabilityTable& table, double noise_fraction);

// Correlations and the Bell value ---------------------------------------------

/// Q_ij = (1/S) sum_{m,n} f^{ij}(m,n) P(A_i = m, B_j = n).
[[nodiscard]] double correlation_q(const JointProbabilityTable& table, int i, int j, KernelVariant variant);

/// Q11 + Q12 - Q21 + Q22 of a table.
[[nodiscard]] double bell_value(const JointProbabilityTable& table, KernelVariant variant);

[[nodiscard]] double bell_value(const PureState& state, const MeasurementSettings& settings,
                                KernelVariant variant = KernelVariant::Plus);

/// Bell value of the isotropic mixture (1 - F)|phi><phi| + F * I / d^2.
[[nodiscard]] double bell_value_noisy(const PureState& state, const MeasurementSettings& settings,
                                      double noise_fraction, KernelVariant variant = KernelVariant::Plus);

// Pair decomposition ---------------------------------------------------------

/// Symmetric matrix W(settings) with I = a^T W a for every state in the
/// sum a^2 = d convention.  Zero diagonal: the diagonal terms of |amplitude|^2
/// produce a uniform table, which has vanishing correlations.
[[nodiscard]] Eigen::MatrixXd coupling_matrix(const MeasurementSettings& settings,
                                              KernelVariant variant = KernelVariant::Plus);

/// The six coefficients T_kl (k < l) of I_4 = sum_{k<l} a_k a_l T_kl, d = 4.
struct TCoefficients {
  /// Pairs in storage order.
  static constexpr std::array<std::pair<int, int>, 6> pairs{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

  std::array<double, 6> t{};

  [[nodiscard]] double operator()(int k, int l) const;
  /// sum_{k<l} a_k a_l T_kl.
  [[nodiscard]] double contract(const PureState& state) const;
};

/// T_kl = 2 W_kl from coupling_matrix.  Throws DimensionError unless d = 4.
[[nodiscard]] TCoefficients t_coefficients(const MeasurementSettings& settings,
                                           KernelVariant variant = KernelVariant::Plus);

/// The six reference closed forms, transcribed as tabulated.  They do
/// not satisfy the decomposition identity (at zero phases they sum to -2/3
/// instead of 2) and are kept only for diagnostics.
[[nodiscard]] TCoefficients printed_t_coefficients(const MeasurementSettings& settings);

// Gradients ------------------------------------------------------------------

/// Fast evaluator of the Bell value and its phase gradient for a fixed
/// dimension and kernel.  Works from the d residues of m+n instead of the full
/// d x d table.
class BellEvaluator {
 public:
  BellEvaluator(Dimension dim, KernelVariant variant);

  [[nodiscard]] Dimension dim() const noexcept { return dim_; }

  /// `phases` is the flat A1, A2, B1, B2 vector of length 4d.
  [[nodiscard]] double value(const Eigen::VectorXd& a, const Eigen::VectorXd& phases) const;

  /// Value and d/dphases, same ordering as `phases`.
  [[nodiscard]] double value_and_gradient(const Eigen::VectorXd& a, const Eigen::VectorXd& phases,
                                          Eigen::VectorXd& gradient) const;

 private:
  Dimension dim_;
  Eigen::MatrixXcd dft_;                   // dft_(r, k) = gamma^{rk}
  std::array<Eigen::VectorXd, 4> weight_;  // Pre-scaled residue weights, sign included.
};

/// dI/dphi for all 4d phases, ordered A1, A2, B1, B2.
[[nodiscard]] Eigen::VectorXd bell_gradient(const PureState& state, const MeasurementSettings& settings,
                                            KernelVariant variant = KernelVariant::Plus);

// Finite-shot sampling ---------------------------------------------------------

using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

struct SampleEstimate {
  std::int64_t shots;                 ///< Shots per setting pair.
  std::array<CountMatrix, 4> counts;  ///< Slots as in pair_slot().
  double value_estimate;
  double std_error;
};

/// Draws `shots_per_setting` outcome pairs per setting pair by inverse CDF
/// over the d^2 outcomes.  Deterministic for a fixed seed.
[[nodiscard]] SampleEstimate sample_experiment(const PureState& state, const MeasurementSettings& settings,
                                               std::int64_t shots_per_setting, std::uint64_t seed,
                                               KernelVariant variant = KernelVariant::Plus);

}  // namespace bellmp

#endif  // BELLMP_QUANTUM_HPP
