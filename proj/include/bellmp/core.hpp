#ifndef BELLMP_CORE_HPP
#define BELLMP_CORE_HPP

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace bellmp {

// Errors ---------------------------------------------------------------------

/// Base class of every error raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched or unsupported dimension.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A state whose coefficients are all zero.
class DegenerateStateError : public Error {
 public:
  using Error::Error;
};

/// Argument outside its mathematical domain (non-finite, out of range, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Dimension ------------------------------------------------------------------

/// Number of outcomes per measurement, d >= 2.  The associated spin is
/// S = (d-1)/2.
class Dimension {
 public:
  explicit Dimension(int d) : d_(d) {
    if (d < 2) throw DimensionError("dimension must be >= 2, got " + std::to_string(d));
  }

  [[nodiscard]] int value() const noexcept { return d_; }
  [[nodiscard]] double spin() const noexcept { return 0.5 * (d_ - 1); }
  /// 2S as an integer; kernel values are multiples of 1/2 so 2S keeps them integral.
  [[nodiscard]] int twice_spin() const noexcept { return d_ - 1; }

  friend bool operator==(Dimension, Dimension) = default;

 private:
  int d_;
};

// Residue / sign helpers -----------------------------------------------------

/// Non-negative residue: result in [0, d) for every integer x, including
/// negative ones (M(-1, 4) = 3).
[[nodiscard]] constexpr int residue_mod(long long x, int d) noexcept {
  const long long r = x % d;
  return static_cast<int>(r < 0 ? r + d : r);
}

/// Sign function with sign(0) = +1.
[[nodiscard]] constexpr int sign_nonneg(int x) noexcept { return x >= 0 ? 1 : -1; }

// States, phases, settings ---------------------------------------------------

/// Real Schmidt coefficients a_i of sum_i a_i |i>|i> / sqrt(d).  Stored with
/// sum a_i^2 = d so the maximally entangled state is a = (1, ..., 1).
class PureState {
 public:
  [[nodiscard]] Dimension dim() const noexcept { return dim_; }
  [[nodiscard]] const Eigen::VectorXd& coeffs() const noexcept { return a_; }
  [[nodiscard]] double operator[](int i) const { return a_(i); }
  [[nodiscard]] int size() const noexcept { return static_cast<int>(a_.size()); }

  /// The maximally entangled state a = (1, ..., 1).
  [[nodiscard]] static PureState maximally_entangled(Dimension dim);

 private:
  friend PureState make_state(Dimension, const Eigen::Ref<const Eigen::VectorXd>&);
  PureState(Dimension dim, Eigen::VectorXd a) : dim_(dim), a_(std::move(a)) {}

  Dimension dim_;
  Eigen::VectorXd a_;
};

/// Rescales `coeffs` so that sum a_i^2 = d.  Signs and proportions are kept.
/// Throws DimensionError on a length mismatch, DomainError on non-finite
/// entries and DegenerateStateError on the zero vector.
[[nodiscard]] PureState make_state(Dimension dim, const Eigen::Ref<const Eigen::VectorXd>& coeffs);

[[nodiscard]] inline PureState make_state(Dimension dim, const std::vector<double>& coeffs) {
  return make_state(dim, Eigen::Map<const Eigen::VectorXd>(coeffs.data(),
                                                           static_cast<Eigen::Index>(coeffs.size())));
}

/// The d local phases (radians) of one multiport setting.  2pi-periodic, no
/// range restriction.
class PhaseVector {
 public:
  explicit PhaseVector(Dimension dim) : dim_(dim), phi_(Eigen::VectorXd::Zero(dim.value())) {}
  PhaseVector(Dimension dim, Eigen::VectorXd phi);

  [[nodiscard]] Dimension dim() const noexcept { return dim_; }
  [[nodiscard]] const Eigen::VectorXd& phases() const noexcept { return phi_; }
  [[nodiscard]] double operator[](int k) const { return phi_(k); }

 private:
  Dimension dim_;
  Eigen::VectorXd phi_;
};

/// Which party's multiport a setting index refers to.
enum class Party { Alice, Bob };

/// Alice's two settings A1, A2 and Bob's two settings B1, B2.
class MeasurementSettings {
 public:
  MeasurementSettings(PhaseVector a1, PhaseVector a2, PhaseVector b1, PhaseVector b2);

  /// All-zero phases.
  [[nodiscard]] static MeasurementSettings zero(Dimension dim);

  /// Settings from a flat vector of 4d phases ordered A1, A2, B1, B2.
  [[nodiscard]] static MeasurementSettings from_flat(Dimension dim,
                                                     const Eigen::Ref<const Eigen::VectorXd>& flat);

  [[nodiscard]] Dimension dim() const noexcept { return a1_.dim(); }

  /// Setting index 1 or 2.
  [[nodiscard]] const PhaseVector& alice(int i) const;
  [[nodiscard]] const PhaseVector& bob(int j) const;

  /// Flat vector of 4d phases ordered A1, A2, B1, B2.
  [[nodiscard]] Eigen::VectorXd flat() const;

  /// phi_a^{A_i} - phi_b^{A_i} + phi_a^{B_j} - phi_b^{B_j}.
  [[nodiscard]] double pair_difference(int a, int b, int i, int j) const;

 private:
  PhaseVector a1_, a2_, b1_, b2_;
};

// Correlation kernel -----------------------------------------------------------

/// Selects f^{ij}(m,n) = S - M(sign(i-j)(m+n), d) (Plus) or the (m-n) form (Minus).
enum class KernelVariant { Plus, Minus };

[[nodiscard]] std::string to_string(KernelVariant v);
[[nodiscard]] KernelVariant parse_variant(const std::string& s);

/// Twice the kernel value, 2f = 2S - 2M(...), as an exact integer.
[[nodiscard]] int kernel_twice(int i, int j, int m, int n, Dimension dim, KernelVariant variant);

/// f^{ij}(m,n) for setting indices i, j in {1, 2} and outcomes m, n in [0, d).
[[nodiscard]] inline double kernel_f(int i, int j, int m, int n, Dimension dim, KernelVariant variant) {
  return 0.5 * kernel_twice(i, j, m, n, dim, variant);
}

/// Sign with which Q_ij enters I = Q11 + Q12 - Q21 + Q22.
[[nodiscard]] constexpr int bell_sign(int i, int j) noexcept { return (i == 2 && j == 1) ? -1 : 1; }

}  // namespace bellmp

#endif  // BELLMP_CORE_HPP
