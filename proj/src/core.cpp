#include "bellmp/core.hpp"

namespace bellmp {

PureState PureState::maximally_entangled(Dimension dim) {
  return PureState(dim, Eigen::VectorXd::Ones(dim.value()));
}

PureState make_state(Dimension dim, const Eigen::Ref<const Eigen::VectorXd>& coeffs) {
  if (coeffs.size() != dim.value()) {
    throw DimensionError("state has " + std::to_string(coeffs.size()) + " coefficients, expected " +
                         std::to_string(dim.value()));
  }
  if (!coeffs.allFinite()) throw DomainError("state coefficients must be finite");
  const double norm2 = coeffs.squaredNorm();
  if (norm2 == 0.0) throw DegenerateStateError("state coefficients are all zero");

  // Already-normalized input is kept bit for bit so make_state is idempotent.
  if (std::abs(norm2 - dim.value()) <= 1e-14 * dim.value()) return PureState(dim, coeffs);
  return PureState(dim, coeffs * std::sqrt(dim.value() / norm2));
}

PhaseVector::PhaseVector(Dimension dim, Eigen::VectorXd phi) : dim_(dim), phi_(std::move(phi)) {
  if (phi_.size() != dim.value()) {
    throw DimensionError("phase vector has " + std::to_string(phi_.size()) + " entries, expected " +
                         std::to_string(dim.value()));
  }
  if (!phi_.allFinite()) throw DomainError("phases must be finite");
}

MeasurementSettings::MeasurementSettings(PhaseVector a1, PhaseVector a2, PhaseVector b1, PhaseVector b2)
    : a1_(std::move(a1)), a2_(std::move(a2)), b1_(std::move(b1)), b2_(std::move(b2)) {
  if (!(a1_.dim() == a2_.dim() && a1_.dim() == b1_.dim() && a1_.dim() == b2_.dim())) {
    throw DimensionError("all four phase vectors must share one dimension");
  }
}

MeasurementSettings MeasurementSettings::zero(Dimension dim) {
  return {PhaseVector(dim), PhaseVector(dim), PhaseVector(dim), PhaseVector(dim)};
}

MeasurementSettings MeasurementSettings::from_flat(Dimension dim,
                                                   const Eigen::Ref<const Eigen::VectorXd>& flat) {
  const int d = dim.value();
  if (flat.size() != 4 * d) throw DimensionError("flat phase vector must have 4d entries");
  return {PhaseVector(dim, flat.segment(0, d)), PhaseVector(dim, flat.segment(d, d)),
          PhaseVector(dim, flat.segment(2 * d, d)), PhaseVector(dim, flat.segment(3 * d, d))};
}

const PhaseVector& MeasurementSettings::alice(int i) const {
  if (i == 1) return a1_;
  if (i == 2) return a2_;
  throw DomainError("setting index must be 1 or 2");
}

const PhaseVector& MeasurementSettings::bob(int j) const {
  if (j == 1) return b1_;
  if (j == 2) return b2_;
  throw DomainError("setting index must be 1 or 2");
}

Eigen::VectorXd MeasurementSettings::flat() const {
  const int d = dim().value();
  Eigen::VectorXd out(4 * d);
  out << a1_.phases(), a2_.phases(), b1_.phases(), b2_.phases();
  return out;
}

double MeasurementSettings::pair_difference(int a, int b, int i, int j) const {
  const auto& pa = alice(i);
  const auto& pb = bob(j);
  return pa[a] - pa[b] + pb[a] - pb[b];
}

std::string to_string(KernelVariant v) { return v == KernelVariant::Plus ? "plus" : "minus"; }

KernelVariant parse_variant(const std::string& s) {
  if (s == "plus" || s == "+") return KernelVariant::Plus;
  if (s == "minus" || s == "-") return KernelVariant::Minus;
  throw DomainError("unknown kernel variant '" + s + "' (expected plus|minus)");
}

int kernel_twice(int i, int j, int m, int n, Dimension dim, KernelVariant variant) {
  const int d = dim.value();
  if (i < 1 || i > 2 || j < 1 || j > 2) throw DomainError("setting index must be 1 or 2");
  if (m < 0 || m >= d || n < 0 || n >= d) throw DomainError("outcome out of range");
  const int combined = variant == KernelVariant::Plus ? m + n : m - n;
  return dim.twice_spin() - 2 * residue_mod(static_cast<long long>(sign_nonneg(i - j)) * combined, d);
}

}  // namespace bellmp
