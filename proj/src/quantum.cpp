#include "bellmp/quantum.hpp"

#include <algorithm>
#include <numbers>
#include <random>
#include <stdexcept>

namespace bellmp {
namespace {

constexpr double kNegativeClamp = 1e-14;
constexpr double kSliceSumTolerance = 1e-12;

void require_same_dim(Dimension a, Dimension b) {
  if (!(a == b)) {
    throw DimensionError("dimension mismatch: " + std::to_string(a.value()) + " vs " +
                         std::to_string(b.value()));
  }
}

// Sum of f^{ij}(m, n) over the d outcome pairs with (m + n) mod d = r.
Eigen::VectorXd residue_weights(int i, int j, Dimension dim, KernelVariant variant) {
  const int d = dim.value();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
  for (int m = 0; m < d; ++m) {
    for (int n = 0; n < d; ++n) w(residue_mod(m + n, d)) += kernel_f(i, j, m, n, dim, variant);
  }
  return w;
}

// Uniform double in [0, 1) from the top 53 bits; independent of the standard
// library's distribution implementations.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

Complex root_of_unity(long long exponent, int d) {
  return std::polar(1.0, 2.0 * std::numbers::pi * residue_mod(exponent, d) / d);
}

MultiportUnitary multiport_unitary(Dimension dim, const PhaseVector& phases) {
  require_same_dim(dim, phases.dim());
  const int d = dim.value();
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  Eigen::MatrixXcd u(d, d);
  for (int j = 0; j < d; ++j) {
    const Complex shifter = std::polar(1.0, phases[j]);
    for (int i = 0; i < d; ++i) u(i, j) = scale * root_of_unity(static_cast<long long>(i) * j, d) * shifter;
  }
  return {dim, std::move(u)};
}

JointProbabilityTable::JointProbabilityTable(Dimension dim, std::array<Eigen::MatrixXd, 4> slices)
    : dim_(dim), slices_(std::move(slices)) {
  const int d = dim.value();
  for (auto& s : slices_) {
    if (s.rows() != d || s.cols() != d) throw DimensionError("probability slice must be d x d");
    if (!s.allFinite()) throw DomainError("probabilities must be finite");
    if (s.minCoeff() < -kNegativeClamp) throw DomainError("negative probability beyond round-off");
    s = s.cwiseMax(0.0);
    if (std::abs(s.sum() - 1.0) > kSliceSumTolerance) throw DomainError("probability slice does not sum to 1");
  }
}

JointProbabilityTable JointProbabilityTable::uniform(Dimension dim) {
  const int d = dim.value();
  const Eigen::MatrixXd u = Eigen::MatrixXd::Constant(d, d, 1.0 / (static_cast<double>(d) * d));
  return {dim, {u, u, u, u}};
}

const Eigen::MatrixXd& JointProbabilityTable::slice(int i, int j) const {
  if (i < 1 || i > 2 || j < 1 || j > 2) throw DomainError("setting index must be 1 or 2");
  return slices_[pair_slot(i, j)];
}

JointProbabilityTable joint_probabilities(const PureState& state, const MeasurementSettings& settings) {
  require_same_dim(state.dim(), settings.dim());
  const Dimension dim = state.dim();
  const Eigen::VectorXcd schmidt = (state.coeffs() / std::sqrt(static_cast<double>(dim.value()))).cast<Complex>();

  std::array<Eigen::MatrixXd, 4> slices;
  for (int i = 1; i <= 2; ++i) {
    const Eigen::MatrixXcd ua = multiport_unitary(dim, settings.alice(i)).entries;
    for (int j = 1; j <= 2; ++j) {
      const Eigen::MatrixXcd ub = multiport_unitary(dim, settings.bob(j)).entries;
      // amplitude(m, n) = sum_k c_k U^A_{mk} U^B_{nk}
      const Eigen::MatrixXcd amplitude = ua * schmidt.asDiagonal() * ub.transpose();
      slices[pair_slot(i, j)] = amplitude.cwiseAbs2();
    }
  }
  return {dim, std::move(slices)};
}

JointProbabilityTable mix_with_noise(const JointProbabilityTable& table, double noise_fraction) {
  if (!(noise_fraction >= 0.0 && noise_fraction <= 1.0)) throw DomainError("noise fraction must lie in [0, 1]");
  const int d = table.dim().value();
  const double floor = noise_fraction / (static_cast<double>(d) * d);
  std::array<Eigen::MatrixXd, 4> slices;
  for (int i = 1; i <= 2; ++i) {
    for (int j = 1; j <= 2; ++j) {
      slices[pair_slot(i, j)] = ((1.0 - noise_fraction) * table.slice(i, j)).array() + floor;
    }
  }
  return {table.dim(), std::move(slices)};
}

double correlation_q(const JointProbabilityTable& table, int i, int j, KernelVariant variant) {
  const Dimension dim = table.dim();
  const Eigen::MatrixXd& p = table.slice(i, j);
  double acc = 0.0;
  for (int m = 0; m < dim.value(); ++m) {
    for (int n = 0; n < dim.value(); ++n) acc += kernel_f(i, j, m, n, dim, variant) * p(m, n);
  }
  return acc / dim.spin();
}

double bell_value(const JointProbabilityTable& table, KernelVariant variant) {
  double acc = 0.0;
  for (int i = 1; i <= 2; ++i) {
    for (int j = 1; j <= 2; ++j) acc += bell_sign(i, j) * correlation_q(table, i, j, variant);
  }
  return acc;
}

double bell_value(const PureState& state, const MeasurementSettings& settings, KernelVariant variant) {
  return bell_value(joint_probabilities(state, settings), variant);
}

double bell_value_noisy(const PureState& state, const MeasurementSettings& settings, double noise_fraction,
                        KernelVariant variant) {
  return bell_value(mix_with_noise(joint_probabilities(state, settings), noise_fraction), variant);
}

Eigen::MatrixXd coupling_matrix(const MeasurementSettings& settings, KernelVariant variant) {
  const Dimension dim = settings.dim();
  const int d = dim.value();
  const double norm = 1.0 / (dim.spin() * d * d * d);

  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(d, d);
  for (int i = 1; i <= 2; ++i) {
    for (int j = 1; j <= 2; ++j) {
      const Eigen::VectorXd weights = residue_weights(i, j, dim, variant);
      for (int k = 0; k < d; ++k) {
        for (int l = k + 1; l < d; ++l) {
          // C(k - l) = sum_r w_r gamma^{(k-l) r}
          Complex c = 0.0;
          for (int r = 0; r < d; ++r) c += weights(r) * root_of_unity(static_cast<long long>(k - l) * r, d);
          const double contrib =
              bell_sign(i, j) * norm * std::real(std::polar(1.0, settings.pair_difference(k, l, i, j)) * c);
          w(k, l) += contrib;
          w(l, k) += contrib;
        }
      }
    }
  }
  return w;
}

double TCoefficients::operator()(int k, int l) const {
  if (k > l) std::swap(k, l);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    if (pairs[p].first == k && pairs[p].second == l) return t[p];
  }
  throw DomainError("T_kl needs distinct indices in [0, 4)");
}

double TCoefficients::contract(const PureState& state) const {
  if (state.dim().value() != 4) throw DimensionError("T decomposition is defined for d = 4");
  double acc = 0.0;
  for (std::size_t p = 0; p < pairs.size(); ++p) acc += state[pairs[p].first] * state[pairs[p].second] * t[p];
  return acc;
}

TCoefficients t_coefficients(const MeasurementSettings& settings, KernelVariant variant) {
  if (settings.dim().value() != 4) throw DimensionError("T decomposition is defined for d = 4");
  const Eigen::MatrixXd w = coupling_matrix(settings, variant);
  TCoefficients out;
  for (std::size_t p = 0; p < TCoefficients::pairs.size(); ++p) {
    out.t[p] = 2.0 * w(TCoefficients::pairs[p].first, TCoefficients::pairs[p].second);
  }
  return out;
}

TCoefficients printed_t_coefficients(const MeasurementSettings& settings) {
  if (settings.dim().value() != 4) throw DimensionError("T decomposition is defined for d = 4");
  auto c = [&](int a, int b, int i, int j) { return std::cos(settings.pair_difference(a, b, i, j)); };
  auto s = [&](int a, int b, int i, int j) { return std::sin(settings.pair_difference(a, b, i, j)); };
  auto cos_chsh = [&](int a, int b) { return c(a, b, 1, 1) - c(a, b, 2, 1) - c(a, b, 1, 2) + c(a, b, 2, 2); };
  auto cos_even = [&](int a, int b) { return c(a, b, 1, 1) - c(a, b, 2, 1) + c(a, b, 1, 2) + c(a, b, 2, 2); };
  auto sin_all = [&](int a, int b) { return s(a, b, 1, 1) + s(a, b, 2, 1) + s(a, b, 1, 2) + s(a, b, 2, 2); };
  auto sin_mixed = [&](int a, int b) { return s(a, b, 1, 1) - s(a, b, 2, 1) + s(a, b, 1, 2) + s(a, b, 2, 2); };

  TCoefficients out;
  out.t[0] = (cos_chsh(0, 1) - sin_all(0, 1)) / 6.0;
  out.t[1] = -cos_even(0, 2) / 6.0;
  out.t[2] = (cos_chsh(0, 3) + sin_all(0, 3)) / 6.0;
  out.t[3] = (cos_chsh(1, 2) - sin_mixed(1, 2)) / 6.0;
  out.t[4] = -cos_even(1, 3) / 6.0;
  out.t[5] = (cos_chsh(2, 3) - sin_mixed(2, 3)) / 6.0;
  return out;
}

BellEvaluator::BellEvaluator(Dimension dim, KernelVariant variant) : dim_(dim), dft_(dim.value(), dim.value()) {
  const int d = dim.value();
  for (int r = 0; r < d; ++r) {
    for (int k = 0; k < d; ++k) dft_(r, k) = root_of_unity(static_cast<long long>(r) * k, d);
  }
  const double norm = 1.0 / (dim.spin() * d * d * d);
  for (int i = 1; i <= 2; ++i) {
    for (int j = 1; j <= 2; ++j) weight_[pair_slot(i, j)] = bell_sign(i, j) * norm * residue_weights(i, j, dim, variant);
  }
}

double BellEvaluator::value(const Eigen::VectorXd& a, const Eigen::VectorXd& phases) const {
  const int d = dim_.value();
  double acc = 0.0;
  for (int i = 1; i <= 2; ++i) {
    for (int j = 1; j <= 2; ++j) {
      const Eigen::VectorXd theta = phases.segment((i - 1) * d, d) + phases.segment((j + 1) * d, d);
      Eigen::VectorXcd z(d);
      for (int k = 0; k < d; ++k) z(k) = a(k) * std::polar(1.0, theta(k));
      const Eigen::VectorXcd c = dft_ * z;
      acc += weight_[pair_slot(i, j)].dot(c.cwiseAbs2());
    }
  }
  return acc;
}

double BellEvaluator::value_and_gradient(const Eigen::VectorXd& a, const Eigen::VectorXd& phases,
                                         Eigen::VectorXd& gradient) const {
  const int d = dim_.value();
  gradient.setZero(4 * d);
  double acc = 0.0;
  for (int i = 1; i <= 2; ++i) {
    for (int j = 1; j <= 2; ++j) {
      const Eigen::VectorXd& w = weight_[pair_slot(i, j)];
      const Eigen::VectorXd theta = phases.segment((i - 1) * d, d) + phases.segment((j + 1) * d, d);
      Eigen::VectorXcd z(d);
      for (int k = 0; k < d; ++k) z(k) = a(k) * std::polar(1.0, theta(k));
      const Eigen::VectorXcd c = dft_ * z;
      acc += w.dot(c.cwiseAbs2());
      // dI/dtheta_k = -2 Im(z_k * sum_r w_r conj(c_r) gamma^{rk})
      const Eigen::VectorXcd back = dft_.transpose() * (w.cast<Complex>().cwiseProduct(c.conjugate()));
      const Eigen::VectorXd dtheta = -2.0 * z.cwiseProduct(back).imag();
      gradient.segment((i - 1) * d, d) += dtheta;
      gradient.segment((j + 1) * d, d) += dtheta;
    }
  }
  return acc;
}

Eigen::VectorXd bell_gradient(const PureState& state, const MeasurementSettings& settings, KernelVariant variant) {
  require_same_dim(state.dim(), settings.dim());
  Eigen::VectorXd g;
  (void)BellEvaluator(state.dim(), variant).value_and_gradient(state.coeffs(), settings.flat(), g);
  return g;
}

SampleEstimate sample_experiment(const PureState& state, const MeasurementSettings& settings,
                                 std::int64_t shots_per_setting, std::uint64_t seed, KernelVariant variant) {
  if (shots_per_setting < 1) throw DomainError("shots per setting must be >= 1");
  require_same_dim(state.dim(), settings.dim());
  const Dimension dim = state.dim();
  const int d = dim.value();
  const auto table = joint_probabilities(state, settings);
  const double shots = static_cast<double>(shots_per_setting);

  SampleEstimate out{shots_per_setting, {}, 0.0, 0.0};
  double variance = 0.0;
  for (int i = 1; i <= 2; ++i) {
    for (int j = 1; j <= 2; ++j) {
      const int slot = pair_slot(i, j);
      const Eigen::MatrixXd& p = table.slice(i, j);

      // Row-major cumulative distribution over (m, n).
      std::vector<double> cdf(static_cast<std::size_t>(d) * d);
      double run = 0.0;
      for (int m = 0; m < d; ++m) {
        for (int n = 0; n < d; ++n) cdf[static_cast<std::size_t>(m) * d + n] = (run += p(m, n));
      }

      std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                        static_cast<std::uint32_t>(slot)};
      std::mt19937_64 rng(seq);
      CountMatrix counts = CountMatrix::Zero(d, d);
      for (std::int64_t s = 0; s < shots_per_setting; ++s) {
        const double u = unit_uniform(rng) * run;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        auto idx = static_cast<int>(std::min<std::ptrdiff_t>(it - cdf.begin(), static_cast<std::ptrdiff_t>(cdf.size()) - 1));
        ++counts(idx / d, idx % d);
      }

      // Plug-in estimate from empirical frequencies; the variance uses
      // add-one smoothed frequencies so it stays positive when every shot
      // lands on the same kernel value.
      double mean = 0.0, mean_s = 0.0, second_s = 0.0;
      const double smooth_total = shots + static_cast<double>(d) * d;
      for (int m = 0; m < d; ++m) {
        for (int n = 0; n < d; ++n) {
          const double f = kernel_f(i, j, m, n, dim, variant) / dim.spin();
          const double freq = static_cast<double>(counts(m, n)) / shots;
          const double smooth = (static_cast<double>(counts(m, n)) + 1.0) / smooth_total;
          mean += f * freq;
          mean_s += f * smooth;
          second_s += f * f * smooth;
        }
      }
      out.value_estimate += bell_sign(i, j) * mean;
      variance += (second_s - mean_s * mean_s) / shots;
      out.counts[slot] = std::move(counts);
    }
  }
  out.std_error = std::sqrt(variance);
  return out;
}

}  // namespace bellmp
