#include "bellmp/optimizer.hpp"

#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "bellmp/parallel.hpp"

namespace bellmp {
namespace {

constexpr int kMaxOuterRounds = 5000;
constexpr double kOuterImprovementTolerance = 1e-13;
constexpr double kArmijo = 1e-4;

double sign_of(Direction dir) { return dir == Direction::Maximize ? 1.0 : -1.0; }

bool better(double candidate, double incumbent, Direction dir) {
  return dir == Direction::Maximize ? candidate > incumbent : candidate < incumbent;
}

std::mt19937_64 restart_rng(std::uint64_t seed, int restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart), 0x9e3779b9u};
  return std::mt19937_64(seq);
}

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Eigen::VectorXd random_phases(std::mt19937_64& rng, int count) {
  Eigen::VectorXd out(count);
  for (int k = 0; k < count; ++k) out(k) = 2.0 * std::numbers::pi * unit_uniform(rng);
  return out;
}

void pin_gauge(Eigen::VectorXd& phases, int d) {
  for (int b = 0; b < 4; ++b) phases.segment(b * d, d).array() -= phases(b * d);
}

// Wraps to [-pi, pi).
void wrap_phases(Eigen::VectorXd& phases) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  for (auto& p : phases) p -= two_pi * std::floor((p + std::numbers::pi) / two_pi);
}

// Free phases are entries 1..d-1 of each block.
Eigen::VectorXd gather_free(const Eigen::VectorXd& full, int d) {
  Eigen::VectorXd out(4 * (d - 1));
  for (int b = 0; b < 4; ++b) out.segment(b * (d - 1), d - 1) = full.segment(b * d + 1, d - 1);
  return out;
}

Eigen::VectorXd scatter_free(const Eigen::VectorXd& free, int d) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(4 * d);
  for (int b = 0; b < 4; ++b) out.segment(b * d + 1, d - 1) = free.segment(b * (d - 1), d - 1);
  return out;
}

std::string describe_restart(int index, const LocalSearch& ls) {
  std::ostringstream os;
  os << "restart " << index << ": " << ls.iterations << " iterations, gradient norm " << ls.gradient_norm
     << (ls.converged ? " (converged)" : " (not converged)");
  return os.str();
}

}  // namespace

Direction parse_direction(const std::string& s) {
  if (s == "max" || s == "maximize") return Direction::Maximize;
  if (s == "min" || s == "minimize") return Direction::Minimize;
  throw DomainError("unknown direction '" + s + "' (expected max|min)");
}

void validate(const OptimizerConfig& config) {
  if (config.restarts < 1) throw DomainError("restarts must be >= 1");
  if (config.max_iterations < 1) throw DomainError("max_iterations must be >= 1");
  if (!(config.gradient_tolerance > 0.0)) throw DomainError("gradient_tolerance must be positive");
}

LocalSearch local_angle_search(const BellEvaluator& evaluator, const Eigen::VectorXd& a, Eigen::VectorXd phases,
                               Direction direction, int max_iterations, double gradient_tolerance) {
  const int d = evaluator.dim().value();
  if (a.size() != d || phases.size() != 4 * d) throw DimensionError("local search input has the wrong size");
  pin_gauge(phases, d);
  const double sgn = sign_of(direction);
  const int n = 4 * (d - 1);

  Eigen::VectorXd full_grad;
  // Minimizes h = -sgn * I over the free phases.
  auto objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
    const double value = evaluator.value_and_gradient(a, scatter_free(x, d), full_grad);
    grad = -sgn * gather_free(full_grad, d);
    return -sgn * value;
  };

  Eigen::VectorXd x = gather_free(phases, d);
  Eigen::VectorXd g;
  double h = objective(x, g);
  Eigen::MatrixXd inv_hessian = Eigen::MatrixXd::Identity(n, n);
  bool fresh_hessian = true;
  bool converged = false;
  int iter = 0;

  Eigen::VectorXd x_new, g_new;
  while (iter < max_iterations) {
    if (g.norm() <= gradient_tolerance) {
      converged = true;
      break;
    }
    Eigen::VectorXd p = -inv_hessian * g;
    double slope = g.dot(p);
    if (!(slope < 0.0)) {
      inv_hessian.setIdentity();
      fresh_hessian = true;
      p = -g;
      slope = -g.squaredNorm();
    }

    // Backtracking with a round-off allowance so the search can keep reducing
    // the gradient once value changes drop below machine precision.
    const double noise = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(h));
    double t = 1.0;
    double h_new = 0.0;
    bool accepted = false;
    while (t > 1e-16) {
      x_new = x + t * p;
      h_new = objective(x_new, g_new);
      if (h_new <= h + kArmijo * t * slope + noise) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    ++iter;
    if (!accepted) {
      if (fresh_hessian) break;  // Steepest descent failed too: stalled.
      inv_hessian.setIdentity();
      fresh_hessian = true;
      continue;
    }

    const Eigen::VectorXd s = x_new - x;
    const Eigen::VectorXd y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-16 * s.norm() * y.norm() && sy > 0.0) {
      if (fresh_hessian) inv_hessian *= sy / y.squaredNorm();
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd left = Eigen::MatrixXd::Identity(n, n) - rho * s * y.transpose();
      inv_hessian = left * inv_hessian * left.transpose() + rho * s * s.transpose();
      fresh_hessian = false;
    }
    x = x_new;
    g = g_new;
    h = h_new;
  }
  if (!converged && g.norm() <= gradient_tolerance) converged = true;

  Eigen::VectorXd out = scatter_free(x, d);
  wrap_phases(out);
  return {out, -sgn * h, g.norm(), iter, converged};
}

OptimizationRun optimize_angles(const PureState& state, const OptimizerConfig& config) {
  validate(config);
  if (config.free_state) throw DomainError("optimize_angles needs free_state = false");
  const Dimension dim = state.dim();
  const int d = dim.value();
  const BellEvaluator evaluator(dim, config.variant);

  std::vector<LocalSearch> runs(static_cast<std::size_t>(config.restarts));
  parallel_for(config.restarts, thread_count(config.threads), [&](int r) {
    auto rng = restart_rng(config.seed, r);
    runs[static_cast<std::size_t>(r)] = local_angle_search(evaluator, state.coeffs(), random_phases(rng, 4 * d),
                                                           config.direction, config.max_iterations,
                                                           config.gradient_tolerance);
  });

  OptimizationRun out{{0.0, state, std::nullopt, "numeric", {}}, {}, 0, false};
  std::size_t best = 0;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    out.per_restart_values.push_back(runs[r].value);
    out.iterations_used += runs[r].iterations;
    if (r > 0 && better(runs[r].value, runs[best].value, config.direction)) best = r;
  }
  out.best.value = runs[best].value;
  out.best.settings = MeasurementSettings::from_flat(dim, runs[best].phases);
  out.best.diagnostics.push_back(describe_restart(static_cast<int>(best), runs[best]));
  out.converged = runs[best].converged;
  return out;
}

OptimizationRun extremize_pair_coefficient(Dimension dim, int k, int l, const OptimizerConfig& config) {
  validate(config);
  const int d = dim.value();
  if (k < 0 || l < 0 || k >= d || l >= d || k == l) throw DomainError("pair indices must be distinct and in [0, d)");
  const BellEvaluator evaluator(dim, config.variant);
  Eigen::VectorXd a = Eigen::VectorXd::Zero(d);
  a(k) = 1.0;
  a(l) = 1.0;

  std::vector<LocalSearch> runs(static_cast<std::size_t>(config.restarts));
  parallel_for(config.restarts, thread_count(config.threads), [&](int r) {
    auto rng = restart_rng(config.seed, r);
    runs[static_cast<std::size_t>(r)] = local_angle_search(evaluator, a, random_phases(rng, 4 * d), config.direction,
                                                           config.max_iterations, config.gradient_tolerance);
  });
  std::size_t best = 0;
  OptimizationRun out{{0.0, make_state(dim, a), std::nullopt, "numeric", {}}, {}, 0, false};
  for (std::size_t r = 0; r < runs.size(); ++r) {
    out.per_restart_values.push_back(runs[r].value);
    out.iterations_used += runs[r].iterations;
    if (r > 0 && better(runs[r].value, runs[best].value, config.direction)) best = r;
  }
  out.best.value = runs[best].value;
  out.best.settings = MeasurementSettings::from_flat(dim, runs[best].phases);
  out.best.diagnostics.push_back("pair coefficient (" + std::to_string(k) + "," + std::to_string(l) +
                                 "); state field holds the normalized probe e_k + e_l");
  out.converged = runs[best].converged;
  return out;
}

OptimizationRun optimize_joint(Dimension dim, const OptimizerConfig& config) {
  validate(config);
  if (!config.free_state) throw DomainError("optimize_joint needs free_state = true");
  const int d = dim.value();
  const BellEvaluator evaluator(dim, config.variant);
  const double sgn = sign_of(config.direction);

  struct RestartResult {
    Eigen::VectorXd a;
    LocalSearch search;
    int rounds = 0;
    long long iterations = 0;
  };
  std::vector<RestartResult> runs(static_cast<std::size_t>(config.restarts));

  parallel_for(config.restarts, thread_count(config.threads), [&](int r) {
    auto rng = restart_rng(config.seed, r);
    Eigen::VectorXd a(d);
    for (int k = 0; k < d; ++k) a(k) = 0.1 + unit_uniform(rng);
    a *= std::sqrt(static_cast<double>(d)) / a.norm();
    Eigen::VectorXd phases = random_phases(rng, 4 * d);

    RestartResult res;
    int round = 0;
    for (; round < kMaxOuterRounds; ++round) {
      LocalSearch ls = local_angle_search(evaluator, a, phases, config.direction, config.max_iterations,
                                          config.gradient_tolerance);
      res.iterations += ls.iterations;
      phases = ls.phases;

      // Exact state update at fixed angles.
      const Eigen::MatrixXd w = coupling_matrix(MeasurementSettings::from_flat(dim, phases), config.variant);
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(w);
      const Eigen::Index pick = config.direction == Direction::Maximize ? d - 1 : 0;
      const double updated = d * eig.eigenvalues()(pick);
      if (sgn * (updated - ls.value) <= kOuterImprovementTolerance) break;

      a = eig.eigenvectors().col(pick) * std::sqrt(static_cast<double>(d));
      for (int k = 0; k < d; ++k) {
        if (a(k) < 0.0) {
          a(k) = -a(k);
          phases(k) += std::numbers::pi;
          phases(d + k) += std::numbers::pi;
        }
      }
    }
    res.search = local_angle_search(evaluator, a, phases, config.direction, config.max_iterations,
                                    config.gradient_tolerance);
    res.iterations += res.search.iterations;
    res.rounds = round;
    res.a = a;
    runs[static_cast<std::size_t>(r)] = std::move(res);
  });

  std::size_t best = 0;
  std::vector<double> values;
  long long iterations = 0;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    values.push_back(runs[r].search.value);
    iterations += runs[r].iterations;
    if (r > 0 && better(runs[r].search.value, runs[best].search.value, config.direction)) best = r;
  }
  const auto& winner = runs[best];
  OptimizationRun out{{winner.search.value, make_state(dim, winner.a),
                       MeasurementSettings::from_flat(dim, winner.search.phases), "numeric", {}},
                      std::move(values), iterations, winner.search.converged};
  out.best.diagnostics.push_back(describe_restart(static_cast<int>(best), winner.search));
  out.best.diagnostics.push_back("alternating rounds: " + std::to_string(winner.rounds));
  return out;
}

}  // namespace bellmp
