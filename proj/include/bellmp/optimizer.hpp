#ifndef BELLMP_OPTIMIZER_HPP
#define BELLMP_OPTIMIZER_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "bellmp/analytic.hpp"
#include "bellmp/core.hpp"
#include "bellmp/quantum.hpp"

namespace bellmp {

enum class Direction { Maximize, Minimize };

[[nodiscard]] Direction parse_direction(const std::string& s);

struct OptimizerConfig {
  int restarts = 50;
  int max_iterations = 10000;  ///< Per local search.
  double gradient_tolerance = 1e-9;
  std::uint64_t seed = 0;
  Direction direction = Direction::Maximize;
  bool free_state = false;
  KernelVariant variant = KernelVariant::Plus;
  int threads = 0;  ///< 0: BELL_THREADS or hardware concurrency.
};

/// Throws DomainError on restarts < 1, max_iterations < 1 or a non-positive tolerance.
void validate(const OptimizerConfig& config);

struct OptimizationRun {
  ExtremalResult best;
  std::vector<double> per_restart_values;
  long long iterations_used;  ///< Summed over restarts.
  bool converged;             ///< Of the best restart.
};

/// Result of one local search.
struct LocalSearch {
  Eigen::VectorXd phases;  ///< Flat A1, A2, B1, B2 with phi_0 = 0 in each block.
  double value;
  double gradient_norm;  ///< Over the free (non-pinned) phases.
  int iterations;
  bool converged;
};

/// Quasi-Newton (BFGS, backtracking line search) ascent or descent of the Bell
/// value over the phases at fixed coefficients `a`, starting from `phases`.
/// Each phase vector is first shifted so its phi_0 is zero; phi_0 stays pinned.
[[nodiscard]] LocalSearch local_angle_search(const BellEvaluator& evaluator, const Eigen::VectorXd& a,
                                             Eigen::VectorXd phases, Direction direction, int max_iterations,
                                             double gradient_tolerance);

/// Multi-start angle optimization at a fixed state.  Restart r draws its
/// initial phases uniformly from [0, 2pi) with a generator seeded by (seed, r),
/// so results do not depend on thread count.
[[nodiscard]] OptimizationRun optimize_angles(const PureState& state, const OptimizerConfig& config);

/// Alternates angle searches with an exact state update: at fixed angles
/// I = a^T W a, so the optimal state on sum a^2 = d is sqrt(d) times the
/// extreme eigenvector of W.  Negative coefficients are flipped and the sign
/// moved into Alice's phases, so the reported state has a_i >= 0.
[[nodiscard]] OptimizationRun optimize_joint(Dimension dim, const OptimizerConfig& config);

/// Extremum over all settings of the single pair coefficient W_kl + W_lk
/// (T_kl at d = 4), found by optimizing the Bell value of the unnormalized
/// coefficient vector e_k + e_l.
[[nodiscard]] OptimizationRun extremize_pair_coefficient(Dimension dim, int k, int l, const OptimizerConfig& config);

}  // namespace bellmp

#endif  // BELLMP_OPTIMIZER_HPP
