#include "bellmp/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "bellmp/analytic.hpp"
#include "bellmp/lhv.hpp"
#include "bellmp/quantum.hpp"

namespace bellmp::cli {
namespace {

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (double x : v) out.push_back(round_sig(x));
  return out;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(vector_json(m.row(r).transpose()));
  return out;
}

json counts_json(const CountMatrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

const char* slot_name(int i, int j) {
  static constexpr const char* names[] = {"11", "12", "21", "22"};
  return names[pair_slot(i, j)];
}

std::string fmt_sig(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

json strategy_json(const DeterministicStrategy& s) {
  return {{"A1", s.outcomes[0]}, {"A2", s.outcomes[1]}, {"B1", s.outcomes[2]}, {"B2", s.outcomes[3]}};
}

json witness_json(const VertexWitness& w) {
  json slots = json::array();
  for (const auto& s : w.pattern.slots) slots.push_back(round_sig(s.value()));
  return {{"table", w.pattern.table_id}, {"row", w.pattern.row}, {"slots", slots}, {"assignment", w.assignment}};
}

ReproductionRow make_row(std::string label, double expected, double computed, double tolerance, std::string method,
                         bool gating = true) {
  const bool pass = std::abs(computed - expected) <= tolerance;
  return {std::move(label), expected, computed, tolerance, pass, std::move(method), gating};
}

}  // namespace

double round_sig(double x, int digits) {
  if (!std::isfinite(x) || x == 0.0) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return std::strtod(buf, nullptr);
}

PureState parse_state_spec(const std::string& spec, std::optional<int> d) {
  std::vector<double> values;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ValidationError("state spec: cannot parse '" + item + "' as a number");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos) {
      throw ValidationError("state spec: trailing characters in '" + item + "'");
    }
    values.push_back(v);
  }
  if (values.size() < 2) throw ValidationError("state spec needs at least two comma-separated coefficients");
  if (d && static_cast<int>(values.size()) != *d) {
    throw ValidationError("state spec has " + std::to_string(values.size()) + " coefficients but --d is " +
                          std::to_string(*d));
  }
  return make_state(Dimension(static_cast<int>(values.size())), values);
}

MeasurementSettings angles_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("angle file must contain a JSON object");
  if (!j.contains("d") || !j["d"].is_number_integer()) throw ValidationError("angle file: integer field 'd' required");
  const int d = j["d"].get<int>();
  if (d < 2) throw ValidationError("angle file: d must be >= 2");
  const Dimension dim(d);
  auto vec = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_array()) throw ValidationError(std::string("angle file: array '") + key + "' required");
    const auto& arr = j[key];
    if (static_cast<int>(arr.size()) != d) {
      throw ValidationError(std::string("angle file: '") + key + "' must have d = " + std::to_string(d) + " entries");
    }
    Eigen::VectorXd v(d);
    for (int k = 0; k < d; ++k) {
      if (!arr[static_cast<std::size_t>(k)].is_number()) throw ValidationError(std::string("angle file: '") + key + "' must hold numbers");
      v(k) = arr[static_cast<std::size_t>(k)].get<double>();
    }
    return PhaseVector(dim, v);
  };
  return {vec("A1"), vec("A2"), vec("B1"), vec("B2")};
}

MeasurementSettings read_angle_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open angle file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError("angle file '" + path + "' is not valid JSON: " + e.what());
  }
  return angles_from_json(j);
}

json angles_to_json(const MeasurementSettings& s) {
  return {{"d", s.dim().value()},
          {"A1", vector_json(s.alice(1).phases())},
          {"A2", vector_json(s.alice(2).phases())},
          {"B1", vector_json(s.bob(1).phases())},
          {"B2", vector_json(s.bob(2).phases())}};
}

json cmd_eval(const PureState& state, const MeasurementSettings& settings, std::optional<double> noise,
              KernelVariant variant) {
  if (!(state.dim() == settings.dim())) {
    throw ValidationError("state has d = " + std::to_string(state.dim().value()) + " but angles have d = " +
                          std::to_string(settings.dim().value()));
  }
  const auto pure = joint_probabilities(state, settings);
  const auto table = noise ? mix_with_noise(pure, *noise) : pure;

  json out;
  out["d"] = state.dim().value();
  out["variant"] = to_string(variant);
  out["state"] = vector_json(state.coeffs());
  if (noise) out["noise"] = round_sig(*noise);
  out["I"] = round_sig(bell_value(table, variant));
  json probs;
  for (int i = 1; i <= 2; ++i) {
    for (int j = 1; j <= 2; ++j) {
      out[std::string("Q") + slot_name(i, j)] = round_sig(correlation_q(table, i, j, variant));
      probs[slot_name(i, j)] = matrix_json(table.slice(i, j));
    }
  }
  out["probabilities"] = probs;
  const double pure_value = bell_value(pure, variant);
  if (pure_value > 2.0) out["F_thr"] = round_sig(threshold_noise(pure_value));
  return out;
}

json cmd_lhv(int d, KernelVariant variant) {
  if (d < 2 || d > kMaxEnumerableDimension) {
    throw ValidationError("lhv: d must lie in [2, " + std::to_string(kMaxEnumerableDimension) + "]");
  }
  const Dimension dim(d);
  const auto r = lhv_bounds(dim, variant);
  return {{"d", d},
          {"variant", to_string(variant)},
          {"max", to_string(r.max_value)},
          {"min", to_string(r.min_value)},
          {"argmax", strategy_json(r.argmax)},
          {"argmin", strategy_json(r.argmin)},
          {"strategies_scanned", r.strategies_scanned},
          {"lower_bound_formula", to_string(lhv_lower_bound_formula(dim))}};
}

json cmd_optimize(int d, const std::optional<PureState>& state, const OptimizerConfig& config) {
  OptimizationRun run = [&] {
    if (config.free_state) return optimize_joint(Dimension(d), config);
    if (!state) throw ValidationError("optimize: --state is required unless --free-state is given");
    if (state->dim().value() != d) throw ValidationError("optimize: --state length does not match --d");
    return optimize_angles(*state, config);
  }();

  json out = angles_to_json(*run.best.settings);
  out["value"] = round_sig(run.best.value);
  out["state"] = vector_json(run.best.state.coeffs());
  out["direction"] = config.direction == Direction::Maximize ? "max" : "min";
  out["variant"] = to_string(config.variant);
  out["free_state"] = config.free_state;
  out["restarts"] = config.restarts;
  out["seed"] = config.seed;
  out["converged"] = run.converged;
  out["iterations_used"] = run.iterations_used;
  out["diagnostics"] = run.best.diagnostics;
  if (run.best.value > 2.0) out["F_thr"] = round_sig(threshold_noise(run.best.value));
  if (d == 4) {
    const auto v = vertex_candidates(run.best.state);
    const auto bmax = branch_values_max(run.best.state);
    const auto bmin = branch_values_min(run.best.state);
    out["analytic"] = {{"vertex_max", round_sig(v.max)},
                       {"vertex_min", round_sig(v.min)},
                       {"branch_max", round_sig(bmax.max)},
                       {"branch_min", round_sig(bmin.min)}};
  }
  return out;
}

json cmd_analytic(const PureState& state) {
  if (state.dim().value() != 4) throw ValidationError("analytic: closed forms exist for d = 4 only");
  const auto g = gamma_constants<double>();
  const auto sorted = sort_magnitudes(state);
  const auto bmax = branch_values_max(state);
  const auto bmin = branch_values_min(state);
  const auto v = vertex_candidates(state);
  const auto omax = optimal_max_state();
  const auto omin = optimal_min_state();

  json out;
  out["gamma"] = {round_sig(g.gamma1), round_sig(g.gamma2), round_sig(g.gamma3)};
  out["state"] = vector_json(state.coeffs());
  out["sorted_magnitudes"] = {round_sig(sorted.values[0]), round_sig(sorted.values[1]), round_sig(sorted.values[2]),
                              round_sig(sorted.values[3])};
  out["B1"] = round_sig(bmax.b1);
  out["B2"] = round_sig(bmax.b2);
  out["Imax"] = round_sig(bmax.max);
  out["S1"] = round_sig(bmin.s1);
  out["S2"] = round_sig(bmin.s2);
  out["Imin"] = round_sig(bmin.min);
  if (bmax.max > 0.0) out["Fthr"] = round_sig(threshold_noise(bmax.max));
  out["vertex"] = {{"max", round_sig(v.max)},
                   {"min", round_sig(v.min)},
                   {"max_witness", witness_json(v.max_witness)},
                   {"min_witness", witness_json(v.min_witness)}};
  out["optimal_max_state"] = {{"plus", round_sig(omax.plus)},
                              {"minus", round_sig(omax.minus)},
                              {"value", round_sig(omax.value)},
                              {"Fthr", round_sig(threshold_noise(omax.value))}};
  out["optimal_min_state"] = {{"plus", round_sig(omin.plus)}, {"minus", round_sig(omin.minus)}, {"value", round_sig(omin.value)}};
  return out;
}

ReproductionReport cmd_reproduce(const ReproduceOptions& options) {
  ReproductionReport report;
  auto& rows = report.rows;
  const Dimension d2(2), d3(3), d4(4);
  const auto g = gamma_constants<double>();
  const auto me4 = PureState::maximally_entangled(d4);

  rows.push_back(make_row("Gamma1", 0.87104, g.gamma1, 1e-5, "radical expression"));
  rows.push_back(make_row("Gamma2", 0.4714, g.gamma2, 1e-4, "radical expression"));
  rows.push_back(make_row("Gamma3", 0.3608, g.gamma3, 1e-4, "radical expression"));

  auto exact_row = [&](std::string label, const Rational& expected, const Rational& computed) {
    ReproductionRow row{std::move(label), boost::rational_cast<double>(expected), boost::rational_cast<double>(computed),
                        0.0, expected == computed, "exhaustive strategy enumeration (exact rationals)"};
    rows.push_back(row);
  };
  const auto lhv4 = lhv_bounds(d4);
  const auto lhv3 = lhv_bounds(d3);
  const auto lhv2 = lhv_bounds(d2);
  exact_row("LHV max d=4", Rational(2), lhv4.max_value);
  exact_row("LHV min d=4", Rational(-10, 3), lhv4.min_value);
  exact_row("LHV max d=3", Rational(2), lhv3.max_value);
  exact_row("LHV min d=3", Rational(-4), lhv3.min_value);
  exact_row("LHV max d=2", Rational(2), lhv2.max_value);
  exact_row("LHV min d=2", Rational(-2), lhv2.min_value);

  OptimizerConfig cfg;
  cfg.restarts = options.restarts;
  cfg.seed = options.seed;
  cfg.threads = options.threads;

  const double me_max = branch_values_max(me4).max;
  rows.push_back(make_row("max-entangled max (closed form)", 2.89624, me_max, 1e-5, "branch formula B1"));
  rows.push_back(make_row("max-entangled max (optimizer)", 2.89624, optimize_angles(me4, cfg).best.value, 1e-4,
                          "multi-start angle optimization"));
  rows.push_back(make_row("max-entangled F_thr", 0.30945, threshold_noise(me_max), 1e-5, "1 - 2/I"));

  cfg.direction = Direction::Minimize;
  rows.push_back(make_row("max-entangled min (closed form)", -10.0 / 3.0, branch_values_min(me4).min, 1e-12,
                          "branch formula S2"));
  rows.push_back(make_row("max-entangled min (optimizer)", -10.0 / 3.0, optimize_angles(me4, cfg).best.value, 1e-6,
                          "multi-start angle optimization"));
  rows.push_back(make_row("max-entangled min d=3 (optimizer)", -4.0,
                          optimize_angles(PureState::maximally_entangled(d3), cfg).best.value, 1e-5,
                          "multi-start angle optimization"));

  const auto omax = optimal_max_state();
  const auto omin = optimal_min_state();
  OptimizerConfig joint = cfg;
  joint.free_state = true;
  joint.direction = Direction::Maximize;
  const auto jmax = optimize_joint(d4, joint);
  joint.direction = Direction::Minimize;
  const auto jmin = optimize_joint(d4, joint);

  rows.push_back(make_row("global max (closed form)", 2.9727, omax.value, 1e-4, "optimal (x,x,y,y) state"));
  rows.push_back(make_row("global max (optimizer)", 2.9727, jmax.best.value, 1e-3, "joint state/angle optimization"));
  rows.push_back(make_row("global F_thr", 0.3272, threshold_noise(omax.value), 1e-4, "1 - 2/I"));
  rows.push_back(make_row("global min (closed form)", -3.46424, omin.value, 1e-5, "optimal (x,x,y,y) state"));
  rows.push_back(make_row("global min (optimizer)", -3.46424, jmin.best.value, 1e-3, "joint state/angle optimization"));

  const double gain = (threshold_noise(omax.value) - threshold_noise(me_max)) / threshold_noise(me_max);
  rows.push_back(make_row("noise-resistance gain over max-entangled", 0.057, gain, 0.01, "ratio of thresholds"));

  OptimizerConfig tcfg = cfg;
  tcfg.direction = Direction::Maximize;
  rows.push_back(make_row("max T_01 over settings", 0.87104, extremize_pair_coefficient(d4, 0, 1, tcfg).best.value,
                          1e-5, "multi-start optimization of one pair coefficient"));
  rows.push_back(make_row("max T_02 over settings", 0.4714, extremize_pair_coefficient(d4, 0, 2, tcfg).best.value,
                          1e-4, "multi-start optimization of one pair coefficient"));

  // Non-gating diagnostics.
  const double reference_angles_value = bell_value(omax.state, reference_optimal_angles());
  rows.push_back(make_row("reference optimal angles at (A+,A+,A-,A-)", 2.9727, reference_angles_value, 1e-3,
                          "direct evaluation", false));
  const auto printed = printed_t_coefficients(MeasurementSettings::zero(d4));
  double printed_sum = 0.0;
  for (double t : printed.t) printed_sum += t;
  rows.push_back(make_row("printed T closed forms, sum at zero phases", 2.0, printed_sum, 1e-10,
                          "printed formulas vs direct Bell value", false));

  std::mt19937_64 rng(options.seed);
  int mismatches = 0;
  double worst = 0.0;
  constexpr int kRandomStates = 1000;
  for (int s = 0; s < kRandomStates; ++s) {
    std::vector<double> c(4);
    for (auto& x : c) x = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    c[0] += 1e-3;
    const auto state = make_state(d4, c);
    const auto v = vertex_candidates(state);
    const double dev = std::max(std::abs(v.max - branch_values_max(state).max),
                                std::abs(v.min - branch_values_min(state).min));
    worst = std::max(worst, dev);
    if (dev > 1e-12) ++mismatches;
  }
  rows.push_back(make_row("closed forms vs vertex enumeration, random states with mismatch", 0.0, mismatches, 0.0,
                          "24 patterns x 24 assignments", false));

  report.overall_pass = true;
  for (const auto& r : rows) {
    if (r.gating) report.overall_pass = report.overall_pass && r.pass;
  }

  report.diagnostics.push_back("reference optimal angles evaluate to " + fmt_sig(reference_angles_value) +
                               " under the 0-based multiport convention (joint optimizer reaches " +
                               fmt_sig(jmax.best.value) + ")");
  std::ostringstream t;
  t << "printed T closed forms at zero phases:";
  for (double x : printed.t) t << ' ' << fmt_sig(x);
  t << "; derived T at zero phases:";
  for (double x : t_coefficients(MeasurementSettings::zero(d4)).t) t << ' ' << fmt_sig(x);
  report.diagnostics.push_back(t.str());
  report.diagnostics.push_back("vertex table 2 row 4 is evaluated with [bc] = +G1; the printed -G1 is not a sign "
                               "flip of the table's first row");
  report.diagnostics.push_back("branch formulas disagree with vertex enumeration on " + std::to_string(mismatches) +
                               " of " + std::to_string(kRandomStates) + " random states (largest gap " +
                               fmt_sig(worst) + "); they agree on the (x,x,y,y) family");
  return report;
}

json to_json(const ReproductionReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"label", r.label},
                    {"expected", round_sig(r.expected)},
                    {"computed", round_sig(r.computed)},
                    {"tolerance", r.tolerance},
                    {"pass", r.pass},
                    {"gating", r.gating},
                    {"method", r.method}});
  }
  return {{"rows", rows}, {"overall_pass", report.overall_pass}, {"diagnostics", report.diagnostics}};
}

void print_report(const ReproductionReport& report, std::ostream& os) {
  os << std::left << std::setw(64) << "quantity" << std::setw(16) << "expected" << std::setw(20) << "computed"
     << std::setw(10) << "tol" << "status\n";
  for (const auto& r : report.rows) {
    const char* status = r.pass ? "PASS" : (r.gating ? "FAIL" : "DIFF");
    os << std::left << std::setw(64) << r.label << std::setw(16) << fmt_sig(r.expected) << std::setw(20)
       << fmt_sig(r.computed) << std::setw(10) << fmt_sig(r.tolerance) << status << (r.gating ? "" : " (diagnostic)")
       << '\n';
  }
  for (const auto& d : report.diagnostics) os << "note: " << d << '\n';
  os << (report.overall_pass ? "overall: PASS" : "overall: FAIL") << '\n';
}

void validate(const ScanSpec& spec) {
  if (spec.family != "step") throw ValidationError("scan: unknown family '" + spec.family + "' (expected step)");
  if (spec.steps < 2) throw ValidationError("scan: steps must be >= 2");
  if (!(spec.r_from < spec.r_to)) throw ValidationError("scan: need r_from < r_to");
  if (!std::isfinite(spec.r_from) || !std::isfinite(spec.r_to)) throw ValidationError("scan: range must be finite");
}

void cmd_scan(const ScanSpec& spec, std::ostream& os) {
  validate(spec);
  const Dimension d4(4);
  os << kScanHeader << '\n';
  for (int s = 0; s < spec.steps; ++s) {
    const double r = s + 1 == spec.steps ? spec.r_to : spec.r_from + (spec.r_to - spec.r_from) * s / (spec.steps - 1);
    const auto state = make_state(d4, std::vector<double>{1.0, 1.0, r, r});
    const auto bmax = branch_values_max(state);
    const auto bmin = branch_values_min(state);
    os << fmt_sig(r) << ',' << fmt_sig(bmax.b1) << ',' << fmt_sig(bmax.b2) << ',' << fmt_sig(bmax.max) << ','
       << fmt_sig(bmin.s1) << ',' << fmt_sig(bmin.s2) << ',' << fmt_sig(bmin.min) << ','
       << fmt_sig(threshold_noise(bmax.max)) << '\n';
  }
}

json cmd_sample(const PureState& state, const MeasurementSettings& settings, std::int64_t shots, std::uint64_t seed,
                KernelVariant variant) {
  if (shots < 1) throw ValidationError("sample: --shots must be >= 1");
  if (!(state.dim() == settings.dim())) throw ValidationError("sample: state and angle dimensions differ");
  const auto est = sample_experiment(state, settings, shots, seed, variant);
  json counts;
  for (int i = 1; i <= 2; ++i) {
    for (int j = 1; j <= 2; ++j) counts[slot_name(i, j)] = counts_json(est.counts[static_cast<std::size_t>(pair_slot(i, j))]);
  }
  return {{"d", state.dim().value()},
          {"variant", to_string(variant)},
          {"shots_per_setting", shots},
          {"seed", seed},
          {"counts", counts},
          {"estimate", round_sig(est.value_estimate)},
          {"std_error", round_sig(est.std_error)},
          {"exact", round_sig(bell_value(state, settings, variant))}};
}

}  // namespace bellmp::cli
