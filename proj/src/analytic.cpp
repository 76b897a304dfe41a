#include "bellmp/analytic.hpp"

#include <numbers>
#include <numeric>

namespace bellmp {
namespace {

constexpr SignedMagnitude P(VertexMagnitude m) { return {+1, m}; }
constexpr SignedMagnitude N(VertexMagnitude m) { return {-1, m}; }

constexpr auto G1 = VertexMagnitude::Gamma1;
constexpr auto G2 = VertexMagnitude::Gamma2;
constexpr auto G3 = VertexMagnitude::Gamma3;
constexpr auto TT = VertexMagnitude::TwoThirds;
constexpr auto OT = VertexMagnitude::OneThird;

std::vector<VertexPattern> build_printed_tables() {
  using Row = std::array<SignedMagnitude, 6>;
  const std::array<Row, 8> t1{{
      {P(G1), P(G2), P(G3), P(G3), P(G2), P(G3)},
      {N(G1), N(G2), N(G3), P(G3), P(G2), P(G3)},
      {N(G1), P(G2), P(G3), N(G3), N(G2), P(G3)},
      {P(G1), N(G2), P(G3), N(G3), P(G2), N(G3)},
      {P(G1), P(G2), N(G3), P(G3), N(G2), N(G3)},
      {P(G1), N(G2), N(G3), N(G3), N(G2), P(G3)},
      {N(G1), P(G2), N(G3), N(G3), P(G2), N(G3)},
      {N(G1), N(G2), P(G3), P(G3), N(G2), N(G3)},
  }};
  const std::array<Row, 8> t2{{
      {N(G1), N(G2), N(G1), N(G1), N(G2), P(G3)},
      {P(G1), P(G2), P(G1), N(G1), N(G2), P(G3)},
      {P(G1), N(G2), N(G1), P(G1), P(G2), P(G3)},
      {N(G1), P(G2), N(G1), N(G1), N(G2), N(G3)},
      {N(G1), N(G2), P(G1), N(G1), P(G2), N(G3)},
      {N(G1), P(G2), P(G1), P(G1), P(G2), P(G3)},
      {P(G1), N(G2), P(G1), P(G1), N(G2), N(G3)},
      {P(G1), P(G2), N(G1), N(G1), P(G2), N(G3)},
  }};
  const std::array<Row, 8> t3{{
      {N(TT), N(OT), N(TT), N(TT), N(OT), N(TT)},
      {P(TT), P(OT), P(TT), N(TT), N(OT), N(TT)},
      {P(TT), N(OT), N(TT), P(TT), P(OT), N(TT)},
      {N(TT), P(OT), N(TT), P(TT), N(OT), P(TT)},
      {N(TT), N(OT), P(TT), N(TT), P(OT), P(TT)},
      {N(TT), P(OT), P(TT), P(TT), P(OT), N(TT)},
      {P(TT), N(OT), P(TT), P(TT), N(OT), P(TT)},
      {P(TT), P(OT), N(TT), N(TT), P(OT), P(TT)},
  }};

  std::vector<VertexPattern> out;
  out.reserve(24);
  int id = 1;
  for (const auto* table : {&t1, &t2, &t3}) {
    for (int r = 0; r < 8; ++r) out.push_back({id, r + 1, (*table)[static_cast<std::size_t>(r)]});
    ++id;
  }
  return out;
}

std::vector<VertexPattern> build_corrected_tables() {
  auto out = build_printed_tables();
  // Table 2 row 4: slot [bc] (index 3).
  out[8 + 3].slots[3] = P(G1);
  return out;
}

void require_d4(const PureState& state) {
  if (state.dim().value() != 4) throw DimensionError("closed-form extrema are defined for d = 4");
}

}  // namespace

double SignedMagnitude::value() const {
  static const auto g = gamma_constants<double>();
  double v = 0.0;
  switch (magnitude) {
    case VertexMagnitude::Gamma1: v = g.gamma1; break;
    case VertexMagnitude::Gamma2: v = g.gamma2; break;
    case VertexMagnitude::Gamma3: v = g.gamma3; break;
    case VertexMagnitude::TwoThirds: v = 2.0 / 3.0; break;
    case VertexMagnitude::OneThird: v = 1.0 / 3.0; break;
  }
  return sign * v;
}

const std::vector<VertexPattern>& printed_vertex_tables() {
  static const std::vector<VertexPattern> tables = build_printed_tables();
  return tables;
}

const std::vector<VertexPattern>& vertex_tables() {
  static const std::vector<VertexPattern> tables = build_corrected_tables();
  return tables;
}

SortedMagnitudes sort_magnitudes(const PureState& state) {
  require_d4(state);
  SortedMagnitudes out{};
  std::iota(out.perm.begin(), out.perm.end(), 0);
  std::stable_sort(out.perm.begin(), out.perm.end(),
                   [&](int x, int y) { return std::abs(state[x]) > std::abs(state[y]); });
  for (int s = 0; s < 4; ++s) out.values[static_cast<std::size_t>(s)] = std::abs(state[out.perm[static_cast<std::size_t>(s)]]);
  return out;
}

BranchMax<double> branch_values_max(const PureState& state) {
  return branch_values_max(sort_magnitudes(state).values);
}

BranchMin<double> branch_values_min(const PureState& state) {
  return branch_values_min(sort_magnitudes(state).values);
}

OptimalState optimal_max_state() {
  const double r2 = std::numbers::sqrt2;
  const double root = std::sqrt(10.0 - r2);
  const double inner = std::sqrt((357.0 + 7.0 * r2 - 20.0 * root - 58.0 * std::sqrt(2.0 * (10.0 - r2))) / 791.0);
  const double plus = std::sqrt(1.0 + inner);
  const double minus = std::sqrt(1.0 - inner);
  const auto g = gamma_constants<double>();
  const double value = plus * plus * g.gamma1 + 2.0 * plus * minus * (g.gamma2 + g.gamma3) + minus * minus * g.gamma3;
  return {make_state(Dimension(4), std::vector<double>{plus, plus, minus, minus}), plus, minus, value};
}

OptimalState optimal_min_state() {
  const double r2 = std::numbers::sqrt2;
  const double root = std::sqrt(10.0 - r2);
  const double inner = std::sqrt((357.0 - 7.0 * r2 - 80.0 * root + 6.0 * std::sqrt(2.0 * (10.0 - r2))) / 791.0);
  const double plus = std::sqrt(1.0 + inner);
  const double minus = std::sqrt(1.0 - inner);
  const auto g = gamma_constants<double>();
  const double value = -plus * plus * g.gamma1 - 2.0 * plus * minus * (g.gamma1 + g.gamma2) + minus * minus * g.gamma3;
  return {make_state(Dimension(4), std::vector<double>{plus, plus, minus, minus}), plus, minus, value};
}

double threshold_noise(double bell_value) {
  if (!(bell_value > 0.0)) throw DomainError("threshold noise needs a positive Bell value");
  return 1.0 - 2.0 / bell_value;
}

double vertex_value(const VertexPattern& pattern, const std::array<int, 4>& assignment,
                    const std::array<double, 4>& sorted) {
  double acc = 0.0;
  for (std::size_t s = 0; s < kVertexSlotPairs.size(); ++s) {
    const auto [x, y] = kVertexSlotPairs[s];
    acc += pattern.slots[s].value() * sorted[static_cast<std::size_t>(assignment[static_cast<std::size_t>(x)])] *
           sorted[static_cast<std::size_t>(assignment[static_cast<std::size_t>(y)])];
  }
  return acc;
}

VertexCandidates vertex_candidates(const PureState& state) { return vertex_candidates(state, vertex_tables()); }

VertexCandidates vertex_candidates(const PureState& state, const std::vector<VertexPattern>& tables) {
  require_d4(state);
  if (tables.empty()) throw DomainError("no vertex patterns supplied");
  const auto sorted = sort_magnitudes(state).values;

  std::optional<VertexCandidates> best;
  for (const auto& pattern : tables) {
    std::array<int, 4> assignment{0, 1, 2, 3};
    do {
      const double v = vertex_value(pattern, assignment, sorted);
      if (!best) {
        best = VertexCandidates{v, v, {pattern, assignment}, {pattern, assignment}};
        continue;
      }
      if (v > best->max) {
        best->max = v;
        best->max_witness = {pattern, assignment};
      }
      if (v < best->min) {
        best->min = v;
        best->min_witness = {pattern, assignment};
      }
    } while (std::next_permutation(assignment.begin(), assignment.end()));
  }
  return *best;
}

MeasurementSettings reference_optimal_angles() {
  constexpr double pi = std::numbers::pi;
  const Dimension d4(4);
  auto pv = [&](double p0, double p1, double p2, double p3) {
    Eigen::VectorXd v(4);
    v << p0, p1, p2, p3;
    return PhaseVector(d4, v);
  };
  return {pv(0.0, pi / 6.0, -pi, 4.0 * pi / 9.0), pv(0.0, -5.0 * pi / 9.0, 5.0 * pi / 9.0, -pi / 3.0),
          pv(0.0, -pi / 2.0, 13.0 * pi / 18.0, -11.0 * pi / 18.0),
          pv(0.0, 7.0 * pi / 36.0, -27.0 * pi / 36.0, -7.0 * pi / 18.0)};
}

}  // namespace bellmp
