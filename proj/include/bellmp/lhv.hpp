#ifndef BELLMP_LHV_HPP
#define BELLMP_LHV_HPP

#include <array>
#include <cstdint>
#include <string>

#include <boost/rational.hpp>

#include "bellmp/core.hpp"

namespace bellmp {

using Rational = boost::rational<std::int64_t>;

/// "-10/3", "2", ...
[[nodiscard]] std::string to_string(const Rational& r);

/// Local deterministic assignment of outcomes (A1, A2, B1, B2).
struct DeterministicStrategy {
  Dimension dim;
  std::array<int, 4> outcomes;  // A1, A2, B1, B2

  [[nodiscard]] int a(int i) const { return outcomes[static_cast<std::size_t>(i - 1)]; }
  [[nodiscard]] int b(int j) const { return outcomes[static_cast<std::size_t>(j + 1)]; }
};

/// Exact Bell value of a deterministic strategy.
[[nodiscard]] Rational lhv_value(const DeterministicStrategy& strategy, KernelVariant variant);

struct LhvBoundsReport {
  Dimension dim;
  KernelVariant variant;
  Rational max_value;
  Rational min_value;
  DeterministicStrategy argmax;
  DeterministicStrategy argmin;
  std::int64_t strategies_scanned;
};

/// Largest dimension accepted by lhv_bounds.
inline constexpr int kMaxEnumerableDimension = 12;

/// Scans all d^4 strategies row-major over (A1, A2, B1, B2).  Ties resolve to
/// the lexicographically smallest strategy.
[[nodiscard]] LhvBoundsReport lhv_bounds(Dimension dim, KernelVariant variant = KernelVariant::Plus);

/// -2(d+1)/(d-1).
[[nodiscard]] Rational lhv_lower_bound_formula(Dimension dim);

}  // namespace bellmp

#endif  // BELLMP_LHV_HPP
