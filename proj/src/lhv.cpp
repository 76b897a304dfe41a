#include "bellmp/lhv.hpp"

namespace bellmp {

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rational lhv_value(const DeterministicStrategy& s, KernelVariant variant) {
  const int d = s.dim.value();
  for (int o : s.outcomes) {
    if (o < 0 || o >= d) throw DomainError("strategy outcome out of range");
  }
  // Each Q_ij = f / S = 2f / 2S; accumulate sum of signed 2f then divide once.
  std::int64_t twice = 0;
  for (int i = 1; i <= 2; ++i) {
    for (int j = 1; j <= 2; ++j) twice += bell_sign(i, j) * kernel_twice(i, j, s.a(i), s.b(j), s.dim, variant);
  }
  return {twice, s.dim.twice_spin()};
}

LhvBoundsReport lhv_bounds(Dimension dim, KernelVariant variant) {
  const int d = dim.value();
  if (d > kMaxEnumerableDimension) {
    throw DimensionError("d = " + std::to_string(d) + " exceeds the exhaustive-scan limit of " +
                         std::to_string(kMaxEnumerableDimension));
  }
  const DeterministicStrategy first{dim, {0, 0, 0, 0}};
  const Rational v0 = lhv_value(first, variant);
  LhvBoundsReport report{dim, variant, v0, v0, first, first, 0};

  DeterministicStrategy s{dim, {0, 0, 0, 0}};
  for (int a1 = 0; a1 < d; ++a1) {
    for (int a2 = 0; a2 < d; ++a2) {
      for (int b1 = 0; b1 < d; ++b1) {
        for (int b2 = 0; b2 < d; ++b2) {
          s.outcomes = {a1, a2, b1, b2};
          const Rational v = lhv_value(s, variant);
          // Strict comparisons keep the first (lexicographically smallest) witness.
          if (v > report.max_value) {
            report.max_value = v;
            report.argmax = s;
          }
          if (v < report.min_value) {
            report.min_value = v;
            report.argmin = s;
          }
          ++report.strategies_scanned;
        }
      }
    }
  }
  return report;
}

Rational lhv_lower_bound_formula(Dimension dim) {
  const int d = dim.value();
  return {-2 * (d + 1), d - 1};
}

}  // namespace bellmp
