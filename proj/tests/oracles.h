#pragma once

#include <cstdint>
#include <algorithm>
#include <numeric>
#include <vector>

namespace streid::testing {

// Exact rational with int64 parts, enough for short relevance vectors.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Fraction operator+(const Fraction& o) const { return reduce(num * o.den + o.num * den, den * o.den); }
  Fraction operator-(const Fraction& o) const { return reduce(num * o.den - o.num * den, den * o.den); }
  Fraction operator*(const Fraction& o) const { return reduce(num * o.num, den * o.den); }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  static Fraction reduce(std::int64_t n, std::int64_t d) {
    const auto g = std::gcd(n, d);
    return g == 0 ? Fraction{0, 1} : Fraction{n / g, d / g};
  }
};

// Area under the step precision-recall curve: sum of precision(k) times the
// recall gained at k, evaluated in exact arithmetic.
inline Fraction pr_area(const std::vector<std::uint8_t>& relevance) {
  const auto positives =
      static_cast<std::int64_t>(std::count(relevance.begin(), relevance.end(), 1));
  Fraction area;
  Fraction prev_recall;
  std::int64_t hits = 0;
  for (std::size_t k = 0; k < relevance.size(); ++k) {
    hits += relevance[k];
    const Fraction precision = Fraction::reduce(hits, static_cast<std::int64_t>(k + 1));
    const Fraction recall = Fraction::reduce(hits, positives);
    area = area + precision * (recall - prev_recall);
    prev_recall = recall;
  }
  return area;
}

inline std::vector<std::uint8_t> bits(unsigned mask, int length) {
  std::vector<std::uint8_t> out(static_cast<std::size_t>(length));
  for (int i = 0; i < length; ++i) out[static_cast<std::size_t>(i)] = (mask >> i) & 1u;
  return out;
}

}  // namespace streid::testing
