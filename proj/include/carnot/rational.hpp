#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "carnot/errors.hpp"

namespace carnot {

/// Exact rational scalar. All algebraic computation in this library is exact;
/// floating point appears only in metric outputs.
using Rat = mpq_class;
using RatVector = std::vector<Rat>;

inline Rat make_rat(long num, long den = 1) {
  if (den == 0) throw CarnotError(Errc::bad_params, "zero denominator");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

Rat parse_rat(const std::string& text);
std::string rat_to_string(const Rat& q);

inline double rat_to_double(const Rat& q) { return q.get_d(); }

inline bool is_zero(const RatVector& v) {
  for (const auto& c : v)
    if (c != 0) return false;
  return true;
}

/// Deterministic random source for sampled searches and property tests.
/// std::mt19937_64 raw output is fully specified by the standard; standard
/// distributions are not, so sampling uses plain modulo reduction.
class DetRng {
public:
  explicit DetRng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  long next_int(long lo, long hi) {
    return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  Rat next_rat(long max_num = 9, long max_den = 3) {
    return make_rat(next_int(-max_num, max_num), next_int(1, max_den));
  }

  RatVector next_vector(std::size_t n, long max_num = 9, long max_den = 3) {
    RatVector v(n);
    for (auto& c : v) c = next_rat(max_num, max_den);
    return v;
  }

private:
  std::mt19937_64 eng_;
};

}  // namespace carnot
