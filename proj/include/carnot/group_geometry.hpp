#pragma once

#include <utility>
#include <vector>

#include "carnot/algebra.hpp"

namespace carnot {

/// Group product in exponential coordinates: the Dynkin series truncated at
/// the algebra's step (all higher brackets vanish by nilpotency). Exact;
/// supports step <= 6.
Element bch_multiply(const Element& x, const Element& y);

/// Group inverse: coordinate negation.
Element invert(const Element& x);

/// Homogeneous norm ||x|| = sum_i |x_i|^(1/i) with Euclidean layer norms in
/// the frozen basis, and the distance d(g,h) = ||(-g)*h||. Group operations
/// stay exact; only the final norm is floating point.
struct HomogeneousMetric {
  double tolerance = 1e-9;  // relative tolerance for metric assertions

  double norm(const Element& x) const;
  double distance(const Element& p, const Element& q) const;
};

double homogeneous_norm(const Element& x);
double distance(const Element& p, const Element& q);

/// Returns (d(L_t p, L_t q), t * d(p, q)); equal in real arithmetic by
/// homogeneity, equal within tolerance in doubles.
std::pair<double, double> dilation_similarity_check(const Rat& t, const Element& p,
                                                    const Element& q);

/// Normalized coset divergence d(t*w, v*(t*w)) / t for each t. For a valid
/// Carnot structure the ratios tend to zero when v is not on the w-line.
std::vector<std::pair<Rat, double>> coset_divergence_probe(const Element& w,
                                                           const Element& v,
                                                           const std::vector<Rat>& t_values);

/// Largest observed d(p, r) / (d(p, q) + d(q, r)) over seeded random triples.
/// d need not satisfy the exact triangle inequality for this norm choice; the
/// constant is reported, never asserted.
double observed_quasi_metric_constant(const AlgebraPtr& alg, std::size_t samples,
                                      std::uint64_t seed);

}  // namespace carnot
