#include "carnot/group_geometry.hpp"

#include <cmath>

#include "carnot/errors.hpp"

namespace carnot {

namespace {

constexpr std::size_t kMaxStep = 6;

// Dynkin coefficient of the right-nested bracket [w1,[w2,[...,wm]]] in the BCH
// series, summed over all block decompositions X^p1 Y^q1 ... X^pn Y^qn of the
// word: (-1)^(n-1) / (n * m * prod p_i! q_i!).
class DynkinTable {
public:
  DynkinTable() {
    fact_[0] = 1;
    for (std::size_t i = 1; i <= kMaxStep; ++i) fact_[i] = fact_[i - 1] * long(i);
    coeff_.resize(kMaxStep);
    for (std::size_t m = 1; m <= kMaxStep; ++m) {
      coeff_[m - 1].assign(std::size_t(1) << m, Rat(0));
      for (std::size_t bits = 0; bits < (std::size_t(1) << m); ++bits) {
        word_.clear();
        for (std::size_t t = 0; t < m; ++t) word_.push_back((bits >> t) & 1);
        Rat total = 0;
        accumulate(0, 0, Rat(1), total);
        coeff_[m - 1][bits] = total;
      }
    }
  }

  const Rat& coeff(std::size_t m, std::size_t bits) const { return coeff_[m - 1][bits]; }

private:
  void accumulate(std::size_t pos, std::size_t rounds, Rat weight, Rat& total) const {
    const std::size_t m = word_.size();
    if (pos == m) {
      const Rat sign = (rounds % 2 == 1) ? 1 : -1;
      total += sign * weight / (long(rounds) * long(m));
      return;
    }
    std::size_t max_p = 0;
    while (pos + max_p < m && word_[pos + max_p] == 0) ++max_p;
    for (std::size_t p = 0; p <= max_p; ++p) {
      std::size_t max_q = 0;
      while (pos + p + max_q < m && word_[pos + p + max_q] == 1) ++max_q;
      const std::size_t q_min = (p == 0) ? 1 : 0;  // each round needs p + q >= 1
      for (std::size_t q = q_min; q <= max_q; ++q)
        accumulate(pos + p + q, rounds + 1, weight / (fact_[p] * fact_[q]), total);
    }
  }

  std::vector<std::vector<Rat>> coeff_;
  Rat fact_[kMaxStep + 1];
  mutable std::vector<unsigned char> word_;
};

const DynkinTable& dynkin_table() {
  static const DynkinTable table;
  return table;
}

}  // namespace

Element bch_multiply(const Element& x, const Element& y) {
  require_same_algebra(x, y);
  const auto& alg = x.algebra();
  const std::size_t r = alg.step();
  if (r > kMaxStep)
    throw CarnotError(Errc::unsupported_step,
                      "BCH truncation tables go up to step " + std::to_string(kMaxStep));
  const auto& table = dynkin_table();

  RatVector result(alg.dim(), Rat(0));
  for (std::size_t m = 1; m <= r; ++m) {
    for (std::size_t bits = 0; bits < (std::size_t(1) << m); ++bits) {
      const Rat& c = table.coeff(m, bits);
      if (c == 0) continue;
      if (m >= 2 && ((bits >> (m - 2)) & 1) == ((bits >> (m - 1)) & 1))
        continue;  // innermost bracket [a, a] vanishes
      RatVector v = ((bits >> (m - 1)) & 1) ? y.coords() : x.coords();
      for (std::size_t t = m - 1; t-- > 0;)
        v = bracket_vec(alg, ((bits >> t) & 1) ? y.coords() : x.coords(), v);
      if (is_zero(v)) continue;
      for (std::size_t i = 0; i < result.size(); ++i) result[i] += c * v[i];
    }
  }
  return Element(x.algebra_ptr(), std::move(result));
}

Element invert(const Element& x) { return -x; }

double HomogeneousMetric::norm(const Element& x) const {
  const auto& alg = x.algebra();
  double total = 0.0;
  for (std::size_t layer = 1; layer <= alg.step(); ++layer) {
    double sq = 0.0;
    const std::size_t start = alg.layer_start(layer);
    for (std::size_t j = 0; j < alg.layer_dim(layer); ++j) {
      const double c = rat_to_double(x.coords()[start + j]);
      sq += c * c;
    }
    if (sq > 0.0) total += std::pow(std::sqrt(sq), 1.0 / double(layer));
  }
  return total;
}

double HomogeneousMetric::distance(const Element& p, const Element& q) const {
  return norm(bch_multiply(invert(p), q));
}

double homogeneous_norm(const Element& x) { return HomogeneousMetric{}.norm(x); }

double distance(const Element& p, const Element& q) { return HomogeneousMetric{}.distance(p, q); }

std::pair<double, double> dilation_similarity_check(const Rat& t, const Element& p,
                                                    const Element& q) {
  if (t <= 0) throw CarnotError(Errc::non_positive_scale, "similarity check requires t > 0");
  HomogeneousMetric metric;
  return {metric.distance(dilate(t, p), dilate(t, q)), rat_to_double(t) * metric.distance(p, q)};
}

double observed_quasi_metric_constant(const AlgebraPtr& alg, std::size_t samples,
                                      std::uint64_t seed) {
  HomogeneousMetric metric;
  DetRng rng(seed);
  double worst = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    Element p(alg, rng.next_vector(alg->dim()));
    Element q(alg, rng.next_vector(alg->dim()));
    Element r(alg, rng.next_vector(alg->dim()));
    const double through = metric.distance(p, q) + metric.distance(q, r);
    if (through <= 0.0) continue;
    worst = std::max(worst, metric.distance(p, r) / through);
  }
  return worst;
}

std::vector<std::pair<Rat, double>> coset_divergence_probe(const Element& w, const Element& v,
                                                           const std::vector<Rat>& t_values) {
  require_same_algebra(w, v);
  if (!w.is_horizontal())
    throw CarnotError(Errc::not_horizontal, "probe direction must lie in the first layer");
  HomogeneousMetric metric;
  std::vector<std::pair<Rat, double>> out;
  Rat prev = 0;
  for (const auto& t : t_values) {
    if (t <= 0 || t <= prev)
      throw CarnotError(Errc::bad_params, "t values must be positive and increasing");
    prev = t;
    Element tw = t * w;
    const double d = metric.distance(tw, bch_multiply(v, tw));
    out.emplace_back(t, d / rat_to_double(t));
  }
  return out;
}

}  // namespace carnot
