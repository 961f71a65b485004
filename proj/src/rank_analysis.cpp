#include "carnot/rank_analysis.hpp"

#include <algorithm>
#include <set>

#include "carnot/errors.hpp"

namespace carnot {

namespace {

// Rank of ad(x) without materializing the dense matrix: ad columns are sparse
// for nilpotent structure tables, so only nonzero columns are assembled.
std::size_t rank_impl(const CarnotAlgebra& alg, const RatVector& x,
                      std::optional<std::size_t> layer) {
  const std::size_t n = alg.dim();
  std::size_t domain_start = 0, domain_end = n;
  if (layer) {
    if (*layer < 1 || *layer > alg.step())
      throw CarnotError(Errc::bad_layer_index, "layer index out of range");
    domain_start = alg.layer_start(*layer);
    domain_end = domain_start + alg.layer_dim(*layer);
  }
  std::vector<std::vector<std::pair<std::size_t, Rat>>> cols(n);
  for (const auto& [key, terms] : alg.table()) {
    const auto [i, j] = key;
    if (x[i] != 0 && j >= domain_start && j < domain_end)
      for (const auto& t : terms) cols[j].emplace_back(t.target, x[i] * t.coeff);
    if (x[j] != 0 && i >= domain_start && i < domain_end)
      for (const auto& t : terms) cols[i].emplace_back(t.target, -x[j] * t.coeff);
  }
  RankAccumulator acc;
  for (std::size_t j = domain_start; j < domain_end; ++j) {
    if (cols[j].empty()) continue;
    RatVector dense(n, Rat(0));
    for (const auto& [t, c] : cols[j]) dense[t] += c;
    acc.insert(std::move(dense));
  }
  return acc.dim();
}

// ---- integer minor machinery for the exterior-power test ----

using IntMatrix = std::vector<std::vector<mpz_class>>;

// Clears denominators column-wise and prunes zero rows/columns. Column scaling
// by positive rationals and row/column deletion of zeros preserve which minors
// vanish.
IntMatrix integer_minor_matrix(const std::vector<RatVector>& cols) {
  const std::size_t n = cols.empty() ? 0 : cols[0].size();
  std::vector<std::vector<mpz_class>> int_cols;
  for (const auto& col : cols) {
    if (is_zero(col)) continue;
    mpz_class lcm_den = 1;
    for (const auto& c : col)
      if (c != 0) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), c.get_den_mpz_t());
    std::vector<mpz_class> ic(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (col[i] == 0) continue;
      mpz_class scale = lcm_den / col[i].get_den();
      ic[i] = col[i].get_num() * scale;
    }
    int_cols.push_back(std::move(ic));
  }
  std::vector<std::size_t> live_rows;
  for (std::size_t i = 0; i < n; ++i) {
    bool live = false;
    for (const auto& col : int_cols)
      if (col[i] != 0) {
        live = true;
        break;
      }
    if (live) live_rows.push_back(i);
  }
  IntMatrix m(live_rows.size(), std::vector<mpz_class>(int_cols.size()));
  for (std::size_t r = 0; r < live_rows.size(); ++r)
    for (std::size_t c = 0; c < int_cols.size(); ++c) m[r][c] = int_cols[c][live_rows[r]];
  return m;
}

bool bareiss_is_zero_det(IntMatrix m) {
  const std::size_t s = m.size();
  mpz_class prev = 1;
  for (std::size_t step = 0; step < s; ++step) {
    std::size_t pr = step, pc = step;
    bool found = false;
    for (std::size_t i = step; i < s && !found; ++i)
      for (std::size_t j = step; j < s; ++j)
        if (m[i][j] != 0) {
          pr = i;
          pc = j;
          found = true;
          break;
        }
    if (!found) return true;  // singular
    std::swap(m[step], m[pr]);
    if (pc != step)
      for (auto& row : m) std::swap(row[step], row[pc]);
    for (std::size_t i = step + 1; i < s; ++i)
      for (std::size_t j = step + 1; j < s; ++j) {
        mpz_class t = m[step][step] * m[i][j] - m[i][step] * m[step][j];
        mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    prev = m[step][step];
  }
  return false;  // full chain of nonzero pivots: det != 0
}

std::size_t bareiss_rank(IntMatrix m) {
  if (m.empty() || m[0].empty()) return 0;
  const std::size_t h = m.size(), w = m[0].size();
  mpz_class prev = 1;
  std::size_t rank = 0;
  for (std::size_t step = 0; step < std::min(h, w); ++step) {
    std::size_t pr = step, pc = step;
    bool found = false;
    for (std::size_t i = step; i < h && !found; ++i)
      for (std::size_t j = step; j < w; ++j)
        if (m[i][j] != 0) {
          pr = i;
          pc = j;
          found = true;
          break;
        }
    if (!found) break;
    std::swap(m[step], m[pr]);
    if (pc != step)
      for (auto& row : m) std::swap(row[step], row[pc]);
    for (std::size_t i = step + 1; i < h; ++i)
      for (std::size_t j = step + 1; j < w; ++j) {
        mpz_class t = m[step][step] * m[i][j] - m[i][step] * m[step][j];
        mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    prev = m[step][step];
    ++rank;
  }
  return rank;
}

// C(n, k) clamped to avoid overflow.
std::uint64_t binom_clamped(std::size_t n, std::size_t k, std::uint64_t cap) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    if (result > cap) return cap + 1;
    result = result * (n - k + i) / i;
  }
  return std::min<std::uint64_t>(result, cap + 1);
}

bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t k = idx.size();
  std::size_t i = k;
  while (i > 0) {
    --i;
    if (idx[i] + (k - i) < n) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

constexpr std::uint64_t kMinorWorkBudget = 2'000'000;

}  // namespace

std::size_t rank_of(const Element& x) { return rank_impl(x.algebra(), x.coords(), std::nullopt); }

std::size_t rank_on_layer(const Element& x, std::size_t layer) {
  return rank_impl(x.algebra(), x.coords(), layer);
}

bool wedge_rank_test(const Element& x, std::size_t k) {
  const std::size_t n = x.algebra().dim();
  if (k + 1 > n)
    throw CarnotError(Errc::bad_exponent, "exterior power exceeds ambient dimension");
  const std::size_t m = k + 1;

  IntMatrix mat = integer_minor_matrix(ad_columns(x.algebra(), x.coords()));
  const std::size_t h = mat.size();
  const std::size_t w = h == 0 ? 0 : mat[0].size();
  if (h < m || w < m) return true;  // every m-minor has a zero row or column

  const std::uint64_t subsets =
      binom_clamped(h, m, kMinorWorkBudget) * binom_clamped(w, m, kMinorWorkBudget);
  const std::uint64_t work = subsets * static_cast<std::uint64_t>(m) * m * m;
  if (subsets <= kMinorWorkBudget && work <= kMinorWorkBudget * 8) {
    std::vector<std::size_t> rows(m), cols(m);
    for (std::size_t i = 0; i < m; ++i) rows[i] = i;
    do {
      for (std::size_t i = 0; i < m; ++i) cols[i] = i;
      do {
        IntMatrix sub(m, std::vector<mpz_class>(m));
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < m; ++j) sub[i][j] = mat[rows[i]][cols[j]];
        if (!bareiss_is_zero_det(std::move(sub))) return false;
      } while (next_combination(cols, w));
    } while (next_combination(rows, h));
    return true;
  }
  return bareiss_rank(std::move(mat)) <= k;
}

std::string to_string(Certification c) {
  return c == Certification::exact_uniform_bound ? "exact-uniform-bound" : "heuristic-search";
}

bool uniform_rank_bound_on_layer(const CarnotAlgebra& alg, std::size_t k,
                                 std::optional<std::size_t> layer_restriction,
                                 std::size_t budget) {
  const std::size_t d1 = alg.layer_dims()[0];
  const std::size_t base = k + 2;  // grid values 0..k+1, enough for degree k+1
  std::vector<std::size_t> point(d1, 0);
  std::size_t evaluated = 0;
  RatVector x(alg.dim(), Rat(0));
  while (true) {
    if (++evaluated > budget)
      throw CarnotError(Errc::grid_budget_exceeded, "PIT grid budget exceeded");
    for (std::size_t i = 0; i < d1; ++i) x[i] = static_cast<long>(point[i]);
    if (rank_impl(alg, x, layer_restriction) > k) return false;
    std::size_t pos = 0;
    while (pos < d1) {
      if (++point[pos] < base) break;
      point[pos] = 0;
      ++pos;
    }
    if (pos == d1) break;
  }
  return true;
}

bool uniform_rank_bound(const CarnotAlgebra& alg, std::size_t k, std::size_t budget) {
  return uniform_rank_bound_on_layer(alg, k, std::nullopt, budget);
}

RankReport min_rank_survey(const AlgebraPtr& alg, std::optional<std::size_t> layer_restriction,
                           const SurveyParams& params) {
  const std::size_t d1 = alg->layer_dims()[0];
  if (d1 == 0) throw CarnotError(Errc::empty_first_layer, "empty first layer");
  if (layer_restriction && (*layer_restriction < 1 || *layer_restriction > alg->step()))
    throw CarnotError(Errc::bad_layer_index, "layer index out of range");

  RankReport report;
  report.layer_restriction = layer_restriction;
  report.params = params;

  bool have_min = false;
  std::set<RatVector> seen;
  std::size_t enumerated = 0;

  auto consider = [&](const RatVector& first_layer) {
    if (is_zero(first_layer)) return;
    RatVector full(alg->dim(), Rat(0));
    for (std::size_t i = 0; i < d1; ++i) full[i] = first_layer[i];
    const std::size_t r = rank_impl(*alg, full, layer_restriction);
    report.generic_rank = std::max(report.generic_rank, r);
    if (!have_min || r < report.r_min_found) {
      have_min = true;
      report.r_min_found = r;
      report.witnesses.clear();
      seen.clear();
    }
    if (r == report.r_min_found && seen.insert(first_layer).second)
      report.witnesses.emplace_back(alg, std::move(full));
  };

  // (a) basis vectors of V_1
  for (std::size_t i = 0; i < d1; ++i) {
    RatVector v(d1, Rat(0));
    v[i] = 1;
    consider(v);
  }

  // (b) integer combinations, coefficients in [-g, g] on supports of size <= s,
  // lexicographic over support then coefficient odometer
  const long g = params.grid_radius;
  std::vector<long> values;
  for (long v = -g; v <= g; ++v)
    if (v != 0) values.push_back(v);
  const std::size_t max_support = std::min<std::size_t>(params.sparsity, d1);
  for (std::size_t s = 1; s <= max_support && !values.empty(); ++s) {
    std::vector<std::size_t> support(s);
    for (std::size_t i = 0; i < s; ++i) support[i] = i;
    do {
      std::vector<std::size_t> odo(s, 0);
      while (true) {
        if (++enumerated > params.enumeration_cap)
          throw CarnotError(Errc::search_budget_exceeded, "survey enumeration cap exceeded");
        RatVector v(d1, Rat(0));
        for (std::size_t i = 0; i < s; ++i) v[support[i]] = values[odo[i]];
        consider(v);
        std::size_t pos = s;
        while (pos > 0) {
          --pos;
          if (++odo[pos] < values.size()) break;
          odo[pos] = 0;
          if (pos == 0) {
            pos = s;
            break;
          }
        }
        if (pos == s) break;
      }
    } while (next_combination(support, d1));
  }

  // (c) seeded random rational samples
  DetRng rng(params.seed);
  for (std::size_t i = 0; i < params.samples; ++i) consider(rng.next_vector(d1));

  RatMatrix rows;
  rows.reserve(report.witnesses.size());
  for (const auto& w : report.witnesses)
    rows.emplace_back(w.coords().begin(), w.coords().begin() + d1);
  report.span = Subspace::span(d1, rows);

  try {
    const bool bound_holds =
        uniform_rank_bound_on_layer(*alg, report.r_min_found, layer_restriction, params.pit_budget);
    if (bound_holds) {
      report.certification = Certification::exact_uniform_bound;
      report.certification_note =
          "rank <= " + std::to_string(report.r_min_found) +
          " holds identically on V1 (PIT grid); witnesses attain the bound";
    } else {
      report.certification = Certification::heuristic_search;
      report.certification_note = "uniform bound at r_min fails: some x in V1 has larger rank";
    }
  } catch (const CarnotError& e) {
    if (e.code() != Errc::grid_budget_exceeded) throw;
    report.certification = Certification::heuristic_search;
    report.certification_note = "PIT grid budget exceeded; minimum not certified";
  }

  return report;
}

Subspace normalize_first_layer_subspace(const CarnotAlgebra& alg, const Subspace& w1) {
  const std::size_t d1 = alg.layer_dims()[0];
  if (w1.ambient() == d1) return w1;
  if (w1.ambient() != alg.dim())
    throw CarnotError(Errc::dimension_mismatch,
                      "subspace must be given in first-layer or ambient coordinates");
  RatMatrix rows;
  for (const auto& row : w1.basis()) {
    for (std::size_t i = d1; i < alg.dim(); ++i)
      if (row[i] != 0)
        throw CarnotError(Errc::not_in_first_layer, "subspace has support outside V1");
    rows.emplace_back(row.begin(), row.begin() + d1);
  }
  return Subspace::span(d1, rows);
}

std::size_t GradedSubalgebra::total_dim() const {
  std::size_t d = 0;
  for (const auto& l : layers) d += l.dim();
  return d;
}

std::size_t GradedSubalgebra::top_layer() const {
  std::size_t top = 0;
  for (std::size_t j = 0; j < layers.size(); ++j)
    if (layers[j].dim() > 0) top = j + 1;
  return top;
}

bool GradedSubalgebra::equals_parent() const {
  for (std::size_t j = 0; j < layers.size(); ++j)
    if (layers[j].dim() != parent->layer_dims()[j]) return false;
  return true;
}

RatVector GradedSubalgebra::lifted_basis_vector(std::size_t q) const {
  RatVector v(parent->dim(), Rat(0));
  std::size_t offset = 0;
  for (std::size_t j = 0; j < layers.size(); ++j) {
    if (q < offset + layers[j].dim()) {
      const auto& row = layers[j].basis()[q - offset];
      const std::size_t start = parent->layer_start(j + 1);
      for (std::size_t c = 0; c < row.size(); ++c) v[start + c] = row[c];
      return v;
    }
    offset += layers[j].dim();
  }
  throw CarnotError(Errc::index_out_of_range, "subalgebra basis index out of range");
}

namespace {

// Builds the induced structure constants and embedding; verifies closure.
void finish_subalgebra(GradedSubalgebra& sub) {
  const auto& parent = *sub.parent;
  const std::size_t total = sub.total_dim();
  const std::size_t r = parent.step();

  std::vector<std::size_t> layer_of_sub;
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t t = 0; t < sub.layers[j].dim(); ++t) layer_of_sub.push_back(j + 1);

  sub.embedding.assign(parent.dim(), RatVector(total, Rat(0)));
  for (std::size_t q = 0; q < total; ++q) {
    RatVector lift = sub.lifted_basis_vector(q);
    for (std::size_t i = 0; i < parent.dim(); ++i) sub.embedding[i][q] = lift[i];
  }

  BracketTable table;
  for (std::size_t a = 0; a < total; ++a)
    for (std::size_t b = a + 1; b < total; ++b) {
      RatVector w = bracket_vec(parent, sub.lifted_basis_vector(a), sub.lifted_basis_vector(b));
      if (is_zero(w)) continue;
      const std::size_t target_layer = layer_of_sub[a] + layer_of_sub[b];
      if (target_layer > r)
        throw CarnotError(Errc::not_subalgebra, "bracket escapes the grading");
      const std::size_t start = parent.layer_start(target_layer);
      RatVector block(w.begin() + start, w.begin() + start + parent.layer_dim(target_layer));
      auto coords = sub.layers[target_layer - 1].coordinates_of(block);
      if (!coords)
        throw CarnotError(Errc::not_subalgebra, "layers are not bracket-closed");
      std::size_t offset = 0;
      for (std::size_t j = 0; j + 1 < target_layer; ++j) offset += sub.layers[j].dim();
      std::vector<BracketTerm> terms;
      for (std::size_t t = 0; t < coords->size(); ++t)
        if ((*coords)[t] != 0) terms.push_back({offset + t, (*coords)[t]});
      if (!terms.empty()) table[{a, b}] = std::move(terms);
    }

  // standalone Carnot algebra when the nonzero layers form a prefix
  std::vector<std::size_t> dims;
  bool prefix = true;
  for (std::size_t j = 0; j < r; ++j) {
    if (sub.layers[j].dim() == 0) {
      for (std::size_t l = j; l < r; ++l)
        if (sub.layers[l].dim() > 0) prefix = false;
      break;
    }
    dims.push_back(sub.layers[j].dim());
  }
  if (prefix && !dims.empty()) {
    sub.standalone = std::make_shared<CarnotAlgebra>(parent.name() + "__gen", dims,
                                                     std::vector<std::string>{}, table);
  }
}

}  // namespace

GradedSubalgebra generated_subalgebra(const AlgebraPtr& alg, const Subspace& w1_in) {
  Subspace w1 = normalize_first_layer_subspace(*alg, w1_in);
  if (w1.dim() == 0) throw CarnotError(Errc::trivial_subspace, "W1 is trivial");

  GradedSubalgebra sub;
  sub.parent = alg;
  sub.generated = true;
  sub.layers.assign(alg->step(), Subspace());
  for (std::size_t j = 0; j < alg->step(); ++j)
    sub.layers[j] = Subspace::zero(alg->layer_dims()[j]);
  sub.layers[0] = w1;

  for (std::size_t j = 1; j < alg->step(); ++j) {
    const std::size_t start = alg->layer_start(j + 1);
    const std::size_t d = alg->layer_dim(j + 1);
    RatMatrix rows;
    for (const auto& wrow : w1.basis()) {
      RatVector wl(alg->dim(), Rat(0));
      for (std::size_t c = 0; c < wrow.size(); ++c) wl[c] = wrow[c];
      for (std::size_t t = 0; t < sub.layers[j - 1].dim(); ++t) {
        RatVector ul(alg->dim(), Rat(0));
        const auto& urow = sub.layers[j - 1].basis()[t];
        const std::size_t ustart = alg->layer_start(j);
        for (std::size_t c = 0; c < urow.size(); ++c) ul[ustart + c] = urow[c];
        RatVector b = bracket_vec(*alg, wl, ul);
        rows.emplace_back(b.begin() + start, b.begin() + start + d);
      }
    }
    sub.layers[j] = Subspace::span(d, rows);
    if (sub.layers[j].dim() == 0) break;
  }

  finish_subalgebra(sub);
  return sub;
}

GradedSubalgebra make_graded_subalgebra(const AlgebraPtr& alg, std::vector<Subspace> layers) {
  if (layers.size() != alg->step())
    throw CarnotError(Errc::dimension_mismatch, "one subspace per layer required");
  for (std::size_t j = 0; j < layers.size(); ++j)
    if (layers[j].ambient() != alg->layer_dims()[j])
      throw CarnotError(Errc::dimension_mismatch, "layer subspace width mismatch");
  GradedSubalgebra sub;
  sub.parent = alg;
  sub.generated = false;
  sub.layers = std::move(layers);
  finish_subalgebra(sub);  // throws NotSubalgebra if not bracket-closed
  return sub;
}

bool is_ideal(const CarnotAlgebra& alg, const GradedSubalgebra& sub) {
  if (!structurally_equal(alg, *sub.parent))
    throw CarnotError(Errc::not_subalgebra, "subalgebra belongs to a different algebra");
  const std::size_t r = alg.step();
  std::vector<RatVector> basis(alg.dim(), RatVector(alg.dim(), Rat(0)));
  for (std::size_t i = 0; i < alg.dim(); ++i) basis[i][i] = 1;

  for (std::size_t i = 0; i < alg.dim(); ++i) {
    const std::size_t la = alg.layer_of(i);
    for (std::size_t q = 0; q < sub.total_dim(); ++q) {
      RatVector lift = sub.lifted_basis_vector(q);
      std::size_t lw = 0;
      for (std::size_t c = 0; c < lift.size(); ++c)
        if (lift[c] != 0) {
          lw = alg.layer_of(c);
          break;
        }
      RatVector b = bracket_vec(alg, basis[i], lift);
      if (is_zero(b)) continue;
      const std::size_t target = la + lw;
      if (target > r) return false;  // cannot happen for graded input
      const std::size_t start = alg.layer_start(target);
      RatVector block(b.begin() + start, b.begin() + start + alg.layer_dim(target));
      if (!sub.layers[target - 1].contains(block)) return false;
    }
  }
  return true;
}

namespace {

// Kernel of the linear conditions "[v, w] lies in K (layer-2 subspace)" over
// v in V1, for each basis row w of W1.
Subspace first_layer_solution_space(const AlgebraPtr& alg, const Subspace& w1,
                                    const Subspace& k2) {
  const std::size_t d1 = alg->layer_dims()[0];
  if (alg->step() == 1) return Subspace::full(d1);  // all brackets vanish
  const std::size_t start2 = alg->layer_start(2);
  const std::size_t d2 = alg->layer_dim(2);

  RatMatrix system;
  for (const auto& wrow : w1.basis()) {
    RatVector wl(alg->dim(), Rat(0));
    for (std::size_t c = 0; c < wrow.size(); ++c) wl[c] = wrow[c];
    // columns: layer-2 block of [e_i, w], reduced modulo k2
    std::vector<RatVector> reduced_cols(d1);
    for (std::size_t i = 0; i < d1; ++i) {
      RatVector ei(alg->dim(), Rat(0));
      ei[i] = 1;
      RatVector b = bracket_vec(*alg, ei, wl);
      reduced_cols[i] = k2.reduce(RatVector(b.begin() + start2, b.begin() + start2 + d2));
    }
    for (std::size_t rrow = 0; rrow < d2; ++rrow) {
      RatVector row(d1, Rat(0));
      bool nonzero = false;
      for (std::size_t i = 0; i < d1; ++i) {
        row[i] = reduced_cols[i][rrow];
        nonzero = nonzero || row[i] != 0;
      }
      if (nonzero) system.push_back(std::move(row));
    }
  }
  if (system.empty()) return Subspace::full(d1);
  return Subspace::span(d1, kernel_basis(system, d1));
}

}  // namespace

Subspace normalizer(const AlgebraPtr& alg, const Subspace& w1_in) {
  Subspace w1 = normalize_first_layer_subspace(*alg, w1_in);
  if (w1.dim() == 0) throw CarnotError(Errc::trivial_subspace, "W1 is trivial");
  if (alg->step() == 1) return Subspace::full(alg->layer_dims()[0]);
  GradedSubalgebra gen = generated_subalgebra(alg, w1);
  return first_layer_solution_space(alg, w1, gen.layers[1]);
}

Subspace theorem12_space(const AlgebraPtr& alg, const Subspace& w1_in) {
  Subspace w1 = normalize_first_layer_subspace(*alg, w1_in);
  if (w1.dim() == 0) throw CarnotError(Errc::trivial_subspace, "W1 is trivial");
  const std::size_t d1 = alg->layer_dims()[0];
  if (alg->step() == 1) return Subspace::full(d1);

  const std::size_t start2 = alg->layer_start(2);
  const std::size_t d2 = alg->layer_dim(2);
  RatMatrix krows;
  for (std::size_t a = 0; a < w1.dim(); ++a)
    for (std::size_t b = a + 1; b < w1.dim(); ++b) {
      RatVector xa(alg->dim(), Rat(0)), xb(alg->dim(), Rat(0));
      for (std::size_t c = 0; c < d1; ++c) {
        xa[c] = w1.basis()[a][c];
        xb[c] = w1.basis()[b][c];
      }
      RatVector w = bracket_vec(*alg, xa, xb);
      krows.emplace_back(w.begin() + start2, w.begin() + start2 + d2);
    }
  Subspace k2 = Subspace::span(d2, krows);
  return first_layer_solution_space(alg, w1, k2);
}

}  // namespace carnot
