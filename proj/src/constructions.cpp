#include "carnot/constructions.hpp"

#include <algorithm>

#include "carnot/errors.hpp"

namespace carnot {

namespace {

struct LabeledBracket {
  std::string i, j;
  std::vector<std::pair<Rat, std::string>> terms;
};

std::shared_ptr<const CarnotAlgebra> build_by_labels(std::string name,
                                                     std::vector<std::size_t> dims,
                                                     std::vector<std::string> labels,
                                                     const std::vector<LabeledBracket>& brackets) {
  auto index_of = [&](const std::string& label) -> std::size_t {
    for (std::size_t t = 0; t < labels.size(); ++t)
      if (labels[t] == label) return t;
    throw CarnotError(Errc::bad_params, "unknown label " + label);
  };
  BracketTable table;
  for (const auto& b : brackets) {
    const std::size_t i = index_of(b.i), j = index_of(b.j);
    auto& terms = table[{std::min(i, j), std::max(i, j)}];
    const Rat sign = i < j ? 1 : -1;
    for (const auto& [c, k] : b.terms) terms.push_back({index_of(k), sign * c});
  }
  return std::make_shared<CarnotAlgebra>(std::move(name), std::move(dims), std::move(labels),
                                         std::move(table));
}

}  // namespace

bool is_graded_ideal(const CarnotAlgebra& alg, const GradedIdeal& ideal) {
  if (ideal.layers.size() != alg.step()) return false;
  for (std::size_t j = 0; j < alg.step(); ++j)
    if (ideal.layers[j].ambient() != alg.layer_dims()[j]) return false;

  for (std::size_t i = 0; i < alg.dim(); ++i) {
    RatVector ei(alg.dim(), Rat(0));
    ei[i] = 1;
    const std::size_t la = alg.layer_of(i);
    for (std::size_t j = 1; j <= alg.step(); ++j) {
      for (const auto& row : ideal.layers[j - 1].basis()) {
        RatVector w(alg.dim(), Rat(0));
        const std::size_t start = alg.layer_start(j);
        for (std::size_t c = 0; c < row.size(); ++c) w[start + c] = row[c];
        RatVector b = bracket_vec(alg, ei, w);
        if (is_zero(b)) continue;
        const std::size_t target = la + j;
        if (target > alg.step()) return false;
        const std::size_t tstart = alg.layer_start(target);
        RatVector block(b.begin() + tstart, b.begin() + tstart + alg.layer_dim(target));
        if (!ideal.layers[target - 1].contains(block)) return false;
      }
    }
  }
  return true;
}

ProductResult direct_product(const CarnotAlgebra& a, const CarnotAlgebra& b) {
  const std::size_t steps = std::max(a.step(), b.step());
  std::vector<std::size_t> dims(steps, 0);
  for (std::size_t l = 0; l < steps; ++l) {
    if (l < a.step()) dims[l] += a.layer_dims()[l];
    if (l < b.step()) dims[l] += b.layer_dims()[l];
  }

  // index maps into the layer-major product basis (a's block first per layer)
  std::vector<std::size_t> map_a(a.dim()), map_b(b.dim());
  std::vector<std::string> labels;
  {
    std::size_t offset = 0;
    for (std::size_t l = 0; l < steps; ++l) {
      if (l < a.step())
        for (std::size_t t = 0; t < a.layer_dims()[l]; ++t) {
          map_a[a.layer_start(l + 1) + t] = offset;
          labels.push_back(a.labels()[a.layer_start(l + 1) + t]);
          ++offset;
        }
      if (l < b.step())
        for (std::size_t t = 0; t < b.layer_dims()[l]; ++t) {
          map_b[b.layer_start(l + 1) + t] = offset;
          labels.push_back(b.labels()[b.layer_start(l + 1) + t]);
          ++offset;
        }
    }
  }
  // label collisions across factors get a factor suffix
  {
    std::vector<std::string> unique = labels;
    std::sort(unique.begin(), unique.end());
    if (std::adjacent_find(unique.begin(), unique.end()) != unique.end()) {
      labels.clear();
      labels.resize(a.dim() + b.dim());
      for (std::size_t t = 0; t < a.dim(); ++t) labels[map_a[t]] = a.labels()[t] + ".a";
      for (std::size_t t = 0; t < b.dim(); ++t) labels[map_b[t]] = b.labels()[t] + ".b";
    }
  }

  BracketTable table;
  for (const auto& [key, terms] : a.table()) {
    auto& out = table[{map_a[key.first], map_a[key.second]}];
    for (const auto& t : terms) out.push_back({map_a[t.target], t.coeff});
  }
  for (const auto& [key, terms] : b.table()) {
    auto& out = table[{map_b[key.first], map_b[key.second]}];
    for (const auto& t : terms) out.push_back({map_b[t.target], t.coeff});
  }

  ProductResult result;
  result.algebra = std::make_shared<CarnotAlgebra>(a.name() + "_x_" + b.name(), dims,
                                                   std::move(labels), std::move(table));
  const std::size_t n = result.algebra->dim();
  result.emb_a.assign(n, RatVector(a.dim(), Rat(0)));
  result.emb_b.assign(n, RatVector(b.dim(), Rat(0)));
  for (std::size_t t = 0; t < a.dim(); ++t) result.emb_a[map_a[t]][t] = 1;
  for (std::size_t t = 0; t < b.dim(); ++t) result.emb_b[map_b[t]][t] = 1;
  return result;
}

QuotientResult quotient_by_graded_ideal(const CarnotAlgebra& alg, const GradedIdeal& ideal) {
  if (!is_graded_ideal(alg, ideal))
    throw CarnotError(Errc::not_graded_ideal, "layers do not form a graded ideal");

  const std::size_t r = alg.step();
  std::vector<std::vector<std::size_t>> complement(r);
  std::vector<std::size_t> new_dims(r);
  for (std::size_t j = 0; j < r; ++j) {
    complement[j] = ideal.layers[j].complement_columns();
    new_dims[j] = complement[j].size();
  }
  std::size_t new_step = r;
  while (new_step > 0 && new_dims[new_step - 1] == 0) --new_step;
  if (new_step == 0)
    throw CarnotError(Errc::quotient_not_carnot, "quotient is the zero algebra");
  for (std::size_t j = 0; j < new_step; ++j)
    if (new_dims[j] == 0)
      throw CarnotError(Errc::quotient_not_carnot, "quotient kills an inner layer");

  std::vector<std::size_t> dims(new_dims.begin(), new_dims.begin() + new_step);

  // projection: reduce each layer block modulo the ideal, keep complement coords
  const std::size_t n = alg.dim();
  std::size_t new_n = 0;
  for (auto d : dims) new_n += d;
  RatMatrix projection(new_n, RatVector(n, Rat(0)));
  std::vector<std::string> labels;
  {
    std::size_t row = 0;
    for (std::size_t j = 0; j < new_step; ++j) {
      const std::size_t start = alg.layer_start(j + 1);
      for (std::size_t t = 0; t < complement[j].size(); ++t) {
        labels.push_back(alg.labels()[start + complement[j][t]]);
        for (std::size_t c = 0; c < alg.layer_dim(j + 1); ++c) {
          RatVector unit(alg.layer_dim(j + 1), Rat(0));
          unit[c] = 1;
          RatVector reduced = ideal.layers[j].reduce(std::move(unit));
          projection[row + t][start + c] = reduced[complement[j][t]];
        }
      }
      row += complement[j].size();
    }
  }

  BracketTable table;
  {
    std::vector<std::size_t> rep;  // ambient index of each new basis vector
    for (std::size_t j = 0; j < new_step; ++j)
      for (auto c : complement[j]) rep.push_back(alg.layer_start(j + 1) + c);
    for (std::size_t p = 0; p < rep.size(); ++p)
      for (std::size_t q = p + 1; q < rep.size(); ++q) {
        RatVector ei(n, Rat(0)), ej(n, Rat(0));
        ei[rep[p]] = 1;
        ej[rep[q]] = 1;
        RatVector w = matvec(projection, bracket_vec(alg, ei, ej));
        std::vector<BracketTerm> terms;
        for (std::size_t t = 0; t < w.size(); ++t)
          if (w[t] != 0) terms.push_back({t, w[t]});
        if (!terms.empty()) table[{p, q}] = std::move(terms);
      }
  }

  QuotientResult result;
  result.algebra = std::make_shared<CarnotAlgebra>(alg.name() + "_quot", dims, std::move(labels),
                                                   std::move(table));
  result.projection = std::move(projection);
  if (!validate(*result.algebra).pass())
    throw CarnotError(Errc::quotient_not_carnot, "quotient fails the Carnot axioms");
  return result;
}

ProductResult central_product(const CarnotAlgebra& a, const CarnotAlgebra& b,
                              const Subspace& wm, const Subspace& wpm, const RatMatrix& glue) {
  if (a.step() != b.step())
    throw CarnotError(Errc::dimension_mismatch, "central product requires equal steps");
  const std::size_t m = a.step();
  const std::size_t da = a.layer_dims()[m - 1], db = b.layer_dims()[m - 1];
  if (wm.ambient() != da || wpm.ambient() != db)
    throw CarnotError(Errc::dimension_mismatch, "glued subspaces must live in the top layers");
  if (wm.dim() != wpm.dim())
    throw CarnotError(Errc::bad_params, "glue must be an isomorphism of equal dimensions");

  ProductResult sum = direct_product(a, b);

  GradedIdeal ideal;
  ideal.layers.reserve(m);
  for (std::size_t j = 0; j + 1 < m; ++j)
    ideal.layers.push_back(Subspace::zero(sum.algebra->layer_dims()[j]));
  {
    RatMatrix rows;
    for (std::size_t t = 0; t < wm.dim(); ++t) {
      if (glue.size() != db)
        throw CarnotError(Errc::dimension_mismatch, "glue must have top-layer-of-b rows");
      RatVector image(db, Rat(0));
      for (std::size_t rrow = 0; rrow < db; ++rrow) {
        if (glue[rrow].size() != wm.dim())
          throw CarnotError(Errc::dimension_mismatch, "glue must have dim(Wm) columns");
        image[rrow] = glue[rrow][t];
      }
      if (!wpm.contains(image))
        throw CarnotError(Errc::bad_params, "glue image leaves the target subspace");
      RatVector row(da + db, Rat(0));
      for (std::size_t c = 0; c < da; ++c) row[c] = -wm.basis()[t][c];
      for (std::size_t c = 0; c < db; ++c) row[da + c] = image[c];
      rows.push_back(std::move(row));
    }
    if (matrix_rank(rows) != wm.dim())
      throw CarnotError(Errc::bad_params, "glue is not injective");
    ideal.layers.push_back(Subspace::span(da + db, rows));
  }

  QuotientResult quot = quotient_by_graded_ideal(*sum.algebra, ideal);

  ProductResult result;
  result.algebra = quot.algebra;
  auto renamed = std::make_shared<CarnotAlgebra>(*result.algebra);
  renamed->rename("central_" + a.name() + "_" + b.name());
  result.algebra = renamed;
  result.emb_a = matmul(quot.projection, sum.emb_a);
  result.emb_b = matmul(quot.projection, sum.emb_b);

  auto report_a = verify_graded_map(a, *result.algebra, result.emb_a);
  auto report_b = verify_graded_map(b, *result.algebra, result.emb_b);
  if (!report_a.graded_homomorphism() || !report_a.injective ||
      !report_b.graded_homomorphism() || !report_b.injective)
    throw CarnotError(Errc::bad_params, "factor embeddings fail to be graded monomorphisms");
  return result;
}

ProductResult level_one_product(const CarnotAlgebra& a, const CarnotAlgebra& b,
                                const RatVector& x0, const RatVector& x0p,
                                const Subspace& u1, const Subspace& u1p) {
  if (a.step() != 2 || b.step() != 2)
    throw CarnotError(Errc::not_two_step, "level one product requires 2-step factors");
  const std::size_t d1a = a.layer_dims()[0], d1b = b.layer_dims()[0];
  const std::size_t d2a = a.layer_dims()[1], d2b = b.layer_dims()[1];
  if (x0.size() != d1a || x0p.size() != d1b)
    throw CarnotError(Errc::dimension_mismatch, "X0 must be a first-layer vector");
  if (is_zero(x0) || is_zero(x0p))
    throw CarnotError(Errc::bad_params, "X0 must be nonzero");
  if (u1.ambient() != d1a || u1p.ambient() != d1b)
    throw CarnotError(Errc::dimension_mismatch, "U1 must live in the first layer");
  if (u1.dim() != d1a - 1 || u1.contains(x0))
    throw CarnotError(Errc::not_complement, "U1 must complement the line through X0");
  if (u1p.dim() != d1b - 1 || u1p.contains(x0p))
    throw CarnotError(Errc::not_complement, "U1' must complement the line through X0'");

  const std::size_t ua = d1a - 1, ub = d1b - 1;
  std::vector<std::size_t> dims{ua + ub + 1, d2a + d2b};
  const std::size_t n = dims[0] + dims[1];
  const std::size_t xi = ua + ub;          // index of X
  const std::size_t s2 = dims[0];          // start of the second layer
  auto lift_a = [&](const RatVector& first, RatVector& out) {
    for (std::size_t c = 0; c < d1a; ++c) out[c] = first[c];
  };
  auto lift_b = [&](const RatVector& first, RatVector& out) {
    for (std::size_t c = 0; c < d1b; ++c) out[c] = first[c];
  };

  // brackets in the factors, written into the product's second layer
  auto bracket_a = [&](const RatVector& x, const RatVector& y) {
    RatVector xa(a.dim(), Rat(0)), ya(a.dim(), Rat(0));
    lift_a(x, xa);
    lift_a(y, ya);
    RatVector w = bracket_vec(a, xa, ya);
    return RatVector(w.begin() + d1a, w.end());
  };
  auto bracket_b = [&](const RatVector& x, const RatVector& y) {
    RatVector xb(b.dim(), Rat(0)), yb(b.dim(), Rat(0));
    lift_b(x, xb);
    lift_b(y, yb);
    RatVector w = bracket_vec(b, xb, yb);
    return RatVector(w.begin() + d1b, w.end());
  };

  BracketTable table;
  auto add_terms = [&](std::size_t i, std::size_t j, const RatVector& v2a, const RatVector& v2b) {
    std::vector<BracketTerm> terms;
    for (std::size_t t = 0; t < d2a; ++t)
      if (v2a[t] != 0) terms.push_back({s2 + t, v2a[t]});
    for (std::size_t t = 0; t < d2b; ++t)
      if (v2b[t] != 0) terms.push_back({s2 + d2a + t, v2b[t]});
    if (!terms.empty()) table[{i, j}] = std::move(terms);
  };

  const RatVector zero2a(d2a, Rat(0)), zero2b(d2b, Rat(0));
  for (std::size_t i = 0; i < ua; ++i) {
    for (std::size_t j = i + 1; j < ua; ++j)
      add_terms(i, j, bracket_a(u1.basis()[i], u1.basis()[j]), zero2b);
    add_terms(i, xi, bracket_a(u1.basis()[i], x0), zero2b);
  }
  for (std::size_t i = 0; i < ub; ++i) {
    for (std::size_t j = i + 1; j < ub; ++j)
      add_terms(ua + i, ua + j, zero2a, bracket_b(u1p.basis()[i], u1p.basis()[j]));
    add_terms(ua + i, xi, zero2a, bracket_b(u1p.basis()[i], x0p));
  }

  ProductResult result;
  result.algebra = std::make_shared<CarnotAlgebra>("level1_" + a.name() + "_" + b.name(), dims,
                                                   std::vector<std::string>{}, std::move(table));

  // embeddings: decompose V1 vectors in the basis {U1 rows, X0}
  auto factor_embedding = [&](const CarnotAlgebra& f, const Subspace& u, const RatVector& x0f,
                              std::size_t ustart, std::size_t v2start) {
    const std::size_t d1f = f.layer_dims()[0];
    RatMatrix basis_cols(d1f, RatVector(d1f, Rat(0)));
    for (std::size_t t = 0; t < u.dim(); ++t)
      for (std::size_t c = 0; c < d1f; ++c) basis_cols[c][t] = u.basis()[t][c];
    for (std::size_t c = 0; c < d1f; ++c) basis_cols[c][d1f - 1] = x0f[c];
    auto inv = inverse(basis_cols);
    if (!inv) throw CarnotError(Errc::not_complement, "U1 + R*X0 does not span V1");
    RatMatrix emb(n, RatVector(f.dim(), Rat(0)));
    for (std::size_t col = 0; col < d1f; ++col) {
      RatVector unit(d1f, Rat(0));
      unit[col] = 1;
      RatVector coords = matvec(*inv, unit);  // (u-coefficients..., X0-coefficient)
      for (std::size_t t = 0; t + 1 < d1f; ++t) emb[ustart + t][col] = coords[t];
      emb[xi][col] = coords[d1f - 1];
    }
    for (std::size_t t = 0; t < f.layer_dims()[1]; ++t)
      emb[v2start + t][d1f + t] = 1;
    return emb;
  };
  result.emb_a = factor_embedding(a, u1, x0, 0, s2);
  result.emb_b = factor_embedding(b, u1p, x0p, ua, s2 + d2a);

  auto report_a = verify_graded_map(a, *result.algebra, result.emb_a);
  auto report_b = verify_graded_map(b, *result.algebra, result.emb_b);
  if (!report_a.graded_homomorphism() || !report_a.injective ||
      !report_b.graded_homomorphism() || !report_b.injective)
    throw CarnotError(Errc::bad_params, "factor embeddings fail to be graded monomorphisms");
  return result;
}

namespace {

std::shared_ptr<const CarnotAlgebra> make_heisenberg(std::size_t n) {
  if (n < 1) throw CarnotError(Errc::bad_params, "heisenberg needs n >= 1");
  BracketTable table;
  for (std::size_t i = 0; i < n; ++i) table[{2 * i, 2 * i + 1}] = {{2 * n, Rat(1)}};
  return std::make_shared<CarnotAlgebra>("heisenberg_" + std::to_string(n),
                                         std::vector<std::size_t>{2 * n, 1},
                                         std::vector<std::string>{}, std::move(table));
}

std::shared_ptr<const CarnotAlgebra> make_abelian(std::size_t n) {
  if (n < 1) throw CarnotError(Errc::bad_params, "abelian needs n >= 1");
  return std::make_shared<CarnotAlgebra>("abelian_" + std::to_string(n),
                                         std::vector<std::size_t>{n},
                                         std::vector<std::string>{}, BracketTable{});
}

std::shared_ptr<const CarnotAlgebra> make_model_filiform(std::size_t r) {
  if (r < 2) throw CarnotError(Errc::bad_params, "model filiform needs step >= 2");
  std::vector<std::size_t> dims(r, 1);
  dims[0] = 2;
  // [e1, e_i] = e_{i+1} for i = 2..r (0-based: [e_0, e_i] = e_{i+1} for i = 1..r-1)
  BracketTable table;
  for (std::size_t i = 1; i <= r - 1; ++i) table[{0, i}] = {{i + 1, Rat(1)}};
  return std::make_shared<CarnotAlgebra>("model_filiform_" + std::to_string(r), dims,
                                         std::vector<std::string>{}, std::move(table));
}

std::string pair_label(std::size_t i, std::size_t j, std::size_t n) {
  if (n <= 9) return "X" + std::to_string(i) + std::to_string(j);
  return "X" + std::to_string(i) + "_" + std::to_string(j);
}

std::shared_ptr<const CarnotAlgebra> make_free_2step(std::size_t n) {
  if (n < 2) throw CarnotError(Errc::bad_params, "free 2-step needs n >= 2 generators");
  std::vector<std::string> labels;
  for (std::size_t i = 1; i <= n; ++i) labels.push_back("X" + std::to_string(i));
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = i + 1; j <= n; ++j) {
      labels.push_back(pair_label(i, j, n));
      pairs.emplace_back(i, j);
    }
  BracketTable table;
  for (std::size_t p = 0; p < pairs.size(); ++p)
    table[{pairs[p].first - 1, pairs[p].second - 1}] = {{n + p, Rat(1)}};
  return std::make_shared<CarnotAlgebra>("free_2step_" + std::to_string(n),
                                         std::vector<std::size_t>{n, n * (n - 1) / 2},
                                         std::move(labels), std::move(table));
}

std::shared_ptr<const CarnotAlgebra> make_paper_example_1() {
  std::vector<std::string> labels{"X", "Y", "X'", "Y'", "X1", "X2",
                                  "Z", "X12", "X121", "X122"};
  std::vector<LabeledBracket> brackets{
      {"X", "Y", {{Rat(1), "Z"}}},
      {"X'", "Y'", {{Rat(1), "Z"}}},
      {"X1", "X2", {{Rat(1), "X12"}}},
      {"X", "X2", {{Rat(1), "X12"}}},
      {"Y", "X2", {{Rat(1), "X12"}}},
      {"X12", "X1", {{Rat(1), "X121"}}},
      {"X12", "X", {{Rat(1), "X121"}}},
      {"X12", "Y", {{Rat(1), "X121"}}},
      {"X12", "X2", {{Rat(1), "X122"}}},
  };
  return build_by_labels("paper_example_1", {6, 2, 2}, labels, brackets);
}

std::shared_ptr<const CarnotAlgebra> make_paper_example_3() {
  auto f4 = make_model_filiform(4);
  auto f26 = make_free_2step(6);
  auto sum = direct_product(*f4, *f26);
  std::vector<LabeledBracket> extra{
      {"e2", "X2", {{Rat(1), "X13"}}}, {"e2", "X3", {{Rat(1), "X24"}}},
      {"e2", "X4", {{Rat(1), "X35"}}}, {"e2", "X6", {{Rat(1), "X15"}}},
      {"e1", "X1", {{Rat(1), "X26"}}}, {"e1", "X5", {{Rat(1), "X46"}}},
  };
  const auto& base = *sum.algebra;
  BracketTable table = base.table();
  auto index_of = [&](const std::string& label) {
    auto idx = base.index_of_label(label);
    if (!idx) throw CarnotError(Errc::bad_params, "unknown label " + label);
    return *idx;
  };
  for (const auto& b : extra) {
    const std::size_t i = index_of(b.i), j = index_of(b.j);
    auto& terms = table[{std::min(i, j), std::max(i, j)}];
    const Rat sign = i < j ? 1 : -1;
    for (const auto& [c, k] : b.terms) terms.push_back({index_of(k), sign * c});
  }
  return std::make_shared<CarnotAlgebra>("paper_example_3", base.layer_dims(), base.labels(),
                                         std::move(table));
}

std::optional<std::size_t> parse_param(const std::string& name, const std::string& prefix) {
  if (name.size() <= prefix.size() || name.compare(0, prefix.size(), prefix) != 0)
    return std::nullopt;
  std::size_t value = 0;
  for (std::size_t p = prefix.size(); p < name.size(); ++p) {
    if (name[p] < '0' || name[p] > '9') return std::nullopt;
    value = value * 10 + static_cast<std::size_t>(name[p] - '0');
  }
  return value;
}

}  // namespace

std::shared_ptr<const CarnotAlgebra> catalog(const std::string& name) {
  if (name == "paper_example_1") return make_paper_example_1();
  if (name == "paper_example_3") return make_paper_example_3();
  if (auto n = parse_param(name, "heisenberg_")) return make_heisenberg(*n);
  if (auto n = parse_param(name, "abelian_")) return make_abelian(*n);
  if (auto n = parse_param(name, "model_filiform_")) return make_model_filiform(*n);
  if (auto n = parse_param(name, "free_2step_")) return make_free_2step(*n);
  throw CarnotError(Errc::unknown_catalog_name, "unknown catalog name: " + name);
}

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries{
      {"heisenberg_<n>", "Heisenberg algebra, dims [2n, 1]", "non-rigid", "[B]"},
      {"abelian_<n>", "abelian algebra, dims [n]", "non-rigid",
       "standard radial-map example (extra-paper fact)"},
      {"model_filiform_<r>", "model filiform algebra, dims [2, 1, ..., 1]", "rigid",
       "[X2] (step >= 3; step 2 is the first Heisenberg algebra)"},
      {"free_2step_<n>", "free nilpotent algebra of step 2 on n generators", std::nullopt, ""},
      {"paper_example_1", "3-step algebra with dims [6, 2, 2]", std::nullopt, ""},
      {"paper_example_3", "model filiform step 4 glued to the free 2-step algebra on 6 generators",
       std::nullopt, ""},
  };
  return entries;
}

}  // namespace carnot
