#include "carnot/algebra.hpp"

#include <algorithm>
#include <sstream>

#include "carnot/errors.hpp"

namespace carnot {

namespace {

std::vector<BracketTerm> normalize_terms(std::vector<BracketTerm> terms, std::size_t dim) {
  std::map<std::size_t, Rat> merged;
  for (auto& t : terms) {
    if (t.target >= dim)
      throw CarnotError(Errc::index_out_of_range, "bracket target index out of range");
    merged[t.target] += t.coeff;
  }
  std::vector<BracketTerm> out;
  for (auto& [k, c] : merged)
    if (c != 0) out.push_back({k, c});
  return out;
}

}  // namespace

CarnotAlgebra::CarnotAlgebra(std::string name, std::vector<std::size_t> layer_dims,
                             std::vector<std::string> labels, BracketTable table)
    : name_(std::move(name)), layer_dims_(std::move(layer_dims)) {
  if (layer_dims_.empty())
    throw CarnotError(Errc::bad_params, "algebra needs at least one layer");
  for (auto d : layer_dims_) {
    if (d == 0) throw CarnotError(Errc::bad_params, "zero layer dimension");
    dim_ += d;
  }
  layer_start_.resize(layer_dims_.size());
  layer_of_.resize(dim_);
  std::size_t offset = 0;
  for (std::size_t l = 0; l < layer_dims_.size(); ++l) {
    layer_start_[l] = offset;
    for (std::size_t j = 0; j < layer_dims_[l]; ++j) layer_of_[offset + j] = l + 1;
    offset += layer_dims_[l];
  }

  if (labels.empty()) {
    labels_.reserve(dim_);
    for (std::size_t i = 0; i < dim_; ++i) labels_.push_back("e" + std::to_string(i + 1));
  } else {
    if (labels.size() != dim_)
      throw CarnotError(Errc::bad_params, "basis label count must equal total dimension");
    labels_ = std::move(labels);
  }

  for (auto& [key, terms] : table) {
    const auto [i, j] = key;
    if (i >= j) throw CarnotError(Errc::bad_params, "bracket table keys must have i < j");
    if (j >= dim_) throw CarnotError(Errc::index_out_of_range, "bracket index out of range");
    auto normalized = normalize_terms(terms, dim_);
    if (!normalized.empty()) table_[key] = std::move(normalized);
  }
}

std::size_t CarnotAlgebra::layer_dim(std::size_t layer) const {
  if (layer < 1 || layer > step())
    throw CarnotError(Errc::bad_layer_index, "layer index out of range");
  return layer_dims_[layer - 1];
}

std::size_t CarnotAlgebra::layer_start(std::size_t layer) const {
  if (layer < 1 || layer > step())
    throw CarnotError(Errc::bad_layer_index, "layer index out of range");
  return layer_start_[layer - 1];
}

std::optional<std::size_t> CarnotAlgebra::index_of_label(const std::string& label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return i;
  return std::nullopt;
}

bool structurally_equal(const CarnotAlgebra& a, const CarnotAlgebra& b) {
  if (a.layer_dims() != b.layer_dims()) return false;
  const auto& ta = a.table();
  const auto& tb = b.table();
  if (ta.size() != tb.size()) return false;
  auto ia = ta.begin();
  auto ib = tb.begin();
  for (; ia != ta.end(); ++ia, ++ib) {
    if (ia->first != ib->first || ia->second.size() != ib->second.size()) return false;
    for (std::size_t t = 0; t < ia->second.size(); ++t)
      if (ia->second[t].target != ib->second[t].target ||
          ia->second[t].coeff != ib->second[t].coeff)
        return false;
  }
  return true;
}

Element::Element(AlgebraPtr alg, RatVector coords) : alg_(std::move(alg)), coords_(std::move(coords)) {
  if (!alg_) throw CarnotError(Errc::bad_params, "element without algebra");
  if (coords_.size() != alg_->dim())
    throw CarnotError(Errc::dimension_mismatch, "element coordinate count mismatch");
}

Element Element::zero(const AlgebraPtr& alg) { return Element(alg, RatVector(alg->dim(), Rat(0))); }

Element Element::basis(const AlgebraPtr& alg, std::size_t index) {
  if (index >= alg->dim())
    throw CarnotError(Errc::index_out_of_range, "basis index out of range");
  RatVector v(alg->dim(), Rat(0));
  v[index] = 1;
  return Element(alg, std::move(v));
}

RatVector Element::layer_block(std::size_t layer) const {
  const std::size_t start = alg_->layer_start(layer);
  const std::size_t d = alg_->layer_dim(layer);
  return RatVector(coords_.begin() + start, coords_.begin() + start + d);
}

bool Element::is_horizontal() const {
  for (std::size_t i = alg_->layer_dims()[0]; i < coords_.size(); ++i)
    if (coords_[i] != 0) return false;
  return true;
}

Element Element::operator+(const Element& rhs) const {
  require_same_algebra(*this, rhs);
  RatVector v = coords_;
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += rhs.coords_[i];
  return Element(alg_, std::move(v));
}

Element Element::operator-(const Element& rhs) const {
  require_same_algebra(*this, rhs);
  RatVector v = coords_;
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= rhs.coords_[i];
  return Element(alg_, std::move(v));
}

Element Element::operator-() const {
  RatVector v = coords_;
  for (auto& c : v) c = -c;
  return Element(alg_, std::move(v));
}

Element operator*(const Rat& c, const Element& x) {
  RatVector v = x.coords_;
  for (auto& e : v) e *= c;
  return Element(x.alg_, std::move(v));
}

void require_same_algebra(const Element& x, const Element& y) {
  if (x.algebra_ptr() == y.algebra_ptr()) return;
  if (structurally_equal(x.algebra(), y.algebra())) return;
  throw CarnotError(Errc::algebra_mismatch, "elements belong to different algebras");
}

RatVector bracket_vec(const CarnotAlgebra& alg, const RatVector& x, const RatVector& y) {
  if (x.size() != alg.dim() || y.size() != alg.dim())
    throw CarnotError(Errc::dimension_mismatch, "bracket coordinate count mismatch");
  RatVector out(alg.dim(), Rat(0));
  for (const auto& [key, terms] : alg.table()) {
    const auto [i, j] = key;
    const Rat factor = x[i] * y[j] - x[j] * y[i];
    if (factor == 0) continue;
    for (const auto& t : terms) out[t.target] += factor * t.coeff;
  }
  return out;
}

Element bracket(const Element& x, const Element& y) {
  require_same_algebra(x, y);
  return Element(x.algebra_ptr(), bracket_vec(x.algebra(), x.coords(), y.coords()));
}

std::vector<RatVector> ad_columns(const CarnotAlgebra& alg, const RatVector& x) {
  const std::size_t n = alg.dim();
  std::vector<RatVector> cols(n, RatVector(n, Rat(0)));
  for (const auto& [key, terms] : alg.table()) {
    const auto [i, j] = key;
    if (x[i] != 0)
      for (const auto& t : terms) cols[j][t.target] += x[i] * t.coeff;
    if (x[j] != 0)
      for (const auto& t : terms) cols[i][t.target] -= x[j] * t.coeff;
  }
  return cols;
}

RatMatrix ad_matrix(const Element& x) {
  const std::size_t n = x.algebra().dim();
  auto cols = ad_columns(x.algebra(), x.coords());
  RatMatrix m(n, RatVector(n, Rat(0)));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i)
      if (cols[j][i] != 0) m[i][j] = cols[j][i];
  return m;
}

RatMatrix ad_matrix_on_layer(const Element& x, std::size_t layer) {
  const auto& alg = x.algebra();
  const std::size_t n = alg.dim();
  const std::size_t start = alg.layer_start(layer);
  const std::size_t d = alg.layer_dim(layer);
  auto cols = ad_columns(alg, x.coords());
  RatMatrix m(n, RatVector(d, Rat(0)));
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < n; ++i)
      if (cols[start + j][i] != 0) m[i][j] = cols[start + j][i];
  return m;
}

Element dilate(const Rat& t, const Element& x) {
  if (t <= 0) throw CarnotError(Errc::non_positive_scale, "dilation requires t > 0");
  const auto& alg = x.algebra();
  RatVector v = x.coords();
  Rat power = 1;
  for (std::size_t layer = 1; layer <= alg.step(); ++layer) {
    power *= t;
    const std::size_t start = alg.layer_start(layer);
    for (std::size_t j = 0; j < alg.layer_dim(layer); ++j) v[start + j] *= power;
  }
  return Element(x.algebra_ptr(), std::move(v));
}

std::size_t hausdorff_dimension(const CarnotAlgebra& alg) {
  std::size_t q = 0;
  for (std::size_t l = 0; l < alg.step(); ++l) q += (l + 1) * alg.layer_dims()[l];
  return q;
}

ValidationReport validate(const CarnotAlgebra& alg) {
  ValidationReport report;
  const std::size_t n = alg.dim();
  const std::size_t r = alg.step();

  // storage conventions: i < j keys, in-range targets, nonzero coefficients
  for (const auto& [key, terms] : alg.table()) {
    const auto [i, j] = key;
    if (i >= j || j >= n) {
      report.storage_ok = false;
      report.failures.push_back("storage: bad key (" + std::to_string(i + 1) + "," +
                                std::to_string(j + 1) + ")");
    }
    for (const auto& t : terms)
      if (t.target >= n || t.coeff == 0) {
        report.storage_ok = false;
        report.failures.push_back("storage: bad term in bracket (" + std::to_string(i + 1) +
                                  "," + std::to_string(j + 1) + ")");
      }
  }

  // grading: targets of [V_a, V_b] lie in V_{a+b}; empty when a+b > r
  for (const auto& [key, terms] : alg.table()) {
    const auto [i, j] = key;
    const std::size_t want = alg.layer_of(i) + alg.layer_of(j);
    for (const auto& t : terms) {
      if (want > r || alg.layer_of(t.target) != want) {
        report.grading_ok = false;
        report.failures.push_back("grading: [" + alg.labels()[i] + "," + alg.labels()[j] +
                                  "] hits " + alg.labels()[t.target]);
      }
    }
  }

  // Jacobi over all basis triples, exact
  std::vector<RatVector> basis(n, RatVector(n, Rat(0)));
  for (std::size_t i = 0; i < n; ++i) basis[i][i] = 1;
  for (std::size_t i = 0; i + 2 < n && report.jacobi_ok; ++i)
    for (std::size_t j = i + 1; j + 1 < n && report.jacobi_ok; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        RatVector sum = bracket_vec(alg, basis[i], bracket_vec(alg, basis[j], basis[k]));
        RatVector t2 = bracket_vec(alg, basis[j], bracket_vec(alg, basis[k], basis[i]));
        RatVector t3 = bracket_vec(alg, basis[k], bracket_vec(alg, basis[i], basis[j]));
        for (std::size_t c = 0; c < n; ++c) sum[c] += t2[c] + t3[c];
        if (!is_zero(sum)) {
          report.jacobi_ok = false;
          report.failures.push_back("jacobi: fails on (" + alg.labels()[i] + "," +
                                    alg.labels()[j] + "," + alg.labels()[k] + ")");
          break;
        }
      }

  // generation: span[V_1, V_i] = V_{i+1}
  for (std::size_t layer = 1; layer + 1 <= r; ++layer) {
    RankAccumulator acc;
    const std::size_t s1 = alg.layer_start(1), d1 = alg.layer_dim(1);
    const std::size_t si = alg.layer_start(layer), di = alg.layer_dim(layer);
    const std::size_t snext = alg.layer_start(layer + 1), dnext = alg.layer_dim(layer + 1);
    for (std::size_t a = 0; a < d1; ++a)
      for (std::size_t b = 0; b < di; ++b) {
        RatVector w = bracket_vec(alg, basis[s1 + a], basis[si + b]);
        acc.insert(RatVector(w.begin() + snext, w.begin() + snext + dnext));
      }
    if (acc.dim() != dnext) {
      report.generation_ok = false;
      report.failures.push_back("generation: span[V1, V" + std::to_string(layer) +
                                "] has dimension " + std::to_string(acc.dim()) + " < " +
                                std::to_string(dnext));
    }
  }

  return report;
}

GradedMapReport verify_graded_map(const CarnotAlgebra& src, const CarnotAlgebra& dst,
                                  const RatMatrix& map) {
  const std::size_t ns = src.dim(), nd = dst.dim();
  if (map.size() != nd)
    throw CarnotError(Errc::dimension_mismatch, "graded map must have dim(dst) rows");
  for (const auto& row : map)
    if (row.size() != ns)
      throw CarnotError(Errc::dimension_mismatch, "graded map must have dim(src) columns");

  GradedMapReport report;

  report.layer_preserving = true;
  for (std::size_t i = 0; i < ns && report.layer_preserving; ++i) {
    const std::size_t layer = src.layer_of(i);
    for (std::size_t row = 0; row < nd; ++row) {
      if (map[row][i] == 0) continue;
      if (layer > dst.step() || dst.layer_of(row) != layer) {
        report.layer_preserving = false;
        break;
      }
    }
  }

  auto image_of = [&](const RatVector& v) { return matvec(map, v); };
  std::vector<RatVector> basis(ns, RatVector(ns, Rat(0)));
  for (std::size_t i = 0; i < ns; ++i) basis[i][i] = 1;

  report.homomorphism = true;
  for (std::size_t i = 0; i < ns && report.homomorphism; ++i)
    for (std::size_t j = i + 1; j < ns; ++j) {
      RatVector lhs = image_of(bracket_vec(src, basis[i], basis[j]));
      RatVector rhs = bracket_vec(dst, image_of(basis[i]), image_of(basis[j]));
      bool equal = true;
      for (std::size_t c = 0; c < nd; ++c)
        if (lhs[c] != rhs[c]) {
          equal = false;
          break;
        }
      if (!equal) {
        report.homomorphism = false;
        break;
      }
    }

  const std::size_t rank = matrix_rank(map);
  report.injective = rank == ns;
  report.surjective = rank == nd;
  return report;
}

}  // namespace carnot
