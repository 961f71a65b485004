#include "carnot/subspace.hpp"

#include "carnot/errors.hpp"

namespace carnot {

Subspace Subspace::zero(std::size_t ambient) {
  Subspace s;
  s.ambient_ = ambient;
  return s;
}

Subspace Subspace::full(std::size_t ambient) {
  Subspace s;
  s.ambient_ = ambient;
  s.rows_ = identity_matrix(ambient);
  s.pivots_.resize(ambient);
  for (std::size_t i = 0; i < ambient; ++i) s.pivots_[i] = i;
  return s;
}

Subspace Subspace::span(std::size_t ambient, const RatMatrix& rows) {
  for (const auto& r : rows)
    if (r.size() != ambient)
      throw CarnotError(Errc::dimension_mismatch, "subspace row width mismatch");
  Subspace s;
  s.ambient_ = ambient;
  Echelon e = reduced_echelon(rows);
  s.rows_ = std::move(e.rows);
  s.pivots_ = std::move(e.pivots);
  return s;
}

RatVector Subspace::reduce(RatVector v) const {
  if (v.size() != ambient_)
    throw CarnotError(Errc::dimension_mismatch, "subspace reduce width mismatch");
  for (std::size_t t = 0; t < rows_.size(); ++t) {
    const Rat factor = v[pivots_[t]];
    if (factor == 0) continue;
    for (std::size_t j = pivots_[t]; j < ambient_; ++j)
      if (rows_[t][j] != 0) v[j] -= factor * rows_[t][j];
  }
  return v;
}

bool Subspace::contains(const RatVector& v) const { return carnot::is_zero(reduce(v)); }

bool Subspace::contains(const Subspace& other) const {
  if (other.ambient_ != ambient_) return false;
  for (const auto& r : other.rows_)
    if (!contains(r)) return false;
  return true;
}

std::optional<RatVector> Subspace::coordinates_of(const RatVector& v) const {
  if (v.size() != ambient_)
    throw CarnotError(Errc::dimension_mismatch, "subspace coordinates width mismatch");
  RatVector coeffs(rows_.size(), Rat(0));
  RatVector w = v;
  for (std::size_t t = 0; t < rows_.size(); ++t) {
    const Rat factor = w[pivots_[t]];
    if (factor == 0) continue;
    coeffs[t] = factor;
    for (std::size_t j = pivots_[t]; j < ambient_; ++j)
      if (rows_[t][j] != 0) w[j] -= factor * rows_[t][j];
  }
  if (!carnot::is_zero(w)) return std::nullopt;
  return coeffs;
}

Subspace Subspace::join(const Subspace& other) const {
  if (other.ambient_ != ambient_)
    throw CarnotError(Errc::dimension_mismatch, "subspace join ambient mismatch");
  RatMatrix rows = rows_;
  rows.insert(rows.end(), other.rows_.begin(), other.rows_.end());
  return span(ambient_, rows);
}

std::vector<std::size_t> Subspace::complement_columns() const {
  std::vector<bool> is_pivot(ambient_, false);
  for (auto p : pivots_) is_pivot[p] = true;
  std::vector<std::size_t> cols;
  for (std::size_t j = 0; j < ambient_; ++j)
    if (!is_pivot[j]) cols.push_back(j);
  return cols;
}

bool operator==(const Subspace& a, const Subspace& b) {
  return a.ambient_ == b.ambient_ && a.rows_ == b.rows_;
}

}  // namespace carnot
