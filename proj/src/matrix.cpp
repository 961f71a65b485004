#include "carnot/matrix.hpp"

#include "carnot/errors.hpp"

namespace carnot {

RatMatrix identity_matrix(std::size_t n) {
  RatMatrix m(n, RatVector(n, Rat(0)));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

RatMatrix matmul(const RatMatrix& a, const RatMatrix& b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t rows = a.size(), inner = b.size(), cols = b[0].size();
  for (const auto& r : a)
    if (r.size() != inner)
      throw CarnotError(Errc::dimension_mismatch, "matmul: incompatible shapes");
  RatMatrix out(rows, RatVector(cols, Rat(0)));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = 0; k < inner; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < cols; ++j)
        if (b[k][j] != 0) out[i][j] += a[i][k] * b[k][j];
    }
  return out;
}

RatVector matvec(const RatMatrix& a, const RatVector& v) {
  RatVector out(a.size(), Rat(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != v.size())
      throw CarnotError(Errc::dimension_mismatch, "matvec: incompatible shapes");
    for (std::size_t j = 0; j < v.size(); ++j)
      if (a[i][j] != 0 && v[j] != 0) out[i] += a[i][j] * v[j];
  }
  return out;
}

Echelon reduced_echelon(RatMatrix m) {
  Echelon result;
  if (m.empty()) return result;
  const std::size_t width = m[0].size();
  for (const auto& r : m)
    if (r.size() != width)
      throw CarnotError(Errc::dimension_mismatch, "echelon: ragged rows");

  std::size_t row = 0;
  for (std::size_t col = 0; col < width && row < m.size(); ++col) {
    std::size_t pivot = row;
    while (pivot < m.size() && m[pivot][col] == 0) ++pivot;
    if (pivot == m.size()) continue;
    std::swap(m[row], m[pivot]);
    const Rat inv = 1 / m[row][col];
    for (auto& c : m[row]) c *= inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == row || m[i][col] == 0) continue;
      const Rat factor = m[i][col];
      for (std::size_t j = col; j < width; ++j)
        if (m[row][j] != 0) m[i][j] -= factor * m[row][j];
    }
    result.pivots.push_back(col);
    ++row;
  }
  m.resize(row);
  result.rows = std::move(m);
  return result;
}

std::size_t matrix_rank(RatMatrix m) { return reduced_echelon(std::move(m)).pivots.size(); }

RatMatrix kernel_basis(const RatMatrix& m, std::size_t width) {
  Echelon e = reduced_echelon(m);
  std::vector<bool> is_pivot(width, false);
  for (auto p : e.pivots) is_pivot[p] = true;

  RatMatrix basis;
  for (std::size_t f = 0; f < width; ++f) {
    if (is_pivot[f]) continue;
    RatVector v(width, Rat(0));
    v[f] = 1;
    for (std::size_t t = 0; t < e.pivots.size(); ++t) v[e.pivots[t]] = -e.rows[t][f];
    basis.push_back(std::move(v));
  }
  return reduced_echelon(std::move(basis)).rows;
}

std::optional<RatMatrix> inverse(const RatMatrix& m) {
  const std::size_t n = m.size();
  if (n == 0) return RatMatrix{};
  RatMatrix aug(n, RatVector(2 * n, Rat(0)));
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i].size() != n) throw CarnotError(Errc::dimension_mismatch, "inverse: not square");
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = m[i][j];
    aug[i][n + i] = 1;
  }
  Echelon e = reduced_echelon(std::move(aug));
  if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) return std::nullopt;
  RatMatrix inv(n, RatVector(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = e.rows[i][n + j];
  return inv;
}

bool RankAccumulator::insert(RatVector v) {
  const std::size_t width = v.size();
  for (std::size_t t = 0; t < rows_.size(); ++t) {
    const std::size_t l = lead_[t];
    if (l < width && v[l] != 0) {
      const Rat factor = v[l];
      for (std::size_t j = l; j < width; ++j)
        if (rows_[t][j] != 0) v[j] -= factor * rows_[t][j];
    }
  }
  std::size_t lead = 0;
  while (lead < width && v[lead] == 0) ++lead;
  if (lead == width) return false;
  const Rat inv = 1 / v[lead];
  for (std::size_t j = lead; j < width; ++j) v[j] *= inv;
  std::size_t pos = 0;
  while (pos < lead_.size() && lead_[pos] < lead) ++pos;
  rows_.insert(rows_.begin() + pos, std::move(v));
  lead_.insert(lead_.begin() + pos, lead);
  return true;
}

}  // namespace carnot
