#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "carnot/rational.hpp"

namespace carnot {

/// Dense row-major matrix of exact rationals.
using RatMatrix = std::vector<RatVector>;

RatMatrix identity_matrix(std::size_t n);
RatMatrix matmul(const RatMatrix& a, const RatMatrix& b);
RatVector matvec(const RatMatrix& a, const RatVector& v);

struct Echelon {
  RatMatrix rows;                    // reduced row echelon, zero rows dropped
  std::vector<std::size_t> pivots;   // strictly increasing pivot columns
};

/// Reduced row echelon form (pivots 1, pivot columns cleared). Deterministic:
/// first nonzero row is chosen as pivot at each column.
Echelon reduced_echelon(RatMatrix m);

std::size_t matrix_rank(RatMatrix m);

/// Canonical (echelon-form) basis of the right null space {v : m v = 0}.
RatMatrix kernel_basis(const RatMatrix& m, std::size_t width);

std::optional<RatMatrix> inverse(const RatMatrix& m);

/// Incremental rank computation: feed row vectors, query dimension of their span.
class RankAccumulator {
public:
  /// Returns true if v increased the rank.
  bool insert(RatVector v);
  std::size_t dim() const { return rows_.size(); }
  const RatMatrix& rows() const { return rows_; }

private:
  RatMatrix rows_;                 // kept in row-echelon order by leading index
  std::vector<std::size_t> lead_;
};

}  // namespace carnot
