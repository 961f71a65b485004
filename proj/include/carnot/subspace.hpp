#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "carnot/matrix.hpp"

namespace carnot {

/// Linear subspace of Q^ambient held as a canonical reduced-echelon basis.
/// The canonical form is unique for a given subspace, so operator== decides
/// subspace equality.
class Subspace {
public:
  Subspace() = default;

  static Subspace zero(std::size_t ambient);
  static Subspace full(std::size_t ambient);
  static Subspace span(std::size_t ambient, const RatMatrix& rows);

  std::size_t ambient() const { return ambient_; }
  std::size_t dim() const { return rows_.size(); }
  bool is_zero() const { return rows_.empty(); }
  bool is_full() const { return dim() == ambient_; }

  const RatMatrix& basis() const { return rows_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  /// Residual of v after eliminating pivot coordinates; zero iff v lies here.
  RatVector reduce(RatVector v) const;
  bool contains(const RatVector& v) const;
  bool contains(const Subspace& other) const;

  /// Coefficients of v in the echelon basis, or nullopt if v is outside.
  std::optional<RatVector> coordinates_of(const RatVector& v) const;

  Subspace join(const Subspace& other) const;

  /// Non-pivot columns in increasing order: the deterministic echelon
  /// completion of this basis to a basis of the ambient space.
  std::vector<std::size_t> complement_columns() const;

  friend bool operator==(const Subspace& a, const Subspace& b);
  friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }

private:
  std::size_t ambient_ = 0;
  RatMatrix rows_;
  std::vector<std::size_t> pivots_;
};

}  // namespace carnot
