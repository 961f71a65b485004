#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "carnot/subspace.hpp"

namespace carnot {

struct BracketTerm {
  std::size_t target;  // 0-based basis index
  Rat coeff;
};

/// Sparse structure constants, keyed by (i, j) with i < j (0-based).
/// [e_j, e_i] = -[e_i, e_j] is synthesized; diagonal brackets are zero.
using BracketTable = std::map<std::pair<std::size_t, std::size_t>, std::vector<BracketTerm>>;

/// A graded Lie algebra presented by layer dimensions and exact rational
/// structure constants over a layer-major basis (all of V1 first, then V2, ...).
/// Construction checks only structural well-formedness (index ranges, i < j);
/// the Carnot axioms are checked by validate().
class CarnotAlgebra {
public:
  CarnotAlgebra(std::string name, std::vector<std::size_t> layer_dims,
                std::vector<std::string> labels, BracketTable table);

  const std::string& name() const { return name_; }
  void rename(std::string name) { name_ = std::move(name); }

  std::size_t step() const { return layer_dims_.size(); }
  std::size_t dim() const { return dim_; }
  const std::vector<std::size_t>& layer_dims() const { return layer_dims_; }

  /// Layers are 1-based throughout, matching V_1 ... V_r.
  std::size_t layer_dim(std::size_t layer) const;
  std::size_t layer_start(std::size_t layer) const;
  std::size_t layer_of(std::size_t index) const { return layer_of_[index]; }

  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<std::size_t> index_of_label(const std::string& label) const;

  const BracketTable& table() const { return table_; }

private:
  std::string name_;
  std::vector<std::size_t> layer_dims_;
  std::size_t dim_ = 0;
  std::vector<std::string> labels_;
  BracketTable table_;
  std::vector<std::size_t> layer_of_;     // per index, 1-based layer
  std::vector<std::size_t> layer_start_;  // per layer (1-based), 0-based offset
};

using AlgebraPtr = std::shared_ptr<const CarnotAlgebra>;

/// Same dims and structure constants; names and labels are ignored.
bool structurally_equal(const CarnotAlgebra& a, const CarnotAlgebra& b);

/// Exact rational coordinate vector over an algebra's basis. Doubles as a
/// group point in exponential coordinates.
class Element {
public:
  Element(AlgebraPtr alg, RatVector coords);

  static Element zero(const AlgebraPtr& alg);
  static Element basis(const AlgebraPtr& alg, std::size_t index);

  const CarnotAlgebra& algebra() const { return *alg_; }
  const AlgebraPtr& algebra_ptr() const { return alg_; }
  const RatVector& coords() const { return coords_; }
  const Rat& operator[](std::size_t i) const { return coords_[i]; }

  bool is_zero() const { return carnot::is_zero(coords_); }
  RatVector layer_block(std::size_t layer) const;
  /// True iff all coordinates outside V_1 vanish.
  bool is_horizontal() const;

  Element operator+(const Element& rhs) const;
  Element operator-(const Element& rhs) const;
  Element operator-() const;
  friend Element operator*(const Rat& c, const Element& x);

private:
  AlgebraPtr alg_;
  RatVector coords_;
};

void require_same_algebra(const Element& x, const Element& y);

struct ValidationReport {
  bool storage_ok = true;
  bool grading_ok = true;
  bool jacobi_ok = true;
  bool generation_ok = true;
  std::vector<std::string> failures;

  bool pass() const { return storage_ok && grading_ok && jacobi_ok && generation_ok; }
};

/// Checks the Carnot axioms exactly: storage conventions, grading
/// [V_a, V_b] subset V_{a+b}, the Jacobi identity over all basis triples,
/// and generation span[V_1, V_i] = V_{i+1}.
ValidationReport validate(const CarnotAlgebra& alg);

/// Raw bracket on coordinate vectors; the Element overload wraps this.
RatVector bracket_vec(const CarnotAlgebra& alg, const RatVector& x, const RatVector& y);
Element bracket(const Element& x, const Element& y);

/// Columns of ad(x): column j is [x, e_j].
std::vector<RatVector> ad_columns(const CarnotAlgebra& alg, const RatVector& x);
RatMatrix ad_matrix(const Element& x);
/// Restriction of ad(x) to the domain V_layer (n x d_layer).
RatMatrix ad_matrix_on_layer(const Element& x, std::size_t layer);

/// Anisotropic dilation: layer-i block scaled by t^i. Requires t > 0.
Element dilate(const Rat& t, const Element& x);

/// sum_i i * dim(V_i)
std::size_t hausdorff_dimension(const CarnotAlgebra& alg);

struct GradedMapReport {
  bool layer_preserving = false;
  bool homomorphism = false;
  bool injective = false;
  bool surjective = false;

  bool graded_homomorphism() const { return layer_preserving && homomorphism; }
  bool graded_isomorphism() const { return graded_homomorphism() && injective && surjective; }
};

/// map is dim(dst) x dim(src); column i is the image of src's e_i.
GradedMapReport verify_graded_map(const CarnotAlgebra& src, const CarnotAlgebra& dst,
                                  const RatMatrix& map);

}  // namespace carnot
