#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "carnot/algebra.hpp"

namespace carnot {

/// Graded ideal I = sum_j (I cap V_j), layer-local coordinates per layer.
struct GradedIdeal {
  std::vector<Subspace> layers;  // one per layer of the ambient algebra
};

bool is_graded_ideal(const CarnotAlgebra& alg, const GradedIdeal& ideal);

struct ProductResult {
  std::shared_ptr<const CarnotAlgebra> algebra;
  RatMatrix emb_a;  // dim(product) x dim(a), graded monomorphism
  RatMatrix emb_b;
};

/// Layer dims add, brackets act factor-wise, cross brackets vanish.
/// Steps may differ; the shorter algebra is padded with zero layers.
ProductResult direct_product(const CarnotAlgebra& a, const CarnotAlgebra& b);

struct QuotientResult {
  std::shared_ptr<const CarnotAlgebra> algebra;
  RatMatrix projection;  // dim(quotient) x dim(ambient)
};

/// Quotient by a graded ideal with the deterministic echelon-completion
/// complement per layer. Trailing zero layers are trimmed.
QuotientResult quotient_by_graded_ideal(const CarnotAlgebra& alg, const GradedIdeal& ideal);

/// Glue top layers along the isomorphism f : Wm -> Wpm and quotient by
/// I = {f(w) - w}. glue has dim(wpm-layer) rows x dim(wm) columns; column t is
/// the image of wm's t-th basis row in b's top-layer coordinates.
ProductResult central_product(const CarnotAlgebra& a, const CarnotAlgebra& b,
                              const Subspace& wm, const Subspace& wpm,
                              const RatMatrix& glue);

/// Level one product of 2-step algebras: first layer U1 + U1' + R*X, second
/// layer V2 + V2'; [u + u' + aX, w + w' + bX] = [u,w] + b[u,X0] + [u',w'] +
/// b[u',X0'] + a[X0,w] + a[X0',w']. x0/x0p are first-layer coordinate vectors;
/// u1/u1p are complements of their lines.
ProductResult level_one_product(const CarnotAlgebra& a, const CarnotAlgebra& b,
                                const RatVector& x0, const RatVector& x0p,
                                const Subspace& u1, const Subspace& u1p);

/// Named algebras: heisenberg_<n>, abelian_<n>, model_filiform_<r>,
/// free_2step_<n>, paper_example_1, paper_example_3.
std::shared_ptr<const CarnotAlgebra> catalog(const std::string& name);

struct CatalogEntry {
  std::string name;         // family name with <param> placeholder or exact name
  std::string provenance;
  std::optional<std::string> known_status;  // "rigid" / "non-rigid"
  std::string citation;
};

const std::vector<CatalogEntry>& catalog_entries();

}  // namespace carnot
