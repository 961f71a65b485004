#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "carnot/algebra.hpp"

namespace carnot {

/// rank(x) = dim im ad(x), exact over Q.
std::size_t rank_of(const Element& x);
/// rank of ad(x) restricted to the domain V_layer.
std::size_t rank_on_layer(const Element& x, std::size_t layer);

/// True iff every (k+1)x(k+1) minor of ad(x) vanishes, equivalently the
/// (k+1)-fold exterior power of ad(x) is the zero map. Computed on an integer
/// matrix (denominators cleared; column scaling preserves minor vanishing) by
/// direct minor enumeration within a work budget, falling back to fraction-free
/// Bareiss elimination whose pivots are exact minors. Independent of rank_of's
/// rational elimination route.
bool wedge_rank_test(const Element& x, std::size_t k);

struct SurveyParams {
  long grid_radius = 2;
  std::size_t sparsity = 3;
  std::size_t samples = 500;
  std::uint64_t seed = 0;
  std::size_t enumeration_cap = 2'000'000;  // SearchBudgetExceeded beyond this
  std::size_t pit_budget = 200'000;         // GridBudgetExceeded beyond this
};

enum class Certification { exact_uniform_bound, heuristic_search };
std::string to_string(Certification c);

struct RankReport {
  std::optional<std::size_t> layer_restriction;
  std::size_t r_min_found = 0;
  std::vector<Element> witnesses;   // all distinct minimum achievers found
  Subspace span;                    // span of witnesses, first-layer coordinates
  std::size_t generic_rank = 0;     // maximum rank observed
  Certification certification = Certification::heuristic_search;
  std::string certification_note;
  SurveyParams params;
};

/// Deterministic scan of V_1: basis vectors, all integer combinations with
/// coefficients in [-g, g] supported on at most s basis vectors, then m seeded
/// random rational samples. Identical params and seed give identical reports.
RankReport min_rank_survey(const AlgebraPtr& alg,
                           std::optional<std::size_t> layer_restriction,
                           const SurveyParams& params = {});

/// Decides whether every x in V_1 has rank(x) <= k, as a polynomial identity:
/// each (k+1)-minor of ad(x) has degree <= k+1, so vanishing on the integer
/// grid {0..k+1}^{d1} is conclusive. Evaluations are counted lazily against
/// the budget with early exit on the first counterexample.
bool uniform_rank_bound(const CarnotAlgebra& alg, std::size_t k,
                        std::size_t budget = SurveyParams{}.pit_budget);
/// Layer-restricted variant used by the survey.
bool uniform_rank_bound_on_layer(const CarnotAlgebra& alg, std::size_t k,
                                 std::optional<std::size_t> layer_restriction,
                                 std::size_t budget);

/// Graded subalgebra W = W_1 + W_2 + ... of a parent algebra, bracket-closed.
struct GradedSubalgebra {
  AlgebraPtr parent;
  std::vector<Subspace> layers;  // layer-local coordinates, one per parent layer
  bool generated = false;        // W_{j+1} = span[W_1, W_j]
  std::shared_ptr<const CarnotAlgebra> standalone;  // W as a Carnot algebra (if it is one)
  RatMatrix embedding;           // parent_dim x total_dim, columns = lifted basis

  std::size_t total_dim() const;
  std::size_t top_layer() const;  // largest j with dim W_j > 0, 0 if empty
  bool equals_parent() const;
  /// Lift of the q-th basis vector (across layers) to parent coordinates.
  RatVector lifted_basis_vector(std::size_t q) const;
};

/// Subalgebra generated by W1 in V_1: W_{j+1} := span[W_1, W_j] until zero.
/// W1 may be given in first-layer coordinates (width d1) or ambient width
/// (support outside V_1 raises NotInFirstLayer).
GradedSubalgebra generated_subalgebra(const AlgebraPtr& alg, const Subspace& w1);

/// Assemble a graded subalgebra from explicit layers; verifies bracket closure.
GradedSubalgebra make_graded_subalgebra(const AlgebraPtr& alg, std::vector<Subspace> layers);

/// [e_j, W] subset W for every basis vector, exact span tests.
bool is_ideal(const CarnotAlgebra& alg, const GradedSubalgebra& sub);

/// N(W1) = {v in V_1 : [v, W1] subset <W1>}, exact linear solve.
Subspace normalizer(const AlgebraPtr& alg, const Subspace& w1);

/// {X in V_1 : [X, W1] subset span[W1, W1]}, exact linear solve.
Subspace theorem12_space(const AlgebraPtr& alg, const Subspace& w1);

/// Accepts W1 in first-layer or ambient width; returns first-layer width.
Subspace normalize_first_layer_subspace(const CarnotAlgebra& alg, const Subspace& w1);

}  // namespace carnot
