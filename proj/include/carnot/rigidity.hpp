#pragma once

#include <optional>
#include <string>
#include <vector>

#include "carnot/rank_analysis.hpp"

namespace carnot {

enum class Verdict { rigid, non_rigid_known, unknown };
std::string to_string(Verdict v);

enum class Pedigree { min_rank_span, user_asserted };
std::string to_string(Pedigree p);

struct RigidityCertificate;

/// One applied criterion. Rule ids: T1.1 (2-step reducible first layer),
/// T1.2 (some X outside W1 with [X, W1] inside [W1, W1]), L3.3 (<W1> is an
/// ideal), T3.4 (N(W1) strictly larger than W1), T1.3 (rigidity of <W1> lifts
/// to the ambient algebra; carries one child certificate), REGISTRY (verified
/// isomorphism onto a catalog entry with known status).
struct RuleNode {
  std::string rule;
  Pedigree pedigree = Pedigree::min_rank_span;
  Subspace w1;                       // first-layer coordinates; empty for REGISTRY
  std::optional<RatVector> witness;  // T1.2 witness in first-layer coordinates
  std::vector<std::pair<std::string, std::string>> extras;  // stable-order details
  // REGISTRY payload
  std::string catalog_name;
  std::string status;
  std::string citation;
  bool iso_verified = false;  // false means user-asserted match
  std::vector<RigidityCertificate> children;
};

struct RigidityCertificate {
  std::string algebra_name;
  std::uint64_t fingerprint = 0;
  Verdict verdict = Verdict::unknown;
  std::vector<std::string> caveats;
  std::vector<RuleNode> trace;
  AlgebraPtr algebra;  // retained for replay; not part of the text form
};

std::string certificate_to_text(const RigidityCertificate& cert);

/// Theorem 1.1 leaf: W1 must be nontrivial and proper; fires iff step == 2.
bool check_t11(const CarnotAlgebra& alg, const Subspace& w1);

struct T12Result {
  bool holds = false;
  Subspace space;                    // {X in V1 : [X, W1] subset [W1, W1]}
  std::optional<RatVector> witness;  // first basis vector of the space outside W1
};
T12Result check_t12(const AlgebraPtr& alg, const Subspace& w1);

enum class SectionThreeCriterion { ideal, normalizer_strict, neither };
std::string to_string(SectionThreeCriterion c);

/// Reports the stronger of the two criteria: <W1> an ideal (which forces
/// N(W1) = V1), else N(W1) strictly larger than W1, else neither.
/// Requires <W1> proper as a subalgebra.
SectionThreeCriterion check_l33_t34(const AlgebraPtr& alg, const Subspace& w1);

struct RegistryHit {
  std::string catalog_name;
  Verdict status = Verdict::unknown;
  std::string citation;
  RatMatrix iso;       // verified graded isomorphism onto the catalog instance
  bool user_asserted = false;
};

/// Base facts with citation tags. Matching constructs a candidate isomorphism
/// by a deterministic family-specific normalization and verifies it with
/// verify_graded_map; no general isomorphism search.
std::optional<RegistryHit> registry_lookup(const AlgebraPtr& alg,
                                           const std::optional<std::string>& assume = {});

struct CertifyOptions {
  SurveyParams survey;
  std::optional<Subspace> user_w1;            // user-asserted invariant subspace
  std::optional<std::string> assume_isomorphic;  // trust alg == this catalog entry
  int max_depth = 8;
};

/// Chains the criteria: registry identity, then min-rank-span W1 (or the
/// user's), leaf rules T1.1 / T1.2 / L3.3 / T3.4 in order, then recursion on
/// <W1> wrapped in a T1.3 node. User assertions are strictly additive: when
/// they are inconclusive the automatic path also runs.
RigidityCertificate certify(const AlgebraPtr& alg, const CertifyOptions& options = {});

/// Re-runs every rule check named in the trace against its stored inputs.
/// Returns true iff each check still supports the recorded verdict.
bool replay_certificate(const RigidityCertificate& cert);

}  // namespace carnot
