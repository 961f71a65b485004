#include "carnot/rigidity.hpp"

#include <sstream>

#include "carnot/constructions.hpp"
#include "carnot/errors.hpp"
#include "carnot/io.hpp"

namespace carnot {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::rigid: return "rigid";
    case Verdict::non_rigid_known: return "non-rigid-known";
    default: return "unknown";
  }
}

std::string to_string(Pedigree p) {
  return p == Pedigree::min_rank_span ? "min-rank-span" : "user-asserted";
}

std::string to_string(SectionThreeCriterion c) {
  switch (c) {
    case SectionThreeCriterion::ideal: return "ideal";
    case SectionThreeCriterion::normalizer_strict: return "normalizer-strict";
    default: return "neither";
  }
}

namespace {

void require_nontrivial_proper(const CarnotAlgebra& alg, const Subspace& w1) {
  if (w1.dim() == 0) throw CarnotError(Errc::trivial_subspace, "W1 is trivial");
  if (w1.dim() == alg.layer_dims()[0])
    throw CarnotError(Errc::not_proper, "W1 is the whole first layer");
}

}  // namespace

bool check_t11(const CarnotAlgebra& alg, const Subspace& w1_in) {
  Subspace w1 = normalize_first_layer_subspace(alg, w1_in);
  require_nontrivial_proper(alg, w1);
  return alg.step() == 2;
}

T12Result check_t12(const AlgebraPtr& alg, const Subspace& w1_in) {
  Subspace w1 = normalize_first_layer_subspace(*alg, w1_in);
  require_nontrivial_proper(*alg, w1);
  T12Result result;
  result.space = theorem12_space(alg, w1);
  result.holds = !w1.contains(result.space);
  if (result.holds) {
    for (const auto& row : result.space.basis())
      if (!w1.contains(row)) {
        result.witness = row;
        break;
      }
  }
  return result;
}

SectionThreeCriterion check_l33_t34(const AlgebraPtr& alg, const Subspace& w1_in) {
  Subspace w1 = normalize_first_layer_subspace(*alg, w1_in);
  // W1 = V1 would make <W1> the whole algebra; both criteria need it proper
  require_nontrivial_proper(*alg, w1);
  GradedSubalgebra gen = generated_subalgebra(alg, w1);
  if (is_ideal(*alg, gen)) return SectionThreeCriterion::ideal;
  Subspace n1 = normalizer(alg, w1);
  if (n1.dim() > w1.dim()) return SectionThreeCriterion::normalizer_strict;
  return SectionThreeCriterion::neither;
}

// ---- registry ----

namespace {

std::optional<RatMatrix> abelian_normalization(const CarnotAlgebra& alg) {
  if (alg.step() != 1) return std::nullopt;
  return identity_matrix(alg.dim());
}

// Symplectic basis for the pairing (u, v) -> z-coefficient of [u, v]; valid
// for 2-step algebras with one-dimensional center and layout [2k, 1].
std::optional<RatMatrix> heisenberg_normalization(const CarnotAlgebra& alg) {
  if (alg.step() != 2 || alg.layer_dims()[1] != 1) return std::nullopt;
  const std::size_t d1 = alg.layer_dims()[0];
  if (d1 % 2 != 0) return std::nullopt;
  const std::size_t k = d1 / 2;

  auto omega = [&](const RatVector& u, const RatVector& v) {
    RatVector uu(alg.dim(), Rat(0)), vv(alg.dim(), Rat(0));
    for (std::size_t c = 0; c < d1; ++c) {
      uu[c] = u[c];
      vv[c] = v[c];
    }
    return bracket_vec(alg, uu, vv)[d1];
  };

  std::vector<RatVector> pool;
  for (std::size_t i = 0; i < d1; ++i) {
    RatVector e(d1, Rat(0));
    e[i] = 1;
    pool.push_back(std::move(e));
  }
  RatMatrix basis;  // u1, v1, u2, v2, ...
  while (!pool.empty()) {
    RatVector u = pool.front();
    pool.erase(pool.begin());
    if (is_zero(u)) continue;
    std::size_t partner = pool.size();
    for (std::size_t t = 0; t < pool.size(); ++t)
      if (omega(u, pool[t]) != 0) {
        partner = t;
        break;
      }
    if (partner == pool.size()) return std::nullopt;  // degenerate pairing
    RatVector v = pool[partner];
    pool.erase(pool.begin() + partner);
    const Rat scale = 1 / omega(u, v);
    for (auto& c : v) c *= scale;
    for (auto& w : pool) {
      const Rat a = omega(v, w), b = omega(u, w);
      for (std::size_t c = 0; c < d1; ++c) w[c] += a * u[c] - b * v[c];
    }
    basis.push_back(u);
    basis.push_back(v);
  }
  if (basis.size() != 2 * k) return std::nullopt;

  // columns of the new-basis matrix: pairs, then the center generator
  RatMatrix cols(alg.dim(), RatVector(alg.dim(), Rat(0)));
  for (std::size_t t = 0; t < 2 * k; ++t)
    for (std::size_t c = 0; c < d1; ++c) cols[c][t] = basis[t][c];
  cols[d1][2 * k] = 1;
  auto inv = inverse(cols);
  if (!inv) return std::nullopt;
  return *inv;  // coordinates in the new basis = the map onto heisenberg_k
}

// Generator chain u, v with [u, v], [u, [u, v]], ... spanning the higher
// layers; candidates from a small integer grid on the 2-dimensional first
// layer. Bounded and deterministic, no general search.
std::optional<RatMatrix> filiform_normalization(const CarnotAlgebra& alg) {
  const std::size_t r = alg.step();
  if (r < 3 || alg.layer_dims()[0] != 2) return std::nullopt;
  for (std::size_t l = 1; l < r; ++l)
    if (alg.layer_dims()[l] != 1) return std::nullopt;
  const std::size_t n = alg.dim();

  std::vector<std::pair<long, long>> grid;
  for (long a = -2; a <= 2; ++a)
    for (long b = -2; b <= 2; ++b)
      if (a != 0 || b != 0) grid.emplace_back(a, b);

  auto filiform = catalog("model_filiform_" + std::to_string(r));
  for (const auto& [ua, ub] : grid) {
    for (const auto& [va, vb] : grid) {
      if (ua * vb - ub * va == 0) continue;  // need u, v independent
      RatVector u(n, Rat(0)), v(n, Rat(0));
      u[0] = ua;
      u[1] = ub;
      v[0] = va;
      v[1] = vb;
      RatMatrix cols(n, RatVector(n, Rat(0)));
      for (std::size_t c = 0; c < n; ++c) {
        cols[c][0] = u[c];
        cols[c][1] = v[c];
      }
      RatVector w = bracket_vec(alg, u, v);
      bool ok = true;
      for (std::size_t l = 2; l <= r && ok; ++l) {
        if (is_zero(w)) {
          ok = false;
          break;
        }
        for (std::size_t c = 0; c < n; ++c) cols[c][l] = w[c];
        if (l < r) w = bracket_vec(alg, u, w);
      }
      if (!ok) continue;
      auto inv = inverse(cols);
      if (!inv) continue;
      if (verify_graded_map(alg, *filiform, *inv).graded_isomorphism()) return *inv;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<RegistryHit> registry_lookup(const AlgebraPtr& alg,
                                           const std::optional<std::string>& assume) {
  if (assume) {
    auto target = catalog(*assume);  // throws UnknownCatalogName
    RegistryHit hit;
    hit.catalog_name = target->name();
    hit.user_asserted = true;
    if (assume->rfind("heisenberg_", 0) == 0) {
      hit.status = Verdict::non_rigid_known;
      hit.citation = "[B]";
    } else if (assume->rfind("abelian_", 0) == 0) {
      hit.status = Verdict::non_rigid_known;
      hit.citation = "standard radial-map example (extra-paper fact)";
    } else if (assume->rfind("model_filiform_", 0) == 0) {
      const bool step2 = *assume == "model_filiform_2";
      hit.status = step2 ? Verdict::non_rigid_known : Verdict::rigid;
      hit.citation = step2 ? "[B]" : "[X2]";
    } else {
      return std::nullopt;  // no registered status for this entry
    }
    return hit;
  }

  if (auto iso = abelian_normalization(*alg)) {
    auto target = catalog("abelian_" + std::to_string(alg->dim()));
    if (verify_graded_map(*alg, *target, *iso).graded_isomorphism()) {
      RegistryHit hit;
      hit.catalog_name = target->name();
      hit.status = Verdict::non_rigid_known;
      hit.citation = "standard radial-map example (extra-paper fact)";
      hit.iso = *iso;
      return hit;
    }
  }
  if (auto iso = heisenberg_normalization(*alg)) {
    auto target = catalog("heisenberg_" + std::to_string(alg->layer_dims()[0] / 2));
    if (verify_graded_map(*alg, *target, *iso).graded_isomorphism()) {
      RegistryHit hit;
      hit.catalog_name = target->name();
      hit.status = Verdict::non_rigid_known;
      hit.citation = "[B]";
      hit.iso = *iso;
      return hit;
    }
  }
  if (auto iso = filiform_normalization(*alg)) {
    RegistryHit hit;
    hit.catalog_name = "model_filiform_" + std::to_string(alg->step());
    hit.status = Verdict::rigid;
    hit.citation = "[X2]";
    hit.iso = *iso;
    return hit;
  }
  return std::nullopt;
}

// ---- certify ----

namespace {

RuleNode registry_node(const RegistryHit& hit, Pedigree pedigree) {
  RuleNode node;
  node.rule = "REGISTRY";
  node.pedigree = pedigree;
  node.catalog_name = hit.catalog_name;
  node.status = to_string(hit.status);
  node.citation = hit.citation;
  node.iso_verified = !hit.user_asserted;
  return node;
}

struct RuleOutcome {
  bool concluded = false;
  Verdict verdict = Verdict::unknown;
  std::vector<RuleNode> trace;
  std::vector<std::string> caveats;
};

RigidityCertificate certify_impl(const AlgebraPtr& alg, const CertifyOptions& options, int depth);

// Runs the leaf rules and the T1.3 recursion for one candidate W1.
RuleOutcome apply_rules(const AlgebraPtr& alg, const Subspace& w1, Pedigree pedigree,
                        const CertifyOptions& options, int depth) {
  RuleOutcome out;
  const std::size_t d1 = alg->layer_dims()[0];
  if (w1.dim() == 0 || w1.dim() == d1) return out;  // rules need a proper nontrivial W1

  if (alg->step() == 2 && check_t11(*alg, w1)) {
    RuleNode node;
    node.rule = "T1.1";
    node.pedigree = pedigree;
    node.w1 = w1;
    out.trace.push_back(std::move(node));
    out.concluded = true;
    out.verdict = Verdict::rigid;
    return out;
  }

  T12Result t12 = check_t12(alg, w1);
  if (t12.holds) {
    RuleNode node;
    node.rule = "T1.2";
    node.pedigree = pedigree;
    node.w1 = w1;
    node.witness = t12.witness;
    out.trace.push_back(std::move(node));
    out.concluded = true;
    out.verdict = Verdict::rigid;
    return out;
  }

  GradedSubalgebra gen = generated_subalgebra(alg, w1);
  SectionThreeCriterion s3 = check_l33_t34(alg, w1);
  if (s3 == SectionThreeCriterion::ideal) {
    RuleNode node;
    node.rule = "L3.3";
    node.pedigree = pedigree;
    node.w1 = w1;
    std::vector<std::size_t> dims;
    for (const auto& l : gen.layers) dims.push_back(l.dim());
    std::ostringstream os;
    for (std::size_t j = 0; j < dims.size(); ++j) os << (j ? " " : "") << dims[j];
    node.extras.emplace_back("subalgebra-dims", os.str());
    out.trace.push_back(std::move(node));
    out.concluded = true;
    out.verdict = Verdict::rigid;
    return out;
  }
  if (s3 == SectionThreeCriterion::normalizer_strict) {
    RuleNode node;
    node.rule = "T3.4";
    node.pedigree = pedigree;
    node.w1 = w1;
    node.extras.emplace_back("normalizer-dim",
                             std::to_string(normalizer(alg, w1).dim()));
    out.trace.push_back(std::move(node));
    out.concluded = true;
    out.verdict = Verdict::rigid;
    return out;
  }

  // T1.3 recursion on <W1> as a standalone algebra (always Carnot: the
  // generated layers W_{j+1} = [W1, W_j] form a prefix)
  RigidityCertificate child = certify_impl(gen.standalone, options, depth + 1);
  RuleNode node;
  node.rule = "T1.3";
  node.pedigree = pedigree;
  node.w1 = w1;
  const Verdict child_verdict = child.verdict;
  node.children.push_back(std::move(child));
  out.trace.push_back(std::move(node));
  if (child_verdict == Verdict::rigid) {
    out.concluded = true;
    out.verdict = Verdict::rigid;
  } else if (child_verdict == Verdict::non_rigid_known) {
    out.caveats.push_back(
        "<W1> matches a known non-rigid group; the recursion cannot conclude");
  } else {
    out.caveats.push_back("rigidity of <W1> is unknown; the recursion cannot conclude");
  }
  return out;
}

RigidityCertificate certify_impl(const AlgebraPtr& alg, const CertifyOptions& options, int depth) {
  if (depth > options.max_depth)
    throw CarnotError(Errc::recursion_depth_exceeded, "certification recursion too deep");

  RigidityCertificate cert;
  cert.algebra = alg;
  cert.algebra_name = alg->name();
  cert.fingerprint = fingerprint(*alg);

  // registry identity of the algebra itself comes first at every level
  const auto assume = depth == 0 ? options.assume_isomorphic : std::nullopt;
  if (auto hit = registry_lookup(alg, assume)) {
    cert.verdict = hit->status;
    cert.trace.push_back(registry_node(*hit, hit->user_asserted ? Pedigree::user_asserted
                                                                : Pedigree::min_rank_span));
    if (hit->user_asserted)
      cert.caveats.push_back("registry match asserted by the user, not verified");
    return cert;
  }

  // user-asserted W1 first (top level only); strictly additive
  if (depth == 0 && options.user_w1) {
    Subspace w1 = normalize_first_layer_subspace(*alg, *options.user_w1);
    cert.caveats.push_back("W1 invariance asserted by the user, not verified");
    RuleOutcome out = apply_rules(alg, w1, Pedigree::user_asserted, options, depth);
    for (auto& c : out.caveats) cert.caveats.push_back(std::move(c));
    for (auto& node : out.trace) cert.trace.push_back(std::move(node));
    if (out.concluded) {
      cert.verdict = out.verdict;
      return cert;
    }
  }

  RankReport survey = min_rank_survey(alg, std::nullopt, options.survey);
  if (survey.certification == Certification::heuristic_search)
    cert.caveats.push_back(
        "W1 comes from a heuristic rank search (" + survey.certification_note +
        "); its invariance under graded automorphisms is not certified");

  if (survey.span.dim() == alg->layer_dims()[0]) {
    cert.caveats.push_back("minimum-rank span is the whole first layer; no reducibility found");
    cert.verdict = Verdict::unknown;
    return cert;
  }

  RuleOutcome out = apply_rules(alg, survey.span, Pedigree::min_rank_span, options, depth);
  for (auto& c : out.caveats) cert.caveats.push_back(std::move(c));
  for (auto& node : out.trace) cert.trace.push_back(std::move(node));
  cert.verdict = out.concluded ? out.verdict : Verdict::unknown;
  return cert;
}

}  // namespace

RigidityCertificate certify(const AlgebraPtr& alg, const CertifyOptions& options) {
  return certify_impl(alg, options, 0);
}

// ---- serialization ----

namespace {

void emit_lines(const RigidityCertificate& cert, std::ostream& os, std::size_t indent);

void emit_node(const RuleNode& node, std::ostream& os, std::size_t indent) {
  const std::string pad(indent * 2, ' ');
  const std::string pad1((indent + 1) * 2, ' ');
  const std::string pad2((indent + 2) * 2, ' ');
  os << pad << "rule " << node.rule << "\n";
  os << pad1 << "pedigree " << to_string(node.pedigree) << "\n";
  if (node.rule == "REGISTRY") {
    os << pad1 << "catalog " << node.catalog_name << "\n";
    os << pad1 << "status " << node.status << "\n";
    os << pad1 << "citation " << node.citation << "\n";
    os << pad1 << "isomorphism " << (node.iso_verified ? "verified" : "assumed") << "\n";
  } else {
    os << pad1 << "W1 dim " << node.w1.dim() << "\n";
    if (node.w1.dim() > 0) {
      os << pad1 << "W1 basis\n";
      for (const auto& row : node.w1.basis()) {
        os << pad2;
        for (std::size_t c = 0; c < row.size(); ++c)
          os << (c ? " " : "") << rat_to_string(row[c]);
        os << "\n";
      }
    }
  }
  if (node.witness) {
    os << pad1 << "witness";
    for (const auto& c : *node.witness) os << " " << rat_to_string(c);
    os << "\n";
  }
  for (const auto& [key, value] : node.extras) os << pad1 << key << " " << value << "\n";
  for (const auto& child : node.children) {
    os << pad1 << "child\n";
    emit_lines(child, os, indent + 2);
  }
}

void emit_lines(const RigidityCertificate& cert, std::ostream& os, std::size_t indent) {
  const std::string pad(indent * 2, ' ');
  os << pad << "certificate v1\n";
  os << pad << "algebra " << cert.algebra_name << "\n";
  os << pad << "fingerprint " << fingerprint_hex(cert.fingerprint) << "\n";
  os << pad << "verdict " << to_string(cert.verdict) << "\n";
  os << pad << "caveats " << cert.caveats.size() << "\n";
  for (const auto& c : cert.caveats) os << pad << "  " << c << "\n";
  for (const auto& node : cert.trace) emit_node(node, os, indent);
}

}  // namespace

std::string certificate_to_text(const RigidityCertificate& cert) {
  std::ostringstream os;
  emit_lines(cert, os, 0);
  return os.str();
}

bool replay_certificate(const RigidityCertificate& cert) {
  if (!cert.algebra) return false;
  const AlgebraPtr& alg = cert.algebra;
  if (cert.verdict == Verdict::rigid && cert.trace.empty()) return false;
  for (const auto& node : cert.trace) {
    if (node.rule == "T1.1") {
      if (!check_t11(*alg, node.w1)) return false;
    } else if (node.rule == "T1.2") {
      if (!check_t12(alg, node.w1).holds) return false;
    } else if (node.rule == "L3.3") {
      if (check_l33_t34(alg, node.w1) != SectionThreeCriterion::ideal) return false;
    } else if (node.rule == "T3.4") {
      if (check_l33_t34(alg, node.w1) == SectionThreeCriterion::neither) return false;
    } else if (node.rule == "T1.3") {
      if (node.children.size() != 1) return false;
      const auto& child = node.children.front();
      if (cert.verdict == Verdict::rigid && child.verdict != Verdict::rigid) return false;
      if (!replay_certificate(child)) return false;
    } else if (node.rule == "REGISTRY") {
      if (node.iso_verified) {
        auto hit = registry_lookup(alg, std::nullopt);
        if (!hit || hit->catalog_name != node.catalog_name) return false;
        if (to_string(hit->status) != node.status) return false;
      }
    } else {
      return false;
    }
  }
  return true;
}

}  // namespace carnot
