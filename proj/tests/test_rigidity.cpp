#include <doctest.h>

#include "carnot/constructions.hpp"
#include "carnot/errors.hpp"
#include "carnot/io.hpp"
#include "carnot/rigidity.hpp"
#include "support.hpp"

using namespace carnot;

TEST_CASE("check_t11: applicability") {
  // 2-step direct product with distinct first-layer ranks
  auto prod = direct_product(*catalog("heisenberg_1"), *catalog("free_2step_3"));
  RankReport survey = min_rank_survey(prod.algebra, std::nullopt, {});
  REQUIRE(survey.span.dim() == 2);
  CHECK(check_t11(*prod.algebra, survey.span));

  // 3-step algebra: rule inapplicable
  auto ex1 = catalog("paper_example_1");
  RankReport s1 = min_rank_survey(ex1, std::nullopt, {});
  CHECK(!check_t11(*ex1, s1.span));

  // W1 = V1 is rejected
  auto h = catalog("heisenberg_1");
  CHECK_THROWS_AS(check_t11(*h, Subspace::full(2)), CarnotError);
  CHECK_THROWS_AS(check_t11(*h, Subspace::zero(2)), CarnotError);
}

TEST_CASE("check_t12: golden values") {
  auto ex1 = catalog("paper_example_1");
  RankReport s1 = min_rank_survey(ex1, std::nullopt, {});
  T12Result r1 = check_t12(ex1, s1.span);
  CHECK(r1.holds);
  REQUIRE(r1.witness.has_value());
  CHECK(!s1.span.contains(*r1.witness));
  CHECK(r1.space.contains(*r1.witness));
  // X1 lies in the space but outside W1
  auto x1_idx = ex1->index_of_label("X1");
  RatVector x1(6, Rat(0));
  x1[*x1_idx] = 1;
  CHECK(r1.space.contains(x1));

  auto ex3 = catalog("paper_example_3");
  RankReport s3 = min_rank_survey(ex3, std::nullopt, {});
  CHECK(!check_t12(ex3, s3.span).holds);

  // abelian R^2 with W1 = span{e1}: condition holds (all brackets vanish)
  auto ab = catalog("abelian_2");
  CHECK(check_t12(ab, Subspace::span(2, parse_matrix("1,0"))).holds);
}

TEST_CASE("check_l33_t34: golden values") {
  // paper example 1: <W1> is an ideal (which already forces N(W1) = V1)
  auto ex1 = catalog("paper_example_1");
  RankReport s1 = min_rank_survey(ex1, std::nullopt, {});
  CHECK(check_l33_t34(ex1, s1.span) == SectionThreeCriterion::ideal);
  CHECK(normalizer(ex1, s1.span).is_full());

  // paper example 3: neither criterion fires
  auto ex3 = catalog("paper_example_3");
  RankReport s3 = min_rank_survey(ex3, std::nullopt, {});
  CHECK(check_l33_t34(ex3, s3.span) == SectionThreeCriterion::neither);

  // normalizer-strict but not ideal: free_2step_3 with W1 = span{X1}
  auto f = catalog("free_2step_3");
  CHECK(check_l33_t34(f, Subspace::span(3, parse_matrix("1,0,0"))) ==
        SectionThreeCriterion::neither);

  // W1 = V1 would generate the whole algebra: rejected as not proper
  auto h2 = catalog("heisenberg_2");
  CHECK_THROWS_AS(check_l33_t34(h2, Subspace::full(4)), CarnotError);

  // a 3-dimensional W1 in heisenberg_2 generates a proper ideal
  CHECK(check_l33_t34(h2, Subspace::span(4, parse_matrix("1,0,0,0;0,1,0,0;0,0,1,0"))) ==
        SectionThreeCriterion::ideal);
}

TEST_CASE("registry: catalog identities and scrambled instances") {
  auto hit = registry_lookup(catalog("heisenberg_2"));
  REQUIRE(hit.has_value());
  CHECK(hit->catalog_name == "heisenberg_2");
  CHECK(hit->status == Verdict::non_rigid_known);
  CHECK(hit->citation == "[B]");

  auto ab = registry_lookup(catalog("abelian_3"));
  REQUIRE(ab.has_value());
  CHECK(ab->status == Verdict::non_rigid_known);

  auto fil = registry_lookup(catalog("model_filiform_6"));
  REQUIRE(fil.has_value());
  CHECK(fil->status == Verdict::rigid);
  CHECK(fil->citation == "[X2]");

  // a scaled Heisenberg bracket is still recognized via the symplectic basis
  BracketTable table;
  table[{0, 1}] = {{2, make_rat(2)}};
  auto scaled = std::make_shared<CarnotAlgebra>("scaled", std::vector<std::size_t>{2, 1},
                                                std::vector<std::string>{}, table);
  auto shit = registry_lookup(AlgebraPtr(scaled));
  REQUIRE(shit.has_value());
  CHECK(shit->catalog_name == "heisenberg_1");
  CHECK(verify_graded_map(*scaled, *catalog("heisenberg_1"), shit->iso).graded_isomorphism());

  // no hit for algebras outside the registered families
  CHECK(!registry_lookup(catalog("paper_example_1")).has_value());
  CHECK(!registry_lookup(catalog("free_2step_3")).has_value());
}

TEST_CASE("registry: scrambled filiform instance is recognized") {
  // generator roles swapped relative to model_filiform_4: the chain runs
  // through e2, and the layer-2 bracket carries a sign
  BracketTable table;
  table[{0, 1}] = {{2, make_rat(-1)}};  // [e1,e2] = -e3
  table[{1, 2}] = {{3, make_rat(1)}};   // [e2,e3] = e4
  table[{1, 3}] = {{4, make_rat(1)}};   // [e2,e4] = e5
  auto scrambled = std::make_shared<CarnotAlgebra>(
      "scrambled_filiform", std::vector<std::size_t>{2, 1, 1, 1},
      std::vector<std::string>{}, table);
  REQUIRE(validate(*scrambled).pass());

  auto hit = registry_lookup(AlgebraPtr(scrambled));
  REQUIRE(hit.has_value());
  CHECK(hit->catalog_name == "model_filiform_4");
  CHECK(hit->status == Verdict::rigid);
  CHECK(verify_graded_map(*scrambled, *catalog("model_filiform_4"), hit->iso)
            .graded_isomorphism());

  auto cert = certify(AlgebraPtr(scrambled));
  CHECK(cert.verdict == Verdict::rigid);
}

TEST_CASE("registry: permuted Heisenberg basis is recognized") {
  // pairing (e1,e3) and (e2,e4) instead of consecutive pairs
  BracketTable table;
  table[{0, 2}] = {{4, make_rat(1)}};
  table[{1, 3}] = {{4, make_rat(-3)}};
  auto permuted = std::make_shared<CarnotAlgebra>(
      "permuted_h2", std::vector<std::size_t>{4, 1}, std::vector<std::string>{}, table);
  REQUIRE(validate(*permuted).pass());

  auto hit = registry_lookup(AlgebraPtr(permuted));
  REQUIRE(hit.has_value());
  CHECK(hit->catalog_name == "heisenberg_2");
  CHECK(verify_graded_map(*permuted, *catalog("heisenberg_2"), hit->iso).graded_isomorphism());
}

TEST_CASE("registry: twisted filiform table needs a non-basis generator pair") {
  // both generators act on the higher layers; the second filiform generator
  // must be the combination e1 - 2 e2 (kernel of ad on V2 and V3)
  BracketTable table;
  table[{0, 1}] = {{2, make_rat(1)}};       // [e1,e2] = e3
  table[{0, 2}] = {{3, make_rat(2)}};       // [e1,e3] = 2 e4
  table[{1, 2}] = {{3, make_rat(1)}};       // [e2,e3] = e4
  table[{0, 3}] = {{4, make_rat(1)}};       // [e1,e4] = e5
  table[{1, 3}] = {{4, make_rat(1, 2)}};    // [e2,e4] = 1/2 e5
  auto twisted = std::make_shared<CarnotAlgebra>(
      "twisted_filiform", std::vector<std::size_t>{2, 1, 1, 1},
      std::vector<std::string>{}, table);
  REQUIRE(validate(*twisted).pass());

  auto hit = registry_lookup(AlgebraPtr(twisted));
  REQUIRE(hit.has_value());
  CHECK(hit->catalog_name == "model_filiform_4");
  CHECK(verify_graded_map(*twisted, *catalog("model_filiform_4"), hit->iso)
            .graded_isomorphism());
}

TEST_CASE("certify: paper example 1 via T1.2") {
  auto cert = certify(catalog("paper_example_1"));
  CHECK(cert.verdict == Verdict::rigid);
  REQUIRE(cert.trace.size() == 1);
  CHECK(cert.trace[0].rule == "T1.2");
  CHECK(cert.trace[0].pedigree == Pedigree::min_rank_span);
  CHECK(cert.trace[0].w1.dim() == 4);
  CHECK(!cert.caveats.empty());  // heuristic search caveat
  CHECK(replay_certificate(cert));
}

TEST_CASE("certify: paper example 3 via T1.3 + registry") {
  auto cert = certify(catalog("paper_example_3"));
  CHECK(cert.verdict == Verdict::rigid);
  REQUIRE(cert.trace.size() == 1);
  CHECK(cert.trace[0].rule == "T1.3");
  REQUIRE(cert.trace[0].children.size() == 1);
  const auto& child = cert.trace[0].children[0];
  CHECK(child.verdict == Verdict::rigid);
  REQUIRE(child.trace.size() == 1);
  CHECK(child.trace[0].rule == "REGISTRY");
  CHECK(child.trace[0].catalog_name == "model_filiform_4");
  CHECK(child.trace[0].citation == "[X2]");
  CHECK(child.trace[0].iso_verified);
  CHECK(replay_certificate(cert));
}

TEST_CASE("certify: Heisenberg and abelian registry hits") {
  auto hc = certify(catalog("heisenberg_1"));
  CHECK(hc.verdict == Verdict::non_rigid_known);
  REQUIRE(hc.trace.size() == 1);
  CHECK(hc.trace[0].rule == "REGISTRY");

  auto ac = certify(catalog("abelian_3"));
  CHECK(ac.verdict == Verdict::non_rigid_known);
}

TEST_CASE("certify: 2-step reducible product via T1.1") {
  auto prod = direct_product(*catalog("heisenberg_1"), *catalog("free_2step_3"));
  auto cert = certify(prod.algebra);
  CHECK(cert.verdict == Verdict::rigid);
  REQUIRE(!cert.trace.empty());
  CHECK(cert.trace[0].rule == "T1.1");
  CHECK(replay_certificate(cert));
}

TEST_CASE("certify: unknown for the free 2-step algebra") {
  auto cert = certify(catalog("free_2step_6"));
  CHECK(cert.verdict == Verdict::unknown);
  CHECK(!cert.caveats.empty());
}

TEST_CASE("certify: user-asserted W1 is additive and forces a caveat") {
  // automatic path: improper span, unknown
  auto prod = direct_product(*catalog("free_2step_3"), *catalog("free_2step_3"));
  auto base = certify(prod.algebra);
  CHECK(base.verdict == Verdict::unknown);

  // user asserts the first factor's layer: T1.1 applies (2-step)
  CertifyOptions options;
  options.user_w1 = Subspace::span(6, parse_matrix("1,0,0,0,0,0;0,1,0,0,0,0;0,0,1,0,0,0"));
  auto cert = certify(prod.algebra, options);
  CHECK(cert.verdict == Verdict::rigid);
  REQUIRE(!cert.trace.empty());
  CHECK(cert.trace[0].rule == "T1.1");
  CHECK(cert.trace[0].pedigree == Pedigree::user_asserted);
  bool has_user_caveat = false;
  for (const auto& c : cert.caveats)
    if (c.find("user") != std::string::npos) has_user_caveat = true;
  CHECK(has_user_caveat);
}

TEST_CASE("certify: registry verdicts are not flipped by user assertions") {
  CertifyOptions options;
  options.user_w1 = Subspace::span(2, parse_matrix("1,0"));
  auto cert = certify(catalog("abelian_2"), options);
  CHECK(cert.verdict == Verdict::non_rigid_known);  // registry hit precedes rules
}

TEST_CASE("certify: --assume is trusted but flagged") {
  CertifyOptions options;
  options.assume_isomorphic = "model_filiform_5";
  auto cert = certify(catalog("free_2step_6"), options);
  CHECK(cert.verdict == Verdict::rigid);
  REQUIRE(cert.trace.size() == 1);
  CHECK(cert.trace[0].rule == "REGISTRY");
  CHECK(!cert.trace[0].iso_verified);
  CHECK(!cert.caveats.empty());
}

TEST_CASE("certificate text is stable and complete") {
  auto cert = certify(catalog("paper_example_3"));
  std::string text = certificate_to_text(cert);
  CHECK(text.find("verdict rigid") != std::string::npos);
  CHECK(text.find("rule T1.3") != std::string::npos);
  CHECK(text.find("catalog model_filiform_4") != std::string::npos);
  CHECK(text.find("citation [X2]") != std::string::npos);
  CHECK(text.find("isomorphism verified") != std::string::npos);
  CHECK(certificate_to_text(certify(catalog("paper_example_3"))) == text);
}

TEST_CASE("recursion depth is bounded") {
  CertifyOptions options;
  options.max_depth = 0;
  // paper example 3 needs one recursion step
  CHECK_THROWS_AS(certify(catalog("paper_example_3"), options), CarnotError);
}
