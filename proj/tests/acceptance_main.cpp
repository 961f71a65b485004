// Acceptance suite: each criterion prints one pass/fail line; the process
// exits nonzero if any criterion fails. argv[1] is the path to the carnot CLI
// binary (used by the determinism criterion).

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "carnot/constructions.hpp"
#include "carnot/group_geometry.hpp"
#include "carnot/io.hpp"
#include "carnot/rank_analysis.hpp"
#include "carnot/rigidity.hpp"
#include "bch_oracle.hpp"
#include "support.hpp"

using namespace carnot;
using carnot::testing::catalog_roster;
using carnot::testing::oracle_bch;
using carnot::testing::random_element;
using carnot::testing::random_first_layer;

namespace {

struct Criterion {
  int number;
  std::string summary;
  std::function<void(std::ostream&)> body;  // throws std::runtime_error on failure
  double time_limit_seconds = 0.0;          // 0 = no limit
};

void require(bool condition, const std::string& message) {
  if (!condition) throw std::runtime_error(message);
}

bool close(double a, double b, double rel = 1e-9) {
  return std::fabs(a - b) <= rel * std::max({1.0, std::fabs(a), std::fabs(b)});
}

std::string cli_path;

// ---- criterion bodies ----

void criterion1_example3_ranks(std::ostream&) {
  auto ex3 = catalog("paper_example_3");
  auto idx = [&](const char* label) { return *ex3->index_of_label(label); };
  require(rank_of(Element::basis(ex3, idx("e1"))) == 5, "rank(e1) != 5");
  require(rank_of(Element::basis(ex3, idx("e2"))) == 5, "rank(e2) != 5");

  DetRng rng(2024);
  const std::size_t d1 = ex3->layer_dims()[0];
  std::size_t checked = 0;
  for (std::size_t i = 0; i < 1000; ++i) {
    RatVector v(ex3->dim(), Rat(0));
    for (std::size_t c = 0; c < d1; ++c) v[c] = rng.next_rat();
    bool outside = false;
    for (std::size_t c = 2; c < d1; ++c) outside = outside || v[c] != 0;
    if (!outside) v[2 + (i % 6)] = 1;  // keep the sample outside V1 of F^4
    require(rank_of(Element(ex3, std::move(v))) >= 6,
            "sample " + std::to_string(i) + " has rank < 6");
    ++checked;
  }
  require(checked == 1000, "sample count");
}

void criterion2_example1_analysis(std::ostream&) {
  auto ex1 = catalog("paper_example_1");
  RankReport survey = min_rank_survey(ex1, std::nullopt, {});
  require(survey.r_min_found == 1, "r1 != 1");
  Subspace expected = Subspace::span(
      6, parse_matrix("1,0,0,0,-1,0;0,1,0,0,-1,0;0,0,1,0,0,0;0,0,0,1,0,0"));
  require(survey.span == expected, "W1 differs from the echelon-canonical span");

  GradedSubalgebra gen = generated_subalgebra(ex1, survey.span);
  require(gen.layers[0].dim() == 4 && gen.layers[1].dim() == 1 && gen.layers[2].dim() == 0,
          "<W1> layer dims are not (4, 1)");

  Subspace t12 = theorem12_space(ex1, survey.span);
  RatVector x1(6, Rat(0));
  x1[*ex1->index_of_label("X1")] = 1;
  require(t12.contains(x1), "X1 not in the Theorem 1.2 space");
  require(!survey.span.contains(x1), "X1 unexpectedly inside W1");

  RigidityCertificate cert = certify(ex1);
  require(cert.verdict == Verdict::rigid, "verdict is not rigid");
  require(cert.trace.size() == 1 && cert.trace[0].rule == "T1.2", "rule is not T1.2");
}

void criterion3_example3_certification(std::ostream&) {
  auto ex3 = catalog("paper_example_3");
  RigidityCertificate cert = certify(ex3);
  require(cert.verdict == Verdict::rigid, "verdict is not rigid");
  require(cert.trace.size() == 1 && cert.trace[0].rule == "T1.3", "rule is not T1.3");
  require(cert.trace[0].children.size() == 1, "T1.3 node needs one child certificate");
  const auto& child = cert.trace[0].children[0];
  require(child.verdict == Verdict::rigid, "child verdict is not rigid");
  require(child.trace.size() == 1 && child.trace[0].rule == "REGISTRY",
          "child rule is not REGISTRY");
  require(child.trace[0].catalog_name == "model_filiform_4", "registry target mismatch");
  require(child.trace[0].citation == "[X2]", "registry citation mismatch");
  require(child.trace[0].iso_verified, "registry isomorphism was not verified");

  // the verified isomorphism exists independently of the certificate
  auto hit = registry_lookup(child.algebra);
  require(hit.has_value() && hit->catalog_name == "model_filiform_4",
          "registry lookup on <W1> failed");
  require(verify_graded_map(*child.algebra, *catalog("model_filiform_4"), hit->iso)
              .graded_isomorphism(),
          "stored isomorphism fails verify_graded_map");

  RankReport survey = min_rank_survey(ex3, std::nullopt, {});
  require(normalizer(ex3, survey.span) == survey.span, "N(W1) != W1");
}

void criterion4_wedge_equivalence(std::ostream&) {
  for (const auto& name : catalog_roster()) {
    auto alg = catalog(name);
    DetRng rng(fnv1a(name));
    for (int i = 0; i < 200; ++i) {
      Element x = random_element(alg, rng);
      const std::size_t r = rank_of(x);
      for (std::size_t k = 0; k < alg->dim(); ++k)
        require(wedge_rank_test(x, k) == (r <= k),
                name + ": wedge/rank disagree at k=" + std::to_string(k));
    }
  }
}

void criterion5_bch(std::ostream&) {
  for (const auto& name : catalog_roster()) {
    auto alg = catalog(name);
    require(alg->step() <= 6, "catalog step exceeds 6");
    DetRng rng(fnv1a(name) ^ 0x5u);
    Element zero = Element::zero(alg);
    for (int i = 0; i < 100; ++i) {
      Element x = random_element(alg, rng);
      Element y = random_element(alg, rng);
      Element z = random_element(alg, rng);
      require(bch_multiply(bch_multiply(x, y), z).coords() ==
                  bch_multiply(x, bch_multiply(y, z)).coords(),
              name + ": associativity fails");
      require(bch_multiply(x, zero).coords() == x.coords(), name + ": right identity fails");
      require(bch_multiply(x, invert(x)).is_zero(), name + ": inverse fails");
    }
  }
  auto f4 = catalog("model_filiform_4");
  Element e1 = Element::basis(f4, 0), e2 = Element::basis(f4, 1);
  RatVector expected{Rat(1), Rat(1), make_rat(1, 2), make_rat(1, 12), Rat(0)};
  require(bch_multiply(e1, e2).coords() == expected, "e1*e2 in F^4 mismatch");
  require(oracle_bch(e1, e2).coords() == expected, "independent Dynkin oracle mismatch");
}

void criterion6_metric(std::ostream&) {
  for (const auto& name : catalog_roster()) {
    auto alg = catalog(name);
    DetRng rng(fnv1a(name) ^ 0x6u);
    for (int i = 0; i < 100; ++i) {
      Element p = random_element(alg, rng);
      Element q = random_element(alg, rng);
      Rat t = make_rat(rng.next_int(1, 9), rng.next_int(1, 4));
      auto [lhs, rhs] = dilation_similarity_check(t, p, q);
      require(close(lhs, rhs), name + ": dilation similarity fails");
      Element g = random_element(alg, rng);
      require(close(distance(bch_multiply(g, p), bch_multiply(g, q)), distance(p, q)),
              name + ": left invariance fails");
    }
  }
}

void criterion7_products(std::ostream&) {
  DetRng rng(7);
  // direct product: rank additivity, exact
  auto h = catalog("heisenberg_1");
  auto f = catalog("free_2step_3");
  auto prod = direct_product(*h, *f);
  for (int i = 0; i < 100; ++i) {
    Element xa = random_first_layer(h, rng);
    Element xb = random_first_layer(f, rng);
    RatVector v = matvec(prod.emb_a, xa.coords());
    RatVector w = matvec(prod.emb_b, xb.coords());
    for (std::size_t c = 0; c < v.size(); ++c) v[c] += w[c];
    require(rank_of(Element(prod.algebra, v)) == rank_of(xa) + rank_of(xb),
            "direct-product rank additivity fails");
  }

  // central product: rank lower bound, exact
  auto cp = central_product(*h, *h, Subspace::full(1), Subspace::full(1), identity_matrix(1));
  for (int i = 0; i < 100; ++i) {
    Element xa = random_first_layer(h, rng);
    Element xb = random_first_layer(h, rng);
    RatVector v = matvec(cp.emb_a, xa.coords());
    RatVector w = matvec(cp.emb_b, xb.coords());
    for (std::size_t c = 0; c < v.size(); ++c) v[c] += w[c];
    require(rank_of(Element(cp.algebra, v)) >= std::max(rank_of(xa), rank_of(xb)),
            "central-product rank bound fails");
  }

  // level-one product of two Heisenbergs
  RatVector x0{Rat(1), Rat(0)};
  Subspace u1 = Subspace::span(2, {{Rat(0), Rat(1)}});
  auto lp = level_one_product(*h, *h, x0, x0, u1, u1);
  RankReport survey = min_rank_survey(lp.algebra, std::nullopt, {});
  Subspace u_sum = Subspace::span(3, parse_matrix("1,0,0;0,1,0"));
  require(u_sum.contains(survey.span), "min-rank span leaves U1 + U1'");
  for (int i = 0; i < 100; ++i) {
    RatVector v(lp.algebra->dim(), Rat(0));
    v[0] = rng.next_rat();
    v[1] = rng.next_rat();
    v[2] = 0;
    while (v[2] == 0) v[2] = rng.next_rat();
    require(rank_of(Element(lp.algebra, v)) >= 2, "Lemma 4.3 bound fails");
  }
}

void criterion8_divergence(std::ostream&) {
  auto h = catalog("heisenberg_1");
  auto rows = coset_divergence_probe(Element::basis(h, 0), Element::basis(h, 1),
                                     {make_rat(1), make_rat(4), make_rat(16), make_rat(64)});
  const double expected[] = {2.0, 0.75, 0.3125, 0.140625};
  require(rows.size() == 4, "probe row count");
  for (std::size_t i = 0; i < 4; ++i)
    require(close(rows[i].second, expected[i]), "probe ratio mismatch at index " +
                                                    std::to_string(i));
  for (std::size_t i = 1; i < 4; ++i)
    require(rows[i].second < rows[i - 1].second, "ratios are not strictly decreasing");
}

void criterion9_determinism(std::ostream&) {
  // parse(emit) identity on every catalog file
  for (const auto& name : catalog_roster()) {
    auto alg = catalog(name);
    std::string text = emit_algebra(*alg);
    require(emit_algebra(*parse_algebra(text)) == text, name + ": round trip not canonical");
  }

  require(!cli_path.empty(), "CLI path not supplied (argv[1])");
  const std::vector<std::string> commands{
      "validate paper_example_1",
      "info paper_example_3",
      "analyze paper_example_1",
      "analyze paper_example_3",
      "rank paper_example_3 --x e1 --wedge 5",
      "rigidity paper_example_1",
      "rigidity paper_example_3",
      "rigidity heisenberg_1",
      "bch model_filiform_4 --x e1 --y e2",
      "distance heisenberg_1 --p 1,0,0 --q 0,1,1",
      "distance heisenberg_1 --quasi-constant 200",
      "probe-divergence heisenberg_1 --w e1 --v e2 --t 1,4,16,64",
      "catalog free_2step_6",
      "product direct heisenberg_1 abelian_1",
      "product central heisenberg_1 heisenberg_1",
      "product level1 heisenberg_1 heisenberg_1",
  };
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "carnot_acceptance";
  fs::create_directories(dir);
  auto run_once = [&](std::size_t index, int round) {
    fs::path out = dir / ("cmd" + std::to_string(index) + "_r" + std::to_string(round));
    std::string cmd = cli_path + " " + commands[index] + " > " + out.string();
    int status = std::system(cmd.c_str());
    require(status == 0, "command failed: " + commands[index]);
    std::ifstream in(out, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
  };
  for (std::size_t i = 0; i < commands.size(); ++i) {
    std::string first = run_once(i, 1);
    std::string second = run_once(i, 2);
    require(!first.empty(), "empty output: " + commands[i]);
    require(first == second, "output differs across runs: " + commands[i]);
  }
  fs::remove_all(dir);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) cli_path = argv[1];

  std::vector<Criterion> criteria{
      {1, "Example 3 rank facts: rank(e1) = rank(e2) = 5; 1000 samples outside V1 have rank >= 6",
       criterion1_example3_ranks, 10.0},
      {2, "Example 1 analysis: r1 = 1, canonical W1, <W1> dims (4,1), X1 witness, rigid via T1.2",
       criterion2_example1_analysis, 5.0},
      {3, "Example 3 certification: rigid via T1.3 with verified REGISTRY(F^4, [X2]); N(W1) = W1",
       criterion3_example3_certification, 10.0},
      {4, "Lemma 4.2 equivalence: wedge_rank_test(x,k) <=> rank(x) <= k, 200 samples per algebra",
       criterion4_wedge_equivalence, 0.0},
      {5, "BCH group axioms on 100 triples per algebra; F^4 product matches the Dynkin oracle",
       criterion5_bch, 0.0},
      {6, "Metric homogeneity and left invariance within 1e-9 on 100 samples per algebra",
       criterion6_metric, 0.0},
      {7, "Product laws: rank additivity, central lower bound, level-one minimal-rank locus",
       criterion7_products, 10.0},
      {8, "Sublinear divergence probe: ratios (1+sqrt(t))/t, strictly decreasing",
       criterion8_divergence, 0.0},
      {9, "Determinism: byte-identical CLI outputs across runs; parse/emit identity on the catalog",
       criterion9_determinism, 0.0},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string error;
    try {
      c.body(std::cout);
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool pass = error.empty();
    if (pass && c.time_limit_seconds > 0 && elapsed > c.time_limit_seconds) {
      error = "exceeded " + std::to_string(c.time_limit_seconds) + " s";
      pass = false;
    }
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(2);
    line << "criterion " << c.number << " " << (pass ? "PASS" : "FAIL") << " [" << elapsed
         << "s] " << c.summary;
    if (!pass) line << " -- " << error;
    std::cout << line.str() << "\n";
    if (!pass) ++failures;
  }
  std::cout << (failures == 0 ? "acceptance: all criteria passed"
                              : "acceptance: " + std::to_string(failures) + " criteria failed")
            << "\n";
  return failures == 0 ? 0 : 1;
}
