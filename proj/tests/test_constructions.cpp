#include <doctest.h>

#include "carnot/constructions.hpp"
#include "carnot/errors.hpp"
#include "carnot/io.hpp"
#include "carnot/rank_analysis.hpp"
#include "support.hpp"

using namespace carnot;
using carnot::testing::random_first_layer;

TEST_CASE("direct product: dims, validation, embeddings") {
  auto h = catalog("heisenberg_1");
  auto a1 = catalog("abelian_1");
  auto prod = direct_product(*h, *a1);
  CHECK(prod.algebra->layer_dims() == std::vector<std::size_t>{3, 1});
  CHECK(validate(*prod.algebra).pass());

  auto ha = verify_graded_map(*h, *prod.algebra, prod.emb_a);
  CHECK(ha.graded_homomorphism());
  CHECK(ha.injective);
  auto hb = verify_graded_map(*a1, *prod.algebra, prod.emb_b);
  CHECK(hb.graded_homomorphism());
  CHECK(hb.injective);

  auto ex1 = catalog("paper_example_1");
  CHECK(validate(*direct_product(*ex1, *h).algebra).pass());
}

TEST_CASE("direct product: rank additivity spot check") {
  auto h = catalog("heisenberg_1");
  auto prod = direct_product(*h, *h);
  // e1 + f1 has rank 2
  RatVector v(prod.algebra->dim(), Rat(0));
  v[0] = 1;  // e1 of the first factor
  v[2] = 1;  // e1 of the second factor (layer-major: e1.a e2.a e1.b e2.b ...)
  CHECK(rank_of(Element(prod.algebra, v)) == 2);
}

TEST_CASE("graded ideal test and quotient") {
  auto h = catalog("heisenberg_1");
  GradedIdeal center{{Subspace::zero(2), Subspace::full(1)}};
  CHECK(is_graded_ideal(*h, center));

  auto quot = quotient_by_graded_ideal(*h, center);
  CHECK(quot.algebra->layer_dims() == std::vector<std::size_t>{2});
  CHECK(quot.algebra->table().empty());  // abelian R^2

  // V1 alone is not an ideal ([e1, e2] = e3 escapes)
  GradedIdeal bad{{Subspace::full(2), Subspace::zero(1)}};
  CHECK(!is_graded_ideal(*h, bad));
  CHECK_THROWS_AS(quotient_by_graded_ideal(*h, bad), CarnotError);

  // quotient by the zero ideal is an isomorphic copy
  GradedIdeal zero{{Subspace::zero(2), Subspace::zero(1)}};
  auto copy = quotient_by_graded_ideal(*h, zero);
  CHECK(structurally_equal(*copy.algebra, *h));

  // quotient by everything is not Carnot
  GradedIdeal all{{Subspace::full(2), Subspace::full(1)}};
  CHECK_THROWS_AS(quotient_by_graded_ideal(*h, all), CarnotError);
}

TEST_CASE("central product: two Heisenbergs glued along centers") {
  auto h = catalog("heisenberg_1");
  RatMatrix glue = identity_matrix(1);
  auto cp = central_product(*h, *h, Subspace::full(1), Subspace::full(1), glue);
  CHECK(cp.algebra->layer_dims() == std::vector<std::size_t>{4, 1});
  CHECK(structurally_equal(*cp.algebra, *catalog("heisenberg_2")));
  CHECK(validate(*cp.algebra).pass());

  // embeddings are graded monomorphisms
  auto ra = verify_graded_map(*h, *cp.algebra, cp.emb_a);
  CHECK(ra.graded_homomorphism());
  CHECK(ra.injective);

  // gluing along the zero subspace is the plain direct product
  auto cp0 = central_product(*h, *h, Subspace::zero(1), Subspace::zero(1), RatMatrix(1));
  CHECK(structurally_equal(*cp0.algebra, *direct_product(*h, *h).algebra));
}

TEST_CASE("central product: rank lower bound on samples") {
  auto h = catalog("heisenberg_1");
  auto cp = central_product(*h, *h, Subspace::full(1), Subspace::full(1), identity_matrix(1));
  DetRng rng(31);
  for (int i = 0; i < 40; ++i) {
    Element xa = random_first_layer(h, rng);
    Element xb = random_first_layer(h, rng);
    RatVector v = matvec(cp.emb_a, xa.coords());
    RatVector w = matvec(cp.emb_b, xb.coords());
    for (std::size_t c = 0; c < v.size(); ++c) v[c] += w[c];
    CHECK(rank_of(Element(cp.algebra, v)) >=
          std::max(rank_of(xa), rank_of(xb)));
  }
}

TEST_CASE("central product: step mismatch is rejected") {
  auto h = catalog("heisenberg_1");
  auto f4 = catalog("model_filiform_4");
  CHECK_THROWS_AS(
      central_product(*h, *f4, Subspace::full(1), Subspace::full(1), identity_matrix(1)),
      CarnotError);
}

TEST_CASE("level one product: two Heisenbergs") {
  auto h = catalog("heisenberg_1");
  RatVector x0{Rat(1), Rat(0)};
  Subspace u1 = Subspace::span(2, {{Rat(0), Rat(1)}});
  auto lp = level_one_product(*h, *h, x0, x0, u1, u1);
  CHECK(lp.algebra->layer_dims() == std::vector<std::size_t>{3, 2});
  CHECK(validate(*lp.algebra).pass());

  auto ra = verify_graded_map(*h, *lp.algebra, lp.emb_a);
  CHECK(ra.graded_homomorphism());
  CHECK(ra.injective);
  auto rb = verify_graded_map(*h, *lp.algebra, lp.emb_b);
  CHECK(rb.graded_homomorphism());
  CHECK(rb.injective);

  // Lemma 4.3 instance: elements with an X component have rank >= 2,
  // and the minimal-rank span stays inside U1 + U1'
  DetRng rng(5);
  for (int i = 0; i < 40; ++i) {
    RatVector v(lp.algebra->dim(), Rat(0));
    v[0] = rng.next_rat();
    v[1] = rng.next_rat();
    v[2] = 0;
    while (v[2] == 0) v[2] = rng.next_rat();  // nonzero X coefficient
    CHECK(rank_of(Element(lp.algebra, v)) >= 2);
  }
  RankReport survey = min_rank_survey(lp.algebra, std::nullopt, {});
  Subspace u_sum = Subspace::span(3, parse_matrix("1,0,0;0,1,0"));
  CHECK(u_sum.contains(survey.span));
  CHECK(survey.r_min_found == 1);

  CHECK_THROWS_AS(level_one_product(*h, *catalog("model_filiform_4"), x0, x0, u1, u1),
                  CarnotError);
  // U1 must complement R*X0
  Subspace not_complement = Subspace::span(2, {{Rat(1), Rat(0)}});
  CHECK_THROWS_AS(level_one_product(*h, *h, x0, x0, not_complement, u1), CarnotError);
}

TEST_CASE("catalog: golden entries") {
  auto f4 = catalog("model_filiform_4");
  CHECK(f4->layer_dims() == std::vector<std::size_t>{2, 1, 1, 1});
  auto e1 = Element::basis(f4, 0);
  for (std::size_t i = 2; i <= 4; ++i)
    CHECK(bracket(e1, Element::basis(f4, i - 1)).coords() == Element::basis(f4, i).coords());

  auto f26 = catalog("free_2step_6");
  CHECK(f26->layer_dims() == std::vector<std::size_t>{6, 15});

  auto ex1 = catalog("paper_example_1");
  CHECK(ex1->layer_dims() == std::vector<std::size_t>{6, 2, 2});
  CHECK(validate(*ex1).pass());

  auto ex3 = catalog("paper_example_3");
  CHECK(ex3->layer_dims() == std::vector<std::size_t>{8, 16, 1, 1});
  CHECK(validate(*ex3).pass());

  CHECK_THROWS_AS(catalog("nonesuch"), CarnotError);
  CHECK_THROWS_AS(catalog("heisenberg_0"), CarnotError);
  CHECK_THROWS_AS(catalog("model_filiform_1"), CarnotError);
}

TEST_CASE("direct product with distinct first-layer ranks has proper min-rank span") {
  auto h = catalog("heisenberg_1");     // r1 = 1
  auto f = catalog("free_2step_3");     // r1 = 2
  auto prod = direct_product(*h, *f);
  RankReport survey = min_rank_survey(prod.algebra, std::nullopt, {});
  CHECK(survey.r_min_found == 1);
  CHECK(survey.span.dim() == 2);
  CHECK(survey.span.dim() < prod.algebra->layer_dims()[0]);
}

TEST_CASE("quotient dimension bookkeeping layer-wise") {
  auto h2 = catalog("heisenberg_2");
  GradedIdeal center{{Subspace::zero(4), Subspace::full(1)}};
  auto quot = quotient_by_graded_ideal(*h2, center);
  CHECK(quot.algebra->layer_dims() == std::vector<std::size_t>{4});
}
