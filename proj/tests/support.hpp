#pragma once

#include <string>
#include <vector>

#include "carnot/algebra.hpp"
#include "carnot/constructions.hpp"

namespace carnot::testing {

/// Named catalog instances exercised by the property and acceptance suites.
inline const std::vector<std::string>& catalog_roster() {
  static const std::vector<std::string> roster{
      "heisenberg_1",     "heisenberg_2", "abelian_1",       "abelian_3",
      "model_filiform_4", "model_filiform_6", "free_2step_3", "free_2step_6",
      "paper_example_1",  "paper_example_3",
  };
  return roster;
}

inline Element random_element(const AlgebraPtr& alg, DetRng& rng) {
  return Element(alg, rng.next_vector(alg->dim()));
}

inline Element random_first_layer(const AlgebraPtr& alg, DetRng& rng) {
  RatVector v(alg->dim(), Rat(0));
  for (std::size_t i = 0; i < alg->layer_dims()[0]; ++i) v[i] = rng.next_rat();
  return Element(alg, std::move(v));
}

}  // namespace carnot::testing
