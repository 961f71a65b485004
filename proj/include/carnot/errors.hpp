#pragma once

#include <stdexcept>
#include <string>

namespace carnot {

enum class Errc {
  // input / usage
  parse_error,
  duplicate_bracket,
  index_out_of_range,
  unknown_catalog_name,
  bad_params,
  // domain checks
  algebra_mismatch,
  dimension_mismatch,
  non_positive_scale,
  bad_layer_index,
  bad_exponent,
  empty_first_layer,
  not_in_first_layer,
  trivial_subspace,
  not_proper,
  not_subalgebra,
  not_graded_ideal,
  quotient_not_carnot,
  not_two_step,
  not_complement,
  unsupported_step,
  not_horizontal,
  invalid_algebra,
  // budgets
  search_budget_exceeded,
  grid_budget_exceeded,
  recursion_depth_exceeded,
};

class CarnotError : public std::runtime_error {
public:
  CarnotError(Errc code, const std::string& what, int line = -1)
      : std::runtime_error(what), code_(code), line_(line) {}

  Errc code() const { return code_; }
  /// Source line for parse errors, -1 otherwise.
  int line() const { return line_; }

  bool is_usage_error() const {
    switch (code_) {
      case Errc::parse_error:
      case Errc::duplicate_bracket:
      case Errc::index_out_of_range:
      case Errc::unknown_catalog_name:
      case Errc::bad_params:
        return true;
      default:
        return false;
    }
  }

  bool is_budget_error() const {
    switch (code_) {
      case Errc::search_budget_exceeded:
      case Errc::grid_budget_exceeded:
      case Errc::recursion_depth_exceeded:
        return true;
      default:
        return false;
    }
  }

private:
  Errc code_;
  int line_;
};

}  // namespace carnot
