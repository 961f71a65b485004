#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "carnot/algebra.hpp"

namespace carnot {

/// Algebra file format, version "carnot v1":
///   carnot v1
///   name <string>
///   layers d1 d2 ... dr
///   basis l1 ... ln            (optional; defaults to e1..en)
///   bracket i j = c1 k1 [+ c2 k2 ...]
/// Indices are 1-based layer-major with i < j; rationals are "p" or "p/q".
/// Unlisted brackets are zero; duplicate (i, j) lines are rejected.
std::shared_ptr<const CarnotAlgebra> parse_algebra(std::string_view text);

/// Canonical emission: brackets ordered lexicographically by (i, j), terms by
/// target. parse(emit(a)) == a and emit(parse(f)) is idempotent.
std::string emit_algebra(const CarnotAlgebra& alg);

/// Element input: either a comma-separated rational vector, layer-major and of
/// full length, or a single basis label.
Element parse_element(const AlgebraPtr& alg, const std::string& text);

/// "a e1 + b e3 - c e7" with unit coefficients omitted; "0" for zero.
std::string format_element(const Element& x);

/// Rows separated by ';', entries by ','.
Subspace parse_subspace(const std::string& text, std::size_t ambient);
RatMatrix parse_matrix(const std::string& text);

std::string format_vector(const RatVector& v);

std::uint64_t fnv1a(std::string_view s);
std::uint64_t fingerprint(const CarnotAlgebra& alg);
std::uint64_t fingerprint(const Subspace& s);
std::string fingerprint_hex(std::uint64_t h);

}  // namespace carnot
