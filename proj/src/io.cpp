#include "carnot/io.hpp"

#include <algorithm>
#include <sstream>

#include "carnot/errors.hpp"

namespace carnot {

Rat parse_rat(const std::string& text) {
  if (text.empty()) throw CarnotError(Errc::bad_params, "empty rational");
  const auto slash = text.find('/');
  auto check_int = [&](const std::string& s) {
    if (s.empty()) return false;
    std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (start == s.size()) return false;
    for (std::size_t i = start; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  std::string num = slash == std::string::npos ? text : text.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
  if (!check_int(num) || !check_int(den))
    throw CarnotError(Errc::bad_params, "malformed rational: " + text);
  mpz_class n(num), d(den);
  if (d == 0) throw CarnotError(Errc::bad_params, "zero denominator: " + text);
  Rat q(n, d);
  q.canonicalize();
  return q;
}

std::string rat_to_string(const Rat& q) { return q.get_str(); }

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream is(line);
  std::string token;
  while (is >> token) tokens.push_back(token);
  return tokens;
}

[[noreturn]] void parse_fail(int line, const std::string& message) {
  throw CarnotError(Errc::parse_error, "line " + std::to_string(line) + ": " + message, line);
}

std::size_t parse_index(const std::string& token, int line) {
  for (char c : token)
    if (c < '0' || c > '9') parse_fail(line, "expected a positive integer, got '" + token + "'");
  if (token.empty()) parse_fail(line, "expected a positive integer");
  unsigned long value = std::stoul(token);
  if (value == 0) parse_fail(line, "indices are 1-based");
  return static_cast<std::size_t>(value);
}

}  // namespace

std::shared_ptr<const CarnotAlgebra> parse_algebra(std::string_view text) {
  std::vector<std::string> lines;
  {
    std::string current;
    for (char c : text) {
      if (c == '\n') {
        lines.push_back(current);
        current.clear();
      } else if (c != '\r') {
        current.push_back(c);
      }
    }
    if (!current.empty()) lines.push_back(current);
  }

  int lineno = 0;
  auto next_content = [&](std::size_t& i) -> std::optional<std::vector<std::string>> {
    while (i < lines.size()) {
      lineno = static_cast<int>(i + 1);
      const std::string& raw = lines[i];
      ++i;
      std::string stripped = raw.substr(0, raw.find('#'));
      auto tokens = tokenize(stripped);
      if (!tokens.empty()) return tokens;
    }
    return std::nullopt;
  };

  std::size_t i = 0;
  auto header = next_content(i);
  if (!header || header->size() != 2 || (*header)[0] != "carnot" || (*header)[1] != "v1")
    parse_fail(header ? lineno : 1, "expected header 'carnot v1'");

  auto name_line = next_content(i);
  if (!name_line || (*name_line)[0] != "name" || name_line->size() < 2)
    parse_fail(name_line ? lineno : lineno + 1, "expected 'name <string>'");
  std::string name = (*name_line)[1];
  for (std::size_t t = 2; t < name_line->size(); ++t) name += " " + (*name_line)[t];

  auto layers_line = next_content(i);
  if (!layers_line || (*layers_line)[0] != "layers" || layers_line->size() < 2)
    parse_fail(layers_line ? lineno : lineno + 1, "expected 'layers d1 ... dr'");
  std::vector<std::size_t> dims;
  for (std::size_t t = 1; t < layers_line->size(); ++t) {
    std::size_t d = parse_index((*layers_line)[t], lineno);
    dims.push_back(d);
  }
  std::size_t n = 0;
  for (auto d : dims) n += d;

  std::vector<std::string> labels;
  BracketTable table;
  auto tokens = next_content(i);
  if (tokens && (*tokens)[0] == "basis") {
    if (tokens->size() != n + 1)
      parse_fail(lineno, "basis line must list exactly " + std::to_string(n) + " labels");
    labels.assign(tokens->begin() + 1, tokens->end());
    tokens = next_content(i);
  }

  while (tokens) {
    if ((*tokens)[0] != "bracket") parse_fail(lineno, "expected a 'bracket' line");
    if (tokens->size() < 6 || (*tokens)[3] != "=")
      parse_fail(lineno, "expected 'bracket i j = c k [+ c k ...]'");
    const std::size_t bi = parse_index((*tokens)[1], lineno);
    const std::size_t bj = parse_index((*tokens)[2], lineno);
    if (bi > n || bj > n)
      throw CarnotError(Errc::index_out_of_range,
                        "line " + std::to_string(lineno) + ": bracket index exceeds dimension",
                        lineno);
    if (bi >= bj) parse_fail(lineno, "bracket indices must satisfy i < j");
    if (table.count({bi - 1, bj - 1}))
      throw CarnotError(Errc::duplicate_bracket,
                        "line " + std::to_string(lineno) + ": duplicate bracket (" +
                            std::to_string(bi) + "," + std::to_string(bj) + ")",
                        lineno);
    std::vector<BracketTerm> terms;
    std::size_t t = 4;
    while (t < tokens->size()) {
      if (t + 1 >= tokens->size()) parse_fail(lineno, "dangling term in bracket line");
      Rat c;
      try {
        c = parse_rat((*tokens)[t]);
      } catch (const CarnotError&) {
        parse_fail(lineno, "malformed coefficient '" + (*tokens)[t] + "'");
      }
      const std::size_t k = parse_index((*tokens)[t + 1], lineno);
      if (k > n)
        throw CarnotError(Errc::index_out_of_range,
                          "line " + std::to_string(lineno) + ": bracket target exceeds dimension",
                          lineno);
      if (c != 0) terms.push_back({k - 1, c});
      t += 2;
      if (t < tokens->size()) {
        if ((*tokens)[t] != "+") parse_fail(lineno, "terms must be joined by '+'");
        ++t;
        if (t >= tokens->size()) parse_fail(lineno, "dangling '+' in bracket line");
      }
    }
    table[{bi - 1, bj - 1}] = std::move(terms);
    tokens = next_content(i);
  }

  try {
    return std::make_shared<CarnotAlgebra>(std::move(name), std::move(dims), std::move(labels),
                                           std::move(table));
  } catch (const CarnotError& e) {
    if (e.code() == Errc::index_out_of_range) throw;
    throw CarnotError(Errc::parse_error, e.what());
  }
}

std::string emit_algebra(const CarnotAlgebra& alg) {
  std::ostringstream os;
  os << "carnot v1\n";
  os << "name " << alg.name() << "\n";
  os << "layers";
  for (auto d : alg.layer_dims()) os << " " << d;
  os << "\n";
  os << "basis";
  for (const auto& l : alg.labels()) os << " " << l;
  os << "\n";
  for (const auto& [key, terms] : alg.table()) {
    os << "bracket " << key.first + 1 << " " << key.second + 1 << " =";
    for (std::size_t t = 0; t < terms.size(); ++t) {
      if (t) os << " +";
      os << " " << rat_to_string(terms[t].coeff) << " " << terms[t].target + 1;
    }
    os << "\n";
  }
  return os.str();
}

Element parse_element(const AlgebraPtr& alg, const std::string& text) {
  if (text.find(',') == std::string::npos) {
    if (auto idx = alg->index_of_label(text)) return Element::basis(alg, *idx);
    throw CarnotError(Errc::bad_params,
                      "element must be a basis label or a comma-separated vector: " + text);
  }
  RatVector coords;
  std::string piece;
  std::istringstream is(text);
  while (std::getline(is, piece, ',')) {
    piece.erase(std::remove(piece.begin(), piece.end(), ' '), piece.end());
    coords.push_back(parse_rat(piece));
  }
  if (coords.size() != alg->dim())
    throw CarnotError(Errc::dimension_mismatch,
                      "element needs " + std::to_string(alg->dim()) + " coordinates");
  return Element(alg, std::move(coords));
}

std::string format_element(const Element& x) {
  std::ostringstream os;
  bool first = true;
  const auto& labels = x.algebra().labels();
  for (std::size_t i = 0; i < x.coords().size(); ++i) {
    const Rat& c = x.coords()[i];
    if (c == 0) continue;
    const bool negative = c < 0;
    const Rat mag = abs(c);
    if (first) {
      if (negative) os << "-";
      first = false;
    } else {
      os << (negative ? " - " : " + ");
    }
    if (mag != 1) os << rat_to_string(mag) << " ";
    os << labels[i];
  }
  if (first) return "0";
  return os.str();
}

Subspace parse_subspace(const std::string& text, std::size_t ambient) {
  return Subspace::span(ambient, parse_matrix(text));
}

RatMatrix parse_matrix(const std::string& text) {
  RatMatrix rows;
  std::string row_text;
  std::istringstream rows_in(text);
  while (std::getline(rows_in, row_text, ';')) {
    RatVector row;
    std::string piece;
    std::istringstream row_in(row_text);
    while (std::getline(row_in, piece, ',')) {
      piece.erase(std::remove(piece.begin(), piece.end(), ' '), piece.end());
      if (piece.empty()) continue;
      row.push_back(parse_rat(piece));
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_vector(const RatVector& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << rat_to_string(v[i]);
  return os.str();
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t fingerprint(const CarnotAlgebra& alg) { return fnv1a(emit_algebra(alg)); }

std::uint64_t fingerprint(const Subspace& s) {
  std::ostringstream os;
  os << s.ambient() << ";";
  for (const auto& row : s.basis()) os << format_vector(row) << ";";
  return fnv1a(os.str());
}

std::string fingerprint_hex(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace carnot
