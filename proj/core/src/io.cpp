#include "kscatter/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <unistd.h>

namespace kscatter {

namespace {

struct Token {
  std::string text;
  std::size_t column;  // 1-based
};

struct Line {
  std::size_t number;
  std::string raw;  // without comment and trailing blanks
  std::vector<Token> tokens;

  const Token& at(std::size_t i) const {
    if (i >= tokens.size()) {
      throw ParseError(number, raw.size() + 1, "missing field after '" + tokens.back().text + "'");
    }
    return tokens[i];
  }
  /// Raw text from the start of token i to the end of the line.
  std::string rest(std::size_t i) const { return i < tokens.size() ? raw.substr(tokens[i].column - 1) : ""; }
  [[noreturn]] void fail(std::size_t token, const std::string& what) const {
    throw ParseError(number, token < tokens.size() ? tokens[token].column : raw.size() + 1, what);
  }
};

std::vector<Line> lex(const std::string& text) {
  std::vector<Line> lines;
  std::istringstream in(text);
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    while (!raw.empty() && std::isspace(static_cast<unsigned char>(raw.back()))) raw.pop_back();
    Line line{number, raw, {}};
    std::size_t i = 0;
    while (i < raw.size()) {
      if (std::isspace(static_cast<unsigned char>(raw[i]))) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < raw.size() && !std::isspace(static_cast<unsigned char>(raw[j]))) ++j;
      line.tokens.push_back({raw.substr(i, j - i), i + 1});
      i = j;
    }
    if (!line.tokens.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

std::int64_t to_int(const Line& line, std::size_t i, const std::string& text) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size() || text.empty())
    line.fail(i, "expected an integer, got '" + text + "'");
  return v;
}

std::int64_t int_at(const Line& line, std::size_t i) { return to_int(line, i, line.at(i).text); }

Integer integer_from(const Line& line, std::size_t i, const std::string& text) {
  Integer z;
  bool ok = !text.empty() && z.set_str(text, 10) == 0;
  if (!ok || text.find_first_of(" \t") != std::string::npos) line.fail(i, "expected an integer, got '" + text + "'");
  return z;
}

LatticeVector vector_from(const Line& line, std::size_t i, const std::string& text) {
  std::vector<std::int64_t> coords;
  std::size_t start = 0;
  if (text.empty()) line.fail(i, "empty vector");
  while (true) {
    auto comma = text.find(',', start);
    coords.push_back(to_int(line, i, text.substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return LatticeVector(std::move(coords));
}

RationalPoint point_from(const Line& line, std::size_t i, const std::string& text) {
  try {
    return parse_rational_point(text);
  } catch (const Error& e) {
    line.fail(i, "bad rational point '" + text + "'");
  }
}

std::vector<LatticeVector> vector_list(const Line& line, std::size_t i, const std::string& text, char sep) {
  std::vector<LatticeVector> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    auto cut = text.find(sep, start);
    out.push_back(vector_from(line, i, text.substr(start, cut - start)));
    if (cut == std::string::npos) break;
    start = cut + 1;
  }
  return out;
}

/// Value of a `key=value` token.
std::string keyed(const Line& line, std::size_t i, const std::string& key) {
  const auto& t = line.at(i).text;
  if (t.rfind(key + "=", 0) != 0) line.fail(i, "expected '" + key + "=...'");
  return t.substr(key.size() + 1);
}

void expect_count(const Line& line, std::size_t n) {
  if (line.tokens.size() != n) line.fail(std::min(n, line.tokens.size()), "expected " + std::to_string(n - 1) + " field(s)");
}

std::string join(const std::vector<LatticeVector>& vs, char sep) {
  std::string s;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) s += sep;
    auto t = vs[i].to_string();
    s += t.substr(1, t.size() - 2);
  }
  return s;
}

std::string bare(const LatticeVector& v) {
  auto t = v.to_string();
  return t.substr(1, t.size() - 2);
}

std::string bare(const RationalPoint& p) {
  auto t = p.to_string();
  return t.substr(1, t.size() - 2);
}

std::string bare(const std::vector<std::int64_t>& v) { return bare(LatticeVector(v)); }

// ---- seed header shared by several formats

struct SeedHeader {
  std::optional<std::size_t> rank;
  std::optional<std::pair<std::vector<std::int64_t>, std::size_t>> matrix;  // entries, line
  std::optional<std::vector<std::size_t>> unfrozen;
  std::size_t first_line = 1;
  const char* matrix_key = "skew_matrix";

  bool consume(const Line& line) {
    const auto& key = line.tokens[0].text;
    if (key == "rank") {
      expect_count(line, 2);
      auto r = int_at(line, 1);
      if (r <= 0) line.fail(1, "rank must be positive");
      if (rank) line.fail(0, "duplicate 'rank'");
      rank = static_cast<std::size_t>(r);
      first_line = line.number;
      return true;
    }
    if (key == matrix_key && !matrix) {
      std::vector<std::int64_t> entries;
      for (std::size_t i = 1; i < line.tokens.size(); ++i) entries.push_back(int_at(line, i));
      if (!rank) line.fail(0, "'rank' must come first");
      if (entries.size() != *rank * *rank)
        line.fail(line.tokens.size() > 1 ? 1 : 0, "expected " + std::to_string(*rank * *rank) + " matrix entries");
      matrix.emplace(std::move(entries), line.number);
      return true;
    }
    if (key == "unfrozen") {
      if (!rank) line.fail(0, "'rank' must come first");
      if (unfrozen) line.fail(0, "duplicate 'unfrozen'");
      std::vector<std::size_t> idx;
      for (std::size_t i = 1; i < line.tokens.size(); ++i) {
        auto v = int_at(line, i);
        if (v < 1 || static_cast<std::size_t>(v) > *rank) line.fail(i, "index out of range 1.." + std::to_string(*rank));
        idx.push_back(static_cast<std::size_t>(v - 1));
      }
      unfrozen = std::move(idx);
      return true;
    }
    return false;
  }

  void require(std::size_t last_line) const {
    if (!rank) throw ParseError(last_line, 1, "missing 'rank'");
    if (!matrix) throw ParseError(last_line, 1, std::string("missing '") + matrix_key + "'");
    if (!unfrozen) throw ParseError(last_line, 1, "missing 'unfrozen'");
  }

  Seed seed() const { return Seed(*rank, matrix->first, *unfrozen); }
};

std::string seed_lines(const Seed& seed, const char* matrix_key = "skew_matrix") {
  std::ostringstream os;
  os << "rank " << seed.rank() << "\n" << matrix_key;
  for (auto e : seed.form().entries()) os << ' ' << e;
  os << "\nunfrozen";
  for (auto i : seed.unfrozen()) os << ' ' << i + 1;
  os << '\n';
  return os.str();
}

std::size_t last_line_number(const std::vector<Line>& lines) { return lines.empty() ? 1 : lines.back().number; }

void unknown(const Line& line) { line.fail(0, "unknown record '" + line.tokens[0].text + "'"); }

std::int64_t parse_order(const Line& line, std::optional<std::int64_t>& slot) {
  expect_count(line, 2);
  if (slot) line.fail(0, "duplicate 'order'");
  auto k = int_at(line, 1);
  if (k < 0) line.fail(1, "order must be nonnegative");
  slot = k;
  return k;
}

}  // namespace

// ---------------------------------------------------------------- seed

std::string write_seed(const Seed& seed) { return "# seed\n" + seed_lines(seed); }

Seed parse_seed(const std::string& text) {
  auto lines = lex(text);
  SeedHeader h;
  for (const auto& line : lines)
    if (!h.consume(line)) unknown(line);
  h.require(last_line_number(lines));
  return h.seed();
}

// ---------------------------------------------------------------- diagram

std::string write_diagram(const ScatteringDiagram& d) {
  std::ostringstream os;
  os << "# scattering diagram\n" << seed_lines(d.seed()) << "order " << d.order() << '\n';
  for (const auto& w : d.walls()) {
    os << "wall " << (w.is_initial() ? "initial" : "generated") << " direction=" << bare(w.direction())
       << " support=" << join(w.support.generators(), ';') << " coeffs=";
    const auto& cs = w.function.coeffs();
    for (std::size_t i = 0; i < cs.size(); ++i) os << (i ? "," : "") << cs[i].get_str();
    os << '\n';
  }
  return os.str();
}

ScatteringDiagram parse_diagram(const std::string& text) {
  auto lines = lex(text);
  SeedHeader h;
  std::optional<std::int64_t> order;
  std::vector<const Line*> walls;
  for (const auto& line : lines) {
    if (h.consume(line)) continue;
    const auto& key = line.tokens[0].text;
    if (key == "order") {
      parse_order(line, order);
    } else if (key == "wall") {
      walls.push_back(&line);
    } else {
      unknown(line);
    }
  }
  h.require(last_line_number(lines));
  if (!order) throw ParseError(last_line_number(lines), 1, "missing 'order'");
  Seed seed = h.seed();
  ScatteringDiagram d(seed, *order);
  for (const Line* lp : walls) {
    const Line& line = *lp;
    expect_count(line, 5);
    const auto& kind = line.at(1).text;
    if (kind != "initial" && kind != "generated") line.fail(1, "wall kind must be 'initial' or 'generated'");
    auto dir = vector_from(line, 2, keyed(line, 2, "direction"));
    auto support = vector_list(line, 3, keyed(line, 3, "support"), ';');
    std::vector<Integer> coeffs;
    auto ctext = keyed(line, 4, "coeffs");
    if (!ctext.empty()) {
      std::size_t start = 0;
      while (true) {
        auto comma = ctext.find(',', start);
        coeffs.push_back(integer_from(line, 4, ctext.substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
    }
    if (dir.rank() != seed.rank()) line.fail(2, "direction has wrong length");
    for (const auto& g : support)
      if (g.rank() != seed.rank()) line.fail(3, "support generator has wrong length");
    if (support.empty()) line.fail(3, "empty support");
    try {
      WallFunction f(dir, coeffs, *order, *seed.monoid());
      d.mutable_walls().push_back(make_wall(seed, Cone(seed.rank(), support), std::move(f),
                                            kind == "initial" ? WallOrigin::Initial : WallOrigin::Generated));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      line.fail(1, e.what());
    }
  }
  return d;
}

// ---------------------------------------------------------------- theta

std::string write_theta(const ThetaDump& dump) {
  std::ostringstream os;
  const auto& t = dump.theta;
  os << "# theta function\n" << seed_lines(dump.seed) << "order " << dump.order << '\n';
  os << "m " << bare(t.m) << "\nbasepoint " << bare(t.basepoint) << "\nbase " << bare(t.table.base()) << '\n';
  for (const auto& [off, c] : t.table.terms()) os << "term " << bare(t.table.base() + off) << ' ' << c.get_str() << '\n';
  return os.str();
}

ThetaDump parse_theta(const std::string& text) {
  auto lines = lex(text);
  SeedHeader h;
  std::optional<std::int64_t> order;
  std::optional<LatticeVector> m, base;
  std::optional<RationalPoint> q;
  std::vector<const Line*> terms;
  for (const auto& line : lines) {
    if (h.consume(line)) continue;
    const auto& key = line.tokens[0].text;
    if (key == "order") {
      parse_order(line, order);
    } else if (key == "m") {
      expect_count(line, 2);
      m = vector_from(line, 1, line.at(1).text);
    } else if (key == "basepoint") {
      expect_count(line, 2);
      q = point_from(line, 1, line.at(1).text);
    } else if (key == "base") {
      expect_count(line, 2);
      base = vector_from(line, 1, line.at(1).text);
    } else if (key == "term") {
      expect_count(line, 3);
      terms.push_back(&line);
    } else {
      unknown(line);
    }
  }
  auto last = last_line_number(lines);
  h.require(last);
  if (!order || !m || !q || !base) throw ParseError(last, 1, "theta dump needs order, m, basepoint and base");
  Seed seed = h.seed();
  TruncatedMonoidSeries table(seed.monoid(), *base, *order);
  for (const Line* lp : terms) {
    auto e = vector_from(*lp, 1, lp->at(1).text);
    auto c = integer_from(*lp, 2, lp->at(2).text);
    if (e.rank() != seed.rank()) lp->fail(1, "exponent has wrong length");
    if (!seed.monoid()->contains(e - *base)) lp->fail(1, "exponent is not in base + P");
    table.add_term(e - *base, c);
  }
  return ThetaDump{seed, *order, ThetaFunction{*m, *q, table}};
}

// ---------------------------------------------------------------- tables

std::string write_table(const StructureConstantTable& table) {
  std::ostringstream os;
  os << "# structure constants\norder " << table.order << "\ninputs";
  for (const auto& p : table.inputs) os << ' ' << bare(p);
  os << "\nbasepoint " << bare(table.basepoint) << "\ncertified";
  for (const auto& f : table.certified_against) os << ' ' << bare(f);
  os << '\n';
  for (const auto& [q, c] : table.entries) os << "entry " << bare(q) << ' ' << c.get_str() << '\n';
  return os.str();
}

StructureConstantTable parse_table(const std::string& text) {
  auto lines = lex(text);
  StructureConstantTable t;
  std::optional<std::int64_t> order;
  bool have_inputs = false, have_point = false, have_cert = false;
  for (const auto& line : lines) {
    const auto& key = line.tokens[0].text;
    if (key == "order") {
      t.order = parse_order(line, order);
    } else if (key == "inputs") {
      for (std::size_t i = 1; i < line.tokens.size(); ++i) t.inputs.push_back(vector_from(line, i, line.tokens[i].text));
      have_inputs = true;
    } else if (key == "basepoint") {
      expect_count(line, 2);
      t.basepoint = point_from(line, 1, line.at(1).text);
      have_point = true;
    } else if (key == "certified") {
      for (std::size_t i = 1; i < line.tokens.size(); ++i)
        t.certified_against.push_back(vector_from(line, i, line.tokens[i].text));
      have_cert = true;
    } else if (key == "entry") {
      expect_count(line, 3);
      auto q = vector_from(line, 1, line.at(1).text);
      auto c = integer_from(line, 2, line.at(2).text);
      if (sgn(c) == 0) line.fail(2, "zero entries are omitted");
      if (!t.entries.emplace(q, c).second) line.fail(1, "duplicate entry");
    } else {
      unknown(line);
    }
  }
  if (!order || !have_inputs || !have_point || !have_cert)
    throw ParseError(last_line_number(lines), 1, "table needs order, inputs, basepoint and certified");
  return t;
}

// ---------------------------------------------------------------- fans

namespace {

std::string fan_lines(const Fan& fan) {
  std::ostringstream os;
  os << "rank 2\n";
  for (const auto& r : fan.rays()) os << "ray " << r[0] << ' ' << r[1] << '\n';
  for (std::size_t i = 0; i < fan.size(); ++i) {
    auto [a, b] = fan.cone(i);
    os << "cone " << a + 1 << ' ' << b + 1 << '\n';
  }
  return os.str();
}

struct FanHeader {
  bool have_rank = false;
  std::vector<LatticeVector> rays;
  std::vector<std::pair<std::size_t, std::size_t>> cones;
  std::vector<const Line*> cone_lines;

  bool consume(const Line& line) {
    const auto& key = line.tokens[0].text;
    if (key == "rank") {
      expect_count(line, 2);
      if (int_at(line, 1) != 2) line.fail(1, "toric mode supports rank 2 fans only");
      have_rank = true;
      return true;
    }
    if (key == "ray") {
      expect_count(line, 3);
      rays.push_back({int_at(line, 1), int_at(line, 2)});
      return true;
    }
    if (key == "cone") {
      expect_count(line, 3);
      auto a = int_at(line, 1), b = int_at(line, 2);
      if (a < 1) line.fail(1, "ray indices are 1-based");
      if (b < 1) line.fail(2, "ray indices are 1-based");
      cones.emplace_back(static_cast<std::size_t>(a - 1), static_cast<std::size_t>(b - 1));
      cone_lines.push_back(&line);
      return true;
    }
    return false;
  }

  Fan fan(std::size_t last) const {
    if (!have_rank) throw ParseError(last, 1, "missing 'rank'");
    if (cones.empty()) throw ParseError(last, 1, "fan needs maximal cones");
    for (std::size_t i = 0; i < cones.size(); ++i) {
      if (cones[i].first >= rays.size()) cone_lines[i]->fail(1, "no such ray");
      if (cones[i].second >= rays.size()) cone_lines[i]->fail(2, "no such ray");
    }
    return Fan(rays, cones);
  }
};

}  // namespace

std::string write_fan(const Fan& fan) { return "# fan\n" + fan_lines(fan); }

Fan parse_fan(const std::string& text) {
  auto lines = lex(text);
  FanHeader h;
  for (const auto& line : lines)
    if (!h.consume(line)) unknown(line);
  return h.fan(last_line_number(lines));
}

std::string write_toric(const ToricReport& report) {
  std::ostringstream os;
  const Fan& fan = report.fan;
  os << "# toric report\n" << fan_lines(fan);
  auto basis = fan.kernel_basis();
  for (std::size_t j = 0; j < basis.size(); ++j) os << "# K" << j + 3 << " = " << class_to_string(basis[j]) << '\n';
  for (std::size_t i = 0; i < report.kinks.size(); ++i) os << "kink " << i + 1 << ' ' << bare(report.kinks[i]) << '\n';
  for (const auto& p : report.products) {
    os << "product a=" << bare(p.a) << " b=" << bare(p.b) << " q=" << bare(p.q) << " gamma=" << bare(p.gamma)
       << " root=" << bare(p.root) << " kernel=" << bare(fan.kernel_coordinates(p.gamma)) << '\n';
  }
  for (const auto& [p, w] : report.weights) os << "weight p=" << bare(p) << " w=" << bare(w) << '\n';
  return os.str();
}

ToricReport parse_toric(const std::string& text) {
  auto lines = lex(text);
  FanHeader h;
  std::vector<const Line*> rest;
  for (const auto& line : lines)
    if (!h.consume(line)) rest.push_back(&line);
  ToricReport r{h.fan(last_line_number(lines)), {}, {}, {}};
  for (const Line* lp : rest) {
    const Line& line = *lp;
    const auto& key = line.tokens[0].text;
    if (key == "kink") {
      expect_count(line, 3);
      if (int_at(line, 1) != static_cast<std::int64_t>(r.kinks.size() + 1)) line.fail(1, "kinks must be listed in ray order");
      auto c = vector_from(line, 2, line.at(2).text).coords();
      if (c.size() != r.fan.size()) line.fail(2, "class has wrong length");
      r.kinks.push_back(c);
    } else if (key == "product") {
      expect_count(line, 7);
      ToricProductRecord p;
      p.a = vector_from(line, 1, keyed(line, 1, "a"));
      p.b = vector_from(line, 2, keyed(line, 2, "b"));
      p.q = vector_from(line, 3, keyed(line, 3, "q"));
      p.gamma = vector_from(line, 4, keyed(line, 4, "gamma")).coords();
      p.root = point_from(line, 5, keyed(line, 5, "root"));
      auto kernel = vector_from(line, 6, keyed(line, 6, "kernel")).coords();
      if (p.gamma.size() != r.fan.size() || !r.fan.in_kernel(p.gamma)) line.fail(4, "gamma is not a curve class");
      if (kernel != r.fan.kernel_coordinates(p.gamma)) line.fail(6, "kernel coordinates do not match gamma");
      r.products.push_back(std::move(p));
    } else if (key == "weight") {
      expect_count(line, 3);
      auto p = vector_from(line, 1, keyed(line, 1, "p"));
      auto w = vector_from(line, 2, keyed(line, 2, "w")).coords();
      r.weights.emplace_back(std::move(p), std::move(w));
    } else {
      unknown(line);
    }
  }
  return r;
}

// ---------------------------------------------------------------- Laurent text and traces

LaurentPolynomial parse_laurent(const std::string& text, std::size_t nvars) {
  LaurentPolynomial out(nvars);
  std::size_t i = 0;
  auto fail = [&](const std::string& what) -> void { throw ParseError(1, i + 1, what); };
  auto skip = [&] {
    while (i < text.size() && text[i] == ' ') ++i;
  };
  auto digits = [&]() -> std::string {
    std::size_t j = i;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
    std::string s = text.substr(i, j - i);
    i = j;
    return s;
  };
  skip();
  if (text.substr(i) == "0") return out;
  bool first = true;
  while (true) {
    skip();
    int sign = 1;
    if (!first) {
      if (i >= text.size()) break;
      if (text[i] == '+') {
        ++i;
      } else if (text[i] == '-') {
        sign = -1;
        ++i;
      } else {
        fail("expected '+' or '-'");
      }
      skip();
    } else if (i < text.size() && text[i] == '-') {
      sign = -1;
      ++i;
    }
    first = false;
    Integer coeff = 1;
    LatticeVector e(nvars);
    bool have = false;
    if (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      coeff = Integer(digits());
      have = true;
      if (i < text.size() && text[i] == '*') {
        ++i;
      } else {
        out.add_term(e, sign * coeff);
        continue;
      }
    }
    while (true) {
      if (i >= text.size() || text[i] != 'x') fail(have ? "expected a variable" : "expected a term");
      ++i;
      auto idx = digits();
      if (idx.empty()) fail("expected a variable index");
      std::size_t v = std::stoul(idx);
      if (v < 1 || v > nvars) fail("variable index out of range");
      std::int64_t p = 1;
      if (i < text.size() && text[i] == '^') {
        ++i;
        bool neg = i < text.size() && text[i] == '-';
        if (neg) ++i;
        auto ds = digits();
        if (ds.empty()) fail("expected an exponent");
        p = std::stoll(ds) * (neg ? -1 : 1);
      }
      e[v - 1] += p;
      have = true;
      if (i < text.size() && text[i] == '*') {
        ++i;
        continue;
      }
      break;
    }
    out.add_term(e, sign * coeff);
  }
  return out;
}

std::string write_trace(const MutationTrace& trace) {
  std::ostringstream os;
  const auto& s = trace.initial;
  auto matrix = [&](const ClusterSeed& seed) {
    os << "exchange_matrix";
    for (auto b : seed.b) os << ' ' << b;
    os << '\n';
  };
  os << "# mutation trace\nrank " << s.rank << '\n';
  matrix(s);
  os << "unfrozen";
  for (std::size_t i = 0; i < s.rank; ++i)
    if (!s.frozen[i]) os << ' ' << i + 1;
  os << "\nsequence";
  for (auto k : trace.sequence) os << ' ' << k + 1;
  os << '\n';
  for (std::size_t step = 0; step < trace.seeds.size(); ++step) {
    os << "step " << step << '\n';
    matrix(trace.seeds[step]);
    for (std::size_t i = 0; i < trace.clusters[step].size(); ++i)
      os << "var " << i + 1 << ' ' << trace.clusters[step][i].to_string() << '\n';
  }
  return os.str();
}

MutationTrace parse_trace(const std::string& text) {
  auto lines = lex(text);
  SeedHeader h;
  h.matrix_key = "exchange_matrix";
  std::optional<std::vector<std::size_t>> sequence;
  MutationTrace t;
  for (const auto& line : lines) {
    const auto& key = line.tokens[0].text;
    if (t.seeds.empty() && key != "step") {
      if (h.consume(line)) continue;
      if (key == "sequence") {
        std::vector<std::size_t> seq;
        for (std::size_t i = 1; i < line.tokens.size(); ++i) {
          auto v = int_at(line, i);
          if (v < 1 || !h.rank || static_cast<std::size_t>(v) > *h.rank) line.fail(i, "mutation index out of range");
          seq.push_back(static_cast<std::size_t>(v - 1));
        }
        sequence = std::move(seq);
        continue;
      }
      unknown(line);
    }
    if (key == "step") {
      if (t.seeds.empty()) {
        h.require(line.number);
        if (!sequence) line.fail(0, "missing 'sequence' before the first step");
        auto seed = h.seed();
        t.initial = ClusterSeed::from_seed(seed);
        t.sequence = *sequence;
      }
      expect_count(line, 2);
      if (int_at(line, 1) != static_cast<std::int64_t>(t.seeds.size())) line.fail(1, "steps must be numbered from 0");
      t.seeds.push_back(t.initial);
      t.clusters.emplace_back();
    } else if (key == "exchange_matrix") {
      auto& seed = t.seeds.back();
      if (line.tokens.size() != seed.rank * seed.rank + 1) line.fail(0, "wrong number of matrix entries");
      for (std::size_t i = 0; i < seed.b.size(); ++i) seed.b[i] = int_at(line, i + 1);
    } else if (key == "var") {
      auto& cluster = t.clusters.back();
      if (int_at(line, 1) != static_cast<std::int64_t>(cluster.size() + 1)) line.fail(1, "variables must be numbered from 1");
      try {
        cluster.push_back(parse_laurent(line.rest(2), t.initial.rank));
      } catch (const ParseError& e) {
        throw ParseError(line.number, line.at(2).column + e.column() - 1, e.what());
      }
    } else {
      unknown(line);
    }
  }
  if (t.seeds.empty()) throw ParseError(last_line_number(lines), 1, "trace has no steps");
  if (t.seeds.size() != t.sequence.size() + 1)
    throw ParseError(last_line_number(lines), 1, "number of steps does not match the sequence");
  for (const auto& c : t.clusters)
    if (c.size() != t.initial.rank) throw ParseError(last_line_number(lines), 1, "every step needs all variables");
  return t;
}

// ---------------------------------------------------------------- verify reports

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string write_report(const VerifyReport& report) {
  std::ostringstream os;
  os << "target " << report.target << '\n';
  for (const auto& c : report.checks) os << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
  os << "result " << (report.passed() ? "PASS" : "FAIL") << '\n';
  return os.str();
}

VerifyReport parse_report(const std::string& text) {
  auto lines = lex(text);
  VerifyReport r;
  std::optional<bool> result;
  for (const auto& line : lines) {
    const auto& key = line.tokens[0].text;
    if (key == "target") {
      r.target = line.rest(1);
    } else if (key == "PASS" || key == "FAIL") {
      const auto& name = line.at(1).text;
      if (name.size() < 2 || name.back() != ':') line.fail(1, "expected 'name:'");
      r.checks.push_back({name.substr(0, name.size() - 1), key == "PASS", line.rest(2)});
    } else if (key == "result") {
      expect_count(line, 2);
      result = line.at(1).text == "PASS";
    } else {
      unknown(line);
    }
  }
  if (!result || *result != r.passed()) throw ParseError(last_line_number(lines), 1, "missing or inconsistent result line");
  return r;
}

// ---------------------------------------------------------------- SVG

std::string render_svg(const ScatteringDiagram& d) {
  if (d.rank() != 2) throw Error(ErrorCode::UnsupportedRank, "SVG output is rank 2 only");
  const double size = 640, c = size / 2, reach = 250;
  auto fmt = [](double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return std::string(buf);
  };
  auto escape = [](const std::string& s) {
    std::string o;
    for (char ch : s) {
      if (ch == '<') o += "&lt;";
      else if (ch == '>') o += "&gt;";
      else if (ch == '&') o += "&amp;";
      else o += ch;
    }
    return o;
  };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\" viewBox=\"0 0 "
     << size << ' ' << size << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"10\" y=\"20\" font-family=\"monospace\" font-size=\"12\">order " << d.order() << ", "
     << d.walls().size() << " walls</text>\n";
  for (const auto& w : d.walls()) {
    const char* colour = w.is_initial() ? "#1f4e9c" : "#b2182b";
    std::string label = escape(w.function.to_string(3));
    for (const auto& g : w.support.generators()) {
      double gx = static_cast<double>(g[0]), gy = static_cast<double>(g[1]);
      double len = std::sqrt(gx * gx + gy * gy);
      double x = c + reach * gx / len, y = c - reach * gy / len;
      os << "<line x1=\"" << fmt(c) << "\" y1=\"" << fmt(c) << "\" x2=\"" << fmt(x) << "\" y2=\"" << fmt(y)
         << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
      os << "<text x=\"" << fmt(x + 4) << "\" y=\"" << fmt(y - 4) << "\" font-family=\"monospace\" font-size=\"11\" fill=\""
         << colour << "\">" << label << "</text>\n";
    }
  }
  os << "<circle cx=\"" << fmt(c) << "\" cy=\"" << fmt(c) << "\" r=\"3\" fill=\"black\"/>\n</svg>\n";
  return os.str();
}

// ---------------------------------------------------------------- files

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::InvalidArgument, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error(ErrorCode::InvalidArgument, "cannot move output into place: " + ec.message());
  }
}

}  // namespace kscatter
