#include "metallic/specfile.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "metallic/errors.hpp"

namespace mk {

namespace {

enum class Section { Header, Bounds, Metric, Structure, Points };

struct Cursor {
  const std::string& file;
  std::size_t line;
  [[noreturn]] void fail(std::size_t col, const std::string& msg) const { throw SpecError(file, line, col, msg); }
};

std::size_t skip_ws(std::string_view s, std::size_t i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
  return i;
}

std::string_view trim_right(std::string_view s) {
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

/// A field of a line together with its 1-based column.
struct Field {
  std::string_view text;
  std::size_t column;
};

Field field(std::string_view line, std::size_t begin, std::size_t end) {
  const std::size_t b = skip_ws(line, begin);
  if (b >= end) return {std::string_view{}, begin + 1};
  return {trim_right(line.substr(b, end - b)), b + 1};
}

double to_double(const Cursor& c, Field f, const char* what) {
  const std::string s(f.text);
  if (s.empty()) c.fail(f.column, std::string("expected ") + what);
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || errno == ERANGE)
    c.fail(f.column + static_cast<std::size_t>(end - s.c_str()), std::string("expected ") + what);
  return v;
}

template <class Int>
Int to_int(const Cursor& c, Field f, const char* what) {
  std::string_view s = f.text;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  Int v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    c.fail(f.column, std::string("expected ") + what);
  return v;
}

/// Splits "a, b, c" into fields.
std::vector<Field> split_csv(std::string_view line, std::size_t begin) {
  std::vector<Field> out;
  std::size_t start = begin;
  for (std::size_t i = begin; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      out.push_back(field(line, start, i));
      start = i + 1;
    }
  }
  return out;
}

/// Two whitespace-separated indices before '='.
std::pair<int, int> index_pair(const Cursor& c, std::string_view line, std::size_t eq, int dim) {
  std::vector<Field> parts;
  std::size_t i = skip_ws(line, 0);
  while (i < eq) {
    std::size_t j = i;
    while (j < eq && line[j] != ' ' && line[j] != '\t') ++j;
    parts.push_back({line.substr(i, j - i), i + 1});
    i = skip_ws(line, j);
  }
  if (parts.size() != 2) c.fail(skip_ws(line, 0) + 1, "expected two indices before '='");
  const int a = to_int<int>(c, parts[0], "an index");
  const int b = to_int<int>(c, parts[1], "an index");
  if (a < 0 || a >= dim) c.fail(parts[0].column, "index out of range for dimension " + std::to_string(dim));
  if (b < 0 || b >= dim) c.fail(parts[1].column, "index out of range for dimension " + std::to_string(dim));
  return {a, b};
}

SpecExpr parse_expr(const Cursor& c, Field f, int dim) {
  if (f.text.empty()) c.fail(f.column, "expected an expression");
  SpecExpr e{std::string(f.text), {}, c.line, f.column};
  try {
    e.expr = dsl::parse(f.text);
  } catch (const ParseError& pe) {
    c.fail(f.column + pe.offset() - 1, std::string(pe.what()));
  }
  const int mc = e.expr.max_coordinate();
  if (dim > 0 && mc >= dim)
    c.fail(f.column, "coordinate x" + std::to_string(mc) + " exceeds dimension " + std::to_string(dim));
  return e;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

TensorField expr_matrix_field(int n, Slot a, Slot b, std::vector<std::pair<std::pair<int, int>, dsl::Expr>> entries,
                              bool symmetric) {
  return {n, {a, b}, [n, a, b, entries = std::move(entries), symmetric](std::span<const double> x) {
            Mat m = Mat::Zero(n, n);
            for (const auto& [ij, e] : entries) {
              const double v = e.eval(x);
              m(ij.first, ij.second) = v;
              if (symmetric) m(ij.second, ij.first) = v;
            }
            return Tensor::from_matrix(m, a, b);
          }};
}

}  // namespace

Thresholds ManifoldSpec::thresholds(Thresholds base) const {
  if (tol_alg) base.alg = *tol_alg;
  if (tol_d1) base.d1 = *tol_d1;
  if (tol_d2) base.d2 = *tol_d2;
  if (tol_d3) base.d3 = *tol_d3;
  return base;
}

ManifoldSpec parse_spec(std::string_view text, const std::string& file) {
  ManifoldSpec spec;
  spec.file = file;
  Section sec = Section::Header;
  std::set<std::string> seen_keys;
  std::set<std::string> seen_sections;
  std::optional<std::string> structure_key;
  std::size_t structure_key_line = 0;
  std::map<int, Interval> bounds;
  bool have_p = false, have_q = false;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const Cursor c{file, line_no};

    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    std::string_view line = trim_right(raw);
    const std::size_t first = skip_ws(line, 0);
    if (first >= line.size()) continue;

    if (line[first] == '[') {
      if (line.back() != ']') c.fail(line.size() + 1, "expected ']'");
      const std::string name(trim_right(line.substr(first + 1, line.size() - first - 2)));
      if (name == "bounds") sec = Section::Bounds;
      else if (name == "metric") sec = Section::Metric;
      else if (name == "J" || name == "JM") sec = Section::Structure;
      else if (name == "points") sec = Section::Points;
      else c.fail(first + 2, "unknown section '" + name + "'");
      if (spec.dimension <= 0) c.fail(first + 1, "dimension must be set before any section");
      if (!seen_sections.insert(name == "JM" ? "J" : name).second) c.fail(first + 1, "duplicate section [" + name + "]");
      if (sec == Section::Structure) {
        const bool jm = name == "JM";
        if (structure_key && (*structure_key == "JM") != jm)
          c.fail(first + 1, "section [" + name + "] contradicts 'structure = " + *structure_key + "'");
        spec.structure_is_jm = jm;
        structure_key = name;
      }
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) c.fail(first + 1, "expected '='");
    const Field value = field(line, eq + 1, line.size());

    switch (sec) {
      case Section::Header: {
        const std::string key(trim_right(line.substr(first, eq - first)));
        if (!seen_keys.insert(key).second) c.fail(first + 1, "duplicate key '" + key + "'");
        if (key == "dimension") {
          spec.dimension = to_int<int>(c, value, "an integer dimension");
          if (spec.dimension <= 0 || spec.dimension % 2 != 0)
            c.fail(value.column, "dimension must be a positive even integer");
        } else if (key == "p") {
          spec.params.p = to_double(c, value, "a number");
          have_p = true;
        } else if (key == "q") {
          spec.params.q = to_double(c, value, "a number");
          have_q = true;
        } else if (key == "structure") {
          if (value.text != "J" && value.text != "JM") c.fail(value.column, "expected 'J' or 'JM'");
          structure_key = std::string(value.text);
          structure_key_line = line_no;
          spec.structure_is_jm = value.text == "JM";
        } else if (key == "sign") {
          const int s = to_int<int>(c, value, "+1 or -1");
          if (s != 1 && s != -1) c.fail(value.column, "expected +1 or -1");
          spec.sign = s;
        } else if (key == "grid") {
          spec.sampling.grid = to_int<int>(c, value, "a positive integer");
          if (spec.sampling.grid < 1) c.fail(value.column, "grid must be at least 1");
        } else if (key == "random") {
          spec.sampling.random = to_int<int>(c, value, "a non-negative integer");
          if (spec.sampling.random < 0) c.fail(value.column, "random must be non-negative");
        } else if (key == "seed") {
          spec.sampling.seed = to_int<std::uint64_t>(c, value, "an unsigned integer");
        } else if (key == "margin") {
          spec.sampling.margin = to_double(c, value, "a number");
          if (!(spec.sampling.margin > 0.0)) c.fail(value.column, "margin must be positive");
        } else if (key == "tol_alg" || key == "tol_d1" || key == "tol_d2" || key == "tol_d3" || key == "h") {
          const double v = to_double(c, value, "a number");
          if (!(v > 0.0)) c.fail(value.column, key + " must be positive");
          (key == "tol_alg"  ? spec.tol_alg
           : key == "tol_d1" ? spec.tol_d1
           : key == "tol_d2" ? spec.tol_d2
           : key == "tol_d3" ? spec.tol_d3
                             : spec.step) = v;
        } else {
          c.fail(first + 1, "unknown key '" + key + "'");
        }
        break;
      }
      case Section::Bounds: {
        const Field axis = field(line, first, eq);
        const int a = to_int<int>(c, axis, "an axis index");
        if (a < 0 || a >= spec.dimension) c.fail(axis.column, "axis out of range");
        const auto parts = split_csv(line, eq + 1);
        if (parts.size() != 2) c.fail(value.column, "expected 'lo, hi'");
        const double lo = to_double(c, parts[0], "a lower bound");
        const double hi = to_double(c, parts[1], "an upper bound");
        if (!(lo < hi)) c.fail(parts[0].column, "lower bound must be below upper bound");
        if (!bounds.emplace(a, Interval{lo, hi}).second) c.fail(axis.column, "duplicate axis");
        break;
      }
      case Section::Metric: {
        auto ij = index_pair(c, line, eq, spec.dimension);
        if (ij.first > ij.second) std::swap(ij.first, ij.second);
        if (spec.metric.count(ij)) c.fail(first + 1, "duplicate metric component");
        spec.metric.emplace(ij, parse_expr(c, value, spec.dimension));
        break;
      }
      case Section::Structure: {
        const auto hi = index_pair(c, line, eq, spec.dimension);
        if (spec.structure.count(hi)) c.fail(first + 1, "duplicate structure component");
        spec.structure.emplace(hi, parse_expr(c, value, spec.dimension));
        break;
      }
      case Section::Points: {
        const Field name = field(line, first, eq);
        if (name.text.empty()) c.fail(first + 1, "expected a point name");
        Point x;
        for (const auto& f : split_csv(line, eq + 1)) x.push_back(to_double(c, f, "a coordinate"));
        if (static_cast<int>(x.size()) != spec.dimension)
          c.fail(value.column, "point needs " + std::to_string(spec.dimension) + " coordinates");
        spec.sampling.named.push_back({std::string(name.text), std::move(x)});
        break;
      }
    }
  }

  const Cursor end{file, line_no};
  if (spec.dimension <= 0) end.fail(1, "missing 'dimension'");
  if (!have_p || !have_q) end.fail(1, "missing 'p' or 'q'");
  try {
    validate(spec.params);
  } catch (const Error& e) {
    end.fail(1, e.what());
  }
  if (!structure_key) end.fail(1, "missing structure section [J] or [JM]");
  if (!seen_sections.count("J")) {
    const Cursor sc{file, structure_key_line ? structure_key_line : line_no};
    sc.fail(1, "missing structure section [" + *structure_key + "]");
  }
  if (!seen_sections.count("metric")) end.fail(1, "missing [metric] section");
  for (int a = 0; a < spec.dimension; ++a) {
    const auto it = bounds.find(a);
    if (it == bounds.end()) end.fail(1, "missing bounds for axis " + std::to_string(a));
    spec.bounds.push_back(it->second);
  }
  return spec;
}

ManifoldSpec load_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError(path, 0, 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str(), path);
}

std::string render_spec(const ManifoldSpec& s) {
  std::ostringstream os;
  const SamplePolicy def;
  os << "dimension = " << s.dimension << "\n";
  os << "p = " << num(s.params.p) << "\n";
  os << "q = " << num(s.params.q) << "\n";
  os << "structure = " << (s.structure_is_jm ? "JM" : "J") << "\n";
  if (!s.structure_is_jm) os << "sign = " << (s.sign > 0 ? "+1" : "-1") << "\n";
  os << "grid = " << s.sampling.grid << "\n";
  os << "random = " << s.sampling.random << "\n";
  os << "seed = " << s.sampling.seed << "\n";
  if (s.sampling.margin != def.margin) os << "margin = " << num(s.sampling.margin) << "\n";
  if (s.tol_alg) os << "tol_alg = " << num(*s.tol_alg) << "\n";
  if (s.tol_d1) os << "tol_d1 = " << num(*s.tol_d1) << "\n";
  if (s.tol_d2) os << "tol_d2 = " << num(*s.tol_d2) << "\n";
  if (s.tol_d3) os << "tol_d3 = " << num(*s.tol_d3) << "\n";
  if (s.step) os << "h = " << num(*s.step) << "\n";
  os << "\n[bounds]\n";
  for (std::size_t i = 0; i < s.bounds.size(); ++i)
    os << i << " = " << num(s.bounds[i].lo) << ", " << num(s.bounds[i].hi) << "\n";
  os << "\n[metric]\n";
  for (const auto& [ij, e] : s.metric) os << ij.first << " " << ij.second << " = " << e.text << "\n";
  os << "\n[" << (s.structure_is_jm ? "JM" : "J") << "]\n";
  for (const auto& [hi, e] : s.structure) os << hi.first << " " << hi.second << " = " << e.text << "\n";
  if (!s.sampling.named.empty()) {
    os << "\n[points]\n";
    for (const auto& np : s.sampling.named) {
      os << np.name << " =";
      for (std::size_t i = 0; i < np.x.size(); ++i) os << (i ? ", " : " ") << num(np.x[i]);
      os << "\n";
    }
  }
  return os.str();
}

StructureBundle build_bundle(const ManifoldSpec& spec) {
  const int n = spec.dimension;
  std::vector<std::pair<std::pair<int, int>, dsl::Expr>> metric, structure;
  for (const auto& [ij, e] : spec.metric) metric.emplace_back(ij, e.expr);
  for (const auto& [hi, e] : spec.structure) structure.emplace_back(hi, e.expr);
  std::optional<Chart> chart_or;
  try {
    chart_or.emplace(spec.bounds, spec.sampling);
  } catch (const Error& e) {
    throw SpecError(spec.file, 0, 0, e.what());
  }
  Chart chart = std::move(*chart_or);
  TensorField g = expr_matrix_field(n, Slot::Co, Slot::Co, std::move(metric), true);
  TensorField a = expr_matrix_field(n, Slot::Contra, Slot::Co, std::move(structure), false);
  // Probe the structure at the chart centre so that a wrong table is reported
  // against the file rather than deep inside a derivative stencil.
  Point centre;
  for (const auto& b : spec.bounds) centre.push_back(0.5 * (b.lo + b.hi));
  const std::size_t line = spec.structure.empty() ? 0 : spec.structure.begin()->second.line;
  const Mat m = a(centre).matrix();
  const double res = spec.structure_is_jm ? polynomial_residual(m, spec.params) : complex_residual(m);
  if (!(res < kAlgebraicCheck))
    throw SpecError(spec.file, line, 1,
                    std::string(spec.structure_is_jm ? "J_M does not satisfy J_M^2 - p J_M + (3/2) q I = 0"
                                                     : "J does not satisfy J^2 = -I") +
                        " at the chart centre (residual " + num(res) + ")");
  if (spec.structure_is_jm) return StructureBundle(std::move(chart), spec.params, std::move(g), std::move(a));
  return StructureBundle::from_complex(std::move(chart), spec.params, std::move(g), std::move(a), spec.sign);
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace mk
