#pragma once

// Manifold spec files: a header of `key = value` lines followed by tables.
//
//   dimension = 2
//   p = 0
//   q = 0.66666666666666663
//   structure = J          # or JM
//   sign = +1              # J only
//   grid = 3               # optional sampling overrides
//   random = 4
//   seed = 42
//   margin = 0.05
//   tol_alg = 1e-8         # optional tolerance overrides (also tol_d1..tol_d3)
//   h = 1e-3               # optional base step
//
//   [bounds]               # one line per axis: axis = lo, hi
//   0 = -1, 1
//   [metric]               # upper triangle: i j = expression
//   0 0 = 4/(1 + x0^2 + x1^2)^2
//   [J]                    # or [JM]: h i = expression, row h column i
//   1 0 = 1
//   [points]               # optional named points: name = x0, x1, ...
//   origin = 0, 0
//
// Missing metric and structure entries are zero. `#` starts a comment.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "metallic/classify.hpp"
#include "metallic/dsl.hpp"

namespace mk {

/// Expression text plus its parsed form and where it came from.
struct SpecExpr {
  std::string text;
  dsl::Expr expr;
  std::size_t line = 0;
  std::size_t column = 0;
};

struct ManifoldSpec {
  std::string file = "<spec>";
  int dimension = 0;
  MetallicParams params;
  bool structure_is_jm = false;
  int sign = 1;
  std::vector<Interval> bounds;
  std::map<std::pair<int, int>, SpecExpr> metric;     // i <= j
  std::map<std::pair<int, int>, SpecExpr> structure;  // (h, i)
  SamplePolicy sampling;
  std::optional<double> tol_alg, tol_d1, tol_d2, tol_d3;
  std::optional<double> step;

  Thresholds thresholds(Thresholds base = {}) const;
};

/// Throws SpecError with the 1-based line and column of the problem.
ManifoldSpec parse_spec(std::string_view text, const std::string& file = "<spec>");
ManifoldSpec load_spec(const std::string& path);

/// Canonical text form; parse_spec(render_spec(s)) reproduces s.
std::string render_spec(const ManifoldSpec& spec);

StructureBundle build_bundle(const ManifoldSpec& spec);

/// 64-bit FNV-1a, printed as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace mk
