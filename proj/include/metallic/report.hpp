#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "metallic/connections.hpp"
#include "metallic/identities.hpp"

namespace mk {

inline constexpr const char* kToolVersion = "1.0.0";

/// Rounds to 6 significant digits; the result prints back exactly.
double sig6(double v);

struct ShapedArray {
  std::vector<int> shape;
  std::vector<double> data;
  bool operator==(const ShapedArray&) const = default;
};

ShapedArray shaped(const Tensor& t);
ShapedArray shaped(const Mat& m);

struct ResidualRow {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
  bool near_boundary = false;
  bool operator==(const ResidualRow&) const = default;
};

struct ClassificationBlock {
  std::string verdict;
  bool hermitian = false;
  bool almost_kahler = false;
  bool metallic_kahler = false;
  bool nearly = false;
  bool parallel_consistent = true;
  bool near_boundary = false;
  std::vector<ResidualRow> residuals;
  bool operator==(const ClassificationBlock&) const = default;
};

struct IdentityRow {
  std::string id;
  std::string tier;
  std::string status;
  double tolerance = 0.0;
  double max_residual = 0.0;
  double scale = 0.0;
  double relative = 0.0;
  std::string note;
  bool operator==(const IdentityRow&) const = default;
};

struct ConnectionBlock {
  std::vector<ConnectionRow> rows;
  std::optional<double> deformation_ratio_residual;
  std::vector<IdentityRow> checks;
  bool operator==(const ConnectionBlock&) const = default;
};

struct CurvatureBlock {
  std::vector<double> point;
  ShapedArray riemann;  // lowered, R(k, j, i, l)
  ShapedArray ricci;
  double scalar = 0.0;
  ShapedArray h;
  ShapedArray ricci_star;
  double scalar_star = 0.0;
  double nabla_j_sq = 0.0;
  bool operator==(const CurvatureBlock&) const = default;
};

struct Summary {
  int checked = 0;
  int passed = 0;
  int failed = 0;
  int skipped = 0;
  int reported = 0;
  bool operator==(const Summary&) const = default;
};

struct Report {
  std::string version = kToolVersion;
  std::string command;
  std::string source_kind;  // zoo | file
  std::string source;
  std::string spec_hash;
  double p = 0.0;
  double q = 0.0;
  std::uint64_t seed = 0;
  double step = 0.0;
  Thresholds tolerances;
  int points = 0;
  std::optional<ClassificationBlock> classification;
  std::optional<std::string> suite;
  std::vector<IdentityRow> identities;
  std::optional<ConnectionBlock> connections;
  std::optional<CurvatureBlock> curvature;
  Summary summary;
  int exit_code = 0;
  double timing_ms = 0.0;  // excluded from determinism comparisons
  bool operator==(const Report&) const = default;
};

ClassificationBlock make_classification_block(const ClassificationReport& cls);
IdentityRow make_identity_row(const IdentityResult& r);
ConnectionBlock make_connection_block(const ConnectionReport& rep);

/// Counts identity rows and connection checks.
Summary summarize(const Report& r);

std::string to_json(const Report& r);
Report report_from_json(const std::string& text);
std::string to_text(const Report& r);

}  // namespace mk
