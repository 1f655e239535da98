#pragma once

#include <optional>
#include <string>
#include <vector>

#include "metallic/frame.hpp"

namespace mk {

/// Tolerance tiers by derivative depth.
struct Thresholds {
  double alg = 1e-8;
  double d1 = 1e-5;
  double d2 = 1e-4;
  double d3 = 1e-3;
  bool operator==(const Thresholds&) const = default;
};

enum class Verdict { NotHermitian, AlmostHermitian, AlmostKahler, MetallicKahler, NearlyKahler };

std::string verdict_name(Verdict v);
std::optional<Verdict> verdict_from_name(const std::string& name);

struct ResidualEntry {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
  /// Within a factor 10 of the threshold on either side.
  bool near_boundary = false;
  bool operator==(const ResidualEntry&) const = default;
};

struct ClassificationReport {
  Verdict verdict = Verdict::NotHermitian;
  bool hermitian = false;
  bool almost_kahler = false;
  bool metallic_kahler = false;
  bool nearly = false;
  /// [dω and N below tolerance] agrees with [∇J_M below tolerance].
  bool parallel_consistent = true;
  std::vector<ResidualEntry> residuals;

  const ResidualEntry& entry(const std::string& name) const;
  double residual(const std::string& name) const { return entry(name).value; }
  std::vector<std::string> near_boundary() const;
  bool operator==(const ClassificationReport&) const = default;
};

/// Verdict from frames of depth >= 1. The most specific class wins;
/// metallic Kähler outranks nearly metallic Kähler, which contains it.
ClassificationReport classify(std::span<const PointFrame> frames, const MetallicParams& params,
                              const Thresholds& tol);

ClassificationReport classify(const StructureBundle& bundle, const SchemeSet& schemes, const Thresholds& tol,
                              par::Exec exec = par::Exec::Parallel);

}  // namespace mk
