#pragma once

#include <string>
#include <vector>

#include "metallic/classify.hpp"

namespace mk {

enum class Status { Pass, Fail, Skipped, Reported };

std::string status_name(Status s);
std::optional<Status> status_from_name(const std::string& name);

/// One residual check over all sample points. `relative` is
/// max_residual / max(1, scale); Pass ⇔ relative < tolerance. Reported
/// results are computed but carry no pass/fail claim.
struct IdentityResult {
  std::string id;
  std::string tier;  // alg | d1 | d2 | d3
  Status status = Status::Skipped;
  double tolerance = 0.0;
  std::vector<double> per_point;
  double max_residual = 0.0;
  double scale = 0.0;
  double relative = 0.0;
  std::string note;
  bool operator==(const IdentityResult&) const = default;
};

/// Frames at every sample point plus the classification that gates the
/// checkers.
struct Evaluation {
  const StructureBundle* bundle = nullptr;
  MetallicParams params;
  Thresholds tol;
  SchemeSet schemes;
  std::vector<Point> points;
  std::vector<PointFrame> frames;
  ClassificationReport cls;
};

/// Builds frames to `depth`; when depth is Third, ∇Ric is added only if the
/// structure is metallic Kähler (the only consumer).
Evaluation evaluate(const StructureBundle& bundle, const SchemeSet& schemes, const Thresholds& tol, Depth depth,
                    par::Exec exec = par::Exec::Parallel);

/// H, Ricci*, scalar* and the signed contraction ‖∇J_M‖² at one frame.
struct StarCurvaturePack {
  Mat h;       // H_{ji} = R_{hji}^t (J_M)_t^h
  Mat s_star;  // S*_{ji} = -H_{jt} (J_M)_i^t
  double scalar_star = 0.0;
  double nabla_j_sq = 0.0;
  /// H built with ω^{hl} = g^{ha} g^{lb} ω_{ab} instead.
  Mat h_alt;
};

StarCurvaturePack star_curvature(const PointFrame& fr);
StarCurvaturePack star_curvature(const StructureBundle& bundle, std::span<const double> x,
                                 const SchemeSet& schemes = {});

/// g^{ja} g^{tb} S_{jt} ω_{ab}.
double ricci_omega_contraction(const PointFrame& fr);

// Individual checkers. Each returns one or more results and never throws on
// failed gates (those come back Skipped).
std::vector<IdentityResult> check_algebraic(const Evaluation& ev);
std::vector<IdentityResult> check_hyperbolicity_equivalence(const Evaluation& ev);
std::vector<IdentityResult> check_nabla_j_algebra(const Evaluation& ev);
std::vector<IdentityResult> check_exterior(const Evaluation& ev);
std::vector<IdentityResult> check_f_properties(const Evaluation& ev, bool nearly_mode);
std::vector<IdentityResult> check_f_nijenhuis_exterior(const Evaluation& ev);
std::vector<IdentityResult> check_parallel_biconditional(const Evaluation& ev);
std::vector<IdentityResult> check_ricci_identity(const Evaluation& ev);
std::vector<IdentityResult> check_curvature_symmetries(const Evaluation& ev);
std::vector<IdentityResult> check_curvature_metallic(const Evaluation& ev);
std::vector<IdentityResult> check_ricci_metallic(const Evaluation& ev);
std::vector<IdentityResult> check_nabla_s(const Evaluation& ev);
std::vector<IdentityResult> check_star(const Evaluation& ev);
std::vector<IdentityResult> check_ricci_chain(const Evaluation& ev);
std::vector<IdentityResult> check_ricci_hyperbolic(const Evaluation& ev);
std::vector<IdentityResult> check_ricci_star_hyperbolic(const Evaluation& ev);
std::vector<IdentityResult> check_scalar_star(const Evaluation& ev);
std::vector<IdentityResult> check_nearly_nijenhuis(const Evaluation& ev);

enum class Suite { All, Metallic, Nearly, Connections };
std::optional<Suite> suite_from_name(const std::string& name);

/// Runs the identity checkers of a suite in parallel; results come back in
/// a fixed order.
std::vector<IdentityResult> run_identities(const Evaluation& ev, Suite suite, par::Exec exec = par::Exec::Parallel);

}  // namespace mk
