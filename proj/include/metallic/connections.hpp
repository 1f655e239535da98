#pragma once

#include <optional>
#include <string>
#include <vector>

#include "metallic/identities.hpp"

namespace mk {

/// ∇̃_X Y = ∇_X Y + S(X, Y). Coefficients Γ̃^h_{ij} = Γ^h_{ij} + S^h_{ij}.
struct AffineConnection {
  std::string kind;
  Tensor coefficients;  // (h, i, j)
  Tensor deformation;   // (h, i, j) = S(∂i, ∂j)^h
  Tensor torsion;       // (h, i, j) = Γ̃^h_{ij} - Γ̃^h_{ji}
};

/// Connection from Levi-Civita Γ and a deformation tensor.
AffineConnection make_connection(std::string kind, const Tensor& gamma, Tensor deformation);

/// S = (1/3q) Ĵ_M (∇J_M).
AffineConnection first_type(const PointFrame& fr, const MetallicParams& params);

/// Closed-form second-type connection for the two gated classes: Levi-Civita
/// when almost metallic Kähler, S = -(1/q) Ĵ_M (∇J_M) when nearly metallic
/// Kähler. Empty otherwise.
std::optional<AffineConnection> second_type(const PointFrame& fr, const MetallicParams& params,
                                            const ClassificationReport& cls);

/// Second-type connection solved from ∇̃ω = 0 together with
/// S_J(X,Y,Z) + S_J(Z,Y,X) = 0, where S_J(X,Y,Z) = g(S(X,Y), J_M Z):
/// 2 S_J(X,Y,Z) = -F(X,Y,Z) + F(Y,Z,X) - F(Z,X,Y). Needs a Hermitian metric.
AffineConnection second_type_solved(const PointFrame& fr);

/// (∇̃_a ω)_{bc} using the frame's own ∇ω.
Tensor nabla_tilde_omega(const PointFrame& fr, const AffineConnection& c);
/// (∇̃_a g)_{bc}.
Tensor nabla_tilde_metric(const PointFrame& fr, const AffineConnection& c);
/// S_J(a, b, c) = g(S(∂a, ∂b), J_M ∂c).
Tensor s_j(const PointFrame& fr, const AffineConnection& c);

struct ConnectionRow {
  std::string name;
  std::string status;  // constructed | skipped
  double nabla_omega = 0.0;
  double nabla_g = 0.0;
  double torsion_norm = 0.0;
  double deformation_norm = 0.0;
  double symmetry = 0.0;  // first type: S_J(X,Y,Z)+S_J(X,Z,Y); second: S_J(X,Y,Z)+S_J(Z,Y,X)
  double expansion = 0.0;  // ∇̃ω vs ∇ω + S_J(X,Y,Z) - S_J(X,Z,Y)
  std::string note;
  bool operator==(const ConnectionRow&) const = default;
};

struct ConnectionReport {
  std::vector<ConnectionRow> rows;
  /// max |S_second + 3 S_first| / max(1, |S_first|) when both are built.
  std::optional<double> deformation_ratio_residual;
  std::vector<IdentityResult> checks;
  bool operator==(const ConnectionReport&) const = default;
};

ConnectionReport connection_report(const Evaluation& ev);

}  // namespace mk
