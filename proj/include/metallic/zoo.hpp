#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "metallic/classify.hpp"

namespace mk::zoo {

/// Built-in (metric, structure) pair with a known classification.
struct Fixture {
  std::string name;
  StructureBundle bundle;
  Verdict expected;
  /// Spec-file text reproducing the fixture through the expression path,
  /// where the closed forms are representable.
  std::optional<std::string> mirrored_spec;
};

/// ℝ^{2k}, δ metric, block standard J.
Fixture flat(int k, const MetallicParams& params = {});
/// Stereographic unit S² on [-0.9, 0.9]², J = rotation by +90°.
Fixture sphere2(const MetallicParams& params = {});
/// Flat periodic-style chart [0.1, 6.18]² with constant J.
Fixture torus(const MetallicParams& params = {});
/// Stereographic unit S⁶ with the octonion cross-product structure.
Fixture sphere6(const MetallicParams& params = {});
/// Flat ℝ⁴ with J = R(θ) J_std R(θ)ᵀ, θ = 0.3 x0 (Hermitian, not Kähler).
Fixture negative(const MetallicParams& params = {});

std::vector<std::string> names();

/// Build by name, then self-validate (polynomial identity, declared
/// verdict). Throws Error on unknown names or failed validation.
Fixture load(const std::string& name, const MetallicParams& params = {}, const SchemeSet& schemes = {},
             const Thresholds& tol = {});

/// Build by name without validation.
Fixture make(const std::string& name, const MetallicParams& params = {});

/// Checks the declared verdict against classify(); returns the report.
ClassificationReport validate(const Fixture& fx, const SchemeSet& schemes = {}, const Thresholds& tol = {});

/// Imaginary-octonion cross product on ℝ⁷ (index 0 ↔ e1).
std::array<double, 7> cross7(const std::array<double, 7>& u, const std::array<double, 7>& v);

/// Block standard complex structure: J ∂_{2a} = ∂_{2a+1}.
Mat standard_j(int dim);

}  // namespace mk::zoo
