#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "metallic/geometry.hpp"
#include "metallic/tensor.hpp"

namespace mk {

/// Coefficients of J² - pJ + (3/2)q I = 0. Admissible when q > 0 and
/// p² < 6q, so the roots are complex.
struct MetallicParams {
  double p = 0.0;
  double q = 2.0 / 3.0;

  /// √(6q - p²) / 2, the imaginary part of the complex metallic mean.
  double coefficient() const;
  bool operator==(const MetallicParams&) const = default;
};

/// Throws Error for q <= 0 or p² >= 6q.
void validate(const MetallicParams& params);

/// Root of z² - pz + (3/2)q = 0 with positive imaginary part.
std::complex<double> metallic_mean(const MetallicParams& params);

inline constexpr double kAlgebraicCheck = 1e-8;

/// |J² + I| (max component).
double complex_residual(const Mat& j);

/// |J_M² - pJ_M + (3/2)q I| (max component).
double polynomial_residual(const Mat& jm, const MetallicParams& params);

/// J_M = (p/2) I ± (√(6q - p²)/2) J. Throws if J² ≠ -I.
Mat jm_from_j(const Mat& j, const MetallicParams& params, int sign);

/// J = ±(2/√(6q - p²)) (J_M - (p/2) I). Throws if J_M violates its polynomial.
Mat j_from_jm(const Mat& jm, const MetallicParams& params, int sign);

/// p I - J_M.
Mat conjugate_metallic(const Mat& jm, double p);

/// -J.
inline Mat conjugate_complex(const Mat& j) { return -j; }

/// ω_{im} = g_{mt} (J_M)_i^t, i.e. ω(X, Y) = g(J_M X, Y).
inline Mat fundamental_matrix(const Mat& g, const Mat& jm) { return jm.transpose() * g; }

/// Residuals of g(AX,Y) + g(X,AY) and g(AX,AY) + p g(X,AY) - (3/2) q g(X,Y)
/// over coordinate basis vectors.
struct HyperbolicResidual {
  double tcg0 = 0.0;
  double tcg1 = 0.0;
  bool vanish_together = true;
};

HyperbolicResidual hyperbolic_residual(const Mat& g, const Mat& a, const MetallicParams& params);

/// Metric + almost complex metallic structure on a chart.
class StructureBundle {
 public:
  /// Structure given directly as J_M.
  StructureBundle(Chart chart, MetallicParams params, TensorField metric, TensorField jm);

  /// Structure built from an almost complex J through J_M = (p/2)I ± c J.
  static StructureBundle from_complex(Chart chart, MetallicParams params, TensorField metric, TensorField j,
                                      int sign);

  const Chart& chart() const noexcept { return chart_; }
  Chart& chart() noexcept { return chart_; }
  const MetallicParams& params() const noexcept { return params_; }
  int dim() const noexcept { return chart_.dim(); }

  const TensorField& metric() const noexcept { return metric_; }
  const TensorField& jm() const noexcept { return jm_; }
  TensorField conjugate() const;
  TensorField omega() const;
  /// The associated almost complex structure (the source J when one was
  /// given, otherwise recovered with sign +).
  TensorField complex_structure() const;
  int sign() const noexcept { return sign_; }

 private:
  Chart chart_;
  MetallicParams params_;
  TensorField metric_;
  TensorField jm_;
  std::optional<TensorField> source_j_;
  int sign_ = 1;
};

struct FundamentalForm {
  Mat omega;
  double skewness = 0.0;
};

FundamentalForm fundamental_form(const StructureBundle& bundle, std::span<const double> x);

/// Hyperbolicity of J, Ĵ, J_M and Ĵ_M reported side by side.
struct HyperbolicityQuad {
  double j = 0.0;
  double j_conj = 0.0;
  double jm = 0.0;
  double jm_conj = 0.0;
};

HyperbolicityQuad hyperbolicity_quad(const StructureBundle& bundle, std::span<const Point> points);

HyperbolicResidual check_hyperbolic(const StructureBundle& bundle, std::span<const Point> points);

}  // namespace mk
