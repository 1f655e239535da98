#include "metallic/structure.hpp"

#include <algorithm>
#include <cmath>

#include "metallic/errors.hpp"

namespace mk {

double MetallicParams::coefficient() const { return 0.5 * std::sqrt(6.0 * q - p * p); }

void validate(const MetallicParams& params) {
  if (!std::isfinite(params.p) || !std::isfinite(params.q))
    throw Error("metallic parameters must be finite");
  if (!(params.q > 0.0)) throw Error("metallic parameter q must be positive, got " + std::to_string(params.q));
  if (!(params.p * params.p < 6.0 * params.q))
    throw Error("metallic parameters need -sqrt(6q) < p < sqrt(6q), got p = " + std::to_string(params.p) +
                ", q = " + std::to_string(params.q));
}

std::complex<double> metallic_mean(const MetallicParams& params) {
  validate(params);
  return {0.5 * params.p, params.coefficient()};
}

double complex_residual(const Mat& j) {
  const auto n = j.rows();
  return (j * j + Mat::Identity(n, n)).cwiseAbs().maxCoeff();
}

double polynomial_residual(const Mat& jm, const MetallicParams& params) {
  const auto n = jm.rows();
  return (jm * jm - params.p * jm + 1.5 * params.q * Mat::Identity(n, n)).cwiseAbs().maxCoeff();
}

Mat jm_from_j(const Mat& j, const MetallicParams& params, int sign) {
  validate(params);
  if (sign != 1 && sign != -1) throw Error("sign must be +1 or -1");
  const double r = complex_residual(j);
  if (!(r < kAlgebraicCheck)) throw Error("J is not almost complex (|J^2 + I| = " + std::to_string(r) + ")");
  const auto n = j.rows();
  return 0.5 * params.p * Mat::Identity(n, n) + sign * params.coefficient() * j;
}

Mat j_from_jm(const Mat& jm, const MetallicParams& params, int sign) {
  validate(params);
  if (sign != 1 && sign != -1) throw Error("sign must be +1 or -1");
  const double r = polynomial_residual(jm, params);
  const double scale = std::max(1.0, jm.cwiseAbs().maxCoeff());
  if (!(r < kAlgebraicCheck * scale * scale))
    throw Error("J_M violates J_M^2 - pJ_M + (3/2)qI = 0 (residual " + std::to_string(r) + ")");
  const auto n = jm.rows();
  return (sign / params.coefficient()) * (jm - 0.5 * params.p * Mat::Identity(n, n));
}

Mat conjugate_metallic(const Mat& jm, double p) {
  const auto n = jm.rows();
  return p * Mat::Identity(n, n) - jm;
}

HyperbolicResidual hyperbolic_residual(const Mat& g, const Mat& a, const MetallicParams& params) {
  // g(A e_i, e_j) = (A^T g)_{ij}
  const Mat gax_y = a.transpose() * g;
  const Mat gx_ay = g * a;
  HyperbolicResidual r;
  r.tcg0 = (gax_y + gx_ay).cwiseAbs().maxCoeff();
  const Mat gax_ay = a.transpose() * g * a;
  r.tcg1 = (gax_ay + params.p * gx_ay - 1.5 * params.q * g).cwiseAbs().maxCoeff();
  r.vanish_together = (r.tcg0 < kAlgebraicCheck) == (r.tcg1 < kAlgebraicCheck);
  return r;
}

StructureBundle::StructureBundle(Chart chart, MetallicParams params, TensorField metric, TensorField jm)
    : chart_(std::move(chart)), params_(params), metric_(std::move(metric)), jm_(std::move(jm)) {
  validate(params_);
  if (metric_.dim != chart_.dim() || jm_.dim != chart_.dim())
    throw Error("field dimension does not match chart dimension");
  if (metric_.slots != std::vector<Slot>{Slot::Co, Slot::Co}) throw Error("metric must be a (0,2) field");
  if (jm_.slots != std::vector<Slot>{Slot::Contra, Slot::Co}) throw Error("structure must be a (1,1) field");
}

StructureBundle StructureBundle::from_complex(Chart chart, MetallicParams params, TensorField metric,
                                              TensorField j, int sign) {
  validate(params);
  TensorField jm{j.dim, {Slot::Contra, Slot::Co}, [j, params, sign](std::span<const double> x) {
                   return Tensor::from_matrix(jm_from_j(j(x).matrix(), params, sign), Slot::Contra, Slot::Co);
                 }};
  StructureBundle b(std::move(chart), params, std::move(metric), std::move(jm));
  b.source_j_ = std::move(j);
  b.sign_ = sign;
  return b;
}

TensorField StructureBundle::conjugate() const {
  const double p = params_.p;
  return {jm_.dim, jm_.slots, [jm = jm_, p](std::span<const double> x) {
            return Tensor::from_matrix(conjugate_metallic(jm(x).matrix(), p), Slot::Contra, Slot::Co);
          }};
}

TensorField StructureBundle::omega() const {
  return {jm_.dim, {Slot::Co, Slot::Co}, [g = metric_, jm = jm_](std::span<const double> x) {
            return Tensor::from_matrix(fundamental_matrix(g(x).matrix(), jm(x).matrix()), Slot::Co, Slot::Co);
          }};
}

TensorField StructureBundle::complex_structure() const {
  if (source_j_) return *source_j_;
  const MetallicParams prm = params_;
  return {jm_.dim, jm_.slots, [jm = jm_, prm](std::span<const double> x) {
            return Tensor::from_matrix(j_from_jm(jm(x).matrix(), prm, 1), Slot::Contra, Slot::Co);
          }};
}

FundamentalForm fundamental_form(const StructureBundle& bundle, std::span<const double> x) {
  const Mat g = bundle.metric()(x).matrix();
  const Mat jm = bundle.jm()(x).matrix();
  FundamentalForm f;
  f.omega = fundamental_matrix(g, jm);
  f.skewness = hyperbolic_residual(g, jm, bundle.params()).tcg0;
  return f;
}

HyperbolicityQuad hyperbolicity_quad(const StructureBundle& bundle, std::span<const Point> points) {
  HyperbolicityQuad q;
  const auto jf = bundle.complex_structure();
  const MetallicParams& prm = bundle.params();
  for (const auto& x : points) {
    const Mat g = bundle.metric()(x).matrix();
    const Mat jm = bundle.jm()(x).matrix();
    const Mat j = jf(x).matrix();
    q.j = std::max(q.j, hyperbolic_residual(g, j, prm).tcg0);
    q.j_conj = std::max(q.j_conj, hyperbolic_residual(g, conjugate_complex(j), prm).tcg0);
    q.jm = std::max(q.jm, hyperbolic_residual(g, jm, prm).tcg0);
    q.jm_conj = std::max(q.jm_conj, hyperbolic_residual(g, conjugate_metallic(jm, prm.p), prm).tcg0);
  }
  return q;
}

HyperbolicResidual check_hyperbolic(const StructureBundle& bundle, std::span<const Point> points) {
  HyperbolicResidual worst;
  for (const auto& x : points) {
    const auto r = hyperbolic_residual(bundle.metric()(x).matrix(), bundle.jm()(x).matrix(), bundle.params());
    worst.tcg0 = std::max(worst.tcg0, r.tcg0);
    worst.tcg1 = std::max(worst.tcg1, r.tcg1);
  }
  worst.vanish_together = (worst.tcg0 < kAlgebraicCheck) == (worst.tcg1 < kAlgebraicCheck);
  return worst;
}

}  // namespace mk
