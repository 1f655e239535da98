#pragma once

// Numerical differentiation and Levi-Civita calculus.
//
// Index conventions (all components in chart coordinates):
//   Gamma(h, i, j)       = Γ^h_{ij},  ∇_{∂i} ∂j = Γ^h_{ij} ∂h
//   (1,1)-tensors A      = A(h, i) = A_i^h, so A acts on column vectors
//   gradient / ∇ adds a leading covariant slot: (∇T)(k, ...) = ∇_k T...
//   R(k, j, i, h)        = R_{kji}^h,  R(∂k, ∂j)∂i = R_{kji}^h ∂h,
//                          R(X, Y) = [∇X, ∇Y] - ∇[X, Y]
//   Rl(k, j, i, l)       = R_{kjil} = g(R(∂k, ∂j)∂i, ∂l)
//   Ricci(j, i)          = R_{hji}^h       (contraction of k with h)
// With these signs the unit sphere has R(X,Y)Z = g(Y,Z)X - g(X,Z)Y and
// positive scalar curvature n(n-1).

#include <array>

#include "metallic/tensor.hpp"

namespace mk {

/// Central-difference stencil. `order` is 2 or 4; with `richardson` the
/// estimates at h and h/2 are combined to cancel the leading error term.
struct DiffScheme {
  double h = 1e-3;
  int order = 4;
  bool richardson = false;

  /// Largest coordinate offset touched by the stencil.
  double reach() const { return order == 4 ? 2.0 * h : h; }
};

/// Step sizes for each nesting level: first derivatives of closed-form
/// fields, derivatives of first-derivative quantities (curvature, ∇∇T), and
/// the third level used by ∇Ric.
struct SchemeSet {
  DiffScheme first{1e-3, 4, false};
  DiffScheme second{3.1622776601683794e-3, 2, true};
  DiffScheme third{1e-2, 2, true};

  /// Default schemes with every step multiplied by h / 1e-3.
  static SchemeSet with_base_step(double h);

  /// Stencil reach when differentiating `levels` levels deep.
  double reach(int levels) const;
};

Tensor partial(const TensorField& f, std::span<const double> x, int direction, const DiffScheme& s);

/// ∂_k f for every k, as a tensor with a leading covariant slot.
Tensor gradient(const TensorField& f, std::span<const double> x, const DiffScheme& s);

struct ConnectionCoefficients {
  Tensor gamma;    // (h, i, j)
  Tensor torsion;  // (h, i, j); zero for Levi-Civita
};

/// Γ^h_{ij} = ½ g^{ht} (∂_i g_{tj} + ∂_j g_{ti} - ∂_t g_{ij}) from metric
/// components and their first derivatives dg(k, i, j) = ∂_k g_{ij}.
Tensor christoffel_from(const Mat& ginv, const Tensor& dg);

ConnectionCoefficients christoffel(const TensorField& metric, std::span<const double> x, const DiffScheme& s);
TensorField christoffel_field(const TensorField& metric, const DiffScheme& s);

/// ∇T at x given ∂T and Γ at x.
Tensor covariant_from(const Tensor& t, const Tensor& dt, const Tensor& gamma);

Tensor covariant_derivative(const TensorField& t, std::span<const double> x, const TensorField& gamma,
                            const DiffScheme& s);
TensorField covariant_derivative_field(const TensorField& t, const TensorField& gamma, const DiffScheme& s);

/// ∇∇T with (∇∇T)(m, k, ...) = ∇_m ∇_k T...; the inner derivative uses
/// `inner`, the outer differencing of the inner result uses `outer`.
Tensor second_covariant_derivative(const TensorField& t, std::span<const double> x, const TensorField& gamma,
                                   const DiffScheme& inner, const DiffScheme& outer);

struct CurvaturePack {
  Tensor riemann;  // (k, j, i, h)
  Tensor lowered;  // (k, j, i, l)
  Tensor ricci;    // (j, i), symmetric part of R_{hji}^h
  double scalar = 0.0;
  /// max |R_{hji}^h - R_{hij}^h| before symmetrisation; pure differencing error.
  double ricci_asymmetry = 0.0;
};

/// Curvature from Γ and dgamma(k, h, i, j) = ∂_k Γ^h_{ij}.
CurvaturePack curvature_from(const Tensor& gamma, const Tensor& dgamma, const Mat& g, const Mat& ginv);

CurvaturePack riemann(const TensorField& metric, std::span<const double> x, const DiffScheme& first,
                      const DiffScheme& second);

TensorField ricci_field(const TensorField& metric, const DiffScheme& first, const DiffScheme& second);

struct CurvatureSymmetry {
  double antisym_front = 0.0;  // R_kjil + R_jkil
  double antisym_back = 0.0;   // R_kjil + R_kjli
  double pair = 0.0;           // R_kjil - R_ilkj
  double bianchi = 0.0;        // R_kjil + R_jikl + R_ikjl
  double ricci = 0.0;          // raw contraction asymmetry
};

CurvatureSymmetry curvature_symmetry(const CurvaturePack& c);

/// dω_{abc} = ∂_a ω_{bc} + ∂_b ω_{ca} + ∂_c ω_{ab} from domega(k, i, j) = ∂_k ω_{ij}.
Tensor exterior_from(const Tensor& domega);

/// Throws Error when ω is not antisymmetric at x.
Tensor exterior_derivative_2form(const TensorField& omega, std::span<const double> x, const DiffScheme& s);

/// N(i, j, h) = N(∂i, ∂j)^h from the bracket formula
/// N(X,Y) = [JX,JY] - J[JX,Y] - J[X,JY] + J²[X,Y]; dj(k, h, i) = ∂_k J_i^h.
Tensor nijenhuis_from(const Tensor& j, const Tensor& dj);

Tensor nijenhuis(const TensorField& j, std::span<const double> x, const DiffScheme& s);

/// max |∇g| where Γ comes from `s` and ∂g from the independent `reference`
/// scheme. Using one stencil for both makes the residual vanish identically.
double metric_compatibility_residual(const TensorField& metric, std::span<const double> x, const DiffScheme& s,
                                     const DiffScheme& reference);

}  // namespace mk
