#pragma once

#include <vector>

#include "metallic/diffcalc.hpp"
#include "metallic/parallel.hpp"
#include "metallic/structure.hpp"

namespace mk {

/// Differentiation depth of a frame: 1 = first derivatives (∇J_M, dω, N),
/// 2 = curvature and second covariant derivatives, 3 = ∇Ric.
enum class Depth { First = 1, Second = 2, Third = 3 };

/// Everything the checkers need at one sample point. Built once, then read
/// concurrently.
struct PointFrame {
  Point x;
  Mat g, ginv;
  Mat jm;      // (J_M)_i^h at (h, i)
  Mat jhat;    // p I - J_M
  Mat omega;   // ω_{ij}
  Tensor gamma;   // Γ^h_{ij}                    (h, i, j)
  Tensor dj;      // ∇_k (J_M)_i^h               (k, h, i)
  Tensor domega;  // ∇_k ω_{ij}                  (k, i, j), own differencing path
  Tensor dw;      // ∂_a ω_{bc} + cyclic         (a, b, c)
  Tensor nij;     // N_{ij}^h                    (i, j, h)
  Tensor f;       // F_{ijk} = g_{kt} ∇_i (J_M)_j^t

  bool has_second = false;
  CurvaturePack curv;
  Tensor ddj;      // ∇_m ∇_k (J_M)_i^h         (m, k, h, i)
  Tensor ddomega;  // ∇_m ∇_k ω_{ij}            (m, k, i, j)

  bool has_third = false;
  Tensor dricci;  // ∇_k S_{ji}                 (k, j, i)
};

/// F_{ijk} from ∇J_M and g.
Tensor f_from(const Tensor& dj, const Mat& g);

/// Throws BoundaryError if the stencils for `depth` leave the chart.
PointFrame evaluate_frame(const StructureBundle& bundle, std::span<const double> x, const SchemeSet& schemes,
                          Depth depth);

std::vector<PointFrame> evaluate_frames(const StructureBundle& bundle, std::span<const Point> points,
                                        const SchemeSet& schemes, Depth depth, par::Exec exec);

/// Adds the ∇Ric level to frames that already carry curvature. Points whose
/// stencil would leave the chart keep has_third = false.
void extend_third(std::vector<PointFrame>& frames, const StructureBundle& bundle, const SchemeSet& schemes,
                  par::Exec exec);

/// F tensor at a point.
Tensor f_tensor(const StructureBundle& bundle, std::span<const double> x, const DiffScheme& scheme);

}  // namespace mk
