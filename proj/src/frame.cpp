#include "metallic/frame.hpp"

#include "metallic/errors.hpp"

namespace mk {

Tensor f_from(const Tensor& dj, const Mat& g) {
  const int n = dj.dim();
  Tensor f(n, {Slot::Co, Slot::Co, Slot::Co});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double v = 0.0;
        for (int t = 0; t < n; ++t) v += g(k, t) * dj(i, t, j);
        f(i, j, k) = v;
      }
  return f;
}

PointFrame evaluate_frame(const StructureBundle& bundle, std::span<const double> x, const SchemeSet& schemes,
                          Depth depth) {
  bundle.chart().check_reach(x, schemes.reach(static_cast<int>(depth) >= 2 ? 2 : 1));

  PointFrame fr;
  fr.x.assign(x.begin(), x.end());
  const TensorField& metric = bundle.metric();
  const TensorField& jm = bundle.jm();
  const TensorField omega = bundle.omega();

  fr.g = metric(x).matrix();
  fr.ginv = inverse_metric(fr.g, x);
  const Tensor jt = jm(x);
  fr.jm = jt.matrix();
  fr.jhat = conjugate_metallic(fr.jm, bundle.params().p);
  const Tensor wt = omega(x);
  fr.omega = wt.matrix();

  fr.gamma = christoffel_from(fr.ginv, gradient(metric, x, schemes.first));
  const Tensor djp = gradient(jm, x, schemes.first);
  fr.dj = covariant_from(jt, djp, fr.gamma);
  const Tensor dwp = gradient(omega, x, schemes.first);
  fr.domega = covariant_from(wt, dwp, fr.gamma);
  fr.dw = exterior_from(dwp);
  fr.nij = nijenhuis_from(jt, djp);
  fr.f = f_from(fr.dj, fr.g);

  if (depth == Depth::First) return fr;

  const TensorField gamma_f = christoffel_field(metric, schemes.first);
  fr.curv = curvature_from(fr.gamma, gradient(gamma_f, x, schemes.second), fr.g, fr.ginv);
  const TensorField dj_f = covariant_derivative_field(jm, gamma_f, schemes.first);
  fr.ddj = covariant_from(fr.dj, gradient(dj_f, x, schemes.second), fr.gamma);
  const TensorField dw_f = covariant_derivative_field(omega, gamma_f, schemes.first);
  fr.ddomega = covariant_from(fr.domega, gradient(dw_f, x, schemes.second), fr.gamma);
  fr.has_second = true;

  if (depth == Depth::Third) {
    bundle.chart().check_reach(x, schemes.reach(3));
    const TensorField ric = ricci_field(metric, schemes.first, schemes.second);
    fr.dricci = covariant_from(fr.curv.ricci, gradient(ric, x, schemes.third), fr.gamma);
    fr.has_third = true;
  }
  return fr;
}

std::vector<PointFrame> evaluate_frames(const StructureBundle& bundle, std::span<const Point> points,
                                        const SchemeSet& schemes, Depth depth, par::Exec exec) {
  return par::map<PointFrame>(points.size(), exec,
                              [&](std::size_t i) { return evaluate_frame(bundle, points[i], schemes, depth); });
}

void extend_third(std::vector<PointFrame>& frames, const StructureBundle& bundle, const SchemeSet& schemes,
                  par::Exec exec) {
  const TensorField ric = ricci_field(bundle.metric(), schemes.first, schemes.second);
  const double reach = schemes.reach(3);
  par::for_each(frames.size(), exec, [&](std::size_t i) {
    PointFrame& fr = frames[i];
    if (!fr.has_second || fr.has_third) return;
    if (!bundle.chart().contains(fr.x, reach)) return;
    fr.dricci = covariant_from(fr.curv.ricci, gradient(ric, fr.x, schemes.third), fr.gamma);
    fr.has_third = true;
  });
}

Tensor f_tensor(const StructureBundle& bundle, std::span<const double> x, const DiffScheme& scheme) {
  bundle.chart().check_reach(x, scheme.reach());
  const Mat g = bundle.metric()(x).matrix();
  const Mat ginv = inverse_metric(g, x);
  const Tensor gamma = christoffel_from(ginv, gradient(bundle.metric(), x, scheme));
  const Tensor dj = covariant_from(bundle.jm()(x), gradient(bundle.jm(), x, scheme), gamma);
  return f_from(dj, g);
}

}  // namespace mk
