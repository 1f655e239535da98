#include "metallic/diffcalc.hpp"

#include <algorithm>
#include <cmath>

#include "metallic/errors.hpp"
#include "metallic/geometry.hpp"

namespace mk {

SchemeSet SchemeSet::with_base_step(double h) {
  if (!(h > 0.0)) throw Error("difference step must be positive");
  SchemeSet s;
  const double f = h / s.first.h;
  s.first.h *= f;
  s.second.h *= f;
  s.third.h *= f;
  return s;
}

double SchemeSet::reach(int levels) const {
  double r = 0.0;
  if (levels >= 1) r += first.reach();
  if (levels >= 2) r += second.reach();
  if (levels >= 3) r += third.reach();
  return r;
}

namespace {

Tensor stencil(const TensorField& f, std::span<const double> x, int dir, double h, int order) {
  Point y(x.begin(), x.end());
  const auto d = static_cast<std::size_t>(dir);
  auto at = [&](double off) {
    y[d] = x[d] + off;
    return f(y);
  };
  if (order == 2) {
    Tensor r = at(h);
    r -= at(-h);
    r *= 1.0 / (2.0 * h);
    return r;
  }
  if (order == 4) {
    Tensor r = at(h);
    r -= at(-h);
    r *= 8.0;
    r -= at(2.0 * h);
    r += at(-2.0 * h);
    r *= 1.0 / (12.0 * h);
    return r;
  }
  throw Error("difference order must be 2 or 4");
}

}  // namespace

Tensor partial(const TensorField& f, std::span<const double> x, int direction, const DiffScheme& s) {
  if (!(s.h > 0.0)) throw Error("difference step must be positive");
  if (direction < 0 || static_cast<std::size_t>(direction) >= x.size()) throw Error("direction out of range");
  Tensor coarse = stencil(f, x, direction, s.h, s.order);
  if (!s.richardson) return coarse;
  Tensor fine = stencil(f, x, direction, 0.5 * s.h, s.order);
  const double w = std::pow(2.0, s.order);
  fine *= w;
  fine -= coarse;
  fine *= 1.0 / (w - 1.0);
  return fine;
}

Tensor gradient(const TensorField& f, std::span<const double> x, const DiffScheme& s) {
  const int n = static_cast<int>(x.size());
  std::vector<Slot> slots{Slot::Co};
  slots.insert(slots.end(), f.slots.begin(), f.slots.end());
  Tensor out(n, slots);
  for (int k = 0; k < n; ++k) {
    const Tensor p = partial(f, x, k, s);
    auto dst = out.data().subspan(static_cast<std::size_t>(k) * p.size(), p.size());
    std::copy(p.data().begin(), p.data().end(), dst.begin());
  }
  return out;
}

Tensor christoffel_from(const Mat& ginv, const Tensor& dg) {
  const int n = dg.dim();
  Tensor low(n, {Slot::Co, Slot::Co, Slot::Co});
  for (int t = 0; t < n; ++t)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) low(t, i, j) = 0.5 * (dg(i, t, j) + dg(j, t, i) - dg(t, i, j));
  Tensor gamma(n, {Slot::Contra, Slot::Co, Slot::Co});
  for (int h = 0; h < n; ++h)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int t = 0; t < n; ++t) s += ginv(h, t) * low(t, i, j);
        gamma(h, i, j) = s;
      }
  return gamma;
}

ConnectionCoefficients christoffel(const TensorField& metric, std::span<const double> x, const DiffScheme& s) {
  const Mat g = metric(x).matrix();
  const Mat ginv = inverse_metric(g, x);
  ConnectionCoefficients c;
  c.gamma = christoffel_from(ginv, gradient(metric, x, s));
  const int n = c.gamma.dim();
  c.torsion = Tensor(n, {Slot::Contra, Slot::Co, Slot::Co});
  return c;
}

TensorField christoffel_field(const TensorField& metric, const DiffScheme& s) {
  return {metric.dim, {Slot::Contra, Slot::Co, Slot::Co},
          [metric, s](std::span<const double> x) { return christoffel(metric, x, s).gamma; }};
}

Tensor covariant_from(const Tensor& t, const Tensor& dt, const Tensor& gamma) {
  const int n = dt.dim();
  const int r = t.rank();
  Tensor out = dt;
  std::vector<int> src(static_cast<std::size_t>(r));
  for_each_index(n, r + 1, [&](std::span<const int> idx) {
    const int k = idx[0];
    double corr = 0.0;
    for (int s = 0; s < r; ++s) {
      std::copy(idx.begin() + 1, idx.end(), src.begin());
      const int a = idx[static_cast<std::size_t>(s) + 1];
      for (int u = 0; u < n; ++u) {
        src[static_cast<std::size_t>(s)] = u;
        if (t.slots()[static_cast<std::size_t>(s)] == Slot::Contra)
          corr += gamma(a, k, u) * t.at(src);
        else
          corr -= gamma(u, k, a) * t.at(src);
      }
    }
    out.at(idx) += corr;
  });
  return out;
}

Tensor covariant_derivative(const TensorField& t, std::span<const double> x, const TensorField& gamma,
                            const DiffScheme& s) {
  return covariant_from(t(x), gradient(t, x, s), gamma(x));
}

TensorField covariant_derivative_field(const TensorField& t, const TensorField& gamma, const DiffScheme& s) {
  std::vector<Slot> slots{Slot::Co};
  slots.insert(slots.end(), t.slots.begin(), t.slots.end());
  return {t.dim, slots,
          [t, gamma, s](std::span<const double> x) { return covariant_derivative(t, x, gamma, s); }};
}

Tensor second_covariant_derivative(const TensorField& t, std::span<const double> x, const TensorField& gamma,
                                   const DiffScheme& inner, const DiffScheme& outer) {
  return covariant_derivative(covariant_derivative_field(t, gamma, inner), x, gamma, outer);
}

CurvaturePack curvature_from(const Tensor& gamma, const Tensor& dgamma, const Mat& g, const Mat& ginv) {
  const int n = gamma.dim();
  CurvaturePack c;
  c.riemann = Tensor(n, {Slot::Co, Slot::Co, Slot::Co, Slot::Contra});
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        for (int h = 0; h < n; ++h) {
          double v = dgamma(k, h, j, i) - dgamma(j, h, k, i);
          for (int t = 0; t < n; ++t) v += gamma(h, k, t) * gamma(t, j, i) - gamma(h, j, t) * gamma(t, k, i);
          c.riemann(k, j, i, h) = v;
        }
  c.lowered = Tensor(n, {Slot::Co, Slot::Co, Slot::Co, Slot::Co});
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        for (int l = 0; l < n; ++l) {
          double v = 0.0;
          for (int t = 0; t < n; ++t) v += c.riemann(k, j, i, t) * g(t, l);
          c.lowered(k, j, i, l) = v;
        }
  c.ricci = Tensor(n, {Slot::Co, Slot::Co});
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      double v = 0.0;
      for (int h = 0; h < n; ++h) v += c.riemann(h, j, i, h);
      c.ricci(j, i) = v;
    }
  for (int j = 0; j < n; ++j)
    for (int i = j + 1; i < n; ++i) {
      const double a = c.ricci(j, i), b = c.ricci(i, j);
      c.ricci_asymmetry = std::max(c.ricci_asymmetry, std::abs(a - b));
      c.ricci(j, i) = c.ricci(i, j) = 0.5 * (a + b);
    }
  c.scalar = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) c.scalar += ginv(j, i) * c.ricci(j, i);
  return c;
}

CurvaturePack riemann(const TensorField& metric, std::span<const double> x, const DiffScheme& first,
                      const DiffScheme& second) {
  const Mat g = metric(x).matrix();
  const Mat ginv = inverse_metric(g, x);
  const TensorField gf = christoffel_field(metric, first);
  return curvature_from(gf(x), gradient(gf, x, second), g, ginv);
}

TensorField ricci_field(const TensorField& metric, const DiffScheme& first, const DiffScheme& second) {
  return {metric.dim, {Slot::Co, Slot::Co},
          [metric, first, second](std::span<const double> x) { return riemann(metric, x, first, second).ricci; }};
}

CurvatureSymmetry curvature_symmetry(const CurvaturePack& c) {
  const Tensor& r = c.lowered;
  const int n = r.dim();
  CurvatureSymmetry s;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        for (int l = 0; l < n; ++l) {
          s.antisym_front = std::max(s.antisym_front, std::abs(r(k, j, i, l) + r(j, k, i, l)));
          s.antisym_back = std::max(s.antisym_back, std::abs(r(k, j, i, l) + r(k, j, l, i)));
          s.pair = std::max(s.pair, std::abs(r(k, j, i, l) - r(i, l, k, j)));
          s.bianchi = std::max(s.bianchi, std::abs(r(k, j, i, l) + r(j, i, k, l) + r(i, k, j, l)));
        }
  s.ricci = c.ricci_asymmetry;
  return s;
}

Tensor exterior_from(const Tensor& domega) {
  const int n = domega.dim();
  Tensor d(n, {Slot::Co, Slot::Co, Slot::Co});
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) d(a, b, c) = domega(a, b, c) + domega(b, c, a) + domega(c, a, b);
  return d;
}

Tensor exterior_derivative_2form(const TensorField& omega, std::span<const double> x, const DiffScheme& s) {
  const Mat w = omega(x).matrix();
  const double scale = std::max(1.0, w.cwiseAbs().maxCoeff());
  if ((w + w.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale)
    throw Error("exterior derivative requires an antisymmetric 2-form");
  return exterior_from(gradient(omega, x, s));
}

Tensor nijenhuis_from(const Tensor& j, const Tensor& dj) {
  const int n = j.dim();
  Tensor out(n, {Slot::Co, Slot::Co, Slot::Contra});
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int h = 0; h < n; ++h) {
        double v = 0.0;
        for (int t = 0; t < n; ++t) {
          v += j(t, i) * dj(t, h, k) - j(t, k) * dj(t, h, i);
          v += j(h, t) * (dj(k, t, i) - dj(i, t, k));
        }
        out(i, k, h) = v;
      }
  return out;
}

Tensor nijenhuis(const TensorField& j, std::span<const double> x, const DiffScheme& s) {
  return nijenhuis_from(j(x), gradient(j, x, s));
}

double metric_compatibility_residual(const TensorField& metric, std::span<const double> x, const DiffScheme& s,
                                     const DiffScheme& reference) {
  const Mat g = metric(x).matrix();
  const Tensor gamma = christoffel(metric, x, s).gamma;
  const Tensor dg = gradient(metric, x, reference);
  const int n = static_cast<int>(g.rows());
  double worst = 0.0;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double v = dg(k, i, j);
        for (int t = 0; t < n; ++t) v -= gamma(t, k, i) * g(t, j) + gamma(t, k, j) * g(i, t);
        worst = std::max(worst, std::abs(v));
      }
  return worst;
}

}  // namespace mk
