#include <cmath>

#include "doctest.h"
#include "metallic/diffcalc.hpp"
#include "metallic/errors.hpp"
#include "metallic/zoo.hpp"

using namespace mk;

namespace {

TensorField scalar_field(std::function<double(std::span<const double>)> f, int n) {
  return {n, {}, [f](std::span<const double> x) { return Tensor::scalar(f(x)); }};
}

/// Γ for g = e^{2φ} δ with φ = ln 2 - ln(1 + |x|²), written out by hand.
double conformal_gamma(int h, int i, int j, std::span<const double> x) {
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  auto dphi = [&](int k) { return -2.0 * x[static_cast<std::size_t>(k)] / (1.0 + r2); };
  return (h == i ? dphi(j) : 0.0) + (h == j ? dphi(i) : 0.0) - (i == j ? dphi(h) : 0.0);
}

}  // namespace

TEST_CASE("partial derivatives of closed-form scalars") {
  const auto f = scalar_field([](std::span<const double> x) { return std::sin(x[0]) * std::exp(x[1]); }, 2);
  const Point x{0.3, -0.2};
  for (const DiffScheme s : {DiffScheme{1e-3, 4, false}, DiffScheme{1e-3, 2, true}, DiffScheme{1e-4, 2, false}}) {
    CHECK(partial(f, x, 0, s).data()[0] == doctest::Approx(std::cos(0.3) * std::exp(-0.2)).epsilon(1e-7));
    CHECK(partial(f, x, 1, s).data()[0] == doctest::Approx(std::sin(0.3) * std::exp(-0.2)).epsilon(1e-7));
  }
  const Tensor grad = gradient(f, x, {});
  CHECK(grad.rank() == 1);
  CHECK(grad(1) == doctest::Approx(std::sin(0.3) * std::exp(-0.2)).epsilon(1e-10));
}

TEST_CASE("Christoffel symbols of the stereographic sphere match the closed form") {
  for (const char* name : {"s2", "s6"}) {
    const auto fx = zoo::make(name);
    const int n = fx.bundle.dim();
    for (const auto& x : sample_points(fx.bundle.chart())) {
      const auto cc = christoffel(fx.bundle.metric(), x, {});
      CHECK(cc.torsion.max_abs() < 1e-14);
      double worst = 0.0;
      for (int h = 0; h < n; ++h)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) worst = std::max(worst, std::abs(cc.gamma(h, i, j) - conformal_gamma(h, i, j, x)));
      CHECK(worst < 1e-9);
    }
  }
}

TEST_CASE("curvature of the unit spheres and flat space") {
  const SchemeSet s;
  {
    const auto fx = zoo::make("s2");
    for (const auto& x : sample_points(fx.bundle.chart())) {
      const auto c = riemann(fx.bundle.metric(), x, s.first, s.second);
      CHECK(std::abs(c.scalar - 2.0) < 1e-6);
      const Mat g = fx.bundle.metric()(x).matrix();
      CHECK((c.ricci.matrix() - g).cwiseAbs().maxCoeff() < 1e-5);
      // R(X,Y)Z = g(Y,Z)X - g(X,Z)Y for curvature +1
      double worst = 0.0;
      for (int k = 0; k < 2; ++k)
        for (int j = 0; j < 2; ++j)
          for (int i = 0; i < 2; ++i)
            for (int l = 0; l < 2; ++l)
              worst = std::max(worst, std::abs(c.lowered(k, j, i, l) - (g(j, i) * g(k, l) - g(k, i) * g(j, l))));
      CHECK(worst < 1e-5);
      const auto sym = curvature_symmetry(c);
      CHECK(sym.antisym_front < 1e-5);
      CHECK(sym.antisym_back < 1e-5);
      CHECK(sym.pair < 1e-5);
      CHECK(sym.bianchi < 1e-5);
    }
  }
  {
    const auto fx = zoo::make("s6");
    const Point o(6, 0.0);
    CHECK(std::abs(riemann(fx.bundle.metric(), o, s.first, s.second).scalar - 30.0) < 1e-4);
  }
  {
    const auto fx = zoo::make("flat-k2");
    const auto c = riemann(fx.bundle.metric(), Point{0.1, 0.2, -0.3, 0.4}, s.first, s.second);
    CHECK(c.riemann.max_abs() < 1e-8);
    CHECK(std::abs(c.scalar) < 1e-8);
  }
}

TEST_CASE("metric compatibility converges when the step is halved") {
  for (const char* name : {"s2", "s6"}) {
    const auto fx = zoo::make(name);
    const DiffScheme ref{1e-3, 4, true};
    for (int order : {2, 4}) {
      double coarse = 0.0, fine = 0.0;
      for (const auto& x : sample_points(fx.bundle.chart())) {
        coarse = std::max(coarse, metric_compatibility_residual(fx.bundle.metric(), x, {1e-2, order, false}, ref));
        fine = std::max(fine, metric_compatibility_residual(fx.bundle.metric(), x, {5e-3, order, false}, ref));
      }
      CAPTURE(name);
      CAPTURE(order);
      CHECK(coarse / fine >= 3.0);
    }
  }
}

TEST_CASE("exterior derivative and Nijenhuis tensor") {
  // ω = x2 dx0∧dx1 on R⁴, so dω = dx2∧dx0∧dx1.
  TensorField omega{4, {Slot::Co, Slot::Co}, [](std::span<const double> x) {
                      Tensor t(4, {Slot::Co, Slot::Co});
                      t(0, 1) = x[2];
                      t(1, 0) = -x[2];
                      return t;
                    }};
  const Tensor d = exterior_derivative_2form(omega, Point{0.1, 0.2, 0.3, 0.4}, {});
  CHECK(d(2, 0, 1) == doctest::Approx(1.0));
  CHECK(d(0, 1, 2) == doctest::Approx(1.0));
  CHECK(d(0, 2, 1) == doctest::Approx(-1.0));
  CHECK(d(3, 0, 1) == doctest::Approx(0.0));

  TensorField not_skew{2, {Slot::Co, Slot::Co}, [](std::span<const double>) {
                         return Tensor::from_matrix(Mat::Identity(2, 2), Slot::Co, Slot::Co);
                       }};
  CHECK_THROWS_AS(exterior_derivative_2form(not_skew, Point{0, 0}, {}), Error);

  // constant J: N = 0
  const Mat j = zoo::standard_j(4);
  TensorField jf{4, {Slot::Contra, Slot::Co}, [j](std::span<const double>) {
                   return Tensor::from_matrix(j, Slot::Contra, Slot::Co);
                 }};
  CHECK(nijenhuis(jf, Point{0.1, 0.2, 0.3, 0.4}, {}).max_abs() < 1e-12);
}

TEST_CASE("covariant derivative of the metric vanishes") {
  const auto fx = zoo::make("s2");
  const TensorField gamma = christoffel_field(fx.bundle.metric(), {});
  const Tensor ng = covariant_derivative(fx.bundle.metric(), Point{0.2, -0.3}, gamma, {});
  CHECK(ng.max_abs() < 1e-9);
}

TEST_CASE("step scaling") {
  const SchemeSet s = SchemeSet::with_base_step(2e-3);
  CHECK(s.first.h == doctest::Approx(2e-3));
  CHECK(s.second.h == doctest::Approx(2 * 3.1622776601683794e-3));
  CHECK(s.reach(2) > s.reach(1));
}
