#include <cmath>
#include <random>

#include "doctest.h"
#include "metallic/errors.hpp"
#include "metallic/geometry.hpp"

using namespace mk;

TEST_CASE("chart validation") {
  CHECK_THROWS_AS(Chart({{-1, 1}}, {}), Error);
  CHECK_THROWS_AS(Chart({{-1, 1}, {0, 0.05}}, {}), Error);
  SamplePolicy pol;
  pol.named = {{"far", {0.99, 0.0}}};
  CHECK_THROWS_AS(Chart({{-1, 1}, {-1, 1}}, pol), Error);
  pol.named = {{"short", {0.0}}};
  CHECK_THROWS_AS(Chart({{-1, 1}, {-1, 1}}, pol), Error);
}

TEST_CASE("containment and stencil reach") {
  Chart c({{-1, 1}, {0, 2}}, {});
  const Point inside{0.0, 1.0};
  CHECK(c.contains(inside));
  CHECK(c.contains(inside, 0.9));
  CHECK_FALSE(c.contains(Point{0.0, 1.0}, 1.1));
  CHECK_NOTHROW(c.check_reach(inside, 0.5));
  CHECK_THROWS_AS(c.check_reach(Point{0.96, 1.0}, 0.05), BoundaryError);
  CHECK_THROWS_AS(c.check_reach(Point{0.0}, 0.01), BoundaryError);
}

TEST_CASE("sample points are deterministic, inside the margin and include named points") {
  SamplePolicy pol;
  pol.grid = 2;
  pol.random = 5;
  pol.seed = 99;
  pol.named = {{"here", {0.25, -0.5}}};
  Chart c({{-1, 1}, {-1, 1}}, pol);
  const auto a = sample_points(c);
  const auto b = sample_points(c);
  CHECK(a == b);
  CHECK(a.size() >= 8);
  for (const auto& x : a) CHECK(c.contains(x, 0.999 * pol.margin));
  CHECK(a.back() == Point{0.25, -0.5});

  c.policy().seed = 100;
  CHECK(sample_points(c) != a);

  SamplePolicy tiny;
  tiny.grid = 1;
  tiny.random = 0;
  CHECK(sample_points(Chart({{-1, 1}, {-1, 1}}, tiny)).size() >= 8);
}

TEST_CASE("inverse metric") {
  Mat g(2, 2);
  g << 2, 1, 1, 3;
  const Mat gi = inverse_metric(g);
  CHECK((g * gi - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);
  Mat s(2, 2);
  s << 1, 2, 2, 4;
  CHECK_THROWS_AS(inverse_metric(s), SingularMetricError);
  Mat tiny = 1e-6 * Mat::Identity(2, 2);
  CHECK_THROWS_AS(inverse_metric(tiny), SingularMetricError);
}

TEST_CASE("raising then lowering is the identity; contractions match matrix algebra") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  const int n = 4;
  Mat a = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = u(rng);
  const Mat g = a * a.transpose() + n * Mat::Identity(n, n);
  const Mat gi = inverse_metric(g);

  Tensor t(n, {Slot::Co, Slot::Co, Slot::Contra});
  for (auto& v : t.data()) v = u(rng);
  const Tensor up = raise_index(t, 0, gi);
  CHECK(up.slots()[0] == Slot::Contra);
  const Tensor back = lower_index(up, 0, g);
  CHECK(max_abs_diff(back, t) < 1e-13);

  // contract a (1,1) tensor: trace
  Mat m = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = u(rng);
  const Tensor mt = Tensor::from_matrix(m, Slot::Contra, Slot::Co);
  CHECK(std::abs(contract(mt, 0, 1).data()[0] - m.trace()) < 1e-14);

  // metric trace of a covariant 2-tensor: tr(g^{-1} B)
  const Tensor bt = Tensor::from_matrix(m, Slot::Co, Slot::Co);
  CHECK(std::abs(contract(bt, 0, 1, g, gi).data()[0] - (gi * m.transpose()).trace()) < 1e-13);

  CHECK_THROWS_AS(contract(bt, 0, 1), Error);
  CHECK_THROWS_AS(raise_index(up, 0, gi), Error);
}

TEST_CASE("symmetry residual") {
  Mat g(2, 2);
  g << 1, 0.5, 0.25, 1;
  CHECK(symmetry_residual(g) == doctest::Approx(0.25));
}
