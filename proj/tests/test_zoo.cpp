#include <array>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "metallic/errors.hpp"
#include "metallic/identities.hpp"
#include "metallic/zoo.hpp"

using namespace mk;

namespace {

using Quat = std::array<double, 4>;
using Oct = std::array<double, 8>;

Quat qmul(const Quat& a, const Quat& b) {
  return {a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3], a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
          a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1], a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]};
}

Quat qconj(const Quat& a) { return {a[0], -a[1], -a[2], -a[3]}; }

/// Cayley–Dickson doubling: (a, b)(c, d) = (ac - d̄b, da + bc̄).
Oct omul(const Oct& x, const Oct& y) {
  const Quat a{x[0], x[1], x[2], x[3]}, b{x[4], x[5], x[6], x[7]};
  const Quat c{y[0], y[1], y[2], y[3]}, d{y[4], y[5], y[6], y[7]};
  const Quat l1 = qmul(a, c), l2 = qmul(qconj(d), b), r1 = qmul(d, a), r2 = qmul(b, qconj(c));
  Oct out{};
  for (int i = 0; i < 4; ++i) {
    out[static_cast<std::size_t>(i)] = l1[static_cast<std::size_t>(i)] - l2[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i + 4)] = r1[static_cast<std::size_t>(i)] + r2[static_cast<std::size_t>(i)];
  }
  return out;
}

double dot7(const std::array<double, 7>& a, const std::array<double, 7>& b) {
  double s = 0.0;
  for (int i = 0; i < 7; ++i) s += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i)];
  return s;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("the 7-dimensional cross product is the imaginary octonion product") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> n01;
  for (int k = 0; k < 1000; ++k) {
    std::array<double, 7> u{}, v{};
    Oct ou{}, ov{};
    for (int i = 0; i < 7; ++i) {
      u[static_cast<std::size_t>(i)] = ou[static_cast<std::size_t>(i + 1)] = n01(rng);
      v[static_cast<std::size_t>(i)] = ov[static_cast<std::size_t>(i + 1)] = n01(rng);
    }
    const auto w = zoo::cross7(u, v);
    const auto prod = omul(ou, ov);
    double diff = 0.0;
    for (int i = 0; i < 7; ++i)
      diff = std::max(diff, std::abs(w[static_cast<std::size_t>(i)] - prod[static_cast<std::size_t>(i + 1)]));
    CHECK(diff < 1e-12);
    // Re(uv) = -<u, v> for imaginary octonions
    CHECK(std::abs(prod[0] + dot7(u, v)) < 1e-12);

    const double nu = std::sqrt(dot7(u, u)), nv = std::sqrt(dot7(v, v));
    const double c = dot7(u, v) / (nu * nv);
    CHECK(std::abs(dot7(w, u)) < 1e-12 * nu * nu * nv);
    CHECK(std::abs(dot7(w, v)) < 1e-12 * nu * nv * nv);
    CHECK(std::abs(std::sqrt(dot7(w, w)) - nu * nv * std::sqrt(std::max(0.0, 1.0 - c * c))) < 1e-12 * nu * nv);
  }
}

TEST_CASE("fixture verdicts") {
  const std::pair<const char*, Verdict> expected[] = {
      {"flat-k1", Verdict::MetallicKahler}, {"flat-k2", Verdict::MetallicKahler},
      {"flat-k3", Verdict::MetallicKahler}, {"torus", Verdict::MetallicKahler},
      {"s2", Verdict::MetallicKahler},      {"s6", Verdict::NearlyKahler},
      {"negative", Verdict::AlmostHermitian}};
  for (const auto& [name, verdict] : expected) {
    CAPTURE(name);
    const auto fx = zoo::load(name);
    CHECK(fx.expected == verdict);
    const auto rep = classify(fx.bundle, {}, {});
    CHECK(rep.verdict == verdict);
  }
  const auto s6 = classify(zoo::sphere6().bundle, {}, {});
  CHECK_FALSE(s6.metallic_kahler);
  CHECK(s6.nearly);
  const auto neg = classify(zoo::negative().bundle, {}, {});
  CHECK(neg.hermitian);
  CHECK_FALSE(neg.almost_kahler);
  CHECK_FALSE(neg.nearly);
  CHECK(std::max(neg.residual("d_omega"), neg.residual("nijenhuis")) > 1e-2);
}

TEST_CASE("the 6-sphere structure is orthogonal and squares to minus one") {
  const auto fx = zoo::sphere6();
  for (const auto& x : sample_points(fx.bundle.chart())) {
    const Mat j = fx.bundle.complex_structure()(x).matrix();
    const Mat g = fx.bundle.metric()(x).matrix();
    CHECK(complex_residual(j) < 1e-12);
    CHECK((j.transpose() * g * j - g).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("p != 0 fixtures are flagged by the trace obstruction") {
  const auto fx = zoo::make("s2", {0.3, 1.0});
  CHECK(fx.expected == Verdict::NotHermitian);
  CHECK_NOTHROW(zoo::validate(fx));
}

TEST_CASE("mirrored spec files ship with the repository") {
  for (const char* name : {"flat-k1", "flat-k2", "flat-k3", "torus", "s2"}) {
    CAPTURE(name);
    const auto fx = zoo::make(name);
    REQUIRE(fx.mirrored_spec.has_value());
    CHECK(slurp(std::string(METALLIC_SPECS_DIR) + "/" + name + ".spec") == *fx.mirrored_spec);
  }
  CHECK_FALSE(zoo::make("s6").mirrored_spec.has_value());
}

TEST_CASE("unknown fixtures") {
  CHECK_THROWS_AS(zoo::make("s4"), Error);
  CHECK_THROWS_AS(zoo::flat(0), Error);
  CHECK(zoo::names().size() == 7);
}
