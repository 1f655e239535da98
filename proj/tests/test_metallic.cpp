#include <cmath>
#include <random>

#include "doctest.h"
#include "metallic/classify.hpp"
#include "metallic/errors.hpp"
#include "metallic/zoo.hpp"

using namespace mk;

namespace {

std::vector<MetallicParams> random_params(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uq(0.05, 5.0), u(-0.95, 0.95);
  std::vector<MetallicParams> out;
  for (int i = 0; i < count; ++i) {
    MetallicParams prm;
    prm.q = uq(rng);
    prm.p = u(rng) * std::sqrt(6.0 * prm.q);
    out.push_back(prm);
  }
  return out;
}

Mat random_complex_structure(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  Mat p = Mat::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) p(i, j) += 0.3 * u(rng);
  return p * zoo::standard_j(n) * p.inverse();
}

double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("round trip, polynomial identity and conjugate product for 50 random parameter pairs") {
  for (const auto& prm : random_params(50, 11)) {
    CAPTURE(prm.p);
    CAPTURE(prm.q);
    for (int k = 1; k <= 3; ++k) {
      const int n = 2 * k;
      const Mat j = zoo::standard_j(n);
      const Mat jm = jm_from_j(j, prm, 1);
      const Mat jh = conjugate_metallic(jm, prm.p);
      CHECK(max_abs(j_from_jm(jm, prm, 1) - j) < 1e-12);
      CHECK(polynomial_residual(jm, prm) < 1e-12);
      CHECK(polynomial_residual(jh, prm) < 1e-12);
      CHECK(max_abs(jm * jh - 1.5 * prm.q * Mat::Identity(n, n)) < 1e-12);
      CHECK(max_abs(jh * jm - jm * jh) < 1e-12);
    }
  }
}

TEST_CASE("non-standard almost complex structures") {
  std::mt19937_64 rng(3);
  for (const auto& prm : random_params(10, 12)) {
    const Mat j = random_complex_structure(4, rng);
    REQUIRE(complex_residual(j) < 1e-12);
    const Mat jm = jm_from_j(j, prm, -1);
    CHECK(max_abs(j_from_jm(jm, prm, -1) - j) < 1e-10);
    // the other sign produces the conjugate
    CHECK(max_abs(jm_from_j(j, prm, 1) - conjugate_metallic(jm, prm.p)) < 1e-12);
    CHECK(max_abs(conjugate_complex(j) - (-j)) == 0.0);
  }
}

TEST_CASE("complex metallic mean") {
  for (const auto& prm : random_params(20, 13)) {
    const auto z = metallic_mean(prm);
    CHECK(z.imag() > 0);
    CHECK(std::abs(z * z - prm.p * z + 1.5 * prm.q) < 1e-12);
    CHECK(z.imag() == doctest::Approx(prm.coefficient()));
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(validate({0.0, 0.0}), Error);
  CHECK_THROWS_AS(validate({0.0, -1.0}), Error);
  CHECK_THROWS_AS(validate({3.0, 1.0}), Error);   // p² = 9 > 6
  CHECK_THROWS_AS(validate({3.0, 1.5}), Error);  // p² = 6q
  CHECK_NOTHROW(validate({1.0, 1.0}));
  CHECK_THROWS_AS(jm_from_j(Mat::Identity(2, 2), {}, 1), Error);
  CHECK_THROWS_AS(jm_from_j(zoo::standard_j(2), {}, 2), Error);
  CHECK_THROWS_AS(j_from_jm(Mat::Identity(2, 2), {}, 1), Error);
}

TEST_CASE("compatibility of the flat metric") {
  const Mat g = Mat::Identity(4, 4);
  const MetallicParams zero_p{0.0, 2.0};
  const auto ok = hyperbolic_residual(g, jm_from_j(zoo::standard_j(4), zero_p, 1), zero_p);
  CHECK(ok.tcg0 < 1e-14);
  CHECK(ok.tcg1 < 1e-14);
  CHECK(ok.vanish_together);

  // trace obstruction: with p ≠ 0 a skew ω is impossible
  const MetallicParams prm{0.5, 1.0};
  const auto bad = hyperbolic_residual(g, jm_from_j(zoo::standard_j(4), prm, 1), prm);
  CHECK(bad.tcg0 > 0.1);
}

TEST_CASE("bundle accessors") {
  const auto fx = zoo::make("s2");
  const auto& b = fx.bundle;
  const Point x{0.2, 0.4};
  const Mat g = b.metric()(x).matrix();
  const Mat jm = b.jm()(x).matrix();
  CHECK(max_abs(b.omega()(x).matrix() - jm.transpose() * g) < 1e-15);
  CHECK(max_abs(b.conjugate()(x).matrix() + jm) < 1e-15);
  CHECK(max_abs(b.complex_structure()(x).matrix() - zoo::standard_j(2)) < 1e-15);
  CHECK(b.sign() == 1);

  StructureBundle direct(b.chart(), b.params(), b.metric(), b.jm());
  CHECK(max_abs(direct.complex_structure()(x).matrix() - zoo::standard_j(2)) < 1e-12);

  TensorField wrong{4, {Slot::Contra, Slot::Co}, [](std::span<const double>) {
                      return Tensor::from_matrix(Mat::Identity(4, 4), Slot::Contra, Slot::Co);
                    }};
  CHECK_THROWS_AS(StructureBundle(b.chart(), b.params(), b.metric(), wrong), Error);
}

TEST_CASE("classification of simple structures") {
  const SchemeSet s;
  const Thresholds tol;
  {
    const auto fx = zoo::flat(2);
    const auto rep = classify(fx.bundle, s, tol);
    CHECK(rep.verdict == Verdict::MetallicKahler);
    CHECK(rep.hermitian);
    CHECK(rep.almost_kahler);
    CHECK(rep.nearly);
    CHECK(rep.residual("nabla_j") < 1e-12);
  }
  {
    const auto fx = zoo::flat(2, {0.5, 1.0});
    const auto rep = classify(fx.bundle, s, tol);
    CHECK(rep.verdict == Verdict::NotHermitian);
    CHECK_FALSE(rep.entry("hyperbolic_tcg0").pass);
    CHECK(rep.entry("polynomial").pass);
  }
  {
    const auto fx = zoo::negative();
    const auto rep = classify(fx.bundle, s, tol);
    CHECK(rep.verdict == Verdict::AlmostHermitian);
    CHECK(rep.residual("d_omega") > 1e-2);
    CHECK_FALSE(rep.nearly);
  }
  for (auto v : {Verdict::NotHermitian, Verdict::AlmostHermitian, Verdict::AlmostKahler, Verdict::MetallicKahler,
                 Verdict::NearlyKahler})
    CHECK(verdict_from_name(verdict_name(v)) == v);
  CHECK_FALSE(verdict_from_name("Kähler").has_value());
}

TEST_CASE("near-boundary flagging") {
  const auto fx = zoo::make("negative");
  Thresholds tol;
  const auto base = classify(fx.bundle, {}, tol);
  CHECK(base.near_boundary().empty());
  tol.d1 = base.residual("d_omega");  // put dω right at its threshold
  const auto rep = classify(fx.bundle, {}, tol);
  const auto flagged = rep.near_boundary();
  CHECK(std::find(flagged.begin(), flagged.end(), "d_omega") != flagged.end());
}
