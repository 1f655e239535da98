#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "metallic/connections.hpp"
#include "metallic/zoo.hpp"

using namespace mk;

namespace {

const IdentityResult& check(const ConnectionReport& rep, const std::string& id) {
  const auto it = std::find_if(rep.checks.begin(), rep.checks.end(), [&](const auto& r) { return r.id == id; });
  REQUIRE_MESSAGE(it != rep.checks.end(), "missing check " << id);
  return *it;
}

/// ∇̃ω written from the coefficients directly, independent of the
/// deformation bookkeeping: ∂ω - Γ̃ω - Γ̃ω with ∂ω recovered from ∇ω + Γω.
Tensor nabla_tilde_omega_from_coefficients(const PointFrame& fr, const AffineConnection& c) {
  const int n = fr.g.rows();
  Tensor out(n, {Slot::Co, Slot::Co, Slot::Co});
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d) {
        double partial = fr.domega(a, b, d);
        for (int h = 0; h < n; ++h)
          partial += fr.gamma(h, a, b) * fr.omega(h, d) + fr.gamma(h, a, d) * fr.omega(b, h);
        double v = partial;
        for (int h = 0; h < n; ++h)
          v -= c.coefficients(h, a, b) * fr.omega(h, d) + c.coefficients(h, a, d) * fr.omega(b, h);
        out(a, b, d) = v;
      }
  return out;
}

}  // namespace

TEST_CASE("first-type connection preserves ω and obeys the metric residual formula") {
  for (const char* name : {"s2", "s6"}) {
    CAPTURE(name);
    const auto fx = zoo::make(name);
    const auto ev = evaluate(fx.bundle, {}, {}, Depth::First);
    const auto rep = connection_report(ev);
    CHECK(check(rep, "first_type_nabla_omega").status == Status::Pass);
    CHECK(check(rep, "first_type_nabla_omega").relative < 1e-5);
    CHECK(check(rep, "first_type_metric").status == Status::Pass);
    CHECK(check(rep, "first_type_metric").relative < 1e-5);
    CHECK(check(rep, "first_type_symmetry").status == Status::Pass);
    CHECK(check(rep, "first_type_expansion").status == Status::Pass);
    CHECK(check(rep, "first_type_torsion").status == Status::Pass);
    for (const auto& fr : ev.frames) {
      const auto c = first_type(fr, ev.params);
      CHECK(nabla_tilde_omega_from_coefficients(fr, c).max_abs() < 1e-8);
    }
  }
}

TEST_CASE("both connections reduce to Levi-Civita on metallic Kähler fixtures") {
  for (const char* name : {"flat-k1", "flat-k2", "flat-k3", "torus", "s2"}) {
    CAPTURE(name);
    const auto fx = zoo::make(name);
    const auto ev = evaluate(fx.bundle, {}, {}, Depth::First);
    REQUIRE(ev.cls.metallic_kahler);
    for (const auto& fr : ev.frames) {
      const auto c1 = first_type(fr, ev.params);
      const auto c2 = second_type(fr, ev.params, ev.cls);
      REQUIRE(c2.has_value());
      CHECK(max_abs_diff(c1.coefficients, fr.gamma) < 1e-8);
      CHECK(max_abs_diff(c2->coefficients, fr.gamma) < 1e-8);
      CHECK(c1.torsion.max_abs() < 1e-8);
    }
    CHECK(check(connection_report(ev), "levi_civita_coincidence").status == Status::Pass);
  }
}

TEST_CASE("second-type deformation is minus three times the first-type one on S6") {
  const auto fx = zoo::make("s6");
  const auto ev = evaluate(fx.bundle, {}, {}, Depth::First);
  REQUIRE(ev.cls.verdict == Verdict::NearlyKahler);
  for (const auto& fr : ev.frames) {
    const auto c1 = first_type(fr, ev.params);
    const auto c2 = second_type(fr, ev.params, ev.cls);
    REQUIRE(c2.has_value());
    Tensor scaled = c1.deformation;
    scaled *= -3.0;
    CHECK(max_abs_diff(c2->deformation, scaled) <= 1e-10 * std::max(1.0, c1.deformation.max_abs()));
    CHECK(c1.deformation.max_abs() > 0.1);
  }
  const auto rep = connection_report(ev);
  REQUIRE(rep.deformation_ratio_residual.has_value());
  CHECK(*rep.deformation_ratio_residual < 1e-10);
  CHECK(check(rep, "deformation_ratio").status == Status::Pass);
  CHECK(check(rep, "second_type_nabla_omega").status == Status::Reported);
  CHECK(check(rep, "second_type_solved_nabla_omega").status == Status::Pass);
  CHECK(check(rep, "second_type_solved_symmetry").status == Status::Pass);
}

TEST_CASE("solved second-type connection coincides with the first type on nearly structures") {
  const auto fx = zoo::make("s6");
  const auto ev = evaluate(fx.bundle, {}, {}, Depth::First);
  for (const auto& fr : ev.frames) {
    const auto c1 = first_type(fr, ev.params);
    const auto c3 = second_type_solved(fr);
    CHECK(max_abs_diff(c1.deformation, c3.deformation) < 1e-8);
  }
}

TEST_CASE("torsion is the antisymmetric part of the coefficients") {
  const auto fx = zoo::make("negative");
  const auto ev = evaluate(fx.bundle, {}, {}, Depth::First);
  const auto c = first_type(ev.frames.front(), ev.params);
  const int n = fx.bundle.dim();
  double worst = 0.0;
  for (int h = 0; h < n; ++h)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        worst = std::max(worst, std::abs(c.torsion(h, i, j) + c.torsion(h, j, i)));
        worst = std::max(worst, std::abs(c.torsion(h, i, j) - (c.deformation(h, i, j) - c.deformation(h, j, i))));
      }
  CHECK(worst < 1e-15);
  CHECK(c.torsion.max_abs() > 0.01);
  CHECK_FALSE(second_type(ev.frames.front(), ev.params, ev.cls).has_value());
}

TEST_CASE("connections are skipped without a compatible metric") {
  const auto fx = zoo::flat(1, {0.5, 1.0});
  const auto ev = evaluate(fx.bundle, {}, {}, Depth::First);
  REQUIRE_FALSE(ev.cls.hermitian);
  const auto rep = connection_report(ev);
  for (const auto& row : rep.rows) CHECK(row.status == "skipped");
  for (const auto& r : rep.checks) CHECK(r.status == Status::Skipped);
}
