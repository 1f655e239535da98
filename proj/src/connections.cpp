#include "metallic/connections.hpp"

#include <algorithm>
#include <cmath>

#include "metallic/errors.hpp"

namespace mk {

namespace {

Tensor ghat_dj(const PointFrame& fr, double coef) {
  const int n = fr.dj.dim();
  Tensor d(n, {Slot::Contra, Slot::Co, Slot::Co});
  for (int h = 0; h < n; ++h)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double v = 0.0;
        for (int t = 0; t < n; ++t) v += fr.jhat(h, t) * fr.dj(i, t, j);
        d(h, i, j) = coef * v;
      }
  return d;
}

struct Stat {
  double res = 0.0;
  double scale = 0.0;
};

IdentityResult make_result(std::string id, std::string tier, double tol, const std::vector<Stat>& pts,
                           bool asserted, std::string note = {}) {
  IdentityResult r;
  r.id = std::move(id);
  r.tier = std::move(tier);
  r.tolerance = tol;
  r.note = std::move(note);
  for (const auto& s : pts) {
    r.per_point.push_back(s.res);
    r.max_residual = std::max(r.max_residual, s.res);
    r.scale = std::max(r.scale, s.scale);
  }
  r.relative = r.max_residual / std::max(1.0, r.scale);
  r.status = asserted ? (r.relative < tol ? Status::Pass : Status::Fail) : Status::Reported;
  return r;
}

IdentityResult skip(std::string id, std::string tier, double tol, std::string note) {
  IdentityResult r;
  r.id = std::move(id);
  r.tier = std::move(tier);
  r.tolerance = tol;
  r.status = Status::Skipped;
  r.note = std::move(note);
  return r;
}

constexpr double kRatioTol = 1e-10;

/// Per-point diagnostics of one connection.
struct ConnStats {
  Stat nabla_omega, nabla_g, metric_theorem, sym_first, sym_second, expansion, torsion_formula;
  double torsion = 0.0, deformation = 0.0;
};

ConnStats measure(const PointFrame& fr, const AffineConnection& c, const MetallicParams& prm) {
  const int n = fr.dj.dim();
  ConnStats s;
  const Tensor nw = nabla_tilde_omega(fr, c);
  const Tensor ng = nabla_tilde_metric(fr, c);
  const Tensor sj = s_j(fr, c);
  s.torsion = c.torsion.max_abs();
  s.deformation = c.deformation.max_abs();
  const double k = prm.p / (3.0 * prm.q);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d) {
        const double w = fr.domega(a, b, d);
        s.nabla_omega.res = std::max(s.nabla_omega.res, std::abs(nw(a, b, d)));
        s.nabla_omega.scale = std::max({s.nabla_omega.scale, std::abs(w), std::abs(sj(a, b, d))});
        s.nabla_g.res = std::max(s.nabla_g.res, std::abs(ng(a, b, d)));
        const double expect = k * fr.f(a, d, b);
        s.metric_theorem.res = std::max(s.metric_theorem.res, std::abs(ng(a, b, d) - expect));
        s.metric_theorem.scale = std::max({s.metric_theorem.scale, std::abs(ng(a, b, d)), std::abs(expect)});
        s.sym_first.res = std::max(s.sym_first.res, std::abs(sj(a, b, d) + sj(a, d, b)));
        s.sym_first.scale = std::max(s.sym_first.scale, std::abs(sj(a, b, d)));
        s.sym_second.res = std::max(s.sym_second.res, std::abs(sj(a, b, d) + sj(d, b, a)));
        s.sym_second.scale = s.sym_first.scale;
        const double ex = w + sj(a, b, d) - sj(a, d, b);
        s.expansion.res = std::max(s.expansion.res, std::abs(nw(a, b, d) - ex));
        s.expansion.scale = std::max({s.expansion.scale, std::abs(w), std::abs(sj(a, b, d))});
      }
  return s;
}

}  // namespace

AffineConnection make_connection(std::string kind, const Tensor& gamma, Tensor deformation) {
  AffineConnection c;
  c.kind = std::move(kind);
  c.coefficients = gamma;
  c.coefficients += deformation;
  const int n = gamma.dim();
  c.torsion = Tensor(n, {Slot::Contra, Slot::Co, Slot::Co});
  for (int h = 0; h < n; ++h)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) c.torsion(h, i, j) = c.coefficients(h, i, j) - c.coefficients(h, j, i);
  c.deformation = std::move(deformation);
  return c;
}

AffineConnection first_type(const PointFrame& fr, const MetallicParams& params) {
  validate(params);
  return make_connection("first_type", fr.gamma, ghat_dj(fr, 1.0 / (3.0 * params.q)));
}

std::optional<AffineConnection> second_type(const PointFrame& fr, const MetallicParams& params,
                                            const ClassificationReport& cls) {
  validate(params);
  const int n = fr.dj.dim();
  if (cls.almost_kahler)
    return make_connection("second_type", fr.gamma, Tensor(n, {Slot::Contra, Slot::Co, Slot::Co}));
  if (cls.nearly) return make_connection("second_type", fr.gamma, ghat_dj(fr, -1.0 / params.q));
  return std::nullopt;
}

AffineConnection second_type_solved(const PointFrame& fr) {
  const int n = fr.dj.dim();
  const Mat gm = fr.g * fr.jm;  // (h, c) -> g(∂h, J_M ∂c)
  const Eigen::FullPivLU<Mat> lu(gm.transpose());
  if (!lu.isInvertible()) throw NumericalError("g J_M is singular; cannot solve for the deformation");
  Tensor d(n, {Slot::Contra, Slot::Co, Slot::Co});
  Eigen::VectorXd rhs(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) rhs(c) = 0.5 * (-fr.f(a, b, c) + fr.f(b, c, a) - fr.f(c, a, b));
      const Eigen::VectorXd v = lu.solve(rhs);
      for (int h = 0; h < n; ++h) d(h, a, b) = v(h);
    }
  return make_connection("second_type_solved", fr.gamma, std::move(d));
}

Tensor nabla_tilde_omega(const PointFrame& fr, const AffineConnection& c) {
  const int n = fr.dj.dim();
  Tensor out = fr.domega;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d) {
        double v = 0.0;
        for (int h = 0; h < n; ++h)
          v += c.deformation(h, a, b) * fr.omega(h, d) + c.deformation(h, a, d) * fr.omega(b, h);
        out(a, b, d) -= v;
      }
  return out;
}

Tensor nabla_tilde_metric(const PointFrame& fr, const AffineConnection& c) {
  // Levi-Civita part is metric; only the deformation contributes.
  const int n = fr.dj.dim();
  Tensor out(n, {Slot::Co, Slot::Co, Slot::Co});
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d) {
        double v = 0.0;
        for (int h = 0; h < n; ++h) v += c.deformation(h, a, b) * fr.g(h, d) + c.deformation(h, a, d) * fr.g(b, h);
        out(a, b, d) = -v;
      }
  return out;
}

Tensor s_j(const PointFrame& fr, const AffineConnection& c) {
  const int n = fr.dj.dim();
  const Mat gm = fr.g * fr.jm;
  Tensor out(n, {Slot::Co, Slot::Co, Slot::Co});
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d) {
        double v = 0.0;
        for (int h = 0; h < n; ++h) v += c.deformation(h, a, b) * gm(h, d);
        out(a, b, d) = v;
      }
  return out;
}

ConnectionReport connection_report(const Evaluation& ev) {
  ConnectionReport rep;
  const auto& tol = ev.tol;
  const auto& cls = ev.cls;
  const MetallicParams& prm = ev.params;

  auto skipped_row = [](std::string name, std::string note) {
    ConnectionRow r;
    r.name = std::move(name);
    r.status = "skipped";
    r.note = std::move(note);
    return r;
  };

  if (!cls.hermitian) {
    const std::string why = "requires an almost metallic Hermitian structure";
    rep.rows = {skipped_row("first_type", why), skipped_row("second_type", why),
                skipped_row("second_type_solved", why)};
    for (const char* id : {"first_type_nabla_omega", "first_type_metric", "first_type_symmetry",
                           "first_type_expansion", "first_type_torsion", "second_type_nabla_omega",
                           "second_type_symmetry", "second_type_expansion", "second_type_solved_nabla_omega",
                           "second_type_solved_symmetry", "deformation_ratio", "levi_civita_coincidence"})
      rep.checks.push_back(skip(id, "d1", tol.d1, why));
    return rep;
  }

  std::vector<ConnStats> first, second, solved;
  std::vector<Stat> torsion_formula, ratio, lc;
  bool second_built = true;
  for (const auto& fr : ev.frames) {
    const auto c1 = first_type(fr, prm);
    first.push_back(measure(fr, c1, prm));
    // torsion against (1/3q)[Ĵ(∇_i J)_j - Ĵ(∇_j J)_i]
    Stat tf;
    const int n = fr.dj.dim();
    for (int h = 0; h < n; ++h)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double v = 0.0;
          for (int t = 0; t < n; ++t) v += fr.jhat(h, t) * (fr.dj(i, t, j) - fr.dj(j, t, i));
          v /= 3.0 * prm.q;
          tf.res = std::max(tf.res, std::abs(c1.torsion(h, i, j) - v));
          tf.scale = std::max(tf.scale, std::abs(v));
        }
    torsion_formula.push_back(tf);

    const auto c2 = second_type(fr, prm, cls);
    if (c2) {
      second.push_back(measure(fr, *c2, prm));
      Stat r;
      for (std::size_t k = 0; k < c1.deformation.size(); ++k) {
        const double a = c1.deformation.data()[k], b = c2->deformation.data()[k];
        r.res = std::max(r.res, std::abs(b + 3.0 * a));
        r.scale = std::max(r.scale, std::abs(a));
      }
      ratio.push_back(r);
      Stat l;
      l.res = std::max(c1.deformation.max_abs(), c2->deformation.max_abs());
      lc.push_back(l);
    } else {
      second_built = false;
    }
    const auto c3 = second_type_solved(fr);
    solved.push_back(measure(fr, c3, prm));
  }

  auto collect = [](const std::vector<ConnStats>& v, Stat ConnStats::*m) {
    std::vector<Stat> out;
    for (const auto& s : v) out.push_back(s.*m);
    return out;
  };
  auto row = [&](std::string name, const std::vector<ConnStats>& v, bool first_sym, std::string note) {
    ConnectionRow r;
    r.name = std::move(name);
    r.status = "constructed";
    r.note = std::move(note);
    for (const auto& s : v) {
      r.nabla_omega = std::max(r.nabla_omega, s.nabla_omega.res);
      r.nabla_g = std::max(r.nabla_g, s.nabla_g.res);
      r.torsion_norm = std::max(r.torsion_norm, s.torsion);
      r.deformation_norm = std::max(r.deformation_norm, s.deformation);
      r.symmetry = std::max(r.symmetry, first_sym ? s.sym_first.res : s.sym_second.res);
      r.expansion = std::max(r.expansion, s.expansion.res);
    }
    return r;
  };

  rep.rows.push_back(row("first_type", first, true, "S = (1/3q) conj(J_M) ∇J_M"));
  rep.checks.push_back(make_result("first_type_nabla_omega", "d1", tol.d1, collect(first, &ConnStats::nabla_omega), true));
  rep.checks.push_back(make_result("first_type_metric", "d1", tol.d1, collect(first, &ConnStats::metric_theorem), true,
                                   "∇̃g vs (p/3q) g(Y, (∇_X J_M) Z)"));
  rep.checks.push_back(make_result("first_type_symmetry", "alg", tol.alg, collect(first, &ConnStats::sym_first), true));
  rep.checks.push_back(make_result("first_type_expansion", "alg", tol.alg, collect(first, &ConnStats::expansion), true));
  rep.checks.push_back(make_result("first_type_torsion", "alg", tol.alg, torsion_formula, true));

  const bool nearly_branch = !cls.almost_kahler && cls.nearly;
  if (second_built && !second.empty()) {
    rep.rows.push_back(row("second_type", second, false,
                           cls.almost_kahler ? "almost Kähler branch: Levi-Civita"
                                             : "nearly branch: S = -(1/q) conj(J_M) ∇J_M"));
    rep.checks.push_back(make_result(
        "second_type_nabla_omega", "d1", tol.d1, collect(second, &ConnStats::nabla_omega), !nearly_branch,
        nearly_branch ? "closed-form nearly deformation does not annihilate ω; reported" : "Levi-Civita branch"));
    rep.checks.push_back(make_result("second_type_symmetry", "d1", tol.d1, collect(second, &ConnStats::sym_second), true));
    rep.checks.push_back(make_result("second_type_expansion", "alg", tol.alg, collect(second, &ConnStats::expansion), true));
    if (nearly_branch) {
      IdentityResult r = make_result("deformation_ratio", "alg", kRatioTol, ratio, true,
                                     "second-type deformation = -3 x first-type deformation");
      rep.checks.push_back(r);
      double worst = 0.0;
      for (const auto& s : ratio) worst = std::max(worst, s.res);
      double sc = 0.0;
      for (const auto& s : ratio) sc = std::max(sc, s.scale);
      rep.deformation_ratio_residual = worst / std::max(1.0, sc);
    } else {
      rep.checks.push_back(skip("deformation_ratio", "alg", kRatioTol, "only defined in the nearly branch"));
    }
  } else {
    rep.rows.push_back(skipped_row("second_type", "no closed form outside the almost Kähler and nearly classes"));
    for (const char* id : {"second_type_nabla_omega", "second_type_symmetry", "second_type_expansion",
                           "deformation_ratio"})
      rep.checks.push_back(skip(id, "d1", tol.d1, "second-type connection not constructed"));
  }

  rep.rows.push_back(row("second_type_solved", solved, false, "solved from ∇̃ω = 0 with the second-type symmetry"));
  rep.checks.push_back(make_result("second_type_solved_nabla_omega", "d1", tol.d1,
                                   collect(solved, &ConnStats::nabla_omega), true));
  rep.checks.push_back(make_result("second_type_solved_symmetry", "alg", tol.alg,
                                   collect(solved, &ConnStats::sym_second), true));

  if (cls.metallic_kahler && second_built)
    rep.checks.push_back(make_result("levi_civita_coincidence", "alg", tol.alg, lc, true,
                                     "both deformations vanish on a metallic Kähler structure"));
  else
    rep.checks.push_back(skip("levi_civita_coincidence", "alg", tol.alg, "requires a metallic Kähler structure"));
  return rep;
}

}  // namespace mk
