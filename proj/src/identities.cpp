#include "metallic/identities.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "metallic/errors.hpp"

namespace mk {

std::string status_name(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Skipped: return "skipped";
    case Status::Reported: return "reported";
  }
  return "?";
}

std::optional<Status> status_from_name(const std::string& name) {
  for (Status s : {Status::Pass, Status::Fail, Status::Skipped, Status::Reported})
    if (status_name(s) == name) return s;
  return std::nullopt;
}

std::optional<Suite> suite_from_name(const std::string& name) {
  if (name == "all") return Suite::All;
  if (name == "metallic") return Suite::Metallic;
  if (name == "nearly") return Suite::Nearly;
  if (name == "connections") return Suite::Connections;
  return std::nullopt;
}

Evaluation evaluate(const StructureBundle& bundle, const SchemeSet& schemes, const Thresholds& tol, Depth depth,
                    par::Exec exec) {
  Evaluation ev;
  ev.bundle = &bundle;
  ev.params = bundle.params();
  ev.tol = tol;
  ev.schemes = schemes;
  ev.points = sample_points(bundle.chart());
  const Depth base = depth == Depth::Third ? Depth::Second : depth;
  ev.frames = evaluate_frames(bundle, ev.points, schemes, base, exec);
  ev.cls = classify(ev.frames, ev.params, tol);
  if (depth == Depth::Third && ev.cls.metallic_kahler) extend_third(ev.frames, bundle, schemes, exec);
  return ev;
}

namespace {

constexpr double kContractionTol = 1e-10;

/// Residual and term scale at one point.
struct Acc {
  double res = 0.0;
  double scale = 0.0;
  void cmp(double lhs, double rhs) {
    res = std::max(res, std::abs(lhs - rhs));
    scale = std::max({scale, std::abs(lhs), std::abs(rhs)});
  }
  void term(double t) { scale = std::max(scale, std::abs(t)); }
};

double tier_tol(const std::string& tier, const Thresholds& t) {
  if (tier == "alg") return t.alg;
  if (tier == "d1") return t.d1;
  if (tier == "d2") return t.d2;
  return t.d3;
}

IdentityResult finish(std::string id, std::string tier, double tol, const std::vector<Acc>& pts, bool asserted,
                      std::string note = {}) {
  IdentityResult r;
  r.id = std::move(id);
  r.tier = std::move(tier);
  r.tolerance = tol;
  r.note = std::move(note);
  for (const auto& a : pts) {
    r.per_point.push_back(a.res);
    r.max_residual = std::max(r.max_residual, a.res);
    r.scale = std::max(r.scale, a.scale);
  }
  r.relative = r.max_residual / std::max(1.0, r.scale);
  r.status = asserted ? (r.relative < tol ? Status::Pass : Status::Fail) : Status::Reported;
  return r;
}

IdentityResult finish(std::string id, std::string tier, const Evaluation& ev, const std::vector<Acc>& pts,
                      bool asserted, std::string note = {}) {
  const double tol = tier_tol(tier, ev.tol);
  return finish(std::move(id), std::move(tier), tol, pts, asserted, std::move(note));
}

IdentityResult skipped(std::string id, std::string tier, const Evaluation& ev, std::string note) {
  IdentityResult r;
  r.id = std::move(id);
  r.tolerance = tier_tol(tier, ev.tol);
  r.tier = std::move(tier);
  r.status = Status::Skipped;
  r.note = std::move(note);
  return r;
}

std::vector<IdentityResult> skip_all(std::initializer_list<const char*> ids, const std::string& tier,
                                     const Evaluation& ev, const std::string& note) {
  std::vector<IdentityResult> out;
  for (const char* id : ids) out.push_back(skipped(id, tier, ev, note));
  return out;
}

bool has_curvature(const Evaluation& ev) {
  return !ev.frames.empty() && std::all_of(ev.frames.begin(), ev.frames.end(),
                                           [](const PointFrame& f) { return f.has_second; });
}

template <class F>
std::vector<Acc> per_frame(const Evaluation& ev, F&& fn) {
  std::vector<Acc> out;
  out.reserve(ev.frames.size());
  for (const auto& fr : ev.frames) {
    Acc a;
    fn(fr, a);
    out.push_back(a);
  }
  return out;
}

const char* kNotHermitian = "requires an almost metallic Hermitian structure";
const char* kNotKahler = "requires a metallic Kähler structure";
const char* kNotNearly = "requires a nearly metallic Kähler structure";
const char* kNoCurvature = "curvature level was not evaluated";

}  // namespace

StarCurvaturePack star_curvature(const PointFrame& fr) {
  if (!fr.has_second) throw Error("star curvature needs curvature-level frames");
  const int n = static_cast<int>(fr.g.rows());
  const Tensor& r = fr.curv.riemann;
  StarCurvaturePack s;
  s.h = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      double v = 0.0;
      for (int h = 0; h < n; ++h)
        for (int t = 0; t < n; ++t) v += r(h, j, i, t) * fr.jm(h, t);
      s.h(j, i) = v;
    }
  // S*_{ji} = -H_{jt} (J_M)_i^t
  s.s_star = -s.h * fr.jm;
  s.scalar_star = (fr.ginv.transpose().cwiseProduct(s.s_star)).sum();
  double nsq = 0.0;
  for (int k = 0; k < n; ++k)
    for (int m = 0; m < n; ++m) {
      if (fr.ginv(k, m) == 0.0) continue;
      for (int j = 0; j < n; ++j)
        for (int t = 0; t < n; ++t) {
          if (fr.g(j, t) == 0.0) continue;
          for (int i = 0; i < n; ++i)
            for (int sidx = 0; sidx < n; ++sidx)
              nsq += fr.ginv(k, m) * fr.g(j, t) * fr.ginv(i, sidx) * fr.dj(m, t, i) * fr.dj(k, j, sidx);
        }
    }
  s.nabla_j_sq = nsq;
  const Mat wup = fr.ginv * fr.omega * fr.ginv.transpose();
  const Tensor& rl = fr.curv.lowered;
  s.h_alt = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      double v = 0.0;
      for (int h = 0; h < n; ++h)
        for (int l = 0; l < n; ++l) v += rl(h, j, i, l) * wup(h, l);
      s.h_alt(j, i) = v;
    }
  return s;
}

StarCurvaturePack star_curvature(const StructureBundle& bundle, std::span<const double> x,
                                 const SchemeSet& schemes) {
  return star_curvature(evaluate_frame(bundle, x, schemes, Depth::Second));
}

double ricci_omega_contraction(const PointFrame& fr) {
  const Mat wup = fr.ginv * fr.omega * fr.ginv.transpose();
  return fr.curv.ricci.matrix().cwiseProduct(wup).sum();
}

std::vector<IdentityResult> check_algebraic(const Evaluation& ev) {
  const double c = 1.5 * ev.params.q;
  const double p = ev.params.p;
  auto prod = per_frame(ev, [&](const PointFrame& fr, Acc& a) {
    const int n = static_cast<int>(fr.jm.rows());
    const Mat ab = fr.jm * fr.jhat, ba = fr.jhat * fr.jm;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        a.cmp(ab(i, j), i == j ? c : 0.0);
        a.cmp(ba(i, j), i == j ? c : 0.0);
      }
  });
  auto poly = per_frame(ev, [&](const PointFrame& fr, Acc& a) {
    const int n = static_cast<int>(fr.jm.rows());
    const Mat sq = fr.jhat * fr.jhat;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        a.cmp(sq(i, j) - p * fr.jhat(i, j), i == j ? -c : 0.0);
        a.term(sq(i, j));
      }
  });
  return {finish("conjugate_product", "alg", ev, prod, true),
          finish("conjugate_polynomial", "alg", ev, poly, true)};
}

std::vector<IdentityResult> check_hyperbolicity_equivalence(const Evaluation& ev) {
  const TensorField jf = ev.bundle->complex_structure();
  std::vector<Acc> pts;
  bool together = true;
  for (const auto& fr : ev.frames) {
    const Mat j = jf(fr.x).matrix();
    const double r[4] = {hyperbolic_residual(fr.g, j, ev.params).tcg0,
                         hyperbolic_residual(fr.g, conjugate_complex(j), ev.params).tcg0,
                         hyperbolic_residual(fr.g, fr.jm, ev.params).tcg0,
                         hyperbolic_residual(fr.g, fr.jhat, ev.params).tcg0};
    Acc a;
    int below = 0;
    for (double v : r) {
      a.res = std::max(a.res, v);
      below += v < ev.tol.alg ? 1 : 0;
    }
    together = together && (below == 0 || below == 4);
    pts.push_back(a);
  }
  IdentityResult res = finish("hyperbolicity_equivalence", "alg", ev, pts, false,
                              "max hyperbolicity residual of J, conj J, J_M, conj J_M");
  if (ev.params.p == 0.0) {
    res.status = together ? Status::Pass : Status::Fail;
    res.note += together ? "; all four agree" : "; the four residuals disagree";
  } else {
    res.note += together ? "; all four agree (p != 0, not asserted)" : "; residuals disagree (p != 0, not asserted)";
  }
  return {res};
}

std::vector<IdentityResult> check_nabla_j_algebra(const Evaluation& ev) {
  auto i_pts = per_frame(ev, [&](const PointFrame& fr, Acc& a) {
    const int n = fr.dj.dim();
    for (int x = 0; x < n; ++x)
      for (int h = 0; h < n; ++h)
        for (int y = 0; y < n; ++y) {
          double lhs = 0.0, rhs = 0.0;
          for (int t = 0; t < n; ++t) {
            lhs += fr.dj(x, h, t) * fr.jm(t, y);
            rhs += fr.jhat(h, t) * fr.dj(x, t, y);
          }
          a.cmp(lhs, rhs);
        }
  });
  auto ii_pts = per_frame(ev, [&](const PointFrame& fr, Acc& a) {
    const int n = fr.f.dim();
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z) a.cmp(fr.f(x, y, z), -fr.f(x, z, y));
  });
  return {finish("nabla_j_conjugation", "d1", ev, i_pts, true), finish("f_skew_last_pair", "d1", ev, ii_pts, true)};
}

std::vector<IdentityResult> check_exterior(const Evaluation& ev) {
  auto fw = per_frame(ev, [&](const PointFrame& fr, Acc& a) {
    const int n = fr.f.dim();
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z) a.cmp(fr.f(x, y, z), fr.domega(x, y, z));
  });
  std::vector<IdentityResult> out{finish("f_equals_nabla_omega", "d1", ev, fw, true)};
  if (!ev.cls.hermitian) {
    out.push_back(skipped("exterior_antisymmetry", "alg", ev, kNotHermitian));
    out.push_back(skipped("exterior_cartan", "d1", ev, kNotHermitian));
    return out;
  }
  auto anti = per_frame(ev, [&](const PointFrame& fr, Acc& a) {
    const int n = fr.dw.dim();
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z) {
          a.cmp(fr.dw(x, y, z), -fr.dw(y, x, z));
          a.cmp(fr.dw(x, y, z), -fr.dw(x, z, y));
        }
  });
  auto cartan = per_frame(ev, [&](const PointFrame& fr, Acc& a) {
    const int n = fr.dw.dim();
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z) {
          a.cmp(fr.dw(x, y, z), fr.f(x, y, z) + fr.f(y, z, x) + fr.f(z, x, y));
          a.term(fr.f(x, y, z));
        }
  });
  out.push_back(finish("exterior_antisymmetry", "alg", ev, anti, true));
  out.push_back(finish("exterior_cartan", "d1", ev, cartan, true,
                       "partial-derivative dω vs cyclic sum of (∇ω)"));
  return out;
}

std::vector<IdentityResult> check_f_properties(const Evaluation& ev, bool nearly_mode) {
  const double c = 1.5 * ev.params.q;
  const double p = ev.params.p;
  if (!nearly_mode) {
    if (!ev.cls.hermitian) return skip_all({"f_hermitian_skew", "f_hermitian_jj"}, "d1", ev, kNotHermitian);
    auto skew = per_frame(ev, [&](const PointFrame& fr, Acc& a) {
      const int n = fr.f.dim();
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
          for (int z = 0; z < n; ++z) a.cmp(fr.f(x, y, z), -fr.f(x, z, y));
    });
    auto jj = per_frame(ev, [&](const PointFrame& fr, Acc& a) {
      const int n = fr.f.dim();
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
          for (int z = 0; z < n; ++z) {
            double lhs = 0.0;
            for (int s = 0; s < n; ++s)
              for (int u = 0; u < n; ++u) lhs += fr.jm(s, y) * fr.jm(u, z) * fr.f(x, s, u);
            a.cmp(lhs, c * fr.f(x, z, y));
          }
    });
    return {finish("f_hermitian_skew", "d1", ev, skew, true), finish("f_hermitian_jj", "d1", ev, jj, true)};
  }
  if (!ev.cls.nearly) return skip_all({"f_nearly_i", "f_nearly_ii"}, "d1", ev, kNotNearly);
  auto fi = per_frame(ev, [&](const PointFrame& fr, Acc& a) {
    const int n = fr.f.dim();
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z) {
          double lhs = 0.0;
          for (int s = 0; s < n; ++s)
            for (int u = 0; u < n; ++u) lhs += fr.jm(s, x) * fr.jm(u, z) * fr.f(s, y, u);
          a.cmp(lhs, c * fr.f(y, x, z));
        }
  });
  auto fii = per_frame(ev, [&](const PointFrame& fr, Acc& a) {
    const int n = fr.f.dim();
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z) {
          double lhs = 0.0, conj = 0.0;
          for (int s = 0; s < n; ++s) {
            conj += fr.jhat(s, z) * fr.f(y, x, s);
            for (int u = 0; u < n; ++u) lhs += fr.jm(s, x) * fr.jm(u, y) * fr.f(s, u, z);
          }
          a.cmp(lhs, -p * conj + c * fr.f(y, x, z));
          a.term(p * conj);
        }
  });
  return {finish("f_nearly_i", "d1", ev, fi, true), finish("f_nearly_ii", "d1", ev, fii, true)};
}

std::vector<IdentityResult> check_f_nijenhuis_exterior(const Evaluation& ev) {
  if (!ev.cls.hermitian) return {skipped("f_nijenhuis_exterior", "d1", ev, kNotHermitian)};
  const double q = ev.params.q;
  auto pts = per_frame(ev, [&](const PointFrame& fr, Acc& a) {
    const int n = fr.f.dim();
    const Mat gj = fr.jhat.transpose() * fr.g;  // (a, h) -> g(Ĵ e_a, e_h)
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z) {
          double gn = 0.0;
          for (int h = 0; h < n; ++h) gn += gj(x, h) * fr.nij(y, z, h);
          double djj = 0.0;
          for (int s = 0; s < n; ++s)
            for (int u = 0; u < n; ++u) djj += fr.jm(s, y) * fr.jm(u, z) * fr.dw(x, s, u);
          // 3dω in the Cartan normalisation equals minus the cyclic partial sum.
          const double lhs = 3.0 * q * fr.f(x, y, z) + gn;
          const double rhs = -djj + 1.5 * q * fr.dw(x, y, z);
          a.cmp(lhs, rhs);
          a.term(3.0 * q * fr.f(x, y, z));
          a.term(gn);
          a.term(djj);
        }
  });
  return {finish("f_nijenhuis_exterior", "d1", ev, pts, true)};
}

std::vector<IdentityResult> check_parallel_biconditional(const Evaluation& ev) {
  // Without a skew ω, dω picks up the symmetric part and the equivalence is void.
  if (!ev.cls.hermitian) return {skipped("parallel_biconditional", "d1", ev, kNotHermitian)};
  IdentityResult r;
  r.id = "parallel_biconditional";
  r.tier = "d1";
  r.tolerance = ev.tol.d1;
  const double dw = ev.cls.residual("d_omega"), nij = ev.cls.residual("nijenhuis"),
               nab = ev.cls.residual("nabla_j");
  r.max_residual = std::max(dw, nij);
  r.scale = nab;
  r.relative = r.max_residual / std::max(1.0, r.scale);
  r.status = ev.cls.parallel_consistent ? Status::Pass : Status::Fail;
  r.note = std::string("[dω, N below tolerance] ") + ((dw < ev.tol.d1 && nij < ev.tol.d1) ? "yes" : "no") +
           ", [∇J_M below tolerance] " + (nab < ev.tol.d1 ? "yes" : "no");
  return {r};
}

std::vector<IdentityResult> check_ricci_identity(const Evaluation& ev) {
  if (!has_curvature(ev)) return {skipped("ricci_identity", "d2", ev, kNoCurvature)};
  auto pts = per_frame(ev, [&](const PointFrame& fr, Acc& a) {
    const int n = fr.dj.dim();
    const Tensor& r = fr.curv.riemann;
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int h = 0; h < n; ++h)
          for (int i = 0; i < n; ++i) {
            const double lhs = fr.ddj(k, j, h, i) - fr.ddj(j, k, h, i);
            double rhs = 0.0;
            for (int t = 0; t < n; ++t) rhs += r(k, j, t, h) * fr.jm(t, i) - r(k, j, i, t) * fr.jm(h, t);
            a.cmp(lhs, rhs);
            a.term(fr.ddj(k, j, h, i));
          }
  });
  return {finish("ricci_identity", "d2", ev, pts, true, "commutator of ∇∇J_M vs curvature action")};
}

std::vector<IdentityResult> check_curvature_symmetries(const Evaluation& ev) {
  if (!has_curvature(ev)) return {skipped("curvature_symmetries", "d2", ev, kNoCurvature)};
  auto pts = per_frame(ev, [&](const PointFrame& fr, Acc& a) {
    const auto s = curvature_symmetry(fr.curv);
    a.res = std::max({s.antisym_front, s.antisym_back, s.pair, s.bianchi, s.ricci});
    a.term(fr.curv.lowered.max_abs());
  });
  return {finish("curvature_symmetries", "d2", ev, pts, true, "antisymmetry, pair symmetry, first Bianchi, Ricci symmetry")};
}

std::vector<IdentityResult> check_curvature_metallic(const Evaluation& ev) {
  if (!ev.cls.metallic_kahler)
    return skip_all({"curvature_commutes_j", "curvature_jj"}, "d2", ev, kNotKahler);
  if (!has_curvature(ev)) return skip_all({"curvature_commutes_j", "curvature_jj"}, "d2", ev, kNoCurvature);
  const double p = ev.params.p, c = 1.5 * ev.params.q;
  auto comm = per_frame(ev, [&](const PointFrame& fr, Acc& a) {
    const int n = fr.dj.dim();
    const Tensor& r = fr.curv.riemann;
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
          for (int h = 0; h < n; ++h) {
            double lhs = 0.0, rhs = 0.0;
            for (int t = 0; t < n; ++t) {
              lhs += r(k, j, t, h) * fr.jm(t, i);
              rhs += fr.jm(h, t) * r(k, j, i, t);
            }
            a.cmp(lhs, rhs);
          }
  });
  auto jj = per_frame(ev, [&](const PointFrame& fr, Acc& a) {
    const int n = fr.dj.dim();
    const Tensor& r = fr.curv.riemann;
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
          for (int h = 0; h < n; ++h) {
            double both = 0.0, one = 0.0;
            for (int s = 0; s < n; ++s) {
              one += fr.jm(s, k) * r(s, j, i, h);
              for (int u = 0; u < n; ++u) both += fr.jm(s, k) * fr.jm(u, j) * r(s, u, i, h);
            }
            a.cmp(both, -p * one + c * r(k, j, i, h));
            a.term(p * one);
          }
  });
  return {finish("curvature_commutes_j", "d2", ev, comm, true), finish("curvature_jj", "d2", ev, jj, true)};
}

std::vector<IdentityResult> check_ricci_metallic(const Evaluation& ev) {
  const auto ids = {"ricci_metallic_i", "ricci_metallic_ii_stated", "ricci_metallic_ii_variant"};
  if (!ev.cls.metallic_kahler) return skip_all(ids, "d2", ev, kNotKahler);
  if (!has_curvature(ev)) return skip_all(ids, "d2", ev, kNoCurvature);
  const double p = ev.params.p, q = ev.params.q;
  const double c1 = p * p - 9.0 * q * q * p * p / 4.0 + 9.0 * q * q / 4.0;
  const double c2 = 1.5 * p * q - 9.0 * q * q * p / 4.0;
  std::vector<Acc> i_pts, st_pts, pr_pts;
  for (const auto& fr : ev.frames) {
    const int n = fr.dj.dim();
    const Mat s = fr.curv.ricci.matrix();
    const Mat sjj = fr.jm.transpose() * s * fr.jm;  // S(J e_a, J e_b)
    const Mat sj = s * fr.jm;                       // S(e_a, J e_b)
    const Tensor& r = fr.curv.riemann;
    Acc ai, ast, apr;
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        ai.cmp(sjj(x, y), c1 * s(x, y) + c2 * sj(x, y));
        // trace of Z -> Ĵ_M R(X, J_M Y) Z
        double tr = 0.0;
        for (int w = 0; w < n; ++w) {
          if (fr.jm(w, y) == 0.0) continue;
          for (int z = 0; z < n; ++z)
            for (int h = 0; h < n; ++h) tr += fr.jhat(z, h) * fr.jm(w, y) * r(x, w, z, h);
        }
        const double rhs = -(2.0 / (3.0 * q)) * tr;
        ast.cmp((1.0 + 1.5 * q) * s(x, y) - p * sj(x, y), rhs);
        apr.cmp(s(x, y) + p * sj(x, y) - 1.5 * q * sj(x, y), rhs);
      }
    i_pts.push_back(ai);
    st_pts.push_back(ast);
    pr_pts.push_back(apr);
  }
  const std::string note = "stated coefficients; reported, not asserted";
  return {finish("ricci_metallic_i", "d2", ev, i_pts, false, note),
          finish("ricci_metallic_ii_stated", "d2", ev, st_pts, false, note),
          finish("ricci_metallic_ii_variant", "d2", ev, pr_pts, false, "derived-coefficient variant; reported")};
}

std::vector<IdentityResult> check_nabla_s(const Evaluation& ev) {
  const auto ids = {"nabla_ricci_stated", "nabla_ricci_variant"};
  if (!ev.cls.metallic_kahler) return skip_all(ids, "d3", ev, kNotKahler);
  if (ev.frames.empty() || !std::all_of(ev.frames.begin(), ev.frames.end(),
                                        [](const PointFrame& f) { return f.has_third; }))
    return skip_all(ids, "d3", ev, "third-level differencing unavailable (depth or chart margin)");
  const double p = ev.params.p, q = ev.params.q;
  const double a1 = 1.0 + 1.5 * q, a2 = 2.0 / (3.0 * q) + 1.0;
  std::vector<Acc> st_pts, var_pts;
  double grad_max = 0.0;
  for (const auto& fr : ev.frames) {
    const int n = fr.dj.dim();
    const Tensor& ds = fr.dricci;  // (k, j, i) = ∇_k S_{ji}
    grad_max = std::max(grad_max, ds.max_abs());
    Acc ast, avar;
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z) {
          double zxjy = 0.0, xzjy = 0.0, jy_hat = 0.0, jy_plain = 0.0;
          for (int u = 0; u < n; ++u) {
            zxjy += fr.jm(u, y) * ds(z, x, u);
            xzjy += fr.jm(u, y) * ds(x, z, u);
          }
          for (int w = 0; w < n; ++w) {
            if (fr.jm(w, y) == 0.0) continue;
            jy_plain += fr.jm(w, y) * ds(w, x, z);
            for (int u = 0; u < n; ++u) jy_hat += fr.jm(w, y) * fr.jhat(u, z) * ds(w, x, u);
          }
          const double lhs = a1 * ds(z, x, y) - p * zxjy;
          const double base = a1 * ds(x, z, y) - p * xzjy;
          ast.cmp(lhs, base + a2 * jy_hat - p * jy_hat);
          avar.cmp(lhs, base + a2 * jy_hat - p * jy_plain);
        }
    st_pts.push_back(ast);
    var_pts.push_back(avar);
  }
  const bool parallel_ricci = grad_max < ev.tol.d3;
  const std::string note = parallel_ricci ? "parallel Ricci tensor" : "non-parallel Ricci: reported only";
  return {finish("nabla_ricci_stated", "d3", ev, st_pts, parallel_ricci, note),
          finish("nabla_ricci_variant", "d3", ev, var_pts, false, "derived-coefficient variant; reported")};
}

std::vector<IdentityResult> check_star(const Evaluation& ev) {
  const auto ids = {"star_h_antisymmetry", "star_conjugate_relation"};
  if (!ev.cls.nearly) return skip_all(ids, "d2", ev, kNotNearly);
  if (!has_curvature(ev)) return skip_all(ids, "d2", ev, kNoCurvature);
  const double c = 1.5 * ev.params.q;
  std::vector<Acc> anti, rel;
  for (const auto& fr : ev.frames) {
    const auto s = star_curvature(fr);
    const Mat lhs = s.s_star * fr.jhat;  // S*_{jt} Ĵ_i^t at (j, i)
    Acc a, b;
    const int n = static_cast<int>(s.h.rows());
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        a.cmp(s.h(j, i), -s.h(i, j));
        b.cmp(lhs(j, i), -c * s.h(j, i));
      }
    anti.push_back(a);
    rel.push_back(b);
  }
  return {finish("star_h_antisymmetry", "d2", ev, anti, true),
          finish("star_conjugate_relation", "alg", ev, rel, true, "S*Ĵ_M = -(3q/2) H")};
}

std::vector<IdentityResult> check_ricci_chain(const Evaluation& ev) {
  const auto ids = {"ricci_chain", "ricci_chain_vanishing"};
  if (!ev.cls.nearly) return skip_all(ids, "d2", ev, kNotNearly);
  if (!has_curvature(ev)) return skip_all(ids, "d2", ev, kNoCurvature);
  const double q = ev.params.q;
  std::vector<Acc> chain, vanish;
  for (const auto& fr : ev.frames) {
    const int n = fr.dj.dim();
    const auto s = star_curvature(fr);
    const Mat rhs = fr.curv.ricci.matrix() * fr.jm + (2.0 / (3.0 * q)) * s.s_star * fr.jhat;
    Acc a, v;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        double lhs = 0.0;
        for (int m = 0; m < n; ++m)
          for (int t = 0; t < n; ++t) lhs += fr.ginv(m, t) * fr.ddomega(t, j, i, m);
        a.cmp(lhs, rhs(j, i));
        v.cmp(lhs, 0.0);
      }
    chain.push_back(a);
    vanish.push_back(v);
  }
  return {finish("ricci_chain", "d2", ev, chain, true, "contracted second derivative of ω vs Ricci/Ricci* side"),
          finish("ricci_chain_vanishing", "d2", ev, vanish, false, "observed size of the contracted second derivative")};
}

std::vector<IdentityResult> check_ricci_hyperbolic(const Evaluation& ev) {
  if (!ev.cls.nearly) return {skipped("ricci_hyperbolic", "d2", ev, kNotNearly)};
  if (!has_curvature(ev)) return {skipped("ricci_hyperbolic", "d2", ev, kNoCurvature)};
  auto pts = per_frame(ev, [&](const PointFrame& fr, Acc& a) {
    const Mat s = fr.curv.ricci.matrix();
    const Mat l = fr.jm.transpose() * s;  // (j, i) -> S_{ti} J_j^t
    const Mat r = s * fr.jm;              // (j, i) -> S_{jt} J_i^t
    for (int j = 0; j < s.rows(); ++j)
      for (int i = 0; i < s.cols(); ++i) a.cmp(l(j, i), -r(j, i));
  });
  return {finish("ricci_hyperbolic", "d2", ev, pts, true)};
}

std::vector<IdentityResult> check_ricci_star_hyperbolic(const Evaluation& ev) {
  const auto ids = {"ricci_star_hyperbolic", "ricci_star_sum"};
  if (!ev.cls.nearly) return skip_all(ids, "d2", ev, kNotNearly);
  if (!has_curvature(ev)) return skip_all(ids, "d2", ev, kNoCurvature);
  std::vector<Acc> hyp, sum;
  for (const auto& fr : ev.frames) {
    const auto s = star_curvature(fr);
    const Mat a = s.s_star * fr.jhat;               // (j, i) -> S*_{jm} Ĵ_i^m
    const Mat b = fr.jhat.transpose() * s.s_star;   // (j, i) -> S*_{mi} Ĵ_j^m
    Acc h, u;
    for (int j = 0; j < a.rows(); ++j)
      for (int i = 0; i < a.cols(); ++i) {
        h.cmp(a(j, i), -b(j, i));
        u.cmp(a(j, i), -a(i, j));
      }
    hyp.push_back(h);
    sum.push_back(u);
  }
  return {finish("ricci_star_hyperbolic", "d2", ev, hyp, true),
          finish("ricci_star_sum", "d2", ev, sum, true, "S*_{jm}Ĵ_i^m + S*_{im}Ĵ_j^m = 0")};
}

std::vector<IdentityResult> check_scalar_star(const Evaluation& ev) {
  const auto ids = {"scalar_star", "ricci_omega_contraction", "scalar_star_alternate"};
  if (!ev.cls.nearly) return skip_all(ids, "d2", ev, kNotNearly);
  if (!has_curvature(ev)) return skip_all(ids, "d2", ev, kNoCurvature);
  const double p = ev.params.p, q = ev.params.q;
  std::vector<Acc> rel, contr, alt;
  for (const auto& fr : ev.frames) {
    const auto s = star_curvature(fr);
    const double sw = ricci_omega_contraction(fr);
    const double rhs = 1.5 * q * fr.curv.scalar + p * sw - s.nabla_j_sq;
    Acc a, c, d;
    a.cmp(s.scalar_star, rhs);
    a.term(1.5 * q * fr.curv.scalar);
    a.term(s.nabla_j_sq);
    c.cmp(sw, 0.0);
    const Mat s_alt = -s.h_alt * fr.jm;
    const double sc_alt = fr.ginv.transpose().cwiseProduct(s_alt).sum();
    d.cmp(sc_alt, rhs);
    d.term(1.5 * q * fr.curv.scalar);
    d.term(s.nabla_j_sq);
    rel.push_back(a);
    contr.push_back(c);
    alt.push_back(d);
  }
  return {finish("scalar_star", "d2", ev, rel, true, "scalar* from H vs Ricci, ω and ∇J_M contraction"),
          finish("ricci_omega_contraction", "alg", kContractionTol, contr, true),
          finish("scalar_star_alternate", "d2", ev, alt, false,
                 "H with ω^{hl} = g^{ha}g^{lb}ω_{ab}; opposite orientation, reported")};
}

std::vector<IdentityResult> check_nearly_nijenhuis(const Evaluation& ev) {
  const auto ids = {"nearly_nijenhuis", "nearly_trace"};
  if (!ev.cls.nearly) return skip_all(ids, "d1", ev, kNotNearly);
  const double p = ev.params.p;
  std::vector<Acc> nij, tr;
  for (const auto& fr : ev.frames) {
    const int n = fr.dj.dim();
    Acc a, b;
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int h = 0; h < n; ++h) {
          double rhs = 0.0;
          for (int t = 0; t < n; ++t) rhs += ((h == t ? p : 0.0) - 2.0 * fr.jm(h, t)) * fr.dj(x, t, y);
          a.cmp(fr.nij(x, y, h), 2.0 * rhs);
        }
    for (int j = 0; j < n; ++j) {
      double t = 0.0;
      for (int i = 0; i < n; ++i) {
        t += fr.dj(i, i, j);
        b.term(fr.dj(i, i, j));
      }
      b.cmp(t, 0.0);
    }
    nij.push_back(a);
    tr.push_back(b);
  }
  return {finish("nearly_nijenhuis", "d1", ev, nij, true, "bracket N vs 2(pI - 2J_M)(∇J_M)"),
          finish("nearly_trace", "d1", ev, tr, true)};
}

std::vector<IdentityResult> run_identities(const Evaluation& ev, Suite suite, par::Exec exec) {
  using Checker = std::function<std::vector<IdentityResult>(const Evaluation&)>;
  std::vector<Checker> list;
  const bool metallic = suite == Suite::All || suite == Suite::Metallic;
  const bool nearly = suite == Suite::All || suite == Suite::Nearly;
  if (metallic || nearly) {
    list.emplace_back(check_algebraic);
    list.emplace_back(check_nabla_j_algebra);
    list.emplace_back(check_exterior);
    list.emplace_back(check_parallel_biconditional);
    list.emplace_back(check_curvature_symmetries);
  }
  if (metallic) {
    list.emplace_back(check_hyperbolicity_equivalence);
    list.emplace_back([](const Evaluation& e) { return check_f_properties(e, false); });
    list.emplace_back(check_f_nijenhuis_exterior);
    list.emplace_back(check_ricci_identity);
    list.emplace_back(check_curvature_metallic);
    list.emplace_back(check_ricci_metallic);
    list.emplace_back(check_nabla_s);
  }
  if (nearly) {
    list.emplace_back([](const Evaluation& e) { return check_f_properties(e, true); });
    list.emplace_back(check_nearly_nijenhuis);
    list.emplace_back(check_star);
    list.emplace_back(check_ricci_chain);
    list.emplace_back(check_ricci_hyperbolic);
    list.emplace_back(check_ricci_star_hyperbolic);
    list.emplace_back(check_scalar_star);
  }
  auto parts = par::map<std::vector<IdentityResult>>(list.size(), exec, [&](std::size_t i) { return list[i](ev); });
  std::vector<IdentityResult> out;
  for (auto& p : parts)
    for (auto& r : p) out.push_back(std::move(r));
  return out;
}

}  // namespace mk
