#include "metallic/classify.hpp"

#include <algorithm>
#include <cmath>

#include "metallic/errors.hpp"

namespace mk {

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::NotHermitian: return "not metallic-Hermitian";
    case Verdict::AlmostHermitian: return "almost metallic Hermitian";
    case Verdict::AlmostKahler: return "almost metallic Kähler";
    case Verdict::MetallicKahler: return "metallic Kähler";
    case Verdict::NearlyKahler: return "nearly metallic Kähler";
  }
  return "?";
}

std::optional<Verdict> verdict_from_name(const std::string& name) {
  for (Verdict v : {Verdict::NotHermitian, Verdict::AlmostHermitian, Verdict::AlmostKahler,
                    Verdict::MetallicKahler, Verdict::NearlyKahler})
    if (verdict_name(v) == name) return v;
  return std::nullopt;
}

const ResidualEntry& ClassificationReport::entry(const std::string& name) const {
  for (const auto& e : residuals)
    if (e.name == name) return e;
  throw Error("no residual named '" + name + "'");
}

std::vector<std::string> ClassificationReport::near_boundary() const {
  std::vector<std::string> out;
  for (const auto& e : residuals)
    if (e.near_boundary) out.push_back(e.name);
  return out;
}

namespace {

double max_abs(const Tensor& t) { return t.max_abs(); }

double symmetrized_nabla(const Tensor& dj) {
  const int n = dj.dim();
  double w = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b)
      for (int h = 0; h < n; ++h) w = std::max(w, std::abs(dj(a, h, b) + dj(b, h, a)));
  return w;
}

ResidualEntry make_entry(std::string name, double value, double thr) {
  ResidualEntry e;
  e.name = std::move(name);
  e.value = value;
  e.threshold = thr;
  e.pass = value < thr;
  e.near_boundary = value >= 0.1 * thr && value <= 10.0 * thr;
  return e;
}

}  // namespace

ClassificationReport classify(std::span<const PointFrame> frames, const MetallicParams& params,
                              const Thresholds& tol) {
  double poly = 0, conj = 0, tcg0 = 0, tcg1 = 0, skew = 0, dw = 0, nij = 0, nab = 0, sym = 0;
  for (const auto& fr : frames) {
    poly = std::max(poly, polynomial_residual(fr.jm, params));
    conj = std::max(conj, polynomial_residual(fr.jhat, params));
    const auto h = hyperbolic_residual(fr.g, fr.jm, params);
    tcg0 = std::max(tcg0, h.tcg0);
    tcg1 = std::max(tcg1, h.tcg1);
    skew = std::max(skew, (fr.omega + fr.omega.transpose()).cwiseAbs().maxCoeff());
    dw = std::max(dw, max_abs(fr.dw));
    nij = std::max(nij, max_abs(fr.nij));
    nab = std::max(nab, max_abs(fr.dj));
    sym = std::max(sym, symmetrized_nabla(fr.dj));
  }

  ClassificationReport r;
  r.residuals = {
      make_entry("polynomial", poly, tol.alg),
      make_entry("conjugate_polynomial", conj, tol.alg),
      make_entry("hyperbolic_tcg0", tcg0, tol.alg),
      make_entry("hyperbolic_tcg1", tcg1, tol.alg),
      make_entry("omega_skew", skew, tol.alg),
      make_entry("d_omega", dw, tol.d1),
      make_entry("nijenhuis", nij, tol.d1),
      make_entry("nabla_j", nab, tol.d1),
      make_entry("nabla_j_symmetrized", sym, tol.d1),
  };
  const bool poly_ok = poly < tol.alg;
  const bool tcg0_ok = tcg0 < tol.alg;
  r.hermitian = poly_ok && tcg0_ok;
  r.almost_kahler = r.hermitian && dw < tol.d1;
  r.metallic_kahler = r.almost_kahler && nij < tol.d1;
  r.nearly = r.hermitian && sym < tol.d1;
  r.parallel_consistent = ((dw < tol.d1) && (nij < tol.d1)) == (nab < tol.d1);

  if (!r.hermitian)
    r.verdict = Verdict::NotHermitian;
  else if (r.metallic_kahler)
    r.verdict = Verdict::MetallicKahler;
  else if (r.nearly)
    r.verdict = Verdict::NearlyKahler;
  else if (r.almost_kahler)
    r.verdict = Verdict::AlmostKahler;
  else
    r.verdict = Verdict::AlmostHermitian;
  return r;
}

ClassificationReport classify(const StructureBundle& bundle, const SchemeSet& schemes, const Thresholds& tol,
                              par::Exec exec) {
  const auto pts = sample_points(bundle.chart());
  const auto frames = evaluate_frames(bundle, pts, schemes, Depth::First, exec);
  return classify(frames, bundle.params(), tol);
}

}  // namespace mk
