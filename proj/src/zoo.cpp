#include "metallic/zoo.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "metallic/errors.hpp"

namespace mk::zoo {

namespace {

// Fano-plane triples (1-based): e_a e_b = e_c.
constexpr int kTriples[7][3] = {{1, 2, 3}, {1, 4, 5}, {1, 7, 6}, {2, 4, 6}, {2, 5, 7}, {3, 4, 7}, {3, 6, 5}};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

TensorField constant_field(const Mat& m, Slot a, Slot b) {
  const Tensor t = Tensor::from_matrix(m, a, b);
  return {static_cast<int>(m.rows()), {a, b}, [t](std::span<const double>) { return t; }};
}

TensorField flat_metric(int n) { return constant_field(Mat::Identity(n, n), Slot::Co, Slot::Co); }

TensorField conformal_metric(int n) {
  return {n, {Slot::Co, Slot::Co}, [n](std::span<const double> x) {
            double r2 = 0.0;
            for (double v : x) r2 += v * v;
            const double s = 1.0 + r2;
            const double lam = 4.0 / (s * s);
            return Tensor::from_matrix(lam * Mat::Identity(n, n), Slot::Co, Slot::Co);
          }};
}

Verdict expected_for(const MetallicParams& params, Verdict positive) {
  // With p ≠ 0 the trace of J_M is p·k while a skew ω forces trace 0.
  return params.p == 0.0 ? positive : Verdict::NotHermitian;
}

std::string spec_header(int dim, const MetallicParams& params, const SamplePolicy& pol) {
  std::ostringstream os;
  os << "dimension = " << dim << "\n";
  os << "p = " << num(params.p) << "\n";
  os << "q = " << num(params.q) << "\n";
  os << "structure = J\n";
  os << "sign = +1\n";
  os << "grid = " << pol.grid << "\n";
  os << "random = " << pol.random << "\n";
  os << "seed = " << pol.seed << "\n";
  return os.str();
}

std::string spec_bounds(const std::vector<Interval>& b) {
  std::ostringstream os;
  os << "\n[bounds]\n";
  for (std::size_t i = 0; i < b.size(); ++i) os << i << " = " << num(b[i].lo) << ", " << num(b[i].hi) << "\n";
  return os.str();
}

std::string spec_standard_j(int dim) {
  std::ostringstream os;
  os << "\n[J]\n";
  for (int a = 0; 2 * a + 1 < dim; ++a) {
    os << 2 * a + 1 << " " << 2 * a << " = 1\n";
    os << 2 * a << " " << 2 * a + 1 << " = -1\n";
  }
  return os.str();
}

std::string spec_points(const std::vector<NamedPoint>& named) {
  if (named.empty()) return {};
  std::ostringstream os;
  os << "\n[points]\n";
  for (const auto& np : named) {
    os << np.name << " =";
    for (std::size_t i = 0; i < np.x.size(); ++i) os << (i ? ", " : " ") << num(np.x[i]);
    os << "\n";
  }
  return os.str();
}

}  // namespace

Mat standard_j(int dim) {
  Mat j = Mat::Zero(dim, dim);
  for (int a = 0; 2 * a + 1 < dim; ++a) {
    j(2 * a + 1, 2 * a) = 1.0;
    j(2 * a, 2 * a + 1) = -1.0;
  }
  return j;
}

std::array<double, 7> cross7(const std::array<double, 7>& u, const std::array<double, 7>& v) {
  std::array<double, 7> w{};
  for (const auto& t : kTriples) {
    const int a = t[0] - 1, b = t[1] - 1, c = t[2] - 1;
    w[c] += u[a] * v[b] - u[b] * v[a];
    w[a] += u[b] * v[c] - u[c] * v[b];
    w[b] += u[c] * v[a] - u[a] * v[c];
  }
  return w;
}

Fixture flat(int k, const MetallicParams& params) {
  if (k < 1) throw Error("flat fixture needs k >= 1");
  const int n = 2 * k;
  SamplePolicy pol;
  pol.grid = n == 2 ? 3 : (n == 4 ? 2 : 1);
  pol.random = n == 6 ? 7 : 4;
  pol.named = {{"origin", Point(static_cast<std::size_t>(n), 0.0)}};
  Chart chart(std::vector<Interval>(static_cast<std::size_t>(n), Interval{-1.0, 1.0}), pol);
  const std::string spec = spec_header(n, params, pol) + spec_bounds(chart.bounds()) + [&] {
    std::ostringstream os;
    os << "\n[metric]\n";
    for (int i = 0; i < n; ++i) os << i << " " << i << " = 1\n";
    return os.str();
  }() + spec_standard_j(n) + spec_points(pol.named);
  auto b = StructureBundle::from_complex(std::move(chart), params, flat_metric(n),
                                         constant_field(standard_j(n), Slot::Contra, Slot::Co), 1);
  return {"flat-k" + std::to_string(k), std::move(b), expected_for(params, Verdict::MetallicKahler), spec};
}

Fixture sphere2(const MetallicParams& params) {
  SamplePolicy pol;
  pol.named = {{"origin", {0.0, 0.0}}};
  Chart chart({{-0.9, 0.9}, {-0.9, 0.9}}, pol);
  const std::string spec = spec_header(2, params, pol) + spec_bounds(chart.bounds()) +
                           "\n[metric]\n0 0 = 4/(1 + x0^2 + x1^2)^2\n1 1 = 4/(1 + x0^2 + x1^2)^2\n" +
                           spec_standard_j(2) + spec_points(pol.named);
  auto b = StructureBundle::from_complex(std::move(chart), params, conformal_metric(2),
                                         constant_field(standard_j(2), Slot::Contra, Slot::Co), 1);
  return {"s2", std::move(b), expected_for(params, Verdict::MetallicKahler), spec};
}

Fixture torus(const MetallicParams& params) {
  SamplePolicy pol;
  Chart chart({{0.1, 6.18}, {0.1, 6.18}}, pol);
  const std::string spec = spec_header(2, params, pol) + spec_bounds(chart.bounds()) +
                           "\n[metric]\n0 0 = 1\n1 1 = 1\n" + spec_standard_j(2);
  auto b = StructureBundle::from_complex(std::move(chart), params, flat_metric(2),
                                         constant_field(standard_j(2), Slot::Contra, Slot::Co), 1);
  return {"torus", std::move(b), expected_for(params, Verdict::MetallicKahler), spec};
}

Fixture sphere6(const MetallicParams& params) {
  SamplePolicy pol;
  pol.grid = 1;
  pol.random = 7;
  pol.named = {{"origin", Point(6, 0.0)}};
  Chart chart(std::vector<Interval>(6, Interval{-0.6, 0.6}), pol);

  TensorField j{6, {Slot::Contra, Slot::Co}, [](std::span<const double> x) {
                  double r2 = 0.0;
                  for (double v : x) r2 += v * v;
                  const double s = 1.0 + r2;
                  std::array<double, 7> u{};
                  for (int a = 0; a < 6; ++a) u[static_cast<std::size_t>(a)] = 2.0 * x[static_cast<std::size_t>(a)] / s;
                  u[6] = (1.0 - r2) / s;
                  // ∂_i u, i = 0..5
                  std::array<std::array<double, 7>, 6> du{};
                  for (int i = 0; i < 6; ++i) {
                    const double xi = x[static_cast<std::size_t>(i)];
                    for (int a = 0; a < 6; ++a)
                      du[i][a] = (a == i ? 2.0 / s : 0.0) - 4.0 * x[static_cast<std::size_t>(a)] * xi / (s * s);
                    du[i][6] = -4.0 * xi / (s * s);
                  }
                  const double lam = 4.0 / (s * s);
                  Tensor t(6, {Slot::Contra, Slot::Co});
                  for (int i = 0; i < 6; ++i) {
                    const auto w = cross7(u, du[i]);
                    for (int h = 0; h < 6; ++h) {
                      double d = 0.0;
                      for (int c = 0; c < 7; ++c) d += w[c] * du[h][c];
                      t(h, i) = d / lam;
                    }
                  }
                  return t;
                }};
  auto b = StructureBundle::from_complex(std::move(chart), params, conformal_metric(6), std::move(j), 1);
  return {"s6", std::move(b), expected_for(params, Verdict::NearlyKahler), std::nullopt};
}

Fixture negative(const MetallicParams& params) {
  SamplePolicy pol;
  pol.grid = 2;
  pol.named = {{"origin", Point(4, 0.0)}};
  Chart chart(std::vector<Interval>(4, Interval{-1.0, 1.0}), pol);
  const Mat js = standard_j(4);
  TensorField j{4, {Slot::Contra, Slot::Co}, [js](std::span<const double> x) {
                  const double th = 0.3 * x[0];
                  Mat r = Mat::Identity(4, 4);
                  r(1, 1) = std::cos(th);
                  r(1, 2) = -std::sin(th);
                  r(2, 1) = std::sin(th);
                  r(2, 2) = std::cos(th);
                  return Tensor::from_matrix(r * js * r.transpose(), Slot::Contra, Slot::Co);
                }};
  auto b = StructureBundle::from_complex(std::move(chart), params, flat_metric(4), std::move(j), 1);
  return {"negative", std::move(b), expected_for(params, Verdict::AlmostHermitian), std::nullopt};
}

std::vector<std::string> names() { return {"flat-k1", "flat-k2", "flat-k3", "torus", "s2", "s6", "negative"}; }

Fixture make(const std::string& name, const MetallicParams& params) {
  if (name == "flat-k1") return flat(1, params);
  if (name == "flat-k2") return flat(2, params);
  if (name == "flat-k3") return flat(3, params);
  if (name == "torus") return torus(params);
  if (name == "s2") return sphere2(params);
  if (name == "s6") return sphere6(params);
  if (name == "negative") return negative(params);
  throw Error("unknown zoo fixture '" + name + "'");
}

ClassificationReport validate(const Fixture& fx, const SchemeSet& schemes, const Thresholds& tol) {
  const auto rep = classify(fx.bundle, schemes, tol);
  if (fx.bundle.params().p == 0.0 && !(rep.residual("polynomial") < kAlgebraicCheck))
    throw Error("fixture " + fx.name + " violates the metallic polynomial identity");
  if (rep.verdict != fx.expected)
    throw Error("fixture " + fx.name + " classified as '" + verdict_name(rep.verdict) + "', expected '" +
                verdict_name(fx.expected) + "'");
  if (fx.name == "negative" && fx.expected == Verdict::AlmostHermitian &&
      !(std::max(rep.residual("d_omega"), rep.residual("nijenhuis")) > 1e-2))
    throw Error("negative fixture is too close to Kähler");
  return rep;
}

Fixture load(const std::string& name, const MetallicParams& params, const SchemeSet& schemes,
             const Thresholds& tol) {
  Fixture fx = make(name, params);
  validate(fx, schemes, tol);
  return fx;
}

}  // namespace mk::zoo
