#include "metallic/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "metallic/errors.hpp"

namespace mk {

namespace {

std::string format_point(std::span<const double> x) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ")";
  return os.str();
}

}  // namespace

Chart::Chart(std::vector<Interval> bounds, SamplePolicy policy)
    : bounds_(std::move(bounds)), policy_(std::move(policy)) {
  if (bounds_.size() < 2 || bounds_.size() % 2 != 0)
    throw Error("chart dimension must be even and >= 2, got " + std::to_string(bounds_.size()));
  if (!(policy_.margin > 0.0)) throw Error("chart sample margin must be positive");
  for (const auto& b : bounds_)
    if (!(b.lo + policy_.margin < b.hi - policy_.margin))
      throw Error("chart interval too small for the sample margin");
  for (const auto& np : policy_.named) {
    if (np.x.size() != bounds_.size()) throw Error("named point '" + np.name + "' has wrong dimension");
    if (!contains(np.x, policy_.margin)) throw Error("named point '" + np.name + "' lies outside the sample margin");
  }
  if (policy_.grid < 1) throw Error("grid size must be >= 1");
  if (policy_.random < 0) throw Error("random point count must be >= 0");
}

bool Chart::contains(std::span<const double> x, double margin) const {
  if (x.size() != bounds_.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!(x[i] > bounds_[i].lo + margin && x[i] < bounds_[i].hi - margin)) return false;
  return true;
}

void Chart::check_reach(std::span<const double> x, double reach) const {
  if (x.size() != bounds_.size())
    throw BoundaryError("point " + format_point(x) + " has dimension " + std::to_string(x.size()) +
                        ", chart has " + std::to_string(bounds_.size()));
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!(x[i] - reach >= bounds_[i].lo && x[i] + reach <= bounds_[i].hi))
      throw BoundaryError("point " + format_point(x) + " is within the difference stencil reach of the chart boundary");
}

std::vector<Point> sample_points(const Chart& chart) {
  const auto& pol = chart.policy();
  const int n = chart.dim();
  const double m = pol.margin;
  std::vector<Point> pts;

  std::vector<std::vector<double>> axes(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto& b = chart.bounds()[static_cast<std::size_t>(i)];
    auto& ax = axes[static_cast<std::size_t>(i)];
    if (pol.grid == 1) {
      ax.push_back(0.5 * (b.lo + b.hi));
    } else {
      for (int k = 0; k < pol.grid; ++k)
        ax.push_back((b.lo + m) + (b.hi - b.lo - 2 * m) * k / (pol.grid - 1));
    }
  }
  for_each_index(pol.grid, n, [&](std::span<const int> idx) {
    Point p(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = axes[static_cast<std::size_t>(i)][static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
    pts.push_back(std::move(p));
  });

  std::mt19937_64 rng(pol.seed);
  auto draw = [&] {
    Point p(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const auto& b = chart.bounds()[static_cast<std::size_t>(i)];
      std::uniform_real_distribution<double> d(b.lo + m, b.hi - m);
      p[static_cast<std::size_t>(i)] = d(rng);
    }
    return p;
  };
  for (int k = 0; k < pol.random; ++k) pts.push_back(draw());

  for (const auto& np : pol.named)
    if (std::find(pts.begin(), pts.end(), np.x) == pts.end()) pts.push_back(np.x);

  while (pts.size() < 8) pts.push_back(draw());
  return pts;
}

Mat inverse_metric(const Mat& g, std::span<const double> where) {
  Eigen::FullPivLU<Mat> lu(g);
  const double det = lu.determinant();
  if (!(std::abs(det) > kDegenerateDet))
    throw SingularMetricError(Point(where.begin(), where.end()),
                              "singular metric (|det g| = " + std::to_string(std::abs(det)) + ") at point " +
                                  format_point(where));
  return lu.inverse();
}

namespace {

// Contract slots a < b of t with weights w(i, j) inserted between them.
template <class W>
Tensor contract_weighted(const Tensor& t, int a, int b, W weight) {
  if (a == b || a < 0 || b < 0 || a >= t.rank() || b >= t.rank()) throw Error("contract: invalid slot pair");
  if (a > b) std::swap(a, b);
  std::vector<Slot> rs;
  for (int s = 0; s < t.rank(); ++s)
    if (s != a && s != b) rs.push_back(t.slots()[static_cast<std::size_t>(s)]);
  const int n = t.dim();
  Tensor out(n, rs);
  std::vector<int> full(static_cast<std::size_t>(t.rank()));
  for_each_index(n, out.rank(), [&](std::span<const int> idx) {
    int r = 0;
    for (int s = 0; s < t.rank(); ++s)
      if (s != a && s != b) full[static_cast<std::size_t>(s)] = idx[static_cast<std::size_t>(r++)];
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double w = weight(i, j);
        if (w == 0.0) continue;
        full[static_cast<std::size_t>(a)] = i;
        full[static_cast<std::size_t>(b)] = j;
        sum += w * t.at(full);
      }
    out.at(idx) = sum;
  });
  return out;
}

}  // namespace

Tensor contract(const Tensor& t, int a, int b) {
  if (a < 0 || b < 0 || a >= t.rank() || b >= t.rank() || a == b) throw Error("contract: invalid slot pair");
  if (t.slots()[static_cast<std::size_t>(a)] == t.slots()[static_cast<std::size_t>(b)])
    throw Error("contract: slots " + std::to_string(a) + " and " + std::to_string(b) +
                " have the same variance; supply a metric");
  return contract_weighted(t, a, b, [](int i, int j) { return i == j ? 1.0 : 0.0; });
}

Tensor contract(const Tensor& t, int a, int b, const Mat& g, const Mat& ginv) {
  if (a < 0 || b < 0 || a >= t.rank() || b >= t.rank() || a == b) throw Error("contract: invalid slot pair");
  const Slot sa = t.slots()[static_cast<std::size_t>(a)];
  const Slot sb = t.slots()[static_cast<std::size_t>(b)];
  if (sa != sb) return contract(t, a, b);
  const Mat& w = (sa == Slot::Co) ? ginv : g;
  return contract_weighted(t, a, b, [&](int i, int j) { return w(i, j); });
}

namespace {

Tensor move_index(const Tensor& t, int slot, const Mat& w, Slot from, Slot to) {
  if (slot < 0 || slot >= t.rank()) throw Error("index slot out of range");
  if (t.slots()[static_cast<std::size_t>(slot)] != from) throw Error("index slot has the wrong variance");
  auto slots = t.slots();
  slots[static_cast<std::size_t>(slot)] = to;
  const int n = t.dim();
  Tensor out(n, slots);
  std::vector<int> src(static_cast<std::size_t>(t.rank()));
  for_each_index(n, t.rank(), [&](std::span<const int> idx) {
    std::copy(idx.begin(), idx.end(), src.begin());
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
      src[static_cast<std::size_t>(slot)] = k;
      sum += w(idx[static_cast<std::size_t>(slot)], k) * t.at(src);
    }
    out.at(idx) = sum;
  });
  return out;
}

}  // namespace

Tensor raise_index(const Tensor& t, int slot, const Mat& ginv) {
  return move_index(t, slot, ginv, Slot::Co, Slot::Contra);
}

Tensor lower_index(const Tensor& t, int slot, const Mat& g) {
  return move_index(t, slot, g, Slot::Contra, Slot::Co);
}

double symmetry_residual(const Mat& g) { return (g - g.transpose()).cwiseAbs().maxCoeff(); }

}  // namespace mk
