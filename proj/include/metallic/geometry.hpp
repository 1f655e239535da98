#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "metallic/tensor.hpp"

namespace mk {

struct Interval {
  double lo = -1.0;
  double hi = 1.0;
};

struct NamedPoint {
  std::string name;
  Point x;
};

/// How sample points are drawn from a chart: a tensor grid of `grid` points
/// per axis, `random` seeded interior points, then the named points.
struct SamplePolicy {
  int grid = 3;
  int random = 4;
  std::uint64_t seed = 42;
  double margin = 0.05;
  std::vector<NamedPoint> named;
};

/// Coordinate box of even dimension.
class Chart {
 public:
  Chart(std::vector<Interval> bounds, SamplePolicy policy);

  int dim() const noexcept { return static_cast<int>(bounds_.size()); }
  const std::vector<Interval>& bounds() const noexcept { return bounds_; }
  const SamplePolicy& policy() const noexcept { return policy_; }
  SamplePolicy& policy() noexcept { return policy_; }

  bool contains(std::span<const double> x, double margin = 0.0) const;

  /// Throws BoundaryError unless every coordinate of x is at least `reach`
  /// away from the chart boundary.
  void check_reach(std::span<const double> x, double reach) const;

 private:
  std::vector<Interval> bounds_;
  SamplePolicy policy_;
};

/// Deterministic for a fixed seed; always at least 8 points.
std::vector<Point> sample_points(const Chart& chart);

inline constexpr double kDegenerateDet = 1e-10;

/// Throws SingularMetricError when |det g| <= 1e-10.
Mat inverse_metric(const Mat& g, std::span<const double> where = {});

/// Contract slot a with slot b. Slots must have opposite variance.
Tensor contract(const Tensor& t, int a, int b);

/// Contract two slots of equal variance through the metric (g for two
/// contravariant slots, g^-1 for two covariant ones).
Tensor contract(const Tensor& t, int a, int b, const Mat& g, const Mat& ginv);

Tensor raise_index(const Tensor& t, int slot, const Mat& ginv);
Tensor lower_index(const Tensor& t, int slot, const Mat& g);

/// max |g_ij - g_ji|.
double symmetry_residual(const Mat& g);

}  // namespace mk
