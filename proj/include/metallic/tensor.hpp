#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mk {

using Point = std::vector<double>;
using Mat = Eigen::MatrixXd;

enum class Slot : std::uint8_t { Co, Contra };

/// Dense row-major tensor components at a point. Slot i ranges over
/// 0..dim-1; the slot list records the variance of each index.
class Tensor {
 public:
  Tensor() = default;
  Tensor(int dim, std::vector<Slot> slots);

  static Tensor scalar(double v);
  static Tensor from_matrix(const Mat& m, Slot row, Slot col);

  int dim() const noexcept { return dim_; }
  int rank() const noexcept { return static_cast<int>(slots_.size()); }
  const std::vector<Slot>& slots() const noexcept { return slots_; }
  std::size_t size() const noexcept { return data_.size(); }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  template <class... I>
  double& operator()(I... idx) noexcept {
    return data_[offset(idx...)];
  }
  template <class... I>
  double operator()(I... idx) const noexcept {
    return data_[offset(idx...)];
  }

  double& at(std::span<const int> idx);
  double at(std::span<const int> idx) const;

  /// Rank-2 components as a matrix (row = first slot).
  Mat matrix() const;

  double max_abs() const noexcept;

  Tensor& operator+=(const Tensor& o);
  Tensor& operator-=(const Tensor& o);
  Tensor& operator*=(double s) noexcept;

  friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
  friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
  friend Tensor operator*(double s, Tensor a) { return a *= s; }

  bool same_shape(const Tensor& o) const noexcept { return dim_ == o.dim_ && slots_ == o.slots_; }

 private:
  template <class... I>
  std::size_t offset(I... idx) const noexcept {
    std::size_t off = 0;
    ((off = off * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(idx)), ...);
    return off;
  }

  int dim_ = 0;
  std::vector<Slot> slots_;
  std::vector<double> data_;
};

/// Visit every multi-index of a given rank over 0..dim-1 in row-major order.
void for_each_index(int dim, int rank, const std::function<void(std::span<const int>)>& fn);

/// max |a - b| over components; shapes must agree.
double max_abs_diff(const Tensor& a, const Tensor& b);

/// A tensor-valued function on the chart.
struct TensorField {
  int dim = 0;
  std::vector<Slot> slots;
  std::function<Tensor(std::span<const double>)> eval;

  Tensor operator()(std::span<const double> x) const { return eval(x); }
};

}  // namespace mk
