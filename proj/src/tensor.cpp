#include "metallic/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "metallic/errors.hpp"

namespace mk {

namespace {

std::size_t power(int dim, std::size_t rank) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < rank; ++i) n *= static_cast<std::size_t>(dim);
  return n;
}

}  // namespace

Tensor::Tensor(int dim, std::vector<Slot> slots)
    : dim_(dim), slots_(std::move(slots)), data_(power(dim, slots_.size()), 0.0) {}

Tensor Tensor::scalar(double v) {
  Tensor t(1, {});
  t.data_[0] = v;
  return t;
}

Tensor Tensor::from_matrix(const Mat& m, Slot row, Slot col) {
  const int n = static_cast<int>(m.rows());
  Tensor t(n, {row, col});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t(i, j) = m(i, j);
  return t;
}

double& Tensor::at(std::span<const int> idx) {
  std::size_t off = 0;
  for (int i : idx) off = off * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
  return data_[off];
}

double Tensor::at(std::span<const int> idx) const {
  std::size_t off = 0;
  for (int i : idx) off = off * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
  return data_[off];
}

Mat Tensor::matrix() const {
  if (rank() != 2) throw Error("matrix() requires a rank-2 tensor");
  Mat m(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) m(i, j) = (*this)(i, j);
  return m;
}

double Tensor::max_abs() const noexcept {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

Tensor& Tensor::operator+=(const Tensor& o) {
  if (!same_shape(o)) throw Error("tensor shape mismatch in +=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

Tensor& Tensor::operator-=(const Tensor& o) {
  if (!same_shape(o)) throw Error("tensor shape mismatch in -=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

Tensor& Tensor::operator*=(double s) noexcept {
  for (double& v : data_) v *= s;
  return *this;
}

void for_each_index(int dim, int rank, const std::function<void(std::span<const int>)>& fn) {
  std::vector<int> idx(static_cast<std::size_t>(rank), 0);
  if (rank == 0) {
    fn(idx);
    return;
  }
  while (true) {
    fn(idx);
    int k = rank - 1;
    while (k >= 0 && ++idx[static_cast<std::size_t>(k)] == dim) {
      idx[static_cast<std::size_t>(k)] = 0;
      --k;
    }
    if (k < 0) return;
  }
}

double max_abs_diff(const Tensor& a, const Tensor& b) {
  if (a.size() != b.size()) throw Error("tensor size mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

}  // namespace mk
