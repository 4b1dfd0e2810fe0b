#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace podc {

/// Pixel location; u is the column, v the row.
struct PixelIndex {
  int u = 0;
  int v = 0;
};

inline bool operator==(PixelIndex a, PixelIndex b) { return a.u == b.u && a.v == b.v; }

/// Row-major H×W grid. Scalar grids that carry depth-like quantities use
/// 0 as the invalid/missing marker; valid entries are strictly positive.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int rows, int cols, const T& fill = T{})
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill) {
    assert(rows >= 0 && cols >= 0);
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  bool in_bounds(int v, int u) const { return v >= 0 && v < rows_ && u >= 0 && u < cols_; }

  std::size_t index_of(int v, int u) const {
    assert(in_bounds(v, u));
    return static_cast<std::size_t>(v) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(u);
  }

  T& at(int v, int u) { return data_[index_of(v, u)]; }
  const T& at(int v, int u) const { return data_[index_of(v, u)]; }

  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  auto begin() { return data_.begin(); }
  auto end() { return data_.end(); }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  template <typename U>
  bool same_size(const Grid<U>& other) const {
    return rows_ == other.rows() && cols_ == other.cols();
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

using DepthMap = Grid<double>;        // meters, 0 = invalid
using PlaneOriginMap = Grid<double>;  // meters, 0 = invalid
using ConfidenceMap = Grid<double>;   // [0, 1], 0 where no seed
using NormalMap = Grid<Eigen::Vector3d>;

/// Validity test for depth-like scalars (depth, plane-origin distance).
inline bool is_valid(double value) { return value > 0.0; }

inline std::size_t count_valid(const Grid<double>& grid) {
  std::size_t n = 0;
  for (double value : grid) {
    if (is_valid(value)) ++n;
  }
  return n;
}

/// H×W grid of fixed-width feature vectors, channel-contiguous per pixel.
class FeatureGrid {
 public:
  FeatureGrid() = default;
  FeatureGrid(int rows, int cols, int channels)
      : rows_(rows),
        cols_(cols),
        channels_(channels),
        data_(static_cast<std::size_t>(rows) * cols * channels, 0.0) {
    assert(rows >= 0 && cols >= 0 && channels > 0);
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int channels() const { return channels_; }

  bool in_bounds(int v, int u) const { return v >= 0 && v < rows_ && u >= 0 && u < cols_; }

  std::span<double> at(int v, int u) {
    return {data_.data() + offset(v, u), static_cast<std::size_t>(channels_)};
  }
  std::span<const double> at(int v, int u) const {
    return {data_.data() + offset(v, u), static_cast<std::size_t>(channels_)};
  }

  Eigen::Map<const Eigen::VectorXd> vec(int v, int u) const {
    return {data_.data() + offset(v, u), channels_};
  }

  template <typename U>
  bool same_size(const Grid<U>& other) const {
    return rows_ == other.rows() && cols_ == other.cols();
  }

 private:
  std::size_t offset(int v, int u) const {
    assert(in_bounds(v, u));
    return (static_cast<std::size_t>(v) * cols_ + u) * channels_;
  }

  int rows_ = 0;
  int cols_ = 0;
  int channels_ = 0;
  std::vector<double> data_;
};

}  // namespace podc
