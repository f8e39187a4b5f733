#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace maple::core {

// Dense 3D grid, row-major with the last axis fastest: index(i,j,k) =
// (i*d1 + j)*d2 + k.
template <typename T>
struct Grid3 {
  std::size_t d0 = 0, d1 = 0, d2 = 0;
  std::vector<T> data;

  Grid3() = default;
  Grid3(std::size_t a, std::size_t b, std::size_t c, T fill = T{})
      : d0(a), d1(b), d2(c), data(a * b * c, fill) {}

  std::size_t size() const { return data.size(); }

  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
    return (i * d1 + j) * d2 + k;
  }

  T& at(std::size_t i, std::size_t j, std::size_t k) { return data[index(i, j, k)]; }
  const T& at(std::size_t i, std::size_t j, std::size_t k) const { return data[index(i, j, k)]; }

  bool inside(long i, long j, long k) const {
    return i >= 0 && j >= 0 && k >= 0 && i < static_cast<long>(d0) &&
           j < static_cast<long>(d1) && k < static_cast<long>(d2);
  }

  template <typename U>
  bool same_shape(const Grid3<U>& o) const {
    return d0 == o.d0 && d1 == o.d1 && d2 == o.d2;
  }
};

}  // namespace maple::core
