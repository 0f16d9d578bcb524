#pragma once

#include <cstddef>

#include "wl1/types.hpp"

namespace wl1 {

struct BlockShape {
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::size_t size() const { return rows * cols; }
  bool operator==(const BlockShape&) const = default;

  /// Shape with `rows` rows holding n entries; throws ContractViolation when
  /// rows does not divide n.
  static BlockShape from_size(std::size_t n, std::size_t rows);
};

/// Orthonormal DCT-II matrix C (n x n): forward transform is C x.
Matrix dct_matrix(std::size_t n);

/// Separable orthonormal 2-D DCT-II on a fixed block shape. Vectors are the
/// row-major flattening of the block. Immutable and safe to share.
class Dct2d {
 public:
  explicit Dct2d(BlockShape shape);

  const BlockShape& shape() const { return shape_; }

  void forward(const Vector& image, Vector& coeffs) const;
  void inverse(const Vector& coeffs, Vector& image) const;

 private:
  BlockShape shape_;
  Matrix rows_basis_;
  Matrix cols_basis_;
};

/// Orthonormal 2-D DCT-II of an image.
Matrix dct2(const Matrix& image);
/// Inverse of dct2 (2-D DCT-III).
Matrix idct2(const Matrix& coeffs);

}  // namespace wl1
