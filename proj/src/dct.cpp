#include "wl1/dct.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "wl1/errors.hpp"

namespace wl1 {

namespace {

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace

BlockShape BlockShape::from_size(std::size_t n, std::size_t rows) {
  if (rows == 0 || n % rows != 0) {
    throw ContractViolation("BlockShape: " + std::to_string(n) + " entries do not factor into " +
                            std::to_string(rows) + " rows");
  }
  return BlockShape{rows, n / rows};
}

Matrix dct_matrix(std::size_t n) {
  const auto size = static_cast<Eigen::Index>(n);
  Matrix c(size, size);
  const double dc = std::sqrt(1.0 / static_cast<double>(n));
  const double ac = std::sqrt(2.0 / static_cast<double>(n));
  for (Eigen::Index k = 0; k < size; ++k) {
    for (Eigen::Index i = 0; i < size; ++i) {
      const double angle =
          std::numbers::pi * static_cast<double>((2 * i + 1) * k) / (2.0 * static_cast<double>(n));
      c(k, i) = (k == 0 ? dc : ac) * std::cos(angle);
    }
  }
  return c;
}

Dct2d::Dct2d(BlockShape shape)
    : shape_(shape), rows_basis_(dct_matrix(shape.rows)), cols_basis_(dct_matrix(shape.cols)) {
  if (shape.size() == 0) throw ContractViolation("Dct2d: empty block");
}

void Dct2d::forward(const Vector& image, Vector& coeffs) const {
  const auto r = static_cast<Eigen::Index>(shape_.rows);
  const auto c = static_cast<Eigen::Index>(shape_.cols);
  coeffs.resize(r * c);
  Eigen::Map<const RowMajorMatrix> x(image.data(), r, c);
  Eigen::Map<RowMajorMatrix> y(coeffs.data(), r, c);
  y.noalias() = rows_basis_ * x * cols_basis_.transpose();
}

void Dct2d::inverse(const Vector& coeffs, Vector& image) const {
  const auto r = static_cast<Eigen::Index>(shape_.rows);
  const auto c = static_cast<Eigen::Index>(shape_.cols);
  image.resize(r * c);
  Eigen::Map<const RowMajorMatrix> y(coeffs.data(), r, c);
  Eigen::Map<RowMajorMatrix> x(image.data(), r, c);
  x.noalias() = rows_basis_.transpose() * y * cols_basis_;
}

Matrix dct2(const Matrix& image) {
  const Matrix cr = dct_matrix(static_cast<std::size_t>(image.rows()));
  const Matrix cc = dct_matrix(static_cast<std::size_t>(image.cols()));
  return cr * image * cc.transpose();
}

Matrix idct2(const Matrix& coeffs) {
  const Matrix cr = dct_matrix(static_cast<std::size_t>(coeffs.rows()));
  const Matrix cc = dct_matrix(static_cast<std::size_t>(coeffs.cols()));
  return cr.transpose() * coeffs * cc;
}

}  // namespace wl1
