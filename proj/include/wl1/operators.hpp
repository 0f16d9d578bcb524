#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <variant>

#include "wl1/dct.hpp"
#include "wl1/types.hpp"

namespace wl1 {

/// Linear measurement map A : R^n -> R^m with exact adjoint.
///
/// Either an explicit dense matrix or A = R D^{-1}, where D is the
/// orthonormal 2-D DCT of a block and R keeps a subset of pixels: the
/// unknown is the DCT coefficient vector and the measurements are sampled
/// pixels. Immutable after construction.
class MeasurementOperator {
 public:
  enum class Kind { dense, restricted_transform };

  static MeasurementOperator dense(Matrix matrix);
  static MeasurementOperator restricted_dct(BlockShape shape, IndexSet sampled_pixels);

  Kind kind() const;
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void apply(const Vector& x, Vector& out) const;
  void apply_adjoint(const Vector& v, Vector& out) const;
  Vector apply(const Vector& x) const;
  Vector apply_adjoint(const Vector& v) const;

  /// Minimum-norm d with A d = r, i.e. A^T (A A^T)^{-1} r. Empty when
  /// A A^T is not numerically invertible.
  std::optional<Vector> min_norm_preimage(const Vector& r) const;

  /// Explicit matrix (materializes the transform for restricted operators).
  Matrix to_dense() const;

  const Matrix* dense_matrix() const;
  const IndexSet* sampled_pixels() const;

 private:
  struct DensePayload {
    Matrix matrix;
    std::shared_ptr<const Eigen::LLT<Matrix>> gram_factor;  // A A^T, null if singular
  };
  struct RestrictedPayload {
    std::shared_ptr<const Dct2d> transform;
    IndexSet rows;
  };

  MeasurementOperator(std::size_t m, std::size_t n, std::variant<DensePayload, RestrictedPayload> p);

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::variant<DensePayload, RestrictedPayload> payload_;
};

/// m x n matrix of i.i.d. N(0, 1/m) entries (unit-norm columns in
/// expectation). Throws ContractViolation unless 0 < m <= n.
MeasurementOperator gaussian_operator(std::size_t m, std::size_t n, std::uint64_t seed);

/// A = R D^{-1} on `shape` with m pixels drawn uniformly without
/// replacement from `seed`.
MeasurementOperator restricted_dct_operator(std::size_t m, BlockShape shape, std::uint64_t seed);

/// Power-iteration estimate of ||A||_2 (50 iterations, fixed-seed start).
double operator_norm(const MeasurementOperator& op);

/// operator_norm inflated by 1.05; safe step-size bound for the solver.
double operator_norm_bound(const MeasurementOperator& op);

/// Largest relative adjoint mismatch |<Au,v> - <u,A^T v>| / (|<Au,v>| + ||Au|| ||v||)
/// over `probes` random pairs.
double adjoint_mismatch(const MeasurementOperator& op, int probes, std::uint64_t seed);

}  // namespace wl1
