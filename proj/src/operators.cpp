#include "wl1/operators.hpp"

#include <algorithm>
#include <cmath>

#include "wl1/errors.hpp"
#include "wl1/random.hpp"

namespace wl1 {

namespace {

constexpr int kPowerIterations = 50;
constexpr std::uint64_t kPowerSeed = 0x5eed'0f'a11;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

MeasurementOperator::MeasurementOperator(std::size_t m, std::size_t n,
                                         std::variant<DensePayload, RestrictedPayload> p)
    : rows_(m), cols_(n), payload_(std::move(p)) {}

MeasurementOperator MeasurementOperator::dense(Matrix matrix) {
  const auto m = static_cast<std::size_t>(matrix.rows());
  const auto n = static_cast<std::size_t>(matrix.cols());
  DensePayload payload;
  if (m > 0) {
    auto factor = std::make_shared<Eigen::LLT<Matrix>>(matrix * matrix.transpose());
    if (factor->info() == Eigen::Success && factor->rcond() > 1e-12) {
      payload.gram_factor = std::move(factor);
    }
  }
  payload.matrix = std::move(matrix);
  return MeasurementOperator(m, n, std::move(payload));
}

MeasurementOperator MeasurementOperator::restricted_dct(BlockShape shape, IndexSet sampled) {
  const std::size_t n = shape.size();
  if (!std::is_sorted(sampled.begin(), sampled.end()) ||
      std::adjacent_find(sampled.begin(), sampled.end()) != sampled.end()) {
    throw ContractViolation("restricted_dct: sampled pixels must be sorted and distinct");
  }
  if (!sampled.empty() && sampled.back() >= n) {
    throw ContractViolation("restricted_dct: sampled pixel out of range");
  }
  const std::size_t m = sampled.size();
  RestrictedPayload payload{std::make_shared<const Dct2d>(shape), std::move(sampled)};
  return MeasurementOperator(m, n, std::move(payload));
}

MeasurementOperator::Kind MeasurementOperator::kind() const {
  return std::holds_alternative<DensePayload>(payload_) ? Kind::dense
                                                        : Kind::restricted_transform;
}

void MeasurementOperator::apply(const Vector& x, Vector& out) const {
  std::visit(Overloaded{
                 [&](const DensePayload& d) { out.noalias() = d.matrix * x; },
                 [&](const RestrictedPayload& r) {
                   Vector image;
                   r.transform->inverse(x, image);
                   out.resize(static_cast<Eigen::Index>(r.rows.size()));
                   for (std::size_t k = 0; k < r.rows.size(); ++k) {
                     out[static_cast<Eigen::Index>(k)] = image[static_cast<Eigen::Index>(r.rows[k])];
                   }
                 },
             },
             payload_);
}

void MeasurementOperator::apply_adjoint(const Vector& v, Vector& out) const {
  std::visit(Overloaded{
                 [&](const DensePayload& d) { out.noalias() = d.matrix.transpose() * v; },
                 [&](const RestrictedPayload& r) {
                   Vector image = Vector::Zero(static_cast<Eigen::Index>(cols_));
                   for (std::size_t k = 0; k < r.rows.size(); ++k) {
                     image[static_cast<Eigen::Index>(r.rows[k])] = v[static_cast<Eigen::Index>(k)];
                   }
                   r.transform->forward(image, out);
                 },
             },
             payload_);
}

Vector MeasurementOperator::apply(const Vector& x) const {
  Vector out;
  apply(x, out);
  return out;
}

Vector MeasurementOperator::apply_adjoint(const Vector& v) const {
  Vector out;
  apply_adjoint(v, out);
  return out;
}

std::optional<Vector> MeasurementOperator::min_norm_preimage(const Vector& r) const {
  return std::visit(Overloaded{
                        [&](const DensePayload& d) -> std::optional<Vector> {
                          if (!d.gram_factor) return std::nullopt;
                          return Vector(d.matrix.transpose() * d.gram_factor->solve(r));
                        },
                        // Rows of R D^{-1} are orthonormal.
                        [&](const RestrictedPayload&) -> std::optional<Vector> {
                          return apply_adjoint(r);
                        },
                    },
                    payload_);
}

Matrix MeasurementOperator::to_dense() const {
  if (const auto* d = std::get_if<DensePayload>(&payload_)) return d->matrix;
  Matrix out(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
  Vector e = Vector::Zero(static_cast<Eigen::Index>(cols_));
  Vector col;
  for (Eigen::Index j = 0; j < e.size(); ++j) {
    e[j] = 1.0;
    apply(e, col);
    out.col(j) = col;
    e[j] = 0.0;
  }
  return out;
}

const Matrix* MeasurementOperator::dense_matrix() const {
  const auto* d = std::get_if<DensePayload>(&payload_);
  return d ? &d->matrix : nullptr;
}

const IndexSet* MeasurementOperator::sampled_pixels() const {
  const auto* r = std::get_if<RestrictedPayload>(&payload_);
  return r ? &r->rows : nullptr;
}

MeasurementOperator gaussian_operator(std::size_t m, std::size_t n, std::uint64_t seed) {
  if (m == 0 || m > n) throw ContractViolation("gaussian_operator: requires 0 < m <= n");
  Rng rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  Matrix a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) a(i, j) = scale * dist(rng);
  }
  return MeasurementOperator::dense(std::move(a));
}

MeasurementOperator restricted_dct_operator(std::size_t m, BlockShape shape, std::uint64_t seed) {
  if (m > shape.size()) throw ContractViolation("restricted_dct_operator: m exceeds block size");
  Rng rng(seed);
  return MeasurementOperator::restricted_dct(shape, sample_without_replacement(shape.size(), m, rng));
}

double operator_norm(const MeasurementOperator& op) {
  Rng rng(kPowerSeed);
  Vector v = standard_normal(op.cols(), rng);
  double norm = v.norm();
  if (norm == 0.0) return 0.0;
  v /= norm;
  Vector u, w;
  double estimate = 0.0;
  for (int k = 0; k < kPowerIterations; ++k) {
    op.apply(v, u);
    op.apply_adjoint(u, w);
    const double wn = w.norm();
    if (wn == 0.0) return 0.0;
    estimate = std::sqrt(wn);  // ||A^T A v|| for unit v, approaches sigma_max^2
    v = w / wn;
  }
  return estimate;
}

double operator_norm_bound(const MeasurementOperator& op) { return 1.05 * operator_norm(op); }

double adjoint_mismatch(const MeasurementOperator& op, int probes, std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int p = 0; p < probes; ++p) {
    const Vector u = standard_normal(op.cols(), rng);
    const Vector v = standard_normal(op.rows(), rng);
    const Vector au = op.apply(u);
    const Vector atv = op.apply_adjoint(v);
    const double lhs = au.dot(v);
    const double rhs = u.dot(atv);
    const double scale = std::max({au.norm() * v.norm(), u.norm() * atv.norm(), 1e-300});
    worst = std::max(worst, std::abs(lhs - rhs) / scale);
  }
  return worst;
}

}  // namespace wl1
