#include "ocpdmd/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>

#include <omp.h>

#include "ocpdmd/errors.hpp"

namespace ocpdmd::kernels {
namespace {

std::atomic<int> g_thread_cap{0};

int EnvThreadCap() {
  const char* raw = std::getenv("OCPDMD_THREADS");
  if (raw == nullptr) return 0;
  char* end = nullptr;
  const long value = std::strtol(raw, &end, 10);
  if (end == raw || *end != '\0' || value <= 0) return 0;
  return static_cast<int>(value);
}

void CheckSameShape(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidArgument("shape mismatch: " + std::to_string(a.rows()) + "x" +
                          std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                          std::to_string(b.cols()));
  }
}

std::optional<double> ColumnError(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& approx,
                                  Eigen::Index col) {
  double ref_max = 0.0;
  double diff_max = 0.0;
  for (Eigen::Index i = 0; i < truth.rows(); ++i) {
    ref_max = std::max(ref_max, std::abs(truth(i, col)));
    diff_max = std::max(diff_max, std::abs(truth(i, col) - approx(i, col)));
  }
  if (ref_max == 0.0) {
    if (diff_max == 0.0) return 0.0;
    return std::nullopt;
  }
  if (diff_max == 0.0) return 0.0;
  // Power-of-two scaling keeps the squares in range without rounding.
  const double scale = std::ldexp(1.0, -std::ilogb(std::max(ref_max, diff_max)));
  double diff_sq = 0.0;
  double ref_sq = 0.0;
  for (Eigen::Index i = 0; i < truth.rows(); ++i) {
    const double t = truth(i, col) * scale;
    const double d = (truth(i, col) - approx(i, col)) * scale;
    diff_sq += d * d;
    ref_sq += t * t;
  }
  return std::sqrt(diff_sq) / std::sqrt(ref_sq);
}

double RowMean(const Eigen::MatrixXd& values, Eigen::Index row) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < values.cols(); ++j) sum += values(row, j);
  return sum / static_cast<double>(values.cols());
}

double RowDot(const RowMajorSparse& a, const Eigen::VectorXd& x, Eigen::Index row) {
  double sum = 0.0;
  for (RowMajorSparse::InnerIterator it(a, row); it; ++it) sum += it.value() * x(it.col());
  return sum;
}

void CheckSpmv(const RowMajorSparse& a, const Eigen::VectorXd& x) {
  if (a.cols() != x.size()) throw InvalidArgument("spmv: dimension mismatch");
}

void CheckLift(const Eigen::MatrixXd& basis, const Eigen::MatrixXd& reduced) {
  if (basis.cols() != reduced.rows()) throw InvalidArgument("lift_columns: dimension mismatch");
}

}  // namespace

int thread_count() {
  int threads = omp_get_max_threads();
  int cap = g_thread_cap.load();
  if (cap <= 0) cap = EnvThreadCap();
  if (cap > 0 && cap < threads) threads = cap;
  return threads < 1 ? 1 : threads;
}

void set_thread_cap(int threads) { g_thread_cap.store(threads < 0 ? 0 : threads); }

namespace serial {

std::vector<std::optional<double>> column_relative_errors(const Eigen::MatrixXd& truth,
                                                          const Eigen::MatrixXd& approx) {
  CheckSameShape(truth, approx);
  std::vector<std::optional<double>> out(static_cast<std::size_t>(truth.cols()));
  for (Eigen::Index k = 0; k < truth.cols(); ++k) {
    out[static_cast<std::size_t>(k)] = ColumnError(truth, approx, k);
  }
  return out;
}

Eigen::MatrixXd lift_columns(const Eigen::MatrixXd& basis, const Eigen::MatrixXd& reduced) {
  CheckLift(basis, reduced);
  Eigen::MatrixXd out(basis.rows(), reduced.cols());
  for (Eigen::Index k = 0; k < reduced.cols(); ++k) {
    out.col(k).noalias() = basis * reduced.col(k);
  }
  return out;
}

Eigen::VectorXd row_means(const Eigen::MatrixXd& values) {
  Eigen::VectorXd out(values.rows());
  for (Eigen::Index i = 0; i < values.rows(); ++i) out(i) = RowMean(values, i);
  return out;
}

Eigen::VectorXd spmv(const RowMajorSparse& a, const Eigen::VectorXd& x) {
  CheckSpmv(a, x);
  Eigen::VectorXd y(a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) y(i) = RowDot(a, x, i);
  return y;
}

}  // namespace serial

namespace parallel {

std::vector<std::optional<double>> column_relative_errors(const Eigen::MatrixXd& truth,
                                                          const Eigen::MatrixXd& approx) {
  CheckSameShape(truth, approx);
  std::vector<std::optional<double>> out(static_cast<std::size_t>(truth.cols()));
  const Eigen::Index n = truth.cols();
#pragma omp parallel for schedule(static) num_threads(thread_count())
  for (Eigen::Index k = 0; k < n; ++k) {
    out[static_cast<std::size_t>(k)] = ColumnError(truth, approx, k);
  }
  return out;
}

Eigen::MatrixXd lift_columns(const Eigen::MatrixXd& basis, const Eigen::MatrixXd& reduced) {
  CheckLift(basis, reduced);
  Eigen::MatrixXd out(basis.rows(), reduced.cols());
  const Eigen::Index n = reduced.cols();
#pragma omp parallel for schedule(static) num_threads(thread_count())
  for (Eigen::Index k = 0; k < n; ++k) {
    out.col(k).noalias() = basis * reduced.col(k);
  }
  return out;
}

Eigen::VectorXd row_means(const Eigen::MatrixXd& values) {
  Eigen::VectorXd out(values.rows());
  const Eigen::Index n = values.rows();
#pragma omp parallel for schedule(static) num_threads(thread_count())
  for (Eigen::Index i = 0; i < n; ++i) out(i) = RowMean(values, i);
  return out;
}

Eigen::VectorXd spmv(const RowMajorSparse& a, const Eigen::VectorXd& x) {
  CheckSpmv(a, x);
  Eigen::VectorXd y(a.rows());
  const Eigen::Index n = a.rows();
#pragma omp parallel for schedule(static) num_threads(thread_count())
  for (Eigen::Index i = 0; i < n; ++i) y(i) = RowDot(a, x, i);
  return y;
}

}  // namespace parallel
}  // namespace ocpdmd::kernels
