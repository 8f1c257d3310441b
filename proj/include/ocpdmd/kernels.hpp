#pragma once

// Data-parallel inner loops shared by the modules. Every kernel exists twice:
// `serial::` is the plain reference loop kept for testing, `parallel::` runs
// the same per-output computation under OpenMP. Each output entry is produced
// by exactly one thread with the serial operation order, so both variants are
// bit-identical for any thread count.

#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace ocpdmd::kernels {

using RowMajorSparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Threads used by `parallel::` kernels: omp_get_max_threads(), capped by the
/// OCPDMD_THREADS environment variable when it holds a positive integer.
int thread_count();

/// Overrides the thread cap for this process (0 restores the default).
void set_thread_cap(int threads);

namespace serial {

/// ||t_k - a_k||_2 / ||t_k||_2 per column; nullopt when t_k = 0 and a_k != 0,
/// 0 when both are zero.
std::vector<std::optional<double>> column_relative_errors(const Eigen::MatrixXd& truth,
                                                          const Eigen::MatrixXd& approx);

/// basis * reduced, one column at a time.
Eigen::MatrixXd lift_columns(const Eigen::MatrixXd& basis, const Eigen::MatrixXd& reduced);

/// Mean over columns for every row.
Eigen::VectorXd row_means(const Eigen::MatrixXd& values);

Eigen::VectorXd spmv(const RowMajorSparse& a, const Eigen::VectorXd& x);

}  // namespace serial

namespace parallel {

std::vector<std::optional<double>> column_relative_errors(const Eigen::MatrixXd& truth,
                                                          const Eigen::MatrixXd& approx);
Eigen::MatrixXd lift_columns(const Eigen::MatrixXd& basis, const Eigen::MatrixXd& reduced);
Eigen::VectorXd row_means(const Eigen::MatrixXd& values);
Eigen::VectorXd spmv(const RowMajorSparse& a, const Eigen::VectorXd& x);

}  // namespace parallel

}  // namespace ocpdmd::kernels
