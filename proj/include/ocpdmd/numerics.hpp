#pragma once

#include <complex>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace ocpdmd {

/// Singular values below this fraction of sigma_max count as zero everywhere.
inline constexpr double kSingularValueFloor = 1e-13;

/// Default energy threshold when no fixed rank is supplied.
inline constexpr double kDefaultEnergy = 0.9999;

struct FixedRank {
  Eigen::Index r;
};

/// Smallest r with sum_{i<=r} sigma_i^2 >= tau * sum sigma_i^2.
struct EnergyRank {
  double tau = kDefaultEnergy;
};

/// Keep every singular value above the zero floor.
struct FullRank {};

using RankRule = std::variant<FixedRank, EnergyRank, FullRank>;

std::string describe(const RankRule& rule);

struct TruncatedSvd {
  Eigen::MatrixXd u;
  Eigen::VectorXd sigma;
  Eigen::MatrixXd v;
  std::vector<std::string> warnings;

  Eigen::Index rank() const { return sigma.size(); }
};

/// Throws RankZeroError on all-zero input. A fixed rank above min(rows, cols)
/// is clamped and reported in `warnings`.
TruncatedSvd truncated_svd(const Eigen::MatrixXd& m, const RankRule& rule);

struct EigenDecomposition {
  Eigen::VectorXcd eigenvalues;
  Eigen::MatrixXcd eigenvectors;  // unit 2-norm columns
};

/// Full spectrum of a real square matrix, sorted by descending modulus, then
/// descending real part, then descending imaginary part.
EigenDecomposition dense_eig(const Eigen::MatrixXd& a);

/// Compressed sparse matrix with a symmetry flag set by the assembler.
struct SparseMatrix {
  Eigen::SparseMatrix<double> matrix;  // column-major, compressed
  bool symmetric = false;

  Eigen::Index rows() const { return matrix.rows(); }
  Eigen::Index cols() const { return matrix.cols(); }
};

/// Builds a compressed matrix, summing duplicate triplets.
SparseMatrix make_sparse(Eigen::Index rows, Eigen::Index cols,
                         const std::vector<Eigen::Triplet<double>>& triplets,
                         bool symmetric = false);

/// Direct LU solve. Throws SolverError (with the failing pivot when Eigen
/// reports one) on singular factorizations or when the residual check
/// ||a x - b|| <= 1e-9 (||a||_inf ||x|| + ||b||) fails.
Eigen::VectorXd sparse_solve(const SparseMatrix& a, const Eigen::VectorXd& b);

double inf_norm(const Eigen::SparseMatrix<double>& a);

}  // namespace ocpdmd
