#include "ocpdmd/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <regex>

#include <Eigen/Eigenvalues>
#include <Eigen/OrderingMethods>
#include <Eigen/SparseLU>

#include "ocpdmd/errors.hpp"

namespace ocpdmd {
namespace {

// Relative slack for treating two eigenvalue keys as tied.
constexpr double kTieTolerance = 1e-12;

Eigen::Index SelectRank(const Eigen::VectorXd& sigma, Eigen::Index nonzero, const RankRule& rule,
                        std::vector<std::string>& warnings) {
  if (const auto* fixed = std::get_if<FixedRank>(&rule)) {
    if (fixed->r < 1) throw InvalidArgument("fixed rank must be at least 1");
    Eigen::Index r = fixed->r;
    if (r > sigma.size()) {
      warnings.push_back("rank " + std::to_string(r) + " clamped to " +
                         std::to_string(sigma.size()));
      r = sigma.size();
    }
    if (r > nonzero) {
      warnings.push_back("rank " + std::to_string(r) + " reduced to " + std::to_string(nonzero) +
                         " nonzero singular values");
      r = nonzero;
    }
    return r;
  }
  if (const auto* energy = std::get_if<EnergyRank>(&rule)) {
    if (!(energy->tau > 0.0 && energy->tau <= 1.0)) {
      throw InvalidArgument("energy threshold must lie in (0, 1]");
    }
    const double total = sigma.head(nonzero).squaredNorm();
    double running = 0.0;
    for (Eigen::Index i = 0; i < nonzero; ++i) {
      running += sigma(i) * sigma(i);
      if (running >= energy->tau * total) return i + 1;
    }
    return nonzero;
  }
  return nonzero;
}

bool EigenOrderBefore(const std::complex<double>& a, const std::complex<double>& b, double scale) {
  const double tol = kTieTolerance * scale;
  const double ma = std::abs(a);
  const double mb = std::abs(b);
  if (std::abs(ma - mb) > tol) return ma > mb;
  if (std::abs(a.real() - b.real()) > tol) return a.real() > b.real();
  return a.imag() > b.imag();
}

std::optional<std::size_t> PivotFromMessage(const std::string& message) {
  std::smatch match;
  static const std::regex kColumn("([0-9]+)");
  if (std::regex_search(message, match, kColumn)) {
    return static_cast<std::size_t>(std::stoull(match[1].str()));
  }
  return std::nullopt;
}

}  // namespace

std::string describe(const RankRule& rule) {
  if (const auto* fixed = std::get_if<FixedRank>(&rule)) return "fixed:" + std::to_string(fixed->r);
  if (const auto* energy = std::get_if<EnergyRank>(&rule)) {
    return "energy:" + std::to_string(energy->tau);
  }
  return "full";
}

TruncatedSvd truncated_svd(const Eigen::MatrixXd& m, const RankRule& rule) {
  if (m.size() == 0) throw InvalidArgument("truncated_svd: empty matrix");
  if (!m.allFinite()) throw InvalidArgument("truncated_svd: non-finite entries");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  if (sigma.size() == 0 || !(sigma(0) > 0.0)) throw RankZeroError("all singular values are zero");

  const double floor = kSingularValueFloor * sigma(0);
  Eigen::Index nonzero = 0;
  while (nonzero < sigma.size() && sigma(nonzero) > floor) ++nonzero;

  TruncatedSvd out;
  const Eigen::Index r = SelectRank(sigma, nonzero, rule, out.warnings);
  out.u = svd.matrixU().leftCols(r);
  out.sigma = sigma.head(r);
  out.v = svd.matrixV().leftCols(r);
  return out;
}

EigenDecomposition dense_eig(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols() || a.rows() == 0) throw InvalidArgument("dense_eig: matrix must be square");
  if (!a.allFinite()) throw InvalidArgument("dense_eig: non-finite entries");
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, true);
  if (solver.info() != Eigen::Success) throw SolverError("dense_eig: eigen solver did not converge");

  const Eigen::VectorXcd values = solver.eigenvalues();
  Eigen::MatrixXcd vectors = solver.eigenvectors();
  if (!values.allFinite() || !vectors.allFinite()) {
    throw SolverError("dense_eig: non-finite eigen decomposition");
  }

  const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
  std::vector<Eigen::Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return EigenOrderBefore(values(i), values(j), scale);
  });

  EigenDecomposition out;
  out.eigenvalues.resize(values.size());
  out.eigenvectors.resize(a.rows(), a.cols());
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto col = static_cast<Eigen::Index>(k);
    out.eigenvalues(col) = values(order[k]);
    Eigen::VectorXcd w = vectors.col(order[k]);
    const double norm = w.norm();
    if (norm > 0.0) w /= norm;
    out.eigenvectors.col(col) = w;
  }
  return out;
}

SparseMatrix make_sparse(Eigen::Index rows, Eigen::Index cols,
                         const std::vector<Eigen::Triplet<double>>& triplets, bool symmetric) {
  SparseMatrix out;
  out.matrix.resize(rows, cols);
  out.matrix.setFromTriplets(triplets.begin(), triplets.end());
  out.matrix.makeCompressed();
  out.symmetric = symmetric;
  for (Eigen::Index k = 0; k < out.matrix.nonZeros(); ++k) {
    if (!std::isfinite(out.matrix.valuePtr()[k])) throw InvalidArgument("non-finite sparse entry");
  }
  return out;
}

double inf_norm(const Eigen::SparseMatrix<double>& a) {
  Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(a.rows());
  for (Eigen::Index c = 0; c < a.outerSize(); ++c) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, c); it; ++it) {
      row_sums(it.row()) += std::abs(it.value());
    }
  }
  return row_sums.size() == 0 ? 0.0 : row_sums.maxCoeff();
}

Eigen::VectorXd sparse_solve(const SparseMatrix& a, const Eigen::VectorXd& b) {
  if (a.rows() != a.cols()) throw InvalidArgument("sparse_solve: matrix must be square");
  if (a.rows() != b.size()) throw InvalidArgument("sparse_solve: right-hand side length mismatch");

  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(a.matrix);
  lu.factorize(a.matrix);
  if (lu.info() != Eigen::Success) {
    const std::string message = lu.lastErrorMessage();
    throw SolverError("sparse_solve: singular factorization: " + message,
                      PivotFromMessage(message));
  }
  Eigen::VectorXd x = lu.solve(b);
  if (lu.info() != Eigen::Success || !x.allFinite()) {
    throw SolverError("sparse_solve: back substitution failed");
  }

  const double a_norm = inf_norm(a.matrix);
  auto tolerance = [&](const Eigen::VectorXd& sol) {
    return 1e-9 * (a_norm * sol.norm() + b.norm());
  };
  Eigen::VectorXd residual = b - a.matrix * x;
  if (residual.norm() > tolerance(x)) {
    // One step of iterative refinement before giving up.
    x += lu.solve(residual);
    residual = b - a.matrix * x;
    if (!x.allFinite() || residual.norm() > tolerance(x)) {
      throw SolverError("sparse_solve: residual check failed, matrix is numerically singular");
    }
  }
  return x;
}

}  // namespace ocpdmd
