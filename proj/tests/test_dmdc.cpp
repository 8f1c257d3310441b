#include <cmath>
#include <complex>
#include <random>

#include <gtest/gtest.h>

#include "ocpdmd/dmdc.hpp"
#include "ocpdmd/errors.hpp"
#include "test_util.hpp"

namespace ocpdmd {
namespace {

using testing::RandomMatrix;
using testing::RandomStableMatrix;
using testing::SimulateLti;

FitOptions Full() {
  FitOptions o;
  o.rank_output = FullRank{};
  o.rank_omega = FullRank{};
  return o;
}

struct DiagLti {
  Eigen::MatrixXd a = Eigen::Vector2d(0.9, 0.5).asDiagonal();
  Eigen::MatrixXd b = Eigen::MatrixXd::Ones(2, 1);
  Eigen::MatrixXd u;
  Eigen::MatrixXd x;

  DiagLti() {
    std::mt19937_64 rng(31);
    u = RandomMatrix(rng, 1, 30);
    x = SimulateLti(a, b, Eigen::Vector2d(1, 1), u);
  }
};

TEST(DmdcFit, RecoversDiagonalLti) {
  const DiagLti lti;
  const DmdcModel m = fit(SnapshotMatrix(lti.x, 0.1), lti.u, Full());
  EXPECT_LE((full_state_operator(m) - lti.a).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LE((full_input_operator(m) - lti.b).cwiseAbs().maxCoeff(), 1e-8);
  const auto ev = eigenvalues(m);
  ASSERT_EQ(ev.size(), 2u);
  EXPECT_NEAR(std::abs(ev[0] - 0.9), 0.0, 1e-8);
  EXPECT_NEAR(std::abs(ev[1] - 0.5), 0.0, 1e-8);

  const Eigen::VectorXd next = advance(m, Eigen::Vector2d(1, 1), Eigen::VectorXd::Zero(1));
  EXPECT_NEAR(next(0), 0.9, 1e-8);
  EXPECT_NEAR(next(1), 0.5, 1e-8);
  EXPECT_LE(advance(m, Eigen::Vector2d::Zero(), Eigen::VectorXd::Zero(1)).norm(), 0.0);
}

TEST(DmdcFit, ModelInvariants) {
  const DiagLti lti;
  const DmdcModel m = fit(SnapshotMatrix(lti.x, 0.1), lti.u, Full());
  const Eigen::Index r = m.rank_output;
  EXPECT_LE((m.basis.transpose() * m.basis - Eigen::MatrixXd::Identity(r, r)).cwiseAbs().maxCoeff(), 1e-12);
  const Eigen::MatrixXcd a = m.a_reduced.cast<std::complex<double>>();
  EXPECT_LE((a * m.eigen.eigenvectors - m.eigen.eigenvectors * m.eigen.eigenvalues.asDiagonal()).norm(),
            1e-10 * m.a_reduced.norm());
  EXPECT_EQ(m.modes.rows(), 2);
  EXPECT_EQ(m.modes.cols(), r);
  EXPECT_DOUBLE_EQ(m.dt, 0.1);
}

TEST(DmdcFit, ScalarPlainDmd) {
  Eigen::MatrixXd x(1, 6);
  for (int k = 0; k < 6; ++k) x(0, k) = std::pow(0.5, k);
  const DmdcModel m = fit(SnapshotMatrix(x, 1.0), Eigen::MatrixXd(0, 5), FitOptions{});
  ASSERT_EQ(eigenvalues(m).size(), 1u);
  EXPECT_NEAR(std::abs(eigenvalues(m)[0] - 0.5), 0.0, 1e-12);
  EXPECT_EQ(m.n_input(), 0);
  EXPECT_EQ(m.b_reduced.cols(), 0);
}

TEST(DmdcFit, RandomStableLtiOperatorRecovery) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 12; ++trial) {
    const Eigen::Index n = 2 + trial % 7;
    const Eigen::MatrixXd a = RandomStableMatrix(rng, n);
    const Eigen::MatrixXd b = RandomMatrix(rng, n, 1);
    const Eigen::MatrixXd u = RandomMatrix(rng, 1, 3 * n);
    const Eigen::MatrixXd x = SimulateLti(a, b, RandomMatrix(rng, n, 1), u);
    const DmdcModel m = fit(SnapshotMatrix(x, 1.0), u, Full());
    EXPECT_LE((full_state_operator(m) - a).cwiseAbs().maxCoeff(), 1e-8) << "n=" << n;
    EXPECT_LE((full_input_operator(m) - b).cwiseAbs().maxCoeff(), 1e-8) << "n=" << n;
  }
}

TEST(DmdcFit, NoInputEqualsPlainDmd) {
  std::mt19937_64 rng(33);
  const Eigen::MatrixXd a = RandomStableMatrix(rng, 5);
  const Eigen::MatrixXd x = SimulateLti(a, Eigen::MatrixXd(5, 0), RandomMatrix(rng, 5, 1), Eigen::MatrixXd(0, 12));
  FitOptions o;
  o.rank_output = FixedRank{3};
  o.rank_omega = FixedRank{3};
  const DmdcModel m = fit(SnapshotMatrix(x, 1.0), Eigen::MatrixXd(0, 12), o);

  // Plain DMD: A~ = U^T X' V S^-1 U_x^T U with the same truncations.
  const Eigen::MatrixXd x0 = x.leftCols(12);
  const Eigen::MatrixXd x1 = x.rightCols(12);
  Eigen::JacobiSVD<Eigen::MatrixXd> sx(x0, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::JacobiSVD<Eigen::MatrixXd> sy(x1, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::MatrixXd ux = sx.matrixU().leftCols(3);
  const Eigen::MatrixXd vx = sx.matrixV().leftCols(3);
  const Eigen::VectorXd s = sx.singularValues().head(3);
  const Eigen::MatrixXd uh = sy.matrixU().leftCols(3);
  const Eigen::MatrixXd a_red = uh.transpose() * x1 * vx * s.cwiseInverse().asDiagonal() * ux.transpose() * uh;
  const Eigen::MatrixXd oracle = uh * a_red * uh.transpose();
  EXPECT_LE((full_state_operator(m) - oracle).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(DmdcFit, SpectrumIsScaleEquivariant) {
  std::mt19937_64 rng(34);
  const Eigen::MatrixXd a = RandomStableMatrix(rng, 4);
  const Eigen::MatrixXd b = RandomMatrix(rng, 4, 1);
  const Eigen::MatrixXd u = RandomMatrix(rng, 1, 16);
  const Eigen::MatrixXd x = SimulateLti(a, b, RandomMatrix(rng, 4, 1), u);
  FitOptions o;
  o.rank_output = FixedRank{3};
  const auto base = eigenvalues(fit(SnapshotMatrix(x, 1.0), u, o));
  for (double c : {1e-6, -3.0, 1e6}) {
    const auto scaled = eigenvalues(fit(SnapshotMatrix(c * x, 1.0), c * u, o));
    ASSERT_EQ(scaled.size(), base.size());
    for (std::size_t i = 0; i < base.size(); ++i) EXPECT_NEAR(std::abs(scaled[i] - base[i]), 0.0, 1e-10);
  }
}

TEST(DmdcFit, ProjectedResidualNonIncreasingInRank) {
  std::mt19937_64 rng(35);
  const Eigen::MatrixXd a = RandomStableMatrix(rng, 6);
  const Eigen::MatrixXd b = RandomMatrix(rng, 6, 1);
  const Eigen::MatrixXd u = RandomMatrix(rng, 1, 15);
  const Eigen::MatrixXd x = SimulateLti(a, b, RandomMatrix(rng, 6, 1), u) + 1e-3 * RandomMatrix(rng, 6, 16);
  Eigen::MatrixXd omega(7, 15);
  omega << x.leftCols(15), u;
  double previous = INFINITY;
  for (Eigen::Index r = 1; r <= 6; ++r) {
    FitOptions o;
    o.rank_output = FixedRank{r};
    o.rank_omega = FullRank{};
    const DmdcModel m = fit(SnapshotMatrix(x, 1.0), u, o);
    // Least-squares one-step prediction of X' projected onto the fitted output basis.
    const Eigen::MatrixXd pred = m.basis * m.basis.transpose() * x.rightCols(15) *
                                 omega.completeOrthogonalDecomposition().pseudoInverse() * omega;
    const double residual = (x.rightCols(15) - pred).norm();
    EXPECT_LE(residual, previous + 1e-12) << "r=" << r;
    previous = residual;
  }
}

TEST(DmdcFit, InputMisalignmentChangesTheFit) {
  std::mt19937_64 rng(36);
  const Eigen::MatrixXd a = RandomStableMatrix(rng, 3);
  const Eigen::MatrixXd b = RandomMatrix(rng, 3, 1);
  const Eigen::MatrixXd u = RandomMatrix(rng, 1, 21);
  const Eigen::MatrixXd x = SimulateLti(a, b, RandomMatrix(rng, 3, 1), u.leftCols(20));
  const DmdcModel aligned = fit(SnapshotMatrix(x, 1.0), u.leftCols(20), Full());
  const DmdcModel shifted = fit(SnapshotMatrix(x, 1.0), u.rightCols(20), Full());
  EXPECT_GT((full_input_operator(aligned) - full_input_operator(shifted)).norm(), 1e-3);
  EXPECT_LE((full_input_operator(aligned) - b).norm(), 1e-8);
}

TEST(DmdcFit, DefaultOmegaRankCountsIndependentInputChannels) {
  std::mt19937_64 rng(37);
  const Eigen::MatrixXd a = RandomStableMatrix(rng, 5);
  const Eigen::MatrixXd b = RandomMatrix(rng, 5, 2);
  const Eigen::MatrixXd u = RandomMatrix(rng, 2, 20);
  const Eigen::MatrixXd x = SimulateLti(a, b, RandomMatrix(rng, 5, 1), u);
  FitOptions o;
  o.rank_output = FixedRank{2};
  EXPECT_EQ(fit(SnapshotMatrix(x, 1.0), u, o).rank_omega, 4);

  // Ten padded rows carrying one channel still count once.
  Eigen::MatrixXd padded = Eigen::MatrixXd::Zero(10, 20);
  padded.row(3) = u.row(0);
  padded.row(7) = 2.0 * u.row(0);
  const DmdcModel m = fit(SnapshotMatrix(x, 1.0), padded, o);
  EXPECT_EQ(m.rank_omega, 3);
  EXPECT_EQ(m.n_input(), 10);
}

TEST(DmdcFit, Errors) {
  EXPECT_THROW(fit(SnapshotMatrix(Eigen::MatrixXd::Zero(3, 5), 1.0), Eigen::MatrixXd(0, 4), FitOptions{}),
               RankZeroError);
  const DiagLti lti;
  EXPECT_THROW(fit(shift_pair(SnapshotMatrix(lti.x, 1.0)), lti.u.leftCols(20), Full()), InvalidArgument);
  FitOptions bad;
  bad.rank_output = FixedRank{2};
  bad.rank_omega = FixedRank{1};
  EXPECT_THROW(fit(SnapshotMatrix(lti.x, 1.0), lti.u, bad), InvalidArgument);
  EXPECT_THROW(fit(SnapshotMatrix(lti.x.leftCols(1), 1.0), lti.u, Full()), InvalidArgument);
  const DmdcModel m = fit(SnapshotMatrix(lti.x, 1.0), lti.u, Full());
  EXPECT_THROW(advance(m, Eigen::Vector3d::Zero(), Eigen::VectorXd::Zero(1)), InvalidArgument);
  EXPECT_THROW(advance(m, Eigen::Vector2d::Zero(), Eigen::VectorXd::Zero(2)), InvalidArgument);
  EXPECT_THROW(rollout(m, Eigen::Vector2d::Zero(), lti.u.leftCols(3), 5), InvalidArgument);
  EXPECT_THROW(rollout(m, Eigen::Vector2d::Zero(), lti.u, 0), InvalidArgument);
}

TEST(DmdcFit, ConditioningWarning) {
  std::mt19937_64 rng(38);
  Eigen::MatrixXd x(1, 21);
  for (int k = 0; k < 21; ++k) x(0, k) = std::pow(0.9, k) + 0.1 * std::sin(k);
  Eigen::MatrixXd u = x.leftCols(20) + 1e-12 * RandomMatrix(rng, 1, 20);
  const DmdcModel m = fit(SnapshotMatrix(x, 1.0), u, Full());
  if (m.rank_omega == 2) {
    EXPECT_FALSE(m.warnings.empty());
  }
  const DiagLti lti;
  EXPECT_TRUE(fit(SnapshotMatrix(lti.x, 1.0), lti.u, Full()).warnings.empty());
}

TEST(DmdcRollout, MatchesLtiSimulation) {
  const DiagLti lti;
  const DmdcModel m = fit(SnapshotMatrix(lti.x, 0.1, 2.0), lti.u, Full());
  const SnapshotMatrix r = rollout(m, lti.x.col(0), lti.u, 10);
  ASSERT_EQ(r.n_time(), 11);
  EXPECT_DOUBLE_EQ(r.t0(), 2.0);
  for (int k = 0; k <= 10; ++k) {
    EXPECT_LE((r.column(k) - lti.x.col(k)).norm(), 1e-8 * lti.x.col(k).norm()) << k;
  }
  EXPECT_DOUBLE_EQ(rollout(m, lti.x.col(0), lti.u, 3, 5.0).t0(), 5.0);
}

TEST(DmdcRollout, FirstColumnExactWhenInSpanAndZeroWhenOrthogonal) {
  std::mt19937_64 rng(39);
  Eigen::MatrixXd x(3, 12);
  for (int k = 0; k < 12; ++k) x.col(k) = std::pow(0.8, k) * Eigen::Vector3d(1, 2, 0);
  FitOptions o;
  o.rank_output = FixedRank{1};
  const DmdcModel m = fit(SnapshotMatrix(x, 1.0), Eigen::MatrixXd(0, 11), o);
  const SnapshotMatrix r = rollout(m, x.col(0), Eigen::MatrixXd(0, 0), 11);
  EXPECT_LE((r.column(0) - x.col(0)).norm(), 1e-15 * x.col(0).norm());
  const SnapshotMatrix z = rollout(m, Eigen::Vector3d(0, 0, 1), Eigen::MatrixXd(0, 0), 5);
  EXPECT_EQ(z.values().cwiseAbs().maxCoeff(), 0.0);
}

TEST(DmdcRollout, DemeanedModelRestoresMean) {
  std::mt19937_64 rng(40);
  const Eigen::MatrixXd a = RandomStableMatrix(rng, 3);
  const Eigen::MatrixXd b = RandomMatrix(rng, 3, 1);
  const Eigen::MatrixXd u = RandomMatrix(rng, 1, 15);
  const Eigen::MatrixXd x = SimulateLti(a, b, RandomMatrix(rng, 3, 1), u);
  const Eigen::Vector3d offset(10, -5, 3);
  const Eigen::MatrixXd shifted = x.colwise() + offset;
  FitOptions o = Full();
  o.demean = true;
  const DmdcModel m = fit(SnapshotMatrix(shifted, 1.0), u, o);
  ASSERT_TRUE(m.normalization && m.normalization->applied);
  EXPECT_LE((m.normalization->mean - shifted.rowwise().mean()).norm(), 1e-12);
  const SnapshotMatrix r = rollout(m, shifted.col(0), u, 3);
  EXPECT_LE((r.column(0) - shifted.col(0)).norm(), 1e-10 * shifted.col(0).norm());
}

TEST(DmdcFrequencies, ClosedForms) {
  DmdcModel m;
  m.dt = 0.02;
  m.basis = Eigen::MatrixXd::Identity(3, 3);
  m.a_reduced = Eigen::Vector3d(1.0, std::exp(-0.02), 0.0).asDiagonal();
  m.eigen = dense_eig(m.a_reduced);
  m.rank_output = 3;
  const auto f = continuous_frequencies(m);
  ASSERT_EQ(f.size(), 3u);
  ASSERT_TRUE(f[0].has_value());
  EXPECT_NEAR(std::abs(*f[0]), 0.0, 1e-15);
  ASSERT_TRUE(f[1].has_value());
  EXPECT_NEAR(f[1]->real(), -1.0, 1e-12);
  EXPECT_FALSE(f[2].has_value());
}

}  // namespace
}  // namespace ocpdmd
