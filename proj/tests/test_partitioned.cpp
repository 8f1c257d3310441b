#include <random>

#include <gtest/gtest.h>

#include "ocpdmd/errors.hpp"
#include "ocpdmd/partitioned.hpp"
#include "test_util.hpp"

namespace ocpdmd {
namespace {

using testing::SyntheticPair;

double MaxAbs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

TrainOptions FullRanks() {
  TrainOptions o;
  o.state_rank = FullRank{};
  o.adjoint_rank = FullRank{};
  return o;
}

TEST(RecoverControl, DividesRestrictedAdjointByAlpha) {
  const SyntheticPair p(61);
  const PartitionedModel m = train(p.State(), p.Adjoint(), p.Desired(), 2.0, {0, 2}, FullRanks());
  const Eigen::VectorXd u = recover_control(m, Eigen::Vector4d(4, -6, 8, 1));
  ASSERT_EQ(u.size(), 2);
  EXPECT_EQ(u(0), 2.0);
  EXPECT_EQ(u(1), 4.0);
  EXPECT_THROW(recover_control(m, Eigen::Vector3d(1, 2, 3)), InvalidArgument);
}

TEST(Train, CoupledSyntheticPairIsReconstructed) {
  const SyntheticPair p(62);
  const PartitionedModel m = train(p.State(), p.Adjoint(), p.Desired(), 0.5, {1, 3}, FullRanks());
  EXPECT_EQ(m.state_model.rank_omega, 5);
  const Trajectories t = reconstruct(m, p.state.col(0), p.adjoint.col(0), p.Desired(), p.steps);
  EXPECT_LE(MaxAbs(t.state.values() - p.state), 1e-8 * MaxAbs(p.state));
  EXPECT_LE(MaxAbs(t.adjoint.values() - p.adjoint), 1e-8 * MaxAbs(p.adjoint));
  EXPECT_EQ(m.n_train, p.steps + 1);
  EXPECT_EQ(m.last_state, Eigen::VectorXd(p.state.col(p.steps)));
  EXPECT_DOUBLE_EQ(m.last_time(), 0.1 * static_cast<double>(p.steps));
}

TEST(Train, ReversedAdjointFitRunsBackwardFromTheTerminalValue) {
  const SyntheticPair p(63, true);
  TrainOptions o = FullRanks();
  o.adjoint_direction = TimeDirection::kReversed;
  const PartitionedModel m = train(p.State(), p.Adjoint(), p.Desired(), 1.0, {0}, o);
  const Trajectories t = reconstruct(m, p.state.col(0), p.adjoint.col(p.steps), p.Desired(), p.steps);
  EXPECT_LE(MaxAbs(t.adjoint.values() - p.adjoint), 1e-8 * MaxAbs(p.adjoint));
  EXPECT_THROW(predict(m, p.state.col(p.steps), p.adjoint.col(p.steps), p.Desired(), 3), InvalidArgument);
}

TEST(Train, SubmodelsEqualStandaloneFits) {
  const SyntheticPair p(64);
  TrainOptions o;
  o.state_rank = FixedRank{3};
  o.adjoint_rank = FixedRank{2};
  const PartitionedModel m = train(p.State(), p.Adjoint(), p.Desired(), 1.0, {0}, o);
  FitOptions fs;
  fs.rank_output = FixedRank{3};
  FitOptions fa;
  fa.rank_output = FixedRank{2};
  const DmdcModel s = fit(p.State(), p.desired, fs);
  const DmdcModel a = fit(p.Adjoint(), p.desired, fa);
  EXPECT_EQ(full_state_operator(m.state_model), full_state_operator(s));
  EXPECT_EQ(full_input_operator(m.state_model), full_input_operator(s));
  EXPECT_EQ(full_state_operator(m.adjoint_model), full_state_operator(a));
  EXPECT_EQ(full_input_operator(m.adjoint_model), full_input_operator(a));
}

TEST(Train, PartitionsAreIndependent) {
  const SyntheticPair p(65);
  const SyntheticPair q(66);
  const PartitionedModel base = train(p.State(), p.Adjoint(), p.Desired(), 1.0, {0}, FullRanks());
  const PartitionedModel other_adjoint = train(p.State(), q.Adjoint(), p.Desired(), 1.0, {0}, FullRanks());
  const PartitionedModel other_state = train(q.State(), p.Adjoint(), p.Desired(), 1.0, {0}, FullRanks());
  EXPECT_EQ(full_state_operator(base.state_model), full_state_operator(other_adjoint.state_model));
  EXPECT_EQ(full_state_operator(base.adjoint_model), full_state_operator(other_state.adjoint_model));
  EXPECT_EQ(full_input_operator(base.adjoint_model), full_input_operator(other_state.adjoint_model));
}

TEST(Reconstruct, ControlIsExactlyTheScaledAdjoint) {
  const SyntheticPair p(67);
  const double alpha = 0.3;
  const std::vector<Eigen::Index> restriction{3, 1};
  const PartitionedModel m = train(p.State(), p.Adjoint(), p.Desired(), alpha, restriction);
  const Trajectories t = reconstruct(m, p.state.col(0), p.adjoint.col(0), p.Desired(), 12);
  ASSERT_EQ(t.control.n_time(), 13);
  ASSERT_EQ(t.control.n_dof(), 2);
  for (Eigen::Index k = 0; k < 13; ++k) {
    for (std::size_t c = 0; c < restriction.size(); ++c) {
      const double z = t.adjoint.values()(restriction[c], k);
      const double u = t.control.values()(static_cast<Eigen::Index>(c), k);
      EXPECT_EQ(u, z / alpha);
      EXPECT_LE(std::abs(alpha * u - z), 2.0 * std::numeric_limits<double>::epsilon() * std::abs(z));
    }
  }
}

TEST(Predict, MatchesReconstructionOverTheSameWindow) {
  const SyntheticPair p(68);
  const PartitionedModel m = train(p.State(), p.Adjoint(), p.Desired(), 1.0, {0, 1}, FullRanks());
  const Trajectories r = reconstruct(m, p.state.col(0), p.adjoint.col(0), p.Desired(), 10);
  const Trajectories f = predict(m, p.state.col(0), p.adjoint.col(0), p.Desired(), 10);
  ASSERT_EQ(f.state.n_time(), 10);
  EXPECT_EQ(f.state.values(), r.state.values().rightCols(10));
  EXPECT_EQ(f.adjoint.values(), r.adjoint.values().rightCols(10));
  EXPECT_EQ(f.control.values(), r.control.values().rightCols(10));
  EXPECT_DOUBLE_EQ(f.state.t0(), r.state.time(1));
}

TEST(Predict, ForecastsBeyondTheTrainingWindow) {
  const SyntheticPair p(69);
  const Eigen::Index n_train = 20;
  const PartitionedModel m = train(p.State().columns(0, n_train), p.Adjoint().columns(0, n_train),
                                   p.Desired().columns(0, n_train), 1.0, {0}, FullRanks());
  const Eigen::Index ahead = p.steps + 1 - n_train;
  const Trajectories f = predict(m, m.last_state, m.last_adjoint, p.Desired().columns(n_train - 1, ahead), ahead);
  EXPECT_LE(MaxAbs(f.state.values() - p.state.rightCols(ahead)), 1e-8 * MaxAbs(p.state));
  EXPECT_LE(MaxAbs(f.adjoint.values() - p.adjoint.rightCols(ahead)), 1e-8 * MaxAbs(p.adjoint));
}

TEST(Train, Errors) {
  const SyntheticPair p(70);
  EXPECT_THROW(train(p.State(), SnapshotMatrix(Eigen::MatrixXd::Zero(4, 31), 0.1), p.Desired(), 1.0, {0}),
               RankZeroError);
  EXPECT_THROW(train(p.State(), p.Adjoint(), p.Desired(), 1.0, {}), InvalidArgument);
  EXPECT_THROW(train(p.State(), p.Adjoint(), p.Desired(), 1.0, {4}), InvalidArgument);
  EXPECT_THROW(train(p.State(), p.Adjoint(), p.Desired(), 0.0, {0}), InvalidArgument);
  EXPECT_THROW(train(p.State(), p.Adjoint().columns(0, 10), p.Desired(), 1.0, {0}), InvalidArgument);
  EXPECT_THROW(train(p.State(), p.Adjoint(), SnapshotMatrix(p.desired, 0.2), 1.0, {0}), InvalidArgument);
  TrainOptions self_driven;
  self_driven.input_source.state = InputKind::kState;
  EXPECT_THROW(train(p.State(), p.Adjoint(), p.Desired(), 1.0, {0}, self_driven), InvalidArgument);

  const PartitionedModel m = train(p.State(), p.Adjoint(), p.Desired(), 1.0, {0});
  EXPECT_THROW(reconstruct(m, p.state.col(0), p.adjoint.col(0), p.Desired(), 31), InvalidArgument);
  EXPECT_THROW(reconstruct(m, p.state.col(0), p.adjoint.col(0), p.Desired(), 0), InvalidArgument);
  EXPECT_THROW(predict(m, p.state.col(0), p.adjoint.col(0), p.Desired().columns(0, 3), 5), InvalidArgument);
}

TEST(Names, RoundTrip) {
  for (const auto d : {TimeDirection::kForward, TimeDirection::kReversed}) {
    EXPECT_EQ(time_direction_from_string(to_string(d)), d);
  }
  for (const auto k : {InputKind::kDesired, InputKind::kState, InputKind::kNone}) {
    EXPECT_EQ(input_kind_from_string(to_string(k)), k);
  }
  EXPECT_THROW(time_direction_from_string("sideways"), InvalidArgument);
  EXPECT_THROW(input_kind_from_string("noise"), InvalidArgument);
}

}  // namespace
}  // namespace ocpdmd
