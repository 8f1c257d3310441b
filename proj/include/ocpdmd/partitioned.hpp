#pragma once

// Partitioned surrogate of an optimal control trajectory: one DMDc model for
// the state and one for the adjoint, each driven by the desired-state
// trajectory, with the control recovered algebraically from alpha u = z.

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ocpdmd/dmdc.hpp"
#include "ocpdmd/snapshots.hpp"

namespace ocpdmd {

enum class TimeDirection { kForward, kReversed };

/// Exogenous input fed to a DMDc fit.
enum class InputKind {
  kDesired,  // desired-state snapshots (zero outside the observation region)
  kState,    // state snapshots; only meaningful for the adjoint model
  kNone,     // plain DMD
};

struct InputSource {
  InputKind state = InputKind::kDesired;
  InputKind adjoint = InputKind::kDesired;
};

struct TrainOptions {
  RankRule state_rank = FixedRank{4};
  RankRule adjoint_rank = FixedRank{3};
  std::optional<RankRule> state_rank_omega;
  std::optional<RankRule> adjoint_rank_omega;
  bool demean_state = false;
  bool demean_adjoint = false;
  TimeDirection adjoint_direction = TimeDirection::kForward;
  InputSource input_source;
};

struct PartitionedModel {
  DmdcModel state_model;
  DmdcModel adjoint_model;
  double alpha = 1.0;
  std::vector<Eigen::Index> control_restriction;  // adjoint dof of each control entry
  InputSource input_source;
  TimeDirection adjoint_direction = TimeDirection::kForward;
  Eigen::Index n_train = 0;
  Eigen::VectorXd last_state;    // final training snapshots, prediction start
  Eigen::VectorXd last_adjoint;
  double dt = 1.0;
  double t0 = 0.0;

  double last_time() const { return t0 + static_cast<double>(n_train - 1) * dt; }
};

/// Fits both surrogates on matching trajectories. `state` and `desired` are
/// always required; `desired` doubles as the input source.
PartitionedModel train(const SnapshotMatrix& state, const SnapshotMatrix& adjoint,
                       const SnapshotMatrix& desired, double alpha,
                       std::vector<Eigen::Index> control_restriction,
                       const TrainOptions& options = {});

/// u = adjoint[control_restriction] / alpha.
Eigen::VectorXd recover_control(const PartitionedModel& model, const Eigen::VectorXd& adjoint);

struct Trajectories {
  SnapshotMatrix state;
  SnapshotMatrix adjoint;
  SnapshotMatrix control;
};

/// Rolls both surrogates over n_steps transitions and returns n_steps + 1
/// columns per variable. `adjoint_start` is the first adjoint column for a
/// forward model and the last one (index n_steps) for a reversed model.
/// `desired` supplies at least n_steps + 1 columns starting at the same time as
/// `y0`; a state-driven adjoint uses `state_inputs` instead.
Trajectories reconstruct(const PartitionedModel& model, const Eigen::VectorXd& y0,
                         const Eigen::VectorXd& adjoint_start, const SnapshotMatrix& desired,
                         Eigen::Index n_steps);

/// Forecasts n_steps columns after the given start snapshots. future_desired
/// column 0 is the desired state at the start time. Requires a forward
/// adjoint model.
Trajectories predict(const PartitionedModel& model, const Eigen::VectorXd& last_state,
                     const Eigen::VectorXd& last_adjoint, const SnapshotMatrix& future_desired,
                     Eigen::Index n_steps);

std::string to_string(TimeDirection direction);
std::string to_string(InputKind kind);
TimeDirection time_direction_from_string(const std::string& text);
InputKind input_kind_from_string(const std::string& text);

}  // namespace ocpdmd
