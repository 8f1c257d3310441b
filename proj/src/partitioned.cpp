#include "ocpdmd/partitioned.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "ocpdmd/errors.hpp"

namespace ocpdmd {
namespace {

Eigen::MatrixXd Reversed(const Eigen::MatrixXd& m) { return m.rowwise().reverse(); }

Eigen::MatrixXd InputsFor(InputKind kind, const SnapshotMatrix& desired, const SnapshotMatrix& state) {
  switch (kind) {
    case InputKind::kDesired:
      return desired.values();
    case InputKind::kState:
      return state.values();
    case InputKind::kNone:
      break;
  }
  return Eigen::MatrixXd(0, desired.n_time());
}

void CheckCompatible(const SnapshotMatrix& a, const SnapshotMatrix& b, const char* what) {
  if (a.n_time() != b.n_time()) {
    throw InvalidArgument(std::string(what) + ": " + std::to_string(b.n_time()) + " columns, expected " +
                          std::to_string(a.n_time()));
  }
  if (std::abs(a.dt() - b.dt()) > 1e-12 * a.dt()) {
    throw InvalidArgument(std::string(what) + ": dt mismatch");
  }
}

SnapshotMatrix ControlColumns(const PartitionedModel& model, const SnapshotMatrix& adjoint) {
  Eigen::MatrixXd control(static_cast<Eigen::Index>(model.control_restriction.size()), adjoint.n_time());
  for (Eigen::Index k = 0; k < adjoint.n_time(); ++k) {
    control.col(k) = recover_control(model, adjoint.values().col(k));
  }
  return SnapshotMatrix(std::move(control), adjoint.dt(), adjoint.t0(), "control");
}

}  // namespace

PartitionedModel train(const SnapshotMatrix& state, const SnapshotMatrix& adjoint,
                       const SnapshotMatrix& desired, double alpha,
                       std::vector<Eigen::Index> control_restriction, const TrainOptions& options) {
  if (!(alpha > 0.0)) throw InvalidArgument("train: alpha must be positive");
  if (state.n_time() < 2) throw InvalidArgument("train: need at least 2 snapshots");
  CheckCompatible(state, adjoint, "adjoint");
  CheckCompatible(state, desired, "desired");
  if (options.input_source.state == InputKind::kState) {
    throw InvalidArgument("train: the state model cannot use its own snapshots as input");
  }
  if (control_restriction.empty()) throw InvalidArgument("train: control restriction is empty");
  for (const Eigen::Index dof : control_restriction) {
    if (dof < 0 || dof >= adjoint.n_dof()) {
      throw InvalidArgument("train: control restriction index " + std::to_string(dof) +
                            " outside adjoint dofs");
    }
  }

  FitOptions state_fit{options.state_rank, options.state_rank_omega, options.demean_state};
  FitOptions adjoint_fit{options.adjoint_rank, options.adjoint_rank_omega, options.demean_adjoint};
  const Eigen::MatrixXd state_inputs = InputsFor(options.input_source.state, desired, state);
  Eigen::MatrixXd adjoint_inputs = InputsFor(options.input_source.adjoint, desired, state);

  auto state_job = std::async(std::launch::async, [&] {
    return fit(state.with_label("state"), state_inputs, state_fit);
  });
  DmdcModel adjoint_model = [&] {
    if (options.adjoint_direction == TimeDirection::kForward) {
      return fit(adjoint.with_label("adjoint"), adjoint_inputs, adjoint_fit);
    }
    // The reversed sequence starts from the terminal adjoint; the step from
    // z_j to z_{j-1} is driven by the input sampled at t_j.
    const SnapshotMatrix flipped(Reversed(adjoint.values()), adjoint.dt(), adjoint.t0(), "adjoint");
    const Eigen::MatrixXd flipped_inputs =
        adjoint_inputs.rows() > 0 ? Reversed(adjoint_inputs) : adjoint_inputs;
    return fit(flipped, flipped_inputs, adjoint_fit);
  }();

  PartitionedModel model;
  model.state_model = state_job.get();
  model.adjoint_model = std::move(adjoint_model);
  model.alpha = alpha;
  model.control_restriction = std::move(control_restriction);
  model.input_source = options.input_source;
  model.adjoint_direction = options.adjoint_direction;
  model.n_train = state.n_time();
  model.last_state = state.values().col(state.n_time() - 1);
  model.last_adjoint = adjoint.values().col(adjoint.n_time() - 1);
  model.dt = state.dt();
  model.t0 = state.t0();
  return model;
}

Eigen::VectorXd recover_control(const PartitionedModel& model, const Eigen::VectorXd& adjoint) {
  if (adjoint.size() != model.adjoint_model.n_dof()) {
    throw InvalidArgument("recover_control: adjoint has " + std::to_string(adjoint.size()) +
                          " entries, expected " + std::to_string(model.adjoint_model.n_dof()));
  }
  Eigen::VectorXd u(static_cast<Eigen::Index>(model.control_restriction.size()));
  for (std::size_t c = 0; c < model.control_restriction.size(); ++c) {
    u(static_cast<Eigen::Index>(c)) = adjoint(model.control_restriction[c]) / model.alpha;
  }
  return u;
}

Trajectories reconstruct(const PartitionedModel& model, const Eigen::VectorXd& y0,
                         const Eigen::VectorXd& adjoint_start, const SnapshotMatrix& desired,
                         Eigen::Index n_steps) {
  if (n_steps < 1) throw InvalidArgument("reconstruct: n_steps must be at least 1");
  if (desired.n_time() < n_steps + 1) {
    throw InvalidArgument("reconstruct: desired supplies " + std::to_string(desired.n_time()) +
                          " columns, need " + std::to_string(n_steps + 1));
  }
  if (std::abs(desired.dt() - model.dt) > 1e-12 * model.dt) {
    throw InvalidArgument("reconstruct: desired dt differs from the model dt");
  }
  const SnapshotMatrix window = desired.columns(0, n_steps + 1);
  const Eigen::MatrixXd state_inputs = model.input_source.state == InputKind::kDesired
                                           ? window.values()
                                           : Eigen::MatrixXd(0, n_steps + 1);
  SnapshotMatrix state = rollout(model.state_model, y0, state_inputs, n_steps, window.t0())
                             .with_label("state");

  const Eigen::MatrixXd adjoint_inputs = InputsFor(model.input_source.adjoint, window, state);
  SnapshotMatrix adjoint = [&] {
    if (model.adjoint_direction == TimeDirection::kForward) {
      return rollout(model.adjoint_model, adjoint_start, adjoint_inputs, n_steps, window.t0());
    }
    const Eigen::MatrixXd flipped_inputs =
        adjoint_inputs.rows() > 0 ? Reversed(adjoint_inputs) : adjoint_inputs;
    const SnapshotMatrix backward =
        rollout(model.adjoint_model, adjoint_start, flipped_inputs, n_steps, window.t0());
    return SnapshotMatrix(Reversed(backward.values()), backward.dt(), window.t0(), "adjoint");
  }().with_label("adjoint");

  SnapshotMatrix control = ControlColumns(model, adjoint);
  return {std::move(state), std::move(adjoint), std::move(control)};
}

Trajectories predict(const PartitionedModel& model, const Eigen::VectorXd& last_state,
                     const Eigen::VectorXd& last_adjoint, const SnapshotMatrix& future_desired,
                     Eigen::Index n_steps) {
  if (model.adjoint_direction != TimeDirection::kForward) {
    throw InvalidArgument("predict: forecasting needs a forward-fitted adjoint model");
  }
  if (n_steps < 1) throw InvalidArgument("predict: n_steps must be at least 1");
  if (future_desired.n_time() < n_steps) {
    throw InvalidArgument("predict: future desired supplies " +
                          std::to_string(future_desired.n_time()) + " columns, need " +
                          std::to_string(n_steps));
  }
  if (std::abs(future_desired.dt() - model.dt) > 1e-12 * model.dt) {
    throw InvalidArgument("predict: desired dt differs from the model dt");
  }
  const Eigen::Index cols = std::min(future_desired.n_time(), n_steps + 1);
  const SnapshotMatrix window = future_desired.columns(0, cols);
  const Eigen::MatrixXd state_inputs =
      model.input_source.state == InputKind::kDesired ? window.values() : Eigen::MatrixXd(0, cols);
  const SnapshotMatrix state_full =
      rollout(model.state_model, last_state, state_inputs, n_steps, window.t0());
  const Eigen::MatrixXd adjoint_inputs = InputsFor(model.input_source.adjoint, window, state_full);
  const SnapshotMatrix adjoint_full =
      rollout(model.adjoint_model, last_adjoint, adjoint_inputs, n_steps, window.t0());

  SnapshotMatrix state = state_full.columns(1, n_steps).with_label("state");
  SnapshotMatrix adjoint = adjoint_full.columns(1, n_steps).with_label("adjoint");
  SnapshotMatrix control = ControlColumns(model, adjoint);
  return {std::move(state), std::move(adjoint), std::move(control)};
}

std::string to_string(TimeDirection direction) {
  return direction == TimeDirection::kForward ? "forward" : "reversed";
}

std::string to_string(InputKind kind) {
  switch (kind) {
    case InputKind::kDesired:
      return "desired";
    case InputKind::kState:
      return "state";
    case InputKind::kNone:
      break;
  }
  return "none";
}

TimeDirection time_direction_from_string(const std::string& text) {
  if (text == "forward") return TimeDirection::kForward;
  if (text == "reversed") return TimeDirection::kReversed;
  throw InvalidArgument("unknown adjoint time direction '" + text + "'");
}

InputKind input_kind_from_string(const std::string& text) {
  if (text == "desired") return InputKind::kDesired;
  if (text == "state") return InputKind::kState;
  if (text == "none") return InputKind::kNone;
  throw InvalidArgument("unknown input source '" + text + "'");
}

}  // namespace ocpdmd
