#include "ocpdmd/dmdc.hpp"

#include <cmath>

#include "ocpdmd/errors.hpp"
#include "ocpdmd/kernels.hpp"

namespace ocpdmd {
namespace {

Eigen::VectorXd Centered(const DmdcModel& model, const Eigen::VectorXd& x) {
  if (model.normalization && model.normalization->applied) return x - model.normalization->mean;
  return x;
}

// Number of independent input channels; zero-padded or repeated rows do not
// count.
Eigen::Index InputRank(const Eigen::MatrixXd& inputs) {
  if (inputs.rows() == 0 || inputs.cols() == 0) return 0;
  const Eigen::VectorXd sigma = Eigen::BDCSVD<Eigen::MatrixXd>(inputs).singularValues();
  if (sigma(0) == 0.0) return 0;
  return (sigma.array() > kSingularValueFloor * sigma(0)).count();
}

}  // namespace

DmdcModel fit(const ShiftPair& pair, const Eigen::MatrixXd& inputs, const FitOptions& options) {
  const Eigen::Index n = pair.n_dof();
  const Eigen::Index m = pair.n_transitions();
  const Eigen::Index q = inputs.rows();
  if (q > 0 && inputs.cols() != m) {
    throw InvalidArgument("fit: " + std::to_string(inputs.cols()) + " input columns for " +
                          std::to_string(m) + " transitions");
  }
  if (!inputs.allFinite()) throw InvalidArgument("fit: non-finite inputs");
  if (options.rank_omega) {
    const auto* fixed_omega = std::get_if<FixedRank>(&*options.rank_omega);
    const auto* fixed_output = std::get_if<FixedRank>(&options.rank_output);
    if (fixed_omega && fixed_output && fixed_omega->r < fixed_output->r) {
      throw InvalidArgument("fit: rank_omega must be at least rank_output");
    }
  }

  DmdcModel model;
  model.dt = pair.dt;
  model.t0 = pair.t0;

  const TruncatedSvd output_svd = truncated_svd(pair.x_prime, options.rank_output);
  const Eigen::Index r = output_svd.rank();
  if (r == 0) throw RankZeroError("output rank rule selected no modes");
  for (const auto& w : output_svd.warnings) model.warnings.push_back("output svd: " + w);

  Eigen::MatrixXd omega(n + q, m);
  omega.topRows(n) = pair.x;
  if (q > 0) omega.bottomRows(q) = inputs;
  const RankRule omega_rule = options.rank_omega.value_or(FixedRank{r + InputRank(inputs)});
  const TruncatedSvd omega_svd = truncated_svd(omega, omega_rule);
  const Eigen::Index p = omega_svd.rank();
  for (const auto& w : omega_svd.warnings) model.warnings.push_back("stacked svd: " + w);
  if (omega_svd.sigma(p - 1) < kConditioningWarning * omega_svd.sigma(0)) {
    model.warnings.push_back("stacked svd is ill-conditioned (sigma_min/sigma_max = " +
                             std::to_string(omega_svd.sigma(p - 1) / omega_svd.sigma(0)) + ")");
  }

  // X' V~ S~^-1, shared by both reduced operators and the modes.
  const Eigen::MatrixXd xp_v_sinv =
      pair.x_prime * omega_svd.v * omega_svd.sigma.cwiseInverse().asDiagonal();
  const auto u1 = omega_svd.u.topRows(n);
  const Eigen::MatrixXd a_full_times_basis = xp_v_sinv * (u1.transpose() * output_svd.u);

  model.basis = output_svd.u;
  model.a_reduced = output_svd.u.transpose() * a_full_times_basis;
  if (q > 0) {
    model.b_reduced = output_svd.u.transpose() * xp_v_sinv * omega_svd.u.bottomRows(q).transpose();
  } else {
    model.b_reduced.resize(r, 0);
  }
  model.eigen = dense_eig(model.a_reduced);
  model.modes = a_full_times_basis.cast<std::complex<double>>() * model.eigen.eigenvectors;
  model.rank_omega = p;
  model.rank_output = r;
  return model;
}

DmdcModel fit(const SnapshotMatrix& snapshots, const Eigen::MatrixXd& inputs,
              const FitOptions& options) {
  if (snapshots.n_time() < 2) throw InvalidArgument("fit: need at least 2 snapshots");
  const Eigen::Index transitions = snapshots.n_time() - 1;
  if (inputs.rows() > 0 && inputs.cols() < transitions) {
    throw InvalidArgument("fit: " + std::to_string(inputs.cols()) + " input columns for " +
                          std::to_string(transitions) + " transitions");
  }
  const Eigen::MatrixXd used_inputs =
      inputs.rows() > 0 ? Eigen::MatrixXd(inputs.leftCols(transitions))
                        : Eigen::MatrixXd(0, transitions);

  if (!options.demean) {
    DmdcModel model = fit(shift_pair(snapshots), used_inputs, options);
    model.label = snapshots.label();
    return model;
  }
  auto [centered, record] = demean(snapshots);
  DmdcModel model = fit(shift_pair(centered), used_inputs, options);
  model.normalization = std::move(record);
  model.label = snapshots.label();
  return model;
}

Eigen::VectorXd advance(const DmdcModel& model, const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
  if (x.size() != model.n_dof()) throw InvalidArgument("advance: state length mismatch");
  if (u.size() != model.n_input()) throw InvalidArgument("advance: input length mismatch");
  Eigen::VectorXd reduced = model.a_reduced * (model.basis.transpose() * Centered(model, x));
  if (model.n_input() > 0) reduced += model.b_reduced * u;
  Eigen::VectorXd out = model.basis * reduced;
  if (model.normalization && model.normalization->applied) out += model.normalization->mean;
  return out;
}

SnapshotMatrix rollout(const DmdcModel& model, const Eigen::VectorXd& x0,
                       const Eigen::MatrixXd& inputs, Eigen::Index n_steps,
                       std::optional<double> t_start) {
  if (n_steps < 1) throw InvalidArgument("rollout: n_steps must be at least 1");
  if (x0.size() != model.n_dof()) throw InvalidArgument("rollout: initial state length mismatch");
  if (model.n_input() > 0) {
    if (inputs.rows() != model.n_input()) throw InvalidArgument("rollout: input row count mismatch");
    if (inputs.cols() < n_steps) {
      throw InvalidArgument("rollout: " + std::to_string(inputs.cols()) +
                            " input columns for " + std::to_string(n_steps) + " steps");
    }
  }

  const Eigen::Index r = model.rank_output;
  Eigen::MatrixXd reduced(r, n_steps + 1);
  reduced.col(0) = model.basis.transpose() * Centered(model, x0);
  for (Eigen::Index k = 0; k < n_steps; ++k) {
    reduced.col(k + 1).noalias() = model.a_reduced * reduced.col(k);
    if (model.n_input() > 0) reduced.col(k + 1).noalias() += model.b_reduced * inputs.col(k);
  }
  Eigen::MatrixXd lifted = kernels::parallel::lift_columns(model.basis, reduced);
  if (model.normalization && model.normalization->applied) {
    lifted.colwise() += model.normalization->mean;
  }
  return SnapshotMatrix(std::move(lifted), model.dt, t_start.value_or(model.t0), model.label);
}

std::vector<std::complex<double>> eigenvalues(const DmdcModel& model) {
  const auto& values = model.eigen.eigenvalues;
  return {values.data(), values.data() + values.size()};
}

std::vector<std::optional<std::complex<double>>> continuous_frequencies(const DmdcModel& model) {
  std::vector<std::optional<std::complex<double>>> out;
  for (const auto& lambda : eigenvalues(model)) {
    if (lambda == std::complex<double>(0.0, 0.0)) {
      out.emplace_back(std::nullopt);
    } else {
      out.emplace_back(std::log(lambda) / model.dt);
    }
  }
  return out;
}

Eigen::MatrixXd full_state_operator(const DmdcModel& model) {
  return model.basis * model.a_reduced * model.basis.transpose();
}

Eigen::MatrixXd full_input_operator(const DmdcModel& model) {
  return model.basis * model.b_reduced;
}

}  // namespace ocpdmd
