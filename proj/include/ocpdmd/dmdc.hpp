#pragma once

// Dynamic mode decomposition with control.
//
// Given shifted snapshots X, X' and inputs Y (one column per transition), the
// stacked matrix [X; Y] is factored as U~ S~ V~^T (rank p) and X' as
// U^ S^ V^^T (rank r). Writing U~ = [U1; U2] by rows, the reduced operators are
//
//   A~ = U^^T X' V~ S~^-1 U1^T U^      (r x r)
//   B~ = U^^T X' V~ S~^-1 U2^T         (r x q)
//
// and the DMD modes are Phi = X' V~ S~^-1 U1^T U^ W with A~ W = W Lambda.
// The one-step map is x_{k+1} = U^ (A~ U^^T x_k + B~ u_k).

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ocpdmd/numerics.hpp"
#include "ocpdmd/snapshots.hpp"

namespace ocpdmd {

/// Fitted surrogate. Immutable by convention: built by fit() or load_model().
struct DmdcModel {
  Eigen::MatrixXd basis;       // n_dof x r, orthonormal columns
  Eigen::MatrixXd a_reduced;   // r x r
  Eigen::MatrixXd b_reduced;   // r x n_input
  EigenDecomposition eigen;    // of a_reduced
  Eigen::MatrixXcd modes;      // n_dof x r
  Eigen::Index rank_omega = 0;
  Eigen::Index rank_output = 0;
  std::optional<NormalizationRecord> normalization;
  double dt = 1.0;
  double t0 = 0.0;
  std::string label;
  std::vector<std::string> warnings;

  Eigen::Index n_dof() const { return basis.rows(); }
  Eigen::Index n_input() const { return b_reduced.cols(); }
};

struct FitOptions {
  RankRule rank_output = EnergyRank{};
  /// Unset: rank_output + numerical rank of the inputs, clamped to the stacked
  /// matrix size.
  std::optional<RankRule> rank_omega;
  /// Remove the per-row mean of the snapshots before fitting.
  bool demean = false;
};

/// Ratio sigma_min / sigma_max of the truncated stacked SVD below which the
/// fit records a conditioning warning.
inline constexpr double kConditioningWarning = 1e-10;

/// `inputs` is n_input x n_transitions; zero rows means plain DMD.
DmdcModel fit(const ShiftPair& pair, const Eigen::MatrixXd& inputs, const FitOptions& options);

/// Shift-pair fit of a full trajectory. inputs column k drives transition k -> k+1;
/// extra input columns beyond n_time-1 are ignored.
DmdcModel fit(const SnapshotMatrix& snapshots, const Eigen::MatrixXd& inputs,
              const FitOptions& options);

/// basis (a_reduced basis^T x + b_reduced u), with the mean handled when recorded.
Eigen::VectorXd advance(const DmdcModel& model, const Eigen::VectorXd& x, const Eigen::VectorXd& u);

/// n_steps + 1 columns: the projection of x0, then n_steps applications of the
/// one-step map, computed in reduced coordinates and lifted once per column.
/// inputs column k drives step k -> k+1.
SnapshotMatrix rollout(const DmdcModel& model, const Eigen::VectorXd& x0,
                       const Eigen::MatrixXd& inputs, Eigen::Index n_steps,
                       std::optional<double> t_start = std::nullopt);

std::vector<std::complex<double>> eigenvalues(const DmdcModel& model);

/// log(lambda)/dt; nullopt marks a fully decayed mode (lambda == 0).
std::vector<std::optional<std::complex<double>>> continuous_frequencies(const DmdcModel& model);

/// Full-order operators basis a_reduced basis^T and basis b_reduced.
Eigen::MatrixXd full_state_operator(const DmdcModel& model);
Eigen::MatrixXd full_input_operator(const DmdcModel& model);

}  // namespace ocpdmd
