#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ocpdmd/partitioned.hpp"
#include "ocpdmd/snapshots.hpp"

namespace ocpdmd {

/// ||truth - approx||_2 / ||truth||_2. A zero reference gives 0 when approx is
/// also zero and nullopt ("undefined, zero reference") otherwise.
std::optional<double> pointwise_relative_error(const Eigen::VectorXd& truth,
                                               const Eigen::VectorXd& approx);

enum class CurveKind { kReconstruction, kPredictionSweep };

struct ErrorCurve {
  std::vector<double> abscissae;  // time index k, or train size
  std::vector<double> values;
  std::string variable;
  CurveKind kind = CurveKind::kReconstruction;
  /// Abscissae whose error is undefined (zero reference); not in `values`.
  std::vector<double> undefined;

  /// Mean of `values` over entries whose abscissa lies in [from, to].
  double mean(double from, double to) const;
  double mean() const;
};

/// E_k for every column, in column order.
ErrorCurve reconstruction_curve(const SnapshotMatrix& truth, const SnapshotMatrix& approx);

/// Arithmetic mean of E_k; throws InvalidArgument naming the first column
/// whose error is undefined.
double mean_prediction_error(const SnapshotMatrix& truth_test, const SnapshotMatrix& predicted);

struct SweepData {
  SnapshotMatrix state;
  SnapshotMatrix adjoint;
  SnapshotMatrix desired;
  std::optional<SnapshotMatrix> control;  // truth for the control curve
};

struct SweepResult {
  ErrorCurve state;
  ErrorCurve adjoint;
  std::optional<ErrorCurve> control;
  std::vector<double> fit_seconds;      // per size
  std::vector<double> predict_seconds;  // per size
  Eigen::Index test_first = 0;          // first column of the fixed test window
  Eigen::Index n_test = 0;
};

/// For each train size s: train on the first s columns, forecast up to the
/// fixed test window [max(sizes), max(sizes) + n_test) and record the mean
/// prediction error there. Sizes are evaluated concurrently; results follow
/// the order of `sizes`.
SweepResult sweep_train_size(const SweepData& data, const std::vector<Eigen::Index>& sizes,
                             Eigen::Index n_test, double alpha,
                             const std::vector<Eigen::Index>& control_restriction,
                             const TrainOptions& options = {});

struct TimingReport {
  double fom_seconds = 0.0;
  double fit_seconds = 0.0;
  double predict_seconds = 0.0;
  double speedup = 0.0;
};

TimingReport timing_report(double fom_seconds, double fit_seconds, double predict_seconds);

/// `k,E_k` (reconstruction) or `train_size,mean_error` (sweep) rows.
void write_curve_csv(const ErrorCurve& curve, const std::filesystem::path& path);

std::string to_string(CurveKind kind);

}  // namespace ocpdmd
