#include "ocpdmd/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>

#include <omp.h>

#include "ocpdmd/errors.hpp"
#include "ocpdmd/kernels.hpp"

namespace ocpdmd {
namespace {

void CheckShapes(const SnapshotMatrix& a, const SnapshotMatrix& b, const char* what) {
  if (a.n_dof() != b.n_dof() || a.n_time() != b.n_time()) {
    throw InvalidArgument(std::string(what) + ": shape mismatch " + std::to_string(a.n_dof()) + "x" +
                          std::to_string(a.n_time()) + " vs " + std::to_string(b.n_dof()) + "x" +
                          std::to_string(b.n_time()));
  }
}

std::string FormatNumber(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

double Seconds(std::chrono::steady_clock::time_point a, std::chrono::steady_clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

}  // namespace

std::optional<double> pointwise_relative_error(const Eigen::VectorXd& truth,
                                               const Eigen::VectorXd& approx) {
  if (truth.size() != approx.size()) throw InvalidArgument("relative error: length mismatch");
  return kernels::serial::column_relative_errors(truth, approx).front();
}

double ErrorCurve::mean(double from, double to) const {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (abscissae[i] >= from && abscissae[i] <= to) {
      sum += values[i];
      ++count;
    }
  }
  if (count == 0) throw InvalidArgument("error curve has no defined entries in range");
  return sum / static_cast<double>(count);
}

double ErrorCurve::mean() const {
  if (values.empty()) throw InvalidArgument("error curve is empty");
  double sum = 0.0;
  for (const double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

ErrorCurve reconstruction_curve(const SnapshotMatrix& truth, const SnapshotMatrix& approx) {
  CheckShapes(truth, approx, "reconstruction_curve");
  const auto errors = kernels::parallel::column_relative_errors(truth.values(), approx.values());
  ErrorCurve curve;
  curve.variable = truth.label();
  curve.kind = CurveKind::kReconstruction;
  for (std::size_t k = 0; k < errors.size(); ++k) {
    if (errors[k]) {
      curve.abscissae.push_back(static_cast<double>(k));
      curve.values.push_back(*errors[k]);
    } else {
      curve.undefined.push_back(static_cast<double>(k));
    }
  }
  return curve;
}

double mean_prediction_error(const SnapshotMatrix& truth_test, const SnapshotMatrix& predicted) {
  CheckShapes(truth_test, predicted, "mean_prediction_error");
  const auto errors = kernels::parallel::column_relative_errors(truth_test.values(), predicted.values());
  double sum = 0.0;
  for (std::size_t k = 0; k < errors.size(); ++k) {
    if (!errors[k]) {
      throw InvalidArgument("mean_prediction_error: undefined (zero reference) at column " +
                            std::to_string(k));
    }
    sum += *errors[k];
  }
  return sum / static_cast<double>(errors.size());
}

SweepResult sweep_train_size(const SweepData& data, const std::vector<Eigen::Index>& sizes,
                             Eigen::Index n_test, double alpha,
                             const std::vector<Eigen::Index>& control_restriction,
                             const TrainOptions& options) {
  if (sizes.empty()) throw InvalidArgument("sweep: no train sizes");
  if (n_test < 1) throw InvalidArgument("sweep: n_test must be at least 1");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 2) throw InvalidArgument("sweep: train sizes must be at least 2");
    if (i > 0 && sizes[i] <= sizes[i - 1]) {
      throw InvalidArgument("sweep: train sizes must be strictly increasing");
    }
  }
  const Eigen::Index n_time = data.state.n_time();
  const Eigen::Index test_first = sizes.back();
  if (test_first + n_test > n_time) {
    throw InvalidArgument("sweep: largest size " + std::to_string(test_first) + " plus " +
                          std::to_string(n_test) + " test columns exceeds " + std::to_string(n_time));
  }
  if (data.adjoint.n_time() != n_time || data.desired.n_time() != n_time ||
      (data.control && data.control->n_time() != n_time)) {
    throw InvalidArgument("sweep: trajectories differ in length");
  }

  const SnapshotMatrix state_test = data.state.columns(test_first, n_test);
  const SnapshotMatrix adjoint_test = data.adjoint.columns(test_first, n_test);
  const std::optional<SnapshotMatrix> control_test =
      data.control ? std::optional<SnapshotMatrix>(data.control->columns(test_first, n_test))
                   : std::nullopt;

  const std::size_t n = sizes.size();
  std::vector<double> state_err(n), adjoint_err(n), control_err(n), fit_s(n), predict_s(n);
  std::vector<std::exception_ptr> failures(n);

#pragma omp parallel for schedule(dynamic) num_threads(std::min<int>(kernels::thread_count(), static_cast<int>(n)))
  for (std::size_t i = 0; i < n; ++i) {
    try {
      const Eigen::Index s = sizes[i];
      const auto t0 = std::chrono::steady_clock::now();
      const PartitionedModel model =
          train(data.state.columns(0, s), data.adjoint.columns(0, s), data.desired.columns(0, s),
                alpha, control_restriction, options);
      const auto t1 = std::chrono::steady_clock::now();
      const Eigen::Index steps = test_first + n_test - s;
      const Trajectories forecast =
          predict(model, model.last_state, model.last_adjoint,
                  data.desired.columns(s - 1, std::min(steps + 1, n_time - s + 1)), steps);
      const auto t2 = std::chrono::steady_clock::now();
      const Eigen::Index skip = steps - n_test;
      state_err[i] = mean_prediction_error(state_test, forecast.state.columns(skip, n_test));
      adjoint_err[i] = mean_prediction_error(adjoint_test, forecast.adjoint.columns(skip, n_test));
      if (control_test) {
        control_err[i] = mean_prediction_error(*control_test, forecast.control.columns(skip, n_test));
      }
      fit_s[i] = Seconds(t0, t1);
      predict_s[i] = Seconds(t1, t2);
    } catch (...) {
      failures[i] = std::current_exception();
    }
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }

  auto make_curve = [&](const std::vector<double>& values, const char* label) {
    ErrorCurve c;
    c.variable = label;
    c.kind = CurveKind::kPredictionSweep;
    for (std::size_t i = 0; i < n; ++i) c.abscissae.push_back(static_cast<double>(sizes[i]));
    c.values = values;
    return c;
  };
  SweepResult out{make_curve(state_err, "state"), make_curve(adjoint_err, "adjoint"),
                  std::nullopt, fit_s, predict_s, test_first, n_test};
  if (control_test) out.control = make_curve(control_err, "control");
  return out;
}

TimingReport timing_report(double fom_seconds, double fit_seconds, double predict_seconds) {
  if (!(fom_seconds > 0.0) || !(fit_seconds > 0.0) || !(predict_seconds > 0.0)) {
    throw InvalidArgument("timing_report: durations must be positive");
  }
  return {fom_seconds, fit_seconds, predict_seconds, fom_seconds / (fit_seconds + predict_seconds)};
}

void write_curve_csv(const ErrorCurve& curve, const std::filesystem::path& path) {
  std::string text = curve.kind == CurveKind::kReconstruction ? "k,E_k\n" : "train_size,mean_error\n";
  for (std::size_t i = 0; i < curve.values.size(); ++i) {
    text += FormatNumber(curve.abscissae[i]) + "," + FormatNumber(curve.values[i]) + "\n";
  }
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw InvalidArgument("cannot write " + path.string());
    out << text;
  }
  std::filesystem::rename(tmp, path);
}

std::string to_string(CurveKind kind) {
  return kind == CurveKind::kReconstruction ? "reconstruction" : "prediction_sweep";
}

}  // namespace ocpdmd
