// ocpdmd: FOM solves, partitioned surrogate fits, rollouts and sweeps.
//
// Exit codes: 0 ok, 2 usage or input error, 3 solver failure, 4 fit failure.
// Diagnostics go to stderr; stdout carries one JSON summary line.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "ocpdmd/errors.hpp"
#include "ocpdmd/kernels.hpp"
#include "ocpdmd/metrics.hpp"
#include "ocpdmd/model_io.hpp"
#include "ocpdmd/ocp_config_io.hpp"
#include "ocpdmd/ocp_fom.hpp"
#include "ocpdmd/partitioned.hpp"
#include "ocpdmd/snapshots.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ocpdmd;

namespace {

constexpr const char* kVersion = "1.0.0";

enum ExitCode { kOk = 0, kUsage = 2, kSolver = 3, kFit = 4 };

// Failure with a chosen exit code, raised after the library error was mapped.
struct CommandError {
  int code;
  std::string message;
};

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string FileDigest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return digest_hex(buf.str());
}

// Maps library exceptions thrown while reading inputs to exit 2.
template <typename F>
auto Validating(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const std::exception& e) {
    throw CommandError{kUsage, e.what()};
  }
}

SnapshotMatrix LoadSnapshots(const std::string& path, const std::string& label) {
  return Validating([&] { return load(path).with_label(label); });
}

void PrepareOut(const fs::path& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw CommandError{kUsage, "cannot create output directory " + out.string() + ": " + ec.message()};
}

json Outputs(const fs::path& out, const std::vector<std::string>& names) {
  json doc = json::object();
  for (const auto& name : names) {
    doc[name] = {{"path", name}, {"digest", FileDigest(out / name)}};
  }
  return doc;
}

json Versions() {
  return {{"ocpdmd", kVersion},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                        "." + std::to_string(EIGEN_MINOR_VERSION)},
          {"snapshot_format", "SNP1"}};
}

json CurveJson(const ErrorCurve& curve) {
  return {{"variable", curve.variable},
          {"kind", to_string(curve.kind)},
          {"abscissae", curve.abscissae},
          {"values", curve.values},
          {"undefined", curve.undefined},
          {"mean", curve.values.empty() ? 0.0 : curve.mean()}};
}

void CheckDt(const SnapshotMatrix& s, double dt, const std::string& what) {
  if (std::abs(s.dt() - dt) > 1e-12 * dt) {
    throw CommandError{kUsage, what + " has dt " + std::to_string(s.dt()) + ", expected " + std::to_string(dt)};
  }
}

// Options shared by fit and sweep.
struct SurrogateFlags {
  std::vector<int> ranks{4, 3};
  std::vector<int> omega_ranks;
  std::optional<double> alpha;
  std::string fom_manifest;
  std::string direction = "forward";
  std::string adjoint_input = "desired";
  bool demean_state = false;
  bool demean_adjoint = false;

  void Register(CLI::App* cmd) {
    cmd->add_option("--ranks", ranks, "state,adjoint output ranks")->delimiter(',')->expected(2);
    cmd->add_option("--omega-ranks", omega_ranks, "state,adjoint stacked-SVD ranks")
        ->delimiter(',')
        ->expected(2);
    cmd->add_option("--alpha", alpha, "control penalty; read from --fom-manifest when omitted");
    cmd->add_option("--fom-manifest", fom_manifest, "manifest written by `fom`");
    cmd->add_option("--adjoint-direction", direction, "forward or reversed")
        ->check(CLI::IsMember({"forward", "reversed"}));
    cmd->add_option("--adjoint-input", adjoint_input, "desired, state or none")
        ->check(CLI::IsMember({"desired", "state", "none"}));
    cmd->add_flag("--demean-state", demean_state);
    cmd->add_flag("--demean-adjoint", demean_adjoint);
  }

  TrainOptions Options() const {
    TrainOptions opt;
    if (ranks.size() != 2 || ranks[0] < 1 || ranks[1] < 1) {
      throw CommandError{kUsage, "--ranks needs two positive integers"};
    }
    opt.state_rank = FixedRank{ranks[0]};
    opt.adjoint_rank = FixedRank{ranks[1]};
    if (!omega_ranks.empty()) {
      if (omega_ranks[0] < ranks[0] || omega_ranks[1] < ranks[1]) {
        throw CommandError{kUsage, "--omega-ranks must not be below --ranks"};
      }
      opt.state_rank_omega = FixedRank{omega_ranks[0]};
      opt.adjoint_rank_omega = FixedRank{omega_ranks[1]};
    }
    opt.adjoint_direction = Validating([&] { return time_direction_from_string(direction); });
    opt.input_source.adjoint = Validating([&] { return input_kind_from_string(adjoint_input); });
    opt.demean_state = demean_state;
    opt.demean_adjoint = demean_adjoint;
    return opt;
  }

  json Describe() const {
    return {{"ranks", ranks},
            {"omega_ranks", omega_ranks},
            {"adjoint_time_direction", direction},
            {"adjoint_input", adjoint_input},
            {"demean_state", demean_state},
            {"demean_adjoint", demean_adjoint}};
  }
};

struct ControlSetup {
  double alpha = 0.0;
  std::vector<Eigen::Index> restriction;
  std::optional<json> manifest;
};

// alpha and the control restriction come from the FOM manifest unless given;
// without a manifest every adjoint dof is a control dof.
ControlSetup ResolveControl(const SurrogateFlags& flags, Eigen::Index n_dof) {
  ControlSetup setup;
  if (!flags.fom_manifest.empty()) {
    setup.manifest = Validating([&] { return read_json(flags.fom_manifest); });
    try {
      setup.alpha = setup.manifest->at("alpha").get<double>();
      setup.restriction = setup.manifest->at("control_restriction").get<std::vector<Eigen::Index>>();
    } catch (const json::exception& e) {
      throw CommandError{kUsage, std::string("fom manifest: ") + e.what()};
    }
  }
  if (flags.alpha) {
    if (setup.manifest && *flags.alpha != setup.alpha) {
      std::cerr << "warning: --alpha " << *flags.alpha << " overrides manifest alpha " << setup.alpha << "\n";
    }
    setup.alpha = *flags.alpha;
  }
  if (!(setup.alpha > 0.0)) throw CommandError{kUsage, "alpha must be given (--alpha or --fom-manifest) and positive"};
  if (setup.restriction.empty()) {
    std::cerr << "note: no control restriction given; treating every adjoint dof as a control dof\n";
    for (Eigen::Index i = 0; i < n_dof; ++i) setup.restriction.push_back(i);
  }
  for (const auto dof : setup.restriction) {
    if (dof < 0 || dof >= n_dof) {
      throw CommandError{kUsage, "control restriction index " + std::to_string(dof) + " outside " +
                                     std::to_string(n_dof) + " adjoint dofs"};
    }
  }
  return setup;
}

// Resolves FOM output paths from a manifest when the explicit flags are empty.
void FillFromManifest(const std::string& manifest_path, std::string& state, std::string& adjoint,
                      std::string& desired, std::string* control) {
  if (manifest_path.empty()) return;
  const json doc = Validating([&] { return read_json(manifest_path); });
  const fs::path dir = fs::path(manifest_path).parent_path();
  auto pick = [&](std::string& target, const char* key) {
    if (!target.empty()) return;
    if (!doc.contains("outputs") || !doc["outputs"].contains(key)) return;
    target = (dir / doc["outputs"][key]["path"].get<std::string>()).string();
  };
  pick(state, "state.snp");
  pick(adjoint, "adjoint.snp");
  pick(desired, "desired.snp");
  if (control != nullptr) pick(*control, "control.snp");
}

// ---------------------------------------------------------------- fom

struct FomFlags {
  std::string preset;
  std::string config;
  std::string out;
};

json RunFom(const FomFlags& flags, const std::string& command_line) {
  if (flags.preset.empty() == flags.config.empty()) {
    throw CommandError{kUsage, "exactly one of --preset and --config is required"};
  }
  ParabolicOcpConfig config;
  std::string config_text;
  if (!flags.preset.empty()) {
    config = Validating([&] { return preset(flags.preset); });
    config_text = json{{"preset", flags.preset}}.dump();
  } else {
    const json doc = Validating([&] { return read_json(flags.config); });
    config = Validating([&] { return config_from_json(doc); });
    config_text = doc.dump();
  }
  const DiscreteOperators ops = Validating([&] {
    validate(config);
    return assemble(config);
  });
  for (const auto& w : ops.warnings) std::cerr << "warning: " << w << "\n";

  OcpSolution solution = [&] {
    try {
      return solve_fom(config, ops);
    } catch (const SolverError& e) {
      throw CommandError{kSolver, e.what()};
    }
  }();

  const fs::path out(flags.out);
  PrepareOut(out);
  save_binary(solution.state, out / "state.snp");
  save_binary(solution.control, out / "control.snp");
  save_binary(solution.adjoint, out / "adjoint.snp");
  save_binary(solution.desired, out / "desired.snp");

  json manifest;
  manifest["format"] = "ocpdmd-fom-run";
  manifest["command"] = command_line;
  manifest["config"] = config_summary(config);
  manifest["config_hash"] = digest_hex(config_text);
  manifest["alpha"] = config.alpha;
  manifest["control_restriction"] = ops.control_dofs;
  manifest["n_y"] = ops.n_y;
  manifest["n_u"] = ops.n_u;
  manifest["n_time"] = solution.state.n_time();
  manifest["dt"] = config.dt;
  manifest["kkt_dimension"] = solution.kkt_dimension;
  manifest["objective"] = solution.objective;
  manifest["kkt_residual"] = solution.kkt_residual;
  manifest["max_cell_peclet"] = ops.max_cell_peclet;
  manifest["warnings"] = solution.warnings;
  manifest["outputs"] = Outputs(out, {"state.snp", "control.snp", "adjoint.snp", "desired.snp"});
  manifest["versions"] = Versions();
  manifest["timing"] = {{"fom_seconds", solution.wall_time}};
  write_json_atomically(manifest, out / "manifest.json");

  return {{"command", "fom"},
          {"manifest", (out / "manifest.json").string()},
          {"kkt_dimension", solution.kkt_dimension},
          {"objective", solution.objective},
          {"kkt_residual", solution.kkt_residual},
          {"alpha", config.alpha},
          {"fom_seconds", solution.wall_time}};
}

// ---------------------------------------------------------------- fit

struct DataFlags {
  std::string state;
  std::string adjoint;
  std::string desired;
  std::string control;
};

struct FitFlags {
  DataFlags data;
  SurrogateFlags surrogate;
  std::optional<int> train;
  std::string out;
};

json RunFit(FitFlags flags) {
  FillFromManifest(flags.surrogate.fom_manifest, flags.data.state, flags.data.adjoint, flags.data.desired,
                   nullptr);
  if (flags.data.state.empty() || flags.data.adjoint.empty() || flags.data.desired.empty()) {
    throw CommandError{kUsage, "--state, --adjoint and --desired are required (or --fom-manifest)"};
  }
  SnapshotMatrix state = LoadSnapshots(flags.data.state, "state");
  SnapshotMatrix adjoint = LoadSnapshots(flags.data.adjoint, "adjoint");
  SnapshotMatrix desired = LoadSnapshots(flags.data.desired, "desired");
  CheckDt(adjoint, state.dt(), "adjoint");
  CheckDt(desired, state.dt(), "desired");
  if (adjoint.n_time() != state.n_time() || desired.n_time() != state.n_time()) {
    throw CommandError{kUsage, "state, adjoint and desired column counts differ"};
  }
  if (flags.train) {
    if (*flags.train < 2 || *flags.train > state.n_time()) {
      throw CommandError{kUsage, "--train must lie in [2, " + std::to_string(state.n_time()) + "]"};
    }
    state = state.columns(0, *flags.train);
    adjoint = adjoint.columns(0, *flags.train);
    desired = desired.columns(0, *flags.train);
  }
  const TrainOptions options = flags.surrogate.Options();
  const ControlSetup control = ResolveControl(flags.surrogate, adjoint.n_dof());

  const auto start = Clock::now();
  PartitionedModel model = [&] {
    try {
      return train(state, adjoint, desired, control.alpha, control.restriction, options);
    } catch (const std::exception& e) {
      throw CommandError{kFit, e.what()};
    }
  }();
  const double fit_seconds = SecondsSince(start);
  for (const auto* m : {&model.state_model, &model.adjoint_model}) {
    for (const auto& w : m->warnings) std::cerr << "warning: " << m->label << ": " << w << "\n";
  }

  const fs::path out(flags.out);
  PrepareOut(out);
  json extra;
  // Relative to the model file, so a run directory can be moved as a whole.
  auto from_model = [&](const std::string& p) {
    return fs::proximate(fs::absolute(p), fs::absolute(out)).generic_string();
  };
  extra["training_data"] = {{"state", from_model(flags.data.state)},
                            {"adjoint", from_model(flags.data.adjoint)},
                            {"desired", from_model(flags.data.desired)},
                            {"desired_digest", FileDigest(flags.data.desired)}};
  extra["options"] = flags.surrogate.Describe();
  save_partitioned_model(model, out / "model.json", extra);

  return {{"command", "fit"},
          {"model", (out / "model.json").string()},
          {"n_train", model.n_train},
          {"state_ranks", {model.state_model.rank_output, model.state_model.rank_omega}},
          {"adjoint_ranks", {model.adjoint_model.rank_output, model.adjoint_model.rank_omega}},
          {"alpha", model.alpha},
          {"fit_seconds", fit_seconds}};
}

// ---------------------------------------------------------------- reconstruct / predict

struct RolloutFlags {
  std::string model;
  DataFlags data;
  std::string fom_manifest;
  std::optional<int> steps;
  std::string out;
};

PartitionedModel LoadModel(const std::string& path) {
  return Validating([&] { return load_partitioned_model(path); });
}

std::string TrainingDesired(const std::string& model_path) {
  const json doc = Validating([&] { return read_json(model_path); });
  if (!doc.contains("training_data")) return {};
  const std::string desired = doc["training_data"].value("desired", std::string());
  if (desired.empty()) return {};
  return (fs::path(model_path).parent_path() / desired).lexically_normal().string();
}

void WriteTrajectories(const Trajectories& traj, const fs::path& out, const std::string& suffix) {
  save_binary(traj.state, out / ("state_" + suffix + ".snp"));
  save_binary(traj.adjoint, out / ("adjoint_" + suffix + ".snp"));
  save_binary(traj.control, out / ("control_" + suffix + ".snp"));
}

json RunReconstruct(RolloutFlags flags) {
  const PartitionedModel model = LoadModel(flags.model);
  FillFromManifest(flags.fom_manifest, flags.data.state, flags.data.adjoint, flags.data.desired,
                   &flags.data.control);
  if (flags.data.desired.empty()) flags.data.desired = TrainingDesired(flags.model);
  if (flags.data.state.empty() || flags.data.adjoint.empty() || flags.data.desired.empty()) {
    throw CommandError{kUsage, "--state, --adjoint and --desired are required (or --fom-manifest)"};
  }
  const SnapshotMatrix state = LoadSnapshots(flags.data.state, "state");
  const SnapshotMatrix adjoint = LoadSnapshots(flags.data.adjoint, "adjoint");
  const SnapshotMatrix desired = LoadSnapshots(flags.data.desired, "desired");
  std::optional<SnapshotMatrix> control;
  if (!flags.data.control.empty()) control = LoadSnapshots(flags.data.control, "control");
  CheckDt(state, model.dt, "state");
  CheckDt(adjoint, model.dt, "adjoint");
  CheckDt(desired, model.dt, "desired");
  if (control) CheckDt(*control, model.dt, "control");
  if (state.n_dof() != model.state_model.n_dof() || adjoint.n_dof() != model.adjoint_model.n_dof()) {
    throw CommandError{kUsage, "snapshot dof counts do not match the model"};
  }
  const Eigen::Index available = std::min({state.n_time(), adjoint.n_time(), desired.n_time()});
  const Eigen::Index steps = flags.steps ? *flags.steps : available - 1;
  if (steps < 1 || steps + 1 > available) {
    throw CommandError{kUsage, "--steps must lie in [1, " + std::to_string(available - 1) + "]"};
  }
  const Eigen::VectorXd adjoint_start = model.adjoint_direction == TimeDirection::kForward
                                            ? adjoint.column(0)
                                            : Eigen::VectorXd(adjoint.column(steps));

  const auto start = Clock::now();
  const Trajectories traj = [&] {
    try {
      return reconstruct(model, state.column(0), adjoint_start, desired, steps);
    } catch (const std::exception& e) {
      throw CommandError{kFit, e.what()};
    }
  }();
  const double seconds = SecondsSince(start);

  const ErrorCurve state_curve = reconstruction_curve(state.columns(0, steps + 1), traj.state);
  const ErrorCurve adjoint_curve = reconstruction_curve(adjoint.columns(0, steps + 1), traj.adjoint);
  std::optional<ErrorCurve> control_curve;
  if (control) control_curve = reconstruction_curve(control->columns(0, steps + 1), traj.control);

  const fs::path out(flags.out);
  PrepareOut(out);
  WriteTrajectories(traj, out, "reconstruction");
  write_curve_csv(state_curve, out / "errors_state.csv");
  write_curve_csv(adjoint_curve, out / "errors_adjoint.csv");
  json report = {{"kind", "reconstruction"},
                 {"steps", steps},
                 {"state", CurveJson(state_curve)},
                 {"adjoint", CurveJson(adjoint_curve)},
                 {"timing", {{"reconstruct_seconds", seconds}}}};
  if (control_curve) {
    write_curve_csv(*control_curve, out / "errors_control.csv");
    report["control"] = CurveJson(*control_curve);
  }
  write_json_atomically(report, out / "report.json");

  json summary = {{"command", "reconstruct"},
                  {"steps", steps},
                  {"mean_error_state", state_curve.mean()},
                  {"mean_error_adjoint", adjoint_curve.values.empty() ? 0.0 : adjoint_curve.mean()},
                  {"seconds", seconds}};
  if (control_curve && !control_curve->values.empty()) summary["mean_error_control"] = control_curve->mean();
  return summary;
}

json RunPredict(RolloutFlags flags) {
  const PartitionedModel model = LoadModel(flags.model);
  FillFromManifest(flags.fom_manifest, flags.data.state, flags.data.adjoint, flags.data.desired,
                   &flags.data.control);
  if (flags.data.desired.empty()) flags.data.desired = TrainingDesired(flags.model);
  if (flags.data.desired.empty()) throw CommandError{kUsage, "--desired is required"};
  if (model.adjoint_direction != TimeDirection::kForward) {
    throw CommandError{kUsage, "predict needs a forward-fitted adjoint model"};
  }
  const Eigen::Index steps = flags.steps.value_or(20);
  if (steps < 1) throw CommandError{kUsage, "--steps must be positive"};
  const SnapshotMatrix desired = LoadSnapshots(flags.data.desired, "desired");
  CheckDt(desired, model.dt, "desired");
  // The desired trajectory is indexed like the training data.
  const Eigen::Index first = model.n_train - 1;
  if (desired.n_time() < first + steps) {
    throw CommandError{kUsage, "desired supplies " + std::to_string(desired.n_time()) + " columns, need " +
                                   std::to_string(first + steps)};
  }
  const SnapshotMatrix future = desired.columns(first, desired.n_time() - first);

  // Optional truth over the forecast window [n_train, n_train + steps).
  std::optional<SnapshotMatrix> truth_state;
  std::optional<SnapshotMatrix> truth_adjoint;
  std::optional<SnapshotMatrix> truth_control;
  auto load_truth = [&](const std::string& path, const std::string& label, std::optional<SnapshotMatrix>& dst) {
    if (path.empty()) return;
    const SnapshotMatrix s = LoadSnapshots(path, label);
    CheckDt(s, model.dt, label);
    if (s.n_time() < model.n_train + steps) {
      throw CommandError{kUsage, label + " truth has too few columns for the forecast window"};
    }
    dst = s.columns(model.n_train, steps);
  };
  load_truth(flags.data.state, "state", truth_state);
  load_truth(flags.data.adjoint, "adjoint", truth_adjoint);
  load_truth(flags.data.control, "control", truth_control);

  const auto start = Clock::now();
  const Trajectories traj = [&] {
    try {
      return predict(model, model.last_state, model.last_adjoint, future, steps);
    } catch (const std::exception& e) {
      throw CommandError{kFit, e.what()};
    }
  }();
  const double seconds = SecondsSince(start);

  json errors = json::object();
  auto score = [&](const std::optional<SnapshotMatrix>& truth, const SnapshotMatrix& pred, const char* name) {
    if (!truth) return;
    try {
      errors[name] = mean_prediction_error(*truth, pred);
    } catch (const InvalidArgument& e) {
      errors[name] = nullptr;
      std::cerr << "warning: " << name << ": " << e.what() << "\n";
    }
  };
  score(truth_state, traj.state, "state");
  score(truth_adjoint, traj.adjoint, "adjoint");
  score(truth_control, traj.control, "control");

  const fs::path out(flags.out);
  PrepareOut(out);
  WriteTrajectories(traj, out, "prediction");
  write_json_atomically({{"kind", "prediction"},
                         {"steps", steps},
                         {"first_column", model.n_train},
                         {"mean_errors", errors},
                         {"timing", {{"predict_seconds", seconds}}}},
                        out / "report.json");
  return {{"command", "predict"}, {"steps", steps}, {"mean_errors", errors}, {"seconds", seconds}};
}

// ---------------------------------------------------------------- sweep

struct SweepFlags {
  DataFlags data;
  SurrogateFlags surrogate;
  std::vector<int> sizes{10, 15, 20, 25, 30};
  int test = 20;
  std::string out;
};

json RunSweep(SweepFlags flags) {
  FillFromManifest(flags.surrogate.fom_manifest, flags.data.state, flags.data.adjoint, flags.data.desired,
                   &flags.data.control);
  if (flags.data.state.empty() || flags.data.adjoint.empty() || flags.data.desired.empty()) {
    throw CommandError{kUsage, "--state, --adjoint and --desired are required (or --fom-manifest)"};
  }
  const SnapshotMatrix state = LoadSnapshots(flags.data.state, "state");
  const SnapshotMatrix adjoint = LoadSnapshots(flags.data.adjoint, "adjoint");
  const SnapshotMatrix desired = LoadSnapshots(flags.data.desired, "desired");
  std::optional<SnapshotMatrix> control;
  if (!flags.data.control.empty()) control = LoadSnapshots(flags.data.control, "control");
  CheckDt(adjoint, state.dt(), "adjoint");
  CheckDt(desired, state.dt(), "desired");
  if (control) CheckDt(*control, state.dt(), "control");

  if (flags.sizes.empty()) throw CommandError{kUsage, "--sizes is empty"};
  for (std::size_t i = 0; i < flags.sizes.size(); ++i) {
    if (flags.sizes[i] < 2) throw CommandError{kUsage, "train sizes must be at least 2"};
    if (i > 0 && flags.sizes[i] <= flags.sizes[i - 1]) {
      throw CommandError{kUsage, "--sizes must be strictly increasing"};
    }
  }
  if (flags.test < 1) throw CommandError{kUsage, "--test must be positive"};
  if (flags.sizes.back() + flags.test > state.n_time()) {
    throw CommandError{kUsage, "max size + test = " + std::to_string(flags.sizes.back() + flags.test) +
                                   " exceeds " + std::to_string(state.n_time()) + " snapshots"};
  }
  const TrainOptions options = flags.surrogate.Options();
  const ControlSetup setup = ResolveControl(flags.surrogate, adjoint.n_dof());
  const std::vector<Eigen::Index> sizes(flags.sizes.begin(), flags.sizes.end());

  const SweepResult result = [&] {
    try {
      return sweep_train_size({state, adjoint, desired, control}, sizes, flags.test, setup.alpha,
                              setup.restriction, options);
    } catch (const InvalidArgument& e) {
      throw CommandError{kUsage, e.what()};
    } catch (const std::exception& e) {
      throw CommandError{kFit, e.what()};
    }
  }();

  const fs::path out(flags.out);
  PrepareOut(out);
  write_curve_csv(result.state, out / "sweep_state.csv");
  write_curve_csv(result.adjoint, out / "sweep_adjoint.csv");
  if (result.control) write_curve_csv(*result.control, out / "sweep_control.csv");

  json timing = {{"fit_seconds", result.fit_seconds}, {"predict_seconds", result.predict_seconds}};
  if (setup.manifest && setup.manifest->contains("timing")) {
    const double fom_seconds = (*setup.manifest)["timing"].value("fom_seconds", 0.0);
    if (fom_seconds > 0.0 && result.fit_seconds.back() > 0.0 && result.predict_seconds.back() > 0.0) {
      const TimingReport report =
          timing_report(fom_seconds, result.fit_seconds.back(), result.predict_seconds.back());
      timing["fom_seconds"] = report.fom_seconds;
      timing["speedup_at_max_size"] = report.speedup;
    }
  }
  write_json_atomically(timing, out / "timing.json");

  json report = {{"kind", "prediction_sweep"},
                 {"sizes", sizes},
                 {"test_first_column", result.test_first},
                 {"n_test", result.n_test},
                 {"options", flags.surrogate.Describe()},
                 {"state", CurveJson(result.state)},
                 {"adjoint", CurveJson(result.adjoint)}};
  if (result.control) report["control"] = CurveJson(*result.control);
  write_json_atomically(report, out / "report.json");

  return {{"command", "sweep"},
          {"sizes", sizes},
          {"state", result.state.values},
          {"adjoint", result.adjoint.values},
          {"out", out.string()}};
}

void AddDataFlags(CLI::App* cmd, DataFlags& data, bool with_control) {
  cmd->add_option("--state", data.state, "state snapshots (SNP1 or CSV)");
  cmd->add_option("--adjoint", data.adjoint, "adjoint snapshots");
  cmd->add_option("--desired", data.desired, "desired-state snapshots");
  if (with_control) cmd->add_option("--control", data.control, "control snapshots, for error reports");
}

std::string JoinArgs(int argc, char** argv) {
  std::string text;
  for (int i = 0; i < argc; ++i) {
    if (i > 0) text += ' ';
    text += argv[i];
  }
  return text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partitioned DMDc surrogates for time-dependent optimal control"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  FomFlags fom_flags;
  auto* fom = app.add_subcommand("fom", "solve the full-order optimality system");
  fom->add_option("--preset", fom_flags.preset, "graetz_analog or distributed_analog");
  fom->add_option("--config", fom_flags.config, "JSON config file");
  fom->add_option("--out", fom_flags.out, "output directory")->required();

  FitFlags fit_flags;
  auto* fit_cmd = app.add_subcommand("fit", "train the partitioned surrogate");
  AddDataFlags(fit_cmd, fit_flags.data, false);
  fit_flags.surrogate.Register(fit_cmd);
  fit_cmd->add_option("--train", fit_flags.train, "use only the first N snapshots");
  fit_cmd->add_option("--out", fit_flags.out, "output directory")->required();

  RolloutFlags rec_flags;
  auto* rec = app.add_subcommand("reconstruct", "roll the surrogate over the training window");
  rec->add_option("--model", rec_flags.model, "model.json written by fit")->required();
  AddDataFlags(rec, rec_flags.data, true);
  rec->add_option("--fom-manifest", rec_flags.fom_manifest, "manifest written by `fom`");
  rec->add_option("--steps", rec_flags.steps, "transitions to roll (default: all available)");
  rec->add_option("--out", rec_flags.out, "output directory")->required();

  RolloutFlags pred_flags;
  auto* pred = app.add_subcommand("predict", "forecast past the training window");
  pred->add_option("--model", pred_flags.model, "model.json written by fit")->required();
  AddDataFlags(pred, pred_flags.data, true);
  pred->add_option("--fom-manifest", pred_flags.fom_manifest, "manifest written by `fom`");
  pred->add_option("--steps", pred_flags.steps, "forecast length (default 20)");
  pred->add_option("--out", pred_flags.out, "output directory")->required();

  SweepFlags sweep_flags;
  auto* sweep = app.add_subcommand("sweep", "prediction error against training size");
  AddDataFlags(sweep, sweep_flags.data, true);
  sweep_flags.surrogate.Register(sweep);
  sweep->add_option("--sizes", sweep_flags.sizes, "strictly increasing train sizes")->delimiter(',');
  sweep->add_option("--test", sweep_flags.test, "fixed test window length");
  sweep->add_option("--out", sweep_flags.out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cout << json{{"status", "error"}, {"exit_code", kUsage}, {"message", e.what()}}.dump() << std::endl;
    return kUsage;
  }

  json summary;
  int code = kOk;
  try {
    if (*fom) {
      summary = RunFom(fom_flags, JoinArgs(argc, argv));
    } else if (*fit_cmd) {
      summary = RunFit(fit_flags);
    } else if (*rec) {
      summary = RunReconstruct(rec_flags);
    } else if (*pred) {
      summary = RunPredict(pred_flags);
    } else {
      summary = RunSweep(sweep_flags);
    }
    summary["status"] = "ok";
    summary["threads"] = kernels::thread_count();
  } catch (const CommandError& e) {
    code = e.code;
    std::cerr << "error: " << e.message << "\n";
    summary = {{"status", "error"}, {"exit_code", code}, {"message", e.message}};
  } catch (const std::exception& e) {
    code = kFit;
    std::cerr << "error: " << e.what() << "\n";
    summary = {{"status", "error"}, {"exit_code", code}, {"message", e.what()}};
  }
  std::cout << summary.dump() << std::endl;
  return code;
}
