#include "ocpdmd/model_io.hpp"

#include <fstream>
#include <sstream>

#include "ocpdmd/errors.hpp"

namespace ocpdmd {
namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

Eigen::MatrixXd Interleave(const Eigen::MatrixXcd& m) {
  Eigen::MatrixXd out(2 * m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      out(2 * i, j) = m(i, j).real();
      out(2 * i + 1, j) = m(i, j).imag();
    }
  }
  return out;
}

Eigen::MatrixXcd Deinterleave(const Eigen::MatrixXd& m) {
  if (m.rows() % 2 != 0) throw FormatError("complex block has an odd row count");
  Eigen::MatrixXcd out(m.rows() / 2, m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < out.rows(); ++i) out(i, j) = {m(2 * i, j), m(2 * i + 1, j)};
  }
  return out;
}

std::string SaveBlock(const Eigen::MatrixXd& m, double dt, const std::filesystem::path& dir,
                      const std::string& name) {
  const std::string file = name + ".snp";
  save_binary(SnapshotMatrix(m, dt, 0.0, name), dir / file);
  return file;
}

Eigen::MatrixXd LoadBlock(const json& header, const char* key, const std::filesystem::path& dir) {
  if (!header.contains(key)) throw FormatError(std::string("model header lacks '") + key + "'");
  return load_binary(dir / header.at(key).get<std::string>()).values();
}


json VectorJson(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd VectorFromJson(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace

nlohmann::json save_dmdc_model(const DmdcModel& model, const std::filesystem::path& dir,
                               const std::string& prefix) {
  json header;
  header["label"] = model.label;
  header["dt"] = model.dt;
  header["t0"] = model.t0;
  header["n_dof"] = model.n_dof();
  header["n_input"] = model.n_input();
  header["rank_omega"] = model.rank_omega;
  header["rank_output"] = model.rank_output;
  header["warnings"] = model.warnings;
  header["basis"] = SaveBlock(model.basis, model.dt, dir, prefix + "_basis");
  header["a_reduced"] = SaveBlock(model.a_reduced, model.dt, dir, prefix + "_a");
  if (model.n_input() > 0) header["b_reduced"] = SaveBlock(model.b_reduced, model.dt, dir, prefix + "_b");
  header["modes"] = SaveBlock(Interleave(model.modes), model.dt, dir, prefix + "_modes");
  header["eigenvectors"] =
      SaveBlock(Interleave(model.eigen.eigenvectors), model.dt, dir, prefix + "_eigenvectors");
  json eig = json::array();
  for (Eigen::Index i = 0; i < model.eigen.eigenvalues.size(); ++i) {
    eig.push_back({model.eigen.eigenvalues(i).real(), model.eigen.eigenvalues(i).imag()});
  }
  header["eigenvalues"] = eig;
  if (model.normalization && model.normalization->applied) {
    header["normalization_mean"] = VectorJson(model.normalization->mean);
  } else {
    header["normalization_mean"] = nullptr;
  }
  return header;
}

DmdcModel load_dmdc_model(const nlohmann::json& header, const std::filesystem::path& dir) {
  try {
    DmdcModel model;
    model.label = header.at("label").get<std::string>();
    model.dt = header.at("dt").get<double>();
    model.t0 = header.at("t0").get<double>();
    model.rank_omega = header.at("rank_omega").get<Eigen::Index>();
    model.rank_output = header.at("rank_output").get<Eigen::Index>();
    model.warnings = header.value("warnings", std::vector<std::string>{});
    model.basis = LoadBlock(header, "basis", dir);
    model.a_reduced = LoadBlock(header, "a_reduced", dir);
    const auto n_input = header.at("n_input").get<Eigen::Index>();
    model.b_reduced = n_input > 0 ? LoadBlock(header, "b_reduced", dir)
                                  : Eigen::MatrixXd(model.a_reduced.rows(), 0);
    model.modes = Deinterleave(LoadBlock(header, "modes", dir));
    model.eigen.eigenvectors = Deinterleave(LoadBlock(header, "eigenvectors", dir));
    const auto& eig = header.at("eigenvalues");
    model.eigen.eigenvalues.resize(static_cast<Eigen::Index>(eig.size()));
    for (std::size_t i = 0; i < eig.size(); ++i) {
      model.eigen.eigenvalues(static_cast<Eigen::Index>(i)) = {eig[i].at(0).get<double>(),
                                                               eig[i].at(1).get<double>()};
    }
    if (!header.at("normalization_mean").is_null()) {
      model.normalization = NormalizationRecord{VectorFromJson(header.at("normalization_mean")), true};
    }
    const Eigen::Index r = model.rank_output;
    if (model.basis.cols() != r || model.a_reduced.rows() != r || model.a_reduced.cols() != r ||
        model.b_reduced.rows() != r || model.b_reduced.cols() != n_input ||
        model.modes.rows() != model.basis.rows() || model.eigen.eigenvalues.size() != r) {
      throw FormatError("model blocks have inconsistent dimensions");
    }
    if (model.normalization && model.normalization->mean.size() != model.basis.rows()) {
      throw FormatError("normalization mean length mismatch");
    }
    return model;
  } catch (const json::exception& e) {
    throw FormatError(std::string("model header: ") + e.what());
  }
}

void save_partitioned_model(const PartitionedModel& model, const std::filesystem::path& path,
                            const nlohmann::json& extra) {
  const auto dir = path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path();
  const std::string stem = path.stem().string();
  json doc;
  doc["format"] = "ocpdmd-partitioned";
  doc["version"] = kFormatVersion;
  doc["alpha"] = model.alpha;
  doc["control_restriction"] = model.control_restriction;
  doc["input_source"] = {{"state", to_string(model.input_source.state)},
                         {"adjoint", to_string(model.input_source.adjoint)}};
  doc["adjoint_time_direction"] = to_string(model.adjoint_direction);
  doc["n_train"] = model.n_train;
  doc["dt"] = model.dt;
  doc["t0"] = model.t0;
  doc["state_model"] = save_dmdc_model(model.state_model, dir, stem + "_state");
  doc["adjoint_model"] = save_dmdc_model(model.adjoint_model, dir, stem + "_adjoint");
  Eigen::MatrixXd start(model.last_state.size(), 1);
  start.col(0) = model.last_state;
  doc["last_state"] = SaveBlock(start, model.dt, dir, stem + "_last_state");
  start.resize(model.last_adjoint.size(), 1);
  start.col(0) = model.last_adjoint;
  doc["last_adjoint"] = SaveBlock(start, model.dt, dir, stem + "_last_adjoint");
  for (const auto& [key, value] : extra.items()) doc[key] = value;
  write_json_atomically(doc, path);
}

PartitionedModel load_partitioned_model(const std::filesystem::path& path) {
  const json doc = read_json(path);
  const auto dir = path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path();
  try {
    if (doc.value("format", std::string()) != "ocpdmd-partitioned") {
      throw FormatError("not a partitioned model file: " + path.string());
    }
    PartitionedModel model;
    model.alpha = doc.at("alpha").get<double>();
    model.control_restriction = doc.at("control_restriction").get<std::vector<Eigen::Index>>();
    model.input_source.state = input_kind_from_string(doc.at("input_source").at("state"));
    model.input_source.adjoint = input_kind_from_string(doc.at("input_source").at("adjoint"));
    model.adjoint_direction = time_direction_from_string(doc.at("adjoint_time_direction"));
    model.n_train = doc.at("n_train").get<Eigen::Index>();
    model.dt = doc.at("dt").get<double>();
    model.t0 = doc.at("t0").get<double>();
    model.state_model = load_dmdc_model(doc.at("state_model"), dir);
    model.adjoint_model = load_dmdc_model(doc.at("adjoint_model"), dir);
    model.last_state = LoadBlock(doc, "last_state", dir).col(0);
    model.last_adjoint = LoadBlock(doc, "last_adjoint", dir).col(0);
    return model;
  } catch (const json::exception& e) {
    throw FormatError(std::string("model file: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("model file: ") + e.what());
  }
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError("invalid JSON in " + path.string() + ": " + e.what(),
                      FormatError::Location::kByteOffset, e.byte);
  }
}

void write_json_atomically(const nlohmann::json& doc, const std::filesystem::path& path) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw InvalidArgument("cannot write " + path.string());
    out << doc.dump(2) << '\n';
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace ocpdmd
