#include "ocpdmd/ocp_config_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>

#include "ocpdmd/errors.hpp"
#include "ocpdmd/model_io.hpp"

namespace ocpdmd {
namespace {

using nlohmann::json;

VelocityField BetaFromJson(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "zero") return {};
  if (type == "constant") {
    const auto v = j.at("value").get<std::vector<double>>();
    if (v.size() != 2) throw InvalidArgument("beta.value must have two entries");
    const std::array<double, 2> value{v[0], v[1]};
    return [value](double, double) { return value; };
  }
  if (type == "poiseuille") {
    const double scale = j.value("scale", 1.0);
    return [scale](double, double y) { return std::array<double, 2>{scale * y * (1.0 - y), 0.0}; };
  }
  throw InvalidArgument("unknown beta type '" + type + "'");
}

DesiredState DesiredFromJson(const json& j, Eigen::Index n_obs) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "linear") {
    const double offset = j.value("offset", 0.0);
    const double slope = j.value("slope", 0.0);
    return [=](double t) { return Eigen::VectorXd::Constant(n_obs, offset + slope * t); };
  }
  if (type == "oscillating") {
    const double scale = j.value("scale", 10.0);
    const double frequency = j.value("frequency", 4.0 * std::numbers::pi);
    const double phase = j.value("phase", -std::numbers::pi);
    return [=](double t) {
      return Eigen::VectorXd::Constant(
          n_obs, scale * (1.0 + t) * (1.0 + 0.5 * std::cos(frequency * t + phase)));
    };
  }
  throw InvalidArgument("unknown desired_state type '" + type + "'");
}

ControlKind ControlKindFromString(const std::string& s) {
  if (s == "boundary") return ControlKind::kBoundary;
  if (s == "distributed") return ControlKind::kDistributed;
  throw InvalidArgument("unknown control_kind '" + s + "'");
}

AdvectionScheme SchemeFromString(const std::string& s) {
  if (s == "centered") return AdvectionScheme::kCentered;
  if (s == "upwind") return AdvectionScheme::kUpwind;
  throw InvalidArgument("unknown advection scheme '" + s + "'");
}

ParabolicOcpConfig FromJson(const json& doc) {
  static const std::vector<std::string> kKnown = {
      "preset", "name", "domain", "nx", "ny", "epsilon", "beta", "alpha", "control_kind",
      "control_region", "obs_region", "dirichlet_nodes", "dirichlet_value", "desired_state",
      "y0", "dt", "n_steps", "advection"};
  if (!doc.is_object()) throw InvalidArgument("config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (std::find(kKnown.begin(), kKnown.end(), key) == kKnown.end()) {
      throw InvalidArgument("unknown config key '" + key + "'");
    }
  }

  ParabolicOcpConfig c;
  if (doc.contains("preset")) {
    const std::string name = doc.at("preset").get<std::string>();
    if (name == "graetz_analog") {
      c = benchmark_graetz_analog(doc.value("nx", Eigen::Index{31}), doc.value("ny", Eigen::Index{11}));
    } else if (name == "distributed_analog") {
      c = benchmark_distributed_analog(doc.value("nx", Eigen::Index{21}));
    } else {
      throw InvalidArgument("unknown preset '" + name + "'");
    }
    for (const char* key : {"domain", "control_region", "obs_region", "dirichlet_nodes", "control_kind"}) {
      if (doc.contains(key)) {
        throw InvalidArgument(std::string("'") + key + "' cannot override a preset geometry");
      }
    }
  } else {
    for (const char* key : {"domain", "nx", "ny", "epsilon", "alpha", "control_kind",
                            "control_region", "obs_region", "dirichlet_nodes", "desired_state",
                            "dt", "n_steps"}) {
      if (!doc.contains(key)) throw InvalidArgument(std::string("config lacks '") + key + "'");
    }
    c.name = "custom";
    c.lx = doc.at("domain").at("lx").get<double>();
    c.ly = doc.at("domain").at("ly").get<double>();
    c.nx = doc.at("nx").get<Eigen::Index>();
    c.ny = doc.at("ny").get<Eigen::Index>();
    c.control_kind = ControlKindFromString(doc.at("control_kind").get<std::string>());
    c.control_region = doc.at("control_region").get<std::vector<Eigen::Index>>();
    c.obs_region = doc.at("obs_region").get<std::vector<Eigen::Index>>();
    c.dirichlet_nodes = doc.at("dirichlet_nodes").get<std::vector<Eigen::Index>>();
  }
  if (doc.contains("name")) c.name = doc.at("name").get<std::string>();
  if (doc.contains("epsilon")) c.epsilon = doc.at("epsilon").get<double>();
  if (doc.contains("beta")) c.beta = BetaFromJson(doc.at("beta"));
  if (doc.contains("alpha")) c.alpha = doc.at("alpha").get<double>();
  if (doc.contains("dirichlet_value")) c.dirichlet_value = doc.at("dirichlet_value").get<double>();
  if (doc.contains("desired_state")) {
    c.desired_state = DesiredFromJson(doc.at("desired_state"), static_cast<Eigen::Index>(c.obs_region.size()));
  }
  if (doc.contains("y0")) {
    const auto y0 = doc.at("y0").get<std::vector<double>>();
    c.y0 = Eigen::Map<const Eigen::VectorXd>(y0.data(), static_cast<Eigen::Index>(y0.size()));
  }
  if (doc.contains("dt")) c.dt = doc.at("dt").get<double>();
  if (doc.contains("n_steps")) c.n_steps = doc.at("n_steps").get<Eigen::Index>();
  if (doc.contains("advection")) c.advection = SchemeFromString(doc.at("advection").get<std::string>());
  validate(c);
  return c;
}

}  // namespace

ParabolicOcpConfig preset(const std::string& name) {
  if (name == "graetz_analog") return benchmark_graetz_analog();
  if (name == "distributed_analog") return benchmark_distributed_analog();
  throw InvalidArgument("unknown preset '" + name + "'");
}

ParabolicOcpConfig config_from_json(const nlohmann::json& doc) {
  try {
    return FromJson(doc);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }
}

ParabolicOcpConfig load_config(const std::filesystem::path& path) {
  try {
    return config_from_json(read_json(path));
  } catch (const FormatError& e) {
    throw InvalidArgument(e.what());
  }
}

nlohmann::json config_summary(const ParabolicOcpConfig& config) {
  return {{"name", config.name},
          {"lx", config.lx},
          {"ly", config.ly},
          {"nx", config.nx},
          {"ny", config.ny},
          {"epsilon", config.epsilon},
          {"alpha", config.alpha},
          {"control_kind", config.control_kind == ControlKind::kBoundary ? "boundary" : "distributed"},
          {"n_control_nodes", config.control_region.size()},
          {"n_obs_nodes", config.obs_region.size()},
          {"dirichlet_value", config.dirichlet_value},
          {"dt", config.dt},
          {"n_steps", config.n_steps},
          {"advection", config.advection == AdvectionScheme::kUpwind ? "upwind" : "centered"}};
}

std::string digest_hex(const std::string& bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (const char ch : bytes) {
    hash ^= static_cast<unsigned char>(ch);
    hash *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace ocpdmd
