#include "ocpdmd/ocp_fom.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <set>

#include <Eigen/SparseLU>

#include "ocpdmd/errors.hpp"
#include "ocpdmd/kernels.hpp"

namespace ocpdmd {
namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

enum class NodeRole { kInterior, kDirichlet, kBoundary };

// Half-width of the control volume of node i along an axis with n nodes.
double Width(Eigen::Index i, Eigen::Index n, double h) {
  return (i == 0 || i == n - 1) ? 0.5 * h : h;
}

struct Grid {
  const ParabolicOcpConfig& config;
  double hx;
  double hy;

  Eigen::Index Node(Eigen::Index i, Eigen::Index j) const { return i + config.nx * j; }
  double X(Eigen::Index i) const { return static_cast<double>(i) * hx; }
  double Y(Eigen::Index j) const { return static_cast<double>(j) * hy; }
  double Wx(Eigen::Index i) const { return Width(i, config.nx, hx); }
  double Wy(Eigen::Index j) const { return Width(j, config.ny, hy); }
  double Area(Eigen::Index node) const {
    return Wx(node % config.nx) * Wy(node / config.nx);
  }
  bool OnBoundary(Eigen::Index node) const {
    const Eigen::Index i = node % config.nx;
    const Eigen::Index j = node / config.nx;
    return i == 0 || j == 0 || i == config.nx - 1 || j == config.ny - 1;
  }
  std::array<double, 2> Beta(double x, double y) const {
    if (!config.beta) return {0.0, 0.0};
    return config.beta(x, y);
  }
};

// A boundary half-segment of length `length` owned by `node`, lying between
// `node` and its boundary neighbour `neighbor`, with outward normal.
struct HalfSegment {
  Eigen::Index node;
  Eigen::Index neighbor;
  double length;
  std::array<double, 2> normal;
};

std::vector<HalfSegment> BoundaryHalfSegments(const Grid& g) {
  std::vector<HalfSegment> out;
  const Eigen::Index nx = g.config.nx;
  const Eigen::Index ny = g.config.ny;
  auto add_edge = [&](auto node_at, Eigen::Index count, double h, std::array<double, 2> normal) {
    for (Eigen::Index s = 0; s + 1 < count; ++s) {
      const Eigen::Index a = node_at(s);
      const Eigen::Index b = node_at(s + 1);
      out.push_back({a, b, 0.5 * h, normal});
      out.push_back({b, a, 0.5 * h, normal});
    }
  };
  add_edge([&](Eigen::Index i) { return g.Node(i, 0); }, nx, g.hx, {0.0, -1.0});
  add_edge([&](Eigen::Index i) { return g.Node(i, ny - 1); }, nx, g.hx, {0.0, 1.0});
  add_edge([&](Eigen::Index j) { return g.Node(0, j); }, ny, g.hy, {-1.0, 0.0});
  add_edge([&](Eigen::Index j) { return g.Node(nx - 1, j); }, ny, g.hy, {1.0, 0.0});
  return out;
}

void CheckNodes(const std::vector<Eigen::Index>& nodes, Eigen::Index n_nodes, const char* what) {
  std::set<Eigen::Index> seen;
  for (const Eigen::Index node : nodes) {
    if (node < 0 || node >= n_nodes) {
      throw InvalidArgument(std::string(what) + ": node " + std::to_string(node) +
                            " outside the grid");
    }
    if (!seen.insert(node).second) {
      throw InvalidArgument(std::string(what) + ": duplicate node " + std::to_string(node));
    }
  }
}

// Accumulates y-rows of K and f for a linear face relation
// row(a) += ca * y_a + cb * y_b, with Dirichlet values moved to the forcing.
struct DynamicsBuilder {
  const std::vector<Eigen::Index>& dof_of_node;
  double g;
  Triplets triplets;
  Eigen::VectorXd lift_forcing;

  void Add(Eigen::Index row_node, Eigen::Index col_node, double value) {
    const Eigen::Index row = dof_of_node[static_cast<std::size_t>(row_node)];
    if (row < 0 || value == 0.0) return;
    const Eigen::Index col = dof_of_node[static_cast<std::size_t>(col_node)];
    if (col < 0) {
      lift_forcing(row) -= value * g;
    } else {
      triplets.emplace_back(row, col, value);
    }
  }
};

SparseMatrix Diagonal(const std::vector<double>& weights) {
  Triplets t;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] != 0.0) t.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i), weights[i]);
  }
  const auto n = static_cast<Eigen::Index>(weights.size());
  return make_sparse(n, n, t, true);
}

void AppendBlock(Triplets& out, const Eigen::SparseMatrix<double>& block, Eigen::Index row0,
                 Eigen::Index col0, double scale) {
  for (Eigen::Index c = 0; c < block.outerSize(); ++c) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(block, c); it; ++it) {
      out.emplace_back(row0 + it.row(), col0 + it.col(), scale * it.value());
    }
  }
}

}  // namespace

void validate(const ParabolicOcpConfig& config) {
  if (config.nx < 3 || config.ny < 3) throw InvalidArgument("grid needs at least 3 nodes per axis");
  if (!(config.lx > 0.0) || !(config.ly > 0.0)) throw InvalidArgument("domain lengths must be positive");
  if (!(config.epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
  if (!(config.alpha > 0.0)) throw InvalidArgument("alpha must be positive");
  if (!(config.dt > 0.0)) throw InvalidArgument("dt must be positive");
  if (config.n_steps < 1) throw InvalidArgument("n_steps must be at least 1");
  if (config.control_region.empty()) throw InvalidArgument("empty control region");
  if (config.obs_region.empty()) throw InvalidArgument("empty observation region");
  if (!config.desired_state) throw InvalidArgument("desired state is not set");
  const Eigen::Index n_nodes = config.n_nodes();
  CheckNodes(config.control_region, n_nodes, "control_region");
  CheckNodes(config.obs_region, n_nodes, "obs_region");
  CheckNodes(config.dirichlet_nodes, n_nodes, "dirichlet_nodes");
  const std::set<Eigen::Index> dirichlet(config.dirichlet_nodes.begin(), config.dirichlet_nodes.end());
  const Grid g{config, config.hx(), config.hy()};
  for (const Eigen::Index node : config.dirichlet_nodes) {
    if (!g.OnBoundary(node)) throw InvalidArgument("Dirichlet node " + std::to_string(node) + " is interior");
  }
  for (const Eigen::Index node : config.control_region) {
    if (dirichlet.count(node)) {
      throw InvalidArgument("control node " + std::to_string(node) + " lies on the Dirichlet boundary");
    }
    if (config.control_kind == ControlKind::kBoundary && !g.OnBoundary(node)) {
      throw InvalidArgument("boundary control node " + std::to_string(node) + " is interior");
    }
  }
  for (const Eigen::Index node : config.obs_region) {
    if (dirichlet.count(node)) {
      throw InvalidArgument("observation node " + std::to_string(node) + " lies on the Dirichlet boundary");
    }
  }
}

DiscreteOperators assemble(const ParabolicOcpConfig& config) {
  validate(config);
  const Grid g{config, config.hx(), config.hy()};
  const Eigen::Index n_nodes = config.n_nodes();
  const std::set<Eigen::Index> dirichlet(config.dirichlet_nodes.begin(), config.dirichlet_nodes.end());

  DiscreteOperators ops;
  ops.dof_of_node.assign(static_cast<std::size_t>(n_nodes), -1);
  for (Eigen::Index node = 0; node < n_nodes; ++node) {
    if (dirichlet.count(node)) continue;
    ops.dof_of_node[static_cast<std::size_t>(node)] = static_cast<Eigen::Index>(ops.node_of_dof.size());
    ops.node_of_dof.push_back(node);
  }
  ops.n_y = static_cast<Eigen::Index>(ops.node_of_dof.size());
  ops.n_u = static_cast<Eigen::Index>(config.control_region.size());
  if (config.y0.size() != 0 && config.y0.size() != ops.n_y) {
    throw InvalidArgument("y0 has " + std::to_string(config.y0.size()) + " entries, expected " +
                          std::to_string(ops.n_y));
  }

  std::vector<double> area(static_cast<std::size_t>(ops.n_y));
  for (Eigen::Index d = 0; d < ops.n_y; ++d) area[static_cast<std::size_t>(d)] = g.Area(ops.node_of_dof[static_cast<std::size_t>(d)]);
  ops.mass = Diagonal(area);

  DynamicsBuilder k{ops.dof_of_node, config.dirichlet_value, {}, Eigen::VectorXd::Zero(ops.n_y)};
  const bool upwind = config.advection == AdvectionScheme::kUpwind;
  // Interior faces: diffusion conductance and advective flux from a to b.
  auto add_face = [&](Eigen::Index a, Eigen::Index b, double conductance, double flux) {
    k.Add(a, a, conductance);
    k.Add(a, b, -conductance);
    k.Add(b, b, conductance);
    k.Add(b, a, -conductance);
    if (flux == 0.0) return;
    const double upwind_a = flux > 0.0 ? flux : 0.0;
    const double upwind_b = flux > 0.0 ? 0.0 : flux;
    const double wa = upwind ? upwind_a : 0.5 * flux;
    const double wb = upwind ? upwind_b : 0.5 * flux;
    k.Add(a, a, wa);
    k.Add(a, b, wb);
    k.Add(b, a, -wa);
    k.Add(b, b, -wb);
  };
  double max_peclet = 0.0;
  for (Eigen::Index j = 0; j < config.ny; ++j) {
    for (Eigen::Index i = 0; i < config.nx; ++i) {
      const Eigen::Index a = g.Node(i, j);
      if (i + 1 < config.nx) {
        const auto beta = g.Beta(g.X(i) + 0.5 * g.hx, g.Y(j));
        max_peclet = std::max(max_peclet, std::abs(beta[0]) * g.hx / (2.0 * config.epsilon));
        add_face(a, g.Node(i + 1, j), config.epsilon * g.Wy(j) / g.hx, beta[0] * g.Wy(j));
      }
      if (j + 1 < config.ny) {
        const auto beta = g.Beta(g.X(i), g.Y(j) + 0.5 * g.hy);
        max_peclet = std::max(max_peclet, std::abs(beta[1]) * g.hy / (2.0 * config.epsilon));
        add_face(a, g.Node(i, j + 1), config.epsilon * g.Wx(i) / g.hy, beta[1] * g.Wx(i));
      }
    }
  }

  const std::set<Eigen::Index> control_nodes(config.control_region.begin(), config.control_region.end());
  std::vector<double> boundary_control_weight(static_cast<std::size_t>(n_nodes), 0.0);
  for (const HalfSegment& seg : BoundaryHalfSegments(g)) {
    if (ops.dof_of_node[static_cast<std::size_t>(seg.node)] < 0) continue;
    const Eigen::Index i = seg.node % config.nx;
    const Eigen::Index j = seg.node / config.nx;
    const auto beta = g.Beta(g.X(i), g.Y(j));
    const double normal_velocity = beta[0] * seg.normal[0] + beta[1] * seg.normal[1];
    k.Add(seg.node, seg.node, normal_velocity * seg.length);
    if (control_nodes.count(seg.node) && control_nodes.count(seg.neighbor)) {
      boundary_control_weight[static_cast<std::size_t>(seg.node)] += seg.length;
    }
  }
  ops.max_cell_peclet = max_peclet;
  if (!upwind && max_peclet > kPecletWarning) {
    ops.warnings.push_back("cell Peclet number " + std::to_string(max_peclet) +
                           " exceeds 2; consider the upwind scheme");
  }
  ops.dynamics = make_sparse(ops.n_y, ops.n_y, k.triplets, false);
  const Eigen::VectorXd lift = k.lift_forcing;
  ops.forcing = [lift](double) { return lift; };

  Triplets coupling;
  std::vector<double> control_weight(static_cast<std::size_t>(ops.n_u));
  for (Eigen::Index c = 0; c < ops.n_u; ++c) {
    const Eigen::Index node = config.control_region[static_cast<std::size_t>(c)];
    const Eigen::Index dof = ops.dof_of_node[static_cast<std::size_t>(node)];
    const double w = config.control_kind == ControlKind::kBoundary
                         ? boundary_control_weight[static_cast<std::size_t>(node)]
                         : g.Area(node);
    if (!(w > 0.0)) {
      throw InvalidArgument("control node " + std::to_string(node) +
                            " has no controlled boundary segment");
    }
    control_weight[static_cast<std::size_t>(c)] = w;
    coupling.emplace_back(dof, c, w);
    ops.control_dofs.push_back(dof);
  }
  ops.control_coupling = make_sparse(ops.n_y, ops.n_u, coupling, false);
  ops.control_mass = Diagonal(control_weight);

  std::vector<double> obs_weight(static_cast<std::size_t>(ops.n_y), 0.0);
  for (const Eigen::Index node : config.obs_region) {
    const Eigen::Index dof = ops.dof_of_node[static_cast<std::size_t>(node)];
    obs_weight[static_cast<std::size_t>(dof)] = g.Area(node);
    ops.obs_dofs.push_back(dof);
  }
  ops.obs_mass = Diagonal(obs_weight);
  return ops;
}

Eigen::VectorXd desired_dof_vector(const ParabolicOcpConfig& config, const DiscreteOperators& ops,
                                   double t) {
  const Eigen::VectorXd values = config.desired_state(t);
  if (values.size() != static_cast<Eigen::Index>(ops.obs_dofs.size())) {
    throw InvalidArgument("desired state returned " + std::to_string(values.size()) +
                          " values for " + std::to_string(ops.obs_dofs.size()) +
                          " observation nodes");
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(ops.n_y);
  for (std::size_t i = 0; i < ops.obs_dofs.size(); ++i) {
    out(ops.obs_dofs[i]) = values(static_cast<Eigen::Index>(i));
  }
  return out;
}

KktSystem assemble_spacetime_kkt(const DiscreteOperators& ops, const ParabolicOcpConfig& config) {
  const Eigen::Index ny = ops.n_y;
  const Eigen::Index nu = ops.n_u;
  auto check = [](const SparseMatrix& m, Eigen::Index r, Eigen::Index c, const char* what) {
    if (m.rows() != r || m.cols() != c) throw InvalidArgument(std::string("inconsistent operator dimensions: ") + what);
  };
  check(ops.mass, ny, ny, "mass");
  check(ops.dynamics, ny, ny, "dynamics");
  check(ops.obs_mass, ny, ny, "obs_mass");
  check(ops.control_coupling, ny, nu, "control_coupling");
  check(ops.control_mass, nu, nu, "control_mass");

  const double dt = config.dt;
  const Eigen::Index steps = config.n_steps;
  KktSystem kkt;
  kkt.block_size = 2 * ny + nu;
  const Eigen::Index dim = steps * kkt.block_size;

  const Eigen::SparseMatrix<double> step_op = ops.mass.matrix + dt * ops.dynamics.matrix;
  const Eigen::SparseMatrix<double> step_op_t = step_op.transpose();
  const Eigen::SparseMatrix<double> coupling_t = ops.control_coupling.matrix.transpose();

  Triplets t;
  t.reserve(static_cast<std::size_t>(steps) *
            static_cast<std::size_t>(2 * step_op.nonZeros() + 2 * ops.mass.matrix.nonZeros() +
                                     ops.obs_mass.matrix.nonZeros() + 3 * nu));
  kkt.rhs = Eigen::VectorXd::Zero(dim);
  const Eigen::VectorXd y0 = config.y0.size() == 0 ? Eigen::VectorXd::Zero(ny) : config.y0;

  for (Eigen::Index k = 1; k <= steps; ++k) {
    const Eigen::Index oy = kkt.y_offset(k);
    const Eigen::Index ou = oy + ny;
    const Eigen::Index oz = ou + nu;
    const double tk = static_cast<double>(k) * dt;

    // Stationarity in y_k.
    AppendBlock(t, ops.obs_mass.matrix, oy, oy, dt);
    AppendBlock(t, step_op_t, oy, oz, 1.0);
    if (k < steps) AppendBlock(t, ops.mass.matrix, oy, kkt.y_offset(k + 1) + ny + nu, -1.0);
    kkt.rhs.segment(oy, ny) = dt * (ops.obs_mass.matrix * desired_dof_vector(config, ops, tk));

    // Stationarity in u_k.
    AppendBlock(t, ops.control_mass.matrix, ou, ou, config.alpha * dt);
    AppendBlock(t, coupling_t, ou, oz, -dt);

    // State equation for step k.
    AppendBlock(t, step_op, oz, oy, 1.0);
    if (k > 1) AppendBlock(t, ops.mass.matrix, oz, kkt.y_offset(k - 1), -1.0);
    AppendBlock(t, ops.control_coupling.matrix, oz, ou, -dt);
    Eigen::VectorXd rhs = dt * ops.forcing(tk);
    if (k == 1) rhs += ops.mass.matrix * y0;
    kkt.rhs.segment(oz, ny) = rhs;
  }
  kkt.matrix = make_sparse(dim, dim, t, true);
  return kkt;
}

Eigen::MatrixXd simulate_state(const ParabolicOcpConfig& config, const DiscreteOperators& ops,
                               const Eigen::MatrixXd& controls) {
  if (controls.rows() != ops.n_u || controls.cols() < config.n_steps) {
    throw InvalidArgument("simulate_state: control matrix must be n_u x (>= n_steps)");
  }
  const Eigen::SparseMatrix<double> step_op = ops.mass.matrix + config.dt * ops.dynamics.matrix;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(step_op);
  if (lu.info() != Eigen::Success) throw SolverError("simulate_state: singular step operator");
  Eigen::MatrixXd y(ops.n_y, config.n_steps + 1);
  y.col(0) = config.y0.size() == 0 ? Eigen::VectorXd::Zero(ops.n_y) : config.y0;
  for (Eigen::Index k = 1; k <= config.n_steps; ++k) {
    const double tk = static_cast<double>(k) * config.dt;
    Eigen::VectorXd rhs = ops.mass.matrix * y.col(k - 1) +
                          config.dt * (ops.control_coupling.matrix * controls.col(k - 1) + ops.forcing(tk));
    y.col(k) = lu.solve(rhs);
  }
  return y;
}

double objective(const ParabolicOcpConfig& config, const DiscreteOperators& ops,
                 const Eigen::MatrixXd& state, const Eigen::MatrixXd& controls) {
  double tracking = 0.0;
  double effort = 0.0;
  for (Eigen::Index k = 1; k <= config.n_steps; ++k) {
    const Eigen::VectorXd diff =
        state.col(k) - desired_dof_vector(config, ops, static_cast<double>(k) * config.dt);
    tracking += diff.dot(ops.obs_mass.matrix * diff);
    const Eigen::VectorXd u = controls.col(k - 1);
    effort += u.dot(ops.control_mass.matrix * u);
  }
  return 0.5 * config.dt * tracking + 0.5 * config.alpha * config.dt * effort;
}

OcpSolution solve_fom(const ParabolicOcpConfig& config) { return solve_fom(config, assemble(config)); }

OcpSolution solve_fom(const ParabolicOcpConfig& config, const DiscreteOperators& ops) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();
  const KktSystem kkt = assemble_spacetime_kkt(ops, config);
  const Eigen::VectorXd x = sparse_solve(kkt.matrix, kkt.rhs);
  const auto stop = std::chrono::steady_clock::now();

  const kernels::RowMajorSparse row_major(kkt.matrix.matrix);
  const Eigen::VectorXd residual = kkt.rhs - kernels::parallel::spmv(row_major, x);
  const double scale = inf_norm(kkt.matrix.matrix) * x.norm() + kkt.rhs.norm();

  const Eigen::Index ny = ops.n_y;
  const Eigen::Index nu = ops.n_u;
  const Eigen::Index steps = config.n_steps;
  Eigen::MatrixXd state(ny, steps + 1);
  Eigen::MatrixXd control = Eigen::MatrixXd::Zero(nu, steps + 1);
  Eigen::MatrixXd adjoint = Eigen::MatrixXd::Zero(ny, steps + 1);
  Eigen::MatrixXd desired(ny, steps + 1);
  state.col(0) = config.y0.size() == 0 ? Eigen::VectorXd::Zero(ny) : config.y0;
  for (Eigen::Index k = 1; k <= steps; ++k) {
    const Eigen::Index oy = kkt.y_offset(k);
    state.col(k) = x.segment(oy, ny);
    // The multiplier of step k is the adjoint at t_{k-1}; z(T) = 0 closes the sequence.
    control.col(k - 1) = x.segment(oy + ny, nu);
    adjoint.col(k - 1) = x.segment(oy + ny + nu, ny);
  }
  for (Eigen::Index k = 0; k <= steps; ++k) {
    desired.col(k) = desired_dof_vector(config, ops, static_cast<double>(k) * config.dt);
  }

  OcpSolution out{SnapshotMatrix(state, config.dt, 0.0, "state"),
                  SnapshotMatrix(control, config.dt, 0.0, "control"),
                  SnapshotMatrix(adjoint, config.dt, 0.0, "adjoint"),
                  SnapshotMatrix(desired, config.dt, 0.0, "desired"),
                  0.0, 0.0, 0.0, 0, {}};
  out.objective = objective(config, ops, state, control);
  out.kkt_residual = scale > 0.0 ? residual.norm() / scale : residual.norm();
  out.wall_time = std::chrono::duration<double>(stop - start).count();
  out.kkt_dimension = kkt.matrix.rows();
  out.warnings = ops.warnings;
  return out;
}

ParabolicOcpConfig benchmark_graetz_analog(Eigen::Index nx, Eigen::Index ny) {
  ParabolicOcpConfig c;
  c.name = "graetz_analog";
  c.lx = 3.0;
  c.ly = 1.0;
  c.nx = nx;
  c.ny = ny;
  if (nx < 3 || ny < 3) throw InvalidArgument("graetz_analog: grid needs at least 3 nodes per axis");
  c.epsilon = 1.0 / 12.0;
  c.beta = [](double, double y) { return std::array<double, 2>{y * (1.0 - y), 0.0}; };
  c.alpha = 1e-2;
  c.control_kind = ControlKind::kBoundary;
  c.dirichlet_value = 1.0;
  c.dt = 0.02;
  c.n_steps = 50;

  const double hx = c.hx();
  const double hy = c.hy();
  const double tol = 1e-9;
  for (Eigen::Index j = 0; j < ny; ++j) {
    for (Eigen::Index i = 0; i < nx; ++i) {
      const Eigen::Index node = i + nx * j;
      const double x = static_cast<double>(i) * hx;
      const double y = static_cast<double>(j) * hy;
      const bool wall = (j == 0 || j == ny - 1);
      const bool downstream = x >= 1.0 - tol;
      if (i == 0 || (wall && !downstream)) {
        c.dirichlet_nodes.push_back(node);
      } else if (wall) {
        c.control_region.push_back(node);
      }
      if (downstream && (y <= 0.2 + tol || y >= 0.8 - tol)) c.obs_region.push_back(node);
    }
  }
  const auto n_obs = static_cast<Eigen::Index>(c.obs_region.size());
  c.desired_state = [n_obs](double t) { return Eigen::VectorXd::Constant(n_obs, 1.0 + t); };
  return c;
}

ParabolicOcpConfig benchmark_distributed_analog(Eigen::Index n) {
  if (n < 3) throw InvalidArgument("distributed_analog: grid needs at least 3 nodes per axis");
  ParabolicOcpConfig c;
  c.name = "distributed_analog";
  c.lx = 1.0;
  c.ly = 1.0;
  c.nx = n;
  c.ny = n;
  c.epsilon = 1.0;
  c.alpha = 1e-5;
  c.control_kind = ControlKind::kDistributed;
  c.dirichlet_value = 0.0;
  c.dt = 0.02;
  c.n_steps = 50;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index node = i + n * j;
      if (i == 0 || j == 0 || i == n - 1 || j == n - 1) {
        c.dirichlet_nodes.push_back(node);
      } else {
        c.control_region.push_back(node);
        c.obs_region.push_back(node);
      }
    }
  }
  const auto n_obs = static_cast<Eigen::Index>(c.obs_region.size());
  c.desired_state = [n_obs](double t) {
    const double value =
        10.0 * (1.0 + t) * (1.0 + 0.5 * std::cos(4.0 * std::numbers::pi * t - std::numbers::pi));
    return Eigen::VectorXd::Constant(n_obs, value);
  };
  return c;
}

}  // namespace ocpdmd
