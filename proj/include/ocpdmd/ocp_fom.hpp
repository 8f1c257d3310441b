#pragma once

// Linear-quadratic parabolic optimal control on a uniform 2D grid, solved
// all-at-once in space and time.
//
// State equation (after eliminating Dirichlet nodes into a lift):
//   M dy/dt + K y = C u + f,          y(0) = y0
// Cost:
//   J = 1/2 sum_k dt (y_k - yd_k)^T M_obs (y_k - yd_k) + alpha/2 sum_k dt u_k^T N_c u_k
//
// Space: node-centred control volumes (lumped mass, 5-point diffusion, flux
// form advection). Time: implicit Euler for the state and its exact discrete
// adjoint, so the optimality rows reduce to alpha u = z on control nodes.

#include <array>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ocpdmd/numerics.hpp"
#include "ocpdmd/snapshots.hpp"

namespace ocpdmd {

enum class ControlKind { kBoundary, kDistributed };
enum class AdvectionScheme { kCentered, kUpwind };

using VelocityField = std::function<std::array<double, 2>(double x, double y)>;

/// Values of the desired state on the observation nodes, in obs_region order.
using DesiredState = std::function<Eigen::VectorXd(double t)>;

/// Problem definition. Grid nodes are numbered i + nx * j with x = i*hx,
/// y = j*hy, hx = lx/(nx-1), hy = ly/(ny-1); nx and ny count every node,
/// boundary included. Region lists hold grid node numbers.
struct ParabolicOcpConfig {
  std::string name;
  double lx = 1.0;
  double ly = 1.0;
  Eigen::Index nx = 0;
  Eigen::Index ny = 0;
  double epsilon = 1.0;
  VelocityField beta;  // empty means no advection
  double alpha = 1.0;
  ControlKind control_kind = ControlKind::kDistributed;
  std::vector<Eigen::Index> control_region;
  std::vector<Eigen::Index> obs_region;
  std::vector<Eigen::Index> dirichlet_nodes;
  double dirichlet_value = 0.0;
  DesiredState desired_state;
  Eigen::VectorXd y0;  // length n_y; empty means zero
  double dt = 0.02;
  Eigen::Index n_steps = 50;
  AdvectionScheme advection = AdvectionScheme::kCentered;

  double hx() const { return lx / static_cast<double>(nx - 1); }
  double hy() const { return ly / static_cast<double>(ny - 1); }
  Eigen::Index n_nodes() const { return nx * ny; }
};

/// Throws InvalidArgument when a config invariant fails.
void validate(const ParabolicOcpConfig& config);

struct DiscreteOperators {
  SparseMatrix mass;              // M, n_y x n_y
  SparseMatrix dynamics;          // K
  SparseMatrix control_coupling;  // C, n_y x n_u
  SparseMatrix obs_mass;          // M_obs
  SparseMatrix control_mass;      // N_c, n_u x n_u
  std::function<Eigen::VectorXd(double)> forcing;  // f(t), lift included
  Eigen::Index n_y = 0;
  Eigen::Index n_u = 0;
  std::vector<Eigen::Index> dof_of_node;  // -1 on Dirichlet nodes
  std::vector<Eigen::Index> node_of_dof;
  std::vector<Eigen::Index> control_dofs;  // state dof hosting each control entry
  std::vector<Eigen::Index> obs_dofs;
  double max_cell_peclet = 0.0;
  std::vector<std::string> warnings;
};

/// Cell Peclet number above which centred advection is flagged.
inline constexpr double kPecletWarning = 2.0;

DiscreteOperators assemble(const ParabolicOcpConfig& config);

struct KktSystem {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
  Eigen::Index block_size = 0;  // 2 n_y + n_u

  Eigen::Index y_offset(Eigen::Index step) const { return (step - 1) * block_size; }
};

/// Space-time system over steps k = 1..N, unknowns ordered per step as
/// (y_k, u_k, z_k). Total dimension N (2 n_y + n_u).
KktSystem assemble_spacetime_kkt(const DiscreteOperators& ops, const ParabolicOcpConfig& config);

struct OcpSolution {
  SnapshotMatrix state;    // n_y x (N+1), column 0 = y0
  SnapshotMatrix control;  // n_u x (N+1), column k acts over (t_k, t_k+1]
  SnapshotMatrix adjoint;  // n_y x (N+1), column N = 0
  SnapshotMatrix desired;  // n_y x (N+1), zero outside the observation nodes
  double objective = 0.0;
  double kkt_residual = 0.0;
  double wall_time = 0.0;  // seconds spent assembling and solving the KKT system
  Eigen::Index kkt_dimension = 0;
  std::vector<std::string> warnings;
};

OcpSolution solve_fom(const ParabolicOcpConfig& config);
OcpSolution solve_fom(const ParabolicOcpConfig& config, const DiscreteOperators& ops);

/// Desired state at time t scattered into state-dof layout.
Eigen::VectorXd desired_dof_vector(const ParabolicOcpConfig& config, const DiscreteOperators& ops,
                                   double t);

/// Implicit Euler forward solve for a given control sequence; controls
/// column k drives the step to t_{k+1}. Returns N+1 columns.
Eigen::MatrixXd simulate_state(const ParabolicOcpConfig& config, const DiscreteOperators& ops,
                               const Eigen::MatrixXd& controls);

/// Discrete cost of a state trajectory (N+1 columns) and controls (>= N columns).
double objective(const ParabolicOcpConfig& config, const DiscreteOperators& ops,
                 const Eigen::MatrixXd& state, const Eigen::MatrixXd& controls);

/// Channel of length 3 and height 1 with parabolic inflow profile, Dirichlet
/// value 1 upstream, controlled flux on the walls downstream of x = 1 and
/// observation strips along those walls.
ParabolicOcpConfig benchmark_graetz_analog(Eigen::Index nx = 31, Eigen::Index ny = 11);

/// Unit square, homogeneous Dirichlet, control and observation everywhere,
/// oscillating desired profile.
ParabolicOcpConfig benchmark_distributed_analog(Eigen::Index n = 21);

}  // namespace ocpdmd
