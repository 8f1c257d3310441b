#pragma once

// Dense reduced-space solution of the discrete control problem, used as an
// oracle for the space-time KKT solve. The state is eliminated as y = G u + g
// by stepping implicit Euler with dense matrices, then the reduced normal
// equations (G^T Q G + R) u = G^T Q (yd - g) are solved directly.

#include <Eigen/Dense>

#include "ocpdmd/ocp_fom.hpp"

namespace ocpdmd::testing {

struct DenseQpSolution {
  Eigen::MatrixXd state;    // n_y x (N+1)
  Eigen::MatrixXd control;  // n_u x (N+1), last column zero
  Eigen::MatrixXd adjoint;  // n_y x (N+1), last column zero
  double objective = 0.0;
};

inline DenseQpSolution SolveDenseQp(const ParabolicOcpConfig& config, const DiscreteOperators& ops) {
  const Eigen::Index ny = ops.n_y;
  const Eigen::Index nu = ops.n_u;
  const Eigen::Index n = config.n_steps;
  const double dt = config.dt;
  const Eigen::MatrixXd m(ops.mass.matrix);
  const Eigen::MatrixXd k(ops.dynamics.matrix);
  const Eigen::MatrixXd c(ops.control_coupling.matrix);
  const Eigen::MatrixXd m_obs(ops.obs_mass.matrix);
  const Eigen::MatrixXd n_c(ops.control_mass.matrix);
  const Eigen::PartialPivLU<Eigen::MatrixXd> e(m + dt * k);
  const Eigen::MatrixXd s = e.solve(m);
  const Eigen::MatrixXd p = e.solve(dt * c);
  const Eigen::VectorXd y0 = config.y0.size() == 0 ? Eigen::VectorXd::Zero(ny) : config.y0;

  // Block row k-1 of G, g describes y_k.
  Eigen::MatrixXd g_mat = Eigen::MatrixXd::Zero(n * ny, n * nu);
  Eigen::VectorXd g_vec(n * ny);
  Eigen::VectorXd yd(n * ny);
  Eigen::VectorXd prev = y0;
  for (Eigen::Index step = 1; step <= n; ++step) {
    const double t = static_cast<double>(step) * dt;
    const Eigen::Index row = (step - 1) * ny;
    g_vec.segment(row, ny) = s * prev + e.solve(dt * ops.forcing(t));
    prev = g_vec.segment(row, ny);
    if (step > 1) g_mat.block(row, 0, ny, n * nu) = s * g_mat.block(row - ny, 0, ny, n * nu);
    g_mat.block(row, (step - 1) * nu, ny, nu) = p;
    yd.segment(row, ny) = desired_dof_vector(config, ops, t);
  }

  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n * ny, n * ny);
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(n * nu, n * nu);
  for (Eigen::Index step = 0; step < n; ++step) {
    q.block(step * ny, step * ny, ny, ny) = dt * m_obs;
    r.block(step * nu, step * nu, nu, nu) = config.alpha * dt * n_c;
  }
  const Eigen::MatrixXd h = g_mat.transpose() * q * g_mat + r;
  const Eigen::VectorXd u = h.ldlt().solve(g_mat.transpose() * q * (yd - g_vec));
  const Eigen::VectorXd y = g_mat * u + g_vec;

  DenseQpSolution out;
  out.state.resize(ny, n + 1);
  out.state.col(0) = y0;
  out.control = Eigen::MatrixXd::Zero(nu, n + 1);
  for (Eigen::Index step = 1; step <= n; ++step) {
    out.state.col(step) = y.segment((step - 1) * ny, ny);
    out.control.col(step - 1) = u.segment((step - 1) * nu, nu);
  }
  // Discrete adjoint: (M + dt K)^T z_k = M z_{k+1} + dt M_obs (yd_k - y_k), z_{N+1} = 0.
  out.adjoint = Eigen::MatrixXd::Zero(ny, n + 1);
  const Eigen::PartialPivLU<Eigen::MatrixXd> et((m + dt * k).transpose());
  Eigen::VectorXd next = Eigen::VectorXd::Zero(ny);
  for (Eigen::Index step = n; step >= 1; --step) {
    const Eigen::Index row = (step - 1) * ny;
    next = et.solve(m * next + dt * m_obs * (yd.segment(row, ny) - y.segment(row, ny)));
    out.adjoint.col(step - 1) = next;
  }
  const Eigen::VectorXd miss = y - yd;
  out.objective = 0.5 * miss.dot(q * miss) + 0.5 * u.dot(r * u);
  return out;
}

// Three small instances (2x2 interior nodes, at most 3 steps) covering
// distributed control, advection with a nonzero Dirichlet lift, and boundary
// control.
inline ParabolicOcpConfig TinyDistributed() {
  ParabolicOcpConfig c = benchmark_distributed_analog(4);
  c.n_steps = 2;
  c.alpha = 1e-2;
  return c;
}

inline ParabolicOcpConfig TinyAdvected() {
  ParabolicOcpConfig c = benchmark_distributed_analog(4);
  c.n_steps = 3;
  c.alpha = 0.1;
  c.epsilon = 0.3;
  c.beta = [](double x, double y) { return std::array<double, 2>{1.0 + y, -0.5 * x}; };
  c.dirichlet_value = 0.7;
  c.y0 = Eigen::Vector4d(0.0, 0.4, 0.9, 0.2);
  return c;
}

inline ParabolicOcpConfig TinyBoundary() {
  ParabolicOcpConfig c = benchmark_graetz_analog(4, 4);
  c.n_steps = 3;
  return c;
}

}  // namespace ocpdmd::testing
