// Copyright 2026 The chronosim authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#ifndef CHRONOSIM_RUN_HPP
#define CHRONOSIM_RUN_HPP

#include <vector>

#include "chronosim/joint.hpp"

namespace chronosim {

// T(|A>,|B>) = sqrt(1 - |<A|B>|^2) for normalized pure states.
inline double trace_distance(const Vec& a, const Vec& b) {
  if (std::abs(a.norm() - 1.0) > 1e-8 || std::abs(b.norm() - 1.0) > 1e-8)
    throw ConfigError("trace_distance: states must be normalized");
  double ov = std::norm(a.dot(b));
  return std::sqrt(std::max(0.0, 1.0 - ov));
}

// Trace distance between two low-rank ensembles sum_i p_i |u_i><u_i| and
// sum_j q_j |v_j><v_j| via projection onto the joint span.
inline double trace_distance_lowrank(const std::vector<double>& p,
                                     const std::vector<Vec>& u,
                                     const std::vector<double>& q,
                                     const std::vector<Vec>& v) {
  std::vector<Vec> basis;
  auto add = [&basis](const Vec& x) {
    Vec r = x;
    for (const Vec& b : basis) r -= b.dot(r) * b;
    double nr = r.norm();
    if (nr > 1e-12) basis.push_back(r / nr);
  };
  for (const Vec& x : u) add(x);
  for (const Vec& x : v) add(x);
  const int n = static_cast<int>(basis.size());
  if (n == 0) return 0.0;
  Mat delta = Mat::Zero(n, n);
  auto accumulate = [&](const std::vector<double>& w, const std::vector<Vec>& s,
                        double sign) {
    for (size_t i = 0; i < s.size(); ++i) {
      Vec c(n);
      for (int k = 0; k < n; ++k) c[k] = basis[k].dot(s[i]);
      delta += sign * w[i] * (c * c.adjoint());
    }
  };
  accumulate(p, u, +1.0);
  accumulate(q, v, -1.0);
  Eigen::SelfAdjointEigenSolver<Mat> es(delta);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

// |t_j>_L = U(m_j) ... U(m_1) |0>_L, by direct unitary application.
inline std::vector<Vec> ideal_trajectory(const GateProgram& p) {
  std::vector<Vec> out;
  Vec cur = p.initial_logical;
  out.push_back(cur);
  for (const auto& g : p.generators) {
    cur = unitary_of(g) * cur;
    out.push_back(cur);
  }
  return out;
}

struct GateRunReport {
  std::vector<double> per_gate_error;  // trace distance at each t_j, j=1..len
  double f = 0.0;                      // Ng / T0, exact
  double E0 = 0.0;                     // mean energy of the initial state
  double E0_interaction = 0.0;         // interaction-term share of E0
  Method method = Method::exact;
  int dtilde_sum = 0;
  int d = 0, Ng = 0;
  Regime regime = Regime::classical;
  double eps_bar = 0.0;
  bool N_overridden = false;
  int N_pot = 0;
  double min_consecutive_ideal_distance = 0.0;  // joint-trajectory orthogonality

  double max_error() const {
    double m = 0.0;
    for (double e : per_gate_error) m = std::max(m, e);
    return m;
  }
};

// Evolve |0>_L (x) |Psi(0)>_C to each t_j = j T0/Ng; at each step measure the
// trace distance to |t_j>_L (x) |Psi(t_j d/T0)>_C.
inline GateRunReport run_program(const ClockModel& m, const GateProgram& program,
                                 Method method, double dt_override = 0.0) {
  if (program.length() != m.Ng)
    throw ConfigError("run_program: program length must equal Ng");
  GateRunReport rep;
  rep.method = method;
  rep.d = m.d;
  rep.Ng = m.Ng;
  rep.regime = m.regime;
  rep.eps_bar = m.eps_bar;
  rep.N_overridden = m.N_overridden;
  rep.N_pot = m.N_pot;
  rep.f = m.f();
  rep.dtilde_sum = program.dtilde_sum();

  JointHamiltonian H(m, program);
  JointState psi = joint_product(program.initial_logical, clock_state(m, 0.0));
  rep.E0 = H.mean_energy(psi);
  rep.E0_interaction = H.interaction_energy(psi);

  std::vector<Vec> logical = ideal_trajectory(program);
  const double t1 = m.t1();
  double dt = dt_override;
  if (method == Method::splitstep && dt <= 0.0) dt = H.default_dt(psi, t1);

  rep.min_consecutive_ideal_distance = 1.0;
  JointState prev_ideal = psi;
  for (int j = 1; j <= m.Ng; ++j) {
    psi = H.evolve(psi, t1, method, dt);
    double nrm = psi.amplitudes.norm();
    if (std::abs(nrm - 1.0) > 1e-8)
      throw NumericalFault("run_program: norm drift above 1e-8");
    psi.amplitudes /= nrm;
    JointState ideal =
        joint_product(logical[j], clock_state(m, j * double(m.d) / m.Ng));
    rep.per_gate_error.push_back(
        trace_distance(psi.amplitudes, ideal.amplitudes));
    rep.min_consecutive_ideal_distance =
        std::min(rep.min_consecutive_ideal_distance,
                 trace_distance(prev_ideal.amplitudes, ideal.amplitudes));
    prev_ideal = ideal;
  }
  return rep;
}

}  // namespace chronosim

#endif
