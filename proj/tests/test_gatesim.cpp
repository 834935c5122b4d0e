// Copyright 2026 The chronosim authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "chronosim/bounds.hpp"
#include "chronosim/sweep.hpp"

using namespace chronosim;

namespace {

Mat random_unitary(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Mat A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = cxd(g(rng), g(rng));
  Eigen::HouseholderQR<Mat> qr(A);
  Mat Q = qr.householderQ() * Mat::Identity(n, n);
  return Q;
}

// classical, adiabatic gate parameters used for "good gate" checks
ClockModel adiabatic_model(int d, int n_pot) {
  return make_model(d, 0.05, Regime::classical, 1.0,
                    {{"N_pot", 2},
                     {"n_pot", double(n_pot)},
                     {"n_tilde0", 0.5}});
}

}  // namespace

TEST_CASE("gate_generator folds phases into (0, 2pi]") {
  GateGenerator gx = gate_generator(pauli_x(), "X");
  std::vector<double> ph(gx.eigenphases.data(), gx.eigenphases.data() + 2);
  std::sort(ph.begin(), ph.end());
  CHECK(ph[0] == Catch::Approx(kPi).epsilon(1e-12));
  CHECK(ph[1] == Catch::Approx(kTwoPi).epsilon(1e-12));
  CHECK((unitary_of(gx) - pauli_x()).norm() < 1e-12);

  GateGenerator gi = gate_generator(identity_gate(), "I");
  CHECK((gi.matrix - kTwoPi * Mat::Identity(2, 2)).norm() < 1e-10);

  Mat U = random_unitary(4, 12);
  GateGenerator g = gate_generator(U);
  CHECK((unitary_of(g) - U).norm() < 1e-10);
  for (int i = 0; i < 4; ++i) {
    CHECK(g.eigenphases[i] > 0.0);
    CHECK(g.eigenphases[i] <= kTwoPi + 1e-12);
  }

  Mat bad = Mat::Identity(2, 2);
  bad(0, 0) = 2.0;
  CHECK_THROWS_AS(gate_generator(bad), ConfigError);
}

TEST_CASE("dtilde counts distinct eigenvalues") {
  CHECK(dtilde(gate_generator(pauli_x())) == 2);
  CHECK(dtilde(gate_generator(identity_gate())) == 1);
  CHECK(dtilde(gate_generator(cnot())) == 2);
  GateProgram p = program_from_symbols({"X", "I", "H"});
  CHECK(p.dtilde_sum() == 5);
}

TEST_CASE("joint hamiltonian is hermitian and consistent with dense form") {
  ClockModel m = adiabatic_model(32, 3);
  GateProgram prog = cyclic_program(m.Ng, {"X", "H"});
  JointHamiltonian H(m, prog);
  CHECK(H.hermiticity_defect() < 1e-12 * H.dense().norm());

  JointState psi = joint_product(prog.initial_logical, clock_state(m, 0.0));
  double e_apply = H.mean_energy(psi);
  double e_dense = std::real(psi.amplitudes.dot(H.dense() * psi.amplitudes));
  CHECK(e_apply == Catch::Approx(e_dense).epsilon(1e-10));
  CHECK(e_apply >= 0.0);
  // free share of the energy matches the clock module
  double e_int = H.interaction_energy(psi);
  double e_free = clock_mean_energy(m, clock_state(m, 0.0));
  CHECK(e_apply - e_int == Catch::Approx(e_free).epsilon(1e-9));
}

TEST_CASE("evolution: t = 0 is the identity, empty program is free motion") {
  ClockModel m = adiabatic_model(32, 3);
  GateProgram prog = cyclic_program(m.Ng, {"X"});
  JointHamiltonian H(m, prog);
  JointState psi = joint_product(prog.initial_logical, clock_state(m, 2.0));
  JointState r = H.evolve(psi, 0.0, Method::exact);
  CHECK((r.amplitudes - psi.amplitudes).norm() < 1e-12);

  GateProgram empty;
  empty.d_L = 2;
  empty.initial_logical = prog.initial_logical;
  JointHamiltonian Hfree(m, empty);
  JointState f1 = Hfree.evolve(psi, 0.31 * m.T0, Method::exact);
  JointState f2 = joint_product(prog.initial_logical,
                                free_evolve(m, clock_state(m, 2.0), 0.31 * m.T0));
  CHECK((f1.amplitudes - f2.amplitudes).norm() < 1e-9);
}

TEST_CASE("splitstep agrees with the exact backend") {
  // 3-window model: classical schedule with eps_bar = 0.16 gives Ng = 3 at d=32
  ClockModel m = make_model(32, 0.16, Regime::classical, 1.0,
                            {{"N_pot", 2}, {"n_pot", 3.0}, {"n_tilde0", 0.5}});
  REQUIRE(m.Ng == 3);
  GateProgram prog = program_from_symbols({"X", "H", "X"});
  JointHamiltonian H(m, prog);
  JointState psi = joint_product(prog.initial_logical, clock_state(m, 0.0));
  double t = m.T0;
  JointState a = H.evolve(psi, t, Method::exact);
  double dt = m.t1() / 64.0;
  JointState b = H.evolve(psi, t, Method::splitstep, dt);
  while (trace_distance(a.amplitudes, b.amplitudes / b.amplitudes.norm()) > 1e-6) {
    dt /= 2.0;
    REQUIRE(dt > m.t1() / 65536.0);
    b = H.evolve(psi, t, Method::splitstep, dt);
  }
  CHECK(trace_distance(a.amplitudes, b.amplitudes / b.amplitudes.norm()) <= 1e-6);
  CHECK(std::abs(b.amplitudes.norm() - 1.0) < 1e-10);
  CHECK_THROWS_AS(H.evolve(psi, t, Method::splitstep, -1.0), ConfigError);
}

TEST_CASE("exact backend refuses above the dimension cap") {
  ClockModel m = make_model(4096, 0.05, Regime::classical, 1.0,
                            {{"N_pot", 2}, {"c_n", 0.2}});
  GateProgram prog = cyclic_program(m.Ng, {"X"});
  JointHamiltonian H(m, prog);
  JointState psi = joint_product(prog.initial_logical, clock_state(m, 0.0));
  CHECK_THROWS_AS(H.evolve(psi, 0.1, Method::exact), CapabilityError);
}

TEST_CASE("ideal trajectory follows the cumulative product") {
  GateProgram idp = program_from_symbols({"I", "I", "I"});
  auto traj = ideal_trajectory(idp);
  for (const auto& v : traj)
    CHECK((v - idp.initial_logical).norm() < 1e-12);

  GateProgram xx = program_from_symbols({"X", "X"});
  auto t2 = ideal_trajectory(xx);
  CHECK((t2[2] - xx.initial_logical).norm() < 1e-12);

  GateProgram rnd;
  rnd.d_L = 2;
  rnd.initial_logical = Vec::Zero(2);
  rnd.initial_logical[0] = 1.0;
  Mat cum = Mat::Identity(2, 2);
  std::vector<Mat> us;
  for (int i = 0; i < 3; ++i) {
    us.push_back(random_unitary(2, 100 + i));
    rnd.generators.push_back(gate_generator(us.back()));
  }
  auto t3 = ideal_trajectory(rnd);
  for (int i = 0; i < 3; ++i) cum = us[i] * cum;
  CHECK((t3[3] - cum * rnd.initial_logical).norm() < 1e-10);
}

TEST_CASE("trace distance closed forms") {
  Vec a = Vec::Zero(2), b = Vec::Zero(2), p = Vec::Zero(2);
  a[0] = 1.0;
  b[1] = 1.0;
  p[0] = p[1] = 1.0 / std::sqrt(2.0);
  CHECK(trace_distance(a, a) == 0.0);
  CHECK(trace_distance(a, b) == Catch::Approx(1.0));
  CHECK(trace_distance(a, p) == Catch::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  Vec un = Vec::Zero(2);
  un[0] = 0.7;
  CHECK_THROWS_AS(trace_distance(a, un), ConfigError);
}

TEST_CASE("commuting programs in the flat-tiling window are exact") {
  // with n <= Ng/(2 pi N) the window bumps tile the circle into an exactly
  // constant potential and a same-gate program applies gates with zero
  // error; only the tiny clock recentering drift remains.
  ClockModel m0 = make_model(128, 0.05, Regime::classical, 1.0, {{"N_pot", 2}});
  double n_flat = 0.9 * m0.Ng / (kTwoPi * 2.0);
  ClockModel m = make_model(128, 0.05, Regime::classical, 1.0,
                            {{"N_pot", 2}, {"n_pot", n_flat}, {"n_tilde0", 0.5}});
  for (const char* sym : {"I", "X"}) {
    GateProgram prog = cyclic_program(m.Ng, {sym});
    GateRunReport rep = run_program(m, prog, Method::exact);
    CHECK(rep.f == Catch::Approx(double(m.Ng) / m.T0).epsilon(1e-15));
    CHECK(rep.max_error() < 1e-3);
    // exact recurrence at t = T0 (1e-7 is the metric's fp floor between
    // independently constructed states)
    CHECK(rep.per_gate_error.back() < 1e-7);
  }
}

TEST_CASE("non-commuting classical programs carry a bounded error floor") {
  // neighboring-window overlap caps XH-program accuracy at this scale;
  // calibrated ceiling recorded here.
  ClockModel m = adiabatic_model(256, 6);
  GateProgram prog = cyclic_program(m.Ng, {"X", "H"});
  GateRunReport rep = run_program(m, prog, Method::exact);
  CHECK(rep.max_error() < 0.35);
  for (double e : rep.per_gate_error) {
    CHECK(e >= 0.0);
    CHECK(e <= 1.0);
  }
}

TEST_CASE("two-norm errors telescope across steps") {
  ClockModel m = adiabatic_model(128, 4);
  GateProgram prog = cyclic_program(m.Ng, {"X", "H"});
  JointHamiltonian H(m, prog);
  auto logical = ideal_trajectory(prog);
  JointState psi = joint_product(prog.initial_logical, clock_state(m, 0.0));
  double sum_single = 0.0;
  JointState cur = psi;
  for (int j = 1; j <= m.Ng; ++j) {
    JointState prev_ideal =
        joint_product(logical[j - 1], clock_state(m, (j - 1) * double(m.d) / m.Ng));
    JointState step = H.evolve(prev_ideal, m.t1(), Method::exact);
    JointState ideal =
        joint_product(logical[j], clock_state(m, j * double(m.d) / m.Ng));
    sum_single += (step.amplitudes - ideal.amplitudes).norm();
    cur = H.evolve(cur, m.t1(), Method::exact);
    double cumulative = (cur.amplitudes - ideal.amplitudes).norm();
    CHECK(cumulative <= sum_single + 1e-9);
  }
}

TEST_CASE("scaling sweep fits slopes and flags degenerate fits") {
  Overrides ov{{"N_pot", 2}, {"c_n", 0.15}};
  ScalingResult r = scaling_sweep({64, 128}, 0.05, Regime::classical, {"X", "H"},
                                  Method::exact, ov);
  REQUIRE(r.points.size() == 2);
  CHECK(r.slope_defined);
  CHECK_FALSE(r.partial);
  CHECK(r.points[0].f_T0 == Catch::Approx(6.0));
  std::string csv = r.to_csv();
  CHECK(csv.rfind("# chronosim.scaling.v1", 0) == 0);
  CHECK(csv.find("d,Ng,f_T0,E0_T0,max_error,method,regime,eps_bar") != std::string::npos);

  ScalingResult single = scaling_sweep({64}, 0.05, Regime::classical, {"X"},
                                       Method::exact, ov);
  CHECK_FALSE(single.slope_defined);
  CHECK_THROWS_AS(scaling_sweep({128, 64}, 0.05, Regime::classical, {"X"},
                                Method::exact, ov),
                  ConfigError);
}

TEST_CASE("frequency bound checks assemble the quoted constants") {
  BoundConstants bc;
  CHECK(bc.delta0() == Catch::Approx(0.0887).margin(2e-4));
  CHECK(bc.c_hl() == Catch::Approx(0.0887 / 0.091).margin(2e-3));

  ClockModel m = adiabatic_model(128, 4);
  GateProgram prog = cyclic_program(m.Ng, {"X"});
  GateRunReport rep = run_program(m, prog, Method::exact);
  BoundReport br = check_frequency_bounds(rep);
  CHECK(br.orthogonality_ok);
  for (const auto& c : br.checks) CHECK(c.pass);

  GateRunReport degenerate;
  degenerate.f = 0.0;
  degenerate.E0 = 0.0;
  degenerate.Ng = 1;
  degenerate.regime = Regime::quantum;
  degenerate.min_consecutive_ideal_distance = 1.0;
  BoundReport bd = check_frequency_bounds(degenerate);
  CHECK(bd.checks[0].degenerate);
  CHECK(bd.checks[0].pass);
  CHECK(bd.to_json().find("chronosim.bounds.v1") != std::string::npos);
}

TEST_CASE("memory-classical reduction matches an explicit-memory instance") {
  // two windows, |G| = 2, explicit memory register of two cells
  ClockModel m = make_model(8, 0.16, Regime::classical, 1.0,
                            {{"N_pot", 2}, {"n_pot", 1.0}, {"n_tilde0", 0.5}});
  REQUIRE(m.Ng == 2);
  const int d = m.d, dL = 2, gsz = 2;
  std::vector<Mat> gate = {pauli_x(), hadamard()};
  // reduced run with the fixed sequence (m1, m2) = (X, H)
  GateProgram prog = program_from_symbols({"X", "H"});
  JointHamiltonian Hred(m, prog);
  JointState red = joint_product(prog.initial_logical, clock_state(m, 0.0));
  red = Hred.evolve(red, m.T0, Method::exact);

  // explicit memory: dim = gsz^2 * dL * d = 64; basis (m1, m2, a, k)
  const int dim = gsz * gsz * dL * d;
  Mat H = Mat::Zero(dim, dim);
  Mat hc;
  {
    GateProgram none;
    none.d_L = 1;
    none.initial_logical = Vec::Ones(1);
    hc = JointHamiltonian(m, none).dense();
  }
  auto idx = [&](int m1, int m2, int a, int k) {
    return ((m1 * gsz + m2) * dL + a) * d + k;
  };
  RVec prof1 = potential_profile(m, 1).values;
  RVec prof2 = potential_profile(m, 2).values;
  for (int m1 = 0; m1 < gsz; ++m1)
    for (int m2 = 0; m2 < gsz; ++m2) {
      Mat D1 = JointHamiltonian::drive_of(gate_generator(gate[m1]));
      Mat D2 = JointHamiltonian::drive_of(gate_generator(gate[m2]));
      for (int a = 0; a < dL; ++a)
        for (int b = 0; b < dL; ++b)
          for (int k = 0; k < d; ++k) {
            H(idx(m1, m2, a, k), idx(m1, m2, b, k)) +=
                D1(a, b) * prof1[k] + D2(a, b) * prof2[k];
          }
      for (int a = 0; a < dL; ++a)
        for (int k = 0; k < d; ++k)
          for (int k2 = 0; k2 < d; ++k2)
            H(idx(m1, m2, a, k), idx(m1, m2, a, k2)) += hc(k, k2);
    }
  Vec psi0 = Vec::Zero(dim);
  ClockState c0 = clock_state(m, 0.0);
  for (int k = 0; k < d; ++k) psi0[idx(0, 1, 0, k)] = c0.amplitudes[k];
  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  Vec c = es.eigenvectors().adjoint() * psi0;
  for (int i = 0; i < dim; ++i)
    c[i] *= std::exp(cxd(0.0, -1.0) * es.eigenvalues()[i] * m.T0);
  Vec full = es.eigenvectors() * c;
  // memory never evolves: all support stays in the (m1,m2) = (0,1) block
  Vec reduced = Vec::Zero(dL * d);
  double outside = 0.0;
  for (int m1 = 0; m1 < gsz; ++m1)
    for (int m2 = 0; m2 < gsz; ++m2)
      for (int a = 0; a < dL; ++a)
        for (int k = 0; k < d; ++k) {
          cxd v = full[idx(m1, m2, a, k)];
          if (m1 == 0 && m2 == 1)
            reduced[a * d + k] = v;
          else
            outside += std::norm(v);
        }
  CHECK(outside < 1e-20);
  CHECK((reduced - red.amplitudes).norm() < 1e-9);
}

TEST_CASE("blank memory cells drive the switch register, not the logical") {
  // one window reading a cell over {blank, a}; blank flips W, 'a' applies X
  // on L. Explicit register dim: 2(cell) * 2(W) * 2(L) * 8(C) = 64.
  ClockModel m = make_model(8, 0.16, Regime::classical, 1.0,
                            {{"N_pot", 2}, {"n_pot", 1.0}, {"n_tilde0", 0.5}});
  const int d = m.d;
  RVec prof = potential_profile(m, 1).values;
  Mat dx = JointHamiltonian::drive_of(gate_generator(pauli_x()));
  Mat hc;
  {
    GateProgram none;
    none.d_L = 1;
    none.initial_logical = Vec::Ones(1);
    hc = JointHamiltonian(m, none).dense();
  }
  const int dim = 2 * 2 * 2 * d;
  auto idx = [&](int cell, int w, int a, int k) {
    return ((cell * 2 + w) * 2 + a) * d + k;
  };
  Mat H = Mat::Zero(dim, dim);
  for (int cell = 0; cell < 2; ++cell)
    for (int w = 0; w < 2; ++w)
      for (int w2 = 0; w2 < 2; ++w2)
        for (int a = 0; a < 2; ++a)
          for (int a2 = 0; a2 < 2; ++a2)
            for (int k = 0; k < d; ++k) {
              double v = 0.0;
              if (cell == 0 && a == a2) v = std::real(dx(w, w2)) * prof[k];
              if (cell == 1 && w == w2) v = std::real(dx(a, a2)) * prof[k];
              if (v != 0.0) H(idx(cell, w, a, k), idx(cell, w2, a2, k)) += v;
            }
  for (int cell = 0; cell < 2; ++cell)
    for (int w = 0; w < 2; ++w)
      for (int a = 0; a < 2; ++a)
        for (int k = 0; k < d; ++k)
          for (int k2 = 0; k2 < d; ++k2)
            H(idx(cell, w, a, k), idx(cell, w, a, k2)) += hc(k, k2);
  ClockState c0 = clock_state(m, 0.0);
  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  auto evolve_cycle = [&](int cell) {
    Vec psi0 = Vec::Zero(dim);
    for (int k = 0; k < d; ++k) psi0[idx(cell, 0, 0, k)] = c0.amplitudes[k];
    Vec c = es.eigenvectors().adjoint() * psi0;
    for (int i = 0; i < dim; ++i)
      c[i] *= std::exp(cxd(0.0, -1.0) * es.eigenvalues()[i] * m.T0);
    return Vec(es.eigenvectors() * c);
  };
  // blank cell: only W evolves; the logical register stays put exactly
  Vec fin = evolve_cycle(0);
  double p_l1 = 0.0, p_w1 = 0.0, total = 0.0, outside = 0.0;
  for (int cell = 0; cell < 2; ++cell)
    for (int w = 0; w < 2; ++w)
      for (int a = 0; a < 2; ++a)
        for (int k = 0; k < d; ++k) {
          double pr = std::norm(fin[idx(cell, w, a, k)]);
          if (cell != 0) { outside += pr; continue; }
          total += pr;
          if (a == 1) p_l1 += pr;
          if (w == 1) p_w1 += pr;
        }
  CHECK(outside < 1e-20);  // the memory cell itself never changes
  CHECK(total == Catch::Approx(1.0).margin(1e-10));
  CHECK(p_l1 < 1e-20);     // logical untouched by a blank cell
  CHECK(p_w1 > 0.0);       // the switch register is the one being driven
  // gate cell: only L evolves; the switch stays off exactly
  fin = evolve_cycle(1);
  double q_w1 = 0.0, q_l1 = 0.0;
  for (int w = 0; w < 2; ++w)
    for (int a = 0; a < 2; ++a)
      for (int k = 0; k < d; ++k) {
        double pr = std::norm(fin[idx(1, w, a, k)]);
        if (w == 1) q_w1 += pr;
        if (a == 1) q_l1 += pr;
      }
  CHECK(q_w1 < 1e-20);
  CHECK(q_l1 > 0.0);
}
