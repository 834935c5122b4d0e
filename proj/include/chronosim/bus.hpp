// Copyright 2026 The chronosim authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#ifndef CHRONOSIM_BUS_HPP
#define CHRONOSIM_BUS_HPP

#include <sstream>
#include <vector>

#include "chronosim/joint.hpp"

namespace chronosim {

// One lane's memory column: cell 0 plus L payload cells over the alphabet
// {blank, 1, ..., |G|}. Symbol 0 is the blank cell marker.
struct MemoryBlock {
  std::vector<int> cell_symbols;  // length L+1, cell_symbols[0] == 0
  int alphabet = 0;               // |G|
  int cell_dim() const { return alphabet + 1; }
  int cells() const { return static_cast<int>(cell_symbols.size()); }
  long block_dim() const {
    long n = 1;
    for (int i = 0; i < cells(); ++i) n *= cell_dim();
    return n;
  }
};

inline void validate_block(const MemoryBlock& b) {
  if (b.cells() < 2) throw ConfigError("memory block needs at least 2 cells");
  if (b.cell_symbols[0] != 0)
    throw ConfigError("memory block: cell 0 must hold the blank symbol");
  for (int s : b.cell_symbols)
    if (s < 0 || s > b.alphabet)
      throw ConfigError("memory block: symbol outside alphabet");
}

// Content-shift permutation on the block basis:
//   (c_0, c_1, ..., c_L) -> (c_1, ..., c_L, c_0)
// Basis index is little-endian in the cells: idx = sum_j c_j * q^j.
inline Mat shift_permutation(const MemoryBlock& b) {
  const long n = b.block_dim();
  const int q = b.cell_dim();
  const int L1 = b.cells();
  Mat P = Mat::Zero(n, n);
  std::vector<int> c(L1);
  for (long idx = 0; idx < n; ++idx) {
    long x = idx;
    for (int j = 0; j < L1; ++j) { c[j] = x % q; x /= q; }
    long to = 0;
    for (int j = 0; j < L1; ++j) {
      int cj = c[(j + 1) % L1];  // new cell j holds old cell j+1
      to += static_cast<long>(cj) * std::lround(std::pow(q, j));
    }
    P(to, idx) = 1.0;
  }
  return P;
}

struct ShiftGenerator {
  Mat matrix;        // Hermitian, e^{i matrix} = shift permutation
  RVec eigenphases;  // in (0, 2pi]
};

inline ShiftGenerator shift_generator(const MemoryBlock& b) {
  validate_block(b);
  GateGenerator g = gate_generator(shift_permutation(b), "shift");
  return ShiftGenerator{g.matrix, g.eigenphases};
}

struct BusReadSample {
  int cycle = 0;
  int k = 0;          // sample index inside the read interval
  double t = 0.0;
  double fidelity = 0.0;
};

struct BusReport {
  std::vector<BusReadSample> samples;
  int lane = 0;
  double offset_used = 0.0;
  int d = 0, L = 0;
  double f_bus = 0.0;  // 1/T0

  double min_fidelity(int cycle = -1) const {
    double m = 1.0;
    for (const auto& s : samples)
      if (cycle < 0 || s.cycle == cycle) m = std::min(m, s.fidelity);
    return m;
  }

  std::string to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "# chronosim.bus.v1\n";
    os << "d,L,lane,offset,cycle,k,fidelity\n";
    for (const auto& s : samples)
      os << d << "," << L << "," << lane << "," << offset_used << ","
         << s.cycle << "," << s.k << "," << s.fidelity << "\n";
    return os.str();
  }
};

inline constexpr long kBusDimCap = 1 << 20;

namespace detail {

// Shared bus-lane setup: block eigen-frame, branch clock states.
struct BusLane {
  ClockModel m;
  MemoryBlock block;
  Mat eigvecs;   // columns: eigenvectors of the drive generator
  RVec omegas;   // matching eigenphases in (0, 2pi]
  RVec profile;  // clock window diagonal, 1/seconds
  Vec block0;    // initial block state in the computational basis
};

inline BusLane bus_setup(const ClockModel& m2, int lane,
                         const MemoryBlock& block, double offset) {
  if (m2.regime != Regime::classical)
    throw ConfigError("run_bus_lane: bus clock must use the classical regime");
  if (offset != 0.0 && std::abs(offset - kPi) > 1e-12)
    throw ConfigError("run_bus_lane: offset must be 0 or pi");
  validate_block(block);
  if (block.block_dim() * m2.d > kBusDimCap)
    throw CapabilityError("run_bus_lane: block_dim * d exceeds capability");
  BusLane s{m2, block, {}, {}, {}, {}};
  ShiftGenerator g = shift_generator(block);
  // The drive generator reverses eigenphases so a full window crossing
  // applies the forward content shift.
  Mat drive = JointHamiltonian::drive_of(GateGenerator{g.matrix, g.eigenphases, "shift"});
  Eigen::SelfAdjointEigenSolver<Mat> es(drive);
  s.eigvecs = es.eigenvectors();
  s.omegas = es.eigenvalues();
  s.profile = potential_profile(m2, lane, offset).values;
  const int q = block.cell_dim();
  long idx = 0;
  long mul = 1;
  for (int j = 0; j < block.cells(); ++j) {
    idx += block.cell_symbols[j] * mul;
    mul *= q;
  }
  s.block0 = Vec::Zero(block.block_dim());
  s.block0[idx] = 1.0;
  return s;
}

// Population of the expected cell-0 symbol from branch clock vectors chi_b
// (block computational basis index b).
inline double cell0_population(const BusLane& s, const std::vector<Vec>& chi,
                               int expected_symbol) {
  const int q = s.block.cell_dim();
  double pop = 0.0;
  for (long b = 0; b < static_cast<long>(chi.size()); ++b)
    if (b % q == expected_symbol) pop += chi[b].squaredNorm();
  return pop;
}

}  // namespace detail

// Single-lane bus run: evolve |column> (x) |Psi(0)> under
// H_C2 + I_M (x) I_C2^{(lane)} by decomposing the block in the interaction
// eigenbasis and evolving the clock factor exactly per eigenvalue. At each
// read sample the reduced cell-0 state is scored against the expected symbol.
inline BusReport run_bus_lane(const ClockModel& m2, int lane,
                              const MemoryBlock& block, int L_cycles,
                              double offset, int samples_per_read = 8) {
  detail::BusLane s = detail::bus_setup(m2, lane, block, offset);
  const long B = block.block_dim();
  const int d = m2.d;
  ClockState c0 = clock_state(m2, 0.0);

  // Branch spectra: group identical eigenvalues to share diagonalizations.
  Mat hc_theta;
  {
    JointHamiltonian free_h(m2, GateProgram{{}, 1, Vec::Ones(1)});
    hc_theta = free_h.dense();
  }
  std::vector<int> rep(B, -1);
  std::vector<std::pair<RVec, Mat>> eigs;  // per representative
  std::vector<Vec> coef(B);
  for (long q = 0; q < B; ++q) {
    int share = -1;
    for (long r = 0; r < q; ++r)
      if (std::abs(s.omegas[r] - s.omegas[q]) < 1e-12) { share = rep[r]; break; }
    if (share < 0) {
      Mat Hq = hc_theta;
      Hq.diagonal() += s.omegas[q] * s.profile.cast<cxd>();
      Eigen::SelfAdjointEigenSolver<Mat> es(Hq);
      eigs.emplace_back(es.eigenvalues(), es.eigenvectors());
      share = static_cast<int>(eigs.size()) - 1;
    }
    rep[q] = share;
    coef[q] = eigs[share].second.adjoint() * c0.amplitudes;
  }
  Vec bcoef = s.eigvecs.adjoint() * s.block0;  // branch weights

  auto branch_clock = [&](long q, double t) {
    const auto& [w, V] = eigs[rep[q]];
    Vec c = coef[q];
    for (int i = 0; i < d; ++i) {
      double ph = -w[i] * t;
      c[i] *= cxd(std::cos(ph), std::sin(ph));
    }
    return Vec(V * c);
  };

  BusReport out;
  out.lane = lane;
  out.offset_used = offset;
  out.d = d;
  out.L = block.cells() - 1;
  out.f_bus = 1.0 / m2.T0;
  const double t1 = m2.t1();
  std::vector<Vec> chi(B, Vec::Zero(d));
  if (L_cycles == 0) {  // nothing applied yet: score the initial block
    BusReadSample smp;
    smp.cycle = 0;
    smp.k = 0;
    smp.t = 0.0;
    for (long b = 0; b < B; ++b) {
      chi[b].setZero();
      for (long q = 0; q < B; ++q)
        chi[b] += s.eigvecs(b, q) * bcoef[q] * branch_clock(q, 0.0);
    }
    smp.fidelity = detail::cell0_population(s, chi, block.cell_symbols[0]);
    out.samples.push_back(smp);
    return out;
  }
  for (int l = 1; l <= L_cycles; ++l) {
    int expected = block.cell_symbols[l % block.cells()];
    for (int k = 0; k < samples_per_read; ++k) {
      double t = l * m2.T0 + (lane - 1) * t1 + (k + 0.5) / samples_per_read * t1;
      for (long b = 0; b < B; ++b) chi[b].setZero();
      for (long q = 0; q < B; ++q) {
        if (std::abs(bcoef[q]) < 1e-15) continue;
        Vec phi = branch_clock(q, t);
        for (long b = 0; b < B; ++b) chi[b] += s.eigvecs(b, q) * bcoef[q] * phi;
      }
      BusReadSample smp;
      smp.cycle = l;
      smp.k = k;
      smp.t = t;
      smp.fidelity = detail::cell0_population(s, chi, expected);
      out.samples.push_back(smp);
    }
  }
  return out;
}

// Joint block (x) clock state at time t via the per-eigenvalue path, block
// index slow. Test hook for backend-equivalence checks.
inline Vec bus_joint_state(const ClockModel& m2, int lane,
                           const MemoryBlock& block, double offset, double t) {
  detail::BusLane s = detail::bus_setup(m2, lane, block, offset);
  const long B = block.block_dim();
  const int d = m2.d;
  ClockState c0 = clock_state(m2, 0.0);
  Vec bcoef = s.eigvecs.adjoint() * s.block0;
  JointHamiltonian free_h(m2, GateProgram{{}, 1, Vec::Ones(1)});
  Mat hc = free_h.dense();
  Vec out = Vec::Zero(B * d);
  for (long q = 0; q < B; ++q) {
    if (std::abs(bcoef[q]) < 1e-15) continue;
    Mat Hq = hc;
    Hq.diagonal() += s.omegas[q] * s.profile.cast<cxd>();
    Eigen::SelfAdjointEigenSolver<Mat> es(Hq);
    Vec c = es.eigenvectors().adjoint() * c0.amplitudes;
    for (int i = 0; i < d; ++i) {
      double ph = -es.eigenvalues()[i] * t;
      c[i] *= cxd(std::cos(ph), std::sin(ph));
    }
    Vec phi = es.eigenvectors() * c;
    for (long b = 0; b < B; ++b)
      out.segment(b * d, d) += s.eigvecs(b, q) * bcoef[q] * phi;
  }
  return out;
}

// Same state via splitstep over the joint space. Test hook.
inline Vec bus_joint_state_splitstep(const ClockModel& m2, int lane,
                                     const MemoryBlock& block, double offset,
                                     double t, double dt) {
  detail::BusLane s = detail::bus_setup(m2, lane, block, offset);
  const long B = block.block_dim();
  const int d = m2.d;
  ClockState c0 = clock_state(m2, 0.0);
  Vec bcoef = s.eigvecs.adjoint() * s.block0;
  std::vector<Vec> psi(B);
  for (long q = 0; q < B; ++q) psi[q] = bcoef[q] * c0.amplitudes;
  Vec erow(d);
  auto half_free = [&](double tau) {
    for (long q = 0; q < B; ++q) {
      Dft::instance().theta_to_energy(psi[q], erow);
      for (int n = 0; n < d; ++n) {
        double ph = -n * m2.omega0 * tau;
        erow[n] *= cxd(std::cos(ph), std::sin(ph));
      }
      Dft::instance().energy_to_theta(erow, psi[q]);
    }
  };
  double tcur = 0.0;
  while (tcur < t - 1e-15) {
    double step = std::min(dt, t - tcur);
    half_free(step / 2.0);
    for (long q = 0; q < B; ++q)
      for (int k = 0; k < d; ++k) {
        double ph = -s.omegas[q] * s.profile[k] * step;
        psi[q][k] *= cxd(std::cos(ph), std::sin(ph));
      }
    half_free(step / 2.0);
    tcur += step;
  }
  Vec out = Vec::Zero(B * d);
  for (long q = 0; q < B; ++q)
    for (long b = 0; b < B; ++b)
      out.segment(b * d, d) += s.eigvecs(b, q) * psi[q];
  return out;
}

// Splitstep variant over the joint block (x) clock space; the interaction
// step is diagonal in the block eigen-frame. Used to cross-validate the
// per-eigenvalue path and to run 2-3 simultaneous lanes.
inline BusReport run_bus_lane_splitstep(const ClockModel& m2, int lane,
                                        const MemoryBlock& block, int L_cycles,
                                        double offset, double dt,
                                        int samples_per_read = 8) {
  detail::BusLane s = detail::bus_setup(m2, lane, block, offset);
  const long B = block.block_dim();
  const int d = m2.d;
  if (!(dt > 0.0)) throw ConfigError("bus splitstep: dt must be positive");

  // State rows live in the block eigen-frame.
  std::vector<Vec> psi(B, Vec::Zero(d));
  ClockState c0 = clock_state(m2, 0.0);
  Vec bcoef = s.eigvecs.adjoint() * s.block0;
  for (long q = 0; q < B; ++q) psi[q] = bcoef[q] * c0.amplitudes;

  auto half_free = [&](double tau) {
    Vec erow(d);
    for (long q = 0; q < B; ++q) {
      if (psi[q].squaredNorm() < 1e-300) continue;
      Dft::instance().theta_to_energy(psi[q], erow);
      for (int n = 0; n < d; ++n) {
        double ph = -n * s.m.omega0 * tau;
        erow[n] *= cxd(std::cos(ph), std::sin(ph));
      }
      Dft::instance().energy_to_theta(erow, psi[q]);
    }
  };

  BusReport out;
  out.lane = lane;
  out.offset_used = offset;
  out.d = d;
  out.L = block.cells() - 1;
  out.f_bus = 1.0 / m2.T0;
  const double t1 = s.m.t1();
  double tcur = 0.0;
  std::vector<Vec> chi(B, Vec::Zero(d));
  auto advance_to = [&](double t) {
    while (tcur < t - 1e-15) {
      double step = std::min(dt, t - tcur);
      half_free(step / 2.0);
      for (long q = 0; q < B; ++q) {
        if (psi[q].squaredNorm() < 1e-300) continue;
        for (int k = 0; k < d; ++k) {
          double ph = -s.omegas[q] * s.profile[k] * step;
          psi[q][k] *= cxd(std::cos(ph), std::sin(ph));
        }
      }
      half_free(step / 2.0);
      tcur += step;
    }
  };
  for (int l = 1; l <= L_cycles; ++l) {
    int expected = block.cell_symbols[l % block.cells()];
    for (int k = 0; k < samples_per_read; ++k) {
      double t = l * s.m.T0 + (lane - 1) * t1 + (k + 0.5) / samples_per_read * t1;
      advance_to(t);
      for (long b = 0; b < B; ++b) {
        chi[b].setZero();
        for (long q = 0; q < B; ++q) chi[b] += s.eigvecs(b, q) * psi[q];
      }
      BusReadSample smp;
      smp.cycle = l;
      smp.k = k;
      smp.t = t;
      smp.fidelity = detail::cell0_population(s, chi, expected);
      out.samples.push_back(smp);
    }
  }
  return out;
}

}  // namespace chronosim

#endif
