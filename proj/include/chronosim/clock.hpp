// Copyright 2026 The chronosim authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#ifndef CHRONOSIM_CLOCK_HPP
#define CHRONOSIM_CLOCK_HPP

#include "chronosim/fft.hpp"
#include "chronosim/model.hpp"
#include "chronosim/potential.hpp"

namespace chronosim {

enum class Basis { theta, energy };

struct ClockState {
  Vec amplitudes;  // length d
  Basis basis_tag = Basis::theta;
  double a_nor = 0.0;  // normalization constant of the raw Gaussian profile
};

// Gaussian control state centered at lattice coordinate k0 (any real), in the
// theta basis. Amplitudes are summed over lattice images so the construction
// is d-periodic in k0 exactly.
inline ClockState clock_state(const ClockModel& m, double k0) {
  ClockState s;
  s.basis_tag = Basis::theta;
  s.amplitudes.resize(m.d);
  const int P = 3;
  for (int k = 0; k < m.d; ++k) {
    cxd a = 0.0;
    for (int p = -P; p <= P; ++p) {
      double kk = k + static_cast<double>(p) * m.d - k0;
      double g = std::exp(-kPi * kk * kk / (m.sigma * m.sigma));
      double ph = kTwoPi * m.n0 * kk / m.d;
      a += g * cxd(std::cos(ph), std::sin(ph));
    }
    s.amplitudes[k] = a;
  }
  double nrm = s.amplitudes.norm();
  s.a_nor = 1.0 / nrm;
  s.amplitudes /= nrm;
  return s;
}

inline ClockState basis_change(const ClockState& s, Basis target) {
  if (s.basis_tag == target) return s;
  ClockState out;
  out.basis_tag = target;
  out.a_nor = s.a_nor;
  if (target == Basis::energy)
    out.amplitudes = Dft::instance().theta_to_energy(s.amplitudes);
  else
    out.amplitudes = Dft::instance().energy_to_theta(s.amplitudes);
  return out;
}

// Free evolution: multiply energy-basis amplitudes by e^{-i n w0 t}. Exact.
inline ClockState free_evolve(const ClockModel& m, const ClockState& s, double t) {
  ClockState e = basis_change(s, Basis::energy);
  for (int n = 0; n < m.d; ++n) {
    double ph = -static_cast<double>(n) * m.omega0 * t;
    e.amplitudes[n] *= cxd(std::cos(ph), std::sin(ph));
  }
  return s.basis_tag == Basis::energy ? e : basis_change(e, Basis::theta);
}

// <H_C> of a control state, units 1/seconds.
inline double clock_mean_energy(const ClockModel& m, const ClockState& s) {
  ClockState e = basis_change(s, Basis::energy);
  double acc = 0.0;
  for (int n = 0; n < m.d; ++n)
    acc += n * m.omega0 * std::norm(e.amplitudes[n]);
  if (acc < -1e-10) throw NumericalFault("clock_mean_energy: negative expectation");
  return acc;
}

struct NormReport {
  double interaction_frob_ratio = 0.0;  // T0 ||I_C^(l)||_F / sqrt(2 pi d)
  double free_frob_ratio = 0.0;         // T0 ||H_C||_F / sqrt(2 pi d)
  double ladder_frob = 0.0;             // ||a_d||_F = sqrt(d(d-1)/2)
  double profile_l1 = 0.0;              // discrete Riemann sum of vbar0
};

inline NormReport norm_diagnostics(const ClockModel& m, int l = 1) {
  NormReport r;
  PotentialDiag p = potential_profile(m, l);
  // ||I_C||_F^2 = sum_k values[k]^2 ; ratio reduces to the discrete 2-norm of
  // vbar0 over one period.
  double frob2 = p.values.squaredNorm();
  r.interaction_frob_ratio = m.T0 * std::sqrt(frob2) / std::sqrt(kTwoPi * m.d);
  double s2 = 0.0;
  for (int n = 0; n < m.d; ++n) s2 += sq(n * m.omega0);
  r.free_frob_ratio = m.T0 * std::sqrt(s2) / std::sqrt(kTwoPi * m.d);
  r.ladder_frob = std::sqrt(0.5 * m.d * (m.d - 1.0));
  r.profile_l1 = profile_riemann_sum(m, p);
  return r;
}

}  // namespace chronosim

#endif
