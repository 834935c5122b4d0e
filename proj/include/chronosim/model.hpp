// Copyright 2026 The chronosim authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#ifndef CHRONOSIM_MODEL_HPP
#define CHRONOSIM_MODEL_HPP

#include <cmath>
#include <map>
#include <optional>
#include <string>

#include "chronosim/common.hpp"

namespace chronosim {

enum class Regime { classical, quantum };

inline const char* to_string(Regime r) {
  return r == Regime::classical ? "classical" : "quantum";
}

// Gaussian-width schedule exponents for the two control regimes.
inline double eta_quantum(double eps_bar) {
  return 2.0 * eps_bar / (2.0 * eps_bar + 2.0 * std::sqrt(eps_bar) + 1.0);
}
inline double eta_classical(double eps_bar) {
  return (0.5 + eps_bar) / (0.5 + eps_bar + std::sqrt(eps_bar));
}

// Numerical constant in the sharpness schedule for the interaction bumps.
inline constexpr double kSharpnessKappa = 0.792;

// All derived clock/schedule parameters. Immutable after construction.
struct ClockModel {
  int d = 0;             // control Hilbert dimension
  double T0 = 1.0;       // cycle time, seconds
  Regime regime = Regime::classical;
  double eps_bar = 0.0;  // dimensionless schedule parameter, in (0, 1/6)
  double sigma = 0.0;    // Gaussian width, lattice units
  double n0 = 0.0;       // mean energy index
  double n_tilde0 = 0.0; // n0 / (d - 1)
  double eta = 0.0;
  double alpha0 = 0.0;
  double eps5 = 0.0, eps6 = 0.0, eps7 = 0.0, eps9 = 0.0, eps_g = 0.0;
  double n_pot = 0.0;    // bump sharpness
  int N_pot = 0;         // sinc exponent (half), >= 1
  int N_formula = 0;     // un-overridden value, kept for reports
  bool N_overridden = false;
  bool n_overridden = false;
  double c_n = 1.0;      // sharpness prefactor actually used
  int Ng = 0;            // interaction windows per cycle
  double omega0 = 0.0;   // 2*pi / T0, exact

  double t1() const { return T0 / Ng; }
  double f() const { return Ng / T0; }
  // Design mean energy of the free control state, units 1/seconds.
  double design_energy() const { return kTwoPi / T0 * n0; }
};

// Optional per-key parameter overrides. Unknown keys are rejected; values
// that break the exponent-constraint chain are rejected.
using Overrides = std::map<std::string, double>;

inline ClockModel make_model(int d, double eps_bar, Regime regime, double T0,
                             const Overrides& ov = {}) {
  if (d < 8) throw ConfigError("make_model: d must be >= 8, got " + std::to_string(d));
  if (!(eps_bar > 0.0 && eps_bar < 1.0 / 6.0))
    throw ConfigError("make_model: eps_bar must lie in (0, 1/6)");
  if (!(T0 > 0.0)) throw ConfigError("make_model: T0 must be positive");
  for (const auto& [k, v] : ov) {
    if (k != "N_pot" && k != "c_n" && k != "n_tilde0" && k != "sigma" && k != "n_pot")
      throw ConfigError("make_model: unknown override key '" + k + "'");
    (void)v;
  }

  ClockModel m;
  m.d = d;
  m.T0 = T0;
  m.regime = regime;
  m.eps_bar = eps_bar;
  m.omega0 = kTwoPi / T0;

  m.n_tilde0 = 1.0 / kTwoPi;
  if (auto it = ov.find("n_tilde0"); it != ov.end()) {
    if (!(it->second > 0.0 && it->second < 1.0))
      throw ConfigError("make_model: n_tilde0 override must lie in (0,1)");
    m.n_tilde0 = it->second;
  }
  m.n0 = m.n_tilde0 * (d - 1);
  m.alpha0 = 1.0 - std::abs(1.0 - m.n0 * 2.0 / (d - 1));

  if (regime == Regime::quantum) {
    m.eta = eta_quantum(eps_bar);
    m.sigma = std::pow(d, m.eta / 2.0);
    m.eps_g = eps_bar;
  } else {
    m.eta = eta_classical(eps_bar);
    // Equal conjugate-pair widths pin sigma = sqrt(d) in this regime.
    m.sigma = std::sqrt(static_cast<double>(d));
    m.eps_g = 0.5 + eps_bar;
  }
  if (auto it = ov.find("sigma"); it != ov.end()) m.sigma = it->second;

  m.eps5 = m.eta * eps_bar;
  m.eps6 = std::log(m.sigma) / std::log(static_cast<double>(d));
  m.eps7 = 2.0 * m.eta * eps_bar;
  m.eps9 = m.eta / 2.0;
  if (!(m.eps5 < m.eps6 && m.eps6 < 1.0))
    throw ConfigError("make_model: sigma violates eps5 < eps6 < 1");
  if (!(m.eps5 < m.eps7))
    throw ConfigError("make_model: eps5 < eps7 violated");
  if (!(3.0 - 4.0 * m.eps5 - m.eps9 > 0.0))
    throw ConfigError("make_model: 3 - 4*eps5 - eps9 must be positive");

  m.Ng = static_cast<int>(std::floor(std::pow(d, 1.0 - m.eps_g)));
  if (m.Ng < 1) throw ConfigError("make_model: schedule gives Ng < 1");

  m.N_formula = static_cast<int>(
      std::ceil((3.0 - 4.0 * m.eps5 - m.eps9) / (2.0 * (m.eps7 - m.eps5))));
  m.N_pot = m.N_formula;
  if (auto it = ov.find("N_pot"); it != ov.end()) {
    int N = static_cast<int>(it->second);
    if (N < 2 || N > m.N_formula)
      throw ConfigError("make_model: N_pot override must lie in [2, formula value]");
    m.N_pot = N;
    m.N_overridden = true;
  }

  if (auto it = ov.find("c_n"); it != ov.end()) m.c_n = it->second;
  m.n_pot = m.c_n * std::log(kPi * m.alpha0 * m.sigma * m.sigma) /
            (kTwoPi * m.alpha0 * kSharpnessKappa) *
            std::pow(d, 1.0 - m.eps5) / m.sigma;
  if (auto it = ov.find("n_pot"); it != ov.end()) {
    m.n_pot = it->second;
    m.n_overridden = true;
  }
  if (!(m.n_pot > 0.0)) throw ConfigError("make_model: bump sharpness must be positive");
  return m;
}

}  // namespace chronosim

#endif
