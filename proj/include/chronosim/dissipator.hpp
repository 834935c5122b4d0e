// Copyright 2026 The chronosim authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#ifndef CHRONOSIM_DISSIPATOR_HPP
#define CHRONOSIM_DISSIPATOR_HPP

#include <optional>

#include "chronosim/clock.hpp"

namespace chronosim {

// Renewal coupling V_C = gamma0 * I_C^{(Ng)} + eps_b/(2 T0), diagonal in the
// theta basis. Jump operators sqrt(2 v_j) |0><theta_j| reset the clock to the
// renewal target |0>_C.
struct Dissipator {
  RVec vc_values;          // length d, >= 0, units 1/seconds
  double gamma0 = 0.0;     // gamma_bar0 * d^{eps_bar^2}
  double gamma_bar0 = 0.0;
  double eps_b = 0.0;
  ClockState renewal_target;
};

inline Dissipator build_dissipator(const ClockModel& m, double gamma_bar0,
                                   int dtilde_sum,
                                   std::optional<double> eps_b_override = {}) {
  if (!(gamma_bar0 >= 0.0))
    throw ConfigError("build_dissipator: gamma_bar0 must be >= 0");
  Dissipator D;
  D.gamma_bar0 = gamma_bar0;
  D.gamma0 = gamma_bar0 * std::pow(m.d, m.eps_bar * m.eps_bar);
  if (eps_b_override) {
    D.eps_b = *eps_b_override;
  } else {
    double e0t0 = m.design_energy() * m.T0;  // dimensionless
    D.eps_b = dtilde_sum * std::pow(e0t0, -1.0 / (2.0 * std::sqrt(m.eps_bar)));
  }
  D.vc_values = RVec::Constant(m.d, D.eps_b / (2.0 * m.T0));
  if (D.gamma0 > 0.0)
    D.vc_values += D.gamma0 * potential_profile(m, m.Ng).values;
  D.renewal_target = clock_state(m, 0.0);
  return D;
}

}  // namespace chronosim

#endif
