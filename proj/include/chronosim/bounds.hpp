// Copyright 2026 The chronosim authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#ifndef CHRONOSIM_BOUNDS_HPP
#define CHRONOSIM_BOUNDS_HPP

#include <sstream>
#include <string>
#include <vector>

#include "chronosim/run.hpp"

namespace chronosim {

struct BoundCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
  bool degenerate = false;
  double slack() const { return rhs - lhs; }
};

struct BoundReport {
  std::vector<BoundCheck> checks;
  bool orthogonality_ok = true;
  double orthogonality_threshold = 0.0;
  BoundConstants constants;

  bool all_pass() const {
    if (!orthogonality_ok) return false;
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }

  std::string to_json() const;
};

// Frequency/energy audit of a finished gate run. The trajectory-orthogonality
// hypothesis is verified first (consecutive joint ideal states must be
// distance >= 1 - eps_orth apart, eps_orth = 2 * max per-gate error); a
// violated hypothesis is reported, never silently passed.
inline BoundReport check_frequency_bounds(const GateRunReport& rep,
                                          const BoundConstants& bc = {}) {
  BoundReport out;
  out.constants = bc;
  out.orthogonality_threshold = 1.0 - 2.0 * rep.max_error();
  out.orthogonality_ok =
      rep.min_consecutive_ideal_distance >= out.orthogonality_threshold;

  BoundCheck hl;
  hl.name = "f <= C_HL * E0";
  hl.lhs = rep.f;
  hl.rhs = bc.c_hl() * rep.E0;
  hl.degenerate = rep.E0 <= 0.0;
  hl.pass = hl.degenerate ? rep.f == 0.0 : hl.lhs <= hl.rhs;
  out.checks.push_back(hl);

  if (rep.regime == Regime::classical) {
    BoundCheck sql;
    sql.name = "f <= C_SQL * sqrt(E0/T0)";
    double T0 = rep.Ng / rep.f;
    sql.lhs = rep.f;
    sql.rhs = bc.c_sql() * std::sqrt(std::max(0.0, rep.E0) / T0);
    sql.degenerate = rep.E0 <= 0.0;
    sql.pass = sql.degenerate ? rep.f == 0.0 : sql.lhs <= sql.rhs;
    out.checks.push_back(sql);
  }
  return out;
}

inline std::string BoundReport::to_json() const {
  std::ostringstream os;
  os.precision(17);
  os << "{\n  \"schema_version\": \"chronosim.bounds.v1\",\n";
  os << "  \"constants\": {\"lambda\": " << constants.lambda
     << ", \"kappa\": " << constants.kappa << ", \"delta0\": "
     << constants.delta0() << ", \"c0\": " << constants.c0
     << ", \"c0_calibrated\": " << (constants.c0_calibrated ? "true" : "false")
     << "},\n";
  os << "  \"orthogonality_ok\": " << (orthogonality_ok ? "true" : "false")
     << ",\n  \"orthogonality_threshold\": " << orthogonality_threshold
     << ",\n  \"checks\": [\n";
  for (size_t i = 0; i < checks.size(); ++i) {
    const auto& c = checks[i];
    os << "    {\"bound\": \"" << c.name << "\", \"lhs\": " << c.lhs
       << ", \"rhs\": " << c.rhs << ", \"slack\": " << c.slack()
       << ", \"pass\": " << (c.pass ? "true" : "false")
       << ", \"degenerate\": " << (c.degenerate ? "true" : "false") << "}"
       << (i + 1 < checks.size() ? "," : "") << "\n";
  }
  os << "  ]\n}\n";
  return os.str();
}

}  // namespace chronosim

#endif
