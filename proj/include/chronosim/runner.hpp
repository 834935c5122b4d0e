// Copyright 2026 The chronosim authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#ifndef CHRONOSIM_RUNNER_HPP
#define CHRONOSIM_RUNNER_HPP

#include <filesystem>
#include <fstream>

#include "chronosim/bus.hpp"
#include "chronosim/limits.hpp"
#include "chronosim/manifest.hpp"
#include "chronosim/sweep.hpp"

namespace chronosim {

struct ArtifactSet {
  std::vector<std::string> files;
  std::string summary_json;
  bool bounds_clean = true;  // no bound violation among audited runs
};

namespace detail {

inline void write_file(const std::filesystem::path& p, const std::string& s,
                       std::vector<std::string>& files) {
  std::ofstream os(p);
  os << s;
  files.push_back(p.string());
}

inline std::string provenance_json(const ExperimentManifest& m) {
  std::ostringstream os;
  os << "{\"schema_version\": \"chronosim.provenance.v1\", \"manifest_hash\": \""
     << std::hex << m.hash() << std::dec << "\", \"kind\": \"" << m.kind
     << "\", \"config\": " << "\"";
  for (char c : m.serialize()) {
    if (c == '\n') os << "\\n";
    else if (c == '"') os << "\\\"";
    else os << c;
  }
  os << "\"}";
  return os.str();
}

inline std::string trace_csv(const CycleTrace& tr) {
  std::ostringstream os;
  os.precision(17);
  os << "# chronosim.trace.v1\n";
  os << "t,survival,renewal_density,energy\n";
  for (long i = 0; i < tr.ts.size(); ++i)
    os << tr.ts[i] << "," << tr.survival[i] << "," << tr.density[i] << ","
       << tr.energy[i] << "\n";
  return os.str();
}

inline std::string stats_json(const ExperimentManifest& man, const CycleStats& st,
                              double eps_h0, double t_max, double f, double T0) {
  std::ostringstream os;
  os.precision(17);
  os << "{\n  \"schema_version\": \"chronosim.cyclestats.v1\",\n"
     << "  \"manifest_hash\": \"" << std::hex << man.hash() << std::dec << "\",\n"
     << "  \"eps_r\": " << st.eps_r << ",\n  \"M1_seconds\": " << st.M1
     << ",\n  \"E_re\": " << st.E_re << ",\n  \"E_diss\": " << st.E_diss
     << ",\n  \"P_in\": " << st.P_in << ",\n  \"P_diss\": " << st.P_diss
     << ",\n  \"P_in_T0sq\": " << st.P_in * T0 * T0
     << ",\n  \"P_diss_T0sq\": " << st.P_diss * T0 * T0
     << ",\n  \"identity_gap\": " << st.identity_gap
     << ",\n  \"tail_mass\": " << st.tail_mass
     << ",\n  \"eps_H0\": " << eps_h0 << ",\n  \"t_max_seconds\": " << t_max
     << ",\n  \"f_T0\": " << f * T0 << "\n}\n";
  return os.str();
}

}  // namespace detail

// Dispatch one manifest; artifacts land in out_dir. Deterministic for a
// fixed manifest + seed (timestamps only in the log).
inline ArtifactSet run_experiment(const ExperimentManifest& man) {
  man.validate();
  namespace fs = std::filesystem;
  fs::path out(man.out_dir);
  fs::create_directories(out);
  ArtifactSet art;
  std::ostringstream log;

  detail::write_file(out / "provenance.json", detail::provenance_json(man),
                     art.files);

  if (man.kind == "gate_run") {
    ClockModel m = make_model(man.d, man.eps_bar, man.regime_enum(),
                              man.T0_seconds, man.overrides);
    GateProgram prog = cyclic_program(m.Ng, man.gates);
    GateRunReport rep = run_program(m, prog, man.method_enum());
    BoundReport br = check_frequency_bounds(rep);
    art.bounds_clean = br.all_pass();
    std::ostringstream os;
    os.precision(17);
    os << "# chronosim.gaterun.v1\n";
    os << "j,error\n";
    for (size_t j = 0; j < rep.per_gate_error.size(); ++j)
      os << (j + 1) << "," << rep.per_gate_error[j] << "\n";
    detail::write_file(out / "gate_run.csv", os.str(), art.files);
    detail::write_file(out / "bounds.json", br.to_json(), art.files);
    log << "gate_run d=" << man.d << " max_error=" << rep.max_error() << "\n";
    art.summary_json = br.to_json();
  } else if (man.kind == "scaling_sweep") {
    ScalingResult res =
        scaling_sweep(man.ds, man.eps_bar, man.regime_enum(), man.gates,
                      man.method_enum(), man.overrides, man.T0_seconds);
    detail::write_file(out / "sweep.csv", res.to_csv(), art.files);
    std::ostringstream os;
    os.precision(17);
    os << "{\"schema_version\": \"chronosim.slope.v1\", \"slope\": " << res.slope
       << ", \"slope_defined\": " << (res.slope_defined ? "true" : "false")
       << ", \"partial\": " << (res.partial ? "true" : "false") << "}\n";
    detail::write_file(out / "slope.json", os.str(), art.files);
    for (const auto& p : res.points)
      if (!p.failed) {
        BoundReport br = check_frequency_bounds(p.report);
        art.bounds_clean = art.bounds_clean && br.all_pass();
      }
    art.summary_json = os.str();
  } else if (man.kind == "bus_lane") {
    ClockModel m2 = make_model(man.d, man.eps_bar, man.regime_enum(),
                               man.T0_seconds, man.overrides);
    MemoryBlock block{man.bus_column, man.bus_alphabet};
    BusReport rep =
        run_bus_lane(m2, man.lane, block, man.cycles, man.offset_radians);
    detail::write_file(out / "bus.csv", rep.to_csv(), art.files);
    std::ostringstream os;
    os.precision(17);
    os << "{\"schema_version\": \"chronosim.busmin.v1\", \"min_fidelity\": "
       << rep.min_fidelity() << ", \"f_bus\": " << rep.f_bus << "}\n";
    detail::write_file(out / "bus_summary.json", os.str(), art.files);
    art.summary_json = os.str();
  } else if (man.kind == "oscillator_cycles") {
    ClockModel m = make_model(man.d, man.eps_bar, man.regime_enum(),
                              man.T0_seconds, man.overrides);
    GateProgram prog = cyclic_program(m.Ng - 1, man.gates);
    Dissipator D =
        build_dissipator(m, man.gamma_bar0, prog.dtilde_sum() + 1, man.eps_b);
    GridSpec grid;
    grid.pts_per_T0 = man.pts_per_T0;
    grid.t_cut_T0 = man.t_cut_T0;
    CycleTrace tr = propagate_conditional(m, prog, D, grid);
    CycleStats st = renewal_statistics(tr);
    double eh0 = epsilon_H0(*tr.prop, st);
    IsentropicReport iso = solve_t_max(tr, 0.0);
    detail::write_file(out / "trace.csv", detail::trace_csv(tr), art.files);
    detail::write_file(out / "cycle_stats.json",
                       detail::stats_json(man, st, eh0, iso.t_max, m.f(), m.T0),
                       art.files);
    BoundReport sb = check_steady_bounds(st, eh0, m.f(), m.T0,
                                         m.regime == Regime::classical);
    detail::write_file(out / "steady_bounds.json", sb.to_json(), art.files);
    art.bounds_clean = sb.all_pass();
    if (man.cycles > 1) {
      MultiCycleReport mc = run_cycles(m, prog, D, man.cycles, man.mode_enum(),
                                       man.seed, grid);
      detail::write_file(out / "cycles.json", mc.to_json(), art.files);
    }
    art.summary_json = detail::stats_json(man, st, eh0, iso.t_max, m.f(), m.T0);
  } else if (man.kind == "t0_invariance") {
    InvarianceReport rep =
        t0_invariance_check(man.d, man.eps_bar, man.overrides, man.gates,
                            man.gamma_bar0, man.scale, man.T0_seconds);
    std::ostringstream os;
    os.precision(17);
    os << "{\"schema_version\": \"chronosim.invariance.v1\", \"max_abs_deviation\": "
       << rep.max_abs_deviation << ", \"pass\": "
       << (rep.pass() ? "true" : "false") << "}\n";
    detail::write_file(out / "invariance.json", os.str(), art.files);
    art.bounds_clean = rep.pass();
    art.summary_json = os.str();
  } else if (man.kind == "bounds_audit") {
    // Re-evaluate the frequency/energy inequalities over stored sweep rows.
    fs::path csv = fs::path(man.out_dir) / "sweep.csv";
    if (!fs::exists(csv))
      throw ConfigError("bounds_audit: " + csv.string() + " not found");
    std::ifstream is(csv);
    std::string line;
    BoundConstants bc;
    std::ostringstream os;
    os.precision(17);
    os << "{\"schema_version\": \"chronosim.audit.v1\", \"rows\": [\n";
    bool first = true;
    bool clean = true;
    while (std::getline(is, line)) {
      if (line.empty() || line[0] == '#' || line[0] == 'd') continue;
      auto f = split_list(line);
      if (f.size() < 8) continue;
      double fT0 = std::stod(f[2]), E0T0 = std::stod(f[3]);
      bool hl = fT0 <= bc.c_hl() * E0T0;
      bool sql = f[6] != "classical" || fT0 <= bc.c_sql() * std::sqrt(E0T0);
      clean = clean && hl && sql;
      if (!first) os << ",\n";
      first = false;
      os << "  {\"d\": " << f[0] << ", \"hl_pass\": " << (hl ? "true" : "false")
         << ", \"sql_pass\": " << (sql ? "true" : "false") << "}";
    }
    os << "\n], \"clean\": " << (clean ? "true" : "false") << "}\n";
    detail::write_file(out / "audit.json", os.str(), art.files);
    art.bounds_clean = clean;
    art.summary_json = os.str();
  }

  detail::write_file(out / "run.log", log.str(), art.files);
  return art;
}

}  // namespace chronosim

#endif
