// Copyright 2026 The chronosim authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "chronosim/runner.hpp"

using namespace chronosim;

namespace {

ExperimentManifest load_manifest(const std::string& path) {
  if (path.empty()) return {};
  std::ifstream is(path);
  if (!is) throw ConfigError("--config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_manifest(ss.str());
}

int dispatch(const ExperimentManifest& man, bool quiet) {
  ArtifactSet art = run_experiment(man);
  if (!quiet) {
    for (const auto& f : art.files) std::cout << "wrote " << f << "\n";
    std::cout << art.summary_json;
  }
  return art.bounds_clean ? 0 : 1;
}

void print_model(const ExperimentManifest& man) {
  ClockModel m = make_model(man.d, man.eps_bar, man.regime_enum(),
                            man.T0_seconds, man.overrides);
  std::cout.precision(12);
  std::cout << "d            = " << m.d << "\n"
            << "regime       = " << to_string(m.regime) << "\n"
            << "T0_seconds   = " << m.T0 << "\n"
            << "eps_bar      = " << m.eps_bar << "\n"
            << "sigma        = " << m.sigma << "\n"
            << "eta          = " << m.eta << "\n"
            << "n0           = " << m.n0 << "\n"
            << "n_tilde0     = " << m.n_tilde0 << "\n"
            << "alpha0       = " << m.alpha0 << "\n"
            << "eps5         = " << m.eps5 << "\n"
            << "eps6         = " << m.eps6 << "\n"
            << "eps7         = " << m.eps7 << "\n"
            << "eps9         = " << m.eps9 << "\n"
            << "eps_g        = " << m.eps_g << "\n"
            << "Ng           = " << m.Ng << "\n"
            << "N_pot        = " << m.N_pot
            << (m.N_overridden ? "  (override; formula " + std::to_string(m.N_formula) + ")" : "")
            << "\n"
            << "n_pot        = " << m.n_pot << (m.n_overridden ? "  (override)" : "") << "\n"
            << "c_n          = " << m.c_n << "\n"
            << "omega0       = " << m.omega0 << "\n"
            << "f_T0         = " << m.Ng << "\n"
            << "E0_T0_design = " << m.design_energy() * m.T0 << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"clock-driven autonomous computation simulator"};
  app.require_subcommand(1);

  std::string config, out_dir, method;
  std::uint64_t seed = 0;
  bool have_seed = false;
  int threads = 0;
  app.add_option("--config", config, "manifest file (key = value lines)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--method", method, "exact|splitstep");
  app.add_option("--seed", seed, "RNG seed")->each([&](const std::string&) { have_seed = true; });
  app.add_option("--threads", threads, "worker thread cap");

  auto* c_model = app.add_subcommand("model", "print derived model parameters");
  auto* c_gates = app.add_subcommand("gates", "run one gate program");
  auto* c_sweep = app.add_subcommand("sweep", "frequency/energy scaling sweep");
  auto* c_bus = app.add_subcommand("bus", "bus lane read/write run");
  auto* c_cycles = app.add_subcommand("cycles", "multi-cycle oscillator run");
  auto* c_bounds = app.add_subcommand("bounds", "audit stored reports");
  auto* c_inv = app.add_subcommand("invariance", "cycle-time invariance check");

  int d_flag = 0;
  double eps_flag = 0.0;
  std::string regime_flag;
  for (auto* sc : {c_model, c_gates, c_sweep, c_bus, c_cycles, c_inv}) {
    sc->add_option("-d,--dim", d_flag, "control dimension");
    sc->add_option("--eps-bar", eps_flag, "schedule parameter");
    sc->add_option("--regime", regime_flag, "quantum|classical");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (threads > 0) setenv("CHRONOSIM_THREADS", std::to_string(threads).c_str(), 1);
    ExperimentManifest man = load_manifest(config);
    if (d_flag > 0) man.d = d_flag;
    if (eps_flag > 0) man.eps_bar = eps_flag;
    if (!regime_flag.empty()) man.regime = regime_flag;
    if (!out_dir.empty()) man.out_dir = out_dir;
    if (!method.empty()) man.method = method;
    if (have_seed) man.seed = seed;

    if (c_model->parsed()) {
      man.kind = man.kind.empty() ? "gate_run" : man.kind;
      print_model(man);
      return 0;
    }
    if (c_gates->parsed()) man.kind = "gate_run";
    if (c_sweep->parsed()) {
      man.kind = "scaling_sweep";
      if (man.ds.empty()) man.ds = {64, 128, 256, 512};
    }
    if (c_bus->parsed()) man.kind = "bus_lane";
    if (c_cycles->parsed()) man.kind = "oscillator_cycles";
    if (c_bounds->parsed()) man.kind = "bounds_audit";
    if (c_inv->parsed()) man.kind = "t0_invariance";
    return dispatch(man, false);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const CapabilityError& e) {
    std::cerr << "capability overflow: " << e.what() << "\n";
    return 3;
  } catch (const NumericalFault& e) {
    std::cerr << "numerical invariant violated: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
