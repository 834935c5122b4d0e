// Copyright 2026 The chronosim authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#ifndef CHRONOSIM_MANIFEST_HPP
#define CHRONOSIM_MANIFEST_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "chronosim/model.hpp"
#include "chronosim/oscillator.hpp"

namespace chronosim {

// Experiment description: flat dotted-key/value text, '#' comments, physical
// quantities carry unit suffixes in the key names. Serialization is
// canonical (sorted keys) so re-serialization round-trips losslessly and the
// manifest hash is stable.
struct ExperimentManifest {
  std::string kind;  // gate_run | scaling_sweep | bus_lane | oscillator_cycles
                     // | bounds_audit | t0_invariance
  int d = 256;
  std::vector<int> ds;
  double eps_bar = 0.05;
  std::string regime = "quantum";
  double T0_seconds = 1.0;
  Overrides overrides;
  std::vector<std::string> gates = {"X", "H"};
  double gamma_bar0 = 3.0;
  std::optional<double> eps_b;
  int pts_per_T0 = 512;
  double t_cut_T0 = 3.0;
  std::uint64_t seed = 1;
  std::string method = "exact";
  int cycles = 1;
  std::string mode = "montecarlo";  // or mode_time
  int lane = 1;
  double offset_radians = kPi;
  int bus_alphabet = 2;
  std::vector<int> bus_column = {0, 1, 2};
  double scale = 2.0;
  std::string out_dir = "out";

  Regime regime_enum() const {
    if (regime == "quantum") return Regime::quantum;
    if (regime == "classical") return Regime::classical;
    throw ConfigError("model.regime: expected 'quantum' or 'classical'");
  }
  Method method_enum() const {
    if (method == "exact") return Method::exact;
    if (method == "splitstep") return Method::splitstep;
    throw ConfigError("run.method: expected 'exact' or 'splitstep'");
  }
  CycleMode mode_enum() const {
    if (mode == "montecarlo") return CycleMode::montecarlo;
    if (mode == "mode_time") return CycleMode::mode_time;
    throw ConfigError("cycles.mode: expected 'montecarlo' or 'mode_time'");
  }

  void validate() const {
    static const char* kinds[] = {"gate_run",    "scaling_sweep", "bus_lane",
                                  "oscillator_cycles", "bounds_audit",
                                  "t0_invariance"};
    bool ok = false;
    for (const char* k : kinds) ok = ok || kind == k;
    if (!ok) throw ConfigError("kind: unknown experiment kind '" + kind + "'");
    if (d < 8) throw ConfigError("model.d: must be >= 8");
    if (!(eps_bar > 0 && eps_bar < 1.0 / 6.0))
      throw ConfigError("model.eps_bar: must lie in (0, 1/6)");
    if (!(T0_seconds > 0)) throw ConfigError("model.T0_seconds: must be positive");
    (void)regime_enum();
    (void)method_enum();
    (void)mode_enum();
    if (kind == "scaling_sweep" && ds.empty())
      throw ConfigError("model.ds: scaling_sweep needs a d list");
    if (kind == "bus_lane") {
      if (bus_column.empty() || bus_column[0] != 0)
        throw ConfigError("bus.column: first cell must hold the blank symbol 0");
      for (int s : bus_column)
        if (s < 0 || s > bus_alphabet)
          throw ConfigError("bus.column: symbol outside alphabet");
      if (offset_radians != 0.0 && std::abs(offset_radians - kPi) > 1e-12)
        throw ConfigError("bus.offset_radians: must be 0 or pi");
    }
    if (cycles < 1) throw ConfigError("cycles.L: must be >= 1");
    if (!(scale > 0)) throw ConfigError("invariance.scale: must be positive");
    if (pts_per_T0 < 8) throw ConfigError("grid.pts_per_T0: must be >= 8");
    if (!(t_cut_T0 > 0)) throw ConfigError("grid.t_cut_T0: must be positive");
  }

  std::string serialize() const {
    std::ostringstream os;
    os.precision(17);
    auto list_int = [](const std::vector<int>& v) {
      std::string s;
      for (size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + std::to_string(v[i]);
      return s;
    };
    std::map<std::string, std::string> kv;
    kv["kind"] = kind;
    kv["model.d"] = std::to_string(d);
    if (!ds.empty()) kv["model.ds"] = list_int(ds);
    { std::ostringstream t; t.precision(17); t << eps_bar; kv["model.eps_bar"] = t.str(); }
    kv["model.regime"] = regime;
    { std::ostringstream t; t.precision(17); t << T0_seconds; kv["model.T0_seconds"] = t.str(); }
    for (const auto& [k, v] : overrides) {
      std::ostringstream t; t.precision(17); t << v;
      kv["model.override." + k] = t.str();
    }
    {
      std::string s;
      for (size_t i = 0; i < gates.size(); ++i) s += (i ? "," : "") + gates[i];
      kv["program.gates"] = s;
    }
    { std::ostringstream t; t.precision(17); t << gamma_bar0; kv["dissipator.gamma_bar0"] = t.str(); }
    if (eps_b) { std::ostringstream t; t.precision(17); t << *eps_b; kv["dissipator.eps_b"] = t.str(); }
    kv["grid.pts_per_T0"] = std::to_string(pts_per_T0);
    { std::ostringstream t; t.precision(17); t << t_cut_T0; kv["grid.t_cut_T0"] = t.str(); }
    kv["run.seed"] = std::to_string(seed);
    kv["run.method"] = method;
    kv["cycles.L"] = std::to_string(cycles);
    kv["cycles.mode"] = mode;
    kv["bus.lane"] = std::to_string(lane);
    { std::ostringstream t; t.precision(17); t << offset_radians; kv["bus.offset_radians"] = t.str(); }
    kv["bus.alphabet"] = std::to_string(bus_alphabet);
    kv["bus.column"] = list_int(bus_column);
    { std::ostringstream t; t.precision(17); t << scale; kv["invariance.scale"] = t.str(); }
    // out.dir is environmental, not part of the experiment identity: it is
    // excluded here so equal experiments hash equally wherever they land.
    for (const auto& [k, v] : kv) os << k << " = " << v << "\n";
    return os.str();
  }

  std::uint64_t hash() const {  // FNV-1a over the canonical serialization
    std::string s = serialize();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    return h;
  }
};

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') { out.push_back(cur); cur.clear(); }
    else if (!isspace(static_cast<unsigned char>(c))) cur += c;
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline ExperimentManifest parse_manifest(const std::string& text) {
  ExperimentManifest m;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hashpos = line.find('#');
    if (hashpos != std::string::npos) line = line.substr(0, hashpos);
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      bool blank = true;
      for (char c : line) blank = blank && isspace(static_cast<unsigned char>(c));
      if (blank) continue;
      throw ConfigError("manifest line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    }
    auto trim = [](std::string s) {
      size_t a = s.find_first_not_of(" \t\r");
      size_t b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    auto bad = [&](const std::string& why) {
      return ConfigError(key + ": " + why);
    };
    try {
      if (key == "kind") m.kind = val;
      else if (key == "model.d") m.d = std::stoi(val);
      else if (key == "model.ds") {
        m.ds.clear();
        for (const auto& t : split_list(val)) m.ds.push_back(std::stoi(t));
      } else if (key == "model.eps_bar") m.eps_bar = std::stod(val);
      else if (key == "model.regime") m.regime = val;
      else if (key == "model.T0_seconds") m.T0_seconds = std::stod(val);
      else if (key.rfind("model.override.", 0) == 0)
        m.overrides[key.substr(15)] = std::stod(val);
      else if (key == "program.gates") m.gates = split_list(val);
      else if (key == "dissipator.gamma_bar0") m.gamma_bar0 = std::stod(val);
      else if (key == "dissipator.eps_b") m.eps_b = std::stod(val);
      else if (key == "grid.pts_per_T0") m.pts_per_T0 = std::stoi(val);
      else if (key == "grid.t_cut_T0") m.t_cut_T0 = std::stod(val);
      else if (key == "run.seed") m.seed = std::stoull(val);
      else if (key == "run.method") m.method = val;
      else if (key == "cycles.L") m.cycles = std::stoi(val);
      else if (key == "cycles.mode") m.mode = val;
      else if (key == "bus.lane") m.lane = std::stoi(val);
      else if (key == "bus.offset_radians") m.offset_radians = std::stod(val);
      else if (key == "bus.alphabet") m.bus_alphabet = std::stoi(val);
      else if (key == "bus.column") {
        m.bus_column.clear();
        for (const auto& t : split_list(val)) m.bus_column.push_back(std::stoi(t));
      } else if (key == "invariance.scale") m.scale = std::stod(val);
      else if (key == "out.dir") m.out_dir = val;
      else throw bad("unknown key");
    } catch (const std::invalid_argument&) {
      throw bad("malformed value '" + val + "'");
    }
  }
  return m;
}

}  // namespace chronosim

#endif
