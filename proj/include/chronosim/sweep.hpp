// Copyright 2026 The chronosim authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#ifndef CHRONOSIM_SWEEP_HPP
#define CHRONOSIM_SWEEP_HPP

#include <future>
#include <sstream>
#include <vector>

#include "chronosim/bounds.hpp"

namespace chronosim {

struct SweepPoint {
  int d = 0;
  int Ng = 0;
  double f_T0 = 0.0;
  double E0_T0 = 0.0;
  double max_error = 0.0;
  bool failed = false;
  std::string failure;
  GateRunReport report;
};

struct ScalingResult {
  std::vector<SweepPoint> points;
  Regime regime = Regime::classical;
  double eps_bar = 0.0;
  Method method = Method::exact;
  double slope = 0.0;
  bool slope_defined = false;
  bool partial = false;  // some points aborted

  std::string to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "# chronosim.scaling.v1\n";
    os << "d,Ng,f_T0,E0_T0,max_error,method,regime,eps_bar\n";
    for (const auto& p : points) {
      if (p.failed) continue;
      os << p.d << "," << p.Ng << "," << p.f_T0 << "," << p.E0_T0 << ","
         << p.max_error << "," << to_string(method) << ","
         << to_string(regime) << "," << eps_bar << "\n";
    }
    return os.str();
  }
};

inline double least_squares_slope(const std::vector<double>& x,
                                  const std::vector<double>& y) {
  const size_t n = x.size();
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
  mx /= n; my /= n;
  double num = 0, den = 0;
  for (size_t i = 0; i < n; ++i) {
    num += (x[i] - mx) * (y[i] - my);
    den += sq(x[i] - mx);
  }
  return num / den;
}

inline int sweep_threads() {
  if (const char* env = std::getenv("CHRONOSIM_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

// Per-d gate runs with the given schedule, slope of log(f T0) vs log(E0 T0).
// Points run as independent deterministic tasks; a failed point is flagged
// and the rest of the sweep is kept.
inline ScalingResult scaling_sweep(const std::vector<int>& ds, double eps_bar,
                                   Regime regime,
                                   const std::vector<std::string>& pattern,
                                   Method method, const Overrides& ov = {},
                                   double T0 = 1.0) {
  for (size_t i = 1; i < ds.size(); ++i)
    if (ds[i] <= ds[i - 1])
      throw ConfigError("scaling_sweep: ds must be sorted ascending");
  ScalingResult res;
  res.regime = regime;
  res.eps_bar = eps_bar;
  res.method = method;
  res.points.resize(ds.size());

  auto run_point = [&](size_t i) {
    SweepPoint p;
    p.d = ds[i];
    try {
      ClockModel m = make_model(ds[i], eps_bar, regime, T0, ov);
      GateProgram prog = cyclic_program(m.Ng, pattern);
      GateRunReport rep = run_program(m, prog, method);
      p.Ng = m.Ng;
      p.f_T0 = rep.f * T0;
      p.E0_T0 = rep.E0 * T0;
      p.max_error = rep.max_error();
      p.report = std::move(rep);
    } catch (const std::exception& e) {
      p.failed = true;
      p.failure = e.what();
    }
    return p;
  };

  const int nthreads = std::min<int>(sweep_threads(), static_cast<int>(ds.size()));
  if (nthreads <= 1) {
    for (size_t i = 0; i < ds.size(); ++i) res.points[i] = run_point(i);
  } else {
    std::vector<std::future<SweepPoint>> futs;
    for (size_t i = 0; i < ds.size(); ++i)
      futs.push_back(std::async(std::launch::async, run_point, i));
    for (size_t i = 0; i < ds.size(); ++i) res.points[i] = futs[i].get();
  }

  std::vector<double> lx, ly;
  for (const auto& p : res.points) {
    if (p.failed) { res.partial = true; continue; }
    lx.push_back(std::log(p.E0_T0));
    ly.push_back(std::log(p.f_T0));
  }
  if (lx.size() >= 2) {
    res.slope = least_squares_slope(lx, ly);
    res.slope_defined = true;
  }
  return res;
}

}  // namespace chronosim

#endif
