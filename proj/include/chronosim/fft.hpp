// Copyright 2026 The chronosim authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#ifndef CHRONOSIM_FFT_HPP
#define CHRONOSIM_FFT_HPP

#include <map>
#include <mutex>
#include <fftw3.h>

#include "chronosim/common.hpp"

namespace chronosim {

// Unitary DFT pair between the theta basis and the energy basis.
//   energy(n) = (1/sqrt(d)) sum_k e^{-i 2pi n k / d} theta(k)
// FFTW plan creation is serialized; execution on caller-owned buffers is
// thread safe (new-array execute).
class Dft {
 public:
  static Dft& instance() {
    static Dft g;
    return g;
  }

  void theta_to_energy(const Vec& in, Vec& out) { run(in, out, FFTW_FORWARD); }
  void energy_to_theta(const Vec& in, Vec& out) { run(in, out, FFTW_BACKWARD); }

  Vec theta_to_energy(const Vec& in) {
    Vec out(in.size());
    theta_to_energy(in, out);
    return out;
  }
  Vec energy_to_theta(const Vec& in) {
    Vec out(in.size());
    energy_to_theta(in, out);
    return out;
  }

 private:
  struct Plans {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
  };

  Dft() = default;
  ~Dft() {
    for (auto& [n, p] : plans_) {
      if (p.fwd) fftw_destroy_plan(p.fwd);
      if (p.bwd) fftw_destroy_plan(p.bwd);
    }
  }
  Dft(const Dft&) = delete;

  Plans& plans_for(int n) {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    Vec scratch_in(n), scratch_out(n);
    Plans p;
    p.fwd = fftw_plan_dft_1d(
        n, reinterpret_cast<fftw_complex*>(scratch_in.data()),
        reinterpret_cast<fftw_complex*>(scratch_out.data()), FFTW_FORWARD,
        FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.bwd = fftw_plan_dft_1d(
        n, reinterpret_cast<fftw_complex*>(scratch_in.data()),
        reinterpret_cast<fftw_complex*>(scratch_out.data()), FFTW_BACKWARD,
        FFTW_ESTIMATE | FFTW_UNALIGNED);
    return plans_.emplace(n, p).first->second;
  }

  void run(const Vec& in, Vec& out, int dir) {
    const int n = static_cast<int>(in.size());
    out.resize(n);
    Plans& p = plans_for(n);
    Vec tmp = in;  // fftw may not accept const input
    fftw_execute_dft(dir == FFTW_FORWARD ? p.fwd : p.bwd,
                     reinterpret_cast<fftw_complex*>(tmp.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    out *= 1.0 / std::sqrt(static_cast<double>(n));
  }

  std::mutex mu_;
  std::map<int, Plans> plans_;
};

}  // namespace chronosim

#endif
