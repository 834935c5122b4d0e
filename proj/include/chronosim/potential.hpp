// Copyright 2026 The chronosim authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#ifndef CHRONOSIM_POTENTIAL_HPP
#define CHRONOSIM_POTENTIAL_HPP

#include <cmath>
#include <map>
#include <mutex>

#include "chronosim/model.hpp"

namespace chronosim {

// sinc^{2N}(y) with sinc(y) = sin(pi y)/(pi y), evaluated in log space so
// large N does not underflow prematurely.
inline double sinc_pow2N(double y, int N) {
  double ay = std::abs(y);
  if (ay < 1e-9) {
    // sinc(y)^2N = exp(-N pi^2 y^2 / 3) + O(y^4) near 0
    return std::exp(-N * kPi * kPi * y * y / 3.0);
  }
  double s = std::abs(std::sin(kPi * ay));
  if (s == 0.0) return 0.0;
  double lg = 2.0 * N * (std::log(s) - std::log(kPi * ay));
  return lg < -745.0 ? 0.0 : std::exp(lg);
}

// integral of sinc^{2N} over the real line; bump_norm_constant = its inverse.
inline double sinc_pow2N_integral(int N) {
  switch (N) {  // exact rationals for the common small exponents
    case 1: return 1.0;
    case 2: return 2.0 / 3.0;
    case 3: return 11.0 / 20.0;
    case 4: return 151.0 / 315.0;
    default: break;
  }
  // Simpson on [0, R]; the integrand concentrates near 0 for large N and the
  // algebraic tail beyond R is bounded by 2/( (2N-1) (pi R)^{2N} R^0 ).
  double R = std::max(4.0, 40.0 / std::sqrt(static_cast<double>(N)));
  const int M = 200000;
  double h = R / M;
  double acc = sinc_pow2N(0.0, N) + sinc_pow2N(R, N);
  for (int i = 1; i < M; ++i)
    acc += (i % 2 ? 4.0 : 2.0) * sinc_pow2N(i * h, N);
  return 2.0 * acc * h / 3.0;
}

inline double bump_norm_constant(int N) {  // A0
  static std::mutex mu;
  static std::map<int, double> cache;
  std::lock_guard<std::mutex> lk(mu);
  auto it = cache.find(N);
  if (it != cache.end()) return it->second;
  double a0 = 1.0 / sinc_pow2N_integral(N);
  cache.emplace(N, a0);
  return a0;
}

// 2pi-periodic normalized bump, unit mass over one period:
//   vbar0(x) = n A0 sum_p sinc^{2N}( n (x - x0 + 2pi p) )
// The image sum is truncated at |p| <= P with a relative tail below 1e-14.
inline double vbar0(double x, double x0, double n, int N, int P = 3) {
  double acc = 0.0;
  for (int p = -P; p <= P; ++p)
    acc += sinc_pow2N(n * (x - x0 + kTwoPi * p), N);
  return n * bump_norm_constant(N) * acc;
}

// Truncation tail bound for the image sum, relative to unit bump mass: the
// |p| > P images are each bounded by (pi n (2pi(P+1) - 2pi))^{-2N} at worst
// over x in [0, 2pi); summing the algebraic tail gives the estimate below.
inline double vbar0_image_tail_bound(double n, int N, int P = 3) {
  double worst = kPi * n * (kTwoPi * P - kPi);  // nearest excluded image
  if (worst <= 1.0) return 1.0;                 // no decay guarantee
  double term = std::pow(worst, -2.0 * N);
  return 4.0 * n * bump_norm_constant(N) * term;
}

// Smallest image count whose truncation tail is below 1e-14 of the bump
// mass. Sharp bumps need 3 images; wide low-N bumps need more.
inline int vbar0_image_count(double n, int N) {
  for (int P = 3; P <= 100000; P *= 2)
    if (vbar0_image_tail_bound(n, N, P) <= 1e-14) {
      int lo = P / 2 < 3 ? 3 : P / 2, hi = P;
      while (lo < hi) {
        int mid = (lo + hi) / 2;
        if (vbar0_image_tail_bound(n, N, mid) <= 1e-14)
          hi = mid;
        else
          lo = mid + 1;
      }
      return lo;
    }
  throw NumericalFault("vbar0_image_count: image-sum tail bound above 1e-14");
}

// Diagonal of one interaction window in the theta basis, units 1/seconds.
struct PotentialDiag {
  RVec values;     // length d, all >= 0
  int l_index = 0;
  double x0 = 0.0; // window center, radians
};

// values[k] = (2pi/d) (d/T0) vbar0(2pi k / d) anchored at the l-th window
// center plus an optional offset (0 for the gate control, pi for the bus).
inline PotentialDiag potential_profile(const ClockModel& m, int l,
                                       double offset = 0.0) {
  if (l < 1 || l > m.Ng)
    throw ConfigError("potential_profile: window index out of range");
  PotentialDiag out;
  out.l_index = l;
  out.x0 = kTwoPi * (l - 0.5) / m.Ng + offset;
  const int P = vbar0_image_count(m.n_pot, m.N_pot);
  out.values.resize(m.d);
  for (int k = 0; k < m.d; ++k)
    out.values[k] =
        kTwoPi / m.T0 * vbar0(kTwoPi * k / m.d, out.x0, m.n_pot, m.N_pot, P);
  return out;
}

// Discrete Riemann sum (2pi/d) sum_k vbar0(2pi k/d); equals the unit period
// mass exactly when the bump is alias-free on the lattice (2 pi n N < d).
inline double profile_riemann_sum(const ClockModel& m, const PotentialDiag& p) {
  return p.values.sum() * m.T0 / m.d;
}

}  // namespace chronosim

#endif
