// Copyright 2026 The chronosim authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#ifndef CHRONOSIM_COMMON_HPP
#define CHRONOSIM_COMMON_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <Eigen/Dense>

namespace chronosim {

using cxd = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Estimator-constant bundle for the frequency/energy and frequency/power
// inequalities. lambda and kappa are fixed numerical constants; c0 is the
// SQL-side constant and stays configurable (uncalibrated; flagged in reports).
struct BoundConstants {
  double lambda = 4.64;
  double kappa = 0.091;
  double c0 = 0.09;
  bool c0_calibrated = false;
  double delta0() const { return 1.0 / (2.0 * (lambda + 1.0)); }
  double c_hl() const { return delta0() / kappa; }
  double c_sql() const { return delta0() / c0; }
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& m) : std::runtime_error(m) {}
};
struct CapabilityError : std::runtime_error {
  explicit CapabilityError(const std::string& m) : std::runtime_error(m) {}
};
struct NumericalFault : std::runtime_error {
  explicit NumericalFault(const std::string& m) : std::runtime_error(m) {}
};

inline double sq(double x) { return x * x; }

}  // namespace chronosim

#endif
