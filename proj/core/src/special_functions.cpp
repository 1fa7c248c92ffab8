// Copyright 2026 The rtv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy of
// the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations under
// the License.

#include "rtv/special_functions.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "rtv/error.hpp"

namespace rtv::math {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoefficients = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7,
};

// Continued fraction for I_x(a, b), Numerical Recipes "betacf" form.
double beta_continued_fraction(double a, double b, double x) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-16;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;

  for (int m = 1; m <= kIncompleteBetaMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;

    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) <= kEps) return h;
  }
  throw Error(ErrorKind::NonConvergence,
              "incomplete beta continued fraction did not converge for a=" + std::to_string(a) +
                  " b=" + std::to_string(b) + " x=" + std::to_string(x));
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw Error(ErrorKind::InvalidArgument, "log_gamma needs a positive finite argument");
  }
  if (x < 0.5) {
    // Reflection keeps the series in its accurate range.
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1.0 - x);
  }
  const double xm1 = x - 1.0;
  double series = kLanczosCoefficients[0];
  for (std::size_t i = 1; i < kLanczosCoefficients.size(); ++i) {
    series += kLanczosCoefficients[i] / (xm1 + static_cast<double>(i));
  }
  const double t = xm1 + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (xm1 + 0.5) * std::log(t) - t +
         std::log(series);
}

double log_beta(double a, double b) {
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw Error(ErrorKind::InvalidArgument, "incomplete beta needs a, b > 0");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "incomplete beta needs 0 <= x <= 1");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;

  const double log_front =
      a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
  const double front = std::exp(log_front);
  double result = 0.0;
  if (x < (a + 1.0) / (a + b + 2.0)) {
    result = front * beta_continued_fraction(a, b, x) / a;
  } else {
    result = 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
  }
  if (result < 0.0) return 0.0;
  if (result > 1.0) return 1.0;
  return result;
}

}  // namespace rtv::math
