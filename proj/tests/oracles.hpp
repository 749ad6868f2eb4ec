// SPDX-License-Identifier: Apache-2.0
//
// beamtrack: continuous-discrete beam tracking for mobile mmWave receivers
// Copyright (C) 2026 The beamtrack authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Independent reference implementations and small random generators shared
// by the test programs. Nothing here calls into the library.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace bt_test {

inline constexpr double kPi = std::numbers::pi;

/// Closed-form Dirichlet kernel
/// sin(pi N d u) / (N sin(pi d u)) * exp(-j pi d (N-1) u).
inline std::complex<double> dirichlet(int n, double spacing, double u) {
  const double x = kPi * spacing * u;
  const double mag = std::sin(n * x) / (n * std::sin(x));
  return std::polar(1.0, -x * (n - 1)) * mag;
}

/// Term-by-term sum with a fresh exponential per element.
inline std::complex<double> direct_sum(int n, double spacing, double u) {
  std::complex<double> s = 0.0;
  for (int m = 0; m < n; ++m) s += std::polar(1.0, -2.0 * kPi * spacing * m * u);
  return s / static_cast<double>(n);
}

/// Planar array response by explicit double loop over element rows and columns.
inline std::complex<double> planar_double_loop(int side, double spacing, double phi, double theta,
                                               double phi_b, double theta_b) {
  std::complex<double> s = 0.0;
  for (int e = 0; e < side; ++e) {
    for (int m = 0; m < side; ++m) {
      const double a = -2.0 * kPi * spacing * (m * std::cos(phi) + e * std::cos(theta));
      const double w = -2.0 * kPi * spacing * (m * std::cos(phi_b) + e * std::cos(theta_b));
      s += std::polar(1.0, a - w);
    }
  }
  return s / static_cast<double>(side * side);
}

/// Nearest quantized phases by exhaustive search over every level. Returns
/// all levels within `tie` of the best distance.
inline std::vector<double> nearest_phases(double phase, int bits, double tie = 1e-9) {
  const int levels = 1 << bits;
  const double step = 2.0 * kPi / levels;
  std::vector<double> dist(levels);
  double best = 1e300;
  for (int k = 0; k < levels; ++k) {
    dist[k] = std::abs(std::remainder(phase - k * step, 2.0 * kPi));
    best = std::min(best, dist[k]);
  }
  std::vector<double> out;
  for (int k = 0; k < levels; ++k) {
    if (dist[k] <= best + tie) out.push_back(k * step);
  }
  return out;
}

/// Textbook Kalman update in information form:
/// P+ = (P^-1 + H^T R^-1 H)^-1, x+ = x + P+ H^T R^-1 (y - h).
/// Written with plain arrays so it shares no code with the filter.
struct InfoUpdate {
  double x[2];
  double P[2][2];
};

inline InfoUpdate information_update(const double x[2], const double P[2][2], const double H[2][2],
                                     double r, const double innov[2]) {
  const double detP = P[0][0] * P[1][1] - P[0][1] * P[1][0];
  double J[2][2] = {{P[1][1] / detP, -P[0][1] / detP}, {-P[1][0] / detP, P[0][0] / detP}};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) J[i][j] += H[k][i] * H[k][j] / r;
    }
  }
  const double detJ = J[0][0] * J[1][1] - J[0][1] * J[1][0];
  InfoUpdate out{};
  out.P[0][0] = J[1][1] / detJ;
  out.P[0][1] = -J[0][1] / detJ;
  out.P[1][0] = -J[1][0] / detJ;
  out.P[1][1] = J[0][0] / detJ;
  double g[2] = {0.0, 0.0};  // H^T R^-1 innov
  for (int i = 0; i < 2; ++i) {
    for (int k = 0; k < 2; ++k) g[i] += H[k][i] * innov[k] / r;
  }
  for (int i = 0; i < 2; ++i) out.x[i] = x[i] + out.P[i][0] * g[0] + out.P[i][1] * g[1];
  return out;
}

/// Two-sample-free Kolmogorov-Smirnov distance of sorted samples against `cdf`.
template <typename Cdf>
double ks_distance(std::vector<double> samples, Cdf cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, std::abs(f - i / n), std::abs((i + 1) / n - f)});
  }
  return d;
}

/// Seeded uniform/normal draws for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  double normal() { return std::normal_distribution<double>()(eng_); }
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace bt_test
