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

// Antenna-array mathematics for analog receive beamforming.
//
// All functions are pure and templated on the real scalar type; the
// simulation itself instantiates them with double. Steering vectors follow
// the half-wavelength convention a_m(phi) = exp(-j 2 pi spacing m cos(phi)),
// and a square planar array is the Kronecker product of an elevation and an
// azimuth linear array of side sqrt(N).

#pragma once

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>

#include "beamtrack/errors.hpp"

namespace beamtrack {

enum class Geometry { kUla, kUpa };

struct ArrayConfig {
  Geometry geometry = Geometry::kUla;
  int n_elements = 64;
  double spacing = 0.5;            // element spacing in wavelengths
  std::optional<int> phase_bits;   // phase-shifter resolution; empty = ideal
  bool fixed_elevation = false;    // UPA only: elevation pinned at 90 degrees

  /// Elements along one side: N for a ULA, sqrt(N) for a square UPA.
  int side() const {
    if (geometry == Geometry::kUla) return n_elements;
    return static_cast<int>(std::lround(std::sqrt(static_cast<double>(n_elements))));
  }

  void validate() const {
    if (n_elements < 1) throw ConfigError("array: n_elements must be >= 1");
    if (!(spacing > 0.0)) throw ConfigError("array: spacing must be > 0");
    if (geometry == Geometry::kUpa && side() * side() != n_elements) {
      throw ConfigError("array: UPA requires a perfect-square n_elements, got " +
                        std::to_string(n_elements));
    }
    if (phase_bits && (*phase_bits < 1 || *phase_bits > 30)) {
      throw ConfigError("array: phase_bits must be in [1, 30]");
    }
    if (fixed_elevation && geometry != Geometry::kUpa) {
      throw ConfigError("array: fixed_elevation only applies to UPA");
    }
  }

  /// True when the array observes a single (azimuth) plane.
  bool azimuth_only() const { return geometry == Geometry::kUla || fixed_elevation; }
};

template <typename Scalar>
struct BasicAngle {
  Scalar azimuth{};
  std::optional<Scalar> elevation;
};

using Angle = BasicAngle<double>;

template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar>
constexpr Scalar kTwoPi = Scalar(2) * std::numbers::pi_v<Scalar>;

/// Reduces an angle into [0, 2 pi).
template <typename Scalar>
Scalar wrap_two_pi(Scalar a) {
  Scalar r = std::fmod(a, kTwoPi<Scalar>);
  if (r < 0) r += kTwoPi<Scalar>;
  if (r >= kTwoPi<Scalar>) r = 0;
  return r;
}

template <typename Scalar>
BasicAngle<Scalar> wrapped(const BasicAngle<Scalar>& a) {
  BasicAngle<Scalar> out{wrap_two_pi(a.azimuth), std::nullopt};
  if (a.elevation) out.elevation = wrap_two_pi(*a.elevation);
  return out;
}

namespace detail {

template <typename Scalar>
Scalar elevation_of(const ArrayConfig& cfg, const BasicAngle<Scalar>& angle) {
  if (cfg.fixed_elevation) return std::numbers::pi_v<Scalar> / 2;
  if (!angle.elevation) throw ConfigError("UPA angle requires an elevation");
  return *angle.elevation;
}

// (1/n) sum_m exp(-j 2 pi spacing m u), summed in index order. The phasor is
// advanced by complex multiplication, which keeps every term unit modulus to
// a few ulps for the array sizes used here.
template <typename Scalar>
std::complex<Scalar> ula_factor(int n, Scalar spacing, Scalar u) {
  const std::complex<Scalar> step = std::polar(Scalar(1), -kTwoPi<Scalar> * spacing * u);
  std::complex<Scalar> term(1, 0);
  std::complex<Scalar> sum(0, 0);
  for (int m = 0; m < n; ++m) {
    sum += term;
    term *= step;
  }
  return sum / static_cast<Scalar>(n);
}

// (1/n) sum_m m exp(-j 2 pi spacing m u)
template <typename Scalar>
std::complex<Scalar> ula_weighted_factor(int n, Scalar spacing, Scalar u) {
  const std::complex<Scalar> step = std::polar(Scalar(1), -kTwoPi<Scalar> * spacing * u);
  std::complex<Scalar> term(1, 0);
  std::complex<Scalar> sum(0, 0);
  for (int m = 0; m < n; ++m) {
    sum += static_cast<Scalar>(m) * term;
    term *= step;
  }
  return sum / static_cast<Scalar>(n);
}

template <typename Scalar>
ComplexVector<Scalar> ula_steering(int n, Scalar spacing, Scalar angle) {
  ComplexVector<Scalar> a(n);
  const Scalar c = std::cos(angle);
  for (int m = 0; m < n; ++m) {
    a[m] = std::polar(Scalar(1), -kTwoPi<Scalar> * spacing * static_cast<Scalar>(m) * c);
  }
  return a;
}

}  // namespace detail

/// Snaps a phase to the nearest of 2^bits uniformly spaced phases in [0, 2 pi).
/// Ties go to the smaller phase.
template <typename Scalar>
Scalar quantize_phase(Scalar phase, int bits) {
  const std::int64_t levels = std::int64_t{1} << bits;
  const Scalar step = kTwoPi<Scalar> / static_cast<Scalar>(levels);
  const Scalar q = wrap_two_pi(phase) / step;
  std::int64_t k = static_cast<std::int64_t>(std::ceil(q - Scalar(0.5)));
  k %= levels;
  return static_cast<Scalar>(k) * step;
}

/// Plane-wave phase profile across the array; every entry has unit modulus.
template <typename Scalar>
ComplexVector<Scalar> steering_vector(const ArrayConfig& cfg, const BasicAngle<Scalar>& angle) {
  cfg.validate();
  const Scalar spacing = static_cast<Scalar>(cfg.spacing);
  if (cfg.geometry == Geometry::kUla) {
    return detail::ula_steering(cfg.n_elements, spacing, angle.azimuth);
  }
  const int side = cfg.side();
  const auto az = detail::ula_steering(side, spacing, angle.azimuth);
  const auto el = detail::ula_steering(side, spacing, detail::elevation_of(cfg, angle));
  ComplexVector<Scalar> a(cfg.n_elements);
  for (int e = 0; e < side; ++e) {
    for (int m = 0; m < side; ++m) a[e * side + m] = el[e] * az[m];
  }
  return a;
}

/// Unit-norm analog beamformer pointing at `angle`, with optional phase
/// quantization applied before normalization.
template <typename Scalar>
ComplexVector<Scalar> beamforming_vector(const ArrayConfig& cfg, const BasicAngle<Scalar>& angle) {
  ComplexVector<Scalar> w = steering_vector(cfg, angle);
  if (cfg.phase_bits) {
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      w[i] = std::polar(Scalar(1), quantize_phase(std::arg(w[i]), *cfg.phase_bits));
    }
  }
  return w / std::sqrt(static_cast<Scalar>(cfg.n_elements));
}

/// Normalized noiseless beam response h = (1/N) sum_m exp(-j 2 pi spacing m
/// [cos(phi) - cos(phi_beam)]) of an ideal (unquantized) beamformer.
template <typename Scalar>
std::complex<Scalar> signal_part(const ArrayConfig& cfg, const BasicAngle<Scalar>& truth,
                                 const BasicAngle<Scalar>& beam) {
  const Scalar spacing = static_cast<Scalar>(cfg.spacing);
  const Scalar u_az = std::cos(truth.azimuth) - std::cos(beam.azimuth);
  if (cfg.geometry == Geometry::kUla) return detail::ula_factor(cfg.n_elements, spacing, u_az);
  const int side = cfg.side();
  const Scalar u_el =
      std::cos(detail::elevation_of(cfg, truth)) - std::cos(detail::elevation_of(cfg, beam));
  return detail::ula_factor(side, spacing, u_az) * detail::ula_factor(side, spacing, u_el);
}

template <typename Scalar>
struct SignalGradient {
  std::complex<Scalar> d_azimuth;
  std::complex<Scalar> d_elevation;  // zero when the array is azimuth-only
};

/// Partial derivatives of signal_part with respect to the true angles,
/// holding the beam fixed. Rate components of the state gradient are zero.
template <typename Scalar>
SignalGradient<Scalar> signal_part_gradient(const ArrayConfig& cfg, const BasicAngle<Scalar>& truth,
                                            const BasicAngle<Scalar>& beam) {
  const Scalar spacing = static_cast<Scalar>(cfg.spacing);
  const std::complex<Scalar> j(0, 1);
  const Scalar u_az = std::cos(truth.azimuth) - std::cos(beam.azimuth);
  const std::complex<Scalar> k_az = j * kTwoPi<Scalar> * spacing * std::sin(truth.azimuth);
  if (cfg.geometry == Geometry::kUla) {
    return {k_az * detail::ula_weighted_factor(cfg.n_elements, spacing, u_az), {}};
  }
  const int side = cfg.side();
  const Scalar th = detail::elevation_of(cfg, truth);
  const Scalar u_el = std::cos(th) - std::cos(detail::elevation_of(cfg, beam));
  const auto h_az = detail::ula_factor(side, spacing, u_az);
  const auto h_el = detail::ula_factor(side, spacing, u_el);
  SignalGradient<Scalar> g;
  g.d_azimuth = h_el * k_az * detail::ula_weighted_factor(side, spacing, u_az);
  if (!cfg.fixed_elevation) {
    const std::complex<Scalar> k_el = j * kTwoPi<Scalar> * spacing * std::sin(th);
    g.d_elevation = h_az * k_el * detail::ula_weighted_factor(side, spacing, u_el);
  }
  return g;
}

/// Gaussian main-lobe model exp(-(n^2/2) u^2) of |h| for an n-element line.
template <typename Scalar>
Scalar mainlobe_gain(int n, Scalar u) {
  const Scalar nn = static_cast<Scalar>(n);
  return std::exp(-(nn * nn / 2) * u * u);
}

template <typename Scalar>
Scalar mainlobe_approx(const ArrayConfig& cfg, const BasicAngle<Scalar>& truth,
                       const BasicAngle<Scalar>& beam) {
  if (cfg.geometry != Geometry::kUla) {
    throw UnsupportedGeometry("mainlobe_approx is defined for ULA only");
  }
  return mainlobe_gain(cfg.n_elements, std::cos(truth.azimuth) - std::cos(beam.azimuth));
}

/// Beam response w(beam)^H a(truth) / sqrt(N) of the beamformer actually
/// applied, i.e. including phase quantization. Equals signal_part when the
/// phase shifters are ideal.
template <typename Scalar>
std::complex<Scalar> array_response(const ArrayConfig& cfg, const BasicAngle<Scalar>& truth,
                                    const BasicAngle<Scalar>& beam) {
  if (!cfg.phase_bits) return signal_part(cfg, truth, beam);
  const ComplexVector<Scalar> w = beamforming_vector(cfg, beam);
  const ComplexVector<Scalar> a = steering_vector(cfg, truth);
  return w.dot(a) / std::sqrt(static_cast<Scalar>(cfg.n_elements));
}

}  // namespace beamtrack
