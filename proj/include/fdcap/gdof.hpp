// SPDX-FileCopyrightText: Copyright (c) 2026 fdcap contributors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <vector>

#include "fdcap/parallel.hpp"
#include "fdcap/schemes.hpp"

namespace fdcap {

struct GdofPoint {
  double kappa = 0.0;
  double d_sym = 0.0;
  Scheme scheme = Scheme::kProposed;
  double snr_db_used = 0.0;
};

struct GdofOptions {
  GridConfig grid;
  double c_exponent_step = 0.05;      // step of t in the c = SNR^-t family
  double genie_exponent_step = 0.1;   // outer alpha, beta = SNR^-t spacing
};

/// SNR = 10^(snr_db/10), INR = SNR^kappa, downlink matched to the uplink.
inline ScalarChannel gdof_channel(double kappa, double snr_db) {
  const double snr = db_to_linear(snr_db);
  return ScalarChannel::from_ratios(snr, std::pow(snr, kappa), snr);
}

/// Relay-free splits with private power SNR^-t, t in [0, kappa + 1]. These
/// reach the power levels where the finite grid is too coarse.
inline std::vector<SchemeParams> gdof_extra_params(double kappa, double snr_db, double step) {
  std::vector<SchemeParams> out;
  const double snr = db_to_linear(snr_db);
  const auto n = static_cast<std::size_t>(std::floor((kappa + 1.0) / step + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) {
    const double c = std::pow(snr, -static_cast<double>(i) * step);
    out.push_back({0.0, 1.0 - c, c, 0.0, 1.0});
  }
  return out;
}

inline GdofPoint symmetric_gdof(Scheme scheme, double kappa, double snr_db, const GdofOptions& opt = {}) {
  if (!(kappa >= 0.0)) throw DomainError("symmetric_gdof: kappa must be nonnegative");
  if (snr_db < 60.0) throw UsageError("symmetric_gdof: snr_db below the asymptotic proxy range (60 dB)");
  if (scheme == Scheme::kCapacityVs) throw UsageError("symmetric_gdof: capacity-vs has no D2D message");
  const auto ch = gdof_channel(kappa, snr_db);
  GridConfig grid = opt.grid;
  grid.genie_log_step = opt.genie_exponent_step * snr_db / 10.0;
  const auto region = scheme_region(scheme, ch, true, grid, gdof_extra_params(kappa, snr_db, opt.c_exponent_step));
  const double rate = symmetric_rate(region);
  return {kappa, rate / std::log2(db_to_linear(snr_db)), scheme, snr_db};
}

inline std::vector<GdofPoint> gdof_curve(Scheme scheme, const std::vector<double>& kappas, double snr_db,
                                         const GdofOptions& opt = {}) {
  return parallel_map(kappas.size(), [&](std::size_t i) { return symmetric_gdof(scheme, kappas[i], snr_db, opt); });
}

/// Slope-change points of a sampled curve on a uniform grid. Adjacent
/// detections are merged into their jump-weighted center.
inline std::vector<double> curve_breakpoints(const std::vector<double>& ks, const std::vector<double>& d,
                                             double threshold = 0.1) {
  if (ks.size() != d.size() || ks.size() < 3) throw UsageError("curve_breakpoints: need matching samples");
  const double h = ks[1] - ks[0];
  std::vector<double> slope(ks.size() - 1);
  for (std::size_t i = 0; i + 1 < ks.size(); ++i) slope[i] = (d[i + 1] - d[i]) / h;
  std::vector<double> out;
  double wsum = 0.0, ksum = 0.0;
  for (std::size_t i = 1; i + 1 < ks.size(); ++i) {
    const double jump = std::abs(slope[i] - slope[i - 1]);
    if (jump > threshold) {
      wsum += jump;
      ksum += jump * ks[i];
    } else if (wsum > 0.0) {
      out.push_back(ksum / wsum);
      wsum = ksum = 0.0;
    }
  }
  if (wsum > 0.0) out.push_back(ksum / wsum);
  return out;
}

/// Breakpoints of the proposed curve on kappa in [0, kappa_max].
inline std::vector<double> optimal_curve_breakpoints(double snr_db, std::size_t samples = 81, double kappa_max = 4.0,
                                                     const GdofOptions& opt = {}, double threshold = 0.1) {
  if (samples < 41) throw UsageError("optimal_curve_breakpoints: need at least 41 kappa samples");
  if (snr_db < 120.0) throw UsageError("optimal_curve_breakpoints: snr_db must be at least 120");
  const auto ks = linspace(0.0, kappa_max, samples);
  std::vector<double> d;
  for (const auto& p : gdof_curve(Scheme::kProposed, ks, snr_db, opt)) d.push_back(p.d_sym);
  return curve_breakpoints(ks, d, threshold);
}

}  // namespace fdcap
