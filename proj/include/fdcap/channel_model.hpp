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
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <json.hpp>

namespace fdcap {

using cplx = std::complex<double>;

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// log2(1 + x).
inline double capacity_fn(double x) {
  if (!(x >= 0.0)) throw DomainError("capacity_fn: negative argument");
  return std::log2(1.0 + x);
}

// Same as capacity_fn but tolerant of tiny negative round-off.
inline double cap(double x) { return std::log2(1.0 + (x > 0.0 ? x : 0.0)); }

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }
inline double dbm_to_watt(double dbm) { return db_to_linear(dbm - 30.0); }

/// Path loss in dB for a link of length d_km.
inline double pathloss_db(double d_km) {
  if (!(d_km > 0.0)) throw DomainError("pathloss_db: distance must be positive");
  return -128.1 - 37.6 * std::log10(d_km);
}

/// One Gaussian network instance: node 1 uplink user, node 2 base station,
/// node 3 downlink user.
struct ScalarChannel {
  cplx g21{1.0, 0.0};
  cplx g31{0.0, 0.0};
  cplx g32{1.0, 0.0};
  double P1 = 1.0;
  double P2 = 1.0;
  double sigma2 = 1.0;

  void validate() const {
    if (!(P1 > 0.0) || !(P2 > 0.0) || !(sigma2 > 0.0))
      throw DomainError("ScalarChannel: powers and noise must be positive");
    if (!std::isfinite(std::abs(g21)) || !std::isfinite(std::abs(g31)) ||
        !std::isfinite(std::abs(g32)))
      throw DomainError("ScalarChannel: non-finite gain");
  }

  double snr() const { return std::norm(g21) * P1 / sigma2; }
  double inr() const { return std::norm(g31) * P1 / sigma2; }
  /// Downlink signal-to-noise ratio |g32|^2 P2 / sigma^2.
  double snr_dl() const { return std::norm(g32) * P2 / sigma2; }
  double J() const { return 2.0 * std::abs(g31 * g32) * std::sqrt(P1 * P2); }
  /// J / sigma^2, the coherent-combining gain in noise units.
  double j_norm() const { return J() / sigma2; }

  /// Channel with unit powers and noise and real gains set from linear ratios.
  static ScalarChannel from_ratios(double snr, double inr, double snr_dl) {
    ScalarChannel ch;
    ch.g21 = std::sqrt(snr);
    ch.g31 = std::sqrt(inr);
    ch.g32 = std::sqrt(snr_dl);
    ch.validate();
    return ch;
  }
};

struct LinkBudget {
  double bs_user_distance_km = 0.3;
  double user_user_distance_km = 0.3;
  double tx_psd_dbm_hz = -47.0;
  double noise_psd_dbm_hz = -169.0;
};

/// Per-Hz conversion: powers are PSDs integrated over 1 Hz.
inline ScalarChannel build_from_link_budget(const LinkBudget& lb) {
  if (!(lb.bs_user_distance_km > 0.0) || !(lb.user_user_distance_km > 0.0))
    throw DomainError("build_from_link_budget: distances must be positive");
  ScalarChannel ch;
  const double g_bs = std::sqrt(db_to_linear(pathloss_db(lb.bs_user_distance_km)));
  const double g_uu = std::sqrt(db_to_linear(pathloss_db(lb.user_user_distance_km)));
  ch.g21 = g_bs;
  ch.g32 = g_bs;
  ch.g31 = g_uu;
  ch.P1 = dbm_to_watt(lb.tx_psd_dbm_hz);
  ch.P2 = ch.P1;
  ch.sigma2 = dbm_to_watt(lb.noise_psd_dbm_hz);
  return ch;
}

struct MimoChannel {
  Eigen::MatrixXcd G21;  // L2rx x L1
  Eigen::MatrixXcd G31;  // L3 x L1
  Eigen::MatrixXcd G32;  // L3 x L2tx
  double P1 = 1.0;
  double P2 = 1.0;
  double sigma2 = 1.0;

  Eigen::Index L1() const { return G21.cols(); }
  Eigen::Index L2rx() const { return G21.rows(); }
  Eigen::Index L2tx() const { return G32.cols(); }
  Eigen::Index L3() const { return G31.rows(); }

  void validate() const {
    if (G21.size() == 0 || G31.size() == 0 || G32.size() == 0)
      throw DomainError("MimoChannel: antenna counts must be >= 1");
    if (G31.cols() != G21.cols() || G32.rows() != G31.rows())
      throw DomainError("MimoChannel: inconsistent matrix dimensions");
    if (!(P1 > 0.0) || !(P2 > 0.0) || !(sigma2 > 0.0))
      throw DomainError("MimoChannel: powers and noise must be positive");
  }

  static MimoChannel from_scalar(const ScalarChannel& s) {
    MimoChannel m;
    m.G21 = Eigen::MatrixXcd::Constant(1, 1, s.g21);
    m.G31 = Eigen::MatrixXcd::Constant(1, 1, s.g31);
    m.G32 = Eigen::MatrixXcd::Constant(1, 1, s.g32);
    m.P1 = s.P1;
    m.P2 = s.P2;
    m.sigma2 = s.sigma2;
    return m;
  }
};

// ---- JSON ----

namespace detail {
inline cplx complex_from_json(const nlohmann::json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  throw UsageError("complex value must be a number or [re, im]");
}

inline Eigen::MatrixXcd matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw UsageError("matrix must be a nested array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(j[r].size()) != cols) throw UsageError("ragged matrix");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(j[r][c]);
  }
  return m;
}

inline nlohmann::json matrix_to_json(const Eigen::MatrixXcd& m) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    out.push_back(row);
  }
  return out;
}
}  // namespace detail

inline LinkBudget link_budget_from_json(const nlohmann::json& j) {
  LinkBudget lb;
  lb.bs_user_distance_km = j.value("bs_user_distance_km", lb.bs_user_distance_km);
  lb.user_user_distance_km = j.value("user_user_distance_km", lb.user_user_distance_km);
  lb.tx_psd_dbm_hz = j.value("tx_psd_dbm_hz", lb.tx_psd_dbm_hz);
  lb.noise_psd_dbm_hz = j.value("noise_psd_dbm_hz", lb.noise_psd_dbm_hz);
  return lb;
}

inline ScalarChannel scalar_channel_from_json(const nlohmann::json& j) {
  if (j.contains("link_budget")) return build_from_link_budget(link_budget_from_json(j["link_budget"]));
  ScalarChannel ch;
  if (j.contains("g21")) ch.g21 = detail::complex_from_json(j["g21"]);
  if (j.contains("g31")) ch.g31 = detail::complex_from_json(j["g31"]);
  if (j.contains("g32")) ch.g32 = detail::complex_from_json(j["g32"]);
  ch.P1 = j.value("p1", ch.P1);
  ch.P2 = j.value("p2", ch.P2);
  ch.sigma2 = j.value("sigma2", ch.sigma2);
  ch.validate();
  return ch;
}

inline nlohmann::json to_json(const ScalarChannel& ch) {
  return {{"g21", {ch.g21.real(), ch.g21.imag()}},
          {"g31", {ch.g31.real(), ch.g31.imag()}},
          {"g32", {ch.g32.real(), ch.g32.imag()}},
          {"p1", ch.P1},
          {"p2", ch.P2},
          {"sigma2", ch.sigma2}};
}

inline MimoChannel mimo_channel_from_json(const nlohmann::json& j) {
  MimoChannel m;
  m.G21 = detail::matrix_from_json(j.at("G21"));
  m.G31 = detail::matrix_from_json(j.at("G31"));
  m.G32 = detail::matrix_from_json(j.at("G32"));
  m.P1 = j.value("p1", m.P1);
  m.P2 = j.value("p2", m.P2);
  m.sigma2 = j.value("sigma2", m.sigma2);
  m.validate();
  return m;
}

}  // namespace fdcap
