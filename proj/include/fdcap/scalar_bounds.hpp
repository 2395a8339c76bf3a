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
#include <optional>
#include <vector>

#include "fdcap/channel_model.hpp"
#include "fdcap/rate_region.hpp"

namespace fdcap {

/// Power-split fractions of the achievable schemes.
struct SchemeParams {
  double a = 0.0, b = 1.0, c = 0.0, d = 0.0, e = 1.0;

  void validate() const {
    constexpr double tol = 1e-12;
    if (a < 0 || b < 0 || c < 0 || d < 0 || e < 0) throw DomainError("SchemeParams: negative fraction");
    if (a + b + c > 1.0 + tol) throw DomainError("SchemeParams: a + b + c > 1");
    if (d + e > 1.0 + tol) throw DomainError("SchemeParams: d + e > 1");
  }
};

/// Converse knobs: input correlation rho and genie splits alpha, beta.
struct ConverseParams {
  double rho = 0.0, alpha = 1.0, beta = 1.0;

  void validate() const {
    if (!(rho >= -1.0 && rho <= 1.0)) throw DomainError("ConverseParams: rho outside [-1, 1]");
    if (!(alpha >= 0.0 && alpha <= 1.0) || !(beta >= 0.0 && beta <= 1.0))
      throw DomainError("ConverseParams: alpha, beta outside [0, 1]");
  }
};

namespace detail {
inline constexpr std::array<double, 3> w1{1, 0, 0}, w2{0, 1, 0}, w3{0, 0, 1};
inline constexpr std::array<double, 3> w12{1, 1, 0}, w13{1, 0, 1}, w23{0, 1, 1}, w123{1, 1, 1};

struct Quantities {
  double snr, inr, s2, jn;
};
inline Quantities quantities(const ScalarChannel& ch) { return {ch.snr(), ch.inr(), ch.snr_dl(), ch.j_norm()}; }
}  // namespace detail

/// Rate splitting with relaying, no D2D message.
inline Polytope inner_no_d2d(const ScalarChannel& ch, const SchemeParams& sp) {
  sp.validate();
  const auto q = detail::quantities(ch);
  const double den = 1.0 + sp.c * q.inr;
  Polytope p(2);
  p.add(detail::w1, cap((sp.b + sp.c) * q.snr));
  p.add(detail::w2, cap(sp.e * q.s2 / den));
  p.add(detail::w12, cap(((sp.a + sp.b) * q.inr + q.s2 + q.jn * std::sqrt(sp.a * sp.d)) / den) + cap(sp.c * q.snr));
  return p;
}

/// Capacity box when |g31|^2 P1 >= |g21|^2 P1 (1 + |g32|^2 P2 / sigma^2),
/// i.e. inr >= snr (1 + snr_dl).
inline std::optional<Polytope> capacity_very_strong(const ScalarChannel& ch) {
  const auto q = detail::quantities(ch);
  if (q.inr < q.snr * (1.0 + q.s2)) return std::nullopt;
  return Polytope::box({cap(q.snr), cap(q.s2)});
}

/// D2D-message scheme: the D2D private part is decoded at node 3.
inline Polytope inner_d2d_split(const ScalarChannel& ch, const SchemeParams& sp) {
  sp.validate();
  const auto q = detail::quantities(ch);
  const double r1 = cap(sp.b * q.snr / (1.0 + sp.c * q.snr));
  Polytope p(3);
  p.add(detail::w1, r1);
  p.add(detail::w2, cap(sp.e * q.s2));
  p.add(detail::w13, r1 + cap(sp.c * q.inr));
  p.add(detail::w123, cap(q.inr + q.s2 + q.jn * std::sqrt(sp.a * sp.d)));
  p.add(detail::w123, cap(sp.c * q.inr + sp.e * q.s2) + r1);
  return p;
}

/// D2D-message scheme: the uplink private part is decoded at node 2 only.
inline Polytope inner_uplink_split(const ScalarChannel& ch, const SchemeParams& sp) {
  sp.validate();
  const auto q = detail::quantities(ch);
  const double den = 1.0 + sp.c * q.inr;
  const double relay = cap(((sp.a + sp.b) * q.inr + q.s2 + q.jn * std::sqrt(sp.a * sp.d)) / den);
  Polytope p(3);
  p.add(detail::w2, cap(sp.e * q.s2 / den));
  p.add(detail::w13, cap((sp.b + sp.c) * q.snr));
  p.add(detail::w23, relay);
  p.add(detail::w123, relay + cap(sp.c * q.snr));
  return p;
}

inline Polytope outer_no_d2d(const ScalarChannel& ch, const ConverseParams& cp) {
  cp.validate();
  const auto q = detail::quantities(ch);
  const double f = 1.0 - cp.rho * cp.rho;
  Polytope p(2);
  p.add(detail::w1, cap(f * q.snr));
  p.add(detail::w2, cap(f * q.s2));
  p.add(detail::w12, cap(q.inr + q.s2 + q.jn * cp.rho) + cap(f * q.snr / (1.0 + f * q.inr)));
  return p;
}

inline Polytope outer_d2d(const ScalarChannel& ch, const ConverseParams& cp) {
  cp.validate();
  const auto q = detail::quantities(ch);
  const double f = 1.0 - cp.rho * cp.rho;
  const double both = f * (q.snr + q.inr);
  const double coh = cap(q.inr + q.s2 + q.jn * cp.rho);
  Polytope p(3);
  p.add(detail::w1, cap(f * q.snr / (1.0 + cp.alpha * f * q.snr)));
  p.add(detail::w1, cap(cp.beta * both));
  p.add(detail::w2, cap(f * q.s2));
  p.add(detail::w3, cap(cp.alpha * both));
  p.add(detail::w3, cap(both / (1.0 + cp.beta * both)));
  p.add(detail::w13, cap(both));
  p.add(detail::w23, coh);
  p.add(detail::w123, coh + cap(f * q.snr / (1.0 + f * q.inr)));
  return p;
}

/// Parameter-free relaxation of outer_d2d.
inline Polytope outer_relaxed(const ScalarChannel& ch) {
  const auto q = detail::quantities(ch);
  const double coh = cap(q.inr + q.s2 + q.jn);
  Polytope p(3);
  p.add(detail::w1, cap(q.snr));
  p.add(detail::w2, cap(q.s2));
  p.add(detail::w13, cap(q.snr + q.inr));
  p.add(detail::w23, coh);
  p.add(detail::w123, coh + cap(q.snr / (1.0 + q.inr)));
  return p;
}

inline Polytope cutset_no_d2d(const ScalarChannel& ch, const ConverseParams& cp) {
  cp.validate();
  const auto q = detail::quantities(ch);
  const double f = 1.0 - cp.rho * cp.rho;
  return Polytope::box({cap(f * q.snr), cap(f * q.s2)});
}

/// Cut-set bound with the D2D message: the four cuts separating each
/// message's source from its destination.
inline Polytope cutset_d2d(const ScalarChannel& ch, const ConverseParams& cp) {
  cp.validate();
  const auto q = detail::quantities(ch);
  const double f = 1.0 - cp.rho * cp.rho;
  Polytope p(3);
  p.add(detail::w1, cap(f * q.snr));
  p.add(detail::w2, cap(f * q.s2));
  p.add(detail::w13, cap(f * (q.snr + q.inr)));
  p.add(detail::w23, cap(q.inr + q.s2 + q.jn * cp.rho));
  return p;
}

/// Orthogonal time sharing of the single-link phases. The hull over time
/// fractions is the simplex-like set sum_i R_i / C_i <= 1.
inline Polytope baseline_half_duplex(const ScalarChannel& ch, bool with_d2d) {
  const auto q = detail::quantities(ch);
  std::vector<double> caps{cap(q.snr), cap(q.s2)};
  if (with_d2d) caps.push_back(cap(q.inr));
  const int dim = with_d2d ? 3 : 2;
  Polytope p(dim);
  std::array<double, 3> w{};
  for (int i = 0; i < dim; ++i) {
    std::array<double, 3> e{};
    e[static_cast<std::size_t>(i)] = 1.0;
    if (caps[static_cast<std::size_t>(i)] > 0.0) {
      w[static_cast<std::size_t>(i)] = 1.0 / caps[static_cast<std::size_t>(i)];
      p.add(e, caps[static_cast<std::size_t>(i)]);
    } else {
      p.add(e, 0.0);
    }
  }
  if (w[0] + w[1] + w[2] > 0.0) p.add(w, 1.0);
  return p;
}

inline Polytope baseline_tin(const ScalarChannel& ch) {
  const auto q = detail::quantities(ch);
  return Polytope::box({cap(q.snr), cap(q.s2 / (1.0 + q.inr))});
}

inline Polytope baseline_split_no_relay(const ScalarChannel& ch, const SchemeParams& sp) {
  if (sp.a != 0.0 || sp.d != 0.0) throw UsageError("baseline_split_no_relay: requires a = d = 0");
  return inner_no_d2d(ch, sp);
}

inline Polytope baseline_decode_forward(const ScalarChannel& ch, const SchemeParams& sp) {
  if (sp.c != 0.0) throw UsageError("baseline_decode_forward: requires c = 0");
  return inner_uplink_split(ch, sp);
}

/// Time division between a 2D uplink/downlink polytope and a direct D2D link
/// of rate r3: {(x, R3) : x in (1 - R3/r3) P, R3 <= r3}.
inline Polytope time_share_with_d2d(const Polytope& p2, double r3) {
  if (p2.dim() != 2) throw UsageError("time_share_with_d2d: expects a 2D polytope");
  Polytope p(3);
  if (r3 <= 0.0) {
    for (const auto& h : p2.halfspaces()) p.add(h.weights, h.bound);
    p.add(detail::w3, 0.0);
    return p;
  }
  for (const auto& h : p2.halfspaces()) {
    auto w = h.weights;
    w[2] = std::max(0.0, h.bound) / r3;
    if (h.bound < 0.0) {
      p.add(h.weights, h.bound);
    } else {
      p.add(w, h.bound);
    }
  }
  p.add(detail::w3, r3);
  return p;
}

// ---- parameter grids ----

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n == 0) throw UsageError("linspace: empty grid");
  if (n == 1) return {lo};
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  v.back() = hi;
  return v;
}

/// Scheme grid with the dominated slack removed: a = 1 - b - c and e = 1 - d,
/// (b, c, d) on an n-point grid of [0, 1].
inline std::vector<SchemeParams> scheme_grid(std::size_t n) {
  const auto g = linspace(0.0, 1.0, n);
  std::vector<SchemeParams> out;
  for (double b : g)
    for (double c : g) {
      if (b + c > 1.0 + 1e-12) continue;
      const double a = std::max(0.0, 1.0 - b - c);
      for (double d : g) {
        if (a == 0.0 && d > 0.0) break;  // d only trades e for an absent coherent term
        out.push_back({a, b, c, d, 1.0 - d});
      }
    }
  return out;
}

/// a = d = 0, e = 1, b = 1 - c: the relay-free split family.
inline std::vector<SchemeParams> split_no_relay_grid(std::size_t n) {
  std::vector<SchemeParams> out;
  for (double c : linspace(0.0, 1.0, n)) out.push_back({0.0, 1.0 - c, c, 0.0, 1.0});
  return out;
}

/// c = 0, a = 1 - b, e = 1 - d.
inline std::vector<SchemeParams> decode_forward_grid(std::size_t n) {
  std::vector<SchemeParams> out;
  const auto g = linspace(0.0, 1.0, n);
  for (double b : g)
    for (double d : g) {
      const double a = 1.0 - b;
      if (a == 0.0 && d > 0.0) break;
      out.push_back({a, b, 0.0, d, 1.0 - d});
    }
  return out;
}

template <class F>
RateRegion union_over(int dim, const std::vector<SchemeParams>& grid, F&& bound) {
  RateRegion r(dim);
  for (const auto& sp : grid) r.add(bound(sp));
  return r;
}

inline RateRegion outer_no_d2d_union(const ScalarChannel& ch, const std::vector<double>& rhos) {
  RateRegion r(2);
  for (double rho : rhos) r.add(outer_no_d2d(ch, {rho, 1.0, 1.0}));
  return r;
}

inline RateRegion outer_d2d_union(const ScalarChannel& ch, const std::vector<double>& rhos,
                                  const std::vector<double>& alphas, const std::vector<double>& betas) {
  RateRegion r(3);
  for (double rho : rhos)
    for (double al : alphas)
      for (double be : betas) r.add(outer_d2d(ch, {rho, al, be}));
  return r;
}

}  // namespace fdcap
