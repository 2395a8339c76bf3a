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

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fdcap/parallel.hpp"
#include "fdcap/rate_region.hpp"
#include "fdcap/scalar_bounds.hpp"

namespace fdcap {

enum class SchemeSelector { kD2dSplit, kUplinkSplit, kNotApplicable };

inline const char* to_string(SchemeSelector s) {
  switch (s) {
    case SchemeSelector::kD2dSplit: return "d2d-split";
    case SchemeSelector::kUplinkSplit: return "uplink-split";
    default: return "n/a";
  }
}

/// Which inner bounds enter the D2D union.
enum class D2dInner { kUnion, kD2dSplitOnly, kUplinkSplitOnly };

struct GridConfig {
  std::size_t scheme_points = 21;
  std::size_t rho_points = 41;
  std::size_t alpha_points = 21;
  std::size_t beta_points = 21;
  bool hull = false;
  std::size_t hull_directions = 0;  // 0: default per dimension
  std::size_t ray_directions = 0;   // 0: default per dimension
  // Negative rho gives a subset of the |rho| polytope (only the coherent term
  // changes, and it shrinks), so those outer polytopes can be skipped.
  bool skip_negative_rho = true;
  // The genie splits trade rate through log(1/alpha); a linear grid stops at
  // 1/(n-1). Extra values 10^-x, x = step, 2 step, ... up to
  // log10(1 + snr + inr) + step, keep the family dense at high SNR.
  // 0 disables.
  double genie_log_step = 0.25;

  void validate() const {
    if (scheme_points < 2 || rho_points < 1 || alpha_points < 1 || beta_points < 1)
      throw UsageError("GridConfig: empty grid");
  }
};

inline SchemeSelector scheme_by_condition(const ScalarChannel& ch) {
  return std::abs(ch.g31) >= std::abs(ch.g21) ? SchemeSelector::kD2dSplit : SchemeSelector::kUplinkSplit;
}

/// Closed-form settings a = d = 0, e = 1, b = 1 - c.
inline SchemeParams appendix_c_params(const ScalarChannel& ch, SchemeSelector which) {
  const double g = which == SchemeSelector::kD2dSplit ? ch.snr() : ch.inr();
  const double c = g > 0.0 ? std::min(1.0, 1.0 / g) : 1.0;
  return {0.0, 1.0 - c, c, 0.0, 1.0};
}

/// Coupled parameters a = d = rho^2, b = e = 1 - rho^2, c = 0.
inline SchemeParams coupled_params(double rho) {
  const double r2 = rho * rho;
  return {r2, 1.0 - r2, 0.0, r2, 1.0 - r2};
}

inline std::vector<double> rho_grid(const GridConfig& cfg) {
  std::vector<double> out;
  for (double r : linspace(-1.0, 1.0, cfg.rho_points))
    if (!(cfg.skip_negative_rho && r < 0.0)) out.push_back(r);
  if (out.empty()) out.push_back(0.0);
  return out;
}

/// Scheme grid augmented with the closed-form and coupled points.
inline std::vector<SchemeParams> inner_grid(const ScalarChannel& ch, const GridConfig& cfg) {
  auto grid = scheme_grid(cfg.scheme_points);
  grid.push_back(appendix_c_params(ch, SchemeSelector::kD2dSplit));
  grid.push_back(appendix_c_params(ch, SchemeSelector::kUplinkSplit));
  for (double r : linspace(-1.0, 1.0, cfg.rho_points))
    if (r >= 0.0) grid.push_back(coupled_params(r));
  return grid;
}

inline RateRegion maybe_hull(RateRegion r, const GridConfig& cfg) {
  if (!cfg.hull) return r;
  return support_hull(r, cfg.hull_directions ? cfg.hull_directions : default_directions(r.dim()));
}

inline RateRegion inner_union(const ScalarChannel& ch, bool with_d2d, const GridConfig& cfg,
                              D2dInner which = D2dInner::kUnion) {
  cfg.validate();
  const auto grid = inner_grid(ch, cfg);
  if (!with_d2d) return maybe_hull(union_over(2, grid, [&](const SchemeParams& sp) { return inner_no_d2d(ch, sp); }), cfg);
  RateRegion r(3);
  if (which != D2dInner::kUplinkSplitOnly)
    for (const auto& sp : grid) r.add(inner_d2d_split(ch, sp));
  if (which != D2dInner::kD2dSplitOnly)
    for (const auto& sp : grid) r.add(inner_uplink_split(ch, sp));
  return maybe_hull(std::move(r), cfg);
}

inline std::vector<double> genie_grid(const ScalarChannel& ch, std::size_t points, double log_step) {
  auto g = linspace(0.0, 1.0, points);
  if (log_step > 0.0) {
    const double top = std::log10(1.0 + ch.snr() + ch.inr()) + log_step;
    for (double x = log_step; x <= top + 1e-12; x += log_step) g.push_back(std::pow(10.0, -x));
  }
  std::sort(g.begin(), g.end());
  return g;
}

inline RateRegion outer_union(const ScalarChannel& ch, bool with_d2d, const GridConfig& cfg) {
  cfg.validate();
  const auto rhos = rho_grid(cfg);
  if (!with_d2d) return maybe_hull(outer_no_d2d_union(ch, rhos), cfg);
  return maybe_hull(outer_d2d_union(ch, rhos, genie_grid(ch, cfg.alpha_points, cfg.genie_log_step),
                                    genie_grid(ch, cfg.beta_points, cfg.genie_log_step)),
                    cfg);
}

inline GapResult optimized_gap(const ScalarChannel& ch, bool with_d2d, const GridConfig& cfg = {},
                               D2dInner which = D2dInner::kUnion) {
  const auto outer = outer_union(ch, with_d2d, cfg);
  const auto inner = inner_union(ch, with_d2d, cfg, which);
  return constant_gap(outer, inner, {cfg.ray_directions});
}

/// Gap of the closed-form scheme alone against the optimized outer bound.
inline GapResult appendix_c_gap(const ScalarChannel& ch, bool with_d2d, const GridConfig& cfg = {}) {
  const auto outer = outer_union(ch, with_d2d, cfg);
  const auto sel = scheme_by_condition(ch);
  RateRegion inner(with_d2d ? 3 : 2);
  if (!with_d2d)
    inner.add(inner_no_d2d(ch, appendix_c_params(ch, SchemeSelector::kUplinkSplit)));
  else if (sel == SchemeSelector::kD2dSplit)
    inner.add(inner_d2d_split(ch, appendix_c_params(ch, sel)));
  else
    inner.add(inner_uplink_split(ch, appendix_c_params(ch, sel)));
  return constant_gap(outer, inner, {cfg.ray_directions});
}

// ---- strong-interference constant ----

inline double thm8_ratio(double lambda, double rho) { return (lambda + rho) / (lambda + rho * rho); }

inline double strong_interference_constant() { return 0.5 + 0.5 * std::log2((std::sqrt(2.0) + 1.0) / 2.0); }

/// Half a bit plus half the log of the coherent-combining ratio at the
/// channel's lambda. J = 0 returns the uncoupled value 1/2.
inline double thm8_gap_bound(const ScalarChannel& ch, double rho) {
  if (!(rho >= -1.0 && rho <= 1.0)) throw DomainError("thm8_gap_bound: rho outside [-1, 1]");
  const double jn = ch.j_norm();
  if (jn <= 0.0) return 0.5;
  const double lambda = (ch.inr() + ch.snr_dl() + 1.0) / jn;
  return 0.5 * (1.0 + std::log2(thm8_ratio(lambda, rho)));
}

struct GridOptimum {
  double lambda = 0.0, rho = 0.0, value = 0.0;
};

/// Brute-force maximum of the ratio over lambda in [lo, hi], rho in [-1, 1].
inline GridOptimum thm8_grid_argmax(std::size_t n_lambda, std::size_t n_rho, double lo = 1.0, double hi = 10.0) {
  GridOptimum best{0.0, 0.0, -1.0};
  for (double l : linspace(lo, hi, n_lambda))
    for (double r : linspace(-1.0, 1.0, n_rho)) {
      const double v = thm8_ratio(l, r);
      if (v > best.value) best = {l, r, v};
    }
  return best;
}

// ---- per-inequality slack of the closed-form scheme ----

struct SlackEntry {
  std::string name;
  std::array<double, 3> weights{};
  int rates = 1;
  double outer_bound = 0.0;
  double inner_support = 0.0;
  double per_rate_slack = 0.0;
};

struct AppendixCReport {
  SchemeSelector scheme = SchemeSelector::kD2dSplit;
  SchemeParams params;
  std::vector<SlackEntry> entries;
  double max_slack = 0.0;
};

inline AppendixCReport appendix_c_check(const ScalarChannel& ch, SchemeSelector which) {
  AppendixCReport rep;
  rep.scheme = which;
  rep.params = appendix_c_params(ch, which);
  const Polytope inner = which == SchemeSelector::kD2dSplit ? inner_d2d_split(ch, rep.params)
                                                            : inner_uplink_split(ch, rep.params);
  const Polytope outer = outer_relaxed(ch);
  const auto verts = vertices(inner);
  for (const auto& h : outer.halfspaces()) {
    SlackEntry e;
    e.weights = h.weights;
    e.rates = static_cast<int>(h.weights[0] + h.weights[1] + h.weights[2] + 0.5);
    e.name.clear();
    for (int i = 0; i < 3; ++i)
      if (h.weights[static_cast<std::size_t>(i)] > 0) e.name += (e.name.empty() ? "R" : "+R") + std::to_string(i + 1);
    e.outer_bound = h.bound;
    e.inner_support = 0.0;
    for (const auto& v : verts) e.inner_support = std::max(e.inner_support, dot(h.weights, v));
    e.per_rate_slack = (e.outer_bound - e.inner_support) / e.rates;
    rep.max_slack = std::max(rep.max_slack, e.per_rate_slack);
    rep.entries.push_back(e);
  }
  return rep;
}

inline AppendixCReport appendix_c_check(const ScalarChannel& ch) { return appendix_c_check(ch, scheme_by_condition(ch)); }

// ---- gap maps ----

struct GapMapCell {
  double snr_db = 0.0, inr_db = 0.0;
  double gap_bits = 0.0;
  SchemeSelector scheme_selector = SchemeSelector::kNotApplicable;
};

/// Channel with unit powers, SNR/INR from dB and snr_dl = ratio * snr.
inline ScalarChannel map_channel(double snr_db, double inr_db, double ratio) {
  const double snr = db_to_linear(snr_db);
  return ScalarChannel::from_ratios(snr, db_to_linear(inr_db), ratio * snr);
}

inline GapMapCell gap_cell(double snr_db, double inr_db, double ratio, bool with_d2d, const GridConfig& cfg,
                           D2dInner which = D2dInner::kUnion) {
  const auto ch = map_channel(snr_db, inr_db, ratio);
  GapMapCell cell{snr_db, inr_db, 0.0, SchemeSelector::kNotApplicable};
  const auto outer = outer_union(ch, with_d2d, cfg);
  const auto inner = inner_union(ch, with_d2d, cfg, which);
  const auto g = constant_gap(outer, inner, {cfg.ray_directions});
  cell.gap_bits = std::max(0.0, g.delta);
  if (with_d2d) {
    // Winner: the family needing the smaller shift at the witness.
    const double dd = shift_threshold(inner_union(ch, true, cfg, D2dInner::kD2dSplitOnly), g.witness);
    const double du = shift_threshold(inner_union(ch, true, cfg, D2dInner::kUplinkSplitOnly), g.witness);
    if (which == D2dInner::kD2dSplitOnly) cell.scheme_selector = SchemeSelector::kD2dSplit;
    else if (which == D2dInner::kUplinkSplitOnly) cell.scheme_selector = SchemeSelector::kUplinkSplit;
    else if (std::abs(dd - du) <= 1e-12) cell.scheme_selector = scheme_by_condition(ch);
    else cell.scheme_selector = dd < du ? SchemeSelector::kD2dSplit : SchemeSelector::kUplinkSplit;
  }
  return cell;
}

struct D2dCellPair {
  GapMapCell cell;      // both families
  GapMapCell selected;  // family picked by the channel condition
};

/// Both D2D map entries for one cell, sharing one outer bound.
inline D2dCellPair d2d_gap_cells(double snr_db, double inr_db, double ratio, const GridConfig& cfg) {
  const auto ch = map_channel(snr_db, inr_db, ratio);
  const auto cand = boundary_samples(outer_union(ch, true, cfg), cfg.ray_directions);
  const auto dsplit = inner_union(ch, true, cfg, D2dInner::kD2dSplitOnly);
  const auto usplit = inner_union(ch, true, cfg, D2dInner::kUplinkSplitOnly);
  const auto both = cfg.hull ? inner_union(ch, true, cfg) : RateRegion(3).merge(dsplit).merge(usplit);

  D2dCellPair out;
  const auto g = constant_gap_over(cand, both);
  out.cell = {snr_db, inr_db, std::max(0.0, g.delta), scheme_by_condition(ch)};
  const double dd = shift_threshold(dsplit, g.witness), du = shift_threshold(usplit, g.witness);
  if (std::abs(dd - du) > 1e-12) out.cell.scheme_selector = dd < du ? SchemeSelector::kD2dSplit : SchemeSelector::kUplinkSplit;

  const auto sel = scheme_by_condition(ch);
  const auto gs = constant_gap_over(cand, sel == SchemeSelector::kD2dSplit ? dsplit : usplit);
  out.selected = {snr_db, inr_db, std::max(0.0, gs.delta), sel};
  return out;
}

inline std::vector<GapMapCell> gap_map(const std::vector<double>& snr_db, const std::vector<double>& inr_db,
                                       double ratio, bool with_d2d, const GridConfig& cfg = {}) {
  if (snr_db.empty() || inr_db.empty()) throw UsageError("gap_map: empty range");
  const std::size_t n = snr_db.size() * inr_db.size();
  return parallel_map(n, [&](std::size_t k) {
    return gap_cell(snr_db[k / inr_db.size()], inr_db[k % inr_db.size()], ratio, with_d2d, cfg);
  });
}

}  // namespace fdcap
