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

#include <string>
#include <string_view>
#include <vector>

#include "fdcap/gap_analysis.hpp"
#include "fdcap/scalar_bounds.hpp"

namespace fdcap {

enum class Scheme {
  kProposed,
  kD2dSplit,
  kUplinkSplit,
  kHalfDuplex,
  kTin,
  kSplitNoRelay,
  kDecodeForward,
  kOuter,
  kOuterRelaxed,
  kCutset,
  kCapacityVs,
};

inline constexpr std::pair<Scheme, std::string_view> kSchemeNames[] = {
    {Scheme::kProposed, "proposed"},         {Scheme::kD2dSplit, "d2d-split"},
    {Scheme::kUplinkSplit, "uplink-split"},  {Scheme::kHalfDuplex, "hd"},
    {Scheme::kTin, "tin"},                   {Scheme::kSplitNoRelay, "split-norelay"},
    {Scheme::kDecodeForward, "df"},          {Scheme::kOuter, "outer"},
    {Scheme::kOuterRelaxed, "outer-relaxed"}, {Scheme::kCutset, "cutset"},
    {Scheme::kCapacityVs, "capacity-vs"},
};

inline std::string to_string(Scheme s) {
  for (const auto& [k, v] : kSchemeNames)
    if (k == s) return std::string(v);
  return "?";
}

inline Scheme parse_scheme(std::string_view name) {
  for (const auto& [k, v] : kSchemeNames)
    if (v == name) return k;
  throw UsageError("unknown scheme: " + std::string(name));
}

/// Achievable schemes (as opposed to outer bounds).
inline bool is_achievable(Scheme s) {
  return s != Scheme::kOuter && s != Scheme::kOuterRelaxed && s != Scheme::kCutset;
}

/// Region of a named scheme. `extra` is appended to the parameter grid of
/// every scheme whose structural constraints it satisfies.
inline RateRegion scheme_region(Scheme s, const ScalarChannel& ch, bool with_d2d, const GridConfig& cfg = {},
                                const std::vector<SchemeParams>& extra = {}) {
  cfg.validate();
  const int dim = with_d2d ? 3 : 2;
  auto grid_with = [&](std::vector<SchemeParams> g, auto keep) {
    for (const auto& sp : extra)
      if (keep(sp)) g.push_back(sp);
    return g;
  };
  const double r3 = cap(ch.inr());
  RateRegion r(dim);
  switch (s) {
    case Scheme::kProposed:
    case Scheme::kD2dSplit:
    case Scheme::kUplinkSplit: {
      if (!with_d2d && s != Scheme::kProposed) throw UsageError(to_string(s) + " requires the D2D model");
      const auto g = grid_with(inner_grid(ch, cfg), [](const SchemeParams&) { return true; });
      if (!with_d2d) return maybe_hull(union_over(2, g, [&](const SchemeParams& sp) { return inner_no_d2d(ch, sp); }), cfg);
      if (s != Scheme::kUplinkSplit)
        for (const auto& sp : g) r.add(inner_d2d_split(ch, sp));
      if (s != Scheme::kD2dSplit)
        for (const auto& sp : g) r.add(inner_uplink_split(ch, sp));
      return maybe_hull(std::move(r), cfg);
    }
    case Scheme::kHalfDuplex:
      r.add(baseline_half_duplex(ch, with_d2d));
      return r;
    case Scheme::kTin:
      r.add(with_d2d ? time_share_with_d2d(baseline_tin(ch), r3) : baseline_tin(ch));
      return r;
    case Scheme::kSplitNoRelay: {
      auto g = split_no_relay_grid(cfg.scheme_points);
      g.push_back(appendix_c_params(ch, SchemeSelector::kD2dSplit));
      g.push_back(appendix_c_params(ch, SchemeSelector::kUplinkSplit));
      g = grid_with(g, [](const SchemeParams& sp) { return sp.a == 0.0 && sp.d == 0.0; });
      for (const auto& sp : g) {
        const auto p = baseline_split_no_relay(ch, sp);
        r.add(with_d2d ? time_share_with_d2d(p, r3) : p);
      }
      return maybe_hull(std::move(r), cfg);
    }
    case Scheme::kDecodeForward: {
      auto g = decode_forward_grid(cfg.scheme_points);
      for (double rho : linspace(0.0, 1.0, cfg.scheme_points)) g.push_back(coupled_params(rho));
      g = grid_with(g, [](const SchemeParams& sp) { return sp.c == 0.0; });
      for (const auto& sp : g) {
        if (with_d2d) {
          r.add(baseline_decode_forward(ch, sp));
        } else {
          r.add(inner_no_d2d(ch, sp));
        }
      }
      return maybe_hull(std::move(r), cfg);
    }
    case Scheme::kOuter:
      return outer_union(ch, with_d2d, cfg);
    case Scheme::kOuterRelaxed:
      if (!with_d2d) throw UsageError("outer-relaxed requires the D2D model");
      r.add(outer_relaxed(ch));
      return r;
    case Scheme::kCutset:
      for (double rho : rho_grid(cfg)) r.add(with_d2d ? cutset_d2d(ch, {rho, 1.0, 1.0}) : cutset_no_d2d(ch, {rho, 1.0, 1.0}));
      return maybe_hull(std::move(r), cfg);
    case Scheme::kCapacityVs: {
      if (with_d2d) throw UsageError("capacity-vs is defined without D2D");
      auto box = capacity_very_strong(ch);
      if (!box) throw DomainError("capacity-vs: channel is not in the very strong interference regime");
      r.add(*box);
      return r;
    }
  }
  throw UsageError("unhandled scheme");
}

}  // namespace fdcap
