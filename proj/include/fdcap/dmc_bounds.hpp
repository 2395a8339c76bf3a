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
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "fdcap/channel_model.hpp"
#include "fdcap/marton.hpp"
#include "fdcap/parallel.hpp"
#include "fdcap/random.hpp"
#include "fdcap/rate_region.hpp"

namespace fdcap {

/// Variable slots of the joint tensor, in layout order.
enum class Var : int { U = 0, V, W1, W3, X1, X2, Y2, Y3 };
inline constexpr int kVarCount = 8;

/// Bitmask over Var.
class VarSet {
 public:
  constexpr VarSet() = default;
  constexpr VarSet(std::initializer_list<Var> vs) {
    for (Var v : vs) bits_ |= bit(v);
  }
  constexpr bool has(Var v) const { return (bits_ & bit(v)) != 0; }
  constexpr unsigned bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool overlaps(VarSet o) const { return (bits_ & o.bits_) != 0; }
  constexpr VarSet operator|(VarSet o) const { return VarSet(bits_ | o.bits_); }
  constexpr VarSet without(VarSet o) const { return VarSet(bits_ & ~o.bits_); }

 private:
  constexpr explicit VarSet(unsigned b) : bits_(b) {}
  static constexpr unsigned bit(Var v) { return 1u << static_cast<int>(v); }
  unsigned bits_ = 0;
};

struct DmcLimits {
  int max_alphabet = 4;         // X1, X2, Y2, Y3
  int max_auxiliary = 20;       // U, V, W1, W3
  std::size_t max_entries = std::size_t{1} << 22;
};

namespace detail {

// Checks a nonnegative block of conditional slices, renormalizing small drift.
inline void normalize_slices(std::vector<double>& p, std::size_t slice, const char* what) {
  if (slice == 0 || p.size() % slice != 0) throw DomainError(std::string(what) + ": bad tensor size");
  for (std::size_t s = 0; s < p.size(); s += slice) {
    double tot = 0.0;
    for (std::size_t i = s; i < s + slice; ++i) {
      if (!(p[i] >= 0.0) || !std::isfinite(p[i])) throw DomainError(std::string(what) + ": negative or non-finite entry");
      tot += p[i];
    }
    if (std::abs(tot - 1.0) > 1e-6) throw DomainError(std::string(what) + ": slice does not sum to 1");
    for (std::size_t i = s; i < s + slice; ++i) p[i] /= tot;
  }
}

inline void check_size(int n, int cap, const char* what) {
  if (n < 1 || n > cap) throw DomainError(std::string(what) + ": alphabet size out of range");
}

}  // namespace detail

/// p(y2, y3 | x1, x2), stored as p[y2][y3][x1][x2] on disk and in memory.
struct ChannelPmf {
  int nx1 = 2, nx2 = 2, ny2 = 2, ny3 = 2;
  std::vector<double> p;

  std::size_t index(int y2, int y3, int x1, int x2) const {
    return ((static_cast<std::size_t>(y2) * ny3 + y3) * nx1 + x1) * nx2 + x2;
  }
  double operator()(int y2, int y3, int x1, int x2) const { return p[index(y2, y3, x1, x2)]; }

  /// Throws on gross violations, renormalizes drift up to 1e-6.
  void normalize(const DmcLimits& lim = {}) {
    for (int n : {nx1, nx2, ny2, ny3}) detail::check_size(n, lim.max_alphabet, "ChannelPmf");
    if (p.size() != static_cast<std::size_t>(nx1 * nx2 * ny2 * ny3)) throw DomainError("ChannelPmf: bad tensor size");
    for (int x1 = 0; x1 < nx1; ++x1)
      for (int x2 = 0; x2 < nx2; ++x2) {
        double tot = 0.0;
        for (int a = 0; a < ny2; ++a)
          for (int b = 0; b < ny3; ++b) {
            const double v = (*this)(a, b, x1, x2);
            if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("ChannelPmf: negative or non-finite entry");
            tot += v;
          }
        if (std::abs(tot - 1.0) > 1e-6) throw DomainError("ChannelPmf: conditional slice does not sum to 1");
        for (int a = 0; a < ny2; ++a)
          for (int b = 0; b < ny3; ++b) p[index(a, b, x1, x2)] /= tot;
      }
  }

  /// Y2 = X1 and Y3 = X2.
  static ChannelPmf noiseless_orthogonal(int n) {
    ChannelPmf c{n, n, n, n, std::vector<double>(static_cast<std::size_t>(n * n * n * n), 0.0)};
    for (int x1 = 0; x1 < n; ++x1)
      for (int x2 = 0; x2 < n; ++x2) c.p[c.index(x1, x2, x1, x2)] = 1.0;
    return c;
  }

  /// Outputs independent of the inputs.
  static ChannelPmf constant(int nx1, int nx2, int ny2, int ny3) {
    ChannelPmf c{nx1, nx2, ny2, ny3, std::vector<double>(static_cast<std::size_t>(nx1 * nx2 * ny2 * ny3), 0.0)};
    for (int x1 = 0; x1 < nx1; ++x1)
      for (int x2 = 0; x2 < nx2; ++x2) c.p[c.index(0, 0, x1, x2)] = 1.0;
    return c;
  }
};

/// p(u) p(v, w1, w3, x1 | u) p(x2 | u).
struct InputFactorization {
  int nu = 1, nv = 1, nw1 = 1, nw3 = 1, nx1 = 2, nx2 = 2;
  std::vector<double> pu;         // [u]
  std::vector<double> pvwx_u;     // [u][v][w1][w3][x1]
  std::vector<double> px2_u;      // [u][x2]

  std::size_t vwx_index(int u, int v, int w1, int w3, int x1) const {
    return (((static_cast<std::size_t>(u) * nv + v) * nw1 + w1) * nw3 + w3) * nx1 + x1;
  }

  void normalize(const DmcLimits& lim = {}) {
    for (int n : {nu, nv, nw1, nw3}) detail::check_size(n, lim.max_auxiliary, "InputFactorization");
    for (int n : {nx1, nx2}) detail::check_size(n, lim.max_alphabet, "InputFactorization");
    if (pu.size() != static_cast<std::size_t>(nu)) throw DomainError("InputFactorization: bad p(u) size");
    if (pvwx_u.size() != static_cast<std::size_t>(nu * nv * nw1 * nw3 * nx1))
      throw DomainError("InputFactorization: bad p(v,w1,w3,x1|u) size");
    if (px2_u.size() != static_cast<std::size_t>(nu * nx2)) throw DomainError("InputFactorization: bad p(x2|u) size");
    detail::normalize_slices(pu, pu.size(), "p(u)");
    detail::normalize_slices(pvwx_u, static_cast<std::size_t>(nv * nw1 * nw3 * nx1), "p(v,w1,w3,x1|u)");
    detail::normalize_slices(px2_u, static_cast<std::size_t>(nx2), "p(x2|u)");
  }
};

/// Full tensor over (U, V, W1, W3, X1, X2, Y2, Y3), last index fastest.
class JointPmf {
 public:
  using Dims = std::array<int, kVarCount>;

  JointPmf(const Dims& dims, std::vector<double> p) : dims_(dims), p_(std::move(p)) {
    std::size_t n = 1;
    for (int d : dims_) {
      if (d < 1) throw DomainError("JointPmf: nonpositive alphabet size");
      n *= static_cast<std::size_t>(d);
    }
    if (p_.size() != n) throw DomainError("JointPmf: tensor size mismatch");
    const double tot = std::accumulate(p_.begin(), p_.end(), 0.0);
    if (std::abs(tot - 1.0) > 1e-6) throw DomainError("JointPmf: does not sum to 1");
    for (double& v : p_) v /= tot;
  }

  const Dims& dims() const { return dims_; }
  int size(Var v) const { return dims_[static_cast<std::size_t>(v)]; }
  const std::vector<double>& data() const { return p_; }

  /// Marginal pmf over `s`, laid out in Var order.
  std::vector<double> marginal(VarSet s) const {
    std::array<std::size_t, kVarCount> stride{};
    std::size_t m = 1;
    for (int k = kVarCount - 1; k >= 0; --k) {
      if (s.has(static_cast<Var>(k))) {
        stride[static_cast<std::size_t>(k)] = m;
        m *= static_cast<std::size_t>(dims_[static_cast<std::size_t>(k)]);
      }
    }
    std::vector<double> out(m, 0.0);
    std::array<int, kVarCount> idx{};
    std::size_t off = 0;
    for (double v : p_) {
      out[off] += v;
      // odometer increment, keeping the marginal offset in sync
      for (int k = kVarCount - 1; k >= 0; --k) {
        const auto kk = static_cast<std::size_t>(k);
        if (++idx[kk] < dims_[kk]) {
          off += stride[kk];
          break;
        }
        off -= stride[kk] * static_cast<std::size_t>(dims_[kk] - 1);
        idx[kk] = 0;
      }
    }
    return out;
  }

  /// H(S) in bits; 0 log 0 = 0.
  double entropy(VarSet s) const {
    if (s.empty()) return 0.0;
    double h = 0.0;
    for (double v : marginal(s))
      if (v > 0.0) h -= v * std::log2(v);
    return h;
  }

 private:
  Dims dims_;
  std::vector<double> p_;
};

/// I(A;B|C) in bits, clamped at zero for round-off.
inline double mutual_information(const JointPmf& j, VarSet a, VarSet b, VarSet c = {}) {
  if (a.overlaps(b) || a.overlaps(c) || b.overlaps(c)) throw UsageError("mutual_information: sets must be disjoint");
  if (a.empty() || b.empty()) return 0.0;
  const double v = j.entropy(a | c) + j.entropy(b | c) - j.entropy(a | b | c) - j.entropy(c);
  return std::max(0.0, v);
}

namespace detail {

inline JointPmf::Dims joint_dims(int nu, int nv, int nw1, int nw3, const ChannelPmf& ch) {
  return {nu, nv, nw1, nw3, ch.nx1, ch.nx2, ch.ny2, ch.ny3};
}

inline void check_entries(const JointPmf::Dims& d, const DmcLimits& lim) {
  std::size_t n = 1;
  for (int v : d) n *= static_cast<std::size_t>(v);
  if (n > lim.max_entries) throw DomainError("joint tensor exceeds the configured size cap");
}

// Appends the channel to an input pmf q[u][v][w1][w3][x1][x2].
inline JointPmf attach_channel(const std::vector<double>& q, const JointPmf::Dims& d, const ChannelPmf& ch) {
  const std::size_t ny = static_cast<std::size_t>(ch.ny2 * ch.ny3);
  std::vector<double> p(q.size() * ny, 0.0);
  const std::size_t nxx = static_cast<std::size_t>(ch.nx1 * ch.nx2);
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] == 0.0) continue;
    const int x12 = static_cast<int>(i % nxx);
    const int x1 = x12 / ch.nx2, x2 = x12 % ch.nx2;
    for (int y2 = 0; y2 < ch.ny2; ++y2)
      for (int y3 = 0; y3 < ch.ny3; ++y3)
        p[i * ny + static_cast<std::size_t>(y2 * ch.ny3 + y3)] = q[i] * ch(y2, y3, x1, x2);
  }
  return JointPmf(d, std::move(p));
}

}  // namespace detail

inline JointPmf joint_from_factorization(const ChannelPmf& ch, const InputFactorization& f, const DmcLimits& lim = {}) {
  if (f.nx1 != ch.nx1 || f.nx2 != ch.nx2) throw DomainError("factorization and channel input alphabets differ");
  const auto d = detail::joint_dims(f.nu, f.nv, f.nw1, f.nw3, ch);
  detail::check_entries(d, lim);
  std::vector<double> q(static_cast<std::size_t>(f.nu * f.nv * f.nw1 * f.nw3 * f.nx1 * f.nx2), 0.0);
  std::size_t i = 0;
  for (int u = 0; u < f.nu; ++u)
    for (int v = 0; v < f.nv; ++v)
      for (int w1 = 0; w1 < f.nw1; ++w1)
        for (int w3 = 0; w3 < f.nw3; ++w3)
          for (int x1 = 0; x1 < f.nx1; ++x1)
            for (int x2 = 0; x2 < f.nx2; ++x2)
              q[i++] = f.pu[static_cast<std::size_t>(u)] * f.pvwx_u[f.vwx_index(u, v, w1, w3, x1)] *
                       f.px2_u[static_cast<std::size_t>(u * f.nx2 + x2)];
  return detail::attach_channel(q, d, ch);
}

/// Joint with arbitrary p(u, v, x1, x2) laid out [u][v][x1][x2]; W1, W3 trivial.
inline JointPmf joint_from_uvx(const ChannelPmf& ch, int nu, int nv, const std::vector<double>& puvx,
                               const DmcLimits& lim = {}) {
  const auto d = detail::joint_dims(nu, nv, 1, 1, ch);
  detail::check_entries(d, lim);
  if (puvx.size() != static_cast<std::size_t>(nu * nv * ch.nx1 * ch.nx2)) throw DomainError("p(u,v,x1,x2): bad size");
  std::vector<double> q = puvx;
  detail::normalize_slices(q, q.size(), "p(u,v,x1,x2)");
  return detail::attach_channel(q, d, ch);
}

/// Joint with p(x1, x2) laid out [x1][x2]; all auxiliaries trivial.
inline JointPmf joint_from_inputs(const ChannelPmf& ch, const std::vector<double>& pxx) {
  return joint_from_uvx(ch, 1, 1, pxx);
}

// ---- regions ----

/// Relay-assisted split without D2D: W1, W3 must be trivial.
inline Polytope region_thm1(const JointPmf& j) {
  using enum Var;
  if (j.size(W1) != 1 || j.size(W3) != 1) throw UsageError("region_thm1: W1 and W3 must be singletons");
  Polytope p(2);
  p.add({1, 0, 0}, mutual_information(j, {X1}, {Y2}, {U, X2}));
  p.add({0, 1, 0}, mutual_information(j, {X2}, {Y3}, {U, V}));
  p.add({1, 1, 0}, mutual_information(j, {X1}, {Y2}, {U, V, X2}) + mutual_information(j, {U, V, X2}, {Y3}));
  return p;
}
inline Polytope region_thm1(const ChannelPmf& ch, const InputFactorization& f) {
  return region_thm1(joint_from_factorization(ch, f));
}

/// Sum-rate-improved cut-set outer polytope at one input pmf; only the
/// (X1, X2, Y2, Y3) marginal of `j` matters.
inline Polytope region_thm2_outer(const JointPmf& j) {
  using enum Var;
  Polytope p(2);
  p.add({1, 0, 0}, mutual_information(j, {X1}, {Y2}, {X2}));
  p.add({0, 1, 0}, mutual_information(j, {X2}, {Y3}, {X1}));
  p.add({1, 1, 0}, mutual_information(j, {X1}, {Y2, Y3}, {X2}) + mutual_information(j, {X2}, {Y3}));
  return p;
}
inline Polytope region_thm2_outer(const ChannelPmf& ch, const std::vector<double>& pxx) {
  return region_thm2_outer(joint_from_inputs(ch, pxx));
}

inline MartonTerms marton_terms(const JointPmf& j) {
  using enum Var;
  MartonTerms t;
  t.mu1 = mutual_information(j, {W1}, {W3}, {U, V});
  t.mu2 = mutual_information(j, {W1}, {Y2}, {U, V, X2});
  t.mu3 = mutual_information(j, {V, W1}, {Y2}, {U, X2});
  t.mu4 = mutual_information(j, {W3}, {Y3}, {U, V, X2});
  t.mu5 = mutual_information(j, {X2}, {Y3}, {U, V, W3});
  t.mu6 = mutual_information(j, {W3, X2}, {Y3}, {U, V});
  t.mu7 = mutual_information(j, {U, V, W3, X2}, {Y3});
  return t;
}

/// Marton-with-relay region (fallback form when binning is infeasible).
inline Polytope region_thm3(const JointPmf& j) { return marton_region(marton_terms(j)); }
inline Polytope region_thm3(const ChannelPmf& ch, const InputFactorization& f) {
  return region_thm3(joint_from_factorization(ch, f));
}

/// Re-labels a factorization with trivial W1, W3 so that W3 = X1.
inline InputFactorization with_w3_as_x1(const InputFactorization& f) {
  if (f.nw1 != 1 || f.nw3 != 1) throw UsageError("with_w3_as_x1: expects trivial W1, W3");
  InputFactorization g = f;
  g.nw3 = f.nx1;
  g.pvwx_u.assign(static_cast<std::size_t>(g.nu * g.nv * g.nw3 * g.nx1), 0.0);
  for (int u = 0; u < f.nu; ++u)
    for (int v = 0; v < f.nv; ++v)
      for (int x1 = 0; x1 < f.nx1; ++x1) g.pvwx_u[g.vwx_index(u, v, 0, x1, x1)] = f.pvwx_u[f.vwx_index(u, v, 0, 0, x1)];
  return g;
}

/// Same with W1 = X1.
inline InputFactorization with_w1_as_x1(const InputFactorization& f) {
  if (f.nw1 != 1 || f.nw3 != 1) throw UsageError("with_w1_as_x1: expects trivial W1, W3");
  InputFactorization g = f;
  g.nw1 = f.nx1;
  g.pvwx_u.assign(static_cast<std::size_t>(g.nu * g.nv * g.nw1 * g.nx1), 0.0);
  for (int u = 0; u < f.nu; ++u)
    for (int v = 0; v < f.nv; ++v)
      for (int x1 = 0; x1 < f.nx1; ++x1) g.pvwx_u[g.vwx_index(u, v, x1, 0, x1)] = f.pvwx_u[f.vwx_index(u, v, 0, 0, x1)];
  return g;
}

/// D2D-split special case: W1 trivial, W3 = X1.
inline Polytope region_cor1(const ChannelPmf& ch, const InputFactorization& f) {
  return region_thm3(ch, with_w3_as_x1(f));
}
/// Uplink-split special case: W3 trivial, W1 = X1.
inline Polytope region_cor2(const ChannelPmf& ch, const InputFactorization& f) {
  return region_thm3(ch, with_w1_as_x1(f));
}

/// Marginalizes W1 (or W3) out of a factorization.
inline InputFactorization drop_w1(const InputFactorization& f) {
  InputFactorization g = f;
  g.nw1 = 1;
  g.pvwx_u.assign(static_cast<std::size_t>(g.nu * g.nv * g.nw3 * g.nx1), 0.0);
  for (int u = 0; u < f.nu; ++u)
    for (int v = 0; v < f.nv; ++v)
      for (int w1 = 0; w1 < f.nw1; ++w1)
        for (int w3 = 0; w3 < f.nw3; ++w3)
          for (int x1 = 0; x1 < f.nx1; ++x1) g.pvwx_u[g.vwx_index(u, v, 0, w3, x1)] += f.pvwx_u[f.vwx_index(u, v, w1, w3, x1)];
  return g;
}

/// Genie-aided outer polytope with D2D. The genie variables are any disjoint
/// sets of slots in `j` (the plain form uses {U} and {V}).
inline Polytope region_thm5_outer(const JointPmf& j, VarSet gu, VarSet gv) {
  using enum Var;
  if (gu.has(X2) || gu.has(Y2) || gu.has(Y3) || gv.has(X2) || gv.has(Y2) || gv.has(Y3))
    throw UsageError("region_thm5_outer: genie sets may not contain X2, Y2 or Y3");
  // slots already conditioned on carry no information
  auto mi = [&](VarSet a, VarSet b, VarSet c) { return mutual_information(j, a.without(c), b, c); };
  const double i13 = mutual_information(j, {X1}, {Y2, Y3}, {X2});
  Polytope p(3);
  p.add({1, 0, 0}, mi(gu, {Y2}, {X2}));
  p.add({1, 0, 0}, mi({X1}, {Y2, Y3}, gv | VarSet{X2}));
  p.add({0, 1, 0}, mutual_information(j, {X2}, {Y3}, {X1}));
  p.add({0, 0, 1}, mi({X1}, {Y2, Y3}, gu | VarSet{X2}));
  p.add({0, 0, 1}, mi(gv, {Y2, Y3}, {X2}));
  p.add({1, 0, 1}, i13);
  p.add({0, 1, 1}, mutual_information(j, {X1, X2}, {Y3}));
  p.add({1, 1, 1}, i13 + mutual_information(j, {X2}, {Y3}));
  return p;
}
inline Polytope region_thm5_outer(const JointPmf& j) { return region_thm5_outer(j, {Var::U}, {Var::V}); }
inline Polytope region_thm5_outer(const ChannelPmf& ch, int nu, int nv, const std::vector<double>& puvx) {
  return region_thm5_outer(joint_from_uvx(ch, nu, nv, puvx));
}

/// Genie candidates: every subset of the auxiliary slots plus X1.
inline std::vector<VarSet> genie_candidates() {
  using enum Var;
  const Var base[] = {U, V, W1, W3, X1};
  std::vector<VarSet> out;
  for (unsigned m = 0; m < 32; ++m) {
    VarSet s;
    for (int k = 0; k < 5; ++k)
      if ((m >> k) & 1u) s = s | VarSet{base[k]};
    out.push_back(s);
  }
  return out;
}

/// Union of the outer polytope over genie pairs drawn from the slots of `j`.
/// Each pair is a valid choice of p(u, v, x1, x2) with the same input marginal.
inline RateRegion region_thm5_outer_union(const JointPmf& j) {
  const auto cands = genie_candidates();
  RateRegion r(3);
  for (const auto& a : cands)
    for (const auto& b : cands) r.add(region_thm5_outer(j, a, b));
  return r;
}

// ---- binning-constraint removal check ----

enum class Prop2Status { kPass, kFail, kSkipped };

inline std::string to_string(Prop2Status s) {
  switch (s) {
    case Prop2Status::kPass: return "pass";
    case Prop2Status::kFail: return "fail";
    default: return "skipped";
  }
}

struct Prop2Report {
  Prop2Status status = Prop2Status::kSkipped;
  MartonTerms terms;
  Polytope unconstrained{3};  // five groups without the binning constraint
  Polytope fallback{3};       // W1-free region
  Polytope w1_free{3};        // the scheme evaluated with W1 marginalized out
  std::optional<RatePoint> witness;
  std::string stage;          // which containment failed
};

/// Verifies unconstrained ⊆ fallback ⊆ (scheme with trivial W1) when the
/// binning constraint is violated.
inline Prop2Report check_prop2(const ChannelPmf& ch, const InputFactorization& f, double tol = 1e-9) {
  Prop2Report r;
  const auto j = joint_from_factorization(ch, f);
  r.terms = marton_terms(j);
  if (r.terms.binning_feasible()) return r;
  r.unconstrained = marton_polytope_raw(r.terms);
  r.fallback = marton_region(r.terms);
  r.w1_free = region_thm3(ch, drop_w1(f));
  r.status = Prop2Status::kPass;
  auto check = [&](const Polytope& in, const Polytope& out, const char* stage) {
    if (in.empty()) return true;
    for (const auto& v : vertices(in))
      if (!out.contains(v, tol)) {
        r.status = Prop2Status::kFail;
        r.witness = v;
        r.stage = stage;
        return false;
      }
    return true;
  };
  if (check(r.unconstrained, r.fallback, "unconstrained-in-fallback")) check(r.fallback, r.w1_free, "fallback-in-w1-free");
  return r;
}

// ---- random instances ----

namespace detail {

inline void dirichlet_fill(std::mt19937_64& rng, double* out, std::size_t n) {
  std::exponential_distribution<double> ex(1.0);
  double tot = 0.0;
  for (std::size_t i = 0; i < n; ++i) tot += (out[i] = ex(rng));
  for (std::size_t i = 0; i < n; ++i) out[i] /= tot;
}

}  // namespace detail

inline ChannelPmf random_channel(int nx1, int nx2, int ny2, int ny3, std::uint64_t seed) {
  std::mt19937_64 rng(detail::splitmix64(seed));
  ChannelPmf c{nx1, nx2, ny2, ny3, std::vector<double>(static_cast<std::size_t>(nx1 * nx2 * ny2 * ny3))};
  std::vector<double> slice(static_cast<std::size_t>(ny2 * ny3));
  for (int x1 = 0; x1 < nx1; ++x1)
    for (int x2 = 0; x2 < nx2; ++x2) {
      detail::dirichlet_fill(rng, slice.data(), slice.size());
      for (int a = 0; a < ny2; ++a)
        for (int b = 0; b < ny3; ++b) c.p[c.index(a, b, x1, x2)] = slice[static_cast<std::size_t>(a * ny3 + b)];
    }
  return c;
}

struct FactorizationSizes {
  int nu = 2, nv = 2, nw1 = 1, nw3 = 1, nx1 = 2, nx2 = 2;
};

inline InputFactorization random_factorization(const FactorizationSizes& s, std::uint64_t seed) {
  std::mt19937_64 rng(detail::splitmix64(seed ^ 0x5bd1e995ULL));
  InputFactorization f{s.nu, s.nv, s.nw1, s.nw3, s.nx1, s.nx2, {}, {}, {}};
  f.pu.resize(static_cast<std::size_t>(s.nu));
  f.pvwx_u.resize(static_cast<std::size_t>(s.nu * s.nv * s.nw1 * s.nw3 * s.nx1));
  f.px2_u.resize(static_cast<std::size_t>(s.nu * s.nx2));
  detail::dirichlet_fill(rng, f.pu.data(), f.pu.size());
  const auto slice = static_cast<std::size_t>(s.nv * s.nw1 * s.nw3 * s.nx1);
  for (int u = 0; u < s.nu; ++u) {
    detail::dirichlet_fill(rng, f.pvwx_u.data() + static_cast<std::size_t>(u) * slice, slice);
    detail::dirichlet_fill(rng, f.px2_u.data() + static_cast<std::size_t>(u * s.nx2), static_cast<std::size_t>(s.nx2));
  }
  return f;
}

/// Random p(u, v, x1, x2) laid out [u][v][x1][x2].
inline std::vector<double> random_uvx(int nu, int nv, int nx1, int nx2, std::uint64_t seed) {
  std::mt19937_64 rng(detail::splitmix64(seed ^ 0x2545f491ULL));
  std::vector<double> p(static_cast<std::size_t>(nu * nv * nx1 * nx2));
  detail::dirichlet_fill(rng, p.data(), p.size());
  return p;
}

// ---- factorization search ----

enum class DmcTheorem { k1 = 1, k3 = 3 };

struct FactorizationSearchResult {
  InputFactorization best;
  RateRegion region{3};  // union of every evaluated polytope
  double value = -std::numeric_limits<double>::infinity();
  std::vector<double> record;
};

/// Seeded Dirichlet draws, then blends of the incumbent with fresh draws at
/// a shrinking weight. Deterministic given the seed.
inline FactorizationSearchResult factorization_search(
    const ChannelPmf& ch, const FactorizationSizes& sizes, DmcTheorem thm, std::size_t budget, std::uint64_t seed,
    const std::function<double(const Polytope&)>& score = [](const Polytope& p) {
      RateRegion r(p.dim());
      r.add(p);
      return symmetric_rate(r);
    }) {
  if (budget < 1) throw UsageError("factorization_search: budget must be >= 1");
  auto region_of = [&](const InputFactorization& f) {
    return thm == DmcTheorem::k1 ? region_thm1(ch, f) : region_thm3(ch, f);
  };
  FactorizationSearchResult res;
  res.region = RateRegion(thm == DmcTheorem::k1 ? 2 : 3);
  auto consider = [&](const InputFactorization& f, const Polytope& p) {
    res.region.add(p);
    const double v = score(p);
    if (v > res.value) {
      res.value = v;
      res.best = f;
    }
    res.record.push_back(res.value);
  };
  constexpr std::size_t kWarmup = 16;
  const std::size_t warm = std::min(budget, kWarmup);
  struct Eval {
    InputFactorization f;
    Polytope p;
  };
  const auto draws = parallel_map(warm, [&](std::size_t i) {
    auto f = random_factorization(sizes, seed * 1000003ULL + i);
    return Eval{f, region_of(f)};
  });
  for (const auto& e : draws) consider(e.f, e.p);
  double w = 0.5;
  for (std::size_t i = warm; i < budget; ++i) {
    const auto fresh = random_factorization(sizes, seed * 1000003ULL + i);
    auto blend = res.best;
    auto mix = [&](std::vector<double>& a, const std::vector<double>& b) {
      for (std::size_t k = 0; k < a.size(); ++k) a[k] = (1.0 - w) * a[k] + w * b[k];
    };
    mix(blend.pu, fresh.pu);
    mix(blend.pvwx_u, fresh.pvwx_u);
    mix(blend.px2_u, fresh.px2_u);
    const double before = res.value;
    consider(blend, region_of(blend));
    if (!(res.value > before)) w = std::max(0.02, 0.7 * w);
  }
  return res;
}

// ---- Gaussian identity check ----

struct Lemma1Result {
  double lhs = 0.0;       // I(X1; Y2, Y3 | U, X2), sample estimate
  double rhs = 0.0;       // I(X1; Y' | U, X2), sample estimate
  double analytic = 0.0;  // exact value under the drawn covariance
  double std_error = 0.0; // batch-means standard error of lhs - rhs
  double max_deviation = 0.0;
};

namespace detail {

// Gaussian I(A;B|C) in bits from a covariance over index blocks.
inline double gaussian_cmi(const Eigen::MatrixXcd& K, const std::vector<int>& a, const std::vector<int>& b,
                           const std::vector<int>& c) {
  auto sub = [&](const std::vector<int>& idx) {
    Eigen::MatrixXcd m(idx.size(), idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r)
      for (std::size_t s = 0; s < idx.size(); ++s) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s)) = K(idx[r], idx[s]);
    return m;
  };
  auto ld = [&](std::vector<int> idx) {
    if (idx.empty()) return 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sub(idx), Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) s += std::log2(std::max(es.eigenvalues()[i], 1e-300));
    return s;
  };
  auto cat = [](std::vector<int> x, const std::vector<int>& y) {
    x.insert(x.end(), y.begin(), y.end());
    return x;
  };
  return ld(cat(a, c)) + ld(cat(b, c)) - ld(cat(cat(a, b), c)) - ld(c);
}

}  // namespace detail

/// Monte-Carlo check that combining the two receptions into the
/// matched-filter output Y' = (g21* Y2 + g31* Y3) / norm loses nothing about
/// X1 given (U, X2), under a random jointly Gaussian (U, X1, X2).
inline Lemma1Result lemma1_identity_check(const ScalarChannel& ch, std::size_t samples, std::uint64_t seed) {
  ch.validate();
  if (samples < 10000) throw UsageError("lemma1_identity_check: needs at least 1e4 samples");
  std::mt19937_64 rng(detail::splitmix64(seed));
  // random input covariance with the power budgets on the diagonal
  Eigen::MatrixXcd A = detail::gaussian_matrix(rng, 3, 3);
  Eigen::MatrixXcd Kin = A * A.adjoint() + 0.1 * Eigen::MatrixXcd::Identity(3, 3);
  Eigen::Vector3d d(1.0, std::sqrt(ch.P1 / Kin(1, 1).real()), std::sqrt(ch.P2 / Kin(2, 2).real()));
  d[0] = 1.0 / std::sqrt(Kin(0, 0).real());
  Kin = d.asDiagonal() * Kin * d.asDiagonal();
  const Eigen::MatrixXcd Lin = Kin.llt().matrixL();
  const double nrm = std::sqrt(std::norm(ch.g21) + std::norm(ch.g31));
  if (nrm == 0.0) throw DomainError("lemma1_identity_check: g21 = g31 = 0");
  const cplx c2 = std::conj(ch.g21) / nrm, c3 = std::conj(ch.g31) / nrm;

  // map from (u, x1, x2, z2, z3) to the observed vector (u, x1, x2, y2, y3, y')
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(6, 5);
  T.topLeftCorner(3, 3) = Eigen::MatrixXcd::Identity(3, 3);
  T(3, 1) = ch.g21; T(3, 3) = 1.0;
  T(4, 1) = ch.g31; T(4, 2) = ch.g32; T(4, 4) = 1.0;
  T.row(5) = c2 * T.row(3) + c3 * T.row(4);
  Eigen::MatrixXcd Ksrc = Eigen::MatrixXcd::Zero(5, 5);
  Ksrc.topLeftCorner(3, 3) = Kin;
  Ksrc(3, 3) = ch.sigma2;
  Ksrc(4, 4) = ch.sigma2;
  const Eigen::MatrixXcd Kexact = T * Ksrc * T.adjoint();
  const std::vector<int> iu{0}, ix1{1}, ix2{2}, iy{3, 4}, iyp{5}, icond{0, 2};

  Lemma1Result r;
  r.analytic = detail::gaussian_cmi(Kexact, ix1, iy, icond);

  constexpr std::size_t kBatches = 20;
  const std::size_t per = samples / kBatches;
  std::normal_distribution<double> n01(0.0, std::sqrt(0.5));
  std::vector<double> diffs;
  Eigen::MatrixXcd Ktot = Eigen::MatrixXcd::Zero(6, 6);
  Eigen::VectorXcd w(5), src(5);
  const double s = std::sqrt(ch.sigma2);
  for (std::size_t b = 0; b < kBatches; ++b) {
    Eigen::MatrixXcd Kb = Eigen::MatrixXcd::Zero(6, 6);
    for (std::size_t i = 0; i < per; ++i) {
      for (int k = 0; k < 5; ++k) w[k] = cplx(n01(rng), n01(rng));
      src.head(3) = Lin * w.head(3);
      src[3] = s * w[3];
      src[4] = s * w[4];
      const Eigen::VectorXcd obs = T * src;
      Kb.noalias() += obs * obs.adjoint();
    }
    Kb /= static_cast<double>(per);
    diffs.push_back(detail::gaussian_cmi(Kb, ix1, iy, icond) - detail::gaussian_cmi(Kb, ix1, iyp, icond));
    Ktot += Kb;
  }
  Ktot /= static_cast<double>(kBatches);
  r.lhs = detail::gaussian_cmi(Ktot, ix1, iy, icond);
  r.rhs = detail::gaussian_cmi(Ktot, ix1, iyp, icond);
  const double mean = std::accumulate(diffs.begin(), diffs.end(), 0.0) / kBatches;
  double var = 0.0;
  for (double x : diffs) var += (x - mean) * (x - mean);
  r.std_error = std::sqrt(var / (kBatches - 1) / kBatches);
  r.max_deviation = std::max({std::abs(r.lhs - r.rhs), std::abs(r.lhs - r.analytic), std::abs(r.rhs - r.analytic)});
  return r;
}

// ---- JSON ----

namespace detail {

inline void flatten_json(const nlohmann::json& j, std::vector<double>& out) {
  if (j.is_array()) {
    for (const auto& e : j) flatten_json(e, out);
  } else if (j.is_number()) {
    out.push_back(j.get<double>());
  } else {
    throw DomainError("pmf JSON: entries must be numbers or nested arrays");
  }
}

inline std::vector<double> flat(const nlohmann::json& j, std::size_t expect, const char* what) {
  std::vector<double> v;
  flatten_json(j, v);
  if (v.size() != expect) throw DomainError(std::string(what) + ": nested array has the wrong number of entries");
  return v;
}

inline int size_of(const nlohmann::json& sizes, const char* key, int dflt) {
  return sizes.contains(key) ? sizes.at(key).get<int>() : dflt;
}

}  // namespace detail

/// {"sizes": {"x1","x2","y2","y3"}, "p": [y2][y3][x1][x2]}
inline ChannelPmf channel_pmf_from_json(const nlohmann::json& j, const DmcLimits& lim = {}) {
  const auto& s = j.at("sizes");
  ChannelPmf c;
  c.nx1 = s.at("x1").get<int>();
  c.nx2 = s.at("x2").get<int>();
  c.ny2 = s.at("y2").get<int>();
  c.ny3 = s.at("y3").get<int>();
  for (int n : {c.nx1, c.nx2, c.ny2, c.ny3}) detail::check_size(n, lim.max_alphabet, "channel JSON");
  c.p = detail::flat(j.at("p"), static_cast<std::size_t>(c.nx1 * c.nx2 * c.ny2 * c.ny3), "channel JSON");
  c.normalize(lim);
  return c;
}

inline nlohmann::json to_json(const ChannelPmf& c) {
  nlohmann::json p = nlohmann::json::array();
  for (int a = 0; a < c.ny2; ++a) {
    nlohmann::json pa = nlohmann::json::array();
    for (int b = 0; b < c.ny3; ++b) {
      nlohmann::json pb = nlohmann::json::array();
      for (int x1 = 0; x1 < c.nx1; ++x1) {
        nlohmann::json row = nlohmann::json::array();
        for (int x2 = 0; x2 < c.nx2; ++x2) row.push_back(c(a, b, x1, x2));
        pb.push_back(row);
      }
      pa.push_back(pb);
    }
    p.push_back(pa);
  }
  return {{"sizes", {{"x1", c.nx1}, {"x2", c.nx2}, {"y2", c.ny2}, {"y3", c.ny3}}}, {"p", p}};
}

/// {"sizes": {...}, "p_u": [u], "p_vwx_given_u": [u][v][w1][w3][x1], "p_x2_given_u": [u][x2]}
inline InputFactorization factorization_from_json(const nlohmann::json& j, const DmcLimits& lim = {}) {
  const auto& s = j.at("sizes");
  InputFactorization f;
  f.nu = detail::size_of(s, "u", 1);
  f.nv = detail::size_of(s, "v", 1);
  f.nw1 = detail::size_of(s, "w1", 1);
  f.nw3 = detail::size_of(s, "w3", 1);
  f.nx1 = s.at("x1").get<int>();
  f.nx2 = s.at("x2").get<int>();
  for (int n : {f.nu, f.nv, f.nw1, f.nw3}) detail::check_size(n, lim.max_auxiliary, "input JSON");
  for (int n : {f.nx1, f.nx2}) detail::check_size(n, lim.max_alphabet, "input JSON");
  f.pu = detail::flat(j.at("p_u"), static_cast<std::size_t>(f.nu), "p_u");
  f.pvwx_u = detail::flat(j.at("p_vwx_given_u"), static_cast<std::size_t>(f.nu * f.nv * f.nw1 * f.nw3 * f.nx1),
                          "p_vwx_given_u");
  f.px2_u = detail::flat(j.at("p_x2_given_u"), static_cast<std::size_t>(f.nu * f.nx2), "p_x2_given_u");
  f.normalize(lim);
  return f;
}

inline nlohmann::json to_json(const InputFactorization& f) {
  return {{"sizes", {{"u", f.nu}, {"v", f.nv}, {"w1", f.nw1}, {"w3", f.nw3}, {"x1", f.nx1}, {"x2", f.nx2}}},
          {"p_u", f.pu},
          {"p_vwx_given_u", f.pvwx_u},
          {"p_x2_given_u", f.px2_u}};
}

}  // namespace fdcap
