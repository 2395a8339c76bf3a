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
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "fdcap/channel_model.hpp"

namespace fdcap {

inline constexpr double kMembershipSlack = 1e-9;
inline constexpr std::size_t kMaxVertexHalfspaces = 64;

/// A rate tuple in R^2 or R^3.
class RatePoint {
 public:
  RatePoint() = default;
  explicit RatePoint(int dim) : dim_(dim) { check_dim(dim); }
  RatePoint(std::initializer_list<double> xs) : dim_(static_cast<int>(xs.size())) {
    check_dim(dim_);
    std::copy(xs.begin(), xs.end(), x_.begin());
  }

  int dim() const { return dim_; }
  double& operator[](int i) { return x_[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return x_[static_cast<std::size_t>(i)]; }
  const std::array<double, 3>& data() const { return x_; }

  friend bool operator<(const RatePoint& a, const RatePoint& b) {
    for (int i = 0; i < a.dim_; ++i)
      if (a[i] != b[i]) return a[i] < b[i];
    return false;
  }
  friend std::ostream& operator<<(std::ostream& os, const RatePoint& p) {
    os << '(';
    for (int i = 0; i < p.dim_; ++i) os << (i ? ", " : "") << p[i];
    return os << ')';
  }

 private:
  static void check_dim(int d) {
    if (d != 2 && d != 3) throw UsageError("rate points must have dimension 2 or 3");
  }
  int dim_ = 2;
  std::array<double, 3> x_{};
};

inline double dot(const std::array<double, 3>& w, const RatePoint& p) {
  double s = 0.0;
  for (int i = 0; i < p.dim(); ++i) s += w[static_cast<std::size_t>(i)] * p[i];
  return s;
}

inline double max_abs_diff(const RatePoint& a, const RatePoint& b) {
  double m = 0.0;
  for (int i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// w . r <= bound with w >= 0.
struct Halfspace {
  std::array<double, 3> weights{};
  double bound = 0.0;
};

/// Downward-closed polytope {r >= 0 : w_j . r <= h_j}.
class Polytope {
 public:
  Polytope() = default;
  explicit Polytope(int dim) : dim_(dim) {
    if (dim != 2 && dim != 3) throw UsageError("polytope dimension must be 2 or 3");
  }

  int dim() const { return dim_; }
  const std::vector<Halfspace>& halfspaces() const { return hs_; }
  std::size_t size() const { return hs_.size(); }

  Polytope& add(std::array<double, 3> w, double bound) {
    bool any = false;
    for (int i = 0; i < 3; ++i) {
      if (w[static_cast<std::size_t>(i)] < 0.0) throw DomainError("halfspace weights must be nonnegative");
      if (i >= dim_ && w[static_cast<std::size_t>(i)] != 0.0)
        throw UsageError("halfspace weight outside polytope dimension");
      any = any || w[static_cast<std::size_t>(i)] > 0.0;
    }
    if (!any) throw DomainError("halfspace needs a positive weight");
    if (!std::isfinite(bound)) throw DomainError("halfspace bound must be finite");
    hs_.push_back({w, bound});
    return *this;
  }

  /// A negative bound marks the polytope as empty.
  bool empty() const {
    return std::any_of(hs_.begin(), hs_.end(), [](const Halfspace& h) { return h.bound < 0.0; });
  }

  bool contains(const RatePoint& p, double slack = kMembershipSlack) const {
    if (p.dim() != dim_) throw UsageError("dimension mismatch");
    for (int i = 0; i < dim_; ++i)
      if (p[i] < -slack) return false;
    for (const auto& h : hs_)
      if (dot(h.weights, p) > h.bound + slack) return false;
    return true;
  }

  static Polytope box(std::initializer_list<double> caps) {
    Polytope p(static_cast<int>(caps.size()));
    int i = 0;
    for (double c : caps) {
      std::array<double, 3> w{};
      w[static_cast<std::size_t>(i++)] = 1.0;
      p.add(w, c);
    }
    return p;
  }

 private:
  int dim_ = 2;
  std::vector<Halfspace> hs_;
};

/// Union of polytopes, optionally replaced by its support-function hull.
class RateRegion {
 public:
  RateRegion() = default;
  explicit RateRegion(int dim) : dim_(dim) {
    if (dim != 2 && dim != 3) throw UsageError("region dimension must be 2 or 3");
  }
  RateRegion(Polytope p) : dim_(p.dim()) { add(std::move(p)); }  // NOLINT

  int dim() const { return dim_; }
  const std::vector<Polytope>& polytopes() const { return polytopes_; }
  bool hull_enabled() const { return hull_ != nullptr; }
  std::size_t hull_directions() const { return hull_directions_; }

  RateRegion& add(Polytope p) {
    if (p.dim() != dim_) throw UsageError("polytope dimension does not match region");
    polytopes_.push_back(std::move(p));
    hull_.reset();
    return *this;
  }

  RateRegion& merge(const RateRegion& other) {
    for (const auto& p : other.polytopes_) add(p);
    return *this;
  }

  bool empty() const {
    return std::all_of(polytopes_.begin(), polytopes_.end(), [](const Polytope& p) { return p.empty(); });
  }

  /// Polytopes used for geometric queries: the hull if enabled, else the
  /// nonempty members.
  std::vector<const Polytope*> effective() const {
    std::vector<const Polytope*> out;
    if (hull_) {
      out.push_back(hull_.get());
      return out;
    }
    for (const auto& p : polytopes_)
      if (!p.empty()) out.push_back(&p);
    return out;
  }

  void set_hull(std::shared_ptr<const Polytope> hull, std::size_t directions) {
    hull_ = std::move(hull);
    hull_directions_ = directions;
  }
  const Polytope* hull() const { return hull_.get(); }

 private:
  int dim_ = 2;
  std::vector<Polytope> polytopes_;
  std::shared_ptr<const Polytope> hull_;
  std::size_t hull_directions_ = 0;
};

inline bool membership(const RateRegion& region, const RatePoint& p, double slack = kMembershipSlack) {
  if (p.dim() != region.dim()) throw UsageError("membership: dimension mismatch");
  for (const Polytope* poly : region.effective())
    if (poly->contains(p, slack)) return true;
  return false;
}

namespace detail {

inline double feas_tol(double bound) { return 1e-9 * std::max(1.0, std::abs(bound)); }

// Solves the k x k system A x = b (k <= 3) by Cramer's rule.
inline std::optional<std::array<double, 3>> solve_small(int k, const std::array<std::array<double, 3>, 3>& A,
                                                        const std::array<double, 3>& b) {
  auto det2 = [](double a, double bb, double c, double d) { return a * d - bb * c; };
  std::array<double, 3> x{};
  if (k == 2) {
    const double D = det2(A[0][0], A[0][1], A[1][0], A[1][1]);
    if (std::abs(D) < 1e-14) return std::nullopt;
    x[0] = det2(b[0], A[0][1], b[1], A[1][1]) / D;
    x[1] = det2(A[0][0], b[0], A[1][0], b[1]) / D;
    return x;
  }
  auto det3 = [](const std::array<std::array<double, 3>, 3>& M) {
    return M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
           M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
  };
  const double D = det3(A);
  if (std::abs(D) < 1e-14) return std::nullopt;
  for (int c = 0; c < 3; ++c) {
    auto M = A;
    for (int r = 0; r < 3; ++r) M[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = b[static_cast<std::size_t>(r)];
    x[static_cast<std::size_t>(c)] = det3(M) / D;
  }
  return x;
}

inline void sort_unique(std::vector<RatePoint>& pts, double tol) {
  std::sort(pts.begin(), pts.end());
  std::vector<RatePoint> out;
  out.reserve(pts.size());
  for (const auto& p : pts) {
    bool dup = false;
    // per-coordinate relative tolerance, so one huge cap cannot merge small vertices
    auto near = [&](const RatePoint& q) {
      for (int i = 0; i < p.dim(); ++i)
        if (std::abs(p[i] - q[i]) > tol * (1.0 + std::abs(p[i]))) return false;
      return true;
    };
    for (auto it = out.rbegin(); it != out.rend(); ++it) {
      if (p[0] - (*it)[0] > tol * (1.0 + std::abs(p[0]))) break;
      if (near(*it)) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(p);
  }
  pts.swap(out);
}

}  // namespace detail

/// Extreme points of a polytope intersected with the nonnegative orthant.
inline std::vector<RatePoint> vertices(const Polytope& poly) {
  std::vector<RatePoint> out;
  if (poly.empty()) return out;
  if (poly.size() > kMaxVertexHalfspaces) throw UsageError("vertices: too many halfspaces");
  const int k = poly.dim();
  std::vector<Halfspace> planes = poly.halfspaces();
  for (int i = 0; i < k; ++i) {
    Halfspace axis;
    axis.weights[static_cast<std::size_t>(i)] = 1.0;
    axis.bound = 0.0;
    planes.push_back(axis);
  }
  const std::size_t n = planes.size();
  double scale = 1.0;
  for (const auto& h : poly.halfspaces()) scale = std::max(scale, std::abs(h.bound));

  auto try_point = [&](const std::array<std::size_t, 3>& idx) {
    std::array<std::array<double, 3>, 3> A{};
    std::array<double, 3> b{};
    for (int r = 0; r < k; ++r) {
      A[static_cast<std::size_t>(r)] = planes[idx[static_cast<std::size_t>(r)]].weights;
      b[static_cast<std::size_t>(r)] = planes[idx[static_cast<std::size_t>(r)]].bound;
    }
    auto x = detail::solve_small(k, A, b);
    if (!x) return;
    RatePoint p(k);
    for (int i = 0; i < k; ++i) {
      double v = (*x)[static_cast<std::size_t>(i)];
      if (v < -1e-9 * scale) return;
      p[i] = std::max(0.0, v);
    }
    for (const auto& h : poly.halfspaces())
      if (dot(h.weights, p) > h.bound + detail::feas_tol(h.bound)) return;
    out.push_back(p);
  };

  if (k == 2) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) try_point({i, j, 0});
  } else {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        for (std::size_t l = j + 1; l < n; ++l) try_point({i, j, l});
  }
  detail::sort_unique(out, 1e-9);
  return out;
}

/// Largest t >= 0 with base + t*dir inside the polytope; nullopt when base is
/// outside. dir must be nonnegative and nonzero.
inline std::optional<double> max_along_ray(const Polytope& poly, const RatePoint& base, const RatePoint& dir) {
  if (!poly.contains(base)) return std::nullopt;
  double t = std::numeric_limits<double>::infinity();
  for (const auto& h : poly.halfspaces()) {
    const double wd = dot(h.weights, dir);
    if (wd <= 0.0) continue;
    t = std::min(t, std::max(0.0, (h.bound - dot(h.weights, base)) / wd));
  }
  if (!std::isfinite(t)) throw DomainError("max_along_ray: unbounded polytope");
  return t;
}

/// Largest t with base + t*dir in the region (union or hull); nullopt when no
/// member contains base.
inline std::optional<double> max_along_ray(const RateRegion& region, const RatePoint& base, const RatePoint& dir) {
  std::optional<double> best;
  for (const Polytope* p : region.effective()) {
    auto t = max_along_ray(*p, base, dir);
    if (t && (!best || *t > *best)) best = t;
  }
  return best;
}

/// Ray exit from the origin along dir >= 0; 0 for an empty polytope.
inline double exit_from_origin(const Polytope& poly, const RatePoint& dir) {
  double t = std::numeric_limits<double>::infinity();
  for (const auto& h : poly.halfspaces()) {
    const auto& w = h.weights;
    const double wd = w[0] * dir[0] + w[1] * dir[1] + (dir.dim() == 3 ? w[2] * dir[2] : 0.0);
    if (wd > 0.0) t = std::min(t, h.bound / wd);
  }
  if (!std::isfinite(t)) throw DomainError("exit_from_origin: unbounded polytope");
  return std::max(0.0, t);
}

inline double exit_from_origin(const RateRegion& region, const RatePoint& dir) {
  double best = 0.0;
  for (const Polytope* p : region.effective()) best = std::max(best, exit_from_origin(*p, dir));
  return best;
}

/// max w . r over the region's member polytopes (hull has the same support).
inline double support_value(const RateRegion& region, const std::array<double, 3>& w) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& p : region.polytopes()) {
    if (p.empty()) continue;
    for (const auto& v : vertices(p)) best = std::max(best, dot(w, v));
  }
  return best;
}

/// Largest t with t * mask in the region; e.g. mask (1,1,1) gives the
/// symmetric rate.
inline double symmetric_rate(const RateRegion& region, const RatePoint& mask) {
  if (region.empty()) return 0.0;
  return exit_from_origin(region, mask);
}

inline double symmetric_rate(const RateRegion& region) {
  RatePoint mask(region.dim());
  for (int i = 0; i < region.dim(); ++i) mask[i] = 1.0;
  return symmetric_rate(region, mask);
}

/// Nonnegative unit directions: a quarter-circle fan in 2D, a triangular grid
/// on the simplex in 3D (smallest grid with at least `count` directions).
inline std::vector<RatePoint> direction_fan(int dim, std::size_t count) {
  std::vector<RatePoint> dirs;
  if (dim == 2) {
    count = std::max<std::size_t>(count, 2);
    for (std::size_t i = 0; i < count; ++i) {
      const double th = static_cast<double>(i) * (M_PI / 2.0) / static_cast<double>(count - 1);
      RatePoint d(2);
      d[0] = std::cos(th);
      d[1] = std::sin(th);
      if (i == 0) d[1] = 0.0;
      if (i == count - 1) d[0] = 0.0;
      dirs.push_back(d);
    }
    return dirs;
  }
  if (dim != 3) throw UsageError("direction_fan: dimension must be 2 or 3");
  std::size_t m = 1;
  while ((m + 1) * (m + 2) / 2 < count) ++m;
  for (std::size_t i = 0; i <= m; ++i)
    for (std::size_t j = 0; i + j <= m; ++j) {
      const std::size_t l = m - i - j;
      RatePoint d(3);
      d[0] = static_cast<double>(i);
      d[1] = static_cast<double>(j);
      d[2] = static_cast<double>(l);
      const double nrm = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
      for (int c = 0; c < 3; ++c) d[c] /= nrm;
      dirs.push_back(d);
    }
  return dirs;
}

inline std::size_t default_directions(int dim) { return dim == 2 ? 64 : 512; }

namespace detail {

// Sweep in decreasing R1 with a (R2, R3) staircase; O(n log n).
inline std::vector<RatePoint> pareto_filter(std::vector<RatePoint> pts) {
  constexpr double eps = 1e-12;
  std::sort(pts.begin(), pts.end(), [](const RatePoint& a, const RatePoint& b) { return b < a; });
  auto z = [](const RatePoint& p) { return p.dim() == 3 ? p[2] : 0.0; };
  std::map<double, double> stair;  // R2 -> R3, R3 strictly decreasing in R2
  std::vector<RatePoint> keep;
  for (const auto& p : pts) {
    const double y = p[1], w = z(p);
    auto it = stair.lower_bound(y - eps);
    if (it != stair.end() && it->second >= w - eps) continue;
    keep.push_back(p);
    // drop steps now covered by p
    auto lo = stair.upper_bound(y);
    while (lo != stair.begin()) {
      auto prev = std::prev(lo);
      if (prev->second > w) break;
      lo = stair.erase(prev);
    }
    auto [pos, fresh] = stair.try_emplace(y, w);
    if (!fresh) pos->second = std::max(pos->second, w);
  }
  return keep;
}

// Normals of the exact downward-closed hull of a small point set, found by
// brute force over point pairs (2D) or triples and pair-axis planes (3D).
inline std::vector<std::array<double, 3>> facet_normals(const std::vector<RatePoint>& pts) {
  std::vector<std::array<double, 3>> out;
  if (pts.empty()) return out;
  const int k = pts[0].dim();
  const std::size_t n = pts.size();
  double scale = 1.0;
  for (const auto& p : pts)
    for (int i = 0; i < k; ++i) scale = std::max(scale, std::abs(p[i]));

  auto accept = [&](std::array<double, 3> w, const RatePoint& on) {
    double nrm = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
    if (nrm < 1e-12 * scale * scale) return;
    bool pos = true, neg = true;
    for (int i = 0; i < k; ++i) {
      pos = pos && w[static_cast<std::size_t>(i)] >= -1e-12 * nrm;
      neg = neg && w[static_cast<std::size_t>(i)] <= 1e-12 * nrm;
    }
    if (!pos && !neg) return;
    for (auto& c : w) c = (pos ? c : -c) / nrm;
    for (auto& c : w) c = std::max(0.0, c);
    const double h = dot(w, on);
    for (const auto& q : pts)
      if (dot(w, q) > h + 1e-10 * scale) return;
    out.push_back(w);
  };

  if (k == 2) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double dx = pts[j][0] - pts[i][0], dy = pts[j][1] - pts[i][1];
        accept({-dy, dx, 0.0}, pts[i]);
      }
    return out;
  }
  auto cross = [](const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return std::array<double, 3>{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
  };
  auto diff = [](const RatePoint& a, const RatePoint& b) {
    return std::array<double, 3>{a[0] - b[0], a[1] - b[1], a[2] - b[2]};
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto dij = diff(pts[j], pts[i]);
      for (int ax = 0; ax < 3; ++ax) {
        std::array<double, 3> e{};
        e[static_cast<std::size_t>(ax)] = 1.0;
        accept(cross(dij, e), pts[i]);
      }
      for (std::size_t l = j + 1; l < n; ++l) accept(cross(dij, diff(pts[l], pts[i])), pts[i]);
    }
  return out;
}

inline constexpr std::size_t kExactHullPoints2 = 400;
inline constexpr std::size_t kExactHullPoints3 = 40;

}  // namespace detail

/// Support-function hull of the union of all member polytopes of `regions`.
/// The fan is augmented with exact facet normals when the Pareto vertex set is
/// small enough for brute force.
inline RateRegion support_hull(std::span<const RateRegion> regions, std::size_t directions) {
  if (regions.empty()) throw UsageError("support_hull: no regions");
  const int dim = regions[0].dim();
  std::vector<RatePoint> pts;
  for (const auto& r : regions) {
    if (r.dim() != dim) throw UsageError("support_hull: dimension mismatch");
    for (const auto& p : r.polytopes()) {
      auto v = vertices(p);
      pts.insert(pts.end(), v.begin(), v.end());
    }
  }
  RateRegion out(dim);
  for (const auto& r : regions) out.merge(r);
  if (pts.empty()) return out;

  std::vector<std::array<double, 3>> normals;
  for (const auto& d : direction_fan(dim, directions)) normals.push_back(d.data());
  if (pts.size() <= 5000) {
    pts = detail::pareto_filter(std::move(pts));
    const std::size_t cap = dim == 2 ? detail::kExactHullPoints2 : detail::kExactHullPoints3;
    if (pts.size() <= cap) {
      auto extra = detail::facet_normals(pts);
      normals.insert(normals.end(), extra.begin(), extra.end());
    }
  }
  auto hull = std::make_shared<Polytope>(dim);
  for (const auto& w : normals) {
    double h = -std::numeric_limits<double>::infinity();
    for (const auto& p : pts) h = std::max(h, dot(w, p));
    hull->add(w, std::max(0.0, h));
  }
  out.set_hull(std::move(hull), directions);
  return out;
}

inline RateRegion support_hull(const RateRegion& region, std::size_t directions) {
  return support_hull(std::span<const RateRegion>(&region, 1), directions);
}

// ---- constant gap ----

/// Smallest delta >= 0 with ((r_i - delta)^+) inside the halfspace;
/// +inf when the bound is negative.
inline double shift_threshold(const Halfspace& h, const RatePoint& r) {
  if (h.bound < 0.0) return std::numeric_limits<double>::infinity();
  std::array<std::pair<double, double>, 3> act{};  // (r_i, w_i) with w_i > 0 and r_i > 0
  int m = 0;
  double f0 = 0.0;
  for (int i = 0; i < r.dim(); ++i) {
    const double w = h.weights[static_cast<std::size_t>(i)];
    if (w > 0.0 && r[i] > 0.0) {
      act[static_cast<std::size_t>(m++)] = {r[i], w};
      f0 += w * r[i];
    }
  }
  if (f0 <= h.bound) return 0.0;
  std::sort(act.begin(), act.begin() + m, [](auto a, auto b) { return a.first > b.first; });
  // Active set is the top k coordinates on delta in [r_(k+1), r_(k)].
  double S = 0.0, W = 0.0;
  for (int k = 0; k < m; ++k) {
    S += act[static_cast<std::size_t>(k)].second * act[static_cast<std::size_t>(k)].first;
    W += act[static_cast<std::size_t>(k)].second;
    const double lo = (k + 1 < m) ? act[static_cast<std::size_t>(k + 1)].first : 0.0;
    if (S - W * lo >= h.bound) return std::max(lo, (S - h.bound) / W);
  }
  return 0.0;
}

/// Per-polytope threshold; stops early once it reaches `stop`.
inline double shift_threshold(const Polytope& p, const RatePoint& r,
                              double stop = std::numeric_limits<double>::infinity()) {
  double d = 0.0;
  for (const auto& h : p.halfspaces()) {
    d = std::max(d, shift_threshold(h, r));
    if (d >= stop) break;
  }
  return d;
}

/// Minimal delta with ((r - delta)^+) in the region.
inline double shift_threshold(const RateRegion& region, const RatePoint& r) {
  double d = std::numeric_limits<double>::infinity();
  for (const Polytope* p : region.effective()) d = std::min(d, shift_threshold(*p, r));
  return d;
}

struct GapResult {
  double delta = 0.0;
  RatePoint witness;
  std::optional<double> lambda_star;
  std::optional<double> rho_star;
};

struct GapOptions {
  std::size_t ray_directions = 0;  // 0 selects default_directions(dim)
};

/// Candidate outer boundary points: member vertices plus ray exits, Pareto-filtered.
inline std::vector<RatePoint> boundary_samples(const RateRegion& outer, std::size_t ray_directions) {
  std::vector<RatePoint> cand;
  for (const auto& p : outer.polytopes()) {
    auto v = vertices(p);
    cand.insert(cand.end(), v.begin(), v.end());
  }
  const std::size_t nd = ray_directions ? ray_directions : default_directions(outer.dim());
  const auto dirs = direction_fan(outer.dim(), nd);
  std::vector<double> exit(dirs.size(), 0.0);
  for (const Polytope* p : outer.effective()) {
    for (std::size_t k = 0; k < dirs.size(); ++k) exit[k] = std::max(exit[k], exit_from_origin(*p, dirs[k]));
  }
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    RatePoint q(outer.dim());
    for (int i = 0; i < q.dim(); ++i) q[i] = exit[k] * dirs[k][i];
    cand.push_back(q);
  }
  // The shift threshold is monotone in r, so dominated samples never win.
  return detail::pareto_filter(std::move(cand));
}

/// max over sampled outer boundary points of the per-point shift threshold.
/// The per-point threshold is solved exactly per halfspace.
/// Same, over precomputed boundary samples.
inline GapResult constant_gap_over(std::span<const RatePoint> cand, const RateRegion& inner) {
  if (inner.empty()) throw DomainError("constant_gap: inner region is empty (unbounded gap)");
  const auto inner_polys = inner.effective();

  GapResult res;
  res.delta = -1.0;
  res.witness = RatePoint(inner.dim());
  std::size_t hint = 0;
  for (const auto& r : cand) {
    // Max-min with early exit: any inner polytope below the record settles r.
    double local = std::numeric_limits<double>::infinity();
    const double cut = res.delta - 1e-12;
    auto visit = [&](std::size_t idx) {
      const double d = shift_threshold(*inner_polys[idx], r, local);
      if (d < local) {
        local = d;
        hint = idx;
      }
      return local < cut;
    };
    bool settled = visit(hint);
    for (std::size_t i = 0; i < inner_polys.size() && !settled; ++i)
      if (i != hint) settled = visit(i);
    if (settled) continue;
    if (local > res.delta + 1e-12) {
      res.delta = local;
      res.witness = r;
    } else if (std::abs(local - res.delta) <= 1e-12 && r < res.witness) {
      res.witness = r;
    }
  }
  res.delta = std::max(0.0, res.delta);
  return res;
}

inline GapResult constant_gap(const RateRegion& outer, const RateRegion& inner, const GapOptions& opt = {}) {
  if (outer.dim() != inner.dim()) throw UsageError("constant_gap: dimension mismatch");
  if (inner.empty()) throw DomainError("constant_gap: inner region is empty (unbounded gap)");
  if (outer.empty()) throw UsageError("constant_gap: outer region is empty");
  return constant_gap_over(boundary_samples(outer, opt.ray_directions), inner);
}

/// Reference implementation: bisection on delta with membership tests.
inline double shift_threshold_bisect(const RateRegion& inner, const RatePoint& r, double tol = 1e-4) {
  auto shifted = [&](double d) {
    RatePoint q(r.dim());
    for (int i = 0; i < r.dim(); ++i) q[i] = std::max(0.0, r[i] - d);
    return membership(inner, q);
  };
  if (shifted(0.0)) return 0.0;
  double lo = 0.0, hi = 0.0;
  for (int i = 0; i < r.dim(); ++i) hi = std::max(hi, r[i]);
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (shifted(mid) ? hi : lo) = mid;
  }
  return hi;
}

// ---- CSV dump ----

inline void write_region_csv(std::ostream& os, const RateRegion& region) {
  os << "polytope_id,R1,R2" << (region.dim() == 3 ? ",R3" : "") << '\n';
  std::size_t id = 0;
  for (const auto& p : region.polytopes()) {
    for (const auto& v : vertices(p)) {
      os << id;
      for (int i = 0; i < v.dim(); ++i) os << ',' << v[i];
      os << '\n';
    }
    ++id;
  }
}

}  // namespace fdcap
