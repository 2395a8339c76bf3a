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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "support.hpp"

namespace {

using namespace fdcap;
using fdcap::testing::random_scalar;
using fdcap::testing::random_split;
using fdcap::testing::same_vertex_set;
using fdcap::testing::vertices_inside;

constexpr std::array<double, 3> W1{1, 0, 0}, W2{0, 1, 0}, W3{0, 0, 1}, W12{1, 1, 0}, W13{1, 0, 1}, W23{0, 1, 1},
    W123{1, 1, 1};

// Tightest bound among halfspaces with exactly these weights.
double bound_of(const Polytope& p, std::array<double, 3> w) {
  double b = std::numeric_limits<double>::infinity();
  for (const auto& h : p.halfspaces())
    if (h.weights == w) b = std::min(b, h.bound);
  return b;
}

double C(double x) { return std::log2(1.0 + x); }

ScalarChannel unit_channel(double g21sq, double g31sq, double g32sq) {
  return ScalarChannel::from_ratios(g21sq, g31sq, g32sq);
}

TEST(Validation, ParameterRanges) {
  EXPECT_THROW((SchemeParams{0.5, 0.4, 0.2, 0, 1}.validate()), DomainError);
  EXPECT_THROW((SchemeParams{0, 1, 0, 0.5, 0.6}.validate()), DomainError);
  EXPECT_THROW((SchemeParams{-0.1, 1, 0, 0, 1}.validate()), DomainError);
  EXPECT_THROW((ConverseParams{1.1, 1, 1}.validate()), DomainError);
  EXPECT_THROW((ConverseParams{0, -0.1, 1}.validate()), DomainError);
  const auto ch = unit_channel(1, 1, 1);
  EXPECT_THROW(inner_no_d2d(ch, {0.6, 0.6, 0, 0, 1}), DomainError);
  EXPECT_THROW(outer_d2d(ch, {0, 2, 0}), DomainError);
}

TEST(InnerNoD2d, HandPlugged) {
  const auto ch = unit_channel(1, 1, 1);
  const auto p = inner_no_d2d(ch, {0, 1, 0, 0, 1});
  EXPECT_NEAR(bound_of(p, W1), 1.0, 1e-15);
  EXPECT_NEAR(bound_of(p, W2), 1.0, 1e-15);
  EXPECT_NEAR(bound_of(p, W12), std::log2(3.0), 1e-15);

  EXPECT_EQ(bound_of(inner_no_d2d(ch, {0, 0, 0, 0, 1}), W1), 0.0);

  ScalarChannel g;
  g.g21 = 0.7;
  g.g31 = {0.0, 1.3};
  g.g32 = {-0.4, 0.9};
  g.P1 = 2.0;
  g.P2 = 3.0;
  g.sigma2 = 0.5;
  const auto q = inner_no_d2d(g, {1, 0, 0, 1, 0});
  EXPECT_EQ(bound_of(q, W2), 0.0);
  const double J = 2 * std::abs(g.g31 * g.g32) * std::sqrt(g.P1 * g.P2);
  const double want = C((std::norm(g.g31) * g.P1 + std::norm(g.g32) * g.P2 + J) / g.sigma2);
  EXPECT_NEAR(bound_of(q, W12), want, 1e-12);
}

TEST(CapacityVeryStrong, Threshold) {
  const auto box = capacity_very_strong(unit_channel(1, 2, 1));
  ASSERT_TRUE(box.has_value());
  EXPECT_TRUE(same_vertex_set(*box, Polytope::box({1.0, 1.0}), 1e-15));
  EXPECT_FALSE(capacity_very_strong(unit_channel(1, 1.9, 1)).has_value());
  // g32 = 0 leaves |g31| >= |g21|
  EXPECT_TRUE(capacity_very_strong(unit_channel(1, 1, 0)).has_value());
  EXPECT_FALSE(capacity_very_strong(unit_channel(1, 0.99, 0)).has_value());
}

TEST(CapacityVeryStrong, SchemeReachesTheBox) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const double snr = std::pow(10.0, 3 * u(rng)), s2 = std::pow(10.0, 3 * u(rng));
    const double inr = snr * (1 + s2) * std::pow(10.0, u(rng));
    const auto ch = unit_channel(snr, inr, s2);
    const auto box = capacity_very_strong(ch);
    ASSERT_TRUE(box.has_value());
    const auto p = inner_no_d2d(ch, {0, 1, 0, 0, 1});
    EXPECT_TRUE(same_vertex_set(p, *box, 1e-9 * (1 + C(inr))));
    for (const auto& v : vertices(p)) EXPECT_LE(v[0] + v[1], bound_of(p, W12) + 1e-12);
  }
}

TEST(InnerD2dSplit, HandPlugged) {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 20; ++k) {
    const auto ch = random_scalar(rng);
    auto sp = random_split(rng);
    sp.b += sp.c;
    sp.c = 0;
    const auto p = inner_d2d_split(ch, sp);
    EXPECT_NEAR(bound_of(p, W13), bound_of(p, W1), 1e-12);
  }
  const auto p = inner_d2d_split(unit_channel(3, 1, 1), {0, 1, 0, 0, 1});
  EXPECT_NEAR(bound_of(p, W1), 2.0, 1e-15);
  EXPECT_EQ(bound_of(inner_d2d_split(unit_channel(3, 1, 1), {0, 1, 0, 1, 0}), W2), 0.0);
}

TEST(InnerUplinkSplit, SliceEqualsNoD2d) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 20; ++k) {
    const auto ch = random_scalar(rng);
    const auto sp = random_split(rng);
    const auto slice = slice_r3_zero(inner_uplink_split(ch, sp));
    EXPECT_TRUE(same_vertex_set(slice, inner_no_d2d(ch, sp), 1e-9)) << "case " << k;
  }
}

TEST(InnerUplinkSplit, HandPlugged) {
  ScalarChannel ch = unit_channel(2, 5, 3);
  EXPECT_NEAR(bound_of(inner_uplink_split(ch, {0, 0, 1, 0, 1}), W2), C(3.0 / 6.0), 1e-15);
  EXPECT_EQ(bound_of(inner_uplink_split(ch, {0, 1, 0, 1, 0}), W2), 0.0);
}

TEST(OuterNoD2d, HandPlugged) {
  const auto ch = unit_channel(4, 9, 2);
  const auto p = outer_no_d2d(ch, {0, 1, 1});
  EXPECT_NEAR(bound_of(p, W1), C(4), 1e-15);
  EXPECT_NEAR(bound_of(p, W2), C(2), 1e-15);
  for (double rho : {-1.0, 1.0}) {
    const auto q = outer_no_d2d(ch, {rho, 1, 1});
    EXPECT_EQ(bound_of(q, W1), 0.0);
    EXPECT_EQ(bound_of(q, W2), 0.0);
  }
  const auto s = unit_channel(10, 10, 1);
  const double tail = bound_of(outer_no_d2d(s, {0, 1, 1}), W12) - C(10 + 1);
  EXPECT_NEAR(tail, C(10.0 / 11.0), 1e-12);
  EXPECT_LE(tail, 1.0);
}

TEST(OuterNoD2d, ContainsInnerAtMatchedCorrelation) {
  // The inner point with fractions (a, d) has input correlation sqrt(ad).
  std::mt19937_64 rng(6);
  for (int k = 0; k < 500; ++k) {
    const auto ch = random_scalar(rng);
    const auto sp = random_split(rng);
    const RateRegion outer(outer_no_d2d(ch, {std::sqrt(sp.a * sp.d), 1, 1}));
    EXPECT_TRUE(vertices_inside(inner_no_d2d(ch, sp), outer, 1e-9)) << "case " << k;
  }
}

TEST(OuterNoD2d, UnionContainsInnerGrid) {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 10; ++k) {
    const auto ch = random_scalar(rng);
    const auto outer = outer_no_d2d_union(ch, linspace(-1.0, 1.0, 401));
    for (const auto& sp : scheme_grid(11)) {
      for (const auto& v : vertices(inner_no_d2d(ch, sp))) {
        // grid error in rho is first order; allow it
        EXPECT_TRUE(membership(outer, v, 2e-2)) << v;
      }
    }
  }
}

TEST(OuterD2d, HandPlugged) {
  const auto ch = unit_channel(4, 9, 2);
  // alpha = 0: R3 <= C(0)
  EXPECT_EQ(bound_of(outer_d2d(ch, {0.3, 0, 1}), W3), 0.0);
  // beta = 0: R1 <= C(0)
  EXPECT_EQ(bound_of(outer_d2d(ch, {0.3, 1, 0}), W1), 0.0);
  EXPECT_NEAR(bound_of(outer_d2d(ch, {0, 1, 1}), W13), C(4 + 9), 1e-15);
}

TEST(OuterRelaxed, HandPlugged) {
  const auto dead = outer_relaxed(unit_channel(3, 0, 2));
  EXPECT_NEAR(bound_of(dead, W13), bound_of(dead, W1), 1e-15);
  EXPECT_NEAR(bound_of(outer_relaxed(unit_channel(1, 5, 2)), W1), 1.0, 1e-15);
  const auto ch = unit_channel(1, 3, 2);
  const double coh = C(3 + 2 + ch.j_norm());
  EXPECT_NEAR(bound_of(outer_relaxed(ch), W123) - coh, std::log2(1.25), 1e-12);
}

TEST(OuterRelaxed, ContainsOuterD2dFamily) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const auto ch = random_scalar(rng);
    const ConverseParams cp{2 * u(rng) - 1, u(rng), u(rng)};
    EXPECT_TRUE(vertices_inside(outer_d2d(ch, cp), RateRegion(outer_relaxed(ch)), 1e-9)) << "case " << k;
  }
}

TEST(Cutset, DropsTheSumConstraint) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const auto ch = random_scalar(rng);
    const ConverseParams cp{u(rng), 1, 1};
    const auto cut = cutset_no_d2d(ch, cp), out = outer_no_d2d(ch, cp);
    EXPECT_EQ(bound_of(cut, W1), bound_of(out, W1));
    EXPECT_EQ(bound_of(cut, W2), bound_of(out, W2));
    EXPECT_EQ(bound_of(cut, W12), std::numeric_limits<double>::infinity());
    EXPECT_TRUE(vertices_inside(out, RateRegion(cut)));
  }
  EXPECT_TRUE(same_vertex_set(cutset_no_d2d(unit_channel(1, 7, 1), {0, 1, 1}), Polytope::box({1, 1}), 1e-15));
}

TEST(HalfDuplex, TimeSharing) {
  const auto ch = unit_channel(3, 1, 3);
  const RateRegion hd(baseline_half_duplex(ch, false));
  EXPECT_TRUE(membership(hd, {2.0, 0.0}));
  EXPECT_FALSE(membership(hd, {2.0 + 1e-6, 0.0}));
  EXPECT_TRUE(membership(hd, {1.0, 1.0}));
  EXPECT_FALSE(membership(hd, {1.0 + 1e-6, 1.0}));
}

TEST(HalfDuplex, SymmetricRateMatchesTauSweep) {
  std::mt19937_64 rng(10);
  for (int k = 0; k < 50; ++k) {
    const auto ch = random_scalar(rng);
    const bool d2d = k % 2;
    const double c1 = C(ch.snr()), c2 = C(ch.snr_dl()), c3 = C(ch.inr());
    double best = 0.0;
    for (int i = 0; i <= 400; ++i)
      for (int j = 0; i + j <= 400; ++j) {
        const double t1 = i / 400.0, t2 = j / 400.0, t3 = 1 - t1 - t2;
        const double r = d2d ? std::min({t1 * c1, t2 * c2, t3 * c3}) : std::min(t1 * c1, (1 - t1) * c2);
        best = std::max(best, r);
        if (!d2d) break;
      }
    const double exact = d2d ? 1.0 / (1 / c1 + 1 / c2 + 1 / c3) : 1.0 / (1 / c1 + 1 / c2);
    const double got = symmetric_rate(RateRegion(baseline_half_duplex(ch, d2d)));
    EXPECT_NEAR(got, exact, 1e-9 * (1 + exact));
    EXPECT_GE(got + 1e-12, best);
    EXPECT_LE(got - best, 0.02 * (c1 + c2 + c3));
  }
}

TEST(Tin, Box) {
  EXPECT_TRUE(same_vertex_set(baseline_tin(unit_channel(3, 0, 7)), Polytope::box({2, 3}), 1e-15));
  EXPECT_LT(bound_of(baseline_tin(unit_channel(3, 1e12, 7)), W2), 1e-10);
  EXPECT_TRUE(same_vertex_set(baseline_tin(unit_channel(1, 1, 3)), Polytope::box({1, C(1.5)}), 1e-15));
}

TEST(Tin, InsideUplinkSplitFamily) {
  // TIN is the uplink split with the whole uplink private (c = e = 1)
  std::mt19937_64 rng(11);
  for (int k = 0; k < 100; ++k) {
    const auto ch = random_scalar(rng);
    const RateRegion split(slice_r3_zero(inner_uplink_split(ch, {0, 0, 1, 0, 1})));
    EXPECT_TRUE(vertices_inside(baseline_tin(ch), split));
    EXPECT_TRUE(vertices_inside(baseline_tin(ch), RateRegion(inner_no_d2d(ch, {0, 0, 1, 0, 1}))));
  }
}

TEST(SplitNoRelay, Construction) {
  std::mt19937_64 rng(12);
  for (int k = 0; k < 20; ++k) {
    const auto ch = random_scalar(rng);
    auto sp = random_split(rng);
    sp.b += sp.a;
    sp.a = 0;
    sp.e = 1;
    sp.d = 0;
    EXPECT_TRUE(same_vertex_set(baseline_split_no_relay(ch, sp), inner_no_d2d(ch, sp), 0.0));
  }
  const auto ch = unit_channel(2, 3, 5);
  EXPECT_NEAR(bound_of(baseline_split_no_relay(ch, {0, 1, 0, 0, 1}), W12), C(3 + 5), 1e-15);
  EXPECT_THROW(baseline_split_no_relay(ch, {0.1, 0.9, 0, 0, 1}), UsageError);
  EXPECT_THROW(baseline_split_no_relay(ch, {0, 1, 0, 0.1, 0.9}), UsageError);
}

TEST(SplitNoRelay, InsideFullGrid) {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 10; ++k) {
    const auto ch = random_scalar(rng);
    const auto full = union_over(2, scheme_grid(11), [&](const SchemeParams& sp) { return inner_no_d2d(ch, sp); });
    for (const auto& sp : split_no_relay_grid(11))
      EXPECT_TRUE(vertices_inside(baseline_split_no_relay(ch, sp), full));
  }
}

TEST(DecodeForward, Construction) {
  const auto ch = unit_channel(3, 2, 5);
  EXPECT_NEAR(bound_of(baseline_decode_forward(ch, {0, 1, 0, 0, 1}), W13), C(3), 1e-15);
  EXPECT_EQ(bound_of(baseline_decode_forward(ch, {1, 0, 0, 0, 1}), W13), 0.0);
  EXPECT_THROW(baseline_decode_forward(ch, {0, 0.5, 0.5, 0, 1}), UsageError);
  std::mt19937_64 rng(14);
  for (int k = 0; k < 10; ++k) {
    const auto c = random_scalar(rng);
    const auto full = union_over(3, scheme_grid(11), [&](const SchemeParams& sp) { return inner_uplink_split(c, sp); });
    for (const auto& sp : decode_forward_grid(11)) EXPECT_TRUE(vertices_inside(baseline_decode_forward(c, sp), full));
  }
}

TEST(Bounds, NonnegativeAndFinite) {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 300; ++k) {
    auto ch = random_scalar(rng, -30, 60);
    if (k % 7 == 0) ch.g31 = 0.0;
    if (k % 11 == 0) ch.g32 = 0.0;
    const auto sp = random_split(rng);
    const ConverseParams cp{2 * u(rng) - 1, u(rng), u(rng)};
    for (const auto& p : {inner_no_d2d(ch, sp), inner_d2d_split(ch, sp), inner_uplink_split(ch, sp),
                          outer_no_d2d(ch, cp), outer_d2d(ch, cp), outer_relaxed(ch), cutset_no_d2d(ch, cp),
                          cutset_d2d(ch, cp), baseline_half_duplex(ch, true), baseline_tin(ch)})
      for (const auto& h : p.halfspaces()) {
        EXPECT_GE(h.bound, 0.0);
        EXPECT_TRUE(std::isfinite(h.bound));
      }
  }
}

TEST(Grids, SchemeGridIsValidAndTight) {
  const auto g = scheme_grid(21);
  EXPECT_FALSE(g.empty());
  for (const auto& sp : g) {
    EXPECT_NO_THROW(sp.validate());
    EXPECT_NEAR(sp.a + sp.b + sp.c, 1.0, 1e-12);
    EXPECT_NEAR(sp.d + sp.e, 1.0, 1e-12);
  }
  const auto l = linspace(-1.0, 1.0, 41);
  EXPECT_EQ(l.size(), 41u);
  EXPECT_EQ(l.front(), -1.0);
  EXPECT_EQ(l.back(), 1.0);
  EXPECT_THROW(linspace(0, 1, 0), UsageError);
}

TEST(TimeShareWithD2d, EndpointsAndMidpoint) {
  const auto p2 = Polytope::box({2.0, 1.0});
  const RateRegion p(time_share_with_d2d(p2, 4.0));
  EXPECT_TRUE(membership(p, {2.0, 1.0, 0.0}));
  EXPECT_TRUE(membership(p, {0.0, 0.0, 4.0}));
  EXPECT_TRUE(membership(p, {1.0, 0.5, 2.0}));
  EXPECT_FALSE(membership(p, {1.0, 0.5, 2.1}));
}

}  // namespace
