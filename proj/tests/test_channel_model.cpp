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
#include <random>

#include "fdcap/channel_model.hpp"

namespace {

using namespace fdcap;

TEST(CapacityFn, SmallValues) {
  EXPECT_DOUBLE_EQ(capacity_fn(0.0), 0.0);
  EXPECT_DOUBLE_EQ(capacity_fn(1.0), 1.0);
  EXPECT_DOUBLE_EQ(capacity_fn(3.0), 2.0);
  EXPECT_THROW(capacity_fn(-1e-3), DomainError);
}

TEST(CapacityFn, MonotoneAndConcave) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1e3);
  for (int k = 0; k < 1000; ++k) {
    double x = u(rng), y = u(rng);
    if (x > y) std::swap(x, y);
    EXPECT_LE(capacity_fn(x), capacity_fn(y));
    EXPECT_GE(capacity_fn(0.5 * (x + y)), 0.5 * (capacity_fn(x) + capacity_fn(y)) - 1e-12);
  }
}

TEST(LinkBudget, PathLoss) {
  // -128.1 - 37.6 log10(0.3) = -108.4396...
  EXPECT_NEAR(pathloss_db(0.3), -128.1 - 37.6 * std::log10(0.3), 1e-12);
  EXPECT_NEAR(pathloss_db(0.3), -108.44, 5e-3);
  EXPECT_DOUBLE_EQ(pathloss_db(1.0), -128.1);
  EXPECT_THROW(pathloss_db(0.0), DomainError);
}

TEST(LinkBudget, SymmetricGeometryGivesEqualSnrInr) {
  LinkBudget lb;
  lb.bs_user_distance_km = lb.user_user_distance_km = 0.3;
  const auto ch = build_from_link_budget(lb);
  EXPECT_NEAR(ch.snr() / ch.inr(), 1.0, 1e-12);
  EXPECT_NEAR(ch.snr() / ch.snr_dl(), 1.0, 1e-12);
  // -47 dBm/Hz tx, -169 dBm/Hz noise, 108.44 dB loss: about 13.56 dB
  EXPECT_NEAR(linear_to_db(ch.snr()), -47.0 + 169.0 + pathloss_db(0.3), 1e-9);
}

TEST(LinkBudget, LongerLinksLowerEverySnr) {
  for (double d : {0.05, 0.1, 0.3, 0.7}) {
    LinkBudget a, b;
    a.bs_user_distance_km = d;
    a.user_user_distance_km = 1.5 * d;
    b.bs_user_distance_km = 2 * d;
    b.user_user_distance_km = 3 * d;
    const auto ca = build_from_link_budget(a), cb = build_from_link_budget(b);
    EXPECT_LT(cb.snr(), ca.snr());
    EXPECT_LT(cb.inr(), ca.inr());
    EXPECT_LT(cb.snr_dl(), ca.snr_dl());
  }
}

TEST(LinkBudget, RejectsNonPositiveDistance) {
  LinkBudget lb;
  lb.user_user_distance_km = -0.1;
  EXPECT_THROW(build_from_link_budget(lb), DomainError);
}

TEST(ScalarChannel, CoherentTermVanishesWithDeadLink) {
  ScalarChannel ch;
  ch.g21 = {1.0, 0.5};
  ch.g31 = 0.0;
  ch.g32 = {0.3, -2.0};
  ch.P1 = 4;
  ch.P2 = 9;
  EXPECT_EQ(ch.J(), 0.0);
  ch.g31 = {0.0, 2.0};
  ch.g32 = 0.0;
  EXPECT_EQ(ch.J(), 0.0);
  ch.g32 = {3.0, 4.0};
  // 2 * |2i * (3+4i)| * sqrt(36) = 2 * 10 * 6
  EXPECT_NEAR(ch.J(), 120.0, 1e-12);
}

TEST(ScalarChannel, Validation) {
  ScalarChannel ch;
  ch.sigma2 = 0.0;
  EXPECT_THROW(ch.validate(), DomainError);
  ch.sigma2 = 1.0;
  ch.P2 = -1.0;
  EXPECT_THROW(ch.validate(), DomainError);
}

TEST(ScalarChannel, JsonRoundTrip) {
  ScalarChannel ch;
  ch.g21 = {0.5, -1.25};
  ch.g31 = {2.0, 0.0};
  ch.g32 = {0.0, 3.0};
  ch.P1 = 2.5;
  ch.P2 = 0.75;
  ch.sigma2 = 0.1;
  const auto back = scalar_channel_from_json(to_json(ch));
  EXPECT_EQ(back.g21, ch.g21);
  EXPECT_EQ(back.g31, ch.g31);
  EXPECT_EQ(back.g32, ch.g32);
  EXPECT_EQ(back.P1, ch.P1);
  EXPECT_EQ(back.P2, ch.P2);
  EXPECT_EQ(back.sigma2, ch.sigma2);
}

TEST(ScalarChannel, JsonAcceptsRealGainsAndRejectsJunk) {
  const auto ch = scalar_channel_from_json(nlohmann::json::parse(R"({"g21": 2, "g31": [0, 1], "p1": 3})"));
  EXPECT_DOUBLE_EQ(ch.snr(), 12.0);
  EXPECT_DOUBLE_EQ(ch.inr(), 3.0);
  EXPECT_THROW(scalar_channel_from_json(nlohmann::json::parse(R"({"g21": [1, 2, 3]})")), UsageError);
  EXPECT_THROW(scalar_channel_from_json(nlohmann::json::parse(R"({"sigma2": 0})")), DomainError);
}

TEST(MimoChannel, DimensionChecks) {
  MimoChannel m;
  m.G21 = Eigen::MatrixXcd::Ones(2, 3);
  m.G31 = Eigen::MatrixXcd::Ones(2, 3);
  m.G32 = Eigen::MatrixXcd::Ones(2, 1);
  EXPECT_NO_THROW(m.validate());
  EXPECT_EQ(m.L1(), 3);
  EXPECT_EQ(m.L2rx(), 2);
  EXPECT_EQ(m.L2tx(), 1);
  EXPECT_EQ(m.L3(), 2);
  m.G31 = Eigen::MatrixXcd::Ones(2, 2);
  EXPECT_THROW(m.validate(), DomainError);
  m.G31 = Eigen::MatrixXcd::Ones(3, 3);
  EXPECT_THROW(m.validate(), DomainError);  // G32 rows no longer match
}

TEST(MimoChannel, FromScalarAndJson) {
  ScalarChannel s;
  s.g21 = {1, 1};
  s.g31 = {0, 2};
  s.g32 = 3;
  const auto m = MimoChannel::from_scalar(s);
  EXPECT_EQ(m.G31(0, 0), s.g31);
  const auto j = nlohmann::json{{"G21", detail::matrix_to_json(m.G21)}, {"G31", detail::matrix_to_json(m.G31)},
                                {"G32", detail::matrix_to_json(m.G32)}, {"p1", 2.0}};
  const auto back = mimo_channel_from_json(j);
  EXPECT_EQ(back.G21(0, 0), s.g21);
  EXPECT_EQ(back.P1, 2.0);
}

}  // namespace
