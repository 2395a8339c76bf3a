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

#include "support.hpp"

namespace {

using namespace fdcap;
using namespace fdcap::detail;  // random_channel, random_factorization
using enum Var;
using fdcap::testing::same_vertex_set;
using fdcap::testing::vertices_inside;

const std::vector<double> kUniformPair{0.25, 0.25, 0.25, 0.25};

double h2(double p) { return -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

// Y2 = X1 xor Bern(p), Y3 = 0.
ChannelPmf bsc_to_node2(double p) {
  ChannelPmf c = ChannelPmf::constant(2, 2, 2, 2);
  std::fill(c.p.begin(), c.p.end(), 0.0);
  for (int x1 = 0; x1 < 2; ++x1)
    for (int x2 = 0; x2 < 2; ++x2) {
      c.p[c.index(x1, 0, x1, x2)] = 1 - p;
      c.p[c.index(1 - x1, 0, x1, x2)] = p;
    }
  return c;
}

InputFactorization independent_uniform() {
  return {1, 1, 1, 1, 2, 2, {1.0}, {0.5, 0.5}, {0.5, 0.5}};
}

TEST(MutualInformation, HandExamples) {
  EXPECT_NEAR(mutual_information(joint_from_inputs(ChannelPmf::constant(2, 2, 2, 2), kUniformPair), {X1}, {Y2}), 0.0,
              1e-12);
  const auto id = joint_from_inputs(ChannelPmf::noiseless_orthogonal(2), kUniformPair);
  EXPECT_NEAR(mutual_information(id, {X1}, {Y2}), 1.0, 1e-12);
  EXPECT_NEAR(mutual_information(id, {X1}, {Y3}), 0.0, 1e-12);
  EXPECT_NEAR(mutual_information(joint_from_inputs(bsc_to_node2(0.11), kUniformPair), {X1}, {Y2}), 1 - h2(0.11), 1e-12);
}

TEST(MutualInformation, OverlappingSetsRejected) {
  const auto j = joint_from_inputs(ChannelPmf::noiseless_orthogonal(2), kUniformPair);
  EXPECT_THROW(mutual_information(j, {X1}, {X1, Y2}), UsageError);
  EXPECT_THROW(mutual_information(j, {X1}, {Y2}, {X1}), UsageError);
}

TEST(MutualInformation, SymmetryChainRuleAndBounds) {
  for (int s = 0; s < 30; ++s) {
    const auto j = joint_from_factorization(random_channel(2, 3, 2, 2, 40 + static_cast<std::uint64_t>(s)),
                                            random_factorization({2, 2, 2, 1, 2, 3}, 40 + static_cast<std::uint64_t>(s)));
    EXPECT_NEAR(mutual_information(j, {X1, U}, {Y3}, {X2}), mutual_information(j, {Y3}, {X1, U}, {X2}), 1e-12);
    const double whole = mutual_information(j, {X1, X2}, {Y3});
    EXPECT_NEAR(whole, mutual_information(j, {X2}, {Y3}) + mutual_information(j, {X1}, {Y3}, {X2}), 1e-12);
    EXPECT_LE(mutual_information(j, {X1}, {Y2, Y3}), j.entropy({X1}) + 1e-12);
    EXPECT_GE(mutual_information(j, {W1}, {Y2}, {U, V}), 0.0);
  }
}

TEST(Thm1, NoiselessOrthogonal) {
  Polytope want(2);
  want.add({1, 0, 0}, 1).add({0, 1, 0}, 1).add({1, 1, 0}, 2);
  EXPECT_TRUE(same_vertex_set(region_thm1(ChannelPmf::noiseless_orthogonal(2), independent_uniform()), want, 1e-12));
  const auto zero = vertices(region_thm1(ChannelPmf::constant(2, 2, 2, 2), independent_uniform()));
  ASSERT_EQ(zero.size(), 1u);
  EXPECT_EQ(max_abs_diff(zero[0], RatePoint(2)), 0.0);
}

TEST(Thm1, AuxiliaryShapeChecked) {
  const auto ch = random_channel(2, 2, 2, 2, 1);
  EXPECT_THROW(region_thm1(ch, random_factorization({2, 2, 2, 1, 2, 2}, 1)), UsageError);
}

TEST(Regions, InnerInsideOuter) {
  for (int s = 0; s < 30; ++s) {
    const auto seed = 60 + static_cast<std::uint64_t>(s);
    const auto ch = random_channel(2, 2, 2, 2, seed);
    const auto f = random_factorization({2, 2, 1, 1, 2, 2}, seed);
    const auto j = joint_from_factorization(ch, f);
    EXPECT_TRUE(vertices_inside(region_thm1(j), RateRegion(region_thm2_outer(ch, j.marginal({X1, X2}))), 1e-12));
    EXPECT_TRUE(same_vertex_set(slice_r3_zero(region_cor2(ch, f)), region_thm1(j), 1e-12));
  }
}

TEST(Regions, D2dInnerInsideGenieUnion) {
  for (int s = 0; s < 20; ++s) {
    const auto seed = 80 + static_cast<std::uint64_t>(s);
    const auto j = joint_from_factorization(random_channel(2, 2, 2, 2, seed), random_factorization({2, 2, 2, 2, 2, 2}, seed));
    EXPECT_TRUE(vertices_inside(region_thm3(j), region_thm5_outer_union(j), 1e-9));
  }
}

TEST(Prop2, PassOrSkipped) {
  int pass = 0, skipped = 0;
  for (int s = 0; s < 200; ++s) {
    const auto seed = 100 + static_cast<std::uint64_t>(s);
    const auto r = check_prop2(random_channel(2, 2, 2, 2, seed), random_factorization({2, 2, 2, 2, 2, 2}, seed));
    EXPECT_NE(r.status, Prop2Status::kFail) << r.stage;
    EXPECT_EQ(r.status == Prop2Status::kSkipped, r.terms.binning_feasible());
    pass += r.status == Prop2Status::kPass;
    skipped += r.status == Prop2Status::kSkipped;
  }
  EXPECT_GT(pass, 0);
  EXPECT_GT(skipped, 0);
  EXPECT_EQ(to_string(Prop2Status::kSkipped), "skipped");
}

TEST(Lemma1, CombinerLosesNothing) {
  const auto r = lemma1_identity_check(ScalarChannel::from_ratios(10.0, 5.0, 3.0), 100000, 1);
  EXPECT_LE(r.max_deviation, 0.02);
  EXPECT_NEAR(r.lhs, r.rhs, 1e-3);
  EXPECT_NEAR(r.lhs, r.analytic, 0.02);

  ScalarChannel solo = ScalarChannel::from_ratios(10.0, 0.0, 3.0);  // no link to node 3
  const auto z = lemma1_identity_check(solo, 100000, 2);
  EXPECT_NEAR(z.lhs, z.rhs, 1e-3);
  EXPECT_THROW(lemma1_identity_check(solo, 100, 2), UsageError);
}

TEST(DmcJson, RoundTripAndRenormalization) {
  const auto ch = random_channel(2, 3, 2, 2, 5);
  auto js = to_json(ch);
  const auto back = channel_pmf_from_json(js);
  for (std::size_t i = 0; i < ch.p.size(); ++i) EXPECT_NEAR(back.p[i], ch.p[i], 1e-15);

  js["p"][0][0][0][0] = js["p"][0][0][0][0].get<double>() + 5e-7;
  const auto fixed = channel_pmf_from_json(js);
  double tot = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) tot += fixed(a, b, 0, 0);
  EXPECT_NEAR(tot, 1.0, 1e-15);

  js["p"][0][0][0][0] = js["p"][0][0][0][0].get<double>() + 1e-3;
  EXPECT_THROW(channel_pmf_from_json(js), DomainError);
  js = to_json(ch);
  js["p"][0][0][0][0] = -0.1;
  EXPECT_THROW(channel_pmf_from_json(js), DomainError);
  js = to_json(ch);
  js["sizes"]["x1"] = 5;
  EXPECT_THROW(channel_pmf_from_json(js), DomainError);
  js = to_json(ch);
  js["p"][0].erase(0);
  EXPECT_THROW(channel_pmf_from_json(js), DomainError);
}

TEST(DmcJson, FactorizationRoundTrip) {
  const auto f = random_factorization({2, 3, 2, 1, 2, 2}, 9);
  const auto g = factorization_from_json(to_json(f));
  EXPECT_EQ(g.nv, 3);
  for (std::size_t i = 0; i < f.pvwx_u.size(); ++i) EXPECT_NEAR(g.pvwx_u[i], f.pvwx_u[i], 1e-15);
  auto js = to_json(f);
  js["p_u"] = {0.7, 0.7};
  EXPECT_THROW(factorization_from_json(js), DomainError);
}

TEST(FactorizationSearch, DeterministicAndMonotone) {
  const auto ch = random_channel(2, 2, 2, 2, 3);
  const auto a = factorization_search(ch, {2, 2, 1, 1, 2, 2}, DmcTheorem::k1, 30, 4);
  const auto b = factorization_search(ch, {2, 2, 1, 1, 2, 2}, DmcTheorem::k1, 30, 4);
  EXPECT_EQ(a.value, b.value);
  ASSERT_EQ(a.record.size(), 30u);
  for (std::size_t i = 1; i < a.record.size(); ++i) EXPECT_GE(a.record[i], a.record[i - 1]);
}

}  // namespace
