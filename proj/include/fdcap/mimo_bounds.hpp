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
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "fdcap/channel_model.hpp"
#include "fdcap/marton.hpp"
#include "fdcap/parallel.hpp"
#include "fdcap/random.hpp"
#include "fdcap/rate_region.hpp"

namespace fdcap {

using Eigen::MatrixXcd;

/// Beamformers a..f; Sigma_i = Lambda_i Lambda_i^H.
///  a: relay common (node 1)   b: fresh common   c: uplink private
///  d: D2D private             e: relay common (node 2)   f: downlink
struct CovarianceSet {
  MatrixXcd La, Lb, Lc, Ld, Le, Lf;

  static CovarianceSet zeros(const MimoChannel& ch) {
    const auto l1 = ch.L1(), l2 = ch.L2tx(), m = std::min(l1, l2);
    return {MatrixXcd::Zero(l1, m), MatrixXcd::Zero(l1, l1), MatrixXcd::Zero(l1, l1),
            MatrixXcd::Zero(l1, l1), MatrixXcd::Zero(l2, m),  MatrixXcd::Zero(l2, l2)};
  }

  static MatrixXcd sigma(const MatrixXcd& L) { return L * L.adjoint(); }
  MatrixXcd Sa() const { return sigma(La); }
  MatrixXcd Sb() const { return sigma(Lb); }
  MatrixXcd Sc() const { return sigma(Lc); }
  MatrixXcd Sd() const { return sigma(Ld); }
  MatrixXcd Se() const { return sigma(Le); }
  MatrixXcd Sf() const { return sigma(Lf); }

  double node1_power() const {
    return La.squaredNorm() + Lb.squaredNorm() + Lc.squaredNorm() + Ld.squaredNorm();
  }
  double node2_power() const { return Le.squaredNorm() + Lf.squaredNorm(); }

  void validate(const MimoChannel& ch) const {
    const auto l1 = ch.L1(), l2 = ch.L2tx(), m = std::min(l1, l2);
    auto shape = [](const MatrixXcd& M, Eigen::Index r, Eigen::Index c) { return M.rows() == r && M.cols() == c; };
    if (!shape(La, l1, m) || !shape(Lb, l1, l1) || !shape(Lc, l1, l1) || !shape(Ld, l1, l1) || !shape(Le, l2, m) ||
        !shape(Lf, l2, l2))
      throw DomainError("CovarianceSet: beamformer shapes do not match the channel");
    if (node1_power() > ch.P1 + 1e-9) throw DomainError("CovarianceSet: node-1 trace budget exceeded");
    if (node2_power() > ch.P2 + 1e-9) throw DomainError("CovarianceSet: node-2 trace budget exceeded");
  }
};

/// Hermitian square root of a PSD matrix.
inline MatrixXcd psd_sqrt(const MatrixXcd& S) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (S + S.adjoint()));
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

/// Tracks the smallest eigenvalue seen among log-det arguments.
struct LogDetAudit {
  double min_eigenvalue = std::numeric_limits<double>::infinity();
  std::size_t evaluations = 0;
};

namespace detail {

inline double log2det_psd(const MatrixXcd& M, double eps, LogDetAudit* audit) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (M + M.adjoint()), Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  if (audit) {
    audit->min_eigenvalue = std::min(audit->min_eigenvalue, ev.minCoeff());
    ++audit->evaluations;
  }
  double s = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) s += std::log2(std::max(ev[i], 0.0) + eps);
  return s;
}

// log2 |det M| for a general square matrix.
inline double log2absdet(const MatrixXcd& M) { return std::log2(std::abs(M.fullPivLu().determinant())); }

inline MatrixXcd eye(Eigen::Index n) { return MatrixXcd::Identity(n, n); }

}  // namespace detail

struct DpcOptions {
  // Literal forms: G31 in place of G21 in the node-2 terms (needs
  // L3 == L2rx) and the extra -mu1 in the second variant's sum term.
  bool literal_forms = false;
  LogDetAudit* audit = nullptr;
};

namespace detail {

struct DpcContext {
  const MimoChannel& ch;
  const CovarianceSet& cov;
  DpcOptions opt;
  double eps;
  MatrixXcd Sa, Sb, Sc, Sd, Se, Sf;

  DpcContext(const MimoChannel& c, const CovarianceSet& v, const DpcOptions& o)
      : ch(c), cov(v), opt(o), eps(1e-12 * c.sigma2) {
    ch.validate();
    cov.validate(ch);
    Sa = v.Sa(); Sb = v.Sb(); Sc = v.Sc(); Sd = v.Sd(); Se = v.Se(); Sf = v.Sf();
  }
  double ld(const MatrixXcd& M) const { return log2det_psd(M, eps, opt.audit); }
  MatrixXcd n2() const { return ch.sigma2 * eye(ch.L2rx()); }
  MatrixXcd n3() const { return ch.sigma2 * eye(ch.L3()); }
  MatrixXcd at2(const MatrixXcd& S) const { return ch.G21 * S * ch.G21.adjoint(); }
  MatrixXcd at3(const MatrixXcd& S) const { return ch.G31 * S * ch.G31.adjoint(); }
  MatrixXcd dl(const MatrixXcd& S) const { return ch.G32 * S * ch.G32.adjoint(); }
  MatrixXcd phi() const {
    MatrixXcd cross = ch.G31 * cov.La * cov.Le.adjoint() * ch.G32.adjoint();
    return at3(Sa + Sb + Sc + Sd) + dl(Se + Sf) + cross + cross.adjoint();
  }
  // Node-2 side term G S G^H with the selected channel.
  MatrixXcd node2_gain() const {
    if (!opt.literal_forms) return ch.G21;
    if (ch.L3() != ch.L2rx()) throw UsageError("literal forms need L3 == L2rx");
    return ch.G31;
  }
};

// Dirt-coding terms when the D2D private part is precoded against the
// uplink private part (variants 2 and 3).
struct D2dDirt {
  MatrixXcd Q, Psi;
  double mu1;
};

inline D2dDirt d2d_dirt(const DpcContext& x) {
  const auto& G31 = x.ch.G31;
  D2dDirt r;
  r.Q = x.Sd * G31.adjoint() * (x.n3() + x.at3(x.Sd)).inverse();
  const MatrixXcd cov_w = x.Sd + r.Q * x.at3(x.Sc) * r.Q.adjoint();
  r.mu1 = x.ld(cov_w) - x.ld(x.Sd);
  const MatrixXcd cross = G31 * x.Sd + x.at3(x.Sc) * r.Q.adjoint();
  // cross lies in the range of cov_w, so the pseudo-inverse is exact; a
  // ridge here would leave an O(inr * eps) residue in sigma^2 I + ... - Psi.
  auto cod = cov_w.completeOrthogonalDecomposition();
  cod.setThreshold(1e-13);
  r.Psi = cross * cod.pseudoInverse() * cross.adjoint();
  return r;
}

}  // namespace detail

/// D2D private part as dirt for the uplink private part.
inline MartonTerms dpc_terms_variant1(const MimoChannel& ch, const CovarianceSet& cov, const DpcOptions& opt = {}) {
  detail::DpcContext x(ch, cov, opt);
  const auto& G21 = ch.G21;
  const MatrixXcd Q = x.Sc * G21.adjoint() * (x.n2() + x.at2(x.Sc)).inverse();
  MartonTerms t;
  t.mu1 = x.ld(x.Sc + Q * x.at2(x.Sd) * Q.adjoint()) - x.ld(x.Sc);
  if (opt.literal_forms) {
    if (ch.L3() != ch.L2rx()) throw UsageError("literal forms need L3 == L2rx");
    t.mu2 = detail::log2absdet(detail::eye(ch.L3()) + ch.G31 * x.Sc * G21.adjoint() / ch.sigma2) + t.mu1;
  } else {
    t.mu2 = x.ld(detail::eye(ch.L2rx()) + x.at2(x.Sc) / ch.sigma2) + t.mu1;
  }
  t.mu3 = x.ld(x.n2() + x.at2(x.Sb + x.Sc + x.Sd)) - x.ld(x.n2() + x.at2(x.Sc + x.Sd)) + t.mu2;
  const MatrixXcd base = x.n3() + x.at3(x.Sc);
  t.mu4 = x.ld(x.n3() + x.at3(x.Sc + x.Sd)) - x.ld(base);
  t.mu5 = x.ld(base + x.dl(x.Sf)) - x.ld(base);
  t.mu6 = x.ld(x.n3() + x.at3(x.Sc + x.Sd) + x.dl(x.Sf)) - x.ld(base);
  t.mu7 = x.ld(x.n3() + x.phi()) - x.ld(base);
  return t;
}

/// Uplink private part as dirt for the D2D private part; node 3 removes the
/// downlink signal first.
inline MartonTerms dpc_terms_variant2(const MimoChannel& ch, const CovarianceSet& cov, const DpcOptions& opt = {}) {
  detail::DpcContext x(ch, cov, opt);
  const auto dirt = detail::d2d_dirt(x);
  const MatrixXcd G2 = x.node2_gain();
  auto at2 = [&](const MatrixXcd& S) { return MatrixXcd(G2 * S * G2.adjoint()); };
  const MatrixXcd n2 = ch.sigma2 * detail::eye(G2.rows());
  MartonTerms t;
  t.mu1 = dirt.mu1;
  t.mu2 = x.ld(n2 + at2(x.Sc + x.Sd)) - x.ld(n2 + at2(x.Sd));
  t.mu3 = x.ld(n2 + at2(x.Sb + x.Sc + x.Sd)) - x.ld(n2 + at2(x.Sd));
  t.mu4 = x.ld(detail::eye(ch.L3()) + x.at3(x.Sd) / ch.sigma2) + t.mu1;
  const MatrixXcd A = x.n3() + x.at3(x.Sc + x.Sd);
  const MatrixXcd F = x.dl(x.Sf);
  const double head = x.ld(A + F) - x.ld(A);
  t.mu5 = head + t.mu4 - (x.ld(A + F) - x.ld(A + F - dirt.Psi));
  t.mu6 = head + t.mu4;
  // I(U,V,W3,X2;Y3) carries no -mu1 here; the literal form subtracts it.
  t.mu7 = x.ld(x.n3() + x.phi()) - x.ld(A) + t.mu4 - (opt.literal_forms ? t.mu1 : 0.0);
  return t;
}

/// Uplink private part as dirt; node 3 treats the downlink signal as noise.
inline MartonTerms dpc_terms_variant3(const MimoChannel& ch, const CovarianceSet& cov, const DpcOptions& opt = {}) {
  detail::DpcContext x(ch, cov, opt);
  const auto dirt = detail::d2d_dirt(x);
  const MatrixXcd G2 = x.node2_gain();
  auto at2 = [&](const MatrixXcd& S) { return MatrixXcd(G2 * S * G2.adjoint()); };
  const MatrixXcd n2 = ch.sigma2 * detail::eye(G2.rows());
  MartonTerms t;
  t.mu1 = dirt.mu1;
  t.mu2 = x.ld(n2 + at2(x.Sc + x.Sd)) - x.ld(n2 + at2(x.Sd));
  t.mu3 = x.ld(n2 + at2(x.Sb + x.Sc + x.Sd)) - x.ld(n2 + at2(x.Sd));
  const MatrixXcd A = x.n3() + x.at3(x.Sc + x.Sd);
  const MatrixXcd F = x.dl(x.Sf);
  t.mu4 = x.ld(A) - x.ld(A - dirt.Psi);
  const double head = x.ld(A + F) - x.ld(A);
  t.mu5 = head + t.mu4 - (x.ld(x.n3() + x.at3(x.Sd) + F) - x.ld(x.n3() + F)) - t.mu1;
  t.mu6 = head + t.mu4;
  t.mu7 = x.ld(x.n3() + x.phi()) - x.ld(A) + t.mu4 - t.mu1;
  return t;
}

enum class DpcVariant { k1 = 1, k2 = 2, k3 = 3, kUnion = 0 };

inline MartonTerms dpc_terms(DpcVariant v, const MimoChannel& ch, const CovarianceSet& cov, const DpcOptions& opt = {}) {
  switch (v) {
    case DpcVariant::k1: return dpc_terms_variant1(ch, cov, opt);
    case DpcVariant::k2: return dpc_terms_variant2(ch, cov, opt);
    case DpcVariant::k3: return dpc_terms_variant3(ch, cov, opt);
    default: throw UsageError("dpc_terms: pick a single variant");
  }
}

/// Region of one variant (or the union of all three) at a covariance set.
inline RateRegion dpc_region(DpcVariant v, const MimoChannel& ch, const CovarianceSet& cov, const DpcOptions& opt = {}) {
  RateRegion r(3);
  if (v == DpcVariant::kUnion) {
    for (auto w : {DpcVariant::k1, DpcVariant::k2, DpcVariant::k3}) r.add(marton_region(dpc_terms(w, ch, cov, opt).clamped()));
  } else {
    r.add(marton_region(dpc_terms(v, ch, cov, opt).clamped()));
  }
  return r;
}

// ---- covariance search ----

using Scalarization = std::function<double(const RateRegion&)>;

inline double default_scalarization(const RateRegion& r) { return symmetric_rate(r); }

struct CovarianceSearchResult {
  CovarianceSet best;
  RateRegion region{3};
  double value = -std::numeric_limits<double>::infinity();
  std::vector<double> record;  // best value after each evaluation
};

namespace detail {

// Rescales each node's blocks so the node uses its full budget with the
// given per-block power split.
inline void set_powers(CovarianceSet& cov, const MimoChannel& ch, const std::array<double, 6>& share) {
  std::array<MatrixXcd*, 6> blk{&cov.La, &cov.Lb, &cov.Lc, &cov.Ld, &cov.Le, &cov.Lf};
  const double s1 = share[0] + share[1] + share[2] + share[3];
  const double s2 = share[4] + share[5];
  for (int k = 0; k < 6; ++k) {
    MatrixXcd& L = *blk[static_cast<std::size_t>(k)];
    const double nrm = L.squaredNorm();
    const double tot = k < 4 ? s1 : s2;
    const double target = tot > 0.0 ? share[static_cast<std::size_t>(k)] / tot * (k < 4 ? ch.P1 : ch.P2) : 0.0;
    if (nrm > 0.0) L *= std::sqrt(target / nrm) * (1.0 - 1e-12);
  }
}

inline std::array<double, 6> power_shares(const CovarianceSet& cov) {
  return {cov.La.squaredNorm(), cov.Lb.squaredNorm(), cov.Lc.squaredNorm(),
          cov.Ld.squaredNorm(), cov.Le.squaredNorm(), cov.Lf.squaredNorm()};
}

inline CovarianceSet random_covariance(const MimoChannel& ch, std::uint64_t seed) {
  std::mt19937_64 rng(splitmix64(seed));
  auto cov = CovarianceSet::zeros(ch);
  cov.La = gaussian_matrix(rng, cov.La.rows(), cov.La.cols());
  cov.Lb = gaussian_matrix(rng, cov.Lb.rows(), cov.Lb.cols());
  cov.Lc = gaussian_matrix(rng, cov.Lc.rows(), cov.Lc.cols());
  cov.Ld = gaussian_matrix(rng, cov.Ld.rows(), cov.Ld.cols());
  cov.Le = gaussian_matrix(rng, cov.Le.rows(), cov.Le.cols());
  cov.Lf = gaussian_matrix(rng, cov.Lf.rows(), cov.Lf.cols());
  std::exponential_distribution<double> ex(1.0);  // flat Dirichlet shares
  std::array<double, 6> share{};
  for (auto& s : share) s = ex(rng);
  set_powers(cov, ch, share);
  return cov;
}

}  // namespace detail

/// Seeded random draws plus coordinate-wise power refinement of the best
/// draw. The evaluation sequence does not depend on the budget, so a larger
/// budget extends the same sequence.
inline CovarianceSearchResult covariance_search(const MimoChannel& ch, DpcVariant variant, std::size_t budget,
                                                std::uint64_t seed, const Scalarization& score = default_scalarization) {
  if (budget < 1) throw UsageError("covariance_search: budget must be >= 1");
  constexpr std::size_t kWarmup = 16;
  CovarianceSearchResult res;
  auto consider = [&](const CovarianceSet& c) {
    auto region = dpc_region(variant, ch, c);
    const double v = score(region);
    if (v > res.value) {
      res.value = v;
      res.best = c;
      res.region = std::move(region);
    }
    res.record.push_back(res.value);
  };

  const std::size_t warm = std::min(budget, kWarmup);
  const auto draws = parallel_map(warm, [&](std::size_t i) { return detail::random_covariance(ch, seed * 1000003ULL + i); });
  for (const auto& c : draws) consider(c);

  std::size_t next_draw = warm;
  double step = 0.5;
  int block = 0;
  int dir = 0;
  for (std::size_t i = warm; i < budget; ++i) {
    if ((i - warm) % 2 == 1) {
      consider(detail::random_covariance(ch, seed * 1000003ULL + next_draw++));
      continue;
    }
    auto share = detail::power_shares(res.best);
    auto cand = res.best;
    const double total = block < 4 ? ch.P1 : ch.P2;
    auto& s = share[static_cast<std::size_t>(block)];
    s = dir == 0 ? s * (1.0 + step) + step * total / 8.0 : s * (1.0 - step);
    detail::set_powers(cand, ch, share);
    const double before = res.value;
    consider(cand);
    if (!(res.value > before)) {
      dir ^= 1;
      if (dir == 0 && ++block == 6) {
        block = 0;
        step *= 0.5;
        if (step < 1e-3) step = 0.5;
      }
    }
  }
  return res;
}

// ---- without-D2D vector scheme ----

struct MimoSchemeResult {
  CovarianceSet cov;
  MartonTerms terms;
  RateRegion region{2};
};

/// Closed-form assignment: uplink private covariance
///   sigma^2 (sigma^2 L1 / P1 I + G31^H G31)^-1,
/// common part filling (P1 / L1) I, isotropic downlink, no relay or D2D parts.
inline MimoSchemeResult no_d2d_mimo_scheme(const MimoChannel& ch) {
  ch.validate();
  const auto l1 = ch.L1();
  const double per = ch.P1 / static_cast<double>(l1);
  const MatrixXcd Sp =
      ch.sigma2 * (ch.sigma2 / per * detail::eye(l1) + ch.G31.adjoint() * ch.G31).inverse();
  MimoSchemeResult r;
  r.cov = CovarianceSet::zeros(ch);
  r.cov.Lc = psd_sqrt(Sp);
  r.cov.Lb = psd_sqrt(per * detail::eye(l1) - Sp);
  r.cov.Lf = std::sqrt(ch.P2 / static_cast<double>(ch.L2tx())) * detail::eye(ch.L2tx());
  // Keep the traces within budget after the square roots.
  detail::set_powers(r.cov, ch, detail::power_shares(r.cov));
  r.terms = dpc_terms_variant1(ch, r.cov).clamped();
  r.region.add(slice_r3_zero(marton_region(r.terms)));
  return r;
}

/// Outer polytope at a joint input covariance K of (X1, X2):
///   R1 <= I(X1;Y2|X2), R2 <= I(X2;Y3|X1),
///   R1 + R2 <= I(X1,X2;Y3) + I(X1;Y2|Y3,X2).
inline Polytope vector_outer_no_d2d(const MimoChannel& ch, const MatrixXcd& K) {
  ch.validate();
  const auto l1 = ch.L1(), l2 = ch.L2tx();
  if (K.rows() != l1 + l2 || K.cols() != l1 + l2) throw DomainError("vector_outer_no_d2d: K has the wrong size");
  const double eps = 1e-12 * ch.sigma2;
  const MatrixXcd K11 = K.topLeftCorner(l1, l1), K22 = K.bottomRightCorner(l2, l2);
  const MatrixXcd K12 = K.topRightCorner(l1, l2);
  const MatrixXcd K1g2 = K11 - K12 * (K22 + eps * detail::eye(l2)).inverse() * K12.adjoint();
  const MatrixXcd K2g1 = K22 - K12.adjoint() * (K11 + eps * detail::eye(l1)).inverse() * K12;
  auto ld = [&](const MatrixXcd& M) { return detail::log2det_psd(M, 0.0, nullptr); };
  const double s = ch.sigma2;
  MatrixXcd H(ch.L3(), l1 + l2);
  H << ch.G31, ch.G32;
  const MatrixXcd A = (ch.G21.adjoint() * ch.G21 + ch.G31.adjoint() * ch.G31) / s;
  const MatrixXcd B = ch.G31.adjoint() * ch.G31 / s;
  // log|I + K A| - log|I + K B| computed through K^{1/2}.
  const MatrixXcd R = psd_sqrt(K1g2);
  const double cond = ld(detail::eye(l1) + R * A * R) - ld(detail::eye(l1) + R * B * R);
  Polytope p(2);
  p.add({1, 0, 0}, std::max(0.0, ld(detail::eye(ch.L2rx()) + ch.G21 * K1g2 * ch.G21.adjoint() / s)));
  p.add({0, 1, 0}, std::max(0.0, ld(detail::eye(ch.L3()) + ch.G32 * K2g1 * ch.G32.adjoint() / s)));
  p.add({1, 1, 0}, std::max(0.0, ld(detail::eye(ch.L3()) + H * K * H.adjoint() / s) + cond));
  return p;
}

/// Union of the outer polytope over the isotropic input and `draws` seeded
/// random joint inputs scaled to the trace budgets.
inline RateRegion vector_outer_union(const MimoChannel& ch, std::size_t draws, std::uint64_t seed) {
  const auto l1 = ch.L1(), l2 = ch.L2tx();
  RateRegion r(2);
  MatrixXcd K = MatrixXcd::Zero(l1 + l2, l1 + l2);
  K.topLeftCorner(l1, l1) = ch.P1 / static_cast<double>(l1) * detail::eye(l1);
  K.bottomRightCorner(l2, l2) = ch.P2 / static_cast<double>(l2) * detail::eye(l2);
  r.add(vector_outer_no_d2d(ch, K));
  for (std::size_t i = 0; i < draws; ++i) {
    std::mt19937_64 rng(detail::splitmix64(seed * 7919ULL + i));
    const MatrixXcd M = detail::gaussian_matrix(rng, l1 + l2, l1 + l2);
    MatrixXcd Kr = M * M.adjoint();
    const double t1 = Kr.topLeftCorner(l1, l1).trace().real(), t2 = Kr.bottomRightCorner(l2, l2).trace().real();
    Eigen::VectorXd d(l1 + l2);
    d.head(l1).setConstant(std::sqrt(ch.P1 / t1));
    d.tail(l2).setConstant(std::sqrt(ch.P2 / t2));
    Kr = d.asDiagonal() * Kr * d.asDiagonal();
    r.add(vector_outer_no_d2d(ch, Kr));
  }
  return r;
}

inline double mimo_gap_bound(const MimoChannel& ch) {
  const double l1 = static_cast<double>(ch.L1()), l2r = static_cast<double>(ch.L2rx());
  const double l2t = static_cast<double>(ch.L2tx()), l3 = static_cast<double>(ch.L3());
  return std::max({std::min(l1, l2r), std::min(l2t, l3), 0.5 * std::min(l1, l3)});
}

}  // namespace fdcap
