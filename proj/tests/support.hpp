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

// Shared oracles and generators for the test binaries.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "fdcap/fdcap.hpp"

namespace fdcap::testing {

/// Every vertex of a has a partner in b within tol, and vice versa.
inline bool same_vertex_set(const Polytope& a, const Polytope& b, double tol) {
  const auto va = vertices(a), vb = vertices(b);
  auto covered = [tol](const std::vector<RatePoint>& xs, const std::vector<RatePoint>& ys) {
    for (const auto& x : xs) {
      bool hit = false;
      for (const auto& y : ys) hit = hit || max_abs_diff(x, y) <= tol;
      if (!hit) return false;
    }
    return true;
  };
  return covered(va, vb) && covered(vb, va);
}

/// Largest distance from a vertex of one polytope to the other's vertex set.
inline double vertex_set_distance(const Polytope& a, const Polytope& b) {
  const auto va = vertices(a), vb = vertices(b);
  auto one_way = [](const std::vector<RatePoint>& xs, const std::vector<RatePoint>& ys) {
    double worst = 0.0;
    for (const auto& x : xs) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& y : ys) best = std::min(best, max_abs_diff(x, y));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one_way(va, vb), one_way(vb, va));
}

/// Every vertex of inner lies in outer.
inline bool vertices_inside(const Polytope& inner, const RateRegion& outer, double slack = 1e-9) {
  for (const auto& v : vertices(inner))
    if (!membership(outer, v, slack)) return false;
  return true;
}

/// Random downward-closed polytope with 1 to 6 extra mixed constraints.
inline Polytope random_polytope(std::mt19937_64& rng, int dim) {
  std::uniform_real_distribution<double> cap(0.2, 3.0), w(0.0, 1.0);
  std::uniform_int_distribution<int> extra(0, 5);
  Polytope p(dim);
  for (int i = 0; i < dim; ++i) {
    std::array<double, 3> e{};
    e[static_cast<std::size_t>(i)] = 1.0;
    p.add(e, cap(rng));
  }
  for (int k = extra(rng); k > 0; --k) {
    std::array<double, 3> wt{};
    for (int i = 0; i < dim; ++i) wt[static_cast<std::size_t>(i)] = w(rng) < 0.3 ? 0.0 : w(rng);
    if (wt[0] + wt[1] + wt[2] <= 1e-3) wt[0] = 1.0;
    p.add(wt, cap(rng) * (wt[0] + wt[1] + wt[2]));
  }
  return p;
}

inline RateRegion random_region(std::mt19937_64& rng, int dim, int max_members = 4) {
  std::uniform_int_distribution<int> n(1, max_members);
  RateRegion r(dim);
  for (int k = n(rng); k > 0; --k) r.add(random_polytope(rng, dim));
  return r;
}

inline RatePoint random_point(std::mt19937_64& rng, int dim, double hi) {
  std::uniform_real_distribution<double> u(0.0, hi);
  RatePoint p(dim);
  for (int i = 0; i < dim; ++i) p[i] = u(rng);
  return p;
}

// ---- jointly Gaussian oracle ----
// Variables are linear maps A s of a unit complex Gaussian source s.

using Eigen::MatrixXcd;

inline MatrixXcd stack(std::initializer_list<MatrixXcd> parts) {
  Eigen::Index rows = 0;
  const Eigen::Index cols = parts.begin()->cols();
  for (const auto& m : parts) rows += m.rows();
  MatrixXcd out(rows, cols);
  rows = 0;
  for (const auto& m : parts) {
    out.middleRows(rows, m.rows()) = m;
    rows += m.rows();
  }
  return out;
}

inline double log2det_hermitian(const MatrixXcd& K) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(K);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) s += std::log2(es.eigenvalues()[i]);
  return s;
}

inline MatrixXcd conditional_cov(const MatrixXcd& A, const MatrixXcd& C) {
  if (C.rows() == 0) return A * A.adjoint();
  const MatrixXcd kcc = C * C.adjoint(), kac = A * C.adjoint();
  return A * A.adjoint() - kac * kcc.completeOrthogonalDecomposition().pseudoInverse() * kac.adjoint();
}

/// I(A;B|C) in bits for jointly Gaussian A s, B s, C s.
inline double gaussian_cmi(const MatrixXcd& A, const MatrixXcd& B, const MatrixXcd& C) {
  return log2det_hermitian(conditional_cov(A, C)) + log2det_hermitian(conditional_cov(B, C)) -
         log2det_hermitian(conditional_cov(stack({A, B}), C));
}

/// The seven Marton terms computed from first principles for the DPC
/// variants with exact auxiliaries (variants 1 and 2).
inline std::array<double, 7> gaussian_marton_oracle(const MimoChannel& ch, const CovarianceSet& cov, int variant) {
  const auto L1 = ch.L1(), L2r = ch.L2rx(), L2t = ch.L2tx(), L3 = ch.L3();
  const auto m = std::min(L1, L2t);
  const Eigen::Index n = m + 3 * L1 + L2t + L2r + L3;
  auto pick = [&](Eigen::Index off, Eigen::Index cols, const MatrixXcd& L) {
    MatrixXcd r = MatrixXcd::Zero(L.rows(), n);
    r.middleCols(off, cols) = L;
    return r;
  };
  const double sg = std::sqrt(ch.sigma2);
  const MatrixXcd U = pick(0, m, MatrixXcd::Identity(m, m));
  const MatrixXcd V = pick(m, L1, MatrixXcd::Identity(L1, L1));
  const MatrixXcd Xb = pick(m, L1, cov.Lb), Xc = pick(m + L1, L1, cov.Lc), Xd = pick(m + 2 * L1, L1, cov.Ld);
  const MatrixXcd X1 = pick(0, m, cov.La) + Xb + Xc + Xd;
  const MatrixXcd X2 = pick(0, m, cov.Le) + pick(m + 3 * L1, L2t, cov.Lf);
  const MatrixXcd Y2 = ch.G21 * X1 + pick(m + 3 * L1 + L2t, L2r, sg * MatrixXcd::Identity(L2r, L2r));
  const MatrixXcd Y3 = ch.G31 * X1 + ch.G32 * X2 + pick(m + 3 * L1 + L2t + L2r, L3, sg * MatrixXcd::Identity(L3, L3));
  MatrixXcd W1, W3;
  if (variant == 1) {
    const MatrixXcd Sc = cov.Sc();
    const MatrixXcd Q = Sc * ch.G21.adjoint() * (ch.sigma2 * MatrixXcd::Identity(L2r, L2r) + ch.G21 * Sc * ch.G21.adjoint()).inverse();
    W1 = Xc + Q * ch.G21 * Xd;
    W3 = Xd;
  } else {
    const MatrixXcd Sd = cov.Sd();
    const MatrixXcd Q = Sd * ch.G31.adjoint() * (ch.sigma2 * MatrixXcd::Identity(L3, L3) + ch.G31 * Sd * ch.G31.adjoint()).inverse();
    W1 = Xc;
    W3 = Xd + Q * ch.G31 * Xc;
  }
  const MatrixXcd UV = stack({U, V}), none(0, n);
  return {gaussian_cmi(W1, W3, UV),
          gaussian_cmi(W1, Y2, stack({UV, X2})),
          gaussian_cmi(stack({V, W1}), Y2, stack({U, X2})),
          gaussian_cmi(W3, Y3, stack({UV, X2})),
          gaussian_cmi(X2, Y3, stack({UV, W3})),
          gaussian_cmi(stack({W3, X2}), Y3, UV),
          gaussian_cmi(stack({U, V, W3, X2}), Y3, none)};
}

inline MimoChannel random_mimo(std::uint64_t seed, Eigen::Index l1, Eigen::Index l2r, Eigen::Index l2t,
                               Eigen::Index l3, double p1 = 30.0, double p2 = 20.0) {
  std::mt19937_64 rng(seed);
  MimoChannel ch;
  ch.G21 = detail::gaussian_matrix(rng, l2r, l1);
  ch.G31 = detail::gaussian_matrix(rng, l3, l1);
  ch.G32 = detail::gaussian_matrix(rng, l3, l2t);
  ch.P1 = p1;
  ch.P2 = p2;
  return ch;
}

/// Scalar channel with random dB levels and phases.
inline ScalarChannel random_scalar(std::mt19937_64& rng, double lo_db = -10.0, double hi_db = 40.0) {
  std::uniform_real_distribution<double> db(lo_db, hi_db), ph(0.0, 2.0 * M_PI);
  auto ch = ScalarChannel::from_ratios(db_to_linear(db(rng)), db_to_linear(db(rng)), db_to_linear(db(rng)));
  ch.g31 *= std::polar(1.0, ph(rng));
  ch.g32 *= std::polar(1.0, ph(rng));
  return ch;
}

/// Random split fractions with a + b + c = 1 and d + e = 1.
inline SchemeParams random_split(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double a = u(rng), b = u(rng), c = u(rng);
  const double t = a + b + c;
  const double d = u(rng);
  return {a / t, b / t, c / t, d, 1.0 - d};
}

/// 1x1 covariance set realizing the scalar split; the relay beamformer at
/// node 2 is phase-aligned so the cross term adds coherently.
inline CovarianceSet scalar_covariance(const ScalarChannel& sc, const SchemeParams& sp, bool d2d_private) {
  const auto ch = MimoChannel::from_scalar(sc);
  auto m = [](cplx x) { return MatrixXcd::Constant(1, 1, x); };
  auto cov = CovarianceSet::zeros(ch);
  const cplx rot = std::polar(1.0, std::arg(sc.g31) - std::arg(sc.g32));
  cov.La = m(std::sqrt(sp.a * sc.P1));
  cov.Lb = m(std::sqrt(sp.b * sc.P1));
  (d2d_private ? cov.Ld : cov.Lc) = m(std::sqrt(sp.c * sc.P1));
  cov.Le = m(std::sqrt(sp.d * sc.P2) * rot);
  cov.Lf = m(std::sqrt(sp.e * sc.P2));
  return cov;
}

}  // namespace fdcap::testing
