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

#include "fdcap/rate_region.hpp"

namespace fdcap {

/// The seven mutual-information values (bits) that shape the Marton region.
struct MartonTerms {
  double mu1 = 0, mu2 = 0, mu3 = 0, mu4 = 0, mu5 = 0, mu6 = 0, mu7 = 0;

  std::array<double, 7> values() const { return {mu1, mu2, mu3, mu4, mu5, mu6, mu7}; }

  /// Clamps round-off negatives (>= -tol) to zero.
  MartonTerms clamped(double tol = 1e-9) const {
    MartonTerms t = *this;
    for (double* m : {&t.mu1, &t.mu2, &t.mu3, &t.mu4, &t.mu5, &t.mu6, &t.mu7}) {
      if (*m < -tol) throw DomainError("MartonTerms: negative mutual information");
      *m = std::max(0.0, *m);
    }
    return t;
  }

  bool binning_feasible() const { return mu1 <= mu2 + mu4; }
};

/// The five constraint groups as written, without clamping or the binning
/// constraint. Negative bounds give an empty polytope.
inline Polytope marton_polytope_raw(const MartonTerms& t) {
  Polytope p(3);
  p.add({1, 0, 0}, t.mu3);
  p.add({0, 1, 0}, t.mu5);
  p.add({0, 1, 0}, t.mu2 + t.mu6 - t.mu1);
  p.add({1, 0, 1}, t.mu3 + t.mu4 - t.mu1);
  p.add({0, 1, 1}, t.mu7);
  p.add({1, 1, 1}, t.mu2 + t.mu7 - t.mu1);
  p.add({1, 1, 1}, t.mu3 + t.mu6 - t.mu1);
  return p;
}

/// 3D region of the terms. When mu1 > mu2 + mu4 the region without the
/// constraint is contained in the W1-free region
///   R2 <= min{mu5, mu6 - mu4}, R1 + R3 <= mu3 - mu2, sum <= mu7 - mu4,
/// which is returned instead.
inline Polytope marton_region(const MartonTerms& t) {
  auto nn = [](double x) { return std::max(0.0, x); };
  Polytope p(3);
  if (!t.binning_feasible()) {
    p.add({0, 1, 0}, nn(std::min(t.mu5, t.mu6 - t.mu4)));
    p.add({1, 0, 1}, nn(t.mu3 - t.mu2));
    p.add({1, 1, 1}, nn(t.mu7 - t.mu4));
    return p;
  }
  p.add({1, 0, 0}, nn(t.mu3));
  p.add({0, 1, 0}, nn(t.mu5));
  p.add({0, 1, 0}, nn(t.mu2 + t.mu6 - t.mu1));
  p.add({1, 0, 1}, nn(t.mu3 + t.mu4 - t.mu1));
  p.add({0, 1, 1}, nn(t.mu7));
  p.add({1, 1, 1}, nn(t.mu2 + t.mu7 - t.mu1));
  p.add({1, 1, 1}, nn(t.mu3 + t.mu6 - t.mu1));
  return p;
}

/// Two-rate slice R3 = 0 of a 3D polytope.
inline Polytope slice_r3_zero(const Polytope& p3) {
  if (p3.dim() != 3) throw UsageError("slice_r3_zero: expects a 3D polytope");
  Polytope out(2);
  for (const auto& h : p3.halfspaces()) {
    if (h.weights[0] + h.weights[1] > 0.0) {
      out.add({h.weights[0], h.weights[1], 0.0}, h.bound);
    } else if (h.bound < 0.0) {
      out.add({1.0, 0.0, 0.0}, h.bound);
    }
  }
  return out;
}

}  // namespace fdcap
