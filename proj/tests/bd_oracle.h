// Copyright 2026 The fcm-stats Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FCM_TESTS_BD_ORACLE_H_
#define FCM_TESTS_BD_ORACLE_H_

#include <cmath>
#include <utility>
#include <vector>

#include "fcm/metrics.h"

namespace fcm::testing {

// Natural cubic spline through (x, y) solved as a dense system, integrated with
// composite Simpson's rule. Shares no code with the library.
inline double OracleSplineIntegral(const std::vector<double>& x, const std::vector<double>& y,
                                   double lo, double hi) {
  const std::size_t n = x.size();
  std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
  a[0][0] = 1.0;
  a[n - 1][n - 1] = 1.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x[i] - x[i - 1], h1 = x[i + 1] - x[i];
    a[i][i - 1] = h0 / 6.0;
    a[i][i] = (h0 + h1) / 3.0;
    a[i][i + 1] = h1 / 6.0;
    a[i][n] = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    std::swap(a[c], a[piv]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k <= n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  std::vector<double> m(n);
  for (std::size_t i = 0; i < n; ++i) m[i] = a[i][n] / a[i][i];
  auto eval = [&](double t) {
    std::size_t i = 0;
    while (i + 2 < n && t > x[i + 1]) ++i;
    const double h = x[i + 1] - x[i];
    const double l = x[i + 1] - t, r = t - x[i];
    return m[i] * l * l * l / (6 * h) + m[i + 1] * r * r * r / (6 * h) +
           (y[i] / h - m[i] * h / 6) * l + (y[i + 1] / h - m[i + 1] * h / 6) * r;
  };
  const int steps = 20000;
  const double dx = (hi - lo) / steps;
  double sum = eval(lo) + eval(hi);
  for (int k = 1; k < steps; ++k) sum += eval(lo + k * dx) * (k % 2 ? 4 : 2);
  return sum * dx / 3.0;
}

inline double OracleBdRate(const std::vector<RateAccuracyPoint>& anchor,
                           const std::vector<RateAccuracyPoint>& test) {
  auto split = [](const std::vector<RateAccuracyPoint>& c, std::vector<double>& x, std::vector<double>& y) {
    for (const auto& p : c) {
      x.push_back(p.accuracy);
      y.push_back(std::log(p.rate));
    }
  };
  std::vector<double> ax, ay, tx, ty;
  split(anchor, ax, ay);
  split(test, tx, ty);
  const double lo = std::max(ax.front(), tx.front());
  const double hi = std::min(ax.back(), tx.back());
  const double diff = OracleSplineIntegral(tx, ty, lo, hi) - OracleSplineIntegral(ax, ay, lo, hi);
  return (std::exp(diff / (hi - lo)) - 1.0) * 100.0;
}

}  // namespace fcm::testing

#endif  // FCM_TESTS_BD_ORACLE_H_
