#pragma once

// Brute-force junction oracle for tests: grid search over the feasible set,
// independent of the closed forms in the library.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "kinewave/junction.hpp"

namespace kinewave::testing {

inline std::vector<double> grid_with_end(double hi, double h) {
  std::vector<double> g;
  for (double v = 0.0; v < hi; v += h) g.push_back(v);
  g.push_back(std::max(0.0, hi));
  return g;
}

// Maximize q1 subject to q1 <= D1 and alpha_1j * q1 <= S_j.
inline JunctionFlows lp_diverge(double d1, double s2, double s3, double a12, double a13,
                                double h) {
  double best = 0.0;
  for (double q1 : grid_with_end(d1, h)) {
    if (a12 * q1 <= s2 + 1e-9 && a13 * q1 <= s3 + 1e-9) best = std::max(best, q1);
  }
  return {{best}, {a12 * best, a13 * best}};
}

// Maximize q4 + q5 subject to q4 <= D4, q5 <= D5, q4 + q5 <= S6, then pick
// the maximizer closest to the line q5 = p * q4.
inline JunctionFlows lp_merge(double d4, double d5, double s6, double p, double h) {
  struct Candidate {
    double q4, q5;
  };
  std::vector<Candidate> feasible;
  for (double q4 : grid_with_end(std::min(d4, s6), h)) {
    const double top = std::min(d5, s6 - q4);
    for (double q5 : grid_with_end(top, h)) feasible.push_back({q4, q5});
  }
  double best_total = -1.0;
  for (const auto& c : feasible) best_total = std::max(best_total, c.q4 + c.q5);
  Candidate pick{0.0, 0.0};
  double best_dist = std::numeric_limits<double>::infinity();
  for (const auto& c : feasible) {
    if (c.q4 + c.q5 < best_total - 1e-9) continue;
    const double dist = std::abs(c.q5 - p * c.q4) / std::sqrt(1.0 + p * p);
    if (dist < best_dist) {
      best_dist = dist;
      pick = c;
    }
  }
  return {{pick.q4, pick.q5}, {pick.q4 + pick.q5}};
}

}  // namespace kinewave::testing
