#include "kinewave/junction.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace kinewave {

double JunctionFlows::throughput() const {
  return std::accumulate(q_out.begin(), q_out.end(), 0.0);
}

JunctionFlows solve_diverge(double d1, double s2, double s3, double alpha12,
                            double alpha13) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const double cap2 = alpha12 > 0.0 ? s2 / alpha12 : inf;
  const double cap3 = alpha13 > 0.0 ? s3 / alpha13 : inf;
  const double q1 = std::max(0.0, std::min({d1, cap2, cap3}));
  const double q2 = alpha13 > 0.0 ? alpha12 * q1 : q1;
  return {{q1}, {q2, q1 - q2}};
}

JunctionFlows solve_merge(double d4, double d5, double s6, double p) {
  d4 = std::max(0.0, d4);
  d5 = std::max(0.0, d5);
  s6 = std::max(0.0, s6);
  if (d4 + d5 <= s6) return {{d4, d5}, {d4 + d5}};

  // Supply binds: the maximizers form the segment q4 + q5 = s6 inside the
  // demand box; the priority point is its intersection with q5 = p*q4.
  double q4 = s6 / (1.0 + p);
  double q5 = s6 - q4;
  if (q4 > d4) {
    q4 = d4;
    q5 = s6 - d4;
  } else if (q5 > d5) {
    q5 = d5;
    q4 = s6 - d5;
  }
  return {{q4, q5}, {q4 + q5}};
}

}  // namespace kinewave
