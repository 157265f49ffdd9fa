#pragma once

#include <vector>

namespace kinewave {

/// Boundary fluxes resolved at a junction: exit flow of every incoming link
/// and entry flow of every outgoing link, in the node's link order.
struct JunctionFlows {
  std::vector<double> q_out;
  std::vector<double> q_in;

  double throughput() const;
};

/// FIFO diverge (1 -> 2): q_out1 = min{D1, S2/alpha12, S3/alpha13}, split by
/// the turning ratios. A zero ratio never binds.
JunctionFlows solve_diverge(double d1, double s2, double s3, double alpha12,
                            double alpha13);

/// Merge (2 -> 1): maximize q4 + q5 under q4 <= D4, q5 <= D5, q4 + q5 <= S6,
/// and among the maximizers take the point closest to the line q5 = p*q4.
JunctionFlows solve_merge(double d4, double d5, double s6, double p);

}  // namespace kinewave
