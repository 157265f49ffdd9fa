#pragma once

#include <cstddef>
#include <vector>

namespace kinewave {

/// Piecewise-linear, nondecreasing cumulative vehicle count N(t) at one link
/// boundary, starting from N(0) = 0 and Lipschitz with constant `cap`.
///
/// Queries before the first breakpoint return 0 (the network starts empty);
/// queries past the last breakpoint hold the last value. `eval_strict`
/// rejects the latter, which inside the engine would mean reading the future.
class CumulativeCurve {
 public:
  /// Absolute slack on the Lipschitz bound, in vehicles.
  static constexpr double kLipschitzSlack = 1e-9;

  /// The curve {(t0, 0)}.
  explicit CumulativeCurve(double cap, double t0 = 0.0);
  /// Throws ValidationError if the breakpoints violate ordering,
  /// monotonicity, the Lipschitz bound, or start from a nonzero count.
  CumulativeCurve(double cap, std::vector<double> times, std::vector<double> counts);

  double eval(double t) const;
  /// Like eval, but throws SimulationError for t beyond the last breakpoint
  /// (more than `slack` hours).
  double eval_strict(double t, double slack = 1e-9) const;

  /// Appends (t_next, N_last + rate*(t_next - t_last)).
  /// Throws ValidationError if t_next <= t_last or rate is outside [0, cap].
  void append(double t_next, double rate);
  /// Appends an explicit breakpoint; same checks as the constructor.
  void append_point(double t, double count);

  double cap() const { return cap_; }
  double last_time() const { return times_.back(); }
  double last_count() const { return counts_.back(); }
  std::size_t size() const { return times_.size(); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& counts() const { return counts_; }

 private:
  double cap_;
  std::vector<double> times_;
  std::vector<double> counts_;
};

/// N_up(t) - N_down(t): vehicles currently on the link.
double vehicles_on_link(const CumulativeCurve& up, const CumulativeCurve& down, double t);

/// max |a(t) - b(t)| over the union of both breakpoint sets (exact for
/// piecewise-linear curves on [t_lo, t_hi]).
double sup_distance(const CumulativeCurve& a, const CumulativeCurve& b, double t_lo,
                    double t_hi);

}  // namespace kinewave
