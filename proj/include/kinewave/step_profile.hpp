#pragma once

#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace kinewave {

/// Right-continuous piecewise-constant rate profile: value(t) = values[i]
/// for t in [times[i], times[i+1]), zero before times[0], and values.back()
/// after the last breakpoint. Used for origin demand and sink capacity.
class StepProfile {
 public:
  StepProfile() = default;
  /// Throws ValidationError unless times are strictly increasing and
  /// values are finite and nonnegative.
  StepProfile(std::vector<double> times, std::vector<double> values);

  /// The constant profile `value` on [0, inf).
  static StepProfile constant(double value);
  /// Per-step series on the grid t_n = n*step.
  static StepProfile from_series(double step, std::span<const double> rates);

  double value(double t) const;
  /// Integral of the profile over [0, t].
  double integral(double t) const;
  /// Smallest breakpoint strictly greater than t (infinity if none).
  double next_breakpoint(double t) const;

  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& values() const { return values_; }
  bool empty() const { return times_.empty(); }

  /// Adds `delta` to the rate on [t0, t1) (splitting pieces as needed).
  StepProfile perturbed(double t0, double t1, double delta) const;
  /// The profile on [0, t_end) and zero afterwards.
  StepProfile truncated(double t_end) const;

  friend bool operator==(const StepProfile&, const StepProfile&) = default;

 private:
  std::vector<double> times_;
  std::vector<double> values_;
};

}  // namespace kinewave
