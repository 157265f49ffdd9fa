#include "kinewave/step_profile.hpp"

#include <algorithm>
#include <cmath>

#include "kinewave/errors.hpp"

namespace kinewave {

StepProfile::StepProfile(std::vector<double> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
  if (times_.size() != values_.size()) {
    throw ValidationError("step profile: times and values differ in length");
  }
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(times_[i]) || !std::isfinite(values_[i])) {
      throw ValidationError("step profile: non-finite entry");
    }
    if (values_[i] < 0.0) {
      throw ValidationError("step profile: negative rate");
    }
    if (i > 0 && !(times_[i] > times_[i - 1])) {
      throw ValidationError("step profile: times must be strictly increasing");
    }
  }
}

StepProfile StepProfile::constant(double value) {
  return StepProfile({0.0}, {value});
}

StepProfile StepProfile::from_series(double step, std::span<const double> rates) {
  std::vector<double> t(rates.size());
  for (std::size_t n = 0; n < rates.size(); ++n) t[n] = static_cast<double>(n) * step;
  return StepProfile(std::move(t), std::vector<double>(rates.begin(), rates.end()));
}

double StepProfile::value(double t) const {
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  if (it == times_.begin()) return 0.0;
  return values_[static_cast<std::size_t>(it - times_.begin()) - 1];
}

double StepProfile::integral(double t) const {
  double total = 0.0;
  for (std::size_t i = 0; i < times_.size(); ++i) {
    const double lo = std::max(times_[i], 0.0);
    const double hi = std::min(i + 1 < times_.size() ? times_[i + 1] : t, t);
    if (hi > lo) total += values_[i] * (hi - lo);
  }
  return total;
}

double StepProfile::next_breakpoint(double t) const {
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  return it == times_.end() ? std::numeric_limits<double>::infinity() : *it;
}

StepProfile StepProfile::perturbed(double t0, double t1, double delta) const {
  std::vector<double> cuts = times_;
  cuts.push_back(t0);
  cuts.push_back(t1);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<double> vals;
  vals.reserve(cuts.size());
  for (double c : cuts) {
    double v = value(c);
    if (c >= t0 && c < t1) v = std::max(0.0, v + delta);
    vals.push_back(v);
  }
  return StepProfile(std::move(cuts), std::move(vals));
}

StepProfile StepProfile::truncated(double t_end) const {
  std::vector<double> t;
  std::vector<double> v;
  for (std::size_t i = 0; i < times_.size() && times_[i] < t_end; ++i) {
    t.push_back(times_[i]);
    v.push_back(values_[i]);
  }
  t.push_back(t_end);
  v.push_back(0.0);
  return StepProfile(std::move(t), std::move(v));
}

}  // namespace kinewave
