#include "kinewave/cumulative_curve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kinewave/errors.hpp"

namespace kinewave {

CumulativeCurve::CumulativeCurve(double cap, double t0)
    : cap_(cap), times_{t0}, counts_{0.0} {
  if (!(cap > 0.0)) throw ValidationError("cumulative curve: cap must be positive");
}

CumulativeCurve::CumulativeCurve(double cap, std::vector<double> times,
                                 std::vector<double> counts)
    : cap_(cap) {
  if (!(cap > 0.0)) throw ValidationError("cumulative curve: cap must be positive");
  if (times.empty() || times.size() != counts.size()) {
    throw ValidationError("cumulative curve: need matching, nonempty breakpoints");
  }
  if (counts.front() != 0.0) {
    throw ValidationError("cumulative curve: must start from zero vehicles");
  }
  times_.push_back(times.front());
  counts_.push_back(0.0);
  for (std::size_t i = 1; i < times.size(); ++i) append_point(times[i], counts[i]);
}

double CumulativeCurve::eval(double t) const {
  if (t <= times_.front()) return counts_.front();
  if (t >= times_.back()) return counts_.back();
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const auto i = static_cast<std::size_t>(it - times_.begin());
  const double t0 = times_[i - 1];
  const double t1 = times_[i];
  const double u = (t - t0) / (t1 - t0);
  return counts_[i - 1] + u * (counts_[i] - counts_[i - 1]);
}

double CumulativeCurve::eval_strict(double t, double slack) const {
  if (t > times_.back() + slack) {
    std::ostringstream os;
    os << "cumulative curve queried at t=" << t << " beyond its last breakpoint "
       << times_.back();
    throw SimulationError(os.str());
  }
  return eval(t);
}

void CumulativeCurve::append(double t_next, double rate) {
  if (!(t_next > times_.back())) {
    throw ValidationError("cumulative curve: time must increase");
  }
  if (!(rate >= 0.0) || rate > cap_ * (1.0 + 1e-12)) {
    std::ostringstream os;
    os.precision(12);
    os << "cumulative curve: rate " << rate << " outside [0, " << cap_ << "]";
    throw ValidationError(os.str());
  }
  counts_.push_back(counts_.back() + rate * (t_next - times_.back()));
  times_.push_back(t_next);
}

void CumulativeCurve::append_point(double t, double count) {
  if (!(t > times_.back())) {
    throw ValidationError("cumulative curve: time must increase");
  }
  const double rise = count - counts_.back();
  if (rise < -kLipschitzSlack) {
    throw ValidationError("cumulative curve: count must be nondecreasing");
  }
  if (rise > cap_ * (t - times_.back()) + kLipschitzSlack) {
    throw ValidationError("cumulative curve: slope exceeds the Lipschitz bound");
  }
  times_.push_back(t);
  counts_.push_back(std::max(count, counts_.back()));
}

double vehicles_on_link(const CumulativeCurve& up, const CumulativeCurve& down, double t) {
  return up.eval(t) - down.eval(t);
}

double sup_distance(const CumulativeCurve& a, const CumulativeCurve& b, double t_lo,
                    double t_hi) {
  std::vector<double> ts{t_lo, t_hi};
  for (double t : a.times()) {
    if (t > t_lo && t < t_hi) ts.push_back(t);
  }
  for (double t : b.times()) {
    if (t > t_lo && t < t_hi) ts.push_back(t);
  }
  double m = 0.0;
  for (double t : ts) m = std::max(m, std::abs(a.eval(t) - b.eval(t)));
  return m;
}

}  // namespace kinewave
