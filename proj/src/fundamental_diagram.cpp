#include "kinewave/fundamental_diagram.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kinewave/errors.hpp"

namespace kinewave {

namespace {

// Round-off slack on domain checks, relative to the scale of the bound.
constexpr double kDomainSlack = 1e-9;

}  // namespace

void LinkParams::validate() const {
  if (!(rho_jam > 0.0) || !(k > 0.0) || !(w > 0.0) || !(C > 0.0) ||
      !(L > 0.0)) {
    throw ValidationError("link parameters must all be strictly positive");
  }
  const double expected = expected_capacity();
  if (std::abs(C - expected) > 1e-9 * expected) {
    std::ostringstream os;
    os.precision(12);
    os << "capacity C=" << C << " is inconsistent with k*w*rho_jam/(k+w)="
       << expected;
    throw ValidationError(os.str());
  }
}

double flux(double rho, const LinkParams& p) {
  const double slack = kDomainSlack * p.rho_jam;
  if (rho < -slack || rho > p.rho_jam + slack || std::isnan(rho)) {
    throw DomainError("density outside [0, rho_jam]");
  }
  rho = std::clamp(rho, 0.0, p.rho_jam);
  if (rho <= p.critical_density()) return p.k * rho;
  return p.w * (p.rho_jam - rho);
}

double psi(const TrafficState& s, const LinkParams& p) {
  const double slack = kDomainSlack * p.C;
  if (s.q < -slack || s.q > p.C + slack || std::isnan(s.q)) {
    throw DomainError("flow outside [0, C]");
  }
  const double q = std::clamp(s.q, 0.0, p.C);
  return s.r == Regime::Free ? q / p.k : p.rho_jam - q / p.w;
}

TrafficState state_from_density(double rho, const LinkParams& p) {
  const double q = flux(rho, p);
  return {q, rho <= p.critical_density() ? Regime::Free : Regime::Congested};
}

double legendre(double u, const LinkParams& p) {
  if (u < -p.w || u > p.k || std::isnan(u)) {
    throw DomainError("legendre argument outside [-w, k]");
  }
  return p.C - p.critical_density() * u;
}

double shock_speed_density(double rho_left, double rho_right,
                           const LinkParams& p) {
  const double drho = rho_right - rho_left;
  if (std::abs(drho) <= 1e-14 * p.rho_jam) {
    throw DomainError("shock speed undefined for equal densities");
  }
  return (flux(rho_right, p) - flux(rho_left, p)) / drho;
}

double shock_speed(const TrafficState& left, const TrafficState& right,
                   const LinkParams& p) {
  return shock_speed_density(psi(left, p), psi(right, p), p);
}

}  // namespace kinewave
