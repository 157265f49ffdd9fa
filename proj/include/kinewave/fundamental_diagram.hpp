#pragma once

#include <cstdint>

namespace kinewave {

/// Triangular fundamental diagram and geometry of one link.
/// Units: vehicle, mile, hour.
struct LinkParams {
  double rho_jam = 0.0;  // jam density [veh/mile]
  double k = 0.0;        // forward wave speed [mile/h]
  double w = 0.0;        // backward wave speed [mile/h]
  double C = 0.0;        // capacity [veh/h]
  double L = 0.0;        // length [mile]

  /// Validates positivity and C == k*w*rho_jam/(k+w) to 1e-9 relative.
  /// Throws ValidationError naming the expected capacity otherwise.
  void validate() const;

  double critical_density() const { return C / k; }
  double expected_capacity() const { return k * w * rho_jam / (k + w); }
  double jam_vehicles() const { return rho_jam * L; }
  double free_flow_time() const { return L / k; }
  double backward_wave_time() const { return L / w; }
};

enum class Regime : std::uint8_t { Free = 0, Congested = 1 };

/// Flow/regime pair; together with the link parameters it determines
/// the density uniquely.
struct TrafficState {
  double q = 0.0;
  Regime r = Regime::Free;

  friend bool operator==(const TrafficState&, const TrafficState&) = default;
};

/// f(rho). Throws DomainError outside [0, rho_jam].
double flux(double rho, const LinkParams& p);

/// psi(q, r): the density of a flow/regime pair.
/// Throws DomainError if q is outside [0, C].
double psi(const TrafficState& s, const LinkParams& p);

/// Inverse of psi. The capacity state rho* maps to (C, Free).
TrafficState state_from_density(double rho, const LinkParams& p);

/// Concave transform sup_rho {f(rho) - u*rho} = C - rho*·u on [-w, k].
double legendre(double u, const LinkParams& p);

/// Rankine-Hugoniot speed of the discontinuity (left | right).
/// Throws DomainError when both states have the same density.
double shock_speed(const TrafficState& left, const TrafficState& right,
                   const LinkParams& p);

/// Same as shock_speed but on raw densities.
double shock_speed_density(double rho_left, double rho_right,
                           const LinkParams& p);

}  // namespace kinewave
