#include "kinewave/ctm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kinewave/errors.hpp"
#include "kinewave/junction.hpp"

namespace kinewave::oracle {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

bool is_multiple(double a, double b) {
  const double r = a / b;
  return std::abs(r - std::round(r)) <= 1e-9 * std::max(1.0, r);
}

double mean_rate(const StepProfile& p, double t, double dt) {
  return (p.integral(t + dt) - p.integral(t)) / dt;
}

}  // namespace

CtmResult ctm_run(const Network& net, double dx, double dt, const DemandProfiles& demand,
                  double horizon) {
  net.validate();
  if (!(dx > 0.0) || !(dt > 0.0) || !(horizon > 0.0)) {
    throw ValidationError("ctm: dx, dt and horizon must be positive");
  }
  if (!is_multiple(horizon, dt)) throw ValidationError("ctm: horizon is not a multiple of dt");

  const std::size_t nl = net.link_count();
  std::vector<std::vector<double>> rho(nl);
  CtmResult res;
  res.dx = dx;
  res.dt = dt;
  for (std::size_t i = 0; i < nl; ++i) {
    const auto& p = net.link(i).params;
    if (dt > dx / std::max(p.k, p.w) * (1.0 + 1e-9)) {
      std::ostringstream os;
      os.precision(12);
      os << "ctm: CFL violated on link '" << net.link(i).id << "': dt=" << dt
         << " > dx/max(k,w)=" << dx / std::max(p.k, p.w);
      throw ValidationError(os.str());
    }
    if (!is_multiple(p.L, dx)) {
      throw ValidationError("ctm: dx does not divide the length of link '" + net.link(i).id + "'");
    }
    rho[i].assign(static_cast<std::size_t>(std::llround(p.L / dx)), 0.0);
    res.n_up.emplace_back(p.C);
    res.n_down.emplace_back(p.C);
  }
  res.spillback_onset.assign(nl, std::nullopt);

  auto cell_demand = [](double r, const LinkParams& p) { return std::min(p.k * r, p.C); };
  auto cell_supply = [](double r, const LinkParams& p) {
    return std::max(0.0, std::min(p.C, p.w * (p.rho_jam - r)));
  };

  std::vector<double> queue(net.node_count(), 0.0);
  const auto steps = static_cast<std::size_t>(std::llround(horizon / dt));
  std::vector<double> q_in(nl), q_out(nl), d(nl), s(nl);

  for (std::size_t n = 0; n < steps; ++n) {
    const double t = static_cast<double>(n) * dt;
    for (std::size_t i = 0; i < nl; ++i) {
      const auto& p = net.link(i).params;
      d[i] = cell_demand(rho[i].back(), p);
      s[i] = cell_supply(rho[i].front(), p);
    }
    for (std::size_t v = 0; v < net.node_count(); ++v) {
      const auto& node = net.node(v);
      std::visit(
          Overloaded{
              [&](const Diverge& dv) {
                const auto f = solve_diverge(d[node.incoming[0]], s[node.outgoing[0]],
                                             s[node.outgoing[1]], dv.alpha12, dv.alpha13);
                q_out[node.incoming[0]] = f.q_out[0];
                q_in[node.outgoing[0]] = f.q_in[0];
                q_in[node.outgoing[1]] = f.q_in[1];
              },
              [&](const Merge& m) {
                const auto f = solve_merge(d[node.incoming[0]], d[node.incoming[1]],
                                           s[node.outgoing[0]], m.p);
                q_out[node.incoming[0]] = f.q_out[0];
                q_out[node.incoming[1]] = f.q_out[1];
                q_in[node.outgoing[0]] = f.q_in[0];
              },
              [&](const Origin& o) {
                const auto j = node.outgoing[0];
                const auto it = demand.find(node.id);
                const double h = it == demand.end() ? 0.0 : mean_rate(it->second, t, dt);
                const double cap = o.capacity.value_or(net.link(j).params.C);
                const double rel = std::max(0.0, std::min({h + queue[v] / dt, cap, s[j]}));
                queue[v] = std::max(0.0, queue[v] + (h - rel) * dt);
                q_in[j] = rel;
              },
              [&](const Destination& dst) {
                const auto i = node.incoming[0];
                const double sink = dst.supply ? mean_rate(*dst.supply, t, dt)
                                               : std::numeric_limits<double>::infinity();
                q_out[i] = std::min(d[i], sink);
              }},
          node.kind);
    }
    for (std::size_t i = 0; i < nl; ++i) {
      const auto& p = net.link(i).params;
      auto& r = rho[i];
      const std::size_t m = r.size();
      std::vector<double> flux(m + 1);
      flux[0] = q_in[i];
      flux[m] = q_out[i];
      for (std::size_t c = 1; c < m; ++c) {
        flux[c] = std::min(cell_demand(r[c - 1], p), cell_supply(r[c], p));
      }
      for (std::size_t c = 0; c < m; ++c) {
        r[c] = std::clamp(r[c] + dt / dx * (flux[c] - flux[c + 1]), 0.0, p.rho_jam);
      }
      res.n_up[i].append(t + dt, std::clamp(q_in[i], 0.0, p.C));
      res.n_down[i].append(t + dt, std::clamp(q_out[i], 0.0, p.C));
      if (!res.spillback_onset[i] && r.front() > p.critical_density() * (1.0 + 1e-6)) {
        res.spillback_onset[i] = t + dt;
      }
    }
  }
  res.final_density = std::move(rho);
  return res;
}

}  // namespace kinewave::oracle
