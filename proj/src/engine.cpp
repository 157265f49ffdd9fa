#include "kinewave/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "kinewave/errors.hpp"
#include "kinewave/junction.hpp"

namespace kinewave {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

constexpr double kFlowSlack = 1e-9;

// Mean rate of a profile over [t, t + dt]; the plain value when no
// breakpoint falls strictly inside the step.
double step_rate(const StepProfile& profile, double t, double dt) {
  if (profile.next_breakpoint(t) >= t + dt * (1.0 - 1e-9)) return profile.value(t);
  return (profile.integral(t + dt) - profile.integral(t)) / dt;
}

double profile_peak(const StepProfile* profile) {
  double m = 1.0;
  if (profile) {
    for (double v : profile->values()) m = std::max(m, v);
  }
  return m;
}

void check_flow(const Network& net, const Node& node, std::size_t link, double q,
                const char* what) {
  const double cap = net.link(link).params.C;
  if (!(q >= -kFlowSlack) || q > cap + kFlowSlack) {
    std::ostringstream os;
    os.precision(12);
    os << "node '" << node.id << "' (" << kind_name(node.kind) << "): " << what
       << " flow " << q << " on link '" << net.link(link).id << "' outside [0, " << cap
       << "]";
    throw SimulationError(os.str());
  }
}

}  // namespace

void SimConfig::validate(const Network& net) const {
  std::ostringstream os;
  os.precision(12);
  if (!(dt > 0.0)) throw ValidationError("dt must be positive");
  if (!(horizon > 0.0)) throw ValidationError("horizon must be positive");
  if (!(eps_n > 0.0)) throw ValidationError("eps_N must be positive");
  const double limit = net.min_wave_time();
  if (dt > limit * (1.0 + 1e-9)) {
    os << "dt=" << dt << " exceeds the smallest link wave time min(L/k, L/w)=" << limit;
    throw ValidationError(os.str());
  }
  const double ratio = horizon / dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
    os << "horizon=" << horizon << " is not a multiple of dt=" << dt;
    throw ValidationError(os.str());
  }
  if (origin_model == OriginModel::VirtualLink && !(virtual_length > 0.0)) {
    throw ValidationError("virtual_length must be positive");
  }
}

std::size_t SimConfig::steps() const {
  return static_cast<std::size_t>(std::llround(horizon / dt));
}

OriginQueue::OriginQueue(std::string id, double desired_cap, double release_cap)
    : node(std::move(id)), desired(desired_cap), released(release_cap), queue{0.0} {}

SimulationState initial_state(const Network& net, const DemandProfiles& demand,
                              const SimConfig& cfg) {
  SimulationState s;
  for (const auto& l : net.links()) s.links.emplace_back(l.params, cfg.dt);
  for (const auto& node : net.nodes()) {
    const auto* origin = std::get_if<Origin>(&node.kind);
    if (!origin) continue;
    const auto it = demand.find(node.id);
    const StepProfile* profile = it == demand.end() ? nullptr : &it->second;
    const auto& first = net.link(node.outgoing.at(0)).params;
    const double release_cap = origin->capacity.value_or(first.C);
    OriginQueue q(node.id, std::max(profile_peak(profile), release_cap), release_cap);
    if (cfg.origin_model == OriginModel::VirtualLink) {
      LinkParams vp = first;
      vp.L = cfg.virtual_length;
      q.virtual_link.emplace(vp, cfg.dt);
    }
    s.origins.push_back(std::move(q));
  }
  return s;
}

void step(const Network& net, const DemandProfiles& demand, const SimConfig& cfg,
          SimulationState& state) {
  const double dt = cfg.dt;
  const double t = static_cast<double>(state.n) * dt;
  const std::size_t nl = net.link_count();

  std::vector<double> d(nl), s(nl);
  for (std::size_t i = 0; i < nl; ++i) {
    d[i] = kinewave::demand(state.links[i], t, dt, cfg.eps_n);
    s[i] = kinewave::supply(state.links[i], t, dt, cfg.eps_n);
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> q_in(nl, nan), q_out(nl, nan);
  std::size_t origin_slot = 0;

  for (const auto& node : net.nodes()) {
    std::visit(
        Overloaded{
            [&](const Diverge& dv) {
              const auto i = node.incoming[0];
              const auto j2 = node.outgoing[0];
              const auto j3 = node.outgoing[1];
              const auto f = solve_diverge(d[i], s[j2], s[j3], dv.alpha12, dv.alpha13);
              q_out[i] = f.q_out[0];
              q_in[j2] = f.q_in[0];
              q_in[j3] = f.q_in[1];
            },
            [&](const Merge& m) {
              const auto i4 = node.incoming[0];
              const auto i5 = node.incoming[1];
              const auto j6 = node.outgoing[0];
              const auto f = solve_merge(d[i4], d[i5], s[j6], m.p);
              q_out[i4] = f.q_out[0];
              q_out[i5] = f.q_out[1];
              q_in[j6] = f.q_in[0];
            },
            [&](const Origin& o) {
              auto& oq = state.origins.at(origin_slot++);
              const auto j = node.outgoing[0];
              const auto it = demand.find(node.id);
              const double h = it == demand.end() ? 0.0 : step_rate(it->second, t, dt);
              const double cap = o.capacity.value_or(net.link(j).params.C);
              double release;
              if (oq.virtual_link) {
                auto& vl = *oq.virtual_link;
                if (h > vl.params.C * (1.0 + 1e-12)) {
                  throw SimulationError("node '" + node.id +
                                        "' (origin): desired rate exceeds the "
                                        "virtual link capacity");
                }
                release = std::min({kinewave::demand(vl, t, dt, cfg.eps_n), cap, s[j]});
                vl.advance(h, release);
              } else {
                release = std::min({h + oq.queue.back() / dt, cap, s[j]});
              }
              release = std::max(0.0, release);
              oq.desired.append(t + dt, h);
              oq.released.append(t + dt, release);
              oq.queue.push_back(std::max(0.0, oq.desired.last_count() - oq.released.last_count()));
              q_in[j] = release;
            },
            [&](const Destination& dst) {
              const auto i = node.incoming[0];
              const double sink =
                  dst.supply ? step_rate(*dst.supply, t, dt) : std::numeric_limits<double>::infinity();
              q_out[i] = std::min(d[i], sink);
            }},
        node.kind);
  }

  for (const auto& node : net.nodes()) {
    for (auto i : node.incoming) check_flow(net, node, i, q_out[i], "exit");
    for (auto j : node.outgoing) check_flow(net, node, j, q_in[j], "entry");
  }
  for (std::size_t i = 0; i < nl; ++i) {
    const double cap = net.link(i).params.C;
    state.links[i].advance(std::clamp(q_in[i], 0.0, cap), std::clamp(q_out[i], 0.0, cap));
  }
  ++state.n;
}

SimOutput run(const Network& net, const DemandProfiles& demand, const SimConfig& cfg) {
  net.validate();
  cfg.validate(net);
  for (const auto& [id, profile] : demand) {
    const auto v = net.find_node(id);
    if (!v || !std::holds_alternative<Origin>(net.node(*v).kind)) {
      throw ValidationError("demand given for '" + id + "', which is not an origin node");
    }
  }

  const auto start = std::chrono::steady_clock::now();
  SimulationState state = initial_state(net, demand, cfg);
  const std::size_t steps = cfg.steps();
  for (std::size_t n = 0; n < steps; ++n) step(net, demand, cfg, state);

  SimOutput out;
  out.config = cfg;
  out.times.resize(steps + 1);
  for (std::size_t n = 0; n <= steps; ++n) out.times[n] = static_cast<double>(n) * cfg.dt;
  for (const auto& l : net.links()) out.link_ids.push_back(l.id);
  out.spillback.resize(net.link_count());
  for (std::size_t i = 0; i < net.link_count(); ++i) {
    auto& flags = out.spillback[i];
    flags.reserve(steps + 1);
    for (double t : out.times) {
      flags.push_back(detect_spillback(state.links[i], t, cfg.eps_n) ? 1 : 0);
    }
  }
  out.links = std::move(state.links);
  out.origins = std::move(state.origins);
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::vector<double> generate_inflow(double cap, double t_begin, double t_end, double dt,
                                    double horizon, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  const auto steps = static_cast<std::size_t>(std::llround(horizon / dt));
  std::vector<double> series(steps, 0.0);
  const double tol = 1e-9 * dt;
  for (std::size_t n = 0; n < steps; ++n) {
    const double t0 = static_cast<double>(n) * dt;
    const double t1 = static_cast<double>(n + 1) * dt;
    if (t0 >= t_begin - tol && t1 <= t_end + tol) {
      const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
      series[n] = cap * u;
    }
  }
  return series;
}

double vehicle_balance(const Network& net, const SimOutput& out) {
  const double t = out.times.back();
  double released = 0.0;
  for (const auto& o : out.origins) released += o.released.eval(t);
  double on_links = 0.0;
  for (const auto& l : out.links) on_links += vehicles_on_link(l.n_up, l.n_down, t);
  double delivered = 0.0;
  for (const auto& node : net.nodes()) {
    if (std::holds_alternative<Destination>(node.kind)) {
      delivered += out.links[node.incoming[0]].n_down.eval(t);
    }
  }
  return released - on_links - delivered;
}

}  // namespace kinewave
