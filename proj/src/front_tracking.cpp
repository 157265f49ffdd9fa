#include "kinewave/front_tracking.hpp"

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

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Wave {
  double speed;
  double rho_left;
  double rho_right;
};

// Riemann solution on densities for the triangular flux.
std::vector<Wave> riemann_waves(double rho_l, double rho_r, const LinkParams& p) {
  const double tol = 1e-12 * p.rho_jam;
  if (std::abs(rho_l - rho_r) <= tol) return {};
  const double crit = p.critical_density();
  if (rho_l < rho_r) {
    return {{shock_speed_density(rho_l, rho_r, p), rho_l, rho_r}};
  }
  if (rho_r >= crit - tol) return {{-p.w, rho_l, rho_r}};
  if (rho_l <= crit + tol) return {{p.k, rho_l, rho_r}};
  return {{-p.w, rho_l, crit}, {p.k, crit, rho_r}};
}

// Regions of constant density separated by fronts.
struct LinkWaves {
  std::vector<double> rho;  // size = x.size() + 1
  std::vector<double> x;
  std::vector<double> s;
};

class Tracker {
 public:
  Tracker(const Network& net, const DemandProfiles& demand, double horizon,
          const std::map<std::size_t, InitialData>& initial, const FrontTrackOptions& options)
      : net_(net), demand_(demand), horizon_(horizon), options_(options) {
    const std::size_t nl = net.link_count();
    const std::size_t nv = net.node_count();
    waves_.resize(nl);
    tail_.resize(nl);
    head_.resize(nl);
    totals_up_.assign(nl, 0.0);
    totals_down_.assign(nl, 0.0);
    queue_.assign(nv, 0.0);
    desired_.assign(nv, 0.0);
    release_.assign(nv, 0.0);
    flows_.resize(nv);
    dirty_.assign(nv, 1);
    sol_.horizon = horizon;
    for (std::size_t i = 0; i < nl; ++i) {
      const auto& p = net.link(i).params;
      sol_.params.push_back(p);
      sol_.n_up.emplace_back(p.C);
      sol_.n_down.emplace_back(p.C);
      tail_[i] = net.tail_node(i);
      head_[i] = net.head_node(i);
      auto& lw = waves_[i];
      const auto it = initial.find(i);
      if (it == initial.end()) {
        lw.rho = {0.0};
        continue;
      }
      const auto& init = it->second;
      if (init.states.size() != init.breakpoints.size() + 1) {
        throw ValidationError("initial data: need one more state than breakpoints");
      }
      lw.rho.push_back(psi(init.states[0], p));
      for (std::size_t k = 0; k < init.breakpoints.size(); ++k) {
        const double xb = init.breakpoints[k];
        if (!(xb > 0.0 && xb < p.L)) {
          throw ValidationError("initial data: breakpoints must lie inside the link");
        }
        insert_between(i, lw.rho.size() - 1, psi(init.states[k + 1], p), xb);
      }
    }
  }

  FrontTrackingSolution run() {
    process_events();
    snapshot();
    while (t_ < horizon_) {
      const double t_next = std::min(next_event_time(), horizon_);
      advance(std::max(t_next, t_));
      if (t_ >= horizon_) break;
      process_events();
      snapshot();
      if (++sol_.events > options_.event_cap) {
        std::ostringstream os;
        os << "front tracking exceeded the event cap (" << options_.event_cap << ") at t=" << t_;
        throw SimulationError(os.str());
      }
    }
    flush_curves();
    snapshot();
    return std::move(sol_);
  }

 private:
  const LinkParams& params(std::size_t i) const { return net_.link(i).params; }
  double xtol(std::size_t i) const { return 1e-10 * params(i).L; }

  // Inserts RP(rho[r], new_right) fronts at position xb, with new_right
  // becoming region r + 1 (the former right neighbour, if any, shifts).
  void insert_between(std::size_t link, std::size_t r, double new_right, double xb) {
    auto& lw = waves_[link];
    const auto waves = riemann_waves(lw.rho[r], new_right, params(link));
    if (waves.empty()) return;
    std::vector<double> xs, ss, rhos;
    for (const auto& w : waves) {
      xs.push_back(xb);
      ss.push_back(w.speed);
      rhos.push_back(w.rho_right);
    }
    lw.x.insert(lw.x.begin() + static_cast<std::ptrdiff_t>(r), xs.begin(), xs.end());
    lw.s.insert(lw.s.begin() + static_cast<std::ptrdiff_t>(r), ss.begin(), ss.end());
    lw.rho.insert(lw.rho.begin() + static_cast<std::ptrdiff_t>(r) + 1, rhos.begin(),
                  rhos.end());
  }

  double next_event_time() const {
    double best = kInf;
    for (std::size_t i = 0; i < waves_.size(); ++i) {
      const auto& lw = waves_[i];
      const double len = params(i).L;
      for (std::size_t k = 0; k + 1 < lw.x.size(); ++k) {
        if (lw.s[k] > lw.s[k + 1]) {
          best = std::min(best, t_ + std::max(0.0, lw.x[k + 1] - lw.x[k]) / (lw.s[k] - lw.s[k + 1]));
        }
      }
      if (!lw.x.empty()) {
        if (lw.s.front() < 0.0) best = std::min(best, t_ + std::max(0.0, lw.x.front()) / -lw.s.front());
        if (lw.s.back() > 0.0) best = std::min(best, t_ + std::max(0.0, len - lw.x.back()) / lw.s.back());
      }
    }
    for (std::size_t v = 0; v < net_.node_count(); ++v) {
      const auto& node = net_.node(v);
      if (std::holds_alternative<Origin>(node.kind)) {
        if (const auto it = demand_.find(node.id); it != demand_.end()) {
          best = std::min(best, it->second.next_breakpoint(t_));
        }
        if (queue_[v] > 0.0 && release_[v] > desired_[v]) {
          best = std::min(best, t_ + queue_[v] / (release_[v] - desired_[v]));
        }
      } else if (const auto* d = std::get_if<Destination>(&node.kind); d && d->supply) {
        best = std::min(best, d->supply->next_breakpoint(t_));
      }
    }
    return best;
  }

  void advance(double t_next) {
    const double dt = t_next - t_;
    for (std::size_t i = 0; i < waves_.size(); ++i) {
      auto& lw = waves_[i];
      const auto& p = params(i);
      for (std::size_t k = 0; k < lw.x.size(); ++k) {
        lw.x[k] = std::clamp(lw.x[k] + lw.s[k] * dt, 0.0, p.L);
      }
      totals_up_[i] += flux(lw.rho.front(), p) * dt;
      totals_down_[i] += flux(lw.rho.back(), p) * dt;
    }
    for (std::size_t v = 0; v < queue_.size(); ++v) {
      queue_[v] = std::max(0.0, queue_[v] + (desired_[v] - release_[v]) * dt);
    }
    t_ = t_next;
    flush_curves();
  }

  void flush_curves() {
    for (std::size_t i = 0; i < waves_.size(); ++i) {
      if (t_ > sol_.n_up[i].last_time() + 1e-12) {
        sol_.n_up[i].append_point(t_, totals_up_[i]);
        sol_.n_down[i].append_point(t_, totals_down_[i]);
      }
    }
  }

  void resolve_collisions() {
    for (std::size_t i = 0; i < waves_.size(); ++i) {
      auto& lw = waves_[i];
      bool changed = true;
      while (changed) {
        changed = false;
        for (std::size_t k = 0; k + 1 < lw.x.size(); ++k) {
          if (lw.x[k + 1] - lw.x[k] <= xtol(i) && lw.s[k] >= lw.s[k + 1]) {
            const double xc = 0.5 * (lw.x[k] + lw.x[k + 1]);
            lw.x.erase(lw.x.begin() + static_cast<std::ptrdiff_t>(k), lw.x.begin() + static_cast<std::ptrdiff_t>(k) + 2);
            lw.s.erase(lw.s.begin() + static_cast<std::ptrdiff_t>(k), lw.s.begin() + static_cast<std::ptrdiff_t>(k) + 2);
            lw.rho.erase(lw.rho.begin() + static_cast<std::ptrdiff_t>(k) + 1);
            const double right = lw.rho[k + 1];
            lw.rho.erase(lw.rho.begin() + static_cast<std::ptrdiff_t>(k) + 1);
            insert_between(i, k, right, xc);
            if (lw.rho.size() == lw.x.size()) lw.rho.insert(lw.rho.begin() + static_cast<std::ptrdiff_t>(k) + 1, right);
            changed = true;
            break;
          }
        }
      }
    }
  }

  void resolve_arrivals() {
    for (std::size_t i = 0; i < waves_.size(); ++i) {
      auto& lw = waves_[i];
      const auto& p = params(i);
      while (!lw.x.empty() && lw.x.front() <= xtol(i) && lw.s.front() <= 0.0) {
        const double old_flux = flux(lw.rho.front(), p);
        lw.x.erase(lw.x.begin());
        lw.s.erase(lw.s.begin());
        lw.rho.erase(lw.rho.begin());
        arrivals_.push_back({tail_[i], i, flux(lw.rho.front(), p) - old_flux});
        dirty_[tail_[i]] = 1;
      }
      while (!lw.x.empty() && lw.x.back() >= p.L - xtol(i) && lw.s.back() >= 0.0) {
        const double old_flux = flux(lw.rho.back(), p);
        lw.x.pop_back();
        lw.s.pop_back();
        lw.rho.pop_back();
        arrivals_.push_back({head_[i], i, flux(lw.rho.back(), p) - old_flux});
        dirty_[head_[i]] = 1;
      }
    }
  }

  void mark_boundary_changes() {
    for (std::size_t v = 0; v < net_.node_count(); ++v) {
      const auto& node = net_.node(v);
      if (std::holds_alternative<Origin>(node.kind)) {
        if (const auto it = demand_.find(node.id); it != demand_.end()) {
          if (on_breakpoint(it->second)) dirty_[v] = 1;
        }
        if (queue_[v] <= 1e-9 && release_[v] > desired_[v] && queue_[v] != 0.0) {
          queue_[v] = 0.0;
          dirty_[v] = 1;
        }
        if (queue_[v] <= 1e-9 && queue_[v] > 0.0) queue_[v] = 0.0;
      } else if (const auto* d = std::get_if<Destination>(&node.kind); d && d->supply) {
        if (on_breakpoint(*d->supply)) dirty_[v] = 1;
      }
    }
  }

  bool on_breakpoint(const StepProfile& profile) const {
    for (double bp : profile.times()) {
      if (std::abs(bp - t_) <= 1e-12 * std::max(1.0, t_)) return true;
    }
    return false;
  }

  double demand_of(std::size_t i) const {
    const auto& p = params(i);
    const double rho = waves_[i].rho.back();
    return rho > p.critical_density() ? p.C : flux(rho, p);
  }

  double supply_of(std::size_t j) const {
    const auto& p = params(j);
    const double rho = waves_[j].rho.front();
    return rho < p.critical_density() ? p.C : flux(rho, p);
  }

  // New exit state of incoming link i carrying flow q.
  void set_exit_flow(std::size_t i, double q) {
    auto& lw = waves_[i];
    const auto& p = params(i);
    const double rho_b = lw.rho.back();
    const double qtol = 1e-9 * p.C;
    if (rho_b <= p.critical_density() && std::abs(q - flux(rho_b, p)) <= qtol) return;
    const double rho_new = p.rho_jam - std::clamp(q, 0.0, p.C) / p.w;
    insert_between(i, lw.rho.size() - 1, rho_new, p.L);
    check_inward(i, false);
  }

  // New entry state of outgoing link j carrying flow q.
  void set_entry_flow(std::size_t j, double q) {
    auto& lw = waves_[j];
    const auto& p = params(j);
    const double rho_a = lw.rho.front();
    const double qtol = 1e-9 * p.C;
    if (rho_a >= p.critical_density() && std::abs(q - flux(rho_a, p)) <= qtol) return;
    const double rho_new = std::clamp(q, 0.0, p.C) / p.k;
    const auto waves = riemann_waves(rho_new, rho_a, p);
    if (waves.empty()) return;
    std::vector<double> rhos{rho_new};
    for (std::size_t k = 0; k + 1 < waves.size(); ++k) rhos.push_back(waves[k].rho_right);
    lw.rho.insert(lw.rho.begin(), rhos.begin(), rhos.end());
    std::vector<double> xs(waves.size(), 0.0);
    std::vector<double> ss;
    for (const auto& w : waves) ss.push_back(w.speed);
    lw.x.insert(lw.x.begin(), xs.begin(), xs.end());
    lw.s.insert(lw.s.begin(), ss.begin(), ss.end());
    check_inward(j, true);
  }

  void check_inward(std::size_t i, bool at_entry) const {
    const auto& lw = waves_[i];
    if (lw.x.empty()) return;
    const double s = at_entry ? lw.s.front() : lw.s.back();
    if ((at_entry && s <= 0.0) || (!at_entry && s >= 0.0)) {
      throw SimulationError("front tracking: boundary wave does not enter link '" +
                            net_.link(i).id + "'");
    }
  }

  std::vector<double> node_flows(std::size_t v) const {
    std::vector<double> f;
    const auto& node = net_.node(v);
    for (auto i : node.incoming) f.push_back(flux(waves_[i].rho.back(), params(i)));
    for (auto j : node.outgoing) f.push_back(flux(waves_[j].rho.front(), params(j)));
    return f;
  }

  void resolve_node(std::size_t v) {
    const auto& node = net_.node(v);
    std::visit(
        Overloaded{
            [&](const Diverge& d) {
              const auto i = node.incoming[0];
              const auto j2 = node.outgoing[0];
              const auto j3 = node.outgoing[1];
              const auto f = solve_diverge(demand_of(i), supply_of(j2), supply_of(j3), d.alpha12, d.alpha13);
              set_exit_flow(i, f.q_out[0]);
              set_entry_flow(j2, f.q_in[0]);
              set_entry_flow(j3, f.q_in[1]);
            },
            [&](const Merge& m) {
              const auto i4 = node.incoming[0];
              const auto i5 = node.incoming[1];
              const auto j6 = node.outgoing[0];
              const auto f = solve_merge(demand_of(i4), demand_of(i5), supply_of(j6), m.p);
              set_exit_flow(i4, f.q_out[0]);
              set_exit_flow(i5, f.q_out[1]);
              set_entry_flow(j6, f.q_in[0]);
            },
            [&](const Origin& o) {
              const auto j = node.outgoing[0];
              const auto it = demand_.find(node.id);
              const double h = it == demand_.end() ? 0.0 : it->second.value(t_);
              const double cap = o.capacity.value_or(params(j).C);
              const double s = supply_of(j);
              const double rel = queue_[v] > 0.0 ? std::min(cap, s) : std::min({h, cap, s});
              desired_[v] = h;
              release_[v] = rel;
              set_entry_flow(j, rel);
            },
            [&](const Destination& d) {
              const auto i = node.incoming[0];
              const double sink = d.supply ? d.supply->value(t_) : kInf;
              set_exit_flow(i, std::min(demand_of(i), sink));
            }},
        node.kind);
  }

  void process_events() {
    resolve_collisions();
    resolve_arrivals();
    mark_boundary_changes();
    for (std::size_t v = 0; v < net_.node_count(); ++v) {
      if (!dirty_[v]) continue;
      dirty_[v] = 0;
      const bool junction = std::holds_alternative<Diverge>(net_.node(v).kind) ||
                            std::holds_alternative<Merge>(net_.node(v).kind);
      // Flows as last resolved, not as left by the arriving wave.
      const auto before = flows_[v].empty() ? node_flows(v) : flows_[v];
      resolve_node(v);
      flows_[v] = node_flows(v);
      if (!junction) continue;
      const auto& after = flows_[v];
      for (const auto& a : arrivals_) {
        if (a.node != v) continue;
        JunctionInteraction ji;
        ji.time = t_;
        ji.node = v;
        ji.link = a.link;
        ji.wave_flux_jump = a.flux_jump;
        ji.flows_before = before;
        ji.flows_after = after;
        const auto n_in = net_.node(v).incoming.size();
        for (std::size_t k = 0; k < n_in; ++k) {
          ji.throughput_before += before[k];
          ji.throughput_after += after[k];
        }
        sol_.interactions.push_back(std::move(ji));
      }
    }
    arrivals_.clear();
  }

  void snapshot() {
    Snapshot snap;
    snap.time = t_;
    for (const auto& lw : waves_) {
      snap.densities.push_back(lw.rho);
      snap.positions.push_back(lw.x);
      snap.speeds.push_back(lw.s);
    }
    if (!sol_.snapshots.empty() && sol_.snapshots.back().time == t_) {
      sol_.snapshots.back() = std::move(snap);
    } else {
      sol_.snapshots.push_back(std::move(snap));
    }
  }

  struct Arrival {
    std::size_t node;
    std::size_t link;
    double flux_jump;
  };

  const Network& net_;
  const DemandProfiles& demand_;
  double horizon_;
  FrontTrackOptions options_;
  double t_ = 0.0;
  std::vector<LinkWaves> waves_;
  std::vector<std::size_t> tail_, head_;
  std::vector<double> totals_up_, totals_down_;
  std::vector<double> queue_, desired_, release_;
  std::vector<std::vector<double>> flows_;
  std::vector<char> dirty_;
  std::vector<Arrival> arrivals_;
  FrontTrackingSolution sol_;
};

const Snapshot& snapshot_at(const FrontTrackingSolution& sol, double t) {
  auto it = std::upper_bound(sol.snapshots.begin(), sol.snapshots.end(), t,
                             [](double v, const Snapshot& s) { return v < s.time; });
  if (it == sol.snapshots.begin()) return sol.snapshots.front();
  return *std::prev(it);
}

}  // namespace

std::vector<Front> solve_riemann(const TrafficState& left, const TrafficState& right,
                                 const LinkParams& p) {
  std::vector<Front> out;
  for (const auto& w : riemann_waves(psi(left, p), psi(right, p), p)) {
    out.push_back({0.0, w.speed, state_from_density(w.rho_left, p),
                   state_from_density(w.rho_right, p)});
  }
  // Keep the caller's labels on the outer states.
  if (!out.empty()) {
    out.front().left = left;
    out.back().right = right;
  }
  return out;
}

std::vector<double> FrontTrackingSolution::event_times() const {
  std::vector<double> t;
  for (const auto& s : snapshots) t.push_back(s.time);
  return t;
}

std::vector<Front> FrontTrackingSolution::fronts(std::size_t link, double t) const {
  const auto& snap = snapshot_at(*this, t);
  const auto& p = params.at(link);
  const auto& rho = snap.densities.at(link);
  const auto& xs = snap.positions.at(link);
  const auto& ss = snap.speeds.at(link);
  std::vector<Front> out;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    out.push_back({std::clamp(xs[k] + ss[k] * (t - snap.time), 0.0, p.L), ss[k],
                   state_from_density(rho[k], p), state_from_density(rho[k + 1], p)});
  }
  return out;
}

FrontTrackingSolution front_track(const Network& net, const DemandProfiles& demand,
                                  double horizon,
                                  const std::map<std::size_t, InitialData>& initial,
                                  const FrontTrackOptions& options) {
  net.validate();
  if (!(horizon > 0.0)) throw ValidationError("front tracking: horizon must be positive");
  Tracker tracker(net, demand, horizon, initial, options);
  return tracker.run();
}

TrafficState sample(const FrontTrackingSolution& sol, std::size_t link, double t, double x) {
  const auto& snap = snapshot_at(sol, t);
  const auto& p = sol.params.at(link);
  const auto& rho = snap.densities.at(link);
  const auto& xs = snap.positions.at(link);
  const auto& ss = snap.speeds.at(link);
  std::size_t region = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (xs[k] + ss[k] * (t - snap.time) <= x) region = k + 1;
  }
  return state_from_density(rho[region], p);
}

double link_mass(const FrontTrackingSolution& sol, std::size_t link, double t) {
  const auto fr = sol.fronts(link, t);
  const auto& p = sol.params.at(link);
  const auto& rho = snapshot_at(sol, t).densities.at(link);
  double mass = 0.0;
  double prev = 0.0;
  for (std::size_t k = 0; k < fr.size(); ++k) {
    mass += rho[k] * (fr[k].position - prev);
    prev = fr[k].position;
  }
  mass += rho.back() * (p.L - prev);
  return mass;
}

double flux_variation(const FrontTrackingSolution& sol, std::size_t link, double t) {
  const auto& p = sol.params.at(link);
  const auto& rho = snapshot_at(sol, t).densities.at(link);
  double tv = 0.0;
  for (std::size_t k = 0; k + 1 < rho.size(); ++k) {
    tv += std::abs(flux(rho[k + 1], p) - flux(rho[k], p));
  }
  return tv;
}

}  // namespace kinewave::oracle
