#include "kinewave/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "kinewave/errors.hpp"

namespace kinewave {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

void require(bool ok, const std::string& msg) {
  if (!ok) throw ValidationError(msg);
}

bool is_fraction(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

const char* kind_name(const NodeKind& kind) {
  return std::visit(Overloaded{[](const Diverge&) { return "diverge"; },
                               [](const Merge&) { return "merge"; },
                               [](const Origin&) { return "origin"; },
                               [](const Destination&) { return "destination"; }},
                    kind);
}

std::size_t Network::add_link(std::string id, const LinkParams& params) {
  require(!find_link(id), "duplicate link id '" + id + "'");
  links_.push_back({std::move(id), params});
  return links_.size() - 1;
}

std::size_t Network::add_node(std::string id, NodeKind kind,
                              const std::vector<std::string>& incoming,
                              const std::vector<std::string>& outgoing) {
  require(!find_node(id), "duplicate node id '" + id + "'");
  Node node{std::move(id), std::move(kind), {}, {}};
  for (const auto& l : incoming) node.incoming.push_back(link_index(l));
  for (const auto& l : outgoing) node.outgoing.push_back(link_index(l));
  nodes_.push_back(std::move(node));
  return nodes_.size() - 1;
}

std::optional<std::size_t> Network::find_link(const std::string& id) const {
  for (std::size_t i = 0; i < links_.size(); ++i) {
    if (links_[i].id == id) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> Network::find_node(const std::string& id) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].id == id) return i;
  }
  return std::nullopt;
}

std::size_t Network::link_index(const std::string& id) const {
  const auto i = find_link(id);
  require(i.has_value(), "unknown link id '" + id + "'");
  return *i;
}

void Network::validate() const {
  require(!links_.empty(), "network has no links");
  for (const auto& l : links_) {
    try {
      l.params.validate();
    } catch (const ValidationError& e) {
      throw ValidationError("link '" + l.id + "': " + e.what());
    }
  }

  std::vector<int> tails(links_.size(), 0);
  std::vector<int> heads(links_.size(), 0);
  for (const auto& n : nodes_) {
    const std::string where = "node '" + n.id + "' (" + kind_name(n.kind) + "): ";
    const std::size_t in = n.incoming.size();
    const std::size_t out = n.outgoing.size();
    std::visit(
        Overloaded{
            [&](const Diverge& d) {
              require(in == 1 && out == 2, where + "needs 1 incoming and 2 outgoing links");
              require(is_fraction(d.alpha12) && is_fraction(d.alpha13),
                      where + "turning ratios must lie in [0, 1]");
              require(std::abs(d.alpha12 + d.alpha13 - 1.0) <= 1e-9,
                      where + "turning ratios must sum to 1");
            },
            [&](const Merge& m) {
              require(in == 2 && out == 1, where + "needs 2 incoming and 1 outgoing link");
              require(m.p > 0.0 && m.p < 1.0, where + "right-of-way p must lie in (0, 1)");
            },
            [&](const Origin& o) {
              require(in == 0 && out == 1, where + "needs 0 incoming and 1 outgoing link");
              require(!o.capacity || *o.capacity > 0.0, where + "capacity must be positive");
            },
            [&](const Destination&) {
              require(in == 1 && out == 0, where + "needs 1 incoming and 0 outgoing links");
            }},
        n.kind);
    for (auto l : n.incoming) ++heads[l];
    for (auto l : n.outgoing) ++tails[l];
  }
  for (std::size_t i = 0; i < links_.size(); ++i) {
    require(tails[i] == 1, "link '" + links_[i].id + "' must have exactly one tail node");
    require(heads[i] == 1, "link '" + links_[i].id + "' must have exactly one head node");
  }

  // Weak connectivity over nodes, links acting as edges.
  std::vector<std::size_t> parent(nodes_.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t l = 0; l < links_.size(); ++l) {
    parent[find(tail_node(l))] = find(head_node(l));
  }
  for (std::size_t v = 1; v < nodes_.size(); ++v) {
    require(find(v) == find(0), "network is not connected (node '" + nodes_[v].id + "')");
  }
}

std::size_t Network::tail_node(std::size_t link) const {
  for (std::size_t v = 0; v < nodes_.size(); ++v) {
    const auto& out = nodes_[v].outgoing;
    if (std::find(out.begin(), out.end(), link) != out.end()) return v;
  }
  throw ValidationError("link '" + links_.at(link).id + "' has no tail node");
}

std::size_t Network::head_node(std::size_t link) const {
  for (std::size_t v = 0; v < nodes_.size(); ++v) {
    const auto& in = nodes_[v].incoming;
    if (std::find(in.begin(), in.end(), link) != in.end()) return v;
  }
  throw ValidationError("link '" + links_.at(link).id + "' has no head node");
}

double Network::min_wave_time() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& l : links_) {
    m = std::min({m, l.params.free_flow_time(), l.params.backward_wave_time()});
  }
  return m;
}

Network Network::with_node_order(const std::vector<std::size_t>& order) const {
  Network out;
  out.links_ = links_;
  for (auto i : order) out.nodes_.push_back(nodes_.at(i));
  return out;
}

}  // namespace kinewave
