#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "kinewave/fundamental_diagram.hpp"
#include "kinewave/step_profile.hpp"

namespace kinewave {

/// One incoming link, two outgoing links; FIFO split with turning ratios.
struct Diverge {
  double alpha12 = 0.5;
  double alpha13 = 0.5;
};

/// Two incoming links, one outgoing link; right-of-way p means
/// q_out(second) = p * q_out(first) whenever compatible with flux maximization.
struct Merge {
  double p = 0.5;
};

/// Network entry point. Vehicles wait in a point queue when the first link
/// cannot accept them. `capacity` caps the release rate (defaults to the
/// downstream link capacity).
struct Origin {
  std::optional<double> capacity;
};

/// Network exit. An absent `supply` profile means the sink never binds.
struct Destination {
  std::optional<StepProfile> supply;
};

using NodeKind = std::variant<Diverge, Merge, Origin, Destination>;

struct Link {
  std::string id;
  LinkParams params;
};

struct Node {
  std::string id;
  NodeKind kind;
  std::vector<std::size_t> incoming;  // ordered link indices
  std::vector<std::size_t> outgoing;
};

/// Desired departure rate per origin node id.
using DemandProfiles = std::map<std::string, StepProfile>;

/// Directed graph of links and typed nodes. Links and nodes are referred to
/// by their index in insertion order; string ids are kept for I/O.
class Network {
 public:
  std::size_t add_link(std::string id, const LinkParams& params);
  /// Incidence is given by link ids, in order (first incoming link of a
  /// merge is the one with priority).
  std::size_t add_node(std::string id, NodeKind kind,
                       const std::vector<std::string>& incoming,
                       const std::vector<std::string>& outgoing);

  /// Throws ValidationError on the first violated invariant: link
  /// parameters, node degree per kind, turning ratios, right-of-way,
  /// one tail and one head per link, weak connectivity.
  void validate() const;

  const std::vector<Link>& links() const { return links_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const Link& link(std::size_t i) const { return links_.at(i); }
  const Node& node(std::size_t i) const { return nodes_.at(i); }
  std::size_t link_count() const { return links_.size(); }
  std::size_t node_count() const { return nodes_.size(); }

  std::optional<std::size_t> find_link(const std::string& id) const;
  std::optional<std::size_t> find_node(const std::string& id) const;
  std::size_t link_index(const std::string& id) const;  // throws if absent

  /// Node whose outgoing list contains link i (its tail) and the node whose
  /// incoming list contains it (its head). Valid after validate().
  std::size_t tail_node(std::size_t link) const;
  std::size_t head_node(std::size_t link) const;

  /// Smallest L/k and L/w over all links.
  double min_wave_time() const;

  /// Reorders nodes (links untouched). Used to check that node evaluation
  /// order does not affect results.
  Network with_node_order(const std::vector<std::size_t>& order) const;

 private:
  std::vector<Link> links_;
  std::vector<Node> nodes_;
};

const char* kind_name(const NodeKind& kind);

}  // namespace kinewave
