#include "doctest.h"
#include "kinewave/errors.hpp"
#include "kinewave/network.hpp"
#include "support/scenarios.hpp"

using namespace kinewave;
using namespace kinewave::testing;

namespace {

Network chain() {
  Network n;
  n.add_link("A", kI1);
  n.add_link("B", kI2);
  n.add_link("C", kI2);
  n.add_node("o", Origin{}, {}, {"A"});
  n.add_node("v", Diverge{0.5, 0.5}, {"A"}, {"B", "C"});
  n.add_node("sb", Destination{}, {"B"}, {});
  n.add_node("sc", Destination{}, {"C"}, {});
  return n;
}

}  // namespace

TEST_SUITE("network") {
  TEST_CASE("a well-formed diverge validates") {
    const auto n = chain();
    CHECK_NOTHROW(n.validate());
    CHECK(n.tail_node(0) == 0);
    CHECK(n.head_node(0) == 1);
    CHECK(n.min_wave_time() == doctest::Approx(0.1));
    CHECK(n.link_index("C") == 2);
  }

  TEST_CASE("turning ratios must sum to one") {
    Network n;
    n.add_link("A", kI1);
    n.add_link("B", kI2);
    n.add_link("C", kI2);
    n.add_node("o", Origin{}, {}, {"A"});
    n.add_node("v", Diverge{0.5, 0.6}, {"A"}, {"B", "C"});
    n.add_node("sb", Destination{}, {"B"}, {});
    n.add_node("sc", Destination{}, {"C"}, {});
    CHECK_THROWS_AS(n.validate(), ValidationError);
  }

  TEST_CASE("right-of-way must lie strictly inside (0, 1)") {
    auto c = merge_case(kI1, kI4, kI2, 1.0, StepProfile::constant(0), StepProfile::constant(0));
    CHECK_THROWS_AS(c.net.validate(), ValidationError);
  }

  TEST_CASE("degree per node kind") {
    Network n;
    n.add_link("A", kI1);
    n.add_link("B", kI1);
    n.add_node("o", Origin{}, {}, {"A"});
    n.add_node("m", Merge{0.5}, {"A"}, {"B"});
    n.add_node("s", Destination{}, {"B"}, {});
    CHECK_THROWS_AS(n.validate(), ValidationError);
  }

  TEST_CASE("dangling links and disconnected parts are rejected") {
    Network n;
    n.add_link("A", kI1);
    n.add_node("o", Origin{}, {}, {"A"});
    CHECK_THROWS_AS(n.validate(), ValidationError);

    Network m;
    m.add_link("A", kI1);
    m.add_link("B", kI1);
    m.add_node("o1", Origin{}, {}, {"A"});
    m.add_node("s1", Destination{}, {"A"}, {});
    m.add_node("o2", Origin{}, {}, {"B"});
    m.add_node("s2", Destination{}, {"B"}, {});
    CHECK_THROWS_AS(m.validate(), ValidationError);
  }

  TEST_CASE("unknown link ids and duplicates") {
    Network n;
    n.add_link("A", kI1);
    CHECK_THROWS_AS(n.add_link("A", kI1), ValidationError);
    CHECK_THROWS_AS(n.add_node("o", Origin{}, {}, {"Z"}), ValidationError);
  }

  TEST_CASE("reordering nodes keeps incidence") {
    const auto n = chain().with_node_order({3, 2, 1, 0});
    CHECK_NOTHROW(n.validate());
    CHECK(n.node(0).id == "sc");
    CHECK(n.node(n.head_node(0)).id == "v");
  }
}
