#include "kinewave/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "kinewave/errors.hpp"

namespace kinewave {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ValidationError("scenario: " + path + ": " + what);
}

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& [key, _] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      fail(path + "." + key, "unknown key");
    }
  }
}

const json& field(const json& j, const std::string& path, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "expected a finite number");
  return v;
}

double number_field(const json& j, const std::string& path, const char* key) {
  return number(field(j, path, key), path + "." + key);
}

std::string string_field(const json& j, const std::string& path, const char* key) {
  const auto& v = field(j, path, key);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

std::vector<std::string> id_list(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of link ids");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string()) fail(path + "[" + std::to_string(i) + "]", "expected a string");
    out.push_back(j[i].get<std::string>());
  }
  return out;
}

StepProfile parse_steps(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of [t, rate] pairs");
  std::vector<double> t, v;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != 2) fail(p, "expected a [t, rate] pair");
    t.push_back(number(j[i][0], p + "[0]"));
    v.push_back(number(j[i][1], p + "[1]"));
  }
  try {
    return StepProfile(std::move(t), std::move(v));
  } catch (const ValidationError& e) {
    fail(path, e.what());
  }
}

json steps_to_json(const StepProfile& p) {
  json arr = json::array();
  for (std::size_t i = 0; i < p.times().size(); ++i) {
    arr.push_back(json::array({p.times()[i], p.values()[i]}));
  }
  return arr;
}

LinkParams parse_link(const json& j, const std::string& path) {
  check_keys(j, path, {"id", "rho_jam", "k", "w", "C", "L"});
  LinkParams p;
  p.rho_jam = number_field(j, path, "rho_jam");
  p.k = number_field(j, path, "k");
  p.w = number_field(j, path, "w");
  p.C = number_field(j, path, "C");
  p.L = number_field(j, path, "L");
  return p;
}

NodeKind parse_kind(const json& j, const std::string& path) {
  const std::string kind = string_field(j, path, "kind");
  if (kind == "diverge") {
    check_keys(j, path, {"id", "kind", "in", "out", "alpha"});
    const auto& a = field(j, path, "alpha");
    if (!a.is_array() || a.size() != 2) fail(path + ".alpha", "expected [alpha12, alpha13]");
    return Diverge{number(a[0], path + ".alpha[0]"), number(a[1], path + ".alpha[1]")};
  }
  if (kind == "merge") {
    check_keys(j, path, {"id", "kind", "in", "out", "p"});
    return Merge{number_field(j, path, "p")};
  }
  if (kind == "origin") {
    check_keys(j, path, {"id", "kind", "in", "out", "capacity"});
    Origin o;
    if (j.contains("capacity")) o.capacity = number_field(j, path, "capacity");
    return o;
  }
  if (kind == "destination") {
    check_keys(j, path, {"id", "kind", "in", "out", "supply"});
    Destination d;
    if (j.contains("supply")) d.supply = parse_steps(j.at("supply"), path + ".supply");
    return d;
  }
  fail(path + ".kind", "expected one of diverge, merge, origin, destination");
}

UniformDemand parse_uniform(const json& j, const std::string& path) {
  check_keys(j, path, {"cap", "interval", "seed", "step"});
  UniformDemand u;
  u.cap = number_field(j, path, "cap");
  const auto& iv = field(j, path, "interval");
  if (!iv.is_array() || iv.size() != 2) fail(path + ".interval", "expected [begin, end]");
  u.begin = number(iv[0], path + ".interval[0]");
  u.end = number(iv[1], path + ".interval[1]");
  const auto& seed = field(j, path, "seed");
  if (!seed.is_number_unsigned()) fail(path + ".seed", "expected a nonnegative integer");
  u.seed = seed.get<std::uint64_t>();
  if (j.contains("step")) u.step = number_field(j, path, "step");
  if (!(u.cap >= 0.0)) fail(path + ".cap", "must be nonnegative");
  if (!(u.begin >= 0.0 && u.end >= u.begin)) fail(path + ".interval", "need 0 <= begin <= end");
  if (!(u.step > 0.0)) fail(path + ".step", "must be positive");
  return u;
}

OutputRequest parse_outputs(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of output names");
  OutputRequest r{false, false, false, false};
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    if (!j[i].is_string()) fail(p, "expected a string");
    const auto name = j[i].get<std::string>();
    if (name == "flows") r.flows = true;
    else if (name == "cumulative") r.cumulative = true;
    else if (name == "spillback") r.spillback = true;
    else if (name == "moskowitz") r.moskowitz = true;
    else fail(p, "expected one of flows, cumulative, spillback, moskowitz");
  }
  return r;
}

json outputs_to_json(const OutputRequest& r) {
  json arr = json::array();
  if (r.flows) arr.push_back("flows");
  if (r.cumulative) arr.push_back("cumulative");
  if (r.spillback) arr.push_back("spillback");
  if (r.moskowitz) arr.push_back("moskowitz");
  return arr;
}

}  // namespace

void Scenario::regenerate_demand() {
  for (const auto& [origin, u] : uniform) {
    const double ratio = sim.horizon / u.step;
    const auto steps = static_cast<std::size_t>(std::ceil(ratio - 1e-9));
    const auto series = generate_inflow(u.cap, u.begin, u.end, u.step,
                                        static_cast<double>(steps) * u.step, u.seed);
    demand[origin] = StepProfile::from_series(u.step, series);
  }
}

void Scenario::reseed(std::uint64_t seed) {
  sim.seed = seed;
  for (auto& [_, u] : uniform) u.seed = seed;
  regenerate_demand();
}

Scenario parse_scenario(const json& doc) {
  check_keys(doc, "$", {"network", "demand", "sim"});
  Scenario s;

  const auto& net = field(doc, "$", "network");
  check_keys(net, "$.network", {"links", "nodes"});
  const auto& links = field(net, "$.network", "links");
  if (!links.is_array()) fail("$.network.links", "expected an array");
  for (std::size_t i = 0; i < links.size(); ++i) {
    const std::string path = "$.network.links[" + std::to_string(i) + "]";
    const auto params = parse_link(links[i], path);
    const auto id = string_field(links[i], path, "id");
    if (s.network.find_link(id)) fail(path + ".id", "duplicate link id '" + id + "'");
    try {
      params.validate();
    } catch (const ValidationError& e) {
      fail(path, "link '" + id + "': " + e.what());
    }
    s.network.add_link(id, params);
  }
  const auto& nodes = field(net, "$.network", "nodes");
  if (!nodes.is_array()) fail("$.network.nodes", "expected an array");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string path = "$.network.nodes[" + std::to_string(i) + "]";
    const auto& n = nodes[i];
    if (!n.is_object()) fail(path, "expected an object");
    const auto id = string_field(n, path, "id");
    const std::string where = path + " (node '" + id + "')";
    const auto kind = parse_kind(n, where);
    const auto in = n.contains("in") ? id_list(n.at("in"), where + ".in") : std::vector<std::string>{};
    const auto out = n.contains("out") ? id_list(n.at("out"), where + ".out") : std::vector<std::string>{};
    if (s.network.find_node(id)) fail(path + ".id", "duplicate node id '" + id + "'");
    try {
      s.network.add_node(id, kind, in, out);
    } catch (const ValidationError& e) {
      fail(where, e.what());
    }
  }
  try {
    s.network.validate();
  } catch (const ValidationError& e) {
    fail("$.network", e.what());
  }

  const auto& sim = field(doc, "$", "sim");
  check_keys(sim, "$.sim", {"dt", "horizon", "eps_N", "seed", "outputs", "origin_model",
                            "virtual_length"});
  s.sim.dt = number_field(sim, "$.sim", "dt");
  s.sim.horizon = number_field(sim, "$.sim", "horizon");
  if (sim.contains("eps_N")) s.sim.eps_n = number_field(sim, "$.sim", "eps_N");
  if (sim.contains("seed")) {
    if (!sim.at("seed").is_number_unsigned()) fail("$.sim.seed", "expected a nonnegative integer");
    s.sim.seed = sim.at("seed").get<std::uint64_t>();
  }
  if (sim.contains("outputs")) s.outputs = parse_outputs(sim.at("outputs"), "$.sim.outputs");
  if (sim.contains("origin_model")) {
    const auto m = string_field(sim, "$.sim", "origin_model");
    if (m == "point_queue") s.sim.origin_model = OriginModel::PointQueue;
    else if (m == "virtual_link") s.sim.origin_model = OriginModel::VirtualLink;
    else fail("$.sim.origin_model", "expected point_queue or virtual_link");
  }
  if (sim.contains("virtual_length")) {
    s.sim.virtual_length = number_field(sim, "$.sim", "virtual_length");
  }
  try {
    s.sim.validate(s.network);
  } catch (const ValidationError& e) {
    fail("$.sim", e.what());
  }

  if (doc.contains("demand")) {
    const auto& dem = doc.at("demand");
    if (!dem.is_object()) fail("$.demand", "expected an object");
    for (const auto& [origin, entry] : dem.items()) {
      const std::string path = "$.demand." + origin;
      const auto v = s.network.find_node(origin);
      if (!v || !std::holds_alternative<Origin>(s.network.node(*v).kind)) {
        fail(path, "not an origin node");
      }
      check_keys(entry, path, {"steps", "uniform"});
      if (entry.contains("steps") == entry.contains("uniform")) {
        fail(path, "expected exactly one of steps, uniform");
      }
      if (entry.contains("steps")) {
        s.demand[origin] = parse_steps(entry.at("steps"), path + ".steps");
      } else {
        s.uniform[origin] = parse_uniform(entry.at("uniform"), path + ".uniform");
      }
    }
  }
  s.regenerate_demand();
  return s;
}

Scenario parse_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("scenario: cannot open '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("scenario: " + path.string() + ": " + e.what());
  }
  return parse_scenario(doc);
}

json scenario_to_json(const Scenario& s) {
  json links = json::array();
  for (const auto& l : s.network.links()) {
    links.push_back({{"id", l.id},
                     {"rho_jam", l.params.rho_jam},
                     {"k", l.params.k},
                     {"w", l.params.w},
                     {"C", l.params.C},
                     {"L", l.params.L}});
  }
  json nodes = json::array();
  for (const auto& n : s.network.nodes()) {
    json in = json::array(), out = json::array();
    for (auto i : n.incoming) in.push_back(s.network.link(i).id);
    for (auto i : n.outgoing) out.push_back(s.network.link(i).id);
    json j = {{"id", n.id}, {"kind", kind_name(n.kind)}, {"in", in}, {"out", out}};
    if (const auto* d = std::get_if<Diverge>(&n.kind)) {
      j["alpha"] = json::array({d->alpha12, d->alpha13});
    } else if (const auto* m = std::get_if<Merge>(&n.kind)) {
      j["p"] = m->p;
    } else if (const auto* o = std::get_if<Origin>(&n.kind); o && o->capacity) {
      j["capacity"] = *o->capacity;
    } else if (const auto* dst = std::get_if<Destination>(&n.kind); dst && dst->supply) {
      j["supply"] = steps_to_json(*dst->supply);
    }
    nodes.push_back(std::move(j));
  }
  json demand = json::object();
  for (const auto& [origin, profile] : s.demand) {
    if (const auto it = s.uniform.find(origin); it != s.uniform.end()) {
      const auto& u = it->second;
      demand[origin] = {{"uniform",
                         {{"cap", u.cap},
                          {"interval", json::array({u.begin, u.end})},
                          {"seed", u.seed},
                          {"step", u.step}}}};
    } else {
      demand[origin] = {{"steps", steps_to_json(profile)}};
    }
  }
  json sim = {{"dt", s.sim.dt},
              {"horizon", s.sim.horizon},
              {"eps_N", s.sim.eps_n},
              {"seed", s.sim.seed},
              {"outputs", outputs_to_json(s.outputs)},
              {"origin_model",
               s.sim.origin_model == OriginModel::PointQueue ? "point_queue" : "virtual_link"},
              {"virtual_length", s.sim.virtual_length}};
  return {{"network", {{"links", links}, {"nodes", nodes}}}, {"demand", demand}, {"sim", sim}};
}

}  // namespace kinewave
