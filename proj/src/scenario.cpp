#include "navsim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "navsim/errors.hpp"

namespace navsim {

using nlohmann::json;

namespace {

void require_keys(const json& obj, const std::string& where,
                  const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError(where + ": unknown key '" + it.key() + "'");
}

Eigen::Vector2d parse_vec2(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2)
        throw ConfigError(where + ": expected [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

CommNetwork parse_graph(const json& j, std::optional<Topology>& kind_out) {
    require_keys(j, "graph", {"topology", "m", "edges", "normalize"});
    if (j.contains("topology")) {
        const json& t = j.at("topology");
        require_keys(t, "graph.topology", {"kind", "m"});
        Topology kind = topology_from_string(t.at("kind").get<std::string>());
        kind_out = kind;
        return CommNetwork::topology(kind, t.at("m").get<int>());
    }
    if (!j.contains("m") || !j.contains("edges"))
        throw ConfigError("graph: need either 'topology' or 'm' + 'edges'");
    std::vector<Edge> edges;
    for (const json& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 3)
            throw ConfigError("graph.edges: expected [receiver, sender, weight]");
        edges.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
    }
    CommNetwork net(j.at("m").get<int>(), std::move(edges));
    if (j.value("normalize", false)) net = net.normalized();
    return net;
}

NavigatorTrajectory parse_navigator(const json& j) {
    require_keys(j, "navigator",
                 {"kind", "radius", "ax", "ay", "omega0", "center", "origin", "velocity"});
    const std::string kind = j.at("kind").get<std::string>();
    Eigen::Vector2d center{0.0, 0.0};
    if (j.contains("center")) center = parse_vec2(j.at("center"), "navigator.center");
    if (kind == "circle")
        return NavigatorTrajectory::circle(j.at("radius").get<double>(),
                                           j.at("omega0").get<double>(), center);
    if (kind == "lemniscate")
        return NavigatorTrajectory::lemniscate(j.at("ax").get<double>(), j.at("ay").get<double>(),
                                               j.at("omega0").get<double>(), center);
    if (kind == "line")
        return NavigatorTrajectory::line(parse_vec2(j.at("origin"), "navigator.origin"),
                                         parse_vec2(j.at("velocity"), "navigator.velocity"));
    throw ConfigError("navigator: unknown kind '" + kind + "'");
}

ControllerConfig parse_controller(const json& j) {
    require_keys(j, "controller", {"pole", "gains", "v_min"});
    ControllerConfig cfg;
    if (j.contains("gains")) {
        const json& g = j.at("gains");
        if (!g.is_array() || g.size() != 3) throw ConfigError("controller.gains: expected [k1,k2,k3]");
        cfg.gains = {g[0].get<double>(), g[1].get<double>(), g[2].get<double>()};
        if (!cfg.gains.hurwitz())
            throw ConfigError("controller.gains: s^3 + k3 s^2 + k2 s + k1 is not Hurwitz");
    } else {
        cfg.gains = gains_from_pole(j.value("pole", 2.0));
    }
    cfg.v_min = j.value("v_min", 1e-3);
    if (cfg.v_min <= 0.0) throw ConfigError("controller.v_min must be positive");
    return cfg;
}

AttackModel parse_attack(const json& j, const std::optional<Topology>& kind, int m) {
    require_keys(j, "attack", {"preset", "edges", "kind", "abar", "frequency", "seed", "offset"});
    AttackModel model;
    model.kind = attack_kind_from_string(j.value("kind", std::string("sinusoid")));
    model.abar = j.value("abar", 1.0);
    model.frequency = j.value("frequency", 0.2);
    model.seed = j.value("seed", std::uint64_t{1});
    if (j.contains("offset")) model.offset = parse_vec2(j.at("offset"), "attack.offset");
    if (j.value("preset", false)) {
        if (!kind) throw ConfigError("attack.preset requires a topology-based graph");
        AttackModel preset = preset_attack(*kind, m, model.abar, model.kind, model.seed);
        preset.frequency = model.frequency;
        preset.offset = model.offset;
        return preset;
    }
    if (!j.contains("edges")) throw ConfigError("attack: need 'preset' or 'edges'");
    for (const json& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2)
            throw ConfigError("attack.edges: expected [receiver, sender]");
        model.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    return model;
}

ResilienceConfig parse_resilience(const json& j) {
    require_keys(j, "resilience", {"theta", "trusted"});
    ResilienceConfig cfg;
    cfg.theta = j.at("theta").get<int>();
    if (cfg.theta < 0) throw ConfigError("resilience.theta must be nonnegative");
    if (j.contains("trusted")) {
        for (auto it = j.at("trusted").begin(); it != j.at("trusted").end(); ++it) {
            int vehicle = std::stoi(it.key());
            std::vector<int> ids;
            for (const json& v : it.value()) ids.push_back(v.get<int>());
            cfg.trusted[vehicle] = std::move(ids);
        }
    }
    return cfg;
}

}  // namespace

int Scenario::steps() const {
    const double ratio = horizon / dt;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
        throw ConfigError("horizon/dt must be integral");
    return static_cast<int>(rounded);
}

void Scenario::validate() const {
    if (horizon <= 0.0) throw ConfigError("horizon must be positive");
    if (dt <= 0.0) throw ConfigError("dt must be positive");
    steps();
    const int m = net.vehicle_count();
    if (attack) {
        for (const auto& [i, j] : attack->edges) {
            if (i < 1 || i > m || j < 0 || j > m)
                throw ConfigError("attack edge (" + std::to_string(i) + "," + std::to_string(j) +
                                  ") out of range");
            if (net.weight(i, j) <= 0.0)
                throw ConfigError("attack edge (" + std::to_string(i) + "," + std::to_string(j) +
                                  ") is not a communication edge");
        }
    }
    if (resilience) {
        for (const auto& [i, ids] : resilience->trusted) {
            if (i < 1 || i > m) throw ConfigError("resilience.trusted: vehicle out of range");
            (void)ids;
        }
        // Validates trusted-set sizes and membership vehicle by vehicle.
        for (int i = 1; i <= m; ++i) (void)resilience->trusted_for(i, net);
    }
    if (initial && static_cast<int>(initial->size()) != m)
        throw ConfigError("initial state count does not match m");
}

std::vector<VehicleState> Scenario::initial_states() const {
    if (initial) return *initial;
    const int m = net.vehicle_count();
    NavigatorTrajectory::Sample nav = navigator.eval(0.0);
    const double speed = nav.yd.norm();
    const double heading = speed > 0.0 ? std::atan2(nav.yd.y(), nav.yd.x()) : 0.0;
    std::vector<VehicleState> out(m);
    for (int i = 0; i < m; ++i) {
        const double phi = 2.0 * std::numbers::pi * i / m;
        out[i].px = nav.y.x() + 0.5 * std::cos(phi);
        out[i].py = nav.y.y() + 0.5 * std::sin(phi);
        out[i].theta = heading;
        out[i].vx = speed;
        out[i].omega = 0.0;
        out[i].F = 0.0;
    }
    return out;
}

Scenario Scenario::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    require_keys(j, "scenario",
                 {"name", "graph", "navigator", "controller", "attack", "resilience", "horizon",
                  "dt", "seed", "initial"});
    Scenario sc;
    if (j.contains("name")) sc.name = j.at("name").get<std::string>();
    if (!j.contains("graph")) throw ConfigError("scenario: missing 'graph'");
    sc.net = parse_graph(j.at("graph"), sc.topology_kind);
    if (j.contains("navigator")) sc.navigator = parse_navigator(j.at("navigator"));
    if (j.contains("controller")) sc.controller = parse_controller(j.at("controller"));
    if (j.contains("attack"))
        sc.attack = parse_attack(j.at("attack"), sc.topology_kind, sc.net.vehicle_count());
    if (j.contains("resilience")) sc.resilience = parse_resilience(j.at("resilience"));
    sc.horizon = j.value("horizon", 20.0);
    sc.dt = j.value("dt", 1e-3);
    sc.seed = j.value("seed", std::uint64_t{1});
    if (j.contains("initial")) {
        std::vector<VehicleState> init;
        for (const json& row : j.at("initial")) {
            if (!row.is_array() || row.size() != 6)
                throw ConfigError("initial: expected [px,py,theta,vx,omega,F] rows");
            init.push_back({row[0].get<double>(), row[1].get<double>(), row[2].get<double>(),
                            row[3].get<double>(), row[4].get<double>(), row[5].get<double>()});
        }
        sc.initial = std::move(init);
    }
    sc.validate();
    return sc;
}

Scenario Scenario::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

std::string Scenario::to_json_text() const {
    json j;
    j["name"] = name;
    if (topology_kind) {
        j["graph"]["topology"] = {{"kind", to_string(*topology_kind)},
                                  {"m", net.vehicle_count()}};
    } else {
        j["graph"]["m"] = net.vehicle_count();
        json edges = json::array();
        for (const Edge& e : net.edges()) edges.push_back({e.receiver, e.sender, e.weight});
        j["graph"]["edges"] = edges;
    }
    j["horizon"] = horizon;
    j["dt"] = dt;
    j["seed"] = seed;
    if (attack) {
        j["attack"] = {{"kind", to_string(attack->kind)}, {"abar", attack->abar},
                       {"seed", attack->seed}};
        json edges = json::array();
        for (const auto& [r, s] : attack->edges) edges.push_back({r, s});
        j["attack"]["edges"] = edges;
    }
    if (resilience) j["resilience"] = {{"theta", resilience->theta}};
    return j.dump(2);
}

std::vector<Scenario> experiment_grid(int m, double horizon, double dt, double abar,
                                      std::uint64_t seed) {
    std::vector<Scenario> out;
    for (Topology kind : {Topology::Star, Topology::Cyclic, Topology::Path}) {
        for (bool attacked : {false, true}) {
            Scenario sc;
            sc.name = to_string(kind) + (attacked ? "_attacked" : "_clean");
            sc.net = CommNetwork::topology(kind, m);
            sc.topology_kind = kind;
            sc.horizon = horizon;
            sc.dt = dt;
            sc.seed = seed;
            if (attacked) {
                sc.attack = preset_attack(kind, m, abar, AttackKind::Sinusoid, seed);
                ResilienceConfig res;
                res.theta = 1;
                sc.resilience = res;
            }
            out.push_back(std::move(sc));
        }
    }
    return out;
}

}  // namespace navsim
