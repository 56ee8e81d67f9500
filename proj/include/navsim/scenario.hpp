#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "navsim/adversary.hpp"
#include "navsim/fblin.hpp"
#include "navsim/netgraph.hpp"
#include "navsim/resilience.hpp"
#include "navsim/vehicle.hpp"

namespace navsim {

// Complete description of one closed-loop run. Parsed strictly from JSON:
// unknown keys anywhere in the document are rejected.
struct Scenario {
    std::string name = "scenario";
    CommNetwork net{1, {{1, 0, 1.0}}};
    std::optional<Topology> topology_kind;  // set when built from a preset
    NavigatorTrajectory navigator = NavigatorTrajectory::circle(5.0, 0.2);
    ControllerConfig controller{gains_from_pole(2.0), 1e-3};
    std::optional<AttackModel> attack;
    std::optional<ResilienceConfig> resilience;
    double horizon = 20.0;
    double dt = 1e-3;
    std::uint64_t seed = 1;
    std::optional<std::vector<VehicleState>> initial;  // default: ring placement

    int steps() const;
    void validate() const;

    // Vehicles on a ring of radius 2 around the navigator start point, heading
    // and speed matched to the navigator's initial velocity.
    std::vector<VehicleState> initial_states() const;

    static Scenario from_json_text(const std::string& text);
    static Scenario from_file(const std::filesystem::path& path);
    std::string to_json_text() const;
};

// The six-run experiment grid: {star, cyclic, path} x {clean, attacked}.
// Attacked runs use the preset attacked set with trimming (theta = 1).
std::vector<Scenario> experiment_grid(int m = 12, double horizon = 20.0, double dt = 1e-3,
                                      double abar = 1.0, std::uint64_t seed = 1);

}  // namespace navsim
