#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "navsim/netgraph.hpp"

namespace navsim {

enum class AttackKind { ConstantOffset, Sinusoid, BoundedRandom };

AttackKind attack_kind_from_string(const std::string& s);
std::string to_string(AttackKind k);

// Bounded perturbation model on a set of communication edges. Every generated
// signal satisfies ||a_ij(t)|| <= abar for all t and has closed-form
// derivatives through order 2.
struct AttackModel {
    std::vector<std::pair<int, int>> edges;  // (receiver, sender)
    AttackKind kind = AttackKind::Sinusoid;
    double abar = 1.0;
    double frequency = 0.2;                  // Hz, sinusoid / bounded_random base
    Eigen::Vector2d offset{0.0, 0.0};        // constant_offset direction; zero -> per-edge
    std::uint64_t seed = 1;
};

struct AttackSample {
    Eigen::Vector2d a{0.0, 0.0}, ad{0.0, 0.0}, add{0.0, 0.0};
};

// Deterministic per-edge signal generators realized from an AttackModel.
// Immutable; clean edges evaluate to zero.
class AttackView {
public:
    AttackView() = default;  // no attack
    explicit AttackView(const AttackModel& model);

    bool attacked(int receiver, int sender) const;
    bool navigator_attacked() const;  // any (i, 0) edge corrupted
    AttackSample eval(int receiver, int sender, double t) const;

    double abar() const { return model_.abar; }
    bool active() const { return !model_.edges.empty(); }
    const AttackModel& model() const { return model_; }

private:
    struct Wave {
        double cx[5] = {}, cy[5] = {};      // per-axis amplitudes
        double wx[5] = {}, wy[5] = {};      // angular frequencies
        double px[5] = {}, py[5] = {};      // phases
        int terms = 0;
        double phase = 0.0;                 // sinusoid rotation phase
        Eigen::Vector2d offset{0.0, 0.0};   // constant offset
    };
    AttackModel model_;
    std::map<std::pair<int, int>, Wave> waves_;
};

// Attacked set {2,5,8,11} per scenario preset. Star: the navigator channel of
// each attacked vehicle is corrupted (deliberately violating the trusted-
// navigator assumption). Cyclic/path: every edge whose sender is in the
// attacked set is corrupted.
AttackModel preset_attack(Topology kind, int m, double abar,
                          AttackKind wave = AttackKind::Sinusoid, std::uint64_t seed = 1);

}  // namespace navsim
