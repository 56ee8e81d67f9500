#include "navsim/adversary.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "navsim/errors.hpp"

namespace navsim {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::mt19937_64 edge_rng(std::uint64_t seed, int receiver, int sender) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(receiver), static_cast<std::uint32_t>(sender)};
    return std::mt19937_64(seq);
}
}  // namespace

AttackKind attack_kind_from_string(const std::string& s) {
    if (s == "constant_offset") return AttackKind::ConstantOffset;
    if (s == "sinusoid") return AttackKind::Sinusoid;
    if (s == "bounded_random") return AttackKind::BoundedRandom;
    throw ConfigError("unknown attack kind '" + s +
                      "' (expected constant_offset|sinusoid|bounded_random)");
}

std::string to_string(AttackKind k) {
    switch (k) {
        case AttackKind::ConstantOffset: return "constant_offset";
        case AttackKind::Sinusoid: return "sinusoid";
        case AttackKind::BoundedRandom: return "bounded_random";
    }
    return "?";
}

AttackView::AttackView(const AttackModel& model) : model_(model) {
    if (model_.abar <= 0.0 && !model_.edges.empty())
        throw ConfigError("attack bound abar must be positive");
    for (const auto& [i, j] : model_.edges) {
        auto rng = edge_rng(model_.seed, i, j);
        std::uniform_real_distribution<double> phase(0.0, kTwoPi);
        Wave w;
        switch (model_.kind) {
            case AttackKind::ConstantOffset: {
                if (model_.offset.norm() > 0.0) {
                    if (model_.offset.norm() > model_.abar + 1e-12)
                        throw ConfigError("constant offset exceeds abar");
                    w.offset = model_.offset;
                } else {
                    double ph = phase(rng);
                    w.offset = model_.abar * Eigen::Vector2d{std::cos(ph), std::sin(ph)};
                }
                break;
            }
            case AttackKind::Sinusoid:
                // Rotating vector of norm exactly abar.
                w.phase = phase(rng);
                break;
            case AttackKind::BoundedRandom: {
                std::uniform_real_distribution<double> amp(0.2, 1.0);
                std::uniform_real_distribution<double> freq(0.2, 2.0);
                w.terms = 5;
                double bx = 0.0, by = 0.0;
                for (int k = 0; k < w.terms; ++k) {
                    w.cx[k] = amp(rng);
                    w.wx[k] = kTwoPi * model_.frequency * freq(rng);
                    w.px[k] = phase(rng);
                    w.cy[k] = amp(rng);
                    w.wy[k] = kTwoPi * model_.frequency * freq(rng);
                    w.py[k] = phase(rng);
                    bx += w.cx[k];
                    by += w.cy[k];
                }
                // Scale so the per-axis sup bounds give ||a|| <= abar.
                double s = model_.abar / std::sqrt(bx * bx + by * by);
                for (int k = 0; k < w.terms; ++k) {
                    w.cx[k] *= s;
                    w.cy[k] *= s;
                }
                break;
            }
        }
        waves_.emplace(std::make_pair(i, j), w);
    }
}

bool AttackView::attacked(int receiver, int sender) const {
    return waves_.count({receiver, sender}) > 0;
}

bool AttackView::navigator_attacked() const {
    for (const auto& [edge, w] : waves_)
        if (edge.second == 0) return true;
    return false;
}

AttackSample AttackView::eval(int receiver, int sender, double t) const {
    AttackSample s;
    auto it = waves_.find({receiver, sender});
    if (it == waves_.end()) return s;
    const Wave& w = it->second;
    switch (model_.kind) {
        case AttackKind::ConstantOffset:
            s.a = w.offset;
            break;
        case AttackKind::Sinusoid: {
            const double om = kTwoPi * model_.frequency;
            const double ph = om * t + w.phase;
            const double c = std::cos(ph), sn = std::sin(ph);
            s.a = model_.abar * Eigen::Vector2d{c, sn};
            s.ad = model_.abar * om * Eigen::Vector2d{-sn, c};
            s.add = model_.abar * om * om * Eigen::Vector2d{-c, -sn};
            break;
        }
        case AttackKind::BoundedRandom:
            for (int k = 0; k < w.terms; ++k) {
                const double phx = w.wx[k] * t + w.px[k];
                const double phy = w.wy[k] * t + w.py[k];
                s.a.x() += w.cx[k] * std::sin(phx);
                s.a.y() += w.cy[k] * std::sin(phy);
                s.ad.x() += w.cx[k] * w.wx[k] * std::cos(phx);
                s.ad.y() += w.cy[k] * w.wy[k] * std::cos(phy);
                s.add.x() -= w.cx[k] * w.wx[k] * w.wx[k] * std::sin(phx);
                s.add.y() -= w.cy[k] * w.wy[k] * w.wy[k] * std::sin(phy);
            }
            break;
    }
    return s;
}

AttackModel preset_attack(Topology kind, int m, double abar, AttackKind wave,
                          std::uint64_t seed) {
    static constexpr int kAttacked[] = {2, 5, 8, 11};
    AttackModel model;
    model.kind = wave;
    model.abar = abar;
    model.seed = seed;
    for (int j : kAttacked)
        if (j > m)
            throw ConfigError("preset attacked index " + std::to_string(j) +
                              " out of range for m=" + std::to_string(m));
    switch (kind) {
        case Topology::Star:
            for (int i : kAttacked) model.edges.emplace_back(i, 0);
            break;
        case Topology::Cyclic:
            for (int j : kAttacked) {
                int prev = (j == 1) ? m : j - 1;
                int next = (j == m) ? 1 : j + 1;
                model.edges.emplace_back(prev, j);
                model.edges.emplace_back(next, j);
            }
            break;
        case Topology::Path:
            for (int j : kAttacked)
                if (j + 1 <= m) model.edges.emplace_back(j + 1, j);
            break;
    }
    return model;
}

}  // namespace navsim
