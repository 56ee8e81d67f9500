#include "navsim/resilience.hpp"

#include <algorithm>
#include <cmath>

#include "navsim/errors.hpp"

namespace navsim {

std::vector<int> ResilienceConfig::trusted_for(int i, const CommNetwork& net) const {
    if (theta == 0) return {};
    std::vector<int> neighbors = net.in_neighbors(i);
    std::vector<int> out;
    auto it = trusted.find(i);
    if (it != trusted.end()) {
        out = it->second;
        std::sort(out.begin(), out.end());
        for (int j : out)
            if (std::find(neighbors.begin(), neighbors.end(), j) == neighbors.end())
                throw ConfigError("trusted sender " + std::to_string(j) +
                                  " is not a neighbor of vehicle " + std::to_string(i));
        // The navigator is forced in when present.
        if (std::find(neighbors.begin(), neighbors.end(), 0) != neighbors.end() &&
            std::find(out.begin(), out.end(), 0) == out.end())
            throw ConfigError("vehicle " + std::to_string(i) +
                              ": the navigator neighbor must be trusted");
        if (static_cast<int>(out.size()) != theta)
            throw ConfigError("vehicle " + std::to_string(i) + ": trusted set size " +
                              std::to_string(out.size()) + " != theta");
        return out;
    }
    // Default: navigator first, then lowest-index neighbors.
    for (int j : neighbors) {
        if (static_cast<int>(out.size()) == theta) break;
        out.push_back(j);  // neighbors are ascending, 0 first when present
    }
    if (static_cast<int>(out.size()) < theta) return {};  // not enough neighbors
    return out;
}

std::map<int, double> deviation_scores(const std::map<int, Eigen::Vector2d>& received,
                                       const std::vector<int>& trusted) {
    if (trusted.empty()) throw ConfigError("deviation scores require a nonempty trusted set");
    std::map<int, double> scores;
    for (const auto& [k, yk] : received) {
        if (std::find(trusted.begin(), trusted.end(), k) != trusted.end()) continue;
        double sum = 0.0;
        for (int l : trusted) sum += (received.at(l) - yk).norm();
        scores[k] = sum / static_cast<double>(trusted.size());
    }
    return scores;
}

namespace {

TrimResult untrimmed(int vehicle, const CommNetwork& net, bool worst_case) {
    TrimResult r;
    r.worst_case = worst_case;
    r.kept = net.in_neighbors(vehicle);
    double total = 0.0;
    for (int j : r.kept) total += net.weight(vehicle, j);
    for (int j : r.kept)
        r.weights[j] = total > 0.0 ? net.weight(vehicle, j) / total
                                   : 1.0 / static_cast<double>(r.kept.size());
    return r;
}

}  // namespace

TrimResult trim(int vehicle, const std::map<int, Eigen::Vector2d>& received,
                const ResilienceConfig& cfg, const CommNetwork& net) {
    std::vector<int> neighbors = net.in_neighbors(vehicle);
    if (neighbors.empty())
        throw ConfigError("vehicle " + std::to_string(vehicle) + " has no in-neighbors");
    if (cfg.theta == 0) return untrimmed(vehicle, net, false);

    std::vector<int> trusted = cfg.trusted_for(vehicle, net);
    const bool redundant = static_cast<int>(neighbors.size()) >= 2 * cfg.theta + 1;
    if (!redundant || trusted.empty()) return untrimmed(vehicle, net, true);

    TrimResult r;
    r.scores = deviation_scores(received, trusted);

    // theta largest scores removed; ties broken by lower sender index first.
    std::vector<std::pair<int, double>> ranked(r.scores.begin(), r.scores.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    for (int k = 0; k < cfg.theta && k < static_cast<int>(ranked.size()); ++k)
        r.removed.push_back(ranked[k].first);
    std::sort(r.removed.begin(), r.removed.end());

    for (int j : neighbors)
        if (std::find(r.removed.begin(), r.removed.end(), j) == r.removed.end())
            r.kept.push_back(j);
    if (r.kept.empty()) throw ConfigError("trim left vehicle " + std::to_string(vehicle) +
                                          " with an empty kept set");

    double total = 0.0;
    for (int j : r.kept) total += net.weight(vehicle, j);
    for (int j : r.kept)
        r.weights[j] = total > 0.0 ? net.weight(vehicle, j) / total
                                   : 1.0 / static_cast<double>(r.kept.size());
    return r;
}

FusedReference resilient_reference(int vehicle, const std::map<int, OutputDerivs>& received,
                                   const ResilienceConfig& cfg, const CommNetwork& net,
                                   const TrimResult* frozen) {
    std::map<int, Eigen::Vector2d> positions;
    for (const auto& [j, od] : received) positions[j] = od.y;

    FusedReference out;
    out.trim = frozen ? *frozen : trim(vehicle, positions, cfg, net);
    out.z.setZero();
    out.zd.setZero();
    out.zdd.setZero();
    for (int j : out.trim.kept) {
        const double w = out.trim.weights.at(j);
        const OutputDerivs& od = received.at(j);
        out.z += w * od.y;
        out.zd += w * od.yd;
        out.zdd += w * od.ydd;
    }
    return out;
}

}  // namespace navsim
