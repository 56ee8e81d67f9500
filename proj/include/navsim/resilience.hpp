#pragma once

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "navsim/netgraph.hpp"
#include "navsim/vehicle.hpp"

namespace navsim {

// Trusted-redundancy trimming configuration. theta is the number of neighbors
// removed per vehicle; `trusted` maps a vehicle to its theta trusted senders
// (the navigator is forced in when it is a neighbor). Vehicles not listed use
// the default set: navigator first, then lowest-index neighbors.
struct ResilienceConfig {
    int theta = 0;
    std::map<int, std::vector<int>> trusted;

    // Trusted set for vehicle i on `net`; empty when theta == 0 or the vehicle
    // has fewer than theta neighbors.
    std::vector<int> trusted_for(int i, const CommNetwork& net) const;
};

struct TrimResult {
    std::map<int, double> scores;   // non-trusted neighbor -> deviation score
    std::vector<int> removed;       // the theta most deviant non-trusted senders
    std::vector<int> kept;          // ascending
    std::map<int, double> weights;  // renormalized over kept, sums to 1
    bool worst_case = false;        // redundancy |N_i| >= 2*theta+1 violated
};

// Mean Euclidean distance of each non-trusted neighbor's reported output from
// the trusted neighbors' reported outputs.
std::map<int, double> deviation_scores(const std::map<int, Eigen::Vector2d>& received,
                                       const std::vector<int>& trusted);

// Removes the theta largest-score non-trusted neighbors (ties: lower sender
// index removed first) and renormalizes the kept weights proportionally to the
// nominal w_ij. Vehicles violating |N_i| >= 2*theta+1 are downgraded to the
// untrimmed worst-case set.
TrimResult trim(int vehicle, const std::map<int, Eigen::Vector2d>& received,
                const ResilienceConfig& cfg, const CommNetwork& net);

struct FusedReference {
    Eigen::Vector2d z, zd, zdd;
    TrimResult trim;
};

// Convex fusion of the (possibly corrupted) received signals over the kept
// set; derivatives are fused with the same weights. A precomputed TrimResult
// may be supplied to keep the set fixed within one control step.
FusedReference resilient_reference(int vehicle, const std::map<int, OutputDerivs>& received,
                                   const ResilienceConfig& cfg, const CommNetwork& net,
                                   const TrimResult* frozen = nullptr);

}  // namespace navsim
