#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace navsim {

enum class Topology { Star, Cyclic, Path };

Topology topology_from_string(const std::string& s);
std::string to_string(Topology t);

// Directed communication edge: vehicle `receiver` (1..m) listens to
// `sender` (0..m, 0 is the navigator) with weight >= 0.
struct Edge {
    int receiver;
    int sender;
    double weight;
};

// Weighted digraph over the navigator (node 0) and m tracking vehicles,
// together with the adjacency/Laplacian algebra consumed by the controller.
// The edge list is the source of truth; matrices are derived caches.
// Immutable after construction.
class CommNetwork {
public:
    CommNetwork(int m, std::vector<Edge> edges);

    // Star: every vehicle listens only to the navigator (weight 1).
    // Cyclic: navigator 0.1 plus both ring neighbors 0.45 each (m >= 3).
    // Path: vehicle 1 listens to the navigator, vehicle k to k-1 (weight 1).
    static CommNetwork topology(Topology kind, int m);

    int vehicle_count() const { return m_; }
    const std::vector<Edge>& edges() const { return edges_; }

    // Inter-vehicle adjacency A_m (m x m, zero diagonal).
    const Eigen::MatrixXd& adj_m() const { return adj_m_; }
    // Navigator influence diag{w_10,...,w_m0} as a vector.
    const Eigen::VectorXd& adj0_diag() const { return adj0_; }
    Eigen::MatrixXd adj0() const { return adj0_.asDiagonal(); }
    // Augmented Laplacian L = L_m + A_0 = W - A_m.
    const Eigen::MatrixXd& laplacian() const { return lap_; }

    // In-neighbor senders of vehicle i (1-based), ascending.
    std::vector<int> in_neighbors(int i) const;
    double weight(int receiver, int sender) const;

    // Rescales each row by 1/w_i so that (A_m + A_0) 1 = 1. Throws
    // ConfigError on an isolated vehicle (w_i = 0). Idempotent.
    CommNetwork normalized() const;

    bool balanced(double tol = 1e-9) const;
    // True iff every vehicle lies on a directed path from the navigator.
    bool navigator_reachable() const;
    // True iff every eigenvalue of L has real part > tol.
    bool laplacian_positive_stable(double tol = 1e-9) const;

private:
    int m_;
    std::vector<Edge> edges_;
    Eigen::MatrixXd adj_m_;
    Eigen::VectorXd adj0_;
    Eigen::MatrixXd lap_;
};

}  // namespace navsim
