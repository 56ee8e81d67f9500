#include "navsim/netgraph.hpp"

#include <algorithm>
#include <queue>

#include "navsim/errors.hpp"

namespace navsim {

Topology topology_from_string(const std::string& s) {
    if (s == "star") return Topology::Star;
    if (s == "cyclic") return Topology::Cyclic;
    if (s == "path") return Topology::Path;
    throw ConfigError("unknown topology kind '" + s + "' (expected star|cyclic|path)");
}

std::string to_string(Topology t) {
    switch (t) {
        case Topology::Star: return "star";
        case Topology::Cyclic: return "cyclic";
        case Topology::Path: return "path";
    }
    return "?";
}

CommNetwork::CommNetwork(int m, std::vector<Edge> edges) : m_(m), edges_(std::move(edges)) {
    if (m_ < 1) throw ConfigError("vehicle count must be positive");
    for (const Edge& e : edges_) {
        if (e.receiver < 1 || e.receiver > m_)
            throw ConfigError("edge receiver " + std::to_string(e.receiver) +
                              " out of range 1.." + std::to_string(m_));
        if (e.sender < 0 || e.sender > m_)
            throw ConfigError("edge sender " + std::to_string(e.sender) + " out of range 0.." +
                              std::to_string(m_));
        if (e.sender == e.receiver)
            throw ConfigError("self-loop at vehicle " + std::to_string(e.receiver));
        if (e.weight < 0.0) throw ConfigError("negative edge weight");
    }
    adj_m_ = Eigen::MatrixXd::Zero(m_, m_);
    adj0_ = Eigen::VectorXd::Zero(m_);
    for (const Edge& e : edges_) {
        if (e.sender == 0)
            adj0_(e.receiver - 1) += e.weight;
        else
            adj_m_(e.receiver - 1, e.sender - 1) += e.weight;
    }
    // L = W - A_m, with W = diag{d_i + w_i0}.
    Eigen::VectorXd w = adj_m_.rowwise().sum() + adj0_;
    lap_ = Eigen::MatrixXd(w.asDiagonal()) - adj_m_;
}

CommNetwork CommNetwork::topology(Topology kind, int m) {
    if (m < 2) throw ConfigError("topology requires m >= 2");
    std::vector<Edge> edges;
    switch (kind) {
        case Topology::Star:
            for (int i = 1; i <= m; ++i) edges.push_back({i, 0, 1.0});
            break;
        case Topology::Cyclic: {
            if (m < 3) throw ConfigError("cyclic topology requires m >= 3");
            for (int i = 1; i <= m; ++i) {
                int prev = (i == 1) ? m : i - 1;
                int next = (i == m) ? 1 : i + 1;
                edges.push_back({i, 0, 0.1});
                edges.push_back({i, prev, 0.45});
                edges.push_back({i, next, 0.45});
            }
            break;
        }
        case Topology::Path:
            edges.push_back({1, 0, 1.0});
            for (int i = 2; i <= m; ++i) edges.push_back({i, i - 1, 1.0});
            break;
    }
    return CommNetwork(m, std::move(edges));
}

std::vector<int> CommNetwork::in_neighbors(int i) const {
    std::vector<int> out;
    for (const Edge& e : edges_)
        if (e.receiver == i) out.push_back(e.sender);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double CommNetwork::weight(int receiver, int sender) const {
    if (sender == 0) return adj0_(receiver - 1);
    return adj_m_(receiver - 1, sender - 1);
}

CommNetwork CommNetwork::normalized() const {
    std::vector<Edge> scaled = edges_;
    Eigen::VectorXd w = adj_m_.rowwise().sum() + adj0_;
    for (Edge& e : scaled) {
        double wi = w(e.receiver - 1);
        if (wi <= 0.0)
            throw ConfigError("vehicle " + std::to_string(e.receiver) +
                              " is isolated (total in-weight 0)");
        e.weight /= wi;
    }
    for (int i = 0; i < m_; ++i)
        if (w(i) <= 0.0)
            throw ConfigError("vehicle " + std::to_string(i + 1) +
                              " is isolated (total in-weight 0)");
    return CommNetwork(m_, std::move(scaled));
}

bool CommNetwork::balanced(double tol) const {
    Eigen::VectorXd rows = adj_m_.rowwise().sum() + adj0_;
    return (rows.array() - 1.0).abs().maxCoeff() <= tol;
}

bool CommNetwork::navigator_reachable() const {
    std::vector<char> seen(m_ + 1, 0);
    std::queue<int> q;
    seen[0] = 1;
    q.push(0);
    while (!q.empty()) {
        int j = q.front();
        q.pop();
        for (const Edge& e : edges_) {
            if (e.sender == j && e.weight > 0.0 && !seen[e.receiver]) {
                seen[e.receiver] = 1;
                q.push(e.receiver);
            }
        }
    }
    return std::all_of(seen.begin() + 1, seen.end(), [](char c) { return c != 0; });
}

bool CommNetwork::laplacian_positive_stable(double tol) const {
    Eigen::EigenSolver<Eigen::MatrixXd> es(lap_, false);
    return (es.eigenvalues().real().array() > tol).all();
}

}  // namespace navsim
