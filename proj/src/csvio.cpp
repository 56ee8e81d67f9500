#include "navsim/csvio.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "navsim/analysis.hpp"
#include "navsim/errors.hpp"

namespace navsim {

namespace {

void put(std::string& row, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    row += buf;
    row += ',';
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

}  // namespace

void write_csv(const RunLog& log, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open " + path.string() + " for writing");

    const int m = log.m;
    MetricsSeries ms = compute_metrics(log);

    std::string header = "t,";
    for (int i = 1; i <= m; ++i) {
        for (const char* f : {"px", "py", "theta", "vx", "omega", "F"})
            header += std::string(f) + "_" + std::to_string(i) + ",";
    }
    for (const char* f : {"y0x", "y0y", "y0dx", "y0dy", "y0ddx", "y0ddy", "y0dddx", "y0dddy"})
        header += std::string(f) + ",";
    for (int i = 1; i <= m; ++i)
        header += "zx_" + std::to_string(i) + ",zy_" + std::to_string(i) + ",";
    for (int i = 1; i <= m; ++i)
        header += "u1_" + std::to_string(i) + ",u2_" + std::to_string(i) + ",";
    for (int i = 1; i <= m; ++i)
        for (const char* f : {"ex", "ey", "edx", "edy", "eddx", "eddy"})
            header += std::string(f) + "_" + std::to_string(i) + ",";
    header += "attack_max,";
    for (int i = 1; i <= m; ++i) header += "switches_" + std::to_string(i) + ",";
    header += "e_tilde,eps_tilde,eta_norm\n";
    out << header;

    std::string row;
    for (std::size_t k = 0; k < log.rows(); ++k) {
        row.clear();
        put(row, log.t[k]);
        for (int i = 0; i < m; ++i) {
            const VehicleState& s = log.states[k][i];
            put(row, s.px);
            put(row, s.py);
            put(row, s.theta);
            put(row, s.vx);
            put(row, s.omega);
            put(row, s.F);
        }
        const auto& nav = log.nav[k];
        for (const Eigen::Vector2d* v : {&nav.y, &nav.yd, &nav.ydd, &nav.yddd}) {
            put(row, v->x());
            put(row, v->y());
        }
        for (int c = 0; c < 2 * m; ++c) put(row, log.z[k](c));
        for (int c = 0; c < 2 * m; ++c) put(row, log.u[k](c));
        for (int c = 0; c < 6 * m; ++c) put(row, log.eta[k](c));
        put(row, log.attack_max[k]);
        for (int i = 0; i < m; ++i) put(row, static_cast<double>(log.trim_switches[k][i]));
        put(row, ms.e_tilde(static_cast<Eigen::Index>(k)));
        put(row, ms.eps_tilde(static_cast<Eigen::Index>(k)));
        put(row, ms.eta_norm(static_cast<Eigen::Index>(k)));
        row.back() = '\n';
        out << row;
    }
}

RunLog read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty CSV " + path.string());

    std::vector<std::string> names = split(line);
    int m = 0;
    for (const std::string& n : names)
        if (n.rfind("px_", 0) == 0) m = std::max(m, std::stoi(n.substr(3)));
    if (m == 0) throw ConfigError("CSV header lacks vehicle state columns");
    const std::size_t expected = 1 + 6u * m + 8 + 2u * m + 2u * m + 6u * m + 1 + m + 3;
    if (names.size() != expected)
        throw ConfigError("unexpected CSV column count " + std::to_string(names.size()));

    RunLog log;
    log.m = m;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f = split(line);
        if (f.size() != expected) throw ConfigError("bad CSV row length");
        std::size_t c = 0;
        auto next = [&]() { return std::strtod(f[c++].c_str(), nullptr); };
        log.t.push_back(next());
        std::vector<VehicleState> states(m);
        for (int i = 0; i < m; ++i) {
            states[i].px = next();
            states[i].py = next();
            states[i].theta = next();
            states[i].vx = next();
            states[i].omega = next();
            states[i].F = next();
        }
        log.states.push_back(std::move(states));
        NavigatorTrajectory::Sample nav;
        for (Eigen::Vector2d* v : {&nav.y, &nav.yd, &nav.ydd, &nav.yddd}) {
            v->x() = next();
            v->y() = next();
        }
        log.nav.push_back(nav);
        Eigen::VectorXd z(2 * m), u(2 * m), eta(6 * m);
        for (int i = 0; i < 2 * m; ++i) z(i) = next();
        for (int i = 0; i < 2 * m; ++i) u(i) = next();
        for (int i = 0; i < 6 * m; ++i) eta(i) = next();
        log.z.push_back(std::move(z));
        log.u.push_back(std::move(u));
        log.eta.push_back(std::move(eta));
        log.attack_max.push_back(next());
        std::vector<int> sw(m);
        for (int i = 0; i < m; ++i) sw[i] = static_cast<int>(next());
        log.trim_switches.push_back(std::move(sw));
    }
    if (log.rows() >= 2) log.dt = log.t[1] - log.t[0];
    return log;
}

}  // namespace navsim
