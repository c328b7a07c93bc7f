#include <algorithm>
#include <cmath>
#include <sstream>

#include "hydro/hodograph.hpp"
#include "json.hpp"

namespace hydro::hodograph {

namespace ex = exprlang;
using nlohmann::json;

namespace {

std::string num(double v) { return std::isfinite(v) ? ex::format_double(v) : "nan"; }

double parse_num(const std::string& s) {
    if (s == "nan") return std::nan("");
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("bad number '" + s + "'");
    return v;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(line);
    while (std::getline(in, cur, ',')) out.push_back(cur);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

void push_unique(std::vector<double>& axis, double v) {
    if (std::find(axis.begin(), axis.end(), v) == axis.end()) axis.push_back(v);
}

}  // namespace

std::string to_csv(const SolutionGrid& g) {
    std::string out = "x,t";
    for (const auto& v : g.vars) out += "," + v;
    out += ",status\n";
    for (std::size_t k = 0; k < g.nt(); ++k)
        for (std::size_t j = 0; j < g.nx(); ++j) {
            out += num(g.x[j]) + "," + num(g.t[k]);
            for (std::size_t i = 0; i < g.n(); ++i) out += "," + num(g.at(k, j, i));
            out += ",";
            out += status_name(g.node(k, j));
            out += "\n";
        }
    return out;
}

SolutionGrid from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty CSV");
    auto head = split(line);
    if (head.size() < 4 || head[0] != "x" || head[1] != "t" || head.back() != "status")
        throw std::invalid_argument("CSV header must be x,t,<vars>,status");
    SolutionGrid g;
    g.vars.assign(head.begin() + 2, head.end() - 1);
    std::size_t n = g.vars.size();
    struct Row {
        double x, t;
        std::vector<double> u;
        NodeStatus s;
    };
    std::vector<Row> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto f = split(line);
        if (f.size() != n + 3) throw std::invalid_argument("CSV row has wrong field count");
        Row r{parse_num(f[0]), parse_num(f[1]), {}, status_from_name(f.back())};
        for (std::size_t i = 0; i < n; ++i) r.u.push_back(parse_num(f[2 + i]));
        push_unique(g.x, r.x);
        push_unique(g.t, r.t);
        rows.push_back(std::move(r));
    }
    if (rows.size() != g.nx() * g.nt()) throw std::invalid_argument("CSV rows do not form a full grid");
    g.u.assign(rows.size() * n, 0.0);
    g.status.assign(rows.size(), NodeStatus::Unsolved);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        std::size_t j = r % g.nx(), k = r / g.nx();
        if (rows[r].x != g.x[j] || rows[r].t != g.t[k]) throw std::invalid_argument("CSV rows are not in grid order");
        g.status[r] = rows[r].s;
        for (std::size_t i = 0; i < n; ++i) g.at(k, j, i) = rows[r].u[i];
    }
    return g;
}

std::string to_plot_csv(const SolutionGrid& g) {
    std::string out = "x,t,component,value\n";
    for (std::size_t k = 0; k < g.nt(); ++k)
        for (std::size_t j = 0; j < g.nx(); ++j) {
            if (g.node(k, j) != NodeStatus::Converged) continue;
            for (std::size_t i = 0; i < g.n(); ++i)
                out += num(g.x[j]) + "," + num(g.t[k]) + "," + g.vars[i] + "," + num(g.at(k, j, i)) + "\n";
        }
    return out;
}

std::string to_json(const SolutionGrid& g, const std::optional<ResidualReport>& report) {
    json j;
    j["format"] = "hydro-solution-grid";
    j["version"] = 1;
    j["provenance"] = g.provenance;
    j["vars"] = g.vars;
    j["x"] = g.x;
    j["t"] = g.t;
    json u = json::array(), st = json::array();
    for (std::size_t k = 0; k < g.u.size(); ++k) u.push_back(std::isfinite(g.u[k]) ? json(g.u[k]) : json(nullptr));
    for (auto s : g.status) st.push_back(status_name(s));
    j["u"] = u;
    j["status"] = st;
    j["converged_fraction"] = g.converged_fraction();
    if (report) {
        j["residual"] = {{"max", report->max_residual},
                         {"nodes", report->nodes},
                         {"worst_x", g.x.empty() ? 0.0 : g.x[report->worst_x]},
                         {"worst_t", g.t.empty() ? 0.0 : g.t[report->worst_t]},
                         {"component", g.vars.empty() ? "" : g.vars[report->worst_component]}};
    }
    return j.dump(2) + "\n";
}

SolutionGrid from_json(const std::string& text) {
    json j = json::parse(text);
    if (j.value("format", "") != "hydro-solution-grid") throw std::invalid_argument("not a solution grid document");
    SolutionGrid g;
    g.provenance = j.value("provenance", "");
    g.vars = j.at("vars").get<std::vector<std::string>>();
    g.x = j.at("x").get<std::vector<double>>();
    g.t = j.at("t").get<std::vector<double>>();
    for (const auto& v : j.at("u")) g.u.push_back(v.is_null() ? std::nan("") : v.get<double>());
    for (const auto& s : j.at("status")) g.status.push_back(status_from_name(s.get<std::string>()));
    if (g.status.size() != g.nx() * g.nt() || g.u.size() != g.status.size() * g.n())
        throw std::invalid_argument("solution grid arrays have inconsistent sizes");
    return g;
}

}  // namespace hydro::hodograph
