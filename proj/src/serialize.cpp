#include "scelab/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace sce {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

static std::string csv_header(int n, int nb, double h, const std::string& config_echo) {
    std::string out;
    if (!config_echo.empty()) out += "# config: " + config_echo + "\n";
    out += std::to_string(n) + "," + std::to_string(nb) + "," + format_double(h) + "\n";
    return out;
}

std::string plan_to_csv(const TransportPlan& p, const std::string& config_echo) {
    std::string out = csv_header(p.grid.n, p.n_bodies, p.grid.h, config_echo);
    for (double v : p.values.v) out += format_double(v) + "\n";
    return out;
}

static std::vector<std::string> data_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        lines.push_back(line);
    }
    return lines;
}

TransportPlan plan_from_csv(const std::string& text, const Grid1D& grid_hint) {
    const auto lines = data_lines(text);
    require(!lines.empty(), "plan csv: empty");
    int n = 0, nb = 0;
    double h = 0.0;
    require(std::sscanf(lines[0].c_str(), "%d,%d,%lf", &n, &nb, &h) == 3, "plan csv: bad header");
    require(n == grid_hint.n && std::abs(h - grid_hint.h) <= 1e-12, "plan csv: grid mismatch");
    DTensor t(n, nb);
    require(lines.size() == t.size() + 1, "plan csv: wrong value count");
    for (std::size_t i = 0; i < t.size(); ++i) t.v[i] = std::stod(lines[i + 1]);
    return make_plan(grid_hint, nb, std::move(t), false, false);
}

std::string density_to_csv(const MarginalDensity& d, const std::string& config_echo) {
    std::string out = csv_header(d.grid.n, d.particle_count, d.grid.h, config_echo);
    for (double v : d.values) out += format_double(v) + "\n";
    return out;
}

MarginalDensity density_from_csv(const std::string& text, const Grid1D& grid_hint) {
    const auto lines = data_lines(text);
    require(!lines.empty(), "density csv: empty");
    int n = 0, nb = 0;
    double h = 0.0;
    require(std::sscanf(lines[0].c_str(), "%d,%d,%lf", &n, &nb, &h) == 3,
            "density csv: bad header");
    require(n == grid_hint.n && std::abs(h - grid_hint.h) <= 1e-12, "density csv: grid mismatch");
    std::vector<double> v(n);
    require(static_cast<int>(lines.size()) == n + 1, "density csv: wrong value count");
    for (int i = 0; i < n; ++i) v[i] = std::stod(lines[i + 1]);
    return make_marginal(grid_hint, std::move(v), nb, false);
}

std::string solution_to_json(const MmotSolution& s, const std::string& config_echo) {
    nlohmann::json j;
    j["value"] = s.value;
    j["n"] = s.plan.grid.n;
    j["N"] = s.plan.n_bodies;
    j["plan"] = s.plan.values.v;
    j["status"] = (s.status == SolveStatus::optimal) ? "optimal" : "infeasible";
    if (!config_echo.empty()) j["config"] = nlohmann::json::parse(config_echo);
    return j.dump(2) + "\n";
}

std::string sweep_to_csv(const SweepResult& r, const std::string& config_echo) {
    std::string out;
    if (!config_echo.empty()) out += "# config: " + config_echo + "\n";
    out += "alpha,V_sce,F_alpha_upper,gap,moment_1,moment_2,moment_3,moment_4,moment_5\n";
    for (const auto& rec : r.records) {
        out += format_double(rec.alpha) + "," + format_double(rec.v_sce) + "," +
               format_double(rec.f_alpha_upper) + "," + format_double(rec.gap);
        for (double m : rec.moments) out += "," + format_double(m);
        out += "\n";
    }
    return out;
}

std::string sweep_to_json(const SweepResult& r, const std::string& config_echo) {
    nlohmann::json j;
    if (!config_echo.empty()) j["config"] = nlohmann::json::parse(config_echo);
    j["V_sce"] = r.v_sce;
    j["lp_moments"] = r.lp_moments;
    j["minimizer_mismatch"] = r.minimizer_mismatch;
    j["final_moment_deviation"] = r.final_moment_deviation;
    nlohmann::json recs = nlohmann::json::array();
    for (const auto& rec : r.records) {
        nlohmann::json q;
        q["alpha"] = rec.alpha;
        q["F_alpha_upper"] = rec.f_alpha_upper;
        q["V_sce"] = rec.v_sce;
        q["gap"] = rec.gap;
        q["moments"] = rec.moments;
        q["source"] = rec.source;
        recs.push_back(q);
    }
    j["records"] = recs;
    return j.dump(2) + "\n";
}

std::string orbitals_to_csv(const OrbitalSet& s, const std::string& config_echo) {
    std::string out;
    if (!config_echo.empty()) out += "# config: " + config_echo + "\n";
    out += "node";
    for (int k = 1; k <= s.count; ++k)
        out += ",re_phi_" + std::to_string(k) + ",im_phi_" + std::to_string(k);
    out += "\n";
    for (int i = 0; i < s.grid.n; ++i) {
        out += format_double(s.grid.nodes[i]);
        for (int k = 0; k < s.count; ++k)
            out += "," + format_double(s.values[k][i].real()) + "," +
                   format_double(s.values[k][i].imag());
        out += "\n";
    }
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    require(f.good(), "cannot open for writing: " + path);
    f << content;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    require(f.good(), "cannot open for reading: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace sce
