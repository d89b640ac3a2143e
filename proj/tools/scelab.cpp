#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "scelab/fermionize.hpp"
#include "scelab/harriman.hpp"
#include "scelab/lawrentiev.hpp"
#include "scelab/mmot.hpp"
#include "scelab/reinstate.hpp"
#include "scelab/semiclassical.hpp"
#include "scelab/serialize.hpp"
#include "scelab/verify.hpp"

#if defined(_OPENMP) && __has_include(<omp.h>)
#include <omp.h>
#define SCELAB_HAVE_OMP_H 1
#endif

namespace {

using nlohmann::json;

std::string output_path(const std::string& name) {
    const char* dir = std::getenv("OUTPUT_DIR");
    if (dir && *dir) return std::string(dir) + "/" + name;
    return name;
}

// integer-spaced nodes with unit node weights, so nodal values are masses
sce::Grid1D mass_grid(int n) { return sce::make_grid_unit_weights(0.0, n - 1.0, n); }

sce::MarginalDensity named_density(const sce::Grid1D& g, const std::string& kind, int bodies) {
    if (kind == "uniform") return sce::uniform_marginal(g, bodies);
    if (kind == "cosine") {
        std::vector<double> v(g.n);
        for (int i = 0; i < g.n; ++i) {
            const double t = (g.nodes[i] - g.a) / (g.b - g.a);
            v[i] = 1.0 + 0.5 * std::cos(2.0 * sce::kPi * t);
        }
        return sce::make_marginal(g, v, bodies, true);
    }
    if (kind == "linear") {
        std::vector<double> v(g.n);
        for (int i = 0; i < g.n; ++i) v[i] = 1e-9 + 2.0 * (g.nodes[i] - g.a) / (g.b - g.a);
        return sce::make_marginal(g, v, bodies, true);
    }
    sce::fail("unknown density kind: " + kind);
}

int run_sce(int n, int bodies, const std::string& mu_kind, bool capped, double cap,
            const std::string& out, const std::string& plan_csv) {
    sce::Grid1D g = mass_grid(n);
    sce::MarginalDensity mu = named_density(g, mu_kind, bodies);
    sce::CostMatrix cost = sce::coulomb_cost(g, cap, !capped);
    sce::MmotSolution sol = sce::solve_mmot(sce::make_mmot_problem(mu, bodies, cost));
    json cfg = {{"subcommand", "sce"}, {"n", n},      {"bodies", bodies},
                {"mu", mu_kind},       {"capped", capped}, {"cap", cost.cap}};
    sce::write_file(output_path(out), sce::solution_to_json(sol, cfg.dump()));
    if (!plan_csv.empty() && sol.status == sce::SolveStatus::optimal)
        sce::write_file(output_path(plan_csv),
                        sce::plan_to_csv(sce::canonical_symmetrized(sol), cfg.dump()));
    std::cout << "V_sce = " << sce::format_double(sol.value) << "  status = "
              << (sol.status == sce::SolveStatus::optimal ? "optimal" : "infeasible") << "\n";
    return sol.status == sce::SolveStatus::optimal ? 0 : 2;
}

int run_sweep(int n, int bodies, std::vector<double> alphas, std::vector<double> eps,
              std::vector<double> betas, int iters, const std::string& mu_kind,
              const std::string& prefix) {
    sce::Grid1D g = mass_grid(n);
    sce::SweepConfig cfg;
    cfg.mu = named_density(g, mu_kind, bodies);
    cfg.n_bodies = bodies;
    cfg.alphas = std::move(alphas);
    cfg.epsilon_schedule = std::move(eps);
    cfg.beta_schedule = std::move(betas);
    cfg.optimizer.max_iterations = iters;
    sce::SweepResult res = sce::semiclassical_sweep(cfg);
    json jcfg = {{"subcommand", "sweep"},
                 {"n", n},
                 {"bodies", bodies},
                 {"mu", mu_kind},
                 {"alphas", cfg.alphas},
                 {"epsilon_schedule", cfg.epsilon_schedule},
                 {"beta_schedule", cfg.beta_schedule},
                 {"max_iterations", iters}};
    sce::write_file(output_path(prefix + ".csv"), sce::sweep_to_csv(res, jcfg.dump()));
    sce::write_file(output_path(prefix + ".json"), sce::sweep_to_json(res, jcfg.dump()));
    for (const auto& r : res.records)
        std::cout << "alpha=" << r.alpha << "  F_upper=" << r.f_alpha_upper
                  << "  gap=" << r.gap << "  (" << r.source << ")\n";
    std::cout << "V_sce = " << res.v_sce
              << (res.minimizer_mismatch ? "  [minimizer mismatch reported]" : "") << "\n";
    return 0;
}

int run_reinstate_demo(int n, int bodies, std::uint64_t seed, const std::string& out) {
    sce::Grid1D g = sce::make_grid(0.0, 1.0, n);
    sce::Rng rng(seed);
    sce::TransportPlan plan = sce::random_symmetric_plan(g, bodies, rng);
    sce::MarginalDensity target = sce::random_density(g, rng, bodies);
    auto [l1_lhs, l1_rhs] = sce::l1_stability_check(plan, target);
    sce::CostMatrix cost = sce::coulomb_cost(g);
    auto [c_lhs, c_rhs] = sce::coulomb_stability_check(plan, target, cost);
    sce::TransportPlan rec = sce::recovery_plan(plan, target, 2.0 * g.h, 0.1);
    double marg_err = 0.0;
    for (int axis = 0; axis < bodies; ++axis) {
        std::vector<double> m = sce::one_body_marginal(rec, axis);
        for (int i = 0; i < g.n; ++i)
            marg_err = std::max(marg_err, std::abs(m[i] - target.values[i]));
    }
    sce::StrongPositivity sp = sce::is_strongly_positive(rec);
    json cfg = {{"subcommand", "reinstate-demo"}, {"n", n}, {"bodies", bodies}, {"seed", seed}};
    json results = {{"l1_lhs", l1_lhs},
                    {"l1_rhs", l1_rhs},
                    {"coulomb_lhs", c_lhs},
                    {"coulomb_rhs", c_rhs},
                    {"recovery_marginal_error", marg_err},
                    {"recovery_strongly_positive", sp.holds},
                    {"recovery_best_beta", sp.best_beta}};
    json invariants = json::array();
    invariants.push_back({{"name", "l1_stability"}, {"pass", l1_lhs <= l1_rhs + 1e-12}});
    invariants.push_back({{"name", "marginal_restoration"}, {"pass", marg_err <= 1e-10}});
    invariants.push_back(
        {{"name", "coulomb_stability_d1_report"}, {"pass", c_lhs <= c_rhs}, {"report_only", true}});
    json doc = {{"config", cfg}, {"results", results}, {"invariant_report", invariants}};
    sce::write_file(output_path(out), doc.dump(2) + "\n");
    std::cout << "l1: " << l1_lhs << " <= " << l1_rhs << "\nmarginal error: " << marg_err
              << "\n";
    return (l1_lhs <= l1_rhs + 1e-12 && marg_err <= 1e-10) ? 0 : 2;
}

int run_fermionize_demo(int n, const std::string& out) {
    sce::Grid1D g = sce::make_grid(0.0, 1.0, n);
    std::vector<double> dens(g.n);
    for (int i = 0; i < g.n; ++i) dens[i] = 1.0 + 0.3 * std::sin(2.0 * sce::kPi * g.nodes[i]);
    sce::MarginalDensity mu = sce::make_marginal(g, dens, 2, true);
    sce::Wavefunction phi = sce::wf_from_plan_sqrt(sce::product_plan(mu, 2));
    sce::CostMatrix cost = sce::coulomb_cost(g);
    const double vphi = sce::coulomb_energy_tensor(sce::wf_position_density(phi), g, cost);

    json rows = json::array();
    double identity_err = 0.0, split_err = 0.0;
    for (double delta : {4.0 * g.h, 2.0 * g.h, g.h}) {
        sce::NodeFunctions nf = sce::make_node_functions(delta, g, 2);
        for (std::size_t i = 0; i < nf.A.size(); ++i)
            identity_err = std::max(identity_err,
                                    std::abs(nf.A.v[i] * nf.A.v[i] + nf.B.v[i] * nf.B.v[i] - 1.0));
        sce::NodeInsertion ins = sce::insert_node(phi, nf);
        sce::ExcessDensity ex = sce::excess_density(phi, nf);
        sce::DTensor phi2 = sce::wf_position_density(phi);
        sce::DTensor phip2 = sce::wf_position_density(ex.phi_prime);
        for (std::size_t i = 0; i < phi2.size(); ++i)
            split_err = std::max(split_err,
                                 std::abs(phip2.v[i] + ins.rho_N.v[i] - phi2.v[i]));
        const double v = sce::coulomb_energy_tensor(ins.rho_N, g, cost);
        double excess_l1 = 0.0;
        for (int i = 0; i < g.n; ++i) excess_l1 += g.weights[i] * ex.rho_prime[i];
        rows.push_back({{"delta", delta},
                        {"Vee_psi_delta", v},
                        {"Vee_phi", vphi},
                        {"abs_diff", std::abs(v - vphi)},
                        {"excess_mass", excess_l1}});
    }
    json cfg = {{"subcommand", "fermionize-demo"}, {"n", n}};
    json results = {{"identity_max_err", identity_err},
                    {"density_split_max_err", split_err},
                    {"table", rows}};
    json invariants = json::array();
    invariants.push_back({{"name", "A2_plus_B2"}, {"pass", identity_err <= 1e-12}});
    invariants.push_back({{"name", "density_split"}, {"pass", split_err <= 1e-12}});
    json doc = {{"config", cfg}, {"results", results}, {"invariant_report", invariants}};
    sce::write_file(output_path(out), doc.dump(2) + "\n");
    std::cout << "identity error " << identity_err << ", split error " << split_err << "\n";
    return (identity_err <= 1e-12 && split_err <= 1e-12) ? 0 : 2;
}

int run_harriman(int n, int bodies, const std::string& kind_name, const std::string& mu_kind,
                 const std::string& out) {
    sce::Grid1D g = sce::make_grid(0.0, 1.0, n);
    sce::MarginalDensity mu = named_density(g, mu_kind, bodies);
    const sce::OrbitalKind kind =
        (kind_name == "real") ? sce::OrbitalKind::real_trig : sce::OrbitalKind::complex_exp;
    sce::OrbitalSet os = sce::harriman_orbitals(mu, kind);
    double oerr = 0.0, derr = 0.0;
    for (int a = 0; a < os.count; ++a)
        for (int b = 0; b < os.count; ++b)
            oerr = std::max(oerr, std::abs(sce::orbital_inner_product(os, a, b) -
                                           ((a == b) ? 1.0 : 0.0)));
    for (int i = 0; i < g.n; ++i) {
        double sum = 0.0;
        for (int k = 0; k < os.count; ++k) sum += std::norm(os.values[k][i]);
        derr = std::max(derr, std::abs(sum - bodies * mu.values[i]));
    }
    sce::RegularityReport rep = sce::regularity_check(os);
    json cfg = {{"subcommand", "harriman"},
                {"n", n},
                {"bodies", bodies},
                {"kind", kind_name},
                {"mu", mu_kind}};
    sce::write_file(output_path(out), sce::orbitals_to_csv(os, cfg.dump()));
    json doc = {{"config", cfg},
                {"results",
                 {{"orthonormality_err", oerr},
                  {"density_err", derr},
                  {"gradient_formula_err", rep.gradient_formula_error},
                  {"m1v_bound", rep.m1v_bound}}},
                {"invariant_report",
                 json::array({{{"name", "orthonormality"}, {"pass", oerr <= 1e-8}},
                              {{"name", "density_sum"}, {"pass", derr <= 1e-10}}})}};
    sce::write_file(output_path(out + ".json"), doc.dump(2) + "\n");
    std::cout << "orthonormality " << oerr << ", density " << derr << ", gradient "
              << rep.gradient_formula_error << "\n";
    return (oerr <= 1e-8 && derr <= 1e-10) ? 0 : 2;
}

int run_lawrentiev(std::vector<double> eps_list, int n, int iters, const std::string& out) {
    json cfg = {{"subcommand", "lawrentiev"}, {"n", n}, {"iterations", iters},
                {"epsilons", eps_list}};
    std::string csv = "# config: " + cfg.dump() + "\n";
    csv += "epsilon,n,best_value,x_star,G_value,bound\n";
    bool all_above = true;
    for (double eps : eps_list) {
        sce::PerturbedMin pm = sce::minimize_perturbed(eps, n, iters);
        sce::GapCertificate cert = sce::gap_certificate(pm.u);
        csv += sce::format_double(eps) + "," + std::to_string(n) + "," +
               sce::format_double(pm.value) + "," + sce::format_double(cert.x_star) + "," +
               sce::format_double(cert.g_value) + "," + sce::format_double(cert.bound) + "\n";
        std::cout << "eps=" << eps << "  value=" << pm.value << "  x*=" << cert.x_star << "\n";
        if (eps > 0.0 && pm.value <= 9.0e-4) all_above = false;
    }
    sce::write_file(output_path(out), csv);
    return all_above ? 0 : 2;
}

int run_verify_all(bool quick, std::uint64_t seed, const std::string& out) {
    const auto checks = sce::run_verification(quick, seed);
    int failures = 0;
    json report = json::array();
    for (const auto& c : checks) {
        const char* tag = c.passed ? "PASS" : (c.required ? "FAIL" : "REPORT-FAIL");
        std::cout << tag << "  " << c.name;
        if (!c.detail.empty()) std::cout << "  [" << c.detail << "]";
        std::cout << "\n";
        if (!c.passed && c.required) ++failures;
        report.push_back({{"name", c.name},
                          {"pass", c.passed},
                          {"required", c.required},
                          {"detail", c.detail}});
    }
    std::cout << checks.size() << " checks, " << failures << " required failures\n";
    if (!out.empty()) {
        json doc = {{"config", {{"subcommand", "verify-all"}, {"quick", quick}, {"seed", seed}}},
                    {"results",
                     {{"total", checks.size()}, {"required_failures", failures}}},
                    {"invariant_report", report}};
        sce::write_file(output_path(out), doc.dump(2) + "\n");
    }
    return failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Desk-scale optimal-transport laboratory for strictly correlated densities"};
    app.require_subcommand(1);
    std::uint64_t seed = 1;
    int threads = 0;
    app.add_option("--seed", seed, "deterministic seed for randomized instances");
    app.add_option("--threads", threads, "OpenMP threads (0 = library default, 1 = serial kernels)");

    auto* sce_cmd = app.add_subcommand("sce", "solve the multi-marginal Coulomb transport problem");
    sce_cmd->fallthrough();
    int n = 3, bodies = 2;
    std::string mu_kind = "uniform", out = "sce.json";
    bool capped = false;
    double cap = -1.0;
    sce_cmd->add_option("--n", n, "grid nodes");
    sce_cmd->add_option("--bodies", bodies, "number of bodies N");
    sce_cmd->add_option("--mu", mu_kind, "density: uniform | cosine | linear");
    sce_cmd->add_flag("--capped", capped, "capped diagonal instead of forbidden");
    sce_cmd->add_option("--cap", cap, "diagonal cap value (default 10/h)");
    sce_cmd->add_option("--out", out, "output JSON path");
    std::string plan_csv;
    sce_cmd->add_option("--plan-csv", plan_csv, "also write the symmetrized plan as CSV");

    auto* sweep_cmd = app.add_subcommand("sweep", "semiclassical coupling sweep");
    sweep_cmd->fallthrough();
    int sw_n = 8, sw_bodies = 2, sw_iters = 300;
    std::string sw_mu = "uniform", sw_prefix = "sweep";
    std::vector<double> alphas = {1.0, 1e-1, 1e-2, 1e-3, 1e-4};
    std::vector<double> eps_sched = {1e-9, 0.5, 1.0};
    std::vector<double> beta_sched = {1e-9, 0.05, 0.1};
    sweep_cmd->add_option("--n", sw_n, "grid nodes");
    sweep_cmd->add_option("--bodies", sw_bodies, "number of bodies N");
    sweep_cmd->add_option("--mu", sw_mu, "density kind");
    sweep_cmd->add_option("--alphas", alphas, "decreasing coupling list");
    sweep_cmd->add_option("--eps-schedule", eps_sched, "mollifier widths for recovery");
    sweep_cmd->add_option("--beta-schedule", beta_sched, "positivization weights for recovery");
    sweep_cmd->add_option("--iters", sw_iters, "descent iterations per coupling");
    sweep_cmd->add_option("--out-prefix", sw_prefix, "output path prefix");

    auto* rein_cmd = app.add_subcommand("reinstate-demo", "marginal reinstatement demo");
    rein_cmd->fallthrough();
    int r_n = 9, r_bodies = 2;
    std::string r_out = "reinstate.json";
    rein_cmd->add_option("--n", r_n, "grid nodes");
    rein_cmd->add_option("--bodies", r_bodies, "number of bodies N");
    rein_cmd->add_option("--out", r_out, "output JSON path");

    auto* fer_cmd = app.add_subcommand("fermionize-demo", "node insertion demo");
    fer_cmd->fallthrough();
    int f_n = 17;
    std::string f_out = "fermionize.json";
    fer_cmd->add_option("--n", f_n, "grid nodes");
    fer_cmd->add_option("--out", f_out, "output JSON path");

    auto* har_cmd = app.add_subcommand("harriman", "orbital representation of a density");
    har_cmd->fallthrough();
    int h_n = 401, h_bodies = 3;
    std::string h_kind = "complex", h_mu = "linear", h_out = "orbitals.csv";
    har_cmd->add_option("--n", h_n, "grid nodes");
    har_cmd->add_option("--bodies", h_bodies, "orbital count N");
    har_cmd->add_option("--kind", h_kind, "complex | real");
    har_cmd->add_option("--mu", h_mu, "density kind");
    har_cmd->add_option("--out", h_out, "output CSV path");

    auto* law_cmd = app.add_subcommand("lawrentiev", "variational gap demonstration");
    law_cmd->fallthrough();
    std::vector<double> l_eps = {1e-2};
    int l_n = 2001, l_iters = 120;
    std::string l_out = "lawrentiev.csv";
    law_cmd->add_option("--eps", l_eps, "perturbation strengths");
    law_cmd->add_option("--n", l_n, "grid nodes");
    law_cmd->add_option("--iters", l_iters, "descent sweeps");
    law_cmd->add_option("--out", l_out, "output CSV path");

    auto* ver_cmd = app.add_subcommand("verify-all", "run the full invariant suite");
    ver_cmd->fallthrough();
    bool quick = false;
    std::string v_out;
    ver_cmd->add_flag("--quick", quick, "smaller grids and instance counts");
    ver_cmd->add_option("--out", v_out, "also write the table as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

#ifdef SCELAB_HAVE_OMP_H
    if (threads > 0) omp_set_num_threads(threads);
#endif
    if (threads == 1) sce::set_parallel(false);

    try {
        if (sce_cmd->parsed()) return run_sce(n, bodies, mu_kind, capped, cap, out, plan_csv);
        if (sweep_cmd->parsed())
            return run_sweep(sw_n, sw_bodies, alphas, eps_sched, beta_sched, sw_iters, sw_mu,
                             sw_prefix);
        if (rein_cmd->parsed()) return run_reinstate_demo(r_n, r_bodies, seed, r_out);
        if (fer_cmd->parsed()) return run_fermionize_demo(f_n, f_out);
        if (har_cmd->parsed()) return run_harriman(h_n, h_bodies, h_kind, h_mu, h_out);
        if (law_cmd->parsed()) return run_lawrentiev(l_eps, l_n, l_iters, l_out);
        if (ver_cmd->parsed()) return run_verify_all(quick, seed, v_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
