// h2r: command-line front end. Every subcommand prints a JSON result envelope on stdout.
// Exit codes: 0 ok, 1 usage, 2 domain error, 3 numerical failure.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "h2r/h2r.hpp"

namespace fs = std::filesystem;
using namespace h2r;

namespace {

std::string output_path(const std::string& p) {
    if (p.empty()) return p;
    const fs::path path(p);
    if (path.is_absolute()) return p;
    if (const char* dir = std::getenv("H2R_OUTPUT_DIR"); dir && *dir) {
        fs::create_directories(dir);
        return (fs::path(dir) / path).string();
    }
    return p;
}

json read_json(const std::string& file_or_text) {
    if (!file_or_text.empty() && (file_or_text.front() == '{' || file_or_text.front() == '[')) {
        return json::parse(file_or_text);
    }
    std::ifstream in(file_or_text);
    if (!in) throw DomainError("cannot read " + file_or_text);
    return json::parse(in);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) throw DomainError("cannot open " + path + " for writing");
    os << text;
}

std::string csv_columns(const std::vector<std::string>& header, const std::vector<const std::vector<double>*>& cols) {
    std::ostringstream os;
    os.precision(15);
    for (std::size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << header[c];
    os << '\n';
    for (std::size_t i = 0; i < cols[0]->size(); ++i) {
        for (std::size_t c = 0; c < cols.size(); ++c) os << (c ? "," : "") << (*cols[c])[i];
        os << '\n';
    }
    return os.str();
}

struct Run {
    ResultEnvelope env;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    void emit() {
        env.timing["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cout << json(env).dump(2) << '\n';
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minimal annuli in H^2 x R: catenoids, Jacobi fields, solvers, fluxes, tall rectangles."};
    app.require_subcommand(1);

    // catenoid
    double cat_kappa = 1.0, cat_h = -1.0;
    int cat_nodes = 513, cat_ntheta = 64;
    std::string cat_out, cat_mesh;
    auto* cat = app.add_subcommand("catenoid", "catenoid profile from kappa (or half-height)");
    cat->add_option("--kappa", cat_kappa, "first integral kappa > 0")->check(CLI::PositiveNumber);
    cat->add_option("--half-height", cat_h, "half-height in (0, pi/2); overrides --kappa");
    cat->add_option("--nodes", cat_nodes, "profile nodes; odd counts include the neck row t = 0")->check(CLI::Range(16, 1 << 20));
    cat->add_option("--out", cat_out, "CSV of t, r, r'");
    cat->add_option("--mesh", cat_mesh, "OBJ/PLY surface of revolution");
    cat->add_option("--ntheta", cat_ntheta, "angular samples for --mesh")->check(CLI::Range(3, 1 << 16));

    // jacobi
    double jac_kappa = 1.0;
    int jac_nmax = 4, jac_levels = 3, jac_base = 129;
    double jac_tol = 1e-3;
    bool jac_prefactor = false;
    auto* jac = app.add_subcommand("jacobi", "mode spectra and decaying kernel of the Jacobi operator");
    jac->add_option("--kappa", jac_kappa)->check(CLI::PositiveNumber);
    jac->add_option("--n-max", jac_nmax)->check(CLI::Range(3, 64));
    jac->add_option("--levels", jac_levels)->check(CLI::Range(3, 8));
    jac->add_option("--base-nodes", jac_base)->check(CLI::Range(32, 1 << 16));
    jac->add_option("--tol", jac_tol)->check(CLI::PositiveNumber);
    jac->add_flag("--prefactor", jac_prefactor, "include the positive prefactor (weighted spectrum)");

    // graph
    std::string gr_curve = "0";
    int gr_nr = 64, gr_nth = 64;
    double gr_tol = 1e-10;
    std::string gr_out;
    auto* gr = app.add_subcommand("graph", "minimal vertical graph over the disk with data gamma");
    gr->add_option("--curve", gr_curve, "curve JSON (file or inline): number, {terms} or {samples}");
    gr->add_option("--nr", gr_nr)->check(CLI::Range(4, 4096));
    gr->add_option("--ntheta", gr_nth)->check(CLI::Range(4, 4096));
    gr->add_option("--tol", gr_tol)->check(CLI::PositiveNumber);
    gr->add_option("--out", gr_out, "CSV of theta, u, u_r at the boundary");

    // annulus
    double an_h = 1.0;
    std::string an_pair, an_mesh;
    int an_nt = 97, an_nth = 96, an_sym = 1;
    bool an_ls = false;
    auto* an = app.add_subcommand("annulus", "minimal annulus near a catenoid");
    an->add_option("--half-height", an_h, "half-height of the base catenoid")->check(CLI::Range(1e-6, 1.5707));
    an->add_option("--pair", an_pair, "pair JSON {top, bottom}; default: the catenoid's own curves");
    an->add_option("--nt", an_nt)->check(CLI::Range(9, 4097));
    an->add_option("--ntheta", an_nth)->check(CLI::Range(4, 4096));
    an->add_option("--symmetry", an_sym, "solve in the R_m-invariant subspace")->check(CLI::Range(1, 64));
    an->add_flag("--least-squares", an_ls, "deflate the near-kernel instead of failing");
    an->add_option("--mesh", an_mesh, "OBJ/PLY of the solved annulus");

    // flux / center
    double fl_kappa = 1.0, fl_x = 0.0, fl_y = 0.0;
    int fl_nth = 128;
    auto* fl = app.add_subcommand("flux", "fluxes and conservation residuals of a (dilated) catenoid");
    fl->add_option("--kappa", fl_kappa)->check(CLI::PositiveNumber);
    fl->add_option("--z0x", fl_x);
    fl->add_option("--z0y", fl_y);
    fl->add_option("--ntheta", fl_nth)->check(CLI::Range(8, 1 << 16));
    double ce_kappa = 1.0, ce_x = 0.0, ce_y = 0.0;
    int ce_nth = 128;
    auto* ce = app.add_subcommand("center", "center of a dilated catenoid T_z0(C_h)");
    ce->add_option("--kappa", ce_kappa)->check(CLI::PositiveNumber);
    ce->add_option("--z0x", ce_x);
    ce->add_option("--z0y", ce_y);
    ce->add_option("--ntheta", ce_nth)->check(CLI::Range(8, 1 << 16));

    // tallrect
    double tr_d = 2.0;
    int tr_n = 0;
    bool tr_scan = false;
    std::string tr_export;
    auto* tr = app.add_subcommand("tallrect", "tall rectangle profile, areas and the not-minimizing witness");
    tr->add_option("--d", tr_d, "d > 1")->required();
    tr->add_option("--n", tr_n, "exponent in r = tan^n(theta/2); 0 picks twice the smallest positive-slope n");
    tr->add_flag("--scan", tr_scan, "search a certified witness over n");
    tr->add_option("--export", tr_export, "OBJ/PLY mesh of both halves");

    // gate
    std::string gate_pair;
    auto* gate = app.add_subcommand("gate", "fillability gates for a curve pair");
    gate->add_option("--pair", gate_pair, "pair JSON (file or inline)")->required();

    auto* all = app.add_subcommand("verify-all", "run the acceptance suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        Run run;
        if (*cat) {
            const double kappa = cat_h > 0 ? kappa_from_half_height(cat_h) : cat_kappa;
            const auto p = profile(kappa, cat_nodes);
            run.env.command = "catenoid";
            run.env.config = {{"kappa", kappa}, {"nodes", cat_nodes}};
            run.env.results = {{"kappa", kappa},
                               {"h", p.h},
                               {"neck_radius", neck_radius(kappa)},
                               {"r_min", p.r_min},
                               {"normal_trace", graph_normal_trace(kappa)},
                               {"first_integral_residual", first_integral_residual(p)},
                               {"quadrature_tolerance", 1e-13}};
            if (!cat_out.empty()) {
                const auto path = output_path(cat_out);
                write_text(path, csv_columns({"t", "r", "r_t"}, {&p.t, &p.r, &p.rt}));
                run.env.results["csv"] = path;
            }
            if (!cat_mesh.empty()) {
                const auto path = output_path(cat_mesh);
                export_mesh(catenoid_mesh(p, cat_ntheta), path);
                run.env.results["mesh"] = path;
            }
        } else if (*jac) {
            KernelOptions o;
            o.base_nodes = jac_base;
            o.refinement_levels = jac_levels;
            o.tol = jac_tol;
            o.with_prefactor = jac_prefactor;
            run.env.command = "jacobi";
            run.env.config = {{"kappa", jac_kappa}, {"n_max", jac_nmax}, {"levels", jac_levels},
                              {"base_nodes", jac_base}, {"tol", jac_tol}, {"prefactor", jac_prefactor}};
            run.env.results = to_json_report(kernel_spectrum(jac_kappa, jac_nmax, o));
            const auto kf = known_field_residuals(profile(jac_kappa, 512));
            run.env.results["known_fields_512"] = {{"phi", kf.res_phi}, {"translation", kf.res_translation}};
        } else if (*gr) {
            const auto gamma = curve_from_json(read_json(gr_curve));
            NewtonOptions o;
            o.tol = gr_tol;
            const auto sol = solve_minimal_graph(gamma, PolarGrid(gr_nr, gr_nth), o);
            run.env.command = "graph";
            run.env.config = {{"curve", curve_to_json(gamma)}, {"nr", gr_nr}, {"ntheta", gr_nth}, {"tol", gr_tol}};
            run.env.results = to_json_report(sol, gr_tol);
            if (!gr_out.empty()) {
                const auto path = output_path(gr_out);
                const auto th = theta_grid(gr_nth);
                write_text(path, csv_columns({"theta", "u", "u_r"}, {&th, &sol.boundary_trace, &sol.normal_trace}));
                run.env.results["csv"] = path;
            }
        } else if (*an) {
            const auto chart = build_chart(an_h, an_nt, an_nth);
            const CurvePair pair = an_pair.empty()
                                       ? CurvePair{BoundaryCurve::constant(an_h), BoundaryCurve::constant(-an_h)}
                                       : pair_from_json(read_json(an_pair));
            AnnulusOptions o;
            o.least_squares = an_ls;
            const auto sol = newton_solve(chart, pair, an_sym > 1 ? std::optional<int>(an_sym) : std::nullopt, o);
            run.env.command = "annulus";
            run.env.config = {{"h", an_h},           {"nt", an_nt},          {"ntheta", an_nth},
                              {"symmetry", an_sym},  {"least_squares", an_ls},
                              {"top", curve_to_json(pair.top)}, {"bottom", curve_to_json(pair.bottom)}};
            run.env.results = to_json_report(sol, o.tol);
            if (!an_mesh.empty()) {
                const auto path = output_path(an_mesh);
                export_mesh(annulus_mesh(chart, sol.u), path);
                run.env.results["mesh"] = path;
            }
        } else if (*fl) {
            const DiskPoint z0(fl_x, fl_y);
            const auto top = catenoid_end_trace(fl_kappa, z0, End::top, fl_nth);
            const auto bot = catenoid_end_trace(fl_kappa, z0, End::bottom, fl_nth);
            run.env.command = "flux";
            run.env.config = {{"kappa", fl_kappa}, {"z0", {fl_x, fl_y}}, {"ntheta", fl_nth}};
            run.env.results = {{"top", to_json_report(flux_report(top))},
                               {"bottom", to_json_report(flux_report(bot))},
                               {"expected_vertical", 2 * std::numbers::pi / fl_kappa},
                               {"conservation", to_json_report(conservation_residuals(top, bot))}};
        } else if (*ce) {
            const DiskPoint z0(ce_x, ce_y);
            const auto bot = catenoid_end_trace(ce_kappa, z0, End::bottom, ce_nth);
            run.env.command = "center";
            run.env.config = {{"kappa", ce_kappa}, {"z0", {ce_x, ce_y}}, {"ntheta", ce_nth}};
            run.env.results = to_json_report(center(bot, std::vector<double>(ce_nth, 0.0)));
        } else if (*tr) {
            const int n = tr_n > 0 ? tr_n : 2 * smallest_positive_slope_n(tr_d);
            const TallRectParams p(tr_d, n);
            run.env.command = "tallrect";
            run.env.config = {{"d", tr_d}, {"n", n}, {"scan", tr_scan}};
            run.env.results = {{"theta0", p.theta0()},
                               {"lambda0", lambda_profile(p, 0.0)},
                               {"height", tall_rectangle_height(p)},
                               {"F_minus_E", elliptic_F(p.theta0(), tr_d * tr_d).value -
                                                 elliptic_E(p.theta0(), tr_d * tr_d).value},
                               {"limit_slope", limit_slope(p)},
                               {"smallest_positive_slope_n", smallest_positive_slope_n(tr_d)},
                               {"quadrature_tolerance", 1e-13}};
            if (tr_scan) {
                WitnessOptions o;
                run.env.results["witness"] = to_json_report(verify_not_minimizing(tr_d, o), o.tol);
            }
            if (!tr_export.empty()) {
                const auto path = output_path(tr_export);
                export_mesh(tallrect_mesh(p, 0.25, 4.0), path);
                run.env.results["mesh"] = path;
            }
        } else if (*gate) {
            const auto pair = pair_from_json(read_json(gate_pair));
            run.env.command = "gate";
            run.env.config = {{"top", curve_to_json(pair.top)}, {"bottom", curve_to_json(pair.bottom)}};
            run.env.results = to_json_report(obstruction_report(pair));
        } else if (*all) {
            const auto results = acceptance::run_all();
            bool ok = true;
            for (const auto& r : results) {
                std::cerr << acceptance::format_line(r) << '\n';
                ok = ok && r.pass;
            }
            run.env.command = "verify-all";
            json rows = json::array();
            for (const auto& r : results) rows.push_back({{"id", r.id}, {"title", r.title}, {"pass", r.pass},
                                                          {"detail", r.detail}, {"budget_seconds", r.budget}});
            run.env.results = {{"criteria", rows}, {"all_pass", ok}};
            for (const auto& r : results) run.env.timing["criterion_" + std::to_string(r.id)] = r.seconds;
            run.emit();
            return ok ? 0 : 3;
        }
        run.emit();
        return 0;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return 2;
    } catch (const NumericsError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const json::exception& e) {
        std::cerr << "bad JSON input: " << e.what() << '\n';
        return 1;
    }
}
