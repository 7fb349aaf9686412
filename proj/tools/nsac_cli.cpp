// Command-line driver: run / resume experiments, compare the two
// formulations, refit decay exponents from an existing CSV, run manufactured
// solution convergence studies and the inequality lab.
//
// Exit codes: 0 success, 2 validation, 3 runtime physics failure, 4 I/O.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "nsac/experiment.hpp"
#include "nsac/inequality_lab.hpp"
#include "nsac/mms.hpp"

using namespace nsac;

namespace {

int exit_code_for(const Error& e) {
    switch (e.failure_class()) {
        case FailureClass::Validation: return 2;
        case FailureClass::Physics: return 3;
        case FailureClass::Io: return 4;
    }
    return 1;
}

ExperimentConfig load_with_overrides(const std::string& path, const std::string& outdir) {
    auto cfg = load_config(path);
    if (!outdir.empty()) cfg.output.directory = outdir;
    return cfg;
}

int cmd_run(const std::string& config_path, const std::string& outdir) {
    auto cfg = load_with_overrides(config_path, outdir);
    auto result = run_experiment(cfg);
    std::cout << "status: " << result.status << "\n";
    if (!result.message.empty()) std::cout << result.message << "\n";
    for (const auto& f : result.fits)
        std::cout << "fit " << f.column << ": exponent " << f.exponent << " +- "
                  << f.stderr_exponent << " (R^2 " << f.r_squared << ")\n";
    std::cout << "records: " << result.records.size() << ", wall: " << result.wall_seconds
              << " s\n";
    return result.exit_code;
}

int cmd_resume(const std::string& checkpoint, const std::string& config_path,
               const std::string& outdir) {
    auto cfg = load_with_overrides(config_path, outdir);
    auto result = resume_experiment(cfg, checkpoint);
    std::cout << "status: " << result.status << "\n";
    if (!result.message.empty()) std::cout << result.message << "\n";
    return result.exit_code;
}

int cmd_compare(const std::string& config_path, const std::string& outdir) {
    auto cfg = load_with_overrides(config_path, outdir);
    auto r = compare_forms(cfg);
    write_compare_report(cfg, r);
    std::cout << "status: " << r.status << "\n";
    if (!r.message.empty()) std::cout << r.message << "\n";
    std::printf("sup |rho_cons - (1+varrho)| = %.3e\n", r.sup_rho);
    std::printf("sup |u_cons - u_pert|       = %.3e\n", r.sup_u);
    std::printf("sup |chi_cons - chi_pert|   = %.3e\n", r.sup_chi);
    return r.exit_code;
}

int cmd_decay_fit(const std::string& csv, const std::string& column, double t0, double t1,
                  const std::string& out_path) {
    auto series = read_csv_column(csv, column);
    auto fit = fit_decay(series, t0, t1, column);
    json j{{"column", fit.column},     {"t0", fit.t0},
           {"t1", fit.t1},             {"samples", fit.samples},
           {"exponent", fit.exponent}, {"stderr", fit.stderr_exponent},
           {"r_squared", fit.r_squared}};
    std::cout << j.dump(2) << "\n";
    if (!out_path.empty()) {
        std::ofstream os(out_path);
        os << j.dump(2) << "\n";
    }
    return 0;
}

int cmd_mms(int dim, int n, const std::string& which, const std::string& scheme, double h,
            double t_end, bool check) {
    std::vector<int> sizes(dim, n);
    std::vector<double> lengths(dim, 2 * kPi);
    auto g = make_grid(dim, sizes, lengths);
    ModelParams params;
    params.gamma = 2.0;
    params.pressure_scale = 0.5;
    auto ms = which == "coupled" ? mms_coupled_trig(g) : mms_chi_decay(g);

    bool ok = true;
    auto study = [&](Scheme s, double lo, double hi) {
        const double order = mms_temporal_order(ms, params, s, h, t_end);
        const double err = mms_run_error(ms, params, s, h, t_end);
        std::printf("%-10s %-12s order %.3f   err(dt=%.2e) %.3e\n", to_string(s),
                    ms.name.c_str(), order, h, err);
        if (order < lo || order > hi) ok = false;
    };
    if (scheme == "euler" || scheme == "both") study(Scheme::ImexEuler, 0.8, 1.2);
    if (scheme == "bdf2" || scheme == "both") study(Scheme::ImexBdf2, 1.8, 2.2);
    if (check && !ok) {
        std::cout << "temporal order outside the expected band\n";
        return 3;
    }
    return 0;
}

int cmd_inequality(const std::string& id, int trials, std::uint64_t seed, int n,
                   const std::string& out_path) {
    std::vector<int> sizes(3, n);
    std::vector<double> lengths(3, 2 * kPi);
    auto g = make_grid(3, sizes, lengths);
    auto rep = inequality_lab(inequality_from_string(id), trials, seed, g);
    auto j = to_json(rep);
    std::cout << j.dump(2) << "\n";
    if (!out_path.empty()) {
        std::ofstream os(out_path);
        os << j.dump(2) << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pseudo-spectral Navier-Stokes-Allen-Cahn simulator and verification harness"};
    app.require_subcommand(1);

    std::string config_path, outdir, checkpoint, csv, column = "L2_u", out_path;
    double t0 = 5.0, t1 = 100.0, h = 1.0 / 160.0, t_end = 0.5;
    int dim = 1, n = 32, trials = 100;
    std::uint64_t seed = 1;
    std::string mms_case = "chi", scheme = "both", ineq_id = "GN";
    bool check = false;

    auto* run = app.add_subcommand("run", "run an experiment from a config file");
    run->add_option("config", config_path)->required();
    run->add_option("-o,--output", outdir, "override output directory");

    auto* cmp = app.add_subcommand("compare-forms",
                                   "evolve both formulations from matched data and compare");
    cmp->add_option("config", config_path)->required();
    cmp->add_option("-o,--output", outdir);

    auto* fit = app.add_subcommand("decay-fit", "refit a decay exponent from an existing CSV");
    fit->add_option("csv", csv)->required();
    fit->add_option("--column", column, "CSV column to fit")->required();
    fit->add_option("--t0", t0);
    fit->add_option("--t1", t1);
    fit->add_option("--out", out_path, "also write the fit as JSON");

    auto* mms = app.add_subcommand("mms", "manufactured-solution convergence study");
    mms->add_option("--dim", dim)->check(CLI::Range(1, 3));
    mms->add_option("--n", n);
    mms->add_option("--case", mms_case)->check(CLI::IsMember({"chi", "coupled"}));
    mms->add_option("--scheme", scheme)->check(CLI::IsMember({"euler", "bdf2", "both"}));
    mms->add_option("--dt-fine", h, "finest step of the {4h,2h,h} sweep");
    mms->add_option("--t-end", t_end);
    mms->add_flag("--check", check, "nonzero exit if orders leave the band");

    auto* lab = app.add_subcommand("inequality-lab", "measured functional-inequality constants");
    lab->add_option("--id", ineq_id)
        ->check(CLI::IsMember({"GN", "KatoPonce", "Commutator", "HLS", "Composition"}));
    lab->add_option("--trials", trials);
    lab->add_option("--seed", seed);
    lab->add_option("--n", n, "cubic grid size");
    lab->add_option("--out", out_path);

    auto* res = app.add_subcommand("resume", "continue a run from a checkpoint");
    res->add_option("checkpoint", checkpoint)->required();
    res->add_option("config", config_path)->required();
    res->add_option("-o,--output", outdir);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, outdir);
        if (cmp->parsed()) return cmd_compare(config_path, outdir);
        if (fit->parsed()) return cmd_decay_fit(csv, column, t0, t1, out_path);
        if (mms->parsed()) return cmd_mms(dim, n, mms_case, scheme, h, t_end, check);
        if (lab->parsed()) return cmd_inequality(ineq_id, trials, seed, n, out_path);
        if (res->parsed()) return cmd_resume(checkpoint, config_path, outdir);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
