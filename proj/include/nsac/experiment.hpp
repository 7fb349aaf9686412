#pragma once

// Run orchestration: drives the integrator, streams the diagnostics CSV,
// writes checkpoints and the run manifest (always, also on failure), and
// implements the two-formulation comparison.

#include <algorithm>
#include <array>
#include <chrono>
#include <filesystem>
#include <iomanip>

#include "nsac/checkpoint.hpp"
#include "nsac/config.hpp"

namespace nsac {

inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct RunResult {
    std::string status = "ok"; // or the failure class name
    std::string message;
    std::vector<DiagnosticsRecord> records;
    std::vector<DecayFit> fits;
    double wall_seconds = 0.0;
    int exit_code = 0;
};

namespace rundetail {

inline void write_csv_header(std::ostream& os, const DiagnosticsPlan& plan) {
    os << "t";
    for (const auto& col : plan.column_labels()) os << "," << col;
    os << ",min_rho,max_rho\n";
}

inline void write_csv_row(std::ostream& os, const DiagnosticsRecord& rec) {
    os << format_g17(rec.t);
    for (const auto& [k, v] : rec.values) os << "," << format_g17(v);
    os << "," << format_g17(rec.min_rho) << "," << format_g17(rec.max_rho) << "\n";
}

inline int exit_code_for(FailureClass c) {
    switch (c) {
        case FailureClass::Validation: return 2;
        case FailureClass::Physics: return 3;
        case FailureClass::Io: return 4;
    }
    return 1;
}

inline std::string checkpoint_name(double t) {
    std::ostringstream os;
    os << "checkpoint_t" << std::setprecision(12) << t << ".nsac";
    return os.str();
}

} // namespace rundetail

// Shared core for fresh runs and resumes. The integrator must already sit at
// some state on the dt grid; records stream to the CSV as they appear.
inline RunResult drive_run(ImexIntegrator& integ, const ExperimentConfig& cfg,
                           std::ostream& csv, bool write_header) {
    RunResult result;
    const auto t_start = std::chrono::steady_clock::now();
    if (write_header) rundetail::write_csv_header(csv, cfg.plan);

    auto emit = [&](const ImexIntegrator& it) {
        auto rec = record(it.state(), cfg.plan, cfg.model);
        rundetail::write_csv_row(csv, rec);
        csv.flush();
        result.records.push_back(std::move(rec));
    };

    std::vector<double> pending = cfg.output.checkpoint_times;
    std::sort(pending.begin(), pending.end());
    // resumed runs only write checkpoints that lie ahead of them
    while (!pending.empty() && pending.front() <= integ.time() + 0.5 * cfg.stepper.dt)
        pending.erase(pending.begin());

    try {
        const long nsteps = static_cast<long>(std::llround((cfg.stepper.t_end - integ.time()) /
                                                           cfg.stepper.dt));
        if (nsteps < 0) throw ValidationError("t_end precedes the checkpoint time");
        emit(integ);
        for (long n = 1; n <= nsteps; ++n) {
            integ.step();
            if (!pending.empty() && integ.time() >= pending.front() - 0.5 * cfg.stepper.dt) {
                pending.erase(pending.begin());
                State prev;
                State snap = integ.checkpoint_sync(&prev);
                const auto dir = std::filesystem::path(cfg.output.directory);
                const auto name = rundetail::checkpoint_name(snap.time);
                save_checkpoint(snap, cfg.model, (dir / name).string());
                if (cfg.stepper.scheme == Scheme::ImexBdf2 && integ.has_history())
                    save_checkpoint(prev, cfg.model, (dir / (name + ".prev")).string());
            }
            if (integ.global_step() % cfg.stepper.cadence == 0 || n == nsteps) {
                if (integ.smallness() > cfg.stepper.energy_ceiling)
                    throw NonFiniteData("sqrt(E_0^3) exceeded the blow-up ceiling " +
                                        std::to_string(cfg.stepper.energy_ceiling));
                emit(integ);
            }
        }
        // offline fits over the recorded series
        for (const auto& freq : cfg.fits) {
            std::vector<std::pair<double, double>> series;
            for (const auto& rec : result.records)
                series.emplace_back(rec.t, rec.value(freq.column));
            result.fits.push_back(fit_decay(series, freq.t0, freq.t1, freq.column));
        }
    } catch (const Error& e) {
        result.status = e.name();
        result.message = e.what();
        result.exit_code = rundetail::exit_code_for(e.failure_class());
    }
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return result;
}

inline json fits_to_json(const std::vector<DecayFit>& fits) {
    json out = json::array();
    for (const auto& f : fits)
        out.push_back({{"column", f.column},
                       {"t0", f.t0},
                       {"t1", f.t1},
                       {"samples", f.samples},
                       {"exponent", f.exponent},
                       {"stderr", f.stderr_exponent},
                       {"r_squared", f.r_squared}});
    return out;
}

inline void write_manifest(const ExperimentConfig& cfg, const RunResult& result,
                           const json& extra = json::object()) {
    json m{{"schema_version", 1},
           {"config", config_to_json(cfg)},
           {"status", result.status},
           {"message", result.message},
           {"wall_seconds", result.wall_seconds},
           {"records", result.records.size()},
           {"fits", fits_to_json(result.fits)}};
    if (!result.records.empty()) {
        const auto& first = result.records.front();
        const auto& last = result.records.back();
        m["invariants"] = {{"t_first", first.t},
                           {"t_last", last.t},
                           {"min_rho_overall",
                            [&] {
                                double v = first.min_rho;
                                for (const auto& r : result.records) v = std::min(v, r.min_rho);
                                return v;
                            }()},
                           {"sqrtE03_first", first.value("sqrtE03")},
                           {"sqrtE03_last", last.value("sqrtE03")}};
    }
    for (auto it = extra.begin(); it != extra.end(); ++it) m[it.key()] = *it;
    std::ofstream os(std::filesystem::path(cfg.output.directory) / cfg.output.manifest);
    os << m.dump(2) << "\n";
}

// Fresh run: build the initial state, stream diagnostics, fit, persist.
inline RunResult run_experiment(const ExperimentConfig& cfg) {
    std::filesystem::create_directories(cfg.output.directory);
    RunResult result;
    try {
        State initial = build_initial_state(cfg);
        ImexIntegrator integ(initial, cfg.stepper, cfg.model, nullptr);
        std::ofstream csv(std::filesystem::path(cfg.output.directory) / cfg.output.csv,
                          std::ios::trunc);
        if (!csv) throw Io("cannot open diagnostics CSV for writing");
        result = drive_run(integ, cfg, csv, true);
    } catch (const Error& e) {
        result.status = e.name();
        result.message = e.what();
        result.exit_code = rundetail::exit_code_for(e.failure_class());
    }
    write_manifest(cfg, result);
    return result;
}

// Resume: rebuild the integrator from a checkpoint (exact BDF2 history from
// the .prev sidecar when present) and continue to cfg.stepper.t_end.
inline RunResult resume_experiment(const ExperimentConfig& cfg, const std::string& checkpoint_path) {
    std::filesystem::create_directories(cfg.output.directory);
    RunResult result;
    try {
        auto loaded = load_checkpoint(checkpoint_path);
        const double params[7] = {cfg.model.mu, cfg.model.lambda, cfg.model.gamma, cfg.model.ell,
                                  cfg.model.pressure_scale, cfg.model.vacuum_floor,
                                  cfg.model.smallness_delta};
        const double stored[7] = {loaded.model.mu, loaded.model.lambda, loaded.model.gamma,
                                  loaded.model.ell, loaded.model.pressure_scale,
                                  loaded.model.vacuum_floor, loaded.model.smallness_delta};
        for (int i = 0; i < 7; ++i)
            if (params[i] != stored[i])
                throw ValidationError("config model parameters disagree with the checkpoint");
        ImexIntegrator integ(loaded.state, cfg.stepper, cfg.model, nullptr);
        if (cfg.stepper.scheme == Scheme::ImexBdf2) {
            const std::string prev_path = checkpoint_path + ".prev";
            if (std::filesystem::exists(prev_path))
                integ.restore_history(load_checkpoint(prev_path).state);
        }
        std::ofstream csv(std::filesystem::path(cfg.output.directory) / cfg.output.csv,
                          std::ios::trunc);
        if (!csv) throw Io("cannot open diagnostics CSV for writing");
        result = drive_run(integ, cfg, csv, true);
    } catch (const Error& e) {
        result.status = e.name();
        result.message = e.what();
        result.exit_code = rundetail::exit_code_for(e.failure_class());
    }
    write_manifest(cfg, result);
    return result;
}

// ---------------------------------------------------------------------------
// compare-forms: evolve both formulations from the matched initial state with
// one closure and report sup-norm differences of the primitive variables.

struct CompareFormsResult {
    std::string status = "ok";
    std::string message;
    int exit_code = 0;
    double sup_rho = 0.0, sup_u = 0.0, sup_chi = 0.0;
    std::vector<std::array<double, 4>> table; // t, rho, u, chi differences
};

inline CompareFormsResult compare_forms(const ExperimentConfig& cfg) {
    CompareFormsResult out;
    try {
        ExperimentConfig pert_cfg = cfg;
        pert_cfg.formulation = Formulation::Perturbation;
        State initial = build_initial_state(pert_cfg);

        // smallness gate on the deviation part (chi may sit near either well)
        {
            State dev = initial;
            const double chi_mean = mean_value(dev.chi);
            for (double& v : dev.chi.data) v -= chi_mean;
            const double eps0 = smallness_monitor(dev, cfg.model);
            if (eps0 > 0.05)
                throw ValidationError("compare-forms needs small data: sqrt(E_0^3) of the "
                                      "deviation is " + std::to_string(eps0) + " > 0.05");
        }

        ImexIntegrator pert(initial, cfg.stepper, cfg.model, nullptr);
        ImexIntegrator cons(to_conservative(initial, cfg.model), cfg.stepper, cfg.model, nullptr);
        const long nsteps = static_cast<long>(std::llround(cfg.stepper.t_end / cfg.stepper.dt));

        auto compare = [&](double t) {
            auto sp = pert.state();
            auto pc = to_primitive(cons.state(), cfg.model);
            double dr = 0.0, du = 0.0, dc = 0.0;
            for (std::size_t i = 0; i < sp.rho.size(); ++i) {
                dr = std::max(dr, std::abs(pc.rho[i] - (1.0 + sp.rho[i])));
                dc = std::max(dc, std::abs(pc.chi[i] - sp.chi[i]));
                for (int a = 0; a < sp.grid()->dim(); ++a)
                    du = std::max(du, std::abs(pc.u[a][i] - sp.mom[a][i]));
            }
            out.sup_rho = std::max(out.sup_rho, dr);
            out.sup_u = std::max(out.sup_u, du);
            out.sup_chi = std::max(out.sup_chi, dc);
            out.table.push_back({t, dr, du, dc});
        };

        compare(0.0);
        for (long n = 1; n <= nsteps; ++n) {
            pert.step();
            cons.step();
            if (n % cfg.stepper.cadence == 0 || n == nsteps) compare(pert.time());
        }
    } catch (const Error& e) {
        out.status = e.name();
        out.message = e.what();
        out.exit_code = rundetail::exit_code_for(e.failure_class());
    }
    return out;
}

inline void write_compare_report(const ExperimentConfig& cfg, const CompareFormsResult& r) {
    std::filesystem::create_directories(cfg.output.directory);
    json rows = json::array();
    for (const auto& row : r.table)
        rows.push_back({{"t", row[0]}, {"rho", row[1]}, {"u", row[2]}, {"chi", row[3]}});
    json m{{"schema_version", 1},
           {"config", config_to_json(cfg)},
           {"status", r.status},
           {"message", r.message},
           {"sup_rho_diff", r.sup_rho},
           {"sup_u_diff", r.sup_u},
           {"sup_chi_diff", r.sup_chi},
           {"series", rows}};
    std::ofstream os(std::filesystem::path(cfg.output.directory) / "compare_forms.json");
    os << m.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// CSV reading for offline decay refits.

inline std::vector<std::pair<double, double>> read_csv_column(const std::string& path,
                                                              const std::string& column) {
    std::ifstream is(path);
    if (!is) throw Io("cannot open CSV " + path);
    std::string line;
    if (!std::getline(is, line)) throw FormatError("empty CSV " + path);
    std::vector<std::string> cols;
    {
        std::stringstream ss(line);
        std::string c;
        while (std::getline(ss, c, ',')) cols.push_back(c);
    }
    int target = -1;
    for (std::size_t i = 0; i < cols.size(); ++i)
        if (cols[i] == column) target = static_cast<int>(i);
    if (target < 0) throw ValidationError("CSV has no column named " + column);
    if (cols.empty() || cols[0] != "t") throw FormatError("CSV must start with a 't' column");

    std::vector<std::pair<double, double>> series;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        double t = 0.0, v = 0.0;
        for (int i = 0; std::getline(ss, cell, ','); ++i) {
            if (i == 0) t = std::stod(cell);
            if (i == target) v = std::stod(cell);
        }
        series.emplace_back(t, v);
    }
    return series;
}

} // namespace nsac
