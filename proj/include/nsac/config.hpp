#pragma once

// Experiment configuration: versioned JSON with documented defaults.
// pressure_scale defaults to 1/gamma for perturbation runs (unit acoustic
// coupling) and to 1 for conservative runs (thermodynamically consistent
// free energy); both can be overridden for matched-closure comparisons.

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nsac/diagnostics.hpp"
#include "nsac/random_fields.hpp"
#include "nsac/stepper.hpp"

namespace nsac {

using nlohmann::json;

struct PowerlawRecipe {
    double s = 0.5;
    double k_cut = 0.5;
    double amplitude = 0.0;
};

struct InitialDataSpec {
    std::string kind = "zero"; // zero | uniform | powerlaw | chi_bump | trig
    std::uint64_t seed = 0;
    // uniform
    double chi_background = 0.0;
    // powerlaw per-field recipes (amplitude 0 = leave the field zero)
    PowerlawRecipe rho, u, chi;
    bool dealias_safe = true;
    std::optional<double> normalize_sqrtE03;
    // chi_bump / trig
    double amplitude = 1e-3;
};

struct FitRequest {
    std::string column;
    double t0 = 5.0;
    double t1 = 100.0;
};

struct OutputSpec {
    std::string directory = "out";
    std::string csv = "diagnostics.csv";
    std::string manifest = "manifest.json";
    std::vector<double> checkpoint_times;
};

struct ExperimentConfig {
    int schema_version = 1;
    int dim = 3;
    std::vector<int> sizes;
    std::vector<double> lengths;
    Formulation formulation = Formulation::Perturbation;
    ModelParams model;
    StepperConfig stepper;
    InitialDataSpec initial;
    DiagnosticsPlan plan;
    std::vector<FitRequest> fits;
    OutputSpec output;

    GridPtr make_grid_ptr() const { return make_grid(dim, sizes, lengths); }
};

namespace cfgdetail {

inline void require_keys(const json& j, std::initializer_list<const char*> known,
                         const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k) ok = true;
        if (!ok) throw ParseError("unknown key '" + it.key() + "' in " + where);
    }
}

inline double get_num(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) throw ParseError(std::string(key) + " must be a number");
    return j.at(key).get<double>();
}

inline NormSpec parse_norm(const json& j) {
    require_keys(j, {"kind", "target", "p", "k", "s", "l"}, "diagnostics.norms[]");
    NormSpec n;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "L2") {
        n.kind = NormKind::L2;
    } else if (kind == "Lp") {
        n.kind = NormKind::Lp;
        n.param = j.contains("p") && j.at("p").is_string()
                      ? std::numeric_limits<double>::infinity()
                      : get_num(j, "p", 2.0);
    } else if (kind == "Hk") {
        n.kind = NormKind::Hk;
        n.param = get_num(j, "k", 1.0);
    } else if (kind == "HomHs") {
        n.kind = NormKind::HomHs;
        n.param = get_num(j, "s", 0.5);
    } else if (kind == "GradL2") {
        n.kind = NormKind::GradL2;
        n.param = get_num(j, "l", 1.0);
    } else {
        throw ParseError("unknown norm kind '" + kind + "'");
    }
    const std::string target = j.value("target", "rho");
    if (target == "rho") n.target = FieldTarget::Rho;
    else if (target == "u") n.target = FieldTarget::U;
    else if (target == "chi") n.target = FieldTarget::Chi;
    else if (target == "grad_chi") n.target = FieldTarget::GradChi;
    else throw ParseError("unknown norm target '" + target + "'");
    n.validate();
    return n;
}

inline PowerlawRecipe parse_recipe(const json& j) {
    require_keys(j, {"s", "k_cut", "amplitude"}, "initial_data recipe");
    PowerlawRecipe r;
    r.s = get_num(j, "s", r.s);
    r.k_cut = get_num(j, "k_cut", r.k_cut);
    r.amplitude = get_num(j, "amplitude", r.amplitude);
    return r;
}

} // namespace cfgdetail

inline ExperimentConfig parse_config_json(const json& j) {
    using namespace cfgdetail;
    if (!j.is_object()) throw ParseError("config root must be a JSON object");
    require_keys(j,
                 {"schema_version", "grid", "model", "formulation", "stepper", "initial_data",
                  "diagnostics", "fits", "output"},
                 "config root");
    ExperimentConfig c;
    if (!j.contains("schema_version") || !j.at("schema_version").is_number_integer())
        throw ParseError("schema_version is required");
    c.schema_version = j.at("schema_version").get<int>();
    if (c.schema_version != 1)
        throw ParseError("unrecognized schema_version " + std::to_string(c.schema_version));

    if (!j.contains("grid")) throw ParseError("grid section is required");
    {
        const auto& g = j.at("grid");
        require_keys(g, {"dim", "sizes", "lengths"}, "grid");
        c.dim = g.value("dim", 3);
        if (!g.contains("sizes") || !g.contains("lengths"))
            throw ParseError("grid.sizes and grid.lengths are required");
        c.sizes = g.at("sizes").get<std::vector<int>>();
        c.lengths = g.at("lengths").get<std::vector<double>>();
    }

    const std::string form = j.value("formulation", "perturbation");
    if (form == "perturbation") c.formulation = Formulation::Perturbation;
    else if (form == "conservative") c.formulation = Formulation::Conservative;
    else throw ParseError("formulation must be 'perturbation' or 'conservative'");

    {
        const json m = j.value("model", json::object());
        require_keys(m,
                     {"mu", "lambda", "gamma", "ell", "pressure_scale", "vacuum_floor",
                      "smallness_delta"},
                     "model");
        c.model.mu = get_num(m, "mu", 1.0);
        c.model.lambda = get_num(m, "lambda", 0.0);
        c.model.gamma = get_num(m, "gamma", 2.0);
        c.model.ell = get_num(m, "ell", 1.0);
        c.model.vacuum_floor = get_num(m, "vacuum_floor", 0.25);
        c.model.smallness_delta = get_num(m, "smallness_delta", 0.1);
        const double default_a =
            c.formulation == Formulation::Perturbation ? 1.0 / c.model.gamma : 1.0;
        c.model.pressure_scale = get_num(m, "pressure_scale", default_a);
        c.model.validate();
    }

    {
        const json s = j.value("stepper", json::object());
        require_keys(s,
                     {"scheme", "dt", "t_end", "cfl_guard", "cadence", "energy_ceiling",
                      "nonlinear"},
                     "stepper");
        const std::string scheme = s.value("scheme", "imex-bdf2");
        if (scheme == "imex-euler") c.stepper.scheme = Scheme::ImexEuler;
        else if (scheme == "imex-bdf2") c.stepper.scheme = Scheme::ImexBdf2;
        else throw ParseError("stepper.scheme must be 'imex-euler' or 'imex-bdf2'");
        c.stepper.dt = get_num(s, "dt", 1e-2);
        c.stepper.t_end = get_num(s, "t_end", 1.0);
        c.stepper.cfl_guard = get_num(s, "cfl_guard", 0.5);
        c.stepper.cadence = static_cast<int>(get_num(s, "cadence", 1));
        c.stepper.energy_ceiling = get_num(s, "energy_ceiling", 1.0);
        c.stepper.nonlinear = s.value("nonlinear", true);
        c.stepper.validate();
    }

    {
        const json d = j.value("initial_data", json::object());
        require_keys(d,
                     {"kind", "seed", "chi_background", "rho", "u", "chi", "dealias_safe",
                      "normalize_sqrtE03", "amplitude"},
                     "initial_data");
        c.initial.kind = d.value("kind", "zero");
        if (d.contains("seed")) c.initial.seed = d.at("seed").get<std::uint64_t>();
        c.initial.chi_background = get_num(d, "chi_background", 0.0);
        if (d.contains("rho")) c.initial.rho = parse_recipe(d.at("rho"));
        if (d.contains("u")) c.initial.u = parse_recipe(d.at("u"));
        if (d.contains("chi")) c.initial.chi = parse_recipe(d.at("chi"));
        c.initial.dealias_safe = d.value("dealias_safe", true);
        if (d.contains("normalize_sqrtE03"))
            c.initial.normalize_sqrtE03 = d.at("normalize_sqrtE03").get<double>();
        c.initial.amplitude = get_num(d, "amplitude", 1e-3);
        if (c.initial.kind != "zero" && c.initial.kind != "uniform" &&
            c.initial.kind != "powerlaw" && c.initial.kind != "chi_bump" &&
            c.initial.kind != "trig")
            throw ParseError("unknown initial_data.kind '" + c.initial.kind + "'");
        if (c.initial.kind == "powerlaw" && !d.contains("seed"))
            throw ValidationError("initial_data.seed is required for stochastic recipes");
    }

    {
        const json d = j.value("diagnostics", json::object());
        require_keys(d, {"norms", "energies", "physical_energy"}, "diagnostics");
        for (const auto& n : d.value("norms", json::array())) c.plan.norms.push_back(parse_norm(n));
        for (const auto& e : d.value("energies", json::array())) {
            require_keys(e, {"l", "m", "eta"}, "diagnostics.energies[]");
            EnergySpec es;
            es.l = static_cast<int>(get_num(e, "l", 0));
            es.m = static_cast<int>(get_num(e, "m", 3));
            es.eta = get_num(e, "eta", 0.5);
            c.plan.energies.push_back(es);
        }
        c.plan.physical_energy = d.value("physical_energy", false);
        c.plan.validate();
    }

    for (const auto& f : j.value("fits", json::array())) {
        cfgdetail::require_keys(f, {"column", "t0", "t1"}, "fits[]");
        FitRequest r;
        r.column = f.at("column").get<std::string>();
        r.t0 = get_num(f, "t0", 5.0);
        r.t1 = get_num(f, "t1", 100.0);
        c.fits.push_back(r);
    }

    {
        const json o = j.value("output", json::object());
        require_keys(o, {"directory", "csv", "manifest", "checkpoint_times"}, "output");
        c.output.directory = o.value("directory", "out");
        c.output.csv = o.value("csv", "diagnostics.csv");
        c.output.manifest = o.value("manifest", "manifest.json");
        if (o.contains("checkpoint_times"))
            c.output.checkpoint_times = o.at("checkpoint_times").get<std::vector<double>>();
    }

    // grid invariants surface here as ValidationError with the field name
    try {
        c.make_grid_ptr();
    } catch (const InvalidGrid& e) {
        throw ValidationError(std::string("grid: ") + e.what());
    }
    return c;
}

inline ExperimentConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    return parse_config_json(j);
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Io("cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

// Config echo for the run manifest.
inline json config_to_json(const ExperimentConfig& c) {
    json norms = json::array();
    for (const auto& n : c.plan.norms) norms.push_back(n.label());
    json energies = json::array();
    for (const auto& e : c.plan.energies) energies.push_back(e.label());
    json fits = json::array();
    for (const auto& f : c.fits) fits.push_back({{"column", f.column}, {"t0", f.t0}, {"t1", f.t1}});
    return json{
        {"schema_version", c.schema_version},
        {"grid", {{"dim", c.dim}, {"sizes", c.sizes}, {"lengths", c.lengths}}},
        {"formulation", to_string(c.formulation)},
        {"model",
         {{"mu", c.model.mu},
          {"lambda", c.model.lambda},
          {"gamma", c.model.gamma},
          {"ell", c.model.ell},
          {"pressure_scale", c.model.pressure_scale},
          {"vacuum_floor", c.model.vacuum_floor},
          {"smallness_delta", c.model.smallness_delta}}},
        {"stepper",
         {{"scheme", to_string(c.stepper.scheme)},
          {"dt", c.stepper.dt},
          {"t_end", c.stepper.t_end},
          {"cfl_guard", c.stepper.cfl_guard},
          {"cadence", c.stepper.cadence},
          {"energy_ceiling", c.stepper.energy_ceiling},
          {"nonlinear", c.stepper.nonlinear}}},
        {"initial_data", {{"kind", c.initial.kind}, {"seed", c.initial.seed}}},
        {"diagnostics", {{"norms", norms}, {"energies", energies}}},
        {"fits", fits},
        {"output",
         {{"directory", c.output.directory},
          {"csv", c.output.csv},
          {"manifest", c.output.manifest},
          {"checkpoint_times", c.output.checkpoint_times}}}};
}

// Materialize the initial state from the recipe; deterministic in the seed.
inline State build_initial_state(const ExperimentConfig& c) {
    auto g = c.make_grid_ptr();
    State s(Formulation::Perturbation, g);
    const auto& init = c.initial;
    if (init.kind == "zero") {
        // all fields zero
    } else if (init.kind == "uniform") {
        for (double& v : s.chi.data) v = init.chi_background;
    } else if (init.kind == "powerlaw") {
        auto fill = [&](const PowerlawRecipe& r, RealField& dst, std::uint64_t salt) {
            if (r.amplitude <= 0.0) return;
            dst = gen_powerlaw_field(g, r.s, r.k_cut, init.seed + salt, r.amplitude,
                                     init.dealias_safe);
        };
        fill(init.rho, s.rho, 0);
        for (int a = 0; a < g->dim(); ++a) fill(init.u, s.mom.comp[a], 1 + a);
        fill(init.chi, s.chi, 17);
        if (init.normalize_sqrtE03) {
            const double cur = smallness_monitor(s, c.model);
            if (!(cur > 0.0))
                throw ValidationError("normalize_sqrtE03 needs a nonzero stochastic state");
            const double scale = *init.normalize_sqrtE03 / cur;
            for (double& v : s.rho.data) v *= scale;
            for (double& v : s.chi.data) v *= scale;
            for (int a = 0; a < g->dim(); ++a)
                for (double& v : s.mom.comp[a].data) v *= scale;
        }
    } else if (init.kind == "chi_bump") {
        int midx[Grid::max_dim];
        for (std::size_t i = 0; i < s.chi.size(); ++i) {
            g->flat_to_multi(i, midx);
            const double x = g->coord(0, midx[0]);
            s.chi[i] = init.chi_background +
                       init.amplitude * std::cos(2.0 * kPi * x / g->length(0));
        }
    } else if (init.kind == "trig") {
        int midx[Grid::max_dim];
        const double a = init.amplitude;
        for (std::size_t i = 0; i < s.chi.size(); ++i) {
            g->flat_to_multi(i, midx);
            const double x = 2.0 * kPi * g->coord(0, midx[0]) / g->length(0);
            const double y =
                g->dim() >= 2 ? 2.0 * kPi * g->coord(1, midx[1]) / g->length(1) : x;
            s.rho[i] = a * std::cos(x);
            s.chi[i] = init.chi_background + a * std::cos(y);
            s.mom.comp[0][i] = a * std::sin(x);
            if (g->dim() >= 2) s.mom.comp[1][i] = a * std::sin(y);
        }
    }
    if (c.formulation == Formulation::Conservative) return to_conservative(s, c.model);
    return s;
}

} // namespace nsac
