#pragma once

// Run configuration and the experiment commands behind the CLI.

#include "timedd/contraction.hpp"
#include "timedd/discretization.hpp"
#include "timedd/error.hpp"
#include "timedd/mode_solver.hpp"
#include "timedd/penalization.hpp"
#include "timedd/schwarz.hpp"
#include "timedd/table.hpp"

#include "json.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace timedd {

/// Log-spaced eigenvalue sweep.
struct SweepRange {
    double min = 1e-2;
    double max = 1e2;
    std::size_t count = 200;

    bool operator==(const SweepRange&) const = default;
};

struct RunConfig {
    ProblemParams params;
    std::size_t N = 31;       ///< interior spatial points
    std::size_t steps = 32;   ///< time steps over (0, T)
    std::string system = "all";   ///< decay filter: all | S1 | S2
    std::string variant = "all";  ///< decay filter: all | AS1 | AS2
    std::vector<double> eps_list{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    std::optional<SweepRange> d_range;
    std::vector<double> gamma_list{1.0, 10.0, 100.0};
    std::vector<double> alpha_list{1.0, 0.1, 0.01};
    double tol = 1e-10;
    std::size_t max_iter = 100;
    std::size_t threshold_steps = 256;      ///< steps per subdomain in threshold runs
    std::size_t threshold_max_iter = 20000;
    double slack = 1.05;                    ///< penalization bound slack factor
    std::optional<std::uint64_t> seed;      ///< random interface guess when set
    std::string out;                        ///< empty: stdout
    std::string format = "csv";             ///< csv | json
    std::string meta = "inline";            ///< inline | sidecar

    bool operator==(const RunConfig&) const = default;

    void validate() const {
        params.validate();
        if (N == 0) throw InvalidConfig("N: must be >= 1");
        (void)TimeGrid::uniform(params.T, params.interface, steps);
        if (system != "all") (void)parse_system(system);
        if (variant != "all") (void)parse_variant(variant);
        if (eps_list.empty()) throw InvalidConfig("eps_list: must not be empty");
        for (double e : eps_list)
            if (!(e > 0.0) || !std::isfinite(e)) throw InvalidConfig("eps_list: every eps must be > 0");
        if (d_range && (!(d_range->min > 0.0) || !(d_range->max >= d_range->min) || d_range->count == 0))
            throw InvalidConfig("d_range: need 0 < min <= max and count >= 1");
        if (gamma_list.empty()) throw InvalidConfig("gamma_list: must not be empty");
        for (double g : gamma_list)
            if (!(g >= 0.0) || !std::isfinite(g)) throw InvalidConfig("gamma_list: entries must be >= 0");
        if (alpha_list.empty()) throw InvalidConfig("alpha_list: must not be empty");
        for (double a : alpha_list)
            if (!(a >= 0.0) || !std::isfinite(a)) throw InvalidConfig("alpha_list: entries must be >= 0");
        if (!(tol > 0.0)) throw InvalidConfig("tol: must be > 0");
        if (max_iter == 0) throw InvalidConfig("max_iter: must be >= 1");
        if (threshold_steps == 0) throw InvalidConfig("threshold_steps: must be >= 1");
        if (threshold_max_iter == 0) throw InvalidConfig("threshold_max_iter: must be >= 1");
        if (!(slack >= 1.0)) throw InvalidConfig("slack: must be >= 1");
        if (format != "csv" && format != "json") throw InvalidConfig("format: must be csv or json");
        if (meta != "inline" && meta != "sidecar") throw InvalidConfig("meta: must be inline or sidecar");
    }
};

inline nlohmann::json to_json(const RunConfig& c) {
    nlohmann::json j;
    j["alpha"] = c.params.alpha;
    j["gamma"] = c.params.gamma;
    j["nu"] = c.params.nu;
    j["kappa"] = c.params.kappa;
    j["T"] = c.params.T;
    j["Gamma"] = c.params.interface;
    j["L"] = c.params.L;
    j["N"] = c.N;
    j["steps"] = c.steps;
    j["system"] = c.system;
    j["variant"] = c.variant;
    j["eps_list"] = c.eps_list;
    j["d_range"] = c.d_range ? nlohmann::json{{"min", c.d_range->min}, {"max", c.d_range->max},
                                             {"count", c.d_range->count}}
                             : nlohmann::json(nullptr);
    j["gamma_list"] = c.gamma_list;
    j["alpha_list"] = c.alpha_list;
    j["tol"] = c.tol;
    j["max_iter"] = c.max_iter;
    j["threshold_steps"] = c.threshold_steps;
    j["threshold_max_iter"] = c.threshold_max_iter;
    j["slack"] = c.slack;
    j["seed"] = c.seed ? nlohmann::json(*c.seed) : nlohmann::json(nullptr);
    j["out"] = c.out;
    j["format"] = c.format;
    j["meta"] = c.meta;
    return j;
}

namespace detail {

template <class T>
T field(const nlohmann::json& j, const std::string& key) {
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw InvalidConfig(key + ": " + e.what());
    }
}

}  // namespace detail

/// Reads keys present in `j` on top of `base`. Unknown keys are rejected; the result is validated.
inline RunConfig from_json(const nlohmann::json& j, RunConfig base = {}) {
    static const std::set<std::string> known{
        "alpha", "gamma", "nu", "kappa", "T", "Gamma", "L", "N", "steps", "system", "variant",
        "eps_list", "d_range", "gamma_list", "alpha_list", "tol", "max_iter", "threshold_steps",
        "threshold_max_iter", "slack", "seed", "out", "format", "meta"};
    if (!j.is_object()) throw InvalidConfig("config: top level must be a JSON object");
    for (const auto& [key, _] : j.items())
        if (!known.contains(key)) throw InvalidConfig(key + ": unknown config key");

    using detail::field;
    RunConfig c = std::move(base);
    auto num = [&](const char* key, double& dst) {
        if (j.contains(key)) dst = field<double>(j, key);
    };
    auto count = [&](const char* key, std::size_t& dst) {
        if (!j.contains(key)) return;
        const auto& v = j.at(key);
        if (!v.is_number_integer() || v.get<long long>() < 0)
            throw InvalidConfig(std::string(key) + ": must be a non-negative integer");
        dst = v.get<std::size_t>();
    };
    auto text = [&](const char* key, std::string& dst) {
        if (j.contains(key)) dst = field<std::string>(j, key);
    };
    auto list = [&](const char* key, std::vector<double>& dst) {
        if (j.contains(key)) dst = field<std::vector<double>>(j, key);
    };

    num("alpha", c.params.alpha);
    num("gamma", c.params.gamma);
    num("nu", c.params.nu);
    num("kappa", c.params.kappa);
    num("T", c.params.T);
    num("Gamma", c.params.interface);
    num("L", c.params.L);
    count("N", c.N);
    count("steps", c.steps);
    text("system", c.system);
    text("variant", c.variant);
    list("eps_list", c.eps_list);
    if (j.contains("d_range")) {
        const auto& d = j.at("d_range");
        if (d.is_null()) {
            c.d_range.reset();
        } else {
            if (!d.is_object()) throw InvalidConfig("d_range: must be an object {min, max, count} or null");
            for (const auto& [key, _] : d.items())
                if (key != "min" && key != "max" && key != "count")
                    throw InvalidConfig("d_range." + key + ": unknown key");
            SweepRange r;
            r.min = field<double>(d, "min");
            r.max = field<double>(d, "max");
            r.count = field<std::size_t>(d, "count");
            c.d_range = r;
        }
    }
    list("gamma_list", c.gamma_list);
    list("alpha_list", c.alpha_list);
    num("tol", c.tol);
    count("max_iter", c.max_iter);
    count("threshold_steps", c.threshold_steps);
    count("threshold_max_iter", c.threshold_max_iter);
    num("slack", c.slack);
    if (j.contains("seed")) {
        const auto& s = j.at("seed");
        if (s.is_null()) c.seed.reset();
        else if (s.is_number_unsigned()) c.seed = s.get<std::uint64_t>();
        else throw InvalidConfig("seed: must be a non-negative integer or null");
    }
    text("out", c.out);
    text("format", c.format);
    text("meta", c.meta);
    c.validate();
    return c;
}

/// The one-dimensional test case: L = 1 style data with a single active sine mode.
namespace heat_case {

inline double initial_state(double x, const ProblemParams& p) {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    return (1.0 / (2.0 * pi2)) * (1.0 - std::exp(pi2 * p.T)) * std::sin(std::numbers::pi * x / p.L);
}

inline double target(double t, double x, const ProblemParams& p) {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    return (1.0 / (2.0 * pi2)) * (std::exp(pi2 * t) - std::exp(pi2 * p.T)) * std::sin(std::numbers::pi * x / p.L);
}

inline ModeData mode_data(const ProblemParams& p, const SpectralSpace& space, const TimeGrid& time) {
    return ModeData::from_grid(
        space, time, [&](double x) { return initial_state(x, p); },
        [&](double t, double x) { return target(t, x, p); });
}

}  // namespace heat_case

struct CommandResult {
    Table table;
    int exit_code = 0;
};

/// Process exit codes shared by the CLI.
enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitSolver = 2, kExitBound = 3 };

namespace detail {

inline std::string label(const char* name, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return std::string(name) + "=" + buf;
}

inline Table new_table(const RunConfig& c, const char* command) {
    Table t;
    t.meta["command"] = command;
    t.meta["config"] = to_json(c);
    return t;
}

}  // namespace detail

/// Contraction factors over eigenvalue sweeps. Without a d_range both
/// standard sweeps are emitted ([1e-2, 1e2] as panel "top", [10, 1e3] as
/// panel "bottom"); with one, a single "custom" panel.
inline CommandResult cmd_contraction(const RunConfig& c) {
    c.validate();
    CommandResult res{detail::new_table(c, "contraction")};
    auto& t = res.table;
    t.columns = {"panel", "d", "rho_s2_as1"};
    for (double a : c.alpha_list)
        for (double g : c.gamma_list)
            t.columns.push_back("rho_s1_as1[" + detail::label("alpha", a) + ";" + detail::label("gamma", g) + "]");
    for (double g : c.gamma_list) t.columns.push_back("rho_s1_as1_alpha0[" + detail::label("gamma", g) + "]");

    std::vector<std::pair<std::string, SweepRange>> panels;
    if (c.d_range) panels.emplace_back("custom", *c.d_range);
    else panels = {{"top", SweepRange{1e-2, 1e2, 200}}, {"bottom", SweepRange{10.0, 1e3, 200}}};

    for (const auto& [name, range] : panels) {
        for (double d : log_space(range.min, range.max, range.count)) {
            std::vector<Cell> row{name, d, rho_s2_as1(d, c.params)};
            for (double a : c.alpha_list)
                for (double g : c.gamma_list) {
                    ProblemParams p = c.params;
                    p.alpha = a;
                    p.gamma = g;
                    row.emplace_back(contraction_factor(System::S1, Variant::AS1, d, p));
                }
            for (double g : c.gamma_list) {
                ProblemParams p = c.params;
                p.alpha = 0.0;
                p.gamma = g;
                row.emplace_back(rho_s1_as1_alpha0(d, p));
            }
            t.rows.push_back(std::move(row));
        }
    }
    return res;
}

/// Error histories of the four alternating algorithms on the heat test case.
inline CommandResult cmd_decay(const RunConfig& c) {
    c.validate();
    CommandResult res{detail::new_table(c, "decay")};
    auto& t = res.table;

    const SpectralSpace space(SpatialGrid(c.N, c.params.L));
    const TimeGrid time = TimeGrid::uniform(c.params.T, c.params.interface, c.steps);
    const ModeData data = heat_case::mode_data(c.params, space, time);
    const auto eig = space.eigenvalues();
    t.meta["d_min"] = eig.front();

    const std::array<std::pair<System, Variant>, 4> algorithms{
        {{System::S1, Variant::AS1}, {System::S2, Variant::AS1}, {System::S2, Variant::AS2}, {System::S1, Variant::AS2}}};

    std::vector<ConvergenceReport> reports;
    t.columns = {"iteration"};
    nlohmann::json summary = nlohmann::json::array();
    for (const auto& [sys, var] : algorithms) {
        if (c.system != "all" && parse_system(c.system) != sys) continue;
        if (c.variant != "all" && parse_variant(c.variant) != var) continue;
        SchwarzConfig sc{sys, var, c.params, time, c.tol, c.max_iter, {}};
        if (c.seed) sc.initial_guess = random_guess(data.size(), *c.seed, 1.0);
        auto r = schwarz_solve(sc, data).report;
        const std::string name = std::string(to_string(sys)) + "_" + std::string(to_string(var));
        t.columns.push_back("err_y_" + name);
        t.columns.push_back("err_lambda_" + name);
        summary.push_back({{"algorithm", name},
                           {"status", std::string(to_string(r.status))},
                           {"iterations", r.iterations()},
                           {"observed_rate", std::isfinite(r.observed_rate) ? nlohmann::json(r.observed_rate)
                                                                            : nlohmann::json(nullptr)},
                           {"max_rho", max_contraction(sys, var, c.params, eig).value}});
        reports.push_back(std::move(r));
    }
    t.meta["summary"] = summary;

    std::size_t rows = 0;
    for (const auto& r : reports) rows = std::max(rows, r.iterations());
    for (std::size_t l = 0; l < rows; ++l) {
        std::vector<Cell> row{static_cast<double>(l + 1)};
        for (const auto& r : reports) {
            if (l < r.iterations()) {
                row.emplace_back(r.state_error[l]);
                row.emplace_back(r.adjoint_error[l]);
            } else {
                row.emplace_back(std::monostate{});
                row.emplace_back(std::monostate{});
            }
        }
        t.rows.push_back(std::move(row));
    }
    return res;
}

/// Interface factors at which the threshold command probes convergence.
inline constexpr std::array<double, 4> kThresholdProbes{0.9, 0.99, 1.01, 1.1};

/// Convergence status of the null-controllability AS1 iteration for one
/// mode d at interface `interface`; "n/a" when the interface is not inside (0, T).
inline std::string single_mode_status(const RunConfig& c, double d, double interface) {
    if (!(interface > 0.0 && interface < c.params.T)) return "n/a";
    ProblemParams p = c.params;
    p.interface = interface;
    SchwarzConfig sc{System::S2, Variant::AS1, p,
                     TimeGrid(p.T, interface, c.threshold_steps, c.threshold_steps),
                     c.tol, c.threshold_max_iter, {1.0}};
    return std::string(to_string(schwarz_solve(sc, ModeData::homogeneous({d})).report.status));
}

/// Gamma* over a d_min sweep plus empirical single-mode statuses around it.
inline CommandResult cmd_threshold(const RunConfig& c) {
    c.validate();
    CommandResult res{detail::new_table(c, "threshold")};
    auto& t = res.table;
    t.columns = {"d_min", "gamma_star", "f"};
    for (double f : kThresholdProbes) t.columns.push_back("status[" + detail::label("factor", f) + "]");

    const SweepRange range = c.d_range.value_or(SweepRange{0.1, 100.0, 7});
    for (double d : log_space(range.min, range.max, range.count)) {
        const double star = gamma_threshold(c.params, d);
        std::vector<Cell> row{d, star, f_threshold(c.params.kappa * d * c.params.T)};
        for (double f : kThresholdProbes) row.emplace_back(single_mode_status(c, d, f * star));
        t.rows.push_back(std::move(row));
    }
    return res;
}

/// Penalization sweep on the heat test case; exit code kExitBound if any
/// misfit exceeds slack * sqrt(nu eps) ||u*||.
inline CommandResult cmd_penalization(const RunConfig& c) {
    c.validate();
    CommandResult res{detail::new_table(c, "penalization")};
    auto& t = res.table;

    const SpectralSpace space(SpatialGrid(c.N, c.params.L));
    const TimeGrid time = TimeGrid::uniform(c.params.T, c.params.interface, c.steps);
    const ModeData data = heat_case::mode_data(c.params, space, time);
    const auto study = penalization_sweep(c.params, c.eps_list, data, time);

    t.columns = {"eps", "misfit", "bound", "ratio", "control_norm", "control_gap", "state_gap", "local_slope", "bound_ok", "warning"};
    t.meta["reference_control_norm"] = study.reference_control_norm;
    bool all_ok = true;
    for (std::size_t k = 0; k < study.records.size(); ++k) {
        const auto& r = study.records[k];
        const bool ok = r.warning.empty() && r.misfit <= c.slack * r.bound;
        all_ok = all_ok && ok;
        Cell slope = std::monostate{};
        if (k > 0) {
            const auto& q = study.records[k - 1];
            if (r.misfit > 0.0 && q.misfit > 0.0 && r.eps != q.eps)
                slope = std::log(r.misfit / q.misfit) / std::log(r.eps / q.eps);
        }
        t.rows.push_back({r.eps, r.misfit, r.bound, r.misfit / r.bound, r.control_norm, r.control_gap,
                          r.state_gap, slope, std::string(ok ? "true" : "false"), r.warning});
    }
    try {
        t.meta["misfit_slope"] = misfit_slope(study.records);
    } catch (const InvalidConfig&) {
        t.meta["misfit_slope"] = nullptr;
    }
    t.meta["bound_ok"] = all_ok;
    res.exit_code = all_ok ? kExitOk : kExitBound;
    return res;
}

}  // namespace timedd
