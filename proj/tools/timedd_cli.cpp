// Command-line front end for the time-decomposition experiments.
//
//   timedd <contraction|decay|threshold|penalization|validate> [options]
//
// Options override fields of the JSON file given with --config.

#include "timedd/experiments.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using timedd::RunConfig;

std::vector<double> parse_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw timedd::InvalidConfig(key + ": '" + item + "' is not a number");
        }
    }
    return out;
}

struct Overrides {
    std::string config_path;
    std::map<std::string, double> numbers;
    std::map<std::string, long long> counts;
    std::map<std::string, std::string> texts;
    std::map<std::string, std::string> lists;
    std::string d_range;
    std::optional<unsigned long long> seed;

    void attach(CLI::App& app) {
        app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
        auto num = [&](const char* flag, const char* key, const char* help) {
            app.add_option_function<double>(flag, [this, key](double v) { numbers[key] = v; }, help);
        };
        auto cnt = [&](const char* flag, const char* key, const char* help) {
            app.add_option_function<long long>(flag, [this, key](long long v) { counts[key] = v; }, help);
        };
        auto txt = [&](const char* flag, const char* key, const char* help) {
            app.add_option_function<std::string>(flag, [this, key](const std::string& v) { texts[key] = v; }, help);
        };
        auto lst = [&](const char* flag, const char* key, const char* help) {
            app.add_option_function<std::string>(flag, [this, key](const std::string& v) { lists[key] = v; }, help);
        };
        txt("--out", "out", "output path (default: stdout)");
        txt("--format", "format", "csv | json");
        txt("--meta", "meta", "inline | sidecar (metadata placement for CSV)");
        num("--alpha", "alpha", "tracking weight");
        num("--gamma", "gamma", "final-time weight");
        num("--nu", "nu", "control weight");
        num("--kappa", "kappa", "diffusion coefficient");
        num("--T", "T", "final time");
        num("--Gamma", "Gamma", "interface time");
        num("--L", "L", "domain length");
        cnt("--N", "N", "interior spatial points");
        cnt("--steps", "steps", "time steps over (0, T)");
        num("--tol", "tol", "interface tolerance");
        cnt("--max-iter", "max_iter", "Schwarz iteration cap");
        lst("--eps-list", "eps_list", "comma-separated eps values");
        lst("--gamma-list", "gamma_list", "comma-separated gamma values for contraction sweeps");
        lst("--alpha-list", "alpha_list", "comma-separated alpha values for contraction sweeps");
        app.add_option("--d-range", d_range, "min,max,count of a log-spaced eigenvalue sweep");
        app.add_option_function<unsigned long long>(
            "--seed", [this](unsigned long long v) { seed = v; }, "seed for a random interface guess");
        txt("--system", "system", "decay filter: all | S1 | S2");
        txt("--variant", "variant", "decay filter: all | AS1 | AS2");
        num("--slack", "slack", "penalization bound slack factor");
        cnt("--threshold-steps", "threshold_steps", "steps per subdomain for threshold probes");
        cnt("--threshold-max-iter", "threshold_max_iter", "iteration cap for threshold probes");
    }

    RunConfig resolve() const {
        RunConfig base;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            nlohmann::json file;
            try {
                file = nlohmann::json::parse(in);
            } catch (const nlohmann::json::exception& e) {
                throw timedd::InvalidConfig(std::string("config: ") + e.what());
            }
            base = timedd::from_json(file);
        }
        nlohmann::json j = nlohmann::json::object();
        for (const auto& [k, v] : numbers) j[k] = v;
        for (const auto& [k, v] : counts) {
            if (v < 0) throw timedd::InvalidConfig(k + ": must be a non-negative integer");
            j[k] = v;
        }
        for (const auto& [k, v] : texts) j[k] = v;
        for (const auto& [k, v] : lists) j[k] = parse_list(k, v);
        if (!d_range.empty()) {
            const auto v = parse_list("d_range", d_range);
            if (v.size() != 3 || v[2] < 1 || v[2] != std::floor(v[2]))
                throw timedd::InvalidConfig("d_range: expected min,max,count");
            j["d_range"] = {{"min", v[0]}, {"max", v[1]}, {"count", static_cast<std::size_t>(v[2])}};
        }
        if (seed) j["seed"] = *seed;
        return timedd::from_json(j, base);
    }
};

void emit(const RunConfig& cfg, const timedd::Table& table) {
    const bool json = cfg.format == "json";
    const bool sidecar = json || cfg.meta == "sidecar";
    std::ostringstream body;
    if (json) timedd::write_json(body, table);
    else timedd::write_csv(body, table, !sidecar);

    if (cfg.out.empty()) {
        std::cout << body.str();
        if (sidecar) std::cerr << "# " << table.meta.dump() << "\n";
        return;
    }
    std::ofstream out(cfg.out, std::ios::binary);
    if (!out) throw timedd::InvalidConfig("out: cannot open '" + cfg.out + "'");
    out << body.str();
    if (sidecar) {
        std::ofstream meta(cfg.out + ".meta.json", std::ios::binary);
        if (!meta) throw timedd::InvalidConfig("out: cannot open '" + cfg.out + ".meta.json'");
        meta << table.meta.dump(2) << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Alternating Schwarz in time for heat-equation control problems"};
    app.require_subcommand(1);

    using Command = std::function<timedd::CommandResult(const RunConfig&)>;
    const std::vector<std::tuple<const char*, const char*, Command>> commands{
        {"contraction", "contraction factors over eigenvalue sweeps", timedd::cmd_contraction},
        {"decay", "error histories of the four alternating algorithms", timedd::cmd_decay},
        {"threshold", "interface threshold and single-mode convergence probes", timedd::cmd_threshold},
        {"penalization", "eps sweep linking the tracking and controllability problems", timedd::cmd_penalization},
    };

    std::vector<Overrides> overrides(commands.size() + 1);
    std::vector<CLI::App*> subs;
    for (std::size_t k = 0; k < commands.size(); ++k) {
        auto* sub = app.add_subcommand(std::get<0>(commands[k]), std::get<1>(commands[k]));
        overrides[k].attach(*sub);
        subs.push_back(sub);
    }
    auto* validate = app.add_subcommand("validate", "check a configuration and print it fully resolved");
    overrides.back().attach(*validate);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? timedd::kExitOk : timedd::kExitConfig;
    }

    try {
        if (validate->parsed()) {
            std::cout << timedd::to_json(overrides.back().resolve()).dump(2) << "\n";
            return timedd::kExitOk;
        }
        for (std::size_t k = 0; k < commands.size(); ++k) {
            if (!subs[k]->parsed()) continue;
            const RunConfig cfg = overrides[k].resolve();
            const auto result = std::get<2>(commands[k])(cfg);
            emit(cfg, result.table);
            return result.exit_code;
        }
    } catch (const timedd::InvalidConfig& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return timedd::kExitConfig;
    } catch (const timedd::Error& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return timedd::kExitSolver;
    }
    return timedd::kExitConfig;
}
