#include "focir/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "focir/errors.hpp"
#include "focir/model_io.hpp"

namespace focir::cli {

namespace {

std::shared_ptr<spdlog::logger> logger() {
    if (auto existing = spdlog::get("focir")) return existing;
    auto log = spdlog::stderr_color_mt("focir");
    log->set_pattern("focir: [%l] %v");
    const char* env = std::getenv("FOCIR_LOG");
    const std::string level = env != nullptr ? env : "info";
    if (level == "error") {
        log->set_level(spdlog::level::err);
    } else if (level == "debug") {
        log->set_level(spdlog::level::debug);
    } else {
        log->set_level(spdlog::level::info);
    }
    return log;
}

struct CommonArgs {
    std::string config_path;
    io::RunConfig config;

    void load() {
        if (!config_path.empty()) config = io::load_config(config_path);
    }
};

IdentOptions ident_options(const io::RunConfig& cfg, std::optional<double> residual_tol) {
    IdentOptions opts;
    io::apply_tolerances(cfg.tolerances, opts);
    if (residual_tol) opts.residual_tol = *residual_tol;
    return opts;
}

std::size_t resolve_horizon(std::optional<std::size_t> flag, const io::RunConfig& cfg) {
    const std::size_t t = flag.value_or(cfg.horizon);
    if (t < 2) throw io::InputError("horizon must be >= 2");
    return t;
}

void write_coeffs_csv(const std::string& path, const CoefficientVector& c) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (f == nullptr) throw io::InputError("cannot write " + path);
    std::fputs("power,f,g\n", f);
    for (std::size_t p = 0; p <= c.degree(); ++p) {
        if (p < c.degree()) {
            std::fprintf(f, "%zu,%.17g,%.17g\n", p, c.f(p), c.g(p));
        } else {
            std::fprintf(f, "%zu,%.17g,1\n", p, c.f(p));
        }
    }
    std::fclose(f);
}

void write_solutions_csv(const std::string& path, const IdentifiabilityResult& r) {
    std::ofstream out(path);
    if (!out) throw io::InputError("cannot write " + path);
    out << "solution,residual,theta\n";
    for (std::size_t i = 0; i < r.solutions.size(); ++i) {
        const auto j = io::parameter_set_to_json(r.solutions[i]);
        out << i << ',' << nlohmann::json(r.residuals[i]).dump() << ',';
        std::string theta;
        for (const auto& v : j.at("theta")) {
            if (!theta.empty()) theta += ' ';
            theta += v.is_string() ? v.get<std::string>() : v.dump();
        }
        out << theta << '\n';
    }
}

int cmd_simulate(const std::string& model_path, const std::string& input_path,
                 const std::string& out_path, const io::RunConfig& cfg) {
    const io::Model model = io::load_model(model_path);
    const io::Signal sig = io::read_signal_csv(input_path);
    io::check_uniform_sampling(sig.time, model.ts);
    logger()->info("simulating {} samples at ts = {}", sig.time.size(), model.ts);

    SimulationOptions opts;
    opts.memory_window = cfg.truncation_window;
    const auto sys = io::to_state_space(model, std::max<std::size_t>(cfg.horizon, 1));
    const auto trace = simulate(sys, sig.current, opts);

    if (cfg.format.value_or(io::OutputFormat::csv) == io::OutputFormat::json) {
        io::write_json(out_path, {{"time", sig.time}, {"current", sig.current}, {"voltage", trace.y}});
    } else {
        io::write_trace_csv(out_path, sig.time, sig.current, trace.y);
    }
    return exit_ok;
}

int cmd_coeffs(const std::string& model_path, std::size_t horizon, const std::string& out_path,
               const io::RunConfig& cfg) {
    const io::Model model = io::load_model(model_path);
    const auto c = io::coefficient_map(model, horizon);
    logger()->info("structure {}, degree {}", to_string(c.structure()), c.degree());
    if (c.structure() == Structure::unsupported) {
        logger()->warn("more than two branches: the coefficient vector has no inversion procedure");
    }
    if (cfg.format.value_or(io::OutputFormat::json) == io::OutputFormat::csv) {
        write_coeffs_csv(out_path, c);
    } else {
        io::write_json(out_path, io::coeffs_to_json(c));
    }
    return exit_ok;
}

int cmd_identify(const std::string& coeffs_path, std::optional<double> tol,
                 const std::string& out_path, const io::RunConfig& cfg) {
    const auto c = io::load_coeffs(coeffs_path);
    const auto result = identify(c, ident_options(cfg, tol));
    logger()->info("{}: {} solution(s)", result.classification.to_string(),
                   result.solutions.size());
    if (cfg.format.value_or(io::OutputFormat::json) == io::OutputFormat::csv) {
        write_solutions_csv(out_path, result);
    } else {
        io::write_json(out_path, io::result_to_json(result));
    }
    return exit_ok;
}

int cmd_roundtrip(const std::string& model_path, std::size_t horizon, std::optional<double> tol,
                  const std::string& out_path, const io::RunConfig& cfg) {
    const io::Model model = io::load_model(model_path);
    const auto c = io::coefficient_map(model, horizon);
    const auto result = identify(c, ident_options(cfg, std::nullopt));

    double bound = c.structure() == Structure::two_cpe ? 1e-4 : 1e-6;
    if (const auto it = cfg.tolerances.find("roundtrip"); it != cfg.tolerances.end()) {
        bound = it->second;
    }
    if (tol) bound = *tol;

    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : result.solutions) best = std::min(best, parameter_error(s, model.params));
    const bool pass = best <= bound;

    const nlohmann::json report = {
        {"structure", std::string(to_string(result.structure))},
        {"classification", result.classification.to_string()},
        {"solution_count", result.solutions.size()},
        {"max_relative_error", best},
        {"truth_in_solution_set", pass},
        {"tolerance", bound},
        {"pass", pass},
    };
    if (out_path.empty()) {
        std::cout << report.dump(2) << '\n';
    } else {
        io::write_json(out_path, report);
    }
    if (pass) {
        logger()->info("round trip ok: max relative error {:.3e}", best);
        return exit_ok;
    }
    logger()->error("round trip failed: max relative error {:.3e} exceeds {:.3e}", best, bound);
    return exit_tolerance;
}

}  // namespace

int run(int argc, char** argv) {
    CLI::App app{"Fractional-order ECM simulation and structural identifiability"};
    app.require_subcommand(1);

    CommonArgs common;
    app.add_option("--config", common.config_path, "RunConfig JSON overriding defaults")
        ->check(CLI::ExistingFile);

    std::string model_path;
    std::string input_path;
    std::string coeffs_path;
    std::string out_path;
    std::optional<std::size_t> horizon;
    std::optional<double> tol;

    auto* sim = app.add_subcommand("simulate", "Simulate the terminal voltage for a current CSV");
    sim->add_option("--model", model_path, "model JSON")->required();
    sim->add_option("--input", input_path, "CSV with header time,current")->required();
    sim->add_option("--out", out_path, "output CSV time,current,voltage")->required();

    auto* coeffs = app.add_subcommand("coeffs", "Write the transfer-function coefficient vector");
    coeffs->add_option("--model", model_path, "model JSON")->required();
    coeffs->add_option("--horizon", horizon, "memory horizon T");
    coeffs->add_option("--out", out_path, "output JSON")->required();

    auto* ident = app.add_subcommand("identify", "Invert a coefficient vector");
    ident->add_option("--coeffs", coeffs_path, "coefficient JSON")->required();
    ident->add_option("--tol", tol, "accepted reconstruction residual");
    ident->add_option("--out", out_path, "output JSON")->required();

    auto* rt = app.add_subcommand("roundtrip", "Coefficient map followed by inversion");
    rt->add_option("--model", model_path, "model JSON")->required();
    rt->add_option("--horizon", horizon, "memory horizon T");
    rt->add_option("--tol", tol, "accepted relative parameter error");
    rt->add_option("--out", out_path, "report JSON (default: stdout)");

    for (auto* sub : {sim, coeffs, ident, rt}) {
        sub->add_option("--config", common.config_path, "RunConfig JSON overriding defaults")
            ->check(CLI::ExistingFile);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_input;
    }

    auto log = logger();
    try {
        common.load();
        const auto& cfg = common.config;
        if (*sim) return cmd_simulate(model_path, input_path, out_path, cfg);
        if (*coeffs) return cmd_coeffs(model_path, resolve_horizon(horizon, cfg), out_path, cfg);
        if (*ident) return cmd_identify(coeffs_path, tol, out_path, cfg);
        if (*rt) return cmd_roundtrip(model_path, resolve_horizon(horizon, cfg), tol, out_path, cfg);
    } catch (const IdentificationError& e) {
        log->error("inversion failed: {}", e.what());
        return exit_inversion;
    } catch (const std::exception& e) {
        log->error("{}", e.what());
        return exit_input;
    }
    return exit_input;
}

int run(const std::vector<std::string>& args) {
    std::vector<std::string> storage = args;
    std::vector<char*> argv;
    argv.reserve(storage.size());
    for (auto& s : storage) argv.push_back(s.data());
    return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace focir::cli
