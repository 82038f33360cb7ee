#include "focir/model_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "focir/errors.hpp"

namespace focir::io {

using nlohmann::json;

namespace {

double require_number(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw InputError(where + ": missing \"" + key + "\"");
    const auto& v = j.at(key);
    if (!v.is_number()) throw InputError(where + ": \"" + key + "\" must be a number");
    return v.get<double>();
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
}

std::vector<double> number_array(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_array()) {
        throw InputError(std::string("coefficient file: \"") + key + "\" must be an array");
    }
    std::vector<double> out;
    for (const auto& v : j.at(key)) {
        if (!v.is_number()) throw InputError(std::string("coefficient file: non-numeric ") + key);
        out.push_back(v.get<double>());
    }
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
        cells.push_back(cell);
    }
    return cells;
}

double parse_cell(const std::string& cell, std::size_t line_no) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(cell, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != cell.size() || !std::isfinite(v)) {
        throw InputError("CSV line " + std::to_string(line_no) + ": bad number \"" + cell + "\"");
    }
    return v;
}

}  // namespace

Model parse_model(const json& j) {
    if (!j.is_object()) throw InputError("model: top level must be an object");
    const double ts = require_number(j, "ts", "model");
    const double r_inf = require_number(j, "r_inf", "model");
    if (!j.contains("branches") || !j.at("branches").is_array() || j.at("branches").empty()) {
        throw InputError("model: \"branches\" must be a non-empty array");
    }
    if (!(ts > 0.0)) throw InputError("model: ts must be positive");

    const auto& arr = j.at("branches");
    try {
        std::vector<BranchParams> branches;
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const auto& b = arr[i];
            const std::string where = "model branch " + std::to_string(i);
            if (!b.is_object()) throw InputError(where + ": must be an object");
            const double c = require_number(b, "c", where);
            const double alpha = require_number(b, "alpha", where);
            if (!b.contains("r")) throw InputError(where + ": missing \"r\"");
            const auto& r = b.at("r");
            Resistance res = Resistance::open();
            if (r.is_string()) {
                if (r.get<std::string>() != "inf") {
                    throw InputError(where + ": \"r\" must be a number or \"inf\"");
                }
            } else if (r.is_number()) {
                res = Resistance::finite(r.get<double>());
            } else {
                throw InputError(where + ": \"r\" must be a number or \"inf\"");
            }

            if (alpha == 1.0) {
                if (arr.size() != 1 || res.is_open()) {
                    throw InputError(where +
                                     ": alpha = 1 is only accepted for a single finite branch "
                                     "(Randles circuit)");
                }
                return Model{ts, RandlesParams(r_inf, res.ohms(), c)};
            }
            branches.push_back({res, c, FractionalOrder(alpha)});
        }
        return Model{ts, FoEcmParams(r_inf, std::move(branches), ts)};
    } catch (const DomainError& e) {
        throw InputError(std::string("model: ") + e.what());
    }
}

Model load_model(const std::string& path) { return parse_model(read_json_file(path)); }

json model_to_json(const Model& m) {
    json out;
    out["ts"] = m.ts;
    json branches = json::array();
    if (const auto* r = std::get_if<RandlesParams>(&m.params)) {
        out["r_inf"] = r->r_inf;
        branches.push_back({{"r", r->r1}, {"c", r->c1}, {"alpha", 1.0}});
    } else {
        const auto& p = std::get<FoEcmParams>(m.params);
        out["r_inf"] = p.r_inf();
        for (const auto& b : p.branches()) {
            json jb;
            if (b.r.is_open()) {
                jb["r"] = "inf";
            } else {
                jb["r"] = b.r.ohms();
            }
            jb["c"] = b.c;
            jb["alpha"] = b.alpha.value();
            branches.push_back(jb);
        }
    }
    out["branches"] = branches;
    return out;
}

DiscreteFoSystem to_state_space(const Model& m, std::size_t horizon) {
    if (const auto* r = std::get_if<RandlesParams>(&m.params)) {
        ContinuousFoSystem sys;
        sys.a_bar = Eigen::MatrixXd::Constant(1, 1, -1.0 / (r->r1 * r->c1));
        sys.b_bar = Eigen::VectorXd::Constant(1, 1.0 / r->c1);
        sys.m = Eigen::RowVectorXd::Ones(1);
        sys.d = r->r_inf;
        sys.orders = {1.0};
        return discretize(sys, m.ts, horizon);
    }
    return focir::to_state_space(std::get<FoEcmParams>(m.params), horizon);
}

CoefficientVector coefficient_map(const Model& m, std::size_t horizon) {
    if (const auto* r = std::get_if<RandlesParams>(&m.params)) {
        return focir::coefficient_map(*r, m.ts);
    }
    return focir::coefficient_map(std::get<FoEcmParams>(m.params), horizon);
}

json coeffs_to_json(const CoefficientVector& c) {
    return {{"structure", std::string(to_string(c.structure()))},
            {"ts", c.ts()},
            {"T", c.horizon()},
            {"f", c.f_by_power()},
            {"g", c.g_by_power()}};
}

CoefficientVector coeffs_from_json(const json& j) {
    if (!j.is_object()) throw InputError("coefficient file: top level must be an object");
    if (!j.contains("structure") || !j.at("structure").is_string()) {
        throw InputError("coefficient file: missing \"structure\" tag");
    }
    Structure s{};
    try {
        s = structure_from_string(j.at("structure").get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw InputError(std::string("coefficient file: ") + e.what());
    }
    const double ts = require_number(j, "ts", "coefficient file");
    if (!(ts > 0.0)) throw InputError("coefficient file: ts must be positive");
    if (!j.contains("T") || !j.at("T").is_number_unsigned()) {
        throw InputError("coefficient file: \"T\" must be a non-negative integer");
    }
    const auto horizon = j.at("T").get<std::size_t>();
    const auto f = number_array(j, "f");
    const auto g = number_array(j, "g");
    if (f.size() != g.size() + 1 || g.empty()) {
        throw InputError("coefficient file: need |f| = |g| + 1 >= 2");
    }
    // Highest power first, as produced by the coefficient map.
    std::vector<double> values(f.rbegin(), f.rend());
    values.insert(values.end(), g.rbegin(), g.rend());
    return CoefficientVector(std::move(values), s, horizon, ts);
}

CoefficientVector load_coeffs(const std::string& path) {
    return coeffs_from_json(read_json_file(path));
}

json parameter_set_to_json(const ParameterSet& p) {
    json out;
    if (const auto* r = std::get_if<RandlesParams>(&p)) {
        out["theta"] = {r->r_inf, r->r1, r->c1};
        out["r_inf"] = r->r_inf;
        out["branches"] = json::array({{{"r", r->r1}, {"c", r->c1}, {"alpha", 1.0}}});
        return out;
    }
    const auto& fo = std::get<FoEcmParams>(p);
    json theta = json::array();
    for (double v : fo.theta()) {
        if (std::isinf(v)) {
            theta.push_back("inf");
        } else {
            theta.push_back(v);
        }
    }
    out["theta"] = theta;
    out["r_inf"] = fo.r_inf();
    out["branches"] = model_to_json(Model{fo.ts(), fo})["branches"];
    return out;
}

json result_to_json(const IdentifiabilityResult& r) {
    json sols = json::array();
    for (std::size_t i = 0; i < r.solutions.size(); ++i) {
        json s = parameter_set_to_json(r.solutions[i]);
        s["residual"] = r.residuals.at(i);
        sols.push_back(s);
    }
    return {{"structure", std::string(to_string(r.structure))},
            {"classification", r.classification.to_string()},
            {"solutions", sols}};
}

Signal read_signal_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw InputError(path + ": empty CSV");
    const auto header = split_csv_line(line);
    if (header.size() != 2 || header[0] != "time" || header[1] != "current") {
        throw InputError(path + ": header must be `time,current`");
    }
    Signal sig;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 2) {
            throw InputError(path + ": line " + std::to_string(line_no) + " needs two columns");
        }
        sig.time.push_back(parse_cell(cells[0], line_no));
        sig.current.push_back(parse_cell(cells[1], line_no));
    }
    if (sig.time.empty()) throw InputError(path + ": no samples");
    return sig;
}

void check_uniform_sampling(const std::vector<double>& time, double ts, double rel_tol) {
    for (std::size_t k = 1; k < time.size(); ++k) {
        const double dt = time[k] - time[k - 1];
        if (std::abs(dt - ts) > rel_tol * ts) {
            throw InputError("non-uniform sampling at row " + std::to_string(k + 1) + ": dt = " +
                             std::to_string(dt) + ", model ts = " + std::to_string(ts));
        }
    }
}

void write_trace_csv(const std::string& path, const std::vector<double>& time,
                     const std::vector<double>& current, const std::vector<double>& voltage) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (f == nullptr) throw InputError("cannot write " + path);
    std::fputs("time,current,voltage\n", f);
    for (std::size_t k = 0; k < time.size(); ++k) {
        std::fprintf(f, "%.17g,%.17g,%.17g\n", time[k], current[k], voltage[k]);
    }
    std::fclose(f);
}

RunConfig parse_config(const json& j) {
    if (!j.is_object()) throw InputError("config: top level must be an object");
    RunConfig cfg;
    if (j.contains("horizon")) {
        if (!j.at("horizon").is_number_unsigned()) {
            throw InputError("config: horizon must be a non-negative integer");
        }
        cfg.horizon = j.at("horizon").get<std::size_t>();
        if (cfg.horizon < 2) throw InputError("config: horizon must be >= 2");
    }
    if (j.contains("tolerances")) {
        const auto& t = j.at("tolerances");
        if (!t.is_object()) throw InputError("config: tolerances must be an object");
        for (const auto& [name, v] : t.items()) {
            if (!v.is_number() || !(v.get<double>() > 0.0)) {
                throw InputError("config: tolerance \"" + name + "\" must be positive");
            }
            cfg.tolerances[name] = v.get<double>();
        }
    }
    if (j.contains("format")) {
        const auto f = j.at("format").is_string() ? j.at("format").get<std::string>() : "";
        if (f == "csv") {
            cfg.format = OutputFormat::csv;
        } else if (f == "json") {
            cfg.format = OutputFormat::json;
        } else {
            throw InputError("config: format must be \"csv\" or \"json\"");
        }
    }
    if (j.contains("truncation_window") && !j.at("truncation_window").is_null()) {
        if (!j.at("truncation_window").is_number_unsigned()) {
            throw InputError("config: truncation_window must be a non-negative integer");
        }
        cfg.truncation_window = j.at("truncation_window").get<std::size_t>();
    }
    return cfg;
}

RunConfig load_config(const std::string& path) { return parse_config(read_json_file(path)); }

void apply_tolerances(const std::map<std::string, double>& tolerances, IdentOptions& opts) {
    const std::map<std::string, double IdentOptions::*> fields = {
        {"alpha_tol", &IdentOptions::alpha_tol},
        {"alpha_match_tol", &IdentOptions::alpha_match_tol},
        {"recursion_tol", &IdentOptions::recursion_tol},
        {"residual_tol", &IdentOptions::residual_tol},
        {"open_circuit_tol", &IdentOptions::open_circuit_tol},
        {"rank_tol", &IdentOptions::rank_tol},
        {"degenerate_alpha_tol", &IdentOptions::degenerate_alpha_tol},
    };
    for (const auto& [name, v] : tolerances) {
        if (name == "roundtrip") continue;  // consumed by the round-trip audit
        const auto it = fields.find(name);
        if (it == fields.end()) throw InputError("config: unknown tolerance \"" + name + "\"");
        opts.*(it->second) = v;
    }
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << j.dump(2) << '\n';
}

}  // namespace focir::io
