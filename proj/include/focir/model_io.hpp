#pragma once

// File formats of the command-line front end: circuit models and run
// configuration (JSON), coefficient vectors and identification results
// (JSON), current/voltage signals (CSV).

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "focir/ecm_models.hpp"
#include "focir/identifiability.hpp"
#include "focir/state_space.hpp"
#include "focir/transfer_function.hpp"

namespace focir::io {

/// Malformed or out-of-contract input file.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A circuit read from a model file. One branch with alpha == 1 is the
/// integer-order Randles circuit.
struct Model {
    double ts = 0.0;
    ParameterSet params;

    [[nodiscard]] bool is_randles() const noexcept {
        return std::holds_alternative<RandlesParams>(params);
    }
};

/// Schema {"ts": real, "r_inf": real, "branches": [{"r": real|"inf", "c": real, "alpha": real}]}.
[[nodiscard]] Model parse_model(const nlohmann::json& j);
[[nodiscard]] Model load_model(const std::string& path);
[[nodiscard]] nlohmann::json model_to_json(const Model& m);

/// Discrete state-space model of either circuit kind.
[[nodiscard]] DiscreteFoSystem to_state_space(const Model& m, std::size_t horizon);

[[nodiscard]] CoefficientVector coefficient_map(const Model& m, std::size_t horizon);

/// {"structure", "ts", "T", "f": [...], "g": [...]}; f[p] and g[p] are the
/// coefficients of z^p.
[[nodiscard]] nlohmann::json coeffs_to_json(const CoefficientVector& c);
[[nodiscard]] CoefficientVector coeffs_from_json(const nlohmann::json& j);
[[nodiscard]] CoefficientVector load_coeffs(const std::string& path);

[[nodiscard]] nlohmann::json parameter_set_to_json(const ParameterSet& p);
[[nodiscard]] nlohmann::json result_to_json(const IdentifiabilityResult& r);

struct Signal {
    std::vector<double> time;
    std::vector<double> current;
};

/// CSV with header `time,current`.
[[nodiscard]] Signal read_signal_csv(const std::string& path);

/// Throws InputError unless consecutive time steps equal ts within `rel_tol`.
void check_uniform_sampling(const std::vector<double>& time, double ts, double rel_tol = 1e-6);

/// CSV `time,current,voltage`, full round-trip precision.
void write_trace_csv(const std::string& path, const std::vector<double>& time,
                     const std::vector<double>& current, const std::vector<double>& voltage);

enum class OutputFormat { csv, json };

struct RunConfig {
    std::size_t horizon = 50;
    std::map<std::string, double> tolerances;
    /// Unset: each command's natural format (CSV traces, JSON otherwise).
    std::optional<OutputFormat> format;
    std::optional<std::size_t> truncation_window;
};

/// Every key optional: {"horizon", "tolerances": {name: real}, "format", "truncation_window"}.
[[nodiscard]] RunConfig parse_config(const nlohmann::json& j);
[[nodiscard]] RunConfig load_config(const std::string& path);

/// Copies recognised tolerance names onto the inversion options. Unknown
/// names are rejected.
void apply_tolerances(const std::map<std::string, double>& tolerances, IdentOptions& opts);

void write_json(const std::string& path, const nlohmann::json& j);

}  // namespace focir::io
