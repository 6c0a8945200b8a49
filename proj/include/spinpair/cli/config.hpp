#pragma once

// Run configuration: a flat JSON object. Omitted physical keys take the
// gypsum values (B = 20 MHz, T = 200 K, omega_D = 95.5 kHz, tau_D = 306 us,
// A_L = 0.88, A_S = 0.12, T_L = 12 ms, T_S = 0.6 ms, T_z = 512 ms).

#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "spinpair/deco.hpp"
#include "spinpair/prep.hpp"
#include "spinpair/relax.hpp"

namespace spinpair::cli {

/// Invalid or unreadable configuration. `key()` names the offending key, or
/// is empty for file-level problems.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(std::string key, const std::string &what)
        : std::runtime_error(key.empty() ? what : "config key '" + key + "': " + what),
          key_(std::move(key)) {}
    [[nodiscard]] const std::string &key() const noexcept { return key_; }

  private:
    std::string key_;
};

struct RelaxationBlock {
    double a_l = 0.88;
    double a_s = 0.12;
    double t_l_ms = 12.0;
    double t_s_ms = 0.6;
    double t_z_ms = 512.0;

    [[nodiscard]] RelaxConfig relax_config(double beta0) const {
        return {beta0, a_l, a_s, t_l_ms * 1e-3, t_s_ms * 1e-3, t_z_ms * 1e-3};
    }
};

struct TemperatureRow {
    double temperature_k = 200.0;
    RelaxationBlock relaxation{};
};

struct RunConfig {
    // physical
    std::optional<double> beta0_given;
    double field_mhz = 20.0;
    double temperature_k = 200.0;
    double omega_d_khz = 95.5;
    double tau_units_of_pi_over_omega_d = 0.25; // omega_D tau / pi
    double tau_d_us = 306.0;
    RelaxationBlock relaxation{};

    // numerics
    int grid = 500;
    int theta_steps = 64;
    int phi_steps = 128;
    double direction_tol = 1e-7;
    double beta0_inflation = 1e-3;
    double handoff_tau_d = 10.0;
    double deco_span_tau_d = 2.0;
    double relax_span_t_l = 5.0;

    // output
    std::string output;
    std::string format = "csv";
    std::vector<TemperatureRow> temperature_table;

    /// beta0 as given, or hbar 2 pi B / (k_B T).
    [[nodiscard]] double beta0() const {
        if (beta0_given)
            return *beta0_given;
        return constants::hbar * 2.0 * std::numbers::pi * field_mhz * 1e6 /
               (constants::boltzmann * temperature_k);
    }

    [[nodiscard]] double omega_d_hz() const { return omega_d_khz * 1e3; }
    [[nodiscard]] double tau_d_s() const { return tau_d_us * 1e-6; }
    [[nodiscard]] double prep_phase() const {
        return std::numbers::pi * tau_units_of_pi_over_omega_d;
    }

    [[nodiscard]] PrepConfig prep_config(double beta) const {
        return PrepConfig::from_phase(beta, omega_d_hz(), prep_phase());
    }
    [[nodiscard]] DecoConfig deco_config(double beta) const {
        return {prep_config(beta), tau_d_s()};
    }
    [[nodiscard]] RelaxConfig relax_config(double beta) const {
        return relaxation.relax_config(beta);
    }

    [[nodiscard]] MinimizerOptions minimizer_options() const {
        return {theta_steps, phi_steps, direction_tol};
    }
};

namespace detail {

inline const std::set<std::string> &relaxation_keys() {
    static const std::set<std::string> keys{"a_l", "a_s", "t_l_ms", "t_s_ms", "t_z_ms"};
    return keys;
}

inline double number(const nlohmann::json &obj, const std::string &key,
                     const std::string &prefix = "") {
    const auto &v = obj.at(key);
    if (!v.is_number())
        throw ConfigError(prefix + key, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x))
        throw ConfigError(prefix + key, "must be finite");
    return x;
}

inline double positive(const nlohmann::json &obj, const std::string &key,
                       const std::string &prefix = "") {
    const double x = number(obj, key, prefix);
    if (!(x > 0.0))
        throw ConfigError(prefix + key, "must be positive");
    return x;
}

inline int integer(const nlohmann::json &obj, const std::string &key, int minimum) {
    const auto &v = obj.at(key);
    if (!v.is_number_integer())
        throw ConfigError(key, "expected an integer");
    const auto x = v.get<long long>();
    if (x < minimum || x > 1'000'000)
        throw ConfigError(key, "must lie in [" + std::to_string(minimum) + ", 1000000]");
    return static_cast<int>(x);
}

inline std::string text(const nlohmann::json &obj, const std::string &key) {
    const auto &v = obj.at(key);
    if (!v.is_string())
        throw ConfigError(key, "expected a string");
    return v.get<std::string>();
}

inline void check_amplitudes(const RelaxationBlock &block, const std::string &prefix) {
    if (!(std::abs(block.a_l + block.a_s - 1.0) <= 1e-9))
        throw ConfigError(prefix + "a_s", "a_l + a_s must equal 1 within 1e-9");
    if (block.a_l < 0.0)
        throw ConfigError(prefix + "a_l", "must be non-negative");
    if (block.a_s < 0.0)
        throw ConfigError(prefix + "a_s", "must be non-negative");
}

inline RelaxationBlock parse_relaxation(const nlohmann::json &obj, RelaxationBlock block,
                                        const std::string &prefix) {
    if (obj.contains("a_l"))
        block.a_l = number(obj, "a_l", prefix);
    if (obj.contains("a_s"))
        block.a_s = number(obj, "a_s", prefix);
    if (obj.contains("t_l_ms"))
        block.t_l_ms = positive(obj, "t_l_ms", prefix);
    if (obj.contains("t_s_ms"))
        block.t_s_ms = positive(obj, "t_s_ms", prefix);
    if (obj.contains("t_z_ms"))
        block.t_z_ms = positive(obj, "t_z_ms", prefix);
    check_amplitudes(block, prefix);
    return block;
}

inline std::vector<TemperatureRow> parse_table(const nlohmann::json &table) {
    if (!table.is_array() || table.empty())
        throw ConfigError("temperature_table", "expected a non-empty array of rows");
    std::vector<TemperatureRow> rows;
    for (std::size_t i = 0; i < table.size(); ++i) {
        const auto &row = table[i];
        const std::string prefix = "temperature_table[" + std::to_string(i) + "].";
        if (!row.is_object())
            throw ConfigError("temperature_table[" + std::to_string(i) + "]", "expected an object");
        for (const auto &[key, value] : row.items()) {
            if (key != "temperature_k" && !relaxation_keys().contains(key))
                throw ConfigError(prefix + key, "unknown key");
        }
        for (const char *key : {"temperature_k", "a_l", "a_s", "t_l_ms", "t_s_ms", "t_z_ms"})
            if (!row.contains(key))
                throw ConfigError(prefix + key, "missing");
        TemperatureRow out;
        out.temperature_k = positive(row, "temperature_k", prefix);
        out.relaxation = parse_relaxation(row, {}, prefix);
        rows.push_back(out);
    }
    return rows;
}

inline nlohmann::json read_json_file(const std::filesystem::path &path, const std::string &key) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError(key, "cannot open file '" + path.string() + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error &e) {
        throw ConfigError(key, "'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

} // namespace detail

/// Validates a parsed config object. Relative table paths resolve against
/// `base_dir`.
inline RunConfig parse_config(const nlohmann::json &obj,
                              const std::filesystem::path &base_dir = {}) {
    using namespace detail;
    if (!obj.is_object())
        throw ConfigError("", "config must be a JSON object");

    static const std::set<std::string> known{
        "beta0",          "field_mhz",       "temperature_k",     "omega_d_khz",
        "tau_units_of_pi_over_omega_d",      "tau_d_us",          "a_l",
        "a_s",            "t_l_ms",          "t_s_ms",            "t_z_ms",
        "grid",           "theta_steps",     "phi_steps",         "direction_tol",
        "beta0_inflation", "handoff_tau_d",  "deco_span_tau_d",   "relax_span_t_l",
        "output",         "format",          "temperature_table"};
    for (const auto &[key, value] : obj.items())
        if (!known.contains(key))
            throw ConfigError(key, "unknown key");

    RunConfig cfg;
    if (obj.contains("beta0")) {
        if (obj.contains("field_mhz") || obj.contains("temperature_k"))
            throw ConfigError("beta0", "give either beta0 or the field_mhz/temperature_k pair, not both");
        const double b = number(obj, "beta0");
        if (!(b > 0.0 && b < 1.0))
            throw ConfigError("beta0", "must lie in (0, 1)");
        cfg.beta0_given = b;
    }
    if (obj.contains("field_mhz"))
        cfg.field_mhz = positive(obj, "field_mhz");
    if (obj.contains("temperature_k"))
        cfg.temperature_k = positive(obj, "temperature_k");
    if (obj.contains("omega_d_khz"))
        cfg.omega_d_khz = positive(obj, "omega_d_khz");
    if (obj.contains("tau_units_of_pi_over_omega_d")) {
        cfg.tau_units_of_pi_over_omega_d = number(obj, "tau_units_of_pi_over_omega_d");
        if (cfg.tau_units_of_pi_over_omega_d < 0.0)
            throw ConfigError("tau_units_of_pi_over_omega_d", "must be non-negative");
    }
    if (obj.contains("tau_d_us"))
        cfg.tau_d_us = positive(obj, "tau_d_us");

    // Relaxation parameters are only known at 200 K; other temperatures must
    // bring their own.
    const bool custom_temperature = obj.contains("temperature_k") && cfg.temperature_k != 200.0;
    if (custom_temperature) {
        for (const auto &key : relaxation_keys())
            if (!obj.contains(key))
                throw ConfigError(key, "required when temperature_k differs from 200 K "
                                       "(no built-in temperature dependence)");
    }
    cfg.relaxation = parse_relaxation(obj, cfg.relaxation, "");

    if (obj.contains("grid"))
        cfg.grid = integer(obj, "grid", 2);
    if (obj.contains("theta_steps"))
        cfg.theta_steps = integer(obj, "theta_steps", 2);
    if (obj.contains("phi_steps"))
        cfg.phi_steps = integer(obj, "phi_steps", 1);
    if (obj.contains("direction_tol"))
        cfg.direction_tol = positive(obj, "direction_tol");
    if (obj.contains("beta0_inflation")) {
        cfg.beta0_inflation = positive(obj, "beta0_inflation");
        if (cfg.beta0_inflation > 0.1)
            throw ConfigError("beta0_inflation", "must not exceed 0.1");
    }
    if (obj.contains("handoff_tau_d"))
        cfg.handoff_tau_d = positive(obj, "handoff_tau_d");
    if (obj.contains("deco_span_tau_d"))
        cfg.deco_span_tau_d = positive(obj, "deco_span_tau_d");
    if (obj.contains("relax_span_t_l"))
        cfg.relax_span_t_l = positive(obj, "relax_span_t_l");

    if (obj.contains("output"))
        cfg.output = text(obj, "output");
    if (obj.contains("format")) {
        cfg.format = text(obj, "format");
        if (cfg.format != "csv" && cfg.format != "json")
            throw ConfigError("format", "must be \"csv\" or \"json\"");
    }
    if (obj.contains("temperature_table")) {
        const auto &t = obj.at("temperature_table");
        if (t.is_string()) {
            std::filesystem::path p = t.get<std::string>();
            if (p.is_relative())
                p = base_dir / p;
            cfg.temperature_table = parse_table(read_json_file(p, "temperature_table"));
        } else {
            cfg.temperature_table = parse_table(t);
        }
    }

    const double b = cfg.beta0();
    if (!(b > 0.0 && b < 1.0))
        throw ConfigError(obj.contains("temperature_k") ? "temperature_k" : "field_mhz",
                          "resulting beta0 must lie in (0, 1)");
    return cfg;
}

inline RunConfig load_config(const std::filesystem::path &path) {
    const nlohmann::json obj = detail::read_json_file(path, "");
    return parse_config(obj, path.parent_path());
}

/// Resolved configuration as JSON (all keys explicit).
inline nlohmann::json to_json(const RunConfig &cfg) {
    nlohmann::json out;
    out["beta0"] = cfg.beta0();
    if (!cfg.beta0_given) {
        out["field_mhz"] = cfg.field_mhz;
        out["temperature_k"] = cfg.temperature_k;
    }
    out["omega_d_khz"] = cfg.omega_d_khz;
    out["tau_units_of_pi_over_omega_d"] = cfg.tau_units_of_pi_over_omega_d;
    out["tau_d_us"] = cfg.tau_d_us;
    out["a_l"] = cfg.relaxation.a_l;
    out["a_s"] = cfg.relaxation.a_s;
    out["t_l_ms"] = cfg.relaxation.t_l_ms;
    out["t_s_ms"] = cfg.relaxation.t_s_ms;
    out["t_z_ms"] = cfg.relaxation.t_z_ms;
    out["grid"] = cfg.grid;
    out["theta_steps"] = cfg.theta_steps;
    out["phi_steps"] = cfg.phi_steps;
    out["direction_tol"] = cfg.direction_tol;
    out["beta0_inflation"] = cfg.beta0_inflation;
    out["handoff_tau_d"] = cfg.handoff_tau_d;
    out["deco_span_tau_d"] = cfg.deco_span_tau_d;
    out["relax_span_t_l"] = cfg.relax_span_t_l;
    out["format"] = cfg.format;
    if (!cfg.output.empty())
        out["output"] = cfg.output;
    if (!cfg.temperature_table.empty()) {
        auto rows = nlohmann::json::array();
        for (const auto &row : cfg.temperature_table)
            rows.push_back({{"temperature_k", row.temperature_k},
                            {"a_l", row.relaxation.a_l},
                            {"a_s", row.relaxation.a_s},
                            {"t_l_ms", row.relaxation.t_l_ms},
                            {"t_s_ms", row.relaxation.t_s_ms},
                            {"t_z_ms", row.relaxation.t_z_ms}});
        out["temperature_table"] = rows;
    }
    return out;
}

} // namespace spinpair::cli
