#pragma once

// Figure data, the stitched three-stage timeline, and exact-discord checks.
// Curves are in units of beta0^2 (nats, or bits when `units` = 1/ln 2).
// Relaxation-stage closed forms come per beta0'^2 = (beta0/2)^2 and are
// converted here.

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "spinpair/cli/config.hpp"
#include "spinpair/cli/table.hpp"
#include "spinpair/deco.hpp"
#include "spinpair/discord.hpp"
#include "spinpair/prep.hpp"
#include "spinpair/relax.hpp"

namespace spinpair::cli {

enum class Figure { F1a, F1b, F1c, F2, F3, F4, F5 };

inline Figure parse_figure(const std::string &id) {
    if (id == "1a")
        return Figure::F1a;
    if (id == "1b")
        return Figure::F1b;
    if (id == "1c")
        return Figure::F1c;
    if (id == "2")
        return Figure::F2;
    if (id == "3")
        return Figure::F3;
    if (id == "4")
        return Figure::F4;
    if (id == "5")
        return Figure::F5;
    throw DomainError("unknown figure '" + id + "' (expected 1a, 1b, 1c, 2, 3, 4 or 5)");
}

enum class Stage { Prep, Deco, Relax };

inline Stage parse_stage(const std::string &name) {
    if (name == "prep")
        return Stage::Prep;
    if (name == "deco")
        return Stage::Deco;
    if (name == "relax")
        return Stage::Relax;
    throw DomainError("unknown stage '" + name + "' (expected prep, deco or relax)");
}

inline const char *stage_name(Stage stage) {
    switch (stage) {
    case Stage::Prep:
        return "prep";
    case Stage::Deco:
        return "deco";
    default:
        return "relax";
    }
}

namespace detail {

inline std::vector<double> linspace(double hi, int n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] = hi * i / (n - 1);
    return out;
}

/// Relaxation params per unit beta0 (from beta0' = beta0/2).
inline XStateParams relax_params_beta0(const RelaxConfig &rc, double t) {
    return relax_x_params_unit(quasi_invariant_trajectories(rc, t), RelaxRoute::Published)
        .scaled(0.5);
}

inline CorrelationTriple relax_measures_beta0(const RelaxConfig &rc, double t,
                                              RelaxRoute route = RelaxRoute::Published) {
    return relax_measures_analytic(rc, t, route).scaled(0.25);
}

inline std::string temperature_label(double kelvin) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "Q_T%gK", kelvin);
    return buf;
}

/// Measurement axis named by the classifier for unit params scaled to `beta`.
inline std::string classifier_axis(const XStateParams &unit, double beta) {
    const OptimalMeasurementVerdict v = classify_optimal_measurement(unit.scaled(beta));
    if (v.verdict == Verdict::SigmaZ)
        return "z";
    if (v.verdict == Verdict::SigmaX)
        return std::string(1, axis_name(v.transverse_axis));
    return "undetermined";
}

} // namespace detail

inline Table run_figure(Figure fig, const RunConfig &cfg, double units = 1.0) {
    using detail::linspace;
    const double beta = cfg.beta0();
    Table table;
    switch (fig) {
    case Figure::F1a: {
        table.columns = {"omega_d_tau", "Q"};
        for (const double phase : linspace(std::numbers::pi / 2.0, cfg.grid)) {
            const auto m = prep_measures_analytic(PrepConfig::from_phase(beta, cfg.omega_d_hz(), phase));
            table.add_row({phase, units * m.discord});
        }
        break;
    }
    case Figure::F1b: {
        table.columns = {"t_over_tau_d", "Q", "Q_block_diagonal"};
        const DecoConfig dc = cfg.deco_config(beta);
        const double plateau = deco_measures_analytic(dc, 100.0 * dc.tau_d).discord;
        for (const double x : linspace(cfg.deco_span_tau_d, cfg.grid)) {
            const auto m = deco_measures_analytic(dc, x * dc.tau_d);
            table.add_row({x, units * m.discord, units * plateau});
        }
        break;
    }
    case Figure::F1c: {
        table.columns = {"t_over_t_l", "Q"};
        const RelaxConfig rc = cfg.relax_config(beta);
        for (const double x : linspace(cfg.relax_span_t_l, cfg.grid))
            table.add_row({x, units * detail::relax_measures_beta0(rc, x * rc.t_l).discord});
        break;
    }
    case Figure::F2: {
        table.columns = {"t_over_tau_d", "Q_tau_pi_4", "Q_tau_pi_2"};
        DecoConfig quarter{PrepConfig::from_phase(beta, cfg.omega_d_hz(), std::numbers::pi / 4.0),
                           cfg.tau_d_s()};
        DecoConfig half{PrepConfig::from_phase(beta, cfg.omega_d_hz(), std::numbers::pi / 2.0),
                        cfg.tau_d_s()};
        for (const double x : linspace(cfg.deco_span_tau_d, cfg.grid)) {
            const double t = x * cfg.tau_d_s();
            table.add_row({x, units * deco_measures_analytic(quarter, t).discord,
                           units * deco_measures_analytic(half, t).discord});
        }
        break;
    }
    case Figure::F3: {
        table.columns = {"t_over_t_l", "I", "C"};
        const RelaxConfig rc = cfg.relax_config(beta);
        for (const double x : linspace(cfg.relax_span_t_l, cfg.grid)) {
            const auto m = detail::relax_measures_beta0(rc, x * rc.t_l);
            table.add_row({x, units * m.mutual_info, units * m.classical});
        }
        break;
    }
    case Figure::F4: {
        if (cfg.temperature_table.empty())
            throw ConfigError("temperature_table",
                              "figure 4 needs a temperature table: a JSON array (inline or a "
                              "file path) of {temperature_k, a_l, a_s, t_l_ms, t_s_ms, t_z_ms}");
        // shared axis in units of the configured T_L
        table.columns = {"t_over_t_l"};
        std::vector<RelaxConfig> configs;
        for (const auto &row : cfg.temperature_table) {
            table.columns.push_back(detail::temperature_label(row.temperature_k));
            configs.push_back(row.relaxation.relax_config(beta));
        }
        const double unit = cfg.relaxation.t_l_ms * 1e-3;
        for (const double x : linspace(cfg.relax_span_t_l, cfg.grid)) {
            std::vector<Cell> row{x};
            for (const auto &rc : configs)
                row.emplace_back(units * detail::relax_measures_beta0(rc, x * unit).discord);
            table.add_row(std::move(row));
        }
        break;
    }
    case Figure::F5: {
        table.columns = {"t_over_tau_d", "Izq", "Der"};
        const DecoConfig dc = cfg.deco_config(beta);
        for (const double x : linspace(cfg.deco_span_tau_d, cfg.grid)) {
            const auto f = appendix_condition_functions(dc, x * dc.tau_d);
            table.add_row({x, f.izq, f.der});
        }
        break;
    }
    }
    return table;
}

/// Preparation (tau from 0 to its configured value), decoherence up to the
/// handoff time, then relaxation, on one absolute time axis in seconds.
/// Params are per unit beta0, measures per beta0^2.
inline Table run_timeline(const RunConfig &cfg, double units = 1.0) {
    using detail::linspace;
    const double beta = cfg.beta0();
    const double probe = cfg.beta0_inflation;
    Table table;
    table.columns = {"time_s", "stage", "Q", "I", "C", "a_z", "b_z", "c_x", "c_y", "c_z", "axis"};
    auto add = [&](double time, Stage stage, const CorrelationTriple &m, const XStateParams &p) {
        table.add_row({time, std::string(stage_name(stage)), units * m.discord,
                       units * m.mutual_info, units * m.classical, p.a_z, p.b_z, p.c_x, p.c_y,
                       p.c_z, detail::classifier_axis(p, probe)});
    };

    const double w = 2.0 * std::numbers::pi * cfg.omega_d_hz();
    const double tau = cfg.prep_phase() / w;
    for (const double phase : linspace(cfg.prep_phase(), cfg.grid)) {
        const PrepConfig pc = PrepConfig::from_phase(beta, cfg.omega_d_hz(), phase);
        add(phase / w, Stage::Prep, prep_measures_analytic(pc), jb_normal_form_unit(phase));
    }
    const DecoConfig dc = cfg.deco_config(beta);
    const double handoff = cfg.handoff_tau_d * dc.tau_d;
    for (const double t : linspace(handoff, cfg.grid)) {
        const DecoParams p = deco_x_params_unit(dc.prep.phase(), dc.prep.omega_d, dc.tau_d, t);
        add(tau + t, Stage::Deco, deco_measures_analytic(dc, t), p.params);
    }
    const RelaxConfig rc = cfg.relax_config(beta);
    for (const double t : linspace(cfg.relax_span_t_l * rc.t_l, cfg.grid))
        add(tau + handoff + t, Stage::Relax, detail::relax_measures_beta0(rc, t),
            detail::relax_params_beta0(rc, t));
    return table;
}

/// Exact numerics at the inflated beta0 against the closed forms.
/// `time` is omega_D tau / pi for prep, t / tau_D for deco, t / T_L for relax.
///   *_exact        exact measures of the X state with published coefficients
///   *_analytic     leading-order closed forms
///   Q_exact_operator  exact discord of the propagated state itself
///   Q_second_order_operator  leading order on that state's own coefficients
inline Table run_discord_exact(const RunConfig &cfg, Stage stage, double time,
                               double units = 1.0) {
    if (!(time >= 0.0) || !std::isfinite(time))
        throw DomainError("discord-exact: time must be non-negative");
    const double beta = cfg.beta0_inflation;
    const MinimizerOptions options = cfg.minimizer_options();

    XStateParams unit;      // per unit beta0
    CorrelationTriple analytic;
    DensityMatrix literal;
    XStateParams literal_params; // absolute
    Axis axis = Axis::X;
    switch (stage) {
    case Stage::Prep: {
        const PrepConfig pc = PrepConfig::from_phase(beta, cfg.omega_d_hz(), std::numbers::pi * time);
        unit = jb_normal_form_unit(pc.phase());
        analytic = prep_measures_analytic(pc);
        literal = jb_state(pc);
        literal_params = jb_normal_form_operator(pc);
        break;
    }
    case Stage::Deco: {
        const DecoConfig dc = cfg.deco_config(beta);
        const double t = time * dc.tau_d;
        unit = deco_x_params_unit(dc.prep.phase(), dc.prep.omega_d, dc.tau_d, t).params;
        analytic = deco_measures_analytic(dc, t);
        literal = decohere(jb_state(dc.prep), dc, t);
        literal_params = deco_x_params_operator(dc, t);
        break;
    }
    case Stage::Relax: {
        const RelaxConfig rc = cfg.relax_config(beta);
        const double t = time * rc.t_l;
        unit = detail::relax_params_beta0(rc, t);
        analytic = detail::relax_measures_beta0(rc, t);
        literal = quasi_state(rc, t);
        literal_params = extract_x_params(literal);
        axis = Axis::Z;
        break;
    }
    }

    const CorrelationTriple exact =
        correlation_measures(x_state(unit.scaled(beta)), options).per_beta0_squared(beta);
    const CorrelationTriple exact_literal =
        correlation_measures(literal, options).per_beta0_squared(beta);
    const CorrelationTriple second_literal =
        second_order_measures(literal_params.scaled(1.0 / beta), axis);
    const OptimalMeasurementVerdict verdict = classify_optimal_measurement(unit.scaled(beta));

    double direction_error = std::numeric_limits<double>::quiet_NaN();
    if (verdict.verdict != Verdict::Undetermined) {
        Eigen::Vector3d target = Eigen::Vector3d::UnitZ();
        if (verdict.verdict == Verdict::SigmaX)
            target = verdict.transverse_axis == Axis::Y ? Eigen::Vector3d::UnitY()
                                                        : Eigen::Vector3d::UnitX();
        const double c = std::min(1.0, std::abs(exact.optimal_direction.bloch().dot(target)));
        direction_error = std::acos(c);
    }
    const double gap = std::abs(exact.discord - analytic.discord) / std::abs(analytic.discord);

    Table table;
    table.columns = {"stage",        "time",          "beta0",          "Q_exact",
                     "I_exact",      "C_exact",       "Q_analytic",     "I_analytic",
                     "C_analytic",   "relative_gap",  "theta",          "phi",
                     "verdict",      "condition_i",   "condition_ii",   "direction_error",
                     "Q_exact_operator", "Q_second_order_operator"};
    table.add_row({std::string(stage_name(stage)), time, beta, units * exact.discord,
                   units * exact.mutual_info, units * exact.classical, units * analytic.discord,
                   units * analytic.mutual_info, units * analytic.classical, gap,
                   exact.optimal_direction.theta, exact.optimal_direction.phi,
                   std::string(verdict_name(verdict.verdict)),
                   std::string(verdict.condition_i_holds ? "true" : "false"),
                   std::string(verdict.condition_ii_holds ? "true" : "false"), direction_error,
                   units * exact_literal.discord, units * second_literal.discord});
    return table;
}

} // namespace spinpair::cli
