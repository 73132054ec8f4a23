#pragma once

#include <string>

#include "multinet/dynamics.hpp"
#include "multinet/metrics.hpp"

namespace multinet {

/// Pre/post cost pairing. First letter = pre-shock cost level, second = post.
enum class ShockCondition { LL, HH, LH, HL };

enum class ShockedLayers { both, layer1_only };

inline const char* to_string(ShockCondition c) {
    switch (c) {
        case ShockCondition::LL: return "LL";
        case ShockCondition::HH: return "HH";
        case ShockCondition::LH: return "LH";
        case ShockCondition::HL: return "HL";
    }
    return "?";
}

inline ShockCondition shock_condition_from_string(const std::string& s) {
    if (s == "LL") return ShockCondition::LL;
    if (s == "HH") return ShockCondition::HH;
    if (s == "LH") return ShockCondition::LH;
    if (s == "HL") return ShockCondition::HL;
    throw std::invalid_argument("unknown shock condition: " + s);
}

struct ShockSpec {
    ShockCondition condition = ShockCondition::LL;
    double c_low = 0.2;
    double c_high = 0.6;
    ShockedLayers shocked_layers = ShockedLayers::both;

    void validate() const {
        if (!(c_low < c_high)) throw std::invalid_argument("c_low must be below c_high");
        if (c_low < 0) throw std::invalid_argument("costs must be non-negative");
    }

    double pre_cost() const {
        return (condition == ShockCondition::LL || condition == ShockCondition::LH) ? c_low
                                                                                    : c_high;
    }
    double post_cost() const {
        return (condition == ShockCondition::LL || condition == ShockCondition::HL) ? c_low
                                                                                    : c_high;
    }
};

struct PhaseResult {
    MetricsRecord metrics;
    MultiplexNetwork snapshot;
    int rounds = 0;
    bool converged = false;
};

struct ExperimentResult {
    SimConfig config;
    ShockSpec shock;
    IncentiveParams pre_params;
    IncentiveParams post_params;
    PhaseResult pre;
    PhaseResult post;
};

/// Runs one shock experiment: phase 1 from an empty network at the pre-shock
/// cost to equilibrium, then the cost switches to the post-shock level in the
/// shocked layers and phase 2 continues from the phase-1 network. Controls
/// (LL, HH) go through the same two-phase path with an unchanged cost, so all
/// four conditions share identical code and logging. Non-convergence is
/// flagged in the result, not fatal.
inline ExperimentResult run_condition(
    const SimConfig& config, const IncentiveParams& incentives, const ShockSpec& shock, Rng& rng,
    const std::function<void(const RoundLog&, const MultiplexNetwork&)>& observer = {}) {
    config.validate();
    shock.validate();
    if (shock.shocked_layers == ShockedLayers::layer1_only &&
        config.mode != NetworkMode::multiplex)
        throw std::invalid_argument("one-layer shocks require multiplex mode");

    IncentiveParams pre = incentives;
    pre.c = {shock.pre_cost(), shock.pre_cost()};
    pre.validate(config.mode);

    IncentiveParams post = pre;
    post.c[0] = shock.post_cost();
    if (shock.shocked_layers == ShockedLayers::both) post.c[1] = shock.post_cost();

    ExperimentResult result{config, shock, pre, post,
                            PhaseResult{{}, MultiplexNetwork(config.n, config.mode)},
                            PhaseResult{{}, MultiplexNetwork(config.n, config.mode)}};

    MultiplexNetwork net(config.n, config.mode);
    const EquilibriumResult eq1 = run_to_equilibrium(net, pre, config, rng, observer);
    result.pre.snapshot = net;
    result.pre.metrics = MetricsRecord::compute(net, pre, eq1.rounds_used);
    result.pre.rounds = eq1.rounds_used;
    result.pre.converged = eq1.converged;

    const EquilibriumResult eq2 = run_to_equilibrium(net, post, config, rng, observer);
    result.post.snapshot = net;
    result.post.metrics = MetricsRecord::compute(net, post, eq2.rounds_used);
    result.post.rounds = eq2.rounds_used;
    result.post.converged = eq2.converged;
    return result;
}

/// Shock applied to layer 1 only; layer 2 keeps the pre-shock cost.
inline ExperimentResult run_one_layer_shock(const SimConfig& config,
                                            const IncentiveParams& incentives, ShockSpec shock,
                                            Rng& rng) {
    if (config.mode != NetworkMode::multiplex)
        throw std::invalid_argument("one-layer shocks require multiplex mode");
    shock.shocked_layers = ShockedLayers::layer1_only;
    return run_condition(config, incentives, shock, rng);
}

/// All interactions restricted to layer 1; requires e = 0.
inline ExperimentResult run_single_layer(SimConfig config, const IncentiveParams& incentives,
                                         const ShockSpec& shock, Rng& rng) {
    if (incentives.e != 0.0)
        throw std::invalid_argument("spillover benefit must be 0 in single-layer mode");
    config.mode = NetworkMode::single_layer;
    return run_condition(config, incentives, shock, rng);
}

}  // namespace multinet
