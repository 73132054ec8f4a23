#pragma once

#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

#include "multinet/network.hpp"
#include "multinet/rng.hpp"
#include "multinet/utility.hpp"

namespace multinet {

struct SimConfig {
    int n = 40;
    int p = 10;                       // agents sampled per turn
    double nu = 0.0;                  // noise probability per decision stage
    NetworkMode mode = NetworkMode::multiplex;
    int quiet_rounds = 5;             // consecutive no-change rounds defining equilibrium
    int max_rounds = 5000;
    std::uint64_t seed = 0;

    void validate() const {
        if (n < 2) throw std::invalid_argument("n must be at least 2");
        if (p < 1) throw std::invalid_argument("p must be at least 1");
        if (nu < 0.0 || nu > 1.0) throw std::invalid_argument("nu must be in [0,1]");
        if (quiet_rounds < 1) throw std::invalid_argument("quiet_rounds must be at least 1");
        if (max_rounds < 1) throw std::invalid_argument("max_rounds must be at least 1");
    }
};

struct RoundLog {
    int round = 0;
    std::vector<Move> moves;
    int adds = 0;
    int drops = 0;
    int rewires = 0;
    int rejected = 0;  // proposals declined by the would-be acceptor

    bool quiet() const { return adds == 0 && drops == 0; }
};

/// Stages at which a noise override can replace the rational rule.
enum class NoiseStage { add_choice, acceptance, drop_choice };

/// True with probability nu, independently per stage and per draw.
inline bool noisy_override(Rng& rng, double nu, NoiseStage) { return rng.chance(nu); }

/// min(p, n-1) distinct nodes != self, uniform without replacement. One sample
/// is drawn per agent turn and reused for both the add and the rewire scan.
inline std::vector<int> sample_candidates(Rng& rng, int n, int self, int p) {
    const int k = std::min(p, n - 1);
    std::vector<int> pool(static_cast<std::size_t>(n) - 1);
    int x = 0;
    for (int& v : pool) {
        if (x == self) ++x;
        v = x++;
    }
    // partial Fisher-Yates: first k entries become the sample
    for (int i = 0; i < k; ++i) {
        const int j = i + static_cast<int>(rng.below(pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(static_cast<std::size_t>(k));
    return pool;
}

namespace detail {

// Collects the argmax set of a scan, with ties kept for a uniform random pick.
template <typename Candidate>
class BestSet {
public:
    void offer(double value, Candidate cand) {
        if (best_.empty() || value > value_ + kGainEps) {
            value_ = value;
            best_.clear();
            best_.push_back(cand);
        } else if (value >= value_ - kGainEps) {
            best_.push_back(cand);
        }
    }
    bool improving() const { return !best_.empty() && value_ > kGainEps; }
    double value() const { return value_; }
    const Candidate& pick(Rng& rng) const {
        return best_.size() == 1 ? best_[0] : best_[rng.below(best_.size())];
    }

private:
    double value_ = 0.0;
    std::vector<Candidate> best_;
};

inline std::vector<TieRef> absent_ties(const MultiplexNetwork& net, int i) {
    std::vector<TieRef> out;
    for (int l = 0; l < net.layer_count(); ++l)
        for (int j = 0; j < net.node_count(); ++j)
            if (j != i && !net.has_edge(i, j, l)) out.push_back({j, l});
    return out;
}

inline std::vector<TieRef> held_ties(const MultiplexNetwork& net, int i) {
    std::vector<TieRef> out;
    for (int l = 0; l < net.layer_count(); ++l)
        for (int j : net.neighbors(i, l)) out.push_back({j, l});
    return out;
}

}  // namespace detail

/// One decision turn for agent i, per the formation rules:
///   1. best-add scan over the sample; if the best gain is strictly positive
///      (or an add-choice noise override fires) the agent proposes; the tie
///      forms only if the acceptor also strictly gains (or an acceptance
///      override fires). A proposal, accepted or not, is the turn's only one.
///   2. only when no add was worth proposing: best-rewire scan over
///      (held tie x sampled node x layer); the add leg is proposed and judged
///      by the acceptor against the pre-drop network; on acceptance the add is
///      applied and then the old tie dropped. A rejected rewire drops nothing.
///   3. if no tie was dropped yet: best-drop scan over held ties excluding
///      any tie just added this turn; drop on strict gain. The drop-choice
///      noise override removes a uniformly random held tie instead.
/// Mutates the network and returns the realized Move. `rejected`, when given,
/// is incremented if a proposal was declined.
inline Move agent_turn(MultiplexNetwork& net, const IncentiveParams& params,
                       const SimConfig& config, Rng& rng, int i, int* rejected = nullptr) {
    const int n = net.node_count();
    std::optional<TieRef> added;
    std::optional<TieRef> dropped;

    const std::vector<int> sample = sample_candidates(rng, n, i, config.p);

    // --- stage 1: propose the best straightforward addition -----------------
    std::optional<TieRef> proposal;
    if (noisy_override(rng, config.nu, NoiseStage::add_choice)) {
        const auto absent = detail::absent_ties(net, i);
        if (!absent.empty()) proposal = absent[rng.below(absent.size())];
    } else {
        detail::BestSet<TieRef> best;
        for (int l = 0; l < net.layer_count(); ++l)
            for (int j : sample)
                if (!net.has_edge(i, j, l)) best.offer(marginal_add(net, params, i, j, l), {j, l});
        if (best.improving()) proposal = best.pick(rng);
    }

    if (proposal) {
        const bool accepted = noisy_override(rng, config.nu, NoiseStage::acceptance) ||
                              marginal_add(net, params, proposal->node, i, proposal->layer) > kGainEps;
        if (accepted) {
            net.add_edge(i, proposal->node, proposal->layer);
            added = *proposal;
        } else if (rejected) {
            ++*rejected;
        }
    } else {
        // --- stage 2: rewire fallback (needs the turn's unused proposal) ----
        struct RewireCand {
            TieRef drop, add;
        };
        detail::BestSet<RewireCand> best;
        const auto held = detail::held_ties(net, i);
        for (const TieRef& h : held)
            for (int l = 0; l < net.layer_count(); ++l)
                for (int j : sample) {
                    const TieRef add{j, l};
                    if (add == h || net.has_edge(i, j, l)) continue;
                    best.offer(marginal_rewire(net, params, i, h, add), {h, add});
                }
        if (best.improving()) {
            const RewireCand& cand = best.pick(rng);
            const bool accepted =
                noisy_override(rng, config.nu, NoiseStage::acceptance) ||
                marginal_add(net, params, cand.add.node, i, cand.add.layer) > kGainEps;
            if (accepted) {
                net.add_edge(i, cand.add.node, cand.add.layer);
                net.remove_edge(i, cand.drop.node, cand.drop.layer);
                added = cand.add;
                dropped = cand.drop;
            } else if (rejected) {
                ++*rejected;
            }
        }
    }

    // --- stage 3: unilateral drop -------------------------------------------
    if (!dropped) {
        auto held = detail::held_ties(net, i);
        if (added) std::erase(held, *added);  // a tie just added is not reconsidered
        if (noisy_override(rng, config.nu, NoiseStage::drop_choice)) {
            if (!held.empty()) {
                const TieRef victim = held[rng.below(held.size())];
                net.remove_edge(i, victim.node, victim.layer);
                dropped = victim;
            }
        } else {
            detail::BestSet<TieRef> best;
            for (const TieRef& h : held)
                best.offer(marginal_drop(net, params, i, h.node, h.layer), h);
            if (best.improving()) {
                const TieRef victim = best.pick(rng);
                net.remove_edge(i, victim.node, victim.layer);
                dropped = victim;
            }
        }
    }

    if (added && dropped) return Move::rewire(i, *added, *dropped);
    if (added) return Move::add(i, *added);
    if (dropped) return Move::drop(i, *dropped);
    return Move::noop(i);
}

/// One full round: every agent takes a turn, in a fresh uniform random order.
/// Changes take effect immediately, so later agents see earlier changes.
inline RoundLog run_round(MultiplexNetwork& net, const IncentiveParams& params,
                          const SimConfig& config, Rng& rng, int round_index = 0) {
    RoundLog log;
    log.round = round_index;
    std::vector<int> order(static_cast<std::size_t>(net.node_count()));
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    log.moves.reserve(order.size());
    for (int i : order) {
        Move move = agent_turn(net, params, config, rng, i, &log.rejected);
        switch (move.kind) {
            case MoveKind::add_tie: ++log.adds; break;
            case MoveKind::drop_tie: ++log.drops; break;
            case MoveKind::rewire: ++log.adds; ++log.drops; ++log.rewires; break;
            case MoveKind::no_op: break;
        }
        log.moves.push_back(std::move(move));
    }
    return log;
}

struct EquilibriumResult {
    int rounds_used = 0;
    bool converged = false;
};

/// Runs rounds until quiet_rounds consecutive rounds without any add or drop,
/// or max_rounds. With nu > 0 no true equilibrium exists, so the quiet
/// criterion is disabled and exactly max_rounds are run (converged = false).
/// The observer, when set, is called after every round.
inline EquilibriumResult run_to_equilibrium(
    MultiplexNetwork& net, const IncentiveParams& params, const SimConfig& config, Rng& rng,
    const std::function<void(const RoundLog&, const MultiplexNetwork&)>& observer = {}) {
    config.validate();
    params.validate(net.mode());
    EquilibriumResult result;
    int quiet_streak = 0;
    const bool noisy = config.nu > 0.0;
    while (result.rounds_used < config.max_rounds) {
        const RoundLog log = run_round(net, params, config, rng, result.rounds_used);
        ++result.rounds_used;
        if (observer) observer(log, net);
        if (!noisy) {
            quiet_streak = log.quiet() ? quiet_streak + 1 : 0;
            if (quiet_streak >= config.quiet_rounds) {
                result.converged = true;
                break;
            }
        }
    }
    return result;
}

}  // namespace multinet
