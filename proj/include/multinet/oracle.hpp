#pragma once

#include <boost/rational.hpp>
#include <cstdlib>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "multinet/network.hpp"
#include "multinet/utility.hpp"

// Analytical and exhaustive verification side of the toolkit: closed-form
// incentive thresholds, ego-network utility tables, the favored-transition
// graph, and a full-visibility stability check for small instances. All
// threshold arithmetic is exact over rationals so boundary cases cannot be
// misclassified by floating point.

namespace multinet::oracle {

using Rat = boost::rational<long long>;

inline double to_double(const Rat& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

/// Exact rational from a plain decimal string such as "0.8" or "-1.25".
inline Rat rat_from_decimal(const std::string& s) {
    const auto dot = s.find('.');
    if (dot == std::string::npos) return Rat(std::stoll(s));
    const std::string whole = s.substr(0, dot);
    const std::string frac = s.substr(dot + 1);
    if (frac.size() > 15) throw std::invalid_argument("decimal too precise: " + s);
    long long den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    const long long sign = (!whole.empty() && whole[0] == '-') ? -1 : 1;
    const long long w = whole.empty() || whole == "-" ? 0 : std::llabs(std::stoll(whole));
    const long long f = frac.empty() ? 0 : std::stoll(frac);
    return Rat(sign * (w * den + f), den);
}

inline std::string rat_to_string(const Rat& r) {
    std::ostringstream out;
    out << r.numerator();
    if (r.denominator() != 1) out << '/' << r.denominator();
    return out.str();
}

// ---------------------------------------------------------------------------
// Closed-form thresholds
// ---------------------------------------------------------------------------

/// Smallest triangle benefit at which a node in a closed triangle keeps its
/// second tie after a shock to c_high: d >= 3*c_high - 1.
inline Rat resilience_onset_threshold(const Rat& c_high) { return 3 * c_high - 1; }

/// True iff a second tie forms de novo only under the low cost:
/// c_low < 1/3 <= c_high.
inline bool cost_regime_check(const Rat& c_low, const Rat& c_high) {
    if (!(c_low < c_high)) throw std::invalid_argument("c_low must be below c_high");
    return c_low < Rat(1, 3) && c_high >= Rat(1, 3);
}

struct SpilloverThresholds {
    Rat partial;        // e above which a spillover tie survives the shock
    Rat perfect;        // e at which degree-3 spillover states stay stable
    Rat consolidation;  // e above which HH networks become all-spillover
};

/// Spillover benefit thresholds as functions of the high tie cost:
/// partial onset 3c-1, perfect resilience 5c-1, HH consolidation 3c-1.
/// At c_high = 3/5 these are (0.8, 2.0, 0.8).
inline SpilloverThresholds spillover_thresholds(const Rat& c_high = Rat(3, 5)) {
    return {3 * c_high - 1, 5 * c_high - 1, 3 * c_high - 1};
}

/// Expected spillover fraction when both layers are wired independently at
/// random with degree 1: 1/(n-1).
inline Rat random_spillover_baseline(int n) {
    if (n < 2) throw std::invalid_argument("need at least 2 nodes");
    return Rat(1, n - 1);
}

// ---------------------------------------------------------------------------
// Ego states and transitions
// ---------------------------------------------------------------------------

/// Local configuration around one node: per-layer degree t, per-layer
/// triangle membership z, and spillover count v.
struct EgoState {
    int t[2] = {0, 0};
    int z[2] = {0, 0};
    int v = 0;

    bool valid() const {
        if (t[0] < 0 || t[1] < 0 || z[0] < 0 || z[1] < 0 || v < 0) return false;
        if (v > std::min(t[0], t[1])) return false;
        for (int l = 0; l < 2; ++l)
            if (z[l] > t[l] * (t[l] - 1) / 2) return false;
        return true;
    }

    /// Layer-exchange canonical form (layer 0 weakly dominates by (t, z)).
    EgoState canonical() const {
        EgoState s = *this;
        if (std::tie(s.t[1], s.z[1]) > std::tie(s.t[0], s.z[0])) {
            std::swap(s.t[0], s.t[1]);
            std::swap(s.z[0], s.z[1]);
        }
        return s;
    }

    std::array<int, 5> key() const { return {t[0], z[0], t[1], z[1], v}; }
    bool operator==(const EgoState& o) const { return key() == o.key(); }
    bool operator<(const EgoState& o) const { return key() < o.key(); }
};

/// A value affine in the incentive benefits: k + kd*d + ke*e.
struct AffineDE {
    Rat k = 0;
    Rat kd = 0;
    Rat ke = 0;

    Rat eval(const Rat& d, const Rat& e) const { return k + kd * d + ke * e; }

    // Comparisons against literals go through Rat(): mixed rational/int
    // comparisons in this boost version recurse infinitely under C++20's
    // reversed-operator lookup.
    std::string to_string() const {
        std::string s = rat_to_string(k);
        if (kd != Rat(0)) s += " + " + rat_to_string(kd) + "d";
        if (ke != Rat(0)) s += " + " + rat_to_string(ke) + "e";
        return s;
    }
};

/// Ego utility under a uniform tie cost c, symbolic in (d, e).
inline AffineDE ego_utility(const EgoState& s, const Rat& b, const Rat& c) {
    AffineDE u;
    for (int l = 0; l < 2; ++l) {
        u.k += b * s.t[l] - c * s.t[l] * s.t[l];
        u.kd += s.z[l];
    }
    u.ke = s.v;
    return u;
}

struct EgoEntry {
    EgoState state;
    AffineDE u_low;
    AffineDE u_high;
};

struct EgoEnumOptions {
    bool triangles = true;      // enumerate z > 0 states
    bool two_layers = true;     // false: single-layer table (t2 = z2 = v = 0)
    bool canonical = true;      // collapse layer-exchange duplicates
    bool include_empty = true;  // keep the isolated-node state
};

/// All ego states with per-layer degree <= max_t satisfying the invariants,
/// with utilities under both cost levels.
inline std::vector<EgoEntry> enumerate_ego_states(int max_t, const Rat& c_low, const Rat& c_high,
                                                  EgoEnumOptions opt = {}) {
    if (max_t < 0 || max_t > 5) throw std::invalid_argument("max_t must be in [0, 5]");
    std::set<EgoState> seen;
    std::vector<EgoEntry> out;
    const int t2_max = opt.two_layers ? max_t : 0;
    for (int t0 = 0; t0 <= max_t; ++t0)
        for (int t1 = 0; t1 <= t2_max; ++t1)
            for (int v = 0; v <= (opt.two_layers ? std::min(t0, t1) : 0); ++v)
                for (int z0 = 0; z0 <= (opt.triangles ? t0 * (t0 - 1) / 2 : 0); ++z0)
                    for (int z1 = 0; z1 <= (opt.triangles && opt.two_layers ? t1 * (t1 - 1) / 2 : 0);
                         ++z1) {
                        EgoState s;
                        s.t[0] = t0;
                        s.t[1] = t1;
                        s.z[0] = z0;
                        s.z[1] = z1;
                        s.v = v;
                        if (!opt.include_empty && t0 == 0 && t1 == 0) continue;
                        if (opt.canonical) s = s.canonical();
                        if (!seen.insert(s).second) continue;
                        out.push_back({s, ego_utility(s, 1, c_low), ego_utility(s, 1, c_high)});
                    }
    return out;
}

/// The spillover-only ego table (z = 0, both layers, layer-exchange collapsed,
/// isolated node excluded). With max_t = 4 this yields 34 states, matching the
/// count of distinct local configurations relevant under spillover incentives
/// (degree never exceeds 4 under the default costs).
inline std::vector<EgoEntry> spillover_ego_table(const Rat& c_low, const Rat& c_high,
                                                 int max_t = 4) {
    EgoEnumOptions opt;
    opt.triangles = false;
    opt.include_empty = false;
    return enumerate_ego_states(max_t, c_low, c_high, opt);
}

enum class FavoredUnder { neither, low_cost, high_cost, both };

/// One single-edge move between ego states, with its symbolic marginal gain
/// under each cost level.
struct TransitionEdge {
    EgoState from;
    EgoState to;
    bool is_add = false;  // false: drop
    int layer = 0;
    int dz = 0;  // triangles gained (add) or lost (drop)
    int dv = 0;  // spillover gained (add) or lost (drop)
    AffineDE gain_low;
    AffineDE gain_high;

    FavoredUnder favored(const Rat& d, const Rat& e) const {
        const bool low = gain_low.eval(d, e) > Rat(0);
        const bool high = gain_high.eval(d, e) > Rat(0);
        if (low && high) return FavoredUnder::both;
        if (low) return FavoredUnder::low_cost;
        if (high) return FavoredUnder::high_cost;
        return FavoredUnder::neither;
    }

    /// Favored for every d, e >= 0 under the given cost level's gain.
    static bool always_favored(const AffineDE& g) {
        return g.kd >= Rat(0) && g.ke >= Rat(0) && g.k > Rat(0);
    }
};

/// Every single-edge move reachable within the enumeration bounds, from each
/// given state. Gains are b - c(2t+1) + dz*d + dv*e for adds and
/// -b + c(2t-1) - dz*d - dv*e for drops.
inline std::vector<TransitionEdge> favored_transitions(const std::vector<EgoEntry>& states,
                                                       const Rat& b, const Rat& c_low,
                                                       const Rat& c_high, int max_t,
                                                       EgoEnumOptions opt = {}) {
    std::vector<TransitionEdge> out;
    std::set<std::tuple<std::array<int, 5>, std::array<int, 5>, bool, int, int>> seen;
    const auto push = [&](TransitionEdge e) {
        EgoState to = opt.canonical ? e.to.canonical() : e.to;
        e.to = to;
        if (seen.emplace(e.from.key(), e.to.key(), e.is_add, e.dz, e.dv).second)
            out.push_back(std::move(e));
    };
    const auto gain = [&](const Rat& c, bool add, int t, int dz, int dv) {
        AffineDE g;
        if (add) {
            g.k = b - c * (2 * t + 1);
            g.kd = dz;
            g.ke = dv;
        } else {
            g.k = -b + c * (2 * t - 1);
            g.kd = -dz;
            g.ke = -dv;
        }
        return g;
    };
    for (const EgoEntry& entry : states) {
        const EgoState& s = entry.state;
        for (int l = 0; l < (opt.two_layers ? 2 : 1); ++l) {
            const int t = s.t[l];
            const int t_other = s.t[1 - l];
            // additions
            if (t + 1 <= max_t) {
                for (int dz = 0; dz <= (opt.triangles ? t : 0); ++dz)
                    for (int dv = 0; dv <= (opt.two_layers && s.v + 1 <= t_other ? 1 : 0); ++dv) {
                        TransitionEdge e;
                        e.from = s;
                        e.to = s;
                        e.to.t[l] += 1;
                        e.to.z[l] += dz;
                        e.to.v += dv;
                        e.is_add = true;
                        e.layer = l;
                        e.dz = dz;
                        e.dv = dv;
                        e.gain_low = gain(c_low, true, t, dz, dv);
                        e.gain_high = gain(c_high, true, t, dz, dv);
                        push(std::move(e));
                    }
            }
            // drops
            if (t >= 1) {
                const int dz_min = std::max(0, s.z[l] - (t - 1) * (t - 2) / 2);
                const int dz_max = std::min(s.z[l], t - 1);
                for (int dz = dz_min; dz <= dz_max; ++dz)
                    for (int dv = 0; dv <= 1; ++dv) {
                        if (dv == 1 && s.v == 0) continue;          // no spillover to lose
                        if (dv == 0 && t - s.v < 1) continue;       // every tie here is shared
                        TransitionEdge e;
                        e.from = s;
                        e.to = s;
                        e.to.t[l] -= 1;
                        e.to.z[l] -= dz;
                        e.to.v -= dv;
                        e.is_add = false;
                        e.layer = l;
                        e.dz = dz;
                        e.dv = dv;
                        e.gain_low = gain(c_low, false, t, dz, dv);
                        e.gain_high = gain(c_high, false, t, dz, dv);
                        push(std::move(e));
                    }
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Witness networks
// ---------------------------------------------------------------------------

namespace detail {

struct WitnessLayout {
    // ego is node 0; shared neighbors 1..v; layer-0-only v+1..t0;
    // layer-1-only t0+1..t0+(t1-v)
    std::vector<int> nb[2];
};

inline WitnessLayout layout(const EgoState& s) {
    WitnessLayout w;
    for (int j = 1; j <= s.v; ++j) {
        w.nb[0].push_back(j);
        w.nb[1].push_back(j);
    }
    for (int j = s.v + 1; j <= s.t[0]; ++j) w.nb[0].push_back(j);
    for (int j = s.t[0] + 1; j <= s.t[0] + (s.t[1] - s.v); ++j) w.nb[1].push_back(j);
    return w;
}

inline int witness_size(const EgoState& s, int extra = 0) {
    return std::max(2, 1 + s.t[0] + (s.t[1] - s.v) + extra);
}

// Wire `count` edges among the given nodes in lexicographic pair order,
// skipping pairs involving `avoid`.
inline void wire_pairs(MultiplexNetwork& net, const std::vector<int>& nodes, int layer, int count,
                       int avoid = -1) {
    for (std::size_t a = 0; a < nodes.size() && count > 0; ++a) {
        if (nodes[a] == avoid) continue;
        for (std::size_t b = a + 1; b < nodes.size() && count > 0; ++b) {
            if (nodes[b] == avoid) continue;
            net.add_edge(nodes[a], nodes[b], layer);
            --count;
        }
    }
    if (count > 0) throw std::logic_error("ego state not realizable");
}

}  // namespace detail

/// Minimal deterministic host graph realizing an ego state around node 0.
inline MultiplexNetwork build_witness(const EgoState& s) {
    if (!s.valid()) throw std::invalid_argument("invalid ego state");
    MultiplexNetwork net(detail::witness_size(s), NetworkMode::multiplex);
    const auto w = detail::layout(s);
    for (int l = 0; l < 2; ++l) {
        for (int j : w.nb[l]) net.add_edge(0, j, l);
        detail::wire_pairs(net, w.nb[l], l, s.z[l]);
    }
    return net;
}

struct TransitionWitness {
    MultiplexNetwork net;
    int ego = 0;
    TieRef target;  // the edge to add to / drop from the ego
    bool is_add = false;
};

/// Host graph for a transition's source state in which applying the edge's
/// move to node 0 realizes exactly (dz, dv).
inline TransitionWitness witness_for_transition(const TransitionEdge& e) {
    const EgoState& s = e.from;
    if (!s.valid() || !e.to.valid()) throw std::invalid_argument("invalid transition");
    const int l = e.layer;
    const auto w = detail::layout(s);

    if (e.is_add) {
        // dv = 1 reuses an other-layer-only neighbor as the add target;
        // dv = 0 appends a fresh node. Either way the target is pre-wired to
        // dz of the ego's layer-l neighbors.
        const int base = 1 + s.t[0] + (s.t[1] - s.v);
        int target;
        int size = detail::witness_size(s);
        if (e.dv == 1) {
            std::vector<int> other_only;
            for (int j : w.nb[1 - l])
                if (j > s.v) other_only.push_back(j);
            if (other_only.empty()) throw std::logic_error("spillover add needs an unshared tie");
            target = other_only.front();
        } else {
            target = base;
            size = std::max(2, base + 1);
        }
        MultiplexNetwork net(size, NetworkMode::multiplex);
        for (int ll = 0; ll < 2; ++ll) {
            for (int j : w.nb[ll]) net.add_edge(0, j, ll);
            detail::wire_pairs(net, w.nb[ll], ll, s.z[ll]);
        }
        for (int k = 0; k < e.dz; ++k) net.add_edge(target, w.nb[l][k], l);
        return {std::move(net), 0, {target, l}, true};
    }

    // Drop: the victim is spillover-shared iff dv = 1; it participates in
    // exactly dz of the ego's closed pairs, with the remaining z - dz pairs
    // wired among the other neighbors.
    int victim = -1;
    for (int j : w.nb[l]) {
        const bool shared = j <= s.v;
        if (shared == (e.dv == 1)) {
            victim = j;
            break;
        }
    }
    if (victim < 0) throw std::logic_error("drop witness: no suitable victim");
    MultiplexNetwork net(detail::witness_size(s), NetworkMode::multiplex);
    for (int ll = 0; ll < 2; ++ll)
        for (int j : w.nb[ll]) net.add_edge(0, j, ll);
    detail::wire_pairs(net, w.nb[1 - l], 1 - l, s.z[1 - l]);
    int wired = 0;
    for (int j : w.nb[l]) {
        if (j == victim || wired == e.dz) continue;
        net.add_edge(victim, j, l);
        ++wired;
    }
    if (wired < e.dz) throw std::logic_error("drop witness: dz not realizable");
    detail::wire_pairs(net, w.nb[l], l, s.z[l] - e.dz, victim);
    return {std::move(net), 0, {victim, l}, false};
}

// ---------------------------------------------------------------------------
// Exhaustive stability check
// ---------------------------------------------------------------------------

/// True iff no agent, with full visibility of all other nodes (p = n-1), can
/// realize a strictly improving action under the formation rules: an accepted
/// best addition, an accepted best rewire (reachable only when no addition is
/// worth proposing), or a unilateral drop. Mirrors the turn logic exactly,
/// including the rule that a rejected best-add proposal blocks rewiring.
inline bool brute_force_stability(const MultiplexNetwork& net, const IncentiveParams& params) {
    const int n = net.node_count();
    if (n > 8) throw std::invalid_argument("brute_force_stability is limited to n <= 8");
    for (int i = 0; i < n; ++i) {
        // best-add scan
        double best_add = 0.0;
        std::vector<TieRef> add_max;
        for (int l = 0; l < net.layer_count(); ++l)
            for (int j = 0; j < n; ++j) {
                if (j == i || net.has_edge(i, j, l)) continue;
                const double g = marginal_add(net, params, i, j, l);
                if (add_max.empty() || g > best_add + kGainEps) {
                    best_add = g;
                    add_max.assign(1, {j, l});
                } else if (g >= best_add - kGainEps) {
                    add_max.push_back({j, l});
                }
            }
        const bool add_proposed = !add_max.empty() && best_add > kGainEps;
        if (add_proposed) {
            for (const TieRef& a : add_max)
                if (marginal_add(net, params, a.node, i, a.layer) > kGainEps) return false;
        } else {
            // rewire scan (only reachable when nothing was worth proposing)
            double best_rw = 0.0;
            std::vector<std::pair<TieRef, TieRef>> rw_max;
            for (int lh = 0; lh < net.layer_count(); ++lh)
                for (int h : net.neighbors(i, lh))
                    for (int la = 0; la < net.layer_count(); ++la)
                        for (int j = 0; j < n; ++j) {
                            const TieRef drop{h, lh}, add{j, la};
                            if (j == i || add == drop || net.has_edge(i, j, la)) continue;
                            const double g = marginal_rewire(net, params, i, drop, add);
                            if (rw_max.empty() || g > best_rw + kGainEps) {
                                best_rw = g;
                                rw_max.assign(1, {drop, add});
                            } else if (g >= best_rw - kGainEps) {
                                rw_max.emplace_back(drop, add);
                            }
                        }
            if (!rw_max.empty() && best_rw > kGainEps) {
                for (const auto& [drop, add] : rw_max)
                    if (marginal_add(net, params, add.node, i, add.layer) > kGainEps) return false;
            }
        }
        // drop scan
        for (int l = 0; l < net.layer_count(); ++l)
            for (int h : net.neighbors(i, l))
                if (marginal_drop(net, params, i, h, l) > kGainEps) return false;
    }
    return true;
}

}  // namespace multinet::oracle
