#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "multinet/network.hpp"
#include "multinet/utility.hpp"

namespace multinet {

/// Per-layer mean degree, 2|E_l| / n.
inline double avg_degree(const MultiplexNetwork& net, int layer) {
    return 2.0 * net.edge_count(layer) / net.node_count();
}

/// Mean local clustering coefficient: closed neighbor pairs over C(t,2),
/// with nodes of degree < 2 contributing 0.
inline double avg_clustering(const MultiplexNetwork& net, int layer) {
    double total = 0.0;
    for (int i = 0; i < net.node_count(); ++i) {
        const int t = net.degree(i, layer);
        if (t < 2) continue;
        total += 2.0 * net.triangle_count(i, layer) / (static_cast<double>(t) * (t - 1));
    }
    return total / net.node_count();
}

/// 2 * (pairs tied in both layers) / (|E1| + |E2|); 0 when both layers are empty.
inline double spillover_fraction(const MultiplexNetwork& net) {
    const int total = net.edge_count(0) + net.edge_count(1);
    if (total == 0) return 0.0;
    return 2.0 * net.spillover_pair_count() / total;
}

inline double mean_utility(const MultiplexNetwork& net, const IncentiveParams& params) {
    double total = 0.0;
    for (int i = 0; i < net.node_count(); ++i) total += utility(net, params, i);
    return total / net.node_count();
}

/// Normalized post-shock degree retention, (k_s - k_HH) / (k_LL - k_HH),
/// computed from ensemble means of the matched control conditions.
/// Undefined (throws) when the controls coincide.
inline double resilience(double k_s, double k_ll, double k_hh) {
    if (std::fabs(k_ll - k_hh) < 1e-9)
        throw std::domain_error("resilience undefined: LL and HH control means coincide");
    return (k_s - k_hh) / (k_ll - k_hh);
}

inline std::optional<double> try_resilience(double k_s, double k_ll, double k_hh) {
    if (std::fabs(k_ll - k_hh) < 1e-9) return std::nullopt;
    return (k_s - k_hh) / (k_ll - k_hh);
}

/// Snapshot of the observables tracked per round / at equilibrium.
struct MetricsRecord {
    int n = 0;
    int round = 0;
    std::array<double, 2> degree{0.0, 0.0};
    std::array<double, 2> clustering{0.0, 0.0};
    double utility = 0.0;
    double spillover = 0.0;  // 0 in single-layer mode

    static MetricsRecord compute(const MultiplexNetwork& net, const IncentiveParams& params,
                                 int round = 0) {
        MetricsRecord r;
        r.n = net.node_count();
        r.round = round;
        for (int l = 0; l < net.layer_count(); ++l) {
            r.degree[l] = avg_degree(net, l);
            r.clustering[l] = avg_clustering(net, l);
        }
        r.utility = mean_utility(net, params);
        r.spillover = net.is_multiplex() ? spillover_fraction(net) : 0.0;
        return r;
    }
};

}  // namespace multinet
