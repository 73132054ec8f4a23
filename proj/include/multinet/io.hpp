#pragma once

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "multinet/metrics.hpp"
#include "multinet/network.hpp"
#include "multinet/oracle.hpp"
#include "multinet/shock.hpp"

namespace multinet {

/// Shortest round-trip decimal representation; keeps CSV output byte-stable.
inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

// ---------------------------------------------------------------------------
// Edge list: one "u v layer" triple per line, nodes 0-indexed, layers 1-based.
// Header comments carry the node count and mode so files round-trip.
// ---------------------------------------------------------------------------

inline void write_edge_list(std::ostream& out, const MultiplexNetwork& net) {
    out << "# nodes " << net.node_count() << '\n';
    out << "# mode " << (net.is_multiplex() ? "multiplex" : "single") << '\n';
    for (int l = 0; l < net.layer_count(); ++l)
        for (int i = 0; i < net.node_count(); ++i)
            for (int j : net.neighbors(i, l))
                if (j > i) out << i << ' ' << j << ' ' << (l + 1) << '\n';
}

inline MultiplexNetwork read_edge_list(std::istream& in) {
    int n = -1;
    NetworkMode mode = NetworkMode::multiplex;
    std::string line;
    std::vector<std::array<int, 3>> edges;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream hs(line.substr(1));
            std::string key;
            hs >> key;
            if (key == "nodes") hs >> n;
            if (key == "mode") {
                std::string m;
                hs >> m;
                mode = m == "single" ? NetworkMode::single_layer : NetworkMode::multiplex;
            }
            continue;
        }
        std::istringstream ls(line);
        int u, v, layer;
        if (!(ls >> u >> v >> layer)) throw std::invalid_argument("malformed edge line: " + line);
        edges.push_back({u, v, layer - 1});
    }
    if (n < 2) throw std::invalid_argument("edge list missing '# nodes' header");
    MultiplexNetwork net(n, mode);
    for (const auto& [u, v, l] : edges) net.add_edge(u, v, l);
    return net;
}

/// Two-layer DOT rendering: layer-1 edges solid, layer-2 dashed, spillover
/// pairs bold in both layers.
inline void write_dot(std::ostream& out, const MultiplexNetwork& net) {
    out << "graph multiplex {\n  node [shape=circle];\n";
    for (int i = 0; i < net.node_count(); ++i) out << "  " << i << ";\n";
    for (int l = 0; l < net.layer_count(); ++l)
        for (int i = 0; i < net.node_count(); ++i)
            for (int j : net.neighbors(i, l)) {
                if (j <= i) continue;
                const bool spill =
                    net.is_multiplex() && net.has_edge(i, j, 0) && net.has_edge(i, j, 1);
                out << "  " << i << " -- " << j << " [";
                out << (l == 0 ? "style=solid" : "style=dashed");
                if (spill) out << ", penwidth=2.5";
                out << "];\n";
            }
    out << "}\n";
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline constexpr const char* kMetricsCsvHeader =
    "condition,seed,phase,layer,n,avg_degree,avg_clustering,mean_utility,spillover_frac,rounds,"
    "converged";

/// One row per (phase, layer) of the fixed metrics schema. Network-level
/// quantities (utility, spillover fraction) are repeated on every layer row.
inline void write_metrics_row(std::ostream& out, ShockCondition condition, std::uint64_t seed,
                              const char* phase, int layer, const MetricsRecord& m, int rounds,
                              bool converged) {
    out << to_string(condition) << ',' << seed << ',' << phase << ',' << (layer + 1) << ',' << m.n
        << ',' << format_double(m.degree[layer]) << ',' << format_double(m.clustering[layer])
        << ',' << format_double(m.utility) << ',' << format_double(m.spillover) << ',' << rounds
        << ',' << (converged ? 1 : 0) << '\n';
}

inline void write_experiment_rows(std::ostream& out, const ExperimentResult& r,
                                  std::uint64_t seed) {
    for (const char* phase : {"pre", "post"}) {
        const PhaseResult& ph = phase[1] == 'r' ? r.pre : r.post;
        for (int l = 0; l < ph.snapshot.layer_count(); ++l)
            write_metrics_row(out, r.shock.condition, seed, phase, l, ph.metrics, ph.rounds,
                              ph.converged);
    }
}

inline constexpr const char* kEventsCsvHeader =
    "round,actor,kind,add_node,add_layer,drop_node,drop_layer";

/// Event-log rows for one round; no-op turns are omitted.
inline void write_round_events(std::ostream& out, const RoundLog& log) {
    for (const Move& m : log.moves) {
        if (m.kind == MoveKind::no_op) continue;
        const char* kind = m.kind == MoveKind::add_tie ? "add"
                           : m.kind == MoveKind::drop_tie ? "drop"
                                                          : "rewire";
        out << log.round << ',' << m.actor << ',' << kind << ',';
        if (m.added) out << m.added->node << ',' << (m.added->layer + 1) << ',';
        else out << ",,";
        if (m.dropped) out << m.dropped->node << ',' << (m.dropped->layer + 1);
        else out << ',';
        out << '\n';
    }
}

// ---------------------------------------------------------------------------
// Oracle exports
// ---------------------------------------------------------------------------

inline void write_ego_table_csv(std::ostream& out, const std::vector<oracle::EgoEntry>& table) {
    out << "t1,t2,z1,z2,v,u_low,u_high\n";
    for (const auto& e : table)
        out << e.state.t[0] << ',' << e.state.t[1] << ',' << e.state.z[0] << ',' << e.state.z[1]
            << ',' << e.state.v << ',' << e.u_low.to_string() << ',' << e.u_high.to_string()
            << '\n';
}

/// Transition graph in DOT form: solid edges are favored for every d,e >= 0
/// at the given cost level, dashed edges are parameter-dependent (condition in
/// the label). Cost level per edge: blue = low, red = high.
inline void write_transition_dot(std::ostream& out,
                                 const std::vector<oracle::TransitionEdge>& edges) {
    auto state_id = [](const oracle::EgoState& s) {
        std::ostringstream id;
        id << "s_" << s.t[0] << '_' << s.z[0] << '_' << s.t[1] << '_' << s.z[1] << '_' << s.v;
        return id.str();
    };
    auto state_label = [](const oracle::EgoState& s) {
        std::ostringstream lb;
        lb << "t=(" << s.t[0] << ',' << s.t[1] << ") z=(" << s.z[0] << ',' << s.z[1] << ") v="
           << s.v;
        return lb.str();
    };
    out << "digraph transitions {\n  node [shape=box];\n";
    std::set<std::string> declared;
    for (const auto& e : edges)
        for (const auto* s : {&e.from, &e.to}) {
            const std::string id = state_id(*s);
            if (declared.insert(id).second)
                out << "  " << id << " [label=\"" << state_label(*s) << "\"];\n";
        }
    for (const auto& e : edges) {
        for (int level = 0; level < 2; ++level) {
            const oracle::AffineDE& g = level == 0 ? e.gain_low : e.gain_high;
            // skip moves that can never be favored at this level
            if (g.kd <= oracle::Rat(0) && g.ke <= oracle::Rat(0) && g.k <= oracle::Rat(0))
                continue;
            const bool always = oracle::TransitionEdge::always_favored(g);
            out << "  " << state_id(e.from) << " -> " << state_id(e.to) << " [color="
                << (level == 0 ? "blue" : "red") << ", style=" << (always ? "solid" : "dashed");
            if (!always) out << ", label=\"" << g.to_string() << " > 0\"";
            out << "];\n";
        }
    }
    out << "}\n";
}

}  // namespace multinet
