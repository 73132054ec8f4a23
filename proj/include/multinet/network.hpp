#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace multinet {

enum class NetworkMode { single_layer, multiplex };

/// Two-layer undirected, unweighted multiplex graph. The sole mutable
/// simulation state. Adjacency is kept both as sorted neighbor lists (for
/// iteration) and as a dense matrix (for O(1) membership tests).
///
/// In single-layer mode layer 1 (index 1) is permanently empty and
/// spillover queries are rejected.
class MultiplexNetwork {
public:
    static constexpr int kLayers = 2;

    MultiplexNetwork(int n, NetworkMode mode)
        : n_(n), mode_(mode) {
        if (n < 2) throw std::invalid_argument("network needs at least 2 nodes");
        for (int l = 0; l < kLayers; ++l) {
            adj_[l].assign(static_cast<std::size_t>(n), {});
            matrix_[l].assign(static_cast<std::size_t>(n) * n, 0);
            edge_count_[l] = 0;
        }
    }

    int node_count() const { return n_; }
    NetworkMode mode() const { return mode_; }
    bool is_multiplex() const { return mode_ == NetworkMode::multiplex; }
    int layer_count() const { return is_multiplex() ? 2 : 1; }

    bool has_edge(int i, int j, int layer) const {
        check_pair(i, j, layer);
        return matrix_[layer][idx(i, j)] != 0;
    }

    void add_edge(int i, int j, int layer) {
        check_pair(i, j, layer);
        if (i == j) throw std::invalid_argument("self-loops are not allowed");
        if (matrix_[layer][idx(i, j)]) throw std::invalid_argument("edge already present");
        matrix_[layer][idx(i, j)] = 1;
        matrix_[layer][idx(j, i)] = 1;
        insert_sorted(adj_[layer][i], j);
        insert_sorted(adj_[layer][j], i);
        ++edge_count_[layer];
    }

    void remove_edge(int i, int j, int layer) {
        check_pair(i, j, layer);
        if (!matrix_[layer][idx(i, j)]) throw std::invalid_argument("edge not present");
        matrix_[layer][idx(i, j)] = 0;
        matrix_[layer][idx(j, i)] = 0;
        erase_sorted(adj_[layer][i], j);
        erase_sorted(adj_[layer][j], i);
        --edge_count_[layer];
    }

    /// t_{i,layer}: number of neighbors of i in one layer.
    int degree(int i, int layer) const {
        check_node(i);
        check_layer(layer);
        return static_cast<int>(adj_[layer][i].size());
    }

    const std::vector<int>& neighbors(int i, int layer) const {
        check_node(i);
        check_layer(layer);
        return adj_[layer][i];
    }

    /// z_{i,layer}: closed triangles through i, counted strictly within one layer.
    int triangle_count(int i, int layer) const {
        const auto& nb = neighbors(i, layer);
        int z = 0;
        for (std::size_t a = 0; a < nb.size(); ++a)
            for (std::size_t b = a + 1; b < nb.size(); ++b)
                if (matrix_[layer][idx(nb[a], nb[b])]) ++z;
        return z;
    }

    /// v_i: number of nodes tied to i in both layers. Multiplex mode only.
    int spillover_count(int i) const {
        check_node(i);
        if (!is_multiplex())
            throw std::logic_error("spillover is undefined in single-layer mode");
        int v = 0;
        // scan the smaller endpoint list
        const auto& a = adj_[0][i].size() <= adj_[1][i].size() ? adj_[0][i] : adj_[1][i];
        const int other = adj_[0][i].size() <= adj_[1][i].size() ? 1 : 0;
        for (int j : a)
            if (matrix_[other][idx(i, j)]) ++v;
        return v;
    }

    int edge_count(int layer) const {
        check_layer(layer);
        return edge_count_[layer];
    }

    /// Number of node pairs tied in both layers.
    int spillover_pair_count() const {
        if (!is_multiplex())
            throw std::logic_error("spillover is undefined in single-layer mode");
        int pairs = 0;
        for (int i = 0; i < n_; ++i)
            for (int j : adj_[0][i])
                if (j > i && matrix_[1][idx(i, j)]) ++pairs;
        return pairs;
    }

    bool operator==(const MultiplexNetwork& other) const {
        return n_ == other.n_ && mode_ == other.mode_ && adj_[0] == other.adj_[0] &&
               adj_[1] == other.adj_[1];
    }

private:
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * n_ + j; }

    void check_node(int i) const {
        if (i < 0 || i >= n_) throw std::out_of_range("node id out of range");
    }
    void check_layer(int layer) const {
        if (layer < 0 || layer >= layer_count())
            throw std::out_of_range("layer out of range for this mode");
    }
    void check_pair(int i, int j, int layer) const {
        check_node(i);
        check_node(j);
        check_layer(layer);
    }

    static void insert_sorted(std::vector<int>& v, int x) {
        v.insert(std::lower_bound(v.begin(), v.end(), x), x);
    }
    static void erase_sorted(std::vector<int>& v, int x) {
        v.erase(std::lower_bound(v.begin(), v.end(), x));
    }

    int n_;
    NetworkMode mode_;
    std::vector<std::vector<int>> adj_[kLayers];
    std::vector<std::uint8_t> matrix_[kLayers];
    int edge_count_[kLayers];
};

/// One endpoint of an agent action: the peer node and the layer of the tie.
struct TieRef {
    int node = -1;
    int layer = -1;
    bool operator==(const TieRef&) const = default;
};

enum class MoveKind { add_tie, drop_tie, rewire, no_op };

/// The realized outcome of one agent turn. A rewire (and a turn that adds in
/// the proposal stage and drops in the drop stage) carries both endpoints.
struct Move {
    MoveKind kind = MoveKind::no_op;
    int actor = -1;
    std::optional<TieRef> added;
    std::optional<TieRef> dropped;

    static Move noop(int actor) { return {MoveKind::no_op, actor, {}, {}}; }
    static Move add(int actor, TieRef t) { return {MoveKind::add_tie, actor, t, {}}; }
    static Move drop(int actor, TieRef t) { return {MoveKind::drop_tie, actor, {}, t}; }
    static Move rewire(int actor, TieRef added, TieRef dropped) {
        return {MoveKind::rewire, actor, added, dropped};
    }
};

/// Applies a move to the network. The only mutator used by the dynamics.
/// For a rewire the add is applied before the drop; the final state is
/// order-independent. An illegal move indicates a simulation bug and throws.
inline void apply_move(MultiplexNetwork& net, const Move& move) {
    const bool want_add = move.kind == MoveKind::add_tie || move.kind == MoveKind::rewire;
    const bool want_drop = move.kind == MoveKind::drop_tie || move.kind == MoveKind::rewire;
    if (want_add != move.added.has_value() || want_drop != move.dropped.has_value())
        throw std::logic_error("malformed move");
    if (move.added) net.add_edge(move.actor, move.added->node, move.added->layer);
    if (move.dropped) net.remove_edge(move.actor, move.dropped->node, move.dropped->layer);
}

}  // namespace multinet
