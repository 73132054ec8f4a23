#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "multinet/dynamics.hpp"
#include "test_helpers.hpp"

using namespace multinet;

TEST_CASE("sample_candidates draws distinct non-self nodes") {
    Rng rng(1);
    SECTION("n=2 always yields the other node") {
        for (int rep = 0; rep < 10; ++rep) {
            const auto s = sample_candidates(rng, 2, 0, 10);
            REQUIRE(s == std::vector<int>{1});
        }
    }
    SECTION("n=40, p=10 yields 10 distinct non-self nodes") {
        for (int rep = 0; rep < 50; ++rep) {
            const auto s = sample_candidates(rng, 40, 7, 10);
            REQUIRE(s.size() == 10);
            const std::set<int> uniq(s.begin(), s.end());
            REQUIRE(uniq.size() == 10);
            REQUIRE(uniq.count(7) == 0);
            for (int x : s) REQUIRE((x >= 0 && x < 40));
        }
    }
    SECTION("fixed seed reproduces the sample sequence") {
        Rng a(42), b(42);
        for (int rep = 0; rep < 20; ++rep)
            REQUIRE(sample_candidates(a, 40, 0, 10) == sample_candidates(b, 40, 0, 10));
    }
    SECTION("every non-self node is eventually sampled") {
        std::set<int> seen;
        for (int rep = 0; rep < 200; ++rep) {
            const auto s = sample_candidates(rng, 12, 3, 4);
            seen.insert(s.begin(), s.end());
        }
        REQUIRE(seen.size() == 11);
    }
}

TEST_CASE("noisy_override matches its probability") {
    Rng rng(7);
    SECTION("nu = 0 never overrides") {
        for (int i = 0; i < 1000; ++i)
            REQUIRE_FALSE(noisy_override(rng, 0.0, NoiseStage::add_choice));
    }
    SECTION("nu = 1 always overrides") {
        for (int i = 0; i < 1000; ++i)
            REQUIRE(noisy_override(rng, 1.0, NoiseStage::acceptance));
    }
    SECTION("nu = 0.01 fires at the binomial rate") {
        int fired = 0;
        const int draws = 10000;
        for (int i = 0; i < draws; ++i)
            if (noisy_override(rng, 0.01, NoiseStage::drop_choice)) ++fired;
        const double frac = static_cast<double>(fired) / draws;
        CHECK(frac == Catch::Approx(0.01).margin(0.003));
    }
}

TEST_CASE("first mover on an empty cheap network adds one tie") {
    MultiplexNetwork net(6, NetworkMode::multiplex);
    const auto p = IncentiveParams::uniform_cost(0.2);
    SimConfig config;
    config.n = 6;
    Rng rng(3);
    const Move m = agent_turn(net, p, config, rng, 0);
    REQUIRE(m.kind == MoveKind::add_tie);
    REQUIRE(net.has_edge(0, m.added->node, m.added->layer));
    REQUIRE(net.edge_count(0) + net.edge_count(1) == 1);
}

TEST_CASE("saturated expensive pairs are a fixed point") {
    // disjoint pairs at c = 0.6: adds cost 0.8, drops cost 0.4, so no move
    MultiplexNetwork net(6, NetworkMode::multiplex);
    for (int l = 0; l < 2; ++l)
        for (int i = 0; i < 6; i += 2) net.add_edge(i, i + 1, l);
    const auto p = IncentiveParams::uniform_cost(0.6);
    SimConfig config;
    config.n = 6;
    Rng rng(9);
    const MultiplexNetwork before = net;
    for (int i = 0; i < 6; ++i) {
        const Move m = agent_turn(net, p, config, rng, i);
        REQUIRE(m.kind == MoveKind::no_op);
    }
    REQUIRE(net == before);

    const EquilibriumResult eq = run_to_equilibrium(net, p, config, rng);
    REQUIRE(eq.converged);
    REQUIRE(eq.rounds_used == config.quiet_rounds);
    REQUIRE(net == before);
}

TEST_CASE("unprofitable first tie converges on an empty network immediately") {
    MultiplexNetwork net(10, NetworkMode::multiplex);
    const auto p = IncentiveParams::uniform_cost(1.0);
    SimConfig config;
    config.n = 10;
    Rng rng(11);
    const EquilibriumResult eq = run_to_equilibrium(net, p, config, rng);
    REQUIRE(eq.converged);
    REQUIRE(eq.rounds_used == config.quiet_rounds);
    REQUIRE(net.edge_count(0) + net.edge_count(1) == 0);
}

TEST_CASE("spillover consolidation: direct add fires, then the stale tie drops") {
    // A(0) tied to B(1) in layer 2 and to C(2) in layer 1, c = 0.6, e = 1.0.
    // The direct add (B, layer 1) gains 1 - 1.8 + 1.0 = 0.2 and preempts the
    // rewire; the drop scan then sheds C for +0.8.
    MultiplexNetwork net(3, NetworkMode::multiplex);
    net.add_edge(0, 1, 1);
    net.add_edge(0, 2, 0);
    const auto p = IncentiveParams::uniform_cost(0.6, 0.0, 1.0);
    SimConfig config;
    config.n = 3;
    config.p = 2;  // full visibility
    Rng rng(5);
    const Move m = agent_turn(net, p, config, rng, 0);
    REQUIRE(m.kind == MoveKind::rewire);
    // the symmetric add (C, layer 2) ties at +0.2; either way the agent ends
    // with exactly one spillover pair and sheds the stale single-layer tie
    const bool onto_b = *m.added == TieRef{1, 0} && *m.dropped == TieRef{2, 0};
    const bool onto_c = *m.added == TieRef{2, 1} && *m.dropped == TieRef{1, 1};
    REQUIRE((onto_b || onto_c));
    REQUIRE(net.spillover_count(0) == 1);
    REQUIRE(net.degree(0, 0) + net.degree(0, 1) == 2);
}

TEST_CASE("rewire fires when no plain add is worth proposing") {
    // Same geometry but e = 0.6: the direct add loses (1 - 1.8 + 0.6 = -0.2)
    // while the degree-neutral rewire gains +e via the spillover.
    MultiplexNetwork net(3, NetworkMode::multiplex);
    net.add_edge(0, 1, 1);
    net.add_edge(0, 2, 0);
    const auto p = IncentiveParams::uniform_cost(0.6, 0.0, 0.6);
    SimConfig config;
    config.n = 3;
    config.p = 2;
    Rng rng(5);
    const Move m = agent_turn(net, p, config, rng, 0);
    REQUIRE(m.kind == MoveKind::rewire);
    // two symmetric rewires tie; either consolidates onto one partner
    const bool onto_b = *m.added == TieRef{1, 0} && *m.dropped == TieRef{2, 0};
    const bool onto_c = *m.added == TieRef{2, 1} && *m.dropped == TieRef{1, 1};
    REQUIRE((onto_b || onto_c));
    REQUIRE(net.spillover_pair_count() == 1);
}

TEST_CASE("proposals the acceptor declines leave the network unchanged") {
    // 0 is isolated and wants a tie; 1 and 2 are saturated in both layers at
    // c = 0.6 and decline. The rejected proposal is counted, nothing changes.
    MultiplexNetwork net(3, NetworkMode::multiplex);
    net.add_edge(1, 2, 0);
    net.add_edge(1, 2, 1);
    const auto p = IncentiveParams::uniform_cost(0.6);
    SimConfig config;
    config.n = 3;
    config.p = 2;
    Rng rng(2);
    const MultiplexNetwork before = net;
    RoundLog log = run_round(net, p, config, rng);
    REQUIRE(net == before);
    REQUIRE(log.adds == 0);
    REQUIRE(log.drops == 0);
    REQUIRE(log.rejected >= 1);  // at least node 0's proposal was declined
}

TEST_CASE("nu = 0 runs are bitwise deterministic") {
    const auto p = IncentiveParams::uniform_cost(0.2, 0.4, 0.4);
    SimConfig config;
    config.n = 20;
    config.seed = 77;
    MultiplexNetwork a(config.n, config.mode), b(config.n, config.mode);
    Rng ra(config.seed), rb(config.seed);
    std::vector<RoundLog> logs_a, logs_b;
    const auto grab_a = [&](const RoundLog& log, const MultiplexNetwork&) {
        logs_a.push_back(log);
    };
    const auto grab_b = [&](const RoundLog& log, const MultiplexNetwork&) {
        logs_b.push_back(log);
    };
    const EquilibriumResult ea = run_to_equilibrium(a, p, config, ra, grab_a);
    const EquilibriumResult eb = run_to_equilibrium(b, p, config, rb, grab_b);
    REQUIRE(ea.rounds_used == eb.rounds_used);
    REQUIRE(ea.converged == eb.converged);
    REQUIRE(a == b);
    REQUIRE(logs_a.size() == logs_b.size());
    for (std::size_t r = 0; r < logs_a.size(); ++r) {
        REQUIRE(logs_a[r].adds == logs_b[r].adds);
        REQUIRE(logs_a[r].drops == logs_b[r].drops);
        REQUIRE(logs_a[r].moves.size() == logs_b[r].moves.size());
        for (std::size_t k = 0; k < logs_a[r].moves.size(); ++k) {
            const Move &ma = logs_a[r].moves[k], &mb = logs_b[r].moves[k];
            REQUIRE(ma.kind == mb.kind);
            REQUIRE(ma.actor == mb.actor);
            REQUIRE(ma.added == mb.added);
            REQUIRE(ma.dropped == mb.dropped);
        }
    }
}

TEST_CASE("logged moves satisfy the decision-rule invariants") {
    // Replay the move stream on a shadow network, checking each move's
    // marginals at the exact state in which it was taken.
    const auto p = IncentiveParams::uniform_cost(0.2, 0.8, 0.8);
    SimConfig config;
    config.n = 20;
    config.seed = 123;
    MultiplexNetwork net(config.n, config.mode);
    MultiplexNetwork shadow(config.n, config.mode);
    Rng rng(config.seed);
    int checked = 0;
    const auto verify = [&](const RoundLog& log, const MultiplexNetwork& after) {
        int adds = 0, drops = 0;
        for (const Move& m : log.moves) {
            switch (m.kind) {
                case MoveKind::no_op:
                    break;
                case MoveKind::add_tie: {
                    ++adds;
                    REQUIRE(marginal_add(shadow, p, m.actor, m.added->node, m.added->layer) >
                            kGainEps);
                    REQUIRE(marginal_add(shadow, p, m.added->node, m.actor, m.added->layer) >
                            kGainEps);
                    break;
                }
                case MoveKind::drop_tie: {
                    ++drops;
                    REQUIRE(marginal_drop(shadow, p, m.actor, m.dropped->node,
                                          m.dropped->layer) > kGainEps);
                    break;
                }
                case MoveKind::rewire: {
                    ++adds;
                    ++drops;
                    // acceptor judged the add leg against the pre-drop network
                    REQUIRE(marginal_add(shadow, p, m.added->node, m.actor, m.added->layer) >
                            kGainEps);
                    // either an atomic rewire (net gain > 0) or an add followed
                    // by an independently profitable drop
                    const double net_gain =
                        marginal_rewire(shadow, p, m.actor, *m.dropped, *m.added);
                    bool ok = net_gain > kGainEps;
                    if (!ok) {
                        MultiplexNetwork mid = shadow;
                        mid.add_edge(m.actor, m.added->node, m.added->layer);
                        ok = marginal_add(shadow, p, m.actor, m.added->node, m.added->layer) >
                                 kGainEps &&
                             marginal_drop(mid, p, m.actor, m.dropped->node,
                                           m.dropped->layer) > kGainEps;
                    }
                    REQUIRE(ok);
                    break;
                }
            }
            apply_move(shadow, m);
            ++checked;
        }
        REQUIRE(adds == log.adds);
        REQUIRE(drops == log.drops);
        REQUIRE(shadow == after);
    };
    run_to_equilibrium(net, p, config, rng, verify);
    REQUIRE(checked > 0);
    REQUIRE(shadow == net);
}

TEST_CASE("noisy runs last exactly max_rounds and never converge") {
    const auto p = IncentiveParams::uniform_cost(0.6);
    SimConfig config;
    config.n = 10;
    config.nu = 0.01;
    config.max_rounds = 60;
    MultiplexNetwork net(config.n, config.mode);
    Rng rng(17);
    const EquilibriumResult eq = run_to_equilibrium(net, p, config, rng);
    REQUIRE_FALSE(eq.converged);
    REQUIRE(eq.rounds_used == 60);
}

TEST_CASE("a converged nu = 0 network stays fixed under further rounds") {
    const auto p = IncentiveParams::uniform_cost(0.6, 0.4, 0.4);
    SimConfig config;
    config.n = 16;
    config.seed = 31;
    // the quiet-round criterion is a proxy for a fixed point: a short window
    // can expire while an acceptable move is still reachable through an
    // unlucky tie-break; a longer window makes the declared equilibrium real
    config.quiet_rounds = 25;
    MultiplexNetwork net(config.n, config.mode);
    Rng rng(config.seed);
    const EquilibriumResult eq = run_to_equilibrium(net, p, config, rng);
    REQUIRE(eq.converged);
    const MultiplexNetwork frozen = net;
    for (int round = 0; round < 10; ++round) {
        const RoundLog log = run_round(net, p, config, rng, round);
        REQUIRE(log.quiet());
    }
    REQUIRE(net == frozen);
}

TEST_CASE("expensive ties settle at degree one") {
    const auto p = IncentiveParams::uniform_cost(0.6);
    SimConfig config;
    config.n = 40;
    config.quiet_rounds = 10;  // let straggler pairs find each other
    for (std::uint64_t seed : {101u, 202u, 303u}) {
        config.seed = seed;
        MultiplexNetwork net(config.n, config.mode);
        Rng rng(seed);
        const EquilibriumResult eq = run_to_equilibrium(net, p, config, rng);
        REQUIRE(eq.converged);
        for (int l = 0; l < 2; ++l)
            for (int i = 0; i < config.n; ++i) REQUIRE(net.degree(i, l) <= 1);
        // near-perfect matching: at most a couple of stragglers per layer
        REQUIRE(net.edge_count(0) >= 18);
        REQUIRE(net.edge_count(1) >= 18);
    }
}

TEST_CASE("config validation rejects out-of-range fields") {
    SimConfig config;
    config.n = 1;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config.n = 10;
    config.p = 0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config.p = 10;
    config.nu = 1.5;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config.nu = 0.0;
    config.quiet_rounds = 0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config.quiet_rounds = 5;
    config.max_rounds = 0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
}
