#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <ostream>

#include "multinet/config.hpp"
#include "multinet/io.hpp"
#include "multinet/metrics.hpp"
#include "multinet/shock.hpp"

namespace multinet {

struct ReplicateRow {
    int cell = 0;
    int n = 0;
    int layers = 2;
    double nu = 0.0, d = 0.0, e = 0.0;
    ShockCondition condition = ShockCondition::LL;
    int replicate = 0;
    std::uint64_t seed = 0;
    MetricsRecord pre, post;
    int pre_rounds = 0, post_rounds = 0;
    bool pre_converged = false, post_converged = false;
};

struct CellStats {
    int cell = 0;
    int n = 0;
    double nu = 0.0, d = 0.0, e = 0.0;
    ShockCondition condition = ShockCondition::LL;
    int replicates = 0;
    // post-phase ensemble statistics
    double mean_degree[2] = {0, 0};
    double sd_degree[2] = {0, 0};
    double mean_clustering[2] = {0, 0};
    double sd_clustering[2] = {0, 0};
    double mean_utility = 0, se_utility = 0;
    double mean_spillover = 0, sd_spillover = 0;
    double converged_frac = 0;
    std::optional<double> resilience_l1;  // vs the cell's LL/HH layer-1 means
    std::optional<double> resilience_l2;
};

struct SweepResult {
    std::vector<ReplicateRow> rows;
    std::vector<CellStats> cells;
};

namespace detail {

struct MeanSd {
    double mean = 0, sd = 0, se = 0;
};

inline MeanSd mean_sd(const std::vector<double>& xs) {
    MeanSd r;
    if (xs.empty()) return r;
    for (double x : xs) r.mean += x;
    r.mean /= static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0;
        for (double x : xs) ss += (x - r.mean) * (x - r.mean);
        r.sd = std::sqrt(ss / (static_cast<double>(xs.size()) - 1.0));
        r.se = r.sd / std::sqrt(static_cast<double>(xs.size()));
    }
    return r;
}

inline double median(std::vector<double> xs) {
    if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(xs.begin(), xs.end());
    const std::size_t m = xs.size() / 2;
    return xs.size() % 2 ? xs[m] : 0.5 * (xs[m - 1] + xs[m]);
}

}  // namespace detail

/// Runs the full grid: every (n, nu, d, e) cell times every condition times
/// `replicates`. With paired seeds, the per-replicate seed ignores the
/// condition, so conditions sharing a pre-shock cost also share their entire
/// phase-1 trajectory replicate by replicate. Per-cell aggregates include the
/// resilience of the shocked conditions against the cell's own LL/HH means.
/// Non-convergence is recorded per replicate; the sweep always completes.
inline SweepResult run_sweep(const Settings& settings) {
    settings.validate();
    const SweepSpec& sw = settings.sweep;
    const std::vector<int> ns = sw.n_values.empty() ? std::vector<int>{settings.sim.n} : sw.n_values;
    const std::vector<double> nus =
        sw.nu_values.empty() ? std::vector<double>{settings.sim.nu} : sw.nu_values;

    SweepResult result;
    int cell = 0;
    for (int n : ns)
        for (double nu : nus)
            for (double d : sw.d_values)
                for (double e : sw.e_values) {
                    for (std::size_t ci = 0; ci < sw.conditions.size(); ++ci) {
                        const ShockCondition cond = sw.conditions[ci];
                        for (int rep = 0; rep < sw.replicates; ++rep) {
                            SimConfig config = settings.sim;
                            config.n = n;
                            config.nu = nu;
                            IncentiveParams inc = settings.incentives;
                            inc.d = d;
                            inc.e = e;
                            ShockSpec shock = settings.shock;
                            shock.condition = cond;
                            const std::uint64_t cond_salt =
                                sw.paired_seeds ? 0 : static_cast<std::uint64_t>(ci) + 1;
                            const std::uint64_t seed = mix_seed(
                                settings.sim.seed, static_cast<std::uint64_t>(cell),
                                static_cast<std::uint64_t>(rep), cond_salt);
                            Rng rng(seed);
                            const ExperimentResult r = run_condition(config, inc, shock, rng);
                            ReplicateRow row;
                            row.cell = cell;
                            row.n = n;
                            row.layers = config.mode == NetworkMode::multiplex ? 2 : 1;
                            row.nu = nu;
                            row.d = d;
                            row.e = e;
                            row.condition = cond;
                            row.replicate = rep;
                            row.seed = seed;
                            row.pre = r.pre.metrics;
                            row.post = r.post.metrics;
                            row.pre_rounds = r.pre.rounds;
                            row.post_rounds = r.post.rounds;
                            row.pre_converged = r.pre.converged;
                            row.post_converged = r.post.converged;
                            result.rows.push_back(row);
                        }
                    }
                    ++cell;
                }

    // aggregate per (cell, condition)
    std::map<std::pair<int, ShockCondition>, std::vector<const ReplicateRow*>> groups;
    for (const auto& row : result.rows) groups[{row.cell, row.condition}].push_back(&row);

    auto control_mean = [&](int c, ShockCondition cond) -> std::optional<double> {
        const auto it = groups.find({c, cond});
        if (it == groups.end()) return std::nullopt;
        double sum = 0;
        for (const auto* r : it->second) sum += r->post.degree[0];
        return sum / static_cast<double>(it->second.size());
    };

    for (const auto& [key, rows] : groups) {
        CellStats stats;
        const ReplicateRow& first = *rows.front();
        stats.cell = first.cell;
        stats.n = first.n;
        stats.nu = first.nu;
        stats.d = first.d;
        stats.e = first.e;
        stats.condition = key.second;
        stats.replicates = static_cast<int>(rows.size());
        std::vector<double> deg[2], clus[2], util, spill;
        int converged = 0;
        for (const auto* r : rows) {
            for (int l = 0; l < 2; ++l) {
                deg[l].push_back(r->post.degree[l]);
                clus[l].push_back(r->post.clustering[l]);
            }
            util.push_back(r->post.utility);
            spill.push_back(r->post.spillover);
            if (r->pre_converged && r->post_converged) ++converged;
        }
        for (int l = 0; l < 2; ++l) {
            const auto dstat = detail::mean_sd(deg[l]);
            stats.mean_degree[l] = dstat.mean;
            stats.sd_degree[l] = dstat.sd;
            const auto cstat = detail::mean_sd(clus[l]);
            stats.mean_clustering[l] = cstat.mean;
            stats.sd_clustering[l] = cstat.sd;
        }
        const auto ustat = detail::mean_sd(util);
        stats.mean_utility = ustat.mean;
        stats.se_utility = ustat.se;
        const auto sstat = detail::mean_sd(spill);
        stats.mean_spillover = sstat.mean;
        stats.sd_spillover = sstat.sd;
        stats.converged_frac = static_cast<double>(converged) / stats.replicates;

        if (key.second == ShockCondition::LH || key.second == ShockCondition::HL) {
            const auto k_ll = control_mean(stats.cell, ShockCondition::LL);
            const auto k_hh = control_mean(stats.cell, ShockCondition::HH);
            if (k_ll && k_hh) {
                stats.resilience_l1 = try_resilience(stats.mean_degree[0], *k_ll, *k_hh);
                stats.resilience_l2 = try_resilience(stats.mean_degree[1], *k_ll, *k_hh);
            }
        }
        result.cells.push_back(stats);
    }
    return result;
}

/// Per-replicate CSV: the fixed metrics schema first, then the cell
/// coordinates (d, e, nu, cell). Rows are emitted in deterministic index
/// order, so identical settings produce byte-identical files.
inline void write_sweep_rows_csv(std::ostream& out, const SweepResult& result,
                                 std::uint64_t base_seed) {
    out << "# per-replicate seed = splitmix64 mix of (base_seed=" << base_seed
        << ", cell, replicate[, condition when unpaired])\n";
    out << kMetricsCsvHeader << ",d,e,nu,cell\n";
    for (const auto& row : result.rows) {
        for (const char* phase : {"pre", "post"}) {
            const bool pre = phase[1] == 'r';
            const MetricsRecord& m = pre ? row.pre : row.post;
            for (int l = 0; l < row.layers; ++l) {
                out << to_string(row.condition) << ',' << row.seed << ',' << phase << ','
                    << (l + 1) << ',' << m.n << ',' << format_double(m.degree[l]) << ','
                    << format_double(m.clustering[l]) << ',' << format_double(m.utility) << ','
                    << format_double(m.spillover) << ',' << (pre ? row.pre_rounds : row.post_rounds)
                    << ',' << ((pre ? row.pre_converged : row.post_converged) ? 1 : 0) << ','
                    << format_double(row.d) << ',' << format_double(row.e) << ','
                    << format_double(row.nu) << ',' << row.cell << '\n';
            }
        }
    }
}

inline void write_sweep_agg_csv(std::ostream& out, const SweepResult& result) {
    out << "cell,n,nu,d,e,condition,replicates,mean_degree_l1,sd_degree_l1,mean_degree_l2,"
           "sd_degree_l2,mean_clustering_l1,sd_clustering_l1,mean_utility,se_utility,"
           "mean_spillover,sd_spillover,converged_frac,resilience_l1,resilience_l2\n";
    for (const auto& c : result.cells) {
        out << c.cell << ',' << c.n << ',' << format_double(c.nu) << ',' << format_double(c.d)
            << ',' << format_double(c.e) << ',' << to_string(c.condition) << ',' << c.replicates
            << ',' << format_double(c.mean_degree[0]) << ',' << format_double(c.sd_degree[0])
            << ',' << format_double(c.mean_degree[1]) << ',' << format_double(c.sd_degree[1])
            << ',' << format_double(c.mean_clustering[0]) << ','
            << format_double(c.sd_clustering[0]) << ',' << format_double(c.mean_utility) << ','
            << format_double(c.se_utility) << ',' << format_double(c.mean_spillover) << ','
            << format_double(c.sd_spillover) << ',' << format_double(c.converged_frac) << ',';
        out << (c.resilience_l1 ? format_double(*c.resilience_l1) : "") << ','
            << (c.resilience_l2 ? format_double(*c.resilience_l2) : "") << '\n';
    }
}

// ---------------------------------------------------------------------------
// Noise reversion study
// ---------------------------------------------------------------------------

struct NoisePoint {
    double nu = 0;
    double median_rounds = 0;  // +inf when the median replicate never reverted
    int censored = 0;
    int replicates = 0;
    std::vector<double> rounds;  // per replicate; +inf = censored
};

/// For each noise level: run LH replicates whose post-shock phase uses noise
/// nu, and record the first post-shock round at which layer-1 average degree
/// enters the band (1 +- band) * k_HH around the HH control mean. Replicates
/// that never enter the band within max_rounds are censored.
inline std::vector<NoisePoint> run_noise_study(const Settings& settings,
                                               const std::vector<double>& nus, int replicates,
                                               double band = 0.1, int control_replicates = 20) {
    Settings base = settings;
    base.shock.condition = ShockCondition::LH;
    base.sim.nu = 0.0;
    base.validate();

    // HH control mean at nu = 0
    double k_hh = 0;
    {
        ShockSpec hh = base.shock;
        hh.condition = ShockCondition::HH;
        for (int rep = 0; rep < control_replicates; ++rep) {
            Rng rng(mix_seed(base.sim.seed, 0xC0117401u, static_cast<std::uint64_t>(rep)));
            k_hh += run_condition(base.sim, base.incentives, hh, rng).post.metrics.degree[0];
        }
        k_hh /= control_replicates;
    }
    const double lo = k_hh * (1.0 - band);
    const double hi = k_hh * (1.0 + band);

    std::vector<NoisePoint> out;
    for (double nu : nus) {
        NoisePoint point;
        point.nu = nu;
        point.replicates = replicates;
        for (int rep = 0; rep < replicates; ++rep) {
            Rng rng(mix_seed(base.sim.seed, 0x401453u, static_cast<std::uint64_t>(rep)));
            // phase 1: noiseless low-cost equilibrium
            IncentiveParams pre = base.incentives;
            pre.c = {base.shock.c_low, base.shock.c_low};
            MultiplexNetwork net(base.sim.n, base.sim.mode);
            run_to_equilibrium(net, pre, base.sim, rng);
            // phase 2: shocked costs with noise; stop at first in-band round
            IncentiveParams post = base.incentives;
            post.c = {base.shock.c_high, base.shock.c_high};
            SimConfig noisy = base.sim;
            noisy.nu = nu;
            double reverted = std::numeric_limits<double>::infinity();
            for (int round = 0; round < noisy.max_rounds; ++round) {
                run_round(net, post, noisy, rng, round);
                const double k = avg_degree(net, 0);
                if (k >= lo && k <= hi) {
                    reverted = round + 1;
                    break;
                }
            }
            if (std::isinf(reverted)) ++point.censored;
            point.rounds.push_back(reverted);
        }
        point.median_rounds = detail::median(point.rounds);
        out.push_back(std::move(point));
    }
    return out;
}

inline void write_noise_csv(std::ostream& out, const std::vector<NoisePoint>& points) {
    out << "nu,median_reversion_rounds,censored,replicates\n";
    for (const auto& p : points)
        out << format_double(p.nu) << ','
            << (std::isinf(p.median_rounds) ? "censored" : format_double(p.median_rounds)) << ','
            << p.censored << ',' << p.replicates << '\n';
}

}  // namespace multinet
