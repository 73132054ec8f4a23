// Command-line front end: single experiments, parameter sweeps, the
// analytical oracle tables, the noise-reversion study, and network export.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "multinet/config.hpp"
#include "multinet/io.hpp"
#include "multinet/oracle.hpp"
#include "multinet/sweep.hpp"

namespace {

using namespace multinet;

// Every override flag funnels through the same key=value parser as --config,
// so defaults, validation and error reporting live in exactly one place.
struct SettingsBuilder {
    std::string config_path;
    std::vector<std::pair<std::string, std::string>> overrides;

    void add_flags(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "key=value config file");
        overrides.reserve(32);  // CLI11 keeps pointers into the vector
        for (const char* key :
             {"n", "p", "nu", "mode", "quiet_rounds", "max_rounds", "seed", "b", "c_low",
              "c_high", "d", "e", "condition", "shocked_layers", "replicates", "paired_seeds",
              "d_grid", "e_grid", "n_grid", "nu_grid", "conditions"}) {
            overrides.emplace_back(key, "");
            auto* slot = &overrides.back().second;
            cmd->add_option(std::string("--") + key, *slot, std::string("config key ") + key);
        }
    }

    Settings build() const {
        std::string text;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw std::runtime_error("cannot open config file: " + config_path);
            std::ostringstream buf;
            buf << in.rdbuf();
            text = buf.str();
            text += '\n';
        }
        for (const auto& [key, value] : overrides)
            if (!value.empty()) text += key + "=" + value + "\n";
        return parse_config(text);
    }
};

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

void export_snapshot(const MultiplexNetwork& net, const std::string& path,
                     const std::string& format) {
    auto out = open_out(path);
    if (format == "edgelist") write_edge_list(out, net);
    else if (format == "dot") write_dot(out, net);
    else throw std::runtime_error("format must be edgelist or dot");
}

int cmd_run(const SettingsBuilder& builder, const std::string& out_path,
            const std::string& events_path, const std::string& export_prefix,
            const std::string& format) {
    const Settings s = builder.build();
    Rng rng(s.sim.seed);

    std::ofstream events;
    std::function<void(const RoundLog&, const MultiplexNetwork&)> observer;
    if (!events_path.empty()) {
        events = open_out(events_path);
        events << kEventsCsvHeader << '\n';
        observer = [&events](const RoundLog& log, const MultiplexNetwork&) {
            if (log.round == 0) events << "# phase start\n";
            write_round_events(events, log);
        };
    }

    const ExperimentResult result = run_condition(s.sim, s.incentives, s.shock, rng, observer);

    std::ostringstream csv;
    csv << kMetricsCsvHeader << '\n';
    write_experiment_rows(csv, result, s.sim.seed);
    if (out_path.empty()) {
        std::cout << csv.str();
    } else {
        open_out(out_path) << csv.str();
    }
    if (!export_prefix.empty()) {
        const std::string ext = format == "dot" ? ".dot" : ".edgelist";
        export_snapshot(result.pre.snapshot, export_prefix + "_pre" + ext, format);
        export_snapshot(result.post.snapshot, export_prefix + "_post" + ext, format);
    }
    if (!result.pre.converged || !result.post.converged)
        std::cerr << "warning: a phase did not converge within max_rounds\n";
    return 0;
}

int cmd_sweep(const SettingsBuilder& builder, const std::string& rows_path,
              const std::string& agg_path) {
    const Settings s = builder.build();
    const SweepResult result = run_sweep(s);
    {
        auto out = open_out(rows_path);
        write_sweep_rows_csv(out, result, s.sim.seed);
    }
    {
        auto out = open_out(agg_path);
        write_sweep_agg_csv(out, result);
    }
    std::cout << "sweep complete: " << result.rows.size() << " replicates, "
              << result.cells.size() << " aggregate rows\n";
    return 0;
}

int cmd_oracle(const std::string& c_low_str, const std::string& c_high_str, int max_t,
               const std::string& ego_path, const std::string& transitions_path) {
    using oracle::Rat;
    const Rat c_low = oracle::rat_from_decimal(c_low_str);
    const Rat c_high = oracle::rat_from_decimal(c_high_str);
    if (!(c_low < c_high)) throw std::runtime_error("c_low must be below c_high");

    const auto th = oracle::spillover_thresholds(c_high);
    std::cout << "cost regime (second tie forms only under low cost): "
              << (oracle::cost_regime_check(c_low, c_high) ? "yes" : "no") << '\n';
    std::cout << "resilience onset threshold d >= "
              << oracle::rat_to_string(oracle::resilience_onset_threshold(c_high)) << '\n';
    std::cout << "spillover partial-resilience onset e > " << oracle::rat_to_string(th.partial)
              << '\n';
    std::cout << "spillover perfect-resilience threshold e >= "
              << oracle::rat_to_string(th.perfect) << '\n';
    std::cout << "HH complete-spillover threshold e > " << oracle::rat_to_string(th.consolidation)
              << '\n';
    std::cout << "random-pairing spillover baseline (n=40): "
              << oracle::rat_to_string(oracle::random_spillover_baseline(40)) << '\n';

    if (!ego_path.empty()) {
        auto out = open_out(ego_path);
        write_ego_table_csv(out, oracle::spillover_ego_table(c_low, c_high, max_t));
    }
    if (!transitions_path.empty()) {
        const auto states = oracle::enumerate_ego_states(max_t, c_low, c_high);
        const auto edges = oracle::favored_transitions(states, 1, c_low, c_high, max_t);
        auto out = open_out(transitions_path);
        write_transition_dot(out, edges);
    }
    return 0;
}

int cmd_noise(const SettingsBuilder& builder, const std::string& nu_list, int replicates,
              double band, const std::string& out_path) {
    const Settings s = builder.build();
    std::vector<double> nus;
    for (const auto& item : multinet::detail::split(nu_list, ','))
        nus.push_back(multinet::detail::parse_real(item));
    const auto points = run_noise_study(s, nus, replicates, band);
    std::ostringstream csv;
    write_noise_csv(csv, points);
    if (out_path.empty()) std::cout << csv.str();
    else open_out(out_path) << csv.str();
    return 0;
}

int cmd_export(const SettingsBuilder& builder, const std::string& prefix,
               const std::string& format) {
    const Settings s = builder.build();
    Rng rng(s.sim.seed);
    const ExperimentResult result = run_condition(s.sim, s.incentives, s.shock, rng);
    const std::string ext = format == "dot" ? ".dot" : ".edgelist";
    export_snapshot(result.pre.snapshot, prefix + "_pre" + ext, format);
    export_snapshot(result.post.snapshot, prefix + "_post" + ext, format);
    std::cout << "wrote " << prefix << "_pre" << ext << " and " << prefix << "_post" << ext
              << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multinet: tie-formation dynamics on single-layer and two-layer networks"};
    app.require_subcommand(1);

    SettingsBuilder run_b, sweep_b, noise_b, export_b;

    auto* run = app.add_subcommand("run", "run one shock experiment");
    run_b.add_flags(run);
    std::string run_out, run_events, run_export, run_format = "edgelist";
    run->add_option("--out", run_out, "metrics CSV (default: stdout)");
    run->add_option("--events", run_events, "per-round event log CSV");
    run->add_option("--export", run_export, "snapshot file prefix");
    run->add_option("--format", run_format, "edgelist or dot")
        ->check(CLI::IsMember({"edgelist", "dot"}));

    auto* sweep = app.add_subcommand("sweep", "run a (d, e, n, nu) x condition grid");
    sweep_b.add_flags(sweep);
    std::string rows_path = "sweep_rows.csv", agg_path = "sweep_agg.csv";
    sweep->add_option("--rows", rows_path, "per-replicate CSV path");
    sweep->add_option("--agg", agg_path, "per-cell aggregate CSV path");

    auto* orac = app.add_subcommand("oracle", "print analytical thresholds and tables");
    std::string o_clow = "0.2", o_chigh = "0.6", ego_path, transitions_path;
    int max_t = 4;
    orac->add_option("--c_low", o_clow, "low tie cost (exact decimal)");
    orac->add_option("--c_high", o_chigh, "high tie cost (exact decimal)");
    orac->add_option("--max_t", max_t, "ego degree bound")->check(CLI::Range(1, 5));
    orac->add_option("--ego-table", ego_path, "write spillover ego-state utility table CSV");
    orac->add_option("--transitions", transitions_path, "write favored-transition DOT graph");

    auto* noise = app.add_subcommand("noise", "post-shock noise reversion study");
    noise_b.add_flags(noise);
    std::string nu_list = "0.001,0.01";
    int noise_reps = 11;
    double band = 0.1;
    std::string noise_out;
    noise->add_option("--nu_list", nu_list, "comma-separated noise levels");
    noise->add_option("--study_replicates", noise_reps, "replicates per noise level");
    noise->add_option("--band", band, "relative reversion band around the HH mean");
    noise->add_option("--out", noise_out, "output CSV (default: stdout)");

    auto* exp = app.add_subcommand("export", "run one experiment and export snapshots");
    export_b.add_flags(exp);
    std::string exp_prefix = "network", exp_format = "edgelist";
    exp->add_option("--prefix", exp_prefix, "output file prefix");
    exp->add_option("--format", exp_format, "edgelist or dot")
        ->check(CLI::IsMember({"edgelist", "dot"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(run_b, run_out, run_events, run_export, run_format);
        if (sweep->parsed()) return cmd_sweep(sweep_b, rows_path, agg_path);
        if (orac->parsed())
            return cmd_oracle(o_clow, o_chigh, max_t, ego_path, transitions_path);
        if (noise->parsed()) return cmd_noise(noise_b, nu_list, noise_reps, band, noise_out);
        if (exp->parsed()) return cmd_export(export_b, exp_prefix, exp_format);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 1;
    }
    return 0;
}
