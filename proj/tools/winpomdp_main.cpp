#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "winpomdp/belief.hpp"
#include "winpomdp/errors.hpp"
#include "winpomdp/estimation.hpp"
#include "winpomdp/experiment.hpp"
#include "winpomdp/io.hpp"
#include "winpomdp/planning.hpp"
#include "winpomdp/pomdp.hpp"
#include "winpomdp/rng.hpp"
#include "winpomdp/sample_size.hpp"
#include "winpomdp/superstate.hpp"
#include "winpomdp/trajectory.hpp"

namespace {

using namespace winpomdp;
using nlohmann::json;

// computation errors map to distinct exit codes; 2 is CLI11's usage error
constexpr int kExitValidation = 3;
constexpr int kExitParameter = 4;
constexpr int kExitFiltering = 5;
constexpr int kExitCapacity = 6;
constexpr int kExitNumeric = 7;
constexpr int kExitIo = 8;
constexpr int kExitOther = 9;

struct CommonOpts {
    std::string pomdp = "probe";
    int m = 1;
    std::int64_t t = 10'000;
    int k = 50;
    double gamma = -1.0; // < 0: use the environment's discount
    std::uint64_t seed = 0;
    int runs = 10;
    double eps = 0.1;
    double delta = 0.05;
    std::string out;
    std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--pomdp", opts.pomdp, "built-in name (probe) or interchange JSON path");
    cmd->add_option("--m", opts.m, "window length");
    cmd->add_option("--T", opts.t, "trajectory length");
    cmd->add_option("--K", opts.k, "value-iteration steps");
    cmd->add_option("--gamma", opts.gamma, "discount (defaults to the environment's)");
    cmd->add_option("--seed", opts.seed, "master seed");
    cmd->add_option("--runs", opts.runs, "runs per cell / episodes");
    cmd->add_option("--eps", opts.eps, "target accuracy for the sample-size bound");
    cmd->add_option("--delta", opts.delta, "failure probability for the sample-size bound");
    cmd->add_option("--out", opts.out, "output path (default stdout)");
    cmd->add_option("--format", opts.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
}

std::ostream& open_out(const CommonOpts& opts, std::ofstream& file) {
    if (opts.out.empty()) return std::cout;
    file.open(opts.out, std::ios::binary);
    if (!file) throw IoError("cannot open " + opts.out + " for writing");
    return file;
}

double effective_gamma(const CommonOpts& opts, const TabularPomdp& pomdp) {
    return opts.gamma > 0.0 ? opts.gamma : pomdp.discount;
}

int cmd_validate(const CommonOpts& opts) {
    const TabularPomdp pomdp = resolve_pomdp(opts.pomdp);
    const StabilityReport rep = validate(pomdp);
    if (opts.format == "json") {
        json j;
        j["alpha"] = rep.alpha;
        j["beta"] = rep.beta;
        j["rho"] = rep.rho;
        j["assumption1_ok"] = rep.assumption1_ok;
        j["assumption2_ok"] = rep.assumption2_ok;
        std::cout << j.dump() << '\n';
    } else {
        std::cout << "alpha=" << format_double(rep.alpha) << " beta=" << format_double(rep.beta)
                  << " rho=" << format_double(rep.rho)
                  << " assumption1_ok=" << (rep.assumption1_ok ? "true" : "false")
                  << " assumption2_ok=" << (rep.assumption2_ok ? "true" : "false") << '\n';
    }
    return 0;
}

int cmd_exact(const CommonOpts& opts) {
    const TabularPomdp pomdp = resolve_pomdp(opts.pomdp);
    const SuperstateModel model = build_exact(pomdp, opts.m);
    std::ofstream file;
    dump_model_csv(model, open_out(opts, file));
    return 0;
}

int cmd_estimate(const CommonOpts& opts, const std::string& model_out) {
    const TabularPomdp pomdp = resolve_pomdp(opts.pomdp);
    validate(pomdp);
    if (opts.t > static_cast<std::int64_t>(std::numeric_limits<int>::max()))
        throw CapacityError("estimate: T too large");
    const Trajectory traj =
        sample_trajectory(pomdp, PolicySpec::uniform(), static_cast<int>(opts.t), opts.seed);
    auto idx = std::make_shared<const WindowIndex>(
        WindowIndex::build(pomdp.n_actions, pomdp.n_obs, opts.m));
    const CountsModel counts = count_windows(traj, idx);
    std::ofstream file;
    dump_counts_csv(counts, open_out(opts, file));
    if (!model_out.empty()) {
        std::ofstream mf(model_out, std::ios::binary);
        if (!mf) throw IoError("cannot open " + model_out + " for writing");
        dump_model_csv(to_model(counts), mf);
    }
    return 0;
}

int cmd_plan(const CommonOpts& opts, const std::string& q_out) {
    const TabularPomdp pomdp = resolve_pomdp(opts.pomdp);
    const double gamma = effective_gamma(opts, pomdp);
    const SuperstateModel model = build_exact(pomdp, opts.m);
    const QTable q = value_iteration(model, gamma, opts.k, zero_q(model.idx));
    const WindowPolicy policy = greedy(q);
    std::ofstream file;
    dump_policy_csv(policy, open_out(opts, file));
    if (!q_out.empty()) {
        std::ofstream qf(q_out, std::ios::binary);
        if (!qf) throw IoError("cannot open " + q_out + " for writing");
        dump_q_csv(q, qf);
    }
    return 0;
}

int cmd_evaluate(const CommonOpts& opts) {
    const TabularPomdp pomdp = resolve_pomdp(opts.pomdp);
    const double gamma = effective_gamma(opts, pomdp);
    const SuperstateModel model = build_exact(pomdp, opts.m);
    const auto [v_star, policy] = optimal_superstate_value(model, gamma, 1e-9);
    const double v_pomdp = pomdp_policy_value(pomdp, policy, gamma);
    const int episodes = std::max(2, opts.runs);
    const McEstimate mc = monte_carlo_policy_value(pomdp, policy, gamma, episodes, opts.seed);
    if (opts.format == "json") {
        json j;
        j["m"] = opts.m;
        j["gamma"] = gamma;
        j["v_m_star"] = v_star;
        j["v_pomdp"] = v_pomdp;
        j["mc_mean"] = mc.mean;
        j["mc_std_error"] = mc.std_error;
        j["mc_episodes"] = mc.episodes;
        j["mc_horizon"] = mc.horizon;
        std::cout << j.dump() << '\n';
    } else {
        std::cout << "v_m_star=" << format_double(v_star)
                  << " v_pomdp=" << format_double(v_pomdp) << " mc_mean=" << format_double(mc.mean)
                  << " mc_std_error=" << format_double(mc.std_error)
                  << " mc_episodes=" << mc.episodes << " mc_horizon=" << mc.horizon << '\n';
    }
    return 0;
}

int cmd_audit(const CommonOpts& opts, int pairs, int max_len, int histories) {
    const TabularPomdp pomdp = resolve_pomdp(opts.pomdp);
    const ContractionAudit audit = contraction_audit(pomdp, pairs, max_len, opts.seed);

    // lemma-1 batch over random histories of length m+5
    const StabilityReport rep = validate(pomdp);
    Rng rng(Rng::derive(opts.seed, {0x6c656d6d6131ull}));
    double max_gap = 0.0;
    bool gaps_pass = true;
    for (int i = 0; i < histories; ++i) {
        Window h(static_cast<std::size_t>(opts.m + 5));
        for (AoPair& p : h)
            p = {static_cast<std::int32_t>(rng.next_int(pomdp.n_actions)),
                 static_cast<std::int32_t>(rng.next_int(pomdp.n_obs))};
        const Lemma1Gap gap = lemma1_gap(pomdp, opts.m, h, opts.m);
        max_gap = std::max(max_gap, gap.gap);
        gaps_pass = gaps_pass && gap.pass;
    }

    json j;
    j["contraction"] = json::parse(to_json(audit));
    j["lemma1"] = {{"m", opts.m},
                   {"histories", histories},
                   {"max_gap", max_gap},
                   {"bound", std::pow(1.0 - rep.rho, opts.m)},
                   {"pass", gaps_pass}};
    std::ofstream file;
    open_out(opts, file) << j.dump(2) << '\n';
    return (audit.pass && gaps_pass) ? 0 : kExitNumeric;
}

int cmd_bound(const CommonOpts& opts) {
    const TabularPomdp pomdp = resolve_pomdp(opts.pomdp);
    const StabilityReport rep = validate(pomdp);
    const double gamma = effective_gamma(opts, pomdp);
    const SampleSizeBounds bounds =
        theoretical_sample_size(opts.eps, opts.delta, opts.m, pomdp.n_states, pomdp.n_actions,
                                pomdp.n_obs, rep.alpha, rep.beta, gamma);
    if (opts.format == "json") {
        json j;
        j["T_bound"] = bounds.t_bound;
        j["K_bound"] = bounds.k_bound;
        j["t_overflow"] = bounds.t_overflow;
        j["alpha"] = rep.alpha;
        j["beta"] = rep.beta;
        std::cout << j.dump() << '\n';
    } else {
        std::cout << "T_bound=" << bounds.t_bound << (bounds.t_overflow ? " (saturated)" : "")
                  << " K_bound=" << bounds.k_bound << '\n';
    }
    return 0;
}

int cmd_experiment(ExperimentConfig config) {
    const TabularPomdp pomdp = resolve_pomdp(config.pomdp_source);
    const StabilityReport rep = validate(pomdp);
    for (int m : config.m_list) {
        const SampleSizeBounds b =
            theoretical_sample_size(config.eps, config.delta, m, pomdp.n_states, pomdp.n_actions,
                                    pomdp.n_obs, rep.alpha, rep.beta, config.gamma);
        std::cout << "m=" << m << ": guarantee needs T >= " << b.t_bound
                  << (b.t_overflow ? " (saturated)" : "") << ", K >= " << b.k_bound
                  << " at eps=" << format_double(config.eps)
                  << " delta=" << format_double(config.delta) << '\n';
    }
    figure1_sweep(pomdp, config);
    std::cout << "wrote " << config.out_dir << "/results.csv";
    if (config.render_svg) std::cout << " and " << config.out_dir << "/results.svg";
    std::cout << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-window policy learning laboratory for tabular POMDPs"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string q_out;
    int pairs = 200, max_len = 8, histories = 100;
    ExperimentConfig config;

    CLI::App* validate_cmd = app.add_subcommand("validate", "kernel minima and stability report");
    add_common(validate_cmd, opts);
    CLI::App* exact_cmd = app.add_subcommand("exact", "build and dump the exact superstate model");
    add_common(exact_cmd, opts);
    std::string model_out;
    CLI::App* estimate_cmd =
        app.add_subcommand("estimate", "sample a trajectory and dump window counts");
    add_common(estimate_cmd, opts);
    estimate_cmd->add_option("--model-out", model_out,
                             "also dump the estimated model to this path");
    CLI::App* plan_cmd = app.add_subcommand("plan", "value iteration and greedy policy dump");
    add_common(plan_cmd, opts);
    plan_cmd->add_option("--q-out", q_out, "also dump the Q table to this path");
    CLI::App* evaluate_cmd =
        app.add_subcommand("evaluate", "exact and Monte-Carlo value of the planned policy");
    add_common(evaluate_cmd, opts);
    CLI::App* audit_cmd =
        app.add_subcommand("audit", "filter-stability contraction audit and window-gap batch");
    add_common(audit_cmd, opts);
    audit_cmd->add_option("--pairs", pairs, "history pairs for the contraction audit");
    audit_cmd->add_option("--max-len", max_len, "maximum sampled history length");
    audit_cmd->add_option("--histories", histories, "histories for the window-gap batch");
    CLI::App* bound_cmd = app.add_subcommand("bound", "trajectory-length and iteration bounds");
    add_common(bound_cmd, opts);
    CLI::App* experiment_cmd = app.add_subcommand("experiment", "full learning-curve sweep");
    experiment_cmd->add_option("--pomdp", config.pomdp_source, "built-in name or JSON path");
    experiment_cmd->add_option("--m", config.m_list, "window lengths");
    experiment_cmd->add_option("--T", config.t_list, "trajectory lengths");
    experiment_cmd->add_option("--K", config.k, "value-iteration steps");
    experiment_cmd->add_option("--gamma", config.gamma, "discount");
    experiment_cmd->add_option("--runs", config.runs, "runs per cell");
    experiment_cmd->add_option("--seed", config.master_seed, "master seed");
    experiment_cmd->add_option("--eps", config.eps, "sample-size eps");
    experiment_cmd->add_option("--delta", config.delta, "sample-size delta");
    experiment_cmd->add_option("--out", config.out_dir, "output directory");
    experiment_cmd->add_option("--jobs", config.jobs, "worker threads (0 = hardware)");
    experiment_cmd->add_flag("--svg,!--no-svg", config.render_svg, "render the SVG chart");

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate_cmd->parsed()) return cmd_validate(opts);
        if (exact_cmd->parsed()) return cmd_exact(opts);
        if (estimate_cmd->parsed()) return cmd_estimate(opts, model_out);
        if (plan_cmd->parsed()) return cmd_plan(opts, q_out);
        if (evaluate_cmd->parsed()) return cmd_evaluate(opts);
        if (audit_cmd->parsed()) return cmd_audit(opts, pairs, max_len, histories);
        if (bound_cmd->parsed()) return cmd_bound(opts);
        if (experiment_cmd->parsed()) return cmd_experiment(config);
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const ParameterError& e) {
        std::cerr << "parameter error: " << e.what() << '\n';
        return kExitParameter;
    } catch (const FilteringError& e) {
        std::cerr << "filtering error: " << e.what() << '\n';
        return kExitFiltering;
    } catch (const CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << '\n';
        return kExitCapacity;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitOther;
    }
    return 0;
}
