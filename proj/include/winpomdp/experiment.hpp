#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "winpomdp/pomdp.hpp"
#include "winpomdp/superstate.hpp"

namespace winpomdp {

/// Sweep configuration. Defaults reproduce the learning-curve experiment:
/// gamma = 0.95, K = 50, 10 runs per cell, m in 1..5, log-spaced T grid.
struct ExperimentConfig {
    std::string pomdp_source = "probe";
    std::vector<int> m_list{1, 2, 3, 4, 5};
    std::vector<std::int64_t> t_list{1'000, 3'000, 10'000, 30'000, 100'000, 300'000, 1'000'000};
    int k = 50;
    double gamma = 0.95;
    int runs = 10;
    std::uint64_t master_seed = 0;
    double eps = 0.1;   // sample-size calculator inputs, reported alongside
    double delta = 0.05;
    std::string out_dir = ".";
    bool render_svg = true;
    int jobs = 0; // 0 = hardware concurrency

    void check() const;
};

/// One cell of the sweep. wall_time_sec is a diagnostic and takes no part in
/// the CSV contract or record equality.
struct RunRecord {
    int m = 0;
    std::int64_t t = 0;
    int run = 0;
    std::uint64_t seed = 0;
    double v_m_policy = 0.0;     // V^m(pi) on the exact superstate model
    double v_pomdp_policy = 0.0; // V(pi) on the POMDP product chain
    double v_m_star = 0.0;
    double p_err = 0.0;
    double r_err = 0.0;
    std::int64_t unvisited = 0;
    double wall_time_sec = 0.0;

    friend bool operator==(const RunRecord& a, const RunRecord& b) {
        return a.m == b.m && a.t == b.t && a.run == b.run && a.seed == b.seed &&
               a.v_m_policy == b.v_m_policy && a.v_pomdp_policy == b.v_pomdp_policy &&
               a.v_m_star == b.v_m_star && a.p_err == b.p_err && a.r_err == b.r_err &&
               a.unvisited == b.unvisited;
    }
};

/// Deterministic substream seed for a sweep cell.
std::uint64_t cell_seed(std::uint64_t master_seed, int m, std::int64_t t, int run);

/// One end-to-end pass of the learning algorithm: uniform-policy trajectory
/// of length T, empirical model, K value-iteration backups from zero, greedy
/// policy, then exact evaluations against the exact model.
RunRecord run_algorithm1(const TabularPomdp& pomdp, int m, std::int64_t T, int K, double gamma,
                         std::uint64_t seed);

/// Same, reusing a prebuilt exact model and its optimal value (the sweep
/// builds them once per m).
RunRecord run_algorithm1(const TabularPomdp& pomdp, const SuperstateModel& exact, double v_m_star,
                         std::int64_t T, int K, double gamma, std::uint64_t seed);

/// All sweep cells, computed concurrently with isolated seed substreams and
/// returned in deterministic (m, T, run) order.
std::vector<RunRecord> figure1_sweep_records(const TabularPomdp& pomdp,
                                             const ExperimentConfig& config);

/// CSV contract: header m,T,run,seed,v_m_policy,v_pomdp_policy,v_m_star,
/// p_err,r_err,unvisited; UTF-8, LF, 12 significant digits.
void write_records_csv(const std::vector<RunRecord>& records, std::ostream& out);
std::vector<RunRecord> parse_records_csv(std::istream& in);

/// Line chart of mean +/- std of v_m_policy vs T per m, with horizontal
/// V^m_* reference lines. Self-contained SVG.
std::string render_svg(const std::vector<RunRecord>& records);

/// Runs the sweep and writes results.csv (and results.svg unless disabled)
/// under config.out_dir. The CSV path is opened before any computation.
/// Returns the records.
std::vector<RunRecord> figure1_sweep(const TabularPomdp& pomdp, const ExperimentConfig& config);

} // namespace winpomdp
