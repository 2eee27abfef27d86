#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <vector>

#include "winpomdp/superstate.hpp"
#include "winpomdp/trajectory.hpp"
#include "winpomdp/window.hpp"

namespace winpomdp {

/// Visit, transition and reward accumulators behind the empirical superstate
/// model. At every time step t the suffixes of all lengths 0..min(t-1, m) of
/// the pairs strictly before t are counted against the fresh action a_t, so a
/// window of length n collects a sample at every t whose preceding n pairs
/// match it. Total visits therefore equal sum_t (min(t-1, m) + 1).
struct CountsModel {
    std::shared_ptr<const WindowIndex> idx;
    std::vector<std::int64_t> visit;       // [w][a]
    std::vector<std::int64_t> trans_count; // [w][a][o]; successor is idx->next(w, a, o)
    std::vector<double> reward_sum;        // [w][a]
    std::int64_t steps = 0;                // trajectory length consumed

    std::int64_t visit_at(std::int64_t w, int a) const {
        return visit[static_cast<std::size_t>(w) * idx->n_actions() + a];
    }
    std::int64_t trans_count_at(std::int64_t w, int a, int o) const {
        return trans_count[(static_cast<std::size_t>(w) * idx->n_actions() + a) * idx->n_obs() +
                           o];
    }
    double reward_sum_at(std::int64_t w, int a) const {
        return reward_sum[static_cast<std::size_t>(w) * idx->n_actions() + a];
    }
    std::int64_t unvisited_pairs() const;
    std::int64_t total_visits() const;
};

/// Single pass over the trajectory; every step records its transition (the
/// final step's successor only needs o_T, which is recorded data).
CountsModel count_windows(const Trajectory& traj, std::shared_ptr<const WindowIndex> idx);

/// Empirical superstate model: visited rows are counts divided by their own
/// visit total (and so sum to 1 exactly up to rounding); unvisited pairs keep
/// an identically zero row and zero reward and are flagged unvisited.
SuperstateModel to_model(const CountsModel& counts);

/// Sup-norm distances between an estimated and an exact model sharing the
/// same index, over visited pairs only.
struct EstimationErrorReport {
    double trans_err = 0.0;
    double reward_err = 0.0;
    std::int64_t unvisited = 0;
};

EstimationErrorReport estimation_error(const SuperstateModel& est, const SuperstateModel& exact);

/// Counts dump: CSV with columns window, action, visits, successor, count,
/// reward_mean (visited pairs, observed successors only).
void dump_counts_csv(const CountsModel& counts, std::ostream& out);

} // namespace winpomdp
