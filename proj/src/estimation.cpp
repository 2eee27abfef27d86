#include "winpomdp/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "winpomdp/errors.hpp"
#include "winpomdp/io.hpp"

namespace winpomdp {

std::int64_t CountsModel::unvisited_pairs() const {
    return static_cast<std::int64_t>(visit.size()) -
           static_cast<std::int64_t>(std::count_if(visit.begin(), visit.end(),
                                                   [](std::int64_t v) { return v > 0; }));
}

std::int64_t CountsModel::total_visits() const {
    std::int64_t total = 0;
    for (std::int64_t v : visit) total += v;
    return total;
}

CountsModel count_windows(const Trajectory& traj, std::shared_ptr<const WindowIndex> idx) {
    if (traj.n_actions != idx->n_actions() || traj.n_obs != idx->n_obs())
        throw ParameterError("count_windows: trajectory alphabet (A=" +
                             std::to_string(traj.n_actions) + ", O=" +
                             std::to_string(traj.n_obs) + ") does not match the index");

    const int m = idx->m();
    const int A = idx->n_actions();
    const int O = idx->n_obs();
    CountsModel counts;
    counts.idx = idx;
    counts.visit.assign(static_cast<std::size_t>(idx->size()) * A, 0);
    counts.trans_count.assign(static_cast<std::size_t>(idx->size()) * A * O, 0);
    counts.reward_sum.assign(static_cast<std::size_t>(idx->size()) * A, 0.0);
    counts.steps = traj.length();

    // suffix[n] is the index of the length-min(t-1, n) window of the pairs
    // strictly before t; entries with n > t-1 duplicate shorter suffixes and
    // are not recorded until t has advanced past them.
    std::vector<std::int64_t> suffix(static_cast<std::size_t>(m) + 1, 0);
    for (int t = 1; t <= traj.length(); ++t) {
        const int a = traj.actions[static_cast<std::size_t>(t - 1)];
        const int o = traj.observations[static_cast<std::size_t>(t - 1)];
        const double r = traj.rewards[static_cast<std::size_t>(t - 1)];
        const int cap = std::min(t - 1, m);
        for (int n = 0; n <= cap; ++n) {
            const std::int64_t w = suffix[static_cast<std::size_t>(n)];
            const std::size_t pair = static_cast<std::size_t>(w) * A + static_cast<std::size_t>(a);
            counts.visit[pair] += 1;
            // r_t = reward[o_{t-1}][a_t] is the superstate reward of every
            // non-empty suffix (whose last observation is o_{t-1}); the empty
            // window's reward is 0 by convention and o_{t-1} lies outside it,
            // so its accumulator stays at the convention value
            if (n >= 1) counts.reward_sum[pair] += r;
            counts.trans_count[pair * O + static_cast<std::size_t>(o)] += 1;
        }
        for (int n = m; n >= 1; --n)
            suffix[static_cast<std::size_t>(n)] =
                idx->next(suffix[static_cast<std::size_t>(n)], a, o, n);
    }
    return counts;
}

SuperstateModel to_model(const CountsModel& counts) {
    const WindowIndex& idx = *counts.idx;
    const int A = idx.n_actions();
    const int O = idx.n_obs();

    SuperstateModel model;
    model.idx = counts.idx;
    model.kind = ModelKind::estimated;
    model.trans.assign(static_cast<std::size_t>(idx.size()) * A * O, 0.0);
    model.reward.assign(static_cast<std::size_t>(idx.size()) * A, 0.0);
    model.reachable.assign(static_cast<std::size_t>(idx.size()), 1);
    model.visited.assign(static_cast<std::size_t>(idx.size()) * A, 0);

    for (std::int64_t w = 0; w < idx.size(); ++w)
        for (int a = 0; a < A; ++a) {
            const std::size_t pair = static_cast<std::size_t>(w) * A + static_cast<std::size_t>(a);
            const std::int64_t v = counts.visit[pair];
            if (v == 0) continue; // zero row, zero reward
            model.visited[pair] = 1;
            model.reward[pair] = counts.reward_sum[pair] / static_cast<double>(v);
            for (int o = 0; o < O; ++o)
                model.trans[pair * O + static_cast<std::size_t>(o)] =
                    static_cast<double>(counts.trans_count[pair * O + static_cast<std::size_t>(o)]) /
                    static_cast<double>(v);
        }
    return model;
}

EstimationErrorReport estimation_error(const SuperstateModel& est, const SuperstateModel& exact) {
    if (est.idx->size() != exact.idx->size() || est.idx->n_actions() != exact.idx->n_actions() ||
        est.idx->n_obs() != exact.idx->n_obs() || est.idx->m() != exact.idx->m())
        throw ParameterError("estimation_error: models do not share a window index");
    if (exact.kind != ModelKind::exact)
        throw ParameterError("estimation_error: second argument must be an exact model");

    const WindowIndex& idx = *est.idx;
    EstimationErrorReport rep;
    for (std::int64_t w = 0; w < idx.size(); ++w)
        for (int a = 0; a < idx.n_actions(); ++a) {
            if (!est.is_visited(w, a)) {
                ++rep.unvisited;
                continue;
            }
            rep.reward_err =
                std::max(rep.reward_err, std::abs(est.reward_at(w, a) - exact.reward_at(w, a)));
            for (int o = 0; o < idx.n_obs(); ++o)
                rep.trans_err = std::max(
                    rep.trans_err, std::abs(est.trans_at(w, a, o) - exact.trans_at(w, a, o)));
        }
    return rep;
}

void dump_counts_csv(const CountsModel& counts, std::ostream& out) {
    const WindowIndex& idx = *counts.idx;
    out << "window,action,visits,successor,count,reward_mean\n";
    for (std::int64_t w = 0; w < idx.size(); ++w)
        for (int a = 0; a < idx.n_actions(); ++a) {
            const std::int64_t v = counts.visit_at(w, a);
            if (v == 0) continue;
            const double mean = counts.reward_sum_at(w, a) / static_cast<double>(v);
            for (int o = 0; o < idx.n_obs(); ++o) {
                const std::int64_t c = counts.trans_count_at(w, a, o);
                if (c == 0) continue;
                out << idx.to_text(w) << ',' << a << ',' << v << ','
                    << idx.to_text(idx.next(w, a, o)) << ',' << c << ',' << format_double(mean)
                    << '\n';
            }
        }
}

} // namespace winpomdp
