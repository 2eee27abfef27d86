#include "winpomdp/superstate.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "winpomdp/belief.hpp"
#include "winpomdp/errors.hpp"
#include "winpomdp/io.hpp"

namespace winpomdp {

SuperstateModel build_exact(const TabularPomdp& pomdp, int m) {
    validate(pomdp);
    auto idx = std::make_shared<const WindowIndex>(
        WindowIndex::build(pomdp.n_actions, pomdp.n_obs, m));
    const std::int64_t n = idx->size();
    const int A = pomdp.n_actions;
    const int O = pomdp.n_obs;

    SuperstateModel model;
    model.idx = idx;
    model.kind = ModelKind::exact;
    model.trans.assign(static_cast<std::size_t>(n) * A * O, 0.0);
    model.reward.assign(static_cast<std::size_t>(n) * A, 0.0);
    model.reachable.assign(static_cast<std::size_t>(n), 0);
    model.visited.assign(static_cast<std::size_t>(n) * A, 1);

    // Beliefs over the prefix tree: every window of length k+1 extends a
    // unique length-k parent, so one update per window covers the whole
    // enumeration.
    std::vector<BeliefVector> beliefs(static_cast<std::size_t>(n));
    beliefs[0] = pomdp.init_dist;
    model.reachable[0] = 1;
    for (int level = 0; level < m; ++level) {
        const std::int64_t lo = idx->level_offset(level);
        const std::int64_t hi = idx->level_offset(level + 1);
        for (std::int64_t w = lo; w < hi; ++w) {
            if (!model.reachable[static_cast<std::size_t>(w)]) continue;
            for (int a = 0; a < A; ++a)
                for (int o = 0; o < O; ++o) {
                    const std::int64_t child = idx->next(w, a, o, level + 1);
                    try {
                        beliefs[static_cast<std::size_t>(child)] =
                            belief_update(pomdp, beliefs[static_cast<std::size_t>(w)], a, o);
                        model.reachable[static_cast<std::size_t>(child)] = 1;
                    } catch (const FilteringError&) {
                        // zero forward probability; stays unreachable
                    }
                }
        }
    }

    for (std::int64_t w = 0; w < n; ++w) {
        if (!model.reachable[static_cast<std::size_t>(w)]) continue;
        const BeliefVector& b = beliefs[static_cast<std::size_t>(w)];
        const int len = idx->length(w);
        const int last = len > 0 ? idx->last_obs(w) : -1;
        for (int a = 0; a < A; ++a) {
            model.reward[static_cast<std::size_t>(w) * A + a] =
                (len > 0) ? pomdp.reward_at(last, a) : 0.0;
            for (int o = 0; o < O; ++o) {
                double p = 0.0;
                for (int s = 0; s < pomdp.n_states; ++s)
                    p += b[static_cast<std::size_t>(s)] * pomdp.obs_at(s, a, o);
                model.trans[(static_cast<std::size_t>(w) * A + a) * O + o] = p;
            }
        }
    }
    return model;
}

Lemma1Gap lemma1_gap(const TabularPomdp& pomdp, int m, const Window& history, int w_len) {
    const StabilityReport rep = validate(pomdp);
    if (m < 1) throw ParameterError("lemma1_gap: m must be >= 1");
    if (static_cast<int>(history.size()) < m)
        throw ParameterError("lemma1_gap: history must have length >= m");
    if (w_len < 0 || w_len > m) throw ParameterError("lemma1_gap: need 0 <= w_len <= m");

    const Window window(history.end() - w_len, history.end());
    const BeliefVector b_history = window_belief(pomdp, pomdp.init_dist, history);
    const BeliefVector b_window = window_belief(pomdp, pomdp.init_dist, window);

    Lemma1Gap out;
    out.history_len = static_cast<int>(history.size());
    out.window_len = w_len;
    out.bound = std::pow(1.0 - rep.rho, m);
    for (int a = 0; a < pomdp.n_actions; ++a)
        for (int o = 0; o < pomdp.n_obs; ++o) {
            double p_inf = 0.0, p_m = 0.0;
            for (int s = 0; s < pomdp.n_states; ++s) {
                p_inf += b_history[static_cast<std::size_t>(s)] * pomdp.obs_at(s, a, o);
                p_m += b_window[static_cast<std::size_t>(s)] * pomdp.obs_at(s, a, o);
            }
            out.gap = std::max(out.gap, std::abs(p_inf - p_m));
        }
    out.pass = out.gap <= out.bound + 1e-12;
    return out;
}

void dump_model_csv(const SuperstateModel& model, std::ostream& out) {
    const WindowIndex& idx = *model.idx;
    out << "window,action,successor,probability,reward\n";
    for (std::int64_t w = 0; w < idx.size(); ++w) {
        if (!model.is_reachable(w)) continue;
        for (int a = 0; a < idx.n_actions(); ++a) {
            if (!model.is_visited(w, a)) continue;
            for (int o = 0; o < idx.n_obs(); ++o)
                out << idx.to_text(w) << ',' << a << ',' << idx.to_text(idx.next(w, a, o)) << ','
                    << format_double(model.trans_at(w, a, o)) << ','
                    << format_double(model.reward_at(w, a)) << '\n';
        }
    }
}

} // namespace winpomdp
