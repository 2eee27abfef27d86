#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <vector>

#include "winpomdp/pomdp.hpp"
#include "winpomdp/window.hpp"

namespace winpomdp {

enum class ModelKind { exact, estimated };

/// MDP over windows of length <= m. Transition rows are stored per (window,
/// action) over the O legal shift-append successors; the probability stored
/// at observation slot o belongs to successor idx->next(w, a, o). Rows of an
/// exact model sum to 1 on reachable windows; rows of an estimated model sum
/// to 1 when the pair was visited and are identically zero otherwise.
/// Immutable once built.
struct SuperstateModel {
    std::shared_ptr<const WindowIndex> idx;
    ModelKind kind = ModelKind::exact;
    std::vector<double> trans;    // [w][a][o] -> P(next(w,a,o) | w, a)
    std::vector<double> reward;   // [w][a]
    std::vector<char> reachable;  // per window (exact construction)
    std::vector<char> visited;    // per (w, a); all true for exact models

    double trans_at(std::int64_t w, int a, int o) const {
        return trans[(static_cast<std::size_t>(w) * idx->n_actions() + a) * idx->n_obs() + o];
    }
    double reward_at(std::int64_t w, int a) const {
        return reward[static_cast<std::size_t>(w) * idx->n_actions() + a];
    }
    bool is_reachable(std::int64_t w) const { return reachable[static_cast<std::size_t>(w)] != 0; }
    bool is_visited(std::int64_t w, int a) const {
        return visited[static_cast<std::size_t>(w) * idx->n_actions() + a] != 0;
    }
    std::int64_t n_windows() const { return idx->size(); }
};

/// Exact superstate MDP of `pomdp` with window cap m: for every window w
/// reachable under the prior mu and every action a,
///   P(next(w,a,o) | w, a) = sum_s b(s|w) * obs[s][a][o],
/// and reward[w][a] = pomdp.reward[last obs of w][a] (0 for the empty
/// window). Windows with zero forward probability are flagged unreachable and
/// excluded from planning.
SuperstateModel build_exact(const TabularPomdp& pomdp, int m);

/// Gap between the window-model transition probabilities and the exact
/// full-history ones, for one history.
struct Lemma1Gap {
    double gap = 0.0;   // max over (a, o) of |P^m - P^infinity|
    double bound = 0.0; // (1 - rho)^m
    bool pass = false;
    int history_len = 0;
    int window_len = 0;
};

/// Compares, for every (a, o), the probability of the next observation under
/// the full-history belief of `history` against the belief of its last
/// `w_len` pairs. Requires |history| >= m and w_len <= m.
Lemma1Gap lemma1_gap(const TabularPomdp& pomdp, int m, const Window& history, int w_len);

/// Debug dump: CSV with columns window, action, successor, probability,
/// reward. Estimated models dump visited pairs only.
void dump_model_csv(const SuperstateModel& model, std::ostream& out);

} // namespace winpomdp
