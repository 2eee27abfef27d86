#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "winpomdp/window.hpp"

namespace winpomdp {

/// Deterministic stationary policy over windows of length <= m. Every window
/// index maps to a valid action.
struct WindowPolicy {
    std::shared_ptr<const WindowIndex> idx;
    std::vector<std::int32_t> actions; // one per window index

    int m() const { return idx->m(); }
    int action_at(std::int64_t window_index) const {
        return actions[static_cast<std::size_t>(window_index)];
    }
};

/// Behavior policy for trajectory sampling: either uniform random actions
/// (the exploration policy of the learning algorithm) or a window policy.
class PolicySpec {
  public:
    static PolicySpec uniform() { return PolicySpec{}; }
    static PolicySpec window(WindowPolicy p) {
        PolicySpec s;
        s.window_ = std::make_shared<WindowPolicy>(std::move(p));
        return s;
    }

    bool is_uniform() const { return window_ == nullptr; }
    const WindowPolicy& window_policy() const { return *window_; }

  private:
    std::shared_ptr<const WindowPolicy> window_;
};

} // namespace winpomdp
