#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace winpomdp {

/// One action-observation pair inside a window.
struct AoPair {
    std::int32_t action = 0;
    std::int32_t obs = 0;
    friend bool operator==(const AoPair&, const AoPair&) = default;
};

/// A window is a sequence of at most m pairs; the same container also holds
/// unbounded histories for full-history filtering.
using Window = std::vector<AoPair>;

/// Dense enumeration of all action-observation windows of length 0..m.
/// Index 0 is the empty window; indices are ordered by length, then
/// lexicographically by pairs (action-major within a pair). Immutable after
/// build and freely shareable across threads.
class WindowIndex {
  public:
    /// Default cap on the number of enumerated windows.
    static constexpr std::int64_t kDefaultMaxSize = std::int64_t{1} << 31;

    static WindowIndex build(int n_actions, int n_obs, int m,
                             std::int64_t max_size = kDefaultMaxSize);

    int n_actions() const { return n_actions_; }
    int n_obs() const { return n_obs_; }
    int m() const { return m_; }
    std::int64_t size() const { return offsets_[static_cast<std::size_t>(m_) + 1]; }

    /// First index of the length-n block, n in [0, m]. offset(m+1) == size().
    std::int64_t level_offset(int n) const { return offsets_[static_cast<std::size_t>(n)]; }

    std::int64_t encode(const Window& w) const;
    Window decode(std::int64_t index) const;

    /// Length of the window at `index`.
    int length(std::int64_t index) const;

    /// Observation of the last pair; requires length(index) >= 1.
    int last_obs(std::int64_t index) const;

    /// Index-level shift-append with cap `cap`: grows while shorter than cap,
    /// then slides (drops the oldest pair). cap defaults to m.
    std::int64_t next(std::int64_t index, int action, int obs, int cap) const;
    std::int64_t next(std::int64_t index, int action, int obs) const {
        return next(index, action, obs, m_);
    }

    /// Text form "a{i}o{j}|a{k}o{l}|..."; the empty window renders as "∅".
    std::string to_text(std::int64_t index) const;
    static std::string to_text(const Window& w);

  private:
    WindowIndex() = default;

    int n_actions_ = 0;
    int n_obs_ = 0;
    int m_ = 0;
    std::vector<std::int64_t> offsets_; // offsets_[n] = start of length-n block, size m+2
    std::vector<std::int64_t> pow_;     // (A*O)^k for k in [0, m]
};

/// Value-level shift-append: append (action, obs) and keep the last m pairs.
Window shift_append(const Window& w, AoPair pair, int m);

} // namespace winpomdp
