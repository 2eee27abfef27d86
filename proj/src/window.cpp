#include "winpomdp/window.hpp"

#include <limits>

#include "winpomdp/errors.hpp"

namespace winpomdp {

WindowIndex WindowIndex::build(int n_actions, int n_obs, int m, std::int64_t max_size) {
    if (n_actions < 1 || n_obs < 1 || m < 1)
        throw ParameterError("WindowIndex::build: need A >= 1, O >= 1, m >= 1");

    WindowIndex idx;
    idx.n_actions_ = n_actions;
    idx.n_obs_ = n_obs;
    idx.m_ = m;
    idx.offsets_.assign(static_cast<std::size_t>(m) + 2, 0);
    idx.pow_.assign(static_cast<std::size_t>(m) + 1, 1);

    const unsigned __int128 base =
        static_cast<unsigned __int128>(n_actions) * static_cast<unsigned __int128>(n_obs);
    unsigned __int128 level = 1; // (A*O)^n
    unsigned __int128 total = 0;
    for (int n = 0; n <= m; ++n) {
        idx.offsets_[static_cast<std::size_t>(n)] = static_cast<std::int64_t>(total);
        total += level;
        if (total > static_cast<unsigned __int128>(max_size))
            throw CapacityError("WindowIndex::build: enumeration needs at least " +
                                std::to_string(static_cast<unsigned long long>(
                                    total > static_cast<unsigned __int128>(
                                                std::numeric_limits<unsigned long long>::max())
                                        ? std::numeric_limits<unsigned long long>::max()
                                        : total)) +
                                " windows, limit is " + std::to_string(max_size));
        idx.pow_[static_cast<std::size_t>(n)] = static_cast<std::int64_t>(level);
        level *= base;
    }
    idx.offsets_[static_cast<std::size_t>(m) + 1] = static_cast<std::int64_t>(total);
    return idx;
}

std::int64_t WindowIndex::encode(const Window& w) const {
    const int n = static_cast<int>(w.size());
    if (n > m_) throw ParameterError("WindowIndex::encode: window longer than m");
    std::int64_t rank = 0;
    for (const AoPair& p : w) {
        if (p.action < 0 || p.action >= n_actions_ || p.obs < 0 || p.obs >= n_obs_)
            throw ParameterError("WindowIndex::encode: pair out of alphabet range");
        rank = rank * (static_cast<std::int64_t>(n_actions_) * n_obs_) +
               (static_cast<std::int64_t>(p.action) * n_obs_ + p.obs);
    }
    return offsets_[static_cast<std::size_t>(n)] + rank;
}

Window WindowIndex::decode(std::int64_t index) const {
    const int n = length(index);
    std::int64_t rank = index - offsets_[static_cast<std::size_t>(n)];
    Window w(static_cast<std::size_t>(n));
    const std::int64_t base = static_cast<std::int64_t>(n_actions_) * n_obs_;
    for (int i = n - 1; i >= 0; --i) {
        const std::int64_t digit = rank % base;
        rank /= base;
        w[static_cast<std::size_t>(i)] = {static_cast<std::int32_t>(digit / n_obs_),
                                          static_cast<std::int32_t>(digit % n_obs_)};
    }
    return w;
}

int WindowIndex::length(std::int64_t index) const {
    if (index < 0 || index >= size())
        throw ParameterError("WindowIndex: index " + std::to_string(index) + " out of range");
    int n = 0;
    while (index >= offsets_[static_cast<std::size_t>(n) + 1]) ++n;
    return n;
}

int WindowIndex::last_obs(std::int64_t index) const {
    const int n = length(index);
    if (n == 0) throw ParameterError("WindowIndex::last_obs: empty window");
    const std::int64_t rank = index - offsets_[static_cast<std::size_t>(n)];
    const std::int64_t base = static_cast<std::int64_t>(n_actions_) * n_obs_;
    return static_cast<int>((rank % base) % n_obs_);
}

std::int64_t WindowIndex::next(std::int64_t index, int action, int obs, int cap) const {
    if (cap < 0 || cap > m_) throw ParameterError("WindowIndex::next: cap out of range");
    if (action < 0 || action >= n_actions_ || obs < 0 || obs >= n_obs_)
        throw ParameterError("WindowIndex::next: pair out of alphabet range");
    const int n = length(index);
    if (n > cap) throw ParameterError("WindowIndex::next: window longer than cap");
    if (cap == 0) return 0;
    const std::int64_t digit = static_cast<std::int64_t>(action) * n_obs_ + obs;
    const std::int64_t base = static_cast<std::int64_t>(n_actions_) * n_obs_;
    std::int64_t rank = index - offsets_[static_cast<std::size_t>(n)];
    if (n < cap) return offsets_[static_cast<std::size_t>(n) + 1] + rank * base + digit;
    // sliding: drop the oldest pair, append the new one
    rank = (rank % pow_[static_cast<std::size_t>(cap - 1)]) * base + digit;
    return offsets_[static_cast<std::size_t>(cap)] + rank;
}

std::string WindowIndex::to_text(std::int64_t index) const { return to_text(decode(index)); }

std::string WindowIndex::to_text(const Window& w) {
    if (w.empty()) return "∅";
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i > 0) out += '|';
        out += 'a';
        out += std::to_string(w[i].action);
        out += 'o';
        out += std::to_string(w[i].obs);
    }
    return out;
}

Window shift_append(const Window& w, AoPair pair, int m) {
    if (m < 1) throw ParameterError("shift_append: m must be >= 1");
    if (static_cast<int>(w.size()) > m)
        throw ParameterError("shift_append: window longer than m");
    Window out;
    out.reserve(static_cast<std::size_t>(m));
    const std::size_t skip = (static_cast<int>(w.size()) == m) ? 1 : 0;
    out.insert(out.end(), w.begin() + static_cast<std::ptrdiff_t>(skip), w.end());
    out.push_back(pair);
    return out;
}

} // namespace winpomdp
