#include "winpomdp/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "winpomdp/errors.hpp"

namespace winpomdp {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

namespace {

using nlohmann::json;

/// Reads one probability row, renormalizing sums within 1e-9 of 1.
void read_row(const json& row, std::size_t cols, std::vector<double>& flat,
              const std::string& what, bool renormalize) {
    if (!row.is_array() || row.size() != cols)
        throw ValidationError("load_pomdp_json: " + what + " must have " + std::to_string(cols) +
                              " entries");
    double sum = 0.0;
    const std::size_t base = flat.size();
    for (std::size_t c = 0; c < cols; ++c) {
        const double v = row[c].get<double>();
        flat.push_back(v);
        sum += v;
    }
    if (renormalize) {
        if (std::abs(sum - 1.0) > 1e-9)
            throw ValidationError("load_pomdp_json: " + what + " sums to " + std::to_string(sum) +
                                  ", beyond the 1e-9 tolerance");
        for (std::size_t c = 0; c < cols; ++c) flat[base + c] /= sum;
    }
}

/// Reads a 3-d tensor [s][a][k] of probability rows.
std::vector<double> read_tensor(const json& arr, std::size_t S, std::size_t A, std::size_t cols,
                                const std::string& what) {
    if (!arr.is_array() || arr.size() != S)
        throw ValidationError("load_pomdp_json: " + what + " must have " + std::to_string(S) +
                              " state slices");
    std::vector<double> flat;
    flat.reserve(S * A * cols);
    for (std::size_t s = 0; s < S; ++s) {
        const json& slice = arr[s];
        if (!slice.is_array() || slice.size() != A)
            throw ValidationError("load_pomdp_json: " + what + "[" + std::to_string(s) +
                                  "] must have " + std::to_string(A) + " action rows");
        for (std::size_t a = 0; a < A; ++a)
            read_row(slice[a], cols, flat,
                     what + "[" + std::to_string(s) + "][" + std::to_string(a) + "]", true);
    }
    return flat;
}

json nest_rows(const std::vector<double>& flat, std::size_t rows, std::size_t cols,
               std::size_t base = 0) {
    json arr = json::array();
    for (std::size_t r = 0; r < rows; ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < cols; ++c) row.push_back(flat[base + r * cols + c]);
        arr.push_back(std::move(row));
    }
    return arr;
}

json nest_tensor(const std::vector<double>& flat, std::size_t S, std::size_t A, std::size_t cols) {
    json arr = json::array();
    for (std::size_t s = 0; s < S; ++s) arr.push_back(nest_rows(flat, A, cols, s * A * cols));
    return arr;
}

} // namespace

TabularPomdp load_pomdp_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("load_pomdp_json: cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoError("load_pomdp_json: " + path + ": " + e.what());
    }

    TabularPomdp p;
    try {
        p.n_states = j.at("n_states").get<int>();
        p.n_actions = j.at("n_actions").get<int>();
        p.n_obs = j.at("n_obs").get<int>();
        p.discount = j.at("discount").get<double>();
        if (p.n_states < 1 || p.n_actions < 1 || p.n_obs < 1)
            throw ValidationError("load_pomdp_json: S, A, O must all be positive");
        const std::size_t S = static_cast<std::size_t>(p.n_states);
        const std::size_t A = static_cast<std::size_t>(p.n_actions);
        const std::size_t O = static_cast<std::size_t>(p.n_obs);
        p.trans = read_tensor(j.at("trans"), S, A, S, "trans");
        p.obs = read_tensor(j.at("obs"), S, A, O, "obs");
        for (std::size_t o = 0; o < O; ++o)
            read_row(j.at("reward").at(o), A, p.reward, "reward[" + std::to_string(o) + "]",
                     false);
        read_row(j.at("init_dist"), S, p.init_dist, "init_dist", true);
    } catch (const json::exception& e) {
        throw ValidationError("load_pomdp_json: " + path + ": " + e.what());
    }
    validate(p);
    return p;
}

void save_pomdp_json(const TabularPomdp& p, const std::string& path) {
    const std::size_t S = static_cast<std::size_t>(p.n_states);
    const std::size_t A = static_cast<std::size_t>(p.n_actions);
    const std::size_t O = static_cast<std::size_t>(p.n_obs);
    json j;
    j["n_states"] = p.n_states;
    j["n_actions"] = p.n_actions;
    j["n_obs"] = p.n_obs;
    j["discount"] = p.discount;
    j["trans"] = nest_tensor(p.trans, S, A, S);
    j["obs"] = nest_tensor(p.obs, S, A, O);
    j["reward"] = nest_rows(p.reward, O, A);
    j["init_dist"] = nest_rows(p.init_dist, 1, S)[0];
    std::ofstream out(path);
    if (!out) throw IoError("save_pomdp_json: cannot open " + path + " for writing");
    out << j.dump(2) << '\n';
}

TabularPomdp resolve_pomdp(const std::string& source) {
    if (source == "probe") return probe_env();
    return load_pomdp_json(source);
}

} // namespace winpomdp
