#include "winpomdp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <istream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "winpomdp/errors.hpp"
#include "winpomdp/estimation.hpp"
#include "winpomdp/io.hpp"
#include "winpomdp/planning.hpp"
#include "winpomdp/rng.hpp"

namespace winpomdp {

void ExperimentConfig::check() const {
    if (m_list.empty() || t_list.empty())
        throw ParameterError("ExperimentConfig: m and T lists must be non-empty");
    if (k < 1) throw ParameterError("ExperimentConfig: K must be >= 1");
    if (runs < 1) throw ParameterError("ExperimentConfig: runs must be >= 1");
    if (!(gamma > 0.0 && gamma < 1.0))
        throw ParameterError("ExperimentConfig: gamma must lie in (0, 1)");
    for (int m : m_list)
        if (m < 1) throw ParameterError("ExperimentConfig: every m must be >= 1");
    for (std::int64_t t : t_list)
        if (t < 1) throw ParameterError("ExperimentConfig: every T must be >= 1");
}

std::uint64_t cell_seed(std::uint64_t master_seed, int m, std::int64_t t, int run) {
    return Rng::derive(master_seed,
                       {static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(t),
                        static_cast<std::uint64_t>(run)});
}

RunRecord run_algorithm1(const TabularPomdp& pomdp, const SuperstateModel& exact, double v_m_star,
                         std::int64_t T, int K, double gamma, std::uint64_t seed) {
    const auto start = std::chrono::steady_clock::now();
    if (T > static_cast<std::int64_t>(std::numeric_limits<int>::max()))
        throw CapacityError("run_algorithm1: T exceeds the trajectory capacity");

    const Trajectory traj =
        sample_trajectory(pomdp, PolicySpec::uniform(), static_cast<int>(T), seed);
    const CountsModel counts = count_windows(traj, exact.idx);
    const SuperstateModel est = to_model(counts);
    const QTable q = value_iteration(est, gamma, K, zero_q(est.idx));
    const WindowPolicy policy = greedy(q);

    RunRecord rec;
    rec.m = exact.idx->m();
    rec.t = T;
    rec.seed = seed;
    rec.v_m_policy = superstate_policy_value(exact, policy, gamma);
    rec.v_pomdp_policy = pomdp_policy_value(pomdp, policy, gamma);
    rec.v_m_star = v_m_star;
    const EstimationErrorReport err = estimation_error(est, exact);
    rec.p_err = err.trans_err;
    rec.r_err = err.reward_err;
    rec.unvisited = err.unvisited;
    rec.wall_time_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

RunRecord run_algorithm1(const TabularPomdp& pomdp, int m, std::int64_t T, int K, double gamma,
                         std::uint64_t seed) {
    const SuperstateModel exact = build_exact(pomdp, m);
    const double v_star = optimal_superstate_value(exact, gamma, 1e-9).first;
    return run_algorithm1(pomdp, exact, v_star, T, K, gamma, seed);
}

std::vector<RunRecord> figure1_sweep_records(const TabularPomdp& pomdp,
                                             const ExperimentConfig& config) {
    config.check();
    validate(pomdp);

    // exact models and optimal values, once per m
    std::vector<SuperstateModel> exact;
    std::vector<double> v_star;
    exact.reserve(config.m_list.size());
    for (int m : config.m_list) {
        exact.push_back(build_exact(pomdp, m));
        v_star.push_back(optimal_superstate_value(exact.back(), config.gamma, 1e-9).first);
    }

    struct Cell {
        std::size_t m_pos;
        std::size_t t_pos;
        int run;
    };
    std::vector<Cell> cells;
    for (std::size_t mi = 0; mi < config.m_list.size(); ++mi)
        for (std::size_t ti = 0; ti < config.t_list.size(); ++ti)
            for (int run = 0; run < config.runs; ++run) cells.push_back({mi, ti, run});

    std::vector<RunRecord> records(cells.size());
    std::atomic<std::size_t> cursor{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    const auto worker = [&]() {
        while (!failed.load(std::memory_order_relaxed)) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= cells.size()) return;
            const Cell& cell = cells[i];
            const int m = config.m_list[cell.m_pos];
            const std::int64_t t = config.t_list[cell.t_pos];
            try {
                RunRecord rec =
                    run_algorithm1(pomdp, exact[cell.m_pos], v_star[cell.m_pos], t, config.k,
                                   config.gamma, cell_seed(config.master_seed, m, t, cell.run));
                rec.run = cell.run;
                records[i] = rec;
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true);
            }
        }
    };

    unsigned n_threads = config.jobs > 0 ? static_cast<unsigned>(config.jobs)
                                         : std::thread::hardware_concurrency();
    if (n_threads == 0) n_threads = 1;
    n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(cells.size()));
    std::vector<std::thread> pool;
    for (unsigned i = 0; i + 1 < n_threads; ++i) pool.emplace_back(worker);
    worker();
    for (std::thread& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
    return records;
}

void write_records_csv(const std::vector<RunRecord>& records, std::ostream& out) {
    out << "m,T,run,seed,v_m_policy,v_pomdp_policy,v_m_star,p_err,r_err,unvisited\n";
    for (const RunRecord& r : records)
        out << r.m << ',' << r.t << ',' << r.run << ',' << r.seed << ','
            << format_double(r.v_m_policy) << ',' << format_double(r.v_pomdp_policy) << ','
            << format_double(r.v_m_star) << ',' << format_double(r.p_err) << ','
            << format_double(r.r_err) << ',' << r.unvisited << '\n';
}

std::vector<RunRecord> parse_records_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) ||
        line != "m,T,run,seed,v_m_policy,v_pomdp_policy,v_m_star,p_err,r_err,unvisited")
        throw IoError("parse_records_csv: missing or unexpected header");
    std::vector<RunRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(row, field, ',')) fields.push_back(field);
        if (fields.size() != 10)
            throw IoError("parse_records_csv: row with " + std::to_string(fields.size()) +
                          " fields: " + line);
        RunRecord r;
        r.m = std::stoi(fields[0]);
        r.t = std::stoll(fields[1]);
        r.run = std::stoi(fields[2]);
        r.seed = std::stoull(fields[3]);
        r.v_m_policy = std::stod(fields[4]);
        r.v_pomdp_policy = std::stod(fields[5]);
        r.v_m_star = std::stod(fields[6]);
        r.p_err = std::stod(fields[7]);
        r.r_err = std::stod(fields[8]);
        r.unvisited = std::stoll(fields[9]);
        records.push_back(r);
    }
    return records;
}

namespace {

struct SeriesPoint {
    double t = 0.0;
    double mean = 0.0;
    double stdev = 0.0;
};

} // namespace

std::string render_svg(const std::vector<RunRecord>& records) {
    // group by m, then by T
    std::map<int, std::map<std::int64_t, std::vector<double>>> by_m;
    std::map<int, double> v_star;
    for (const RunRecord& r : records) {
        by_m[r.m][r.t].push_back(r.v_m_policy);
        v_star[r.m] = r.v_m_star;
    }
    if (by_m.empty()) return "<svg xmlns=\"http://www.w3.org/2000/svg\"/>\n";

    double lo = 1e300, hi = -1e300, tlo = 1e300, thi = -1e300;
    std::map<int, std::vector<SeriesPoint>> series;
    for (const auto& [m, by_t] : by_m) {
        for (const auto& [t, vals] : by_t) {
            double sum = 0.0, sum_sq = 0.0;
            for (double v : vals) {
                sum += v;
                sum_sq += v * v;
            }
            const double mean = sum / static_cast<double>(vals.size());
            const double var =
                vals.size() > 1
                    ? std::max(0.0, (sum_sq - sum * mean) / static_cast<double>(vals.size() - 1))
                    : 0.0;
            const SeriesPoint pt{std::log10(static_cast<double>(t)), mean, std::sqrt(var)};
            series[m].push_back(pt);
            lo = std::min(lo, pt.mean - pt.stdev);
            hi = std::max(hi, pt.mean + pt.stdev);
            tlo = std::min(tlo, pt.t);
            thi = std::max(thi, pt.t);
        }
        lo = std::min(lo, v_star.at(m));
        hi = std::max(hi, v_star.at(m));
    }
    if (thi <= tlo) thi = tlo + 1.0;
    const double pad = std::max(0.5, 0.08 * (hi - lo));
    lo -= pad;
    hi += pad;

    constexpr double W = 720, H = 480, ML = 64, MR = 150, MT = 24, MB = 46;
    const auto x_of = [&](double t) { return ML + (t - tlo) / (thi - tlo) * (W - ML - MR); };
    const auto y_of = [&](double v) { return H - MB - (v - lo) / (hi - lo) * (H - MT - MB); };
    const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                            "#8c564b", "#e377c2", "#7f7f7f"};

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n"
        << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    // axes
    svg << "<line x1=\"" << ML << "\" y1=\"" << (H - MB) << "\" x2=\"" << (W - MR) << "\" y2=\""
        << (H - MB) << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << ML << "\" y1=\"" << MT << "\" x2=\"" << ML << "\" y2=\"" << (H - MB)
        << "\" stroke=\"black\"/>\n";
    // x ticks at integer log10
    for (int e = static_cast<int>(std::ceil(tlo)); e <= static_cast<int>(std::floor(thi)); ++e) {
        const double x = x_of(e);
        svg << "<line x1=\"" << x << "\" y1=\"" << (H - MB) << "\" x2=\"" << x << "\" y2=\""
            << (H - MB + 5) << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << x << "\" y=\"" << (H - MB + 20)
            << "\" font-size=\"12\" text-anchor=\"middle\">1e" << e << "</text>\n";
    }
    // y ticks
    for (int i = 0; i <= 5; ++i) {
        const double v = lo + (hi - lo) * i / 5.0;
        const double y = y_of(v);
        svg << "<line x1=\"" << (ML - 5) << "\" y1=\"" << y << "\" x2=\"" << ML << "\" y2=\"" << y
            << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << (ML - 8) << "\" y=\"" << (y + 4)
            << "\" font-size=\"12\" text-anchor=\"end\">" << format_double(std::round(v * 100) / 100)
            << "</text>\n";
    }
    svg << "<text x=\"" << (ML + (W - ML - MR) / 2) << "\" y=\"" << (H - 8)
        << "\" font-size=\"13\" text-anchor=\"middle\">trajectory length T</text>\n";
    svg << "<text x=\"16\" y=\"" << (MT + (H - MT - MB) / 2)
        << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << (MT + (H - MT - MB) / 2) << ")\">value of learned policy</text>\n";

    int ci = 0;
    for (const auto& [m, pts] : series) {
        const char* color = colors[ci % 8];
        // reference line at the optimal value
        const double yref = y_of(v_star.at(m));
        svg << "<line x1=\"" << ML << "\" y1=\"" << yref << "\" x2=\"" << (W - MR) << "\" y2=\""
            << yref << "\" stroke=\"" << color << "\" stroke-dasharray=\"5,4\" opacity=\"0.6\"/>\n";
        // error bars
        for (const SeriesPoint& p : pts)
            svg << "<line x1=\"" << x_of(p.t) << "\" y1=\"" << y_of(p.mean - p.stdev)
                << "\" x2=\"" << x_of(p.t) << "\" y2=\"" << y_of(p.mean + p.stdev) << "\" stroke=\""
                << color << "\" opacity=\"0.7\"/>\n";
        // mean polyline
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
        for (const SeriesPoint& p : pts) svg << x_of(p.t) << ',' << y_of(p.mean) << ' ';
        svg << "\"/>\n";
        for (const SeriesPoint& p : pts)
            svg << "<circle cx=\"" << x_of(p.t) << "\" cy=\"" << y_of(p.mean)
                << "\" r=\"2.6\" fill=\"" << color << "\"/>\n";
        // legend
        const double ly = MT + 18.0 * ci + 10;
        svg << "<line x1=\"" << (W - MR + 12) << "\" y1=\"" << ly << "\" x2=\"" << (W - MR + 34)
            << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << (W - MR + 40) << "\" y=\"" << (ly + 4)
            << "\" font-size=\"12\">m=" << m << " (opt " << format_double(std::round(v_star.at(m) * 1000) / 1000)
            << ")</text>\n";
        ++ci;
    }
    svg << "</svg>\n";
    return svg.str();
}

std::vector<RunRecord> figure1_sweep(const TabularPomdp& pomdp, const ExperimentConfig& config) {
    config.check();
    const std::string csv_path = config.out_dir + "/results.csv";
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) throw IoError("figure1_sweep: cannot open " + csv_path + " for writing");

    const std::vector<RunRecord> records = figure1_sweep_records(pomdp, config);
    write_records_csv(records, csv);
    csv.close();
    if (!csv) throw IoError("figure1_sweep: failed writing " + csv_path);

    if (config.render_svg) {
        const std::string svg_path = config.out_dir + "/results.svg";
        std::ofstream svg(svg_path, std::ios::binary);
        if (!svg) throw IoError("figure1_sweep: cannot open " + svg_path + " for writing");
        svg << render_svg(records);
    }
    return records;
}

} // namespace winpomdp
