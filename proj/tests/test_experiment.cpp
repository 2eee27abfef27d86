#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "winpomdp/errors.hpp"
#include "winpomdp/experiment.hpp"
#include "winpomdp/pomdp.hpp"

using namespace winpomdp;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig config;
    config.m_list = {1, 2};
    config.t_list = {200, 1'000};
    config.k = 30;
    config.gamma = 0.95;
    config.runs = 3;
    config.master_seed = 7;
    config.render_svg = false;
    config.jobs = 2;
    return config;
}

} // namespace

TEST_CASE("run_algorithm1 is bit-deterministic in (cell, seed)") {
    const TabularPomdp p = probe_env();
    const RunRecord a = run_algorithm1(p, 2, 500, 30, 0.95, 123);
    const RunRecord b = run_algorithm1(p, 2, 500, 30, 0.95, 123);
    CHECK(a == b);
    const RunRecord c = run_algorithm1(p, 2, 500, 30, 0.95, 124);
    CHECK_FALSE(a == c);
}

TEST_CASE("tiny trajectories leave unvisited pairs but the run completes") {
    const TabularPomdp p = probe_env();
    const RunRecord rec = run_algorithm1(p, 2, 20, 10, 0.95, 5);
    CHECK(rec.unvisited > 0);
    CHECK(rec.v_m_star > 0.0);
}

TEST_CASE("learned policy approaches the optimal superstate value on probe") {
    const TabularPomdp p = probe_env();
    const RunRecord rec = run_algorithm1(p, 1, 100'000, 50, 0.95, 0);
    CHECK(rec.v_m_star - rec.v_m_policy <= 0.02 * rec.v_m_star);
}

TEST_CASE("sweep produces the full grid in deterministic order") {
    const TabularPomdp p = probe_env();
    const ExperimentConfig config = small_config();
    const std::vector<RunRecord> records = figure1_sweep_records(p, config);
    REQUIRE(records.size() == 2 * 2 * 3);
    std::size_t i = 0;
    for (int m : {1, 2})
        for (std::int64_t t : {200ll, 1000ll})
            for (int run : {0, 1, 2}) {
                CHECK(records[i].m == m);
                CHECK(records[i].t == t);
                CHECK(records[i].run == run);
                CHECK(records[i].seed == cell_seed(config.master_seed, m, t, run));
                ++i;
            }
}

TEST_CASE("sweep CSV is byte-identical across reruns and round-trips") {
    const TabularPomdp p = probe_env();
    const ExperimentConfig config = small_config();
    const std::vector<RunRecord> first = figure1_sweep_records(p, config);
    const std::vector<RunRecord> second = figure1_sweep_records(p, config);

    std::ostringstream csv_a, csv_b;
    write_records_csv(first, csv_a);
    write_records_csv(second, csv_b);
    CHECK(csv_a.str() == csv_b.str());
    CHECK(csv_a.str().rfind("m,T,run,seed,v_m_policy,v_pomdp_policy,v_m_star,p_err,r_err,unvisited\n",
                            0) == 0);

    std::istringstream in(csv_a.str());
    const std::vector<RunRecord> parsed = parse_records_csv(in);
    REQUIRE(parsed.size() == first.size());
    std::ostringstream csv_c;
    write_records_csv(parsed, csv_c);
    CHECK(csv_c.str() == csv_a.str()); // parse -> format round-trip, every row
}

TEST_CASE("different master seeds change the records") {
    const TabularPomdp p = probe_env();
    ExperimentConfig config = small_config();
    config.m_list = {1};
    config.t_list = {300};
    const auto a = figure1_sweep_records(p, config);
    config.master_seed = 8;
    const auto b = figure1_sweep_records(p, config);
    CHECK_FALSE(a[0] == b[0]);
}

TEST_CASE("figure1_sweep writes CSV and SVG files") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "winpomdp_sweep_test";
    fs::create_directories(dir);
    const TabularPomdp p = probe_env();
    ExperimentConfig config = small_config();
    config.out_dir = dir.string();
    config.render_svg = true;
    const auto records = figure1_sweep(p, config);
    CHECK(fs::exists(dir / "results.csv"));
    CHECK(fs::exists(dir / "results.svg"));

    std::ifstream csv(dir / "results.csv");
    const auto parsed = parse_records_csv(csv);
    CHECK(parsed.size() == records.size());

    std::ifstream svg(dir / "results.svg");
    std::stringstream svg_body;
    svg_body << svg.rdbuf();
    CHECK(svg_body.str().find("<svg") != std::string::npos);
    CHECK(svg_body.str().find("polyline") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("unwritable output fails before any computation") {
    const TabularPomdp p = probe_env();
    ExperimentConfig config = small_config();
    config.out_dir = "/nonexistent_dir_for_winpomdp";
    CHECK_THROWS_AS(figure1_sweep(p, config), IoError);
}

TEST_CASE("config invariants are enforced") {
    ExperimentConfig config = small_config();
    config.m_list.clear();
    CHECK_THROWS_AS(config.check(), ParameterError);
    config = small_config();
    config.runs = 0;
    CHECK_THROWS_AS(config.check(), ParameterError);
    config = small_config();
    config.k = 0;
    CHECK_THROWS_AS(config.check(), ParameterError);
}

TEST_CASE("csv parser rejects malformed input") {
    std::istringstream bad_header("wrong,header\n");
    CHECK_THROWS_AS(parse_records_csv(bad_header), IoError);
    std::istringstream bad_row(
        "m,T,run,seed,v_m_policy,v_pomdp_policy,v_m_star,p_err,r_err,unvisited\n1,2,3\n");
    CHECK_THROWS_AS(parse_records_csv(bad_row), IoError);
}
