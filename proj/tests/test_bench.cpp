#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "uavcov/bench.hpp"
#include "uavcov/textio.hpp"

using namespace uavcov;

namespace {

ExperimentPlan tiny_plan() {
    ExperimentPlan plan;
    plan.targets_m = 6;
    plan.n_values = {2, 3};
    plan.k_values = {2};
    plan.trials = 2;
    plan.methods = {parse_method_pair("ADPC-PSO"), parse_method_pair("KMEANS-PSO")};
    plan.solver_config.max_iterations = 20;
    plan.solver_config.population_size = 10;
    plan.base_seed = 7;
    return plan;
}

std::filesystem::path temp_dir(const char* tag) {
    auto dir = std::filesystem::temp_directory_path() / (std::string("uavcov_test_") + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("plan text round trip") {
    ExperimentPlan plan = tiny_plan();
    plan.energy.e_max = 6000;
    plan.adpc.xi = 0.75;
    plan.solver_config.seed = 11;

    const std::string text = plan_to_text(plan);
    const ExperimentPlan back = parse_plan_text(text);
    CHECK(back.targets_m == plan.targets_m);
    CHECK(back.n_values == plan.n_values);
    CHECK(back.k_values == plan.k_values);
    CHECK(back.trials == plan.trials);
    CHECK(back.methods == plan.methods);
    CHECK(back.energy.e_max == plan.energy.e_max);
    CHECK(back.adpc.xi == plan.adpc.xi);
    CHECK(back.base_seed == plan.base_seed);
    CHECK(plan_to_text(back) == text);

    CHECK_THROWS_AS(parse_plan_text("bogus=1\n"), ParseError);
}

TEST_CASE("plan validation rejects empty axes") {
    ExperimentPlan plan = tiny_plan();
    plan.k_values.clear();
    CHECK_THROWS_AS(plan.validate(), ValidationError);

    plan = tiny_plan();
    plan.trials = 0;
    CHECK_THROWS_AS(plan.validate(), ValidationError);

    plan = tiny_plan();
    plan.methods.clear();
    CHECK_THROWS_AS(plan.validate(), ValidationError);
}

TEST_CASE("record csv round trip") {
    TrialRecord rec;
    rec.method = "ADPC-PSO";
    rec.n_uavs = 3;
    rec.view_count = 2;
    rec.trial = 5;
    rec.seed = 16003620645635636541ULL; // above 2^63: seeds use the full 64-bit range
    rec.coverage_rate = 0.875;
    rec.feasible = true;
    rec.total_distance = 1234.5;
    rec.clustering_runtime = 0.002;
    rec.solver_runtime = 0.4;
    rec.per_uav_energy = {1000.0, 2000.5, 3000.0};

    const std::string line = record_to_csv(rec);
    const TrialRecord back = parse_record_csv(line);
    CHECK(back.method == rec.method);
    CHECK(back.n_uavs == rec.n_uavs);
    CHECK(back.view_count == rec.view_count);
    CHECK(back.seed == rec.seed);
    CHECK(back.coverage_rate == rec.coverage_rate);
    CHECK(back.feasible == rec.feasible);
    CHECK(back.per_uav_energy == rec.per_uav_energy);
    CHECK(back.error.empty());

    rec.error = "boom, with a comma";
    const TrialRecord errback = parse_record_csv(record_to_csv(rec));
    CHECK_FALSE(errback.error.empty());
    // commas are sanitized so the CSV stays 12 columns wide
    const std::string err_line = record_to_csv(rec);
    CHECK(std::count(err_line.begin(), err_line.end(), ',') == 11);
}

TEST_CASE("run_trial is deterministic apart from runtimes") {
    const ExperimentPlan plan = tiny_plan();
    const TrialRecord a = run_trial(plan, plan.methods[0], 2, 2, 0);
    const TrialRecord b = run_trial(plan, plan.methods[0], 2, 2, 0);
    CHECK(a.error.empty());
    CHECK(a.seed == b.seed);
    CHECK(a.coverage_rate == b.coverage_rate);
    CHECK(a.feasible == b.feasible);
    CHECK(a.total_distance == b.total_distance);
    CHECK(a.per_uav_energy == b.per_uav_energy);

    // the scenario seed depends on K and trial but not on method or N
    const TrialRecord other_method = run_trial(plan, plan.methods[1], 3, 2, 0);
    CHECK(other_method.seed == a.seed);
    const TrialRecord other_trial = run_trial(plan, plan.methods[0], 2, 2, 1);
    CHECK(other_trial.seed != a.seed);
}

TEST_CASE("run_sweep covers the full grid and streams records") {
    const ExperimentPlan plan = tiny_plan();
    int streamed = 0;
    const auto records = run_sweep(plan, [&](const TrialRecord&) { ++streamed; });
    // 2 methods x 2 N x 1 K x 2 trials
    CHECK(records.size() == 8);
    CHECK(streamed == 8);
    for (const auto& rec : records) {
        CHECK(rec.error.empty());
        CHECK(rec.coverage_rate >= 0.0);
        CHECK(rec.coverage_rate <= 1.0);
        CHECK(rec.per_uav_energy.size() == static_cast<std::size_t>(rec.n_uavs));
    }
}

TEST_CASE("aggregate groups by method, N and K") {
    std::vector<TrialRecord> records;
    auto push = [&](const char* method, int n, double cov, double crt, double srt) {
        TrialRecord rec;
        rec.method = method;
        rec.n_uavs = n;
        rec.view_count = 3;
        rec.coverage_rate = cov;
        rec.clustering_runtime = crt;
        rec.solver_runtime = srt;
        rec.total_distance = 100.0;
        records.push_back(rec);
    };
    push("ADPC-PSO", 2, 0.5, 1.0, 10.0);
    push("ADPC-PSO", 2, 0.7, 3.0, 30.0);
    push("ADPC-PSO", 2, 0.9, 100.0, 20.0);
    push("DPC-PSO", 2, 1.0, 0.5, 10.0);

    TrialRecord failed;
    failed.method = "ADPC-PSO";
    failed.n_uavs = 2;
    failed.view_count = 3;
    failed.error = "solver exploded";
    records.push_back(failed);

    const auto cells = aggregate(records);
    REQUIRE(cells.size() == 2);
    const auto& adpc = cells[0].method == "ADPC-PSO" ? cells[0] : cells[1];
    CHECK(adpc.count == 3); // the errored record is excluded
    CHECK(adpc.mean_coverage == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(adpc.std_coverage == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(adpc.median_clustering_runtime == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(adpc.mean_solver_runtime == doctest::Approx(20.0).epsilon(1e-12));

    CHECK_THROWS_AS(aggregate({}), InsufficientData);
    CHECK_THROWS_AS(aggregate({failed}), InsufficientData);
}

TEST_CASE("trend check predicate semantics") {
    auto cell = [](const char* method, int n, int k, double cov, double std_cov,
                   double crt, double srt) {
        AggregateCell c;
        c.method = method;
        c.n_uavs = n;
        c.view_count = k;
        c.count = 10;
        c.mean_coverage = cov;
        c.std_coverage = std_cov;
        c.median_clustering_runtime = crt;
        c.mean_clustering_runtime = crt;
        c.median_solver_runtime = srt;
        c.mean_solver_runtime = srt;
        return c;
    };

    // clean synthetic grid: ADPC-PSO rising in N, dominating, runtimes ordered
    std::vector<AggregateCell> cells;
    for (int n = 2; n <= 3; ++n) {
        const double bump = 0.1 * n;
        cells.push_back(cell("ADPC-PSO", n, 3, 0.6 + bump, 0.01, 2.0, 20.0));
        cells.push_back(cell("DPC-PSO", n, 3, 0.5 + bump, 0.01, 1.0, 20.0));
        cells.push_back(cell("KMEANS-PSO", n, 3, 0.4 + bump, 0.01, 3.0, 20.0));
        cells.push_back(cell("ADPC-GA", n, 3, 0.55 + bump, 0.01, 2.0, 10.0));
        cells.push_back(cell("ADPC-ACO", n, 3, 0.55 + bump, 0.01, 2.0, 40.0));
    }
    const TrendReport good = trend_checks(cells);
    CHECK(good.all_pass);
    for (const auto& chk : good.checks) {
        CHECK(chk.pass);
    }

    // break monotonicity in N beyond the pooled-SE slack
    auto broken = cells;
    for (auto& c : broken) {
        if (c.method == "ADPC-PSO" && c.n_uavs == 3) {
            c.mean_coverage = 0.1;
        }
    }
    const TrendReport bad = trend_checks(broken);
    CHECK_FALSE(bad.all_pass);
    bool found = false;
    for (const auto& chk : bad.checks) {
        if (chk.name.find("non_decreasing_in_N") != std::string::npos &&
            chk.name.find("ADPC-PSO") != std::string::npos) {
            CHECK_FALSE(chk.pass);
            CHECK(chk.margin < 0.0);
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("emit_plot_data writes the figure tables") {
    const ExperimentPlan plan = tiny_plan();
    const auto records = run_sweep(plan);
    const auto cells = aggregate(records);
    const auto dir = temp_dir("plots");
    emit_plot_data(cells, dir.string());

    CHECK(std::filesystem::exists(dir / "aggregates.csv"));
    CHECK(std::filesystem::exists(dir / "coverage_vs_N.csv"));
    CHECK(std::filesystem::exists(dir / "coverage_vs_K.csv"));
    CHECK(std::filesystem::exists(dir / "runtime_vs_K.csv"));

    const auto loaded = load_plot_data((dir / "aggregates.csv").string());
    REQUIRE(loaded.size() == cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        CHECK(loaded[i].method == cells[i].method);
        CHECK(loaded[i].n_uavs == cells[i].n_uavs);
        CHECK(loaded[i].mean_coverage == cells[i].mean_coverage);
        CHECK(loaded[i].std_coverage == cells[i].std_coverage);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("solution svg marks the key elements") {
    const Scenario scenario = random_scenario(5, 2000, 500, 60, 2, 3);
    Solution solution;
    Route r;
    r.uav_id = 1;
    const auto vps = generate_viewpoints(scenario);
    for (std::size_t i = 0; i + 1 < vps.size(); ++i) {
        r.visits.push_back(vps[i].ref);
    }
    r.total_distance = 1.0;
    solution.routes.push_back(r);
    solution.dropped.push_back(vps.back().ref);

    const std::string svg = solution_svg(scenario, solution);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("class=\"route\"") != std::string::npos);
    CHECK(svg.find("class=\"target\"") != std::string::npos);
    CHECK(svg.find("class=\"viewpoint\"") != std::string::npos);
    CHECK(svg.find("class=\"dropped\"") != std::string::npos);
    CHECK(svg.find("class=\"base\"") != std::string::npos);
    CHECK(svg.rfind("</svg>") != std::string::npos);
}

TEST_CASE("plan_mission produces feasible deterministic solutions") {
    const Scenario scenario = random_scenario(10, 2000, 500, 60, 3, 21);
    EnergyModel em; // defaults
    AdpcParams adpc;
    SolverConfig cfg;
    cfg.max_iterations = 30;
    cfg.population_size = 15;

    for (const char* name : {"ADPC-PSO", "DPC-GA", "KMEANS-ACO"}) {
        const MethodPair method = parse_method_pair(name);
        const Solution a = plan_mission(scenario, 3, method, em, adpc, cfg, 5);
        const Solution b = plan_mission(scenario, 3, method, em, adpc, cfg, 5);
        CHECK(solution_to_text(a) == solution_to_text(b));

        CHECK(a.routes.size() == 3);
        for (bool ok : check_energy(a, em)) {
            CHECK(ok);
        }
        CHECK(check_uniqueness(a).pass);
        CHECK_NOTHROW(validate_solution_geometry(a, scenario, DistanceMode::Euclid3d));
    }
}
