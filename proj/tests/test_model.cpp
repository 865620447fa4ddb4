#include <doctest.h>

#include <algorithm>
#include <random>

#include "uavcov/model.hpp"
#include "uavcov/scenario.hpp"
#include "uavcov/textio.hpp"

using namespace uavcov;

namespace {

Route make_route(int uav, std::vector<VpRef> visits, double dist) {
    Route r;
    r.uav_id = uav;
    r.visits = std::move(visits);
    r.total_distance = dist;
    return r;
}

} // namespace

TEST_CASE("leg_distance basics") {
    CHECK(leg_distance({0, 0, 0}, {0, 0, 0}) == 0.0);
    CHECK(leg_distance({0, 0, 0}, {3, 4, 0}) == doctest::Approx(5).epsilon(1e-12));
    CHECK(leg_distance({0, 0, 0}, {0, 0, 500}) == doctest::Approx(500).epsilon(1e-12));
    // 2D mode ignores the altitude leg
    CHECK(leg_distance({0, 0, 0}, {3, 4, 500}, DistanceMode::Horizontal2d) ==
          doctest::Approx(5).epsilon(1e-12));
}

TEST_CASE("route_energy arithmetic") {
    EnergyModel em{1.0, 50.0, 8000.0};
    Route r = make_route(1, {{1, 1}, {1, 2}, {2, 1}, {2, 2}, {3, 1}, {3, 2}}, 2000.0);
    CHECK(route_energy(r, em) == doctest::Approx(2300).epsilon(1e-12));

    CHECK(route_energy(make_route(1, {}, 0.0), em) == 0.0);

    em = EnergyModel{2.0, 100.0, 8000.0};
    CHECK(route_energy(make_route(1, {{1, 1}, {2, 1}}, 1000.0), em) ==
          doctest::Approx(2200).epsilon(1e-12));
}

TEST_CASE("check_energy uses an inclusive budget") {
    EnergyModel em{1.0, 100.0, 1100.0};
    Solution s;
    s.routes.push_back(make_route(1, {{1, 1}}, 1000.0)); // exactly e_max
    CHECK(check_energy(s, em) == std::vector<bool>{true});

    s.routes[0].total_distance = 1000.0 + 1e-9;
    CHECK(check_energy(s, em) == std::vector<bool>{false});

    Solution empty;
    empty.routes = {make_route(1, {}, 0.0), make_route(2, {}, 0.0)};
    CHECK(check_energy(empty, em) == std::vector<bool>{true, true});
}

TEST_CASE("check_uniqueness reports offenders") {
    Solution s;
    s.routes.push_back(make_route(1, {{1, 1}, {3, 2}}, 100.0));
    s.routes.push_back(make_route(2, {{2, 1}}, 100.0));
    CHECK(check_uniqueness(s).pass);

    s.routes[1].visits.push_back({3, 2});
    const auto rep = check_uniqueness(s);
    CHECK_FALSE(rep.pass);
    REQUIRE(rep.duplicates.size() == 1);
    CHECK(rep.duplicates[0] == VpRef{3, 2});

    Solution single;
    single.routes.push_back(make_route(1, {{1, 1}, {1, 2}}, 100.0));
    CHECK(check_uniqueness(single).pass);
}

TEST_CASE("check_per_target flags fully dropped targets") {
    const Scenario scenario = random_scenario(8, 2000, 500, 60, 2, 3);
    Solution s;
    Route r = make_route(1, {}, 0.0);
    for (int m = 1; m <= 8; ++m) {
        if (m != 7) {
            r.visits.push_back({m, 1});
        }
    }
    s.routes.push_back(r);
    const auto rep = check_per_target(s, scenario);
    CHECK_FALSE(rep.pass);
    CHECK(rep.uncovered_targets == std::vector<int>{7});

    s.routes[0].visits.push_back({7, 2});
    CHECK(check_per_target(s, scenario).pass);
}

TEST_CASE("compute_metrics coverage and feasibility") {
    const Scenario scenario = random_scenario(20, 2000, 500, 60, 3, 11);
    EnergyModel em{1.0, 1.0, 1e9};

    Solution s;
    Route r = make_route(1, {}, 0.0);
    for (int m = 1; m <= 20; ++m) {
        r.visits.push_back({m, 1});
        r.visits.push_back({m, 2});
        if (m <= 5) {
            r.visits.push_back({m, 3});
        } else {
            s.dropped.push_back({m, 3});
        }
    }
    r.total_distance = 1000.0;
    s.routes.push_back(r);

    const auto metrics = compute_metrics(s, scenario, em);
    CHECK(metrics.coverage_rate == doctest::Approx(45.0 / 60.0).epsilon(1e-12));
    CHECK(metrics.feasible);
    CHECK(metrics.targets_fully_missed == 0);
    CHECK(metrics.per_target_covered[0] == 3);
    CHECK(metrics.per_target_covered[19] == 2);

    // drop target 20 entirely: coverage falls and the per-target guard breaks feasibility
    Solution s2 = s;
    auto& visits = s2.routes[0].visits;
    visits.erase(std::remove_if(visits.begin(), visits.end(),
                                [](const VpRef& v) { return v.target_id == 20; }),
                 visits.end());
    s2.dropped.push_back({20, 1});
    s2.dropped.push_back({20, 2});
    const auto m2 = compute_metrics(s2, scenario, em);
    CHECK(m2.coverage_rate == doctest::Approx(43.0 / 60.0).epsilon(1e-12));
    CHECK_FALSE(m2.feasible);
    CHECK(m2.targets_fully_missed == 1);
}

TEST_CASE("verdicts are invariant under route permutation") {
    const Scenario scenario = random_scenario(6, 2000, 500, 60, 2, 4);
    Solution s;
    s.routes.push_back(make_route(1, {{1, 1}, {2, 1}, {3, 1}}, 500.0));
    s.routes.push_back(make_route(2, {{4, 1}, {5, 1}, {6, 1}}, 700.0));

    Solution shuffled = s;
    std::swap(shuffled.routes[0], shuffled.routes[1]);
    std::reverse(shuffled.routes[0].visits.begin(), shuffled.routes[0].visits.end());

    CHECK(check_uniqueness(s).pass == check_uniqueness(shuffled).pass);
    CHECK(check_per_target(s, scenario).uncovered_targets ==
          check_per_target(shuffled, scenario).uncovered_targets);
}

TEST_CASE("solution file round trip") {
    Solution s;
    s.routes.push_back(make_route(1, {{1, 1}, {2, 3}}, 1234.5678901234));
    s.routes.push_back(make_route(2, {}, 0.0));
    s.dropped = {{3, 1}, {3, 2}};

    const std::string text = solution_to_text(s);
    const Solution loaded = parse_solution_text(text);
    REQUIRE(loaded.routes.size() == 2);
    CHECK(loaded.routes[0].visits == s.routes[0].visits);
    CHECK(loaded.routes[0].total_distance == s.routes[0].total_distance);
    CHECK(loaded.routes[1].visits.empty());
    CHECK(loaded.dropped == s.dropped);
    CHECK(solution_to_text(loaded) == text);

    CHECK_THROWS_AS(parse_solution_text(""), ParseError);
    CHECK_THROWS_AS(parse_solution_text("solution v1 N=2\nroute 1 d=0 vps=\n"), Error);
}

TEST_CASE("validate_solution_geometry checks distances and partition") {
    const Scenario scenario = random_scenario(3, 2000, 500, 60, 1, 9);
    const auto vps = generate_viewpoints(scenario);

    Solution s;
    Route r;
    r.uav_id = 1;
    double d = 0.0;
    Point3 prev = scenario.base();
    for (const auto& vp : vps) {
        r.visits.push_back(vp.ref);
        d += leg_distance(prev, vp.position);
        prev = vp.position;
    }
    d += leg_distance(prev, scenario.base());
    r.total_distance = d;
    s.routes.push_back(r);
    CHECK_NOTHROW(validate_solution_geometry(s, scenario, DistanceMode::Euclid3d));

    Solution bad = s;
    bad.routes[0].total_distance += 1.0;
    CHECK_THROWS_AS(validate_solution_geometry(bad, scenario, DistanceMode::Euclid3d),
                    ValidationError);

    Solution missing = s;
    missing.routes[0].visits.pop_back();
    missing.routes[0].total_distance = 0.0;
    CHECK_THROWS_AS(validate_solution_geometry(missing, scenario, DistanceMode::Euclid3d),
                    ValidationError);
}

TEST_CASE("metrics text block") {
    SolutionMetrics m;
    m.coverage_rate = 0.75;
    m.feasible = true;
    m.per_uav_energy = {1000.0, 2000.0};
    const std::string text = metrics_to_text(m);
    CHECK(text.find("coverage_rate=0.75\n") != std::string::npos);
    CHECK(text.find("feasible=1\n") != std::string::npos);
    CHECK(text.find("per_uav_energy=1000;2000\n") != std::string::npos);
}
