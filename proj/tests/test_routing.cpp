#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "uavcov/routing.hpp"

using namespace uavcov;

namespace {

TourProblem corner_square(DistanceMode mode = DistanceMode::Horizontal2d) {
    TourProblem p;
    p.depot = Point3{0, 0, 0};
    p.stops = {Point3{100, 0, 500}, Point3{100, 100, 500}, Point3{0, 100, 500}};
    p.refs = {VpRef{1, 1}, VpRef{2, 1}, VpRef{3, 1}};
    p.distance_mode = mode;
    return p;
}

TourProblem random_problem(int n_stops, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coord(-1000, 1000);
    TourProblem p;
    p.depot = Point3{0, 0, 0};
    for (int i = 0; i < n_stops; ++i) {
        p.stops.push_back(Point3{coord(rng), coord(rng), 500});
        p.refs.push_back(VpRef{i + 1, 1});
    }
    return p;
}

SolverConfig quick_config(std::uint64_t seed = 0) {
    SolverConfig cfg;
    cfg.max_iterations = 100;
    cfg.population_size = 30;
    cfg.seed = seed;
    return cfg;
}

} // namespace

TEST_CASE("tour_length on the corner square") {
    const auto p = corner_square();
    CHECK(tour_length(p, {0, 1, 2}) == doctest::Approx(400).epsilon(1e-12));
    CHECK(tour_length(TourProblem{{0, 0, 0}, {}, {}, DistanceMode::Euclid3d}, {}) == 0.0);

    TourProblem single;
    single.depot = Point3{0, 0, 0};
    single.stops = {Point3{150, 200, 500}};
    single.refs = {VpRef{1, 1}};
    single.distance_mode = DistanceMode::Horizontal2d;
    CHECK(tour_length(single, {0}) == doctest::Approx(500).epsilon(1e-12));

    CHECK_THROWS_AS(tour_length(corner_square(), {0, 1}), ValidationError);
    CHECK_THROWS_AS(tour_length(corner_square(), {0, 1, 1}), ValidationError);
}

TEST_CASE("decode_keys argsort semantics") {
    CHECK(decode_keys({0.9, 0.1, 0.5}) == std::vector<int>{1, 2, 0});
    CHECK(decode_keys({0.1, 0.2, 0.3, 0.4}) == std::vector<int>{0, 1, 2, 3});
    CHECK(decode_keys({0.5, 0.5, 0.5}) == std::vector<int>{0, 1, 2});
    CHECK(decode_keys({}).empty());
}

TEST_CASE("decode_keys always yields a permutation") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> key(-10, 10);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> keys(1 + trial % 17);
        for (double& k : keys) {
            k = key(rng);
        }
        const auto perm = decode_keys(keys);
        std::set<int> seen(perm.begin(), perm.end());
        CHECK(seen.size() == keys.size());
        CHECK(*seen.begin() == 0);
        CHECK(*seen.rbegin() == static_cast<int>(keys.size()) - 1);
    }
}

TEST_CASE("solve_exact small cases") {
    const auto p = corner_square();
    const auto res = solve_exact(p);
    CHECK(res.length == doctest::Approx(400).epsilon(1e-12));
    CHECK(tour_length(p, res.order) == res.length);

    // 3 stops: the enumeration considers 3 reversal-distinct closed tours
    CHECK(res.evaluations == 3);

    CHECK_THROWS_AS(solve_exact(random_problem(11, 0)), ValidationError);
}

TEST_CASE("metaheuristics find the corner-square optimum") {
    const auto p = corner_square();
    for (auto choice : {SolverChoice::Pso, SolverChoice::Ga, SolverChoice::Aco}) {
        const auto res = solve(p, choice, quick_config(1));
        CHECK(res.length == doctest::Approx(400).epsilon(1e-9));
        CHECK(tour_length(p, res.order) == res.length);
    }
}

TEST_CASE("solver contracts: determinism, history, exactness bound") {
    for (std::uint64_t seed : {0ULL, 1ULL, 2ULL}) {
        const auto p = random_problem(8, 100 + seed);
        const auto exact = solve_exact(p);
        for (auto choice : {SolverChoice::Pso, SolverChoice::Ga, SolverChoice::Aco}) {
            const auto a = solve(p, choice, quick_config(seed));
            const auto b = solve(p, choice, quick_config(seed));
            CHECK(a.order == b.order);
            CHECK(a.length == b.length);
            CHECK(a.history == b.history);

            CHECK(tour_length(p, a.order) == doctest::Approx(a.length).epsilon(1e-12));
            CHECK(a.length >= exact.length - 1e-9);

            CHECK(a.history.size() == 100);
            for (std::size_t i = 1; i < a.history.size(); ++i) {
                CHECK(a.history[i] <= a.history[i - 1]);
            }
            CHECK(a.history.back() == a.length);
        }
    }
}

TEST_CASE("more iterations never worsen the seeded best") {
    const auto p = random_problem(10, 55);
    for (auto choice : {SolverChoice::Pso, SolverChoice::Ga, SolverChoice::Aco}) {
        SolverConfig short_cfg = quick_config(3);
        short_cfg.max_iterations = 40;
        SolverConfig long_cfg = quick_config(3);
        long_cfg.max_iterations = 120;
        const auto a = solve(p, choice, short_cfg);
        const auto b = solve(p, choice, long_cfg);
        CHECK(b.length <= a.length);
        // shared prefix of the history: same stream, same bests
        for (int i = 0; i < 40; ++i) {
            CHECK(b.history[i] == a.history[i]);
        }
    }
}

TEST_CASE("degenerate budgets and configs") {
    SolverConfig cfg;
    cfg.max_iterations = 0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = SolverConfig{};
    cfg.population_size = 1;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = SolverConfig{};
    cfg.ga.mutation_rate = 1.5;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);

    // population 2, one iteration still yields a valid tour
    SolverConfig tiny;
    tiny.max_iterations = 1;
    tiny.population_size = 2;
    const auto p = random_problem(6, 9);
    const auto res = solve_ga(p, tiny);
    CHECK(tour_length(p, res.order) == doctest::Approx(res.length).epsilon(1e-12));
}

TEST_CASE("drop_to_budget basics") {
    EnergyModel em{1.0, 0.0001, 1e9};
    const auto p = corner_square();
    const std::vector<bool> unprotected(3, false);
    auto res = drop_to_budget(p, {0, 1, 2}, em, unprotected);
    CHECK(res.dropped.empty());
    CHECK(res.order == std::vector<int>{0, 1, 2});

    // 1D: depot 0, stops at 100 and 10000; only the near stop fits 1000
    TourProblem line;
    line.depot = Point3{0, 0, 0};
    line.stops = {Point3{100, 0, 0}, Point3{10000, 0, 0}};
    line.refs = {VpRef{1, 1}, VpRef{2, 1}};
    EnergyModel tight{1.0, 1e-9, 1000.0};
    res = drop_to_budget(line, {0, 1}, tight, {false, false});
    CHECK(res.order == std::vector<int>{0});
    CHECK(res.dropped == std::vector<int>{1});
}

TEST_CASE("drop_to_budget respects protected stops until forced") {
    TourProblem line;
    line.depot = Point3{0, 0, 0};
    line.stops = {Point3{100, 0, 0}, Point3{10000, 0, 0}};
    line.refs = {VpRef{1, 1}, VpRef{2, 1}};
    EnergyModel tight{1.0, 1e-9, 1000.0};

    // protecting the far stop sacrifices the near one first; once the far
    // stop proves infeasible too, the near stop is reclaimed
    auto res = drop_to_budget(line, {0, 1}, tight, {false, true});
    CHECK(res.order == std::vector<int>{0});
    CHECK(res.dropped == std::vector<int>{1});

    // protecting the near stop keeps it
    res = drop_to_budget(line, {0, 1}, tight, {true, false});
    CHECK(res.order == std::vector<int>{0});
}

TEST_CASE("drop_to_budget satisfies the budget and is locally maximal") {
    std::mt19937_64 seeder(77);
    for (int trial = 0; trial < 50; ++trial) {
        const auto p = random_problem(8, seeder());
        const auto exact = solve_exact(p);
        EnergyModel em{1.0, 100.0, 0.6 * (exact.length + 8 * 100.0)};
        const std::vector<bool> unprotected(8, false);
        const auto res = drop_to_budget(p, exact.order, em, unprotected);

        // budget respected, partition clean
        std::vector<int> all = res.order;
        all.insert(all.end(), res.dropped.begin(), res.dropped.end());
        std::sort(all.begin(), all.end());
        std::vector<int> expect(8);
        std::iota(expect.begin(), expect.end(), 0);
        CHECK(all == expect);

        double len = 0.0;
        if (!res.order.empty()) {
            TourProblem sub = p;
            sub.stops.clear();
            sub.refs.clear();
            for (int s : res.order) {
                sub.stops.push_back(p.stops[s]);
                sub.refs.push_back(p.refs[s]);
            }
            std::vector<int> identity(sub.stop_count());
            std::iota(identity.begin(), identity.end(), 0);
            len = tour_length(sub, identity);
        }
        const double energy = em.e_flight * len + em.e_image * res.order.size();
        CHECK(energy <= em.e_max);

        // no single dropped stop can be re-inserted anywhere within budget
        for (int dropped : res.dropped) {
            for (std::size_t pos = 0; pos <= res.order.size(); ++pos) {
                std::vector<int> candidate = res.order;
                candidate.insert(candidate.begin() + pos, dropped);
                TourProblem sub = p;
                sub.stops.clear();
                sub.refs.clear();
                std::vector<int> identity(candidate.size());
                std::iota(identity.begin(), identity.end(), 0);
                for (int s : candidate) {
                    sub.stops.push_back(p.stops[s]);
                    sub.refs.push_back(p.refs[s]);
                }
                const double cand_energy = em.e_flight * tour_length(sub, identity) +
                                           em.e_image * candidate.size();
                CHECK(cand_energy > em.e_max);
            }
        }
    }
}

TEST_CASE("removing one visit never increases the tour length") {
    std::mt19937_64 seeder(123);
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = random_problem(7, seeder());
        std::vector<int> order(7);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), seeder);
        const double full = tour_length(p, order);
        for (std::size_t i = 0; i < order.size(); ++i) {
            std::vector<int> reduced = order;
            reduced.erase(reduced.begin() + i);
            TourProblem sub = p;
            sub.stops.clear();
            sub.refs.clear();
            for (int s : reduced) {
                sub.stops.push_back(p.stops[s]);
                sub.refs.push_back(p.refs[s]);
            }
            std::vector<int> identity(reduced.size());
            std::iota(identity.begin(), identity.end(), 0);
            CHECK(tour_length(sub, identity) <= full + 1e-9);
        }
    }
}

TEST_CASE("plan_cluster returns a budget-feasible route") {
    const auto p = random_problem(12, 2024);
    // generous budget covers everything
    EnergyModel generous{1.0, 10.0, 1e9};
    std::vector<VpRef> dropped;
    Route route = plan_cluster(p, generous, SolverChoice::Pso, quick_config(5), 3,
                               std::vector<bool>(12, false), &dropped);
    CHECK(route.uav_id == 3);
    CHECK(route.covered_count() == 12);
    CHECK(dropped.empty());
    CHECK(route_energy(route, generous) <= generous.e_max);

    // tight budget forces drops but stays feasible
    EnergyModel tight{1.0, 100.0, 2500.0};
    dropped.clear();
    route = plan_cluster(p, tight, SolverChoice::Pso, quick_config(5), 1,
                         std::vector<bool>(12, false), &dropped);
    CHECK(route_energy(route, tight) <= tight.e_max);
    CHECK(route.covered_count() + static_cast<int>(dropped.size()) == 12);

    // empty cluster
    TourProblem empty;
    empty.depot = Point3{0, 0, 0};
    route = plan_cluster(empty, tight, SolverChoice::Pso, quick_config(0), 2, {}, nullptr);
    CHECK(route.visits.empty());
    CHECK(route_energy(route, tight) == 0.0);
}
