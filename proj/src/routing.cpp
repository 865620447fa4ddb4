#include "uavcov/routing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "uavcov/errors.hpp"
#include "uavcov/rng.hpp"

namespace uavcov {

void SolverConfig::validate() const {
    if (max_iterations < 1) {
        throw ValidationError("max_iterations must be >= 1");
    }
    if (population_size < 2) {
        throw ValidationError("population_size must be >= 2");
    }
    auto rate_ok = [](double r) { return r >= 0.0 && r <= 1.0; };
    if (!rate_ok(ga.crossover_rate) || !rate_ok(ga.mutation_rate) || !rate_ok(aco.evaporation)) {
        throw ValidationError("rates must lie in [0, 1]");
    }
    if (ga.tournament_size < 1) {
        throw ValidationError("tournament size must be >= 1");
    }
}

std::string to_string(SolverChoice solver) {
    switch (solver) {
    case SolverChoice::Pso:
        return "PSO";
    case SolverChoice::Ga:
        return "GA";
    case SolverChoice::Aco:
        return "ACO";
    }
    return "?";
}

SolverChoice parse_solver_choice(const std::string& name) {
    std::string up;
    for (char c : name) {
        up += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    if (up == "PSO") {
        return SolverChoice::Pso;
    }
    if (up == "GA") {
        return SolverChoice::Ga;
    }
    if (up == "ACO") {
        return SolverChoice::Aco;
    }
    throw ValidationError("unknown solver '" + name + "' (expected pso, ga or aco)");
}

namespace {

// Node 0 is the depot; nodes 1..n are stops.
struct DistMatrix {
    int n = 0;
    std::vector<double> d; // (n+1) x (n+1)

    explicit DistMatrix(const TourProblem& p) : n(p.stop_count()), d((n + 1) * (n + 1), 0.0) {
        auto pos = [&](int node) { return node == 0 ? p.depot : p.stops[node - 1]; };
        for (int i = 0; i <= n; ++i) {
            for (int j = i + 1; j <= n; ++j) {
                const double dist = leg_distance(pos(i), pos(j), p.distance_mode);
                d[i * (n + 1) + j] = dist;
                d[j * (n + 1) + i] = dist;
            }
        }
    }

    double at(int i, int j) const { return d[i * (n + 1) + j]; }

    double tour(const std::vector<int>& order) const {
        if (order.empty()) {
            return 0.0;
        }
        double len = at(0, order.front() + 1);
        for (std::size_t i = 0; i + 1 < order.size(); ++i) {
            len += at(order[i] + 1, order[i + 1] + 1);
        }
        len += at(order.back() + 1, 0);
        return len;
    }
};

void check_permutation(const std::vector<int>& order, int n) {
    if (static_cast<int>(order.size()) != n) {
        throw ValidationError("order is not a permutation of the stop set");
    }
    std::vector<bool> seen(n, false);
    for (int i : order) {
        if (i < 0 || i >= n || seen[i]) {
            throw ValidationError("order is not a permutation of the stop set");
        }
        seen[i] = true;
    }
}

TourResult trivial_result(const TourProblem& problem, int iterations) {
    TourResult res;
    if (problem.stop_count() == 1) {
        res.order = {0};
    }
    res.length = tour_length(problem, res.order);
    res.history.assign(std::max(iterations, 1), res.length);
    res.evaluations = 1;
    return res;
}

} // namespace

double tour_length(const TourProblem& problem, const std::vector<int>& order) {
    check_permutation(order, problem.stop_count());
    if (order.empty()) {
        return 0.0;
    }
    double len = leg_distance(problem.depot, problem.stops[order.front()], problem.distance_mode);
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        len += leg_distance(problem.stops[order[i]], problem.stops[order[i + 1]],
                            problem.distance_mode);
    }
    len += leg_distance(problem.stops[order.back()], problem.depot, problem.distance_mode);
    return len;
}

std::vector<int> decode_keys(const std::vector<double>& keys) {
    std::vector<int> order(keys.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return keys[a] < keys[b]; });
    return order;
}

TourResult solve_pso(const TourProblem& problem, const SolverConfig& config) {
    config.validate();
    if (problem.stop_count() < 1) {
        throw ValidationError("solver needs at least one stop");
    }
    const int n = problem.stop_count();
    if (n == 1) {
        return trivial_result(problem, config.max_iterations);
    }
    const DistMatrix dm(problem);
    auto rng = make_rng(config.seed, "pso");
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const int pop = config.population_size;
    std::vector<std::vector<double>> x(pop, std::vector<double>(n));
    std::vector<std::vector<double>> v(pop, std::vector<double>(n, 0.0));
    std::vector<std::vector<double>> pbest_x(pop);
    std::vector<double> pbest_f(pop);

    TourResult res;
    res.length = std::numeric_limits<double>::infinity();

    for (int i = 0; i < pop; ++i) {
        for (double& xi : x[i]) {
            xi = unit(rng);
        }
        const auto order = decode_keys(x[i]);
        const double f = dm.tour(order);
        ++res.evaluations;
        pbest_x[i] = x[i];
        pbest_f[i] = f;
        if (f < res.length) {
            res.length = f;
            res.order = order;
        }
    }

    std::vector<double> gbest_x;
    {
        int gi = static_cast<int>(std::min_element(pbest_f.begin(), pbest_f.end()) -
                                  pbest_f.begin());
        gbest_x = pbest_x[gi];
    }

    constexpr double kVelClamp = 0.2;
    for (int iter = 0; iter < config.max_iterations; ++iter) {
        for (int i = 0; i < pop; ++i) {
            for (int d = 0; d < n; ++d) {
                const double r1 = unit(rng);
                const double r2 = unit(rng);
                double vel = config.pso.inertia * v[i][d] +
                             config.pso.cognitive * r1 * (pbest_x[i][d] - x[i][d]) +
                             config.pso.social * r2 * (gbest_x[d] - x[i][d]);
                vel = std::clamp(vel, -kVelClamp, kVelClamp);
                v[i][d] = vel;
                x[i][d] = std::clamp(x[i][d] + vel, 0.0, 1.0);
            }
            const auto order = decode_keys(x[i]);
            const double f = dm.tour(order);
            ++res.evaluations;
            if (f < pbest_f[i]) {
                pbest_f[i] = f;
                pbest_x[i] = x[i];
                if (f < res.length) {
                    res.length = f;
                    res.order = order;
                    gbest_x = x[i];
                }
            }
        }
        res.history.push_back(res.length);
    }
    return res;
}

namespace {

// OX1: keep parent1's segment [a, b], fill the rest from parent2 in order.
std::vector<int> order_crossover(const std::vector<int>& p1, const std::vector<int>& p2,
                                 std::mt19937_64& rng) {
    const int n = static_cast<int>(p1.size());
    std::uniform_int_distribution<int> pick(0, n - 1);
    int a = pick(rng);
    int b = pick(rng);
    if (a > b) {
        std::swap(a, b);
    }
    std::vector<int> child(n, -1);
    std::vector<bool> used(n, false);
    for (int i = a; i <= b; ++i) {
        child[i] = p1[i];
        used[p1[i]] = true;
    }
    int fill = (b + 1) % n;
    for (int i = 0; i < n; ++i) {
        const int gene = p2[(b + 1 + i) % n];
        if (!used[gene]) {
            child[fill] = gene;
            fill = (fill + 1) % n;
        }
    }
    return child;
}

} // namespace

TourResult solve_ga(const TourProblem& problem, const SolverConfig& config) {
    config.validate();
    if (problem.stop_count() < 1) {
        throw ValidationError("solver needs at least one stop");
    }
    const int n = problem.stop_count();
    if (n == 1) {
        return trivial_result(problem, config.max_iterations);
    }
    const DistMatrix dm(problem);
    auto rng = make_rng(config.seed, "ga");
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> pick_pos(0, n - 1);

    const int pop = config.population_size;
    std::vector<std::vector<int>> population(pop);
    std::vector<double> fitness(pop);

    TourResult res;
    res.length = std::numeric_limits<double>::infinity();

    std::vector<int> base(n);
    std::iota(base.begin(), base.end(), 0);
    for (int i = 0; i < pop; ++i) {
        population[i] = base;
        std::shuffle(population[i].begin(), population[i].end(), rng);
        fitness[i] = dm.tour(population[i]);
        ++res.evaluations;
        if (fitness[i] < res.length) {
            res.length = fitness[i];
            res.order = population[i];
        }
    }

    std::uniform_int_distribution<int> pick_ind(0, pop - 1);
    auto tournament = [&]() {
        int best = pick_ind(rng);
        for (int t = 1; t < config.ga.tournament_size; ++t) {
            const int cand = pick_ind(rng);
            if (fitness[cand] < fitness[best]) {
                best = cand;
            }
        }
        return best;
    };

    for (int iter = 0; iter < config.max_iterations; ++iter) {
        std::vector<std::vector<int>> next;
        next.reserve(pop);
        // elitism of 1
        const int elite = static_cast<int>(std::min_element(fitness.begin(), fitness.end()) -
                                           fitness.begin());
        next.push_back(population[elite]);
        while (static_cast<int>(next.size()) < pop) {
            const int p1 = tournament();
            const int p2 = tournament();
            std::vector<int> child;
            if (unit(rng) < config.ga.crossover_rate) {
                child = order_crossover(population[p1], population[p2], rng);
            } else {
                child = population[p1];
            }
            if (unit(rng) < config.ga.mutation_rate) {
                const int i = pick_pos(rng);
                const int j = pick_pos(rng);
                std::swap(child[i], child[j]);
            }
            next.push_back(std::move(child));
        }
        population = std::move(next);
        for (int i = 0; i < pop; ++i) {
            fitness[i] = dm.tour(population[i]);
            ++res.evaluations;
            if (fitness[i] < res.length) {
                res.length = fitness[i];
                res.order = population[i];
            }
        }
        res.history.push_back(res.length);
    }
    return res;
}

TourResult solve_aco(const TourProblem& problem, const SolverConfig& config) {
    config.validate();
    if (problem.stop_count() < 1) {
        throw ValidationError("solver needs at least one stop");
    }
    const int n = problem.stop_count();
    if (n == 1) {
        return trivial_result(problem, config.max_iterations);
    }
    const DistMatrix dm(problem);
    auto rng = make_rng(config.seed, "aco");
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    // nearest-neighbor tour seeds the pheromone scale
    double nn_len = 0.0;
    {
        std::vector<bool> visited(n, false);
        int cur = 0; // depot
        for (int step = 0; step < n; ++step) {
            int best = -1;
            double best_d = std::numeric_limits<double>::infinity();
            for (int j = 0; j < n; ++j) {
                if (!visited[j] && dm.at(cur, j + 1) < best_d) {
                    best_d = dm.at(cur, j + 1);
                    best = j;
                }
            }
            visited[best] = true;
            nn_len += best_d;
            cur = best + 1;
        }
        nn_len += dm.at(cur, 0);
    }
    const double tau0 = static_cast<double>(config.population_size) / std::max(nn_len, 1e-12);
    std::vector<double> tau((n + 1) * (n + 1), tau0);
    auto tau_at = [&](int i, int j) -> double& { return tau[i * (n + 1) + j]; };

    TourResult res;
    res.length = std::numeric_limits<double>::infinity();

    std::vector<double> weight(n);
    std::vector<int> tour_buf(n);
    std::vector<std::vector<int>> ant_tours(config.population_size);
    std::vector<double> ant_lens(config.population_size);

    for (int iter = 0; iter < config.max_iterations; ++iter) {
        for (int ant = 0; ant < config.population_size; ++ant) {
            std::vector<bool> visited(n, false);
            int cur = 0;
            for (int step = 0; step < n; ++step) {
                double total = 0.0;
                for (int j = 0; j < n; ++j) {
                    if (visited[j]) {
                        weight[j] = 0.0;
                        continue;
                    }
                    const double dist = std::max(dm.at(cur, j + 1), 1e-12);
                    weight[j] = std::pow(tau_at(cur, j + 1), config.aco.alpha) *
                                std::pow(1.0 / dist, config.aco.beta);
                    total += weight[j];
                }
                int chosen = -1;
                if (total > 0.0) {
                    const double threshold = unit(rng) * total;
                    double acc = 0.0;
                    for (int j = 0; j < n; ++j) {
                        if (visited[j]) {
                            continue;
                        }
                        acc += weight[j];
                        if (acc >= threshold) {
                            chosen = j;
                            break;
                        }
                    }
                }
                if (chosen < 0) { // numeric underflow: take the first unvisited
                    for (int j = 0; j < n; ++j) {
                        if (!visited[j]) {
                            chosen = j;
                            break;
                        }
                    }
                }
                visited[chosen] = true;
                tour_buf[step] = chosen;
                cur = chosen + 1;
            }
            ant_tours[ant] = tour_buf;
            ant_lens[ant] = dm.tour(tour_buf);
            ++res.evaluations;
            if (ant_lens[ant] < res.length) {
                res.length = ant_lens[ant];
                res.order = ant_tours[ant];
            }
        }
        // evaporation + deposit
        for (double& t : tau) {
            t *= (1.0 - config.aco.evaporation);
        }
        for (int ant = 0; ant < config.population_size; ++ant) {
            const double deposit = 1.0 / std::max(ant_lens[ant], 1e-12);
            int prev = 0;
            for (int s : ant_tours[ant]) {
                tau_at(prev, s + 1) += deposit;
                tau_at(s + 1, prev) += deposit;
                prev = s + 1;
            }
            tau_at(prev, 0) += deposit;
            tau_at(0, prev) += deposit;
        }
        res.history.push_back(res.length);
    }
    return res;
}

TourResult solve(const TourProblem& problem, SolverChoice solver, const SolverConfig& config) {
    switch (solver) {
    case SolverChoice::Pso:
        return solve_pso(problem, config);
    case SolverChoice::Ga:
        return solve_ga(problem, config);
    case SolverChoice::Aco:
        return solve_aco(problem, config);
    }
    throw ValidationError("unknown solver choice");
}

TourResult solve_exact(const TourProblem& problem) {
    const int n = problem.stop_count();
    if (n > 10) {
        throw ValidationError("exact solver limited to 10 stops, got " + std::to_string(n));
    }
    TourResult res;
    if (n == 0) {
        res.length = 0.0;
        res.history = {0.0};
        return res;
    }
    const DistMatrix dm(problem);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    res.length = std::numeric_limits<double>::infinity();
    do {
        // closed depot tours are reversal-symmetric; enumerate one of each pair
        if (n > 1 && perm.front() > perm.back()) {
            continue;
        }
        const double len = dm.tour(perm);
        ++res.evaluations;
        if (len < res.length) {
            res.length = len;
            res.order = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    res.history = {res.length};
    return res;
}

namespace {

// Cheapest-insertion reclaim: put dropped stops back while the budget allows,
// so no single dropped stop fits anywhere afterwards (local maximality).
void reclaim_slack(const DistMatrix& dm, const EnergyModel& em, std::vector<int>& order,
                   std::vector<int>& dropped) {
    auto energy = [&](const std::vector<int>& o) {
        if (o.empty()) {
            return 0.0;
        }
        return em.e_flight * dm.tour(o) + em.e_image * static_cast<double>(o.size());
    };
    bool inserted = true;
    while (inserted && !dropped.empty()) {
        inserted = false;
        const double base_energy = energy(order);
        int best_stop = -1;
        std::size_t best_at = 0;
        double best_added = std::numeric_limits<double>::infinity();
        for (int s : dropped) {
            for (std::size_t pos = 0; pos <= order.size(); ++pos) {
                const int prev = (pos == 0) ? 0 : order[pos - 1] + 1;
                const int next = (pos == order.size()) ? 0 : order[pos] + 1;
                const double added_dist =
                    dm.at(prev, s + 1) + dm.at(s + 1, next) - dm.at(prev, next);
                const double added = em.e_flight * added_dist + em.e_image;
                if (base_energy + added <= em.e_max && added < best_added) {
                    best_added = added;
                    best_stop = s;
                    best_at = pos;
                }
            }
        }
        if (best_stop >= 0) {
            order.insert(order.begin() + best_at, best_stop);
            dropped.erase(std::find(dropped.begin(), dropped.end(), best_stop));
            inserted = true;
        }
    }
}

} // namespace

DropResult drop_to_budget(const TourProblem& problem, const std::vector<int>& order,
                          const EnergyModel& em, const std::vector<bool>& protected_stops) {
    check_permutation(order, problem.stop_count());
    em.validate();
    const DistMatrix dm(problem);

    DropResult res;
    res.order = order;

    auto energy = [&](const std::vector<int>& o) {
        if (o.empty()) {
            return 0.0;
        }
        return em.e_flight * dm.tour(o) + em.e_image * static_cast<double>(o.size());
    };

    while (energy(res.order) > em.e_max) {
        const auto& o = res.order;
        bool any_unprotected = false;
        for (int s : o) {
            if (!protected_stops[s]) {
                any_unprotected = true;
                break;
            }
        }
        int best_pos = -1;
        double best_saving = -std::numeric_limits<double>::infinity();
        for (std::size_t pos = 0; pos < o.size(); ++pos) {
            if (any_unprotected && protected_stops[o[pos]]) {
                continue;
            }
            const int prev = (pos == 0) ? 0 : o[pos - 1] + 1;
            const int next = (pos + 1 == o.size()) ? 0 : o[pos + 1] + 1;
            const double dist_saving =
                dm.at(prev, o[pos] + 1) + dm.at(o[pos] + 1, next) - dm.at(prev, next);
            const double saving = em.e_flight * dist_saving + em.e_image;
            if (saving > best_saving ||
                (saving == best_saving && best_pos >= 0 && o[pos] < o[best_pos])) {
                best_saving = saving;
                best_pos = static_cast<int>(pos);
            }
        }
        res.dropped.push_back(res.order[best_pos]);
        res.order.erase(res.order.begin() + best_pos);
    }

    // Greedy removal can overshoot the budget; reclaim slack so that no
    // single dropped stop fits back anywhere (local maximality).
    reclaim_slack(dm, em, res.order, res.dropped);
    std::sort(res.dropped.begin(), res.dropped.end());
    return res;
}

Route plan_cluster(const TourProblem& problem, const EnergyModel& em, SolverChoice solver,
                   const SolverConfig& config, int uav_id,
                   const std::vector<bool>& protected_stops, std::vector<VpRef>* dropped_out) {
    Route route;
    route.uav_id = uav_id;
    if (problem.stop_count() == 0) {
        return route;
    }

    const DistMatrix dm(problem);
    auto subset_length = [&](const std::vector<int>& o) { return dm.tour(o); };

    const TourResult full = solve(problem, solver, config);
    DropResult dropped = drop_to_budget(problem, full.order, em, protected_stops);

    std::vector<int> final_order = dropped.order;
    if (!dropped.dropped.empty() && !dropped.order.empty()) {
        // one re-optimization pass over the survivors; keep it only if shorter
        TourProblem reduced;
        reduced.depot = problem.depot;
        reduced.distance_mode = problem.distance_mode;
        for (int s : dropped.order) {
            reduced.stops.push_back(problem.stops[s]);
            reduced.refs.push_back(problem.refs[s]);
        }
        SolverConfig reopt_cfg = config;
        reopt_cfg.seed = substream_seed(config.seed, "reopt");
        const TourResult second = solve(reduced, solver, reopt_cfg);
        if (second.length < subset_length(dropped.order)) {
            final_order.clear();
            for (int i : second.order) {
                final_order.push_back(dropped.order[i]);
            }
        }
        // the shorter tour may free enough budget to cover more stops
        reclaim_slack(dm, em, final_order, dropped.dropped);
        std::sort(dropped.dropped.begin(), dropped.dropped.end());
    }

    for (int s : final_order) {
        route.visits.push_back(problem.refs[s]);
    }
    route.total_distance = subset_length(final_order);
    if (dropped_out) {
        for (int s : dropped.dropped) {
            dropped_out->push_back(problem.refs[s]);
        }
    }
    return route;
}

} // namespace uavcov
