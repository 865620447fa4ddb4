#include "uavcov/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

#include "uavcov/rng.hpp"
#include "uavcov/textio.hpp"

namespace uavcov {

std::string to_string(const MethodPair& method) {
    return to_string(method.clustering) + "-" + to_string(method.solver);
}

MethodPair parse_method_pair(const std::string& name) {
    auto dash = name.find('-');
    if (dash == std::string::npos) {
        throw ValidationError("method pair must look like ADPC-PSO, got '" + name + "'");
    }
    return MethodPair{parse_clustering_method(name.substr(0, dash)),
                      parse_solver_choice(name.substr(dash + 1))};
}

Solution plan_mission(const Scenario& scenario, int n_uavs, const MethodPair& method,
                      const EnergyModel& em, const AdpcParams& adpc,
                      const SolverConfig& solver_config, std::uint64_t seed,
                      PlanTimings* timings) {
    em.validate();
    solver_config.validate();
    if (n_uavs < 1) {
        throw ValidationError("UAV count N must be >= 1");
    }
    const auto viewpoints = generate_viewpoints(scenario);
    if (static_cast<int>(viewpoints.size()) < n_uavs) {
        throw ValidationError("fewer viewpoints than UAVs");
    }

    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    const Clustering clustering =
        cluster_viewpoints(viewpoints, n_uavs, method.clustering, scenario.base(), adpc,
                           substream_seed(seed, "clustering"));
    const auto t1 = clock::now();

    // plan far clusters first so protected-set bookkeeping sees their drops
    std::vector<int> cluster_order(n_uavs);
    std::iota(cluster_order.begin(), cluster_order.end(), 0);
    std::stable_sort(cluster_order.begin(), cluster_order.end(), [&](int a, int b) {
        if (clustering.center_base_distances[a] != clustering.center_base_distances[b]) {
            return clustering.center_base_distances[a] > clustering.center_base_distances[b];
        }
        return a < b;
    });

    // viewpoints of a target still alive (not dropped) across the solution
    std::vector<int> alive(scenario.target_count(), 0);
    for (const Viewpoint& vp : viewpoints) {
        ++alive[vp.ref.target_id - 1];
    }

    Solution solution;
    solution.routes.resize(n_uavs);

    for (int ci : cluster_order) {
        TourProblem problem;
        problem.depot = scenario.base();
        problem.distance_mode = adpc.distance_mode;
        for (std::size_t v = 0; v < viewpoints.size(); ++v) {
            if (clustering.assignment[v] == ci) {
                problem.stops.push_back(viewpoints[v].position);
                problem.refs.push_back(viewpoints[v].ref);
            }
        }
        std::vector<bool> protected_stops(problem.stop_count(), false);
        for (int s = 0; s < problem.stop_count(); ++s) {
            protected_stops[s] = (alive[problem.refs[s].target_id - 1] == 1);
        }

        SolverConfig cfg = solver_config;
        cfg.seed = substream_seed(seed, "cluster-solver", static_cast<std::uint64_t>(ci));
        std::vector<VpRef> dropped;
        solution.routes[ci] =
            plan_cluster(problem, em, method.solver, cfg, ci + 1, protected_stops, &dropped);
        for (const VpRef& vp : dropped) {
            --alive[vp.target_id - 1];
            solution.dropped.push_back(vp);
        }
    }
    std::sort(solution.dropped.begin(), solution.dropped.end());
    const auto t2 = clock::now();

    if (timings) {
        timings->clustering_seconds = std::chrono::duration<double>(t1 - t0).count();
        timings->solver_seconds = std::chrono::duration<double>(t2 - t1).count();
    }
    return solution;
}

} // namespace uavcov
