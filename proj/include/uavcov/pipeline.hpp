#pragma once

#include <cstdint>

#include "uavcov/clustering.hpp"
#include "uavcov/model.hpp"
#include "uavcov/routing.hpp"
#include "uavcov/scenario.hpp"

namespace uavcov {

struct MethodPair {
    ClusteringMethod clustering = ClusteringMethod::Adpc;
    SolverChoice solver = SolverChoice::Pso;

    friend bool operator==(const MethodPair&, const MethodPair&) = default;
};

std::string to_string(const MethodPair& method);
MethodPair parse_method_pair(const std::string& name); // e.g. "ADPC-PSO"

struct PlanTimings {
    double clustering_seconds = 0.0;
    double solver_seconds = 0.0;
};

// Full cluster-first route-second pipeline: viewpoints, clustering, then one
// budget-feasible route per cluster. Clusters are planned far-from-base
// first so the per-target coverage guard sees earlier drops.
Solution plan_mission(const Scenario& scenario, int n_uavs, const MethodPair& method,
                      const EnergyModel& em, const AdpcParams& adpc,
                      const SolverConfig& solver_config, std::uint64_t seed,
                      PlanTimings* timings = nullptr);

} // namespace uavcov
