#pragma once

#include <string>
#include <vector>

#include "uavcov/geometry.hpp"
#include "uavcov/scenario.hpp"

namespace uavcov {

// Linear energy model: flight cost per meter, imaging cost per covered
// viewpoint, and the per-UAV budget.
struct EnergyModel {
    double e_flight = 1.0;  // energy units per meter
    double e_image = 200.0; // energy units per covered viewpoint
    double e_max = 8000.0;  // per-UAV budget

    void validate() const;
};

struct Route {
    int uav_id = 0;              // 1..N
    std::vector<VpRef> visits;   // tour order, base -> visits -> base
    double total_distance = 0.0; // meters, closed tour

    int covered_count() const { return static_cast<int>(visits.size()); }
};

struct Solution {
    std::vector<Route> routes;  // one per UAV
    std::vector<VpRef> dropped; // viewpoints left uncovered
};

struct SolutionMetrics {
    double coverage_rate = 0.0;
    std::vector<double> per_uav_energy;
    int targets_fully_missed = 0;
    bool feasible = false;
    std::vector<int> per_target_covered; // index m-1 -> covered viewpoints of target m
    double total_distance = 0.0;
};

struct UniquenessReport {
    bool pass = true;
    std::vector<VpRef> duplicates;
};

struct PerTargetReport {
    bool pass = true;
    std::vector<int> uncovered_targets;
};

// Energy of one route under the linear model: e_flight*d + e_image*covered.
double route_energy(const Route& route, const EnergyModel& em);

// Per-UAV budget verdicts; the comparison is an inclusive <=.
std::vector<bool> check_energy(const Solution& solution, const EnergyModel& em);

UniquenessReport check_uniqueness(const Solution& solution);

PerTargetReport check_per_target(const Solution& solution, const Scenario& scenario);

SolutionMetrics compute_metrics(const Solution& solution, const Scenario& scenario,
                                const EnergyModel& em);

// Recomputes each route's closed-tour length from scenario geometry and
// checks it against the stored total_distance (1e-6 m tolerance); also
// checks that covered and dropped partition the full viewpoint set.
void validate_solution_geometry(const Solution& solution, const Scenario& scenario,
                                DistanceMode mode);

std::string solution_to_text(const Solution& solution);
Solution parse_solution_text(const std::string& text);
Solution load_solution(const std::string& path);
void save_solution(const Solution& solution, const std::string& path);

// Flat key=value block for logs and CSV post-processing.
std::string metrics_to_text(const SolutionMetrics& metrics);

} // namespace uavcov
