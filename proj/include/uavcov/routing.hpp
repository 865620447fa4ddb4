#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uavcov/geometry.hpp"
#include "uavcov/model.hpp"
#include "uavcov/scenario.hpp"

namespace uavcov {

// Closed-tour instance for one cluster: depot plus the stops to visit.
struct TourProblem {
    Point3 depot;
    std::vector<Point3> stops;
    std::vector<VpRef> refs; // parallel to stops
    DistanceMode distance_mode = DistanceMode::Euclid3d;

    int stop_count() const { return static_cast<int>(stops.size()); }
};

struct PsoParams {
    double inertia = 0.729;
    double cognitive = 1.49445;
    double social = 1.49445;
};

struct GaParams {
    double crossover_rate = 0.9;
    double mutation_rate = 0.1;
    int tournament_size = 3;
};

struct AcoParams {
    double alpha = 1.0;       // pheromone exponent
    double beta = 2.0;        // visibility exponent
    double evaporation = 0.5;
};

struct SolverConfig {
    int max_iterations = 100;
    int population_size = 30;
    std::uint64_t seed = 0;
    PsoParams pso;
    GaParams ga;
    AcoParams aco;

    void validate() const;
};

struct TourResult {
    std::vector<int> order;      // permutation of stop indices (0-based)
    double length = 0.0;         // closed-tour length of `order`
    std::vector<double> history; // best-ever length per iteration, non-increasing
    long evaluations = 0;
};

enum class SolverChoice {
    Pso,
    Ga,
    Aco,
};

std::string to_string(SolverChoice solver);
SolverChoice parse_solver_choice(const std::string& name);

// Closed-tour length depot -> stops in order -> depot.
double tour_length(const TourProblem& problem, const std::vector<int>& order);

// Random-keys decoding: ascending argsort, ties by index.
std::vector<int> decode_keys(const std::vector<double>& keys);

TourResult solve_pso(const TourProblem& problem, const SolverConfig& config);
TourResult solve_ga(const TourProblem& problem, const SolverConfig& config);
TourResult solve_aco(const TourProblem& problem, const SolverConfig& config);
TourResult solve(const TourProblem& problem, SolverChoice solver, const SolverConfig& config);

// Exhaustive enumeration up to reversal symmetry; instances of <= 10 stops.
TourResult solve_exact(const TourProblem& problem);

struct DropResult {
    std::vector<int> order;   // surviving stops, tour order preserved
    std::vector<int> dropped; // stop indices removed
};

// Greedy largest-energy-saving removal until the route fits the budget.
// Protected stops (per-target coverage guardians) go last.
DropResult drop_to_budget(const TourProblem& problem, const std::vector<int>& order,
                          const EnergyModel& em, const std::vector<bool>& protected_stops);

// Solve, drop to budget, and re-optimize the survivors once if anything was
// dropped (keeping the better of the two tours). Returns a budget-feasible Route.
Route plan_cluster(const TourProblem& problem, const EnergyModel& em, SolverChoice solver,
                   const SolverConfig& config, int uav_id,
                   const std::vector<bool>& protected_stops, std::vector<VpRef>* dropped_out);

} // namespace uavcov
