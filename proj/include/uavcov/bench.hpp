#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "uavcov/clustering.hpp"
#include "uavcov/model.hpp"
#include "uavcov/pipeline.hpp"
#include "uavcov/routing.hpp"

namespace uavcov {

struct ExperimentPlan {
    int targets_m = 20;
    double area = 2000.0;
    double altitude_h = 500.0;
    double pitch_theta = 60.0;
    std::vector<int> n_values{2, 3, 4, 5, 6};
    std::vector<int> k_values{3};
    int trials = 50;
    std::vector<MethodPair> methods;
    EnergyModel energy;
    AdpcParams adpc;
    SolverConfig solver_config;
    std::uint64_t base_seed = 0;

    void validate() const;
};

std::string plan_to_text(const ExperimentPlan& plan);
ExperimentPlan parse_plan_text(const std::string& text);
ExperimentPlan load_plan(const std::string& path);

struct TrialRecord {
    std::string method;
    int n_uavs = 0;
    int view_count = 0;
    int trial = 0;
    std::uint64_t seed = 0; // scenario seed, shared by all methods of the trial
    double coverage_rate = 0.0;
    bool feasible = false;
    double total_distance = 0.0;
    double clustering_runtime = 0.0; // seconds
    double solver_runtime = 0.0;     // seconds
    std::vector<double> per_uav_energy;
    std::string error; // empty on success
};

extern const char* const kRecordCsvHeader;

std::string record_to_csv(const TrialRecord& record);
TrialRecord parse_record_csv(const std::string& line);
std::vector<TrialRecord> load_records(const std::string& path);

TrialRecord run_trial(const ExperimentPlan& plan, const MethodPair& method, int n_uavs,
                      int view_count, int trial_index);

// Cartesian product of methods x N x K x trials; each record is handed to the
// sink as soon as it finishes so partial output stays valid.
using RecordSink = std::function<void(const TrialRecord&)>;
std::vector<TrialRecord> run_sweep(const ExperimentPlan& plan, const RecordSink& sink = {});

struct AggregateCell {
    std::string method;
    int n_uavs = 0;
    int view_count = 0;
    int count = 0;
    double mean_coverage = 0.0;
    double std_coverage = 0.0; // sample standard deviation
    double mean_clustering_runtime = 0.0;
    double median_clustering_runtime = 0.0;
    double mean_solver_runtime = 0.0;
    double median_solver_runtime = 0.0;
    double mean_total_distance = 0.0;
};

std::vector<AggregateCell> aggregate(const std::vector<TrialRecord>& records);

struct TrendCheck {
    std::string name;
    bool pass = false;
    double margin = 0.0; // worst-case slack; negative means the predicate failed
    std::string detail;
};

struct TrendReport {
    std::vector<TrendCheck> checks;
    bool all_pass = true;
};

// Evaluates the benchmark predicates: coverage monotone in N, coverage
// non-increasing in K, ADPC-PSO dominance over the PSO baselines, clustering
// runtime ordering DPC < ADPC < KMEANS, solver ordering GA < PSO < ACO, and
// ADPC runtime monotone in K. Mean predicates get one pooled standard error
// of slack; runtime orderings compare medians.
TrendReport trend_checks(const std::vector<AggregateCell>& aggregates);

// CSV files per figure analogue: coverage_vs_N.csv, coverage_vs_K.csv,
// runtime_vs_K.csv.
void emit_plot_data(const std::vector<AggregateCell>& aggregates, const std::string& out_dir);

std::vector<AggregateCell> load_plot_data(const std::string& csv_path);

// Static path map: base, targets, viewpoints, per-UAV polylines; dropped
// viewpoints carry a distinct marker class.
std::string solution_svg(const Scenario& scenario, const Solution& solution);
void write_solution_svg(const Scenario& scenario, const Solution& solution,
                        const std::string& path);

} // namespace uavcov
