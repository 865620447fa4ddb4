#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include <CLI11.hpp>

#include "uavcov/bench.hpp"
#include "uavcov/model.hpp"
#include "uavcov/pipeline.hpp"
#include "uavcov/scenario.hpp"
#include "uavcov/textio.hpp"

namespace {

using namespace uavcov;

// exit codes: 0 success, 1 constraint-violation verdict, 2 usage/validation error
constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

struct EnergyFlags {
    double e_flight = EnergyModel{}.e_flight;
    double e_image = EnergyModel{}.e_image;
    double e_max = EnergyModel{}.e_max;

    EnergyModel to_model() const { return EnergyModel{e_flight, e_image, e_max}; }

    void attach(CLI::App* cmd) {
        cmd->add_option("--e-flight", e_flight, "Energy per meter of flight");
        cmd->add_option("--e-image", e_image, "Energy per covered viewpoint");
        cmd->add_option("--e-max", e_max, "Per-UAV energy budget");
    }
};

int cmd_generate(int m, double area, double h, double theta, int k, std::uint64_t seed,
                 const std::string& out) {
    const Scenario scenario = random_scenario(m, area, h, theta, k, seed);
    save_scenario(scenario, out);
    std::cout << m * k << " viewpoints\n";
    return kExitOk;
}

int cmd_plan(const std::string& scenario_path, int n, const std::string& clustering_name,
             const std::string& solver_name, const EnergyFlags& energy, AdpcParams adpc,
             SolverConfig solver_config, std::uint64_t seed, const std::string& out,
             const std::string& svg_path) {
    const Scenario scenario = load_scenario(scenario_path);
    MethodPair method{parse_clustering_method(clustering_name), parse_solver_choice(solver_name)};
    const Solution solution = plan_mission(scenario, n, method, energy.to_model(), adpc,
                                           solver_config, seed);
    save_solution(solution, out);
    if (!svg_path.empty()) {
        write_solution_svg(scenario, solution, svg_path);
    }
    std::cout << metrics_to_text(compute_metrics(solution, scenario, energy.to_model()));
    return kExitOk;
}

int cmd_validate(const std::string& scenario_path, const std::string& solution_path,
                 const EnergyFlags& energy, DistanceMode mode) {
    const Scenario scenario = load_scenario(scenario_path);
    const Solution solution = load_solution(solution_path);

    // recomputed distances must match the stored ones before any verdicts
    const auto viewpoints = generate_viewpoints(scenario);
    std::map<VpRef, Point3> pos;
    for (const Viewpoint& vp : viewpoints) {
        pos[vp.ref] = vp.position;
    }
    for (const Route& r : solution.routes) {
        double d = 0.0;
        Point3 prev = scenario.base();
        for (const VpRef& vp : r.visits) {
            auto it = pos.find(vp);
            if (it == pos.end()) {
                throw ValidationError("route " + std::to_string(r.uav_id) +
                                      " references unknown viewpoint");
            }
            d += leg_distance(prev, it->second, mode);
            prev = it->second;
        }
        if (!r.visits.empty()) {
            d += leg_distance(prev, scenario.base(), mode);
        }
        if (std::abs(d - r.total_distance) > 1e-6) {
            throw ValidationError("route " + std::to_string(r.uav_id) +
                                  " stored distance does not match its visit order");
        }
    }

    const EnergyModel em = energy.to_model();
    const auto energy_verdicts = check_energy(solution, em);
    const bool energy_pass =
        std::all_of(energy_verdicts.begin(), energy_verdicts.end(), [](bool b) { return b; });
    std::cout << "energy-budget: " << (energy_pass ? "PASS" : "FAIL");
    for (std::size_t i = 0; i < energy_verdicts.size(); ++i) {
        if (!energy_verdicts[i]) {
            std::cout << " uav" << solution.routes[i].uav_id << "="
                      << format_double(route_energy(solution.routes[i], em)) << ">"
                      << format_double(em.e_max);
        }
    }
    std::cout << "\n";

    const UniquenessReport uniq = check_uniqueness(solution);
    std::cout << "viewpoint-uniqueness: " << (uniq.pass ? "PASS" : "FAIL");
    for (const VpRef& vp : uniq.duplicates) {
        std::cout << " " << vp.target_id << ":" << vp.view_index;
    }
    std::cout << "\n";

    const PerTargetReport per_target = check_per_target(solution, scenario);
    std::cout << "per-target-coverage: " << (per_target.pass ? "PASS" : "FAIL");
    for (int t : per_target.uncovered_targets) {
        std::cout << " target" << t;
    }
    std::cout << "\n";

    if (uniq.pass) {
        // only a uniqueness-clean solution can be checked for a clean partition
        std::set<VpRef> accounted;
        for (const Route& r : solution.routes) {
            accounted.insert(r.visits.begin(), r.visits.end());
        }
        for (const VpRef& vp : solution.dropped) {
            if (!accounted.insert(vp).second) {
                throw ValidationError("viewpoint listed as both covered and dropped");
            }
        }
        if (accounted.size() != viewpoints.size()) {
            throw ValidationError("covered + dropped sets do not partition the viewpoint set");
        }
    }

    return (energy_pass && uniq.pass && per_target.pass) ? kExitOk : kExitViolation;
}

std::string default_run_dir(std::uint64_t base_seed) {
    const char* root = std::getenv("UAVCOV_RUN_DIR");
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y%m%d-%H%M%S", std::localtime(&now));
    return std::string(root ? root : ".") + "/run_seed" + std::to_string(base_seed) + "_" + stamp;
}

int cmd_sweep(const std::string& plan_path, std::string out_dir) {
    const ExperimentPlan plan = load_plan(plan_path);
    if (out_dir.empty()) {
        out_dir = default_run_dir(plan.base_seed);
    }
    std::filesystem::create_directories(out_dir);

    const std::string records_path = out_dir + "/records.csv";
    std::ofstream records(records_path);
    if (!records) {
        throw Error("cannot write " + records_path);
    }
    records << kRecordCsvHeader << "\n";
    records.flush();

    int done = 0;
    const int total = static_cast<int>(plan.methods.size() * plan.n_values.size() *
                                       plan.k_values.size() * plan.trials);
    const auto all = run_sweep(plan, [&](const TrialRecord& rec) {
        records << record_to_csv(rec) << "\n";
        records.flush(); // crash-safe prefix
        if (++done % 50 == 0 || done == total) {
            std::cout << "trials " << done << "/" << total << "\r" << std::flush;
        }
    });
    std::cout << "\n";

    const auto aggregates = aggregate(all);
    emit_plot_data(aggregates, out_dir);

    const TrendReport report = trend_checks(aggregates);
    for (const TrendCheck& check : report.checks) {
        std::cout << (check.pass ? "PASS " : "FAIL ") << check.name
                  << " margin=" << format_double(check.margin)
                  << (check.detail.empty() ? "" : " (" + check.detail + ")") << "\n";
    }
    std::cout << "records: " << records_path << "\n";
    return kExitOk;
}

int cmd_plot(const std::string& records_path, const std::string& out_dir) {
    const auto records = load_records(records_path);
    const auto aggregates = aggregate(records); // throws InsufficientData when empty
    emit_plot_data(aggregates, out_dir);
    std::cout << "wrote plot data to " << out_dir << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-view coverage path planner for UAV swarms under an energy budget"};
    app.require_subcommand(1);

    bool distance_2d = false;
    app.add_flag("--distance-2d", distance_2d, "Use horizontal-only leg distances");

    // generate
    auto* gen = app.add_subcommand("generate", "Generate a random scenario file");
    // --h is the altitude flag, so help must not claim the short -h here
    gen->set_help_flag("--help", "Print this help message and exit");
    int gen_m = 20;
    double gen_area = 2000.0, gen_h = 500.0, gen_theta = 60.0;
    int gen_k = 3;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    gen->add_option("--m", gen_m, "Number of targets")->capture_default_str();
    gen->add_option("--area", gen_area, "Square mission area side (m)")->capture_default_str();
    gen->add_option("--h", gen_h, "Flight altitude H (m)")->capture_default_str();
    gen->add_option("--theta", gen_theta, "Imaging pitch angle (degrees)")->capture_default_str();
    gen->add_option("--k", gen_k, "Views per target")->capture_default_str();
    gen->add_option("--seed", gen_seed, "RNG seed")->capture_default_str();
    gen->add_option("--out", gen_out, "Output scenario file")->required();

    // plan
    auto* plan = app.add_subcommand("plan", "Plan one multi-UAV solution for a scenario");
    std::string plan_scenario, plan_clustering = "adpc", plan_solver = "pso", plan_out, plan_svg;
    int plan_n = 5;
    std::uint64_t plan_seed = 0;
    EnergyFlags plan_energy;
    AdpcParams plan_adpc;
    SolverConfig plan_cfg;
    plan->add_option("--scenario", plan_scenario, "Scenario file")->required();
    plan->add_option("--n", plan_n, "Number of UAVs")->capture_default_str();
    plan->add_option("--clustering", plan_clustering, "adpc | dpc | kmeans")
        ->capture_default_str();
    plan->add_option("--solver", plan_solver, "pso | ga | aco")->capture_default_str();
    plan_energy.attach(plan);
    plan->add_option("--xi", plan_adpc.xi, "ADPC expansion index")->capture_default_str();
    plan->add_option("--dc-percentile", plan_adpc.d_c_percentile,
                     "Cutoff distance percentile")->capture_default_str();
    plan->add_option("--iterations", plan_cfg.max_iterations, "Solver iterations")
        ->capture_default_str();
    plan->add_option("--population", plan_cfg.population_size, "Solver population size")
        ->capture_default_str();
    plan->add_option("--seed", plan_seed, "RNG seed")->capture_default_str();
    plan->add_option("--out", plan_out, "Output solution file")->required();
    plan->add_option("--svg", plan_svg, "Optional path-map SVG output");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Run an experiment plan");
    std::string sweep_plan, sweep_out;
    sweep->add_option("--plan", sweep_plan, "Plan file (key=value lines)")->required();
    sweep->add_option("--out-dir", sweep_out,
                      "Run directory (default: $UAVCOV_RUN_DIR/run_seed<seed>_<stamp>)");

    // validate
    auto* validate = app.add_subcommand("validate", "Check a solution against its scenario");
    std::string val_scenario, val_solution;
    EnergyFlags val_energy;
    validate->add_option("--scenario", val_scenario, "Scenario file")->required();
    validate->add_option("--solution", val_solution, "Solution file")->required();
    val_energy.attach(validate);

    // plot
    auto* plot = app.add_subcommand("plot", "Aggregate a records CSV into plot data");
    std::string plot_records, plot_out;
    plot->add_option("--records", plot_records, "records.csv from a sweep")->required();
    plot->add_option("--out-dir", plot_out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    const DistanceMode mode = distance_2d ? DistanceMode::Horizontal2d : DistanceMode::Euclid3d;
    try {
        if (gen->parsed()) {
            return cmd_generate(gen_m, gen_area, gen_h, gen_theta, gen_k, gen_seed, gen_out);
        }
        if (plan->parsed()) {
            plan_adpc.distance_mode = mode;
            return cmd_plan(plan_scenario, plan_n, plan_clustering, plan_solver, plan_energy,
                            plan_adpc, plan_cfg, plan_seed, plan_out, plan_svg);
        }
        if (sweep->parsed()) {
            return cmd_sweep(sweep_plan, sweep_out);
        }
        if (validate->parsed()) {
            return cmd_validate(val_scenario, val_solution, val_energy, mode);
        }
        if (plot->parsed()) {
            return cmd_plot(plot_records, plot_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
