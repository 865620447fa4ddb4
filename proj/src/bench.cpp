#include "uavcov/bench.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "uavcov/rng.hpp"
#include "uavcov/textio.hpp"

namespace uavcov {

void ExperimentPlan::validate() const {
    if (targets_m < 1) {
        throw ValidationError("plan needs M >= 1");
    }
    if (trials < 1) {
        throw ValidationError("plan needs trials >= 1");
    }
    if (n_values.empty() || k_values.empty() || methods.empty()) {
        throw ValidationError("plan needs non-empty N_values, K_values and methods");
    }
    for (int n : n_values) {
        if (n < 1) {
            throw ValidationError("N values must be >= 1");
        }
    }
    for (int k : k_values) {
        if (k < 1) {
            throw ValidationError("K values must be >= 1");
        }
    }
    energy.validate();
    adpc.validate();
    solver_config.validate();
}

namespace {

template <typename T, typename F>
std::string join(const std::vector<T>& values, char sep, F format) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) {
            out += sep;
        }
        out += format(values[i]);
    }
    return out;
}

std::vector<int> parse_int_list(std::string_view text, std::string_view what) {
    std::vector<int> out;
    for (auto item : split(text, ',')) {
        out.push_back(static_cast<int>(parse_int(item, what)));
    }
    return out;
}

} // namespace

std::string plan_to_text(const ExperimentPlan& p) {
    std::string out;
    out += "M=" + std::to_string(p.targets_m) + "\n";
    out += "area=" + format_double(p.area) + "\n";
    out += "H=" + format_double(p.altitude_h) + "\n";
    out += "theta=" + format_double(p.pitch_theta) + "\n";
    out += "N_values=" + join(p.n_values, ',', [](int v) { return std::to_string(v); }) + "\n";
    out += "K_values=" + join(p.k_values, ',', [](int v) { return std::to_string(v); }) + "\n";
    out += "trials=" + std::to_string(p.trials) + "\n";
    out += "methods=" +
           join(p.methods, ',', [](const MethodPair& m) { return to_string(m); }) + "\n";
    out += "e_flight=" + format_double(p.energy.e_flight) + "\n";
    out += "e_image=" + format_double(p.energy.e_image) + "\n";
    out += "e_max=" + format_double(p.energy.e_max) + "\n";
    out += "xi=" + format_double(p.adpc.xi) + "\n";
    out += "d_c_percentile=" + format_double(p.adpc.d_c_percentile) + "\n";
    out += "distance_mode=" +
           std::string(p.adpc.distance_mode == DistanceMode::Euclid3d ? "3d" : "2d") + "\n";
    out += "kmeans_restarts=" + std::to_string(p.adpc.kmeans_restarts) + "\n";
    out += "kmeans_max_iters=" + std::to_string(p.adpc.kmeans_max_iters) + "\n";
    out += "max_iterations=" + std::to_string(p.solver_config.max_iterations) + "\n";
    out += "population_size=" + std::to_string(p.solver_config.population_size) + "\n";
    out += "base_seed=" + std::to_string(p.base_seed) + "\n";
    return out;
}

ExperimentPlan parse_plan_text(const std::string& text) {
    ExperimentPlan p;
    p.methods.clear();
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') {
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError("plan line " + std::to_string(line_no) + ": expected key=value");
        }
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        if (key == "M") {
            p.targets_m = static_cast<int>(parse_int(value, key));
        } else if (key == "area") {
            p.area = parse_double(value, key);
        } else if (key == "H") {
            p.altitude_h = parse_double(value, key);
        } else if (key == "theta") {
            p.pitch_theta = parse_double(value, key);
        } else if (key == "N_values") {
            p.n_values = parse_int_list(value, key);
        } else if (key == "K_values") {
            p.k_values = parse_int_list(value, key);
        } else if (key == "trials") {
            p.trials = static_cast<int>(parse_int(value, key));
        } else if (key == "methods") {
            for (auto item : split(value, ',')) {
                p.methods.push_back(parse_method_pair(std::string(item)));
            }
        } else if (key == "e_flight") {
            p.energy.e_flight = parse_double(value, key);
        } else if (key == "e_image") {
            p.energy.e_image = parse_double(value, key);
        } else if (key == "e_max") {
            p.energy.e_max = parse_double(value, key);
        } else if (key == "xi") {
            p.adpc.xi = parse_double(value, key);
        } else if (key == "d_c_percentile") {
            p.adpc.d_c_percentile = parse_double(value, key);
        } else if (key == "distance_mode") {
            if (value == "3d") {
                p.adpc.distance_mode = DistanceMode::Euclid3d;
            } else if (value == "2d") {
                p.adpc.distance_mode = DistanceMode::Horizontal2d;
            } else {
                throw ParseError("distance_mode must be 2d or 3d");
            }
        } else if (key == "kmeans_restarts") {
            p.adpc.kmeans_restarts = static_cast<int>(parse_int(value, key));
        } else if (key == "kmeans_max_iters") {
            p.adpc.kmeans_max_iters = static_cast<int>(parse_int(value, key));
        } else if (key == "max_iterations") {
            p.solver_config.max_iterations = static_cast<int>(parse_int(value, key));
        } else if (key == "population_size") {
            p.solver_config.population_size = static_cast<int>(parse_int(value, key));
        } else if (key == "base_seed") {
            p.base_seed = static_cast<std::uint64_t>(parse_uint(value, key));
        } else {
            throw ParseError("plan line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
    }
    if (p.methods.empty()) {
        p.methods = {parse_method_pair("ADPC-PSO")};
    }
    p.validate();
    return p;
}

ExperimentPlan load_plan(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open plan file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_plan_text(buf.str());
}

const char* const kRecordCsvHeader =
    "method,N,K,trial,seed,coverage_rate,feasible,total_distance,"
    "clustering_runtime,solver_runtime,per_uav_energy,error";

std::string record_to_csv(const TrialRecord& r) {
    std::string error = r.error;
    std::replace(error.begin(), error.end(), ',', ';');
    std::replace(error.begin(), error.end(), '\n', ' ');
    return r.method + "," + std::to_string(r.n_uavs) + "," + std::to_string(r.view_count) + "," +
           std::to_string(r.trial) + "," + std::to_string(r.seed) + "," +
           format_double(r.coverage_rate) + "," + (r.feasible ? "1" : "0") + "," +
           format_double(r.total_distance) + "," + format_double(r.clustering_runtime) + "," +
           format_double(r.solver_runtime) + "," +
           join(r.per_uav_energy, ';', [](double v) { return format_double(v); }) + "," + error;
}

TrialRecord parse_record_csv(const std::string& line) {
    auto fields = split(line, ',');
    if (fields.size() != 12) {
        throw ParseError("record has " + std::to_string(fields.size()) + " fields, expected 12");
    }
    TrialRecord r;
    r.method = std::string(fields[0]);
    r.n_uavs = static_cast<int>(parse_int(fields[1], "N"));
    r.view_count = static_cast<int>(parse_int(fields[2], "K"));
    r.trial = static_cast<int>(parse_int(fields[3], "trial"));
    r.seed = static_cast<std::uint64_t>(parse_uint(fields[4], "seed"));
    r.coverage_rate = parse_double(fields[5], "coverage_rate");
    r.feasible = fields[6] == "1";
    r.total_distance = parse_double(fields[7], "total_distance");
    r.clustering_runtime = parse_double(fields[8], "clustering_runtime");
    r.solver_runtime = parse_double(fields[9], "solver_runtime");
    if (!fields[10].empty()) {
        for (auto item : split(fields[10], ';')) {
            r.per_uav_energy.push_back(parse_double(item, "per_uav_energy"));
        }
    }
    r.error = std::string(fields[11]);
    return r;
}

std::vector<TrialRecord> load_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open records file: " + path);
    }
    std::vector<TrialRecord> out;
    std::string line;
    if (!std::getline(in, line) || line != kRecordCsvHeader) {
        throw ParseError("records file missing the expected CSV header");
    }
    while (std::getline(in, line)) {
        if (!line.empty()) {
            out.push_back(parse_record_csv(line));
        }
    }
    return out;
}

TrialRecord run_trial(const ExperimentPlan& plan, const MethodPair& method, int n_uavs,
                      int view_count, int trial_index) {
    plan.validate();
    TrialRecord rec;
    rec.method = to_string(method);
    rec.n_uavs = n_uavs;
    rec.view_count = view_count;
    rec.trial = trial_index;
    // scenario seed ignores N and method so sweeps compare paired worlds
    rec.seed = substream_seed(plan.base_seed, "trial-scenario",
                              static_cast<std::uint64_t>(view_count),
                              static_cast<std::uint64_t>(trial_index));
    try {
        const Scenario scenario = random_scenario(plan.targets_m, plan.area, plan.altitude_h,
                                                  plan.pitch_theta, view_count, rec.seed);
        const std::uint64_t mission_seed =
            substream_seed(plan.base_seed, rec.method, static_cast<std::uint64_t>(n_uavs),
                           static_cast<std::uint64_t>(view_count),
                           static_cast<std::uint64_t>(trial_index));
        PlanTimings timings;
        const Solution solution = plan_mission(scenario, n_uavs, method, plan.energy, plan.adpc,
                                               plan.solver_config, mission_seed, &timings);
        const SolutionMetrics metrics = compute_metrics(solution, scenario, plan.energy);
        rec.coverage_rate = metrics.coverage_rate;
        rec.feasible = metrics.feasible;
        rec.total_distance = metrics.total_distance;
        rec.per_uav_energy = metrics.per_uav_energy;
        rec.clustering_runtime = timings.clustering_seconds;
        rec.solver_runtime = timings.solver_seconds;
    } catch (const std::exception& e) {
        rec.error = e.what();
    }
    return rec;
}

std::vector<TrialRecord> run_sweep(const ExperimentPlan& plan, const RecordSink& sink) {
    plan.validate();
    std::vector<TrialRecord> records;
    records.reserve(plan.methods.size() * plan.n_values.size() * plan.k_values.size() *
                    plan.trials);
    for (const MethodPair& method : plan.methods) {
        for (int n : plan.n_values) {
            for (int k : plan.k_values) {
                for (int t = 0; t < plan.trials; ++t) {
                    TrialRecord rec = run_trial(plan, method, n, k, t);
                    if (sink) {
                        sink(rec);
                    }
                    records.push_back(std::move(rec));
                }
            }
        }
    }
    return records;
}

namespace {

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n % 2 == 1) {
        return v[n / 2];
    }
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) {
        s += x;
    }
    return s / static_cast<double>(v.size());
}

double sample_stddev(const std::vector<double>& v, double mean) {
    if (v.size() < 2) {
        return 0.0;
    }
    double s = 0.0;
    for (double x : v) {
        s += (x - mean) * (x - mean);
    }
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

} // namespace

std::vector<AggregateCell> aggregate(const std::vector<TrialRecord>& records) {
    std::map<std::tuple<std::string, int, int>, std::vector<const TrialRecord*>> groups;
    for (const TrialRecord& r : records) {
        if (!r.error.empty()) {
            continue; // failed trials are reported, not averaged
        }
        groups[{r.method, r.n_uavs, r.view_count}].push_back(&r);
    }
    if (groups.empty()) {
        throw InsufficientData("no successful records to aggregate");
    }
    std::vector<AggregateCell> out;
    for (const auto& [key, recs] : groups) {
        AggregateCell cell;
        cell.method = std::get<0>(key);
        cell.n_uavs = std::get<1>(key);
        cell.view_count = std::get<2>(key);
        cell.count = static_cast<int>(recs.size());
        std::vector<double> cov, crt, srt, dist;
        for (const TrialRecord* r : recs) {
            cov.push_back(r->coverage_rate);
            crt.push_back(r->clustering_runtime);
            srt.push_back(r->solver_runtime);
            dist.push_back(r->total_distance);
        }
        cell.mean_coverage = mean_of(cov);
        cell.std_coverage = sample_stddev(cov, cell.mean_coverage);
        cell.mean_clustering_runtime = mean_of(crt);
        cell.median_clustering_runtime = median_of(crt);
        cell.mean_solver_runtime = mean_of(srt);
        cell.median_solver_runtime = median_of(srt);
        cell.mean_total_distance = mean_of(dist);
        out.push_back(std::move(cell));
    }
    return out;
}

namespace {

using CellKey = std::tuple<std::string, int, int>;

const AggregateCell* find_cell(const std::vector<AggregateCell>& cells, const std::string& method,
                               int n, int k) {
    for (const AggregateCell& c : cells) {
        if (c.method == method && c.n_uavs == n && c.view_count == k) {
            return &c;
        }
    }
    return nullptr;
}

double pooled_se(const AggregateCell& a, const AggregateCell& b) {
    const double va = a.std_coverage * a.std_coverage / std::max(a.count, 1);
    const double vb = b.std_coverage * b.std_coverage / std::max(b.count, 1);
    return std::sqrt(va + vb);
}

std::string cell_name(const std::string& method, int n, int k) {
    return method + "(N=" + std::to_string(n) + ",K=" + std::to_string(k) + ")";
}

} // namespace

TrendReport trend_checks(const std::vector<AggregateCell>& aggregates) {
    if (aggregates.empty()) {
        throw InsufficientData("no aggregates to check");
    }
    TrendReport report;
    auto add = [&](TrendCheck check) {
        report.all_pass = report.all_pass && check.pass;
        report.checks.push_back(std::move(check));
    };

    std::set<std::string> methods;
    std::set<int> all_n, all_k;
    for (const AggregateCell& c : aggregates) {
        methods.insert(c.method);
        all_n.insert(c.n_uavs);
        all_k.insert(c.view_count);
    }

    // coverage non-decreasing in N (per method, per K), one pooled SE of slack
    for (const std::string& m : methods) {
        for (int k : all_k) {
            std::vector<const AggregateCell*> cells;
            for (int n : all_n) {
                if (const AggregateCell* c = find_cell(aggregates, m, n, k)) {
                    cells.push_back(c);
                }
            }
            if (cells.size() < 2) {
                continue;
            }
            TrendCheck check;
            check.name = "coverage_non_decreasing_in_N[" + m + ",K=" + std::to_string(k) + "]";
            check.pass = true;
            check.margin = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
                const double slack = cells[i + 1]->mean_coverage - cells[i]->mean_coverage +
                                     pooled_se(*cells[i], *cells[i + 1]);
                if (slack < check.margin) {
                    check.margin = slack;
                    check.detail = "tightest step N=" + std::to_string(cells[i]->n_uavs) + "->" +
                                   std::to_string(cells[i + 1]->n_uavs);
                }
            }
            check.pass = check.margin >= 0.0;
            add(std::move(check));
        }
    }

    // coverage non-increasing in K (per method, per N)
    for (const std::string& m : methods) {
        for (int n : all_n) {
            std::vector<const AggregateCell*> cells;
            for (int k : all_k) {
                if (const AggregateCell* c = find_cell(aggregates, m, n, k)) {
                    cells.push_back(c);
                }
            }
            if (cells.size() < 2) {
                continue;
            }
            TrendCheck check;
            check.name = "coverage_non_increasing_in_K[" + m + ",N=" + std::to_string(n) + "]";
            check.margin = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
                const double slack = cells[i]->mean_coverage - cells[i + 1]->mean_coverage +
                                     pooled_se(*cells[i], *cells[i + 1]);
                if (slack < check.margin) {
                    check.margin = slack;
                    check.detail = "tightest step K=" + std::to_string(cells[i]->view_count) +
                                   "->" + std::to_string(cells[i + 1]->view_count);
                }
            }
            check.pass = check.margin >= 0.0;
            add(std::move(check));
        }
    }

    // ADPC-PSO dominance over each PSO baseline
    for (const std::string& baseline : {std::string("DPC-PSO"), std::string("KMEANS-PSO")}) {
        if (!methods.count("ADPC-PSO") || !methods.count(baseline)) {
            continue;
        }
        TrendCheck check;
        check.name = "adpc_pso_dominates[" + baseline + "]";
        check.margin = std::numeric_limits<double>::infinity();
        int cells_compared = 0;
        int strict = 0;
        for (int n : all_n) {
            for (int k : all_k) {
                const AggregateCell* a = find_cell(aggregates, "ADPC-PSO", n, k);
                const AggregateCell* b = find_cell(aggregates, baseline, n, k);
                if (!a || !b) {
                    continue;
                }
                ++cells_compared;
                const double slack = a->mean_coverage - b->mean_coverage + pooled_se(*a, *b);
                if (slack < check.margin) {
                    check.margin = slack;
                    check.detail = "tightest cell " + cell_name(baseline, n, k);
                }
                if (a->mean_coverage > b->mean_coverage) {
                    ++strict;
                }
            }
        }
        if (cells_compared == 0) {
            continue;
        }
        check.pass = check.margin >= 0.0 && 2 * strict >= cells_compared;
        check.detail += "; strictly greater in " + std::to_string(strict) + "/" +
                        std::to_string(cells_compared) + " cells";
        add(std::move(check));
    }

    // clustering runtime ordering DPC < ADPC < KMEANS on medians, per cell
    {
        bool any = false;
        TrendCheck check;
        check.name = "clustering_runtime_order[DPC<ADPC<KMEANS]";
        check.margin = std::numeric_limits<double>::infinity();
        check.pass = true;
        for (int n : all_n) {
            for (int k : all_k) {
                const AggregateCell* dpc = find_cell(aggregates, "DPC-PSO", n, k);
                const AggregateCell* adpc = find_cell(aggregates, "ADPC-PSO", n, k);
                const AggregateCell* km = find_cell(aggregates, "KMEANS-PSO", n, k);
                if (!dpc || !adpc || !km) {
                    continue;
                }
                any = true;
                const double m1 = adpc->median_clustering_runtime - dpc->median_clustering_runtime;
                const double m2 = km->median_clustering_runtime - adpc->median_clustering_runtime;
                const double worst = std::min(m1, m2);
                if (worst < check.margin) {
                    check.margin = worst;
                    check.detail = "tightest cell N=" + std::to_string(n) + ",K=" +
                                   std::to_string(k);
                }
            }
        }
        if (any) {
            check.pass = check.margin > 0.0;
            add(std::move(check));
        }
    }

    // ADPC clustering runtime monotone increasing in K
    if (methods.count("ADPC-PSO")) {
        for (int n : all_n) {
            std::vector<const AggregateCell*> cells;
            for (int k : all_k) {
                if (const AggregateCell* c = find_cell(aggregates, "ADPC-PSO", n, k)) {
                    cells.push_back(c);
                }
            }
            if (cells.size() < 2) {
                continue;
            }
            TrendCheck check;
            check.name = "adpc_runtime_increasing_in_K[N=" + std::to_string(n) + "]";
            check.margin = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
                const double step = cells[i + 1]->median_clustering_runtime -
                                    cells[i]->median_clustering_runtime;
                if (step < check.margin) {
                    check.margin = step;
                    check.detail = "tightest step K=" + std::to_string(cells[i]->view_count) +
                                   "->" + std::to_string(cells[i + 1]->view_count);
                }
            }
            check.pass = check.margin > 0.0;
            add(std::move(check));
        }
    }

    // solver runtime ordering GA < PSO < ACO on medians, per cell
    {
        bool any = false;
        TrendCheck check;
        check.name = "solver_runtime_order[GA<PSO<ACO]";
        check.margin = std::numeric_limits<double>::infinity();
        for (int n : all_n) {
            for (int k : all_k) {
                const AggregateCell* ga = find_cell(aggregates, "ADPC-GA", n, k);
                const AggregateCell* pso = find_cell(aggregates, "ADPC-PSO", n, k);
                const AggregateCell* aco = find_cell(aggregates, "ADPC-ACO", n, k);
                if (!ga || !pso || !aco) {
                    continue;
                }
                any = true;
                const double m1 = pso->median_solver_runtime - ga->median_solver_runtime;
                const double m2 = aco->median_solver_runtime - pso->median_solver_runtime;
                const double worst = std::min(m1, m2);
                if (worst < check.margin) {
                    check.margin = worst;
                    check.detail = "tightest cell N=" + std::to_string(n) + ",K=" +
                                   std::to_string(k);
                }
            }
        }
        if (any) {
            check.pass = check.margin > 0.0;
            add(std::move(check));
        }
    }

    if (report.checks.empty()) {
        throw InsufficientData("aggregates do not cover any checkable axis");
    }
    return report;
}

namespace {

std::string cell_to_csv(const AggregateCell& c) {
    return c.method + "," + std::to_string(c.n_uavs) + "," + std::to_string(c.view_count) + "," +
           std::to_string(c.count) + "," + format_double(c.mean_coverage) + "," +
           format_double(c.std_coverage) + "," + format_double(c.mean_clustering_runtime) + "," +
           format_double(c.median_clustering_runtime) + "," +
           format_double(c.mean_solver_runtime) + "," + format_double(c.median_solver_runtime) +
           "," + format_double(c.mean_total_distance);
}

const char* const kAggregateCsvHeader =
    "method,N,K,count,mean_coverage,std_coverage,mean_clustering_runtime,"
    "median_clustering_runtime,mean_solver_runtime,median_solver_runtime,mean_total_distance";

} // namespace

void emit_plot_data(const std::vector<AggregateCell>& aggregates, const std::string& out_dir) {
    if (aggregates.empty()) {
        throw InsufficientData("no aggregates to plot");
    }
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        throw Error("cannot create output directory " + out_dir + ": " + ec.message());
    }

    auto write_file = [&](const std::string& name, const std::string& header,
                          const std::vector<AggregateCell>& cells,
                          auto row) {
        const std::string path = out_dir + "/" + name;
        std::ofstream out(path);
        if (!out) {
            throw Error("cannot write " + path);
        }
        out << header << "\n";
        for (const AggregateCell& c : cells) {
            out << row(c) << "\n";
        }
    };

    // full table, round-trippable
    write_file("aggregates.csv", kAggregateCsvHeader, aggregates, cell_to_csv);

    std::vector<AggregateCell> by_n = aggregates;
    std::stable_sort(by_n.begin(), by_n.end(), [](const AggregateCell& a, const AggregateCell& b) {
        return std::tie(a.method, a.view_count, a.n_uavs) <
               std::tie(b.method, b.view_count, b.n_uavs);
    });
    write_file("coverage_vs_N.csv", "method,N,K,mean_coverage,std_coverage", by_n,
               [](const AggregateCell& c) {
                   return c.method + "," + std::to_string(c.n_uavs) + "," +
                          std::to_string(c.view_count) + "," + format_double(c.mean_coverage) +
                          "," + format_double(c.std_coverage);
               });

    std::vector<AggregateCell> by_k = aggregates;
    std::stable_sort(by_k.begin(), by_k.end(), [](const AggregateCell& a, const AggregateCell& b) {
        return std::tie(a.method, a.n_uavs, a.view_count) <
               std::tie(b.method, b.n_uavs, b.view_count);
    });
    write_file("coverage_vs_K.csv", "method,N,K,mean_coverage,std_coverage", by_k,
               [](const AggregateCell& c) {
                   return c.method + "," + std::to_string(c.n_uavs) + "," +
                          std::to_string(c.view_count) + "," + format_double(c.mean_coverage) +
                          "," + format_double(c.std_coverage);
               });

    write_file("runtime_vs_K.csv", "method,N,K,median_clustering_runtime,median_solver_runtime",
               by_k, [](const AggregateCell& c) {
                   return c.method + "," + std::to_string(c.n_uavs) + "," +
                          std::to_string(c.view_count) + "," +
                          format_double(c.median_clustering_runtime) + "," +
                          format_double(c.median_solver_runtime);
               });
}

std::vector<AggregateCell> load_plot_data(const std::string& csv_path) {
    std::ifstream in(csv_path);
    if (!in) {
        throw ParseError("cannot open aggregate file: " + csv_path);
    }
    std::string line;
    if (!std::getline(in, line) || line != kAggregateCsvHeader) {
        throw ParseError("aggregate file missing the expected CSV header");
    }
    std::vector<AggregateCell> out;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        auto f = split(line, ',');
        if (f.size() != 11) {
            throw ParseError("aggregate row has " + std::to_string(f.size()) +
                             " fields, expected 11");
        }
        AggregateCell c;
        c.method = std::string(f[0]);
        c.n_uavs = static_cast<int>(parse_int(f[1], "N"));
        c.view_count = static_cast<int>(parse_int(f[2], "K"));
        c.count = static_cast<int>(parse_int(f[3], "count"));
        c.mean_coverage = parse_double(f[4], "mean_coverage");
        c.std_coverage = parse_double(f[5], "std_coverage");
        c.mean_clustering_runtime = parse_double(f[6], "mean_clustering_runtime");
        c.median_clustering_runtime = parse_double(f[7], "median_clustering_runtime");
        c.mean_solver_runtime = parse_double(f[8], "mean_solver_runtime");
        c.median_solver_runtime = parse_double(f[9], "median_solver_runtime");
        c.mean_total_distance = parse_double(f[10], "mean_total_distance");
        out.push_back(std::move(c));
    }
    return out;
}

namespace {

const char* route_color(int i) {
    static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
    return palette[i % 8];
}

} // namespace

std::string solution_svg(const Scenario& scenario, const Solution& solution) {
    const auto viewpoints = generate_viewpoints(scenario);
    std::map<VpRef, Point3> pos;
    for (const Viewpoint& vp : viewpoints) {
        pos[vp.ref] = vp.position;
    }

    const double half = scenario.area_size() / 2.0;
    const double margin = 0.06 * scenario.area_size();
    const double world = 2.0 * (half + margin);
    const double view = 800.0;
    auto sx = [&](double x) { return (x + half + margin) / world * view; };
    auto sy = [&](double y) { return view - (y + half + margin) / world * view; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" "
           "viewBox=\"0 0 800 800\">\n";
    svg << "<rect width=\"800\" height=\"800\" fill=\"white\"/>\n";

    for (std::size_t i = 0; i < solution.routes.size(); ++i) {
        const Route& r = solution.routes[i];
        if (r.visits.empty()) {
            continue;
        }
        svg << "<polyline class=\"route\" fill=\"none\" stroke=\"" << route_color((int)i)
            << "\" stroke-width=\"1.5\" points=\"";
        svg << sx(0) << "," << sy(0);
        for (const VpRef& vp : r.visits) {
            const Point3& p = pos.at(vp);
            svg << " " << sx(p.x) << "," << sy(p.y);
        }
        svg << " " << sx(0) << "," << sy(0) << "\"/>\n";
    }

    for (const Target& t : scenario.targets()) {
        svg << "<circle class=\"target\" cx=\"" << sx(t.position.x) << "\" cy=\""
            << sy(t.position.y) << "\" r=\"5\" fill=\"#444444\"/>\n";
    }
    std::set<VpRef> dropped(solution.dropped.begin(), solution.dropped.end());
    for (const Viewpoint& vp : viewpoints) {
        if (dropped.count(vp.ref)) {
            continue;
        }
        svg << "<circle class=\"viewpoint\" cx=\"" << sx(vp.position.x) << "\" cy=\""
            << sy(vp.position.y) << "\" r=\"2.5\" fill=\"#2a6fdb\"/>\n";
    }
    for (const VpRef& ref : solution.dropped) {
        const Point3& p = pos.at(ref);
        svg << "<circle class=\"dropped\" cx=\"" << sx(p.x) << "\" cy=\"" << sy(p.y)
            << "\" r=\"3.5\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.5\"/>\n";
    }
    svg << "<rect class=\"base\" x=\"" << sx(0) - 6 << "\" y=\"" << sy(0) - 6
        << "\" width=\"12\" height=\"12\" fill=\"black\"/>\n";
    svg << "</svg>\n";
    return svg.str();
}

void write_solution_svg(const Scenario& scenario, const Solution& solution,
                        const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write SVG file: " + path);
    }
    out << solution_svg(scenario, solution);
}

} // namespace uavcov
