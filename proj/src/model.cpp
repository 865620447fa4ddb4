#include "uavcov/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "uavcov/textio.hpp"

namespace uavcov {

void EnergyModel::validate() const {
    if (!(e_flight > 0.0) || !std::isfinite(e_flight) ||
        !(e_image > 0.0) || !std::isfinite(e_image) ||
        !(e_max > 0.0) || !std::isfinite(e_max)) {
        throw ValidationError("energy model fields must be strictly positive and finite");
    }
}

double route_energy(const Route& route, const EnergyModel& em) {
    if (route.visits.empty()) {
        return 0.0; // UAV never launches
    }
    return em.e_flight * route.total_distance + em.e_image * route.covered_count();
}

std::vector<bool> check_energy(const Solution& solution, const EnergyModel& em) {
    std::vector<bool> verdicts;
    verdicts.reserve(solution.routes.size());
    for (const Route& r : solution.routes) {
        verdicts.push_back(route_energy(r, em) <= em.e_max);
    }
    return verdicts;
}

UniquenessReport check_uniqueness(const Solution& solution) {
    UniquenessReport rep;
    std::set<VpRef> seen;
    std::set<VpRef> dup;
    for (const Route& r : solution.routes) {
        for (const VpRef& vp : r.visits) {
            if (!seen.insert(vp).second) {
                dup.insert(vp);
            }
        }
    }
    rep.duplicates.assign(dup.begin(), dup.end());
    rep.pass = rep.duplicates.empty();
    return rep;
}

PerTargetReport check_per_target(const Solution& solution, const Scenario& scenario) {
    PerTargetReport rep;
    std::vector<int> covered(scenario.target_count(), 0);
    for (const Route& r : solution.routes) {
        for (const VpRef& vp : r.visits) {
            if (vp.target_id >= 1 && vp.target_id <= scenario.target_count()) {
                ++covered[vp.target_id - 1];
            }
        }
    }
    for (int m = 1; m <= scenario.target_count(); ++m) {
        if (covered[m - 1] == 0) {
            rep.uncovered_targets.push_back(m);
        }
    }
    rep.pass = rep.uncovered_targets.empty();
    return rep;
}

SolutionMetrics compute_metrics(const Solution& solution, const Scenario& scenario,
                                const EnergyModel& em) {
    SolutionMetrics metrics;
    metrics.per_target_covered.assign(scenario.target_count(), 0);

    int total_covered = 0;
    for (const Route& r : solution.routes) {
        metrics.per_uav_energy.push_back(route_energy(r, em));
        metrics.total_distance += r.total_distance;
        total_covered += r.covered_count();
        for (const VpRef& vp : r.visits) {
            if (vp.target_id >= 1 && vp.target_id <= scenario.target_count()) {
                ++metrics.per_target_covered[vp.target_id - 1];
            }
        }
    }
    const int total = scenario.target_count() * scenario.view_count();
    metrics.coverage_rate = static_cast<double>(total_covered) / total;

    metrics.targets_fully_missed =
        static_cast<int>(std::count(metrics.per_target_covered.begin(),
                                    metrics.per_target_covered.end(), 0));

    const auto energy_ok = check_energy(solution, em);
    const bool all_energy = std::all_of(energy_ok.begin(), energy_ok.end(),
                                        [](bool b) { return b; });
    metrics.feasible = all_energy && check_uniqueness(solution).pass &&
                       check_per_target(solution, scenario).pass;
    return metrics;
}

void validate_solution_geometry(const Solution& solution, const Scenario& scenario,
                                DistanceMode mode) {
    const auto viewpoints = generate_viewpoints(scenario);
    std::map<VpRef, Point3> positions;
    for (const Viewpoint& vp : viewpoints) {
        positions[vp.ref] = vp.position;
    }

    std::set<VpRef> accounted;
    for (const Route& r : solution.routes) {
        double d = 0.0;
        Point3 prev = scenario.base();
        for (const VpRef& vp : r.visits) {
            auto it = positions.find(vp);
            if (it == positions.end()) {
                throw ValidationError("route " + std::to_string(r.uav_id) +
                                      " references unknown viewpoint " +
                                      std::to_string(vp.target_id) + ":" +
                                      std::to_string(vp.view_index));
            }
            d += leg_distance(prev, it->second, mode);
            prev = it->second;
            accounted.insert(vp);
        }
        if (!r.visits.empty()) {
            d += leg_distance(prev, scenario.base(), mode);
        }
        if (std::abs(d - r.total_distance) > 1e-6) {
            throw ValidationError("route " + std::to_string(r.uav_id) + " distance mismatch: stored " +
                                  format_double(r.total_distance) + ", recomputed " + format_double(d));
        }
    }
    for (const VpRef& vp : solution.dropped) {
        if (!positions.count(vp)) {
            throw ValidationError("dropped set references unknown viewpoint " +
                                  std::to_string(vp.target_id) + ":" +
                                  std::to_string(vp.view_index));
        }
        if (accounted.count(vp)) {
            throw ValidationError("viewpoint " + std::to_string(vp.target_id) + ":" +
                                  std::to_string(vp.view_index) + " is both covered and dropped");
        }
        accounted.insert(vp);
    }
    if (accounted.size() != viewpoints.size()) {
        throw ValidationError("covered + dropped sets do not partition the viewpoint set (" +
                              std::to_string(accounted.size()) + " of " +
                              std::to_string(viewpoints.size()) + " accounted for)");
    }
}

namespace {

std::string refs_to_text(const std::vector<VpRef>& refs) {
    std::string out;
    for (std::size_t i = 0; i < refs.size(); ++i) {
        if (i) {
            out += ',';
        }
        out += std::to_string(refs[i].target_id) + ":" + std::to_string(refs[i].view_index);
    }
    return out;
}

std::vector<VpRef> parse_refs(std::string_view text) {
    std::vector<VpRef> refs;
    if (text.empty()) {
        return refs;
    }
    for (std::string_view item : split(text, ',')) {
        auto parts = split(item, ':');
        if (parts.size() != 2) {
            throw ParseError("bad viewpoint reference '" + std::string(item) + "'");
        }
        refs.push_back(VpRef{static_cast<int>(parse_int(parts[0], "target id")),
                             static_cast<int>(parse_int(parts[1], "view index"))});
    }
    return refs;
}

} // namespace

std::string solution_to_text(const Solution& s) {
    std::string out = "solution v1 N=" + std::to_string(s.routes.size()) + "\n";
    for (const Route& r : s.routes) {
        out += "route " + std::to_string(r.uav_id) + " d=" + format_double(r.total_distance) +
               " vps=" + refs_to_text(r.visits) + "\n";
    }
    out += "dropped vps=" + refs_to_text(s.dropped) + "\n";
    return out;
}

Solution parse_solution_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError("empty solution file");
    }
    auto header = split(line, ' ');
    if (header.size() != 3 || header[0] != "solution" || header[1] != "v1") {
        throw ParseError("expected header 'solution v1 N=<int>'");
    }
    const int n = static_cast<int>(parse_int(expect_kv(header[2], "N"), "N"));

    Solution s;
    bool saw_dropped = false;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        auto tok = split(line, ' ');
        if (tok[0] == "route") {
            if (tok.size() != 4) {
                throw ParseError("line " + std::to_string(line_no) +
                                 ": expected 'route <uav_id> d=<float> vps=<...>'");
            }
            Route r;
            r.uav_id = static_cast<int>(parse_int(tok[1], "uav id"));
            r.total_distance = parse_double(expect_kv(tok[2], "d"), "d");
            r.visits = parse_refs(expect_kv(tok[3], "vps"));
            s.routes.push_back(std::move(r));
        } else if (tok[0] == "dropped") {
            if (tok.size() != 2) {
                throw ParseError("line " + std::to_string(line_no) + ": expected 'dropped vps=<...>'");
            }
            s.dropped = parse_refs(expect_kv(tok[1], "vps"));
            saw_dropped = true;
        } else {
            throw ParseError("line " + std::to_string(line_no) + ": unknown record '" +
                             std::string(tok[0]) + "'");
        }
    }
    if (static_cast<int>(s.routes.size()) != n) {
        throw ValidationError("header declares N=" + std::to_string(n) + " but file has " +
                              std::to_string(s.routes.size()) + " routes");
    }
    if (!saw_dropped) {
        throw ParseError("missing 'dropped' record");
    }
    return s;
}

Solution load_solution(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open solution file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_solution_text(buf.str());
}

void save_solution(const Solution& solution, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write solution file: " + path);
    }
    out << solution_to_text(solution);
}

std::string metrics_to_text(const SolutionMetrics& m) {
    std::string out;
    out += "coverage_rate=" + format_double(m.coverage_rate) + "\n";
    out += "feasible=" + std::string(m.feasible ? "1" : "0") + "\n";
    out += "total_distance=" + format_double(m.total_distance) + "\n";
    out += "targets_fully_missed=" + std::to_string(m.targets_fully_missed) + "\n";
    std::string energies;
    for (std::size_t i = 0; i < m.per_uav_energy.size(); ++i) {
        if (i) {
            energies += ';';
        }
        energies += format_double(m.per_uav_energy[i]);
    }
    out += "per_uav_energy=" + energies + "\n";
    return out;
}

} // namespace uavcov
