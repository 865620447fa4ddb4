#include "uavcov/scenario.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_set>

#include "uavcov/rng.hpp"
#include "uavcov/textio.hpp"

namespace uavcov {

namespace {
constexpr double kDegenerateEps = 1e-9; // meters

void check_target(const Target& t, double standoff) {
    if (!is_finite(t.position)) {
        throw ValidationError("target " + std::to_string(t.id) + " has non-finite coordinates");
    }
    if (t.position.z != 0.0) {
        throw ValidationError("target " + std::to_string(t.id) + " not on the ground plane");
    }
    const double range = std::hypot(t.position.x, t.position.y);
    if (range <= standoff + kDegenerateEps) {
        throw DegenerateTarget("target " + std::to_string(t.id) +
                               " within standoff radius of the base (range " +
                               format_double(range) + " <= " + format_double(standoff) + ")");
    }
}
} // namespace

Scenario::Scenario(std::vector<Target> targets, double altitude_h, double pitch_theta_deg,
                   int view_count_k, double area_size)
    : targets_(std::move(targets)),
      altitude_h_(altitude_h),
      pitch_theta_deg_(pitch_theta_deg),
      view_count_k_(view_count_k),
      area_size_(area_size) {
    if (!(altitude_h_ > 0.0) || !std::isfinite(altitude_h_)) {
        throw ValidationError("altitude H must be positive and finite");
    }
    if (!(pitch_theta_deg_ > 0.0) || !(pitch_theta_deg_ <= 90.0)) {
        throw ValidationError("pitch angle theta must lie in (0, 90] degrees");
    }
    if (view_count_k_ < 1) {
        throw ValidationError("view count K must be >= 1");
    }
    if (!(area_size_ > 0.0)) {
        throw ValidationError("area size must be positive");
    }
    if (targets_.empty()) {
        throw ValidationError("scenario needs at least one target");
    }
    const double standoff = standoff_radius();
    std::unordered_set<int> seen;
    for (const Target& t : targets_) {
        if (!seen.insert(t.id).second) {
            throw ValidationError("duplicate target id " + std::to_string(t.id));
        }
        check_target(t, standoff);
    }
    // ids must be contiguous 1..M
    for (int id = 1; id <= target_count(); ++id) {
        if (!seen.count(id)) {
            throw ValidationError("target ids not contiguous: missing " + std::to_string(id));
        }
    }
}

double Scenario::standoff_radius() const {
    return altitude_h_ * std::cos(deg_to_rad(pitch_theta_deg_));
}

Point3 first_viewpoint(const Target& target, double altitude_h, double pitch_theta_deg) {
    const double range = std::hypot(target.position.x, target.position.y);
    const double standoff = altitude_h * std::cos(deg_to_rad(pitch_theta_deg));
    if (range <= standoff + kDegenerateEps) {
        throw DegenerateTarget("target " + std::to_string(target.id) +
                               " too close to the base for standoff " + format_double(standoff));
    }
    const double factor = 1.0 - standoff / range;
    return Point3{factor * target.position.x, factor * target.position.y, altitude_h};
}

Point3 rotate_viewpoint(const Point3& first, const Target& target, int k, int view_count_k) {
    if (k < 1 || k > view_count_k) {
        throw IndexOutOfRange("view index " + std::to_string(k) + " outside [1, " +
                              std::to_string(view_count_k) + "]");
    }
    const double alpha = deg_to_rad(360.0 / view_count_k * (k - 1));
    const double ox = first.x - target.position.x;
    const double oy = first.y - target.position.y;
    const double c = std::cos(alpha);
    const double s = std::sin(alpha);
    return Point3{ox * c - oy * s + target.position.x,
                  ox * s + oy * c + target.position.y,
                  first.z};
}

std::vector<Viewpoint> generate_viewpoints(const Scenario& scenario) {
    std::vector<Viewpoint> out;
    out.reserve(static_cast<std::size_t>(scenario.target_count()) * scenario.view_count());
    for (const Target& t : scenario.targets()) {
        const Point3 first = first_viewpoint(t, scenario.altitude(), scenario.pitch_deg());
        for (int k = 1; k <= scenario.view_count(); ++k) {
            out.push_back(Viewpoint{VpRef{t.id, k},
                                    rotate_viewpoint(first, t, k, scenario.view_count())});
        }
    }
    return out;
}

Scenario random_scenario(int target_count_m, double area_size, double altitude_h,
                         double pitch_theta_deg, int view_count_k, std::uint64_t seed) {
    if (target_count_m < 1) {
        throw ValidationError("target count M must be >= 1");
    }
    const double standoff = altitude_h * std::cos(deg_to_rad(pitch_theta_deg));
    const double half = area_size / 2.0;

    auto rng = make_rng(seed, "scenario");
    std::uniform_real_distribution<double> coord(-half, half);

    std::vector<Target> targets;
    targets.reserve(target_count_m);
    const long max_attempts = 1000L * target_count_m + 1000L;
    long attempts = 0;
    while (static_cast<int>(targets.size()) < target_count_m) {
        if (++attempts > max_attempts) {
            throw GenerationFailure("could not place " + std::to_string(target_count_m) +
                                    " targets outside standoff radius " + format_double(standoff) +
                                    " in a " + format_double(area_size) + " m square");
        }
        const double x = coord(rng);
        const double y = coord(rng);
        if (std::hypot(x, y) <= standoff + kDegenerateEps) {
            continue;
        }
        targets.push_back(Target{static_cast<int>(targets.size()) + 1, Point3{x, y, 0.0}});
    }
    return Scenario(std::move(targets), altitude_h, pitch_theta_deg, view_count_k, area_size);
}

std::string scenario_to_text(const Scenario& s) {
    std::string out = "scenario v1 M=" + std::to_string(s.target_count()) +
                      " H=" + format_double(s.altitude()) +
                      " theta=" + format_double(s.pitch_deg()) +
                      " K=" + std::to_string(s.view_count()) +
                      " area=" + format_double(s.area_size()) + "\n";
    for (const Target& t : s.targets()) {
        out += "target " + std::to_string(t.id) + " " + format_double(t.position.x) + " " +
               format_double(t.position.y) + "\n";
    }
    return out;
}

Scenario parse_scenario_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;

    if (!std::getline(in, line)) {
        throw ParseError("empty scenario file");
    }
    ++line_no;
    auto header = split(line, ' ');
    if (header.size() != 7 || header[0] != "scenario" || header[1] != "v1") {
        throw ParseError("line 1: expected 'scenario v1 M=... H=... theta=... K=... area=...'");
    }
    const int m = static_cast<int>(parse_int(expect_kv(header[2], "M"), "M"));
    const double h = parse_double(expect_kv(header[3], "H"), "H");
    const double theta = parse_double(expect_kv(header[4], "theta"), "theta");
    const int k = static_cast<int>(parse_int(expect_kv(header[5], "K"), "K"));
    const double area = parse_double(expect_kv(header[6], "area"), "area");

    std::vector<Target> targets;
    targets.reserve(m);
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        auto tok = split(line, ' ');
        if (tok.size() != 4 || tok[0] != "target") {
            throw ParseError("line " + std::to_string(line_no) + ": expected 'target <id> <x> <y>'");
        }
        Target t;
        t.id = static_cast<int>(parse_int(tok[1], "target id"));
        t.position = Point3{parse_double(tok[2], "x"), parse_double(tok[3], "y"), 0.0};
        targets.push_back(t);
    }
    if (static_cast<int>(targets.size()) != m) {
        throw ValidationError("header declares M=" + std::to_string(m) + " but file has " +
                              std::to_string(targets.size()) + " targets");
    }
    return Scenario(std::move(targets), h, theta, k, area);
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open scenario file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str());
}

void save_scenario(const Scenario& scenario, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write scenario file: " + path);
    }
    out << scenario_to_text(scenario);
}

} // namespace uavcov
