#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uavcov/errors.hpp"
#include "uavcov/geometry.hpp"

namespace uavcov {

struct Target {
    int id = 0;        // 1-based, unique and contiguous within a Scenario
    Point3 position;   // ground target, z == 0

    friend bool operator==(const Target&, const Target&) = default;
};

// Identifies one (target, view) observation slot.
struct VpRef {
    int target_id = 0;
    int view_index = 0; // 1..K

    friend bool operator==(const VpRef&, const VpRef&) = default;
    friend auto operator<=>(const VpRef&, const VpRef&) = default;
};

struct Viewpoint {
    VpRef ref;
    Point3 position; // at altitude H, on the standoff circle of its target
};

// Immutable world model: targets, base at the origin, imaging geometry.
class Scenario {
public:
    Scenario(std::vector<Target> targets, double altitude_h, double pitch_theta_deg,
             int view_count_k, double area_size);

    const std::vector<Target>& targets() const { return targets_; }
    Point3 base() const { return Point3{0.0, 0.0, 0.0}; }
    double altitude() const { return altitude_h_; }
    double pitch_deg() const { return pitch_theta_deg_; }
    int view_count() const { return view_count_k_; }
    double area_size() const { return area_size_; }
    int target_count() const { return static_cast<int>(targets_.size()); }

    // Horizontal radius of every viewpoint circle: H * cos(theta).
    double standoff_radius() const;

    friend bool operator==(const Scenario&, const Scenario&) = default;

private:
    std::vector<Target> targets_;
    double altitude_h_;
    double pitch_theta_deg_;
    int view_count_k_;
    double area_size_;
};

// Nearest-to-base point on the target's standoff circle, at altitude H.
Point3 first_viewpoint(const Target& target, double altitude_h, double pitch_theta_deg);

// Rotates the first viewpoint's horizontal offset by (360/K)*(k-1) degrees
// counterclockwise about the target.
Point3 rotate_viewpoint(const Point3& first, const Target& target, int k, int view_count_k);

// All M*K viewpoints, ordered by (target_id, view_index). Pure.
std::vector<Viewpoint> generate_viewpoints(const Scenario& scenario);

// Uniform targets in the centered square [-area/2, area/2]^2, rejecting
// points inside the standoff radius. Deterministic per seed.
Scenario random_scenario(int target_count_m, double area_size, double altitude_h,
                         double pitch_theta_deg, int view_count_k, std::uint64_t seed);

Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& scenario, const std::string& path);

Scenario parse_scenario_text(const std::string& text);
std::string scenario_to_text(const Scenario& scenario);

} // namespace uavcov
