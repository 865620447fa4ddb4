#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uavcov/geometry.hpp"
#include "uavcov/scenario.hpp"

namespace uavcov {

// Dense symmetric distance table over a viewpoint set.
class DistanceTable {
public:
    DistanceTable() = default;
    explicit DistanceTable(std::size_t n) : n_(n), data_(n * n, 0.0) {}

    std::size_t size() const { return n_; }
    double at(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
    void set(std::size_t i, std::size_t j, double v) {
        data_[i * n_ + j] = v;
        data_[j * n_ + i] = v;
    }

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

struct DensityProfile {
    std::vector<double> rho;   // Gaussian-kernel relative density
    std::vector<double> delta; // distance to nearest denser point (max-dist for the peak)
    std::vector<double> gamma; // rho * delta
    // Index of the denser point realizing delta; -1 for the global peak.
    std::vector<int> nearest_denser;
    double d_c = 0.0;
};

struct AdpcParams {
    double xi = 0.5;              // expansion index
    double d_c_percentile = 2.0;  // percentile of pairwise distances for d_c
    DistanceMode distance_mode = DistanceMode::Euclid3d;
    int kmeans_max_iters = 100;
    int kmeans_restarts = 1;

    void validate() const;
};

struct Clustering {
    std::vector<int> centers;                   // viewpoint indices, one per cluster
    std::vector<int> assignment;                // viewpoint index -> cluster index
    std::vector<int> sizes;                     // per-cluster member counts
    std::vector<double> center_base_distances;  // D(C_i, B)
    int empty_cluster_repairs = 0;              // k-means only
};

// One line per sequential ADPC assignment, for replay audits.
struct AssignmentStep {
    int viewpoint = 0;
    int chosen_cluster = 0;
    std::vector<double> sigmas; // one per cluster, at decision time
};

enum class ClusteringMethod {
    Adpc,
    Dpc,
    Kmeans,
};

std::string to_string(ClusteringMethod method);
ClusteringMethod parse_clustering_method(const std::string& name);

DistanceTable pairwise_distances(const std::vector<Viewpoint>& viewpoints, DistanceMode mode);

// Nearest-rank percentile of the multiset of distinct-pair distances.
double cutoff_distance(const DistanceTable& table, double percentile);

// rho_i = sum_{j != i} exp(-(D_ij / d_c)^2)
std::vector<double> relative_density(const DistanceTable& table, double d_c);

// Fills delta, gamma and nearest_denser from rho; ties in rho are broken by
// ascending viewpoint index, so exactly one point receives the max-distance rule.
DensityProfile density_profile(const DistanceTable& table, double d_c);

// The N largest-gamma viewpoints; ties toward lower index.
std::vector<int> select_centers(const std::vector<double>& gamma, int n_clusters);

// r_i = D(C_i, B) / mean_j D(C_j, B)
std::vector<double> relative_distance_ratio(const std::vector<double>& center_base_distances);

// sigma = D * omega^(xi * r)
double adaptive_factor(double dist_to_center, int omega, double r, double xi);

Clustering adpc_assign(const std::vector<Viewpoint>& viewpoints,
                       const std::vector<int>& centers, const Point3& base,
                       const AdpcParams& params, const DistanceTable& table,
                       std::vector<AssignmentStep>* audit = nullptr);

// Classic DPC allocation: each point joins the cluster of its nearest denser
// neighbor, resolved in descending-density order.
Clustering dpc_assign(const std::vector<Viewpoint>& viewpoints,
                      const std::vector<int>& centers, const Point3& base,
                      const DensityProfile& profile, const AdpcParams& params);

// Seeded k-means++ with Lloyd iterations and best-of-restarts selection;
// cluster centers are snapped to the member viewpoint nearest each centroid.
Clustering kmeans_assign(const std::vector<Viewpoint>& viewpoints, int n_clusters,
                         std::uint64_t seed, const AdpcParams& params);

// Full pipeline for one method: ADPC/DPC share center selection via gamma.
Clustering cluster_viewpoints(const std::vector<Viewpoint>& viewpoints, int n_clusters,
                              ClusteringMethod method, const Point3& base,
                              const AdpcParams& params, std::uint64_t seed);

// Debug dump described in the clusters v1 format.
std::string clustering_to_text(const Clustering& clustering,
                               const std::vector<Viewpoint>& viewpoints);

} // namespace uavcov
