#include "uavcov/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "uavcov/errors.hpp"
#include "uavcov/rng.hpp"
#include "uavcov/textio.hpp"

namespace uavcov {

void AdpcParams::validate() const {
    if (!(xi >= 0.0) || !std::isfinite(xi)) {
        throw ValidationError("expansion index xi must be >= 0");
    }
    if (!(d_c_percentile > 0.0) || !(d_c_percentile < 100.0)) {
        throw ValidationError("d_c percentile must lie in (0, 100)");
    }
    if (kmeans_max_iters < 1 || kmeans_restarts < 1) {
        throw ValidationError("k-means iteration and restart counts must be >= 1");
    }
}

std::string to_string(ClusteringMethod method) {
    switch (method) {
    case ClusteringMethod::Adpc:
        return "ADPC";
    case ClusteringMethod::Dpc:
        return "DPC";
    case ClusteringMethod::Kmeans:
        return "KMEANS";
    }
    return "?";
}

ClusteringMethod parse_clustering_method(const std::string& name) {
    std::string up;
    for (char c : name) {
        up += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    if (up == "ADPC") {
        return ClusteringMethod::Adpc;
    }
    if (up == "DPC") {
        return ClusteringMethod::Dpc;
    }
    if (up == "KMEANS" || up == "K-MEANS") {
        return ClusteringMethod::Kmeans;
    }
    throw ValidationError("unknown clustering method '" + name + "' (expected adpc, dpc or kmeans)");
}

DistanceTable pairwise_distances(const std::vector<Viewpoint>& viewpoints, DistanceMode mode) {
    const std::size_t n = viewpoints.size();
    if (n < 2) {
        throw InsufficientData("pairwise distances need at least 2 viewpoints");
    }
    DistanceTable table(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            table.set(i, j, leg_distance(viewpoints[i].position, viewpoints[j].position, mode));
        }
    }
    return table;
}

double cutoff_distance(const DistanceTable& table, double percentile) {
    const std::size_t n = table.size();
    std::vector<double> dists;
    dists.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            dists.push_back(table.at(i, j));
        }
    }
    if (dists.empty()) {
        throw InsufficientData("no pairwise distances");
    }
    std::sort(dists.begin(), dists.end());
    if (dists.back() <= 0.0) {
        throw DegenerateGeometry("all viewpoints coincide; cutoff distance undefined");
    }
    // nearest-rank percentile
    std::size_t rank = static_cast<std::size_t>(
        std::ceil(percentile / 100.0 * static_cast<double>(dists.size())));
    rank = std::clamp<std::size_t>(rank, 1, dists.size());
    return dists[rank - 1];
}

std::vector<double> relative_density(const DistanceTable& table, double d_c) {
    if (!(d_c > 0.0)) {
        throw ValidationError("cutoff distance must be positive");
    }
    const std::size_t n = table.size();
    std::vector<double> rho(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) {
                continue;
            }
            const double q = table.at(i, j) / d_c;
            sum += std::exp(-q * q);
        }
        rho[i] = sum;
    }
    return rho;
}

namespace {

// Strict density order with index tie-break: i denser than j.
bool denser(const std::vector<double>& rho, std::size_t i, std::size_t j) {
    return rho[i] > rho[j] || (rho[i] == rho[j] && i < j);
}

} // namespace

DensityProfile density_profile(const DistanceTable& table, double d_c) {
    DensityProfile p;
    p.d_c = d_c;
    p.rho = relative_density(table, d_c);
    const std::size_t n = table.size();
    p.delta.assign(n, 0.0);
    p.nearest_denser.assign(n, -1);

    for (std::size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        int best_j = -1;
        double max_dist = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) {
                continue;
            }
            max_dist = std::max(max_dist, table.at(i, j));
            if (denser(p.rho, j, i) && table.at(i, j) < best) {
                best = table.at(i, j);
                best_j = static_cast<int>(j);
            }
        }
        if (best_j < 0) {
            p.delta[i] = max_dist; // the unique density peak
        } else {
            p.delta[i] = best;
            p.nearest_denser[i] = best_j;
        }
    }

    p.gamma.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        p.gamma[i] = p.rho[i] * p.delta[i];
    }
    return p;
}

std::vector<int> select_centers(const std::vector<double>& gamma, int n_clusters) {
    if (n_clusters < 1 || static_cast<std::size_t>(n_clusters) > gamma.size()) {
        throw ValidationError("cannot select " + std::to_string(n_clusters) + " centers from " +
                              std::to_string(gamma.size()) + " viewpoints");
    }
    std::vector<int> order(gamma.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (gamma[a] != gamma[b]) {
            return gamma[a] > gamma[b];
        }
        return a < b;
    });
    order.resize(n_clusters);
    return order;
}

std::vector<double> relative_distance_ratio(const std::vector<double>& center_base_distances) {
    if (center_base_distances.empty()) {
        throw ValidationError("need at least one center");
    }
    const double mean = std::accumulate(center_base_distances.begin(),
                                        center_base_distances.end(), 0.0) /
                        static_cast<double>(center_base_distances.size());
    if (!(mean > 0.0)) {
        throw DegenerateGeometry("all centers coincide with the base station");
    }
    std::vector<double> r;
    r.reserve(center_base_distances.size());
    for (double d : center_base_distances) {
        r.push_back(d / mean);
    }
    return r;
}

double adaptive_factor(double dist_to_center, int omega, double r, double xi) {
    return dist_to_center * std::pow(static_cast<double>(omega), xi * r);
}

namespace {

std::vector<double> center_base_dists(const std::vector<Viewpoint>& viewpoints,
                                      const std::vector<int>& centers, const Point3& base,
                                      DistanceMode mode) {
    std::vector<double> d;
    d.reserve(centers.size());
    for (int c : centers) {
        d.push_back(leg_distance(viewpoints[c].position, base, mode));
    }
    return d;
}

} // namespace

Clustering adpc_assign(const std::vector<Viewpoint>& viewpoints,
                       const std::vector<int>& centers, const Point3& base,
                       const AdpcParams& params, const DistanceTable& table,
                       std::vector<AssignmentStep>* audit) {
    const std::size_t n = viewpoints.size();
    const int k = static_cast<int>(centers.size());

    Clustering out;
    out.centers = centers;
    out.assignment.assign(n, -1);
    out.sizes.assign(k, 1); // each center counts as a member of its own cluster
    out.center_base_distances = center_base_dists(viewpoints, centers, base, params.distance_mode);
    const std::vector<double> r = relative_distance_ratio(out.center_base_distances);

    for (int i = 0; i < k; ++i) {
        out.assignment[centers[i]] = i;
    }

    // Farthest-from-base first, ties by ascending index.
    std::vector<int> order;
    order.reserve(n - centers.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (out.assignment[i] < 0) {
            order.push_back(static_cast<int>(i));
        }
    }
    std::vector<double> base_dist(n);
    for (std::size_t i = 0; i < n; ++i) {
        base_dist[i] = leg_distance(viewpoints[i].position, base, params.distance_mode);
    }
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (base_dist[a] != base_dist[b]) {
            return base_dist[a] > base_dist[b];
        }
        return a < b;
    });

    for (int vp : order) {
        int best = 0;
        double best_sigma = std::numeric_limits<double>::infinity();
        std::vector<double> sigmas;
        if (audit) {
            sigmas.reserve(k);
        }
        for (int i = 0; i < k; ++i) {
            const double sigma =
                adaptive_factor(table.at(vp, centers[i]), out.sizes[i], r[i], params.xi);
            if (audit) {
                sigmas.push_back(sigma);
            }
            if (sigma < best_sigma) {
                best_sigma = sigma;
                best = i;
            }
        }
        out.assignment[vp] = best;
        ++out.sizes[best];
        if (audit) {
            audit->push_back(AssignmentStep{vp, best, std::move(sigmas)});
        }
    }
    return out;
}

Clustering dpc_assign(const std::vector<Viewpoint>& viewpoints,
                      const std::vector<int>& centers, const Point3& base,
                      const DensityProfile& profile, const AdpcParams& params) {
    const std::size_t n = viewpoints.size();

    Clustering out;
    out.centers = centers;
    out.assignment.assign(n, -1);
    out.sizes.assign(centers.size(), 0);
    out.center_base_distances = center_base_dists(viewpoints, centers, base, params.distance_mode);

    for (std::size_t i = 0; i < centers.size(); ++i) {
        out.assignment[centers[i]] = static_cast<int>(i);
    }

    std::vector<int> rank(n);
    std::iota(rank.begin(), rank.end(), 0);
    std::stable_sort(rank.begin(), rank.end(), [&](int a, int b) {
        if (profile.rho[a] != profile.rho[b]) {
            return profile.rho[a] > profile.rho[b];
        }
        return a < b;
    });

    for (int vp : rank) {
        if (out.assignment[vp] >= 0) {
            continue;
        }
        const int up = profile.nearest_denser[vp];
        if (up >= 0 && out.assignment[up] >= 0) {
            out.assignment[vp] = out.assignment[up];
        } else {
            // density peak that was not picked as a center: fall back to the
            // nearest center
            double best = std::numeric_limits<double>::infinity();
            int best_i = 0;
            for (std::size_t i = 0; i < centers.size(); ++i) {
                const double d = leg_distance(viewpoints[vp].position,
                                              viewpoints[centers[i]].position,
                                              params.distance_mode);
                if (d < best) {
                    best = d;
                    best_i = static_cast<int>(i);
                }
            }
            out.assignment[vp] = best_i;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        ++out.sizes[out.assignment[i]];
    }
    return out;
}

namespace {

double sqdist3(const Point3& a, const Point3& b) {
    const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    return dx * dx + dy * dy + dz * dz;
}

struct KmeansRun {
    std::vector<int> assignment;
    std::vector<Point3> centroids;
    double inertia = std::numeric_limits<double>::infinity();
    int repairs = 0;
};

KmeansRun kmeans_once(const std::vector<Viewpoint>& vps, int k, std::mt19937_64& rng,
                      int max_iters) {
    const std::size_t n = vps.size();
    KmeansRun run;
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    // k-means++ seeding
    std::vector<Point3> centroids;
    centroids.reserve(k);
    std::uniform_int_distribution<std::size_t> first(0, n - 1);
    centroids.push_back(vps[first(rng)].position);
    std::vector<double> d2(n);
    while (static_cast<int>(centroids.size()) < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const Point3& c : centroids) {
                best = std::min(best, sqdist3(vps[i].position, c));
            }
            d2[i] = best;
            total += best;
        }
        std::size_t pick = 0;
        if (total > 0.0) {
            const double threshold = unit(rng) * total;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (acc >= threshold) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = first(rng); // all points coincide with existing centroids
        }
        centroids.push_back(vps[pick].position);
    }

    std::vector<int> assignment(n, -1);
    for (int iter = 0; iter < max_iters; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                const double d = sqdist3(vps[i].position, centroids[c]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (assignment[i] != best) {
                assignment[i] = best;
                changed = true;
            }
        }
        if (!changed && iter > 0) {
            break;
        }
        std::vector<Point3> sums(k);
        std::vector<int> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const int c = assignment[i];
            sums[c].x += vps[i].position.x;
            sums[c].y += vps[i].position.y;
            sums[c].z += vps[i].position.z;
            ++counts[c];
        }
        for (int c = 0; c < k; ++c) {
            if (counts[c] == 0) {
                // reseed with the point farthest from its current centroid
                std::size_t far = 0;
                double far_d = -1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double d = sqdist3(vps[i].position, centroids[assignment[i]]);
                    if (d > far_d) {
                        far_d = d;
                        far = i;
                    }
                }
                centroids[c] = vps[far].position;
                assignment[far] = c;
                ++run.repairs;
            } else {
                centroids[c] = Point3{sums[c].x / counts[c], sums[c].y / counts[c],
                                      sums[c].z / counts[c]};
            }
        }
    }

    run.inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        run.inertia += sqdist3(vps[i].position, centroids[assignment[i]]);
    }
    run.assignment = std::move(assignment);
    run.centroids = std::move(centroids);
    return run;
}

} // namespace

Clustering kmeans_assign(const std::vector<Viewpoint>& viewpoints, int n_clusters,
                         std::uint64_t seed, const AdpcParams& params) {
    if (n_clusters < 1 || static_cast<std::size_t>(n_clusters) > viewpoints.size()) {
        throw ValidationError("k-means needs 1 <= N <= number of viewpoints");
    }
    KmeansRun best;
    for (int restart = 0; restart < params.kmeans_restarts; ++restart) {
        auto rng = make_rng(seed, "kmeans", static_cast<std::uint64_t>(restart));
        KmeansRun run = kmeans_once(viewpoints, n_clusters, rng, params.kmeans_max_iters);
        if (run.inertia < best.inertia) {
            best = std::move(run);
        }
    }

    Clustering out;
    out.assignment = best.assignment;
    out.sizes.assign(n_clusters, 0);
    out.empty_cluster_repairs = best.repairs;
    for (int a : out.assignment) {
        ++out.sizes[a];
    }
    // snap each cluster center to the member viewpoint nearest its centroid
    out.centers.assign(n_clusters, -1);
    std::vector<double> best_d(n_clusters, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < viewpoints.size(); ++i) {
        const int c = out.assignment[i];
        const double d = sqdist3(viewpoints[i].position, best.centroids[c]);
        if (d < best_d[c]) {
            best_d[c] = d;
            out.centers[c] = static_cast<int>(i);
        }
    }
    out.center_base_distances =
        center_base_dists(viewpoints, out.centers, Point3{0, 0, 0}, params.distance_mode);
    return out;
}

Clustering cluster_viewpoints(const std::vector<Viewpoint>& viewpoints, int n_clusters,
                              ClusteringMethod method, const Point3& base,
                              const AdpcParams& params, std::uint64_t seed) {
    params.validate();
    if (n_clusters < 1 || static_cast<std::size_t>(n_clusters) > viewpoints.size()) {
        throw ValidationError("cluster count must satisfy 1 <= N <= number of viewpoints");
    }
    if (viewpoints.size() == 1) {
        Clustering out;
        out.centers = {0};
        out.assignment = {0};
        out.sizes = {1};
        out.center_base_distances = {leg_distance(viewpoints[0].position, base,
                                                  params.distance_mode)};
        return out;
    }
    if (method == ClusteringMethod::Kmeans) {
        return kmeans_assign(viewpoints, n_clusters, seed, params);
    }
    const DistanceTable table = pairwise_distances(viewpoints, params.distance_mode);
    const double d_c = cutoff_distance(table, params.d_c_percentile);
    const DensityProfile profile = density_profile(table, d_c);
    const std::vector<int> centers = select_centers(profile.gamma, n_clusters);
    if (method == ClusteringMethod::Adpc) {
        return adpc_assign(viewpoints, centers, base, params, table);
    }
    return dpc_assign(viewpoints, centers, base, profile, params);
}

std::string clustering_to_text(const Clustering& clustering,
                               const std::vector<Viewpoint>& viewpoints) {
    std::string out = "clusters v1 N=" + std::to_string(clustering.centers.size()) + "\n";
    const std::vector<double> r = relative_distance_ratio(clustering.center_base_distances);
    for (std::size_t i = 0; i < clustering.centers.size(); ++i) {
        const Viewpoint& c = viewpoints[clustering.centers[i]];
        out += "cluster " + std::to_string(i + 1) + " center=" + std::to_string(c.ref.target_id) +
               ":" + std::to_string(c.ref.view_index) +
               " omega=" + std::to_string(clustering.sizes[i]) +
               " r=" + format_double(r[i]) + " members=";
        bool any = false;
        for (std::size_t v = 0; v < viewpoints.size(); ++v) {
            if (clustering.assignment[v] == static_cast<int>(i)) {
                if (any) {
                    out += ',';
                }
                out += std::to_string(viewpoints[v].ref.target_id) + ":" +
                       std::to_string(viewpoints[v].ref.view_index);
                any = true;
            }
        }
        out += "\n";
    }
    return out;
}

} // namespace uavcov
