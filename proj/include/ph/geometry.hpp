#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace ph {

enum class Metric { euclidean, chebyshev };

const char* metric_name(Metric m);

// Ordered finite sample in [0,1]^p. Point order is meaningful: the i-th
// point is observation X_i of the generating process.
struct PointCloud {
    std::vector<double> coords; // row-major, size() * dim entries
    size_t dim = 1;

    size_t size() const { return dim == 0 ? 0 : coords.size() / dim; }

    std::span<const double> point(size_t i) const {
        return {coords.data() + i * dim, dim};
    }

    void push_back(std::span<const double> x) {
        coords.insert(coords.end(), x.begin(), x.end());
    }

    bool inside_unit_cube() const;
};

double point_distance(std::span<const double> a, std::span<const double> b, Metric metric);

// Dense symmetric distance matrix, lower triangle packed.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    DistanceMatrix(size_t n, std::vector<double> lower) : n_(n), lower_(std::move(lower)) {}

    size_t size() const { return n_; }

    double operator()(size_t i, size_t j) const {
        if (i == j) return 0.0;
        if (i < j) std::swap(i, j);
        return lower_[i * (i - 1) / 2 + j];
    }

private:
    size_t n_ = 0;
    std::vector<double> lower_; // row i holds entries (i,0..i-1)
};

// Entry (i,j) = d(x_i, x_j). Throws std::invalid_argument on empty dim.
DistanceMatrix pairwise_distances(const PointCloud& cloud, Metric metric);

// Number of cloud points within closed distance `radius` of `center`.
size_t ball_count(const PointCloud& cloud, std::span<const double> center, double radius,
                  Metric metric);

// Upper bound on the r-covering number of [0,1]^p: grid of cubes of side
// <= 2r (Chebyshev); for Euclidean, r is shrunk by 1/sqrt(p) first since a
// Euclidean r-ball contains a Chebyshev r/sqrt(p)-ball.
uint64_t covering_number_cube(size_t p, double r, Metric metric);
double covering_log_cube(size_t p, double r, Metric metric);

// Centers realizing the covering bound (cell centers of the grid).
std::vector<std::vector<double>> covering_centers(size_t p, double r, Metric metric);

// Lebesgue volume of the p-dimensional unit Euclidean ball.
double unit_ball_volume(size_t p);

// sup over centers of the Lebesgue measure of a radius ball, clipped to the
// total cube volume 1. Deliberately unclipped at the boundary (interior
// supremum): this is the quantity the concentration bounds use.
double sup_ball_volume(size_t p, double radius, Metric metric);

// Scale factor eta_n. Supercritical raw values n^{1/p} (log n)^{-alpha} dip
// for very small n; eta() returns the running maximum so the sequence is
// nondecreasing as required.
struct ScalingRegime {
    enum class Kind { critical, supercritical, subcritical };

    static ScalingRegime critical(size_t p);
    static ScalingRegime supercritical(size_t p, double alpha);
    static ScalingRegime subcritical(size_t p, double beta);

    double eta(size_t n) const;

    Kind kind = Kind::critical;
    size_t dim = 1;
    double param = 0.0;
};

// CSV: one row per point, p numeric columns, optional header line.
// Values outside [0,1] are rejected unless allow_outside_cube, which
// min-max rescales each column to [0,1].
PointCloud load_cloud_csv(std::istream& in, bool allow_outside_cube = false);
PointCloud load_cloud_csv_file(const std::string& path, bool allow_outside_cube = false);
void save_cloud_csv(std::ostream& out, const PointCloud& cloud);
void save_cloud_csv_file(const std::string& path, const PointCloud& cloud);

// Formats a double so that parsing the result recovers the exact value.
std::string format_exact(double v);

} // namespace ph
