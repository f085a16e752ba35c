#include "ph/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ph/errors.hpp"
#include "ph/kernels.hpp"

namespace ph {

const char* metric_name(Metric m) {
    return m == Metric::euclidean ? "euclidean" : "chebyshev";
}

bool PointCloud::inside_unit_cube() const {
    for (double c : coords)
        if (!(c >= 0.0 && c <= 1.0)) return false;
    return true;
}

double point_distance(std::span<const double> a, std::span<const double> b, Metric metric) {
    if (a.size() != b.size())
        throw std::invalid_argument("point_distance: dimension mismatch");
    if (metric == Metric::chebyshev) {
        double acc = 0.0;
        for (size_t d = 0; d < a.size(); ++d) {
            const double diff = std::fabs(a[d] - b[d]);
            acc = diff > acc ? diff : acc;
        }
        return acc;
    }
    double acc = 0.0;
    for (size_t d = 0; d < a.size(); ++d) {
        const double diff = a[d] - b[d];
        acc += diff * diff;
    }
    return std::sqrt(acc);
}

namespace {

// Transpose row-major points into coordinate planes for the kernels.
std::vector<double> to_planes(const PointCloud& cloud) {
    const size_t n = cloud.size(), p = cloud.dim;
    std::vector<double> planes(n * p);
    for (size_t i = 0; i < n; ++i)
        for (size_t d = 0; d < p; ++d) planes[d * n + i] = cloud.coords[i * p + d];
    return planes;
}

} // namespace

DistanceMatrix pairwise_distances(const PointCloud& cloud, Metric metric) {
    if (cloud.dim == 0) throw std::invalid_argument("pairwise_distances: dim must be >= 1");
    const size_t n = cloud.size(), p = cloud.dim;
    std::vector<double> lower(n * (n - 1) / 2);
    if (n < 2) return DistanceMatrix(n, std::move(lower));

    const std::vector<double> planes = to_planes(cloud);
    const auto& backend = kernels::active_backend();
    std::vector<double> row(n);
    std::vector<double> q(p);
    for (size_t i = 1; i < n; ++i) {
        for (size_t d = 0; d < p; ++d) q[d] = cloud.coords[i * p + d];
        // Only entries (i, 0..i-1) are consumed; the kernel fills the full row.
        if (metric == Metric::chebyshev)
            backend.chebyshev_row(planes.data(), n, p, q.data(), row.data());
        else
            backend.euclidean_row(planes.data(), n, p, q.data(), row.data());
        std::copy(row.begin(), row.begin() + static_cast<long>(i),
                  lower.begin() + static_cast<long>(i * (i - 1) / 2));
    }
    return DistanceMatrix(n, std::move(lower));
}

size_t ball_count(const PointCloud& cloud, std::span<const double> center, double radius,
                  Metric metric) {
    if (radius < 0.0) throw std::invalid_argument("ball_count: radius must be >= 0");
    if (center.size() != cloud.dim)
        throw std::invalid_argument("ball_count: center dimension mismatch");
    const size_t n = cloud.size();
    if (n == 0) return 0;
    const std::vector<double> planes = to_planes(cloud);
    return kernels::active_backend().count_within(planes.data(), n, cloud.dim, center.data(),
                                                  radius, metric == Metric::chebyshev);
}

namespace {

uint64_t grid_cells_per_axis(size_t p, double r, Metric metric) {
    if (r <= 0.0) throw std::invalid_argument("covering_number_cube: r must be > 0");
    if (p < 1) throw std::invalid_argument("covering_number_cube: p must be >= 1");
    const double r_cheb = metric == Metric::chebyshev ? r : r / std::sqrt(double(p));
    return static_cast<uint64_t>(std::ceil(1.0 / (2.0 * r_cheb)));
}

} // namespace

uint64_t covering_number_cube(size_t p, double r, Metric metric) {
    const uint64_t k = grid_cells_per_axis(p, r, metric);
    uint64_t result = 1;
    for (size_t d = 0; d < p; ++d) {
        if (result > std::numeric_limits<uint64_t>::max() / k)
            throw std::overflow_error("covering_number_cube: count overflows 64 bits");
        result *= k;
    }
    return result;
}

double covering_log_cube(size_t p, double r, Metric metric) {
    return static_cast<double>(p) * std::log(static_cast<double>(grid_cells_per_axis(p, r, metric)));
}

std::vector<std::vector<double>> covering_centers(size_t p, double r, Metric metric) {
    const uint64_t k = grid_cells_per_axis(p, r, metric);
    const uint64_t total = covering_number_cube(p, r, metric);
    std::vector<std::vector<double>> centers;
    centers.reserve(total);
    std::vector<uint64_t> idx(p, 0);
    for (uint64_t c = 0; c < total; ++c) {
        std::vector<double> center(p);
        for (size_t d = 0; d < p; ++d)
            center[d] = (static_cast<double>(idx[d]) + 0.5) / static_cast<double>(k);
        centers.push_back(std::move(center));
        for (size_t d = 0; d < p; ++d) {
            if (++idx[d] < k) break;
            idx[d] = 0;
        }
    }
    return centers;
}

double unit_ball_volume(size_t p) {
    const double half_p = static_cast<double>(p) / 2.0;
    return std::pow(M_PI, half_p) / std::tgamma(half_p + 1.0);
}

double sup_ball_volume(size_t p, double radius, Metric metric) {
    if (radius < 0.0) throw std::invalid_argument("sup_ball_volume: radius must be >= 0");
    double v;
    if (metric == Metric::chebyshev)
        v = std::pow(2.0 * radius, static_cast<double>(p));
    else
        v = unit_ball_volume(p) * std::pow(radius, static_cast<double>(p));
    return std::min(1.0, v);
}

ScalingRegime ScalingRegime::critical(size_t p) { return {Kind::critical, p, 0.0}; }

ScalingRegime ScalingRegime::supercritical(size_t p, double alpha) {
    if (alpha <= 0.0) throw std::invalid_argument("supercritical: alpha must be > 0");
    return {Kind::supercritical, p, alpha};
}

ScalingRegime ScalingRegime::subcritical(size_t p, double beta) {
    if (beta <= 1.0 / static_cast<double>(p))
        throw std::invalid_argument("subcritical: beta must exceed 1/p");
    return {Kind::subcritical, p, beta};
}

double ScalingRegime::eta(size_t n) const {
    if (n == 0) throw std::invalid_argument("eta: n must be >= 1");
    const double x = static_cast<double>(n);
    const double inv_p = 1.0 / static_cast<double>(dim);
    switch (kind) {
    case Kind::critical:
        return std::pow(x, inv_p);
    case Kind::subcritical:
        return std::pow(x, param);
    case Kind::supercritical: {
        auto raw = [&](double m) {
            return std::pow(m, inv_p) * std::pow(std::max(std::log(m), 1e-12), -param);
        };
        if (n <= 2) return raw(2.0);
        // raw is unimodal with a single interior minimum, so the running
        // maximum over [2, n] is attained at an endpoint.
        return std::max(raw(2.0), raw(x));
    }
    }
    return 1.0;
}

namespace {

std::vector<double> parse_csv_row(const std::string& line) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        size_t pos = 0;
        const double v = std::stod(cell, &pos);
        while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
        if (pos != cell.size()) throw std::invalid_argument("trailing characters");
        row.push_back(v);
    }
    return row;
}

bool looks_numeric(const std::string& line) {
    try {
        parse_csv_row(line);
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

} // namespace

PointCloud load_cloud_csv(std::istream& in, bool allow_outside_cube) {
    PointCloud cloud;
    std::string line;
    size_t lineno = 0;
    bool first_data = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (first_data && !looks_numeric(line)) continue; // header
        std::vector<double> row;
        try {
            row = parse_csv_row(line);
        } catch (const std::exception&) {
            throw config_error("cloud.csv:" + std::to_string(lineno), "unparsable row");
        }
        if (first_data) {
            cloud.dim = row.size();
            first_data = false;
        } else if (row.size() != cloud.dim) {
            throw config_error("cloud.csv:" + std::to_string(lineno),
                               "row arity " + std::to_string(row.size()) + " != " +
                                   std::to_string(cloud.dim));
        }
        cloud.coords.insert(cloud.coords.end(), row.begin(), row.end());
    }
    if (cloud.coords.empty()) {
        cloud.dim = std::max<size_t>(cloud.dim, 1);
        return cloud;
    }
    if (!cloud.inside_unit_cube()) {
        if (!allow_outside_cube)
            throw config_error("cloud.csv",
                               "coordinates outside [0,1]; pass --allow-outside-cube to rescale");
        const size_t n = cloud.size(), p = cloud.dim;
        for (size_t d = 0; d < p; ++d) {
            double lo = cloud.coords[d], hi = cloud.coords[d];
            for (size_t i = 0; i < n; ++i) {
                lo = std::min(lo, cloud.coords[i * p + d]);
                hi = std::max(hi, cloud.coords[i * p + d]);
            }
            const double span = hi - lo;
            for (size_t i = 0; i < n; ++i) {
                double& c = cloud.coords[i * p + d];
                c = span > 0.0 ? (c - lo) / span : 0.5;
            }
        }
    }
    return cloud;
}

PointCloud load_cloud_csv_file(const std::string& path, bool allow_outside_cube) {
    std::ifstream in(path);
    if (!in) throw config_error("input", "cannot open " + path);
    return load_cloud_csv(in, allow_outside_cube);
}

std::string format_exact(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void save_cloud_csv(std::ostream& out, const PointCloud& cloud) {
    const size_t n = cloud.size(), p = cloud.dim;
    for (size_t i = 0; i < n; ++i) {
        for (size_t d = 0; d < p; ++d) {
            if (d > 0) out << ',';
            out << format_exact(cloud.coords[i * p + d]);
        }
        out << '\n';
    }
}

void save_cloud_csv_file(const std::string& path, const PointCloud& cloud) {
    std::ofstream out(path);
    if (!out) throw config_error("output", "cannot open " + path);
    save_cloud_csv(out, cloud);
}

} // namespace ph
