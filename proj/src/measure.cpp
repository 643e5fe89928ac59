#include "fhgeo/measure.hpp"

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fhgeo/sampling.hpp"
#include "fhgeo/wricci.hpp"

namespace fhgeo {

namespace {

constexpr long kBatchSize = 1 << 14;

bool in_forward_ball(MetricKind kind, const ConvexBody& body, const Vec& x, const Vec& y,
                     double r) {
    if (!(body.value(y) < 0.0)) return false;
    return metric_distance(kind, body, x, y) <= r;
}

double box_volume(const ConvexBody& body) {
    double vol = 1.0;
    for (int i = 0; i < body.dimension(); ++i)
        vol *= body.box_max()[i] - body.box_min()[i];
    return vol;
}

VolumeEstimate monte_carlo_volume(MetricKind kind, const ConvexBody& body, const Vec& x,
                                  double r, long samples, std::uint64_t seed) {
    long accepted = 0;
    long drawn = 0;
    std::uint64_t batch = 0;
    while (drawn < samples) {
        const long want = std::min(kBatchSize, samples - drawn);
        auto rng = substream(seed, batch++);
        for (long i = 0; i < want; ++i) {
            const Vec y = box_sample(rng, body.box_min(), body.box_max());
            if (in_forward_ball(kind, body, x, y, r)) ++accepted;
        }
        drawn += want;
    }
    const double vol = box_volume(body);
    const double p = static_cast<double>(accepted) / static_cast<double>(samples);
    VolumeEstimate est;
    est.value = vol * p;
    est.std_error = vol * std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(samples));
    est.method = VolumeMethod::MonteCarlo;
    est.samples = samples;
    est.seed = seed;
    return est;
}

VolumeEstimate grid_volume(MetricKind kind, const ConvexBody& body, const Vec& x, double r,
                           long samples, std::uint64_t seed) {
    const int n = body.dimension();
    const int per_axis =
        std::max(2, static_cast<int>(std::round(std::pow(static_cast<double>(samples), 1.0 / n))));
    long total = 1;
    for (int i = 0; i < n; ++i) total *= per_axis;

    std::vector<char> inside(static_cast<std::size_t>(total));
    Vec cell(n);
    for (int i = 0; i < n; ++i) cell[i] = (body.box_max()[i] - body.box_min()[i]) / per_axis;
    double cell_vol = 1.0;
    for (int i = 0; i < n; ++i) cell_vol *= cell[i];

    long accepted = 0;
    for (long idx = 0; idx < total; ++idx) {
        long rem = idx;
        Vec y(n);
        for (int i = 0; i < n; ++i) {
            y[i] = body.box_min()[i] + (rem % per_axis + 0.5) * cell[i];
            rem /= per_axis;
        }
        inside[static_cast<std::size_t>(idx)] = in_forward_ball(kind, body, x, y, r) ? 1 : 0;
        accepted += inside[static_cast<std::size_t>(idx)];
    }

    // Cells whose axis neighbor disagrees straddle the indicator boundary;
    // their count bounds the discretization uncertainty.
    long mixed = 0;
    for (long idx = 0; idx < total; ++idx) {
        if (!inside[static_cast<std::size_t>(idx)]) continue;
        long stride = 1;
        bool boundary_cell = false;
        long rem = idx;
        for (int i = 0; i < n && !boundary_cell; ++i) {
            const long coord = rem % per_axis;
            rem /= per_axis;
            if (coord + 1 < per_axis && !inside[static_cast<std::size_t>(idx + stride)])
                boundary_cell = true;
            if (coord > 0 && !inside[static_cast<std::size_t>(idx - stride)])
                boundary_cell = true;
            stride *= per_axis;
        }
        if (boundary_cell) ++mixed;
    }

    VolumeEstimate est;
    est.value = cell_vol * static_cast<double>(accepted);
    est.std_error = cell_vol * static_cast<double>(mixed);
    est.method = VolumeMethod::Grid;
    est.samples = total;
    est.seed = seed;
    return est;
}

} // namespace

VolumeEstimate forward_ball_volume(MetricKind kind, const ConvexBody& body, const Vec& x,
                                   double r, VolumeMethod method, long samples,
                                   std::uint64_t seed) {
    if (!is_interior(body, x)) raise(ErrorCode::Outside, "ball center not interior");
    if (r < 0.0) raise(ErrorCode::BadSpec, "radius must be nonnegative");
    if (r == 0.0) return VolumeEstimate{0.0, 0.0, method, samples, seed};
    return method == VolumeMethod::MonteCarlo ? monte_carlo_volume(kind, body, x, r, samples, seed)
                                              : grid_volume(kind, body, x, r, samples, seed);
}

double curvature_dimension_K(MetricKind kind, int n, double N) {
    if (!(N > n)) raise(ErrorCode::BadN, "the constant requires N > n");
    const double defect = N == kInfiniteN ? 0.0 : 1.0 / (N - n);
    if (kind == MetricKind::Hilbert)
        return -static_cast<double>(n - 1) - (n + 1) * (n + 1) * defect;
    return -0.25 * (n - 1) - 0.25 * (n + 1) * (n + 1) * defect;
}

BgReport bishop_gromov_check(MetricKind kind, const ConvexBody& body, const Vec& x, double N,
                             double K, const std::vector<double>& r_grid, long samples,
                             std::uint64_t seed) {
    const int n = body.dimension();
    if (!(N > n)) raise(ErrorCode::BadN, "Bishop-Gromov requires N > n");
    if (!(K < 0.0)) raise(ErrorCode::BadK, "only negative curvature bounds are supported");

    const double c = std::sqrt(-K / (N - 1.0));
    const auto model = [&](double r) {
        const auto integrand = [&](double t) { return std::pow(std::sinh(c * t), N - 1.0); };
        return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, r, 12,
                                                                             1e-11);
    };

    BgReport report;
    report.N = N;
    report.K = K;
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
        const double r = r_grid[i];
        const VolumeEstimate est = forward_ball_volume(
            kind, body, x, r, VolumeMethod::MonteCarlo, samples,
            splitmix64(seed ^ (0x1000 + i)));
        BgPoint pt;
        pt.radius = r;
        pt.ball_volume = est.value;
        pt.std_error = est.std_error;
        pt.model_volume = model(r);
        pt.ratio = est.value / pt.model_volume;
        pt.ratio_error = est.std_error / pt.model_volume;
        report.points.push_back(pt);
    }
    for (std::size_t i = 0; i + 1 < report.points.size(); ++i) {
        const BgPoint& a = report.points[i];
        const BgPoint& b = report.points[i + 1];
        const double increase = b.ratio - a.ratio;
        const double threshold =
            3.0 * std::sqrt(a.ratio_error * a.ratio_error + b.ratio_error * b.ratio_error);
        if (increase > threshold)
            report.violations.push_back(
                {static_cast<int>(i), static_cast<int>(i + 1), increase, threshold});
    }
    return report;
}

} // namespace fhgeo
