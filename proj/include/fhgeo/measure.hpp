#pragma once

#include <cstdint>
#include <vector>

#include "fhgeo/finsler.hpp"

namespace fhgeo {

enum class VolumeMethod { MonteCarlo, Grid };

struct VolumeEstimate {
    double value;
    double std_error;
    VolumeMethod method;
    long samples;
    std::uint64_t seed;
};

/// Lebesgue volume of the forward metric ball {y in D : d(x,y) <= r}.
/// Monte-Carlo batches use per-batch substreams keyed by (seed, batch), so
/// the estimate is independent of batch partitioning.
VolumeEstimate forward_ball_volume(MetricKind kind, const ConvexBody& body, const Vec& x,
                                   double r, VolumeMethod method, long samples,
                                   std::uint64_t seed);

struct BgPoint {
    double radius;
    double ball_volume;
    double std_error;
    double model_volume;  // integral of sinh(t sqrt(-K/(N-1)))^(N-1)
    double ratio;
    double ratio_error;
};

struct BgViolation {
    int from_index;
    int to_index;
    double increase;
    double threshold;
};

struct BgReport {
    double N;
    double K;
    std::vector<BgPoint> points;
    std::vector<BgViolation> violations;
};

/// Bishop-Gromov ratio check: r -> vol(B+(x,r)) / model(r) must be
/// nonincreasing under the curvature-dimension condition; increases beyond
/// 3x the combined Monte-Carlo error are flagged.
BgReport bishop_gromov_check(MetricKind kind, const ConvexBody& body, const Vec& x, double N,
                             double K, const std::vector<double>& r_grid, long samples,
                             std::uint64_t seed);

/// The curvature-dimension constant for the metric at dimension n and
/// effective dimension N (N = inf allowed).
double curvature_dimension_K(MetricKind kind, int n, double N);

} // namespace fhgeo
