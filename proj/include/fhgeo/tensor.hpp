#pragma once

#include <cstdint>

#include "fhgeo/finsler.hpp"

namespace fhgeo {

/// Finite-difference configuration shared by the tensor and curvature
/// operations. Steps are fractions of a geometric safe radius (half the
/// shorter chord arm), so stencils always stay inside the domain.
struct DiffScheme {
    double step_fraction = 1e-3;      // base fraction for 5-point stencils
    int richardson_levels = 2;        // 1 = plain stencil, 2 = extrapolated
    double curvature_tolerance = 1e-4;

    double effective_fraction() const {
        // Floor keeps user overrides out of the pure-roundoff regime.
        return step_fraction < 1e-5 ? 1e-5 : step_fraction;
    }
};

/// Fundamental tensor g_ij(v) = (1/2) d^2(F^2)/dv_i dv_j by vertical central
/// differences. 0-homogeneous in v by construction (evaluated at v/|v|).
Mat metric_tensor(MetricKind kind, const ConvexBody& body, const TangentVector& tv,
                  const DiffScheme& scheme = {});

/// Funk-only horizontal route (1/F) d^2F/dx_i dx_j - (1/F^2) dF/dx_i dF/dx_j.
Mat metric_tensor_horizontal(const ConvexBody& body, const TangentVector& tv,
                             const DiffScheme& scheme = {});

/// Closed-form tensor assembled from the boundary-graph jets; no finite
/// differences, exact up to the chord solver tolerance.
Mat metric_tensor_graph_oracle(MetricKind kind, const ConvexBody& body, const TangentVector& tv);

double inner_product(const Mat& g, const Vec& w1, const Vec& w2);

/// max_i |dF/dx_i - sigma F dF/dv_i|, sigma = +1 (Funk), -1 (reverse Funk);
/// small values certify the horizontal/vertical derivative identity.
double okada_residual(MetricKind kind, const ConvexBody& body, const TangentVector& tv,
                      const DiffScheme& scheme = {});

/// Sampled pointwise estimate of sup F(w) / g_v(w,w)^{1/2} over unit (v, w).
double uniform_convexity_estimate(MetricKind kind, const ConvexBody& body, const Vec& x,
                                  int direction_samples, std::uint64_t seed);

} // namespace fhgeo
