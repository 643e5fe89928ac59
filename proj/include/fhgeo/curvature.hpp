#pragma once

#include <functional>
#include <vector>

#include "fhgeo/tensor.hpp"

namespace fhgeo {

/// A field of metric matrices y -> g(y) on a neighborhood, with a length
/// scale for differencing stencils. Holds no owning references; a field
/// built over a ConvexBody must not outlive it.
struct MetricField {
    enum class Provenance { GeodesicField, Synthetic };

    std::function<Mat(const Vec&)> eval;
    std::function<double(const Vec&)> safe_radius;
    Provenance provenance = Provenance::Synthetic;
};

struct CurvatureReport {
    double ricci_value;
    double christoffel_norm;  // Frobenius norm of Gamma, diagnostic
    double stencil_step;
    double estimated_error;   // Richardson discrepancy
};

/// How the geodesic field evaluates tensors. Boundary jets are exact and the
/// default; vertical finite differences are kept as an independent route.
enum class FieldRoute { GraphJets, VerticalFd };

/// y -> g_{V(y)} with V(y) = w / F(y, w); integral curves of V are straight
/// lines at unit Finsler speed, hence geodesics of the projectively flat
/// metric.
MetricField geodesic_metric_field(MetricKind kind, const ConvexBody& body, const Vec& w,
                                  FieldRoute route = FieldRoute::GraphJets);

/// Christoffel symbols Gamma[k](i,j) of the field's Levi-Civita connection.
std::vector<Mat> christoffel(const MetricField& field, const Vec& x,
                             const DiffScheme& scheme = {});

/// Ricci form of the field contracted twice with `direction` (no Finsler
/// normalization); used directly by synthetic-field tests.
CurvatureReport ricci_form(const MetricField& field, const Vec& x, const Vec& direction,
                           const DiffScheme& scheme = {});

/// Finsler Ricci curvature via the geodesic-field interpretation: Ricci of
/// g_V evaluated on v. Scales as Ric(cv) = c^2 Ric(v) for unnormalized input.
CurvatureReport ricci(MetricKind kind, const ConvexBody& body, const TangentVector& tv,
                      const DiffScheme& scheme = {});

} // namespace fhgeo
