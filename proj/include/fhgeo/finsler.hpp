#pragma once

#include <string>

#include "fhgeo/domain.hpp"

namespace fhgeo {

enum class MetricKind { Funk, ReverseFunk, Hilbert };

const char* metric_kind_name(MetricKind kind);
MetricKind metric_kind_from_string(const std::string& name);

struct TangentVector {
    Vec x;  // base point, interior
    Vec v;  // direction, nonzero for norm/tensor queries
};

/// Finsler norm at a tangent vector. In chord parameters (units of v):
/// Funk 1/t_plus, reverse Funk 1/t_minus, Hilbert (1/t_plus + 1/t_minus)/2.
double finsler_norm(MetricKind kind, const ConvexBody& body, const TangentVector& tv);

/// Norms computed from an already-solved chord (no re-solve).
double finsler_norm_from_chord(MetricKind kind, const ChordData& ch);

/// Directed Funk distance log(|x-y'| / |y-y'|), y' the forward boundary hit.
double funk_distance(const ConvexBody& body, const Vec& x, const Vec& y);

/// Cross-ratio (symmetrized) distance; equals (d_F(x,y) + d_F(y,x)) / 2.
double hilbert_distance(const ConvexBody& body, const Vec& x, const Vec& y);

double metric_distance(MetricKind kind, const ConvexBody& body, const Vec& x, const Vec& y);

/// Point at arclength s along the unit-speed straight-line geodesic leaving
/// x in direction v. s may be negative as long as the point stays interior.
Vec geodesic_point(MetricKind kind, const ConvexBody& body, const TangentVector& tv, double s);

/// exp_x(v) = point at arclength F(x,v) along the geodesic in direction v.
Vec exp_map(MetricKind kind, const ConvexBody& body, const TangentVector& tv);

/// Throws E_NEAR_BOUNDARY when the shorter chord arm is below
/// 1e-6 * diameter; F blows up like 1/distance there.
void require_clear_of_boundary(const ConvexBody& body, const ChordData& ch, double v_norm);

} // namespace fhgeo
