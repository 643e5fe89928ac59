#pragma once

// Shared fixtures: the acceptance domain set and independent closed-form
// oracles (Klein model, shifted-disk Funk norm) used to pin expected values.

#include <cmath>

#include "fhgeo/domain.hpp"
#include "fhgeo/finsler.hpp"

namespace testsupport {

using fhgeo::ConvexBody;
using fhgeo::DomainSpec;
using fhgeo::Mat;
using fhgeo::Vec;

inline Vec vec2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

inline Vec vec3(double a, double b, double c) {
    Vec v(3);
    v << a, b, c;
    return v;
}

inline ConvexBody unit_disk() {
    fhgeo::EllipsoidSpec e;
    e.center = Vec::Zero(2);
    e.semi_axes = vec2(1.0, 1.0);
    return fhgeo::load_domain(DomainSpec{e});
}

inline ConvexBody unit_ball3() {
    fhgeo::EllipsoidSpec e;
    e.center = Vec::Zero(3);
    e.semi_axes = vec3(1.0, 1.0, 1.0);
    return fhgeo::load_domain(DomainSpec{e});
}

inline ConvexBody ellipse21() {
    fhgeo::EllipsoidSpec e;
    e.center = Vec::Zero(2);
    e.semi_axes = vec2(2.0, 1.0);
    return fhgeo::load_domain(DomainSpec{e});
}

inline ConvexBody ellipsoid3() {
    fhgeo::EllipsoidSpec e;
    e.center = Vec::Zero(3);
    e.semi_axes = vec3(2.0, 1.0, 1.5);
    return fhgeo::load_domain(DomainSpec{e});
}

/// Smoothed hexagon: six facets at 60 degree spacing, offset 0.8.
inline ConvexBody lse_hexagon() {
    fhgeo::LogSumExpSpec s;
    for (int k = 0; k < 6; ++k) {
        const double a = M_PI * k / 3.0;
        s.facets.push_back({vec2(std::cos(a), std::sin(a)), 0.8});
    }
    s.sharpness = 6.0;
    return fhgeo::load_domain(DomainSpec{s});
}

inline ConvexBody p4_ball() {
    fhgeo::PNormBallSpec p;
    p.center = Vec::Zero(2);
    p.radius = 1.0;
    p.exponent = 4.0;
    return fhgeo::load_domain(DomainSpec{p});
}

// --- independent oracles ----------------------------------------------------

/// Klein-model hyperbolic distance on the unit ball.
inline double klein_distance(const Vec& x, const Vec& y) {
    const double num = 1.0 - x.dot(y);
    const double den = std::sqrt((1.0 - x.squaredNorm()) * (1.0 - y.squaredNorm()));
    return std::acosh(std::max(1.0, num / den));
}

/// Klein-model metric tensor, which is the Hilbert fundamental tensor of the
/// unit ball for every direction.
inline Mat klein_metric(const Vec& y) {
    const int n = static_cast<int>(y.size());
    const double d = 1.0 - y.squaredNorm();
    return Mat::Identity(n, n) / d + y * y.transpose() / (d * d);
}

/// Closed-form Funk norm of the unit ball (Minkowski functional of the
/// shifted disk).
inline double funk_ball_norm(const Vec& x, const Vec& v) {
    const double d = 1.0 - x.squaredNorm();
    const double xv = x.dot(v);
    return (xv + std::sqrt(xv * xv + v.squaredNorm() * d)) / d;
}

} // namespace testsupport
