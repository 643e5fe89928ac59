#include "fhgeo/finsler.hpp"

#include <cmath>

namespace fhgeo {

const char* metric_kind_name(MetricKind kind) {
    switch (kind) {
        case MetricKind::Funk: return "funk";
        case MetricKind::ReverseFunk: return "rfunk";
        case MetricKind::Hilbert: return "hilbert";
    }
    return "?";
}

MetricKind metric_kind_from_string(const std::string& name) {
    if (name == "funk") return MetricKind::Funk;
    if (name == "rfunk") return MetricKind::ReverseFunk;
    if (name == "hilbert") return MetricKind::Hilbert;
    raise(ErrorCode::BadSpec, "unknown metric \"" + name + "\" (expected funk|rfunk|hilbert)");
}

void require_clear_of_boundary(const ConvexBody& body, const ChordData& ch, double v_norm) {
    if (std::min(ch.t_plus, ch.t_minus) * v_norm < 1e-6 * body.diameter())
        raise(ErrorCode::NearBoundary, "query point too close to the boundary");
}

double finsler_norm_from_chord(MetricKind kind, const ChordData& ch) {
    switch (kind) {
        case MetricKind::Funk: return 1.0 / ch.t_plus;
        case MetricKind::ReverseFunk: return 1.0 / ch.t_minus;
        case MetricKind::Hilbert: return 0.5 * (1.0 / ch.t_plus + 1.0 / ch.t_minus);
    }
    return 0.0;
}

double finsler_norm(MetricKind kind, const ConvexBody& body, const TangentVector& tv) {
    const ChordData ch = chord(body, tv.x, tv.v);
    require_clear_of_boundary(body, ch, tv.v.norm());
    return finsler_norm_from_chord(kind, ch);
}

double funk_distance(const ConvexBody& body, const Vec& x, const Vec& y) {
    if (!is_interior(body, x) || !is_interior(body, y))
        raise(ErrorCode::Outside, "distance endpoints must be interior");
    const Vec v = y - x;
    if (v.norm() < zero_vector_threshold(x)) return 0.0;
    // Two forward solves instead of log(t/(t-1)): the ratio form keeps full
    // relative precision for y near the boundary.
    const double tx = solve_ray(body, x, v);
    const double ty = solve_ray(body, y, v);
    return std::log(tx / ty);
}

double hilbert_distance(const ConvexBody& body, const Vec& x, const Vec& y) {
    if (!is_interior(body, x) || !is_interior(body, y))
        raise(ErrorCode::Outside, "distance endpoints must be interior");
    const Vec v = y - x;
    if (v.norm() < zero_vector_threshold(x)) return 0.0;
    const double tx_f = solve_ray(body, x, v);
    const double tx_b = solve_ray(body, x, -v);
    const double ty_f = solve_ray(body, y, v);
    const double ty_b = solve_ray(body, y, -v);
    return 0.5 * std::log((tx_f * ty_b) / (ty_f * tx_b));
}

double metric_distance(MetricKind kind, const ConvexBody& body, const Vec& x, const Vec& y) {
    switch (kind) {
        case MetricKind::Funk: return funk_distance(body, x, y);
        case MetricKind::ReverseFunk: return funk_distance(body, y, x);
        case MetricKind::Hilbert: return hilbert_distance(body, x, y);
    }
    return 0.0;
}

Vec geodesic_point(MetricKind kind, const ConvexBody& body, const TangentVector& tv, double s) {
    const ChordData ch = chord(body, tv.x, tv.v);
    const double f = finsler_norm_from_chord(kind, ch);
    const Vec v_unit = tv.v / f;
    // Chord parameters of the unit-speed direction.
    const double tp = ch.t_plus * f;
    const double tm = ch.t_minus * f;

    double u = 0.0;
    switch (kind) {
        case MetricKind::Funk:
            u = -tp * std::expm1(-s);
            break;
        case MetricKind::ReverseFunk:
            u = tm * std::expm1(s);
            break;
        case MetricKind::Hilbert: {
            // Closed-form inversion of the chord cross-ratio; the s >= 0
            // branch is written overflow-free in exp(-2s).
            if (s >= 0.0)
                u = -tp * tm * std::expm1(-2.0 * s) / (tp * std::exp(-2.0 * s) + tm);
            else
                u = tp * tm * std::expm1(2.0 * s) / (tp + tm * std::exp(2.0 * s));
            break;
        }
    }
    if (!(u > -tm && u < tp) && u != 0.0)
        raise(ErrorCode::Outside, "geodesic parameter leaves the domain");
    return tv.x + u * v_unit;
}

Vec exp_map(MetricKind kind, const ConvexBody& body, const TangentVector& tv) {
    if (tv.v.norm() < zero_vector_threshold(tv.x)) {
        if (!is_interior(body, tv.x)) raise(ErrorCode::Outside, "base point not interior");
        return tv.x;
    }
    const double f = finsler_norm(kind, body, tv);
    return geodesic_point(kind, body, tv, f);
}

} // namespace fhgeo
