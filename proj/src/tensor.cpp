#include "fhgeo/tensor.hpp"

#include <array>
#include <cmath>
#include <functional>

#include <Eigen/Cholesky>

#include "fhgeo/sampling.hpp"

namespace fhgeo {

namespace {

// Offsets and weights of the 5-point first-derivative stencil (step h).
constexpr std::array<int, 4> kD1Offsets = {-2, -1, 1, 2};
constexpr std::array<double, 4> kD1Weights = {1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0};

template <typename F>
double d1_5pt(F&& f, double h) {
    double acc = 0.0;
    for (std::size_t k = 0; k < kD1Offsets.size(); ++k) acc += kD1Weights[k] * f(kD1Offsets[k] * h);
    return acc / h;
}

template <typename F>
double d2_5pt(F&& f, double f0, double h) {
    return (-f(2 * h) + 16.0 * f(h) - 30.0 * f0 + 16.0 * f(-h) - f(-2 * h)) / (12.0 * h * h);
}

// O(h^4) mixed second derivative: composition of two 5-point first
// derivatives (16 evaluations).
template <typename F2>
double d2_cross(F2&& f, double h) {
    double acc = 0.0;
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b)
            acc += kD1Weights[a] * kD1Weights[b] * f(kD1Offsets[a] * h, kD1Offsets[b] * h);
    return acc / (h * h);
}

double richardson4(double coarse, double fine) { return (16.0 * fine - coarse) / 15.0; }

Mat richardson4(const Mat& coarse, const Mat& fine) { return (16.0 * fine - coarse) / 15.0; }

// Squared Finsler norm at (x, vv); one or two ray solves.
double norm2_at(MetricKind kind, const ConvexBody& body, const Vec& x, const Vec& vv) {
    switch (kind) {
        case MetricKind::Funk: {
            const double t = solve_ray(body, x, vv);
            return 1.0 / (t * t);
        }
        case MetricKind::ReverseFunk: {
            const double t = solve_ray(body, x, -vv);
            return 1.0 / (t * t);
        }
        case MetricKind::Hilbert: {
            const double f =
                0.5 * (1.0 / solve_ray(body, x, vv) + 1.0 / solve_ray(body, x, -vv));
            return f * f;
        }
    }
    return 0.0;
}

// Hessian of F^2/2 in v at the unit direction, single step level.
Mat vertical_hessian(MetricKind kind, const ConvexBody& body, const Vec& x, const Vec& v_unit,
                     double h) {
    const int n = static_cast<int>(x.size());
    const auto f = [&](const Vec& dv) { return 0.5 * norm2_at(kind, body, x, v_unit + dv); };
    const double f0 = f(Vec::Zero(n));
    Mat g(n, n);
    for (int i = 0; i < n; ++i) {
        Vec ei = Vec::Zero(n);
        ei[i] = 1.0;
        g(i, i) = d2_5pt([&](double t) { return f(t * ei); }, f0, h);
        for (int j = i + 1; j < n; ++j) {
            Vec ej = Vec::Zero(n);
            ej[j] = 1.0;
            g(i, j) = g(j, i) = d2_cross([&](double a, double b) { return f(a * ei + b * ej); }, h);
        }
    }
    return 0.5 * (g + g.transpose());
}

bool is_spd(const Mat& g) {
    Eigen::LLT<Mat> llt(g);
    return llt.info() == Eigen::Success;
}

// Scale for v-stencils at the unit direction. The norm's direction
// smoothness degrades like sqrt(arm) near the boundary, much slower than the
// arm itself, while relative roundoff grows like eps/h^2; the floor keeps
// the second differences out of the roundoff regime.
double vertical_safe_radius(const ChordData& ch, double v_norm) {
    const double arm = std::min(ch.t_plus, ch.t_minus) * v_norm;
    return std::min(1.0, std::max(0.25, 4.0 * arm));
}

// Half the shortest axis chord arm; bounds how far x-stencils may move.
double axis_safe_radius(const ConvexBody& body, const Vec& x) {
    const int n = body.dimension();
    double r = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
        Vec e = Vec::Zero(n);
        e[k] = 1.0;
        r = std::min(r, std::min(solve_ray(body, x, e), solve_ray(body, x, -e)));
    }
    return 0.5 * r;
}

} // namespace

Mat metric_tensor(MetricKind kind, const ConvexBody& body, const TangentVector& tv,
                  const DiffScheme& scheme) {
    const ChordData ch = chord(body, tv.x, tv.v);
    require_clear_of_boundary(body, ch, tv.v.norm());
    const Vec v_unit = tv.v / tv.v.norm();  // g is 0-homogeneous in v
    const double safe = vertical_safe_radius(ch, tv.v.norm());
    // Second differences sit closest to the eps^(1/6) optimum at 4x the
    // base fraction; relative roundoff grows like eps/h^2 below that.
    double h = 4.0 * scheme.effective_fraction() * safe;

    for (int attempt = 0; attempt < 2; ++attempt) {
        Mat g = vertical_hessian(kind, body, tv.x, v_unit, h);
        if (scheme.richardson_levels >= 2)
            g = richardson4(g, vertical_hessian(kind, body, tv.x, v_unit, 0.5 * h));
        g = 0.5 * (g + g.transpose());
        if (is_spd(g)) return g;
        h *= 0.25;  // one retry with a smaller step near degenerate convexity
    }
    raise(ErrorCode::NotSpd, "vertical Hessian not positive-definite");
}

Mat metric_tensor_horizontal(const ConvexBody& body, const TangentVector& tv,
                             const DiffScheme& scheme) {
    const ChordData ch = chord(body, tv.x, tv.v);
    require_clear_of_boundary(body, ch, tv.v.norm());
    const int n = body.dimension();
    const Vec v_unit = tv.v / tv.v.norm();
    const auto funk = [&](const Vec& y) { return 1.0 / solve_ray(body, y, v_unit); };

    double h = scheme.effective_fraction() * axis_safe_radius(body, tv.x);
    const double f0 = funk(tv.x);

    const auto assemble = [&](double step) {
        Vec d1(n);
        Mat d2(n, n);
        for (int i = 0; i < n; ++i) {
            Vec ei = Vec::Zero(n);
            ei[i] = 1.0;
            d1[i] = d1_5pt([&](double t) { return funk(tv.x + t * ei); }, step);
            d2(i, i) = d2_5pt([&](double t) { return funk(tv.x + t * ei); }, f0, step);
            for (int j = i + 1; j < n; ++j) {
                Vec ej = Vec::Zero(n);
                ej[j] = 1.0;
                d2(i, j) = d2(j, i) =
                    d2_cross([&](double a, double b) { return funk(tv.x + a * ei + b * ej); }, step);
            }
        }
        return Mat(d2 / f0 - d1 * d1.transpose() / (f0 * f0));
    };

    for (int attempt = 0; attempt < 2; ++attempt) {
        Mat g = assemble(h);
        if (scheme.richardson_levels >= 2) g = richardson4(g, assemble(0.5 * h));
        g = 0.5 * (g + g.transpose());
        if (is_spd(g)) return g;
        h *= 0.25;
    }
    raise(ErrorCode::NotSpd, "horizontal tensor not positive-definite");
}

Mat metric_tensor_graph_oracle(MetricKind kind, const ConvexBody& body, const TangentVector& tv) {
    if (tv.v.norm() < zero_vector_threshold(tv.x))
        raise(ErrorCode::ZeroVector, "direction below zero-vector threshold");
    const int n = body.dimension();
    const Vec v_unit = tv.v / tv.v.norm();
    const BoundaryGraphJet jet = boundary_graph_jet(body, tv.x, v_unit);
    const double tp = jet.h0;
    const double tm = -jet.b0;

    Mat g_chart(n, n);
    if (kind == MetricKind::Hilbert) {
        const double a = 1.0 / tp + 1.0 / tm;
        Vec p(n);
        for (int i = 0; i < n - 1; ++i) p[i] = jet.grad_h[i] / tp + jet.grad_b[i] / tm;
        p[n - 1] = -a;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double second = 0.0;
                if (i < n - 1 && j < n - 1) second = jet.hess_h(i, j) - jet.hess_b(i, j);
                g_chart(i, j) = 0.25 * (-second * a + p[i] * p[j]);
            }
    } else {
        // Reverse Funk is the Funk form evaluated on the backward sheet.
        const bool rev = kind == MetricKind::ReverseFunk;
        const double t0 = rev ? tm : tp;
        const Vec& grad = rev ? jet.grad_b : jet.grad_h;
        const Mat& hess = rev ? jet.hess_b : jet.hess_h;
        const double sgn = rev ? -1.0 : 1.0;
        for (int i = 0; i < n - 1; ++i)
            for (int j = 0; j < n - 1; ++j)
                g_chart(i, j) = -sgn * hess(i, j) / t0 + grad[i] * grad[j] / (t0 * t0);
        for (int i = 0; i < n - 1; ++i)
            g_chart(i, n - 1) = g_chart(n - 1, i) = -grad[i] / (t0 * t0);
        g_chart(n - 1, n - 1) = 1.0 / (t0 * t0);
    }

    // The frame [T | v_unit] is orthogonal, so the ambient congruence is a
    // plain similarity transform.
    Mat e(n, n);
    e.leftCols(n - 1) = jet.frame.leftCols(n - 1);
    e.col(n - 1) = v_unit;
    return e * g_chart * e.transpose();
}

double inner_product(const Mat& g, const Vec& w1, const Vec& w2) { return w1.dot(g * w2); }

double okada_residual(MetricKind kind, const ConvexBody& body, const TangentVector& tv,
                      const DiffScheme& scheme) {
    if (kind == MetricKind::Hilbert)
        raise(ErrorCode::BadSpec, "the derivative identity applies to Funk and reverse Funk only");
    const ChordData ch = chord(body, tv.x, tv.v);
    require_clear_of_boundary(body, ch, tv.v.norm());
    const int n = body.dimension();
    const Vec v_unit = tv.v / tv.v.norm();
    const double sigma = kind == MetricKind::Funk ? 1.0 : -1.0;

    const auto norm_at = [&](const Vec& y, const Vec& vv) {
        return kind == MetricKind::Funk ? 1.0 / solve_ray(body, y, vv)
                                        : 1.0 / solve_ray(body, y, -vv);
    };
    const double f0 = norm_at(tv.x, v_unit);

    const double hv = scheme.effective_fraction() * vertical_safe_radius(ch, tv.v.norm());
    const double hx = scheme.effective_fraction() * axis_safe_radius(body, tv.x);

    double residual = 0.0;
    for (int i = 0; i < n; ++i) {
        Vec ei = Vec::Zero(n);
        ei[i] = 1.0;
        const auto fx = [&](double t) { return norm_at(tv.x + t * ei, v_unit); };
        const auto fv = [&](double t) { return norm_at(tv.x, v_unit + t * ei); };
        double dx = d1_5pt(fx, hx);
        double dv = d1_5pt(fv, hv);
        if (scheme.richardson_levels >= 2) {
            dx = richardson4(dx, d1_5pt(fx, 0.5 * hx));
            dv = richardson4(dv, d1_5pt(fv, 0.5 * hv));
        }
        residual = std::max(residual, std::abs(dx - sigma * f0 * dv));
    }
    return residual;
}

double uniform_convexity_estimate(MetricKind kind, const ConvexBody& body, const Vec& x,
                                  int direction_samples, std::uint64_t seed) {
    if (!is_interior(body, x)) raise(ErrorCode::Outside, "query point not interior");
    const int n = body.dimension();
    double best = 0.0;
    for (int i = 0; i < direction_samples; ++i) {
        auto rng = substream(seed, static_cast<std::uint64_t>(i));
        const Vec v = unit_sphere_sample(rng, n);
        const Vec w = unit_sphere_sample(rng, n);
        // Boundary jets keep the tensor exact arbitrarily close to the
        // boundary, where finite differences have no room.
        const Mat g = metric_tensor_graph_oracle(kind, body, {x, v});
        const double fw = finsler_norm(kind, body, {x, w});
        best = std::max(best, fw / std::sqrt(inner_product(g, w, w)));
    }
    return best;
}

} // namespace fhgeo
