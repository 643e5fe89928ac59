#include <doctest.h>

#include <cmath>

#include "fhgeo/sampling.hpp"
#include "fhgeo/tensor.hpp"
#include "support.hpp"

using namespace fhgeo;
using namespace testsupport;

namespace {

double rel_frobenius(const Mat& a, const Mat& b) {
    return (a - b).norm() / std::max(a.norm(), b.norm());
}

} // namespace

TEST_CASE("center identities on the unit disk") {
    const auto disk = unit_disk();
    const Mat id = Mat::Identity(2, 2);
    for (MetricKind kind : {MetricKind::Funk, MetricKind::ReverseFunk, MetricKind::Hilbert}) {
        CHECK(rel_frobenius(metric_tensor(kind, disk, {vec2(0, 0), vec2(1, 0)}), id) < 1e-8);
        CHECK(rel_frobenius(metric_tensor_graph_oracle(kind, disk, {vec2(0, 0), vec2(0, 1)}), id) <
              1e-12);
    }
    CHECK(rel_frobenius(metric_tensor_horizontal(disk, {vec2(0, 0), vec2(1, 0)}), id) < 1e-8);
}

TEST_CASE("hilbert tensor equals the Klein metric on the unit disk") {
    const auto disk = unit_disk();
    for (int i = 0; i < 25; ++i) {
        auto rng = substream(21, i);
        std::uniform_real_distribution<double> uni(0, 1);
        const Vec x = 0.8 * std::sqrt(uni(rng)) * unit_sphere_sample(rng, 2);
        const Vec v = unit_sphere_sample(rng, 2);
        const Mat oracle = klein_metric(x);
        CHECK(rel_frobenius(metric_tensor(MetricKind::Hilbert, disk, {x, v}), oracle) < 1e-7);
        CHECK(rel_frobenius(metric_tensor_graph_oracle(MetricKind::Hilbert, disk, {x, v}),
                            oracle) < 1e-10);
    }
}

TEST_CASE("route agreement: three-way Funk, two-way Hilbert, reverse Funk") {
    for (const ConvexBody& body : {unit_disk(), ellipse21(), ellipsoid3()}) {
        const int n = body.dimension();
        for (int i = 0; i < 10; ++i) {
            auto rng = substream(22, i);
            const Vec x = sample_interior(body, rng, 0.05);
            const Vec v = unit_sphere_sample(rng, n);
            const TangentVector tv{x, v};
            const Mat vertical = metric_tensor(MetricKind::Funk, body, tv);
            const Mat horizontal = metric_tensor_horizontal(body, tv);
            const Mat graph = metric_tensor_graph_oracle(MetricKind::Funk, body, tv);
            CHECK(rel_frobenius(vertical, horizontal) < 1e-5);
            CHECK(rel_frobenius(vertical, graph) < 1e-5);
            CHECK(rel_frobenius(horizontal, graph) < 1e-5);
            CHECK(rel_frobenius(metric_tensor(MetricKind::Hilbert, body, tv),
                                metric_tensor_graph_oracle(MetricKind::Hilbert, body, tv)) < 1e-5);
            CHECK(rel_frobenius(metric_tensor(MetricKind::ReverseFunk, body, tv),
                                metric_tensor_graph_oracle(MetricKind::ReverseFunk, body, tv)) <
                  1e-5);
        }
    }
}

TEST_CASE("g_v(v,v) recovers F(v)^2 and g is 0-homogeneous") {
    const auto body = ellipse21();
    for (int i = 0; i < 20; ++i) {
        auto rng = substream(23, i);
        const Vec x = sample_interior(body, rng, 0.05);
        const Vec v = 2.3 * unit_sphere_sample(rng, 2);
        for (MetricKind kind : {MetricKind::Funk, MetricKind::Hilbert}) {
            const Mat g = metric_tensor(kind, body, {x, v});
            const double f = finsler_norm(kind, body, {x, v});
            CHECK(inner_product(g, v, v) ==
                  doctest::Approx(f * f).epsilon(1e-7));
            const Mat g2 = metric_tensor(kind, body, {x, Vec(2.0 * v)});
            CHECK((g2 - g).norm() <= 1e-8 * g.norm());
        }
    }
}

TEST_CASE("funk tensor is not reversible away from the center") {
    const auto disk = unit_disk();
    const Vec x = vec2(0.4, 0.1);
    const Vec v = vec2(0.3, 0.9);
    const Mat g = metric_tensor(MetricKind::Funk, disk, {x, v});
    const Mat gm = metric_tensor(MetricKind::Funk, disk, {x, Vec(-v)});
    CHECK((g - gm).cwiseAbs().maxCoeff() > 1e-3);  // nonreversibility witness
    const Mat h = metric_tensor(MetricKind::Hilbert, disk, {x, v});
    const Mat hm = metric_tensor(MetricKind::Hilbert, disk, {x, Vec(-v)});
    CHECK((h - hm).norm() <= 1e-8 * h.norm());
}

TEST_CASE("inner product basics") {
    const Mat id = Mat::Identity(2, 2);
    CHECK(inner_product(id, vec2(3, 4), vec2(3, 4)) == doctest::Approx(25.0));
    CHECK(inner_product(id, vec2(1, 2), Vec::Zero(2)) == 0.0);
    const auto disk = unit_disk();
    const Mat g = metric_tensor(MetricKind::Funk, disk, {vec2(0, 0), vec2(1, 0)});
    CHECK(inner_product(g, vec2(1, 0), vec2(1, 0)) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("okada residual is discretization-small for Funk and reverse Funk") {
    const auto disk = unit_disk();
    CHECK(okada_residual(MetricKind::Funk, disk, {vec2(0.2, 0.1), vec2(1, 0)}) <= 1e-6);
    CHECK(okada_residual(MetricKind::ReverseFunk, disk, {vec2(0.2, 0.1), vec2(1, 0)}) <= 1e-6);
    const auto ell = ellipse21();
    for (int i = 0; i < 30; ++i) {
        auto rng = substream(24, i);
        const Vec x = sample_interior(ell, rng, 0.05);
        const Vec v = unit_sphere_sample(rng, 2);
        CHECK(okada_residual(MetricKind::Funk, ell, {x, v}) <= 1e-6);
    }
    CHECK_THROWS_AS(okada_residual(MetricKind::Hilbert, disk, {vec2(0, 0), vec2(1, 0)}),
                    GeometryError);
}

TEST_CASE("uniform convexity estimates") {
    const auto disk = unit_disk();
    // Hilbert at the center: the Klein tensor is direction-independent and
    // Euclidean, so the ratio is identically 1.
    CHECK(uniform_convexity_estimate(MetricKind::Hilbert, disk, vec2(0, 0), 400, 31) ==
          doctest::Approx(1.0).epsilon(1e-6));
    // Funk at the center: F(0,.) is the Euclidean norm, so the ratio is 1
    // there as well; the constant grows only toward the boundary.
    CHECK(uniform_convexity_estimate(MetricKind::Funk, disk, vec2(0, 0), 400, 31) ==
          doctest::Approx(1.0).epsilon(1e-6));
    double prev = 0.0;
    for (int k = 2; k <= 5; ++k) {
        const double est = uniform_convexity_estimate(MetricKind::Funk, disk,
                                                      vec2(1.0 - std::pow(10.0, -k), 0), 400, 31);
        CHECK(est > prev);
        prev = est;
    }
    CHECK(prev > 10.0);
}

TEST_CASE("near-boundary guard") {
    const auto disk = unit_disk();
    CHECK_THROWS_AS(metric_tensor(MetricKind::Funk, disk, {vec2(1.0 - 1e-8, 0), vec2(1, 0)}),
                    GeometryError);
}
