#include <doctest.h>

#include <cmath>

#include "fhgeo/sampling.hpp"
#include "fhgeo/tensor.hpp"
#include "fhgeo/wricci.hpp"
#include "support.hpp"

using namespace fhgeo;
using namespace testsupport;

namespace {

TangentVector unit_tv(MetricKind kind, const ConvexBody& body, const Vec& x, const Vec& dir) {
    return {x, Vec(dir / finsler_norm(kind, body, {x, dir}))};
}

} // namespace

TEST_CASE("psi at s=0 equals half log det of the tensor") {
    const auto disk = unit_disk();
    const auto tv = unit_tv(MetricKind::Hilbert, disk, vec2(0.2, -0.1), vec2(0.3, 1.0));
    const Mat g = metric_tensor_graph_oracle(MetricKind::Hilbert, disk, tv);
    CHECK(psi_at(MetricKind::Hilbert, disk, tv, 0.0) ==
          doctest::Approx(0.5 * std::log(g.determinant())).epsilon(1e-12));
}

TEST_CASE("Funk psi grows linearly with slope (n+1)/2") {
    for (const ConvexBody& body : {unit_disk(), ellipse21(), lse_hexagon()}) {
        for (int i = 0; i < 5; ++i) {
            auto rng = substream(51, i);
            const Vec x = sample_interior(body, rng, 0.05);
            const auto tv = unit_tv(MetricKind::Funk, body, x, unit_sphere_sample(rng, 2));
            const double p0 = psi_at(MetricKind::Funk, body, tv, 0.0);
            for (double s : {0.1, 0.3, 0.5})
                CHECK(psi_at(MetricKind::Funk, body, tv, s) - p0 ==
                      doctest::Approx(1.5 * s).epsilon(1e-6));
        }
    }
}

TEST_CASE("Hilbert psi is symmetric under direction reversal at the center") {
    const auto disk = unit_disk();
    const auto fwd = unit_tv(MetricKind::Hilbert, disk, vec2(0, 0), vec2(0.6, 0.8));
    const auto bwd = unit_tv(MetricKind::Hilbert, disk, vec2(0, 0), vec2(-0.6, -0.8));
    const double p0 = psi_at(MetricKind::Hilbert, disk, fwd, 0.0);
    for (double s : {0.1, 0.25, 0.4})
        CHECK(psi_at(MetricKind::Hilbert, disk, fwd, s) - p0 ==
              doctest::Approx(psi_at(MetricKind::Hilbert, disk, bwd, s) - p0).epsilon(1e-10));
}

TEST_CASE("psi derivatives match the closed forms") {
    const auto disk = unit_disk();
    for (int i = 0; i < 8; ++i) {
        auto rng = substream(52, i);
        const Vec x = sample_interior(disk, rng, 0.05);
        const auto tv = unit_tv(MetricKind::Funk, disk, x, unit_sphere_sample(rng, 2));
        const auto [p1, p2] = psi_derivatives(MetricKind::Funk, disk, tv);
        CHECK(p1 == doctest::Approx(1.5).epsilon(1e-6));
        CHECK(std::abs(p2) < 1e-4);
    }
    const auto center = unit_tv(MetricKind::Hilbert, disk, vec2(0, 0), vec2(1, 0));
    const auto [p1, p2] = psi_derivatives(MetricKind::Hilbert, disk, center);
    CHECK(std::abs(p1) < 1e-6);
    CHECK(p2 == doctest::Approx(3.0).epsilon(1e-4 / 3.0));
}

TEST_CASE("funk oracle closed forms") {
    const auto rec = funk_oracle(2, {4.0, kInfiniteN});
    CHECK(rec.ric_inf == doctest::Approx(-0.25));
    CHECK(rec.psi1 == doctest::Approx(1.5));
    CHECK(rec.ric_N[0].value == doctest::Approx(-0.25 - 9.0 / (4.0 * 2.0)));
    CHECK(rec.ric_N[1].value == doctest::Approx(-0.25));
    CHECK_FALSE(rec.ric_n.finite);

    const auto rec3 = funk_oracle(3, {4.0});
    CHECK(rec3.ric_N[0].value == doctest::Approx(-4.5));  // -(n-1)/4 - 16/4

    // N -> inf recovers ric_inf.
    const auto big = funk_oracle(2, {1e9});
    CHECK(big.ric_N[0].value == doctest::Approx(big.ric_inf).epsilon(1e-6));

    CHECK_THROWS_AS(funk_oracle(2, {1.0}), GeometryError);

    const auto rev = funk_oracle(2, {4.0}, true);
    CHECK(rev.psi1 == doctest::Approx(-1.5));
    CHECK(rev.ric_N[0].value == doctest::Approx(-1.375));
}

TEST_CASE("hilbert oracle closed forms") {
    const auto center = hilbert_oracle(1.0, 1.0, 2, {4.0, kInfiniteN});
    CHECK(center.ric_inf == doctest::Approx(2.0));
    CHECK(center.psi1 == doctest::Approx(0.0));
    CHECK(center.ric_N[0].value == doctest::Approx(2.0));  // psi1 = 0 kills the N term
    CHECK(center.ric_n.finite);

    // t_plus -> 1/2 (t_minus -> inf): ric_inf approaches the open bound -(n-1).
    const double tp = 0.5001;
    const double tm = 1.0 / (2.0 - 1.0 / tp);
    const auto nearb = hilbert_oracle(tp, tm, 2, {});
    CHECK(nearb.ric_inf > -1.0);
    CHECK(nearb.ric_inf < -0.99);

    CHECK_THROWS_AS(hilbert_oracle(2.0, 2.0, 2, {}), GeometryError);  // not unit speed
    CHECK_THROWS_AS(hilbert_oracle(1.0, 1.0, 2, {1.5}), GeometryError);
}

TEST_CASE("weighted ricci against theorem values") {
    const auto disk = unit_disk();

    SUBCASE("Funk on the disk, N = 4") {
        auto rng = substream(53, 1);
        const Vec x = sample_interior(disk, rng, 0.05);
        const auto tv = unit_tv(MetricKind::Funk, disk, x, unit_sphere_sample(rng, 2));
        const auto rep = weighted_ricci(MetricKind::Funk, disk, tv, {4.0, kInfiniteN});
        CHECK(std::abs(rep.ric_N[0].value - (-1.375)) < 2e-3);
        CHECK(std::abs(rep.ric_inf - (-0.25)) < 2e-3);
        CHECK_FALSE(rep.ric_n.finite);  // psi1 = 3/2 is far from zero
        for (const auto& [name, dev] : rep.deviations) CHECK(dev < 2e-3);
    }

    SUBCASE("Hilbert at the center attains the upper bound") {
        const auto tv = unit_tv(MetricKind::Hilbert, disk, vec2(0, 0), vec2(0.3, -0.8));
        const auto rep = weighted_ricci(MetricKind::Hilbert, disk, tv, {kInfiniteN});
        CHECK(std::abs(rep.ric_inf - 2.0) < 2e-3);
        CHECK(rep.ric_n.finite);  // symmetric point: psi1 = 0
    }

    SUBCASE("monotonicity in N and reversal symmetry") {
        const auto tv = unit_tv(MetricKind::Hilbert, disk, vec2(0.3, 0.2), vec2(1, -1));
        const std::vector<double> Ns = {3.0, 4.0, 6.0, kInfiniteN};
        const auto rep = weighted_ricci(MetricKind::Hilbert, disk, tv, Ns);
        for (std::size_t i = 0; i + 1 < rep.ric_N.size(); ++i)
            CHECK(rep.ric_N[i].value <= rep.ric_N[i + 1].value);

        const auto mtv = unit_tv(MetricKind::Hilbert, disk, vec2(0.3, 0.2), vec2(-1, 1));
        const auto mrep = weighted_ricci(MetricKind::Hilbert, disk, mtv, Ns);
        CHECK(std::abs(rep.ric - mrep.ric) < 2e-3);
        CHECK(std::abs(rep.ric_inf - mrep.ric_inf) < 2e-3);
        CHECK(rep.psi1 == doctest::Approx(-mrep.psi1).epsilon(1e-6).scale(1.0));
    }

    SUBCASE("psi1 vanishes exactly on the symmetric chord set") {
        for (int i = 0; i < 10; ++i) {
            auto rng = substream(54, i);
            const Vec x = sample_interior(disk, rng, 0.05);
            const auto tv = unit_tv(MetricKind::Hilbert, disk, x, unit_sphere_sample(rng, 2));
            const auto rep = weighted_ricci(MetricKind::Hilbert, disk, tv, {});
            const bool chord_symmetric =
                std::abs(rep.t_plus - rep.t_minus) <= 1e-6 * rep.t_plus;
            const bool psi1_zero = std::abs(rep.psi1) <= 1e-6;
            CHECK(chord_symmetric == psi1_zero);
        }
    }

    SUBCASE("N below the dimension is rejected") {
        const auto tv = unit_tv(MetricKind::Funk, disk, vec2(0, 0), vec2(1, 0));
        CHECK_THROWS_AS(weighted_ricci(MetricKind::Funk, disk, tv, {1.0}), GeometryError);
    }
}

TEST_CASE("verify_theorems sweeps") {
    const auto ell = ellipse21();
    const auto funk = verify_theorems(MetricKind::Funk, ell, 10, 7, 2e-3);
    CHECK(funk.all_pass);
    CHECK(funk.convexity_margin > 0.0);
    const auto hil = verify_theorems(MetricKind::Hilbert, ell, 10, 7, 2e-3);
    CHECK(hil.all_pass);
    // The p-norm stress body reports its degenerate margin as a warning.
    const auto p4 = verify_theorems(MetricKind::Funk, p4_ball(), 4, 7, 2e-3);
    CHECK(p4.convexity_margin < 0.1);
}
