#include "fhgeo/wricci.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>

#include "fhgeo/sampling.hpp"

namespace fhgeo {

namespace {

double half_log_det(const Mat& g) {
    Eigen::LLT<Mat> llt(g);
    if (llt.info() != Eigen::Success) raise(ErrorCode::NotSpd, "tensor not positive-definite");
    double acc = 0.0;
    const Mat l = llt.matrixL();
    for (int i = 0; i < g.rows(); ++i) acc += std::log(l(i, i));
    return acc;
}

void check_unit_speed(double f) {
    if (std::abs(f - 1.0) > 1e-10)
        raise(ErrorCode::UnitSpeed, "tangent vector must have unit Finsler norm");
}

// Arclength room available for the psi stencil before the geodesic leaves
// the domain backward (forward motion is complete for all three kinds).
double backward_room(MetricKind kind, double tp, double tm) {
    switch (kind) {
        case MetricKind::Funk: return std::log1p(tm / tp);
        case MetricKind::ReverseFunk:
            return tm < 1.0 ? -std::log1p(-tm) : std::numeric_limits<double>::infinity();
        case MetricKind::Hilbert: return std::numeric_limits<double>::infinity();
    }
    return 0.0;
}

void append_ric_n_cases(OracleRecord& rec, int n, const std::vector<double>& N_list) {
    for (double N : N_list) {
        if (N < n) raise(ErrorCode::BadN, "effective dimension below manifold dimension");
        RicNEntry entry;
        entry.N = N;
        if (N == kInfiniteN) {
            entry.value = rec.ric_inf;
            entry.finite = true;
        } else if (N == static_cast<double>(n)) {
            entry = rec.ric_n;
        } else {
            entry.value = rec.ric_inf - rec.psi1 * rec.psi1 / (N - n);
            entry.finite = true;
        }
        rec.ric_N.push_back(entry);
    }
}

} // namespace

double psi_at(MetricKind kind, const ConvexBody& body, const TangentVector& unit_tv, double s) {
    check_unit_speed(finsler_norm(kind, body, unit_tv));
    const Vec eta = geodesic_point(kind, body, unit_tv, s);
    if (!is_interior(body, eta))
        raise(ErrorCode::NearBoundary, "geodesic point too close to the boundary for psi");
    // Straight-line geodesics keep a constant direction; g is 0-homogeneous.
    const Mat g = metric_tensor_graph_oracle(kind, body, {eta, unit_tv.v});
    return half_log_det(g);
}

std::pair<double, double> psi_derivatives(MetricKind kind, const ConvexBody& body,
                                          const TangentVector& unit_tv,
                                          const DiffScheme& scheme) {
    const ChordData ch = chord(body, unit_tv.x, unit_tv.v);
    require_clear_of_boundary(body, ch, unit_tv.v.norm());
    const double f = finsler_norm_from_chord(kind, ch);
    check_unit_speed(f);

    const double room = backward_room(kind, ch.t_plus * f, ch.t_minus * f);
    const double h = std::min(0.1, 0.2 * (0.45 * room));
    if (!(h > 0.0)) raise(ErrorCode::NearBoundary, "no arclength room for the psi stencil");

    const auto psi = [&](double s) { return psi_at(kind, body, unit_tv, s); };
    const double p0 = psi(0.0);
    const auto level = [&](double step) {
        const double pm2 = psi(-2.0 * step), pm1 = psi(-step), pp1 = psi(step),
                     pp2 = psi(2.0 * step);
        const double d1 = (pm2 - 8.0 * pm1 + 8.0 * pp1 - pp2) / (12.0 * step);
        const double d2 =
            (-pm2 + 16.0 * pm1 - 30.0 * p0 + 16.0 * pp1 - pp2) / (12.0 * step * step);
        return std::pair{d1, d2};
    };

    auto [d1, d2] = level(h);
    if (scheme.richardson_levels >= 2) {
        const auto [f1, f2] = level(0.5 * h);
        const double e1 = (16.0 * f1 - d1) / 15.0;
        const double e2 = (16.0 * f2 - d2) / 15.0;
        if (std::abs(e1 - f1) > 1e-3 || std::abs(e2 - f2) > 1e-2)
            raise(ErrorCode::Tolerance, "psi derivative extrapolation did not settle");
        return {e1, e2};
    }
    return {d1, d2};
}

OracleRecord funk_oracle(int n, const std::vector<double>& N_list, bool reverse) {
    if (n < 2) raise(ErrorCode::BadN, "dimension must be at least 2");
    OracleRecord rec;
    rec.psi1 = (reverse ? -1.0 : 1.0) * 0.5 * (n + 1);
    rec.psi2 = 0.0;
    rec.ric = -0.25 * (n - 1);
    rec.ric_inf = rec.ric;
    rec.ric_n = RicNEntry{static_cast<double>(n), 0.0, false};  // psi1 != 0 always
    append_ric_n_cases(rec, n, N_list);
    return rec;
}

OracleRecord hilbert_oracle(double t_plus, double t_minus, int n,
                            const std::vector<double>& N_list) {
    if (n < 2) raise(ErrorCode::BadN, "dimension must be at least 2");
    if (std::abs(0.5 * (1.0 / t_plus + 1.0 / t_minus) - 1.0) > 1e-9)
        raise(ErrorCode::UnitSpeed, "chord parameters must describe a unit-speed direction");
    OracleRecord rec;
    rec.psi1 = 0.5 * (n + 1) * (1.0 / t_plus - 1.0 / t_minus);
    rec.psi2 = (n + 1) / (t_plus * t_minus);
    rec.ric = -static_cast<double>(n - 1);
    rec.ric_inf = rec.ric + rec.psi2;
    if (std::abs(rec.psi1) <= kPsiZeroThreshold)
        rec.ric_n = RicNEntry{static_cast<double>(n), rec.ric_inf, true};
    else
        rec.ric_n = RicNEntry{static_cast<double>(n), 0.0, false};
    append_ric_n_cases(rec, n, N_list);
    return rec;
}

WeightedRicciReport weighted_ricci(MetricKind kind, const ConvexBody& body,
                                   const TangentVector& tv, const std::vector<double>& N_list,
                                   const DiffScheme& scheme) {
    const int n = body.dimension();
    for (double N : N_list)
        if (N < n) raise(ErrorCode::BadN, "effective dimension below manifold dimension");

    const double f = finsler_norm(kind, body, tv);
    WeightedRicciReport rep;
    rep.kind = kind;
    rep.x = tv.x;
    rep.input_norm = f;
    rep.v_unit = tv.v / f;

    const ChordData ch = chord(body, tv.x, rep.v_unit);
    rep.t_plus = ch.t_plus;
    rep.t_minus = ch.t_minus;

    const CurvatureReport cr = ricci(kind, body, {tv.x, rep.v_unit}, scheme);
    rep.ric = cr.ricci_value;
    rep.ric_error_estimate = cr.estimated_error;
    std::tie(rep.psi1, rep.psi2) = psi_derivatives(kind, body, {tv.x, rep.v_unit}, scheme);

    rep.ric_inf = rep.ric + rep.psi2;
    if (std::abs(rep.psi1) <= kPsiZeroThreshold)
        rep.ric_n = RicNEntry{static_cast<double>(n), rep.ric_inf, true};
    else
        rep.ric_n = RicNEntry{static_cast<double>(n), 0.0, false};
    for (double N : N_list) {
        if (N == kInfiniteN)
            rep.ric_N.push_back({N, rep.ric_inf, true});
        else if (N == static_cast<double>(n))
            rep.ric_N.push_back(rep.ric_n);
        else
            rep.ric_N.push_back({N, rep.ric_inf - rep.psi1 * rep.psi1 / (N - n), true});
    }

    switch (kind) {
        case MetricKind::Funk: rep.oracle = funk_oracle(n, N_list, false); break;
        case MetricKind::ReverseFunk: rep.oracle = funk_oracle(n, N_list, true); break;
        case MetricKind::Hilbert:
            rep.oracle = hilbert_oracle(rep.t_plus, rep.t_minus, n, N_list);
            break;
    }

    const OracleRecord& o = *rep.oracle;
    rep.deviations.emplace_back("psi1", std::abs(rep.psi1 - o.psi1));
    rep.deviations.emplace_back("psi2", std::abs(rep.psi2 - o.psi2));
    rep.deviations.emplace_back("ric", std::abs(rep.ric - o.ric));
    rep.deviations.emplace_back("ric_inf", std::abs(rep.ric_inf - o.ric_inf));
    for (std::size_t i = 0; i < N_list.size(); ++i) {
        const std::string name = "ric_N[" + std::to_string(i) + "]";
        if (rep.ric_N[i].finite != o.ric_N[i].finite)
            rep.deviations.emplace_back(name, std::numeric_limits<double>::infinity());
        else if (rep.ric_N[i].finite)
            rep.deviations.emplace_back(name, std::abs(rep.ric_N[i].value - o.ric_N[i].value));
        else
            rep.deviations.emplace_back(name, 0.0);
    }
    return rep;
}

VerificationReport verify_theorems(MetricKind kind, const ConvexBody& body, int sample_count,
                                   std::uint64_t seed, double tol) {
    const int n = body.dimension();
    VerificationReport report;
    report.kind = kind;
    report.dimension = n;
    report.samples = sample_count;
    report.seed = seed;
    report.convexity_margin = strong_convexity_margin(body, 256, seed);
    if (report.convexity_margin <= 1e-2)
        report.warnings.push_back(
            "sampled strong convexity margin is near zero; the boundary-curvature "
            "hypothesis degenerates somewhere");

    std::vector<double> N_list = {static_cast<double>(n + 1), static_cast<double>(n + 2),
                                  static_cast<double>(2 * n), kInfiniteN};

    double dev_psi1 = 0.0, dev_psi2 = 0.0, dev_ric = 0.0, dev_ric_inf = 0.0, dev_ric_N = 0.0;
    bool ric_n_cases_ok = true;
    double bound_excess = 0.0;

    for (int i = 0; i < sample_count; ++i) {
        auto rng = substream(seed, static_cast<std::uint64_t>(i));
        const Vec x = sample_interior(body, rng, 0.02);
        const Vec dir = unit_sphere_sample(rng, n);
        const WeightedRicciReport rep = weighted_ricci(kind, body, {x, dir}, N_list);

        for (const auto& [name, dev] : rep.deviations) {
            if (name == "psi1") dev_psi1 = std::max(dev_psi1, dev);
            else if (name == "psi2") dev_psi2 = std::max(dev_psi2, dev);
            else if (name == "ric") dev_ric = std::max(dev_ric, dev);
            else if (name == "ric_inf") dev_ric_inf = std::max(dev_ric_inf, dev);
            else dev_ric_N = std::max(dev_ric_N, dev);
        }
        if (kind != MetricKind::Hilbert) {
            // Theorem says Ric_n = -inf everywhere (psi1 never vanishes).
            if (rep.ric_n.finite) ric_n_cases_ok = false;
        } else {
            // Bound membership: Ric_inf in (-(n-1), 2], Ric_N in the widened
            // interval with the (n+1)^2/(N-n) defect.
            bound_excess = std::max(bound_excess, rep.ric_inf - 2.0);
            bound_excess = std::max(bound_excess, -(rep.ric_inf + (n - 1)));
            for (const auto& entry : rep.ric_N) {
                if (!entry.finite) continue;
                bound_excess = std::max(bound_excess, entry.value - 2.0);
                if (entry.N != kInfiniteN && entry.N > n)
                    bound_excess = std::max(
                        bound_excess,
                        -(entry.value + (n - 1) + (n + 1) * (n + 1) / (entry.N - n)));
            }
        }
    }

    const double psi1_tol = kind == MetricKind::Hilbert ? 1e-4 : 1e-5;
    report.checks.push_back({"psi1_vs_oracle", dev_psi1, psi1_tol, dev_psi1 <= psi1_tol});
    report.checks.push_back({"psi2_vs_oracle", dev_psi2, 1e-4, dev_psi2 <= 1e-4});
    report.checks.push_back({"ric_vs_oracle", dev_ric, tol, dev_ric <= tol});
    report.checks.push_back({"ric_inf_vs_oracle", dev_ric_inf, tol, dev_ric_inf <= tol});
    report.checks.push_back({"ric_N_vs_oracle", dev_ric_N, tol, dev_ric_N <= tol});
    if (kind != MetricKind::Hilbert)
        report.checks.push_back(
            {"ric_n_minus_infinity", ric_n_cases_ok ? 0.0 : 1.0, 0.5, ric_n_cases_ok});
    else
        report.checks.push_back(
            {"bound_membership_excess", bound_excess, tol, bound_excess <= tol});

    report.all_pass = true;
    for (const auto& c : report.checks) report.all_pass = report.all_pass && c.pass;
    return report;
}

} // namespace fhgeo
