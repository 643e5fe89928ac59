#include "fhgeo/curvature.hpp"

#include <array>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>

namespace fhgeo {

namespace {

constexpr std::array<int, 4> kD1Offsets = {-2, -1, 1, 2};
constexpr std::array<double, 4> kD1Weights = {1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0};

struct FieldJets {
    Mat g;                         // g at x
    std::vector<Mat> d1;           // d1[k] = dg/dx_k
    std::vector<std::vector<Mat>> d2;  // d2[k][l] = d^2 g / dx_k dx_l
};

FieldJets field_jets(const MetricField& field, const Vec& x, double h) {
    const int n = static_cast<int>(x.size());
    FieldJets out;
    out.g = field.eval(x);

    // Axis evaluations at +-h, +-2h serve both first and second derivatives.
    std::vector<std::array<Mat, 4>> axis(n);
    for (int k = 0; k < n; ++k) {
        Vec e = Vec::Zero(n);
        e[k] = 1.0;
        for (std::size_t a = 0; a < 4; ++a) axis[k][a] = field.eval(x + kD1Offsets[a] * h * e);
    }

    out.d1.assign(n, Mat::Zero(n, n));
    out.d2.assign(n, std::vector<Mat>(n, Mat::Zero(n, n)));
    for (int k = 0; k < n; ++k) {
        Mat acc = Mat::Zero(n, n);
        for (std::size_t a = 0; a < 4; ++a) acc += kD1Weights[a] * axis[k][a];
        out.d1[k] = acc / h;
        out.d2[k][k] = (-axis[k][3] + 16.0 * axis[k][2] - 30.0 * out.g + 16.0 * axis[k][1] -
                        axis[k][0]) /
                       (12.0 * h * h);
    }
    for (int k = 0; k < n; ++k) {
        Vec ek = Vec::Zero(n);
        ek[k] = 1.0;
        for (int l = k + 1; l < n; ++l) {
            Vec el = Vec::Zero(n);
            el[l] = 1.0;
            Mat acc = Mat::Zero(n, n);
            for (std::size_t a = 0; a < 4; ++a)
                for (std::size_t b = 0; b < 4; ++b)
                    acc += kD1Weights[a] * kD1Weights[b] *
                           field.eval(x + (kD1Offsets[a] * ek + kD1Offsets[b] * el) * h);
            out.d2[k][l] = out.d2[l][k] = acc / (h * h);
        }
    }
    return out;
}

std::vector<Mat> christoffel_from_jets(const FieldJets& jets) {
    const int n = static_cast<int>(jets.g.rows());
    const Mat ginv = jets.g.inverse();
    std::vector<Mat> gamma(n, Mat::Zero(n, n));
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double acc = 0.0;
                for (int l = 0; l < n; ++l)
                    acc += ginv(k, l) *
                           (jets.d1[i](j, l) + jets.d1[j](i, l) - jets.d1[l](i, j));
                gamma[k](i, j) = 0.5 * acc;
            }
    return gamma;
}

// Ric_ij = d_k Gamma^k_ij - d_j Gamma^k_ik + Gamma^k_kl Gamma^l_ij
//          - Gamma^k_jl Gamma^l_ik, assembled from metric jets.
Mat ricci_from_jets(const FieldJets& jets, std::vector<Mat>* gamma_out) {
    const int n = static_cast<int>(jets.g.rows());
    const Mat ginv = jets.g.inverse();
    const std::vector<Mat> gamma = christoffel_from_jets(jets);

    // d_m ginv = -ginv d_m g ginv.
    std::vector<Mat> dginv(n);
    for (int m = 0; m < n; ++m) dginv[m] = -ginv * jets.d1[m] * ginv;

    // dgamma[m][k](i,j) = d_m Gamma^k_ij.
    std::vector<std::vector<Mat>> dgamma(n, std::vector<Mat>(n, Mat::Zero(n, n)));
    for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double acc = 0.0;
                    for (int l = 0; l < n; ++l) {
                        const double c = jets.d1[i](j, l) + jets.d1[j](i, l) - jets.d1[l](i, j);
                        const double dc =
                            jets.d2[m][i](j, l) + jets.d2[m][j](i, l) - jets.d2[m][l](i, j);
                        acc += dginv[m](k, l) * c + ginv(k, l) * dc;
                    }
                    dgamma[m][k](i, j) = 0.5 * acc;
                }

    Mat ric = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int k = 0; k < n; ++k) {
                acc += dgamma[k][k](i, j) - dgamma[j][k](i, k);
                for (int l = 0; l < n; ++l)
                    acc += gamma[k](k, l) * gamma[l](i, j) - gamma[k](j, l) * gamma[l](i, k);
            }
            ric(i, j) = acc;
        }
    if (gamma_out) *gamma_out = gamma;
    return ric;
}

void require_spd(const Mat& g) {
    Eigen::LLT<Mat> llt(g);
    if (llt.info() != Eigen::Success)
        raise(ErrorCode::NotSpd, "metric field evaluation not positive-definite");
}

} // namespace

MetricField geodesic_metric_field(MetricKind kind, const ConvexBody& body, const Vec& w,
                                  FieldRoute route) {
    if (w.norm() == 0.0) raise(ErrorCode::ZeroVector, "geodesic field direction must be nonzero");
    const Vec w_unit = w / w.norm();
    MetricField field;
    field.provenance = MetricField::Provenance::GeodesicField;
    const ConvexBody* b = &body;
    if (route == FieldRoute::GraphJets)
        field.eval = [b, kind, w_unit](const Vec& y) {
            return metric_tensor_graph_oracle(kind, *b, {y, w_unit});
        };
    else
        field.eval = [b, kind, w_unit](const Vec& y) {
            return metric_tensor(kind, *b, {y, w_unit});
        };
    field.safe_radius = [b](const Vec& y) {
        const int n = b->dimension();
        double r = std::numeric_limits<double>::infinity();
        for (int k = 0; k < n; ++k) {
            Vec e = Vec::Zero(n);
            e[k] = 1.0;
            r = std::min(r, std::min(solve_ray(*b, y, e), solve_ray(*b, y, -e)));
        }
        return 0.5 * r;
    };
    return field;
}

std::vector<Mat> christoffel(const MetricField& field, const Vec& x, const DiffScheme& scheme) {
    // x-steps run 10x the vertical tensor steps.
    const double h = 10.0 * scheme.effective_fraction() * field.safe_radius(x);
    FieldJets coarse = field_jets(field, x, h);
    require_spd(coarse.g);
    std::vector<Mat> gamma = christoffel_from_jets(coarse);
    if (scheme.richardson_levels >= 2) {
        const std::vector<Mat> fine = christoffel_from_jets(field_jets(field, x, 0.5 * h));
        for (std::size_t k = 0; k < gamma.size(); ++k)
            gamma[k] = (16.0 * fine[k] - gamma[k]) / 15.0;
    }
    return gamma;
}

CurvatureReport ricci_form(const MetricField& field, const Vec& x, const Vec& direction,
                           const DiffScheme& scheme) {
    const double h = 10.0 * scheme.effective_fraction() * field.safe_radius(x);
    if (!(h > 0.0) || !std::isfinite(h))
        raise(ErrorCode::NearBoundary, "no stencil room at the query point");

    FieldJets coarse = field_jets(field, x, h);
    require_spd(coarse.g);
    std::vector<Mat> gamma;
    const Mat ric_coarse = ricci_from_jets(coarse, &gamma);
    const double val_coarse = direction.dot(ric_coarse * direction);

    CurvatureReport report;
    report.stencil_step = h;
    double gamma_sq = 0.0;
    for (const Mat& g : gamma) gamma_sq += g.squaredNorm();
    report.christoffel_norm = std::sqrt(gamma_sq);

    if (scheme.richardson_levels >= 2) {
        const Mat ric_fine = ricci_from_jets(field_jets(field, x, 0.5 * h), nullptr);
        const double val_fine = direction.dot(ric_fine * direction);
        report.ricci_value = (16.0 * val_fine - val_coarse) / 15.0;
        report.estimated_error = std::abs(report.ricci_value - val_fine);
    } else {
        report.ricci_value = val_coarse;
        report.estimated_error = std::abs(val_coarse) * 1e-3;
    }
    if (report.estimated_error > scheme.curvature_tolerance)
        raise(ErrorCode::Tolerance, "Richardson discrepancy above the requested tolerance");
    return report;
}

CurvatureReport ricci(MetricKind kind, const ConvexBody& body, const TangentVector& tv,
                      const DiffScheme& scheme) {
    const double f = finsler_norm(kind, body, tv);  // guards the query point
    const Vec v_unit = tv.v / f;
    const MetricField field = geodesic_metric_field(kind, body, tv.v);
    CurvatureReport report = ricci_form(field, tv.x, v_unit, scheme);
    // Ric(cv) = c^2 Ric(v): report the value for the vector as given.
    report.ricci_value *= f * f;
    report.estimated_error *= f * f;
    return report;
}

} // namespace fhgeo
