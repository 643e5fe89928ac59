#include "fhgeo/domain.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <json.hpp>

namespace fhgeo {

namespace {

using nlohmann::json;

// --- per-family evaluation -------------------------------------------------

// Ellipsoid: phi(x) = (x-c)^T M (x-c) - 1 with M = R diag(1/s_i^2) R^T.
Mat ellipsoid_matrix(const EllipsoidSpec& e) {
    const int n = static_cast<int>(e.center.size());
    Mat d = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) d(i, i) = 1.0 / (e.semi_axes[i] * e.semi_axes[i]);
    if (e.rotation) return (*e.rotation) * d * e.rotation->transpose();
    return d;
}

Jet2 ellipsoid_jet(const EllipsoidSpec& e, const Vec& x) {
    const Mat m = ellipsoid_matrix(e);
    const Vec y = x - e.center;
    const Vec my = m * y;
    return Jet2{y.dot(my) - 1.0, 2.0 * my, 2.0 * m};
}

Jet2 pnorm_jet(const PNormBallSpec& s, const Vec& x) {
    const int n = static_cast<int>(x.size());
    const double p = s.exponent;
    const double rp = std::pow(s.radius, p);
    double val = 0.0;
    Vec grad = Vec::Zero(n);
    Mat hess = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const double y = x[i] - s.center[i];
        const double a = std::abs(y);
        val += std::pow(a, p);
        grad[i] = p * std::copysign(std::pow(a, p - 1.0), y);
        hess(i, i) = p * (p - 1.0) * std::pow(a, p - 2.0);
    }
    return Jet2{val / rp - 1.0, grad / rp, hess / rp};
}

Jet2 lse_jet(const LogSumExpSpec& s, const Vec& x) {
    const int n = static_cast<int>(x.size());
    const int m = static_cast<int>(s.facets.size());
    const double beta = s.sharpness;
    Vec z(m);
    for (int i = 0; i < m; ++i) z[i] = beta * (s.facets[i].normal.dot(x) - s.facets[i].offset);
    const double zmax = z.maxCoeff();
    double sum = 0.0;
    Vec w(m);
    for (int i = 0; i < m; ++i) {
        w[i] = std::exp(z[i] - zmax);
        sum += w[i];
    }
    w /= sum;
    Vec grad = Vec::Zero(n);
    for (int i = 0; i < m; ++i) grad += w[i] * s.facets[i].normal;
    Mat hess = Mat::Zero(n, n);
    for (int i = 0; i < m; ++i)
        hess += w[i] * s.facets[i].normal * s.facets[i].normal.transpose();
    hess = beta * (hess - grad * grad.transpose());
    return Jet2{(zmax + std::log(sum)) / beta, grad, hess};
}

double lse_value(const LogSumExpSpec& s, const Vec& x) {
    const int m = static_cast<int>(s.facets.size());
    const double beta = s.sharpness;
    double zmax = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i)
        zmax = std::max(zmax, beta * (s.facets[i].normal.dot(x) - s.facets[i].offset));
    double sum = 0.0;
    for (int i = 0; i < m; ++i)
        sum += std::exp(beta * (s.facets[i].normal.dot(x) - s.facets[i].offset) - zmax);
    return (zmax + std::log(sum)) / beta;
}

// --- ray solving -----------------------------------------------------------

// Exit parameter of the ray x + u d from the bounding box, u > 0.
double box_exit(const Vec& lo, const Vec& hi, const Vec& x, const Vec& d) {
    double exit = std::numeric_limits<double>::infinity();
    for (int i = 0; i < x.size(); ++i) {
        if (d[i] > 0.0)
            exit = std::min(exit, (hi[i] - x[i]) / d[i]);
        else if (d[i] < 0.0)
            exit = std::min(exit, (lo[i] - x[i]) / d[i]);
    }
    return exit;
}

// Safeguarded Newton for the unique positive root of a convex ray function.
// rayfn(u) must return {phi, dphi/du}. The bracket [0, cap] has phi(0) < 0
// and phi(cap) > 0.
template <typename RayFn>
double newton_ray_root(RayFn&& rayfn, double cap) {
    double lo = 0.0, hi = cap;
    double u = cap;
    for (int iter = 0; iter < 200; ++iter) {
        const auto [f, fp] = rayfn(u);
        if (f < 0.0)
            lo = u;
        else
            hi = u;
        if (std::abs(f) < 1e-12 * (1.0 + std::abs(fp))) {
            // One polishing step; quadratic convergence makes it nearly free.
            if (fp > 0.0) {
                const double un = u - f / fp;
                if (un > 0.0 && un <= cap) u = un;
            }
            return u;
        }
        double un = fp > 0.0 ? u - f / fp : 0.5 * (lo + hi);
        if (!(un > lo && un < hi)) un = 0.5 * (lo + hi);
        if (std::abs(un - u) < 1e-14 * cap) return un;
        u = un;
    }
    raise(ErrorCode::NoConverge, "ray root iteration cap hit (domain unbounded along ray?)");
}

} // namespace

// --- DomainSpec ------------------------------------------------------------

int DomainSpec::dimension() const {
    return std::visit(
        [](const auto& s) -> int {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, EllipsoidSpec>)
                return static_cast<int>(s.center.size());
            else if constexpr (std::is_same_v<T, PNormBallSpec>)
                return static_cast<int>(s.center.size());
            else
                return s.facets.empty() ? 0 : static_cast<int>(s.facets[0].normal.size());
        },
        shape);
}

std::string DomainSpec::family() const {
    return std::visit(
        [](const auto& s) -> std::string {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, EllipsoidSpec>)
                return "ellipsoid";
            else if constexpr (std::is_same_v<T, PNormBallSpec>)
                return "pnorm_ball";
            else
                return "logsumexp";
        },
        shape);
}

namespace {

Vec json_vector(const json& j, const std::string& what) {
    if (!j.is_array() || j.empty()) raise(ErrorCode::BadSpec, what + " must be a nonempty array");
    Vec v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) raise(ErrorCode::BadSpec, what + " must contain numbers");
        v[static_cast<int>(i)] = j[i].get<double>();
    }
    return v;
}

// Accepts either a flat row-major array of n*n numbers or n rows of n.
Mat json_matrix(const json& j, int n, const std::string& what) {
    Mat m(n, n);
    if (!j.is_array()) raise(ErrorCode::BadSpec, what + " must be an array");
    if (j.size() == static_cast<std::size_t>(n) && j[0].is_array()) {
        for (int r = 0; r < n; ++r) {
            if (static_cast<int>(j[r].size()) != n) raise(ErrorCode::BadSpec, what + " rows must have length n");
            for (int c = 0; c < n; ++c) m(r, c) = j[r][c].get<double>();
        }
        return m;
    }
    if (j.size() != static_cast<std::size_t>(n) * n)
        raise(ErrorCode::BadSpec, what + " must hold n*n numbers (row-major)");
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) m(r, c) = j[static_cast<std::size_t>(r) * n + c].get<double>();
    return m;
}

} // namespace

DomainSpec DomainSpec::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        raise(ErrorCode::BadSpec, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("type"))
        raise(ErrorCode::BadSpec, "domain spec must be an object with a \"type\" field");
    const std::string type = j["type"].get<std::string>();
    DomainSpec spec;
    if (type == "ellipsoid") {
        EllipsoidSpec e;
        e.center = json_vector(j.at("center"), "center");
        e.semi_axes = json_vector(j.at("semi_axes"), "semi_axes");
        const int n = static_cast<int>(e.center.size());
        if (j.contains("rotation")) e.rotation = json_matrix(j["rotation"], n, "rotation");
        spec.shape = std::move(e);
    } else if (type == "pnorm_ball") {
        PNormBallSpec p;
        p.center = json_vector(j.at("center"), "center");
        p.radius = j.at("radius").get<double>();
        p.exponent = j.at("exponent").get<double>();
        spec.shape = std::move(p);
    } else if (type == "logsumexp") {
        LogSumExpSpec s;
        if (!j.contains("facets") || !j["facets"].is_array() || j["facets"].empty())
            raise(ErrorCode::BadSpec, "logsumexp requires a nonempty facets array");
        for (const auto& f : j["facets"]) {
            Facet facet;
            facet.normal = json_vector(f.at("normal"), "facet normal");
            facet.offset = f.at("offset").get<double>();
            s.facets.push_back(std::move(facet));
        }
        s.sharpness = j.at("sharpness").get<double>();
        spec.shape = std::move(s);
    } else {
        raise(ErrorCode::BadSpec, "unknown domain type \"" + type + "\"");
    }
    if (spec.dimension() < 2) raise(ErrorCode::BadSpec, "dimension must be at least 2");
    return spec;
}

DomainSpec DomainSpec::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::BadSpec, "cannot open domain file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

// --- ConvexBody ------------------------------------------------------------

double ConvexBody::value(const Vec& x) const {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, EllipsoidSpec>) {
                const Vec y = x - s.center;
                return y.dot(ellipsoid_matrix(s) * y) - 1.0;
            } else if constexpr (std::is_same_v<T, PNormBallSpec>) {
                double val = 0.0;
                for (int i = 0; i < x.size(); ++i)
                    val += std::pow(std::abs(x[i] - s.center[i]), s.exponent);
                return val / std::pow(s.radius, s.exponent) - 1.0;
            } else {
                return lse_value(s, x);
            }
        },
        spec_.shape);
}

Vec ConvexBody::gradient(const Vec& x) const { return jet(x).grad; }

Jet2 ConvexBody::jet(const Vec& x) const {
    return std::visit(
        [&](const auto& s) -> Jet2 {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, EllipsoidSpec>)
                return ellipsoid_jet(s, x);
            else if constexpr (std::is_same_v<T, PNormBallSpec>)
                return pnorm_jet(s, x);
            else
                return lse_jet(s, x);
        },
        spec_.shape);
}

// --- load_domain -----------------------------------------------------------

namespace {

// The smoothed polytope is bounded iff its facet normals positively span
// R^n. For n = 2 this is exact (largest angular gap < pi); higher n uses a
// direction net, which is adequate at desk scale.
void check_positive_span(const LogSumExpSpec& s, int n) {
    if (static_cast<int>(s.facets.size()) < n + 1)
        raise(ErrorCode::BadSpec, "logsumexp needs at least n+1 facets to be bounded");
    if (n == 2) {
        std::vector<double> angles;
        for (const auto& f : s.facets) {
            if (f.normal.norm() == 0.0) raise(ErrorCode::BadSpec, "zero facet normal");
            angles.push_back(std::atan2(f.normal[1], f.normal[0]));
        }
        std::sort(angles.begin(), angles.end());
        double gap = angles.front() + 2.0 * M_PI - angles.back();
        for (std::size_t i = 1; i < angles.size(); ++i)
            gap = std::max(gap, angles[i] - angles[i - 1]);
        if (gap >= M_PI - 1e-9)
            raise(ErrorCode::BadSpec, "facet normals do not positively span the plane");
        return;
    }
    // Direction net: every probe direction must see some facet pointing along it.
    std::uint64_t state = 0x9e3779b97f4a7c15ull;
    const auto next = [&state]() {
        state += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    };
    const int probes = 4096;
    for (int p = 0; p < probes + 2 * n; ++p) {
        Vec d = Vec::Zero(n);
        if (p < 2 * n)
            d[p / 2] = (p % 2 == 0) ? 1.0 : -1.0;
        else {
            for (int i = 0; i < n; ++i) {
                const double u1 = (next() >> 11) * 0x1.0p-53 + 1e-300;
                const double u2 = (next() >> 11) * 0x1.0p-53;
                d[i] = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
            }
            d.normalize();
        }
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& f : s.facets) best = std::max(best, f.normal.dot(d) / f.normal.norm());
        if (best <= 1e-9)
            raise(ErrorCode::BadSpec, "facet normals do not positively span R^n");
    }
}

// Bounding box of the enclosing polytope {a_i . x <= b_i} by vertex
// enumeration (desk-scale facet counts).
void lse_polytope_box(const LogSumExpSpec& s, int n, Vec& lo, Vec& hi, Vec& centroid) {
    const int m = static_cast<int>(s.facets.size());
    std::vector<int> idx(n);
    std::vector<Vec> vertices;
    std::vector<int> choose(n, 0);
    // Iterate over all n-subsets of facets.
    std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == n) {
            Mat a(n, n);
            Vec b(n);
            for (int r = 0; r < n; ++r) {
                a.row(r) = s.facets[choose[r]].normal.transpose();
                b[r] = s.facets[choose[r]].offset;
            }
            Eigen::FullPivLU<Mat> lu(a);
            if (!lu.isInvertible()) return;
            const Vec x = lu.solve(b);
            for (const auto& f : s.facets)
                if (f.normal.dot(x) > f.offset + 1e-9 * (1.0 + std::abs(f.offset))) return;
            vertices.push_back(x);
            return;
        }
        for (int i = start; i < m; ++i) {
            choose[depth] = i;
            rec(i + 1, depth + 1);
        }
    };
    rec(0, 0);
    if (vertices.empty())
        raise(ErrorCode::BadSpec, "logsumexp polytope has no vertices (empty or unbounded)");
    lo = vertices[0];
    hi = vertices[0];
    centroid = Vec::Zero(n);
    for (const auto& v : vertices) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
        centroid += v;
    }
    centroid /= static_cast<double>(vertices.size());
}

// Damped Newton minimization of the defining function; phi is smooth and
// strongly convex on the region of interest.
Vec minimize_phi(const ConvexBody& body, Vec x) {
    for (int iter = 0; iter < 200; ++iter) {
        const Jet2 j = body.jet(x);
        Eigen::LDLT<Mat> ldlt(j.hess);
        Vec step;
        if (ldlt.info() == Eigen::Success)
            step = -ldlt.solve(j.grad);
        else
            step = -j.grad;
        if (step.norm() < 1e-13 * (1.0 + x.norm())) break;
        double t = 1.0;
        const double f0 = j.value;
        for (int ls = 0; ls < 60; ++ls) {
            if (body.value(x + t * step) < f0 - 1e-4 * t * std::abs(step.dot(j.grad))) break;
            t *= 0.5;
        }
        x += t * step;
    }
    return x;
}

void check_derivative_consistency(const ConvexBody& body, const Vec& x) {
    const double h = 1e-6 * (1.0 + x.norm());
    const Jet2 j = body.jet(x);
    const double scale = 1.0 + j.grad.norm();
    for (int i = 0; i < x.size(); ++i) {
        Vec e = Vec::Zero(x.size());
        e[i] = h;
        const double fd = (body.value(x + e) - body.value(x - e)) / (2.0 * h);
        if (std::abs(fd - j.grad[i]) > 1e-4 * scale)
            raise(ErrorCode::BadSpec, "defining function gradient check failed");
        const Vec gd = (body.jet(x + e).grad - body.jet(x - e).grad) / (2.0 * h);
        if ((gd - j.hess.col(i)).norm() > 1e-3 * (1.0 + j.hess.norm()))
            raise(ErrorCode::BadSpec, "defining function Hessian check failed");
    }
}

} // namespace

ConvexBody load_domain(const DomainSpec& spec) {
    const int n = spec.dimension();
    if (n < 2) raise(ErrorCode::BadSpec, "dimension must be at least 2");

    ConvexBody body;
    body.spec_ = spec;
    body.n_ = n;

    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, EllipsoidSpec>) {
                if (static_cast<int>(s.semi_axes.size()) != n)
                    raise(ErrorCode::BadSpec, "semi_axes length must match center");
                if (s.semi_axes.minCoeff() <= 0.0)
                    raise(ErrorCode::BadSpec, "semi_axes must be positive");
                if (s.rotation) {
                    if (s.rotation->rows() != n || s.rotation->cols() != n)
                        raise(ErrorCode::BadSpec, "rotation must be n x n");
                    const Mat r = *s.rotation;
                    if ((r.transpose() * r - Mat::Identity(n, n)).norm() > 1e-9)
                        raise(ErrorCode::BadSpec, "rotation must be orthogonal");
                }
                Vec half(n);
                const Mat r = s.rotation ? *s.rotation : Mat::Identity(n, n);
                for (int i = 0; i < n; ++i) {
                    double w = 0.0;
                    for (int k = 0; k < n; ++k) w += r(i, k) * r(i, k) * s.semi_axes[k] * s.semi_axes[k];
                    half[i] = std::sqrt(w);
                }
                body.box_min_ = s.center - half;
                body.box_max_ = s.center + half;
                body.interior_ = s.center;
            } else if constexpr (std::is_same_v<T, PNormBallSpec>) {
                if (s.exponent < 2.0) raise(ErrorCode::BadSpec, "pnorm exponent must be >= 2");
                if (s.radius <= 0.0) raise(ErrorCode::BadSpec, "pnorm radius must be positive");
                body.box_min_ = s.center.array() - s.radius;
                body.box_max_ = s.center.array() + s.radius;
                body.interior_ = s.center;
            } else {
                if (s.sharpness <= 0.0) raise(ErrorCode::BadSpec, "sharpness must be positive");
                for (const auto& f : s.facets)
                    if (static_cast<int>(f.normal.size()) != n)
                        raise(ErrorCode::BadSpec, "facet normals must share one dimension");
                check_positive_span(s, n);
                Vec lo, hi, centroid;
                lse_polytope_box(s, n, lo, hi, centroid);
                body.box_min_ = lo;
                body.box_max_ = hi;
                body.interior_ = centroid;  // refined below
            }
        },
        spec.shape);

    body.diameter_ = (body.box_max_ - body.box_min_).norm();
    if (!(body.diameter_ > 0.0) || !std::isfinite(body.diameter_))
        raise(ErrorCode::BadSpec, "degenerate bounding box");

    body.interior_ = minimize_phi(body, body.interior_);
    if (!(body.value(body.interior_) < 0.0))
        raise(ErrorCode::BadSpec, "domain has empty interior");

    check_derivative_consistency(body, body.interior_);
    return body;
}

// --- geometry queries ------------------------------------------------------

PointClass classify_point(const ConvexBody& body, const Vec& x, double tol) {
    if (!(tol > 0.0)) raise(ErrorCode::BadSpec, "classification tolerance must be positive");
    const Jet2 j = body.jet(x);
    const double scale = std::max(j.grad.norm(), 1e-300);
    if (j.value < -tol * scale) return PointClass::Interior;
    if (j.value <= tol * scale) return PointClass::Boundary;
    return PointClass::Exterior;
}

double solve_ray(const ConvexBody& body, const Vec& x, const Vec& d) {
    // Ellipsoids reduce to a quadratic; everything else gets safeguarded
    // Newton on a bracket from the bounding box.
    if (const auto* e = std::get_if<EllipsoidSpec>(&body.spec().shape)) {
        const Mat m = ellipsoid_matrix(*e);
        const Vec y = x - e->center;
        const double a = d.dot(m * d);
        const double b = 2.0 * d.dot(m * y);
        const double c = y.dot(m * y) - 1.0;
        const double disc = b * b - 4.0 * a * c;
        return (-b + std::sqrt(disc)) / (2.0 * a);
    }

    double cap = box_exit(body.box_min(), body.box_max(), x, d);
    if (!std::isfinite(cap)) raise(ErrorCode::NoConverge, "ray never exits the bounding box");
    cap *= 1.0 + 1e-12;
    for (int grow = 0; grow < 64 && body.value(x + cap * d) <= 0.0; ++grow) cap *= 2.0;
    if (body.value(x + cap * d) <= 0.0)
        raise(ErrorCode::NoConverge, "no boundary crossing found along ray");

    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, PNormBallSpec>) {
                const double p = s.exponent;
                const double rp = std::pow(s.radius, p);
                return newton_ray_root(
                    [&](double u) {
                        double val = 0.0, slope = 0.0;
                        for (int i = 0; i < x.size(); ++i) {
                            const double y = x[i] - s.center[i] + u * d[i];
                            const double a = std::abs(y);
                            val += std::pow(a, p);
                            slope += p * std::copysign(std::pow(a, p - 1.0), y) * d[i];
                        }
                        return std::pair{val / rp - 1.0, slope / rp};
                    },
                    cap);
            } else if constexpr (std::is_same_v<T, LogSumExpSpec>) {
                const int m = static_cast<int>(s.facets.size());
                const double beta = s.sharpness;
                Vec c0(m), e0(m);
                for (int i = 0; i < m; ++i) {
                    c0[i] = beta * (s.facets[i].normal.dot(x) - s.facets[i].offset);
                    e0[i] = beta * s.facets[i].normal.dot(d);
                }
                return newton_ray_root(
                    [&](double u) {
                        double zmax = -std::numeric_limits<double>::infinity();
                        for (int i = 0; i < m; ++i) zmax = std::max(zmax, c0[i] + u * e0[i]);
                        double sum = 0.0, dsum = 0.0;
                        for (int i = 0; i < m; ++i) {
                            const double w = std::exp(c0[i] + u * e0[i] - zmax);
                            sum += w;
                            dsum += w * e0[i];
                        }
                        return std::pair{(zmax + std::log(sum)) / beta, dsum / (beta * sum)};
                    },
                    cap);
            } else {
                raise(ErrorCode::BadSpec, "unreachable");
            }
        },
        body.spec().shape);
}

ChordData chord(const ConvexBody& body, const Vec& x, const Vec& v) {
    if (v.norm() < zero_vector_threshold(x))
        raise(ErrorCode::ZeroVector, "direction below zero-vector threshold");
    if (!is_interior(body, x)) raise(ErrorCode::Outside, "chord base point not interior");
    ChordData ch;
    ch.t_plus = solve_ray(body, x, v);
    ch.t_minus = solve_ray(body, x, -v);
    ch.b_point = x + ch.t_plus * v;
    ch.a_point = x - ch.t_minus * v;
    return ch;
}

Mat householder_frame(const Vec& v) {
    const int n = static_cast<int>(v.size());
    const Vec u = v / v.norm();
    Vec w = u;
    w[n - 1] -= 1.0;
    const double wn = w.norm();
    if (wn < 1e-14) return Mat::Identity(n, n);
    w /= wn;
    return Mat::Identity(n, n) - 2.0 * w * w.transpose();
}

namespace {

// Implicit-function-theorem jets of the sheet t = h(z) of phi(x + T z + t v) = 0
// at the hit point.
void sheet_jet(const ConvexBody& body, const Mat& t_basis, const Vec& v, const Vec& hit,
               Vec& grad_out, Mat& hess_out) {
    const Jet2 j = body.jet(hit);
    const double gt = j.grad.dot(v);
    if (std::abs(gt) < 1e-8 * j.grad.norm() * v.norm())
        raise(ErrorCode::TangentRay, "chord grazes the boundary");
    const Vec gz = t_basis.transpose() * j.grad;
    const Mat gzz = t_basis.transpose() * j.hess * t_basis;
    const Vec gzt = t_basis.transpose() * (j.hess * v);
    const double gtt = v.dot(j.hess * v);
    grad_out = -gz / gt;
    hess_out = -(gzz + gzt * grad_out.transpose() + grad_out * gzt.transpose() +
                 gtt * grad_out * grad_out.transpose()) /
               gt;
}

} // namespace

BoundaryGraphJet boundary_graph_jet(const ConvexBody& body, const Vec& x, const Vec& v) {
    const ChordData ch = chord(body, x, v);
    const int n = body.dimension();
    const Mat h = householder_frame(v);
    const Mat t_basis = h.leftCols(n - 1);

    BoundaryGraphJet jet;
    jet.frame = Mat(n, n);
    jet.frame.leftCols(n - 1) = t_basis;
    jet.frame.col(n - 1) = v;
    jet.h0 = ch.t_plus;
    jet.b0 = -ch.t_minus;
    sheet_jet(body, t_basis, v, ch.b_point, jet.grad_h, jet.hess_h);
    sheet_jet(body, t_basis, v, ch.a_point, jet.grad_b, jet.hess_b);
    return jet;
}

double strong_convexity_margin(const ConvexBody& body, int sample_count, std::uint64_t seed) {
    const int n = body.dimension();
    double margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < sample_count; ++i) {
        // Inline normal sampling keeps this file free of the sampling module.
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (static_cast<std::uint64_t>(i) + 1);
        const auto next = [&z]() {
            z += 0x9e3779b97f4a7c15ull;
            std::uint64_t t = z;
            t = (t ^ (t >> 30)) * 0xbf58476d1ce4e5b9ull;
            t = (t ^ (t >> 27)) * 0x94d049bb133111ebull;
            return t ^ (t >> 31);
        };
        Vec d(n);
        for (int k = 0; k < n; ++k) {
            const double u1 = (next() >> 11) * 0x1.0p-53 + 1e-300;
            const double u2 = (next() >> 11) * 0x1.0p-53;
            d[k] = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
        }
        d.normalize();
        const double t = solve_ray(body, body.interior_point(), d);
        const Vec p = body.interior_point() + t * d;
        const Jet2 j = body.jet(p);
        const Mat tangent = householder_frame(j.grad).leftCols(n - 1);
        const Mat ii = (tangent.transpose() * j.hess * tangent) / j.grad.norm();
        Eigen::SelfAdjointEigenSolver<Mat> es(ii);
        margin = std::min(margin, es.eigenvalues().minCoeff());
    }
    return margin;
}

} // namespace fhgeo
