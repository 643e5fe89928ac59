#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fhgeo/error.hpp"
#include "fhgeo/types.hpp"

namespace fhgeo {

// ---------------------------------------------------------------------------
// Domain specifications
// ---------------------------------------------------------------------------

struct EllipsoidSpec {
    Vec center;
    Vec semi_axes;                 // all > 0
    std::optional<Mat> rotation;   // orthogonal; identity when omitted
};

struct PNormBallSpec {
    Vec center;
    double radius;    // > 0
    double exponent;  // p >= 2
};

struct Facet {
    Vec normal;
    double offset;
};

/// Smoothed polytope: phi(x) = (1/beta) log sum_i exp(beta (a_i . x - b_i)).
struct LogSumExpSpec {
    std::vector<Facet> facets;
    double sharpness;  // beta > 0
};

struct DomainSpec {
    std::variant<EllipsoidSpec, PNormBallSpec, LogSumExpSpec> shape;

    int dimension() const;
    std::string family() const;  // "ellipsoid", "pnorm_ball", "logsumexp"

    static DomainSpec from_json_text(const std::string& text);
    static DomainSpec from_json_file(const std::string& path);
};

// ---------------------------------------------------------------------------
// Convex body
// ---------------------------------------------------------------------------

/// Bounded smooth convex domain D = {phi < 0} with exact gradient and Hessian
/// of the defining function. Immutable after construction; all member
/// functions are const and thread-safe.
class ConvexBody {
public:
    int dimension() const { return n_; }

    double value(const Vec& x) const;
    Vec gradient(const Vec& x) const;
    Jet2 jet(const Vec& x) const;

    const Vec& box_min() const { return box_min_; }
    const Vec& box_max() const { return box_max_; }
    const Vec& interior_point() const { return interior_; }
    /// Diagonal of the bounding box; the reference length for guards.
    double diameter() const { return diameter_; }

    const DomainSpec& spec() const { return spec_; }
    std::string family() const { return spec_.family(); }

private:
    friend ConvexBody load_domain(const DomainSpec&);
    ConvexBody() = default;

    DomainSpec spec_;
    int n_ = 0;
    Vec box_min_, box_max_, interior_;
    double diameter_ = 0.0;
};

/// Forward/backward boundary hit along the line x + u v, in units of v.
struct ChordData {
    double t_plus;   // > 0, phi(x + t_plus v) = 0
    double t_minus;  // > 0, phi(x - t_minus v) = 0
    Vec b_point;     // x + t_plus v
    Vec a_point;     // x - t_minus v
};

/// Second-order jets of the two boundary sheets over the hyperplane
/// orthogonal to v: forward sheet t = h(z) with h(0) = t_plus, backward
/// sheet t = b(z) with b(0) = -t_minus. The frame's first n-1 columns are a
/// Euclidean-orthonormal completion of v, its last column is v itself, so h
/// and b are measured in units of v.
struct BoundaryGraphJet {
    Mat frame;
    double h0;
    Vec grad_h;
    Mat hess_h;
    double b0;
    Vec grad_b;
    Mat hess_b;
};

enum class PointClass { Interior, Boundary, Exterior };

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

ConvexBody load_domain(const DomainSpec& spec);

PointClass classify_point(const ConvexBody& body, const Vec& x, double tol);

ChordData chord(const ConvexBody& body, const Vec& x, const Vec& v);

BoundaryGraphJet boundary_graph_jet(const ConvexBody& body, const Vec& x, const Vec& v);

/// Minimum eigenvalue of the boundary second fundamental form over seeded
/// boundary samples; positive values certify sampled strong convexity.
double strong_convexity_margin(const ConvexBody& body, int sample_count, std::uint64_t seed);

/// Orthogonal matrix whose last column is v/|v| (Householder completion).
Mat householder_frame(const Vec& v);

/// Positive root of u -> phi(x + u d); x must be interior.
double solve_ray(const ConvexBody& body, const Vec& x, const Vec& d);

inline bool is_interior(const ConvexBody& body, const Vec& x) { return body.value(x) < 0.0; }

inline double zero_vector_threshold(const Vec& x) { return 1e-14 * (1.0 + x.norm()); }

} // namespace fhgeo
