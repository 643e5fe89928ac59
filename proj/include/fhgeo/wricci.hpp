#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fhgeo/curvature.hpp"

namespace fhgeo {

constexpr double kInfiniteN = std::numeric_limits<double>::infinity();

/// |psi1| at or below this threshold is treated as Psi'(0) = 0 when deciding
/// the N = n case.
constexpr double kPsiZeroThreshold = 1e-6;

struct RicNEntry {
    double N;       // may be +inf
    double value;   // meaningful when finite == true
    bool finite;    // false encodes -inf (the N = n case with Psi'(0) != 0)
};

/// Closed-form weighted-Ricci record used as the comparison oracle.
struct OracleRecord {
    double psi1;
    double psi2;
    double ric;
    double ric_inf;
    RicNEntry ric_n;                 // the N = n case
    std::vector<RicNEntry> ric_N;
};

struct WeightedRicciReport {
    MetricKind kind;
    Vec x;
    Vec v_unit;          // direction normalized to F = 1
    double input_norm;   // F of the tangent vector as given
    double t_plus;       // chord parameters of the unit direction
    double t_minus;
    double ric;
    double ric_error_estimate;
    double psi1;
    double psi2;
    double ric_inf;
    RicNEntry ric_n;
    std::vector<RicNEntry> ric_N;
    std::optional<OracleRecord> oracle;
    std::vector<std::pair<std::string, double>> deviations;
};

/// Weight of the Lebesgue measure against the Riemannian volume of
/// g_{geodesic velocity}: Psi(s) = (1/2) log det g at arclength s.
/// Only differences and derivatives of Psi are contractual.
double psi_at(MetricKind kind, const ConvexBody& body, const TangentVector& unit_tv, double s);

/// (Psi'(0), Psi''(0)) with respect to arclength, central differences with
/// Richardson extrapolation.
std::pair<double, double> psi_derivatives(MetricKind kind, const ConvexBody& body,
                                          const TangentVector& unit_tv,
                                          const DiffScheme& scheme = {});

WeightedRicciReport weighted_ricci(MetricKind kind, const ConvexBody& body,
                                   const TangentVector& tv, const std::vector<double>& N_list,
                                   const DiffScheme& scheme = {});

/// Funk geometry has domain-independent constants: Ric = -(n-1)/4,
/// Psi' = (n+1)/2, Psi'' = 0. ReverseFunk flips the sign of Psi'.
OracleRecord funk_oracle(int n, const std::vector<double>& N_list,
                         bool reverse = false);

/// Hilbert constants depend only on the chord split (t_plus, t_minus) of the
/// unit direction: Psi' = (n+1)/2 (1/t+ - 1/t-), Psi'' = (n+1)/(t+ t-),
/// Ric = -(n-1).
OracleRecord hilbert_oracle(double t_plus, double t_minus, int n,
                            const std::vector<double>& N_list);

struct TheoremCheck {
    std::string name;
    double max_deviation;
    double tolerance;
    bool pass;
};

struct VerificationReport {
    MetricKind kind;
    int dimension;
    int samples;
    std::uint64_t seed;
    double convexity_margin;
    std::vector<std::string> warnings;
    std::vector<TheoremCheck> checks;
    bool all_pass;
};

/// Sweeps seeded interior (x, v) with F(v) = 1, compares every report field
/// against the closed-form oracle and (Hilbert) the bound membership.
/// Failures are recorded in the report, not thrown.
VerificationReport verify_theorems(MetricKind kind, const ConvexBody& body, int sample_count,
                                   std::uint64_t seed, double tol);

} // namespace fhgeo
