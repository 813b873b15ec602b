#pragma once

#include <optional>
#include <string>
#include <vector>

#include "planefix/complement.hpp"
#include "planefix/fixpoint.hpp"
#include "planefix/maps.hpp"
#include "planefix/relations.hpp"

namespace planefix {

/// An arc threaded through an orbit segment u_0, ..., u_n marked by increasing arc parameters.
struct StepArc {
    Polyline A;
    std::vector<double> orbit_params;  ///< t_0 = 0 < t_1 < ... < t_n = 1
    MapExpr f;

    int n() const { return static_cast<int>(orbit_params.size()) - 1; }
    Point u(int k) const { return A.point_at(orbit_params[static_cast<std::size_t>(k)]); }
};

/// Orbit consistency and the step equations, each checked as a two-sided Hausdorff bound.
TriState validate_step_arc(const StepArc& sa, const Tolerances& tol);

/// Two-sided Hausdorff distance between f([u_{k-1},u_k]_A) and [u_k,u_{k+1}]_A, sampled at pitch h.
double step_deviation(const StepArc& sa, int k, double h);

/// The same step arc seen through an invertible affine h: arc h(A), map h o f o h^-1.
StepArc transform(const StepArc& sa, const MapExpr& h);

struct OutflankCertificate {
    StepArc base;
    double y = 1.0;        ///< outflanking parameter in (t_{n-1}, t_n]
    Point y_point{};
    Point v{};             ///< f(y)
    double v_param = 0.0;  ///< parameter of the point of [u_0,y)_A closest to v
    double contact = 0.0;  ///< distance from v to [u_0,y)_A
    TriState injectivity, dodge, moving;
};

struct OutflankSearch {
    TriState step_check;
    std::optional<OutflankCertificate> certificate;
    std::vector<std::string> diagnostics;
};

/// Smallest y in (u_{n-1}, u_n] whose image returns onto [u_0, y)_A with all clauses holding.
OutflankSearch find_outflanking_point(const StepArc& sa, const Tolerances& tol);

/// Drops [u_0, u_k)_A when v lies in [u_k, u_{k+1})_A.
OutflankCertificate reduce_outflanked_origin(const OutflankCertificate& cert);

struct Construction {
    bool ok = false;
    std::string failed_step;  ///< proof step that could not be carried out
    std::string diagnostic;
    std::vector<Point> witness;
    double contact_t = 0.0;  ///< first-contact half width b in normalized coordinates
    Point w{};               ///< contact point in normalized coordinates
    Polyline J;              ///< the arc [x,w] u L in normalized coordinates
    int n = 0;
    int proof_case = 0;
    TriState injectivity;
    std::optional<OutflankCertificate> certificate;
    std::vector<std::string> attempts;
};

/// Builds an outflanking arc from an m-periodic point x by the growing-squares construction.
Construction construct_from_periodic_orbit(const MapExpr& f, Point x, int m, const Tolerances& tol);

struct CertifyOptions {
    double u_radius = 0.0;  ///< radius of the disc around u_{n-1}; 0 picks a default
};

struct OutflankReport {
    TriState containment, orientation, injectivity, exclusive, w_select;
    Point u_center{};
    double u_radius = 0.0;
    int W = -1;
    Verdict overall = Verdict::UNDECIDED;
    bool inconsistent = false;
    bool searched_whole_disc = false;  ///< no certificate in W, so the interior of E was searched
    std::optional<FixedPointCertificate> certificate;
    LocateResult located;
    std::optional<ComplementDecomposition> dec;
    Polyline K;  ///< f([u_{n-1}, y]_A)
    std::string note;
};

OutflankReport certify_outflank(const OutflankCertificate& cert, const Region& E, const Tolerances& tol,
                                 const CertifyOptions& opt = {});

}  // namespace planefix
