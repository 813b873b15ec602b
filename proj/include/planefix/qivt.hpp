#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "planefix/complement.hpp"
#include "planefix/fixpoint.hpp"
#include "planefix/maps.hpp"
#include "planefix/relations.hpp"

namespace planefix {

/// A map on a disc X with an arc A in its boundary and two marked arc parameters x < y.
struct QivtInstance {
    MapExpr f;
    Polyline X;  ///< closed simple boundary of the disc
    Polyline A;  ///< open arc in the boundary of X; its parameter is the arc order
    double x = 0.0, y = 1.0;
    Tolerances tol;
    std::vector<double> q_candidates;  ///< parameters in (x,y) for the neighbourhood clause; empty picks defaults
};

struct QivtDerived {
    Point u{}, v{};
    std::optional<double> lu, lv;  ///< arc parameters of u and v when they lie on A
    Polyline S;                    ///< [x,y]_A
    ImagePolyline K;               ///< image of S with endpoints exactly u and v
    Polyline K0_src;               ///< part of S whose image avoids the endpoint tubes
    Polyline K0;                   ///< image of K0_src
    Polyline uvA;                  ///< [u,v]_A from u to v; empty when u or v is off A
    std::optional<ComplementDecomposition> dec;
    std::string dec_note;
};

/// Validates the instance and builds u, v, K, K0, [u,v]_A and the decomposition of the plane minus P.
QivtDerived derive(const QivtInstance& inst);

TriState check_containment(const QivtInstance& inst, const QivtDerived& d);
TriState check_sign(const QivtInstance& inst, const QivtDerived& d);
TriState check_disjoint(const QivtInstance& inst, const QivtDerived& d);
TriState check_preimage_clause(const QivtInstance& inst, const QivtDerived& d, double pitch);

struct WSelection {
    TriState verdict;
    int face = -1;
    double radius = 0.0;
    double q = 0.0;  ///< arc parameter of the chosen q
};
WSelection select_W(const QivtInstance& inst, const QivtDerived& d);

/// Order pattern and set clauses of condition `which` (1..5).
TriState check_condition(const QivtInstance& inst, const QivtDerived& d, int which);

struct HypothesisReport {
    TriState on_arc, sign, containment, disjoint, preimage, uq;
    std::array<TriState, 5> conditions;
    int condition = 0;  ///< the condition whose order pattern matches, 0 when none does
    WSelection W;
    Verdict overall = Verdict::UNDECIDED;
    bool inconsistent = false;
    std::optional<FixedPointCertificate> certificate;
    LocateResult located;
    std::string note;
};

/// `derived`, when given, receives the derived geometry.
HypothesisReport certify_qivt(const QivtInstance& inst, QivtDerived* derived = nullptr);

}  // namespace planefix
