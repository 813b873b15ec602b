#pragma once

#include <optional>

#include "planefix/maps.hpp"
#include "planefix/outflank.hpp"

namespace planefix {

/// The spiral z -> lambda e^{i beta} z with its n-step arc built from the curve eta.
struct SpiralExample {
    int n = 3;
    double beta = 1.9;
    double lambda = 1.0;
    double dip = 0.0;                 ///< radius of eta at its second breakpoint
    double b1 = 0.0, b2 = 0.0;        ///< breakpoints of the radius profile
    MapExpr f;
    Polyline A0;                      ///< eta([0, beta])
    StepArc arc;                      ///< A_0 u ... u A_{n-1}
    double y_param = 0.0;             ///< parameter of f^{n-1}(eta(b2)) on the arc
    Region E = Region::circle({0, 0}, 3.0);
};

/// Radius profile through (0,1), (b1,1), (b2,dip), (beta,lambda), linear in between.
double spiral_profile(double theta, double b1, double b2, double beta, double dip, double lambda);

/// Throws std::invalid_argument unless n beta < 2 pi < (n+1) beta.
/// The dip defaults to lambda^-n so that the outflanking point maps exactly onto u_0.
SpiralExample example_4_5(int n, double beta, std::optional<double> dip = std::nullopt, double dtheta = 5e-4);

/// The period-n map F(r,s) = (g(r), s + d(r, Z)) with its periodic point (1,0).
struct PeriodExample {
    int n = 3;
    MapExpr f;
    Point x{1.0, 0.0};
    Box box{};  ///< [0, n+1] x [-1, 1]
};

PeriodExample example_1_2(int n);

}  // namespace planefix
