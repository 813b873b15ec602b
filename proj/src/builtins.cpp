#include "planefix/builtins.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace planefix {

double spiral_profile(double theta, double b1, double b2, double beta, double dip, double lambda) {
    if (theta <= b1) return 1.0;
    if (theta <= b2) return 1.0 + (dip - 1.0) * (theta - b1) / (b2 - b1);
    return dip + (lambda - dip) * (theta - b2) / (beta - b2);
}

SpiralExample example_4_5(int n, double beta, std::optional<double> dip, double dtheta) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    if (n < 1) throw std::invalid_argument("example_4_5 needs n >= 1");
    if (!(n * beta < two_pi && two_pi < (n + 1) * beta))
        throw std::invalid_argument("example_4_5 needs n*beta < 2*pi < (n+1)*beta");
    if (!(dtheta > 0)) throw std::invalid_argument("example_4_5 needs a positive angular step");
    SpiralExample ex;
    ex.n = n;
    ex.beta = beta;
    ex.lambda = MapExpr::spiral_scale(n);
    ex.dip = dip.value_or(std::pow(ex.lambda, -n));
    if (!(ex.dip > 0 && ex.dip < 1)) throw std::invalid_argument("example_4_5 needs a dip radius in (0,1)");
    ex.b1 = (two_pi - n * beta) / 2.0;
    ex.b2 = 2.0 * ex.b1;
    ex.f = MapExpr::spiral(n, beta);

    auto eta = [&](double th) {
        const double r = spiral_profile(th, ex.b1, ex.b2, beta, ex.dip, ex.lambda);
        return Point{r * std::cos(th), r * std::sin(th)};
    };
    std::vector<Point> v;
    std::size_t dip_vertex = 0;
    const long steps = static_cast<long>(std::ceil(beta / dtheta));
    for (long k = 0; k < steps; ++k) {
        const double th = beta * static_cast<double>(k) / static_cast<double>(steps);
        const double next = beta * static_cast<double>(k + 1) / static_cast<double>(steps);
        v.push_back(eta(th));
        for (double b : {ex.b1, ex.b2})
            if (b > th && b < next) {
                if (b == ex.b2) dip_vertex = v.size();
                v.push_back(eta(b));
            }
    }
    const Point u0 = v.front();
    v.push_back(ex.f(u0));  // closes the step exactly: eta(beta) = f(eta(0))
    ex.A0 = Polyline(v, false);

    std::vector<Point> all = v;
    std::vector<std::size_t> junction{0, all.size() - 1};
    std::vector<Point> piece = v;
    std::size_t y_vertex = dip_vertex;
    for (int i = 1; i < n; ++i) {
        for (auto& p : piece) p = ex.f(p);
        if (i == n - 1) y_vertex = all.size() - 1 + dip_vertex;
        all.insert(all.end(), piece.begin() + 1, piece.end());
        junction.push_back(all.size() - 1);
    }
    ex.arc.A = Polyline(all, false);
    ex.arc.f = ex.f;
    for (std::size_t j : junction) ex.arc.orbit_params.push_back(ex.arc.A.vertex_param(j));
    ex.arc.orbit_params.back() = 1.0;
    ex.y_param = ex.arc.A.vertex_param(y_vertex);
    return ex;
}

PeriodExample example_1_2(int n) {
    PeriodExample ex;
    ex.n = n;
    ex.f = MapExpr::period_n(n);
    ex.box = Box{0.0, -1.0, static_cast<double>(n + 1), 1.0};
    return ex;
}

}  // namespace planefix
