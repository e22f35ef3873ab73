#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "varharm/grid.hpp"
#include "varharm/var_lebesgue.hpp"

namespace varharm {

/// Discretized ball family for maximal-operator sups: squared radii in cell
/// units, kept as exact powers of two plus one covering top rung, so radius
/// ratios are <= sqrt(2) and doubling a rung is bit-exact. The optional
/// pointwise rung is the r -> 0 limit (value |f(x)|).
struct BallFamily {
    std::vector<double> rho2;        // ascending squared radii, cell^2 units
    bool centered = false;
    bool include_pointwise = true;

    static BallFamily for_grid(const Grid& g);
    static BallFamily for_grid(const Grid& g, double r_min, double r_max,
                               bool centered = false);

    std::vector<double> radii(const Grid& g) const;
    double r_min(const Grid& g) const;
    double r_max(const Grid& g) const;
    void validate(const Grid& g) const;
};

/// sup over family balls of |B|^{alpha/n - 1} * integral_B |f|.
/// alpha = 0 is the Hardy-Littlewood maximal function (same code path).
GridFunction fractional_maximal(const GridFunction& f, double alpha, const BallFamily& fam);

/// Uncentered Hardy-Littlewood maximal function over the family.
GridFunction hl_maximal(const GridFunction& f, const BallFamily& fam);

/// Centered variant (balls at the evaluation point only).
GridFunction centered_maximal(const GridFunction& f, const BallFamily& fam);

/// Smooth compactly supported profile with a numerically verified
/// seminorm certificate sup |x^a d^b phi| <= 1 for |a|,|b| <= n_grand.
struct TestFunction {
    std::string name;
    double support_radius = 1.0;
    std::function<double(std::array<double, 2>, int)> eval;
    double integral = 0.0;   // integral of phi, nonzero by construction
    double seminorm = 0.0;   // certified value after rescaling
};

struct TestFunctionBank {
    int dim = 1;
    int n_grand = 4;
    std::vector<TestFunction> profiles;

    /// Fixed 5-profile bank (two mollifier widths via polynomial bumps,
    /// a smooth bump, an odd-perturbed bump, an annular bump), cached per dim.
    static const TestFunctionBank& standard(int dim);
};

/// t^{-n} phi(./t) * f by direct quadrature with a tabulated kernel.
GridFunction scaled_convolution(const GridFunction& f, const TestFunction& phi, double t);

/// sup over j in [j_lo, j_hi] of |(phi^j * f)| with phi^j = 2^{jn} phi(2^j .).
GridFunction discrete_maximal(const GridFunction& f, const TestFunction& phi, int j_lo,
                              int j_hi);

/// Finite-bank lower approximation of the grand maximal function:
/// max over bank profiles and ladder scales of the smoothed values.
GridFunction grand_maximal(const GridFunction& f, const TestFunctionBank& bank,
                           const std::vector<double>& scales);

/// Dyadic scale ladder t = 2^{-j} spanning [h/2, 4L]; j range helpers.
std::vector<double> dyadic_scales(const Grid& g);
std::pair<int, int> dyadic_j_range(const Grid& g);
/// Dyadic ladder refined by sqrt(2) midpoints (contains the dyadic scales).
std::vector<double> default_scales(const Grid& g);

/// max over seeded random f of ||Mf||_{p(.)} / ||f||_{p(.)}; requires p- > 1.
double estimate_operator_norm(const ExponentFunction& p, int trials = 64,
                              std::uint64_t seed = 42);

}  // namespace varharm
