#pragma once

#include <cstdint>
#include <string>

#include "varharm/grid.hpp"

namespace varharm {

/// Pointwise exponent p(.) with cached p- = min and p+ = max over the grid
/// (the grid samples are the measure space, so ess inf/sup are min/max).
class ExponentFunction {
public:
    explicit ExponentFunction(GridFunction values);

    static ExponentFunction constant(const Grid& g, double p);

    const GridFunction& values() const { return values_; }
    const Grid& grid() const { return values_.grid(); }
    double operator[](std::size_t i) const { return values_[i]; }
    double p_minus() const { return p_minus_; }
    double p_plus() const { return p_plus_; }
    /// min{p-, 1}, the quasi-triangle power.
    double p_lower() const { return p_minus_ < 1.0 ? p_minus_ : 1.0; }

private:
    GridFunction values_;
    double p_minus_, p_plus_;
};

struct LuxemburgResult {
    double norm = 0.0;
    int iterations = 0;
    double lambda_lo = 0.0;
    double lambda_hi = 0.0;
};

/// integral of |f/lambda|^{p(x)}; strictly decreasing in lambda for f != 0.
double modular(const GridFunction& f, const ExponentFunction& p, double lambda);

/// inf{lambda > 0 : modular(f, p, lambda) <= 1} by bisection,
/// relative tolerance 1e-8 on lambda; 0 iff f vanishes on the grid.
LuxemburgResult luxemburg_norm(const GridFunction& f, const ExponentFunction& p);

/// p'(x) = p(x)/(p(x)-1); requires p- > 1.
ExponentFunction conjugate(const ExponentFunction& p);

/// 1/q = 1/p - alpha/n; requires 0 <= alpha < n and p+ < n/alpha for alpha > 0.
ExponentFunction sobolev_shift(const ExponentFunction& p, double alpha);

/// max over seeded trial g with ||g||_{p'} <= 1 of integral |f g|.
/// A sanity probe for the norm-duality lower bound; requires p- > 1.
double duality_lower_bound(const GridFunction& f, const ExponentFunction& p, int trials,
                           std::uint64_t seed = 42);

/// max over grid pairs with 0 < |x-y| <= 1/2 of |p(x)-p(y)| log(e + 1/|x-y|).
double log_holder_score(const ExponentFunction& p);

/// Named exponent builders for the CLI:
///   const:<v>, radial:<id>, even-sym:<id>, or a path ending in .csv.
/// radial ids: bump, plateau, step;  even-sym base ids: drift, ramp.
ExponentFunction parse_exponent(const Grid& g, const std::string& spec);

}  // namespace varharm
