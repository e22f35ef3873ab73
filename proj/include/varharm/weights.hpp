#pragma once

#include <optional>

#include "varharm/grid.hpp"
#include "varharm/maximal.hpp"
#include "varharm/var_lebesgue.hpp"

namespace varharm {

/// Strictly positive grid function; w(E) = integral of w over E.
class Weight {
public:
    explicit Weight(GridFunction values);
    static Weight floored(GridFunction values, double floor = 1e-300);

    const GridFunction& values() const { return values_; }
    const Grid& grid() const { return values_.grid(); }
    double operator[](std::size_t i) const { return values_[i]; }

    Weight pow(double r) const;
    double total(const std::optional<Ball>& region = std::nullopt) const;

private:
    Weight() = delete;
    GridFunction values_;
};

/// Default family for weight constants: physical r_min = L/16 so counting
/// averages track volume averages to O(h/r), capped at L/2 so the sups can
/// range over balls wholly inside the box.
BallFamily weights_default_family(const Grid& g);

/// Ball averages below are counting-measure means over balls wholly inside
/// the box (clipped balls are not balls) and the discrete ess-inf is the min
/// over grid points in the ball, so every constant is >= 1 by Jensen/Hoelder.

/// max(max_x M(w)(x)/w(x), max_B avg_B w / min_B w).
double a1_constant(const Weight& w, const BallFamily& fam);

/// max_B (avg_B w) (avg_B w^{-1/(p-1)})^{p-1}; requires p > 1.
double ap_constant(const Weight& w, double p, const BallFamily& fam);

/// max_B (avg_B w^q)^{1/q} (avg_B w^{p'})^{1/p'} for p > 1,
/// or (avg_B w^q)^{1/q} / min_B w for p = 1; requires 1 <= p <= q.
double apq_constant(const Weight& w, double p, double q, const BallFamily& fam);

/// max_B (avg_B w^s)^{1/s} / avg_B w; requires s > 1.
double rh_constant(const Weight& w, double s, const BallFamily& fam);

/// w_A(x) = w(A^{-1} x) via pullback, floored to stay positive.
Weight act(const Weight& w, const OrthogonalMatrix& A);

struct RdFResult {
    Weight rg;
    int truncation_index = 0;
    double m_norm_used = 0.0;
    double tail_bound = 0.0;
    double dual_norm_ratio = 0.0;  // ||Rg|| / ||g|| in L^{p_dual}, certified <= 2
    bool dual_norm_ok = false;
    double a1_value = 0.0;         // certified <= 2 m_norm (+ slack)
    bool a1_ok = false;
    bool ok() const { return dual_norm_ok && a1_ok; }
};

/// Rubio de Francia iteration Rg = sum_i M^i g / (2 m_norm)^i, truncated when
/// the sup-norm tail bound falls below tol (default 1e-8 ||g||_inf).
/// Rg >= |g| pointwise holds exactly; the dual-norm and A1 certificates are
/// checked numerically and flagged in the result, never silently dropped.
RdFResult rubio_de_francia(const GridFunction& g, const ExponentFunction& p_dual,
                           double m_norm, double tol = 0.0);

}  // namespace varharm
