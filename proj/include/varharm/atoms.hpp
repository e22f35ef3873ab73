#pragma once

#include <cstdint>
#include <vector>

#include "varharm/grid.hpp"
#include "varharm/maximal.hpp"
#include "varharm/var_lebesgue.hpp"
#include "varharm/weights.hpp"

namespace varharm {

/// Function supported in a ball with an L^q size cap tied to ||chi_B||_{p(.)}
/// and vanishing moments through `moment_degree`.
struct Atom {
    GridFunction values;
    Ball ball;
    double q_exponent = 2.0;
    int moment_degree = 0;
    ExponentFunction p;
    double chi_norm = 0.0;  // ||chi_B||_{p(.)}, cached at construction
};

struct MomentCheck {
    std::vector<int> beta;  // multi-index
    double residual = 0.0;
    double tolerance = 0.0;
    bool ok = false;
};

struct AtomReport {
    bool support_ok = false;
    double max_outside = 0.0;       // largest |a| outside the ball
    bool size_ok = false;
    double q_norm = 0.0;
    double q_cap = 0.0;             // |B|^{1/q} ||chi_B||^{-1}
    bool moments_ok = false;
    std::vector<MomentCheck> moments;
    bool holder_ok = false;         // ||a||_s <= |B|^{1/s}/||chi_B|| spot checks
    std::vector<double> holder_s;
    std::vector<double> holder_ratio;
    bool pass() const { return support_ok && size_ok && moments_ok && holder_ok; }
};

/// Seeded bump-times-polynomial with all ball-centered monomial moments
/// through `degree` projected out (Gram solve in radius-scaled monomials),
/// rescaled to sit at 0.9 of the size cap.
Atom make_atom(const Grid& g, const Ball& ball, const ExponentFunction& p, double q,
               int degree, std::uint64_t seed);

AtomReport validate_atom(const Atom& a);

/// Finite decomposition sum lambda_j a_j with every atom individually valid.
struct FiniteDecomposition {
    std::vector<double> lambdas;
    std::vector<Atom> atoms;
};

/// || sum_j lambda_j chi_{B_j} / ||chi_{B_j}||_{p(.)} ||_{p(.)} for this
/// decomposition (no infimum search; theorem checks use it as an upper bound).
double finite_atomic_norm(const FiniteDecomposition& d, const ExponentFunction& p);

/// ( integral (M_phi f)^{p0} w )^{1/p0} with M_phi from the bank's first
/// profile over the default scale ladder.
double weighted_hardy_norm(const GridFunction& f, double p0, const Weight& w,
                           const TestFunctionBank& bank);

/// || sum_j lambda_j^{p0} chi_{B_j} ||chi_{B_j}||^{-p0} ||_{L^1(w)}^{1/p0}.
double weighted_finite_atomic_norm(const FiniteDecomposition& d, const ExponentFunction& p,
                                   double p0, const Weight& w);

}  // namespace varharm
