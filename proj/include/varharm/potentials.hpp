#pragma once

#include <string>
#include <vector>

#include "varharm/atoms.hpp"
#include "varharm/grid.hpp"
#include "varharm/weights.hpp"

namespace varharm {

/// T f(x) = integral prod_i |x - A_i y|^{-alpha_i} f(y) dy with orthogonal
/// A_i, sum alpha_i = n - alpha, each alpha_i in (0, n), and A_i - A_j
/// invertible for i != j. m = 1, A = I, alpha_1 = n - alpha is the Riesz
/// potential I_alpha.
class OperatorSpec {
public:
    OperatorSpec(double alpha, std::vector<OrthogonalMatrix> matrices,
                 std::vector<double> exponents);

    static OperatorSpec riesz(int dim, double alpha);
    static OperatorSpec from_json_text(const std::string& text);
    std::string to_json_text() const;

    int dim() const { return dim_; }
    double alpha() const { return alpha_; }
    int m() const { return static_cast<int>(mats_.size()); }
    const std::vector<OrthogonalMatrix>& matrices() const { return mats_; }
    const std::vector<double>& exponents() const { return exps_; }

private:
    double alpha_;
    std::vector<OrthogonalMatrix> mats_;
    std::vector<double> exps_;
    int dim_;
};

/// Quadrature application on the grid. Cells where some |x - A_i y| < h use
/// the analytic integral of the radial kernel over a ball of the cell volume
/// in place of the midpoint value (exact for a single power factor).
GridFunction apply(const OperatorSpec& spec, const GridFunction& f);

/// Same quadrature at an arbitrary (possibly off-grid) point.
double apply_at(const OperatorSpec& spec, const GridFunction& f, std::array<double, 2> x);

struct FarFieldSample {
    int k = 0;             // index of the nearest kernel center A_k x0
    double radius = 0.0;   // |x - A_k x0|
    double value = 0.0;    // |T a(x)|
    double budget = 0.0;   // cancellation floor, eps * absolute kernel mass
    bool used = false;     // radius >= 4r and budget below 10% of the value
};

struct FarFieldReport {
    std::vector<FarFieldSample> samples;
    double fitted_slope = 0.0;
    double predicted_slope = 0.0;   // -(n - alpha + d + 1)
    double c_fit = 0.0;             // sup value * ||chi_B|| * rho^{-pred} / r^{n+d+1}
    double cond1_c_fit = 0.0;       // sup value * ||chi_B|| r^{-alpha} (1+rho/r)^{2n+2k+3}
    int cond1_k = 0;
    int samples_used = 0;
    bool budget_ok = false;         // enough clean samples for the fit
};

/// Decay of T a along rays from each kernel center inside its nearest-center
/// region; slope fitted on samples with radius >= 4r.
/// cond1_k < 0 derives k from the atom's moment degree.
FarFieldReport far_field_check(const OperatorSpec& spec, const Atom& a,
                               const std::vector<double>& radii, int cond1_k = -1);

struct MomentRow {
    std::vector<int> beta;
    double value = 0.0;
    double quad_budget = 0.0;
    double tail_budget = 0.0;
    double scale = 0.0;            // integral of |x^beta| |T a|, box part
    std::string verdict;           // pass / fail / inconclusive
};

struct MomentReport {
    int max_degree = 0;
    double cond1_c_fit = 0.0;
    std::vector<MomentRow> rows;
    bool all_pass = true;
    bool any_inconclusive = false;
};

/// Box moments of I_alpha a through max_degree with quadrature + truncation
/// budgets; the atom must carry 2*max_degree + 3 + floor(alpha) + n vanishing
/// moments.
MomentReport riesz_moment_check(double alpha, const Atom& a, int max_degree);

struct WeakTypeRow {
    double lambda = 0.0;
    double lhs = 0.0;      // w({ |Tf| >= lambda })
    double bound = 0.0;    // lambda^{-n/(n-alpha)} sum_i (integral |f| w_i^{(n-alpha)/n})^{n/(n-alpha)}
    double ratio = 0.0;
    bool truncated = false;  // level set may continue outside the box
};

struct WeakTypeReport {
    std::vector<WeakTypeRow> rows;
    double c_fit = 0.0;
    double a1_w = 0.0;
};

WeakTypeReport weak_type_check(const OperatorSpec& spec, const GridFunction& f,
                               const Weight& w, const std::vector<double>& lambdas);

}  // namespace varharm
