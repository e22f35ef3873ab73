#include "varharm/atoms.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "varharm/rng.hpp"

namespace varharm {

namespace {

std::vector<std::vector<int>> multi_indices(int dim, int max_degree) {
    std::vector<std::vector<int>> out;
    if (dim == 1) {
        for (int b = 0; b <= max_degree; ++b) out.push_back({b});
        return out;
    }
    for (int total = 0; total <= max_degree; ++total)
        for (int b1 = 0; b1 <= total; ++b1) out.push_back({b1, total - b1});
    return out;
}

double scaled_monomial(std::array<double, 2> x, const Ball& ball, const std::vector<int>& beta,
                       int dim) {
    double u0 = (x[0] - ball.center[0]) / ball.radius;
    double v = 1.0;
    for (int k = 0; k < beta[0]; ++k) v *= u0;
    if (dim == 2) {
        double u1 = (x[1] - ball.center[1]) / ball.radius;
        for (int k = 0; k < beta[1]; ++k) v *= u1;
    }
    return v;
}

}  // namespace

Atom make_atom(const Grid& g, const Ball& ball, const ExponentFunction& p, double q,
               int degree, std::uint64_t seed) {
    if (!(q > 1.0)) throw std::invalid_argument("make_atom: requires q > 1");
    if (degree < 0) throw std::invalid_argument("make_atom: degree must be >= 0");
    if (g != p.grid()) throw std::invalid_argument("make_atom: grid mismatch");

    std::vector<std::size_t> inside;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (ball.contains(g.point(i), g.dim())) inside.push_back(i);
    std::size_t needed = 1;
    for (int d = 0; d < g.dim(); ++d) needed *= static_cast<std::size_t>(degree + 1);
    if (inside.size() < needed + 1)
        throw std::invalid_argument("make_atom: ball holds too few grid points for the degree");

    // seeded bump * polynomial inside the ball
    Rng rng(seed);
    auto polys = multi_indices(g.dim(), degree + 1);
    std::vector<double> coef(polys.size());
    for (auto& c : coef) c = rng.uniform(-1.0, 1.0);
    GridFunction base(g);
    const double r2 = ball.radius * ball.radius;
    for (std::size_t idx : inside) {
        auto x = g.point(idx);
        double d2 = (x[0] - ball.center[0]) * (x[0] - ball.center[0]);
        if (g.dim() == 2) d2 += (x[1] - ball.center[1]) * (x[1] - ball.center[1]);
        double u2 = d2 / r2;
        double bump = u2 < 1.0 ? std::exp(-1.0 / (1.0 - u2)) : 0.0;
        double poly = 0.0;
        for (std::size_t k = 0; k < polys.size(); ++k)
            poly += coef[k] * scaled_monomial(x, ball, polys[k], g.dim());
        base[idx] = bump * poly;
    }

    // project out ball-centered monomial moments through `degree`
    auto basis = multi_indices(g.dim(), degree);
    const int nb = static_cast<int>(basis.size());
    Eigen::MatrixXd G(nb, nb);
    Eigen::VectorXd rhs(nb);
    std::vector<std::vector<double>> mono(nb, std::vector<double>(inside.size()));
    for (int a = 0; a < nb; ++a)
        for (std::size_t k = 0; k < inside.size(); ++k)
            mono[a][k] = scaled_monomial(g.point(inside[k]), ball, basis[a], g.dim());
    for (int a = 0; a < nb; ++a) {
        for (int b = a; b < nb; ++b) {
            double s = 0.0;
            for (std::size_t k = 0; k < inside.size(); ++k) s += mono[a][k] * mono[b][k];
            G(a, b) = s;
            G(b, a) = s;
        }
        double s = 0.0;
        for (std::size_t k = 0; k < inside.size(); ++k) s += mono[a][k] * base[inside[k]];
        rhs(a) = s;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    const double ev_min = es.eigenvalues().minCoeff();
    const double ev_max = es.eigenvalues().maxCoeff();
    if (!(ev_min > 0.0) || ev_max / ev_min > 1e12)
        throw std::runtime_error(
            "make_atom: moment projection is ill-conditioned (ball too small or degree too high)");
    Eigen::VectorXd c = es.eigenvectors() *
                        (es.eigenvectors().transpose() * rhs).cwiseQuotient(es.eigenvalues());

    GridFunction raw(g);
    for (std::size_t k = 0; k < inside.size(); ++k) {
        double v = base[inside[k]];
        for (int a = 0; a < nb; ++a) v -= c(a) * mono[a][k];
        raw[inside[k]] = v;
    }
    if (raw.max_abs() <= 1e-14 * std::max(1.0, base.max_abs()))
        throw std::runtime_error("make_atom: degenerate seed (projection removed everything)");

    double chi = luxemburg_norm(indicator(g, ball), p).norm;
    std::vector<double> powq(inside.size());
    for (std::size_t k = 0; k < inside.size(); ++k)
        powq[k] = std::pow(std::abs(raw[inside[k]]), q);
    const double hn = g.dim() == 1 ? g.spacing() : g.spacing() * g.spacing();
    double qn = std::pow(hn * pairwise_sum(powq), 1.0 / q);
    double cap = std::pow(ball.volume(g.dim()), 1.0 / q) / chi;
    double scale = 0.9 * cap / qn;
    for (std::size_t idx : inside) raw[idx] *= scale;

    return Atom{std::move(raw), ball, q, degree, p, chi};
}

AtomReport validate_atom(const Atom& a) {
    const Grid& g = a.values.grid();
    AtomReport rep;
    // a1: support inside the ball
    rep.max_outside = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (!a.ball.contains(g.point(i), g.dim()))
            rep.max_outside = std::max(rep.max_outside, std::abs(a.values[i]));
    rep.support_ok = rep.max_outside <= 1e-12 * std::max(1.0, a.values.max_abs());

    // a2: ||a||_q <= |B|^{1/q} ||chi_B||^{-1}
    const double hn = g.dim() == 1 ? g.spacing() : g.spacing() * g.spacing();
    std::vector<double> powq(a.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i)
        powq[i] = std::pow(std::abs(a.values[i]), a.q_exponent);
    rep.q_norm = std::pow(hn * pairwise_sum(powq), 1.0 / a.q_exponent);
    rep.q_cap = std::pow(a.ball.volume(g.dim()), 1.0 / a.q_exponent) / a.chi_norm;
    rep.size_ok = rep.q_norm <= rep.q_cap * (1.0 + 1e-6);

    // a3: ball-centered monomial moments through the degree
    const double l1_scale = rep.q_norm *
        std::pow(a.ball.volume(g.dim()), 1.0 - 1.0 / a.q_exponent);
    rep.moments_ok = true;
    for (const auto& beta : multi_indices(g.dim(), a.moment_degree)) {
        std::vector<double> terms(a.values.size(), 0.0);
        for (std::size_t i = 0; i < a.values.size(); ++i)
            if (a.values[i] != 0.0)
                terms[i] = a.values[i] * scaled_monomial(g.point(i), a.ball, beta, g.dim());
        MomentCheck mc;
        mc.beta = beta;
        mc.residual = std::abs(hn * pairwise_sum(terms));
        mc.tolerance = 1e-8 * l1_scale;
        mc.ok = mc.residual <= mc.tolerance;
        rep.moments_ok = rep.moments_ok && mc.ok;
        rep.moments.push_back(std::move(mc));
    }

    // intermediate exponents inherit the size cap
    rep.holder_ok = true;
    for (double s : {1.5, 0.5 * (1.0 + a.q_exponent)}) {
        if (!(s > 1.0) || !(s < a.q_exponent)) continue;
        std::vector<double> pows(a.values.size());
        for (std::size_t i = 0; i < a.values.size(); ++i)
            pows[i] = std::pow(std::abs(a.values[i]), s);
        double ns = std::pow(hn * pairwise_sum(pows), 1.0 / s);
        double cap = std::pow(a.ball.volume(g.dim()), 1.0 / s) / a.chi_norm;
        rep.holder_s.push_back(s);
        rep.holder_ratio.push_back(ns / cap);
        rep.holder_ok = rep.holder_ok && ns <= cap * (1.0 + 1e-6);
    }
    return rep;
}

double finite_atomic_norm(const FiniteDecomposition& d, const ExponentFunction& p) {
    if (d.atoms.empty() || d.lambdas.size() != d.atoms.size())
        throw std::invalid_argument("finite_atomic_norm: malformed decomposition");
    const Grid& g = p.grid();
    GridFunction sum(g);
    for (std::size_t j = 0; j < d.atoms.size(); ++j) {
        if (!(d.lambdas[j] > 0.0))
            throw std::invalid_argument("finite_atomic_norm: lambdas must be positive");
        GridFunction chi = indicator(g, d.atoms[j].ball);
        double w = d.lambdas[j] / d.atoms[j].chi_norm;
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += w * chi[i];
    }
    return luxemburg_norm(sum, p).norm;
}

double weighted_hardy_norm(const GridFunction& f, double p0, const Weight& w,
                           const TestFunctionBank& bank) {
    if (!(p0 > 0.0)) throw std::domain_error("weighted_hardy_norm: requires p0 > 0");
    if (bank.profiles.empty()) throw std::invalid_argument("weighted_hardy_norm: empty bank");
    const Grid& g = f.grid();
    GridFunction mphi(g);
    for (double t : default_scales(g)) {
        GridFunction conv = scaled_convolution(f, bank.profiles.front(), t);
        for (std::size_t i = 0; i < mphi.size(); ++i)
            mphi[i] = std::max(mphi[i], std::abs(conv[i]));
    }
    std::vector<double> terms(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) terms[i] = std::pow(mphi[i], p0) * w[i];
    const double hn = g.dim() == 1 ? g.spacing() : g.spacing() * g.spacing();
    return std::pow(hn * pairwise_sum(terms), 1.0 / p0);
}

double weighted_finite_atomic_norm(const FiniteDecomposition& d, const ExponentFunction& p,
                                   double p0, const Weight& w) {
    if (!(p0 > 0.0)) throw std::domain_error("weighted_finite_atomic_norm: requires p0 > 0");
    if (d.atoms.empty() || d.lambdas.size() != d.atoms.size())
        throw std::invalid_argument("weighted_finite_atomic_norm: malformed decomposition");
    const Grid& g = p.grid();
    GridFunction sum(g);
    for (std::size_t j = 0; j < d.atoms.size(); ++j) {
        GridFunction chi = indicator(g, d.atoms[j].ball);
        double coef = std::pow(d.lambdas[j], p0) / std::pow(d.atoms[j].chi_norm, p0);
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += coef * chi[i];
    }
    std::vector<double> terms(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) terms[i] = sum[i] * w[i];
    const double hn = g.dim() == 1 ? g.spacing() : g.spacing() * g.spacing();
    return std::pow(hn * pairwise_sum(terms), 1.0 / p0);
}

}  // namespace varharm
