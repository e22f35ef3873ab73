#include "varharm/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "varharm/detail/ball_sweep.hpp"

namespace varharm {

Weight::Weight(GridFunction values) : values_(std::move(values)) {
    for (double v : values_.values())
        if (!(v > 0.0)) throw std::invalid_argument("Weight: values must be strictly positive");
}

Weight Weight::floored(GridFunction values, double floor) {
    for (double& v : values.values()) v = std::max(v, floor);
    return Weight(std::move(values));
}

Weight Weight::pow(double r) const {
    GridFunction out(grid());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::pow(values_[i], r);
    return Weight(std::move(out));
}

double Weight::total(const std::optional<Ball>& region) const {
    return integrate(values_, region);
}

BallFamily weights_default_family(const Grid& g) {
    // balls must fit inside the box, so cap the ladder at L/2
    return BallFamily::for_grid(g, g.half_width() / 16.0, g.half_width() / 2.0);
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<double> transform(const GridFunction& w, double expo) {
    std::vector<double> out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        out[i] = expo == 1.0 ? w[i] : std::pow(w[i], expo);
    return out;
}

// Only balls wholly inside the box enter the sups: clipped balls are not
// balls, and their truncated averages would distort every constant near the
// boundary. Centers at least reach cells away from each edge qualify.
bool center_valid(const Grid& g, std::size_t c, int reach) {
    const int N = g.points_per_axis();
    if (g.dim() == 1) {
        int i = static_cast<int>(c);
        return i >= reach && i < N - reach;
    }
    int i = static_cast<int>(c) / N, j = static_cast<int>(c) % N;
    return i >= reach && i < N - reach && j >= reach && j < N - reach;
}

// counting-measure means over inside balls; invalid centers get -inf
std::vector<double> counting_means(const Grid& g, const std::vector<double>& field,
                                   double rho2) {
    const int reach = detail::int_reach(rho2);
    std::vector<double> S = detail::disk_sums(g, field, rho2);
    std::vector<double> C = detail::disk_counts(g, rho2);
    for (std::size_t i = 0; i < S.size(); ++i)
        S[i] = center_valid(g, i, reach) ? S[i] / C[i] : kNegInf;
    return S;
}

bool any_valid(const Grid& g, double rho2) {
    const int reach = detail::int_reach(rho2);
    return 2 * reach < g.points_per_axis();
}

}  // namespace

double a1_constant(const Weight& w, const BallFamily& fam) {
    const Grid& g = w.grid();
    fam.validate(g);
    const auto& wf = w.values().values();
    // M-form: counting-measure uncentered maximal of w against w itself
    std::vector<double> Mw(wf);  // pointwise rung: M w >= w
    for (double rho2 : fam.rho2) {
        if (!any_valid(g, rho2)) continue;
        std::vector<double> mean = counting_means(g, wf, rho2);
        std::vector<double> dil = detail::disk_filter_max(g, mean, rho2);
        for (std::size_t i = 0; i < Mw.size(); ++i) Mw[i] = std::max(Mw[i], dil[i]);
    }
    double best = 0.0;
    for (std::size_t i = 0; i < Mw.size(); ++i) best = std::max(best, Mw[i] / wf[i]);
    // ball form: avg_B w <= C min_B w
    for (double rho2 : fam.rho2) {
        if (!any_valid(g, rho2)) continue;
        const int reach = detail::int_reach(rho2);
        std::vector<double> mean = counting_means(g, wf, rho2);
        std::vector<double> mn = detail::disk_filter_min(g, wf, rho2);
        for (std::size_t i = 0; i < mean.size(); ++i)
            if (center_valid(g, i, reach)) best = std::max(best, mean[i] / mn[i]);
    }
    return best;
}

double ap_constant(const Weight& w, double p, const BallFamily& fam) {
    if (!(p > 1.0)) throw std::domain_error("ap_constant: requires p > 1");
    const Grid& g = w.grid();
    fam.validate(g);
    std::vector<double> neg = transform(w.values(), -1.0 / (p - 1.0));
    double best = 0.0;
    for (double rho2 : fam.rho2) {
        if (!any_valid(g, rho2)) continue;
        const int reach = detail::int_reach(rho2);
        std::vector<double> m1 = counting_means(g, w.values().values(), rho2);
        std::vector<double> m2 = counting_means(g, neg, rho2);
        for (std::size_t i = 0; i < m1.size(); ++i)
            if (center_valid(g, i, reach))
                best = std::max(best, m1[i] * std::pow(m2[i], p - 1.0));
    }
    return best;
}

double apq_constant(const Weight& w, double p, double q, const BallFamily& fam) {
    if (p > q) throw std::domain_error("apq_constant: requires p <= q");
    if (!(p >= 1.0) || !(q < std::numeric_limits<double>::infinity()))
        throw std::domain_error("apq_constant: requires 1 <= p <= q < inf");
    const Grid& g = w.grid();
    fam.validate(g);
    std::vector<double> wq = transform(w.values(), q);
    double best = 0.0;
    if (p == 1.0) {
        for (double rho2 : fam.rho2) {
            if (!any_valid(g, rho2)) continue;
            const int reach = detail::int_reach(rho2);
            std::vector<double> mq = counting_means(g, wq, rho2);
            std::vector<double> mn = detail::disk_filter_min(g, w.values().values(), rho2);
            for (std::size_t i = 0; i < mq.size(); ++i)
                if (center_valid(g, i, reach))
                    best = std::max(best, std::pow(mq[i], 1.0 / q) / mn[i]);
        }
        return best;
    }
    const double pc = p / (p - 1.0);
    std::vector<double> wp = transform(w.values(), pc);
    for (double rho2 : fam.rho2) {
        if (!any_valid(g, rho2)) continue;
        const int reach = detail::int_reach(rho2);
        std::vector<double> mq = counting_means(g, wq, rho2);
        std::vector<double> mp = counting_means(g, wp, rho2);
        for (std::size_t i = 0; i < mq.size(); ++i)
            if (center_valid(g, i, reach))
                best = std::max(best, std::pow(mq[i], 1.0 / q) * std::pow(mp[i], 1.0 / pc));
    }
    return best;
}

double rh_constant(const Weight& w, double s, const BallFamily& fam) {
    if (!(s > 1.0)) throw std::domain_error("rh_constant: requires s > 1");
    const Grid& g = w.grid();
    fam.validate(g);
    std::vector<double> ws = transform(w.values(), s);
    double best = 0.0;
    for (double rho2 : fam.rho2) {
        if (!any_valid(g, rho2)) continue;
        const int reach = detail::int_reach(rho2);
        std::vector<double> ms = counting_means(g, ws, rho2);
        std::vector<double> m1 = counting_means(g, w.values().values(), rho2);
        for (std::size_t i = 0; i < ms.size(); ++i)
            if (center_valid(g, i, reach))
                best = std::max(best, std::pow(ms[i], 1.0 / s) / m1[i]);
    }
    return best;
}

namespace {

// weights are extended by their boundary values, not by zero: a zero
// extension would poison every ball average after an orthogonal action
double interpolate_clamped(const GridFunction& f, std::array<double, 2> x) {
    const Grid& g = f.grid();
    const int N = g.points_per_axis();
    const double h = g.spacing();
    const double L = g.half_width();
    auto clamp_idx = [N](int i) { return std::min(N - 1, std::max(0, i)); };
    double t0 = (std::min(L, std::max(-L, x[0])) + L) / h - 0.5;
    int i0 = static_cast<int>(std::floor(t0));
    double w0 = t0 - i0;
    if (g.dim() == 1)
        return (1.0 - w0) * f[clamp_idx(i0)] + w0 * f[clamp_idx(i0 + 1)];
    double t1 = (std::min(L, std::max(-L, x[1])) + L) / h - 0.5;
    int i1 = static_cast<int>(std::floor(t1));
    double w1 = t1 - i1;
    auto at = [&](int a, int b) { return f[g.index(clamp_idx(a), clamp_idx(b))]; };
    return (1.0 - w0) * ((1.0 - w1) * at(i0, i1) + w1 * at(i0, i1 + 1)) +
           w0 * ((1.0 - w1) * at(i0 + 1, i1) + w1 * at(i0 + 1, i1 + 1));
}

}  // namespace

Weight act(const Weight& w, const OrthogonalMatrix& A) {
    const Grid& g = w.grid();
    if (A.dim() != g.dim()) throw std::invalid_argument("act: dimension mismatch");
    GridFunction out(g);
    for (std::size_t i = 0; i < g.size(); ++i)
        out[i] = interpolate_clamped(w.values(), A.apply_transpose(g.point(i)));
    return Weight::floored(std::move(out));
}

RdFResult rubio_de_francia(const GridFunction& g, const ExponentFunction& p_dual,
                           double m_norm, double tol) {
    const Grid& grid = g.grid();
    if (grid != p_dual.grid())
        throw std::invalid_argument("rubio_de_francia: grid mismatch");
    GridFunction g0(grid);
    for (std::size_t i = 0; i < g.size(); ++i) g0[i] = std::abs(g[i]);
    const double gmax = g0.max_abs();
    if (gmax == 0.0)
        throw std::invalid_argument("rubio_de_francia: g must not vanish identically");

    BallFamily fam = BallFamily::for_grid(grid);
    // sup-norm bound of the discretized M (volume-normalized averages can
    // exceed the sample sup by a bounded grid factor)
    GridFunction ones(grid);
    for (std::size_t i = 0; i < ones.size(); ++i) ones[i] = 1.0;
    const double kappa = std::max(1.0, hl_maximal(ones, fam).max_abs());
    if (!(2.0 * m_norm > kappa * (1.0 + 1e-9)))
        throw std::domain_error("rubio_de_francia: m_norm too small for a convergent tail");
    const double q_tail = kappa / (2.0 * m_norm);
    const double tol_eff = tol > 0.0 ? tol : 1e-8 * gmax;

    GridFunction acc = g0;   // i = 0 term
    GridFunction cur = g0;
    double coef = 1.0;
    int index = 0;
    double tail = gmax * q_tail / (1.0 - q_tail);
    const int max_iter = 300;
    for (int i = 1; i <= max_iter && tail >= tol_eff; ++i) {
        cur = hl_maximal(cur, fam);
        coef /= 2.0 * m_norm;
        for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += cur[k] * coef;
        index = i;
        tail = cur.max_abs() * coef * q_tail / (1.0 - q_tail);
    }

    double g_norm = luxemburg_norm(g0, p_dual).norm;
    double rg_norm = luxemburg_norm(acc, p_dual).norm;
    double ratio = g_norm > 0.0 ? rg_norm / g_norm : 0.0;

    RdFResult res{Weight::floored(std::move(acc)), index, m_norm, tail, ratio,
                  ratio <= 2.0 * (1.0 + 1e-6), 0.0, false};
    res.a1_value = a1_constant(res.rg, weights_default_family(grid));
    res.a1_ok = res.a1_value <= 2.0 * m_norm * 1.1;
    return res;
}

}  // namespace varharm
