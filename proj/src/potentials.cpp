#include "varharm/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "json.hpp"
#include "varharm/detail/ball_sweep.hpp"

namespace varharm {

OperatorSpec::OperatorSpec(double alpha, std::vector<OrthogonalMatrix> matrices,
                           std::vector<double> exponents)
    : alpha_(alpha), mats_(std::move(matrices)), exps_(std::move(exponents)) {
    if (mats_.empty()) throw std::invalid_argument("OperatorSpec: need at least one matrix");
    dim_ = mats_.front().dim();
    const int n = dim_;
    if (alpha_ < 0.0 || alpha_ >= n)
        throw std::invalid_argument("OperatorSpec: requires 0 <= alpha < n");
    if (exps_.size() != mats_.size())
        throw std::invalid_argument("OperatorSpec: one exponent per matrix");
    double sum = 0.0;
    for (double a : exps_) {
        if (!(a > 0.0) || a >= n)
            throw std::invalid_argument("OperatorSpec: kernel exponents must lie in (0, n)");
        sum += a;
    }
    if (std::abs(sum - (n - alpha_)) > 1e-12)
        throw std::invalid_argument("OperatorSpec: exponents must sum to n - alpha");
    for (std::size_t i = 0; i < mats_.size(); ++i) {
        if (mats_[i].dim() != n) throw std::invalid_argument("OperatorSpec: dim mismatch");
        for (std::size_t j = i + 1; j < mats_.size(); ++j) {
            double det;
            if (n == 1) {
                det = mats_[i].entry(0, 0) - mats_[j].entry(0, 0);
            } else {
                double d00 = mats_[i].entry(0, 0) - mats_[j].entry(0, 0);
                double d01 = mats_[i].entry(0, 1) - mats_[j].entry(0, 1);
                double d10 = mats_[i].entry(1, 0) - mats_[j].entry(1, 0);
                double d11 = mats_[i].entry(1, 1) - mats_[j].entry(1, 1);
                det = d00 * d11 - d01 * d10;
            }
            if (std::abs(det) <= 1e-10)
                throw std::invalid_argument("OperatorSpec: A_i - A_j must be invertible");
        }
    }
}

OperatorSpec OperatorSpec::riesz(int dim, double alpha) {
    if (!(alpha > 0.0))
        throw std::invalid_argument("OperatorSpec::riesz: requires alpha > 0");
    return OperatorSpec(alpha, {OrthogonalMatrix::identity(dim)},
                        {static_cast<double>(dim) - alpha});
}

OperatorSpec OperatorSpec::from_json_text(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    double alpha = j.at("alpha").get<double>();
    std::vector<double> exps = j.at("exponents").get<std::vector<double>>();
    std::vector<OrthogonalMatrix> mats;
    for (const auto& m : j.at("matrices")) {
        std::vector<double> entries = m.get<std::vector<double>>();
        int dim = entries.size() == 1 ? 1 : 2;
        if (entries.size() != 1 && entries.size() != 4)
            throw std::invalid_argument("OperatorSpec: matrices must be 1x1 or 2x2 row-major");
        mats.emplace_back(dim, std::move(entries));
    }
    if (j.contains("m") && j.at("m").get<int>() != static_cast<int>(mats.size()))
        throw std::invalid_argument("OperatorSpec: m does not match matrix count");
    return OperatorSpec(alpha, std::move(mats), std::move(exps));
}

std::string OperatorSpec::to_json_text() const {
    nlohmann::json j;
    j["alpha"] = alpha_;
    j["m"] = m();
    j["exponents"] = exps_;
    j["matrices"] = nlohmann::json::array();
    for (const auto& A : mats_) j["matrices"].push_back(A.row_major());
    return j.dump();
}

namespace {

// analytic integral of |u|^{-alpha} over a ball of the cell's volume,
// divided by the cell volume (the averaged singular factor)
double cell_avg_kernel(double alpha, int n, double h) {
    if (n == 1) {
        double rho = 0.5 * h;
        return 2.0 * std::pow(rho, 1.0 - alpha) / ((1.0 - alpha) * h);
    }
    double rho = h / std::sqrt(std::numbers::pi);
    return 2.0 * std::numbers::pi * std::pow(rho, 2.0 - alpha) / ((2.0 - alpha) * h * h);
}

std::vector<int> support_indices(const GridFunction& f) {
    std::vector<int> idx;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f[i] != 0.0) idx.push_back(static_cast<int>(i));
    return idx;
}

bool is_sign_1d(const OrthogonalMatrix& A, double& sign) {
    double a = A.entry(0, 0);
    if (std::abs(a - 1.0) <= 1e-12) {
        sign = 1.0;
        return true;
    }
    if (std::abs(a + 1.0) <= 1e-12) {
        sign = -1.0;
        return true;
    }
    return false;
}

// support points transformed by each kernel matrix, computed once per field
struct TransformedSupport {
    std::vector<int> idx;
    std::vector<std::array<double, 2>> points;  // m * idx.size(), factor-major

    TransformedSupport(const OperatorSpec& spec, const GridFunction& f)
        : idx(support_indices(f)) {
        points.reserve(static_cast<std::size_t>(spec.m()) * idx.size());
        for (int i = 0; i < spec.m(); ++i)
            for (int j : idx) points.push_back(spec.matrices()[i].apply(f.grid().point(j)));
    }
};

double general_point_value(const OperatorSpec& spec, const GridFunction& f,
                           const TransformedSupport& sup, std::array<double, 2> x) {
    const Grid& g = f.grid();
    const int n = g.dim();
    const double h = g.spacing();
    const std::size_t count = sup.idx.size();
    double acc = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
        double prod = f[sup.idx[j]];
        for (int i = 0; i < spec.m(); ++i) {
            const auto& Ay = sup.points[i * count + j];
            double dx = x[0] - Ay[0];
            double dy = n == 2 ? x[1] - Ay[1] : 0.0;
            double dist = n == 1 ? std::abs(dx) : std::sqrt(dx * dx + dy * dy);
            double a = spec.exponents()[i];
            prod *= dist < h ? cell_avg_kernel(a, n, h) : std::pow(dist, -a);
        }
        acc += prod;
    }
    double hn = n == 1 ? h : h * h;
    return acc * hn;
}

}  // namespace

GridFunction apply(const OperatorSpec& spec, const GridFunction& f) {
    const Grid& g = f.grid();
    if (spec.dim() != g.dim()) throw std::invalid_argument("apply: dimension mismatch");
    GridFunction out(g);
    const int N = g.points_per_axis();
    const double h = g.spacing();
    const double hn = g.dim() == 1 ? h : h * h;

    bool fast = g.dim() == 1;
    std::vector<double> signs(spec.m());
    if (fast)
        for (int i = 0; i < spec.m(); ++i) fast = fast && is_sign_1d(spec.matrices()[i], signs[i]);

    if (fast) {
        // |x_i - s y_j| lies on the lattice |d| h with d = i - j (s = +1)
        // or d = i + j + 1 - N (s = -1); tabulate each power once
        std::vector<int> idx = support_indices(f);
        std::vector<std::vector<double>> tab(spec.m(), std::vector<double>(2 * N + 1));
        for (int i = 0; i < spec.m(); ++i) {
            double a = spec.exponents()[i];
            tab[i][0] = cell_avg_kernel(a, 1, h);
            for (int d = 1; d <= 2 * N; ++d) tab[i][d] = std::pow(d * h, -a);
        }
        for (int xi = 0; xi < N; ++xi) {
            double acc = 0.0;
            for (int j : idx) {
                double prod = f[j];
                for (int i = 0; i < spec.m(); ++i) {
                    int d = signs[i] > 0.0 ? xi - j : xi + j + 1 - N;
                    prod *= tab[i][std::abs(d)];
                }
                acc += prod;
            }
            out[xi] = acc * hn;
        }
        return out;
    }
    TransformedSupport sup(spec, f);
    for (std::size_t k = 0; k < g.size(); ++k)
        out[k] = general_point_value(spec, f, sup, g.point(k));
    return out;
}

double apply_at(const OperatorSpec& spec, const GridFunction& f, std::array<double, 2> x) {
    const Grid& g = f.grid();
    if (spec.dim() != g.dim()) throw std::invalid_argument("apply_at: dimension mismatch");
    return general_point_value(spec, f, TransformedSupport(spec, f), x);
}

FarFieldReport far_field_check(const OperatorSpec& spec, const Atom& a,
                               const std::vector<double>& radii, int cond1_k) {
    const Grid& g = a.values.grid();
    const int n = g.dim();
    const double L = g.half_width();
    const double r = a.ball.radius;
    const int d = a.moment_degree;
    FarFieldReport rep;
    rep.predicted_slope = -(n - spec.alpha() + d + 1);
    rep.cond1_k = cond1_k >= 0
                      ? cond1_k
                      : std::max(0, (d - 3 - static_cast<int>(std::floor(spec.alpha())) - n) / 2);

    std::vector<std::array<double, 2>> dirs;
    if (n == 1) {
        dirs = {{1.0, 0.0}, {-1.0, 0.0}};
    } else {
        for (int t = 0; t < 8; ++t) {
            double th = 2.0 * std::numbers::pi * t / 8.0 + 0.2;
            dirs.push_back({std::cos(th), std::sin(th)});
        }
    }

    std::vector<std::array<double, 2>> centers;
    for (const auto& A : spec.matrices()) centers.push_back(A.apply(a.ball.center));

    GridFunction abs_a(g);
    for (std::size_t i = 0; i < g.size(); ++i) abs_a[i] = std::abs(a.values[i]);

    for (int k = 0; k < spec.m(); ++k) {
        for (const auto& dir : dirs) {
            for (double rho : radii) {
                if (rho < 2.0 * r) continue;
                std::array<double, 2> x = {centers[k][0] + rho * dir[0],
                                           n == 2 ? centers[k][1] + rho * dir[1] : 0.0};
                if (std::abs(x[0]) > L || (n == 2 && std::abs(x[1]) > L)) continue;
                bool in_region = true;
                for (int i = 0; i < spec.m() && in_region; ++i) {
                    if (i == k) continue;
                    double di = std::hypot(x[0] - centers[i][0],
                                           n == 2 ? x[1] - centers[i][1] : 0.0);
                    in_region = rho <= di;
                }
                if (!in_region) continue;
                FarFieldSample s;
                s.k = k;
                s.radius = rho;
                s.value = std::abs(apply_at(spec, a.values, x));
                // cancellation floor: eps times the absolute kernel mass
                s.budget = 1e-12 * apply_at(spec, abs_a, x);
                s.used = rho >= 4.0 * r && s.value > 0.0 && s.budget <= 0.1 * s.value;
                rep.samples.push_back(s);
            }
        }
    }

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (const auto& s : rep.samples) {
        if (!s.used) continue;
        double lx = std::log(s.radius), ly = std::log(s.value);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
        rep.c_fit = std::max(rep.c_fit, s.value * a.chi_norm *
                                            std::pow(s.radius, n - spec.alpha() + d + 1) /
                                            std::pow(r, n + d + 1));
        rep.cond1_c_fit =
            std::max(rep.cond1_c_fit,
                     s.value * a.chi_norm * std::pow(r, -spec.alpha()) *
                         std::pow(1.0 + s.radius / r, 2 * n + 2 * rep.cond1_k + 3));
    }
    rep.samples_used = m;
    rep.budget_ok = m >= 4;
    if (rep.samples.empty())
        throw std::domain_error("far_field_check: no sample radius lies inside the box");
    if (m >= 2) rep.fitted_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return rep;
}

namespace {

// integral over {|x - x0| > R0} of (1 + u/r)^{-decay} (|x0| + u)^{|beta|},
// radial measure 2 du (n=1) or 2 pi u du (n=2); log-spaced Simpson
double tail_integral(double R0, double r, double decay, int beta_abs, double x0_norm, int n) {
    auto f = [&](double u) {
        double geom = n == 1 ? 2.0 : 2.0 * std::numbers::pi * u;
        return std::pow(1.0 + u / r, -decay) * std::pow(x0_norm + u, beta_abs) * geom;
    };
    const double lo = std::log(R0), hi = std::log(R0) + 40.0;
    const int M = 4000;  // even
    const double step = (hi - lo) / M;
    double s = 0.0;
    for (int i = 0; i <= M; ++i) {
        double v = lo + i * step;
        double u = std::exp(v);
        double w = (i == 0 || i == M) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        s += w * f(u) * u;  // du = u dv
    }
    return s * step / 3.0;
}

}  // namespace

MomentReport riesz_moment_check(double alpha, const Atom& a, int max_degree) {
    const Grid& g = a.values.grid();
    const int n = g.dim();
    if (!(alpha > 0.0) || alpha >= n)
        throw std::domain_error("riesz_moment_check: requires 0 < alpha < n");
    const int required = 2 * max_degree + 3 + static_cast<int>(std::floor(alpha)) + n;
    if (a.moment_degree < required)
        throw std::invalid_argument("riesz_moment_check: atom moment degree below " +
                                    std::to_string(required));
    OperatorSpec spec = OperatorSpec::riesz(n, alpha);
    GridFunction Ta = apply(spec, a.values);

    MomentReport rep;
    rep.max_degree = max_degree;
    const int k = max_degree;
    const double decay = 2 * n + 2 * k + 3;
    const double r = a.ball.radius;

    // cond1 constant from the computed far field on the grid
    for (std::size_t i = 0; i < g.size(); ++i) {
        auto x = g.point(i);
        double rho = std::hypot(x[0] - a.ball.center[0],
                                n == 2 ? x[1] - a.ball.center[1] : 0.0);
        if (rho < 4.0 * r) continue;
        rep.cond1_c_fit =
            std::max(rep.cond1_c_fit, std::abs(Ta[i]) * a.chi_norm * std::pow(r, -alpha) *
                                          std::pow(1.0 + rho / r, decay));
    }

    double R0 = g.half_width() - std::abs(a.ball.center[0]);
    double x0_norm = std::abs(a.ball.center[0]);
    if (n == 2) {
        R0 = std::min(R0, g.half_width() - std::abs(a.ball.center[1]));
        x0_norm = std::hypot(a.ball.center[0], a.ball.center[1]);
    }
    const double hn = n == 1 ? g.spacing() : g.spacing() * g.spacing();

    std::vector<std::vector<int>> betas;
    if (n == 1)
        for (int b = 0; b <= max_degree; ++b) betas.push_back({b});
    else
        for (int t = 0; t <= max_degree; ++t)
            for (int b1 = 0; b1 <= t; ++b1) betas.push_back({b1, t - b1});

    for (const auto& beta : betas) {
        auto xpow = [&](std::array<double, 2> x) {
            double v = 1.0;
            for (int c = 0; c < beta[0]; ++c) v *= x[0];
            if (n == 2)
                for (int c = 0; c < beta[1]; ++c) v *= x[1];
            return v;
        };
        std::vector<double> terms(g.size()), absterms(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            double xb = xpow(g.point(i));
            terms[i] = xb * Ta[i];
            absterms[i] = std::abs(terms[i]);
        }
        MomentRow row;
        row.beta = beta;
        row.value = hn * pairwise_sum(terms);
        row.scale = hn * pairwise_sum(absterms);
        // rounding floor of the cancelling sums (outer sum and each T a value)
        row.quad_budget = 1e-12 * row.scale;
        int babs = beta[0] + (n == 2 ? beta[1] : 0);
        row.tail_budget = rep.cond1_c_fit * std::pow(r, alpha) / a.chi_norm *
                          tail_integral(R0, r, decay, babs, x0_norm, n);
        double budget = row.quad_budget + row.tail_budget;
        if (budget > 0.5 * std::max(row.scale, 1e-300)) {
            row.verdict = "inconclusive";
            rep.any_inconclusive = true;
        } else if (std::abs(row.value) <= budget) {
            row.verdict = "pass";
        } else {
            row.verdict = "fail";
            rep.all_pass = false;
        }
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

WeakTypeReport weak_type_check(const OperatorSpec& spec, const GridFunction& f,
                               const Weight& w, const std::vector<double>& lambdas) {
    const Grid& g = f.grid();
    const int n = g.dim();
    const double expo = double(n) / (n - spec.alpha());
    GridFunction Tf = apply(spec, f);

    WeakTypeReport rep;
    rep.a1_w = a1_constant(w, weights_default_family(g));

    double rhs_sum = 0.0;
    for (const auto& A : spec.matrices()) {
        Weight wi = act(w, A.transpose());  // w_{A^{-1}}(x) = w(A x)
        std::vector<double> terms(g.size());
        for (std::size_t i = 0; i < g.size(); ++i)
            terms[i] = std::abs(f[i]) * std::pow(wi[i], 1.0 / expo);
        const double hn = n == 1 ? g.spacing() : g.spacing() * g.spacing();
        rhs_sum += std::pow(hn * pairwise_sum(terms), expo);
    }

    double boundary_max = 0.0;
    const int N = g.points_per_axis();
    for (std::size_t i = 0; i < g.size(); ++i) {
        int i0 = static_cast<int>(i) / (n == 2 ? N : 1);
        int i1 = n == 2 ? static_cast<int>(i) % N : 0;
        bool edge = i0 == 0 || i0 == N - 1 || (n == 2 && (i1 == 0 || i1 == N - 1));
        if (n == 1) edge = i == 0 || i + 1 == g.size();
        if (edge) boundary_max = std::max(boundary_max, std::abs(Tf[i]));
    }

    const double hn = n == 1 ? g.spacing() : g.spacing() * g.spacing();
    for (double lam : lambdas) {
        std::vector<double> masked;
        for (std::size_t i = 0; i < g.size(); ++i)
            if (std::abs(Tf[i]) >= lam) masked.push_back(w[i]);
        WeakTypeRow row;
        row.lambda = lam;
        row.lhs = hn * pairwise_sum(masked);
        row.bound = std::pow(lam, -expo) * rhs_sum;
        row.ratio = row.bound > 0.0 ? row.lhs / row.bound : 0.0;
        row.truncated = lam <= boundary_max;
        rep.c_fit = std::max(rep.c_fit, row.ratio);
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace varharm
