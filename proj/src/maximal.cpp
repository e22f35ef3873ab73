#include "varharm/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "varharm/detail/ball_sweep.hpp"
#include "varharm/rng.hpp"

namespace varharm {

BallFamily BallFamily::for_grid(const Grid& g) {
    const int N = g.points_per_axis();
    const double top = double(g.dim()) * double(N - 1) * double(N - 1);
    BallFamily fam;
    double rho2 = g.dim() == 1 ? 2.0 : 4.0;
    while (rho2 <= top) {
        fam.rho2.push_back(rho2);
        rho2 *= 2.0;
    }
    if (fam.rho2.empty() || fam.rho2.back() < top) fam.rho2.push_back(top);
    fam.validate(g);
    return fam;
}

BallFamily BallFamily::for_grid(const Grid& g, double r_min, double r_max, bool centered) {
    const double h = g.spacing();
    const int N = g.points_per_axis();
    const double top = double(g.dim()) * double(N - 1) * double(N - 1);
    double lo = std::max(g.dim() == 1 ? 2.0 : 4.0, (r_min / h) * (r_min / h));
    double hi = std::min(top, (r_max / h) * (r_max / h));
    BallFamily fam;
    fam.centered = centered;
    double rho2 = g.dim() == 1 ? 2.0 : 4.0;
    while (rho2 <= hi) {
        if (rho2 * 2.0 > lo) fam.rho2.push_back(rho2);  // first rung covers r_min
        rho2 *= 2.0;
    }
    if (hi == top && (fam.rho2.empty() || fam.rho2.back() < top)) fam.rho2.push_back(top);
    if (fam.rho2.empty()) throw std::invalid_argument("BallFamily: empty radius ladder");
    fam.validate(g);
    return fam;
}

std::vector<double> BallFamily::radii(const Grid& g) const {
    std::vector<double> r(rho2.size());
    for (std::size_t i = 0; i < rho2.size(); ++i) r[i] = g.spacing() * std::sqrt(rho2[i]);
    return r;
}

double BallFamily::r_min(const Grid& g) const { return g.spacing() * std::sqrt(rho2.front()); }
double BallFamily::r_max(const Grid& g) const { return g.spacing() * std::sqrt(rho2.back()); }

void BallFamily::validate(const Grid& g) const {
    if (rho2.empty()) throw std::invalid_argument("BallFamily: empty ladder");
    double prev = 0.0;
    for (double r2 : rho2) {
        if (!(r2 > prev)) throw std::invalid_argument("BallFamily: radii must increase");
        if (prev > 0.0 && r2 > 2.0 * prev * (1.0 + 1e-12))
            throw std::invalid_argument("BallFamily: radius ratio exceeds sqrt(2)");
        prev = r2;
    }
    if (rho2.front() < 1.0) throw std::invalid_argument("BallFamily: r_min below h");
    const int N = g.points_per_axis();
    if (rho2.back() > double(g.dim()) * N * N * (1.0 + 1e-12))
        throw std::invalid_argument("BallFamily: r_max beyond box diameter");
}

namespace {

double ball_volume_from_rho2(const Grid& g, double rho2) {
    const double h = g.spacing();
    if (g.dim() == 1) return 2.0 * (h * std::sqrt(rho2));
    return std::numbers::pi * ((h * h) * rho2);
}

}  // namespace

GridFunction fractional_maximal(const GridFunction& f, double alpha, const BallFamily& fam) {
    const Grid& g = f.grid();
    const int n = g.dim();
    if (alpha < 0.0 || alpha >= n)
        throw std::domain_error("fractional_maximal: requires 0 <= alpha < n");
    fam.validate(g);
    const double hn = n == 1 ? g.spacing() : g.spacing() * g.spacing();
    std::vector<double> absf(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) absf[i] = std::abs(f[i]);

    GridFunction out(g);
    if (alpha == 0.0 && fam.include_pointwise)
        for (std::size_t i = 0; i < f.size(); ++i) out[i] = absf[i];

    std::vector<double> vals(f.size());
    for (double rho2 : fam.rho2) {
        std::vector<double> S = detail::disk_sums(g, absf, rho2);
        const double vol = ball_volume_from_rho2(g, rho2);
        const double w = alpha == 0.0 ? 1.0 / vol : std::pow(vol, alpha / n - 1.0);
        for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = (S[i] * hn) * w;
        if (fam.centered) {
            for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], vals[i]);
        } else {
            std::vector<double> dil = detail::disk_filter_max(g, vals, rho2);
            for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], dil[i]);
        }
    }
    return out;
}

GridFunction hl_maximal(const GridFunction& f, const BallFamily& fam) {
    return fractional_maximal(f, 0.0, fam);
}

GridFunction centered_maximal(const GridFunction& f, const BallFamily& fam) {
    BallFamily c = fam;
    c.centered = true;
    return fractional_maximal(f, 0.0, c);
}

namespace {

// numeric seminorm certificate: finite differences up to order n_grand on a
// fine sampling of the support, sup over |a|,|b| <= n_grand of |x^a d^b phi|
double numeric_seminorm(const std::function<double(std::array<double, 2>, int)>& eval,
                        double support_radius, int dim, int n_grand) {
    const double R = support_radius * 1.25;
    if (dim == 1) {
        const int M = 4096;
        const double step = 2.0 * R / M;
        std::vector<std::vector<double>> d(n_grand + 1, std::vector<double>(M + 1));
        for (int i = 0; i <= M; ++i) d[0][i] = eval({-R + i * step, 0.0}, 1);
        for (int k = 1; k <= n_grand; ++k)
            for (int i = 0; i <= M; ++i) {
                int lo = std::max(0, i - 1), hi = std::min(M, i + 1);
                d[k][i] = (d[k - 1][hi] - d[k - 1][lo]) / ((hi - lo) * step);
            }
        double best = 0.0;
        for (int a = 0; a <= n_grand; ++a)
            for (int b = 0; b <= n_grand; ++b)
                for (int i = 0; i <= M; ++i) {
                    double x = -R + i * step;
                    best = std::max(best, std::abs(std::pow(std::abs(x), a) * d[b][i]));
                }
        return best;
    }
    const int M = 192;
    const double step = 2.0 * R / M;
    auto at = [&](const std::vector<double>& v, int i, int j) { return v[i * (M + 1) + j]; };
    // iterated axis differences: dx^{b1} dy^{b2}
    std::vector<std::vector<std::vector<double>>> d(
        n_grand + 1, std::vector<std::vector<double>>(n_grand + 1));
    d[0][0].resize((M + 1) * (M + 1));
    for (int i = 0; i <= M; ++i)
        for (int j = 0; j <= M; ++j)
            d[0][0][i * (M + 1) + j] = eval({-R + i * step, -R + j * step}, 2);
    for (int b1 = 0; b1 <= n_grand; ++b1)
        for (int b2 = 0; b2 <= n_grand - b1; ++b2) {
            if (b1 == 0 && b2 == 0) continue;
            auto& cur = d[b1][b2];
            cur.resize((M + 1) * (M + 1));
            const auto& prev = b2 > 0 ? d[b1][b2 - 1] : d[b1 - 1][0];
            for (int i = 0; i <= M; ++i)
                for (int j = 0; j <= M; ++j) {
                    int lo, hi;
                    if (b2 > 0) {
                        lo = std::max(0, j - 1), hi = std::min(M, j + 1);
                        cur[i * (M + 1) + j] =
                            (at(prev, i, hi) - at(prev, i, lo)) / ((hi - lo) * step);
                    } else {
                        lo = std::max(0, i - 1), hi = std::min(M, i + 1);
                        cur[i * (M + 1) + j] =
                            (at(prev, hi, j) - at(prev, lo, j)) / ((hi - lo) * step);
                    }
                }
        }
    double best = 0.0;
    for (int a1 = 0; a1 <= n_grand; ++a1)
        for (int a2 = 0; a2 <= n_grand - a1; ++a2)
            for (int b1 = 0; b1 <= n_grand; ++b1)
                for (int b2 = 0; b2 <= n_grand - b1; ++b2)
                    for (int i = 0; i <= M; ++i)
                        for (int j = 0; j <= M; ++j) {
                            double x = -R + i * step, y = -R + j * step;
                            double xa = std::pow(std::abs(x), a1) * std::pow(std::abs(y), a2);
                            best = std::max(best, std::abs(xa * d[b1][b2][i * (M + 1) + j]));
                        }
    return best;
}

double numeric_integral(const std::function<double(std::array<double, 2>, int)>& eval,
                        double support_radius, int dim) {
    const double R = support_radius * 1.01;
    if (dim == 1) {
        const int M = 1 << 16;
        const double step = 2.0 * R / M;
        double s = 0.0;
        for (int i = 0; i < M; ++i) s += eval({-R + (i + 0.5) * step, 0.0}, 1);
        return s * step;
    }
    const int M = 1024;
    const double step = 2.0 * R / M;
    double s = 0.0;
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j)
            s += eval({-R + (i + 0.5) * step, -R + (j + 0.5) * step}, 2);
    return s * step * step;
}

double mollifier(double r2) { return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0; }

TestFunctionBank build_bank(int dim) {
    TestFunctionBank bank;
    bank.dim = dim;
    auto r2of = [dim](std::array<double, 2> u) {
        return dim == 1 ? u[0] * u[0] : u[0] * u[0] + u[1] * u[1];
    };
    std::vector<TestFunction> raw;
    raw.push_back({"mollifier", 1.0,
                   [r2of](std::array<double, 2> u, int) { return mollifier(r2of(u)); }, 0, 0});
    raw.push_back({"poly-wide", 1.0,
                   [r2of](std::array<double, 2> u, int) {
                       double r2 = r2of(u);
                       return r2 < 1.0 ? std::pow(1.0 - r2, 6.0) : 0.0;
                   },
                   0, 0});
    raw.push_back({"poly-narrow", 0.5,
                   [r2of](std::array<double, 2> u, int) {
                       double r2 = 4.0 * r2of(u);
                       return r2 < 1.0 ? std::pow(1.0 - r2, 6.0) : 0.0;
                   },
                   0, 0});
    raw.push_back({"skew", 1.0,
                   [r2of](std::array<double, 2> u, int) {
                       return (1.0 + 0.5 * u[0]) * mollifier(r2of(u));
                   },
                   0, 0});
    raw.push_back({"annulus", 1.0,
                   [r2of](std::array<double, 2> u, int) {
                       double r = std::sqrt(r2of(u));
                       double t = 2.0 * r - 1.0;
                       return t * t < 1.0 ? std::exp(-1.0 / (1.0 - t * t)) : 0.0;
                   },
                   0, 0});
    for (auto& phi : raw) {
        double sem = numeric_seminorm(phi.eval, phi.support_radius, dim, bank.n_grand);
        double c = 1.0 / (sem * 1.02);
        auto base = phi.eval;
        phi.eval = [base, c](std::array<double, 2> u, int d) { return c * base(u, d); };
        phi.seminorm = numeric_seminorm(phi.eval, phi.support_radius, dim, bank.n_grand);
        phi.integral = numeric_integral(phi.eval, phi.support_radius, dim);
        if (phi.integral == 0.0)
            throw std::logic_error("bank profile must have nonzero integral");
        bank.profiles.push_back(phi);
    }
    return bank;
}

}  // namespace

const TestFunctionBank& TestFunctionBank::standard(int dim) {
    static const TestFunctionBank bank1 = build_bank(1);
    static const TestFunctionBank bank2 = build_bank(2);
    if (dim == 1) return bank1;
    if (dim == 2) return bank2;
    throw std::invalid_argument("TestFunctionBank: dim must be 1 or 2");
}

GridFunction scaled_convolution(const GridFunction& f, const TestFunction& phi, double t) {
    if (!(t > 0.0)) throw std::domain_error("scaled_convolution: scale must be positive");
    const Grid& g = f.grid();
    const int N = g.points_per_axis();
    const double h = g.spacing();
    const int m = std::min(N, static_cast<int>(std::ceil(t * phi.support_radius / h)) + 1);
    GridFunction out(g);
    if (g.dim() == 1) {
        std::vector<double> ker(2 * m + 1);
        for (int d = -m; d <= m; ++d) ker[d + m] = phi.eval({d * h / t, 0.0}, 1) / t;
        for (int i = 0; i < N; ++i) {
            double acc = 0.0;
            for (int d = std::max(-m, i - (N - 1)); d <= std::min(m, i); ++d)
                acc += ker[d + m] * f[i - d];
            out[i] = acc * h;
        }
        return out;
    }
    const double inv_t2 = 1.0 / (t * t);
    std::vector<double> ker((2 * m + 1) * (2 * m + 1));
    for (int d1 = -m; d1 <= m; ++d1)
        for (int d2 = -m; d2 <= m; ++d2)
            ker[(d1 + m) * (2 * m + 1) + (d2 + m)] =
                phi.eval({d1 * h / t, d2 * h / t}, 2) * inv_t2;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            double acc = 0.0;
            for (int d1 = std::max(-m, i - (N - 1)); d1 <= std::min(m, i); ++d1) {
                const double* krow = ker.data() + (d1 + m) * (2 * m + 1);
                const double* frow = f.values().data() + (i - d1) * static_cast<std::size_t>(N);
                for (int d2 = std::max(-m, j - (N - 1)); d2 <= std::min(m, j); ++d2)
                    acc += krow[d2 + m] * frow[j - d2];
            }
            out[g.index(i, j)] = acc * h * h;
        }
    return out;
}

GridFunction discrete_maximal(const GridFunction& f, const TestFunction& phi, int j_lo,
                              int j_hi) {
    if (j_lo > j_hi) throw std::domain_error("discrete_maximal: empty j range");
    GridFunction out(f.grid());
    for (int j = j_lo; j <= j_hi; ++j) {
        GridFunction conv = scaled_convolution(f, phi, std::ldexp(1.0, -j));
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = std::max(out[i], std::abs(conv[i]));
    }
    return out;
}

GridFunction grand_maximal(const GridFunction& f, const TestFunctionBank& bank,
                           const std::vector<double>& scales) {
    if (bank.profiles.empty()) throw std::invalid_argument("grand_maximal: empty bank");
    GridFunction out(f.grid());
    for (const auto& phi : bank.profiles)
        for (double t : scales) {
            GridFunction conv = scaled_convolution(f, phi, t);
            for (std::size_t i = 0; i < out.size(); ++i)
                out[i] = std::max(out[i], std::abs(conv[i]));
        }
    return out;
}

std::pair<int, int> dyadic_j_range(const Grid& g) {
    int j_lo = -static_cast<int>(std::ceil(std::log2(4.0 * g.half_width())));
    // kernels below t = 2h are not resolvable by the grid quadrature
    int j_hi = static_cast<int>(std::floor(std::log2(0.5 / g.spacing()) + 1e-9));
    return {j_lo, std::max(j_lo, j_hi)};
}

std::vector<double> dyadic_scales(const Grid& g) {
    auto [j_lo, j_hi] = dyadic_j_range(g);
    std::vector<double> t;
    for (int j = j_lo; j <= j_hi; ++j) t.push_back(std::ldexp(1.0, -j));
    std::sort(t.begin(), t.end());
    return t;
}

std::vector<double> default_scales(const Grid& g) {
    auto [j_lo, j_hi] = dyadic_j_range(g);
    std::vector<double> t;
    for (int j = j_lo; j <= j_hi; ++j) {
        t.push_back(std::ldexp(1.0, -j));
        t.push_back(std::ldexp(std::numbers::sqrt2, -j));
    }
    std::sort(t.begin(), t.end());
    return t;
}

double estimate_operator_norm(const ExponentFunction& p, int trials, std::uint64_t seed) {
    if (!(p.p_minus() > 1.0))
        throw std::domain_error("estimate_operator_norm: requires p- > 1");
    const Grid& g = p.grid();
    BallFamily fam = BallFamily::for_grid(g);
    Rng rng(seed);
    double best = 0.0;
    for (int t = 0; t < trials; ++t) {
        GridFunction f = random_field(g, rng);
        double nf = luxemburg_norm(f, p).norm;
        if (nf == 0.0) continue;
        double nm = luxemburg_norm(hl_maximal(f, fam), p).norm;
        best = std::max(best, nm / nf);
    }
    return best;
}

}  // namespace varharm
