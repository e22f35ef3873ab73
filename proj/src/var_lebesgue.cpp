#include "varharm/var_lebesgue.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "varharm/csv.hpp"
#include "varharm/rng.hpp"

namespace varharm {

ExponentFunction::ExponentFunction(GridFunction values) : values_(std::move(values)) {
    p_minus_ = values_[0];
    p_plus_ = values_[0];
    for (double v : values_.values()) {
        if (!(v > 0.0)) throw std::invalid_argument("ExponentFunction: p(x) must be positive");
        p_minus_ = std::min(p_minus_, v);
        p_plus_ = std::max(p_plus_, v);
    }
}

ExponentFunction ExponentFunction::constant(const Grid& g, double p) {
    return ExponentFunction(GridFunction(g, std::vector<double>(g.size(), p)));
}

double modular(const GridFunction& f, const ExponentFunction& p, double lambda) {
    if (!(lambda > 0.0)) throw std::domain_error("modular: lambda must be positive");
    if (f.grid() != p.grid()) throw std::invalid_argument("modular: grid mismatch");
    std::vector<double> terms(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        double a = std::abs(f[i]) / lambda;
        terms[i] = a == 0.0 ? 0.0 : std::pow(a, p[i]);
    }
    double hn = f.grid().dim() == 1 ? f.grid().spacing()
                                    : f.grid().spacing() * f.grid().spacing();
    return hn * pairwise_sum(terms);
}

LuxemburgResult luxemburg_norm(const GridFunction& f, const ExponentFunction& p) {
    const double fmax = f.max_abs();
    if (fmax == 0.0) return {0.0, 0, 0.0, 0.0};
    const Grid& g = f.grid();
    double hi = fmax * std::pow(2.0 * g.half_width(), g.dim() / p.p_minus()) + 1.0;
    // modular(hi) <= 1 by construction; grow defensively if rounding says otherwise
    int guard = 0;
    while (modular(f, p, hi) > 1.0 && guard++ < 64) hi *= 2.0;
    double lo = hi * 1e-18;
    while (modular(f, p, lo) <= 1.0 && lo > 1e-290) lo *= 1e-6;
    int iters = 0;
    while (hi - lo > 1e-8 * hi && iters < 200) {
        double mid = 0.5 * (lo + hi);
        if (modular(f, p, mid) <= 1.0)
            hi = mid;
        else
            lo = mid;
        ++iters;
    }
    return {hi, iters, lo, hi};
}

ExponentFunction conjugate(const ExponentFunction& p) {
    if (!(p.p_minus() > 1.0))
        throw std::domain_error("conjugate: requires p- > 1");
    GridFunction q(p.grid());
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = p[i] / (p[i] - 1.0);
    return ExponentFunction(std::move(q));
}

ExponentFunction sobolev_shift(const ExponentFunction& p, double alpha) {
    const int n = p.grid().dim();
    if (alpha < 0.0 || alpha >= n)
        throw std::domain_error("sobolev_shift: requires 0 <= alpha < n");
    if (alpha == 0.0) return p;
    if (!(p.p_plus() < n / alpha))
        throw std::domain_error("sobolev_shift: requires p+ < n/alpha");
    GridFunction q(p.grid());
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = n * p[i] / (n - alpha * p[i]);
    return ExponentFunction(std::move(q));
}

double duality_lower_bound(const GridFunction& f, const ExponentFunction& p, int trials,
                           std::uint64_t seed) {
    ExponentFunction pc = conjugate(p);
    Rng rng(seed);
    double best = 0.0;
    for (int t = 0; t < trials; ++t) {
        GridFunction g = random_field(f.grid(), rng);
        double nu = luxemburg_norm(g, pc).norm;
        if (nu == 0.0) continue;
        std::vector<double> prod(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) prod[i] = std::abs(f[i] * g[i]) / nu;
        double hn = f.grid().dim() == 1 ? f.grid().spacing()
                                        : f.grid().spacing() * f.grid().spacing();
        best = std::max(best, hn * pairwise_sum(prod));
    }
    return best;
}

double log_holder_score(const ExponentFunction& p) {
    const Grid& g = p.grid();
    const int N = g.points_per_axis();
    const double h = g.spacing();
    const int reach = std::max(1, static_cast<int>(std::floor(0.5 / h)));
    double best = 0.0;
    auto score = [&](double dp, double dist) {
        double s = std::abs(dp) * std::log(std::numbers::e_v<double> + 1.0 / dist);
        if (s > best) best = s;
    };
    if (g.dim() == 1) {
        for (int i = 0; i < N; ++i)
            for (int d = 1; d <= reach && i + d < N; ++d) {
                double dist = d * h;
                if (dist > 0.5) break;
                score(p[g.index(i + d)] - p[g.index(i)], dist);
            }
        return best;
    }
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            double pij = p[g.index(i, j)];
            for (int di = 0; di <= reach; ++di)
                for (int dj = (di == 0 ? 1 : -reach); dj <= reach; ++dj) {
                    int i2 = i + di, j2 = j + dj;
                    if (i2 < 0 || i2 >= N || j2 < 0 || j2 >= N) continue;
                    double dist = h * std::sqrt(double(di) * di + double(dj) * dj);
                    if (dist > 0.5 || dist == 0.0) continue;
                    score(p[g.index(i2, j2)] - pij, dist);
                }
        }
    return best;
}

namespace {

double radial_builtin(const std::string& id, double r) {
    if (id == "bump") return 1.2 + 0.6 * std::exp(-r * r);
    if (id == "plateau") return 2.0 + std::min(1.0, r);
    if (id == "step") return r < 1.0 ? 1.5 : 2.5;
    throw std::invalid_argument("unknown radial exponent id: " + id);
}

double asym_builtin(const std::string& id, double x) {
    if (id == "drift") return 0.6 + 0.15 / (1.0 + std::exp(-x));
    if (id == "ramp") return 0.7 + 0.1 * std::atan(x);
    throw std::invalid_argument("unknown even-sym base id: " + id);
}

}  // namespace

ExponentFunction parse_exponent(const Grid& g, const std::string& spec) {
    auto colon = spec.find(':');
    if (spec.size() > 4 && spec.substr(spec.size() - 4) == ".csv") {
        GridFunction f = read_csv(spec);
        if (f.grid() != g) throw std::invalid_argument("exponent csv grid mismatch");
        return ExponentFunction(std::move(f));
    }
    if (colon == std::string::npos) throw std::invalid_argument("bad exponent spec: " + spec);
    std::string kind = spec.substr(0, colon), arg = spec.substr(colon + 1);
    if (kind == "const") return ExponentFunction::constant(g, std::stod(arg));
    if (kind == "radial")
        return ExponentFunction(GridFunction::from_fn(g, [&](std::array<double, 2> x) {
            double r = g.dim() == 1 ? std::abs(x[0]) : std::hypot(x[0], x[1]);
            return radial_builtin(arg, r);
        }));
    if (kind == "even-sym")
        // p_e(x) = p(x) + p(-x), symmetric under x -> -x by construction
        return ExponentFunction(GridFunction::from_fn(g, [&](std::array<double, 2> x) {
            double u = x[0] + (g.dim() == 2 ? 0.3 * x[1] : 0.0);
            return asym_builtin(arg, u) + asym_builtin(arg, -u);
        }));
    throw std::invalid_argument("bad exponent spec: " + spec);
}

}  // namespace varharm
