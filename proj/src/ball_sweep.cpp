#include "varharm/detail/ball_sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace varharm::detail {

int int_reach(double rho2) {
    if (rho2 < 0.0) return -1;
    int k = static_cast<int>(std::floor(std::sqrt(rho2)));
    while (double(k + 1) * (k + 1) <= rho2) ++k;
    while (k > 0 && double(k) * k > rho2) --k;
    return k;
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kPosInf = std::numeric_limits<double>::infinity();

template <bool Max>
void sliding_extreme(const double* in, double* out, int n, int k) {
    const double empty = Max ? kNegInf : kPosInf;
    auto better = [](double a, double b) { return Max ? (a > b ? a : b) : (a < b ? a : b); };
    if (k <= 0) {
        std::copy(in, in + n, out);
        return;
    }
    const int w = 2 * k + 1;
    // block prefix maxima F and suffix maxima G (van Herk / Gil-Werman)
    std::vector<double> F(n), G(n);
    for (int bs = 0; bs < n; bs += w) {
        int be = std::min(bs + w, n);
        F[bs] = in[bs];
        for (int i = bs + 1; i < be; ++i) F[i] = better(F[i - 1], in[i]);
        G[be - 1] = in[be - 1];
        for (int i = be - 2; i >= bs; --i) G[i] = better(G[i + 1], in[i]);
    }
    for (int i = 0; i < n; ++i) {
        int a = i - k, b = i + k;
        double lo = a < 0 ? empty : G[a];
        double hi = b >= n ? empty : F[b];
        double v = better(lo, hi);
        if (a < 0 && b >= n) {
            v = in[0];
            for (int j = 1; j < n; ++j) v = better(v, in[j]);
        }
        out[i] = v;
    }
}

}  // namespace

void sliding_max(const double* in, double* out, int n, int k) {
    sliding_extreme<true>(in, out, n, k);
}

void sliding_min(const double* in, double* out, int n, int k) {
    sliding_extreme<false>(in, out, n, k);
}

std::vector<double> disk_sums(const Grid& g, const std::vector<double>& field, double rho2) {
    const int N = g.points_per_axis();
    const int reach = int_reach(rho2);
    if (g.dim() == 1) {
        std::vector<double> P(N + 1, 0.0);
        for (int i = 0; i < N; ++i) P[i + 1] = P[i] + field[i];
        std::vector<double> out(N);
        for (int c = 0; c < N; ++c)
            out[c] = P[std::min(N, c + reach + 1)] - P[std::max(0, c - reach)];
        return out;
    }
    // row prefix sums, rows indexed by the first coordinate
    std::vector<double> P(static_cast<std::size_t>(N) * (N + 1), 0.0);
    for (int r = 0; r < N; ++r) {
        double* row = P.data() + static_cast<std::size_t>(r) * (N + 1);
        const double* frow = field.data() + static_cast<std::size_t>(r) * N;
        for (int j = 0; j < N; ++j) row[j + 1] = row[j] + frow[j];
    }
    std::vector<int> seg(reach + 1);
    for (int d = 0; d <= reach; ++d) seg[d] = int_reach(rho2 - double(d) * d);
    std::vector<double> out(g.size(), 0.0);
    for (int ci = 0; ci < N; ++ci) {
        for (int cj = 0; cj < N; ++cj) {
            double acc = 0.0;
            for (int dr = -reach; dr <= reach; ++dr) {
                int r = ci + dr;
                if (r < 0 || r >= N) continue;
                int s = seg[std::abs(dr)];
                const double* row = P.data() + static_cast<std::size_t>(r) * (N + 1);
                acc += row[std::min(N, cj + s + 1)] - row[std::max(0, cj - s)];
            }
            out[static_cast<std::size_t>(ci) * N + cj] = acc;
        }
    }
    return out;
}

std::vector<double> disk_counts(const Grid& g, double rho2) {
    std::vector<double> ones(g.size(), 1.0);
    return disk_sums(g, ones, rho2);
}

namespace {

template <bool Max>
std::vector<double> disk_filter(const Grid& g, const std::vector<double>& vals, double rho2) {
    const int N = g.points_per_axis();
    const int reach = int_reach(rho2);
    if (g.dim() == 1) {
        std::vector<double> out(N);
        if (Max)
            sliding_max(vals.data(), out.data(), N, reach);
        else
            sliding_min(vals.data(), out.data(), N, reach);
        return out;
    }
    const double empty = Max ? kNegInf : kPosInf;
    auto better = [](double a, double b) { return Max ? (a > b ? a : b) : (a < b ? a : b); };
    std::vector<double> out(g.size(), empty);
    // group row offsets by their segment half-width
    std::map<int, std::vector<int>> by_seg;
    for (int d = 0; d <= reach; ++d) by_seg[int_reach(rho2 - double(d) * d)].push_back(d);
    std::vector<double> slid(g.size());
    for (const auto& [s, offsets] : by_seg) {
        for (int r = 0; r < N; ++r) {
            const double* in = vals.data() + static_cast<std::size_t>(r) * N;
            double* o = slid.data() + static_cast<std::size_t>(r) * N;
            if (Max)
                sliding_max(in, o, N, s);
            else
                sliding_min(in, o, N, s);
        }
        for (int d : offsets) {
            for (int i = 0; i < N; ++i) {
                for (int sgn = (d == 0 ? 1 : -1); sgn <= 1; sgn += 2) {
                    int r = i + sgn * d;
                    if (r < 0 || r >= N) continue;
                    const double* srow = slid.data() + static_cast<std::size_t>(r) * N;
                    double* orow = out.data() + static_cast<std::size_t>(i) * N;
                    for (int j = 0; j < N; ++j) orow[j] = better(orow[j], srow[j]);
                    if (d == 0) break;
                }
            }
        }
    }
    return out;
}

}  // namespace

std::vector<double> disk_filter_max(const Grid& g, const std::vector<double>& vals, double rho2) {
    return disk_filter<true>(g, vals, rho2);
}

std::vector<double> disk_filter_min(const Grid& g, const std::vector<double>& vals, double rho2) {
    return disk_filter<false>(g, vals, rho2);
}

}  // namespace varharm::detail
