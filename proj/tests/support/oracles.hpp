#pragma once

// Brute-force reference implementations, kept deliberately independent of the
// library's prefix-sum / dilation machinery. Only usable at small N.

#include <cmath>
#include <vector>

#include "varharm/grid.hpp"
#include "varharm/maximal.hpp"

namespace oracle {

using namespace varharm;

inline double ball_volume(const Grid& g, double rho2) {
    double r = g.spacing() * std::sqrt(rho2);
    return g.dim() == 1 ? 2.0 * r : std::numbers::pi * r * r;
}

inline long cell_dist2(const Grid& g, std::size_t a, std::size_t b) {
    const int N = g.points_per_axis();
    if (g.dim() == 1) {
        long d = long(a) - long(b);
        return d * d;
    }
    long d0 = long(a) / N - long(b) / N;
    long d1 = long(a) % N - long(b) % N;
    return d0 * d0 + d1 * d1;
}

// direct sup over (center, rung) pairs
inline GridFunction brute_maximal(const GridFunction& f, double alpha, const BallFamily& fam,
                                  bool centered) {
    const Grid& g = f.grid();
    const double hn = g.dim() == 1 ? g.spacing() : g.spacing() * g.spacing();
    GridFunction out(g);
    for (std::size_t x = 0; x < g.size(); ++x) {
        double best = (alpha == 0.0 && fam.include_pointwise) ? std::abs(f[x]) : 0.0;
        for (double rho2 : fam.rho2) {
            for (std::size_t c = 0; c < g.size(); ++c) {
                if (centered && c != x) continue;
                if (double(cell_dist2(g, x, c)) > rho2) continue;
                double sum = 0.0;
                for (std::size_t y = 0; y < g.size(); ++y)
                    if (double(cell_dist2(g, y, c)) <= rho2) sum += std::abs(f[y]);
                double vol = ball_volume(g, rho2);
                double w = alpha == 0.0 ? 1.0 / vol : std::pow(vol, alpha / g.dim() - 1.0);
                best = std::max(best, (sum * hn) * w);
            }
        }
        out[x] = best;
    }
    return out;
}

}  // namespace oracle
