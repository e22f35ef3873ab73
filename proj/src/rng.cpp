#include "varharm/rng.hpp"

#include <cmath>
#include <numbers>

namespace varharm {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed) {
    std::uint64_t x = seed;
    for (auto& s : s_) s = splitmix64(x);
}

std::uint64_t Rng::next_u64() {
    std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

double Rng::uniform(double a, double b) { return a + (b - a) * uniform(); }

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double th = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(th);
    has_spare_ = true;
    return r * std::cos(th);
}

int Rng::uniform_int(int lo, int hi) {
    return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
}

Rng Rng::fork(std::uint64_t stream) const {
    return Rng(seed_ ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
}

GridFunction random_bumps(const Grid& g, Rng& rng, int k_min, int k_max, bool nonneg) {
    const int k = rng.uniform_int(k_min, k_max);
    const double L = g.half_width();
    GridFunction out(g);
    for (int b = 0; b < k; ++b) {
        std::array<double, 2> c = {rng.uniform(-0.7 * L, 0.7 * L),
                                   g.dim() == 2 ? rng.uniform(-0.7 * L, 0.7 * L) : 0.0};
        double sigma = rng.uniform(L / 32.0, L / 4.0);
        double amp = nonneg ? rng.uniform(0.2, 1.5) : rng.uniform(-1.5, 1.5);
        for (std::size_t i = 0; i < g.size(); ++i) {
            auto x = g.point(i);
            double d2 = (x[0] - c[0]) * (x[0] - c[0]);
            if (g.dim() == 2) d2 += (x[1] - c[1]) * (x[1] - c[1]);
            out[i] += amp * std::exp(-d2 / (2.0 * sigma * sigma));
        }
    }
    return out;
}

GridFunction random_field(const Grid& g, Rng& rng, bool nonneg) {
    GridFunction out = random_bumps(g, rng, 2, 6, nonneg);
    const double L = g.half_width();
    int n_ind = rng.uniform_int(0, 2);
    for (int b = 0; b < n_ind; ++b) {
        std::array<double, 2> c = {rng.uniform(-0.6 * L, 0.6 * L),
                                   g.dim() == 2 ? rng.uniform(-0.6 * L, 0.6 * L) : 0.0};
        double r = rng.uniform(2.5 * g.spacing(), L / 4.0);
        double amp = nonneg ? rng.uniform(0.2, 1.0) : rng.uniform(-1.0, 1.0);
        Ball ball(c, r);
        for (std::size_t i = 0; i < g.size(); ++i)
            if (ball.contains(g.point(i), g.dim())) out[i] += amp;
    }
    double freq = rng.uniform(0.5, 3.0) / L;
    double amp = rng.uniform(0.0, 0.3);
    double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    for (std::size_t i = 0; i < g.size(); ++i) {
        auto x = g.point(i);
        double osc = amp * std::sin(2.0 * std::numbers::pi * freq * x[0] + phase);
        out[i] += nonneg ? std::abs(osc) : osc;
    }
    return out;
}

}  // namespace varharm
