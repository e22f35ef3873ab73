#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "varharm/atoms.hpp"
#include "varharm/grid.hpp"
#include "varharm/maximal.hpp"
#include "varharm/potentials.hpp"
#include "varharm/rng.hpp"

using namespace varharm;

namespace {

Grid grid1() { return Grid(1, 8.0, 1024); }

}  // namespace

TEST_CASE("constructed atoms validate") {
    Grid g = grid1();
    ExponentFunction p = ExponentFunction::constant(g, 1.3);
    for (int degree : {0, 2, 4}) {
        Atom a = make_atom(g, Ball(0.5, 1.0), p, 8.0, degree, 42 + degree);
        AtomReport rep = validate_atom(a);
        CHECK(rep.support_ok);
        CHECK(rep.size_ok);
        CHECK(rep.moments_ok);
        CHECK(rep.holder_ok);
        CHECK(rep.q_norm == doctest::Approx(0.9 * rep.q_cap).epsilon(1e-9));
    }
}

TEST_CASE("atom construction is deterministic per seed") {
    Grid g = grid1();
    ExponentFunction p = ExponentFunction::constant(g, 2.0);
    Atom a = make_atom(g, Ball(0.0, 0.5), p, 4.0, 1, 7);
    Atom b = make_atom(g, Ball(0.0, 0.5), p, 4.0, 1, 7);
    Atom c = make_atom(g, Ball(0.0, 0.5), p, 4.0, 1, 8);
    bool same = true, diff = false;
    for (std::size_t i = 0; i < g.size(); ++i) {
        same = same && a.values[i] == b.values[i];
        diff = diff || a.values[i] != c.values[i];
    }
    CHECK(same);
    CHECK(diff);
}

TEST_CASE("hand-built two-step atom") {
    Grid g = grid1();
    ExponentFunction p = ExponentFunction::constant(g, 2.0);
    Ball B(1.0, 1.0);
    double chi_norm = luxemburg_norm(indicator(g, B), p).norm;
    GridFunction base = GridFunction::from_fn(g, [](std::array<double, 2> x) {
        if (x[0] >= 0.0 && x[0] < 1.0) return 1.0;
        if (x[0] >= 1.0 && x[0] < 2.0) return -1.0;
        return 0.0;
    });
    double base_l2 = std::sqrt(integrate(GridFunction::from_fn(
        g, [&](std::array<double, 2> x) {
            double v = x[0] >= 0.0 && x[0] < 2.0 ? 1.0 : 0.0;
            return v;
        })));
    double c = 0.9 * std::pow(B.volume(1), 0.5) / (chi_norm * base_l2);
    GridFunction av(g);
    for (std::size_t i = 0; i < g.size(); ++i) av[i] = c * base[i];
    Atom a{std::move(av), B, 2.0, 0, p, chi_norm};
    CHECK(validate_atom(a).pass());
}

TEST_CASE("invalid atoms are reported") {
    Grid g = grid1();
    ExponentFunction p = ExponentFunction::constant(g, 2.0);
    Ball B(0.0, 1.0);
    double chi_norm = luxemburg_norm(indicator(g, B), p).norm;
    // chi_B has a nonzero mean: fails the moment condition
    Atom bad{indicator(g, B), B, 2.0, 0, p, chi_norm};
    AtomReport rep = validate_atom(bad);
    CHECK(!rep.moments_ok);
    // doubling a valid atom breaks the size cap
    Atom good = make_atom(g, B, p, 4.0, 0, 3);
    GridFunction doubled(g);
    for (std::size_t i = 0; i < g.size(); ++i) doubled[i] = 2.0 * good.values[i];
    Atom scaled{std::move(doubled), B, 4.0, 0, p, good.chi_norm};
    CHECK(!validate_atom(scaled).size_ok);
}

TEST_CASE("atom construction error paths") {
    Grid g = grid1();
    ExponentFunction p = ExponentFunction::constant(g, 2.0);
    // too few points in the ball for the requested degree
    CHECK_THROWS_AS(make_atom(g, Ball(0.0, 2.5 * g.spacing()), p, 4.0, 6, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_atom(g, Ball(0.0, 1.0), p, 1.0, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_atom(g, Ball(0.0, 1.0), p, 4.0, -1, 1), std::invalid_argument);
}

TEST_CASE("high-degree atoms carry the extra vanishing moments") {
    Grid g = grid1();
    ExponentFunction p = ExponentFunction::constant(g, 1.2);
    // the degree demanded of Riesz-ready atoms: 2k + 3 + floor(alpha) + n
    const int degree = 2 * 0 + 3 + 0 + 1;
    Atom a = make_atom(g, Ball(0.25, 1.0), p, 16.0, degree, 11);
    AtomReport rep = validate_atom(a);
    CHECK(rep.moments_ok);
    CHECK(rep.moments.size() == std::size_t(degree + 1));
}

TEST_CASE("chi_B norm closed form at constant exponent") {
    Grid g = grid1();
    // r = 1 is grid-aligned here, so the quadrature measure is exactly |B|
    Ball B(0.0, 1.0);
    for (double p0 : {0.7, 1.0, 2.0}) {
        ExponentFunction p = ExponentFunction::constant(g, p0);
        double nrm = luxemburg_norm(indicator(g, B), p).norm;
        CHECK(nrm == doctest::Approx(std::pow(B.volume(1), 1.0 / p0)).epsilon(1e-5));
    }
}

TEST_CASE("finite atomic norm") {
    Grid g = grid1();
    ExponentFunction p = ExponentFunction::constant(g, 1.7);
    Atom a = make_atom(g, Ball(0.0, 0.5), p, 4.0, 0, 1);
    FiniteDecomposition single{{1.0}, {a}};
    CHECK(finite_atomic_norm(single, p) == doctest::Approx(1.0).epsilon(1e-6));

    // two disjoint equal balls at p = 1: additivity gives exactly 2
    ExponentFunction p1 = ExponentFunction::constant(g, 1.0);
    Atom a1 = make_atom(g, Ball(-2.0, 0.5), p1, 4.0, 0, 2);
    Atom a2 = make_atom(g, Ball(2.0, 0.5), p1, 4.0, 0, 3);
    FiniteDecomposition two{{1.0, 1.0}, {a1, a2}};
    CHECK(finite_atomic_norm(two, p1) == doctest::Approx(2.0).epsilon(1e-6));

    // permutation invariance is exact
    FiniteDecomposition swapped{{1.0, 1.0}, {a2, a1}};
    CHECK(finite_atomic_norm(two, p1) == finite_atomic_norm(swapped, p1));

    // homogeneity under doubling all lambdas
    FiniteDecomposition doubled{{2.0, 2.0}, {a1, a2}};
    CHECK(finite_atomic_norm(doubled, p1) ==
          doctest::Approx(2.0 * finite_atomic_norm(two, p1)).epsilon(1e-8));
}

TEST_CASE("weighted hardy norm") {
    Grid g(1, 4.0, 256);
    const TestFunctionBank& bank = TestFunctionBank::standard(1);
    Weight w(GridFunction(g, std::vector<double>(g.size(), 1.0)));
    CHECK(weighted_hardy_norm(GridFunction(g), 1.0, w, bank) == 0.0);

    Rng rng(20);
    GridFunction f = random_field(g, rng);
    // w = 1, p0 = 1 reduces to the L1 norm of the single-profile maximal
    GridFunction mphi(g);
    for (double t : default_scales(g)) {
        GridFunction conv = scaled_convolution(f, bank.profiles.front(), t);
        for (std::size_t i = 0; i < g.size(); ++i)
            mphi[i] = std::max(mphi[i], std::abs(conv[i]));
    }
    CHECK(weighted_hardy_norm(f, 1.0, w, bank) ==
          doctest::Approx(integrate(mphi)).epsilon(1e-12));
}

TEST_CASE("weighted finite atomic norm") {
    Grid g = grid1();
    ExponentFunction p = ExponentFunction::constant(g, 1.4);
    Weight w(GridFunction(g, std::vector<double>(g.size(), 1.0)));
    Atom a = make_atom(g, Ball(0.0, 1.0), p, 4.0, 0, 4);
    FiniteDecomposition d{{1.0}, {a}};
    const double p0 = 0.8;
    double expected = std::pow(integrate(indicator(g, a.ball)), 1.0 / p0) / a.chi_norm;
    CHECK(weighted_finite_atomic_norm(d, p, p0, w) ==
          doctest::Approx(expected).epsilon(1e-9));

    // p0 = 1, w = 1, p = 1 coincides with the unweighted norm for single atoms
    ExponentFunction p_one = ExponentFunction::constant(g, 1.0);
    Atom a_one = make_atom(g, Ball(0.0, 1.0), p_one, 4.0, 0, 4);
    FiniteDecomposition d_one{{1.0}, {a_one}};
    CHECK(weighted_finite_atomic_norm(d_one, p_one, 1.0, w) ==
          doctest::Approx(finite_atomic_norm(d_one, p_one)).epsilon(1e-5));

    // monotone in the weight
    Weight w2(GridFunction(g, std::vector<double>(g.size(), 1.5)));
    CHECK(weighted_finite_atomic_norm(d, p, p0, w) <=
          weighted_finite_atomic_norm(d, p, p0, w2) + 1e-12);
}

TEST_CASE("hardy norm against the discrete maximal (comparability probe)") {
    Grid g(1, 8.0, 512);
    ExponentFunction p = ExponentFunction::constant(g, 1.2);
    const TestFunctionBank& bank = TestFunctionBank::standard(1);
    Weight w(GridFunction(g, std::vector<double>(g.size(), 1.0)));
    auto [j_lo, j_hi] = dyadic_j_range(g);
    const double q0 = 0.9;
    double c_fit = 0.0;
    for (int j = 0; j < 10; ++j) {
        Atom a = make_atom(g, Ball(0.2 * j - 1.0, 0.5), p, 8.0, 0, 100 + j);
        double lhs = weighted_hardy_norm(a.values, q0, w, bank);
        GridFunction md = discrete_maximal(a.values, bank.profiles.front(), j_lo, j_hi);
        std::vector<double> terms(g.size());
        for (std::size_t i = 0; i < g.size(); ++i)
            terms[i] = std::pow(md[i], q0) * w[i];
        double rhs = std::pow(g.spacing() * pairwise_sum(terms), 1.0 / q0);
        c_fit = std::max(c_fit, lhs / rhs);
    }
    CHECK(c_fit >= 1.0 - 1e-9);  // the Hardy side sups over more scales
    CHECK(c_fit < 10.0);
    MESSAGE("fitted comparability constant: ", c_fit);
}
