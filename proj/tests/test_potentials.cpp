#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "varharm/atoms.hpp"
#include "varharm/grid.hpp"
#include "varharm/potentials.hpp"
#include "varharm/rng.hpp"

using namespace varharm;

namespace {

OperatorSpec mirror_pair(double alpha) {
    double a = 0.5 * (1.0 - alpha);
    return OperatorSpec(alpha, {OrthogonalMatrix::scalar_1d(1.0),
                                OrthogonalMatrix::scalar_1d(-1.0)},
                        {a, a});
}

}  // namespace

TEST_CASE("operator spec validation") {
    CHECK_THROWS(OperatorSpec(0.5, {OrthogonalMatrix::identity(1)}, {0.4}));  // bad sum
    CHECK_THROWS(OperatorSpec(0.0, {OrthogonalMatrix::identity(1)}, {1.0})); // alpha_i = n
    CHECK_THROWS(OperatorSpec(0.0,
                              {OrthogonalMatrix::identity(1), OrthogonalMatrix::identity(1)},
                              {0.5, 0.5}));  // A_i - A_j singular
    CHECK_THROWS(OperatorSpec(1.2, {OrthogonalMatrix::identity(1)}, {-0.2}));
    OperatorSpec ok = OperatorSpec::riesz(1, 0.5);
    CHECK(ok.m() == 1);
    CHECK(ok.exponents()[0] == doctest::Approx(0.5));
}

TEST_CASE("operator spec json round trip") {
    OperatorSpec spec = mirror_pair(0.25);
    OperatorSpec back = OperatorSpec::from_json_text(spec.to_json_text());
    CHECK(back.alpha() == spec.alpha());
    CHECK(back.m() == 2);
    CHECK(back.matrices()[1].entry(0, 0) == -1.0);
    CHECK_THROWS(OperatorSpec::from_json_text(R"({"alpha":0.5,"m":3,"matrices":[[1]],"exponents":[0.5]})"));
}

TEST_CASE("riesz potential of an interval indicator at the origin") {
    // closed form: integral_{-1}^{1} |y|^{-1/2} dy = 4
    Grid g(1, 2.0, 2048);
    GridFunction chi = indicator(g, Ball(0.0, 1.0));
    OperatorSpec spec = OperatorSpec::riesz(1, 0.5);
    double v = apply_at(spec, chi, {0.0, 0.0});
    CHECK(std::abs(v - 4.0) <= 0.03 * 4.0);
}

TEST_CASE("two-factor kernel closed form: log 2") {
    // integral_1^2 |0-y|^{-1/2} |0+y|^{-1/2} dy = log 2
    Grid g(1, 4.0, 2048);
    GridFunction chi = indicator(g, Ball(1.5, 0.5));
    OperatorSpec spec = mirror_pair(0.0);
    double v = apply_at(spec, chi, {0.0, 0.0});
    CHECK(std::abs(v - std::numbers::ln2) <= 0.02 * std::numbers::ln2);
}

TEST_CASE("apply is linear and positivity preserving") {
    Grid g(1, 4.0, 256);
    Rng rng(21);
    GridFunction f = random_field(g, rng), h = random_field(g, rng);
    // keep compact support away from the boundary
    for (std::size_t i = 0; i < g.size(); ++i)
        if (std::abs(g.point(i)[0]) > 2.0) f[i] = h[i] = 0.0;
    OperatorSpec spec = OperatorSpec::riesz(1, 0.5);
    double a = 1.3, b = -2.1;
    GridFunction comb(g);
    for (std::size_t i = 0; i < g.size(); ++i) comb[i] = a * f[i] + b * h[i];
    GridFunction Tc = apply(spec, comb), Tf = apply(spec, f), Th = apply(spec, h);
    double scale = Tf.max_abs() + Th.max_abs();
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(std::abs(Tc[i] - (a * Tf[i] + b * Th[i])) <= 1e-10 * scale);

    GridFunction pos(g);
    for (std::size_t i = 0; i < g.size(); ++i) pos[i] = std::abs(f[i]);
    GridFunction Tp = apply(spec, pos);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(Tp[i] >= 0.0);
}

TEST_CASE("riesz and general-path application agree bitwise") {
    Grid g(1, 4.0, 512);
    GridFunction chi = indicator(g, Ball(0.25, 0.75));
    GridFunction a = apply(OperatorSpec::riesz(1, 0.5), chi);
    GridFunction b =
        apply(OperatorSpec(0.5, {OrthogonalMatrix::scalar_1d(1.0)}, {0.5}), chi);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("grid application matches the off-grid evaluator") {
    Grid g(1, 4.0, 256);
    GridFunction chi = indicator(g, Ball(0.0, 1.0));
    OperatorSpec spec = mirror_pair(0.25);
    GridFunction T = apply(spec, chi);
    for (std::size_t i : {std::size_t(10), g.size() / 2, g.size() - 7}) {
        double v = apply_at(spec, chi, g.point(i));
        CHECK(T[i] == doctest::Approx(v).epsilon(1e-12));
    }
}

TEST_CASE("mirror-symmetric kernel preserves evenness") {
    Grid g(1, 4.0, 512);
    GridFunction f = GridFunction::from_fn(g, [](std::array<double, 2> x) {
        return std::abs(x[0]) < 1.0 ? std::cos(x[0]) : 0.0;
    });
    OperatorSpec spec = mirror_pair(0.5);
    GridFunction T = apply(spec, f);
    const int N = g.points_per_axis();
    double scale = T.max_abs();
    for (int i = 0; i < N; ++i)
        CHECK(std::abs(T[i] - T[N - 1 - i]) <= 1e-10 * scale);
}

TEST_CASE("2-d riesz application is finite and decays") {
    Grid g(2, 2.0, 48);
    GridFunction chi = indicator(g, Ball(0.0, 0.0, 0.5));
    OperatorSpec spec = OperatorSpec::riesz(2, 0.8);
    GridFunction T = apply(spec, chi);
    double center = apply_at(spec, chi, {0.0, 0.0});
    double far = apply_at(spec, chi, {1.8, 0.0});
    CHECK(center > far);
    CHECK(far > 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::isfinite(T[i]));
}

TEST_CASE("far-field decay of atom images") {
    Grid g(1, 8.0, 1024);
    ExponentFunction p = ExponentFunction::constant(g, 1.2);
    std::vector<double> radii;
    for (double r = 1.0; r <= 6.5; r *= 1.25) radii.push_back(r);

    // I_{1/2}, degree-0 atom: predicted slope -(n - alpha + 1) = -1.5
    Atom a0 = make_atom(g, Ball(0.0, 0.25), p, 16.0, 0, 5);
    FarFieldReport r0 = far_field_check(OperatorSpec::riesz(1, 0.5), a0, radii);
    CHECK(r0.predicted_slope == doctest::Approx(-1.5));
    CHECK(r0.budget_ok);
    CHECK(std::abs(r0.fitted_slope - r0.predicted_slope) <= 0.15);
    CHECK(r0.c_fit > 0.0);
    CHECK(std::isfinite(r0.cond1_c_fit));

    // one extra vanishing moment steepens the decay by about one power
    Atom a1 = make_atom(g, Ball(0.0, 0.25), p, 16.0, 1, 6);
    FarFieldReport r1 = far_field_check(OperatorSpec::riesz(1, 0.5), a1, radii);
    CHECK(r1.fitted_slope - r0.fitted_slope <= -0.6);
    CHECK(r1.fitted_slope - r0.fitted_slope >= -1.4);

    // geometry error when every sample lands outside the box
    std::vector<double> huge = {50.0, 80.0};
    CHECK_THROWS_AS(far_field_check(OperatorSpec::riesz(1, 0.5), a0, huge),
                    std::domain_error);
}

TEST_CASE("odd input gives zero mean under a symmetric kernel") {
    Grid g(1, 8.0, 1024);
    // odd, compactly supported, mean field of I_alpha vanishes by symmetry
    GridFunction odd = GridFunction::from_fn(g, [](std::array<double, 2> x) {
        double u = x[0];
        double b1 = std::abs(u - 1.0) < 0.5 ? std::exp(-1.0 / (1.0 - 4.0 * (u - 1.0) * (u - 1.0))) : 0.0;
        double b2 = std::abs(u + 1.0) < 0.5 ? std::exp(-1.0 / (1.0 - 4.0 * (u + 1.0) * (u + 1.0))) : 0.0;
        return b1 - b2;
    });
    GridFunction T = apply(OperatorSpec::riesz(1, 0.5), odd);
    CHECK(std::abs(integrate(T)) <= 1e-10 * T.max_abs());
}

TEST_CASE("riesz moment check passes for loaded atoms") {
    Grid g(1, 8.0, 1024);
    ExponentFunction p = ExponentFunction::constant(g, 1.2);
    // max_degree 0 requires atoms with 2*0 + 3 + 0 + 1 = 4 vanishing moments
    Atom a = make_atom(g, Ball(0.25, 0.25), p, 16.0, 4, 9);
    MomentReport rep = riesz_moment_check(0.5, a, 0);
    REQUIRE(rep.rows.size() == 1);
    CHECK(rep.rows[0].verdict == "pass");
    CHECK(rep.rows[0].tail_budget > 0.0);
    CHECK(std::abs(rep.rows[0].value) <= rep.rows[0].quad_budget + rep.rows[0].tail_budget);

    Atom weak = make_atom(g, Ball(0.25, 0.25), p, 16.0, 1, 9);
    CHECK_THROWS_AS(riesz_moment_check(0.5, weak, 0), std::invalid_argument);
}

TEST_CASE("moment residual scales with the dilation family") {
    // analytic profile with four exact vanishing moments: the 5th derivative
    // of (1-u^2)^{10}, dilated as a_r(x) = r^{-1/p0} a(x/r)
    auto profile = [](double u) {
        if (std::abs(u) >= 1.0) return 0.0;
        // d^5/du^5 (1-u^2)^10 expanded in monomials
        double acc = 0.0;
        for (int k = 3; k <= 10; ++k) {
            double binom = 1.0;
            for (int t = 0; t < k; ++t) binom = binom * (10 - t) / (t + 1);
            double fall = 1.0;
            for (int t = 0; t < 5; ++t) fall *= (2 * k - t);
            acc += ((k % 2) ? -1.0 : 1.0) * binom * fall * std::pow(u, 2 * k - 5);
        }
        return acc;
    };
    const double p0 = 0.8, alpha = 0.5;
    Grid g(1, 8.0, 2048);
    ExponentFunction p = ExponentFunction::constant(g, 1.2);
    auto residual_at = [&](double r) {
        GridFunction av = GridFunction::from_fn(g, [&](std::array<double, 2> x) {
            return std::pow(r, -1.0 / p0) * profile(x[0] / r);
        });
        GridFunction T = apply(OperatorSpec::riesz(1, alpha), av);
        return std::abs(integrate(T));
    };
    double res1 = residual_at(1.0), resh = residual_at(0.5);
    // relative scaling ~ r^{n + alpha}: residual(r) ~ r^{n + alpha - n/p0} residual(1)
    double predicted = std::pow(0.5, 1.0 + alpha - 1.0 / p0);
    CHECK(resh / res1 <= predicted * 6.0);
    CHECK(resh / res1 >= predicted / 6.0);
}

TEST_CASE("weak type bound") {
    Grid g(1, 4.0, 512);
    GridFunction f = indicator(g, Ball(0.0, 1.0));
    OperatorSpec spec = OperatorSpec::riesz(1, 0.5);
    Weight w(GridFunction(g, std::vector<double>(g.size(), 1.0)));
    GridFunction Tf = apply(spec, f);
    std::vector<double> lambdas = {0.1 * Tf.max_abs(), 0.5 * Tf.max_abs(),
                                   1.5 * Tf.max_abs()};
    WeakTypeReport rep = weak_type_check(spec, f, w, lambdas);
    REQUIRE(rep.rows.size() == 3);
    CHECK(rep.rows[2].lhs == 0.0);  // level set above the sup is empty
    CHECK(std::isfinite(rep.c_fit));
    CHECK(rep.c_fit > 0.0);

    GridFunction f2(g);
    for (std::size_t i = 0; i < g.size(); ++i) f2[i] = 2.0 * f[i];
    std::vector<double> lambdas2;
    for (double l : lambdas) lambdas2.push_back(2.0 * l);
    WeakTypeReport rep2 = weak_type_check(spec, f2, w, lambdas2);
    CHECK(std::abs(rep2.c_fit - rep.c_fit) <= 0.05 * rep.c_fit);
}
