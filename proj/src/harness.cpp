#include "varharm/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>

#include "json.hpp"
#include "varharm/atoms.hpp"
#include "varharm/csv.hpp"
#include "varharm/maximal.hpp"
#include "varharm/potentials.hpp"
#include "varharm/rng.hpp"
#include "varharm/var_lebesgue.hpp"
#include "varharm/weights.hpp"

namespace varharm::harness {

using nlohmann::json;

Config Config::from_json_text(const std::string& text) {
    json j = json::parse(text);
    Config c;
    c.target = j.value("target", "");
    c.n = j.value("n", 1);
    c.N = j.value("N", 0);
    c.L = j.value("L", 0.0);
    c.seed = j.value("seed", std::uint64_t{42});
    c.alpha = j.value("alpha", 0.5);
    c.p_spec = j.value("p", "");
    c.trials = j.value("trials", 0);
    c.atom_count = j.value("atoms", 0);
    c.stability_tol = j.value("stability_tol", 0.25);
    c.refine = j.value("refine", true);
    c.out_path = j.value("out", "");
    c.csv_dir = j.value("csv", "");
    return c;
}

std::string Config::to_json_text() const {
    json j{{"target", target}, {"n", n},        {"N", N},
           {"L", L},           {"seed", seed},  {"alpha", alpha},
           {"p", p_spec},      {"trials", trials}, {"atoms", atom_count},
           {"stability_tol", stability_tol},    {"refine", refine},
           {"out", out_path},  {"csv", csv_dir}};
    return j.dump(2);
}

std::string Report::to_json_text() const {
    json j;
    j["target"] = target;
    j["verdict"] = verdict;
    j["header_note"] = header_note;
    j["stability"] = stability;
    j["wall_ms"] = wall_ms;
    j["constants"] = constants;
    j["constants_refined"] = constants_refined;
    j["cases"] = json::array();
    for (const auto& c : cases)
        j["cases"].push_back(
            {{"label", c.label}, {"value", c.value}, {"budget", c.budget}, {"note", c.note}});
    return j.dump(2);
}

void Report::write_csv(const std::string& dir) const {
    std::filesystem::create_directories(dir);
    std::ofstream os(std::filesystem::path(dir) / (target + ".csv"));
    os << "label,value,budget,note\n";
    for (const auto& c : cases)
        os << c.label << ',' << c.value << ',' << c.budget << ",\"" << c.note << "\"\n";
}

int Report::exit_code() const {
    if (verdict == "pass") return 0;
    if (verdict == "inconclusive") return 2;
    return 1;
}

namespace {

constexpr const char* kUpperBoundNote =
    "atomic norms are evaluated on constructed decompositions (upper bounds; "
    "the infimum over decompositions is not searched)";

struct Env {
    const Config& cfg;
    Grid grid;
    Rng rng;
    Env(const Config& cfg_, int N, double L)
        : cfg(cfg_), grid(cfg_.n, L, N), rng(cfg_.seed) {}
};

ExponentFunction default_even_p(const Grid& g) {
    return ExponentFunction(GridFunction::from_fn(g, [&](std::array<double, 2> x) {
        double r2 = x[0] * x[0] + (g.dim() == 2 ? x[1] * x[1] : 0.0);
        return 1.2 + 0.3 * std::exp(-r2);
    }));
}

ExponentFunction pick_p(const Env& env) {
    if (!env.cfg.p_spec.empty()) return parse_exponent(env.grid, env.cfg.p_spec);
    return default_even_p(env.grid);
}

ExponentFunction scale_exponent(const ExponentFunction& p, double factor) {
    GridFunction v(p.grid());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = p[i] * factor;
    return ExponentFunction(std::move(v));
}

double choose_p0(const ExponentFunction& p, double alpha, int n) {
    return 0.9 * std::min(p.p_minus(), double(n) / (n + alpha));
}

Weight power_weight(const Grid& g, double gamma) {
    const double floor_r = 0.5 * g.spacing();
    return Weight(GridFunction::from_fn(g, [&](std::array<double, 2> x) {
        double r = g.dim() == 1 ? std::abs(x[0]) : std::hypot(x[0], x[1]);
        return std::pow(std::max(r, floor_r), -gamma);
    }));
}

GridFunction ones(const Grid& g) {
    return GridFunction(g, std::vector<double>(g.size(), 1.0));
}

OperatorSpec make_operator(int n, double alpha) {
    if (alpha > 0.0 && n == 1)
        return OperatorSpec(alpha, {OrthogonalMatrix::scalar_1d(1.0),
                                    OrthogonalMatrix::scalar_1d(-1.0)},
                            {0.5 * (n - alpha), 0.5 * (n - alpha)});
    if (alpha > 0.0)
        return OperatorSpec(alpha, {OrthogonalMatrix::identity(2),
                                    OrthogonalMatrix::rotation_2d(std::numbers::pi)},
                            {0.5 * (n - alpha), 0.5 * (n - alpha)});
    if (n == 1)
        return OperatorSpec(0.0, {OrthogonalMatrix::scalar_1d(1.0),
                                  OrthogonalMatrix::scalar_1d(-1.0)},
                            {0.5, 0.5});
    return OperatorSpec(0.0, {OrthogonalMatrix::identity(2),
                              OrthogonalMatrix::rotation_2d(std::numbers::pi)},
                        {1.0, 1.0});
}

struct TheoremSetup {
    ExponentFunction p;
    ExponentFunction q;
    double p0, q0, q_main, q_atom;
    int degree;
    double m_norm_q;  // 2x empirical ||M|| on (q/q0)'
};

TheoremSetup theorem_setup(Env& env, double alpha, int norm_trials = 64) {
    const int n = env.grid.dim();
    ExponentFunction p = pick_p(env);
    ExponentFunction q = alpha > 0.0 ? sobolev_shift(p, alpha) : p;
    double p0 = choose_p0(p, alpha, n);
    double q0 = 1.0 / (1.0 / p0 - alpha / n);
    ExponentFunction p_dual = conjugate(scale_exponent(p, 1.0 / p0));
    ExponentFunction q_dual = conjugate(scale_exponent(q, 1.0 / q0));
    double norm_p = estimate_operator_norm(p_dual, norm_trials, env.cfg.seed + 1);
    double norm_q = estimate_operator_norm(q_dual, norm_trials, env.cfg.seed + 2);
    double q_main = std::max({1.0, p.p_plus(),
                              p0 * (1.0 + std::pow(2.0, n + 3) * (norm_p + norm_q))});
    if (alpha > 0.0) q_main = std::max(q_main, p0 * n / alpha);
    q_main *= 1.05;  // strict inequality headroom
    int degree = static_cast<int>(std::floor(n * (1.0 / p0 - 1.0)));
    return {std::move(p), std::move(q), p0, q0, q_main, q_main / p0, degree, 2.0 * norm_q};
}

Ball seeded_ball(Env& env, double r, Rng& rng) {
    const double L = env.grid.half_width();
    double room = std::max(0.0, L - r - 0.5);
    double cx = rng.uniform(-room, room) * 0.8;
    if (env.grid.dim() == 1) return Ball(cx, r);
    double cy = rng.uniform(-room, room) * 0.8;
    return Ball(cx, cy, r);
}

std::vector<double> atom_radius_ladder(int count, double r_lo, double r_hi) {
    std::vector<double> r(count);
    for (int i = 0; i < count; ++i)
        r[i] = r_lo * std::pow(r_hi / r_lo, count > 1 ? double(i) / (count - 1) : 0.0);
    return r;
}

double weighted_lq0(const GridFunction& f, double q0, const Weight& w) {
    std::vector<double> terms(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        terms[i] = std::pow(std::abs(f[i]), q0) * w[i];
    const Grid& g = f.grid();
    double hn = g.dim() == 1 ? g.spacing() : g.spacing() * g.spacing();
    return std::pow(hn * pairwise_sum(terms), 1.0 / q0);
}

// ---------------------------------------------------------------- targets --

void run_lemma1(Env& env, Report& rep) {
    const Grid& g = env.grid;
    const int trials = env.cfg.trials > 0 ? env.cfg.trials : 200;
    int violations = 0;
    const double s_cycle[3] = {0.5, 2.0, 3.0};
    {
        GridFunction zero(g);
        ExponentFunction p = default_even_p(g);
        if (luxemburg_norm(zero, p).norm != 0.0) ++violations;
    }
    OrthogonalMatrix refl = g.dim() == 1 ? OrthogonalMatrix::reflection_1d()
                                         : OrthogonalMatrix::rotation_2d(std::numbers::pi / 2);
    for (int t = 0; t < trials; ++t) {
        Rng rng = env.rng.fork(t);
        GridFunction f = random_field(g, rng);
        GridFunction fg = random_field(g, rng);
        double base = rng.uniform(0.9, 2.5);
        double amp = rng.uniform(0.1, 1.0);
        ExponentFunction p(GridFunction::from_fn(g, [&](std::array<double, 2> x) {
            double r2 = x[0] * x[0] + (g.dim() == 2 ? x[1] * x[1] : 0.0);
            return base + amp * std::exp(-r2);  // radial: invariant under refl
        }));
        double nf = luxemburg_norm(f, p).norm;
        double ng = luxemburg_norm(fg, p).norm;
        if (!(nf > 0.0) && f.max_abs() > 0.0) ++violations;  // (1)
        double c = rng.uniform(0.1, 10.0);
        GridFunction cf(g);
        for (std::size_t i = 0; i < cf.size(); ++i) cf[i] = c * f[i];
        if (std::abs(luxemburg_norm(cf, p).norm - c * nf) > 1e-8 * c * nf + 1e-12)
            ++violations;  // (2)
        GridFunction sum(g);
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = f[i] + fg[i];
        double pl = p.p_lower();
        if (std::pow(luxemburg_norm(sum, p).norm, pl) >
            std::pow(nf, pl) + std::pow(ng, pl) + 1e-6)
            ++violations;  // (3)
        double s = s_cycle[t % 3];
        GridFunction fs(g);
        for (std::size_t i = 0; i < fs.size(); ++i) fs[i] = std::pow(std::abs(f[i]), s);
        double lhs = luxemburg_norm(fs, p).norm;
        double rhs = std::pow(luxemburg_norm(f, scale_exponent(p, s)).norm, s);
        if (std::abs(lhs - rhs) > 1e-6 * std::max(lhs, rhs) + 1e-12) ++violations;  // (4)
        double na = luxemburg_norm(pullback(f, refl), p).norm;
        if (std::abs(na - nf) > 1e-8 * nf + 1e-12) ++violations;  // (5)
    }
    rep.cases.push_back({"violations", double(violations), 0.0,
                         std::to_string(trials) + " seeded triples, properties 1-5"});
    rep.verdict = violations == 0 ? "pass" : "fail";
}

void run_ineqmax(Env& env, Report& rep) {
    const Grid& g = env.grid;
    const int trials = env.cfg.trials > 0 ? env.cfg.trials : 50;
    BallFamily fam = BallFamily::for_grid(g);
    long violations = 0;
    for (int t = 0; t < trials; ++t) {
        Rng rng = env.rng.fork(t);
        GridFunction f = random_field(g, rng);
        GridFunction mu = hl_maximal(f, fam);
        GridFunction mc = centered_maximal(f, fam);
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (mc[i] > mu[i]) ++violations;
            if (std::ldexp(mu[i], -g.dim()) > mc[i]) ++violations;
        }
    }
    rep.cases.push_back({"violations", double(violations), 0.0,
                         "pointwise 2^{-n} M <= centered M <= M, exact comparisons"});
    rep.verdict = violations == 0 ? "pass" : "fail";
}

void run_lemma4(Env& env, Report& rep) {
    const int trials = env.cfg.trials > 0 ? env.cfg.trials : 48;
    ExponentFunction p = pick_p(env);
    double np = estimate_operator_norm(p, trials, env.cfg.seed);
    double n2p = estimate_operator_norm(scale_exponent(p, 2.0), trials, env.cfg.seed);
    rep.cases.push_back({"norm_p", np, 0.0, "empirical ||M|| on L^{p(.)}"});
    rep.cases.push_back({"norm_2p", n2p, 0.0, "empirical ||M|| on L^{2p(.)}"});
    rep.constants["C_norm_p"] = np;
    rep.constants["C_norm_2p"] = n2p;
    rep.verdict = n2p <= np * 1.15 ? "pass" : "fail";
}

void run_lemma12(Env& env, Report& rep) {
    const Grid& g = env.grid;
    BallFamily fam = weights_default_family(g);
    const int n = g.dim();
    bool ok = true;
    auto check = [&](const std::string& name, const Weight& w) {
        double a1 = a1_constant(w, fam);
        double s = 1.0 + 1.0 / (std::pow(2.0, n + 1) * a1);
        double rh = rh_constant(w, s, fam);
        rep.cases.push_back({name + "_a1", a1, 0.0, ""});
        rep.cases.push_back({name + "_s", s, 0.0, "1 + (2^{n+1}[w]_{A1})^{-1}"});
        rep.cases.push_back({name + "_rh", rh, 0.0, ""});
        ok = ok && std::isfinite(rh) && rh >= 1.0 - 1e-6;
        return std::pair{s, rh};
    };
    auto [s1, rh1] = check("const", Weight(ones(g)));
    ok = ok && std::abs(s1 - (1.0 + std::pow(2.0, -(n + 1)))) < 0.02 && rh1 < 1.05;
    check("power", power_weight(g, 0.5));
    ExponentFunction pd = ExponentFunction::constant(g, 2.0);
    Rng rng = env.rng.fork(7);
    GridFunction gg = random_field(g, rng, true);
    double m_norm = 2.0 * estimate_operator_norm(pd, 16, env.cfg.seed + 5);
    RdFResult rr = rubio_de_francia(gg, pd, m_norm);
    auto [s3, rh3] = check("rdf", rr.rg);
    rep.constants["C_rh_rdf"] = rh3;
    rep.verdict = ok ? "pass" : "fail";
}

void run_lemma13(Env& env, Report& rep) {
    const Grid& g = env.grid;
    const int n = g.dim();
    const double alpha = env.cfg.alpha > 0.0 ? env.cfg.alpha : 0.5;
    const double p = 1.5;
    const double q = 1.0 / (1.0 / p - alpha / n);
    const int J = 8, trials = env.cfg.trials > 0 ? env.cfg.trials : 5;
    BallFamily fam = BallFamily::for_grid(g);
    Weight w = power_weight(g, 1.0 / 3.0);
    Weight wpq = w.pow(p / q);
    double c_fit = 0.0;
    for (int t = 0; t < trials; ++t) {
        Rng rng = env.rng.fork(100 + t);
        std::vector<double> lhs_sq(g.size(), 0.0), rhs_sq(g.size(), 0.0);
        for (int j = 0; j < J; ++j) {
            GridFunction f = random_field(g, rng);
            GridFunction mf = fractional_maximal(f, alpha, fam);
            for (std::size_t i = 0; i < g.size(); ++i) {
                lhs_sq[i] += mf[i] * mf[i];
                rhs_sq[i] += f[i] * f[i];
            }
        }
        std::vector<double> lt(g.size()), rt(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            lt[i] = std::pow(lhs_sq[i], q / 2.0) * w[i];
            rt[i] = std::pow(rhs_sq[i], p / 2.0) * wpq[i];
        }
        double hn = n == 1 ? g.spacing() : g.spacing() * g.spacing();
        double lhs = std::pow(hn * pairwise_sum(lt), 1.0 / q);
        double rhs = std::pow(hn * pairwise_sum(rt), 1.0 / p);
        double ratio = lhs / rhs;
        rep.cases.push_back({"trial" + std::to_string(t), ratio, 0.0, "lhs/rhs"});
        c_fit = std::max(c_fit, ratio);
    }
    rep.constants["C_vector"] = c_fit;
    rep.verdict = std::isfinite(c_fit) && c_fit > 0.0 ? "pass" : "fail";
}

void run_lemma14(Env& env, Report& rep) {
    const Grid& g = env.grid;
    OperatorSpec spec = make_operator(g.dim(), env.cfg.alpha);
    Weight w = power_weight(g, 1.0 / 3.0);
    auto run_for = [&](const GridFunction& f, const std::string& name) {
        GridFunction Tf = apply(spec, f);
        double tmax = Tf.max_abs();
        std::vector<double> lambdas;
        for (int k = 0; k < 12; ++k) lambdas.push_back(tmax * 0.02 * std::pow(1.45, k));
        WeakTypeReport wr = weak_type_check(spec, f, w, lambdas);
        int truncated = 0;
        for (const auto& row : wr.rows) {
            rep.cases.push_back({name + "_lam" + std::to_string(row.lambda), row.ratio,
                                 0.0, row.truncated ? "truncated" : ""});
            truncated += row.truncated;
        }
        return wr.c_fit;
    };
    GridFunction chi = indicator(g, Ball(std::array<double, 2>{0.0, 0.0}, 1.0));
    double c1 = run_for(chi, "chi");
    Rng rng = env.rng.fork(3);
    double c2 = run_for(random_field(g, rng, true), "rand");
    GridFunction chi2(g);
    for (std::size_t i = 0; i < chi2.size(); ++i) chi2[i] = 2.0 * chi[i];
    double c3 = run_for(chi2, "chi_x2");
    rep.constants["C_weak"] = std::max(c1, c2);
    rep.cases.push_back({"homogeneity_shift", std::abs(c3 - c1) / c1, 0.0,
                         "relative change of C under f -> 2f"});
    rep.verdict = (std::isfinite(c1) && std::isfinite(c2) && std::abs(c3 - c1) / c1 < 0.05)
                      ? "pass"
                      : "fail";
}

void run_lemma15(Env& env, Report& rep, bool alpha_positive) {
    const Grid& g = env.grid;
    const int n = g.dim();
    const double alpha = alpha_positive ? (env.cfg.alpha > 0.0 ? env.cfg.alpha : 0.5) : 0.0;
    TheoremSetup ts = theorem_setup(env, alpha, 24);
    OperatorSpec spec = make_operator(n, alpha);
    ExponentFunction pd = conjugate(scale_exponent(ts.q, 1.0 / ts.q0));
    Rng rng = env.rng.fork(11);
    GridFunction gseed = random_field(g, rng, true);
    RdFResult rr = rubio_de_francia(gseed, pd, ts.m_norm_q);
    const Weight& w = rr.rg;
    if (!alpha_positive) {
        double rh = rh_constant(w, 1.0 / (1.0 - ts.p0 / ts.q_main), weights_default_family(g));
        rep.cases.push_back({"rh_witness", rh, 0.0, "[w]_{RH_{(q/p0)'}}"});
    }
    const int count = env.cfg.atom_count > 0 ? env.cfg.atom_count : 10;
    auto radii = atom_radius_ladder(count, 0.125, 2.0);
    const double expo = alpha_positive ? ts.q0 : ts.p0;
    double c_fit = 0.0;
    for (int j = 0; j < count; ++j) {
        Rng arng = env.rng.fork(200 + j);
        Ball ball = seeded_ball(env, radii[j], arng);
        Atom a = make_atom(g, ball, ts.p, ts.q_atom, ts.degree, env.cfg.seed + 300 + j);
        GridFunction Ta = apply(spec, a.values);
        std::vector<double> terms(g.size());
        for (std::size_t i = 0; i < g.size(); ++i)
            terms[i] = std::pow(std::abs(Ta[i]), expo) * w[i];
        double hn = n == 1 ? g.spacing() : g.spacing() * g.spacing();
        double lhs = hn * pairwise_sum(terms);
        double wsum = 0.0;
        for (const auto& A : spec.matrices()) wsum += act(w, A.transpose()).total(ball);
        double rhs = (alpha_positive ? std::pow(ball.volume(n), alpha * ts.q0 / n) : 1.0) *
                     std::pow(a.chi_norm, -expo) * wsum;
        double ratio = lhs / rhs;
        rep.cases.push_back({"r" + std::to_string(radii[j]), ratio, 0.0, "lhs/rhs"});
        c_fit = std::max(c_fit, ratio);
    }
    rep.constants["C_atom_bound"] = c_fit;
    rep.verdict = std::isfinite(c_fit) && c_fit > 0.0 ? "pass" : "fail";
    rep.header_note = kUpperBoundNote;
}

void run_prop16(Env& env, Report& rep) {
    const Grid& g = env.grid;
    const int n = g.dim();
    const double alpha = env.cfg.alpha > 0.0 ? env.cfg.alpha : 0.5;
    TheoremSetup ts = theorem_setup(env, alpha, 24);
    OperatorSpec spec = make_operator(n, alpha);
    ExponentFunction pd = conjugate(scale_exponent(ts.q, 1.0 / ts.q0));
    Rng rng = env.rng.fork(17);
    RdFResult rr = rubio_de_francia(random_field(g, rng, true), pd, ts.m_norm_q);
    const Weight& w = rr.rg;
    const TestFunctionBank& bank = TestFunctionBank::standard(n);
    const int trials = env.cfg.trials > 0 ? env.cfg.trials : 3;
    double c_fit = 0.0;
    for (int t = 0; t < trials; ++t) {
        Rng drng = env.rng.fork(400 + t);
        FiniteDecomposition dec;
        for (int j = 0; j < 4; ++j) {
            double r = 0.15 * std::pow(2.0, drng.uniform(0.0, 3.5));
            Ball ball = seeded_ball(env, r, drng);
            dec.atoms.push_back(
                make_atom(g, ball, ts.p, ts.q_atom, ts.degree, env.cfg.seed + 500 + 10 * t + j));
            dec.lambdas.push_back(drng.uniform(0.2, 2.0));
        }
        GridFunction f(g);
        for (std::size_t j = 0; j < dec.atoms.size(); ++j)
            for (std::size_t i = 0; i < f.size(); ++i)
                f[i] += dec.lambdas[j] * dec.atoms[j].values[i];
        double lhs = weighted_lq0(apply(spec, f), ts.q0, w);
        double rhs = 0.0;
        for (const auto& A : spec.matrices())
            rhs += weighted_hardy_norm(f, ts.p0, act(w, A.transpose()).pow(ts.p0 / ts.q0), bank);
        double ratio = lhs / rhs;
        rep.cases.push_back({"decomp" + std::to_string(t), ratio, 0.0, "lhs/rhs"});
        c_fit = std::max(c_fit, ratio);
    }
    rep.constants["C_prop16"] = c_fit;
    rep.verdict = std::isfinite(c_fit) && c_fit > 0.0 ? "pass" : "fail";
    rep.header_note = kUpperBoundNote;
}

void run_prop18(Env& env, Report& rep) {
    const Grid& g = env.grid;
    const int n = g.dim();
    const double alpha = env.cfg.alpha > 0.0 ? env.cfg.alpha : 0.5;
    TheoremSetup ts = theorem_setup(env, alpha, 24);
    const int k = static_cast<int>(std::floor(n * (1.0 / ts.q0 - 1.0)));
    const int degree = 2 * k + 3 + static_cast<int>(std::floor(alpha)) + n;
    OperatorSpec riesz = OperatorSpec::riesz(n, alpha);
    const TestFunctionBank& bank = TestFunctionBank::standard(n);
    auto [j_lo, j_hi] = dyadic_j_range(g);
    BallFamily fam = BallFamily::for_grid(g);
    const int count = env.cfg.atom_count > 0 ? env.cfg.atom_count : 5;
    auto radii = atom_radius_ladder(count, 0.125, 1.0);
    double c_fit = 0.0;
    for (int j = 0; j < count; ++j) {
        Rng arng = env.rng.fork(600 + j);
        Ball ball = seeded_ball(env, radii[j], arng);
        Atom a = make_atom(g, ball, ts.p, ts.q_atom, degree, env.cfg.seed + 700 + j);
        GridFunction lhs = discrete_maximal(apply(riesz, a.values), bank.profiles.front(),
                                            j_lo, j_hi);
        GridFunction mchi = hl_maximal(indicator(g, ball), fam);
        double best = 0.0;
        const double coef = std::pow(ball.volume(n), alpha / n) / a.chi_norm;
        for (std::size_t i = 0; i < g.size(); ++i) {
            auto x = g.point(i);
            double dist = std::hypot(x[0] - ball.center[0],
                                     n == 2 ? x[1] - ball.center[1] : 0.0);
            if (dist <= 2.0 * ball.radius) continue;
            double rhs = coef * std::pow(mchi[i], double(n + k + 1) / n);
            best = std::max(best, lhs[i] / rhs);
        }
        rep.cases.push_back({"r" + std::to_string(radii[j]), best, 0.0, "sup lhs/rhs outside 2B"});
        c_fit = std::max(c_fit, best);
    }
    rep.constants["C_prop18"] = c_fit;
    rep.verdict = std::isfinite(c_fit) && c_fit > 0.0 ? "pass" : "fail";
}

void run_cond3(Env& env, Report& rep) {
    const Grid& g = env.grid;
    const int n = g.dim();
    const double alpha = env.cfg.alpha > 0.0 ? env.cfg.alpha : 0.5;
    TheoremSetup ts = theorem_setup(env, alpha, 16);
    const int max_degree = static_cast<int>(std::floor(n * (1.0 / ts.q0 - 1.0)));
    const int degree = 2 * max_degree + 3 + static_cast<int>(std::floor(alpha)) + n;
    const int count = env.cfg.atom_count > 0 ? env.cfg.atom_count : 10;
    auto radii = atom_radius_ladder(count, 0.125, 0.5);
    bool any_fail = false, any_inconclusive = false;
    double worst = 0.0, c_cond1 = 0.0;
    for (int j = 0; j < count; ++j) {
        Rng arng = env.rng.fork(800 + j);
        Ball ball = seeded_ball(env, radii[j], arng);
        Atom a = make_atom(g, ball, ts.p, ts.q_atom, degree, env.cfg.seed + 900 + j);
        MomentReport mr = riesz_moment_check(alpha, a, max_degree);
        c_cond1 = std::max(c_cond1, mr.cond1_c_fit);
        for (const auto& row : mr.rows) {
            rep.cases.push_back({"atom" + std::to_string(j) + "_beta" +
                                     std::to_string(row.beta[0]),
                                 row.value, row.quad_budget + row.tail_budget, row.verdict});
            if (row.verdict == "fail") any_fail = true;
            if (row.verdict == "inconclusive") any_inconclusive = true;
            double b = row.quad_budget + row.tail_budget;
            if (b > 0.0) worst = std::max(worst, std::abs(row.value) / b);
        }
    }
    rep.constants["C_cond1"] = c_cond1;
    rep.constants["aux_moment_over_budget"] = worst;
    rep.verdict = any_fail ? "fail" : (any_inconclusive ? "inconclusive" : "pass");
}

void run_prop20(Env& env, Report& rep) {
    const Grid& g = env.grid;
    const int n = g.dim();
    const double alpha = env.cfg.alpha > 0.0 ? env.cfg.alpha : 0.5;
    TheoremSetup ts = theorem_setup(env, alpha, 24);
    const int k = static_cast<int>(std::floor(n * (1.0 / ts.q0 - 1.0)));
    const int degree = 2 * k + 3 + static_cast<int>(std::floor(alpha)) + n;
    OperatorSpec riesz = OperatorSpec::riesz(n, alpha);
    ExponentFunction pd = conjugate(scale_exponent(ts.q, 1.0 / ts.q0));
    Rng rng = env.rng.fork(23);
    RdFResult rr = rubio_de_francia(random_field(g, rng, true), pd, ts.m_norm_q);
    const Weight& w = rr.rg;
    double rh = rh_constant(w, 1.0 / (1.0 - ts.p0 / ts.q_main), weights_default_family(g));
    rep.cases.push_back({"rh_witness", rh, 0.0, "[w]_{RH_{(q/p0)'}}"});
    const TestFunctionBank& bank = TestFunctionBank::standard(n);
    const int trials = env.cfg.trials > 0 ? env.cfg.trials : 3;
    double c_fit = 0.0;
    for (int t = 0; t < trials; ++t) {
        Rng drng = env.rng.fork(950 + t);
        FiniteDecomposition dec;
        for (int j = 0; j < 3; ++j) {
            double r = 0.15 * std::pow(2.0, drng.uniform(0.0, 3.0));
            Ball ball = seeded_ball(env, r, drng);
            dec.atoms.push_back(
                make_atom(g, ball, ts.p, ts.q_atom, degree, env.cfg.seed + 40 + 10 * t + j));
            dec.lambdas.push_back(drng.uniform(0.2, 2.0));
        }
        GridFunction f(g);
        for (std::size_t j = 0; j < dec.atoms.size(); ++j)
            for (std::size_t i = 0; i < f.size(); ++i)
                f[i] += dec.lambdas[j] * dec.atoms[j].values[i];
        double lhs = weighted_hardy_norm(apply(riesz, f), ts.q0, w, bank);
        double rhs = weighted_finite_atomic_norm(dec, ts.p, ts.p0, w.pow(ts.p0 / ts.q0));
        double ratio = lhs / rhs;
        rep.cases.push_back({"decomp" + std::to_string(t), ratio, 0.0, "lhs/rhs"});
        c_fit = std::max(c_fit, ratio);
    }
    rep.constants["C_prop20"] = c_fit;
    rep.verdict = std::isfinite(c_fit) && c_fit > 0.0 ? "pass" : "fail";
    rep.header_note = kUpperBoundNote;
}

void run_theorem21(Env& env, Report& rep, bool grand_norm) {
    const Grid& g = env.grid;
    const int n = g.dim();
    const double alpha = grand_norm && !(env.cfg.alpha > 0.0) ? 0.5 : env.cfg.alpha;
    TheoremSetup ts = theorem_setup(env, alpha);
    OperatorSpec spec = grand_norm ? OperatorSpec::riesz(n, alpha) : make_operator(n, alpha);

    // exponent symmetry under the kernel matrices
    double sym = 0.0;
    const int N = g.points_per_axis();
    for (int i = 0; i < N; ++i) {
        if (n == 1) {
            sym = std::max(sym, std::abs(ts.q[g.index(i)] - ts.q[g.index(N - 1 - i)]));
        } else {
            for (int j = 0; j < N; ++j)
                sym = std::max(sym, std::abs(ts.q[g.index(i, j)] -
                                             ts.q[g.index(N - 1 - i, N - 1 - j)]));
        }
    }
    if (sym > 1e-10) {
        rep.verdict = "fail";
        rep.cases.push_back({"exponent_symmetry", sym, 0.0, "q(A_i x) != q(x)"});
        return;
    }
    rep.cases.push_back({"exponent_symmetry", sym, 0.0, "max |q(-x) - q(x)|"});

    // radius sweeps of fixed seeded profiles: the seed pins the profile in
    // ball-scaled coordinates, so each row is a discrete dilation family and
    // the ratio trend isolates the radius dependence
    const int count = env.cfg.atom_count > 0 ? env.cfg.atom_count : (grand_norm ? 20 : 50);
    const int profiles = std::max(2, std::min(5, count / 4));
    const int per_row = std::max(2, count / profiles);
    auto radii = atom_radius_ladder(per_row, 0.125, std::min(8.0, g.half_width()));
    const TestFunctionBank& bank = TestFunctionBank::standard(n);
    std::vector<double> scales = dyadic_scales(g);
    double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m_fit = 0;
    double boundary_ratio = 0.0;  // truncation indicator: |Ta| at the box edge
    const int N_axis = g.points_per_axis();
    for (int s = 0; s < profiles; ++s) {
        for (int j = 0; j < per_row; ++j) {
            Ball ball = n == 1 ? Ball(0.0, radii[j]) : Ball(0.0, 0.0, radii[j]);
            Atom a = make_atom(g, ball, ts.p, ts.q_atom, ts.degree, env.cfg.seed + 60 + s);
            GridFunction Ta = apply(spec, a.values);
            double edge = 0.0;
            for (std::size_t i = 0; i < Ta.size(); ++i) {
                int i0 = static_cast<int>(i) / (n == 2 ? N_axis : 1);
                int i1 = n == 2 ? static_cast<int>(i) % N_axis : i0;
                if (i0 == 0 || i0 == N_axis - 1 || i1 == 0 || i1 == N_axis - 1)
                    edge = std::max(edge, std::abs(Ta[i]));
            }
            boundary_ratio = std::max(boundary_ratio, edge / Ta.max_abs());
            GridFunction target = grand_norm ? grand_maximal(Ta, bank, scales) : std::move(Ta);
            double nq = luxemburg_norm(target, ts.q).norm;
            FiniteDecomposition single{{1.0}, {a}};
            double fan = finite_atomic_norm(single, ts.p);
            double ratio = nq / fan;
            rep.cases.push_back({"s" + std::to_string(s) + "_r" + std::to_string(radii[j]),
                                 ratio, 0.0, grand_norm ? "bank-relative" : ""});
            rmin = std::min(rmin, ratio);
            rmax = std::max(rmax, ratio);
            double lx = std::log(radii[j]), ly = std::log(ratio);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
            ++m_fit;
        }
    }
    double slope = (m_fit * sxy - sx * sy) / (m_fit * sxx - sx * sx);
    rep.constants["C_uniform"] = rmax;
    rep.constants["aux_ratio_min"] = rmin;
    rep.constants["aux_slope"] = slope;
    rep.cases.push_back({"boundary_truncation", boundary_ratio, 0.0,
                         "max |Ta| at the box edge over max |Ta|; norms miss the mass beyond"});
    bool ok = rmax / rmin <= 10.0 && std::abs(slope) <= 0.1;

    if (!grand_norm) {
        // weighted route from the proof: T against Rubio de Francia majorants
        ExponentFunction pd = conjugate(scale_exponent(ts.q, 1.0 / ts.q0));
        Rng rng = env.rng.fork(77);
        RdFResult rr = rubio_de_francia(random_field(g, rng, true), pd, ts.m_norm_q);
        if (!rr.ok()) ok = false;
        rep.cases.push_back({"rdf_a1", rr.a1_value, 0.0, "certified <= 2 m_norm (+10%)"});
        rep.cases.push_back({"rdf_dual_ratio", rr.dual_norm_ratio, 0.0, "certified <= 2"});
    }
    rep.verdict = ok ? "pass" : "fail";
    rep.header_note = std::string(kUpperBoundNote) +
                      (grand_norm ? "; H^{q(.)} norm is bank-relative (fixed 5-profile bank)"
                                  : "");
}

void run_remark22(Env& env, Report& rep) {
    const Grid& g = env.grid;
    ExponentFunction radial = parse_exponent(g, "radial:bump");
    ExponentFunction even = parse_exponent(g, "even-sym:drift");
    const int N = g.points_per_axis();
    double sym = 0.0;
    for (int i = 0; i < N; ++i) {
        if (g.dim() == 1) {
            sym = std::max(sym, std::abs(even[g.index(i)] - even[g.index(N - 1 - i)]));
        } else {
            for (int j = 0; j < N; ++j)
                sym = std::max(sym, std::abs(even[g.index(i, j)] -
                                             even[g.index(N - 1 - i, N - 1 - j)]));
        }
    }
    double score_radial = log_holder_score(radial);
    double score_even = log_holder_score(even);
    rep.cases.push_back({"radial_log_holder", score_radial, 0.0, "p(x) = h(|x|)"});
    rep.cases.push_back({"even_sym_violation", sym, 0.0, "max |p_e(x) - p_e(-x)|"});
    rep.cases.push_back({"even_log_holder", score_even, 0.0, "p_e(x) = p(x) + p(-x)"});
    rep.verdict = (sym <= 1e-10 && std::isfinite(score_radial) && std::isfinite(score_even))
                      ? "pass"
                      : "fail";
}

using TargetFn = std::function<void(Env&, Report&)>;

const std::vector<std::pair<std::string, std::string>>& target_table() {
    static const std::vector<std::pair<std::string, std::string>> table = {
        {"lemma1-quasinorm", "quasi-norm identities of the Luxemburg functional"},
        {"ineqmax", "pointwise sandwich between centered and uncentered maximal functions"},
        {"lemma4-dilation", "maximal operator bounded on L^{sp(.)} once bounded on L^{p(.)}"},
        {"lemma12-rh", "A1 weights satisfy a reverse Hoelder inequality with explicit exponent"},
        {"lemma13-vector", "weighted vector-valued inequality for the fractional maximal operator"},
        {"lemma14-weaktype", "weighted weak-type level-set bound for the generalized potential"},
        {"lemma15a", "weighted image bound for atoms under the potential, alpha > 0"},
        {"lemma15b", "weighted image bound for atoms under the potential, alpha = 0"},
        {"prop16", "L^{q0}(w) bound of the potential by weighted Hardy norms"},
        {"prop18-pointwise", "discrete maximal of a Riesz atom image bounded by M(chi_B)^{(n+k+1)/n}"},
        {"cond3-moments", "vanishing moments of Riesz atom images within quadrature+tail budgets"},
        {"prop20", "weighted Hardy-to-Hardy bound for the Riesz potential on decompositions"},
        {"theorem21", "uniform q(.)-norm bound of potential images of normalized atoms"},
        {"theorem24", "uniform bank-relative Hardy-norm bound for Riesz atom images"},
        {"remark22-exponents", "radial and even-symmetrized admissible exponent constructions"},
    };
    return table;
}

TargetFn lookup(const std::string& target) {
    if (target == "lemma1-quasinorm") return run_lemma1;
    if (target == "ineqmax") return run_ineqmax;
    if (target == "lemma4-dilation") return run_lemma4;
    if (target == "lemma12-rh") return run_lemma12;
    if (target == "lemma13-vector") return run_lemma13;
    if (target == "lemma14-weaktype") return run_lemma14;
    if (target == "lemma15a") return [](Env& e, Report& r) { run_lemma15(e, r, true); };
    if (target == "lemma15b") return [](Env& e, Report& r) { run_lemma15(e, r, false); };
    if (target == "prop16") return run_prop16;
    if (target == "prop18-pointwise") return run_prop18;
    if (target == "cond3-moments") return run_cond3;
    if (target == "prop20") return run_prop20;
    if (target == "theorem21") return [](Env& e, Report& r) { run_theorem21(e, r, false); };
    if (target == "theorem24") return [](Env& e, Report& r) { run_theorem21(e, r, true); };
    if (target == "remark22-exponents") return run_remark22;
    throw std::invalid_argument("unregistered target: " + target);
}

}  // namespace

std::vector<std::string> registered_targets() {
    std::vector<std::string> out;
    for (const auto& [name, desc] : target_table()) out.push_back(name);
    return out;
}

std::string describe(const std::string& target) {
    for (const auto& [name, desc] : target_table())
        if (name == target) return desc;
    throw std::invalid_argument("unregistered target: " + target);
}

Report run(const Config& cfg) {
    TargetFn fn = lookup(cfg.target);
    auto t0 = std::chrono::steady_clock::now();
    Report rep;
    rep.target = cfg.target;
    {
        Env env(cfg, cfg.resolved_N(), cfg.resolved_L());
        fn(env, rep);
    }
    bool has_c = false;
    for (const auto& [k, v] : rep.constants) has_c = has_c || k.rfind("C", 0) == 0;
    if (cfg.refine && has_c) {
        Config c2 = cfg;
        c2.N = 2 * cfg.resolved_N();
        c2.refine = false;
        Report rep2;
        rep2.target = cfg.target;
        Env env2(c2, c2.N, cfg.resolved_L());
        fn(env2, rep2);
        rep.constants_refined = rep2.constants;
        double worst = 0.0;
        for (const auto& [k, v] : rep.constants) {
            if (k.rfind("C", 0) != 0) continue;
            auto it = rep2.constants.find(k);
            if (it == rep2.constants.end()) continue;
            double denom = std::max(std::abs(v), 1e-12);
            worst = std::max(worst, std::abs(it->second - v) / denom);
        }
        rep.stability = worst;
        if (worst > cfg.stability_tol && rep.verdict == "pass") rep.verdict = "fail";
    }
    rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                            t0)
                      .count();
    if (!cfg.out_path.empty()) {
        std::ofstream os(cfg.out_path);
        os << rep.to_json_text() << '\n';
    }
    if (!cfg.csv_dir.empty()) rep.write_csv(cfg.csv_dir);
    return rep;
}

}  // namespace varharm::harness
