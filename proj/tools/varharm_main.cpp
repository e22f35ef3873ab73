// varharm: variable-exponent harmonic-analysis toolkit CLI
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "varharm/atoms.hpp"
#include "varharm/csv.hpp"
#include "varharm/harness.hpp"
#include "varharm/maximal.hpp"
#include "varharm/potentials.hpp"
#include "varharm/var_lebesgue.hpp"
#include "varharm/weights.hpp"

using namespace varharm;
using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open: " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

Ball parse_ball(const std::string& s, int dim) {
    std::vector<double> parts;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) parts.push_back(std::stod(tok));
    if (dim == 1 && parts.size() == 2) return Ball(parts[0], parts[1]);
    if (dim == 2 && parts.size() == 3) return Ball(parts[0], parts[1], parts[2]);
    throw std::runtime_error("bad --ball: expected cx,r (n=1) or cx,cy,r (n=2)");
}

json atom_report_json(const AtomReport& rep) {
    json j;
    j["pass"] = rep.pass();
    j["support"] = {{"ok", rep.support_ok}, {"max_outside", rep.max_outside}};
    j["size"] = {{"ok", rep.size_ok}, {"q_norm", rep.q_norm}, {"cap", rep.q_cap}};
    j["moments"] = json::array();
    for (const auto& m : rep.moments)
        j["moments"].push_back({{"beta", m.beta},
                                {"residual", m.residual},
                                {"tolerance", m.tolerance},
                                {"ok", m.ok}});
    j["holder"] = {{"ok", rep.holder_ok}, {"s", rep.holder_s}, {"ratio", rep.holder_ratio}};
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"varharm: variable-exponent Lebesgue/Hardy toolkit"};
    app.require_subcommand(1);

    // ---- list
    auto* list = app.add_subcommand("list", "enumerate registered verification targets");

    // ---- verify
    auto* verify = app.add_subcommand("verify", "run a registered numerical verification");
    std::string target, config_path, out_path, csv_dir, p_spec;
    int vn = 0, vN = 0, vtrials = 0, vatoms = 0;
    double vL = 0.0, valpha = -1.0;
    std::uint64_t vseed = 0;
    bool no_refine = false;
    verify->add_option("target", target, "target id (see `varharm list`)")->required();
    verify->add_option("--config", config_path, "JSON config file");
    verify->add_option("--out", out_path, "write JSON report here");
    verify->add_option("--csv", csv_dir, "write per-case CSV into this directory");
    verify->add_option("--n", vn, "dimension (1 or 2)");
    verify->add_option("--N", vN, "points per axis");
    verify->add_option("--L", vL, "box half-width");
    verify->add_option("--seed", vseed, "rng seed");
    verify->add_option("--alpha", valpha, "order alpha of the potential");
    verify->add_option("--p", p_spec, "exponent spec (const:v, radial:<id>, even-sym:<id>, *.csv)");
    verify->add_option("--trials", vtrials, "trial count override");
    verify->add_option("--atoms", vatoms, "atom count override");
    verify->add_flag("--no-refine", no_refine, "skip the 2N stability re-fit");

    // ---- maximal
    auto* maximal = app.add_subcommand("maximal", "apply a maximal operator to a CSV field");
    std::string mop = "hl", min_path, mout_path;
    double malpha = 0.0, mrmin = 0.0, mrmax = 0.0;
    maximal->add_option("--op", mop, "hl | centered | frac | discrete | grand")->required();
    maximal->add_option("--alpha", malpha, "order for --op frac");
    maximal->add_option("--in", min_path, "input grid CSV")->required();
    maximal->add_option("--out", mout_path, "output grid CSV")->required();
    maximal->add_option("--rmin", mrmin, "smallest ball radius");
    maximal->add_option("--rmax", mrmax, "largest ball radius");

    // ---- weights
    auto* weights = app.add_subcommand("weights", "weight-class constants of a CSV weight");
    std::string wcheck, win_path;
    double wp = 2.0, wq = 2.0, ws = 1.5;
    weights->add_option("--check", wcheck, "a1 | ap | apq | rh")->required();
    weights->add_option("--in", win_path, "weight CSV")->required();
    weights->add_option("--p", wp, "exponent p (ap, apq)");
    weights->add_option("--q", wq, "exponent q (apq)");
    weights->add_option("--s", ws, "exponent s (rh)");

    // ---- rdf
    auto* rdf = app.add_subcommand("rdf", "Rubio de Francia majorant of a CSV function");
    std::string rin_path, rpdual_path, rout_path;
    double rmnorm = 0.0;
    rdf->add_option("--in", rin_path, "input g CSV")->required();
    rdf->add_option("--pdual", rpdual_path, "dual exponent CSV or spec")->required();
    rdf->add_option("--out", rout_path, "output Rg CSV")->required();
    rdf->add_option("--mnorm", rmnorm, "maximal-operator norm (0: estimate and double)");

    // ---- atom
    auto* atom = app.add_subcommand("atom", "construct and validate an atom");
    std::string aball, ap_spec = "const:2", aout_path;
    double aq = 64.0;
    int adeg = 0, an = 1, aN = 0;
    double aL = 0.0;
    std::uint64_t aseed = 42;
    atom->add_option("--ball", aball, "cx,r or cx,cy,r")->required();
    atom->add_option("--p", ap_spec, "exponent spec");
    atom->add_option("--q", aq, "integrability exponent");
    atom->add_option("--degree", adeg, "vanishing-moment degree");
    atom->add_option("--seed", aseed, "construction seed");
    atom->add_option("--out", aout_path, "atom CSV");
    atom->add_option("--n", an, "dimension");
    atom->add_option("--N", aN, "points per axis");
    atom->add_option("--L", aL, "box half-width");

    // ---- potential
    auto* potential = app.add_subcommand("potential", "apply the generalized potential");
    std::string pspec_path, pin_path, pout_path;
    double palpha = -1.0;
    potential->add_option("--alpha", palpha, "Riesz order (used when --spec is absent)");
    potential->add_option("--spec", pspec_path, "operator spec JSON file");
    potential->add_option("--in", pin_path, "input CSV")->required();
    potential->add_option("--out", pout_path, "output CSV")->required();

    // ---- farfield
    auto* farfield = app.add_subcommand("farfield", "far-field decay of a potential atom image");
    std::string fball = "0,0.25", fp_spec = "const:2", fspec_path;
    double falpha = 0.5, fq = 64.0;
    int fdeg = 0, fn = 1, fN = 0;
    double fL = 0.0;
    std::uint64_t fseed = 42;
    std::string fout_path;
    farfield->add_option("--alpha", falpha, "Riesz order (used when --spec is absent)");
    farfield->add_option("--spec", fspec_path, "operator spec JSON file");
    farfield->add_option("--ball", fball, "atom ball cx,r or cx,cy,r");
    farfield->add_option("--p", fp_spec, "exponent spec");
    farfield->add_option("--q", fq, "atom integrability exponent");
    farfield->add_option("--degree", fdeg, "atom moment degree");
    farfield->add_option("--seed", fseed, "atom seed");
    farfield->add_option("--n", fn, "dimension");
    farfield->add_option("--N", fN, "points per axis");
    farfield->add_option("--L", fL, "box half-width");
    farfield->add_option("--out", fout_path, "CSV output (default stdout)");

    // ---- weaktype
    auto* weaktype = app.add_subcommand("weaktype", "weighted weak-type level-set table");
    std::string tin_path, tw_path, tspec_path, tout_path;
    double talpha = 0.5;
    weaktype->add_option("--alpha", talpha, "Riesz order (used when --spec is absent)");
    weaktype->add_option("--spec", tspec_path, "operator spec JSON file");
    weaktype->add_option("--in", tin_path, "input f CSV")->required();
    weaktype->add_option("--w", tw_path, "weight CSV")->required();
    weaktype->add_option("--out", tout_path, "CSV output (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*list) {
            for (const auto& t : harness::registered_targets())
                std::printf("%-20s %s\n", t.c_str(), harness::describe(t).c_str());
            return 0;
        }
        if (*verify) {
            harness::Config cfg;
            if (!config_path.empty()) cfg = harness::Config::from_json_text(read_file(config_path));
            cfg.target = target;
            if (vn > 0) cfg.n = vn;
            if (vN > 0) cfg.N = vN;
            if (vL > 0.0) cfg.L = vL;
            if (vseed != 0) cfg.seed = vseed;
            if (valpha >= 0.0) cfg.alpha = valpha;
            if (!p_spec.empty()) cfg.p_spec = p_spec;
            if (vtrials > 0) cfg.trials = vtrials;
            if (vatoms > 0) cfg.atom_count = vatoms;
            if (no_refine) cfg.refine = false;
            if (!out_path.empty()) cfg.out_path = out_path;
            if (!csv_dir.empty()) cfg.csv_dir = csv_dir;
            harness::Report rep = harness::run(cfg);
            std::cout << rep.to_json_text() << '\n';
            return rep.exit_code();
        }
        if (*maximal) {
            GridFunction f = read_csv(min_path);
            const Grid& g = f.grid();
            BallFamily fam = (mrmin > 0.0 || mrmax > 0.0)
                                 ? BallFamily::for_grid(g, mrmin > 0 ? mrmin : g.spacing(),
                                                        mrmax > 0 ? mrmax
                                                                  : 2.0 * g.half_width() *
                                                                        std::sqrt(double(g.dim())))
                                 : BallFamily::for_grid(g);
            GridFunction out(g);
            if (mop == "hl") {
                out = hl_maximal(f, fam);
            } else if (mop == "centered") {
                out = centered_maximal(f, fam);
            } else if (mop == "frac") {
                out = fractional_maximal(f, malpha, fam);
            } else if (mop == "discrete") {
                auto [j_lo, j_hi] = dyadic_j_range(g);
                out = discrete_maximal(f, TestFunctionBank::standard(g.dim()).profiles.front(),
                                       j_lo, j_hi);
            } else if (mop == "grand") {
                out = grand_maximal(f, TestFunctionBank::standard(g.dim()), default_scales(g));
            } else {
                throw std::runtime_error("unknown --op: " + mop);
            }
            write_csv(mout_path, out);
            return 0;
        }
        if (*weights) {
            Weight w(read_csv(win_path));
            BallFamily fam = weights_default_family(w.grid());
            double value;
            if (wcheck == "a1")
                value = a1_constant(w, fam);
            else if (wcheck == "ap")
                value = ap_constant(w, wp, fam);
            else if (wcheck == "apq")
                value = apq_constant(w, wp, wq, fam);
            else if (wcheck == "rh")
                value = rh_constant(w, ws, fam);
            else
                throw std::runtime_error("unknown --check: " + wcheck);
            json j{{"check", wcheck}, {"constant", value}};
            std::cout << j.dump(2) << '\n';
            return 0;
        }
        if (*rdf) {
            GridFunction gfun = read_csv(rin_path);
            ExponentFunction pd = parse_exponent(gfun.grid(), rpdual_path);
            double m_norm = rmnorm;
            if (m_norm <= 0.0) {
                std::cerr << "estimating ||M|| on the dual space...\n";
                m_norm = 2.0 * estimate_operator_norm(pd, 32);
            }
            RdFResult res = rubio_de_francia(gfun, pd, m_norm);
            std::cerr << "truncation index " << res.truncation_index << ", tail bound "
                      << res.tail_bound << '\n';
            if (!res.ok()) std::cerr << "warning: certificate check failed\n";
            write_csv(rout_path, res.rg.values());
            json j{{"m_norm", res.m_norm_used},
                   {"truncation_index", res.truncation_index},
                   {"tail_bound", res.tail_bound},
                   {"dual_norm_ratio", res.dual_norm_ratio},
                   {"dual_norm_ok", res.dual_norm_ok},
                   {"a1_constant", res.a1_value},
                   {"a1_ok", res.a1_ok}};
            std::cout << j.dump(2) << '\n';
            return res.ok() ? 0 : 1;
        }
        if (*atom) {
            Grid g(an, aL > 0 ? aL : (an == 1 ? 8.0 : 4.0), aN > 0 ? aN : (an == 1 ? 1024 : 128));
            Ball ball = parse_ball(aball, an);
            ExponentFunction p = parse_exponent(g, ap_spec);
            Atom a = make_atom(g, ball, p, aq, adeg, aseed);
            if (!aout_path.empty()) write_csv(aout_path, a.values);
            std::cout << atom_report_json(validate_atom(a)).dump(2) << '\n';
            return 0;
        }
        if (*potential || *farfield || *weaktype) {
            auto load_spec = [](const std::string& path, double alpha, int dim) {
                if (!path.empty()) return OperatorSpec::from_json_text(read_file(path));
                if (alpha <= 0.0)
                    throw std::runtime_error("need --alpha > 0 or --spec");
                return OperatorSpec::riesz(dim, alpha);
            };
            if (*potential) {
                GridFunction f = read_csv(pin_path);
                OperatorSpec spec = load_spec(pspec_path, palpha, f.grid().dim());
                write_csv(pout_path, apply(spec, f));
                return 0;
            }
            if (*farfield) {
                Grid g(fn, fL > 0 ? fL : (fn == 1 ? 8.0 : 4.0),
                       fN > 0 ? fN : (fn == 1 ? 1024 : 128));
                Ball ball = parse_ball(fball, fn);
                OperatorSpec spec = load_spec(fspec_path, falpha, fn);
                ExponentFunction p = parse_exponent(g, fp_spec);
                Atom a = make_atom(g, ball, p, fq, fdeg, fseed);
                std::vector<double> radii;
                for (double r = 4.0 * ball.radius; r < g.half_width(); r *= 1.3)
                    radii.push_back(r);
                FarFieldReport rep = far_field_check(spec, a, radii);
                std::ostringstream os;
                os << "radius,value,bound\n";
                for (const auto& s : rep.samples)
                    os << s.radius << ',' << s.value << ','
                       << rep.c_fit / a.chi_norm *
                              std::pow(ball.radius, g.dim() + a.moment_degree + 1) *
                              std::pow(s.radius, rep.predicted_slope)
                       << '\n';
                if (fout_path.empty())
                    std::cout << os.str();
                else
                    std::ofstream(fout_path) << os.str();
                std::cerr << "fitted slope " << rep.fitted_slope << " predicted "
                          << rep.predicted_slope << '\n';
                return 0;
            }
            GridFunction f = read_csv(tin_path);
            Weight w(read_csv(tw_path));
            OperatorSpec spec = load_spec(tspec_path, talpha, f.grid().dim());
            GridFunction Tf = apply(spec, f);
            std::vector<double> lambdas;
            for (int k = 0; k < 12; ++k)
                lambdas.push_back(Tf.max_abs() * 0.02 * std::pow(1.45, k));
            WeakTypeReport rep = weak_type_check(spec, f, w, lambdas);
            std::ostringstream os;
            os << "radius,value,bound\n";
            for (const auto& row : rep.rows)
                os << row.lambda << ',' << row.lhs << ',' << row.bound << '\n';
            if (tout_path.empty())
                std::cout << os.str();
            else
                std::ofstream(tout_path) << os.str();
            std::cerr << "fitted C " << rep.c_fit << " (a1 of w: " << rep.a1_w << ")\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
