#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "varharm/atoms.hpp"
#include "varharm/csv.hpp"
#include "varharm/harness.hpp"
#include "varharm/maximal.hpp"
#include "varharm/potentials.hpp"
#include "varharm/rng.hpp"
#include "varharm/var_lebesgue.hpp"
#include "varharm/weights.hpp"

namespace py = pybind11;
using namespace varharm;

namespace {

GridFunction to_grid_function(const Grid& g, py::array_t<double, py::array::c_style> arr) {
    auto buf = arr.request();
    if (static_cast<std::size_t>(buf.size) != g.size())
        throw std::invalid_argument("array size does not match grid");
    const double* ptr = static_cast<const double*>(buf.ptr);
    return GridFunction(g, std::vector<double>(ptr, ptr + buf.size));
}

py::array_t<double> to_array(const GridFunction& f) {
    py::array_t<double> out(static_cast<py::ssize_t>(f.size()));
    std::copy(f.values().begin(), f.values().end(), out.mutable_data());
    return out;
}

}  // namespace

PYBIND11_MODULE(_varharm, m) {
    m.doc() = "variable-exponent Lebesgue/Hardy toolkit";

    py::class_<Grid>(m, "Grid")
        .def(py::init<int, double, int>(), py::arg("dim"), py::arg("half_width"),
             py::arg("points_per_axis"))
        .def_property_readonly("dim", &Grid::dim)
        .def_property_readonly("half_width", &Grid::half_width)
        .def_property_readonly("points_per_axis", &Grid::points_per_axis)
        .def_property_readonly("spacing", &Grid::spacing)
        .def("__len__", &Grid::size)
        .def("point", [](const Grid& g, std::size_t i) -> py::object {
            auto p = g.point(i);
            if (g.dim() == 1) return py::make_tuple(p[0]);
            return py::make_tuple(p[0], p[1]);
        });

    py::class_<Ball>(m, "Ball")
        .def(py::init<double, double>(), py::arg("cx"), py::arg("r"))
        .def(py::init<double, double, double>(), py::arg("cx"), py::arg("cy"), py::arg("r"))
        .def_readonly("radius", &Ball::radius)
        .def("volume", &Ball::volume);

    py::class_<OrthogonalMatrix>(m, "OrthogonalMatrix")
        .def(py::init<int, std::vector<double>>(), py::arg("dim"), py::arg("row_major"))
        .def_static("identity", &OrthogonalMatrix::identity)
        .def_static("reflection_1d", &OrthogonalMatrix::reflection_1d)
        .def_static("rotation_2d", &OrthogonalMatrix::rotation_2d);

    py::class_<GridFunction>(m, "GridFunction")
        .def(py::init(&to_grid_function), py::arg("grid"), py::arg("values"))
        .def_property_readonly("grid", &GridFunction::grid)
        .def("values", &to_array)
        .def("max_abs", &GridFunction::max_abs);

    m.def("indicator", &indicator);
    m.def("integrate",
          [](const GridFunction& f, std::optional<Ball> region) {
              return integrate(f, region);
          },
          py::arg("f"), py::arg("region") = std::nullopt);
    m.def("pullback", &pullback);
    m.def("read_csv", [](const std::string& p) { return read_csv(p); });
    m.def("write_csv", [](const std::string& p, const GridFunction& f) { write_csv(p, f); });

    py::class_<ExponentFunction>(m, "ExponentFunction")
        .def(py::init<GridFunction>())
        .def_static("constant", &ExponentFunction::constant)
        .def_property_readonly("p_minus", &ExponentFunction::p_minus)
        .def_property_readonly("p_plus", &ExponentFunction::p_plus)
        .def("values", [](const ExponentFunction& p) { return to_array(p.values()); });
    m.def("parse_exponent", &parse_exponent);
    m.def("modular", &modular);
    m.def("luxemburg_norm", [](const GridFunction& f, const ExponentFunction& p) {
        LuxemburgResult r = luxemburg_norm(f, p);
        return py::dict(py::arg("norm") = r.norm, py::arg("iterations") = r.iterations);
    });
    m.def("conjugate", &conjugate);
    m.def("sobolev_shift", &sobolev_shift);
    m.def("duality_lower_bound", &duality_lower_bound, py::arg("f"), py::arg("p"),
          py::arg("trials"), py::arg("seed") = 42);
    m.def("log_holder_score", &log_holder_score);

    py::class_<BallFamily>(m, "BallFamily")
        .def_static("for_grid", py::overload_cast<const Grid&>(&BallFamily::for_grid))
        .def_static("for_grid_range",
                    py::overload_cast<const Grid&, double, double, bool>(&BallFamily::for_grid),
                    py::arg("grid"), py::arg("r_min"), py::arg("r_max"),
                    py::arg("centered") = false)
        .def("radii", &BallFamily::radii);
    m.def("hl_maximal", &hl_maximal);
    m.def("centered_maximal", &centered_maximal);
    m.def("fractional_maximal", &fractional_maximal);
    m.def("discrete_maximal",
          [](const GridFunction& f, int j_lo, int j_hi) {
              return discrete_maximal(f, TestFunctionBank::standard(f.grid().dim()).profiles.front(),
                                      j_lo, j_hi);
          },
          py::arg("f"), py::arg("j_lo"), py::arg("j_hi"));
    m.def("grand_maximal", [](const GridFunction& f) {
        return grand_maximal(f, TestFunctionBank::standard(f.grid().dim()),
                             default_scales(f.grid()));
    });
    m.def("dyadic_j_range", &dyadic_j_range);
    m.def("estimate_operator_norm", &estimate_operator_norm, py::arg("p"),
          py::arg("trials") = 64, py::arg("seed") = 42);

    py::class_<Weight>(m, "Weight")
        .def(py::init<GridFunction>())
        .def_static("floored", &Weight::floored, py::arg("values"), py::arg("floor") = 1e-300)
        .def("values", [](const Weight& w) { return to_array(w.values()); })
        .def("pow", &Weight::pow)
        .def("total", &Weight::total, py::arg("region") = std::nullopt);
    m.def("weights_default_family", &weights_default_family);
    m.def("a1_constant", &a1_constant);
    m.def("ap_constant", &ap_constant);
    m.def("apq_constant", &apq_constant);
    m.def("rh_constant", &rh_constant);
    m.def("act", &act);
    m.def("rubio_de_francia",
          [](const GridFunction& g, const ExponentFunction& pd, double m_norm, double tol) {
              RdFResult r = rubio_de_francia(g, pd, m_norm, tol);
              return py::dict(py::arg("rg") = r.rg, py::arg("truncation_index") = r.truncation_index,
                              py::arg("m_norm_used") = r.m_norm_used,
                              py::arg("tail_bound") = r.tail_bound,
                              py::arg("dual_norm_ratio") = r.dual_norm_ratio,
                              py::arg("dual_norm_ok") = r.dual_norm_ok,
                              py::arg("a1_value") = r.a1_value, py::arg("a1_ok") = r.a1_ok);
          },
          py::arg("g"), py::arg("p_dual"), py::arg("m_norm"), py::arg("tol") = 0.0);

    py::class_<Atom>(m, "Atom")
        .def_readonly("ball", &Atom::ball)
        .def_readonly("q_exponent", &Atom::q_exponent)
        .def_readonly("moment_degree", &Atom::moment_degree)
        .def_readonly("chi_norm", &Atom::chi_norm)
        .def_property_readonly("values", [](const Atom& a) { return to_array(a.values); });
    m.def("make_atom", &make_atom, py::arg("grid"), py::arg("ball"), py::arg("p"),
          py::arg("q"), py::arg("degree"), py::arg("seed"));
    m.def("validate_atom", [](const Atom& a) {
        AtomReport r = validate_atom(a);
        return py::dict(py::arg("pass") = r.pass(), py::arg("support_ok") = r.support_ok,
                        py::arg("size_ok") = r.size_ok, py::arg("moments_ok") = r.moments_ok,
                        py::arg("holder_ok") = r.holder_ok, py::arg("q_norm") = r.q_norm,
                        py::arg("q_cap") = r.q_cap);
    });
    py::class_<FiniteDecomposition>(m, "FiniteDecomposition")
        .def(py::init([](std::vector<double> lambdas, std::vector<Atom> atoms) {
            return FiniteDecomposition{std::move(lambdas), std::move(atoms)};
        }));
    m.def("finite_atomic_norm", &finite_atomic_norm);
    m.def("weighted_hardy_norm",
          [](const GridFunction& f, double p0, const Weight& w) {
              return weighted_hardy_norm(f, p0, w, TestFunctionBank::standard(f.grid().dim()));
          });
    m.def("weighted_finite_atomic_norm", &weighted_finite_atomic_norm);

    py::class_<OperatorSpec>(m, "OperatorSpec")
        .def(py::init<double, std::vector<OrthogonalMatrix>, std::vector<double>>(),
             py::arg("alpha"), py::arg("matrices"), py::arg("exponents"))
        .def_static("riesz", &OperatorSpec::riesz)
        .def_static("from_json", &OperatorSpec::from_json_text)
        .def("to_json", &OperatorSpec::to_json_text)
        .def_property_readonly("alpha", &OperatorSpec::alpha)
        .def_property_readonly("m", &OperatorSpec::m);
    m.def("apply_potential",
          [](const OperatorSpec& s, const GridFunction& f) { return apply(s, f); });
    m.def("apply_potential_at",
          [](const OperatorSpec& s, const GridFunction& f, double x, double y) {
              return apply_at(s, f, {x, y});
          },
          py::arg("spec"), py::arg("f"), py::arg("x"), py::arg("y") = 0.0);
    m.def("far_field_check",
          [](const OperatorSpec& s, const Atom& a, const std::vector<double>& radii) {
              FarFieldReport r = far_field_check(s, a, radii);
              return py::dict(py::arg("fitted_slope") = r.fitted_slope,
                              py::arg("predicted_slope") = r.predicted_slope,
                              py::arg("c_fit") = r.c_fit, py::arg("samples_used") = r.samples_used,
                              py::arg("budget_ok") = r.budget_ok);
          });
    m.def("riesz_moment_check", [](double alpha, const Atom& a, int max_degree) {
        MomentReport r = riesz_moment_check(alpha, a, max_degree);
        py::list rows;
        for (const auto& row : r.rows)
            rows.append(py::dict(py::arg("beta") = row.beta, py::arg("value") = row.value,
                                 py::arg("quad_budget") = row.quad_budget,
                                 py::arg("tail_budget") = row.tail_budget,
                                 py::arg("verdict") = row.verdict));
        return py::dict(py::arg("rows") = rows, py::arg("all_pass") = r.all_pass,
                        py::arg("cond1_c_fit") = r.cond1_c_fit);
    });
    m.def("weak_type_check",
          [](const OperatorSpec& s, const GridFunction& f, const Weight& w,
             const std::vector<double>& lambdas) {
              WeakTypeReport r = weak_type_check(s, f, w, lambdas);
              py::list rows;
              for (const auto& row : r.rows)
                  rows.append(py::dict(py::arg("lam") = row.lambda, py::arg("lhs") = row.lhs,
                                       py::arg("bound") = row.bound,
                                       py::arg("truncated") = row.truncated));
              return py::dict(py::arg("rows") = rows, py::arg("c_fit") = r.c_fit,
                              py::arg("a1_w") = r.a1_w);
          });

    m.def("registered_targets", &harness::registered_targets);
    m.def("describe_target", &harness::describe);
    m.def("run_check_json", [](const std::string& config_json) {
        harness::Config cfg = harness::Config::from_json_text(config_json);
        return harness::run(cfg).to_json_text();
    });
}
