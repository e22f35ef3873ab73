import math

import numpy as np
import pytest

import varharm as vh


@pytest.fixture(scope="module")
def grid():
    return vh.Grid(1, 4.0, 256)


def test_indicator_and_integrate(grid):
    chi = vh.indicator(grid, vh.Ball(0.0, 1.0))
    assert abs(vh.integrate(chi) - 2.0) <= grid.spacing


def test_luxemburg_norm(grid):
    chi = vh.indicator(grid, vh.Ball(0.0, 1.0))
    p = vh.ExponentFunction.constant(grid, 2.0)
    r = vh.luxemburg_norm(chi, p)
    assert r["norm"] == pytest.approx(math.sqrt(2.0), rel=1e-4)


def test_numpy_round_trip(grid):
    values = np.linspace(-1.0, 1.0, len(grid))
    f = vh.GridFunction(grid, values)
    assert np.allclose(f.values(), values)
    assert abs(vh.integrate(f)) < 1e-10


def test_maximal_sandwich(grid):
    rng = np.random.default_rng(0)
    f = vh.GridFunction(grid, rng.standard_normal(len(grid)))
    fam = vh.BallFamily.for_grid(grid)
    mu = vh.hl_maximal(f, fam).values()
    mc = vh.centered_maximal(f, fam).values()
    assert np.all(mc <= mu)
    assert np.all(0.5 * mu <= mc)


def test_riesz_value():
    g = vh.Grid(1, 2.0, 1024)
    chi = vh.indicator(g, vh.Ball(0.0, 1.0))
    spec = vh.OperatorSpec.riesz(1, 0.5)
    v = vh.apply_potential_at(spec, chi, 0.0)
    assert v == pytest.approx(4.0, rel=0.05)


def test_atom_and_validation(grid):
    p = vh.ExponentFunction.constant(grid, 1.5)
    a = vh.make_atom(grid, vh.Ball(0.0, 0.5), p, 8.0, 1, 7)
    rep = vh.validate_atom(a)
    assert rep["pass"]
    assert rep["q_norm"] <= rep["q_cap"]


def test_rubio_de_francia(grid):
    p = vh.ExponentFunction.constant(grid, 2.0)
    chi = vh.indicator(grid, vh.Ball(0.0, 0.5))
    res = vh.rubio_de_francia(chi, p, 4.0)
    assert res["dual_norm_ok"] and res["a1_ok"]
    assert np.all(res["rg"].values() >= chi.values())


def test_weight_constants(grid):
    w = vh.Weight(vh.GridFunction(grid, np.ones(len(grid))))
    fam = vh.weights_default_family(grid)
    assert vh.a1_constant(w, fam) == pytest.approx(1.0, abs=0.05)
    assert vh.rh_constant(w, 1.5, fam) == pytest.approx(1.0, abs=0.05)


def test_harness_run():
    rep = vh.run_check("remark22-exponents", N=128)
    assert rep["verdict"] == "pass"
    assert len(rep["cases"]) == 3


def test_registered_targets():
    targets = vh.registered_targets()
    assert "theorem21" in targets and len(targets) == 15
    assert vh.describe_target("ineqmax")
