import math

import numpy as np
import pytest

import logpot

J01 = 2.404825557695773


def test_disc_spectrum(validate):
    eigs = logpot.leading_eigs(1.0, 3)
    validate(eigs, "disc")
    assert [e["tau"] for e in eigs] == pytest.approx([1 / J01**2] * 3, rel=1e-12)
    assert logpot.bessel_zero(1, 1) == pytest.approx(3.831705970207512, abs=1e-12)
    neg = logpot.neg_eig(2.0)
    assert neg["kind"] == "negative" and neg["tau"] < 0
    assert neg["tau"] == pytest.approx(-4 / logpot.mu_modified(2.0) ** 2, rel=1e-12)


def test_shapes_and_mask():
    s = logpot.Shape("annulus:1,0.5")
    assert s.kind == "annulus"
    assert s.contains(0.75, 0) and not s.contains(0.1, 0)
    assert logpot.Shape(s.to_dict()).to_dict() == s.to_dict()
    m = logpot.rasterize({"kind": "disc", "radius": 1.0}, 0.1)
    assert m.occupancy.shape == (m.ny, m.nx)
    assert int(m.occupancy.sum()) == len(m) == m.cells
    assert m.centers().shape == (m.cells, 2)
    assert abs(m.area - math.pi) < 0.1
    back = logpot.Mask.from_pbm(m.to_pbm())
    assert back.same_cells(m)


def test_bad_shape_raises():
    with pytest.raises(logpot.InputError):
        logpot.Shape({"kind": "disc", "radius": 1, "colour": "red"})
    with pytest.raises(ValueError):
        logpot.rasterize("disc:-1", 0.1)


def test_solve_unit_disc(validate):
    m = logpot.rasterize("disc:1", 0.1)
    r = logpot.solve(m, topk=3, vectors=True)
    validate(r, "spectral")
    assert r["tau_top"][0] == pytest.approx(1 / J01**2, rel=0.03)
    assert len(r["vectors"]) == 3 and len(r["vectors"][0]) == m.cells
    a = logpot.matrix(m)
    assert np.allclose(a, a.T)
    w = np.linalg.eigvalsh(a)
    assert w[-1] == pytest.approx(r["tau_top"][0], rel=1e-9)


def test_energy_matches_matrix():
    m = logpot.rasterize("disc:0.4", 0.1)
    u = np.linspace(0.1, 1.0, m.cells)
    a = logpot.matrix(m)
    assert logpot.energy(m, u) == pytest.approx(m.h**2 * u @ a @ u, rel=1e-12)


def test_polarization_does_not_decrease_energy():
    m = logpot.rasterize("ellipse:0.5,0.25,0.3,0.1,0", 0.05)
    rng = np.random.default_rng(1)
    u = rng.random(m.cells)
    pm, pu = logpot.polarize_values(m, u, [1, 0], 0.0)
    assert pm.cells == m.cells
    assert logpot.energy(pm, pu) >= logpot.energy(m, u) - 1e-12 * abs(logpot.energy(m, u))


def test_rearrangements_and_gap():
    m = logpot.rasterize("ellipse:0.4,0.2,0.5", 0.05)
    p = logpot.polarize(m, [0, 1], 0.0)
    s = logpot.schwarz(m)
    assert p.cells == m.cells == s.cells
    g = logpot.polarization_gap(m)
    assert g["gap"] >= -g["tolerance"]
    with pytest.raises(logpot.InputError):
        logpot.polarization_gap(logpot.rasterize("disc:1", 0.2))


def test_tdiam(validate):
    r = logpot.rho_n("disc:1", 4)
    assert r["rho_n"] == pytest.approx(4 ** (1 / 3), rel=1e-6)
    assert r["points"].shape == (4, 2)
    assert logpot.robin_constant("disc:1")["tdiam"] == pytest.approx(1.0, rel=0.02)
    t = logpot.tdiam("ellipse:2,0.25", n_max=8)
    validate(t, "tdiam")
    assert t["tdiam"] == pytest.approx(1.125, rel=0.03)
    assert t["classification"] == "indefinite"


def test_experiment(validate):
    assert "annulus" in logpot.experiment_names()
    rep = logpot.experiment("two-ball", {"h": 0.2, "d": [3, 6]})
    validate(rep, "report")
    assert rep["verdict"] == "pass"
    with pytest.raises(logpot.InputError, match="unknown field"):
        logpot.experiment("two-ball", {"hh": 0.2})
    with pytest.raises(logpot.InputError):
        logpot.experiment("no-such-experiment")


def test_refine(validate):
    t = logpot.refine("disc:1", [0.2, 0.1, 0.05])
    validate(t, "refine")
    assert t["top"]["limit"] == pytest.approx(1 / J01**2, rel=0.01)
