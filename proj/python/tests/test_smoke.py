import math

import numpy as np
import pytest

import qbloch


def binary_entropy(p):
    return -sum(x * math.log(x) for x in (p, 1 - p) if x > 0)


def test_states():
    rho = qbloch.from_bloch((1, 0, 0))
    assert np.allclose(rho, [[0.5, 0.5], [0.5, 0.5]])
    assert qbloch.to_bloch(rho) == pytest.approx((1, 0, 0))
    assert qbloch.eigenvalues((0, 0, 0.5)) == pytest.approx((0.75, 0.25))
    assert np.allclose(qbloch.log_density((0, 0, 0.5)), np.diag(np.log([0.75, 0.25])))
    assert qbloch.entropy((0, 0, 0)) == pytest.approx(math.log(2))
    assert qbloch.potential((0, 0, 1)) == 0.0
    with pytest.raises(qbloch.DomainError):
        qbloch.from_bloch((0, 0, 1.5))


def test_divergence_and_duality():
    assert qbloch.divergence((0, 0, 1), (0, 0, 0)) == pytest.approx(math.log(2))
    a, b = (0.1, 0.2, -0.3), (-0.4, 0.1, 0.5)
    assert qbloch.divergence(a, b) == pytest.approx(qbloch.divergence_matrix(a, b), abs=1e-12)
    d = qbloch.grad_potential((0, 0, 0.5))
    assert d[2] == pytest.approx(0.5 * math.log(3))
    assert qbloch.inverse_grad(d) == pytest.approx((0, 0, 0.5))
    assert qbloch.conjugate_potential((0, 0, 0)) == pytest.approx(math.log(2))
    with pytest.raises(ValueError):
        qbloch.divergence(a, (0, 0, 1))


def test_distances():
    n, e = (0, 0, 1), (1, 0, 0)
    assert qbloch.fubini_study(n, e) == pytest.approx(math.pi / 4)
    assert qbloch.geodesic(n, e) == pytest.approx(math.pi / 2)
    assert qbloch.bures(n, e) == pytest.approx(qbloch.euclidean(n, e) / 2)


def test_channels_and_capacity():
    c = qbloch.AffineChannel.depolarizing(0.5)
    assert c.apply((0, 0, 1)) == pytest.approx((0, 0, 0.5))
    report = qbloch.holevo_capacity(c, 2000)
    assert report["capacity_nats"] == pytest.approx(math.log(2) - binary_entropy(0.75), abs=1e-4)
    assert report["label"] == "depolarizing(t=0.5)"
    assert qbloch.holevo_capacity(qbloch.AffineChannel.depolarizing(0), 100)["degenerate"]
    with pytest.raises(qbloch.InvalidChannel):
        qbloch.AffineChannel(np.eye(3), (0.1, 0, 0))
    back = qbloch.AffineChannel.from_json(c.to_json())
    assert np.allclose(back.matrix, c.matrix)


def test_enclosing_balls():
    pts = [(0, 0, 0.5), (0, 0, -0.5)]
    expected = math.log(2) - binary_entropy(0.75)
    assert qbloch.meb_exact(pts)["radius"] == pytest.approx(expected)
    assert qbloch.meb_iterative(pts)["radius"] == pytest.approx(expected)
    assert qbloch.meb_grid(pts)["radius"] >= expected - 1e-12


def test_diagrams():
    sites = [(0, 0, 1), (0, 0, -1)]
    assert qbloch.classify("geodesic", sites, (0.6, 0, 0.8))[0] == 0
    queries = qbloch.sample_sphere(200, 3)
    ref = [s for s, _ in qbloch.assign("fubini-study", sites, queries)]
    for mode in ("bures", "geodesic", "euclidean"):
        assert [s for s, _ in qbloch.assign(mode, sites, queries)] == ref
    sec = qbloch.pure_limit_section(sites, 0.1, "divergence-primal", queries)
    assert [s for s, _ in sec] == ref
    with pytest.raises(qbloch.ModeMisuse):
        qbloch.assign("divergence-primal", sites, [(0, 0, 0.5)])
    with pytest.raises(ValueError):
        qbloch.classify("taxicab", sites, (0, 0, 1))
    assert qbloch.export_cells(sites, "geodesic", "off").startswith("OFF")
    assert set(qbloch.MODES) >= {"fubini-study", "divergence-dual"}


def test_verify():
    results = qbloch.verify("lemma")
    assert results and all(r["pass"] for r in results)
