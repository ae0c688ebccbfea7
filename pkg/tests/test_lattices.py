"""Lattice engine: LLL, enumeration, minima, CVP against brute force."""
import itertools
import math

import numpy as np
import pytest

from ringcf.lattices import (ZLattice, closest_vector, hermite_constant,
                             lll_reduce, shortest_vector, successive_minima,
                             unimodular_det)


def random_basis(rng, m, min_det=0.1):
    while True:
        b = rng.normal(size=(m, m))
        if abs(np.linalg.det(b)) > min_det:
            return b


def brute_svp(basis, upper):
    """Certified exhaustive shortest vector given an upper bound on lambda_1."""
    m = basis.shape[0]
    rows = np.linalg.norm(np.linalg.inv(basis), axis=1)
    box = np.ceil(upper * rows + 1e-9).astype(int)
    best = None
    for x in itertools.product(*[range(-r, r + 1) for r in box]):
        if all(v == 0 for v in x):
            continue
        n2 = float(np.sum((basis @ np.array(x, float)) ** 2))
        if best is None or n2 < best:
            best = n2
    return best


def brute_cvp(basis, target, upper):
    m = basis.shape[0]
    inv = np.linalg.inv(basis)
    center = inv @ target
    rows = np.linalg.norm(inv, axis=1)
    lo = np.floor(center - upper * rows - 1e-9).astype(int)
    hi = np.ceil(center + upper * rows + 1e-9).astype(int)
    best = None
    for x in itertools.product(*[range(a, b + 1) for a, b in zip(lo, hi)]):
        d = float(np.sum((basis @ np.array(x, float) - target) ** 2))
        if best is None or d < best:
            best = d
    return best


def test_lll_identity_unchanged():
    lat = ZLattice(np.eye(3))
    red, u = lll_reduce(lat)
    assert np.allclose(red.basis, np.eye(3))
    assert unimodular_det(u) in (1, -1)


def test_lll_shears_long_column():
    lat = ZLattice(np.array([[1.0, 100.0], [0.0, 1.0]]))
    red, u = lll_reduce(lat)
    assert max(np.linalg.norm(red.basis, axis=0)) <= 100.0
    assert unimodular_det(u) in (1, -1)
    # Lovasz condition holds post-hoc
    from ringcf.lattices import _gso
    norms, mu = _gso(red.basis)
    assert norms[1] >= (0.99 - mu[1, 0] ** 2) * norms[0] - 1e-12


def test_lll_preserves_determinant():
    rng = np.random.default_rng(3)
    b = random_basis(rng, 8)
    red, u = lll_reduce(ZLattice(b))
    assert unimodular_det(u) in (1, -1)
    assert abs(abs(np.linalg.det(red.basis)) - abs(np.linalg.det(b))) < 1e-8


def test_lll_rejects_bad_delta_and_singular():
    with pytest.raises(ValueError):
        lll_reduce(ZLattice(np.eye(2)), delta=0.1)
    with pytest.raises(ValueError):
        ZLattice(np.array([[1.0, 2.0], [2.0, 4.0]]))


def test_shortest_vector_trivial_cases():
    _, l = shortest_vector(ZLattice(np.eye(2)))
    assert abs(l - 1.0) < 1e-12
    v, l = shortest_vector(ZLattice(np.diag([3.0, 1.0])))
    assert abs(l - 1.0) < 1e-12 and tuple(map(abs, v)) == (0, 1)


def test_successive_minima_trivial():
    res = successive_minima(ZLattice(np.eye(3)), 3)
    assert np.allclose(res.lengths, [1, 1, 1])
    res = successive_minima(ZLattice(np.diag([1.0, 2.0, 3.0])), 3)
    assert np.allclose(res.lengths, [1, 2, 3])


def test_minima_tie_break_lexicographic():
    res = successive_minima(ZLattice(np.eye(2)), 2)
    # both minima have length 1; canonical lexicographic order
    assert res.vectors[0] == (-1, 0) or res.vectors[0] == (0, 1) or res.vectors[0] == (1, 0)
    assert len({tuple(v) for v in res.vectors}) == 2


def test_cvp_trivial_cases():
    lat = ZLattice(np.eye(2))
    _, pt, d = closest_vector(lat, np.array([0.4, -0.6]))
    assert np.allclose(pt, [0, -1]) and abs(d - math.hypot(0.4, 0.4)) < 1e-12
    # a lattice point maps to itself
    _, pt, d = closest_vector(lat, np.array([3.0, -2.0]))
    assert np.allclose(pt, [3, -2]) and d < 1e-9


def test_svp_cvp_match_brute_force_100_instances():
    rng = np.random.default_rng(4)
    for trial in range(100):
        m = int(rng.integers(2, 5))
        b = random_basis(rng, m)
        lat = ZLattice(b)
        red, _ = lll_reduce(lat)
        ub = math.sqrt(float(min(np.sum(red.basis ** 2, axis=0))))
        best = brute_svp(b, ub)
        _, l = shortest_vector(lat)
        assert abs(l * l - best) < 1e-9 * (1 + best)
        res = successive_minima(lat, m)
        assert abs(res.lengths[0] ** 2 - best) < 1e-9 * (1 + best)
        t = rng.normal(size=m) * 2.0
        ub_cvp = float(np.linalg.norm(b @ np.round(np.linalg.inv(b) @ t) - t)) + 1e-9
        bestd = brute_cvp(b, t, ub_cvp)
        _, _, d = closest_vector(lat, t)
        assert abs(d * d - bestd) < 1e-9 * (1 + bestd)


def test_cvp_beats_babai_rounding():
    rng = np.random.default_rng(5)
    for _ in range(50):
        m = int(rng.integers(2, 6))
        b = random_basis(rng, m)
        lat = ZLattice(b)
        t = rng.normal(size=m) * 3.0
        _, _, d = closest_vector(lat, t)
        babai = np.linalg.norm(b @ np.round(np.linalg.inv(b) @ t) - t)
        assert d <= babai + 1e-9


def test_minkowski_bounds_on_minima():
    rng = np.random.default_rng(6)
    for _ in range(50):
        m = int(rng.integers(2, 7))
        b = random_basis(rng, m)
        lat = ZLattice(b)
        det = abs(np.linalg.det(b))
        res = successive_minima(lat, m)
        kappa = hermite_constant(m)
        assert res.lengths[0] ** 2 <= kappa * det ** (2.0 / m) * (1 + 1e-9)
        prod = np.prod([l * l for l in res.lengths])
        assert prod <= kappa ** m * det ** 2 * (1 + 1e-9)


def test_hermite_constants():
    assert hermite_constant(1) == 1.0
    assert abs(hermite_constant(2) - 2 / math.sqrt(3)) < 1e-15
    assert hermite_constant(8) == 2.0
    assert abs(hermite_constant(9) - (4 / 3) ** 4) < 1e-12
    with pytest.raises(ValueError):
        hermite_constant(0)


def test_cvp_rejects_bad_target():
    lat = ZLattice(np.eye(2))
    with pytest.raises(ValueError):
        closest_vector(lat, np.array([1.0]))
    with pytest.raises(ValueError):
        closest_vector(lat, np.array([np.nan, 0.0]))
