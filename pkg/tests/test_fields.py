"""Number field arithmetic: catalog, embeddings, exact invariants."""
import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ringcf import (FieldMismatchError, NotTotallyRealError, catalog_field,
                    catalog_names, field_from_json, field_to_json,
                    rank_over_K, real_roots)
from ringcf.fields import NumberField

EXPECTED_DISCRIMINANTS = {
    "rational": 1,
    "quad-5": 5, "quad-8": 8, "quad-12": 12, "quad-13": 13, "quad-17": 17,
    "cubic-49": 49, "cubic-81": 81, "cubic-148": 148, "cubic-169": 169,
    "quartic-725": 725, "quartic-1125": 1125, "quartic-1600": 1600,
    "quartic-1957": 1957,
    "quintic-14641": 14641, "quintic-24217": 24217, "quintic-36497": 36497,
    "quintic-38569": 38569,
    "cyclotomic-23": 23 ** 10, "cyclotomic-29": 29 ** 13,
}


def test_catalog_complete():
    assert set(catalog_names()) == set(EXPECTED_DISCRIMINANTS)


@pytest.mark.parametrize("name", sorted(EXPECTED_DISCRIMINANTS))
def test_catalog_discriminants_exact(name):
    f = catalog_field(name)
    assert f.discriminant == EXPECTED_DISCRIMINANTS[name]
    det2 = np.linalg.det(f.embeddings) ** 2
    assert abs(det2 - f.discriminant) <= 1e-9 * f.discriminant


def test_real_roots_quadratic_closed_form():
    # x^2 - x - 1: golden ratio pair
    r = real_roots([-1, -1, 1])
    assert np.allclose(r, [(1 - math.sqrt(5)) / 2, (1 + math.sqrt(5)) / 2],
                       atol=1e-14)
    r = real_roots([-2, 0, 1])
    assert np.allclose(r, [-math.sqrt(2), math.sqrt(2)], atol=1e-14)


def test_real_roots_rejects_complex():
    with pytest.raises(NotTotallyRealError):
        real_roots([1, 0, 1])  # x^2 + 1


def test_real_roots_rejects_repeated():
    with pytest.raises(NotTotallyRealError):
        real_roots([1, -2, 1])  # (x-1)^2


def test_roots_are_polished():
    for name in ("quintic-38569", "cyclotomic-29"):
        f = catalog_field(name)
        mp = [float(c) for c in f.min_poly]
        vals = [abs(sum(c * r ** i for i, c in enumerate(mp))) for r in f.roots]
        assert max(vals) < 1e-9 * max(1.0, max(abs(r) for r in f.roots) ** f.degree)


def test_embedding_is_ring_homomorphism():
    f = catalog_field("quartic-725")
    rng = np.random.default_rng(0)
    for _ in range(50):
        a = f.element(rng.integers(-5, 6, size=4))
        b = f.element(rng.integers(-5, 6, size=4))
        assert np.allclose((a * b).embed(), a.embed() * b.embed(), atol=1e-8)
        assert np.allclose((a + b).embed(), a.embed() + b.embed())


def test_multiplication_example_matrix():
    # over Q(sqrt 3): multiplying by 1 + sqrt(3) acts as [[1,3],[1,1]]
    f = catalog_field("quad-12")
    a = f.element([1, 1])
    assert a.mul_matrix() == [[1, 3], [1, 1]]


def test_norm_and_trace_exact():
    f = catalog_field("quad-5")
    theta = f.theta()
    assert theta.norm() == -1 and theta.trace() == 1
    one = f.one()
    assert one.norm() == 1 and one.trace() == f.degree
    # norm is multiplicative
    rng = np.random.default_rng(1)
    g = catalog_field("cubic-49")
    for _ in range(20):
        a = g.element(rng.integers(-4, 5, size=3))
        b = g.element(rng.integers(-4, 5, size=3))
        assert (a * b).norm() == a.norm() * b.norm()


def test_field_element_inverse():
    f = catalog_field("quad-12")
    x = f.field_element([Fraction(2), Fraction(1)])  # 2 + sqrt(3)
    inv = x.inverse()
    assert (x * inv).coords == (Fraction(1), Fraction(0))
    with pytest.raises(ZeroDivisionError):
        f.field_element([0, 0]).inverse()


def test_field_mismatch_raises():
    a = catalog_field("quad-5").element([1, 0])
    b = catalog_field("quad-8").element([1, 0])
    with pytest.raises(FieldMismatchError):
        a * b


def test_rank_dependent_rows():
    # (3 + sqrt 3) * (1 + sqrt 3, 2 + sqrt 3) = (6 + 4 sqrt 3, 9 + 5 sqrt 3)
    f = catalog_field("quad-12")
    rows = [[f.element([1, 1]), f.element([2, 1])],
            [f.element([6, 4]), f.element([9, 5])]]
    assert rank_over_K(f, rows) == 1


def test_rank_identity_and_example_matrix():
    f = catalog_field("quad-5")
    eye = [[f.one(), f.zero()], [f.zero(), f.one()]]
    assert rank_over_K(f, eye) == 2
    # relay coefficient matrix of the worked two-relay example
    rows = [[f.element([-15, 34]), f.element([12, 2])],
            [f.element([3, 9]), f.element([-15, 34])]]
    assert rank_over_K(f, rows) == 2


def test_rank_matches_single_embedding_float_rank():
    f = catalog_field("quad-5")
    rng = np.random.default_rng(2)
    for _ in range(50):
        rows = [[f.element(rng.integers(-3, 4, size=2)) for _ in range(3)]
                for _ in range(3)]
        exact = rank_over_K(f, rows)
        for j in range(f.degree):
            emb = np.array([[sum(float(c) * f.embeddings[j, i]
                                 for i, c in enumerate(x.coords))
                             for x in row] for row in rows])
            sv = np.linalg.svd(emb, compute_uv=False)
            float_rank = int(np.sum(sv > 1e-6 * max(1.0, sv[0])))
            assert float_rank == exact


def test_json_round_trip():
    f = catalog_field("quartic-1600")
    doc = field_to_json(f)
    g = field_from_json(json.loads(json.dumps(doc)))
    assert g.discriminant == 1600
    assert g.mult_table == f.mult_table


def test_loader_rejects_non_monic_and_bad_basis():
    with pytest.raises(ValueError):
        field_from_json({"name": "x", "min_poly": [1, 2], "basis": [[1]]})
    with pytest.raises(ValueError):
        # power basis of Q(sqrt 5) misses (1+sqrt 5)/2: not the listed basis,
        # but a basis whose first element is not 1 must be rejected
        NumberField("bad", [-1, -1, 1], [[0, 1], [1]])


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-6, 6), min_size=3, max_size=3),
       st.lists(st.integers(-6, 6), min_size=3, max_size=3),
       st.lists(st.integers(-6, 6), min_size=3, max_size=3))
def test_ring_axioms(xs, ys, zs):
    f = catalog_field("cubic-81")
    a, b, c = f.element(xs), f.element(ys), f.element(zs)
    assert (a * b).coords == (b * a).coords
    assert ((a * b) * c).coords == (a * (b * c)).coords
    assert (a * (b + c)).coords == (a * b + a * c).coords
