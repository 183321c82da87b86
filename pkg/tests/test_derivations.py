import random

import pytest
from hypothesis import given, strategies as st

from dimalg.derivations import DimDerivation, commutator, from_line_derivation, zero_derivation
from dimalg.errors import ModelMismatch
from dimalg.power_ring import DimElement, PolyLineModel, odot
from dimalg.sampling import random_element, random_poly

from helpers import P

M = PolyLineModel.build(["x", "y"], ["t"], lines=["u1", "u2"])
seeds = st.integers(0, 2**32 - 1)


def el(coeff, dim):
    return DimElement(M, dim, P(M, coeff))


def random_derivation(rng: random.Random, shifts=True) -> DimDerivation:
    shift = (rng.randint(-1, 1), rng.randint(-1, 1)) if shifts else (0, 0)
    symbol = {n: random_poly(M.vars, rng, max_degree=2, max_terms=2) for n in M.vars.names}
    weights = [random_poly(M.vars, rng, max_degree=1, max_terms=2) for _ in M.lines]
    scale = DimElement(M, shift, P(M, rng.choice(["1", "2*t", "-t**-1"])))
    return DimDerivation(M, shift, symbol, weights, scale)


derivations = seeds.map(lambda s: random_derivation(random.Random(s)))
dimensionless = seeds.map(lambda s: random_derivation(random.Random(s), shifts=False))
elements = seeds.map(lambda s: random_element(M, random.Random(s)))


# -- examples ---------------------------------------------------------------------


def test_partial_x():
    dx = from_line_derivation(M, {"x": P(M, 1)})
    assert dx(el("x**2", [3, -1])) == el("2*x", [3, -1])


def test_euler_weight():
    D = from_line_derivation(M, {}, [P(M, 1), P(M, 0)])
    for n in range(-3, 4):
        assert D(M.unit([n, 0])) == el(str(n), [n, 0])


def test_derivation_kills_one():
    D = random_derivation(random.Random(3), shifts=False)
    assert D(M.one()).is_zero()


def test_commutator_examples():
    dx = from_line_derivation(M, {"x": P(M, 1)})
    xdx = from_line_derivation(M, {"x": P(M, "x")})
    dy = from_line_derivation(M, {"y": P(M, 1)})
    assert commutator(dx, xdx) == dx
    D = random_derivation(random.Random(11))
    assert commutator(D, D).is_zero()
    assert commutator(dx, dy).is_zero()


def test_from_line_derivation_examples():
    dx = from_line_derivation(M, {"x": P(M, 1)})
    assert dx(el("1", [-1, 0])).is_zero()
    D = from_line_derivation(M, {}, [P(M, 1), P(M, 0)])
    # D(u^-1) is forced by D(u * u^-1) = D(1) = 0
    assert D(el("1", [-1, 0])) == el("-1", [-1, 0])


def test_scale_is_absorbed():
    D = DimDerivation(M, (1, 0), {"x": P(M, 1)}, None, el("2*t", [1, 0]))
    assert D(M.gen("x")) == el("2*t", [1, 0])
    assert D.scale == M.unit([1, 0])


def test_model_mismatch():
    other = PolyLineModel.build(["x"], lines=["u"])
    with pytest.raises(ModelMismatch):
        zero_derivation(M)(other.one())


# -- properties --------------------------------------------------------------------


@given(derivations, elements, elements)
def test_leibniz_over_odot(D, a, b):
    assert D(odot(a, b)) == odot(D(a), b) + odot(a, D(b))


@given(derivations, elements, seeds)
def test_additive_on_common_slice(D, a, seed):
    b = random_element(M, random.Random(seed), dim=tuple(a.dim))
    assert D(a + b) == D(a) + D(b)
    assert D(a).dim == a.dim + D.shift


@given(dimensionless, elements, elements)
def test_duality_rule_on_negative_powers(D, s, r):
    sigma = odot(r, M.unit([-1, -2]))
    assert D(odot(sigma, s)) == odot(D(sigma), s) + odot(sigma, D(s))


@given(derivations, derivations, derivations)
def test_commutator_jacobi(a, b, c):
    total = commutator(a, commutator(b, c)) + commutator(b, commutator(c, a)) + commutator(c, commutator(a, b))
    assert total.is_zero()


@given(derivations, derivations, elements)
def test_commutator_acts_as_difference(a, b, x):
    assert commutator(a, b)(x) == a(b(x)) - b(a(x))
    assert commutator(a, b) == commutator(b, a).scaled(-1)


@given(dimensionless, dimensionless)
def test_dimensionless_closed_under_commutator(a, b):
    assert commutator(a, b).shift == (0, 0)
