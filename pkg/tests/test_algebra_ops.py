import random

import pytest
import sympy
from hypothesis import given, strategies as st

from dimalg.algebra_ops import (
    ProductModel,
    ReductionData,
    is_coisotrope,
    lift_from_reduced,
    product_casimir,
    product_jacobi,
    product_poly_poisson,
    project_to_reduced,
    reduce,
    tensor_heterogeneous,
)
from dimalg.bracket import BracketSpec, evaluate, from_jacobi, verify_poisson
from dimalg.errors import DimensionIncompatible, IdealizerViolation, IllDefined, NonzeroBracketDimension, NotACasimir, NotCoisotropic
from dimalg.power_ring import CoordIdeal, DimElement, PolyLineModel, odot
from dimalg.sampling import random_element

from helpers import P, canonical_spec, contact_spec, from_sympy, symbols_for, trivial_jacobi, unit_free_jacobi

seeds = st.integers(0, 2**32 - 1)
R4 = canonical_spec([("q1", "p1"), ("q2", "p2")])


def el(model, coeff, dim):
    return DimElement(model, dim, P(model, coeff))


def plane(names, line, expr="1"):
    M = PolyLineModel.build(list(names), lines=[line])
    return BracketSpec(M, (0,), {tuple(names): el(M, expr, [0])})


# -- coisotropes and reduction ----------------------------------------------------------


def test_is_coisotrope_examples():
    assert is_coisotrope(R4, CoordIdeal({"p1"}))
    assert not is_coisotrope(R4, CoordIdeal({"q1", "p1"}))
    assert is_coisotrope(contact_spec(), CoordIdeal({"z"}))


def test_reduce_r4():
    red = reduce(R4, ReductionData(CoordIdeal({"p1"}), ("q2", "p2")))
    assert red.model.vars.names == ("q2", "p2")
    assert red == canonical_spec([("q2", "p2")])
    assert verify_poisson(red).passed


def test_reduce_to_a_point():
    # the origin is coisotropic for {x,y} = x, and only the unit powers survive
    B = plane(("x", "y"), "u", "x")
    red = reduce(B, ReductionData(CoordIdeal({"x", "y"}), ()))
    assert red.model.vars.names == () and red.table == {}
    assert red.model.lines == ("u",)
    # for the symplectic R^4 the origin is not coisotropic
    with pytest.raises(NotCoisotropic):
        reduce(R4, ReductionData(CoordIdeal(set(R4.model.vars.ordinary)), ()))


def test_reduce_errors():
    with pytest.raises(IdealizerViolation) as info:
        reduce(R4, ReductionData(CoordIdeal({"p1"}), ("q1", "q2", "p2")))
    assert info.value.witness == ("q1", "p1", "1 @ [0]")
    with pytest.raises(NotCoisotropic):
        reduce(R4, ReductionData(CoordIdeal({"q1", "p1"}), ("q2",)))


def test_reduce_ill_defined():
    # {q2, p2} = q1 depends on the collapsed direction q1
    M = PolyLineModel.build(["q1", "p1", "q2", "p2"], lines=["u"])
    B = BracketSpec(M, (0,), {("q1", "p1"): el(M, "1", [0]), ("q2", "p2"): el(M, "q1", [0])})
    with pytest.raises(IllDefined):
        reduce(B, ReductionData(CoordIdeal({"p1"}), ("q2", "p2")))


@given(seeds)
def test_reducibility_identity(seed):
    rng = random.Random(seed)
    R = ReductionData(CoordIdeal({"p1"}), ("q2", "p2"))
    red = reduce(R4, R)
    M = R4.model
    a, b = random_element(red.model, rng, 3), random_element(red.model, rng, 3)
    p1 = M.gen("p1")
    A = lift_from_reduced(a, M) + odot(p1, random_element(M, rng, dim=tuple(a.dim)))
    B = lift_from_reduced(b, M) + odot(p1, random_element(M, rng, dim=tuple(b.dim)))
    assert project_to_reduced(evaluate(R4, A, B), R, red.model) == evaluate(red, a, b)


# -- tensor product -----------------------------------------------------------------------


def test_tensor_of_two_planes():
    A, B = plane(("a1", "a2"), "u"), plane(("b1", "b2"), "w", "b1")
    T = tensor_heterogeneous(A, B)
    assert T.model.vars.names == ("a1", "a2", "b1", "b2") and T.model.m == 2
    assert not T.model.vars.invertible
    assert T.entry("a1", "b1").is_zero() and T.entry("a2", "b2").is_zero()
    assert T.entry("a1", "a2") == el(T.model, "1", [0, 0])
    assert verify_poisson(T).passed


def test_tensor_with_trivial_is_reindexing():
    A = plane(("a1", "a2"), "u")
    point = BracketSpec(PolyLineModel.build(), ())
    T = tensor_heterogeneous(A, point)
    assert T.model.generators == A.model.generators
    assert T.entry("a1", "a2").coeff == A.entry("a1", "a2").coeff


def test_tensor_rejects_nonzero_dimension():
    with pytest.raises(NonzeroBracketDimension):
        tensor_heterogeneous(contact_spec(), plane(("b1", "b2"), "w"))


# -- Jacobi product --------------------------------------------------------------------------


def test_jacobi_product_of_trivials_is_zero():
    T = from_jacobi(trivial_jacobi())
    prod = product_jacobi(T, T)
    assert prod.table == {}


def test_jacobi_product_contact_entries():
    C = contact_spec()
    prod = product_jacobi(C, C)
    M = prod.model
    assert prod.dim == (-1, 0)
    # entries solved by hand from theta = t u1^-1 u2 being central
    expected = {
        ("q_1", "p_1"): "u_1**-1",
        ("p_1", "z_1"): "-p_1*u_1**-1",
        ("z_1", "t"): "-t*u_1**-1",
        ("z_1", "u_1"): "-1",
        ("q_2", "p_2"): "t*u_1**-1",
        ("p_2", "z_2"): "-p_2*t*u_1**-1",
        ("z_2", "t"): "t**2*u_1**-1",
        ("z_2", "u_2"): "-t*u_1**-1*u_2",
    }
    got = {k: v.to_ext() for k, v in prod.table.items()}
    assert set(got) == set(expected)
    for k, text in expected.items():
        assert got[k] == P_ext(M, text)


def P_ext(M, text):
    return from_sympy(sympy.sympify(text, locals=symbols_for(M.ext_vars.names)), M.ext_vars)


def test_jacobi_product_contact_with_trivial():
    C = contact_spec()
    T = from_jacobi(trivial_jacobi())
    prod = product_jacobi(C, T)
    pm = ProductModel(C.model, T.model)
    for g in C.model.generators:
        for h in C.model.generators:
            lhs = evaluate(prod, pm.include_left(C.model.gen(g)), pm.include_left(C.model.gen(h)))
            assert lhs == pm.include_left(evaluate(C, C.model.gen(g), C.model.gen(h)))
    assert evaluate(prod, pm.include_left(C.model.gen("u")), pm.include_right(T.model.gen("u"))).is_zero()
    assert verify_poisson(prod, samples=60).passed


def test_jacobi_product_requires_jacobi_inputs():
    with pytest.raises(DimensionIncompatible):
        product_jacobi(R4, R4)


@given(seeds)
def test_jacobi_product_homomorphisms(seed):
    C = contact_spec()
    prod = product_jacobi(C, C)
    pm = ProductModel(C.model, C.model)
    rng = random.Random(seed)
    a, b = random_element(C.model, rng), random_element(C.model, rng)
    P1a, P1b, P2a, P2b = pm.include_left(a), pm.include_left(b), pm.include_right(a), pm.include_right(b)
    assert evaluate(prod, P1a, P2b).is_zero()
    assert evaluate(prod, P1a, P1b) == pm.include_left(evaluate(C, a, b))
    # the right bracket is carried across by theta
    assert evaluate(prod, P2a, P2b) == odot(pm.theta(0, 0), pm.include_right(evaluate(C, a, b)))
    assert evaluate(prod, P1a, P2b).dim == P1a.dim + P2b.dim + prod.dim


# -- poly-Poisson and Casimir products --------------------------------------------------------


def test_poly_poisson_product_of_planes():
    A, B = plane(("x1", "y1"), "u"), plane(("x2", "y2"), "w")
    prod = product_poly_poisson(A, B)
    M = prod.model
    assert M.vars.invertible == ("t",)
    assert evaluate(prod, M.gen("x1"), M.gen("y1")) == M.one()
    assert evaluate(prod, M.gen("x2"), M.gen("y2")) == M.one()
    assert evaluate(prod, M.gen("x1"), M.gen("x2")).is_zero()
    for g in M.generators:
        assert evaluate(prod, M.gen("t"), M.gen(g)).is_zero()
    assert verify_poisson(prod).passed


def test_poly_poisson_with_trivial_adds_free_t():
    B = plane(("x2", "y2"), "w", "x2")
    point = BracketSpec(PolyLineModel.build(lines=["v"]), (0,))
    prod = product_poly_poisson(point, B)
    assert set(prod.table) == {("x2", "y2")}
    assert "t" in prod.model.vars.invertible


@given(seeds)
def test_poly_poisson_projections_are_poisson(seed):
    A, B = plane(("x1", "y1"), "u", "x1*y1"), plane(("x2", "y2"), "w", "x2")
    prod = product_poly_poisson(A, B)
    pm = ProductModel(A.model, B.model)
    rng = random.Random(seed)
    for side, S, inc in (("l", A, pm.include_left), ("r", B, pm.include_right)):
        a, b = random_element(S.model, rng, dim=(0,)), random_element(S.model, rng, dim=(0,))
        assert evaluate(prod, inc(a), inc(b)) == inc(evaluate(S, a, b))
        assert evaluate(prod, inc(a), inc(b)).dim == (0, 0)


def test_poly_poisson_rejects_nonzero_dimension():
    with pytest.raises(NonzeroBracketDimension):
        product_poly_poisson(contact_spec(), R4)


def test_casimir_product_of_unit_free():
    A = from_jacobi(unit_free_jacobi(("q", "p"), "u"))
    B = from_jacobi(unit_free_jacobi(("x", "y"), "v", "x"))
    prod = product_casimir(A, A.model.gen("u"), B, B.model.gen("v"))
    assert prod.dim == (0, 0)
    assert prod.entry("q", "p") == prod.model.one()
    assert prod.entry("x", "y") == el(prod.model, "x", [0, 0])
    assert verify_poisson(prod).passed


def test_casimir_product_rejects_inverse_unit():
    A = from_jacobi(unit_free_jacobi(("q", "p"), "u"))
    B = from_jacobi(unit_free_jacobi(("x", "y"), "v"))
    with pytest.raises(DimensionIncompatible):
        product_casimir(A, el(A.model, "1", [-1]), B, el(B.model, "1", [-1]))


def test_casimir_product_rejects_non_casimir():
    C = contact_spec()
    with pytest.raises(NotACasimir) as info:
        product_casimir(C, C.model.gen("u"), C, C.model.gen("u"))
    assert info.value.witness == "z"


def test_casimir_product_with_unit_casimirs_is_poly_poisson_product():
    A, B = plane(("x1", "y1"), "u", "x1"), plane(("x2", "y2"), "w", "y2**2")
    via_casimir = product_casimir(A, A.model.one(), B, B.model.one())
    direct = product_poly_poisson(A, B)
    assert via_casimir.table == direct.table
    assert via_casimir == direct


def test_product_model_naming():
    A, B = plane(("x", "y"), "u"), plane(("x", "y"), "u")
    pm = ProductModel(A.model, B.model)
    assert pm.model.vars.names == ("x_1", "y_1", "x_2", "y_2", "t")
    assert pm.model.lines == ("u_1", "u_2")
    two = PolyLineModel.build(["a"], lines=["v", "w"])
    pm2 = ProductModel(two, PolyLineModel.build(["b"], lines=["s"]))
    assert pm2.model.vars.invertible == ("t_v_s", "t_w_s")
