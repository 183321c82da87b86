"""Shared structures and a sympy oracle for the test-suite."""

from __future__ import annotations

from contextlib import contextmanager
from fractions import Fraction

import sympy

from dimalg.bracket import BracketSpec, JacobiData, from_jacobi
from dimalg.poly import Poly
from dimalg.power_ring import DimElement, PolyLineModel


def P(model: PolyLineModel, text) -> Poly:
    """Parse a small chart polynomial through sympy (independent of our parser)."""
    return from_sympy(sympy.sympify(text, locals=symbols_for(model.vars.names)), model.vars)


def symbols_for(names):
    return {n: sympy.Symbol(n) for n in names}


def to_sympy(p: Poly):
    syms = [sympy.Symbol(n) for n in p.vars.names]
    out = sympy.Integer(0)
    for exps, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, e in zip(syms, exps):
            term *= s**e
        out += term
    return out


def from_sympy(expr, vars) -> Poly:
    expr = sympy.expand(expr)
    syms = [sympy.Symbol(n) for n in vars.names]
    terms = {}
    for term in sympy.Add.make_args(expr):
        if term == 0:
            continue
        coeff, rest = term.as_coeff_Mul()
        exps = [0] * len(syms)
        for factor in sympy.Mul.make_args(rest):
            if factor == 1:
                continue
            base, e = factor.as_base_exp()
            exps[syms.index(base)] += int(e)
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + Fraction(int(coeff.p), int(coeff.q))
    return Poly(vars, terms)


def element_to_sympy(a: DimElement):
    """The element as an expression in chart symbols and unit symbols."""
    expr = to_sympy(a.coeff)
    for name, n in zip(a.model.lines, a.dim.entries):
        expr *= sympy.Symbol(name) ** n
    return expr


def sympy_jacobi_bracket(Lam: dict, E: dict, names, P_, p: int, Q_, q: int):
    """(Lambda(dP,dQ) + p P E[Q] - q Q E[P]) for sympy P, Q (coefficient only)."""
    syms = [sympy.Symbol(n) for n in names]
    lam = sum(Lam.get((a, b), 0) * sympy.diff(P_, sa) * sympy.diff(Q_, sb) for a, sa in zip(names, syms) for b, sb in zip(names, syms))
    reeb = lambda f: sum(E.get(a, 0) * sympy.diff(f, sa) for a, sa in zip(names, syms))
    return sympy.expand(lam + p * P_ * reeb(Q_) - q * Q_ * reeb(P_))


# -- standard structures ------------------------------------------------------------


def contact_model() -> PolyLineModel:
    return PolyLineModel.build(["q", "p", "z"], lines=["u"])


def contact_jacobi() -> JacobiData:
    M = contact_model()
    return JacobiData(M, {("q", "p"): P(M, 1), ("p", "z"): P(M, "-p")}, {"z": P(M, 1)})


def contact_spec() -> BracketSpec:
    return from_jacobi(contact_jacobi())


def plane_model(names=("x", "y"), line="u") -> PolyLineModel:
    return PolyLineModel.build(list(names), lines=[line])


def unit_free_jacobi(names=("q", "p"), line="u", lam="1") -> JacobiData:
    M = plane_model(names, line)
    return JacobiData(M, {(names[0], names[1]): P(M, lam)}, {})


def linear_poisson_jacobi() -> JacobiData:
    M = plane_model()
    return JacobiData(M, {("x", "y"): P(M, "x")}, {})


def trivial_jacobi() -> JacobiData:
    return JacobiData(contact_model(), {}, {})


def broken_jacobi() -> JacobiData:
    """{x,y} = u^-1 with {u,x} = x: E = x d/dx does not preserve Lambda."""
    M = plane_model()
    return JacobiData(M, {("x", "y"): P(M, 1)}, {"x": P(M, "x")})


def broken_contact_jacobi() -> JacobiData:
    """Contact Lambda with the Reeb field pointing the wrong way (E = d/dq)."""
    M = contact_model()
    return JacobiData(M, {("q", "p"): P(M, 1), ("p", "z"): P(M, "-p")}, {"q": P(M, 1)})


def canonical_spec(pairs, dim=(0,)) -> BracketSpec:
    """Dimension-[0] canonical bracket {q_i, p_i} = 1 on a one-line chart."""
    names = [n for pair in pairs for n in pair]
    M = PolyLineModel.build(names, lines=["u"])
    table = {pair: DimElement(M, dim, P(M, 1)) for pair in pairs}
    return BracketSpec(M, dim, table)


# -- acceptance bookkeeping -------------------------------------------------------------

ACCEPTANCE: list[tuple[int, str, bool]] = []


@contextmanager
def criterion(number: int, label: str):
    """Record and print a PASS/FAIL line for an acceptance criterion."""
    try:
        yield
    except BaseException:
        ACCEPTANCE.append((number, label, False))
        print(f"criterion {number}: FAIL  {label}")
        raise
    ACCEPTANCE.append((number, label, True))
    print(f"criterion {number}: PASS  {label}")
