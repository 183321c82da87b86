"""Dimensioned Poisson brackets presented by generator tables.

The generators of the power ring of a model are its chart coordinates
x_i (slice 0) and its units u_j (slice e_j).  A bracket of dimension k is
fixed by the table of brackets among generators and is extended to all
elements as a biderivation with respect to ``odot``; inverse units obey
``{P, u^-1} = -u^-2 {P, u}``.

Two evaluators are provided.  :func:`evaluate` works on the elements as
Laurent polynomials in coordinates and units and sums
``dA/dg * dB/dh * {g, h}`` over generator pairs.  :func:`evaluate_leibniz`
peels one generator factor at a time and recurses down to the table.
They agree exactly; the test-suite checks this.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Iterable, Mapping

from .derivations import DimDerivation
from .dims import DimVector
from .errors import InvalidBracket, ModelMismatch, NotACasimir, NotAUnit, UnknownVariable
from .poly import Poly
from .power_ring import DimElement, PolyLineModel, odot
from .sampling import DEFAULT_SEED, random_element, random_monomial


class BracketSpec:
    """A bracket of homogeneous dimension ``dim`` given on generators.

    ``table`` maps generator-name pairs to elements; the reversed pair
    is filled in by antisymmetry.  Missing pairs are zero.
    """

    def __init__(self, model: PolyLineModel, dim, table: Mapping[tuple[str, str], DimElement] | None = None):
        self.model = model
        self.dim = DimVector(dim)
        if len(self.dim) != model.m:
            raise InvalidBracket(f"bracket dimension {self.dim} has wrong length for {model.m} lines")
        gens = model.generators
        pos = {g: i for i, g in enumerate(gens)}
        entries: dict[tuple[str, str], DimElement] = {}
        for (g, h), value in (table or {}).items():
            if g not in pos or h not in pos:
                raise UnknownVariable(f"unknown generator in {{{g},{h}}}")
            if value.model != model:
                raise ModelMismatch(f"entry {{{g},{h}}} lives on another model")
            expected = self.entry_dim(g, h)
            if value.dim != expected:
                raise InvalidBracket(f"entry {{{g},{h}}} has tag {value.dim}, expected {expected}")
            if g == h:
                if not value.is_zero():
                    raise InvalidBracket(f"{{{g},{g}}} must vanish")
                continue
            if pos[g] > pos[h]:
                g, h, value = h, g, -value
            if (g, h) in entries and entries[(g, h)] != value:
                raise InvalidBracket(f"conflicting values for {{{g},{h}}}")
            entries[(g, h)] = value
        self.table = {k: v for k, v in sorted(entries.items(), key=lambda kv: (pos[kv[0][0]], pos[kv[0][1]])) if not v.is_zero()}
        self._pos = pos
        self._ext = {(pos[g], pos[h]): v.to_ext() for (g, h), v in self.table.items()}

    def entry_dim(self, g: str, h: str) -> DimVector:
        return self.model.generator_dim(g) + self.model.generator_dim(h) + self.dim

    def entry(self, g: str, h: str) -> DimElement:
        if g not in self._pos or h not in self._pos:
            raise UnknownVariable(f"unknown generator in {{{g},{h}}}")
        if (g, h) in self.table:
            return self.table[(g, h)]
        if (h, g) in self.table:
            return -self.table[(h, g)]
        return self.model.zero(self.entry_dim(g, h))

    def ext_entry(self, i: int, j: int) -> Poly | None:
        if i < j:
            return self._ext.get((i, j))
        v = self._ext.get((j, i))
        return -v if v is not None else None

    def __eq__(self, other):
        if not isinstance(other, BracketSpec):
            return NotImplemented
        return self.model == other.model and self.dim == other.dim and self.table == other.table

    def __hash__(self):
        return hash((self.dim, tuple(self.table)))

    def __repr__(self):
        body = ", ".join(f"{{{g},{h}}} = {v.render()}" for (g, h), v in self.table.items())
        return f"BracketSpec(dim {self.dim}: {body})"


def _check_models(B: BracketSpec, *elements: DimElement):
    for a in elements:
        if a.model != B.model:
            raise ModelMismatch("element and bracket live on different models")


def evaluate(B: BracketSpec, a: DimElement, b: DimElement) -> DimElement:
    """{a, b}, of dimension dim(a) + dim(b) + k."""
    _check_models(B, a, b)
    gens = B.model.generators
    A, C = a.to_ext(), b.to_ext()
    ua, uc = A.used_vars(), C.used_vars()
    dA = {i: A.diff(g) for i, g in enumerate(gens) if g in ua}
    dC = {i: C.diff(g) for i, g in enumerate(gens) if g in uc}
    out = Poly.zero(B.model.ext_vars)
    for (i, j), T in B._ext.items():
        term = None
        if i in dA and j in dC:
            term = dA[i] * dC[j]
        if j in dA and i in dC:
            t2 = dA[j] * dC[i]
            term = -t2 if term is None else term - t2
        if term is not None:
            out = out + term * T
    return DimElement.from_ext(B.model, out, a.dim + b.dim + B.dim)


def evaluate_leibniz(B: BracketSpec, a: DimElement, b: DimElement) -> DimElement:
    """{a, b} by explicit Leibniz recursion on monomials down to the table."""
    _check_models(B, a, b)
    ext = B.model.ext_vars
    n = len(ext)
    zero = Poly.zero(ext)

    def gen_power(i: int, e: int) -> Poly:
        exps = [0] * n
        exps[i] = e
        return Poly._raw(ext, {tuple(exps): Fraction(1)})

    def monomial(exps) -> Poly:
        return Poly._raw(ext, {tuple(exps): Fraction(1)})

    def split(exps):
        # first nonzero generator, one step towards zero
        for i, e in enumerate(exps):
            if e:
                step = 1 if e > 0 else -1
                rest = list(exps)
                rest[i] -= step
                return i, step, tuple(rest)
        return None

    @lru_cache(maxsize=None)
    def base(i: int, si: int, j: int, sj: int) -> Poly:
        T = B.ext_entry(i, j)
        if T is None:
            return zero
        if si < 0:
            T = -(gen_power(i, -2) * T)
        if sj < 0:
            T = -(gen_power(j, -2) * T)
        return T

    @lru_cache(maxsize=None)
    def mono(e1: tuple[int, ...], e2: tuple[int, ...]) -> Poly:
        s1, s2 = split(e1), split(e2)
        if s1 is None or s2 is None:
            return zero
        i, si, r1 = s1
        j, sj, r2 = s2
        if any(r1):
            f = gen_power(i, si)
            return mono(tuple(si if k == i else 0 for k in range(n)), e2) * monomial(r1) + f * mono(r1, e2)
        if any(r2):
            f = gen_power(j, sj)
            return mono(e1, tuple(sj if k == j else 0 for k in range(n))) * monomial(r2) + f * mono(e1, r2)
        return base(i, si, j, sj)

    out = zero
    for e1, c1 in a.to_ext().terms.items():
        for e2, c2 in b.to_ext().terms.items():
            out = out + mono(e1, e2).scale(c1 * c2)
    return DimElement.from_ext(B.model, out, a.dim + b.dim + B.dim)


# -- Jacobi data -----------------------------------------------------------


class JacobiData:
    """A bivector ``Lambda`` and a Reeb-type field ``E`` on a single-line chart."""

    def __init__(self, model: PolyLineModel, Lambda: Mapping[tuple[str, str], Poly] | None = None, E: Mapping[str, Poly] | None = None):
        if model.m != 1:
            raise ValueError("Jacobi data needs a single-line model")
        self.model = model
        names = model.vars.names
        zero = Poly.zero(model.vars)
        lam = {(a, b): zero for a in names for b in names}
        seen: dict[tuple[str, str], Poly] = {}
        for (a, b), v in (Lambda or {}).items():
            if a not in model.vars or b not in model.vars:
                raise UnknownVariable(f"unknown variable in Lambda[{a},{b}]")
            if a == b and v:
                raise ValueError("Lambda must be antisymmetric (nonzero diagonal)")
            if (b, a) in seen and seen[(b, a)] != -v:
                raise ValueError(f"Lambda must be antisymmetric at ({a},{b})")
            seen[(a, b)] = v
            lam[(a, b)] = v
            lam[(b, a)] = -v
        self.Lambda = lam
        E = dict(E or {})
        unknown = set(E) - set(names)
        if unknown:
            raise UnknownVariable(f"unknown variables in E: {sorted(unknown)}")
        self.E = {name: E.get(name, zero) for name in names}

    def lam(self, f: Poly, g: Poly) -> Poly:
        """Lambda(df, dg)."""
        names = self.model.vars.names
        out = Poly.zero(self.model.vars)
        df = {a: f.diff(a) for a in names}
        dg = {b: g.diff(b) for b in names}
        for a in names:
            if not df[a]:
                continue
            for b in names:
                L = self.Lambda[(a, b)]
                if L and dg[b]:
                    out = out + L * df[a] * dg[b]
        return out

    def reeb(self, f: Poly) -> Poly:
        out = Poly.zero(self.model.vars)
        for a, e in self.E.items():
            if e:
                out = out + e * f.diff(a)
        return out

    def sharp(self, f: Poly) -> dict[str, Poly]:
        """Components of the vector field Lambda#(df), i.e. g -> Lambda(df, dg)."""
        names = self.model.vars.names
        return {b: sum((self.Lambda[(a, b)] * f.diff(a) for a in names), Poly.zero(self.model.vars)) for b in names}

    def hamiltonian_field(self, P: Poly, f: Poly) -> Poly:
        """X_{P u}[f] = P E[f] + Lambda(dP, df)."""
        return P * self.reeb(f) + self.lam(P, f)


def from_jacobi(J: JacobiData) -> BracketSpec:
    model = J.model
    names = model.vars.names
    u = model.lines[0]
    table = {}
    for i, a in enumerate(names):
        for b in names[i + 1 :]:
            table[(a, b)] = DimElement(model, (-1,), J.Lambda[(a, b)])
        table[(u, a)] = DimElement(model, (0,), J.E[a])
    return BracketSpec(model, (-1,), table)


def to_jacobi(B: BracketSpec) -> JacobiData | None:
    """Recover (Lambda, E) from a single-line bracket of dimension [-1]."""
    if B.model.m != 1 or B.dim != (-1,):
        return None
    names = B.model.vars.names
    u = B.model.lines[0]
    Lambda = {(a, b): B.entry(a, b).coeff for i, a in enumerate(names) for b in names[i + 1 :]}
    E = {a: B.entry(u, a).coeff for a in names}
    return JacobiData(B.model, Lambda, E)


def jacobi_closed_form(J: JacobiData, a: DimElement, b: DimElement) -> DimElement:
    """(Lambda(dP,dQ) + p P E[Q] - q Q E[P]) u^(p+q-1) for a = P u^p, b = Q u^q."""
    P, Q = a.coeff, b.coeff
    p, q = a.dim[0], b.dim[0]
    coeff = J.lam(P, Q) + (P * J.reeb(Q)).scale(p) - (Q * J.reeb(P)).scale(q)
    return DimElement(J.model, (p + q - 1,), coeff)


# -- verification ----------------------------------------------------------


@dataclass
class CheckResult:
    name: str
    passed: bool
    count: int
    counterexample: dict[str, Any] | None = None

    def to_dict(self) -> dict[str, Any]:
        d = {"name": self.name, "passed": self.passed, "count": self.count}
        if self.counterexample is not None:
            d["counterexample"] = self.counterexample
        return d


@dataclass
class VerificationReport:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def first_failure(self) -> CheckResult | None:
        return next((c for c in self.checks if not c.passed), None)

    def to_dict(self) -> dict[str, Any]:
        return {"status": self.status, "checks": [c.to_dict() for c in self.checks]}


def _run_check(name: str, cases: Iterable, test) -> CheckResult:
    count = 0
    for case in cases:
        count += 1
        bad = test(*case)
        if bad is not None:
            return CheckResult(name, False, count, bad)
    return CheckResult(name, True, count)


def jacobiator(B: BracketSpec, a: DimElement, b: DimElement, c: DimElement) -> DimElement:
    return evaluate(B, a, evaluate(B, b, c)) + evaluate(B, b, evaluate(B, c, a)) + evaluate(B, c, evaluate(B, a, b))


def verify_poisson(B: BracketSpec, seed: int = DEFAULT_SEED, samples: int = 200, jacobi_samples: int | None = None) -> VerificationReport:
    """Antisymmetry, Leibniz and Jacobi checks with exact arithmetic."""
    model = B.model
    rng = random.Random(seed)
    if jacobi_samples is None:
        jacobi_samples = samples // 2

    def antisym(a, b):
        lhs, rhs = evaluate(B, a, b), evaluate(B, b, a)
        if lhs.dim != a.dim + b.dim + B.dim:
            return {"elements": [a.render(), b.render()], "value": lhs.render(), "reason": "dimension"}
        if not (lhs + rhs).is_zero():
            return {"elements": [a.render(), b.render()], "value": (lhs + rhs).render()}
        return None

    def leibniz(a, b, c):
        lhs = evaluate(B, a, odot(b, c))
        rhs = odot(evaluate(B, a, b), c) + odot(b, evaluate(B, a, c))
        if lhs != rhs:
            return {"elements": [a.render(), b.render(), c.render()], "value": (lhs - rhs).render()}
        return None

    def jacobi(a, b, c):
        j = jacobiator(B, a, b, c)
        if not j.is_zero():
            return {"elements": [a.render(), b.render(), c.render()], "value": j.render()}
        return None

    pairs = [(random_element(model, rng), random_element(model, rng)) for _ in range(samples)]
    triples = [tuple(random_element(model, rng) for _ in range(3)) for _ in range(samples)]
    gens = [model.gen(g) for g in model.generators]
    gen_triples = list(itertools.combinations(gens, 3))
    mono_triples = [tuple(random_monomial(model, rng) for _ in range(3)) for _ in range(jacobi_samples)]
    return VerificationReport(
        [
            _run_check("antisymmetry", pairs, antisym),
            _run_check("leibniz", triples, leibniz),
            _run_check("jacobi_generators", gen_triples, jacobi),
            _run_check("jacobi_random", mono_triples, jacobi),
        ]
    )


def _vf_apply(field: Mapping[str, Poly], f: Poly) -> Poly:
    out = Poly.zero(f.vars)
    for a, c in field.items():
        if c:
            out = out + c * f.diff(a)
    return out


def _vf_bracket(V: Mapping[str, Poly], W: Mapping[str, Poly]) -> dict[str, Poly]:
    return {k: _vf_apply(V, W[k]) - _vf_apply(W, V[k]) for k in V}


def verify_symbols(J: JacobiData) -> VerificationReport:
    """Check the four symbol conditions of a Jacobi bracket in the unit trivialization.

    With the unit u spanning the sections, X_u = E and the symbol of
    f u is f E + Lambda#(df).  The conditions become, on coordinates:

    1. [X_u, X_u] = X_{[u,u]} = 0.
    2. The section bracket built from the symbols,
       [f u, g u] = (X_{fu}[g] - g E[f]) u, is antisymmetric.
    3. [E, Lambda#(df)] = Lambda#(d E[f]).
    4. sum_cyc Lambda(df, d Lambda(dg, dh)) = -sum_cyc E[f] Lambda(dg, dh).
    """
    names = J.model.vars.names
    V = J.model.vars
    coords = {a: Poly.var(V, a) for a in names}

    def cond1():
        comm = _vf_bracket(J.E, J.E)
        bad = [a for a, c in comm.items() if c]
        if bad:
            return {"elements": ["u", "u"], "value": f"[E,E]^{bad[0]} = {comm[bad[0]].render()}"}
        return None

    def section_bracket(f, g):
        return J.hamiltonian_field(f, g) - g * J.reeb(f)

    def cond2(a, b):
        s = section_bracket(coords[a], coords[b]) + section_bracket(coords[b], coords[a])
        if s:
            return {"elements": [a, b], "value": s.render()}
        return None

    def cond3(a, b):
        lhs = _vf_bracket(J.E, J.sharp(coords[a]))[b]
        rhs = J.sharp(J.reeb(coords[a]))[b]
        if lhs != rhs:
            return {"elements": [a, b], "value": (lhs - rhs).render()}
        return None

    def cond4(a, b, c):
        f, g, h = coords[a], coords[b], coords[c]
        lhs = J.lam(f, J.lam(g, h)) + J.lam(g, J.lam(h, f)) + J.lam(h, J.lam(f, g))
        rhs = -(J.reeb(f) * J.lam(g, h) + J.reeb(g) * J.lam(h, f) + J.reeb(h) * J.lam(f, g))
        if lhs != rhs:
            return {"elements": [a, b, c], "value": (lhs - rhs).render()}
        return None

    return VerificationReport(
        [
            _run_check("symbol_commutator", [()], cond1),
            _run_check("symbol_module", itertools.combinations_with_replacement(names, 2), cond2),
            _run_check("symbol_lie_derivative", itertools.product(names, names), cond3),
            _run_check("symbol_jacobi", itertools.combinations(names, 3), cond4),
        ]
    )


# -- Casimirs and Hamiltonians ---------------------------------------------


def casimir_witness(B: BracketSpec, c: DimElement) -> str | None:
    """First generator g with {c, g} != 0, or None."""
    _check_models(B, c)
    for g in B.model.generators:
        if not evaluate(B, c, B.model.gen(g)).is_zero():
            return g
    return None


def is_casimir(B: BracketSpec, c: DimElement) -> bool:
    return casimir_witness(B, c) is None


def hamiltonian_derivation(B: BracketSpec, h: DimElement) -> DimDerivation:
    """The derivation {h, -}, of shift dim(h) + k."""
    _check_models(B, h)
    model = B.model
    symbol = {x: evaluate(B, h, model.gen(x)).coeff for x in model.vars.names}
    weights = [evaluate(B, h, model.gen(u)).coeff for u in model.lines]
    return DimDerivation(model, h.dim + B.dim, symbol, weights)


def poisson_unit_bracket(B: BracketSpec, u: DimElement, a: DimElement, b: DimElement) -> DimElement:
    """The bracket u * {a, b} induced by a Casimir unit u."""
    if not u.coeff.is_unit()[0]:
        raise NotAUnit(f"{u.render()} is not a unit")
    w = casimir_witness(B, u)
    if w is not None:
        raise NotACasimir(f"{u.render()} does not commute with {w}", witness=w)
    return odot(u, evaluate(B, a, b))
