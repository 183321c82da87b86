"""Coisotropes, reduction, and products of dimensioned Poisson algebras.

Products over a base product chart carry one invertible coordinate t per
pair (left line i, right line j).  At a point of the base product, t is
the ratio of the two trivializations, so the element

    theta_ij = t_ij * U_i^-1 * U'_j

is the tautological identification of the two pulled-back lines.  The
brackets {t_ij, -} are not free data.  They are solved from the demand
that theta_ij is central.  The demand is linear in the unknown entry, with
the unit U_i^-1 U'_j in front of it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .bracket import BracketSpec, casimir_witness, evaluate
from .dims import DimVector, tensor_dim_set
from .errors import (
    DimensionIncompatible,
    IdealizerViolation,
    IllDefined,
    InconsistentProduct,
    NonzeroBracketDimension,
    NotACasimir,
    NotAUnit,
    NotCoisotropic,
    UnknownVariable,
)
from .poly import Poly, VarTable
from .power_ring import CoordIdeal, DimElement, Factor, PolyLineModel, invert, odot, quotient_project


# -- coisotropes and reduction ----------------------------------------------


def coisotrope_witness(B: BracketSpec, ideal: CoordIdeal):
    """First pair of ideal generators whose bracket leaves the ideal, or None."""
    ideal.check(B.model)
    gens = ideal.ordered(B.model)
    for g, h in itertools.combinations_with_replacement(gens, 2):
        v = evaluate(B, B.model.gen(g), B.model.gen(h))
        if not ideal.contains_poly(v.coeff):
            return g, h, v
    return None


def is_coisotrope(B: BracketSpec, ideal: CoordIdeal) -> bool:
    return coisotrope_witness(B, ideal) is None


@dataclass(frozen=True)
class ReductionData:
    """A coordinate ideal plus the chart variables that survive reduction.

    Variables that are neither vanishing nor surviving are the collapsed
    fibre directions.
    """

    ideal: CoordIdeal
    survivors: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "survivors", tuple(self.survivors))

    def check(self, model: PolyLineModel):
        self.ideal.check(model)
        for s in self.survivors:
            if s not in model.vars:
                raise UnknownVariable(f"unknown survivor {s!r}")
            if s in self.ideal.vanishing_vars:
                raise ValueError(f"survivor {s!r} is also a vanishing variable")
        if len(set(self.survivors)) != len(self.survivors):
            raise ValueError("duplicate survivors")

    def collapsed(self, model: PolyLineModel) -> tuple[str, ...]:
        keep = set(self.survivors) | self.ideal.vanishing_vars
        return tuple(v for v in model.vars.names if v not in keep)

    def reduced_model(self, model: PolyLineModel) -> PolyLineModel:
        keep = set(self.survivors)
        return PolyLineModel(
            VarTable(
                [v for v in model.vars.ordinary if v in keep],
                [v for v in model.vars.invertible if v in keep],
            ),
            model.lines,
        )


def restrict_poly(p: Poly, target: VarTable) -> Poly:
    """Re-express p over a sub-table; p must not use the dropped variables."""
    names = p.vars.names
    keep = [p.vars.index(v) for v in target.names]
    dropped = [i for i in range(len(names)) if names[i] not in target]
    terms = {}
    for exps, c in p.terms.items():
        if any(exps[i] for i in dropped):
            raise IllDefined(f"{p.render()} depends on a dropped variable")
        terms[tuple(exps[i] for i in keep)] = c
    return Poly(target, terms)


def project_to_reduced(a: DimElement, R: ReductionData, reduced: PolyLineModel | None = None) -> DimElement:
    """Quotient by the ideal, then read the result on the survivor chart."""
    reduced = reduced or R.reduced_model(a.model)
    v = quotient_project(a, R.ideal)
    collapsed = set(R.collapsed(a.model))
    bad = v.coeff.used_vars() & collapsed
    if bad:
        raise IllDefined(f"{v.render()} depends on collapsed {sorted(bad)}", witness=v.render())
    return DimElement(reduced, v.dim, restrict_poly(v.coeff, reduced.vars))


def lift_from_reduced(a: DimElement, model: PolyLineModel) -> DimElement:
    """The reduced element read back on the original chart."""
    return DimElement(model, a.dim, a.coeff.embed(model.vars))


def reduce(B: BracketSpec, R: ReductionData) -> BracketSpec:
    """The reduced bracket on N(I)/I, presented on the survivor chart."""
    model = B.model
    R.check(model)
    w = coisotrope_witness(B, R.ideal)
    if w is not None:
        g, h, v = w
        raise NotCoisotropic(f"{{{g},{h}}} = {v.render()} is not in the ideal", witness=(g, h, v.render()))
    ideal_gens = R.ideal.ordered(model)
    for s in list(R.survivors) + list(model.lines):
        for g in ideal_gens:
            v = evaluate(B, model.gen(s), model.gen(g))
            if not R.ideal.contains_poly(v.coeff):
                raise IdealizerViolation(
                    f"{{{s},{g}}} = {v.render()} is not in the ideal", witness=(s, g, v.render())
                )
    reduced = R.reduced_model(model)
    table = {}
    gens = reduced.generators
    for i, g in enumerate(gens):
        for h in gens[i + 1 :]:
            v = evaluate(B, model.gen(g), model.gen(h))
            try:
                table[(g, h)] = project_to_reduced(v, R, reduced)
            except IllDefined as err:
                raise IllDefined(f"{{{g},{h}}}: {err}", witness=(g, h, v.render())) from None
    return BracketSpec(reduced, B.dim, table)


# -- product charts -----------------------------------------------------------


class ProductModel:
    """Chart of a base product: both charts side by side plus the t variables.

    Names are kept when the two sides do not clash; otherwise every left
    name gets the suffix ``_1`` and every right name ``_2``.  Construction
    is deterministic, so the chart of a product bracket can be rebuilt
    from its two factors.
    """

    def __init__(self, left: PolyLineModel, right: PolyLineModel, with_t: bool = True):
        self.left = left
        self.right = right
        lnames = left.vars.names + left.lines
        rnames = right.vars.names + right.lines
        if set(lnames) & set(rnames):
            self.left_names = {n: f"{n}_1" for n in lnames}
            self.right_names = {n: f"{n}_2" for n in rnames}
        else:
            self.left_names = {n: n for n in lnames}
            self.right_names = {n: n for n in rnames}
        used = set(self.left_names.values()) | set(self.right_names.values())
        self.t_vars: dict[tuple[int, int], str] = {}
        if with_t:
            single = left.m * right.m == 1
            for i, li in enumerate(left.lines):
                for j, rj in enumerate(right.lines):
                    name = "t" if single else f"t_{self.left_names[li]}_{self.right_names[rj]}"
                    while name in used:
                        name = "t" + name
                    used.add(name)
                    self.t_vars[(i, j)] = name
        L, Rn = self.left_names, self.right_names
        vars = VarTable(
            [L[v] for v in left.vars.ordinary] + [Rn[v] for v in right.vars.ordinary],
            [L[v] for v in left.vars.invertible] + [Rn[v] for v in right.vars.invertible] + list(self.t_vars.values()),
        )
        self.model = PolyLineModel(vars, tuple(L[u] for u in left.lines) + tuple(Rn[u] for u in right.lines))
        self.left_dims, self.right_dims = tensor_dim_set(left.m, right.m)
        self.p1 = Factor(
            self.model,
            left,
            {v: Poly.var(vars, L[v]) for v in left.vars.names},
            list(range(left.m)) + [None] * right.m,
        )
        self.p2 = Factor(
            self.model,
            right,
            {v: Poly.var(vars, Rn[v]) for v in right.vars.names},
            [None] * left.m + list(range(right.m)),
        )

    def include_left(self, a: DimElement) -> DimElement:
        return self.p1.pullback(a)

    def include_right(self, a: DimElement) -> DimElement:
        return self.p2.pullback(a)

    def theta(self, i: int, j: int) -> DimElement:
        """t_ij * U_i^-1 * U'_j, the tautological identification of two lines."""
        m = self.model
        d = [0] * m.m
        d[i] -= 1
        d[self.left.m + j] += 1
        return DimElement(m, DimVector(d), Poly.var(m.vars, self.t_vars[(i, j)]))


def _transport(pm: ProductModel, spec: BracketSpec, side: str, scale: DimElement, table: dict):
    include = pm.include_left if side == "left" else pm.include_right
    names = pm.left_names if side == "left" else pm.right_names
    for (g, h), v in spec.table.items():
        table[(names[g], names[h])] = odot(scale, include(v))


def _solve_t_entries(pm: ProductModel, K: DimVector, table: dict) -> BracketSpec:
    model = pm.model
    t_names = list(pm.t_vars.values())
    thetas = {pm.t_vars[key]: pm.theta(*key) for key in pm.t_vars}
    others = [g for g in model.generators if g not in thetas]

    def solve(spec, t, g):
        theta = thetas[t]
        slope = DimElement(model, theta.dim, theta.coeff.diff(t))
        rest = evaluate(spec, theta, model.gen(g))
        return -odot(rest, invert(slope))

    spec = BracketSpec(model, K, table)
    for t in t_names:
        for g in others:
            table[(t, g)] = solve(spec, t, g)
    spec = BracketSpec(model, K, table)
    for t1, t2 in itertools.combinations(t_names, 2):
        table[(t1, t2)] = solve(spec, t1, t2)
    spec = BracketSpec(model, K, table)
    for t, theta in thetas.items():
        w = casimir_witness(spec, theta)
        if w is not None:
            raise InconsistentProduct(f"no consistent entry for {{{t},{w}}}", witness=(t, w))
    return spec


def _check_scale(scale: DimElement, spec_dim_image: DimVector, K: DimVector, label: str):
    total = scale.dim + spec_dim_image
    if total != K:
        raise DimensionIncompatible(f"{label} terms land in dimension {total}, expected {K}")


def product_jacobi(A: BracketSpec, B: BracketSpec) -> BracketSpec:
    """Product of two single-line Jacobi brackets; dimension [-1, 0] on two lines.

    The right factor's bracket is carried over by theta, which moves its
    tags from (0, n-1) to (-1, n).
    """
    for side, S in (("left", A), ("right", B)):
        if S.model.m != 1 or S.dim != (-1,):
            raise DimensionIncompatible(f"{side} factor must be a single-line bracket of dimension [-1]")
    pm = ProductModel(A.model, B.model)
    K = DimVector((-1, 0))
    table: dict = {}
    one = pm.model.one()
    theta = pm.theta(0, 0)
    _check_scale(one, pm.p1.dim_map(A.dim), K, "left")
    _check_scale(theta, pm.p2.dim_map(B.dim), K, "right")
    _transport(pm, A, "left", one, table)
    _transport(pm, B, "right", theta, table)
    return _solve_t_entries(pm, K, table)


def product_poly_poisson(A: BracketSpec, B: BracketSpec) -> BracketSpec:
    for side, S in (("left", A), ("right", B)):
        if not S.dim.is_zero():
            raise NonzeroBracketDimension(f"{side} factor has bracket dimension {S.dim}")
    pm = ProductModel(A.model, B.model)
    K = pm.model.zero_dim()
    table: dict = {}
    _transport(pm, A, "left", pm.model.one(), table)
    _transport(pm, B, "right", pm.model.one(), table)
    return _solve_t_entries(pm, K, table)


def product_casimir(A: BracketSpec, uA: DimElement, B: BracketSpec, uB: DimElement) -> BracketSpec:
    """Casimir-compensated product: uA {,}_A and uB {,}_B, both of dimension 0."""
    for side, S, u in (("left", A, uA), ("right", B, uB)):
        if u.model != S.model:
            raise DimensionIncompatible(f"{side} Casimir lives on another model")
        if not u.coeff.is_unit()[0]:
            raise NotAUnit(f"{side} Casimir {u.render()} is not a unit")
        w = casimir_witness(S, u)
        if w is not None:
            v = evaluate(S, u, S.model.gen(w))
            raise NotACasimir(f"{side} Casimir {u.render()} fails against {w}: {{u,{w}}} = {v.render()}", witness=w)
    pm = ProductModel(A.model, B.model)
    K = pm.model.zero_dim()
    left_scale, right_scale = pm.include_left(uA), pm.include_right(uB)
    _check_scale(left_scale, pm.p1.dim_map(A.dim), K, "left")
    _check_scale(right_scale, pm.p2.dim_map(B.dim), K, "right")
    table: dict = {}
    _transport(pm, A, "left", left_scale, table)
    _transport(pm, B, "right", right_scale, table)
    return _solve_t_entries(pm, K, table)


def tensor_heterogeneous(A: BracketSpec, B: BracketSpec) -> BracketSpec:
    """Tensor product over the scalars; needs both bracket dimensions zero."""
    for side, S in (("left", A), ("right", B)):
        if not S.dim.is_zero():
            raise NonzeroBracketDimension(f"{side} factor has bracket dimension {S.dim}")
    pm = ProductModel(A.model, B.model, with_t=False)
    table: dict = {}
    _transport(pm, A, "left", pm.model.one(), table)
    _transport(pm, B, "right", pm.model.one(), table)
    return BracketSpec(pm.model, pm.model.zero_dim(), table)
