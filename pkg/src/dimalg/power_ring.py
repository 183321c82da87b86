"""The power dimensioned ring of a trivialized poly-line bundle.

An element is a single-slice pair ``(dim, coeff)`` standing for
``coeff * u1^n1 * ... * um^nm``.  Addition is only defined inside one
slice; the product ``odot`` (also spelled ``*``) is total and adds tags.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from numbers import Rational
from typing import Iterable, Mapping, Sequence

from .dims import DimMap, DimVector
from .errors import DimensionMismatch, ModelMismatch, NotAUnit, UnknownVariable
from .poly import Poly, VarTable, render_monomial


@dataclass(frozen=True)
class PolyLineModel:
    """A polynomial chart with m trivialized lines.

    Each line name doubles as the symbol of its trivializing unit.
    """

    vars: VarTable
    lines: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "lines", tuple(self.lines))
        if len(set(self.lines)) != len(self.lines):
            raise ValueError(f"duplicate line names in {self.lines}")
        clash = set(self.lines) & set(self.vars.names)
        if clash:
            raise ValueError(f"line names clash with variables: {sorted(clash)}")

    @classmethod
    def build(cls, vars: Iterable[str] = (), invertible: Iterable[str] = (), lines: Iterable[str] = ()):
        return cls(VarTable(vars, invertible), tuple(lines))

    @property
    def m(self) -> int:
        return len(self.lines)

    @property
    def generators(self) -> tuple[str, ...]:
        """Chart coordinates followed by the line units."""
        return self.vars.names + self.lines

    @cached_property
    def ext_vars(self) -> VarTable:
        """Chart variables plus the units, the latter as invertible symbols."""
        return VarTable(self.vars.ordinary, self.vars.invertible + self.lines)

    def zero_dim(self) -> DimVector:
        return DimVector.zero(self.m)

    def line_index(self, name: str) -> int:
        try:
            return self.lines.index(name)
        except ValueError:
            raise UnknownVariable(f"unknown line {name!r}") from None

    def generator_dim(self, name: str) -> DimVector:
        if name in self.lines:
            return DimVector.basis(self.m, self.line_index(name))
        self.vars.index(name)
        return self.zero_dim()

    def poly(self, c=0) -> Poly:
        return Poly.const(self.vars, c)

    def element(self, coeff, dim: Iterable[int] | DimVector | None = None) -> "DimElement":
        """Convenience constructor accepting a Poly or a rational."""
        if not isinstance(coeff, Poly):
            coeff = Poly.const(self.vars, coeff)
        d = self.zero_dim() if dim is None else DimVector(dim)
        return DimElement(self, d, coeff)

    def one(self) -> "DimElement":
        return self.element(1)

    def zero(self, dim=None) -> "DimElement":
        return self.element(0, dim)

    def gen(self, name: str) -> "DimElement":
        """The element x_i (slice 0) or u_j (slice e_j)."""
        if name in self.lines:
            return self.element(1, self.generator_dim(name))
        return DimElement(self, self.zero_dim(), Poly.var(self.vars, name))

    def unit(self, dim: Iterable[int]) -> "DimElement":
        return self.element(1, dim)

    def __str__(self):
        return f"model({' '.join(self.vars.ordinary)}; invertible {' '.join(self.vars.invertible)}; lines {' '.join(self.lines)})"


class DimElement:
    """coeff * u^dim, living in the slice ``dim`` of ``model``."""

    __slots__ = ("model", "dim", "coeff")

    def __init__(self, model: PolyLineModel, dim: DimVector, coeff: Poly):
        if not isinstance(dim, DimVector):
            dim = DimVector(dim)
        if len(dim) != model.m:
            raise ValueError(f"dimension tag {dim} has wrong length for {model.m} lines")
        if coeff.vars != model.vars:
            raise ModelMismatch("coefficient lives over a different chart")
        self.model = model
        self.dim = dim
        self.coeff = coeff

    def _same_model(self, other: "DimElement"):
        if other.model != self.model:
            raise ModelMismatch("elements live on different models")

    def is_zero(self) -> bool:
        return self.coeff.is_zero()

    def __bool__(self):
        return not self.coeff.is_zero()

    def __eq__(self, other):
        if not isinstance(other, DimElement):
            return NotImplemented
        return self.model == other.model and self.dim == other.dim and self.coeff == other.coeff

    def __hash__(self):
        return hash((self.dim, self.coeff))

    def __add__(self, other: "DimElement") -> "DimElement":
        if not isinstance(other, DimElement):
            return NotImplemented
        return dim_add(self, other)

    def __neg__(self) -> "DimElement":
        return DimElement(self.model, self.dim, -self.coeff)

    def __sub__(self, other: "DimElement") -> "DimElement":
        if not isinstance(other, DimElement):
            return NotImplemented
        return dim_add(self, -other)

    def __mul__(self, other):
        if isinstance(other, DimElement):
            return odot(self, other)
        if isinstance(other, Rational):
            return DimElement(self.model, self.dim, self.coeff * other)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "DimElement":
        if n < 0:
            return invert(self) ** (-n)
        result = self.model.one()
        for _ in range(n):
            result = odot(result, self)
        return result

    def to_ext(self) -> Poly:
        """The same element as a homogeneous Laurent polynomial in chart vars and units."""
        tail = self.dim.entries
        return Poly._raw(self.model.ext_vars, {exps + tail: c for exps, c in self.coeff.terms.items()})

    @classmethod
    def from_ext(cls, model: PolyLineModel, p: Poly, dim: DimVector | None = None) -> "DimElement":
        """Inverse of :meth:`to_ext`; ``p`` must be homogeneous in the units."""
        k = len(model.vars)
        terms = {}
        found = None
        for exps, c in p.terms.items():
            tail = exps[k:]
            if found is None:
                found = tail
            elif tail != found:
                raise DimensionMismatch("expression mixes several slices")
            terms[exps[:k]] = c
        if found is None:
            if dim is None:
                raise DimensionMismatch("zero expression needs an explicit dimension")
            found = tuple(dim)
        elif dim is not None and tuple(dim) != found:
            raise DimensionMismatch(f"expression lies in slice {DimVector(found)}, expected {DimVector(dim)}")
        return cls(model, DimVector(found), Poly._raw(model.vars, terms))

    def render(self, tag: bool = True) -> str:
        body = render_element_body(self)
        return f"{body} @ {self.dim}" if tag else body

    def __repr__(self):
        return f"DimElement({self.render()!r})"

    __str__ = render


def render_element_body(a: DimElement) -> str:
    coeff = a.coeff
    units = render_monomial(a.model.lines, a.dim.entries)
    if coeff.is_zero():
        return "0"
    if not units:
        return coeff.render()
    if coeff == 1:
        return units
    if coeff == -1:
        return "-" + units
    text = coeff.render()
    if len(coeff.terms) > 1:
        text = f"({text})"
    return f"{text}*{units}"


def dim_add(a: DimElement, b: DimElement) -> DimElement:
    a._same_model(b)
    if a.dim != b.dim:
        raise DimensionMismatch(f"cannot add elements of slices {a.dim} and {b.dim}")
    return DimElement(a.model, a.dim, a.coeff + b.coeff)


def odot(a: DimElement, b: DimElement) -> DimElement:
    a._same_model(b)
    return DimElement(a.model, a.dim + b.dim, a.coeff * b.coeff)


def invert(a: DimElement) -> DimElement:
    ok, inv = a.coeff.is_unit()
    if not ok:
        raise NotAUnit(f"{a.render()} is not a unit")
    return DimElement(a.model, -a.dim, inv)


def is_zero(a: DimElement) -> bool:
    return a.coeff.is_zero()


def units_choice(model: PolyLineModel):
    """The splitting n -> (1, n) of the dimension projection."""
    return lambda n: model.unit(n)


@dataclass(frozen=True)
class CoordIdeal:
    """The ideal generated by a set of coordinate functions, in every slice."""

    vanishing_vars: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "vanishing_vars", frozenset(self.vanishing_vars))

    def check(self, model: PolyLineModel):
        for v in self.vanishing_vars:
            if v not in model.vars.ordinary:
                raise UnknownVariable(f"{v!r} is not an ordinary variable of the model")

    def ordered(self, model: PolyLineModel) -> tuple[str, ...]:
        return tuple(v for v in model.vars.ordinary if v in self.vanishing_vars)

    def generators(self, model: PolyLineModel) -> list[DimElement]:
        return [model.gen(v) for v in self.ordered(model)]

    def contains_poly(self, p: Poly) -> bool:
        idx = [p.vars.index(v) for v in self.vanishing_vars]
        return all(any(exps[i] for i in idx) for exps in p.terms)


def ideal_membership(p: DimElement, ideal: CoordIdeal) -> bool:
    ideal.check(p.model)
    return ideal.contains_poly(p.coeff)


def project_poly(p: Poly, ideal: CoordIdeal) -> Poly:
    idx = [p.vars.index(v) for v in ideal.vanishing_vars]
    return Poly._raw(p.vars, {e: c for e, c in p.terms.items() if not any(e[i] for i in idx)})


def quotient_project(a: DimElement, ideal: CoordIdeal) -> DimElement:
    """Canonical representative modulo the ideal: vanishing variables set to 0."""
    ideal.check(a.model)
    return DimElement(a.model, a.dim, project_poly(a.coeff, ideal))


class Factor:
    """A morphism of trivialized poly-line bundles, used contravariantly.

    ``base_map`` sends each target chart variable to a polynomial on the
    source chart.  ``line_assign[i]`` is the target line that source line
    i maps to (or None), and ``transitions[i]`` is the unit b_i with
    B_i(u_i) = b_i * u'_{j(i)}.  Pulling back needs every target line to
    be hit by exactly one source line.
    """

    def __init__(
        self,
        source: PolyLineModel,
        target: PolyLineModel,
        base_map: Mapping[str, Poly],
        line_assign: Sequence[int | None],
        transitions: Sequence[Poly] | None = None,
    ):
        self.source = source
        self.target = target
        self.base_map = {}
        for name in target.vars.names:
            if name in base_map:
                img = base_map[name]
            elif name in source.vars:
                img = Poly.var(source.vars, name)
            else:
                raise UnknownVariable(f"base map gives no image for {name!r}")
            if img.vars != source.vars:
                raise ModelMismatch(f"image of {name} is not a source-chart polynomial")
            self.base_map[name] = img
        extra = set(base_map) - set(target.vars.names)
        if extra:
            raise UnknownVariable(f"base map mentions unknown target variables {sorted(extra)}")
        self.line_assign = tuple(line_assign)
        if len(self.line_assign) != source.m:
            raise ValueError("line_assign needs one entry per source line")
        hits = [0] * target.m
        for j in self.line_assign:
            if j is not None:
                if not 0 <= j < target.m:
                    raise ValueError(f"target line index {j} out of range")
                hits[j] += 1
        if any(h != 1 for h in hits):
            raise ValueError("every target line must be assigned exactly one source line")
        if transitions is None:
            transitions = [Poly.const(source.vars, 1)] * source.m
        self.transitions = tuple(transitions)
        if len(self.transitions) != source.m:
            raise ValueError("one transition per source line is required")
        self._inverse_transitions = []
        for b in self.transitions:
            ok, inv = b.is_unit()
            if not ok:
                raise NotAUnit(f"transition {b} is not a unit")
            self._inverse_transitions.append(inv)
        self._source_of = {j: i for i, j in enumerate(self.line_assign) if j is not None}

    @property
    def beta(self) -> DimMap:
        """Projected-addition matrix Z^m(source) -> Z^n(target)."""
        rows = [[int(self.line_assign[i] == j) for i in range(self.source.m)] for j in range(self.target.m)]
        return DimMap(self.source.m, self.target.m, rows)

    @property
    def dim_map(self) -> DimMap:
        """How pullback moves tags: target slice n lands in source slice dim_map(n)."""
        return self.beta.transpose()

    def pullback(self, a: DimElement) -> DimElement:
        if a.model != self.target:
            raise ModelMismatch("element does not live on the factor's target model")
        coeff = a.coeff.substitute(self.base_map, self.source.vars)
        for j, n in enumerate(a.dim.entries):
            if n:
                i = self._source_of[j]
                # B*(u') = b^-1 u, so u'^n pulls back with b^-n
                base = self._inverse_transitions[i] if n > 0 else self.transitions[i]
                coeff = coeff * base ** abs(n)
        return DimElement(self.source, self.dim_map(a.dim), coeff)


def pullback(factor: Factor, a: DimElement) -> DimElement:
    return factor.pullback(a)


def identity_factor(model: PolyLineModel) -> Factor:
    return Factor(model, model, {}, list(range(model.m)))
