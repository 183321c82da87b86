"""Derivations of the power ring with a definite dimension shift.

A derivation of shift d is stored by its generator data.  The scale
(a unit of slice d) is folded into the symbol and the line weights on
construction, so internally

    D(x_i) = (X^i, d),    D(u_j) = (g_j, e_j + d),

and on a slice element ``D(P u^n) = (X[P] + P * sum_j n_j g_j) u^(n+d)``.
The negative-power rule comes out of the same formula: n_j = -1 gives
``D(u^-1) = -g u^-1`` as forced by ``D(u * u^-1) = D(1) = 0``.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from .dims import DimVector
from .errors import ModelMismatch, NotAUnit, UnknownVariable
from .poly import Poly
from .power_ring import DimElement, PolyLineModel


class DimDerivation:
    def __init__(
        self,
        model: PolyLineModel,
        shift: DimVector | Sequence[int] | None = None,
        symbol: Mapping[str, Poly] | None = None,
        line_weights: Sequence[Poly] | Mapping[str, Poly] | None = None,
        scale: DimElement | None = None,
    ):
        self.model = model
        shift = model.zero_dim() if shift is None else DimVector(shift)
        if len(shift) != model.m:
            raise ValueError("shift has the wrong length")
        zero = Poly.zero(model.vars)
        symbol = dict(symbol or {})
        unknown = set(symbol) - set(model.vars.names)
        if unknown:
            raise UnknownVariable(f"symbol mentions unknown variables {sorted(unknown)}")
        sym = [symbol.get(name, zero) for name in model.vars.names]
        if isinstance(line_weights, Mapping):
            weights = [line_weights.get(name, zero) for name in model.lines]
        else:
            weights = list(line_weights) if line_weights is not None else [zero] * model.m
        if len(weights) != model.m:
            raise ValueError("one weight per line is required")
        for p in sym + weights:
            if p.vars != model.vars:
                raise ModelMismatch("generator data must live on the model's chart")
        if scale is not None:
            if scale.model != model or scale.dim != shift:
                raise ModelMismatch("scale must be an element of the shift slice")
            c = scale.coeff
            if not c.is_zero() and not c.is_unit()[0]:
                raise NotAUnit("scale coefficient must be a unit or zero")
            sym = [c * p for p in sym]
            weights = [c * p for p in weights]
        self.shift = shift
        self.symbol = tuple(sym)
        self.line_weights = tuple(weights)

    @property
    def scale(self) -> DimElement:
        return self.model.unit(self.shift)

    def is_zero(self) -> bool:
        return not any(self.symbol) and not any(self.line_weights)

    def __eq__(self, other):
        if not isinstance(other, DimDerivation):
            return NotImplemented
        if self.model != other.model:
            return False
        if self.is_zero() and other.is_zero():
            return True
        return (self.shift, self.symbol, self.line_weights) == (other.shift, other.symbol, other.line_weights)

    def __hash__(self):
        return hash((self.shift, self.symbol, self.line_weights))

    def vector_field(self, p: Poly) -> Poly:
        """X[p] for a chart polynomial p."""
        out = Poly.zero(self.model.vars)
        for name, x in zip(self.model.vars.names, self.symbol):
            if x:
                out = out + x * p.diff(name)
        return out

    def apply(self, a: DimElement) -> DimElement:
        if a.model != self.model:
            raise ModelMismatch("derivation and element live on different models")
        coeff = self.vector_field(a.coeff)
        for n, g in zip(a.dim.entries, self.line_weights):
            if n and g:
                coeff = coeff + (g * a.coeff).scale(n)
        return DimElement(self.model, a.dim + self.shift, coeff)

    __call__ = apply

    def __add__(self, other: "DimDerivation") -> "DimDerivation":
        if other.model != self.model or other.shift != self.shift:
            raise ModelMismatch("can only add derivations of the same shift")
        return DimDerivation(
            self.model,
            self.shift,
            dict(zip(self.model.vars.names, (a + b for a, b in zip(self.symbol, other.symbol)))),
            [a + b for a, b in zip(self.line_weights, other.line_weights)],
        )

    def scaled(self, c) -> "DimDerivation":
        return DimDerivation(
            self.model,
            self.shift,
            dict(zip(self.model.vars.names, (p * c for p in self.symbol))),
            [p * c for p in self.line_weights],
        )

    def render(self) -> str:
        parts = [f"shift {self.shift}"]
        for name, x in zip(self.model.vars.names, self.symbol):
            if x:
                parts.append(f"{name} -> {x.render()}")
        for name, g in zip(self.model.lines, self.line_weights):
            if g:
                parts.append(f"{name} weight {g.render()}")
        return "; ".join(parts)

    def __repr__(self):
        return f"DimDerivation({self.render()!r})"


def apply(delta: DimDerivation, a: DimElement) -> DimElement:
    return delta.apply(a)


def commutator(d1: DimDerivation, d2: DimDerivation) -> DimDerivation:
    """[D, D'] = D o D' - D' o D, read off on the generators."""
    if d1.model != d2.model:
        raise ModelMismatch("derivations live on different models")
    model = d1.model
    symbol = {}
    for name in model.vars.names:
        x = model.gen(name)
        symbol[name] = (d1.apply(d2.apply(x)) - d2.apply(d1.apply(x))).coeff
    weights = []
    for name in model.lines:
        u = model.gen(name)
        weights.append((d1.apply(d2.apply(u)) - d2.apply(d1.apply(u))).coeff)
    return DimDerivation(model, d1.shift + d2.shift, symbol, weights)


def from_line_derivation(
    model: PolyLineModel,
    X: Mapping[str, Poly] | None = None,
    g: Sequence[Poly] | Mapping[str, Poly] | None = None,
) -> DimDerivation:
    """The shift-0 derivation acting as X on functions and as g_j on units."""
    return DimDerivation(model, model.zero_dim(), X, g)


def zero_derivation(model: PolyLineModel, shift=None) -> DimDerivation:
    return DimDerivation(model, shift)
