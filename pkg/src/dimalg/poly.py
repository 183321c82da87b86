"""Exact multivariate Laurent polynomials over the rationals.

A :class:`Poly` lives over a :class:`VarTable`.  Ordinary variables take
non-negative exponents only; invertible variables may appear with any
integer exponent.  Terms are stored as a map from exponent tuples to
nonzero :class:`fractions.Fraction` coefficients, so two equal polynomials
always have identical term maps.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping

from .errors import InvertibilityError, UnknownVariable, VarTableMismatch

Exponents = tuple[int, ...]


class VarTable:
    """Ordered coordinate names, split into ordinary and invertible ones.

    Exponent vectors list the ordinary variables first, then the
    invertible ones, each group in declaration order.
    """

    __slots__ = ("ordinary", "invertible", "names", "_index", "_hash")

    def __init__(self, ordinary: Iterable[str] = (), invertible: Iterable[str] = ()):
        self.ordinary = tuple(ordinary)
        self.invertible = tuple(invertible)
        self.names = self.ordinary + self.invertible
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names in {self.names}")
        self._index = {name: i for i, name in enumerate(self.names)}
        self._hash = hash((self.ordinary, self.invertible))

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __contains__(self, name):
        return name in self._index

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, VarTable):
            return NotImplemented
        return self.ordinary == other.ordinary and self.invertible == other.invertible

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"VarTable({list(self.ordinary)!r}, invertible={list(self.invertible)!r})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVariable(f"unknown variable {name!r}") from None

    def is_invertible(self, name: str) -> bool:
        return self.index(name) >= len(self.ordinary)

    def zero_exponents(self) -> Exponents:
        return (0,) * len(self.names)


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    raise TypeError(f"coefficient must be rational, got {type(c).__name__}")


class Poly:
    """Immutable Laurent polynomial with exact rational coefficients."""

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: VarTable, terms: Mapping[Exponents, object] | None = None):
        clean: dict[Exponents, Fraction] = {}
        n = len(vars)
        n_ord = len(vars.ordinary)
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != n:
                raise ValueError(f"exponent vector {exps} has wrong length for {vars!r}")
            if any(e < 0 for e in exps[:n_ord]):
                raise InvertibilityError(f"negative exponent on an ordinary variable in {exps}")
            c = _as_fraction(c)
            if c:
                clean[exps] = clean.get(exps, 0) + c
                if not clean[exps]:
                    del clean[exps]
        self.vars = vars
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, vars: VarTable, terms: dict[Exponents, Fraction]) -> "Poly":
        # trusted constructor: terms already canonical
        p = object.__new__(cls)
        p.vars = vars
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, vars: VarTable) -> "Poly":
        return cls._raw(vars, {})

    @classmethod
    def const(cls, vars: VarTable, c) -> "Poly":
        c = _as_fraction(c)
        return cls._raw(vars, {vars.zero_exponents(): c} if c else {})

    @classmethod
    def var(cls, vars: VarTable, name: str, power: int = 1) -> "Poly":
        i = vars.index(name)
        if power < 0 and not vars.is_invertible(name):
            raise InvertibilityError(f"{name} is not invertible")
        exps = [0] * len(vars)
        exps[i] = power
        return cls._raw(vars, {tuple(exps): Fraction(1)})

    @classmethod
    def monomial(cls, vars: VarTable, exps: Exponents, c=1) -> "Poly":
        return cls(vars, {tuple(exps): c})

    # -- basic queries ---------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_term(self) -> Fraction:
        return self.terms.get(self.vars.zero_exponents(), Fraction(0))

    def degree(self) -> int:
        """Largest total degree of a term; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def used_vars(self) -> set[str]:
        used = set()
        for exps in self.terms:
            used.update(name for name, e in zip(self.vars.names, exps) if e)
        return used

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.vars == other.vars and self.terms == other.terms
        if isinstance(other, (int, Rational)):
            return self.terms == Poly.const(self.vars, other).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"Poly({self.render()!r})"

    def __str__(self):
        return self.render()

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.vars != self.vars:
                raise VarTableMismatch(f"{self.vars!r} vs {other.vars!r}")
            return other
        if isinstance(other, (int, Rational)):
            return Poly.const(self.vars, other)
        raise TypeError(f"cannot combine Poly with {type(other).__name__}")

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        terms = dict(self.terms)
        for exps, c in other.terms.items():
            s = terms.get(exps, 0) + c
            if s:
                terms[exps] = s
            else:
                terms.pop(exps, None)
        return Poly._raw(self.vars, terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            return self.scale(other)
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if not self.terms or not other.terms:
            return Poly._raw(self.vars, {})
        terms: dict[Exponents, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return Poly._raw(self.vars, {e: c for e, c in terms.items() if c})

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        c = _as_fraction(c)
        if not c:
            return Poly._raw(self.vars, {})
        return Poly._raw(self.vars, {e: c * v for e, v in self.terms.items()})

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            if not other:
                raise ZeroDivisionError("division by zero")
            return self.scale(1 / _as_fraction(other))
        if isinstance(other, Poly):
            ok, inv = other.is_unit()
            if not ok:
                raise InvertibilityError(f"{other} is not a unit")
            return self * inv
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            ok, inv = self.is_unit()
            if not ok:
                raise InvertibilityError(f"{self} is not a unit; cannot raise to {n}")
            return inv ** (-n)
        result = Poly.const(self.vars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- calculus ----------------------------------------------------------

    def diff(self, var: str) -> "Poly":
        """Formal partial derivative; d(t^n) = n t^(n-1) also for n < 0."""
        i = self.vars.index(var)
        terms = {}
        for exps, c in self.terms.items():
            e = exps[i]
            if e:
                new = exps[:i] + (e - 1,) + exps[i + 1 :]
                terms[new] = c * e
        return Poly._raw(self.vars, terms)

    def substitute(self, mapping: Mapping[str, "Poly"], target: VarTable | None = None) -> "Poly":
        """Compose with ``mapping``; unmapped variables map to the same name in ``target``.

        Images of invertible variables must be units so that negative
        powers stay meaningful.
        """
        target = target or self.vars
        images = []
        inverses = []
        used = self.used_vars()
        for name in self.vars.names:
            if name in mapping:
                img = mapping[name]
                if img.vars != target:
                    raise VarTableMismatch(f"image of {name} lives over {img.vars!r}")
            elif name in target:
                img = Poly.var(target, name)
            else:
                raise UnknownVariable(f"no image for variable {name!r}")
            images.append(img)
            if self.vars.is_invertible(name) and name in used:
                ok, inv = img.is_unit()
                if not ok:
                    raise InvertibilityError(f"image of invertible {name} is not a unit: {img}")
                inverses.append(inv)
            else:
                inverses.append(None)
        powers: dict[tuple[int, int], Poly] = {}

        def power(i, e):
            key = (i, e)
            if key not in powers:
                base = images[i] if e > 0 else inverses[i]
                if base is None:
                    raise InvertibilityError(f"image of {self.vars.names[i]} is not a unit")
                powers[key] = base ** abs(e)
            return powers[key]

        result = Poly.zero(target)
        for exps, c in self.terms.items():
            term = Poly.const(target, c)
            for i, e in enumerate(exps):
                if e:
                    term = term * power(i, e)
            result = result + term
        return result

    def embed(self, target: VarTable, rename: Mapping[str, str] | None = None) -> "Poly":
        """Re-express over a larger table, optionally renaming variables."""
        rename = rename or {}
        idx = []
        for name in self.vars.names:
            new = rename.get(name, name)
            j = target.index(new)
            if self.vars.is_invertible(name) and not target.is_invertible(new):
                if any(exps[self.vars.index(name)] < 0 for exps in self.terms):
                    raise InvertibilityError(f"{new} is not invertible in the target table")
            idx.append(j)
        terms = {}
        n = len(target)
        for exps, c in self.terms.items():
            new = [0] * n
            for j, e in zip(idx, exps):
                new[j] += e
            terms[tuple(new)] = c
        return Poly(target, terms)

    # -- units -------------------------------------------------------------

    def is_unit(self) -> tuple[bool, "Poly | None"]:
        """True with the exact inverse iff self is c * (monomial in invertible vars)."""
        if len(self.terms) != 1:
            return False, None
        (exps, c), = self.terms.items()
        n_ord = len(self.vars.ordinary)
        if any(exps[:n_ord]):
            return False, None
        return True, Poly._raw(self.vars, {tuple(-e for e in exps): 1 / c})

    # -- rendering ---------------------------------------------------------

    def sorted_terms(self) -> list[tuple[Exponents, Fraction]]:
        """Terms in graded lexicographic order, largest first."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def render(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for k, (exps, c) in enumerate(self.sorted_terms()):
            mono = render_monomial(self.vars.names, exps)
            neg = c < 0
            a = -c if neg else c
            if not mono:
                body = render_rational(a)
            elif a == 1:
                body = mono
            else:
                body = f"{render_rational(a)}*{mono}"
            if k == 0:
                pieces.append(("-" if neg else "") + body)
            else:
                pieces.append((" - " if neg else " + ") + body)
        return "".join(pieces)


def render_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def render_monomial(names: Iterable[str], exps: Iterable[int]) -> str:
    parts = []
    for name, e in zip(names, exps):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def add(p: Poly, q: Poly) -> Poly:
    return p + q


def mul(p: Poly, q: Poly) -> Poly:
    return p * q


def diff(p: Poly, var: str) -> Poly:
    return p.diff(var)


def substitute(p: Poly, mapping: Mapping[str, Poly], target: VarTable | None = None) -> Poly:
    return p.substitute(mapping, target)


def is_unit(p: Poly) -> tuple[bool, Poly | None]:
    return p.is_unit()
