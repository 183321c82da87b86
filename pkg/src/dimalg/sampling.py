"""Seeded random polynomials and power-ring elements for verification sweeps."""

from __future__ import annotations

import random
from fractions import Fraction

from .poly import Poly, VarTable
from .power_ring import DimElement, PolyLineModel

DEFAULT_SEED = 20240917


def random_rational(rng: random.Random, bound: int = 3) -> Fraction:
    while True:
        num = rng.randint(-bound, bound)
        if num:
            return Fraction(num, rng.choice((1, 1, 1, 2, 3)))


def random_exponents(vars: VarTable, rng: random.Random, max_degree: int) -> tuple[int, ...]:
    exps = [0] * len(vars)
    budget = rng.randint(0, max_degree)
    n_ord = len(vars.ordinary)
    for _ in range(budget):
        if not len(vars):
            break
        i = rng.randrange(len(vars))
        if i >= n_ord and rng.random() < 0.5:
            exps[i] -= 1
        else:
            exps[i] += 1
    return tuple(exps)


def random_poly(vars: VarTable, rng: random.Random, max_degree: int = 2, max_terms: int = 3) -> Poly:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        terms[random_exponents(vars, rng, max_degree)] = random_rational(rng)
    return Poly(vars, terms)


def random_dim(model: PolyLineModel, rng: random.Random, bound: int = 2) -> tuple[int, ...]:
    return tuple(rng.randint(-bound, bound) for _ in range(model.m))


def random_element(
    model: PolyLineModel,
    rng: random.Random,
    max_degree: int = 2,
    max_terms: int = 3,
    dim: tuple[int, ...] | None = None,
) -> DimElement:
    d = random_dim(model, rng) if dim is None else dim
    return DimElement(model, d, random_poly(model.vars, rng, max_degree, max_terms))


def random_monomial(model: PolyLineModel, rng: random.Random, max_degree: int = 2) -> DimElement:
    return random_element(model, rng, max_degree, 1)
