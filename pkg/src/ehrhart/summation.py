"""Summing a polynomial over the lattice points encoded by a short rational function."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Dict, Optional, Sequence, Tuple

from .genfun import ShortRationalFunction, genfun_closed, genfun_open
from .polytope import VPolytope

Exp = Tuple[int, ...]


@dataclass
class Polynomial:
    nvars: int
    terms: Dict[Exp, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        self.terms = {tuple(e): Fraction(c) for e, c in self.terms.items() if c != 0}
        for e in self.terms:
            if len(e) != self.nvars:
                raise ValueError("exponent length does not match variable count")

    @staticmethod
    def constant(nvars: int, c=1) -> "Polynomial":
        return Polynomial(nvars, {(0,) * nvars: Fraction(c)})

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def __call__(self, x: Sequence) -> Fraction:
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for xi, k in zip(x, e):
                if k:
                    v *= Fraction(xi) ** k
            total += v
        return total

    def __add__(self, other: "Polynomial") -> "Polynomial":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return Polynomial(self.nvars, out)

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            out: Dict[Exp, Fraction] = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    out[e] = out.get(e, Fraction(0)) + c1 * c2
            return Polynomial(self.nvars, out)
        return Polynomial(self.nvars, {e: c * Fraction(other) for e, c in self.terms.items()})

    __rmul__ = __mul__

    def homogeneous_rescale(self, m, weight: int) -> "Polynomial":
        """The polynomial x -> m^weight * p(x / m)."""
        m = Fraction(m)
        return Polynomial(self.nvars, {e: c * m ** (weight - sum(e)) for e, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, Polynomial) and self.nvars == other.nvars and self.terms == other.terms


# --------------------------------------------------------- operator


def _theta(state: Dict, i: int) -> Dict:
    """Apply x_i d/dx_i to a dict {(exponent, dens): coef}."""
    out: Dict = {}
    for (a, dens), c in state.items():
        if a[i]:
            key = (a, dens)
            out[key] = out.get(key, Fraction(0)) + c * a[i]
        for k, (b, g) in enumerate(dens):
            if b[i] == 0:
                continue
            a2 = tuple(x + y for x, y in zip(a, b))
            dens2 = dens[:k] + ((b, g + 1),) + dens[k + 1:]
            key = (a2, dens2)
            out[key] = out.get(key, Fraction(0)) + c * g * b[i]
    return {k: v for k, v in out.items() if v != 0}


def apply_diff_operator(f: Polynomial, S: ShortRationalFunction) -> ShortRationalFunction:
    """The SRF of f(x_1 d_1, ..., x_n d_n) S."""
    if f.nvars != S.dim:
        raise ValueError("variable counts differ")
    n = S.dim
    base = {}
    for t in S.terms:
        base[(t.exponent, t.dens)] = base.get((t.exponent, t.dens), Fraction(0)) + t.coef
    cache: Dict[Exp, Dict] = {(0,) * n: base}

    def powered(e: Exp) -> Dict:
        if e in cache:
            return cache[e]
        i = max(k for k in range(n) if e[k])
        prev = e[:i] + (e[i] - 1,) + e[i + 1:]
        cache[e] = _theta(powered(prev), i)
        return cache[e]

    raw = []
    for e, c in sorted(f.terms.items()):
        for (a, dens), v in powered(e).items():
            raw.append((c * v, a, dens))
    return ShortRationalFunction.build(n, raw)


# ------------------------------------------------------ specialization


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli numbers with B_1 = -1/2."""
    if n == 0:
        return Fraction(1)
    return -sum(comb(n + 1, k) * bernoulli(k) for k in range(n)) / (n + 1)


@dataclass(frozen=True)
class TruncatedSeries:
    coefficients: Tuple[Fraction, ...]

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        D = min(self.order, other.order)
        a, b = self.coefficients, other.coefficients
        return TruncatedSeries(tuple(sum((a[i] * b[k - i] for i in range(k + 1)), Fraction(0))
                                     for k in range(D + 1)))


def exp_series(alpha, D: int) -> TruncatedSeries:
    alpha = Fraction(alpha)
    return TruncatedSeries(tuple(alpha ** i / factorial(i) for i in range(D + 1)))


@lru_cache(maxsize=None)
def todd_factor(beta: int, D: int) -> TruncatedSeries:
    """Truncation of tau / (1 - e^(tau beta)) = -(1/beta) sum_n B_n (beta tau)^n / n!."""
    return TruncatedSeries(tuple(-bernoulli(k) * Fraction(beta) ** (k - 1) / factorial(k)
                                 for k in range(D + 1)))


@lru_cache(maxsize=None)
def _todd_power(beta: int, g: int, D: int) -> TruncatedSeries:
    if g == 1:
        return todd_factor(beta, D)
    return _todd_power(beta, g - 1, D) * todd_factor(beta, D)


def generic_direction(S: ShortRationalFunction, skip: int = 0) -> Tuple[int, ...]:
    """First moment-curve vector (1, M, M^2, ...) with <l, b> != 0 for all denominators.

    `skip` moves further along the candidate sequence (used to cross-check).
    """
    bs = {b for t in S.terms for b, _ in t.dens}
    M = 1 + max((abs(x) for b in bs for x in b), default=0)
    found = 0
    while True:
        l = tuple(M ** i for i in range(S.dim))
        if all(sum(x * y for x, y in zip(l, b)) != 0 for b in bs):
            if found == skip:
                return l
            found += 1
        M += 1


def specialize_at_one(S: ShortRationalFunction, l: Optional[Sequence[int]] = None) -> Fraction:
    """Value at x = (1, ..., 1) of the rational function S."""
    if l is None:
        l = generic_direction(S)
    total = Fraction(0)
    for t in S.terms:
        D = t.multiplicity
        if D == 0:
            total += t.coef
            continue
        alpha = sum(x * y for x, y in zip(l, t.exponent))
        series = exp_series(alpha, D)
        for b, g in t.dens:
            beta = sum(x * y for x, y in zip(l, b))
            if beta == 0:
                raise ArithmeticError("direction is orthogonal to a denominator")
            series = series * _todd_power(beta, g, D)
        total += t.coef * series.coefficients[D]
    return total


def sum_polynomial(f: Polynomial, piece: VPolytope, open: bool = False) -> Fraction:
    """Sum of f over the lattice points of piece (its relative interior when open=True)."""
    S = genfun_open(piece) if open else genfun_closed(piece)
    if not S.terms:
        return Fraction(0)
    return specialize_at_one(apply_diff_operator(f, S))
