"""Psi-class intersection numbers on genus-0 moduli of pointed curves and
the flag generating sums used inside vertex contributions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache


class FlagWeightError(Exception):
    """A flag weight vanished; signals a degenerate specialization upstream."""


@dataclass(frozen=True)
class PsiProfile:
    n: int
    exponents: tuple[int, ...]

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("need at least 3 markings")
        if len(self.exponents) != self.n:
            raise ValueError("exponent count must match marking count")
        if any(k < 0 for k in self.exponents):
            raise ValueError("negative psi exponent")


@lru_cache(maxsize=None)
def _factorial(n: int) -> int:
    r = 1
    for i in range(2, n + 1):
        r *= i
    return r


def psi_integral(profile: PsiProfile) -> Fraction:
    """Genus-0 psi intersection number: (n-3)!/prod(k_i!) when the exponents
    sum to n-3, else 0."""
    n, ks = profile.n, profile.exponents
    if sum(ks) != n - 3:
        return Fraction(0)
    denom = 1
    for k in ks:
        denom *= _factorial(k)
    return Fraction(_factorial(n - 3), denom)


def string_oracle(profile: PsiProfile) -> Fraction:
    """Same integral via the string-equation recursion; used only as an
    independent cross-check of psi_integral."""
    return _string_rec(profile.exponents)


@lru_cache(maxsize=None)
def _string_rec(ks: tuple[int, ...]) -> Fraction:
    n = len(ks)
    if sum(ks) != n - 3:
        return Fraction(0)
    if n == 3:
        return Fraction(1) if ks == (0, 0, 0) else Fraction(0)
    # remove one zero-exponent marking via the string equation
    try:
        j = ks.index(0)
    except ValueError:
        return Fraction(0)  # unreachable when the dimension matches
    rest = ks[:j] + ks[j + 1:]
    total = Fraction(0)
    for i, k in enumerate(rest):
        if k >= 1:
            lowered = rest[:i] + (k - 1,) + rest[i + 1:]
            total += _string_rec(tuple(sorted(lowered, reverse=True)))
    return total


def _distributions(total: int, slots: int):
    """All tuples of nonnegative ints of given length summing to total."""
    if slots == 0:
        if total == 0:
            yield ()
        return
    if slots == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _distributions(total - first, slots - 1):
            yield (first,) + rest


def flag_sum(weights, extra=None, marking_exponents=()):
    """Integral over genus-0 moduli of prod_F psi^e_F/(w_F - psi_F) times
    plain psi powers at extra markings.

    ``weights`` may be Fractions or any field elements supporting
    arithmetic; expansion is the finite sum of psi monomials against
    psi_integral.  Zero weights raise FlagWeightError.
    """
    weights = list(weights)
    m = len(weights)
    extra = list(extra) if extra is not None else [0] * m
    if len(extra) != m:
        raise ValueError("extra exponent count must match flag count")
    marks = list(marking_exponents)
    n = m + len(marks)
    if n < 3:
        raise ValueError("fewer than 3 special points; handle unstable cases upstream")
    for w in weights:
        if w == 0:
            raise FlagWeightError("vanishing flag weight")
    budget = n - 3 - sum(extra) - sum(marks)
    if budget < 0:
        return Fraction(0)
    total = None
    inv = [1 / w for w in weights]
    for dist in _distributions(budget, m):
        exps = tuple(e + b for e, b in zip(extra, dist)) + tuple(marks)
        coeff = psi_integral(PsiProfile(n, exps))
        if coeff == 0:
            continue
        term = coeff
        for iw, b in zip(inv, dist):
            term = term * iw ** (b + 1)
        total = term if total is None else total + term
    if total is None:
        return Fraction(0)
    return total
