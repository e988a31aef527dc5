"""Exact arithmetic substrate: rationals, sparse multivariate polynomials,
normalized rational functions and Laurent polynomials in the scaling
parameter ``lambda``.

All residue values computed by the engine live in these types.  Production
computations keep only ``lambda`` symbolic (weights are specialized early),
so the heavy multivariate paths are exercised mainly by unit tests.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _int_gcd
from typing import Iterable, Mapping

Rational = Fraction

LAMBDA = "lambda"


class ExactArithError(Exception):
    pass


class DivisionByZeroError(ExactArithError):
    pass


class SpecializationError(ExactArithError):
    """Denominator vanished under a weight assignment; caller must re-draw."""


class NotLaurentError(ExactArithError):
    """Rational function has a denominator factor other than a lambda power."""


def _frac_content(coeffs: Iterable[Fraction]) -> Fraction:
    """Positive rational c such that dividing by c makes the coefficients
    coprime integers."""
    num = 0
    den = 1
    for c in coeffs:
        num = _int_gcd(num, c.numerator)
        den = den * c.denominator // _int_gcd(den, c.denominator)
    if num == 0:
        return Fraction(1)
    return Fraction(num, den)


class MultiPoly:
    """Sparse multivariate polynomial over Q.

    ``variables`` is an ordered tuple with ``lambda`` first when present;
    ``terms`` maps exponent tuples to nonzero Fractions.
    """

    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables: tuple[str, ...], terms: Mapping[tuple[int, ...], Fraction] | None = None):
        self.variables = tuple(variables)
        clean: dict[tuple[int, ...], Fraction] = {}
        if terms:
            nvars = len(self.variables)
            for exps, coeff in terms.items():
                if len(exps) != nvars:
                    raise ValueError("exponent vector length mismatch")
                c = Fraction(coeff)
                if c != 0:
                    clean[tuple(exps)] = c
        self.terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, variables: tuple[str, ...]) -> "MultiPoly":
        return cls(variables, {})

    @classmethod
    def const(cls, variables: tuple[str, ...], value) -> "MultiPoly":
        c = Fraction(value)
        if c == 0:
            return cls.zero(variables)
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, variables: tuple[str, ...], name: str) -> "MultiPoly":
        idx = variables.index(name)
        exps = [0] * len(variables)
        exps[idx] = 1
        return cls(variables, {tuple(exps): Fraction(1)})

    # -- basic queries -------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(e == 0 for e in exps) for exps in self.terms)

    def constant_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(e) for e in self.terms)

    def degree_in(self, name: str) -> int:
        if not self.terms:
            return 0
        idx = self.variables.index(name)
        return max(e[idx] for e in self.terms)

    def uses(self, name: str) -> bool:
        if name not in self.variables:
            return False
        idx = self.variables.index(name)
        return any(e[idx] > 0 for e in self.terms)

    def _key(self, exps: tuple[int, ...]):
        # deglex, variables compared from the back so that lambda (first
        # slot) is the smallest variable
        return (sum(exps), tuple(reversed(exps)))

    def leading(self) -> tuple[tuple[int, ...], Fraction]:
        exps = max(self.terms, key=self._key)
        return exps, self.terms[exps]

    def content(self) -> Fraction:
        return _frac_content(self.terms.values())

    # -- arithmetic ----------------------------------------------------
    def _check(self, other: "MultiPoly"):
        if self.variables != other.variables:
            raise ValueError("variable sets differ")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(self.variables, other)
        self._check(other)
        terms = dict(self.terms)
        for exps, c in other.terms.items():
            s = terms.get(exps, Fraction(0)) + c
            if s == 0:
                terms.pop(exps, None)
            else:
                terms[exps] = s
        return MultiPoly(self.variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(self.variables, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if c == 0:
                return MultiPoly.zero(self.variables)
            return MultiPoly(self.variables, {e: k * c for e, k in self.terms.items()})
        self._check(other)
        terms: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(exps, Fraction(0)) + c1 * c2
                if s == 0:
                    terms.pop(exps, None)
                else:
                    terms[exps] = s
        return MultiPoly(self.variables, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = MultiPoly.const(self.variables, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(self.variables, other)
        return isinstance(other, MultiPoly) and self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self.terms.items())))
        return self._hash

    def substitute(self, assignment: Mapping[str, Fraction], keep: tuple[str, ...]) -> "MultiPoly":
        """Evaluate the variables in ``assignment``; the result lives over
        the variable tuple ``keep``."""
        keep_idx = [self.variables.index(v) for v in keep]
        values: list[Fraction | None] = []
        for v in self.variables:
            if v in keep:
                values.append(None)
            elif v in assignment:
                values.append(Fraction(assignment[v]))
            else:
                raise ValueError(f"no assignment for variable {v!r}")
        terms: dict[tuple[int, ...], Fraction] = {}
        for exps, coeff in self.terms.items():
            c = coeff
            for i, val in enumerate(values):
                if val is not None and exps[i]:
                    c *= val ** exps[i]
            new_exps = tuple(exps[i] for i in keep_idx)
            s = terms.get(new_exps, Fraction(0)) + c
            if s == 0:
                terms.pop(new_exps, None)
            else:
                terms[new_exps] = s
        return MultiPoly(tuple(keep), terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps in sorted(self.terms, key=self._key, reverse=True):
            c = self.terms[exps]
            mono = "*".join(
                f"{v}^{e}" if e > 1 else v
                for v, e in zip(self.variables, exps)
                if e
            )
            parts.append(f"{c}*{mono}" if mono else f"{c}")
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# polynomial gcd
# ---------------------------------------------------------------------------

def _to_recursive(p: MultiPoly, var_idx: int) -> dict[int, MultiPoly]:
    """View p as a univariate polynomial in variables[var_idx] with MultiPoly
    coefficients in the remaining variables."""
    rest = tuple(v for i, v in enumerate(p.variables) if i != var_idx)
    coeffs: dict[int, dict[tuple[int, ...], Fraction]] = {}
    for exps, c in p.terms.items():
        d = exps[var_idx]
        rest_exps = tuple(e for i, e in enumerate(exps) if i != var_idx)
        coeffs.setdefault(d, {})[rest_exps] = c
    return {d: MultiPoly(rest, t) for d, t in coeffs.items()}


def _from_recursive(coeffs: Mapping[int, MultiPoly], variables: tuple[str, ...], var_idx: int) -> MultiPoly:
    terms: dict[tuple[int, ...], Fraction] = {}
    for d, poly in coeffs.items():
        for exps, c in poly.terms.items():
            full = list(exps[:var_idx]) + [d] + list(exps[var_idx:])
            terms[tuple(full)] = c
    return MultiPoly(variables, terms)


def _uni_gcd(a: dict[int, Fraction], b: dict[int, Fraction]) -> dict[int, Fraction]:
    """Euclidean gcd of univariate polynomials given as exponent->Fraction
    maps; returns a primitive representative."""

    def degree(p):
        return max(p) if p else -1

    def prim(p):
        if not p:
            return p
        c = _frac_content(p.values())
        lead = p[degree(p)]
        if lead < 0:
            c = -c
        return {e: v / c for e, v in p.items()}

    a, b = dict(a), dict(b)
    while b:
        da, db = degree(a), degree(b)
        if da < db:
            a, b = b, a
            continue
        lead_b = b[degree(b)]
        # one reduction step of a by b
        shift = da - degree(b)
        factor = a[da] / lead_b
        for e, v in b.items():
            ne = e + shift
            s = a.get(ne, Fraction(0)) - factor * v
            if s == 0:
                a.pop(ne, None)
            else:
                a[ne] = s
        if degree(a) < degree(b):
            a, b = b, a
    return prim(a)


def poly_gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Gcd over Q, normalized primitive with positive leading coefficient."""
    if a.variables != b.variables:
        raise ValueError("variable sets differ")
    variables = a.variables
    if a.is_zero():
        g = b
    elif b.is_zero():
        g = a
    else:
        used = [i for i, v in enumerate(variables) if a.uses(v) or b.uses(v)]
        if not used:
            g = MultiPoly.const(variables, 1)
        elif len(used) == 1:
            idx = used[0]
            ua = {e[idx]: c for e, c in a.terms.items()}
            ub = {e[idx]: c for e, c in b.terms.items()}
            gu = _uni_gcd(ua, ub)
            terms = {}
            for d, c in gu.items():
                exps = [0] * len(variables)
                exps[idx] = d
                terms[tuple(exps)] = c
            g = MultiPoly(variables, terms)
        else:
            g = _multi_gcd(a, b, used[-1])
    if g.is_zero():
        return g
    lead_exps, lead = g.leading()
    c = g.content()
    if lead < 0:
        c = -c
    return g * (1 / c)


def _multi_gcd(a: MultiPoly, b: MultiPoly, main_idx: int) -> MultiPoly:
    """Primitive-PRS gcd, recursing on the number of variables."""
    variables = a.variables
    ra = _to_recursive(a, main_idx)
    rb = _to_recursive(b, main_idx)
    rest = tuple(v for i, v in enumerate(variables) if i != main_idx)

    def content_of(r: dict[int, MultiPoly]) -> MultiPoly:
        g = MultiPoly.zero(rest)
        for p in r.values():
            g = poly_gcd(g, p)
        return g

    def divide_exact(p: MultiPoly, d: MultiPoly) -> MultiPoly:
        q, r = _poly_divmod(p, d)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    def prim_part(r: dict[int, MultiPoly]) -> dict[int, MultiPoly]:
        c = content_of(r)
        if c.is_constant():
            return r
        return {d: divide_exact(p, c) for d, p in r.items()}

    def deg(r):
        return max(r) if r else -1

    cont_a, cont_b = content_of(ra), content_of(rb)
    cont_g = poly_gcd(cont_a, cont_b)
    ra, rb = prim_part(ra), prim_part(rb)
    while rb:
        if deg(ra) < deg(rb):
            ra, rb = rb, ra
            continue
        # pseudo-remainder of ra by rb
        lead_b = rb[deg(rb)]
        r = {d: p * (lead_b ** (deg(ra) - deg(rb) + 1)) for d, p in ra.items()}
        while r and deg(r) >= deg(rb):
            dr = deg(r)
            factor = divide_exact(r[dr], lead_b)
            shift = dr - deg(rb)
            for d, p in rb.items():
                nd = d + shift
                s = r.get(nd, MultiPoly.zero(rest)) - factor * p
                if s.is_zero():
                    r.pop(nd, None)
                else:
                    r[nd] = s
            if dr in r:  # leading term must vanish
                r.pop(dr, None)
        ra, rb = rb, prim_part(r) if r else {}
    g = _from_recursive(ra, variables, main_idx)
    # reattach content gcd (lives over rest variables)
    cont_full_terms = {}
    for exps, c in cont_g.terms.items():
        full = list(exps[:main_idx]) + [0] + list(exps[main_idx:])
        cont_full_terms[tuple(full)] = c
    return g * MultiPoly(variables, cont_full_terms)


def _poly_divmod(a: MultiPoly, b: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
    """Division with remainder under the deglex order; exact when b | a."""
    if b.is_zero():
        raise DivisionByZeroError("division by zero")
    variables = a.variables
    quo = MultiPoly.zero(variables)
    rem = a
    b_lead_exps, b_lead_c = b.leading()
    while not rem.is_zero():
        r_exps, r_c = rem.leading()
        diff = tuple(x - y for x, y in zip(r_exps, b_lead_exps))
        if any(d < 0 for d in diff):
            break
        t = MultiPoly(variables, {diff: r_c / b_lead_c})
        quo = quo + t
        rem = rem - t * b
    return quo, rem


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------

LAMBDA_VARS = (LAMBDA,)


class RationalFunction:
    """Normalized quotient of MultiPolys.

    The canonical representative has a primitive denominator with positive
    leading coefficient, so equal functions compare equal structurally.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: MultiPoly, den: MultiPoly | None = None, *, _normalized=False):
        if den is None:
            den = MultiPoly.const(num.variables, 1)
        if den.is_zero():
            raise DivisionByZeroError("division by zero")
        if not _normalized:
            num, den = self._normalize(num, den)
        self.num = num
        self.den = den
        self._hash = None

    @staticmethod
    def _normalize(num: MultiPoly, den: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
        if num.is_zero():
            return num, MultiPoly.const(num.variables, 1)
        if den.is_constant():
            c = den.constant_value()
            return num * (1 / c), MultiPoly.const(num.variables, 1)
        # single-monomial denominator: cancel common monomial factors cheaply
        if len(den.terms) == 1:
            (dexps, dc), = den.terms.items()
            shifts = tuple(min(min(e[i] for e in num.terms), dexps[i]) for i in range(len(num.variables)))
            if any(shifts):
                num = MultiPoly(num.variables, {tuple(a - s for a, s in zip(e, shifts)): c for e, c in num.terms.items()})
                dexps = tuple(a - s for a, s in zip(dexps, shifts))
                den = MultiPoly(den.variables, {dexps: dc})
            if all(e == 0 for e in dexps):
                return num * (1 / dc), MultiPoly.const(num.variables, 1)
            c = _frac_content([dc])
            if dc < 0:
                c = -c
            return num * (1 / c), den * (1 / c)
        g = poly_gcd(num, den)
        if not (g.is_constant() and g.constant_value() == 1):
            num, r1 = _poly_divmod(num, g)
            den, r2 = _poly_divmod(den, g)
            assert r1.is_zero() and r2.is_zero()
        c = den.content()
        _, lead = den.leading()
        if lead < 0:
            c = -c
        return num * (1 / c), den * (1 / c)

    # -- constructors ---------------------------------------------------
    @classmethod
    def const(cls, value, variables: tuple[str, ...] = LAMBDA_VARS) -> "RationalFunction":
        return cls(MultiPoly.const(variables, value))

    @classmethod
    def var(cls, name: str, variables: tuple[str, ...] = LAMBDA_VARS) -> "RationalFunction":
        return cls(MultiPoly.var(variables, name))

    @classmethod
    def lam(cls) -> "RationalFunction":
        return cls.var(LAMBDA)

    @property
    def variables(self) -> tuple[str, ...]:
        return self.num.variables

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        return self.num.constant_value() / self.den.constant_value()

    # -- arithmetic -----------------------------------------------------
    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (int, Fraction)):
            return RationalFunction.const(other, self.variables)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _normalized=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.num.is_zero():
            raise DivisionByZeroError("division by zero")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return RationalFunction.const(other, self.variables) / self

    def inverse(self) -> "RationalFunction":
        if self.num.is_zero():
            raise DivisionByZeroError("division by zero")
        return RationalFunction(self.den, self.num)

    def __pow__(self, n: int):
        if n == 0:
            return RationalFunction.const(1, self.variables)
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFunction(self.num ** n, self.den ** n)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __repr__(self):
        if self.den.is_constant() and self.den.constant_value() == 1:
            return f"({self.num!r})"
        return f"({self.num!r})/({self.den!r})"

    # -- spec operations --------------------------------------------------
    def evaluate(self, assignment: Mapping[str, Fraction], keep: tuple[str, ...] = ()) -> "RationalFunction":
        """Substitute rationals for all variables not in ``keep``."""
        num = self.num.substitute(assignment, keep)
        den = self.den.substitute(assignment, keep)
        if den.is_zero():
            raise SpecializationError("degenerate specialization")
        return RationalFunction(num, den)

    def to_laurent(self) -> "LaurentPoly":
        """Expansion in Q[lambda, lambda^-1]; fails unless the denominator is
        a pure lambda power (a non-Laurent value signals an assembly bug)."""
        for v in self.variables:
            if v != LAMBDA and (self.num.uses(v) or self.den.uses(v)):
                raise NotLaurentError(f"value depends on weight symbol {v!r}")
        if self.num.is_zero():
            return LaurentPoly({})
        if len(self.den.terms) != 1:
            raise NotLaurentError("not Laurent")
        (dexps, dc), = self.den.terms.items()
        if any(e and v != LAMBDA for v, e in zip(self.variables, dexps)):
            raise NotLaurentError("not Laurent")
        lam_idx = self.variables.index(LAMBDA) if LAMBDA in self.variables else None
        dpow = dexps[lam_idx] if lam_idx is not None else 0
        coeffs: dict[int, Fraction] = {}
        for exps, c in self.num.terms.items():
            npow = exps[lam_idx] if lam_idx is not None else 0
            coeffs[npow - dpow] = coeffs.get(npow - dpow, Fraction(0)) + c / dc
        return LaurentPoly(coeffs)


def normalize(f: RationalFunction) -> RationalFunction:
    """Return the canonical representative (the constructor normalizes, so
    this is a checked identity)."""
    return RationalFunction(f.num, f.den)


def evaluate(f: RationalFunction, assignment: Mapping[str, Fraction], keep: tuple[str, ...] = ()) -> RationalFunction:
    return f.evaluate(assignment, keep)


def to_laurent(f: RationalFunction) -> "LaurentPoly":
    return f.to_laurent()


class LaurentPoly:
    """Finite Laurent polynomial in lambda with exact rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, Fraction] | None = None):
        clean = {}
        if coeffs:
            for k, c in coeffs.items():
                c = Fraction(c)
                if c != 0:
                    clean[int(k)] = c
        self.coeffs = clean

    @classmethod
    def const(cls, value) -> "LaurentPoly":
        return cls({0: Fraction(value)})

    def coefficient(self, k: int) -> Fraction:
        return self.coeffs.get(k, Fraction(0))

    def is_zero(self) -> bool:
        return not self.coeffs

    def min_exp(self) -> int | None:
        return min(self.coeffs) if self.coeffs else None

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        coeffs = dict(self.coeffs)
        for k, c in other.coeffs.items():
            coeffs[k] = coeffs.get(k, Fraction(0)) + c
        return LaurentPoly(coeffs)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return LaurentPoly({k: c * other for k, c in self.coeffs.items()})
        coeffs: dict[int, Fraction] = {}
        for k1, c1 in self.coeffs.items():
            for k2, c2 in other.coeffs.items():
                coeffs[k1 + k2] = coeffs.get(k1 + k2, Fraction(0)) + c1 * c2
        return LaurentPoly(coeffs)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, LaurentPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def to_rational_function(self) -> RationalFunction:
        shift = -min((min(self.coeffs), 0)) if self.coeffs else 0
        terms = {(k + shift,): c for k, c in self.coeffs.items()}
        num = MultiPoly(LAMBDA_VARS, terms)
        den = MultiPoly(LAMBDA_VARS, {(shift,): Fraction(1)})
        return RationalFunction(num, den)

    def as_strings(self) -> dict[str, str]:
        """Exact serialization used by the CLI: exponent -> "p/q"."""
        return {str(k): str(self.coeffs[k]) for k in sorted(self.coeffs)}

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in sorted(self.coeffs, reverse=True):
            c = self.coeffs[k]
            if k == 0:
                parts.append(f"{c}")
            elif k == 1:
                parts.append(f"{c}*lambda")
            else:
                parts.append(f"{c}*lambda^{k}")
        return " + ".join(parts)


def coefficient(f: LaurentPoly, k: int) -> Fraction:
    return f.coefficient(k)
