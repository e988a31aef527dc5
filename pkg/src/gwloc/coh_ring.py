"""Cohomology rings of P^m and of split projective bundles P(V) -> P^m,
with Chern/Segre calculus, fiberwise pushforward/pullback, and finite
psi-series expansion of rational insertion expressions.

Conventions: P(V) parametrizes lines in the fibers of V; O(-1) is the
tautological subbundle, h = c1(O(1)), and the ring relation is
sum_{i=0..r} c_i(V) h^{r-i} = 0.  Pushforward satisfies
pi_*(h^{r-1+j}) = s_j(V) with s(V) = 1/c(V).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .exact_arith import LAMBDA_VARS, MultiPoly, RationalFunction

RF = RationalFunction


class InsertionError(Exception):
    pass


def _rf(value) -> RF:
    if isinstance(value, RF):
        return value
    return RF.const(value)


@dataclass(frozen=True)
class BundleSpec:
    """Split bundle V = O(a_1) + ... + O(a_r) on P^m."""

    base_dim: int
    twists: tuple[int, ...]

    def __post_init__(self):
        if self.base_dim < 0:
            raise ValueError("base dimension must be nonnegative")
        if len(self.twists) < 1:
            raise ValueError("need at least one summand")
        object.__setattr__(self, "twists", tuple(int(a) for a in self.twists))

    @property
    def rank(self) -> int:
        return len(self.twists)

    @property
    def globally_generated(self) -> bool:
        return all(a >= 0 for a in self.twists)

    def chern_coefficients(self) -> list[dict[int, Fraction]]:
        """c_i(V) as polynomials in H (maps H-power -> coefficient),
        truncated at H^base_dim."""
        # elementary symmetric polynomials in the roots a_k * H
        coeffs = [Fraction(1)]  # poly in H: prod (1 + a_k H), dense list
        for a in self.twists:
            new = coeffs + [Fraction(0)]
            for i in range(len(coeffs)):
                new[i + 1] += coeffs[i] * a
            coeffs = new[: self.base_dim + 1]
        out = []
        for i in range(self.rank + 1):
            if i <= self.base_dim and i < len(coeffs) and coeffs[i] != 0:
                out.append({i: coeffs[i]})
            else:
                out.append({})
        return out

    def segre_coefficients(self, j_max: int) -> list[Fraction]:
        """s_j(V) = coefficient of H^j in 1/c(V) mod H^{base_dim+1}; zero
        beyond the base dimension."""
        m = self.base_dim
        c = [Fraction(0)] * (m + 1)
        c[0] = Fraction(1)
        for i, ci in enumerate(self.chern_coefficients()):
            if i == 0:
                continue
            for p, v in ci.items():
                if p <= m:
                    c[p] += v
        s = [Fraction(0)] * (j_max + 1)
        s[0] = Fraction(1)
        for j in range(1, j_max + 1):
            if j > m:
                s[j] = Fraction(0)
                continue
            acc = Fraction(0)
            for i in range(1, min(j, m) + 1):
                acc += c[i] * s[j - i]
            s[j] = -acc
        return s


@dataclass(frozen=True)
class RingId:
    base_dim: int
    twists: tuple[int, ...] | None  # None: the base ring of P^m

    @property
    def is_bundle(self) -> bool:
        return self.twists is not None

    @property
    def fiber_rank(self) -> int:
        return len(self.twists) if self.twists else 0

    @property
    def dimension(self) -> int:
        return self.base_dim + (self.fiber_rank - 1 if self.is_bundle else 0)

    def bundle(self) -> BundleSpec:
        if not self.is_bundle:
            raise ValueError("base ring has no bundle")
        return BundleSpec(self.base_dim, self.twists)


def base_ring(m: int) -> RingId:
    return RingId(m, None)


def bundle_ring(spec: BundleSpec) -> RingId:
    return RingId(spec.base_dim, spec.twists)


class CohClass:
    """Element of the ring, in normal form: terms map (H-power, h-power) to
    RationalFunction-in-lambda coefficients, with H-power <= base_dim and
    h-power <= rank-1 (0 for base rings)."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: RingId, terms: Mapping[tuple[int, int], RF] | None = None, *, _reduced=False):
        self.ring = ring
        raw: dict[tuple[int, int], RF] = {}
        if terms:
            for (a, b), c in terms.items():
                c = _rf(c)
                if not c.is_zero():
                    raw[(a, b)] = c
        self.terms = raw if _reduced else _reduce(ring, raw)

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, ring: RingId) -> "CohClass":
        return cls(ring, {}, _reduced=True)

    @classmethod
    def one(cls, ring: RingId) -> "CohClass":
        return cls(ring, {(0, 0): RF.const(1)}, _reduced=True)

    @classmethod
    def scalar(cls, ring: RingId, value) -> "CohClass":
        return cls(ring, {(0, 0): _rf(value)})

    @classmethod
    def hyperplane(cls, ring: RingId) -> "CohClass":
        """H: the base hyperplane class (its pullback on a bundle ring)."""
        return cls(ring, {(1, 0): RF.const(1)})

    @classmethod
    def fiber_class(cls, ring: RingId) -> "CohClass":
        """h = c1(O(1)) on a bundle ring."""
        if not ring.is_bundle:
            raise ValueError("h lives on a bundle ring")
        return cls(ring, {(0, 1): RF.const(1)})

    # -- structure ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def degree_parts(self) -> dict[int, "CohClass"]:
        parts: dict[int, dict[tuple[int, int], RF]] = {}
        for (a, b), c in self.terms.items():
            parts.setdefault(a + b, {})[(a, b)] = c
        return {d: CohClass(self.ring, t, _reduced=True) for d, t in parts.items()}

    def is_homogeneous(self) -> bool:
        return len({a + b for (a, b) in self.terms}) <= 1

    def degree(self) -> int:
        if not self.terms:
            return 0
        degs = {a + b for (a, b) in self.terms}
        if len(degs) > 1:
            raise ValueError("inhomogeneous class")
        return degs.pop()

    def coefficients_constant(self) -> bool:
        return all(c.is_constant() for c in self.terms.values())

    # -- arithmetic -------------------------------------------------------
    def _check(self, other: "CohClass"):
        if self.ring != other.ring:
            raise ValueError("classes live in different rings")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, RF)):
            other = CohClass.scalar(self.ring, other)
        self._check(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            s = terms.get(k, RF.const(0)) + c
            if s.is_zero():
                terms.pop(k, None)
            else:
                terms[k] = s
        return CohClass(self.ring, terms, _reduced=True)

    __radd__ = __add__

    def __neg__(self):
        return CohClass(self.ring, {k: -c for k, c in self.terms.items()}, _reduced=True)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, RF)):
            other = CohClass.scalar(self.ring, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, RF)):
            c = _rf(other)
            if c.is_zero():
                return CohClass.zero(self.ring)
            return CohClass(self.ring, {k: v * c for k, v in self.terms.items()}, _reduced=True)
        self._check(other)
        terms: dict[tuple[int, int], RF] = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                k = (a1 + a2, b1 + b2)
                prod = c1 * c2
                if k in terms:
                    terms[k] = terms[k] + prod
                else:
                    terms[k] = prod
        return CohClass(self.ring, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = CohClass.one(self.ring)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, CohClass):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "<0>"
        parts = []
        for (a, b) in sorted(self.terms):
            mono = "*".join(s for s in (f"H^{a}" if a > 1 else "H" if a else "",
                                        f"h^{b}" if b > 1 else "h" if b else "") if s)
            c = self.terms[(a, b)]
            parts.append(f"{c!r}*{mono}" if mono else f"{c!r}")
        return "<" + " + ".join(parts) + ">"


def _h_reduction_rows(ring: RingId, max_pow: int) -> list[dict[tuple[int, int], Fraction]]:
    """Normal form of h^j for j = 0..max_pow as {(a,b): coeff} with b < rank."""
    r = ring.fiber_rank
    m = ring.base_dim
    rows: list[dict[tuple[int, int], Fraction]] = [{(0, 0): Fraction(1)}]
    chern = ring.bundle().chern_coefficients()
    for j in range(1, max_pow + 1):
        prev = rows[j - 1]
        nxt: dict[tuple[int, int], Fraction] = {}
        for (a, b), c in prev.items():
            if b + 1 < r:
                nxt[(a, b + 1)] = nxt.get((a, b + 1), Fraction(0)) + c
            else:
                # h^r = -(c1 h^{r-1} + c2 h^{r-2} + ... + c_r)
                for i in range(1, r + 1):
                    for p, v in chern[i].items():
                        a2 = a + p
                        if a2 > m:
                            continue
                        key = (a2, r - i)
                        nxt[key] = nxt.get(key, Fraction(0)) - c * v
        rows.append({k: v for k, v in nxt.items() if v != 0})
    return rows


def _reduce(ring: RingId, raw: Mapping[tuple[int, int], RF]) -> dict[tuple[int, int], RF]:
    m = ring.base_dim
    r = ring.fiber_rank
    if not ring.is_bundle:
        out = {}
        for (a, b), c in raw.items():
            if b != 0:
                raise ValueError("base ring class with fiber power")
            if a <= m and not c.is_zero():
                out[(a, 0)] = out.get((a, 0), RF.const(0)) + c if (a, 0) in out else c
        return {k: v for k, v in out.items() if not v.is_zero()}
    max_b = max((b for (_, b) in raw), default=0)
    rows = _h_reduction_rows(ring, max_b) if max_b >= r else None
    out: dict[tuple[int, int], RF] = {}
    for (a, b), c in raw.items():
        if a > m or c.is_zero():
            continue
        if b < r:
            targets = {(a, b): Fraction(1)}
        else:
            targets = {}
            for (a2, b2), v in rows[b].items():
                if a + a2 <= m:
                    targets[(a + a2, b2)] = v
        for key, v in targets.items():
            add = c * v
            if key in out:
                s = out[key] + add
                if s.is_zero():
                    out.pop(key)
                else:
                    out[key] = s
            elif not add.is_zero():
                out[key] = add
    return out


# ---------------------------------------------------------------------------
# spec operations
# ---------------------------------------------------------------------------

def chern_total(spec: BundleSpec) -> CohClass:
    """Total Chern class prod_k (1 + a_k H) in the base ring."""
    ring = base_ring(spec.base_dim)
    c = CohClass.one(ring)
    H = CohClass.hyperplane(ring)
    for a in spec.twists:
        c = c * (CohClass.one(ring) + H * Fraction(a))
    return c


def segre(spec: BundleSpec, j: int) -> CohClass:
    """j-th Segre class s_j(V) = [1/c(V)]_j in the base ring."""
    if j < 0:
        raise ValueError("negative Segre index")
    ring = base_ring(spec.base_dim)
    s = spec.segre_coefficients(j)
    return CohClass(ring, {(j, 0): RF.const(s[j])} if j <= spec.base_dim else {})


def pullback(c: CohClass, ring: RingId) -> CohClass:
    """pi^*: base ring class into the bundle ring over the same base."""
    if c.ring.is_bundle or not ring.is_bundle or c.ring.base_dim != ring.base_dim:
        raise ValueError("pullback goes from the base ring to a bundle ring")
    return CohClass(ring, {(a, 0): v for (a, _), v in c.terms.items()}, _reduced=True)


def pushforward(c: CohClass) -> CohClass:
    """pi_*: bundle ring to base ring; pi_*(h^{r-1+j} pi^*beta) = s_j(V) beta."""
    if not c.ring.is_bundle:
        raise ValueError("pushforward needs a bundle ring class")
    spec = c.ring.bundle()
    r = spec.rank
    target = base_ring(spec.base_dim)
    out: dict[tuple[int, int], RF] = {}
    for (a, b), coeff in c.terms.items():
        if b != r - 1:
            continue  # pi_* kills h-powers below r-1; higher are reduced away
        key = (a, 0)
        if key in out:
            out[key] = out[key] + coeff
        else:
            out[key] = coeff
    return CohClass(target, out)


def det_relative_tangent(spec: BundleSpec) -> CohClass:
    """c1(det T_pi) = r*h + pi^* c1(V) in the bundle ring."""
    ring = bundle_ring(spec)
    c1 = chern_total(spec).terms.get((1, 0), RF.const(0))
    return CohClass(ring, {(0, 1): RF.const(spec.rank), (1, 0): c1})


def chern_polynomial(spec: BundleSpec, t: CohClass) -> CohClass:
    """c_V(t) = sum_{i=0..r} c_i(V) t^{r-i}, evaluated in t's ring."""
    ring = t.ring
    chern = spec.chern_coefficients()
    result = CohClass.zero(ring)
    t_pows = [CohClass.one(ring)]
    for _ in range(spec.rank):
        t_pows.append(t_pows[-1] * t)
    for i in range(spec.rank + 1):
        ci = CohClass(ring, {(p, 0): RF.const(v) for p, v in chern[i].items()})
        result = result + ci * t_pows[spec.rank - i]
    return result


# ---------------------------------------------------------------------------
# descendant insertions and formal expansion
# ---------------------------------------------------------------------------

class DescendantInsertion:
    """Finite psi-series of cohomology classes attached to one marking."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: RingId, terms: Mapping[int, CohClass] | None = None):
        self.ring = ring
        clean: dict[int, CohClass] = {}
        if terms:
            for k, cls in terms.items():
                if k < 0:
                    raise ValueError("negative psi exponent")
                if not cls.is_zero():
                    clean[int(k)] = cls
        self.terms = clean

    @classmethod
    def from_class(cls, c: CohClass) -> "DescendantInsertion":
        return cls(c.ring, {0: c})

    def is_plain_class(self) -> bool:
        return set(self.terms) <= {0}

    def plain_class(self) -> CohClass:
        return self.terms.get(0, CohClass.zero(self.ring))

    def max_psi(self) -> int:
        return max(self.terms, default=0)

    def degree_parts(self) -> dict[int, "DescendantInsertion"]:
        """Split by total degree (class degree + psi exponent)."""
        parts: dict[int, dict[int, CohClass]] = {}
        for k, cls in self.terms.items():
            for d, comp in cls.degree_parts().items():
                parts.setdefault(k + d, {})
                parts[k + d][k] = parts[k + d].get(k, CohClass.zero(self.ring)) + comp
        return {d: DescendantInsertion(self.ring, t) for d, t in parts.items()}

    def pushforward(self) -> "DescendantInsertion":
        return DescendantInsertion(base_ring(self.ring.base_dim),
                                   {k: pushforward(c) for k, c in self.terms.items()})

    def coefficients_constant(self) -> bool:
        return all(c.coefficients_constant() for c in self.terms.values())

    def __eq__(self, other):
        return (isinstance(other, DescendantInsertion)
                and self.ring == other.ring and self.terms == other.terms)

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def __repr__(self):
        return "Ins(" + ", ".join(f"psi^{k}:{c!r}" for k, c in sorted(self.terms.items())) + ")"


class FormalInsertion:
    """Element of the insertion algebra: a psi-series of ring classes with
    lambda-rational coefficients; supports inversion of units (nonzero
    lambda-constant term, with H, h, psi nilpotent)."""

    __slots__ = ("ring", "psi_bound", "terms")

    def __init__(self, ring: RingId, psi_bound: int, terms: Mapping[int, CohClass] | None = None):
        self.ring = ring
        self.psi_bound = psi_bound
        clean: dict[int, CohClass] = {}
        if terms:
            for k, c in terms.items():
                if 0 <= k <= psi_bound and not c.is_zero():
                    clean[k] = c
        self.terms = clean

    @classmethod
    def scalar(cls, ring: RingId, psi_bound: int, value) -> "FormalInsertion":
        return cls(ring, psi_bound, {0: CohClass.scalar(ring, value)})

    @classmethod
    def from_class(cls, ring: RingId, psi_bound: int, c: CohClass) -> "FormalInsertion":
        return cls(ring, psi_bound, {0: c})

    @classmethod
    def psi(cls, ring: RingId, psi_bound: int) -> "FormalInsertion":
        return cls(ring, psi_bound, {1: CohClass.one(ring)})

    def __add__(self, other: "FormalInsertion") -> "FormalInsertion":
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, CohClass.zero(self.ring)) + c
        return FormalInsertion(self.ring, self.psi_bound, terms)

    def __neg__(self):
        return FormalInsertion(self.ring, self.psi_bound, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other) -> "FormalInsertion":
        if isinstance(other, (int, Fraction, RF)):
            return FormalInsertion(self.ring, self.psi_bound,
                                   {k: c * other for k, c in self.terms.items()})
        terms: dict[int, CohClass] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = k1 + k2
                if k > self.psi_bound:
                    continue
                prod = c1 * c2
                terms[k] = terms.get(k, CohClass.zero(self.ring)) + prod
        return FormalInsertion(self.ring, self.psi_bound, terms)

    __rmul__ = __mul__

    def scalar_part(self) -> RF:
        c0 = self.terms.get(0)
        if c0 is None:
            return RF.const(0)
        return c0.terms.get((0, 0), RF.const(0))

    def inverse(self) -> "FormalInsertion":
        c0 = self.scalar_part()
        if c0.is_zero():
            raise InsertionError("non-invertible insertion")
        one = FormalInsertion.scalar(self.ring, self.psi_bound, 1)
        nil = self - FormalInsertion.scalar(self.ring, self.psi_bound, c0)
        nil = nil * FormalInsertion.scalar(self.ring, self.psi_bound, RF.const(-1) / c0)
        # (c0 (1 - nil))^-1 = c0^-1 sum nil^k; nilpotency order bounded by
        # ring dimension + psi bound
        order = self.ring.dimension + self.psi_bound + 1
        acc = one
        power = one
        for _ in range(order):
            power = power * nil
            if not power.terms:
                break
            acc = acc + power
        return acc * FormalInsertion.scalar(self.ring, self.psi_bound, RF.const(1) / c0)

    def __truediv__(self, other: "FormalInsertion") -> "FormalInsertion":
        return self * other.inverse()

    def __pow__(self, n: int) -> "FormalInsertion":
        if n < 0:
            return self.inverse() ** (-n)
        result = FormalInsertion.scalar(self.ring, self.psi_bound, 1)
        for _ in range(n):
            result = result * self
        return result

    def to_descendant(self) -> DescendantInsertion:
        return DescendantInsertion(self.ring, dict(self.terms))


def expand_insertion(build, ring: RingId, dim_bound: int) -> DescendantInsertion:
    """Evaluate a formal expression to a finite psi-series.

    ``build`` receives an atom table (H, h, psi, lam, one) of FormalInsertion
    values and returns the assembled FormalInsertion.
    """
    atoms = {
        "H": FormalInsertion.from_class(ring, dim_bound, CohClass.hyperplane(ring)),
        "psi": FormalInsertion.psi(ring, dim_bound),
        "lam": FormalInsertion.scalar(ring, dim_bound, RF.lam()),
        "one": FormalInsertion.scalar(ring, dim_bound, 1),
    }
    if ring.is_bundle:
        atoms["h"] = FormalInsertion.from_class(ring, dim_bound, CohClass.fiber_class(ring))
    expr = build(atoms)
    return expr.to_descendant()
