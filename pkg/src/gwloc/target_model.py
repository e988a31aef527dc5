"""Equivariant geometry of computation targets.

Targets are P^m with its (m+1)-dimensional torus and split projective
bundles P(O(a_1)+...+O(a_r)) -> P^m with additional fiber weights mu_k that
make every fixed point isolated.  The model records, for each fixed point
and invariant line, the symbolic weight data localization needs; weights
are linear forms in the symbols x_0..x_m, mu_1..mu_r.

Lift conventions (fixed once): H restricts to x_i at the i-th base fixed
point; the tautological subbundle O(-1) restricts at the fixed point (i,k)
to weight a_k*x_i + mu_k, so h restricts to -(a_k*x_i + mu_k).  Final
invariants are independent of these auxiliary choices, which the engine
enforces rather than assumes.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .coh_ring import BundleSpec, CohClass, RingId, base_ring, bundle_ring
from .exact_arith import RationalFunction

RF = RationalFunction


class TargetError(Exception):
    pass


class LinearForm:
    """Rational linear combination of weight symbols."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[str, Fraction] | None = None):
        clean = {}
        if coeffs:
            for s, c in coeffs.items():
                c = Fraction(c)
                if c != 0:
                    clean[s] = c
        self.coeffs = clean

    @classmethod
    def sym(cls, name: str, scale=1) -> "LinearForm":
        return cls({name: Fraction(scale)})

    def __add__(self, other: "LinearForm") -> "LinearForm":
        coeffs = dict(self.coeffs)
        for s, c in other.coeffs.items():
            coeffs[s] = coeffs.get(s, Fraction(0)) + c
        return LinearForm(coeffs)

    def __sub__(self, other: "LinearForm") -> "LinearForm":
        coeffs = dict(self.coeffs)
        for s, c in other.coeffs.items():
            coeffs[s] = coeffs.get(s, Fraction(0)) - c
        return LinearForm(coeffs)

    def __neg__(self) -> "LinearForm":
        return LinearForm({s: -c for s, c in self.coeffs.items()})

    def __mul__(self, k) -> "LinearForm":
        k = Fraction(k)
        return LinearForm({s: c * k for s, c in self.coeffs.items()})

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return isinstance(other, LinearForm) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def value(self, ray: Mapping[str, Fraction]) -> Fraction:
        """Direction coefficient under a ray assignment (weight = value * t)."""
        return sum((c * ray[s] for s, c in self.coeffs.items()), Fraction(0))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"{c}*{s}" for s, c in sorted(self.coeffs.items()))


@dataclass(frozen=True)
class CurveClass:
    """Degree data: (d_base, d_h) for bundle targets, d_h None otherwise."""

    d_base: int
    d_h: int | None = None

    def is_zero(self) -> bool:
        return self.d_base == 0 and not self.d_h

    def __repr__(self):
        if self.d_h is None:
            return f"d={self.d_base}"
        return f"(d_base={self.d_base}, d_h={self.d_h})"


@dataclass(frozen=True)
class TangentSummand:
    degree: int            # degree of the summand on the line
    weight_p: LinearForm   # fiber weight at the p end
    weight_q: LinearForm   # fiber weight at the q end
    along_line: bool = False


@dataclass(frozen=True)
class BundleOnLine:
    degree: int
    weight_p: LinearForm
    weight_q: LinearForm


@dataclass
class InvariantLine:
    endpoints: tuple[int, int]              # fixed point indices (p, q)
    tangent_p: LinearForm                   # tangent weight of the line at p
    cls: CurveClass
    tangent_splitting: tuple[TangentSummand, ...]
    bundle_degrees: dict[str, BundleOnLine] = field(default_factory=dict)

    @property
    def tangent_q(self) -> LinearForm:
        return -self.tangent_p


@dataclass
class FixedPoint:
    index: int
    label: str
    tangent_weights: tuple[LinearForm, ...]
    class_lifts: dict[tuple[int, int], LinearForm | None]  # monomial -> lift data unused; see restrict
    h_lift: LinearForm | None      # restriction of h (bundle targets)
    H_lift: LinearForm             # restriction of H (zero form over a point)
    bundle_weights: dict[str, LinearForm] = field(default_factory=dict)


class TargetModel:
    """Immutable fixed-point/line tables for one computation target."""

    def __init__(self, kind: str, ring: RingId, spec: BundleSpec | None,
                 fixed_points: list[FixedPoint], lines: list[InvariantLine],
                 weight_symbols: tuple[str, ...]):
        self.kind = kind
        self.ring = ring
        self.spec = spec
        self.fixed_points = fixed_points
        self.lines = lines
        self.weight_symbols = weight_symbols
        self.line_between: dict[tuple[int, int], int] = {}
        for idx, line in enumerate(lines):
            p, q = line.endpoints
            for key in ((p, q), (q, p)):
                if key in self.line_between:
                    raise TargetError("two invariant lines share endpoints")
            self.line_between[(p, q)] = idx
            self.line_between[(q, p)] = idx
        self._backbone_cache: dict = {}

    # -- queries ---------------------------------------------------------
    @property
    def dimension(self) -> int:
        return self.ring.dimension

    def class_of_line(self, idx: int) -> CurveClass:
        return self.lines[idx].cls

    def anticanonical_pairing(self, cls: CurveClass) -> int:
        """Pairing of c1(T target) with a curve class."""
        if self.kind == "projective_space":
            return (self.ring.base_dim + 1) * cls.d_base
        spec = self.spec
        base_part = (spec.base_dim + 1 + sum(spec.twists)) * cls.d_base
        return base_part + spec.rank * (cls.d_h or 0)

    def zero_class(self) -> CurveClass:
        return CurveClass(0, 0 if self.kind == "proj_bundle" else None)

    def is_effective(self, cls: CurveClass) -> bool:
        if cls.d_base < 0:
            return False
        if self.kind == "projective_space":
            return True
        a_max = max(self.spec.twists)
        return (cls.d_h or 0) + a_max * cls.d_base >= 0

    # -- weight rays -------------------------------------------------------
    def draw_ray(self, rng: random.Random) -> dict[str, Fraction]:
        """Random integer direction making all needed weight values distinct
        and nonzero."""
        for _ in range(64):
            ray = {s: Fraction(rng.randint(-10 ** 6, 10 ** 6)) for s in self.weight_symbols}
            if self._ray_ok(ray):
                return ray
        raise TargetError("could not draw a nondegenerate weight ray")

    def _ray_ok(self, ray) -> bool:
        values = [ray[s] for s in self.weight_symbols]
        if len(set(values)) != len(values) or any(v == 0 for v in values):
            return False
        for fp in self.fixed_points:
            tvals = [w.value(ray) for w in fp.tangent_weights]
            if len(set(tvals)) != len(tvals) or any(v == 0 for v in tvals):
                return False
        return True

    # -- restriction ---------------------------------------------------------
    def restrict_monomial(self, fp: FixedPoint, mono: tuple[int, int], ray) -> tuple[Fraction, int]:
        """Value of H^a h^b at a fixed point as (direction coefficient,
        t-degree)."""
        a, b = mono
        val = Fraction(1)
        if a:
            val *= fp.H_lift.value(ray) ** a
        if b:
            val *= (-fp.bundle_weights["O(-1)"].value(ray)) ** b
        return val, a + b


def restrict_class(model: TargetModel, c: CohClass, fp_index: int, ray) -> RF:
    """Restriction of a class at a fixed point under a ray with t = 1,
    as a rational function of lambda (used for symbolic checks/tests)."""
    fp = model.fixed_points[fp_index]
    total = RF.const(0)
    for mono, coeff in c.terms.items():
        val, _ = model.restrict_monomial(fp, mono, ray)
        total = total + coeff * val
    return total


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

def _x(i: int) -> LinearForm:
    return LinearForm.sym(f"x{i}")


def _mu(k: int) -> LinearForm:
    return LinearForm.sym(f"mu{k}")


def build_target(kind: str, spec: BundleSpec | None = None, *, allow_negative=False) -> TargetModel:
    """Construct the fixed-point model for 'point', 'projective_space', or
    'proj_bundle'."""
    if kind == "point":
        return build_target("projective_space", BundleSpec(0, (0,)))
    if kind == "projective_space":
        if spec is None:
            raise TargetError("projective_space needs a BundleSpec carrier for its dimension")
        m = spec.base_dim
        ring = base_ring(m)
        symbols = tuple(f"x{i}" for i in range(m + 1))
        points = []
        for i in range(m + 1):
            tangents = tuple(_x(i) - _x(j) for j in range(m + 1) if j != i)
            points.append(FixedPoint(i, f"q{i}", tangents, {}, None, _x(i)))
        lines = []
        for i in range(m + 1):
            for j in range(i + 1, m + 1):
                splitting = [TangentSummand(2, _x(i) - _x(j), _x(j) - _x(i), along_line=True)]
                for k in range(m + 1):
                    if k in (i, j):
                        continue
                    splitting.append(TangentSummand(1, _x(i) - _x(k), _x(j) - _x(k)))
                lines.append(InvariantLine((i, j), _x(i) - _x(j), CurveClass(1, None), tuple(splitting)))
        return TargetModel("projective_space", ring, None, points, lines, symbols)
    if kind == "proj_bundle":
        if spec is None:
            raise TargetError("proj_bundle needs a BundleSpec")
        if not allow_negative and not spec.globally_generated:
            raise TargetError("negative twists need allow_negative=True")
        return _build_bundle(spec)
    raise TargetError(f"unsupported target kind {kind!r}")


def _build_bundle(spec: BundleSpec) -> TargetModel:
    m, r = spec.base_dim, spec.rank
    ring = bundle_ring(spec)
    symbols = tuple(f"x{i}" for i in range(m + 1)) + tuple(f"mu{k}" for k in range(1, r + 1))

    def w(i: int, k: int) -> LinearForm:
        return _x(i) * spec.twists[k - 1] + _mu(k)

    points: list[FixedPoint] = []
    index: dict[tuple[int, int], int] = {}
    for i in range(m + 1):
        for k in range(1, r + 1):
            idx = len(points)
            index[(i, k)] = idx
            tangents = [w(i, kk) - w(i, k) for kk in range(1, r + 1) if kk != k]
            tangents += [_x(i) - _x(j) for j in range(m + 1) if j != i]
            fp = FixedPoint(idx, f"({i},{k})", tuple(tangents), {}, None, _x(i))
            fp.bundle_weights["O(-1)"] = w(i, k)
            fp.h_lift = -w(i, k)
            points.append(fp)

    lines: list[InvariantLine] = []
    # vertical lines: within a fiber, between summands k < k'
    for i in range(m + 1):
        for k in range(1, r + 1):
            for k2 in range(k + 1, r + 1):
                p, q = index[(i, k)], index[(i, k2)]
                tangent_p = w(i, k2) - w(i, k)
                splitting = [TangentSummand(2, tangent_p, -tangent_p, along_line=True)]
                for k3 in range(1, r + 1):
                    if k3 in (k, k2):
                        continue
                    splitting.append(TangentSummand(1, w(i, k3) - w(i, k), w(i, k3) - w(i, k2)))
                for j in range(m + 1):
                    if j != i:
                        splitting.append(TangentSummand(0, _x(i) - _x(j), _x(i) - _x(j)))
                line = InvariantLine((p, q), tangent_p, CurveClass(0, 1), tuple(splitting))
                line.bundle_degrees["O(-1)"] = BundleOnLine(-1, w(i, k), w(i, k2))
                lines.append(line)
    # horizontal lines: the k-th summand section over each base line
    for k in range(1, r + 1):
        a_k = spec.twists[k - 1]
        for i in range(m + 1):
            for j in range(i + 1, m + 1):
                p, q = index[(i, k)], index[(j, k)]
                tangent_p = _x(i) - _x(j)
                splitting = [TangentSummand(2, tangent_p, -tangent_p, along_line=True)]
                for l in range(m + 1):
                    if l in (i, j):
                        continue
                    splitting.append(TangentSummand(1, _x(i) - _x(l), _x(j) - _x(l)))
                for k2 in range(1, r + 1):
                    if k2 == k:
                        continue
                    splitting.append(TangentSummand(spec.twists[k2 - 1] - a_k,
                                                    w(i, k2) - w(i, k), w(j, k2) - w(j, k)))
                line = InvariantLine((p, q), tangent_p, CurveClass(1, -a_k), tuple(splitting))
                line.bundle_degrees["O(-1)"] = BundleOnLine(a_k, w(i, k), w(j, k))
                lines.append(line)
    return TargetModel("proj_bundle", ring, spec, points, lines, symbols)


def projective_space(m: int) -> TargetModel:
    return build_target("projective_space", BundleSpec(m, (0,)))


def point_target() -> TargetModel:
    return projective_space(0)


def proj_bundle(base_dim: int, twists, *, allow_negative=False) -> TargetModel:
    return build_target("proj_bundle", BundleSpec(base_dim, tuple(twists)), allow_negative=allow_negative)


def lift_class(model: TargetModel, d_base: int) -> CurveClass:
    """The unique lift with pi_* = d_base and zero h-pairing."""
    if model.kind != "proj_bundle":
        raise TargetError("lift_class needs a bundle target")
    if d_base < 0:
        raise TargetError("base class must be effective")
    return CurveClass(d_base, 0)
