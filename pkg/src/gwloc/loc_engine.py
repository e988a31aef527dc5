"""Graph-residue assembly: edge factors, vertex factors, node gluing and
twist Euler classes, summed into exact invariants.

Weights are specialized along a ray x_i = c_i*t, mu_k = s_k*t with random
rational directions; each graph contribution is expanded as a Laurent
series in t with coefficients that are rational functions of lambda, and
the invariant is the regular t -> 0 limit of the sum.  Two independent rays
must agree exactly, which simultaneously checks direction-independence and
mu-independence.  Untwisted computations with constant insertion
coefficients take a scalar fast path (every graph term is t-homogeneous of
degree total-insertion-degree minus virtual dimension, so the limit is the
t = 1 value when the degrees match and zero otherwise).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod

from .coh_ring import CohClass, DescendantInsertion
from .exact_arith import (LaurentPoly, NotLaurentError, RationalFunction,
                          SpecializationError)
from .graph_enum import DecoratedGraph, UnstableModuliError, enumerate_backbones
from .psi_calculus import _factorial
from .target_model import CurveClass, TargetModel

RF = RationalFunction
RF_ZERO = RF.const(0)
RF_ONE = RF.const(1)


class DegenerateSpecializationError(SpecializationError):
    pass


class WeightDependenceError(Exception):
    """Two independent weight rays disagreed: assembly bug."""


class AssemblyError(Exception):
    """Summed residues failed to be regular at t = 0 or Laurent in lambda."""


MODE_INVERSE = "inverse_euler"
MODE_EULER = "euler"


@dataclass(frozen=True)
class TwistSummand:
    kind: str            # "taut_sub" or "base_twist"
    a: int = 0           # O(a) pulled back from the base (base_twist only)
    aux: str | None = None  # auxiliary weight symbol

    def __post_init__(self):
        if self.kind not in ("taut_sub", "base_twist"):
            raise ValueError(f"unknown twist summand kind {self.kind!r}")


@dataclass(frozen=True)
class TwistSpec:
    """Equivariant bundle twisting the theory; every summand carries the
    scaling weight lambda.  mode selects between capping with the inverse
    Euler class of the index (the identity suite's convention) and with the
    Euler class itself (complete-intersection counting)."""

    summands: tuple[TwistSummand, ...]
    mode: str = MODE_INVERSE

    def __post_init__(self):
        if self.mode not in (MODE_INVERSE, MODE_EULER):
            raise ValueError(f"unknown twist mode {self.mode!r}")
        if not self.summands:
            raise ValueError("twist needs at least one summand")

    @classmethod
    def bundle_sum(cls, twists, mode=MODE_INVERSE) -> "TwistSpec":
        summands = tuple(TwistSummand("base_twist", int(a), f"nu{k+1}") for k, a in enumerate(twists))
        return cls(summands, mode)

    @classmethod
    def tautological_sub(cls, mode=MODE_INVERSE) -> "TwistSpec":
        return cls((TwistSummand("taut_sub"),), mode)

    @property
    def aux_symbols(self) -> tuple[str, ...]:
        return tuple(s.aux for s in self.summands if s.aux is not None)

    def describe(self) -> str:
        if all(s.kind == "taut_sub" for s in self.summands):
            return "O(-1)"
        return "+".join(f"O({s.a})" for s in self.summands)


@dataclass
class GraphResidue:
    """Diagnostic: one graph's contribution under the active ray, as a
    t-Laurent tail {t-exponent <= 0: rational function of lambda}."""

    graph: DecoratedGraph
    tail: dict[int, RF]


@dataclass
class InvariantResult:
    value: LaurentPoly
    target_kind: str
    cls: CurveClass
    twist: TwistSpec | None
    n_insertions: int
    graphs: int
    weight_seeds: tuple[int, ...]

    def constant(self) -> Fraction:
        if set(self.value.coeffs) - {0}:
            raise ValueError("value is not a constant")
        return self.value.coefficient(0)


def nonequivariant_limit(res: InvariantResult) -> Fraction:
    """lambda^0 coefficient; defined only when no negative powers remain."""
    mn = res.value.min_exp()
    if mn is not None and mn < 0:
        raise AssemblyError("no nonequivariant limit: negative lambda powers present")
    return res.value.coefficient(0)


# ---------------------------------------------------------------------------
# per-ray numeric tables
# ---------------------------------------------------------------------------

class _RayTables:
    def __init__(self, model: TargetModel, twist: TwistSpec | None, ray):
        self.model = model
        self.ray = ray
        self.dim = model.dimension
        self.fp_tangent = []
        self.fp_eT = []
        for fp in model.fixed_points:
            vals = [w.value(ray) for w in fp.tangent_weights]
            if any(v == 0 for v in vals):
                raise DegenerateSpecializationError("degenerate specialization")
            self.fp_tangent.append(vals)
            self.fp_eT.append(prod(vals, start=Fraction(1)))
        self.twist = twist
        self.fp_twist: list[list[Fraction]] = []
        self.line_twist: list[list[tuple[int, Fraction, Fraction]]] = []
        if twist is not None:
            for fp in model.fixed_points:
                vals = []
                for s in twist.summands:
                    if s.kind == "taut_sub":
                        vals.append(fp.bundle_weights["O(-1)"].value(ray))
                    else:
                        vals.append(Fraction(s.a) * fp.H_lift.value(ray) + ray[s.aux])
                self.fp_twist.append(vals)
            for line in model.lines:
                entries = []
                p, q = line.endpoints
                for s in twist.summands:
                    if s.kind == "taut_sub":
                        bd = line.bundle_degrees["O(-1)"]
                        entries.append((bd.degree, bd.weight_p.value(ray), bd.weight_q.value(ray)))
                    else:
                        deg = s.a * line.cls.d_base
                        vp = Fraction(s.a) * model.fixed_points[p].H_lift.value(ray) + ray[s.aux]
                        vq = Fraction(s.a) * model.fixed_points[q].H_lift.value(ray) + ray[s.aux]
                        entries.append((deg, vp, vq))
                self.line_twist.append(entries)
        self.line_summands = []
        for line in model.lines:
            self.line_summands.append([
                (ts.degree, ts.weight_p.value(ray), ts.weight_q.value(ray), ts.along_line)
                for ts in line.tangent_splitting
            ])
        self.line_tangent_p = [line.tangent_p.value(ray) for line in model.lines]
        self._restrict_cache: dict = {}

    def restrict_terms(self, c: CohClass, fp_idx: int) -> list[tuple[int, RF]]:
        """Restriction of a class at a fixed point: list of (t-degree,
        lambda-coefficient) pairs, one per total degree."""
        key = (c, fp_idx)
        hit = self._restrict_cache.get(key)
        if hit is not None:
            return hit
        fp = self.model.fixed_points[fp_idx]
        by_deg: dict[int, RF] = {}
        for (a, b), coeff in c.terms.items():
            val, deg = self.model.restrict_monomial(fp, (a, b), self.ray)
            if val == 0:
                continue
            cur = by_deg.get(deg)
            add = coeff * val
            by_deg[deg] = add if cur is None else cur + add
        out = sorted((d, v) for d, v in by_deg.items() if not v.is_zero())
        self._restrict_cache[key] = out
        return out


# ---------------------------------------------------------------------------
# psi-core of a vertex
# ---------------------------------------------------------------------------

def _psi_core(omegas: list[Fraction], special_exps: tuple[int, ...], j_plain: int):
    """Moduli-integral part of a vertex: returns (Fraction, t-degree) or
    None for a vanishing term.  Unstable vertices use the standard closed
    conventions."""
    k = len(omegas)
    m = k + len(special_exps) + j_plain
    if m >= 3:
        r_free = m - 3 - sum(special_exps)
        if r_free < 0:
            return None
        coeff = Fraction(_factorial(m - 3))
        for e in special_exps:
            coeff /= _factorial(e)
        coeff /= _factorial(r_free)
        if k == 0:
            if r_free > 0:
                return None
            return coeff, 0
        inv = [1 / w for w in omegas]
        p = prod(inv, start=Fraction(1))
        s = sum(inv, Fraction(0))
        value = coeff * p * (s ** r_free)
        if value == 0:
            return None
        return value, -(k + r_free)
    if k == 0:
        return None  # no edges and under three markings: empty moduli
    if m == 1:
        return omegas[0], 1
    # m == 2
    if k == 2:
        w = omegas[0] + omegas[1]
        if w == 0:
            raise DegenerateSpecializationError("degenerate specialization")
        return 1 / w, -1
    if k == 1 and len(special_exps) == 1:
        e = special_exps[0]
        return (-omegas[0]) ** e, e
    if k == 1 and j_plain == 1:
        return Fraction(1), 0
    raise AssemblyError(f"unhandled vertex shape: valence {k}, markings {m - k}")


# ---------------------------------------------------------------------------
# series values
# ---------------------------------------------------------------------------

class _Series:
    """Truncated Laurent series in t over Q(lambda), fixed window length."""

    __slots__ = ("val", "co")

    def __init__(self, val: int, co: list[RF]):
        self.val = val
        self.co = co


def _series_one(L: int) -> _Series:
    return _Series(0, [RF_ONE] + [RF_ZERO] * (L - 1))


def _apply_atom(run: _Series, atom, L: int) -> _Series:
    kind = atom[0]
    if kind == "m":  # c * t^k, c Fraction
        _, c, k = atom
        return _Series(run.val + k, [x * c for x in run.co])
    if kind == "im":
        _, c, k = atom
        inv = 1 / c
        return _Series(run.val - k, [x * inv for x in run.co])
    if kind == "p":  # finite t-polynomial [(k, RF)], nonzero, sorted
        _, terms = atom
        base = terms[0][0]
        out = [RF_ZERO] * L
        for k, coeff in terms:
            off = k - base
            if off >= L:
                break
            for i in range(L - off):
                c = run.co[i]
                if not c.num.is_zero():
                    cur = out[i + off]
                    out[i + off] = c * coeff if cur.num.is_zero() else cur + c * coeff
        return _Series(run.val + base, out)
    if kind == "il":  # 1 / (A + B t), A invertible in Q(lambda)
        _, A, B = atom
        out = [RF_ZERO] * L
        prev = RF_ZERO
        for i in range(L):
            num = run.co[i] - prev * B
            q = num / A
            out[i] = q
            prev = q
        return _Series(run.val, out)
    raise AssertionError(f"unknown atom {kind}")


def _atom_val(atom) -> int:
    kind = atom[0]
    if kind == "m":
        return atom[2]
    if kind == "im":
        return -atom[2]
    if kind == "p":
        return atom[1][0][0]
    return 0  # "il"


# ---------------------------------------------------------------------------
# insertion bookkeeping
# ---------------------------------------------------------------------------

def _as_insertion(model: TargetModel, ins) -> DescendantInsertion:
    if isinstance(ins, DescendantInsertion):
        out = ins
    elif isinstance(ins, CohClass):
        out = DescendantInsertion.from_class(ins)
    else:
        raise TypeError("insertions must be CohClass or DescendantInsertion")
    if out.ring != model.ring:
        raise ValueError("insertion lives in the wrong ring")
    return out


def _is_plain(ins: DescendantInsertion) -> bool:
    return ins.is_plain_class()


def _insertion_degree(ins: DescendantInsertion) -> int:
    degs = set()
    for k, c in ins.terms.items():
        for d in c.degree_parts():
            degs.add(k + d)
    if len(degs) > 1:
        raise ValueError("inhomogeneous insertion")
    return degs.pop() if degs else 0


# ---------------------------------------------------------------------------
# the engine
# ---------------------------------------------------------------------------

class _Engine:
    def __init__(self, model: TargetModel, cls: CurveClass, insertions, twist: TwistSpec | None):
        self.model = model
        self.cls = cls
        self.twist = twist
        self.insertions = insertions
        self.n = len(insertions)
        self.vdim = model.dimension + model.anticanonical_pairing(cls) + self.n - 3
        self.backbones = enumerate_backbones(model, cls) if model.is_effective(cls) else []
        self.mode_sign = 1 if twist is None or twist.mode == MODE_INVERSE else -1

    # ----- scalar path ----------------------------------------------------
    def scalar_possible(self) -> bool:
        return self.twist is None and all(i.coefficients_constant() for i in self.insertions)

    def eval_scalar(self, tables: _RayTables) -> Fraction:
        """Sum of graph contributions at t = 1; valid for untwisted runs
        with constant coefficients and matched insertion degree."""
        total = Fraction(0)
        pieces = [ins.degree_parts() for ins in self.insertions]
        for combo in itertools.product(*[sorted(p.items()) for p in pieces]):
            degs = sum(d for d, _ in combo)
            if degs != self.vdim:
                continue
            parts = [ins for _, ins in combo]
            total += self._scalar_sum(tables, parts)
        return total

    def _scalar_sum(self, tables: _RayTables, parts) -> Fraction:
        plain_idx = [i for i, p in enumerate(parts) if _is_plain(p)]
        special_idx = [i for i, p in enumerate(parts) if not _is_plain(p)]
        total = Fraction(0)
        for bb in self.backbones:
            total += self._scalar_backbone(tables, bb, parts, plain_idx, special_idx)
        return total

    def _scalar_backbone(self, tables, bb, parts, plain_idx, special_idx) -> Fraction:
        V = len(bb.vertices)
        flags = _vertex_flags(bb, tables)
        edge_fact = _edge_factor_scalar(bb, tables)
        if edge_fact == 0:
            return Fraction(0)
        # restriction values of plain classes per vertex
        rvals = [[_restrict_scalar(tables, parts[i].plain_class(), bb.vertices[v])
                  for i in plain_idx] for v in range(V)]
        total = Fraction(0)
        for sp_assign in itertools.product(range(V), repeat=len(special_idx)):
            sp_at = {v: [] for v in range(V)}
            for pos, v in enumerate(sp_assign):
                sp_at[v].append(parts[special_idx[pos]])
            gtab = []
            ok = True
            for v in range(V):
                col = []
                for j in range(len(plain_idx) + 1):
                    col.append(self._scalar_vertex(tables, bb, v, flags[v], sp_at[v], j))
                gtab.append(col)
            # exponential generating function over assignments of plains
            npl = len(plain_idx)
            if npl == 0:
                term = prod((gtab[v][0] for v in range(V)), start=Fraction(1))
                total += term
                continue
            if all(len({rvals[v][i] for i in range(npl)}) <= 1 for v in range(V)):
                poly = [Fraction(1)] + [Fraction(0)] * npl
                poly = None
                acc = [Fraction(1)] + [Fraction(0)] * npl
                for v in range(V):
                    r = rvals[v][0] if npl else Fraction(0)
                    egf = [gtab[v][j] * r ** j / _factorial(j) for j in range(npl + 1)]
                    nxt = [Fraction(0)] * (npl + 1)
                    for a_deg, a_val in enumerate(acc):
                        if a_val == 0:
                            continue
                        for b_deg in range(npl + 1 - a_deg):
                            if egf[b_deg] != 0:
                                nxt[a_deg + b_deg] += a_val * egf[b_deg]
                    acc = nxt
                total += acc[npl] * _factorial(npl)
            else:
                states = {(0,) * V: Fraction(1)}
                for i in range(npl):
                    nxt: dict = {}
                    for counts, val in states.items():
                        for v in range(V):
                            r = rvals[v][i]
                            if r == 0:
                                continue
                            c2 = counts[:v] + (counts[v] + 1,) + counts[v + 1:]
                            nxt[c2] = nxt.get(c2, Fraction(0)) + val * r
                    states = nxt
                for counts, val in states.items():
                    total += val * prod((gtab[v][counts[v]] for v in range(V)), start=Fraction(1))
        return total * edge_fact / bb.aut_factor

    def _scalar_vertex(self, tables, bb, v, omegas, specials, j_plain) -> Fraction:
        fp = bb.vertices[v]
        k = len(omegas)
        pref = tables.fp_eT[fp] ** (k - 1)
        total = Fraction(0)
        for choice in itertools.product(*[sorted(sp.terms.items()) for sp in specials]):
            exps = tuple(e for e, _ in choice)
            core = _psi_core(omegas, exps, j_plain)
            if core is None:
                continue
            val, _ = core
            for _, c in choice:
                val *= _restrict_scalar(tables, c, fp)
            total += val
        return pref * total

    # ----- series path ----------------------------------------------------
    def eval_series(self, tables: _RayTables) -> RF:
        acc: dict[int, RF] = {}
        for bb in self.backbones:
            self._series_backbone(tables, bb, acc)
        for exp, coeff in sorted(acc.items()):
            if exp < 0 and not coeff.num.is_zero():
                raise AssemblyError("summed residues have a pole along the weight ray")
        return acc.get(0, RF_ZERO)

    def _series_backbone(self, tables, bb, acc):
        V = len(bb.vertices)
        edge_atoms = _edge_atoms_series(bb, tables, self.mode_sign)
        flags = _vertex_flags(bb, tables)
        static = []
        for v in range(V):
            fp = bb.vertices[v]
            k = len(flags[v])
            atoms = []
            if k != 1:
                e = tables.fp_eT[fp]
                if k >= 1:
                    atoms.append(("m", e ** (k - 1), tables.dim * (k - 1)))
                else:
                    atoms.append(("im", e, tables.dim))
            if self.twist is not None:
                exp = (k - 1) * self.mode_sign
                for vlin in tables.fp_twist[fp]:
                    lam = RF.lam()
                    if exp > 0:
                        for _ in range(exp):
                            atoms.append(("p", [(0, lam), (1, RF.const(vlin))]))
                    elif exp < 0:
                        for _ in range(-exp):
                            atoms.append(("il", lam, RF.const(vlin)))
            static.append(atoms)
        inv_aut = Fraction(1, bb.aut_factor)
        for assign in itertools.product(range(V), repeat=self.n):
            at = {v: [] for v in range(V)}
            for i, v in enumerate(assign):
                at[v].append(self.insertions[i])
            atoms = list(edge_atoms)
            dead = False
            for v in range(V):
                va = self._series_vertex(tables, bb, v, flags[v], at[v])
                if va is None:
                    dead = True
                    break
                atoms.extend(static[v])
                atoms.extend(va)
            if dead:
                continue
            val_total = sum(_atom_val(a) for a in atoms)
            if val_total > 0:
                continue
            L = 1 - val_total
            run = _series_one(L)
            for a in atoms:
                run = _apply_atom(run, a, L)
            for i, coeff in enumerate(run.co):
                exp = run.val + i
                if exp > 0:
                    break
                if not coeff.num.is_zero():
                    cur = acc.get(exp)
                    add = coeff * inv_aut
                    acc[exp] = add if cur is None else cur + add
        return

    def _series_vertex(self, tables, bb, v, omegas, insertions_here):
        """Atoms of one vertex's core for a specific assignment; None when
        every psi-choice term vanishes."""
        fp = bb.vertices[v]
        k = len(omegas)
        terms: dict[int, RF] = {}
        for choice in itertools.product(*[sorted(ins.terms.items()) for ins in insertions_here]):
            exps = tuple(e for e, _ in choice)
            core = _psi_core(omegas, exps, 0)
            if core is None:
                continue
            cval, cdeg = core
            factors = [tables.restrict_terms(c, fp) for _, c in choice]
            for combo in itertools.product(*factors):
                deg = cdeg + sum(d for d, _ in combo)
                coeff = RF.const(cval)
                for _, rf in combo:
                    coeff = coeff * rf
                if coeff.num.is_zero():
                    continue
                cur = terms.get(deg)
                terms[deg] = coeff if cur is None else cur + coeff
        terms = {d: c for d, c in terms.items() if not c.num.is_zero()}
        if not terms:
            return None
        return [("p", sorted(terms.items()))]


def _vertex_flags(bb: DecoratedGraph, tables: _RayTables) -> list[list[Fraction]]:
    """Flag weight at each vertex: tangent weight of the edge's line at that
    vertex's fixed point divided by the edge degree (orientation matters)."""
    flags: list[list[Fraction]] = [[] for _ in bb.vertices]
    for (a, b, li, d) in bb.edges:
        tp = tables.line_tangent_p[li]
        p_end = tables.model.lines[li].endpoints[0]
        if bb.vertices[a] == p_end:
            flags[a].append(tp / d)
            flags[b].append(-tp / d)
        else:
            flags[a].append(-tp / d)
            flags[b].append(tp / d)
    return flags


def _interpolations(degree_on_curve: int, up: Fraction, uq: Fraction):
    """H^0 weights (degree >= 0) or H^1 weights (degree <= -2) of a line
    bundle on the d-fold cover, as plain direction values."""
    d = degree_on_curve
    if d == 0:
        return [up], []
    step = (up - uq) / d
    if d > 0:
        return [up - s * step for s in range(d + 1)], []
    return [], [up + s * step for s in range(1, -d)]


def _edge_factor_scalar(bb: DecoratedGraph, tables: _RayTables) -> Fraction:
    total = Fraction(1)
    for (a, b, li, d) in bb.edges:
        for (deg, up, uq, along) in tables.line_summands[li]:
            h0, h1 = _interpolations(deg * d, up, uq)
            for s_idx, w in enumerate(h0):
                if w == 0:
                    if along and deg == 2 and s_idx == d:
                        continue
                    raise DegenerateSpecializationError("degenerate specialization")
                total /= w
            for w in h1:
                if w == 0:
                    raise DegenerateSpecializationError("degenerate specialization")
                total *= w
    return total


def _edge_atoms_series(bb: DecoratedGraph, tables: _RayTables, mode_sign: int):
    atoms = []
    for (a, b, li, d) in bb.edges:
        for (deg, up, uq, along) in tables.line_summands[li]:
            h0, h1 = _interpolations(deg * d, up, uq)
            for s_idx, w in enumerate(h0):
                if w == 0:
                    if along and deg == 2 and s_idx == d:
                        continue
                    raise DegenerateSpecializationError("degenerate specialization")
                atoms.append(("im", w, 1))
            for w in h1:
                if w == 0:
                    raise DegenerateSpecializationError("degenerate specialization")
                atoms.append(("m", w, 1))
        if tables.twist is not None:
            lam = RF.lam()
            for (cdeg, vp, vq) in tables.line_twist[li]:
                h0, h1 = _interpolations(cdeg * d, vp, vq)
                for w in h0:
                    if mode_sign > 0:
                        atoms.append(("il", lam, RF.const(w)))
                    else:
                        atoms.append(("p", [(0, lam), (1, RF.const(w))]))
                for w in h1:
                    if mode_sign > 0:
                        atoms.append(("p", [(0, lam), (1, RF.const(w))]))
                    else:
                        atoms.append(("il", lam, RF.const(w)))
    return atoms


def _restrict_scalar(tables: _RayTables, c: CohClass, fp_idx: int) -> Fraction:
    total = Fraction(0)
    for _, rf in tables.restrict_terms(c, fp_idx):
        total += rf.constant_value()
    return total


# ---------------------------------------------------------------------------
# public entry points
# ---------------------------------------------------------------------------

def _draw_ray(model: TargetModel, twist: TwistSpec | None, rng: random.Random):
    ray = model.draw_ray(rng)
    if twist is not None:
        used = set(ray.values())
        for aux in twist.aux_symbols:
            while True:
                v = Fraction(rng.randint(-10 ** 6, 10 ** 6))
                if v != 0 and v not in used:
                    used.add(v)
                    ray[aux] = v
                    break
    return ray


def compute_invariant(model: TargetModel, cls: CurveClass, insertions, twist: TwistSpec | None = None,
                      *, seed: int = 0, extra_rays: int = 0, max_retries: int = 8) -> InvariantResult:
    """Graph sum over decorated trees under two (or more) independent weight
    rays; exact agreement of the t -> 0 limits is enforced."""
    insertions = [_as_insertion(model, i) for i in insertions]
    if cls.is_zero() and len(insertions) < 3:
        raise UnstableModuliError("unstable moduli problem")
    if twist is not None and any(s.kind == "taut_sub" for s in twist.summands) and model.kind != "proj_bundle":
        raise ValueError("tautological twist needs a bundle target")
    engine = _Engine(model, cls, insertions, twist)
    n_rays = 2 + extra_rays
    values: list[LaurentPoly] = []
    rng = random.Random(seed)
    for ray_idx in range(n_rays):
        attempt = 0
        while True:
            try:
                ray = _draw_ray(model, twist, rng)
                tables = _RayTables(model, twist, ray)
                if engine.scalar_possible():
                    val = engine.eval_scalar(tables)
                    lp = LaurentPoly({0: val})
                else:
                    rf = engine.eval_series(tables)
                    lp = rf.to_laurent()
                break
            except DegenerateSpecializationError:
                attempt += 1
                if attempt > max_retries:
                    raise
        values.append(lp)
    for other in values[1:]:
        if other != values[0]:
            raise WeightDependenceError("weight dependence detected")
    return InvariantResult(
        value=values[0],
        target_kind=model.kind,
        cls=cls,
        twist=twist,
        n_insertions=len(insertions),
        graphs=len(engine.backbones),
        weight_seeds=(seed,),
    )


def graph_residues(model: TargetModel, cls: CurveClass, insertions, twist: TwistSpec | None = None,
                   *, seed: int = 0) -> list[GraphResidue]:
    """Per-backbone t-Laurent tails under one ray (diagnostics)."""
    insertions = [_as_insertion(model, i) for i in insertions]
    engine = _Engine(model, cls, insertions, twist)
    rng = random.Random(seed)
    ray = _draw_ray(model, twist, rng)
    tables = _RayTables(model, twist, ray)
    out = []
    for bb in engine.backbones:
        acc: dict[int, RF] = {}
        engine._series_backbone(tables, bb, acc)
        out.append(GraphResidue(bb, acc))
    return out
