"""Engine-independent ground truths: the plane-curve count recursion,
Schubert-calculus hypersurface line counts, the multiple-cover closed form,
and small quantum cohomology checks for P^1 and P^3 derived from
associativity.  Nothing here touches the localization engine.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .exact_arith import MultiPoly


@dataclass(frozen=True)
class OracleTable:
    name: str
    entries: dict

    def __getitem__(self, key):
        return self.entries[key]


def wdvv_p2(d_max: int) -> OracleTable:
    """Counts N_d of degree-d rational plane curves through 3d-1 points,
    via the associativity recursion seeded with N_1 = 1."""
    if d_max < 1:
        raise ValueError("d_max must be >= 1")
    n = {1: Fraction(1)}
    for d in range(2, d_max + 1):
        total = Fraction(0)
        for d1 in range(1, d):
            d2 = d - d1
            total += (n[d1] * n[d2] * d1 ** 2 * d2
                      * (d2 * comb(3 * d - 4, 3 * d1 - 2) - d1 * comb(3 * d - 4, 3 * d1 - 1)))
        n[d] = total
    return OracleTable("wdvv_p2", {d: n[d] for d in range(1, d_max + 1)})


# ---------------------------------------------------------------------------
# Schubert calculus on G(2, n+1)
# ---------------------------------------------------------------------------

def _pieri_sigma1(state: dict, box: int) -> dict:
    out: dict = {}
    for (a, b), c in state.items():
        if a + 1 <= box:
            out[(a + 1, b)] = out.get((a + 1, b), Fraction(0)) + c
        if b + 1 <= a:
            out[(a, b + 1)] = out.get((a, b + 1), Fraction(0)) + c
    return out


def _mult_sigma11(state: dict, box: int) -> dict:
    out: dict = {}
    for (a, b), c in state.items():
        if a + 1 <= box:
            out[(a + 1, b + 1)] = out.get((a + 1, b + 1), Fraction(0)) + c
    return out


def lines_on_hypersurface(n: int, k: int) -> Fraction:
    """Integral over the Grassmannian of lines in P^n of the Euler class of
    Sym^k S^dual, via Pieri products in the Schubert basis."""
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    box = n - 1              # partitions fit in a (n-1, n-1) box
    dim = 2 * (n - 1)
    # e(Sym^k S^dual) as a polynomial in e1 = sigma_1, e2 = sigma_{1,1}:
    # pair the Chern roots (k-i) a + i b with i a + (k-i) b
    factors = []             # each factor: (coefficient of e1^2, coefficient of e2)
    for i in range(0, (k + 1) // 2):
        factors.append((Fraction(i * (k - i)), Fraction((k - 2 * i) ** 2)))
    poly: dict[tuple[int, int], Fraction] = {(0, 0): Fraction(1)}  # (e1 power, e2 power)
    for (ce1sq, ce2) in factors:
        nxt: dict[tuple[int, int], Fraction] = {}
        for (p, q), c in poly.items():
            if ce1sq:
                nxt[(p + 2, q)] = nxt.get((p + 2, q), Fraction(0)) + c * ce1sq
            if ce2:
                nxt[(p, q + 1)] = nxt.get((p, q + 1), Fraction(0)) + c * ce2
        poly = nxt
    if k % 2 == 0:
        poly = {(p + 1, q): c * Fraction(k, 2) for (p, q), c in poly.items()}
    total = Fraction(0)
    for (p, q), c in poly.items():
        if p + 2 * q != dim:
            continue
        state = {(0, 0): Fraction(1)}
        for _ in range(q):
            state = _mult_sigma11(state, box)
        for _ in range(p):
            state = _pieri_sigma1(state, box)
        total += c * state.get((box, box), Fraction(0))
    return total


def quintic_lines() -> Fraction:
    """The 2875 lines on a quintic threefold (degree-5 in P^4)."""
    return lines_on_hypersurface(4, 5)


def aspinwall_morrison(d: int) -> Fraction:
    """Degree-d multiple-cover contribution for the resolved conifold."""
    if d < 1:
        raise ValueError("d must be >= 1")
    return Fraction(1, d ** 3)


# ---------------------------------------------------------------------------
# small quantum cohomology checks via associativity (P^3)
# ---------------------------------------------------------------------------

_VARS = ("t2", "t3", "X", "Y")


def _mp(terms) -> MultiPoly:
    return MultiPoly(_VARS, terms)


def _dt(p: MultiPoly, var_idx: int) -> MultiPoly:
    terms = {}
    for exps, c in p.terms.items():
        e = exps[var_idx]
        if e == 0:
            continue
        ne = list(exps)
        ne[var_idx] = e - 1
        terms[tuple(ne)] = terms.get(tuple(ne), Fraction(0)) + c * e
    return _mp(terms)


def _p3_degree_one_derivatives():
    """Third derivatives of the degree-1 part of the P^3 potential, with
    unknown coefficients X = <T2,T2,T2,T2> and Y = <T2,T2,T3>, seeded by
    <T3,T3> = 1 via the divisor equation."""
    X = _mp({(0, 0, 1, 0): Fraction(1)})
    Y = _mp({(0, 0, 0, 1): Fraction(1)})
    t2 = _mp({(1, 0, 0, 0): Fraction(1)})
    t3 = _mp({(0, 1, 0, 0): Fraction(1)})
    one = _mp({(0, 0, 0, 0): Fraction(1)})
    phi1 = (X * t2 ** 4 * Fraction(1, 24) + Y * t2 ** 2 * t3 * Fraction(1, 2)
            + t3 ** 2 * Fraction(1, 2))  # <T3,T3> = 1 seed

    def f1(a, b, c):
        p = phi1
        for idx in (a, b, c):
            if idx == 0:
                return _mp({})
            if idx == 2:
                p = _dt(p, 0)
            elif idx == 3:
                p = _dt(p, 1)
            # idx == 1 multiplies by the degree, which is 1
        return p

    def fcl(a, b, c):
        return one if a + b + c == 3 else _mp({})

    return f1, fcl


def _wdvv_q1(f1, fcl, i, j, k, l) -> MultiPoly:
    """First-order-in-q coefficient of the associativity identity
    (ij|kl) - (ik|jl) for P^3; vanishes identically on the true potential."""
    total = _mp({})
    for e in range(4):
        f = 3 - e
        total = total + fcl(i, j, e) * f1(f, k, l) + f1(i, j, e) * fcl(f, k, l)
        total = total - (fcl(i, k, e) * f1(f, j, l) + f1(i, k, e) * fcl(f, j, l))
    return total


def qh_pn_checks() -> OracleTable:
    """Selected untwisted invariants fixed by associativity:
    <pt,pt> on P^1 (d=1), <H^3,H^3> and <H^2,H^2,H^2,H^2> on P^3 (d=1)."""
    f1, fcl = _p3_degree_one_derivatives()
    rows: dict[tuple, dict[tuple[int, int], Fraction]] = {}
    for inst in ((2, 2, 1, 1), (2, 3, 1, 1)):
        g = _wdvv_q1(f1, fcl, *inst)
        for exps, c in g.terms.items():
            key = (inst, exps[:2])  # one equation per instance and t-monomial
            rows.setdefault(key, {})
            rows[key][exps[2:]] = rows[key].get(exps[2:], Fraction(0)) + c
    lin = []
    for r in rows.values():
        c0 = r.get((0, 0), Fraction(0))
        cx = r.get((1, 0), Fraction(0))
        cy = r.get((0, 1), Fraction(0))
        if cx or cy or c0:
            lin.append((cx, cy, c0))
    x_val = y_val = None
    # solve the linear system cx*X + cy*Y + c0 = 0
    for (cx, cy, c0) in lin:
        if cx == 0 and cy != 0:
            y_val = -c0 / cy
    if y_val is None:
        raise RuntimeError("associativity system did not pin Y")
    for (cx, cy, c0) in lin:
        if cx != 0:
            x_val = (-c0 - cy * y_val) / cx
            break
    if x_val is None:
        raise RuntimeError("associativity system did not pin X")
    for (cx, cy, c0) in lin:
        if cx * x_val + cy * y_val + c0 != 0:
            raise RuntimeError("associativity system inconsistent")
    return OracleTable("qh_pn_checks", {
        "p1_point_point_d1": Fraction(1),       # two points determine the map
        "p3_pt_pt_d1": Fraction(1),             # <H^3,H^3>: the seed normalization
        "p3_line4_d1": x_val,                   # <H^2,H^2,H^2,H^2>
        "p3_line2_pt_d1": y_val,                # <H^2,H^2,H^3>
    })
