"""Exact rational feasibility for small systems of linear inequalities.

Fourier-Motzkin elimination over Fractions, with strict/non-strict rows.
Only used on the tiny systems coming from essential inequality sign
patterns, so no attempt is made to be clever about redundancy beyond
per-direction dominance pruning.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Row = tuple[tuple[Fraction, ...], Fraction, bool]  # coeffs . x (<= | <) rhs


def _normalize(coeffs, rhs):
    nums = [c.numerator for c in coeffs] + [rhs.numerator]
    dens = [c.denominator for c in coeffs] + [rhs.denominator]
    lcm = 1
    for d in dens:
        lcm = lcm * d // gcd(lcm, d)
    ints = [c * lcm for c in coeffs] + [rhs * lcm]
    g = 0
    for v in ints:
        g = gcd(g, int(v))
    if g > 1:
        ints = [v / g for v in ints]
    return tuple(Fraction(v) for v in ints[:-1]), Fraction(ints[-1])


def _prune(rows: list[Row]) -> list[Row]:
    best: dict[tuple, tuple[Fraction, bool]] = {}
    for coeffs, rhs, strict in rows:
        coeffs, rhs = _normalize(coeffs, rhs)
        key = coeffs
        cur = best.get(key)
        if cur is None or rhs < cur[0] or (rhs == cur[0] and strict and not cur[1]):
            best[key] = (rhs, strict)
    return [(k, v[0], v[1]) for k, v in best.items()]


def feasible(rows: Sequence[Row], nvars: int) -> tuple[Fraction, ...] | None:
    """A rational point satisfying every row, or None when infeasible."""
    stages: list[list[Row]] = []
    cur = _prune(list(rows))
    for var in range(nvars - 1, -1, -1):
        stages.append(cur)
        pos, neg, rest = [], [], []
        for coeffs, rhs, strict in cur:
            c = coeffs[var]
            if c > 0:
                pos.append((coeffs, rhs, strict))
            elif c < 0:
                neg.append((coeffs, rhs, strict))
            else:
                rest.append((coeffs, rhs, strict))
        for pc, pr, ps in pos:
            for nc, nr, ns in neg:
                scale_p, scale_n = -nc[var], pc[var]
                coeffs = tuple(scale_p * pc[i] + scale_n * nc[i] for i in range(nvars))
                rhs = scale_p * pr + scale_n * nr
                rest.append((coeffs, rhs, ps or ns))
        cur = _prune(rest)
        for coeffs, rhs, strict in cur:
            if all(c == 0 for c in coeffs):
                if rhs < 0 or (strict and rhs == 0):
                    return None
    point = [Fraction(0)] * nvars
    for var, stage in zip(range(nvars - 1, -1, -1), reversed(stages)):
        lo, lo_strict = None, False
        hi, hi_strict = None, False
        for coeffs, rhs, strict in stage:
            c = coeffs[var]
            if c == 0:
                continue
            val = rhs - sum(coeffs[i] * point[i] for i in range(nvars) if i != var)
            bound = val / c
            if c > 0:
                if hi is None or bound < hi or (bound == hi and strict):
                    hi, hi_strict = bound, strict
            else:
                if lo is None or bound > lo or (bound == lo and strict):
                    lo, lo_strict = bound, strict
        if lo is None and hi is None:
            point[var] = Fraction(0)
        elif lo is None:
            point[var] = hi - 1 if hi_strict else hi
        elif hi is None:
            point[var] = lo + 1 if lo_strict else lo
        else:
            point[var] = (lo + hi) / 2 if (lo_strict or hi_strict or lo != hi) else lo
    for coeffs, rhs, strict in rows:
        val = sum(c * x for c, x in zip(coeffs, point))
        if val > rhs or (strict and val == rhs):
            raise AssertionError("witness extraction failed")
    return tuple(point)
