"""Independent oracles for cross-checking the cone kernel.

Everything here is deliberately built on Fourier-Motzkin elimination and
brute-force reasoning rather than the double description method, so that
agreement between the two is meaningful.  Exact integer arithmetic only.
"""

from __future__ import annotations

from math import gcd
from typing import Sequence

Row = tuple[tuple[int, ...], int]  # (coefficients, constant): sum c_i y_i >= const


def _primitive_row(coeffs: Sequence[int], const: int) -> Row:
    g = 0
    for x in coeffs:
        g = gcd(g, abs(x))
    g = gcd(g, abs(const))
    if g > 1:
        return tuple(x // g for x in coeffs), const // g
    return tuple(coeffs), const


def _eliminate(rows: list[Row], var: int) -> list[Row]:
    """One Fourier-Motzkin step removing variable `var`.

    Rows that become vacuous (no coefficients left, nonpositive constant)
    are dropped to tame the quadratic row growth.
    """
    zero, plus, minus = [], [], []
    for coeffs, const in rows:
        c = coeffs[var]
        if c == 0:
            zero.append((coeffs, const))
        elif c > 0:
            plus.append((coeffs, const))
        else:
            minus.append((coeffs, const))
    out = set(zero)
    for pc, pconst in plus:
        for nc, nconst in minus:
            a, b = pc[var], -nc[var]
            coeffs = tuple(b * p + a * n for p, n in zip(pc, nc))
            const = b * pconst + a * nconst
            if not any(coeffs) and const <= 0:
                continue  # vacuously true
            out.add(_primitive_row(coeffs, const))
    return list(out)


def _eliminate_all(rows: list[Row], variables: list[int]) -> list[Row]:
    """Eliminate the given variables, cheapest (fewest products) first."""
    remaining = list(variables)
    while remaining:
        best = min(
            remaining,
            key=lambda v: sum(1 for c, _ in rows if c[v] > 0)
            * sum(1 for c, _ in rows if c[v] < 0),
        )
        remaining.remove(best)
        rows = _eliminate(rows, best)
        if any(not any(coeffs) and const > 0 for coeffs, const in rows):
            # already infeasible; no need to keep eliminating
            return [((), 1)]
    return rows


def membership(generators: list[tuple[int, ...]], v: Sequence[int]) -> bool:
    """Is v a nonnegative combination of the generators?

    Feasibility of {lam >= 0, G lam = v} decided by eliminating every
    lam variable; the system is feasible iff no residual constraint of
    the form 0 >= positive constant remains.
    """
    m = len(generators)
    dim = len(v)
    rows: list[Row] = []
    for j in range(m):
        coeffs = tuple(1 if k == j else 0 for k in range(m))
        rows.append((coeffs, 0))
    for i in range(dim):
        coeffs = tuple(generators[j][i] for j in range(m))
        rows.append((coeffs, v[i]))
        rows.append((tuple(-c for c in coeffs), -v[i]))
    rows = _eliminate_all(rows, list(range(m)))
    return all(const <= 0 for _coeffs, const in rows)


def halfspaces(generators: list[tuple[int, ...]], dim: int) -> list[tuple[int, ...]]:
    """H-representation of cone(generators) by projecting out the weights.

    The cone is the projection of {(x, lam) : x = G lam, lam >= 0} onto
    x; eliminating the lam variables leaves inequalities in x alone
    (including equality pairs when the cone is not full-dimensional).
    """
    m = len(generators)
    total = dim + m
    rows: list[Row] = []
    for j in range(m):
        coeffs = tuple(1 if k == dim + j else 0 for k in range(total))
        rows.append((coeffs, 0))
    for i in range(dim):
        base = [0] * total
        base[i] = 1
        for j in range(m):
            base[dim + j] = -generators[j][i]
        rows.append((tuple(base), 0))
        rows.append((tuple(-c for c in base), 0))
    rows = _eliminate_all(rows, list(range(dim, total)))
    out = []
    seen = set()
    for coeffs, const in rows:
        assert const == 0
        normal = coeffs[:dim]
        if any(normal) and normal not in seen:
            seen.add(normal)
            out.append(normal)
    return out


def satisfies(halfspace_rows: list[tuple[int, ...]], v: Sequence[int]) -> bool:
    return all(sum(c * x for c, x in zip(row, v)) >= 0 for row in halfspace_rows)
