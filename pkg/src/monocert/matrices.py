"""Exact 5x5 rational matrices and spectral classification of group generators.

All arithmetic is over `fractions.Fraction`; no eigenvalue routine here is
numerical.  The classifiers (`unipotency_index`, `order_of`,
`minus_identity_power`) assume matrices whose eigenvalues are roots of
unity, which holds for companion matrices of products of cyclotomic
polynomials.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import (
    DegenerateFormError,
    DegreeError,
    FormNotUniqueError,
    IndexNotFoundError,
    SingularTransformError,
)
from .polynomials import IntPolynomial, euler_phi

N = 5

Row = tuple[Fraction, ...]


@dataclass(frozen=True)
class Matrix5:
    """Immutable 5x5 matrix with exact rational entries."""

    rows: tuple[Row, ...]

    def __post_init__(self):
        if len(self.rows) != N or any(len(r) != N for r in self.rows):
            raise ValueError("matrix must be 5x5")

    @staticmethod
    def from_rows(rows: Sequence[Sequence[Fraction | int]]) -> "Matrix5":
        return Matrix5(tuple(tuple(Fraction(x) for x in row) for row in rows))

    @staticmethod
    def identity() -> "Matrix5":
        return Matrix5.from_rows(
            [[1 if i == j else 0 for j in range(N)] for i in range(N)]
        )

    @staticmethod
    def reversal_permutation() -> "Matrix5":
        """The anti-diagonal permutation matrix reversing coordinates."""
        return Matrix5.from_rows(
            [[1 if i + j == N - 1 else 0 for j in range(N)] for i in range(N)]
        )

    def __matmul__(self, other: "Matrix5") -> "Matrix5":
        cols = tuple(zip(*other.rows))
        return Matrix5(
            tuple(
                tuple(sum(a * b for a, b in zip(row, col)) for col in cols)
                for row in self.rows
            )
        )

    def __add__(self, other: "Matrix5") -> "Matrix5":
        return Matrix5(
            tuple(
                tuple(a + b for a, b in zip(r1, r2))
                for r1, r2 in zip(self.rows, other.rows)
            )
        )

    def __sub__(self, other: "Matrix5") -> "Matrix5":
        return Matrix5(
            tuple(
                tuple(a - b for a, b in zip(r1, r2))
                for r1, r2 in zip(self.rows, other.rows)
            )
        )

    def __neg__(self) -> "Matrix5":
        return Matrix5(tuple(tuple(-a for a in row) for row in self.rows))

    def scale(self, c: Fraction | int) -> "Matrix5":
        c = Fraction(c)
        return Matrix5(tuple(tuple(c * a for a in row) for row in self.rows))

    def transpose(self) -> "Matrix5":
        return Matrix5(tuple(zip(*self.rows)))

    def apply(self, v: Sequence[Fraction | int]) -> tuple[Fraction, ...]:
        """Matrix-vector product."""
        return tuple(sum(a * Fraction(x) for a, x in zip(row, v)) for row in self.rows)

    def det(self) -> Fraction:
        m = [list(row) for row in self.rows]
        det = Fraction(1)
        for k in range(N):
            pivot_row = next((i for i in range(k, N) if m[i][k] != 0), None)
            if pivot_row is None:
                return Fraction(0)
            if pivot_row != k:
                m[k], m[pivot_row] = m[pivot_row], m[k]
                det = -det
            det *= m[k][k]
            for i in range(k + 1, N):
                factor = m[i][k] / m[k][k]
                for j in range(k, N):
                    m[i][j] -= factor * m[k][j]
        return det

    def inverse(self) -> "Matrix5":
        m = [list(row) + [Fraction(int(i == j)) for j in range(N)] for i, row in enumerate(self.rows)]
        for k in range(N):
            pivot_row = next((i for i in range(k, N) if m[i][k] != 0), None)
            if pivot_row is None:
                raise SingularTransformError("matrix is singular")
            m[k], m[pivot_row] = m[pivot_row], m[k]
            pivot = m[k][k]
            m[k] = [x / pivot for x in m[k]]
            for i in range(N):
                if i != k and m[i][k] != 0:
                    factor = m[i][k]
                    m[i] = [a - factor * b for a, b in zip(m[i], m[k])]
        return Matrix5(tuple(tuple(row[N:]) for row in m))

    def __pow__(self, exponent: int) -> "Matrix5":
        base = self if exponent >= 0 else self.inverse()
        exponent = abs(exponent)
        result = Matrix5.identity()
        while exponent:
            if exponent & 1:
                result = result @ base
            base = base @ base
            exponent >>= 1
        return result

    @property
    def is_identity(self) -> bool:
        return self == Matrix5.identity()

    def is_zero(self) -> bool:
        return all(a == 0 for row in self.rows for a in row)

    def rank(self) -> int:
        m = [list(row) for row in self.rows]
        rank = 0
        for col in range(N):
            pivot_row = next((i for i in range(rank, N) if m[i][col] != 0), None)
            if pivot_row is None:
                continue
            m[rank], m[pivot_row] = m[pivot_row], m[rank]
            for i in range(rank + 1, N):
                if m[i][col] != 0:
                    factor = m[i][col] / m[rank][col]
                    m[i] = [a - factor * b for a, b in zip(m[i], m[rank])]
            rank += 1
        return rank

    def to_int_rows(self) -> tuple[tuple[int, ...], ...]:
        """Entries as integers; raises ValueError if any entry is fractional."""
        if any(a.denominator != 1 for row in self.rows for a in row):
            raise ValueError("matrix has non-integer entries")
        return tuple(tuple(a.numerator for a in row) for row in self.rows)

    def __str__(self) -> str:
        return "\n".join(
            "[" + "  ".join(str(a) for a in row) + "]" for row in self.rows
        )


def companion_matrix(p: IntPolynomial) -> Matrix5:
    """Companion matrix with a subdiagonal of ones and last column -(a0..a4)."""
    if p.degree != N or not p.is_monic:
        raise DegreeError(f"expected a monic polynomial of degree {N}, got {p}")
    rows = [[Fraction(0)] * N for _ in range(N)]
    for i in range(1, N):
        rows[i][i - 1] = Fraction(1)
    for i in range(N):
        rows[i][N - 1] = Fraction(-p.coeffs[i])
    return Matrix5(tuple(tuple(row) for row in rows))


@dataclass(frozen=True)
class Signature:
    """Inertia (positive count, negative count) of a nondegenerate form."""

    plus: int
    minus: int

    def __str__(self) -> str:
        return f"({self.plus},{self.minus})"


def _nullspace(matrix: list[list[Fraction]], unknowns: int) -> list[list[Fraction]]:
    """Basis of the nullspace of `matrix` (rows = equations)."""
    m = [row[:] for row in matrix]
    pivots: list[int] = []
    row_idx = 0
    for col in range(unknowns):
        pivot_row = next((i for i in range(row_idx, len(m)) if m[i][col] != 0), None)
        if pivot_row is None:
            continue
        m[row_idx], m[pivot_row] = m[pivot_row], m[row_idx]
        pivot = m[row_idx][col]
        m[row_idx] = [x / pivot for x in m[row_idx]]
        for i in range(len(m)):
            if i != row_idx and m[i][col] != 0:
                factor = m[i][col]
                m[i] = [a - factor * b for a, b in zip(m[i], m[row_idx])]
        pivots.append(col)
        row_idx += 1
        if row_idx == len(m):
            break
    free_cols = [c for c in range(unknowns) if c not in pivots]
    basis = []
    for free in free_cols:
        vec = [Fraction(0)] * unknowns
        vec[free] = Fraction(1)
        for r, col in enumerate(pivots):
            vec[col] = -m[r][free]
        basis.append(vec)
    return basis


def invariant_form(a: Matrix5, b: Matrix5) -> Matrix5:
    """The symmetric form Q with A^T Q A = Q and B^T Q B = Q, up to scale.

    The 15 unknowns are the upper-triangular entries of Q.  The solution
    space must be exactly one-dimensional; the representative returned is
    scaled to a primitive integer matrix whose first nonzero entry in
    row-major order is positive.
    """
    index = {}
    k = 0
    for i in range(N):
        for j in range(i, N):
            index[(i, j)] = k
            k += 1

    def q_entry(i: int, j: int) -> int:
        return index[(i, j)] if i <= j else index[(j, i)]

    equations: list[list[Fraction]] = []
    for mat in (a, b):
        for r in range(N):
            for s in range(N):
                # (M^T Q M - Q)[r][s] = sum_{i,j} M[i][r] Q[i][j] M[j][s] - Q[r][s]
                coeffs = [Fraction(0)] * 15
                for i in range(N):
                    if mat.rows[i][r] == 0:
                        continue
                    for j in range(N):
                        if mat.rows[j][s] == 0:
                            continue
                        coeffs[q_entry(i, j)] += mat.rows[i][r] * mat.rows[j][s]
                coeffs[q_entry(r, s)] -= 1
                equations.append(coeffs)

    basis = _nullspace(equations, 15)
    if len(basis) != 1:
        raise FormNotUniqueError(
            f"invariant symmetric form space has dimension {len(basis)}, expected 1"
        )
    flat = basis[0]
    entries = [[flat[q_entry(i, j)] for j in range(N)] for i in range(N)]
    denominators = reduce(lcm, (x.denominator for row in entries for x in row), 1)
    ints = [[int(x * denominators) for x in row] for row in entries]
    content = reduce(gcd, (abs(x) for row in ints for x in row), 0)
    ints = [[x // content for x in row] for row in ints]
    first = next(x for row in ints for x in row if x != 0)
    if first < 0:
        ints = [[-x for x in row] for row in ints]
    return Matrix5.from_rows(ints)


def signature(q: Matrix5) -> Signature:
    """Exact inertia of a symmetric form by rational congruence reduction.

    Diagonal pivots are used when available; a fully off-diagonal
    (hyperbolic) block contributes one positive and one negative index.
    The result is normalized to plus >= minus, flipping the overall sign
    of the form if necessary, since the form is only defined up to scale.
    """
    if q != q.transpose():
        raise ValueError("form must be symmetric")
    m = [list(row) for row in q.rows]
    plus = minus = 0
    for k in range(N):
        if m[k][k] == 0:
            swap = next((j for j in range(k + 1, N) if m[j][j] != 0), None)
            if swap is not None:
                m[k], m[swap] = m[swap], m[k]
                for row in m:
                    row[k], row[swap] = row[swap], row[k]
            else:
                partner = next((j for j in range(k + 1, N) if m[k][j] != 0), None)
                if partner is None:
                    continue  # row k is identically zero on the remaining block
                # make the diagonal nonzero: x_k -> x_k + x_partner
                for j in range(N):
                    m[k][j] += m[partner][j]
                for row in m:
                    row[k] += row[partner]
        pivot = m[k][k]
        if pivot > 0:
            plus += 1
        else:
            minus += 1
        for i in range(k + 1, N):
            if m[i][k] != 0:
                factor = m[i][k] / pivot
                for j in range(N):
                    m[i][j] -= factor * m[k][j]
                for row in m:
                    row[i] -= factor * row[k]
    if plus + minus < N:
        raise DegenerateFormError(
            f"form has rank {plus + minus}, expected {N}"
        )
    if minus > plus:
        plus, minus = minus, plus
    return Signature(plus, minus)


def _unipotency_cap() -> int:
    """Twice the lcm of all n <= 60 whose totient is at most 5.

    Only cyclotomic factors of degree <= 5 can divide the characteristic
    polynomial, so the order of any root-of-unity eigenvalue divides that
    lcm; the factor of two is a safety margin.
    """
    return 2 * reduce(lcm, (n for n in range(1, 61) if euler_phi(n) <= N), 1)


def unipotency_index(b: Matrix5) -> int:
    """Least i > 0 such that (B^i - I)^5 = 0."""
    identity = Matrix5.identity()
    cap = _unipotency_cap()
    power = identity
    for i in range(1, cap + 1):
        power = power @ b
        nilpotent_part = power - identity
        if (nilpotent_part @ nilpotent_part @ nilpotent_part
                @ nilpotent_part @ nilpotent_part).is_zero():
            return i
    raise IndexNotFoundError(
        f"no power up to {cap} is unipotent; eigenvalues are not all roots of unity"
    )


def order_of(b: Matrix5) -> int | None:
    """Multiplicative order of B, or None when B has infinite order.

    B^eta is unipotent for eta the unipotency index, so B has finite order
    iff B^eta = I, in which case eta is the order.
    """
    eta = unipotency_index(b)
    return eta if (b ** eta).is_identity else None


def minus_identity_power(b: Matrix5) -> int | None:
    """Least k > 0 with B^k = -I, or None if no power is -I.

    A matrix of infinite order has no scalar power (it would force finite
    order), so the search is bounded by the order when finite.
    """
    order = order_of(b)
    if order is None:
        return None
    minus_identity = -Matrix5.identity()
    power = Matrix5.identity()
    for k in range(1, order + 1):
        power = power @ b
        if power == minus_identity:
            return k
    return None
