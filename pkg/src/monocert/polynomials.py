"""Integer polynomials, cyclotomic factorizations, and exponent parameters.

Everything in this module is exact: coefficients are Python integers (or
`fractions.Fraction` where division is unavoidable) and no floating point
is used anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Iterable, Sequence

from .errors import GaloisClosureError


@dataclass(frozen=True)
class IntPolynomial:
    """Dense integer polynomial, constant term first.

    >>> IntPolynomial.of(-1, 0, 1)
    IntPolynomial('x^2 - 1')
    """

    coeffs: tuple[int, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("zero polynomial is not representable here")
        if self.coeffs[-1] == 0 and len(self.coeffs) > 1:
            raise ValueError("leading coefficient must be nonzero")

    @staticmethod
    def of(*coeffs: int) -> "IntPolynomial":
        """Build from constant-first coefficients, trimming trailing zeros."""
        end = len(coeffs)
        while end > 1 and coeffs[end - 1] == 0:
            end -= 1
        return IntPolynomial(tuple(int(c) for c in coeffs[:end]))

    @staticmethod
    def one() -> "IntPolynomial":
        return IntPolynomial((1,))

    @staticmethod
    def x_power_minus_one(n: int) -> "IntPolynomial":
        """x^n - 1."""
        return IntPolynomial.of(-1, *([0] * (n - 1)), 1)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_monic(self) -> bool:
        return self.coeffs[-1] == 1

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPolynomial.of(*out)

    def __pow__(self, n: int) -> "IntPolynomial":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = IntPolynomial.one()
        for _ in range(n):
            result = result * self
        return result

    def divide_exact(self, divisor: "IntPolynomial") -> "IntPolynomial":
        """Exact division; raises ValueError on a nonzero remainder."""
        rem = list(self.coeffs)
        d = divisor.coeffs
        if len(rem) < len(d):
            raise ValueError("degree of divisor exceeds degree of dividend")
        out = [0] * (len(rem) - len(d) + 1)
        for k in range(len(out) - 1, -1, -1):
            lead = rem[k + len(d) - 1]
            q, r = divmod(lead, d[-1])
            if r != 0:
                raise ValueError("division is not exact over the integers")
            out[k] = q
            for j, c in enumerate(d):
                rem[k + j] -= q * c
        if any(rem):
            raise ValueError("division leaves a nonzero remainder")
        return IntPolynomial.of(*out)

    def evaluate(self, x: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __str__(self) -> str:
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0 and self.degree > 0:
                continue
            sign = " - " if c < 0 else " + "
            if not parts:
                sign = "-" if c < 0 else ""
            mag = abs(c)
            term = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            coeff = str(mag) if (i == 0 or mag != 1) else ""
            parts.append(f"{sign}{coeff}{term}")
        return "".join(parts) or "0"

    def __repr__(self) -> str:
        return f"IntPolynomial({str(self)!r})"


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> IntPolynomial:
    """The n-th cyclotomic polynomial, by exact recursive division of x^n - 1."""
    if n < 1:
        raise ValueError("cyclotomic index must be >= 1")
    if n == 1:
        return IntPolynomial.of(-1, 1)
    quotient = IntPolynomial.x_power_minus_one(n)
    for d in range(1, n):
        if n % d == 0:
            quotient = quotient.divide_exact(cyclotomic(d))
    return quotient


def euler_phi(n: int) -> int:
    """Euler totient, by trial-division factorization (n stays tiny here)."""
    result = n
    p = 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


@dataclass(frozen=True)
class ParamVector:
    """Five exponents in [0, 1), stored sorted and reduced mod 1.

    The multiset {exp(2*pi*i*entry)} must be closed under Galois
    conjugation for the associated polynomial to have integer
    coefficients; that closure is validated when the polynomial is built,
    not at construction time.
    """

    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.entries) != 5:
            raise ValueError("exactly five entries required")
        reduced = tuple(sorted(Fraction(e) % 1 for e in self.entries))
        object.__setattr__(self, "entries", reduced)

    @staticmethod
    def parse(items: Sequence[str | Fraction | int]) -> "ParamVector":
        """Parse entries given as exact fraction strings like "3/8"."""
        return ParamVector(tuple(Fraction(item) for item in items))

    def cyclotomic_multiplicities(self) -> dict[int, int]:
        """Decompose the root multiset into cyclotomic factors.

        Returns {d: m} meaning the d-th cyclotomic polynomial occurs with
        multiplicity m.  Raises GaloisClosureError when the entries with a
        given reduced denominator do not form complete orbits of the unit
        group, i.e. when the product would not be an integer polynomial.
        """
        by_denominator: dict[int, dict[int, int]] = {}
        for e in self.entries:
            counts = by_denominator.setdefault(e.denominator, {})
            counts[e.numerator] = counts.get(e.numerator, 0) + 1
        multiplicities: dict[int, int] = {}
        for d, counts in sorted(by_denominator.items()):
            units = [k for k in range(d) if math.gcd(k, d) == 1]
            present = set(counts)
            if present != set(units) or len(set(counts.values())) != 1:
                raise GaloisClosureError(
                    f"entries with denominator {d} do not cover all {euler_phi(d)} "
                    f"primitive residues uniformly"
                )
            multiplicities[d] = counts[units[0]]
        return multiplicities

    def __str__(self) -> str:
        return "(" + ", ".join(str(e) for e in self.entries) + ")"


def polynomial_from_params(params: ParamVector) -> IntPolynomial:
    """prod_j (x - exp(2*pi*i*p_j)) as a product of cyclotomic polynomials.

    Monic of degree 5 with integer coefficients; raises GaloisClosureError
    when the root multiset is not Galois-stable.
    """
    product = IntPolynomial.one()
    for d, mult in params.cyclotomic_multiplicities().items():
        product = product * cyclotomic(d) ** mult
    assert product.degree == 5 and product.is_monic
    return product


def _rational_gcd(f: Sequence[Fraction], g: Sequence[Fraction]) -> list[Fraction]:
    """Euclidean gcd of polynomials with Fraction coefficients (dense, constant first)."""

    def trim(p: list[Fraction]) -> list[Fraction]:
        while p and p[-1] == 0:
            p.pop()
        return p

    def remainder(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
        a = list(a)
        while a and len(a) >= len(b):
            factor = a[-1] / b[-1]
            shift = len(a) - len(b)
            for j, c in enumerate(b):
                a[shift + j] -= factor * c
            a = trim(a)
        return a

    a, b = trim(list(f)), trim(list(g))
    while b:
        a, b = b, remainder(a, b)
    return a


def coprime_roots(f: IntPolynomial, g: IntPolynomial) -> bool:
    """True iff f and g have no common root, i.e. gcd(f, g) = 1 over Q."""
    gcd = _rational_gcd(
        [Fraction(c) for c in f.coeffs], [Fraction(c) for c in g.coeffs]
    )
    return len(gcd) == 1


def lcm_of(values: Iterable[int]) -> int:
    return reduce(math.lcm, values, 1)
