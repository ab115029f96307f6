import itertools
import random
from fractions import Fraction

import pytest

from monocert.errors import (
    DegenerateFormError,
    DegreeError,
    FormNotUniqueError,
    SingularTransformError,
)
from monocert.matrices import (
    Matrix5,
    Signature,
    companion_matrix,
    invariant_form,
    minus_identity_power,
    order_of,
    signature,
    unipotency_index,
)
from monocert.polynomials import IntPolynomial, cyclotomic


def poly(*coeffs):
    return IntPolynomial.of(*coeffs)


def char_poly(m: Matrix5) -> IntPolynomial:
    """Oracle: det(xI - M) by permutation expansion over Z[x]."""
    entries = {}
    for i in range(5):
        for j in range(5):
            base = [-m.rows[i][j], 0] if i == j else [-m.rows[i][j]]
            if i == j:
                base[1] = Fraction(1)
            entries[(i, j)] = base

    def mul(p, q):
        out = [Fraction(0)] * (len(p) + len(q) - 1)
        for a, ca in enumerate(p):
            for b, cb in enumerate(q):
                out[a + b] += ca * cb
        return out

    total = [Fraction(0)]
    for perm in itertools.permutations(range(5)):
        sign = 1
        seen = list(perm)
        for i in range(5):
            for j in range(i + 1, 5):
                if seen[i] > seen[j]:
                    sign = -sign
        term = [Fraction(sign)]
        for i in range(5):
            term = mul(term, entries[(i, perm[i])])
        if len(term) > len(total):
            total += [Fraction(0)] * (len(term) - len(total))
        for k, c in enumerate(term):
            total[k] += c
    assert all(c.denominator == 1 for c in total)
    return IntPolynomial.of(*[int(c) for c in total])


class TestCompanion:
    def test_unipotent_block(self):
        a = companion_matrix(poly(-1, 5, -10, 10, -5, 1))
        assert [a.rows[i][4] for i in range(5)] == [1, -5, 10, -10, 5]
        assert all(a.rows[i][i - 1] == 1 for i in range(1, 5))

    def test_zero_polynomial_column(self):
        a = companion_matrix(poly(0, 0, 0, 0, 0, 1))
        assert all(a.rows[i][4] == 0 for i in range(5))

    def test_phi2_phi8(self):
        a = companion_matrix(cyclotomic(2) * cyclotomic(8))
        assert [a.rows[i][4] for i in range(5)] == [-1, -1, 0, 0, -1]

    def test_wrong_degree(self):
        with pytest.raises(DegreeError):
            companion_matrix(poly(1, 1))

    @pytest.mark.parametrize(
        "p",
        [
            poly(-1, 5, -10, 10, -5, 1),
            cyclotomic(2) * cyclotomic(8),
            cyclotomic(1) ** 3 * cyclotomic(3),
            cyclotomic(2) * cyclotomic(10),
        ],
    )
    def test_characteristic_polynomial_matches(self, p):
        assert char_poly(companion_matrix(p)) == p


class TestMatrixOps:
    def test_inverse_round_trip(self):
        rng = random.Random(7)
        for _ in range(10):
            m = Matrix5.from_rows(
                [[rng.randint(-4, 4) for _ in range(5)] for _ in range(5)]
            )
            if m.det() == 0:
                continue
            assert (m @ m.inverse()).is_identity

    def test_singular_inverse_raises(self):
        zero = Matrix5.from_rows([[0] * 5] * 5)
        with pytest.raises(SingularTransformError):
            zero.inverse()

    def test_negative_power(self):
        b = companion_matrix(cyclotomic(2) * cyclotomic(8))
        assert (b ** -3) @ (b ** 3) == Matrix5.identity()

    def test_rank(self):
        assert Matrix5.identity().rank() == 5
        assert Matrix5.from_rows([[1] * 5] * 5).rank() == 1


class TestInvariantForm:
    def test_identity_pair_not_unique(self):
        with pytest.raises(FormNotUniqueError):
            invariant_form(Matrix5.identity(), Matrix5.identity())

    def test_case7_invariance(self, case_setup):
        _case, a, b, _t, _f = case_setup("o32-07")
        q = invariant_form(a, b)
        assert a.transpose() @ q @ a == q
        assert b.transpose() @ q @ b == q
        assert q == q.transpose()
        first = next(x for row in q.rows for x in row if x != 0)
        assert first > 0

    def test_o41_signature(self, case_setup):
        _case, a, b, _t, _f = case_setup("o41-01")
        assert signature(invariant_form(a, b)) == Signature(4, 1)


class TestSignature:
    def diag(self, *values):
        return Matrix5.from_rows(
            [[values[i] if i == j else 0 for j in range(5)] for i in range(5)]
        )

    def test_diagonal(self):
        assert signature(self.diag(1, 1, 1, -1, -1)) == Signature(3, 2)

    def test_sign_normalization(self):
        assert signature(self.diag(-1, -1, -1, -1, 1)) == Signature(4, 1)

    def test_scale_invariance(self):
        q = self.diag(2, 3, 5, -7, -11)
        for c in (2, Fraction(1, 3)):
            assert signature(q.scale(c)) == signature(q)
            assert signature(q.scale(-c)) == signature(q)

    def test_hyperbolic_block(self):
        rows = [[0] * 5 for _ in range(5)]
        rows[0][1] = rows[1][0] = 1
        rows[2][2] = rows[3][3] = rows[4][4] = 1
        assert signature(Matrix5.from_rows(rows)) == Signature(4, 1)

    def test_degenerate(self):
        with pytest.raises(DegenerateFormError):
            signature(self.diag(1, 1, 0, -1, -1))

    def test_random_against_float_eigenvalues(self):
        import numpy as np

        rng = random.Random(11)
        checked = 0
        while checked < 25:
            sym = [[0] * 5 for _ in range(5)]
            for i in range(5):
                for j in range(i, 5):
                    sym[i][j] = sym[j][i] = rng.randint(-5, 5)
            m = Matrix5.from_rows(sym)
            eig = np.linalg.eigvalsh(np.array(sym, dtype=float))
            if min(abs(e) for e in eig) < 1e-6:
                continue
            expected_plus = int(sum(e > 0 for e in eig))
            expected = (
                Signature(expected_plus, 5 - expected_plus)
                if expected_plus >= 3
                else Signature(5 - expected_plus, expected_plus)
            )
            assert signature(m) == expected
            checked += 1


class TestOrders:
    def test_identity(self):
        assert unipotency_index(Matrix5.identity()) == 1
        assert order_of(Matrix5.identity()) == 1

    def test_unipotent_of_infinite_order(self):
        b = companion_matrix(poly(1, 5, 10, 10, 5, 1))  # (x+1)^5
        assert unipotency_index(b) == 2
        assert order_of(b) is None
        assert minus_identity_power(b) is None

    def test_finite_order_case(self):
        b = companion_matrix(cyclotomic(2) * cyclotomic(8))
        assert unipotency_index(b) == 8
        assert order_of(b) == 8
        assert minus_identity_power(b) is None

    def test_minus_identity_power(self):
        b = companion_matrix(cyclotomic(2) * cyclotomic(10))
        assert minus_identity_power(b) == 5
        assert order_of(b) == 10

    def test_minus_identity_itself(self):
        assert minus_identity_power(-Matrix5.identity()) == 1

    @pytest.mark.parametrize(
        "factors",
        [(1, 1, 1, 1, 1), (2, 8), (2, 10), (1, 1, 1, 3), (2, 2, 2, 3), (2, 12)],
    )
    def test_order_matches_brute_force(self, factors):
        p = poly(1)
        for n in factors:
            p = p * cyclotomic(n)
        b = companion_matrix(p)
        order = order_of(b)
        power = Matrix5.identity()
        brute = None
        for k in range(1, 241):
            power = power @ b
            if power.is_identity:
                brute = k
                break
        assert order == brute
