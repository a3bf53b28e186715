import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from zchain.zlinalg import (
    IntMatrix,
    cokernel_presentation,
    det,
    is_unimodular,
    kernel_basis,
    minor_gcd,
    presented_group_iso,
    smith_normal_form,
    solve_linear,
    solve_matrix,
)


def mat(rows):
    return IntMatrix.from_rows(rows)


def cofactor_det(a):
    # independent determinant oracle, straight cofactor expansion
    n = a.rows
    if n == 0:
        return 1
    if n == 1:
        return a[0, 0]
    total = 0
    for j in range(n):
        sub = a.submatrix(range(1, n), [c for c in range(n) if c != j])
        total += (-1) ** j * a[0, j] * cofactor_det(sub)
    return total


small_matrices = st.integers(0, 3).flatmap(
    lambda r: st.integers(0, 3).flatmap(
        lambda c: st.lists(
            st.integers(-4, 4), min_size=r * c, max_size=r * c
        ).map(lambda es: IntMatrix(r, c, es))
    )
)


class TestSmithNormalForm:
    def test_zero_1x1(self):
        d = smith_normal_form(mat([[0]]))
        assert d.s == mat([[0]])
        assert d.u == mat([[1]]) and d.v == mat([[1]])
        assert d.rank == 0

    def test_identity_3x3(self):
        d = smith_normal_form(IntMatrix.identity(3))
        assert d.s == IntMatrix.identity(3)
        assert d.rank == 3

    def test_2x2_divisibility(self):
        # gcd of entries is 2 and |det| = 8, so the factors are (2, 4)
        d = smith_normal_form(mat([[2, 4], [6, 8]]))
        assert d.invariant_factors() == (2, 4)
        d.check(mat([[2, 4], [6, 8]]))

    def test_empty_shapes(self):
        for r, c in [(0, 0), (0, 3), (3, 0)]:
            a = IntMatrix.zeros(r, c)
            d = smith_normal_form(a)
            d.check(a)
            assert d.rank == 0

    @given(small_matrices)
    @settings(max_examples=300, deadline=None)
    def test_invariants_hold(self, a):
        d = smith_normal_form(a)
        d.check(a)

    @given(small_matrices)
    @settings(max_examples=300, deadline=None)
    def test_minor_gcd_oracle(self, a):
        d = smith_normal_form(a)
        factors = d.invariant_factors()
        prod = 1
        for k in range(1, d.rank + 1):
            prod *= factors[k - 1]
            assert prod == minor_gcd(a, k)

    def test_seeded_oracle_bulk(self):
        rng = random.Random(7)
        for _ in range(500):
            r = rng.randint(1, 3)
            c = rng.randint(1, 3)
            a = IntMatrix(r, c, [rng.randint(-2, 2) for _ in range(r * c)])
            d = smith_normal_form(a)
            d.check(a)
            prod = 1
            for k, f in enumerate(d.invariant_factors(), start=1):
                prod *= f
                assert prod == minor_gcd(a, k)


class TestMinorGcd:
    def test_identity(self):
        assert minor_gcd(IntMatrix.identity(2), 1) == 1

    def test_det_by_cofactor(self):
        a = mat([[2, 4], [6, 8]])
        assert minor_gcd(a, 2) == abs(cofactor_det(a)) == 8

    def test_zero_matrix(self):
        assert minor_gcd(IntMatrix.zeros(2, 3), 1) == 0
        assert minor_gcd(IntMatrix.zeros(2, 3), 2) == 0

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            minor_gcd(IntMatrix.identity(2), 3)
        with pytest.raises(ValueError):
            minor_gcd(IntMatrix.identity(2), 0)


class TestKernel:
    def test_sum_of_two(self):
        k = kernel_basis(mat([[1, 1]]))
        assert k.cols == 1
        # the kernel lattice of [1 1] is spanned by (1, -1) up to sign
        v = k.col(0)
        assert sorted(v) == [-1, 1]

    def test_identity_has_no_kernel(self):
        assert kernel_basis(IntMatrix.identity(3)).cols == 0

    def test_zero_1x1(self):
        k = kernel_basis(mat([[0]]))
        assert k.cols == 1 and abs(k[0, 0]) == 1

    def test_lattice_by_enumeration(self):
        # every integer kernel vector with small entries must be an integer
        # combination of the basis
        a = mat([[2, 4, -2], [1, 2, -1]])
        k = kernel_basis(a)
        assert (a @ k).is_zero()
        for v in itertools.product(range(-2, 3), repeat=3):
            if all(s == 0 for s in a.apply(v)):
                assert solve_linear(k, v) is not None

    @given(small_matrices)
    @settings(max_examples=200, deadline=None)
    def test_kernel_annihilates(self, a):
        k = kernel_basis(a)
        assert (a @ k).is_zero()
        # full column rank: kernel of the basis matrix itself is trivial
        assert kernel_basis(k).cols == 0


class TestSolve:
    def test_even(self):
        assert solve_linear(mat([[2]]), [4]) == (2,)

    def test_odd_has_no_solution(self):
        assert solve_linear(mat([[2]]), [3]) is None

    def test_2x2(self):
        a = mat([[1, 2], [3, 4]])
        x = solve_linear(a, (5, 11))
        assert x == (1, 2)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            solve_linear(mat([[1, 2]]), [1, 2])

    def test_solution_space_enumeration(self):
        # x0 + kernel lattice enumerates every solution in a small box
        a = mat([[2, 2, 0], [0, 1, 1]])
        b = (4, 3)
        x0 = solve_linear(a, b)
        assert x0 is not None and a.apply(x0) == b
        k = kernel_basis(a)
        for v in itertools.product(range(-4, 5), repeat=3):
            if a.apply(v) == b:
                diff = tuple(p - q for p, q in zip(v, x0))
                assert solve_linear(k, diff) is not None

    @given(small_matrices, st.data())
    @settings(max_examples=200, deadline=None)
    def test_solve_verifies(self, a, data):
        x = data.draw(st.lists(st.integers(-3, 3), min_size=a.cols, max_size=a.cols))
        b = a.apply(x)
        got = solve_linear(a, b)
        assert got is not None
        assert a.apply(got) == b

    def test_solve_matrix(self):
        a = mat([[1, 2], [3, 4]])
        b = a @ mat([[1, 0], [2, 7]])
        x = solve_matrix(a, b)
        assert x is not None and a @ x == b


class TestCokernel:
    def test_z_mod_2(self):
        p = cokernel_presentation(mat([[2]]))
        assert p.normal_form() == (0, (2,))
        # coset enumeration oracle: the residues of Z modulo 2Z
        residues = {v % 2 for v in range(-6, 7)}
        assert p.order() == len(residues) == 2

    def test_identity_gives_trivial(self):
        p = cokernel_presentation(IntMatrix.identity(2))
        assert p.is_trivial()

    def test_free_generator(self):
        p = cokernel_presentation(IntMatrix.zeros(1, 0))
        assert p.normal_form() == (1, ())

    def test_mixed(self):
        a = IntMatrix.diagonal([2, 6], rows=3, cols=2)
        p = cokernel_presentation(a)
        assert p.normal_form() == (1, (2, 6))
        assert str(p) == "Z + Z/2 + Z/6"

    def test_finite_order_equals_det(self):
        rng = random.Random(3)
        for _ in range(50):
            n = rng.randint(1, 3)
            a = IntMatrix(n, n, [rng.randint(-3, 3) for _ in range(n * n)])
            d = abs(cofactor_det(a))
            p = cokernel_presentation(a)
            if d == 0:
                assert p.free_rank > 0
            else:
                assert p.order() == d


class TestPresentedGroupIso:
    def test_identity_map(self):
        p = cokernel_presentation(mat([[2]]))
        assert presented_group_iso(IntMatrix.identity(1), p, p)

    def test_multiplication_by_two_on_z(self):
        p = cokernel_presentation(IntMatrix.zeros(1, 0))
        assert not presented_group_iso(mat([[2]]), p, p)

    def test_identity_on_z_mod_2(self):
        p = cokernel_presentation(mat([[2]]))
        q = cokernel_presentation(mat([[2]]))
        assert presented_group_iso(mat([[1]]), p, q)

    def test_non_descending_map_raises(self):
        p = cokernel_presentation(mat([[2]]))  # Z/2
        q = cokernel_presentation(mat([[4]]))  # Z/4
        with pytest.raises(ValueError):
            presented_group_iso(mat([[1]]), p, q)

    def test_zero_map_on_torsion(self):
        p = cokernel_presentation(mat([[2]]))
        assert not presented_group_iso(mat([[2]]), p, p)  # kills the generator


class TestDet:
    @given(st.integers(0, 4).flatmap(
        lambda n: st.lists(st.integers(-4, 4), min_size=n * n, max_size=n * n).map(
            lambda es: IntMatrix(n, n, es))))
    @settings(max_examples=200, deadline=None)
    def test_matches_cofactor(self, a):
        assert det(a) == cofactor_det(a)

    def test_unimodular(self):
        assert is_unimodular(mat([[2, 1], [1, 1]]))
        assert not is_unimodular(mat([[2, 0], [0, 1]]))


class TestIntMatrix:
    def test_block(self):
        a = IntMatrix.identity(2)
        b = IntMatrix.zeros(2, 1)
        c = IntMatrix.zeros(1, 2)
        d = mat([[5]])
        m = IntMatrix.block([[a, b], [c, d]])
        assert m == mat([[1, 0, 0], [0, 1, 0], [0, 0, 5]])

    def test_matmul_shapes(self):
        with pytest.raises(ValueError):
            IntMatrix.zeros(2, 3) @ IntMatrix.zeros(2, 3)

    def test_empty_matmul(self):
        a = IntMatrix.zeros(2, 0)
        b = IntMatrix.zeros(0, 3)
        assert (a @ b) == IntMatrix.zeros(2, 3)

    def test_entries_must_be_int(self):
        with pytest.raises(ValueError):
            IntMatrix(1, 1, [1.5])

    def test_hash_and_eq(self):
        assert mat([[1, 2]]) == mat([[1, 2]])
        assert hash(mat([[1, 2]])) == hash(mat([[1, 2]]))
        assert mat([[1, 2]]) != mat([[1], [2]])
