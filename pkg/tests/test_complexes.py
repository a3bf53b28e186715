import random

import pytest

from zchain.zlinalg import IntMatrix
from zchain.complexes import (
    ChainMap,
    Conflation,
    complex_c,
    complex_t,
    cone_object,
    direct_sum,
    disk,
    is_chain_iso,
    make_complex,
    mapping_cone_complex,
    pullback_along_deflation,
    pullback_universal_map,
    pushout_along_inflation,
    pushout_universal_map,
    shift,
    sphere,
    split_epi_witness,
    split_mono_witness,
    standard_complex,
    tensor,
    tensor_map,
    unit_complex,
    unit_conflation,
    zero_complex,
)


def mat(rows):
    return IntMatrix.from_rows(rows)


class TestConstruction:
    def test_zero(self):
        z = make_complex({}, {})
        assert z.is_zero() and z.support is None

    def test_sphere_at_zero(self):
        s = make_complex({0: 1}, {})
        assert s == sphere(0)
        assert s.support == (0, 0)

    def test_single_differential(self):
        x = make_complex({-1: 1, 0: 1}, {-1: mat([[2]])})
        assert x.rank(-1) == x.rank(0) == 1
        assert x.diff(-1) == mat([[2]])

    def test_rejects_shape_mismatch(self):
        with pytest.raises(ValueError, match="shape"):
            make_complex({0: 1, 1: 2}, {0: mat([[1]])})

    def test_rejects_nonzero_square(self):
        with pytest.raises(ValueError, match="d o d != 0 at degree 0"):
            make_complex(
                {0: 1, 1: 1, 2: 1},
                {0: mat([[1]]), 1: mat([[1]])},
            )

    def test_zero_ranks_trimmed(self):
        x = make_complex({0: 1, 5: 0}, {})
        assert x.support == (0, 0)
        assert x == sphere(0)


class TestStandardComplexes:
    def test_unit(self):
        u = standard_complex("unit")
        assert u.rank(0) == 1 and u.total_rank() == 1

    def test_c(self):
        c = standard_complex("C")
        assert c.rank(-1) == c.rank(0) == 1
        assert c.diff(-1) == IntMatrix.identity(1)

    def test_t(self):
        t = standard_complex("T")
        assert t.rank(-1) == 1 and t.total_rank() == 1

    def test_sphere_disk(self):
        assert standard_complex("sphere", 3) == sphere(3)
        assert standard_complex("disk", 2).diff(1) == IntMatrix.identity(1)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            standard_complex("torus")


class TestUnitConflation:
    def test_validates(self):
        c = unit_conflation()
        c.validate()
        assert c.sub == unit_complex()
        assert c.total == complex_c()
        assert c.quotient == complex_t()


def random_complex(rng, width=3, max_rank=2, max_entry=2):
    """Small random complex built from spheres, disks and a cone twist."""
    from zchain.sampling import random_complex as rc

    return rc(rng, max_width=width, max_rank=max_rank, max_entry=max_entry)


class TestTensor:
    def test_unit_laws_on_the_nose(self):
        rng = random.Random(1)
        for _ in range(20):
            x = random_complex(rng)
            assert tensor(unit_complex(), x) == x
            assert tensor(x, unit_complex()) == x

    def test_t_tensor_t(self):
        assert tensor(complex_t(), complex_t()) == sphere(-2)

    def test_c_tensor_unit(self):
        assert tensor(complex_c(), sphere(0)) == complex_c()

    def test_shift_is_tensor_with_t(self):
        rng = random.Random(2)
        for _ in range(30):
            x = random_complex(rng)
            assert tensor(complex_t(), x) == shift(x)

    def test_squares_to_zero(self):
        rng = random.Random(3)
        for _ in range(20):
            a = random_complex(rng)
            b = random_complex(rng)
            t = tensor(a, b)  # construction validates d o d = 0
            if not (a.is_zero() or b.is_zero()):
                alo, ahi = a.support
                blo, bhi = b.support
                assert t.support == (alo + blo, ahi + bhi)

    def test_rank_formula(self):
        rng = random.Random(4)
        for _ in range(20):
            a = random_complex(rng)
            b = random_complex(rng)
            t = tensor(a, b)
            for n in range(-12, 12):
                expect = sum(a.rank(i) * b.rank(n - i) for i in range(-10, 11))
                assert t.rank(n) == expect

    def test_associativity_ranks_and_iso(self):
        from zchain.sampling import associator_map

        rng = random.Random(5)
        for _ in range(10):
            a = random_complex(rng, width=2, max_rank=2)
            b = random_complex(rng, width=2, max_rank=2)
            c = random_complex(rng, width=2, max_rank=2)
            left = tensor(tensor(a, b), c)
            right = tensor(a, tensor(b, c))
            for n in range(-15, 15):
                assert left.rank(n) == right.rank(n)
            iso = associator_map(a, b, c)
            assert iso.source == left and iso.target == right
            assert is_chain_iso(iso)

    def test_euler_multiplicative(self):
        rng = random.Random(6)
        for _ in range(20):
            a = random_complex(rng)
            b = random_complex(rng)
            chi = lambda x: sum((-1) ** (n % 2 or 0) * x.rank(n) if n % 2 == 0 else -x.rank(n) for n in (x.degrees()))
            chi = lambda x: sum(((-1) ** (n & 1)) * x.rank(n) for n in x.degrees())
            assert chi(tensor(a, b)) == chi(a) * chi(b)


class TestShift:
    def test_shift_sphere(self):
        assert shift(sphere(0)) == sphere(-1)

    def test_shift_zero(self):
        assert shift(zero_complex()).is_zero()

    def test_sign(self):
        x = make_complex({0: 1, 1: 1}, {0: mat([[3]])})
        assert shift(x).diff(-1) == mat([[-3]])


class TestConeObject:
    def test_cone_of_unit_is_c(self):
        cx, conf = cone_object(unit_complex())
        assert cx == complex_c()
        conf.validate()

    def test_conflation_on_sphere(self):
        cx, conf = cone_object(sphere(0))
        conf.validate()
        assert conf.quotient == shift(sphere(0))

    def test_block_differential(self):
        rng = random.Random(7)
        for _ in range(25):
            x = random_complex(rng)
            cx, conf = cone_object(x)  # constructor validates d o d = 0
            for n in list(x.degrees()):
                assert cx.rank(n) == x.rank(n) + x.rank(n + 1)
            conf.validate()


class TestDirectSum:
    def test_sum_with_zero(self):
        x = sphere(1)
        s = direct_sum(x, zero_complex())
        assert s.total == x

    def test_rank_additivity(self):
        rng = random.Random(8)
        for _ in range(10):
            x = random_complex(rng)
            y = random_complex(rng)
            s = direct_sum(x, y)
            for n in range(-10, 10):
                assert s.total.rank(n) == x.rank(n) + y.rank(n)
            # injections and projections compose to identities
            assert s.project_left @ s.include_left == ChainMap.identity(x)
            assert s.project_right @ s.include_right == ChainMap.identity(y)
            assert (s.project_left @ s.include_right).is_zero()


class TestSplitWitnesses:
    def test_identity(self):
        x = sphere(0)
        w = split_mono_witness(ChainMap.identity(x))
        assert w is not None and w[0] == IntMatrix.identity(1)

    def test_multiplication_by_two_not_split(self):
        x = sphere(0)
        f = ChainMap(x, x, {0: mat([[2]])})
        assert split_mono_witness(f) is None

    def test_inclusion_into_sum(self):
        x, y = sphere(0), sphere(0)
        s = direct_sum(x, y)
        w = split_mono_witness(s.include_left)
        assert w is not None
        assert w[0] @ s.include_left.component(0) == IntMatrix.identity(1)

    def test_epi_witness(self):
        x, y = sphere(0), disk(1)
        s = direct_sum(x, y)
        w = split_epi_witness(s.project_left)
        assert w is not None
        assert s.project_left.component(0) @ w[0] == IntMatrix.identity(1)


class TestPushout:
    def test_pushout_along_identity(self):
        x = sphere(0)
        cx, conf = cone_object(x)
        po = pushout_along_inflation(conf.i, ChainMap.identity(x))
        # pushing out along id_x returns Cx up to iso; ranks agree
        assert po.complex.total_rank() == cx.total_rank()

    def test_pushout_to_zero(self):
        x, y = sphere(0), disk(2)
        s = direct_sum(x, y)
        po = pushout_along_inflation(s.include_left, ChainMap.zero(x, zero_complex()))
        # x >--> x + y pushed out along x -> 0 gives y
        assert po.complex.total_rank() == y.total_rank()

    def test_pushout_unit_into_c(self):
        conf = unit_conflation()
        po = pushout_along_inflation(conf.i, ChainMap.identity(unit_complex()))
        assert po.complex.total_rank() == 2  # C again

    def test_rejects_non_inflation(self):
        x = sphere(0)
        f = ChainMap(x, x, {0: mat([[2]])})
        with pytest.raises(ValueError, match="split mono"):
            pushout_along_inflation(f, ChainMap.identity(x))

    def test_universal_property(self):
        rng = random.Random(9)
        from zchain.sampling import random_chain_map, random_complex as rc

        for _ in range(15):
            x = rc(rng, max_width=2, max_rank=2, max_entry=2)
            y = rc(rng, max_width=2, max_rank=2, max_entry=2)
            s = direct_sum(x, y)
            i = s.include_left
            z = rc(rng, max_width=2, max_rank=2, max_entry=2)
            f = random_chain_map(rng, x, z, max_entry=1)
            po = pushout_along_inflation(i, f)
            # cone: maps out of y and z agreeing on x, built from a random
            # map out of the pushout itself
            t = po.complex
            a = po.from_inflation_target
            b = po.from_map_target
            m = pushout_universal_map(po, a, b)
            assert m == ChainMap.identity(po.complex)


class TestPullback:
    def test_pullback_along_identity(self):
        x = sphere(0)
        f = ChainMap(x, x, {0: mat([[5]])})
        pb = pullback_along_deflation(ChainMap.identity(x), f)
        assert pb.complex.total_rank() == 1

    def test_pullback_of_projection(self):
        x, y = sphere(0), sphere(1)
        s = direct_sum(x, y)
        pb = pullback_along_deflation(s.project_left, ChainMap.zero(zero_complex(), x))
        assert pb.complex.total_rank() == y.total_rank()

    def test_rejects_non_deflation(self):
        x = sphere(0)
        f = ChainMap(x, x, {0: mat([[2]])})
        with pytest.raises(ValueError, match="split epi"):
            pullback_along_deflation(f, ChainMap.identity(x))

    def test_universal_property(self):
        x, y = sphere(0), disk(1)
        s = direct_sum(x, y)
        p = s.project_left
        f = ChainMap.identity(x)
        pb = pullback_along_deflation(p, f)
        m = pullback_universal_map(pb, pb.to_deflation_source, pb.to_map_source)
        assert m == ChainMap.identity(pb.complex)


class TestTensorMap:
    def test_identity_tensor_identity(self):
        x, y = complex_c(), sphere(0)
        f = tensor_map(ChainMap.identity(x), ChainMap.identity(y))
        assert f == ChainMap.identity(tensor(x, y))

    def test_scalar_blocks(self):
        x = sphere(0)
        double = ChainMap(x, x, {0: mat([[2]])})
        triple = ChainMap(x, x, {0: mat([[3]])})
        f = tensor_map(double, triple)
        assert f.component(0) == mat([[6]])
