import random

import pytest

from zchain.zlinalg import IntMatrix
from zchain.complexes import (
    ChainMap,
    complex_c,
    disk,
    make_complex,
    mapping_cone_complex,
    shift,
    sphere,
    tensor,
    unit_complex,
    zero_complex,
)
from zchain.homotopy import (
    find_homotopy,
    homology,
    homology_at,
    induced_homology_map,
    is_acyclic,
    is_contractible,
    is_homotopy_equivalence,
    is_quasi_iso,
)
from zchain.sampling import (
    derive_rng,
    null_homotopic_perturbation,
    random_chain_map,
    random_complex,
    random_homotopy_equivalence,
)


def mat(rows):
    return IntMatrix.from_rows(rows)


class TestHomology:
    def test_sphere(self):
        h = homology(sphere(0))
        assert str(h.group(0)) == "Z"
        assert h.nonzero_degrees() == [0]

    def test_disk_acyclic(self):
        for n in (-1, 0, 3):
            assert homology(disk(n)).is_trivial()

    def test_torsion(self):
        x = make_complex({-1: 1, 0: 1}, {-1: mat([[2]])})
        h = homology(x)
        assert h.group(0).normal_form() == (0, (2,))
        assert h.group(-1).is_trivial()

    def test_zero_complex(self):
        assert homology(zero_complex()).is_trivial()

    def test_direct_sum_homology(self):
        from zchain.complexes import direct_sum
        from zchain.zlinalg import cokernel_presentation

        rng = random.Random(11)
        for _ in range(25):
            x = random_complex(rng)
            y = random_complex(rng)
            s = direct_sum(x, y).total
            degs = set()
            for c in (x, y, s):
                if not c.is_zero():
                    lo, hi = c.support
                    degs.update(range(lo, hi + 1))
            for n in degs:
                hx = homology_at(x, n)
                hy = homology_at(y, n)
                hs = homology_at(s, n)
                merged = cokernel_presentation(
                    IntMatrix.block(
                        [
                            [hx.relations, IntMatrix.zeros(hx.generators, hy.relations.cols)],
                            [IntMatrix.zeros(hy.generators, hx.relations.cols), hy.relations],
                        ]
                    )
                )
                assert hs.normal_form() == merged.normal_form()


class TestInducedMap:
    def test_identity(self):
        x = make_complex({-1: 1, 0: 1}, {-1: mat([[2]])})
        m = induced_homology_map(ChainMap.identity(x), 0)
        assert m.is_iso()

    def test_zero_map(self):
        x = sphere(0)
        m = induced_homology_map(ChainMap.zero(x, x), 0)
        assert m.is_zero() and not m.is_iso()

    def test_into_acyclic(self):
        x = sphere(0)
        c = complex_c()
        f = ChainMap(x, c, {0: mat([[1]])})
        m = induced_homology_map(f, 0)
        assert m.target.is_trivial()
        assert m.is_zero()


class TestAcyclic:
    def test_disk(self):
        assert is_acyclic(disk(2))

    def test_sphere(self):
        assert not is_acyclic(sphere(1))

    def test_torsion_not_acyclic(self):
        x = make_complex({-1: 1, 0: 1}, {-1: mat([[2]])})
        assert not is_acyclic(x)


class TestFindHomotopy:
    def test_equal_maps(self):
        x = sphere(0)
        f = ChainMap.identity(x)
        h = find_homotopy(f, f)
        assert h is not None and not h.maps

    def test_id_vs_zero_on_sphere(self):
        x = sphere(0)
        assert find_homotopy(ChainMap.identity(x), ChainMap.zero(x, x)) is None

    def test_id_vs_zero_on_disk(self):
        x = disk(1)
        h = find_homotopy(ChainMap.identity(x), ChainMap.zero(x, x))
        assert h is not None
        h.verify()

    def test_found_homotopies_verify(self):
        rng = random.Random(12)
        found = 0
        for _ in range(40):
            x = random_complex(rng)
            y = random_complex(rng)
            f = random_chain_map(rng, x, y)
            pert = null_homotopic_perturbation(rng, x, y)
            h = find_homotopy(f + pert, f)
            assert h is not None  # difference is null-homotopic by birth
            h.verify()
            found += 1
        assert found == 40

    def test_relation_is_equivalence(self):
        # reflexive, symmetric, transitive via witness arithmetic
        rng = random.Random(13)
        x = random_complex(rng)
        y = random_complex(rng)
        f = random_chain_map(rng, x, y)
        g = f + null_homotopic_perturbation(rng, x, y)
        k = g + null_homotopic_perturbation(rng, x, y)
        assert find_homotopy(f, f) is not None
        assert find_homotopy(f, g) is not None
        assert find_homotopy(g, f) is not None
        assert find_homotopy(f, k) is not None


class TestContractible:
    def test_zero(self):
        assert is_contractible(zero_complex())

    def test_c(self):
        assert is_contractible(complex_c())

    def test_sphere(self):
        assert not is_contractible(sphere(0))

    def test_cx_always_contractible(self):
        rng = random.Random(14)
        for _ in range(30):
            x = random_complex(rng)
            assert is_contractible(tensor(complex_c(), x))

    def test_acyclic_iff_contractible(self):
        rng = random.Random(15)
        for _ in range(40):
            x = random_complex(rng)
            assert is_acyclic(x) == is_contractible(x)


class TestQuasiIso:
    def test_identity_both_modes(self):
        x = make_complex({-1: 1, 0: 1}, {-1: mat([[2]])})
        f = ChainMap.identity(x)
        assert is_quasi_iso(f, "homological")
        assert is_quasi_iso(f, "cone")

    def test_zero_to_disk(self):
        d = disk(2)
        f = ChainMap.zero(zero_complex(), d)
        assert is_quasi_iso(f, "homological")
        assert is_quasi_iso(f, "cone")

    def test_multiplication_by_two(self):
        x = sphere(0)
        f = ChainMap(x, x, {0: mat([[2]])})
        assert not is_quasi_iso(f, "homological")
        assert not is_quasi_iso(f, "cone")
        cone = mapping_cone_complex(f)
        assert homology_at(cone, 0).normal_form() == (0, (2,))

    def test_modes_agree(self):
        rng = random.Random(16)
        for _ in range(60):
            x = random_complex(rng)
            y = random_complex(rng)
            f = random_chain_map(rng, x, y)
            assert is_quasi_iso(f, "homological") == is_quasi_iso(f, "cone")

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            is_quasi_iso(ChainMap.identity(sphere(0)), "spectral")


class TestHomotopyEquivalence:
    def test_identity(self):
        assert is_homotopy_equivalence(ChainMap.identity(sphere(0)))

    def test_zero_into_c(self):
        f = ChainMap.zero(zero_complex(), complex_c())
        assert is_homotopy_equivalence(f)

    def test_multiplication_by_two(self):
        x = sphere(0)
        f = ChainMap(x, x, {0: mat([[2]])})
        assert not is_homotopy_equivalence(f)

    def test_recipe_maps_are_equivalences(self):
        rng = random.Random(17)
        for _ in range(30):
            x = random_complex(rng)
            f = random_homotopy_equivalence(rng, x)
            assert is_homotopy_equivalence(f)
            assert is_quasi_iso(f, "cone")

    def test_implies_quasi_iso(self):
        rng = random.Random(18)
        for _ in range(40):
            x = random_complex(rng)
            y = random_complex(rng)
            f = random_chain_map(rng, x, y)
            if is_homotopy_equivalence(f):
                assert is_quasi_iso(f, "cone")
