"""Homology with torsion, chain homotopies, and equivalence deciders.

Homology groups are computed exactly as presented abelian groups, so torsion
is never lost.  Homotopy existence between two chain maps is decided by an
exact integer solve of the stacked linear system in the unknown degree -1
maps s^n.
"""

from __future__ import annotations

from dataclasses import dataclass

from .zlinalg import (
    AbGroupPresentation,
    IntMatrix,
    PresentedGroupMap,
    cokernel_presentation,
    kernel_basis,
    solve_linear,
    solve_matrix,
)
from .complexes import ChainMap, Complex, mapping_cone_complex

__all__ = [
    "Homotopy",
    "HomologyData",
    "homology",
    "homology_at",
    "induced_homology_map",
    "is_acyclic",
    "find_homotopy",
    "is_contractible",
    "is_quasi_iso",
    "is_homotopy_equivalence",
]


@dataclass(frozen=True)
class Homotopy:
    """Maps s^n : x^n -> y^{n-1} with f - g = d s + s d."""

    f: ChainMap
    g: ChainMap
    maps: dict[int, IntMatrix]

    def component(self, n: int) -> IntMatrix:
        m = self.maps.get(n)
        if m is None:
            return IntMatrix.zeros(self.g.target.rank(n - 1), self.f.source.rank(n))
        return m

    def verify(self) -> None:
        x, y = self.f.source, self.f.target
        for n in set(x.degrees()) | set(y.degrees()):
            lhs = self.f.component(n) - self.g.component(n)
            rhs = y.diff(n - 1) @ self.component(n) + self.component(n + 1) @ x.diff(n)
            if lhs != rhs:
                raise AssertionError(f"homotopy equation fails at degree {n}")


@dataclass(frozen=True)
class HomologyData:
    """Degreewise homology presentations; trivial outside the support."""

    groups: dict[int, AbGroupPresentation]

    def group(self, n: int) -> AbGroupPresentation:
        g = self.groups.get(n)
        if g is None:
            return cokernel_presentation(IntMatrix.zeros(0, 0))
        return g

    def is_trivial(self) -> bool:
        return all(g.is_trivial() for g in self.groups.values())

    def nonzero_degrees(self) -> list[int]:
        return [n for n, g in self.groups.items() if not g.is_trivial()]

    def __str__(self) -> str:
        parts = [f"H^{n} = {g}" for n, g in sorted(self.groups.items()) if not g.is_trivial()]
        return "; ".join(parts) if parts else "0"


def _homology_at(x: Complex, n: int) -> tuple[IntMatrix, AbGroupPresentation]:
    """(kernel basis K of d^n, presentation of ker d^n / im d^{n-1}).

    The presentation's generators are the columns of K; its relations are
    the image of d^{n-1} written in K-coordinates.
    """
    key = ("H", n)
    cached = x._cache.get(key)
    if cached is not None:
        return cached
    k = kernel_basis(x.diff(n))
    prev = x.diff(n - 1)
    if prev.cols and k.cols:
        rel = solve_matrix(k, prev)
        assert rel is not None, "image of d^{n-1} must lie in ker d^n"
    else:
        rel = IntMatrix.zeros(k.cols, prev.cols)
    pres = cokernel_presentation(rel)
    out = (k, pres)
    x._cache[key] = out
    return out


def homology_at(x: Complex, n: int) -> AbGroupPresentation:
    return _homology_at(x, n)[1]


def homology(x: Complex) -> HomologyData:
    """All homology groups, as exact presentations in SNF-adapted form."""
    if x.is_zero():
        return HomologyData(groups={})
    lo, hi = x.support
    return HomologyData(groups={n: homology_at(x, n) for n in range(lo, hi + 1)})


def induced_homology_map(f: ChainMap, n: int) -> PresentedGroupMap:
    """The induced map H^n(x) -> H^n(y) in the chosen presentations."""
    kx, px = _homology_at(f.source, n)
    ky, py = _homology_at(f.target, n)
    if kx.cols and ky.cols:
        m = solve_matrix(ky, f.component(n) @ kx)
        assert m is not None, "chain maps send kernels into kernels"
    else:
        m = IntMatrix.zeros(ky.cols, kx.cols)
    return PresentedGroupMap(matrix=m, source=px, target=py)


def is_acyclic(x: Complex) -> bool:
    """True iff every homology group vanishes (free part and torsion)."""
    if x.is_zero():
        return True
    lo, hi = x.support
    return all(homology_at(x, n).is_trivial() for n in range(lo, hi + 1))


def find_homotopy(f: ChainMap, g: ChainMap) -> Homotopy | None:
    """A chain homotopy s with f - g = d_y s + s d_x, or None.

    Decided exactly: the components s^n are stacked into one integer linear
    system, ordered by degree so elimination stays within the band, and
    handed to the exact solver.
    """
    if f.source != g.source or f.target != g.target:
        raise ValueError("find_homotopy: maps must be parallel")
    x, y = f.source, f.target
    degs = sorted(set(x.degrees()) | set(y.degrees()))
    if not degs:
        return Homotopy(f=f, g=g, maps={})
    # unknown blocks s^n : x^n -> y^{n-1}
    offsets: dict[int, int] = {}
    total = 0
    for n in range(degs[0], degs[-1] + 2):
        size = y.rank(n - 1) * x.rank(n)
        if size:
            offsets[n] = total
            total += size
    rows: list[list[int]] = []
    rhs: list[int] = []
    diff = f - g
    for n in degs:
        ry = y.rank(n)
        rx = x.rank(n)
        if not (ry and rx):
            if not diff.component(n).is_zero():
                return None
            continue
        dn = diff.component(n)
        dy_prev = y.diff(n - 1)
        dx_n = x.diff(n)
        for i in range(ry):
            for j in range(rx):
                row = [0] * total
                # (d_y^{n-1} s^n)_{ij}
                if n in offsets:
                    base = offsets[n]
                    for k in range(y.rank(n - 1)):
                        e = dy_prev[i, k]
                        if e:
                            row[base + k * rx + j] += e
                # (s^{n+1} d_x^n)_{ij}
                if n + 1 in offsets:
                    base = offsets[n + 1]
                    rx1 = x.rank(n + 1)
                    for l in range(rx1):
                        e = dx_n[l, j]
                        if e:
                            row[base + i * rx1 + l] += e
                rows.append(row)
                rhs.append(dn[i, j])
    if not rows:
        return Homotopy(f=f, g=g, maps={})
    sol = solve_linear(IntMatrix.from_rows(rows, cols=total), rhs)
    if sol is None:
        return None
    maps = {}
    for n, base in offsets.items():
        r, c = y.rank(n - 1), x.rank(n)
        m = IntMatrix(r, c, list(sol[base : base + r * c]))
        if not m.is_zero():
            maps[n] = m
    return Homotopy(f=f, g=g, maps=maps)


def is_contractible(x: Complex) -> bool:
    """True iff the identity is chain homotopic to zero."""
    cached = x._cache.get("contractible")
    if cached is None:
        cached = find_homotopy(ChainMap.identity(x), ChainMap.zero(x, x)) is not None
        x._cache["contractible"] = cached
    return cached


def is_quasi_iso(f: ChainMap, mode: str = "homological") -> bool:
    """Quasi-isomorphism decider, in two independent flavours.

    mode="homological": every induced homology map is an isomorphism.
    mode="cone": the mapping cone is acyclic.
    The two must agree on every chain map.
    """
    if mode == "homological":
        x, y = f.source, f.target
        degs = set()
        for c in (x, y):
            if not c.is_zero():
                lo, hi = c.support
                degs.update(range(lo, hi + 1))
        for n in sorted(degs):
            m = induced_homology_map(f, n)
            if m.source.normal_form() != m.target.normal_form():
                return False
            if not m.source.is_trivial() and not m.is_iso():
                return False
        return True
    if mode == "cone":
        return is_acyclic(mapping_cone_complex(f))
    raise ValueError(f"unknown mode: {mode!r}")


def is_homotopy_equivalence(f: ChainMap) -> bool:
    """Decided through contractibility of the mapping cone: one exact
    integer linear system instead of a bilinear inverse search."""
    return is_contractible(mapping_cone_complex(f))
