"""Bounded cochain complexes of finitely generated free Z-modules.

Differentials raise degree by one and act on column vectors, so d^n has
shape rank(n+1) x rank(n) and composition reads right to left as matrix
multiplication.  The exact structure throughout is the degreewise split one:
inflations are degreewise split monomorphisms, deflations degreewise split
epimorphisms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping

from .zlinalg import (
    ColumnEchelon,
    IntMatrix,
    is_unimodular,
    kernel_basis,
    smith_normal_form,
    solve_matrix,
)

__all__ = [
    "Complex",
    "ChainMap",
    "Conflation",
    "DirectSumData",
    "PushoutData",
    "PullbackData",
    "make_complex",
    "standard_complex",
    "unit_complex",
    "complex_c",
    "complex_t",
    "sphere",
    "disk",
    "zero_complex",
    "unit_conflation",
    "tensor",
    "tensor_map",
    "shift",
    "shift_map",
    "cone_object",
    "mapping_cone_complex",
    "direct_sum",
    "split_mono_witness",
    "split_epi_witness",
    "pushout_along_inflation",
    "pushout_universal_map",
    "pullback_along_deflation",
    "pullback_universal_map",
    "is_chain_iso",
]


class Complex:
    """A bounded cochain complex of free Z-modules, given by ranks and
    differential matrices with d o d = 0.

    Instances are immutable; only nonzero differentials are stored.
    """

    __slots__ = ("_ranks", "_diffs", "_hash", "_cache")

    def __init__(self, ranks: Mapping[int, int], diffs: Mapping[int, IntMatrix], *, check: bool = True):
        clean_ranks = {n: int(r) for n, r in ranks.items() if r}
        for n, r in clean_ranks.items():
            if r < 0:
                raise ValueError(f"negative rank {r} at degree {n}")
        clean_diffs = {}
        for n, d in diffs.items():
            if not isinstance(d, IntMatrix):
                raise ValueError(f"differential at degree {n} is not an IntMatrix")
            expect = (clean_ranks.get(n + 1, 0), clean_ranks.get(n, 0))
            if (d.rows, d.cols) != expect:
                raise ValueError(
                    f"differential at degree {n} has shape {d.rows}x{d.cols}, "
                    f"expected {expect[0]}x{expect[1]}"
                )
            if not d.is_zero():
                clean_diffs[n] = d
        self._ranks = dict(sorted(clean_ranks.items()))
        self._diffs = dict(sorted(clean_diffs.items()))
        self._hash = None
        self._cache: dict = {}
        if check:
            self._check_squares_to_zero()

    def _check_squares_to_zero(self) -> None:
        for n in self._diffs:
            if n + 1 in self._diffs:
                prod = self._diffs[n + 1] @ self._diffs[n]
                if not prod.is_zero():
                    raise ValueError(
                        f"d o d != 0 at degree {n}: d^{n + 1} @ d^{n} = {prod!r}"
                    )

    # -- basic queries ------------------------------------------------------

    @property
    def support(self) -> tuple[int, int] | None:
        """Minimal interval [lo, hi] carrying nonzero ranks, or None if zero."""
        if not self._ranks:
            return None
        keys = self._ranks.keys()
        return (min(keys), max(keys))

    def degrees(self) -> Iterator[int]:
        return iter(self._ranks)

    def diff_degrees(self) -> Iterator[int]:
        return iter(self._diffs)

    def rank(self, n: int) -> int:
        return self._ranks.get(n, 0)

    def total_rank(self) -> int:
        return sum(self._ranks.values())

    def diff(self, n: int) -> IntMatrix:
        d = self._diffs.get(n)
        if d is None:
            return IntMatrix.zeros(self.rank(n + 1), self.rank(n))
        return d

    def is_zero(self) -> bool:
        return not self._ranks

    def max_entry(self) -> int:
        return max((d.max_abs() for d in self._diffs.values()), default=0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Complex):
            return NotImplemented
        return self._ranks == other._ranks and self._diffs == other._diffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(
                (tuple(self._ranks.items()), tuple(self._diffs.items()))
            )
        return self._hash

    def __repr__(self) -> str:
        if self.is_zero():
            return "Complex(0)"
        lo, hi = self.support
        ranks = ", ".join(f"{n}:{self.rank(n)}" for n in range(lo, hi + 1))
        return f"Complex({ranks})"


def make_complex(ranks: Mapping[int, int], diffs: Mapping[int, IntMatrix]) -> Complex:
    """Validated constructor; rejects shape mismatches and d o d != 0."""
    return Complex(ranks, diffs, check=True)


def zero_complex() -> Complex:
    return Complex({}, {})


def sphere(n: int) -> Complex:
    """Z in degree n, zero elsewhere."""
    return Complex({n: 1}, {})


def disk(n: int) -> Complex:
    """Z in degrees n-1 and n with identity differential; contractible."""
    return Complex({n - 1: 1, n: 1}, {n - 1: IntMatrix.identity(1)})


def unit_complex() -> Complex:
    """The tensor unit: Z in degree 0."""
    return sphere(0)


def complex_c() -> Complex:
    """Z in degrees -1 and 0, differential the identity."""
    return disk(0)


def complex_t() -> Complex:
    """Z in degree -1: tensoring with this is the shift."""
    return sphere(-1)


def standard_complex(kind: str, n: int = 0) -> Complex:
    """Named building blocks: unit, C, T, sphere(n), disk(n)."""
    if kind == "unit":
        return unit_complex()
    if kind == "C":
        return complex_c()
    if kind == "T":
        return complex_t()
    if kind == "sphere":
        return sphere(n)
    if kind == "disk":
        return disk(n)
    raise ValueError(f"unknown standard complex kind: {kind!r}")


class ChainMap:
    """A degreewise matrix map f: x -> y commuting with the differentials."""

    __slots__ = ("source", "target", "_components", "_hash")

    def __init__(self, source: Complex, target: Complex, components: Mapping[int, IntMatrix], *, check: bool = True):
        clean = {}
        for n, m in components.items():
            expect = (target.rank(n), source.rank(n))
            if (m.rows, m.cols) != expect:
                raise ValueError(
                    f"component at degree {n} has shape {m.rows}x{m.cols}, "
                    f"expected {expect[0]}x{expect[1]}"
                )
            if not m.is_zero():
                clean[n] = m
        self.source = source
        self.target = target
        self._components = dict(sorted(clean.items()))
        self._hash = None
        if check:
            self._check_commutes()

    def _check_commutes(self) -> None:
        degs = set(self._components)
        degs.update(self.source.diff_degrees())
        degs.update(self.target.diff_degrees())
        for n in degs:
            lhs = self.target.diff(n) @ self.component(n)
            rhs = self.component(n + 1) @ self.source.diff(n)
            if lhs != rhs:
                raise ValueError(f"chain map does not commute with d at degree {n}")

    def component(self, n: int) -> IntMatrix:
        m = self._components.get(n)
        if m is None:
            return IntMatrix.zeros(self.target.rank(n), self.source.rank(n))
        return m

    def components(self) -> dict[int, IntMatrix]:
        return dict(self._components)

    def degrees(self) -> Iterator[int]:
        return iter(self._components)

    def is_zero(self) -> bool:
        return not self._components

    @classmethod
    def identity(cls, x: Complex) -> "ChainMap":
        comps = {n: IntMatrix.identity(x.rank(n)) for n in x.degrees()}
        return cls(x, x, comps, check=False)

    @classmethod
    def zero(cls, source: Complex, target: Complex) -> "ChainMap":
        return cls(source, target, {}, check=False)

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        """Composition self o other."""
        if other.target is not self.source and other.target != self.source:
            raise ValueError("composition: inner objects differ")
        comps = {}
        for n in other.degrees():
            comps[n] = self.component(n) @ other.component(n)
        return ChainMap(other.source, self.target, comps, check=False)

    def __add__(self, other: "ChainMap") -> "ChainMap":
        self._check_parallel(other)
        degs = set(self._components) | set(other._components)
        comps = {n: self.component(n) + other.component(n) for n in degs}
        return ChainMap(self.source, self.target, comps, check=False)

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        self._check_parallel(other)
        degs = set(self._components) | set(other._components)
        comps = {n: self.component(n) - other.component(n) for n in degs}
        return ChainMap(self.source, self.target, comps, check=False)

    def __neg__(self) -> "ChainMap":
        return ChainMap(
            self.source, self.target, {n: -m for n, m in self._components.items()}, check=False
        )

    def _check_parallel(self, other: "ChainMap") -> None:
        if self.source != other.source or self.target != other.target:
            raise ValueError("maps are not parallel")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ChainMap):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self._components == other._components
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(
                (self.source, self.target, tuple(self._components.items()))
            )
        return self._hash

    def __repr__(self) -> str:
        return f"ChainMap({self.source!r} -> {self.target!r})"


def is_chain_iso(f: ChainMap) -> bool:
    """Isomorphism test: degreewise square unimodular components."""
    degs = set(f.source.degrees()) | set(f.target.degrees())
    for n in degs:
        m = f.component(n)
        if m.rows != m.cols or (m.rows and not is_unimodular(m)):
            return False
    return True


# ---------------------------------------------------------------------------
# Conflations: degreewise split short exact sequences x >--> y -->> z
# ---------------------------------------------------------------------------


class Conflation:
    """An inflation/deflation pair with degreewise splitting witnesses."""

    __slots__ = ("i", "p", "retractions")

    def __init__(self, i: ChainMap, p: ChainMap, retractions: Mapping[int, IntMatrix], *, check: bool = True):
        self.i = i
        self.p = p
        self.retractions = dict(retractions)
        if check:
            self.validate()

    @property
    def sub(self) -> Complex:
        return self.i.source

    @property
    def total(self) -> Complex:
        return self.i.target

    @property
    def quotient(self) -> Complex:
        return self.p.target

    @classmethod
    def build(cls, i: ChainMap, p: ChainMap) -> "Conflation":
        """Construct with computed retractions; validates."""
        r = split_mono_witness(i)
        if r is None:
            raise ValueError("inflation is not a degreewise split monomorphism")
        return cls(i, p, r, check=True)

    def validate(self) -> None:
        if self.i.target != self.p.source:
            raise ValueError("conflation: middle objects differ")
        x, y, z = self.sub, self.total, self.quotient
        if not (self.p @ self.i).is_zero():
            raise ValueError("conflation: p o i != 0")
        degs = set(x.degrees()) | set(y.degrees()) | set(z.degrees())
        for n in degs:
            i_n = self.i.component(n)
            p_n = self.p.component(n)
            r_n = self.retractions.get(n, IntMatrix.zeros(x.rank(n), y.rank(n)))
            if r_n @ i_n != IntMatrix.identity(x.rank(n)):
                raise ValueError(f"conflation: retraction fails at degree {n}")
            if x.rank(n) + z.rank(n) != y.rank(n):
                raise ValueError(f"conflation: ranks not additive at degree {n}")
            # split epi: p has a degreewise section
            if solve_matrix(p_n, IntMatrix.identity(z.rank(n))) is None:
                raise ValueError(f"conflation: deflation not split epi at degree {n}")
            # exactness: ker(p) = im(i) as lattices
            k = kernel_basis(p_n)
            if solve_matrix(i_n, k) is None or solve_matrix(k, i_n) is None:
                raise ValueError(f"conflation: im(i) != ker(p) at degree {n}")


def split_mono_witness(f: ChainMap) -> dict[int, IntMatrix] | None:
    """Degreewise retractions r with r o f = id, or None.

    Exists iff every component is a split monomorphism over Z; the witness
    need not be a chain map.
    """
    out = {}
    for n in set(f.source.degrees()) | set(f.target.degrees()):
        fn = f.component(n)
        rt = solve_matrix(fn.transpose(), IntMatrix.identity(fn.cols))
        if rt is None:
            return None
        out[n] = rt.transpose()
    return out


def split_epi_witness(f: ChainMap) -> dict[int, IntMatrix] | None:
    """Degreewise sections s with f o s = id, or None."""
    out = {}
    for n in set(f.source.degrees()) | set(f.target.degrees()):
        fn = f.component(n)
        s = solve_matrix(fn, IntMatrix.identity(fn.rows))
        if s is None:
            return None
        out[n] = s
    return out


# ---------------------------------------------------------------------------
# Tensor product with the Koszul sign, shift, cones
# ---------------------------------------------------------------------------


def _tensor_blocks(a: Complex, b: Complex, n: int) -> list[tuple[int, int, int, int]]:
    """Summands (i, j, rank_a(i), rank_b(j)) of degree n = i + j, ordered by
    decreasing first-factor degree i.  This ordering makes C (x) x literally
    the cone-shaped block matrix and T (x) x literally the shift."""
    if a.is_zero() or b.is_zero():
        return []
    alo, ahi = a.support
    out = []
    for i in range(ahi, alo - 1, -1):
        ra = a.rank(i)
        rb = b.rank(n - i)
        if ra and rb:
            out.append((i, n - i, ra, rb))
    return out


def tensor(a: Complex, b: Complex) -> Complex:
    """Tensor product of complexes.

    Degree n is the direct sum of a^i (x) b^j over i + j = n; the
    differential acts by d_a (x) id + (-1)^i id (x) d_b on the (i, j)
    summand.
    """
    if a.is_zero() or b.is_zero():
        return zero_complex()
    ranks: dict[int, int] = {}
    blocks: dict[int, list[tuple[int, int, int, int]]] = {}
    alo, ahi = a.support
    blo, bhi = b.support
    for n in range(alo + blo, ahi + bhi + 1):
        bl = _tensor_blocks(a, b, n)
        blocks[n] = bl
        r = sum(ra * rb for (_, _, ra, rb) in bl)
        if r:
            ranks[n] = r
    diffs: dict[int, IntMatrix] = {}
    for n in list(ranks):
        if not ranks.get(n + 1):
            continue
        src = blocks[n]
        tgt = blocks[n + 1]
        tgt_offset = {}
        off = 0
        for (i, j, ra, rb) in tgt:
            tgt_offset[(i, j)] = off
            off += ra * rb
        rows = ranks[n + 1]
        cols = ranks[n]
        entries = [0] * (rows * cols)
        coff = 0
        for (i, j, ra, rb) in src:
            # d_a^i (x) id_{b^j} into summand (i+1, j)
            if (i + 1, j) in tgt_offset:
                da = a.diff(i)
                roff = tgt_offset[(i + 1, j)]
                for u2 in range(da.rows):
                    for u in range(da.cols):
                        e = da[u2, u]
                        if e:
                            for v in range(rb):
                                r_idx = roff + u2 * rb + v
                                c_idx = coff + u * rb + v
                                entries[r_idx * cols + c_idx] = e
            # (-1)^i id_{a^i} (x) d_b^j into summand (i, j+1)
            if (i, j + 1) in tgt_offset:
                db = b.diff(j)
                sign = -1 if i % 2 else 1
                roff = tgt_offset[(i, j + 1)]
                rb2 = db.rows
                for v2 in range(rb2):
                    for v in range(db.cols):
                        e = db[v2, v]
                        if e:
                            se = sign * e
                            for u in range(ra):
                                r_idx = roff + u * rb2 + v2
                                c_idx = coff + u * rb + v
                                entries[r_idx * cols + c_idx] = se
            coff += ra * rb
        diffs[n] = IntMatrix(rows, cols, entries)
    return Complex(ranks, diffs, check=True)


def tensor_map(f: ChainMap, g: ChainMap) -> ChainMap:
    """f (x) g on the tensor complexes, blockwise f^i (x) g^j."""
    src = tensor(f.source, g.source)
    tgt = tensor(f.target, g.target)
    comps: dict[int, IntMatrix] = {}
    for n in src.degrees():
        if not tgt.rank(n):
            continue
        sblocks = _tensor_blocks(f.source, g.source, n)
        tblocks = _tensor_blocks(f.target, g.target, n)
        tgt_offset = {}
        off = 0
        for (i, j, ra, rb) in tblocks:
            tgt_offset[(i, j)] = off
            off += ra * rb
        rows = tgt.rank(n)
        cols = src.rank(n)
        entries = [0] * (rows * cols)
        coff = 0
        for (i, j, ra, rb) in sblocks:
            if (i, j) in tgt_offset:
                fi = f.component(i)
                gj = g.component(j)
                roff = tgt_offset[(i, j)]
                for u2 in range(fi.rows):
                    for u in range(fi.cols):
                        e = fi[u2, u]
                        if e:
                            for v2 in range(gj.rows):
                                for v in range(gj.cols):
                                    e2 = gj[v2, v]
                                    if e2:
                                        r_idx = roff + u2 * gj.rows + v2
                                        c_idx = coff + u * gj.cols + v
                                        entries[r_idx * cols + c_idx] = e * e2
            coff += ra * rb
        m = IntMatrix(rows, cols, entries)
        if not m.is_zero():
            comps[n] = m
    return ChainMap(src, tgt, comps, check=True)


def shift(x: Complex) -> Complex:
    """The translation Tx: rank(n) = rank_x(n+1), d^n = -d_x^{n+1}."""
    ranks = {n - 1: x.rank(n) for n in x.degrees()}
    diffs = {n - 1: -x.diff(n) for n in x.diff_degrees()}
    return Complex(ranks, diffs, check=False)


def shift_map(f: ChainMap) -> ChainMap:
    """T applied to a chain map: components reindex with no sign."""
    comps = {n - 1: m for n, m in f.components().items()}
    return ChainMap(shift(f.source), shift(f.target), comps, check=False)


def mapping_cone_complex(f: ChainMap) -> Complex:
    """Cone(f)^n = y^n + x^{n+1} with differential [[d_y, f],[0, -d_x]]."""
    x, y = f.source, f.target
    ranks = {}
    degs = set(y.degrees()) | {n - 1 for n in x.degrees()}
    for n in degs:
        r = y.rank(n) + x.rank(n + 1)
        if r:
            ranks[n] = r
    diffs = {}
    for n in ranks:
        if not (y.rank(n + 1) + x.rank(n + 2)):
            continue
        d = IntMatrix.block(
            [
                [y.diff(n), f.component(n + 1)],
                [
                    IntMatrix.zeros(x.rank(n + 2), y.rank(n)),
                    -x.diff(n + 1),
                ],
            ]
        )
        diffs[n] = d
    return Complex(ranks, diffs, check=False)


def cone_inclusion(f: ChainMap, cone: Complex | None = None) -> ChainMap:
    """The inflation y >--> Cone(f)."""
    c = cone if cone is not None else mapping_cone_complex(f)
    y = f.target
    comps = {}
    for n in y.degrees():
        comps[n] = IntMatrix.block(
            [[IntMatrix.identity(y.rank(n))], [IntMatrix.zeros(f.source.rank(n + 1), y.rank(n))]]
        )
    return ChainMap(y, c, comps, check=False)


def cone_projection(f: ChainMap, cone: Complex | None = None) -> ChainMap:
    """The deflation Cone(f) -->> Tx."""
    c = cone if cone is not None else mapping_cone_complex(f)
    x, y = f.source, f.target
    tx = shift(x)
    comps = {}
    for n in tx.degrees():
        comps[n] = IntMatrix.block(
            [[IntMatrix.zeros(x.rank(n + 1), y.rank(n)), IntMatrix.identity(x.rank(n + 1))]]
        )
    return ChainMap(c, tx, comps, check=False)


def cone_object(x: Complex) -> tuple[Complex, Conflation]:
    """Cx = C (x) x together with the conflation x >--> Cx -->> Tx.

    Blockwise Cx^n = x^n + x^{n+1} with differential [[d, id],[0, -d]].
    """
    cx = tensor(complex_c(), x)
    comps_i = {}
    for n in x.degrees():
        comps_i[n] = IntMatrix.block(
            [[IntMatrix.identity(x.rank(n))], [IntMatrix.zeros(x.rank(n + 1), x.rank(n))]]
        )
    i = ChainMap(x, cx, comps_i, check=True)
    tx = shift(x)
    comps_p = {}
    for n in tx.degrees():
        comps_p[n] = IntMatrix.block(
            [[IntMatrix.zeros(x.rank(n + 1), x.rank(n)), IntMatrix.identity(x.rank(n + 1))]]
        )
    p = ChainMap(cx, tx, comps_p, check=True)
    retr = {n: m.transpose() for n, m in comps_i.items()}
    return cx, Conflation(i, p, retr, check=True)


# ---------------------------------------------------------------------------
# Direct sums, pushouts, pullbacks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DirectSumData:
    total: Complex
    include_left: ChainMap
    include_right: ChainMap
    project_left: ChainMap
    project_right: ChainMap


def direct_sum(x: Complex, y: Complex) -> DirectSumData:
    """Degreewise block-diagonal sum with its injections and projections."""
    ranks = {}
    for n in set(x.degrees()) | set(y.degrees()):
        ranks[n] = x.rank(n) + y.rank(n)
    diffs = {}
    for n in set(x.diff_degrees()) | set(y.diff_degrees()):
        diffs[n] = IntMatrix.block(
            [
                [x.diff(n), IntMatrix.zeros(x.rank(n + 1), y.rank(n))],
                [IntMatrix.zeros(y.rank(n + 1), x.rank(n)), y.diff(n)],
            ]
        )
    total = Complex(ranks, diffs, check=False)
    inc_l = {}
    inc_r = {}
    pr_l = {}
    pr_r = {}
    for n in total.degrees():
        rx, ry = x.rank(n), y.rank(n)
        inc_l[n] = IntMatrix.block([[IntMatrix.identity(rx)], [IntMatrix.zeros(ry, rx)]])
        inc_r[n] = IntMatrix.block([[IntMatrix.zeros(rx, ry)], [IntMatrix.identity(ry)]])
        pr_l[n] = inc_l[n].transpose()
        pr_r[n] = inc_r[n].transpose()
    return DirectSumData(
        total=total,
        include_left=ChainMap(x, total, inc_l, check=False),
        include_right=ChainMap(y, total, inc_r, check=False),
        project_left=ChainMap(total, x, pr_l, check=False),
        project_right=ChainMap(total, y, pr_r, check=False),
    )


def direct_sum_map(f: ChainMap, g: ChainMap) -> tuple[ChainMap, DirectSumData, DirectSumData]:
    """f + g as a block-diagonal map between the direct sums."""
    src = direct_sum(f.source, g.source)
    tgt = direct_sum(f.target, g.target)
    comps = {}
    for n in src.total.degrees():
        comps[n] = IntMatrix.block(
            [
                [f.component(n), IntMatrix.zeros(f.target.rank(n), g.source.rank(n))],
                [IntMatrix.zeros(g.target.rank(n), f.source.rank(n)), g.component(n)],
            ]
        )
    return ChainMap(src.total, tgt.total, comps, check=False), src, tgt


@dataclass(frozen=True)
class PushoutData:
    """w = y u_x z for a span y <--i-- x --f--> z with i an inflation."""

    complex: Complex
    from_inflation_target: ChainMap   # y -> w
    from_map_target: ChainMap         # z -> w, again an inflation
    inflation_witness: dict[int, IntMatrix]


def pushout_along_inflation(i: ChainMap, f: ChainMap) -> PushoutData:
    """Pushout of f along the inflation i; degreewise the cokernel of
    (i, -f): x -> y + z, which is free because i splits degreewise."""
    if i.source != f.source:
        raise ValueError("pushout: maps must share their source")
    if split_mono_witness(i) is None:
        raise ValueError("pushout: first leg is not a degreewise split mono")
    x, y, z = i.source, i.target, f.target
    q_comps: dict[int, IntMatrix] = {}
    s_comps: dict[int, IntMatrix] = {}
    ranks: dict[int, int] = {}
    degs = sorted(set(x.degrees()) | set(y.degrees()) | set(z.degrees()))
    for n in degs:
        stacked = i.component(n).vstack(-f.component(n))
        dec = smith_normal_form(stacked)
        if any(s != 1 for s in dec.invariant_factors()):
            raise ValueError("pushout: inflation does not split degreewise")
        m = stacked.rows
        r = dec.rank
        # quotient map q = last (m - r) rows of U; section s = matching
        # columns of U^{-1}, recovered by solving U s = inclusion
        u = dec.u
        q = u.submatrix(range(r, m), range(m))
        sec = solve_matrix(
            u,
            IntMatrix.block(
                [[IntMatrix.zeros(r, m - r)], [IntMatrix.identity(m - r)]]
            ),
        )
        assert sec is not None
        q_comps[n] = q
        s_comps[n] = sec
        if m - r:
            ranks[n] = m - r
    diffs: dict[int, IntMatrix] = {}
    for n in ranks:
        if not ranks.get(n + 1):
            continue
        dyz = IntMatrix.block(
            [
                [y.diff(n), IntMatrix.zeros(y.rank(n + 1), z.rank(n))],
                [IntMatrix.zeros(z.rank(n + 1), y.rank(n)), z.diff(n)],
            ]
        )
        diffs[n] = q_comps[n + 1] @ dyz @ s_comps[n]
    w = Complex(ranks, diffs, check=True)
    u_comps = {}
    v_comps = {}
    for n in degs:
        ry, rz = y.rank(n), z.rank(n)
        if not ranks.get(n, 0):
            continue
        q = q_comps[n]
        u_comps[n] = q.submatrix(range(q.rows), range(ry))
        v_comps[n] = q.submatrix(range(q.rows), range(ry, ry + rz))
    from_y = ChainMap(y, w, u_comps, check=True)
    from_z = ChainMap(z, w, v_comps, check=True)
    witness = split_mono_witness(from_z)
    if witness is None:
        raise AssertionError("pushout of an inflation failed to be an inflation")
    return PushoutData(
        complex=w,
        from_inflation_target=from_y,
        from_map_target=from_z,
        inflation_witness=witness,
    )


def pushout_universal_map(po: PushoutData, a: ChainMap, b: ChainMap) -> ChainMap:
    """The unique map w -> t with (w -> t) o (y -> w) = a and o (z -> w) = b.

    a: y -> t and b: z -> t must satisfy a o i = b o f for the span that
    built the pushout.  Solved degreewise; existence and uniqueness hold by
    the construction of w.
    """
    if a.target != b.target:
        raise ValueError("universal map: cones must share their target")
    w = po.complex
    t = a.target
    comps = {}
    for n in set(w.degrees()):
        # m @ [u | v] = [a | b]  degreewise, i.e. transpose and solve
        uv = po.from_inflation_target.component(n).hstack(po.from_map_target.component(n))
        ab = a.component(n).hstack(b.component(n))
        mt = solve_matrix(uv.transpose(), ab.transpose())
        if mt is None:
            raise ValueError("universal map: no degreewise solution (cone does not commute?)")
        comps[n] = mt.transpose()
    return ChainMap(w, t, comps, check=True)


@dataclass(frozen=True)
class PullbackData:
    """P = y x_x z for a cospan y --p-->> x <--f-- z with p a deflation."""

    complex: Complex
    to_deflation_source: ChainMap   # P -> y
    to_map_source: ChainMap         # P -> z, again a deflation
    deflation_witness: dict[int, IntMatrix]


def pullback_along_deflation(p: ChainMap, f: ChainMap) -> PullbackData:
    """Pullback of f along the deflation p; degreewise the kernel of
    (p, -f): y + z -> x, which is free as a kernel lattice."""
    if p.target != f.target:
        raise ValueError("pullback: maps must share their target")
    if split_epi_witness(p) is None:
        raise ValueError("pullback: first leg is not a degreewise split epi")
    x, y, z = p.target, p.source, f.source
    k_comps: dict[int, IntMatrix] = {}
    ranks: dict[int, int] = {}
    degs = sorted(set(x.degrees()) | set(y.degrees()) | set(z.degrees()))
    for n in degs:
        spread = p.component(n).hstack(-f.component(n))
        k = kernel_basis(spread)
        k_comps[n] = k
        if k.cols:
            ranks[n] = k.cols
    diffs: dict[int, IntMatrix] = {}
    for n in ranks:
        if not ranks.get(n + 1):
            continue
        dyz = IntMatrix.block(
            [
                [y.diff(n), IntMatrix.zeros(y.rank(n + 1), z.rank(n))],
                [IntMatrix.zeros(z.rank(n + 1), y.rank(n)), z.diff(n)],
            ]
        )
        d = solve_matrix(k_comps[n + 1], dyz @ k_comps[n])
        assert d is not None, "kernel is not d-stable"
        diffs[n] = d
    pb = Complex(ranks, diffs, check=True)
    to_y = {}
    to_z = {}
    for n in pb.degrees():
        k = k_comps[n]
        to_y[n] = k.submatrix(range(y.rank(n)), range(k.cols))
        to_z[n] = k.submatrix(range(y.rank(n), y.rank(n) + z.rank(n)), range(k.cols))
    proj_y = ChainMap(pb, y, to_y, check=True)
    proj_z = ChainMap(pb, z, to_z, check=True)
    witness = split_epi_witness(proj_z)
    if witness is None:
        raise AssertionError("pullback of a deflation failed to be a deflation")
    return PullbackData(
        complex=pb,
        to_deflation_source=proj_y,
        to_map_source=proj_z,
        deflation_witness=witness,
    )


def pullback_universal_map(pb: PullbackData, a: ChainMap, b: ChainMap) -> ChainMap:
    """The unique map t -> P with (P -> y) o it = a and (P -> z) o it = b."""
    if a.source != b.source:
        raise ValueError("universal map: cones must share their source")
    t = a.source
    comps = {}
    for n in set(pb.complex.degrees()) | set(t.degrees()):
        stacked = pb.to_deflation_source.component(n).vstack(pb.to_map_source.component(n))
        ab = a.component(n).vstack(b.component(n))
        m = solve_matrix(stacked, ab)
        if m is None:
            raise ValueError("universal map: no degreewise solution (cone does not commute?)")
        comps[n] = m
    return ChainMap(t, pb.complex, comps, check=True)


def unit_conflation() -> Conflation:
    """The conflation unit >--> C -->> T."""
    one = unit_complex()
    c = complex_c()
    t = complex_t()
    i = ChainMap(one, c, {0: IntMatrix.identity(1)}, check=True)
    p = ChainMap(c, t, {-1: IntMatrix.identity(1)}, check=True)
    return Conflation(i, p, {0: IntMatrix.identity(1)}, check=True)
