"""Cones, cylinders, the two factorizations, truncations, lifting probes,
and strict idempotent splitting.

The cone is built twice on every call: once as the explicit block matrix
[[d_y, f],[0, -d_x]] and once as the pushout of f along x >--> Cx.  The two
routes must agree up to a canonical chain isomorphism, which makes the sign
conventions self-auditing.
"""

from __future__ import annotations

from dataclasses import dataclass

from .zlinalg import IntMatrix, kernel_basis, smith_normal_form, solve_linear, solve_matrix
from .complexes import (
    ChainMap,
    Complex,
    Conflation,
    cone_inclusion,
    cone_object,
    cone_projection,
    direct_sum,
    is_chain_iso,
    mapping_cone_complex,
    pushout_along_inflation,
    pushout_universal_map,
    shift,
    split_epi_witness,
    split_mono_witness,
    sphere,
    tensor,
    zero_complex,
)

__all__ = [
    "ConeData",
    "FactorizationData",
    "LiftReport",
    "IdempotentSplitting",
    "cone",
    "cylinder",
    "cylinder_conflation",
    "path_factorize",
    "truncate",
    "check_frobenius_lifting",
    "split_idempotent",
]


@dataclass(frozen=True)
class ConeData:
    """The cone with its structural conflation and triangle maps."""

    cone: Complex
    conflation: Conflation          # y >--> Cone(f) -->> Tx
    map: ChainMap                   # f : x -> y
    to_cone: ChainMap               # y -> Cone(f)
    to_shift: ChainMap              # Cone(f) -> Tx


def cone(f: ChainMap, cross_check: bool = True) -> ConeData:
    """Mapping cone of f, with the pushout route compared against the
    explicit blocks when cross_check is set."""
    c = mapping_cone_complex(f)
    inc = cone_inclusion(f, c)
    proj = cone_projection(f, c)
    retr = {n: inc.component(n).transpose() for n in f.target.degrees()}
    conf = Conflation(inc, proj, retr, check=True)
    if cross_check:
        _check_cone_against_pushout(f, c, inc)
    return ConeData(cone=c, conflation=conf, map=f, to_cone=inc, to_shift=proj)


def _check_cone_against_pushout(f: ChainMap, c: Complex, inc: ChainMap) -> None:
    x = f.source
    cx, cx_conf = cone_object(x)
    po = pushout_along_inflation(cx_conf.i, f)
    # the explicit cone receives Cx by [[f, 0],[0, id]] blockwise
    comps = {}
    for n in cx.degrees():
        rn, rn1 = x.rank(n), x.rank(n + 1)
        comps[n] = IntMatrix.block(
            [
                [f.component(n), IntMatrix.zeros(f.target.rank(n), rn1)],
                [IntMatrix.zeros(rn1, rn), IntMatrix.identity(rn1)],
            ]
        )
    from_cx = ChainMap(cx, c, comps, check=True)
    cmp_map = pushout_universal_map(po, from_cx, inc)
    if not is_chain_iso(cmp_map):
        raise AssertionError("cone: pushout route disagrees with the block construction")


@dataclass(frozen=True)
class FactorizationData:
    """A factorization f = second o first through a middle object."""

    middle: Complex
    first: ChainMap
    second: ChainMap
    direction: str  # "cylinder" or "path"


def cylinder(f: ChainMap) -> tuple[Complex, FactorizationData]:
    """Cyl(f) = y + Cx with the inflation alpha = (f, incl) and the
    projection beta onto y; beta o alpha = f on the nose."""
    x, y = f.source, f.target
    cx, _ = cone_object(x)
    s = direct_sum(y, cx)
    cyl = s.total
    alpha_comps = {}
    for n in x.degrees():
        rn, rn1 = x.rank(n), x.rank(n + 1)
        alpha_comps[n] = IntMatrix.block(
            [
                [f.component(n)],
                [IntMatrix.identity(rn)],
                [IntMatrix.zeros(rn1, rn)],
            ]
        )
    alpha = ChainMap(x, cyl, alpha_comps, check=True)
    beta = s.project_left
    return cyl, FactorizationData(middle=cyl, first=alpha, second=beta, direction="cylinder")


def cylinder_conflation(f: ChainMap) -> Conflation:
    """The conflation x >--> Cyl(f) -->> Cone(f)."""
    x, y = f.source, f.target
    cyl, fact = cylinder(f)
    cone_cx = mapping_cone_complex(f)
    comps = {}
    for n in cone_cx.degrees():
        ry, rn, rn1 = y.rank(n), x.rank(n), x.rank(n + 1)
        comps[n] = IntMatrix.block(
            [
                [IntMatrix.identity(ry), -f.component(n), IntMatrix.zeros(ry, rn1)],
                [IntMatrix.zeros(rn1, ry), IntMatrix.zeros(rn1, rn), -IntMatrix.identity(rn1)],
            ]
        )
    p = ChainMap(cyl, cone_cx, comps, check=True)
    return Conflation.build(fact.first, p)


def path_factorize(f: ChainMap) -> FactorizationData:
    """f = delta o gamma with gamma a homotopy equivalence into
    M(f) = x + (P (x) y) and delta a degreewise split epimorphism; P is the
    two-term complex with identity differential in degrees 0 and 1."""
    x, y = f.source, f.target
    p_complex = Complex({0: 1, 1: 1}, {0: IntMatrix.identity(1)}, check=False)
    py = tensor(p_complex, y)
    s = direct_sum(x, py)
    m = s.total
    gamma = s.include_left
    # blocks of m in degree n: [x^n, y^{n-1}, y^n]
    delta_comps = {}
    for n in y.degrees():
        rx = x.rank(n)
        rp = y.rank(n - 1)
        ry = y.rank(n)
        delta_comps[n] = IntMatrix.block(
            [[f.component(n), IntMatrix.zeros(ry, rp), IntMatrix.identity(ry)]]
        )
    delta = ChainMap(m, y, delta_comps, check=True)
    return FactorizationData(middle=m, first=gamma, second=delta, direction="path")


# ---------------------------------------------------------------------------
# Truncations
# ---------------------------------------------------------------------------


def truncate(x: Complex, k: int, kind: str) -> tuple[Complex, ChainMap]:
    """Brutal and homology-preserving truncations with comparison maps.

    brutal_ge: degrees >= k verbatim; comparison is the inclusion into x.
    brutal_lt: degrees < k verbatim; comparison is the quotient from x.
    smart_ge: image of d^{k-1} in degree k-1, then x verbatim; comparison is
      the quotient map x -> truncation.
    smart_lt: kernel of that quotient; comparison is the inclusion into x.
    """
    if kind == "brutal_ge":
        ranks = {n: r for n, r in ((n, x.rank(n)) for n in x.degrees()) if n >= k}
        diffs = {n: x.diff(n) for n in x.diff_degrees() if n >= k}
        t = Complex(ranks, diffs, check=False)
        comps = {n: IntMatrix.identity(x.rank(n)) for n in t.degrees()}
        return t, ChainMap(t, x, comps, check=True)
    if kind == "brutal_lt":
        ranks = {n: x.rank(n) for n in x.degrees() if n < k}
        diffs = {n: x.diff(n) for n in x.diff_degrees() if n + 1 < k}
        t = Complex(ranks, diffs, check=False)
        comps = {n: IntMatrix.identity(x.rank(n)) for n in t.degrees()}
        return t, ChainMap(x, t, comps, check=True)
    if kind == "smart_ge":
        if x.is_zero() or k <= x.support[0]:
            return x, ChainMap.identity(x)
        if k > x.support[1]:
            z = zero_complex()
            return z, ChainMap.zero(x, z)
        # basis of the image lattice of d^{k-1}, from its Smith form
        dk1 = x.diff(k - 1)
        b = _image_basis(dk1)
        r = b.cols
        ranks = {n: x.rank(n) for n in x.degrees() if n >= k}
        if r:
            ranks[k - 1] = r
        diffs = {n: x.diff(n) for n in x.diff_degrees() if n >= k}
        if r:
            diffs[k - 1] = b
        t = Complex(ranks, diffs, check=True)
        comps = {n: IntMatrix.identity(x.rank(n)) for n in x.degrees() if n >= k}
        if r and x.rank(k - 1):
            w = solve_matrix(b, dk1)
            assert w is not None
            comps[k - 1] = w
        return t, ChainMap(x, t, comps, check=True)
    if kind == "smart_lt":
        if x.is_zero() or k <= x.support[0]:
            z = zero_complex()
            return z, ChainMap.zero(z, x)
        if k > x.support[1]:
            return x, ChainMap.identity(x)
        dk1 = x.diff(k - 1)
        kb = kernel_basis(dk1)
        ranks = {n: x.rank(n) for n in x.degrees() if n < k - 1}
        if kb.cols:
            ranks[k - 1] = kb.cols
        diffs = {n: x.diff(n) for n in x.diff_degrees() if n + 1 < k - 1}
        if kb.cols and x.rank(k - 2):
            dprev = solve_matrix(kb, x.diff(k - 2))
            assert dprev is not None, "image of d^{k-2} lies in ker d^{k-1}"
            if not dprev.is_zero():
                diffs[k - 2] = dprev
        t = Complex(ranks, diffs, check=True)
        comps = {n: IntMatrix.identity(x.rank(n)) for n in x.degrees() if n < k - 1}
        if kb.cols:
            comps[k - 1] = kb
        return t, ChainMap(t, x, comps, check=True)
    raise ValueError(f"unknown truncation kind: {kind!r}")


def _image_basis(a: IntMatrix) -> IntMatrix:
    """Columns forming a basis of the image lattice of a, SNF-derived."""
    dec = smith_normal_form(a)
    if dec.rank == 0:
        return IntMatrix.zeros(a.rows, 0)
    uinv = solve_matrix(dec.u, IntMatrix.identity(a.rows))
    assert uinv is not None
    cols = uinv.submatrix(range(a.rows), range(dec.rank))
    factors = dec.invariant_factors()
    scaled_rows = []
    for i in range(a.rows):
        scaled_rows.append([cols[i, j] * factors[j] for j in range(dec.rank)])
    return IntMatrix.from_rows(scaled_rows, cols=dec.rank)


# ---------------------------------------------------------------------------
# Frobenius lifting probes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LiftReport:
    """Outcome of extension problems g o i = f against cone targets."""

    results: list[tuple[bool, ChainMap | None]]

    @property
    def all_found(self) -> bool:
        return all(ok for ok, _ in self.results)


def check_frobenius_lifting(
    i: ChainMap, probes: list[tuple[ChainMap, Complex]]
) -> LiftReport:
    """For each probe (f: x -> Cu, u), solve for g: y -> Cu with g o i = f.

    The unknown g is subject to the chain map constraints; everything is one
    exact integer linear system per probe.
    """
    if split_mono_witness(i) is None:
        raise ValueError("lifting: i is not a degreewise split mono")
    x, y = i.source, i.target
    from .complexes import complex_c

    results: list[tuple[bool, ChainMap | None]] = []
    for f, u in probes:
        cu = tensor(complex_c(), u)
        if f.source != x or f.target != cu:
            raise ValueError("probe shape mismatch: source must be dom(i), target C (x) u")
        g = _solve_extension(i, f)
        results.append((g is not None, g))
    return LiftReport(results=results)


def _solve_extension(i: ChainMap, f: ChainMap) -> ChainMap | None:
    """g with g o i = f and g a chain map, or None."""
    y = i.target
    t = f.target
    degs = sorted(set(y.degrees()) | set(t.degrees()))
    offsets = {}
    total = 0
    for n in degs:
        size = t.rank(n) * y.rank(n)
        if size:
            offsets[n] = total
            total += size
    rows: list[list[int]] = []
    rhs: list[int] = []
    # chain map constraints d_t g^n - g^{n+1} d_y^n = 0
    for n in degs:
        rt1 = t.rank(n + 1)
        ry = y.rank(n)
        if not (rt1 and ry):
            continue
        dt = t.diff(n)
        dy = y.diff(n)
        for a in range(rt1):
            for b in range(ry):
                row = [0] * total
                if n in offsets:
                    base = offsets[n]
                    for k in range(t.rank(n)):
                        e = dt[a, k]
                        if e:
                            row[base + k * ry + b] += e
                if n + 1 in offsets:
                    base = offsets[n + 1]
                    ry1 = y.rank(n + 1)
                    for l in range(ry1):
                        e = dy[l, b]
                        if e:
                            row[base + a * ry1 + l] -= e
                rows.append(row)
                rhs.append(0)
    # extension constraints g^n i^n = f^n
    x = i.source
    for n in degs:
        rt = t.rank(n)
        rx = x.rank(n)
        if not (rt and rx):
            continue
        i_n = i.component(n)
        f_n = f.component(n)
        ry = y.rank(n)
        for a in range(rt):
            for b in range(rx):
                row = [0] * total
                if n in offsets:
                    base = offsets[n]
                    for k in range(ry):
                        e = i_n[k, b]
                        if e:
                            row[base + a * ry + k] += e
                rows.append(row)
                rhs.append(f_n[a, b])
    if not rows:
        return ChainMap.zero(y, t)
    sol = solve_linear(IntMatrix.from_rows(rows, cols=total), rhs)
    if sol is None:
        return None
    comps = {}
    for n, base in offsets.items():
        r, c = t.rank(n), y.rank(n)
        comps[n] = IntMatrix(r, c, list(sol[base : base + r * c]))
    return ChainMap(y, t, comps, check=True)


# ---------------------------------------------------------------------------
# Strict idempotent splitting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IdempotentSplitting:
    image: Complex
    kernel: Complex
    iso: ChainMap       # x -> image + kernel, degreewise unimodular
    image_part: ChainMap  # image -> x
    kernel_part: ChainMap  # kernel -> x


def split_idempotent(e: ChainMap) -> IdempotentSplitting:
    """Split a strict idempotent: x = im(e) + ker(e) with free summands and
    restricted differentials; the change of basis is a chain isomorphism."""
    if e.source != e.target:
        raise ValueError("idempotent: source and target must coincide")
    if e @ e != e:
        raise ValueError("idempotent: e o e != e")
    x = e.source
    im_basis: dict[int, IntMatrix] = {}
    ker_basis: dict[int, IntMatrix] = {}
    for n in x.degrees():
        en = e.component(n)
        eye = IntMatrix.identity(x.rank(n))
        im_basis[n] = kernel_basis(eye - en)   # im(e) = ker(1 - e)
        ker_basis[n] = kernel_basis(en)
    im_ranks = {n: b.cols for n, b in im_basis.items() if b.cols}
    ker_ranks = {n: b.cols for n, b in ker_basis.items() if b.cols}
    im_diffs: dict[int, IntMatrix] = {}
    ker_diffs: dict[int, IntMatrix] = {}
    for n in x.diff_degrees():
        if im_ranks.get(n) and im_ranks.get(n + 1):
            d = solve_matrix(im_basis[n + 1], x.diff(n) @ im_basis[n])
            assert d is not None, "differential must preserve im(e)"
            if not d.is_zero():
                im_diffs[n] = d
        if ker_ranks.get(n) and ker_ranks.get(n + 1):
            d = solve_matrix(ker_basis[n + 1], x.diff(n) @ ker_basis[n])
            assert d is not None, "differential must preserve ker(e)"
            if not d.is_zero():
                ker_diffs[n] = d
    image = Complex(im_ranks, im_diffs, check=True)
    kern = Complex(ker_ranks, ker_diffs, check=True)
    s = direct_sum(image, kern)
    # x -> im + ker by solving [B_im | B_ker] @ v' = v; the concatenated
    # bases are unimodular because e is idempotent
    iso_comps = {}
    for n in x.degrees():
        cat = im_basis[n].hstack(ker_basis[n])
        inv = solve_matrix(cat, IntMatrix.identity(x.rank(n)))
        assert inv is not None, "idempotent bases must span the lattice"
        iso_comps[n] = inv
    iso = ChainMap(x, s.total, iso_comps, check=True)
    image_part = ChainMap(image, x, {n: b for n, b in im_basis.items() if b.cols}, check=True)
    kernel_part = ChainMap(kern, x, {n: b for n, b in ker_basis.items() if b.cols}, check=True)
    return IdempotentSplitting(
        image=image, kernel=kern, iso=iso, image_part=image_part, kernel_part=kernel_part
    )
