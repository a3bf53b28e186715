"""Seeded, index-addressable samplers for complexes and diagrams.

Every generator takes an explicit random.Random so that identical seeds give
bit-identical streams; instance k of a stream is derived from (seed, kind, k)
through sha256, which makes generation order-independent and every reported
counterexample reproducible from the pair (seed, index) alone.

Complexes are built with d o d = 0 by construction: combinations of spheres,
disks, shifts, direct sums and cones of previously generated maps, then a
random degreewise unimodular change of basis.  Chain maps are drawn from a
box inside the integer solution lattice of the commutation constraint
d_y f = f d_x, via a kernel basis.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from typing import Iterator

from .zlinalg import IntMatrix, kernel_basis
from .complexes import (
    ChainMap,
    Complex,
    Conflation,
    _tensor_blocks,
    direct_sum,
    disk,
    mapping_cone_complex,
    shift,
    sphere,
    tensor,
    zero_complex,
)

__all__ = [
    "SampleSpec",
    "derive_rng",
    "sample",
    "random_complex",
    "random_chain_map",
    "random_unimodular",
    "conjugate_complex",
    "random_contractible",
    "random_homotopy_equivalence",
    "random_conflation",
    "random_conflation_morphism",
    "random_retract",
    "random_idempotent",
    "null_homotopic_perturbation",
    "associator_map",
]


@dataclass(frozen=True)
class SampleSpec:
    """Deterministic sampling parameters.

    Identical specs yield bit-identical sample streams; size parameters are
    hard caps on support width, per-degree rank and entry magnitude.
    """

    seed: int
    count: int
    max_width: int = 3
    max_rank: int = 2
    max_entry: int = 2

    def __post_init__(self):
        if self.max_width < 1 or self.max_rank < 1 or self.max_entry < 1:
            raise ValueError("size parameters must be positive")
        if self.count < 0:
            raise ValueError("count must be nonnegative")


def derive_rng(seed: int, kind: str, index: int) -> random.Random:
    """A Random whose state depends only on (seed, kind, index)."""
    digest = hashlib.sha256(f"{seed}:{kind}:{index}".encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


# ---------------------------------------------------------------------------
# Unimodular changes of basis
# ---------------------------------------------------------------------------


def random_unimodular(rng: random.Random, n: int, ops: int | None = None) -> tuple[IntMatrix, IntMatrix]:
    """A random unimodular matrix and its exact inverse.

    Built from elementary operations with +-1 coefficients so entries stay
    small.
    """
    if n == 0:
        e = IntMatrix.identity(0)
        return e, e
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    uinv = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    count = ops if ops is not None else n + rng.randint(0, 2)
    for _ in range(count):
        kind = rng.randrange(3)
        if kind == 0 and n >= 2:
            i, j = rng.sample(range(n), 2)
            c = rng.choice((-1, 1))
            for k in range(n):
                u[i][k] += c * u[j][k]
            for k in range(n):
                uinv[k][j] -= c * uinv[k][i]
        elif kind == 1 and n >= 2:
            i, j = rng.sample(range(n), 2)
            u[i], u[j] = u[j], u[i]
            for k in range(n):
                uinv[k][i], uinv[k][j] = uinv[k][j], uinv[k][i]
        else:
            i = rng.randrange(n)
            u[i] = [-e for e in u[i]]
            for k in range(n):
                uinv[k][i] = -uinv[k][i]
    return IntMatrix.from_rows(u, cols=n), IntMatrix.from_rows(uinv, cols=n)


def conjugate_complex(
    rng: random.Random, x: Complex, max_entry: int = 4
) -> tuple[Complex, ChainMap]:
    """An isomorphic copy of x with scrambled bases, plus the iso x -> y.

    Retries with fewer elementary operations if entries exceed the cap, and
    falls back to the identity change of basis.
    """
    if x.is_zero():
        return x, ChainMap.identity(x)
    for attempt in (None, 2, 1, 0):
        state = rng.getstate()
        ps = {}
        pinvs = {}
        for n in x.degrees():
            p, pinv = random_unimodular(rng, x.rank(n), ops=attempt)
            ps[n] = p
            pinvs[n] = pinv
        diffs = {}
        ok = True
        for n in x.diff_degrees():
            p_next = ps.get(n + 1, IntMatrix.identity(x.rank(n + 1)))
            p_inv = pinvs.get(n, IntMatrix.identity(x.rank(n)))
            d = p_next @ x.diff(n) @ p_inv
            if d.max_abs() > max_entry:
                ok = False
                break
            diffs[n] = d
        if ok:
            y = Complex({n: x.rank(n) for n in x.degrees()}, diffs, check=False)
            iso = ChainMap(x, y, ps, check=False)
            return y, iso
        rng.setstate(state)
    return x, ChainMap.identity(x)


# ---------------------------------------------------------------------------
# Complexes and chain maps
# ---------------------------------------------------------------------------


def _primitive(rng: random.Random, lo: int, hi: int) -> Complex:
    n = rng.randint(lo, hi)
    if n > lo and rng.random() < 0.45:
        return disk(n)
    return sphere(n)


def _fits(x: Complex, lo: int, hi: int, max_rank: int) -> bool:
    if x.is_zero():
        return True
    xlo, xhi = x.support
    if xlo < lo or xhi > hi:
        return False
    return all(x.rank(n) <= max_rank for n in x.degrees())


def random_complex(
    rng: random.Random,
    max_width: int = 3,
    max_rank: int = 2,
    max_entry: int = 2,
    allow_zero: bool = False,
) -> Complex:
    """A random valid complex within the given size caps.

    Grows toward a randomly drawn total-rank budget so samples spread over
    the whole permitted size range instead of clustering at tiny ranks.
    """
    if allow_zero and rng.random() < 0.05:
        return zero_complex()
    lo = rng.randint(-2, 1)
    width = rng.randint(1, max_width)
    hi = lo + width - 1
    budget = rng.randint(1, max(1, (width * max_rank * 2) // 3))
    x = _primitive(rng, lo, hi)
    attempts = 0
    while x.total_rank() < budget and attempts < 4 * budget + 4:
        attempts += 1
        op = rng.random()
        if op < 0.45:
            cand = direct_sum(x, _primitive(rng, lo, hi)).total
        elif op < 0.85:
            # cone of a random map from a primitive into the current complex
            y = _primitive(rng, max(lo + 1, lo), hi + 1)
            f = random_chain_map(rng, y, x, max_entry=max_entry)
            cand = mapping_cone_complex(f)
        else:
            cand = shift(x)
        if _fits(cand, lo, hi, max_rank):
            x = cand
    y, _ = conjugate_complex(rng, x, max_entry=max(max_entry, x.max_entry()))
    return y


def random_chain_map(
    rng: random.Random, x: Complex, y: Complex, max_entry: int = 2
) -> ChainMap:
    """A chain map x -> y drawn from a box inside the solution lattice of
    the commutation constraint d_y f = f d_x."""
    degs = sorted(set(x.degrees()) & set(y.degrees()))
    if not degs:
        return ChainMap.zero(x, y)
    # unknown layout: components f^n in degree order, row-major
    offsets = {}
    total = 0
    for n in degs:
        offsets[n] = total
        total += y.rank(n) * x.rank(n)
    # one matrix equation per degree where it has nonzero shape, even when
    # one of the two unknown blocks it mentions is empty
    rows: list[list[int]] = []
    for n in sorted(set(x.degrees()) | set(y.degrees())):
        ry1 = y.rank(n + 1)
        rx = x.rank(n)
        if not (ry1 and rx):
            continue
        dy = y.diff(n)
        dx = x.diff(n)
        for i in range(ry1):
            for j in range(rx):
                row = [0] * total
                # (d_y f^n)_{ij} = sum_k d_y[i,k] f^n[k,j]
                if n in offsets:
                    base = offsets[n]
                    for k in range(y.rank(n)):
                        e = dy[i, k]
                        if e:
                            row[base + k * rx + j] += e
                # -(f^{n+1} d_x)_{ij} = -sum_l f^{n+1}[i,l] d_x[l,j]
                if n + 1 in offsets:
                    base = offsets[n + 1]
                    rx1 = x.rank(n + 1)
                    for l in range(rx1):
                        e = dx[l, j]
                        if e:
                            row[base + i * rx1 + l] -= e
                if any(row):
                    rows.append(row)
    if rows:
        constraint = IntMatrix.from_rows(rows, cols=total)
        basis = kernel_basis(constraint)
    else:
        basis = IntMatrix.identity(total)
    vec = [0] * total
    order = list(range(basis.cols))
    rng.shuffle(order)
    picked = 0
    for b in order:
        if picked >= max(1, basis.cols // 2) and rng.random() < 0.4:
            continue
        c = rng.choice((-1, 1, 1, -1, 2, -2))
        col = basis.col(b)
        cand = [v + c * e for v, e in zip(vec, col)]
        if max((abs(v) for v in cand), default=0) <= max_entry:
            vec = cand
            picked += 1
    comps = {}
    for n in degs:
        ry, rx = y.rank(n), x.rank(n)
        base = offsets[n]
        comps[n] = IntMatrix(ry, rx, vec[base : base + ry * rx])
    return ChainMap(x, y, comps, check=True)


def null_homotopic_perturbation(rng: random.Random, x: Complex, y: Complex, max_entry: int = 1) -> ChainMap:
    """d_y s + s d_x for a random degree -1 map s; null-homotopic by birth."""
    comps = {}
    s = {}
    for n in x.degrees():
        rows = y.rank(n - 1)
        cols = x.rank(n)
        if rows and cols:
            s[n] = IntMatrix(rows, cols, [rng.randint(-max_entry, max_entry) for _ in range(rows * cols)])
    for n in set(x.degrees()) | set(y.degrees()):
        sn = s.get(n, IntMatrix.zeros(y.rank(n - 1), x.rank(n)))
        sn1 = s.get(n + 1, IntMatrix.zeros(y.rank(n), x.rank(n + 1)))
        m = y.diff(n - 1) @ sn + sn1 @ x.diff(n)
        if not m.is_zero():
            comps[n] = m
    return ChainMap(x, y, comps, check=True)


def random_contractible(
    rng: random.Random, max_width: int = 3, max_rank: int = 2, max_entry: int = 2
) -> Complex:
    """A contractible complex: disks and cones of identity maps, scrambled."""
    lo = rng.randint(-2, 1)
    hi = lo + rng.randint(1, max_width) - 1
    pieces = []
    for _ in range(rng.randint(1, max(1, max_rank))):
        if hi > lo:
            n = rng.randint(lo + 1, hi)
            pieces.append(disk(n))
        else:
            pieces.append(zero_complex())
    x = zero_complex()
    for p in pieces:
        cand = direct_sum(x, p).total
        if _fits(cand, lo, hi, max_rank):
            x = cand
    if x.is_zero():
        return x
    y, _ = conjugate_complex(rng, x, max_entry=max(max_entry, 3))
    return y


def random_homotopy_equivalence(
    rng: random.Random, x: Complex, max_rank_pad: int = 2, max_entry: int = 2
) -> ChainMap:
    """A homotopy equivalence out of x: an isomorphism or an inclusion with
    contractible complement, composed with a change of basis and perturbed
    by a null-homotopic map."""
    style = rng.random()
    if style < 0.4 or x.is_zero():
        y, iso = conjugate_complex(rng, x, max_entry=max(max_entry, x.max_entry(), 3))
        f = iso
    else:
        lo, hi = x.support
        pad = random_contractible(rng, max_width=2, max_rank=max_rank_pad, max_entry=max_entry)
        s = direct_sum(x, pad)
        y0 = s.total
        f0 = s.include_left
        y, iso = conjugate_complex(rng, y0, max_entry=max(max_entry, y0.max_entry(), 3))
        f = iso @ f0
        y = f.target
    if rng.random() < 0.6:
        f = f + null_homotopic_perturbation(rng, x, f.target, max_entry=1)
    return f


def random_quasi_iso(rng: random.Random, x: Complex, max_entry: int = 2) -> ChainMap:
    """Here bounded complexes of free modules make these coincide."""
    return random_homotopy_equivalence(rng, x, max_entry=max_entry)


# ---------------------------------------------------------------------------
# Conflations and retracts
# ---------------------------------------------------------------------------


def _twist_kernel(rng: random.Random, top: Complex, bot: Complex, sign: int, max_entry: int) -> dict[int, IntMatrix]:
    """A random h with d_top h + sign * h d_bot = 0, shapes
    h^n : bot^n -> top^{n+1}."""
    degs = [n for n in bot.degrees() if top.rank(n + 1)]
    if not degs:
        return {}
    offsets = {}
    total = 0
    for n in degs:
        offsets[n] = total
        total += top.rank(n + 1) * bot.rank(n)
    rows = []
    for n in sorted(set(bot.degrees()) | {m - 2 for m in top.degrees()}):
        rt2 = top.rank(n + 2)
        rb = bot.rank(n)
        if not (rt2 and rb):
            continue
        dt = top.diff(n + 1)
        db = bot.diff(n)
        for i in range(rt2):
            for j in range(rb):
                row = [0] * total
                if n in offsets:
                    base = offsets[n]
                    for k in range(top.rank(n + 1)):
                        e = dt[i, k]
                        if e:
                            row[base + k * rb + j] += e
                if n + 1 in offsets:
                    base = offsets[n + 1]
                    rb1 = bot.rank(n + 1)
                    for l in range(rb1):
                        e = db[l, j]
                        if e:
                            row[base + i * rb1 + l] += sign * e
                if any(row):
                    rows.append(row)
    if rows:
        basis = kernel_basis(IntMatrix.from_rows(rows, cols=total))
    else:
        basis = IntMatrix.identity(total)
    vec = [0] * total
    for b in range(basis.cols):
        if rng.random() < 0.5:
            c = rng.choice((-1, 1))
            col = basis.col(b)
            cand = [v + c * e for v, e in zip(vec, col)]
            if max((abs(v) for v in cand), default=0) <= max_entry:
                vec = cand
    out = {}
    for n in degs:
        r, c = top.rank(n + 1), bot.rank(n)
        base = offsets[n]
        m = IntMatrix(r, c, vec[base : base + r * c])
        if not m.is_zero():
            out[n] = m
    return out


def random_conflation(
    rng: random.Random,
    sub: Complex | None = None,
    quotient: Complex | None = None,
    max_width: int = 3,
    max_rank: int = 2,
    max_entry: int = 2,
) -> Conflation:
    """A degreewise split conflation x >--> y -->> z with a random twist.

    The middle is x + z with differential [[d_x, h],[0, d_z]] where h solves
    d_x h + h d_z = 0, so the extension is usually not split as a complex.
    """
    x = sub if sub is not None else random_complex(rng, max_width, max_rank, max_entry)
    z = quotient if quotient is not None else random_complex(rng, max_width, max_rank, max_entry)
    h = _twist_kernel(rng, x, z, sign=1, max_entry=max_entry)
    ranks = {n: x.rank(n) + z.rank(n) for n in set(x.degrees()) | set(z.degrees())}
    diffs = {}
    for n in ranks:
        if not (x.rank(n + 1) + z.rank(n + 1)):
            continue
        hm = h.get(n, IntMatrix.zeros(x.rank(n + 1), z.rank(n)))
        diffs[n] = IntMatrix.block(
            [
                [x.diff(n), hm],
                [IntMatrix.zeros(z.rank(n + 1), x.rank(n)), z.diff(n)],
            ]
        )
    y = Complex(ranks, diffs, check=True)
    i_comps = {}
    p_comps = {}
    r_comps = {}
    for n in y.degrees():
        rx, rz = x.rank(n), z.rank(n)
        i_comps[n] = IntMatrix.block([[IntMatrix.identity(rx)], [IntMatrix.zeros(rz, rx)]])
        p_comps[n] = IntMatrix.block([[IntMatrix.zeros(rz, rx), IntMatrix.identity(rz)]])
        r_comps[n] = i_comps[n].transpose()
    i = ChainMap(x, y, i_comps, check=True)
    p = ChainMap(y, z, p_comps, check=True)
    return Conflation(i, p, r_comps, check=False)


@dataclass(frozen=True)
class ConflationMorphism:
    """Rows are conflations, (a, b, c) the vertical maps."""

    top: Conflation
    bottom: Conflation
    a: ChainMap
    b: ChainMap
    c: ChainMap


def random_conflation_morphism(
    rng: random.Random,
    top: Conflation,
    a: ChainMap,
    c: ChainMap,
    max_entry: int = 2,
) -> ConflationMorphism | None:
    """Complete (a, c) to a morphism of conflations over a fresh bottom row.

    The bottom row is the twisted extension of a.target by c.target; the
    middle map b = [[a, t],[0, c]] needs d_x' t - t d_z = a h - h' c, solved
    exactly; returns None when no integer solution exists.
    """
    x, z = top.sub, top.quotient
    xp, zp = a.target, c.target
    bottom = random_conflation(rng, sub=xp, quotient=zp, max_entry=max_entry)
    h = {n: top.total.diff(n).submatrix(range(x.rank(n + 1)), range(x.rank(n), x.rank(n) + z.rank(n))) for n in top.total.diff_degrees()}
    hp = {n: bottom.total.diff(n).submatrix(range(xp.rank(n + 1)), range(xp.rank(n), xp.rank(n) + zp.rank(n))) for n in bottom.total.diff_degrees()}

    # solve d_x' t^n - t^{n+1} d_z^n = (a h - h' c)^n for t^n : z^n -> x'^n
    degs = [n for n in z.degrees() if xp.rank(n)]
    offsets = {}
    total = 0
    for n in degs:
        offsets[n] = total
        total += xp.rank(n) * z.rank(n)
    rows = []
    rhs = []
    for n in sorted(set(z.degrees()) | set(xp.degrees())):
        rx1 = xp.rank(n + 1)
        rz = z.rank(n)
        if not (rx1 and rz):
            continue
        dxp = xp.diff(n)
        dz = z.diff(n)
        hn = h.get(n, IntMatrix.zeros(x.rank(n + 1), z.rank(n)))
        hpn = hp.get(n, IntMatrix.zeros(xp.rank(n + 1), zp.rank(n)))
        target = a.component(n + 1) @ hn - hpn @ c.component(n)
        for i in range(rx1):
            for j in range(rz):
                row = [0] * total
                if n in offsets:
                    base = offsets[n]
                    for k in range(xp.rank(n)):
                        e = dxp[i, k]
                        if e:
                            row[base + k * rz + j] += e
                if n + 1 in offsets:
                    base = offsets[n + 1]
                    rz1 = z.rank(n + 1)
                    for l in range(rz1):
                        e = dz[l, j]
                        if e:
                            row[base + i * rz1 + l] -= e
                rows.append(row)
                rhs.append(target[i, j])
    t_comps: dict[int, IntMatrix] = {}
    if rows:
        from .zlinalg import solve_linear

        sol = solve_linear(IntMatrix.from_rows(rows, cols=total), rhs)
        if sol is None:
            return None
        for n in degs:
            r, ccols = xp.rank(n), z.rank(n)
            base = offsets[n]
            t_comps[n] = IntMatrix(r, ccols, list(sol[base : base + r * ccols]))
    else:
        for n in degs:
            t_comps[n] = IntMatrix.zeros(xp.rank(n), z.rank(n))

    b_comps = {}
    for n in set(top.total.degrees()) | set(bottom.total.degrees()):
        rx, rz = x.rank(n), z.rank(n)
        rxp, rzp = xp.rank(n), zp.rank(n)
        tn = t_comps.get(n, IntMatrix.zeros(rxp, rz))
        b_comps[n] = IntMatrix.block(
            [
                [a.component(n), tn],
                [IntMatrix.zeros(rzp, rx), c.component(n)],
            ]
        )
    b = ChainMap(top.total, bottom.total, b_comps, check=True)
    return ConflationMorphism(top=top, bottom=bottom, a=a, b=b, c=c)


@dataclass(frozen=True)
class RetractDiagram:
    """i: x -> y and p: y -> x with p o i = id."""

    x: Complex
    y: Complex
    i: ChainMap
    p: ChainMap


def random_retract(
    rng: random.Random,
    x: Complex | None = None,
    max_width: int = 3,
    max_rank: int = 2,
    max_entry: int = 2,
) -> RetractDiagram:
    """x as a strict retract of a twisted extension y of a complement u."""
    if x is None:
        x = random_complex(rng, max_width, max_rank, max_entry)
    u = random_complex(rng, max_width, max_rank, max_entry)
    # choose s : u -> x of degree 0 freely; twist h = d_x s - s d_u
    s = {}
    for n in u.degrees():
        r, c = x.rank(n), u.rank(n)
        if r and c:
            s[n] = IntMatrix(r, c, [rng.randint(-1, 1) for _ in range(r * c)])
    h = {}
    for n in u.degrees():
        sn = s.get(n, IntMatrix.zeros(x.rank(n), u.rank(n)))
        sn1 = s.get(n + 1, IntMatrix.zeros(x.rank(n + 1), u.rank(n + 1)))
        m = x.diff(n) @ sn - sn1 @ u.diff(n)
        if not m.is_zero():
            h[n] = m
    ranks = {n: x.rank(n) + u.rank(n) for n in set(x.degrees()) | set(u.degrees())}
    diffs = {}
    for n in ranks:
        if not (x.rank(n + 1) + u.rank(n + 1)):
            continue
        hm = h.get(n, IntMatrix.zeros(x.rank(n + 1), u.rank(n)))
        diffs[n] = IntMatrix.block(
            [
                [x.diff(n), hm],
                [IntMatrix.zeros(u.rank(n + 1), x.rank(n)), u.diff(n)],
            ]
        )
    y = Complex(ranks, diffs, check=True)
    i_comps = {}
    p_comps = {}
    for n in y.degrees():
        rx, ru = x.rank(n), u.rank(n)
        i_comps[n] = IntMatrix.block([[IntMatrix.identity(rx)], [IntMatrix.zeros(ru, rx)]])
        sn = s.get(n, IntMatrix.zeros(rx, ru))
        p_comps[n] = IntMatrix.block([[IntMatrix.identity(rx), sn]])
    i = ChainMap(x, y, i_comps, check=True)
    p = ChainMap(y, x, p_comps, check=True)
    return RetractDiagram(x=x, y=y, i=i, p=p)


def random_idempotent(
    rng: random.Random, max_width: int = 3, max_rank: int = 2, max_entry: int = 2
) -> tuple[Complex, ChainMap]:
    """A strict idempotent chain endomorphism: a conjugated projection."""
    u = random_complex(rng, max_width, max_rank, max_entry)
    v = random_complex(rng, max_width, max_rank, max_entry)
    s = direct_sum(u, v)
    proj = s.include_left @ s.project_left
    x, iso = conjugate_complex(rng, s.total, max_entry=6)
    # e = iso o proj o iso^{-1}; build the inverse from the witness
    inv_comps = {}
    for n in x.degrees():
        pn = iso.component(n)
        from .zlinalg import solve_matrix

        pinv = solve_matrix(pn, IntMatrix.identity(pn.rows))
        assert pinv is not None
        inv_comps[n] = pinv
    iso_inv = ChainMap(x, s.total, inv_comps, check=True)
    e = iso @ proj @ iso_inv
    return x, e


# ---------------------------------------------------------------------------
# The associator isomorphism (a (x) b) (x) c -> a (x) (b (x) c)
# ---------------------------------------------------------------------------


def associator_map(a: Complex, b: Complex, c: Complex) -> ChainMap:
    """The canonical block permutation; a chain isomorphism without signs."""
    left = tensor(tensor(a, b), c)
    right = tensor(a, tensor(b, c))
    ab = tensor(a, b)
    bc = tensor(b, c)
    comps = {}
    for n in left.degrees():
        # positions in left: blocks (s, k) by s desc, inside (i, j) by i desc
        left_index: dict[tuple[int, int, int, int, int, int], int] = {}
        pos = 0
        for (s, k, r_ab, r_c) in _tensor_blocks(ab, c, n):
            inner = _tensor_blocks(a, b, s)
            for (i, j, ra, rb) in inner:
                for u in range(ra):
                    for v in range(rb):
                        for w in range(r_c):
                            left_index[(i, j, k, u, v, w)] = (
                                pos
                                + (sum(x * y for (_, _, x, y) in inner[: inner.index((i, j, ra, rb))]) + u * rb + v) * r_c
                                + w
                            )
            pos += r_ab * r_c
        right_index: dict[tuple[int, int, int, int, int, int], int] = {}
        pos = 0
        for (i, t, ra, r_bc) in _tensor_blocks(a, bc, n):
            inner = _tensor_blocks(b, c, t)
            for (j, k, rb, rc) in inner:
                off = sum(x * y for (_, _, x, y) in inner[: inner.index((j, k, rb, rc))])
                for u in range(ra):
                    for v in range(rb):
                        for w in range(rc):
                            right_index[(i, j, k, u, v, w)] = pos + u * r_bc + off + v * rc + w
            pos += ra * r_bc
        rows = right.rank(n)
        cols = left.rank(n)
        entries = [0] * (rows * cols)
        for key, cidx in left_index.items():
            ridx = right_index[key]
            entries[ridx * cols + cidx] = 1
        comps[n] = IntMatrix(rows, cols, entries)
    return ChainMap(left, right, comps, check=True)


# ---------------------------------------------------------------------------
# Public sample streams
# ---------------------------------------------------------------------------


def sample(kind: str, spec: SampleSpec) -> Iterator:
    """Stream of diagram bundles of the requested kind.

    Kinds: complex, chain_map, composable_pair, conflation,
    conflation_morphism, pushout_diagram, pullback_diagram, retract_diagram.
    Instance k depends only on (spec.seed, kind, k).
    """
    builders = {
        "complex": _sample_complex,
        "chain_map": _sample_chain_map,
        "composable_pair": _sample_composable_pair,
        "conflation": _sample_conflation,
        "conflation_morphism": _sample_conflation_morphism,
        "pushout_diagram": _sample_pushout_diagram,
        "pullback_diagram": _sample_pullback_diagram,
        "retract_diagram": _sample_retract_diagram,
    }
    if kind not in builders:
        raise ValueError(f"unknown sample kind: {kind!r}")
    build = builders[kind]
    for k in range(spec.count):
        rng = derive_rng(spec.seed, kind, k)
        yield build(rng, spec)


def _sample_complex(rng: random.Random, spec: SampleSpec) -> Complex:
    return random_complex(rng, spec.max_width, spec.max_rank, spec.max_entry)


def _sample_chain_map(rng: random.Random, spec: SampleSpec) -> ChainMap:
    x = random_complex(rng, spec.max_width, spec.max_rank, spec.max_entry)
    y = random_complex(rng, spec.max_width, spec.max_rank, spec.max_entry)
    return random_chain_map(rng, x, y, max_entry=spec.max_entry)


def _sample_composable_pair(rng: random.Random, spec: SampleSpec) -> tuple[ChainMap, ChainMap]:
    x = random_complex(rng, spec.max_width, spec.max_rank, spec.max_entry)
    y = random_complex(rng, spec.max_width, spec.max_rank, spec.max_entry)
    z = random_complex(rng, spec.max_width, spec.max_rank, spec.max_entry)
    f = random_chain_map(rng, x, y, max_entry=spec.max_entry)
    g = random_chain_map(rng, y, z, max_entry=spec.max_entry)
    return f, g


def _sample_conflation(rng: random.Random, spec: SampleSpec) -> Conflation:
    return random_conflation(
        rng, max_width=spec.max_width, max_rank=spec.max_rank, max_entry=spec.max_entry
    )


def _sample_conflation_morphism(rng: random.Random, spec: SampleSpec) -> ConflationMorphism:
    while True:
        top = random_conflation(
            rng, max_width=spec.max_width, max_rank=spec.max_rank, max_entry=spec.max_entry
        )
        a = random_homotopy_equivalence(rng, top.sub, max_entry=spec.max_entry)
        c = random_homotopy_equivalence(rng, top.quotient, max_entry=spec.max_entry)
        m = random_conflation_morphism(rng, top, a, c, max_entry=spec.max_entry)
        if m is not None:
            return m


def _sample_pushout_diagram(rng: random.Random, spec: SampleSpec) -> tuple[Conflation, ChainMap]:
    conf = random_conflation(
        rng, max_width=spec.max_width, max_rank=spec.max_rank, max_entry=spec.max_entry
    )
    z = random_complex(rng, spec.max_width, spec.max_rank, spec.max_entry)
    f = random_chain_map(rng, conf.sub, z, max_entry=spec.max_entry)
    return conf, f


def _sample_pullback_diagram(rng: random.Random, spec: SampleSpec) -> tuple[Conflation, ChainMap]:
    conf = random_conflation(
        rng, max_width=spec.max_width, max_rank=spec.max_rank, max_entry=spec.max_entry
    )
    z = random_complex(rng, spec.max_width, spec.max_rank, spec.max_entry)
    f = random_chain_map(rng, z, conf.quotient, max_entry=spec.max_entry)
    return conf, f


def _sample_retract_diagram(rng: random.Random, spec: SampleSpec) -> RetractDiagram:
    return random_retract(
        rng, max_width=spec.max_width, max_rank=spec.max_rank, max_entry=spec.max_entry
    )
