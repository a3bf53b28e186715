"""Exact linear algebra over the integers.

Dense matrices of arbitrary-precision Python ints, Smith and Hermite normal
forms, integer kernel bases, exact linear solving, and finitely generated
abelian groups presented by relation matrices.  Everything here is pure and
immutable; no floats, no overflow, ever.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = [
    "IntMatrix",
    "SmithDecomposition",
    "AbGroupPresentation",
    "PresentedGroupMap",
    "smith_normal_form",
    "minor_gcd",
    "kernel_basis",
    "solve_linear",
    "solve_matrix",
    "cokernel_presentation",
    "presented_group_iso",
    "det",
    "is_unimodular",
]


class IntMatrix:
    """A rows x cols matrix of Python ints, stored row-major and immutable."""

    __slots__ = ("rows", "cols", "_data", "_hash")

    def __init__(self, rows: int, cols: int, entries: Iterable[int]):
        data = tuple(entries)
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(data) != rows * cols:
            raise ValueError(
                f"expected {rows * cols} entries for a {rows}x{cols} matrix, got {len(data)}"
            )
        for e in data:
            if type(e) is not int:
                raise ValueError(f"matrix entries must be ints, got {type(e).__name__}")
        self.rows = rows
        self.cols = cols
        self._data = data
        self._hash = None

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ValueError("ragged rows")
        else:
            width = 0 if cols is None else cols
        if cols is not None and rows and width != cols:
            raise ValueError(f"rows have width {width}, expected {cols}")
        flat = [int(e) for r in rows for e in r]
        return cls(len(rows), width, flat)

    @classmethod
    def column(cls, entries: Sequence[int]) -> "IntMatrix":
        return cls(len(entries), 1, tuple(int(e) for e in entries))

    @classmethod
    def diagonal(cls, entries: Sequence[int], rows: int | None = None, cols: int | None = None) -> "IntMatrix":
        n = len(entries)
        rows = n if rows is None else rows
        cols = n if cols is None else cols
        flat = [0] * (rows * cols)
        for i, e in enumerate(entries):
            flat[i * cols + i] = int(e)
        return cls(rows, cols, flat)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self._data[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        c = self.cols
        return self._data[i * c : (i + 1) * c]

    def col(self, j: int) -> tuple[int, ...]:
        c = self.cols
        return self._data[j :: c] if c else ()

    def to_lists(self) -> list[list[int]]:
        c = self.cols
        d = self._data
        return [list(d[i * c : (i + 1) * c]) for i in range(self.rows)]

    @property
    def entries(self) -> tuple[int, ...]:
        return self._data

    def is_zero(self) -> bool:
        return not any(self._data)

    def is_identity(self) -> bool:
        return self.rows == self.cols and self == IntMatrix.identity(self.rows)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def max_abs(self) -> int:
        return max((abs(e) for e in self._data), default=0)

    def transpose(self) -> "IntMatrix":
        r, c, d = self.rows, self.cols, self._data
        return IntMatrix(c, r, tuple(d[i * c + j] for j in range(c) for i in range(r)))

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(-e for e in self._data))

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_same_shape(other)
        return IntMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self._data, other._data)))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_same_shape(other)
        return IntMatrix(self.rows, self.cols, tuple(a - b for a, b in zip(self._data, other._data)))

    def scale(self, c: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(c * e for e in self._data))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        m, n, p = self.rows, self.cols, other.cols
        a, b = self._data, other._data
        out = [0] * (m * p)
        for i in range(m):
            ai = i * n
            oi = i * p
            for k in range(n):
                aik = a[ai + k]
                if aik:
                    bk = k * p
                    if aik == 1:
                        for j in range(p):
                            out[oi + j] += b[bk + j]
                    elif aik == -1:
                        for j in range(p):
                            out[oi + j] -= b[bk + j]
                    else:
                        for j in range(p):
                            out[oi + j] += aik * b[bk + j]
        return IntMatrix(m, p, out)

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Matrix-vector product, returning a plain tuple."""
        if len(vec) != self.cols:
            raise ValueError(f"vector of length {len(vec)} incompatible with {self.rows}x{self.cols}")
        c, d = self.cols, self._data
        out = []
        for i in range(self.rows):
            base = i * c
            out.append(sum(d[base + k] * vec[k] for k in range(c) if d[base + k]))
        return tuple(out)

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise ValueError("hstack: row counts differ")
        rows = [self.row(i) + other.row(i) for i in range(self.rows)]
        return IntMatrix.from_rows(rows, cols=self.cols + other.cols)

    def vstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.cols:
            raise ValueError("vstack: column counts differ")
        return IntMatrix(self.rows + other.rows, self.cols, self._data + other._data)

    @classmethod
    def block(cls, grid: Sequence[Sequence["IntMatrix"]]) -> "IntMatrix":
        """Assemble a matrix from a 2-d grid of blocks with consistent shapes."""
        if not grid:
            return cls.zeros(0, 0)
        row_heights = [row[0].rows for row in grid]
        col_widths = [b.cols for b in grid[0]]
        for bi, row in enumerate(grid):
            if len(row) != len(col_widths):
                raise ValueError("block grid is ragged")
            for bj, b in enumerate(row):
                if b.rows != row_heights[bi] or b.cols != col_widths[bj]:
                    raise ValueError("inconsistent block shapes")
        out_rows: list[tuple[int, ...]] = []
        for bi, row in enumerate(grid):
            for i in range(row_heights[bi]):
                acc: tuple[int, ...] = ()
                for b in row:
                    acc += b.row(i)
                out_rows.append(acc)
        return cls.from_rows(out_rows, cols=sum(col_widths))

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "IntMatrix":
        rows = [tuple(self._data[i * self.cols + j] for j in col_idx) for i in row_idx]
        return IntMatrix.from_rows(rows, cols=len(col_idx))

    def _check_same_shape(self, other: "IntMatrix") -> None:
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError(
                f"shape mismatch: {self.rows}x{self.cols} vs {other.rows}x{other.cols}"
            )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.rows == other.rows and self.cols == other.cols and self._data == other._data

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self._data))
        return self._hash

    def __repr__(self) -> str:
        if self.rows * self.cols == 0:
            return f"IntMatrix({self.rows}x{self.cols})"
        body = "; ".join(" ".join(str(e) for e in self.row(i)) for i in range(self.rows))
        return f"IntMatrix({self.rows}x{self.cols}: {body})"


# ---------------------------------------------------------------------------
# Row echelon form with unimodular transform (the engine behind kernels and
# exact solving).  Rows are kept as sparse {column: value} dicts; prior pivot
# rows are Hermite-reduced at every new pivot, which is what keeps
# intermediate entries from exploding.
# ---------------------------------------------------------------------------


def _sp_axpy(target: dict[int, int], source: dict[int, int], q: int) -> None:
    # target -= q * source
    if q == 1:
        for k, v in source.items():
            nv = target.get(k, 0) - v
            if nv:
                target[k] = nv
            else:
                target.pop(k, None)
    elif q == -1:
        for k, v in source.items():
            nv = target.get(k, 0) + v
            if nv:
                target[k] = nv
            else:
                target.pop(k, None)
    else:
        for k, v in source.items():
            nv = target.get(k, 0) - q * v
            if nv:
                target[k] = nv
            else:
                target.pop(k, None)


def _echelon_sparse(
    srows: list[dict[int, int]], ncols: int
) -> tuple[list[dict[int, int]], list[dict[int, int]], list[tuple[int, int]]]:
    """Sparse integer row echelon form with unimodular transform.

    Returns (rows, transform, pivots) with transform * original = rows,
    positive pivots whose columns strictly increase, and every entry above a
    pivot reduced into [0, pivot).
    """
    m = len(srows)
    strans: list[dict[int, int]] = [{i: 1} for i in range(m)]
    pivots: list[tuple[int, int]] = []
    pr = 0
    for c in range(ncols):
        if pr == m:
            break
        while True:
            # prefer unit pivots (no swell at all), then sparse rows
            best = -1
            bkey: tuple[int, int, int] | None = None
            for i in range(pr, m):
                v = srows[i].get(c)
                if v:
                    a = abs(v)
                    key = (0 if a == 1 else 1, len(srows[i]), a)
                    if bkey is None or key < bkey:
                        best, bkey = i, key
                        if a == 1 and len(srows[i]) <= 2:
                            break
            if best < 0:
                break  # column is zero below pr
            prow = srows[best]
            ptrans = strans[best]
            pv = prow[c]
            done = True
            for i in range(pr, m):
                if i == best:
                    continue
                v = srows[i].get(c)
                if v:
                    q = v // pv
                    if q:
                        _sp_axpy(srows[i], prow, q)
                        _sp_axpy(strans[i], ptrans, q)
                    if srows[i].get(c):
                        done = False
            if done:
                if best != pr:
                    srows[best], srows[pr] = srows[pr], srows[best]
                    strans[best], strans[pr] = strans[pr], strans[best]
                if srows[pr][c] < 0:
                    srows[pr] = {k: -v for k, v in srows[pr].items()}
                    strans[pr] = {k: -v for k, v in strans[pr].items()}
                pv = srows[pr][c]
                # Hermite-reduce earlier pivot rows at this column
                for (ri, _ci) in pivots:
                    v = srows[ri].get(c)
                    if v:
                        q = v // pv
                        if q:
                            _sp_axpy(srows[ri], srows[pr], q)
                            _sp_axpy(strans[ri], strans[pr], q)
                pivots.append((pr, c))
                pr += 1
                break
    return srows, strans, pivots


def _to_sparse_rows(a: IntMatrix) -> list[dict[int, int]]:
    out = []
    c = a.cols
    d = a.entries
    for i in range(a.rows):
        base = i * c
        row = {}
        for j in range(c):
            v = d[base + j]
            if v:
                row[j] = v
        out.append(row)
    return out


class ColumnEchelon:
    """Column echelon form a @ U = H with unimodular U, reusable for solving.

    Column j of H has its pivot in row ``pivots[j][1]`` with zeros above it,
    and pivot rows strictly increase with j.
    """

    __slots__ = ("rows", "cols", "h_cols", "u_cols", "pivots")

    def __init__(self, a: IntMatrix):
        # Row-reduce the transpose: a @ R^T = (R @ a^T)^T, so columns of
        # U = R^T are the transform rows.
        srows = _to_sparse_rows(a.transpose())
        h, u, piv = _echelon_sparse(srows, a.rows)
        self.rows = a.rows
        self.cols = a.cols
        self.h_cols = h        # column j of H as sparse {row: value}
        self.u_cols = u        # column j of U as sparse {row: value}
        self.pivots = piv      # (column j, pivot row)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def solve(self, b: Sequence[int]) -> tuple[int, ...] | None:
        """One integer solution of a @ x = b, or None."""
        if len(b) != self.rows:
            raise ValueError(f"right-hand side of length {len(b)} incompatible with {self.rows}x{self.cols}")
        resid = {i: v for i, v in enumerate(b) if v}
        coeffs = []
        for j, prow in self.pivots:
            r = resid.get(prow, 0)
            if not r:
                continue
            pv = self.h_cols[j][prow]
            if r % pv:
                return None
            q = r // pv
            coeffs.append((j, q))
            _sp_axpy(resid, self.h_cols[j], q)
        if resid:
            return None
        x = [0] * self.cols
        for j, q in coeffs:
            for k, v in self.u_cols[j].items():
                x[k] += q * v
        return tuple(x)

    def solve_matrix(self, b: IntMatrix) -> IntMatrix | None:
        if b.rows != self.rows:
            raise ValueError("solve_matrix: row counts differ")
        cols = []
        for j in range(b.cols):
            x = self.solve(b.col(j))
            if x is None:
                return None
            cols.append(x)
        return IntMatrix.from_rows(cols, cols=self.cols).transpose()

    def kernel(self) -> IntMatrix:
        """Basis of the kernel lattice of a, as columns with full column rank."""
        rank = len(self.pivots)
        rows = []
        for j in range(rank, self.cols):
            col = self.u_cols[j]
            rows.append([col.get(k, 0) for k in range(self.cols)])
        return IntMatrix.from_rows(rows, cols=self.cols).transpose()


def kernel_basis(a: IntMatrix) -> IntMatrix:
    """A basis of the integer kernel lattice {v : a @ v = 0}, as columns.

    The result has full column rank; zero columns never appear.
    """
    return ColumnEchelon(a).kernel()


def solve_linear(a: IntMatrix, b: Sequence[int]) -> tuple[int, ...] | None:
    """One exact integer solution x of a @ x = b, or None if none exists."""
    return ColumnEchelon(a).solve(b)


def solve_matrix(a: IntMatrix, b: IntMatrix) -> IntMatrix | None:
    """Exact integer solution X of a @ X = b (columnwise), or None."""
    return ColumnEchelon(a).solve_matrix(b)


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SmithDecomposition:
    """U @ A @ V = S with U, V unimodular and S diagonal with divisibility."""

    u: IntMatrix
    s: IntMatrix
    v: IntMatrix
    rank: int

    def invariant_factors(self) -> tuple[int, ...]:
        return tuple(self.s[i, i] for i in range(self.rank))

    def check(self, a: IntMatrix) -> None:
        """Assert every structural invariant against the original matrix."""
        if self.u @ a @ self.v != self.s:
            raise AssertionError("U @ A @ V != S")
        if abs(det(self.u)) != 1 or abs(det(self.v)) != 1:
            raise AssertionError("transform not unimodular")
        m = min(self.s.rows, self.s.cols)
        diag = [self.s[i, i] for i in range(m)]
        for i in range(self.s.rows):
            for j in range(self.s.cols):
                if i != j and self.s[i, j]:
                    raise AssertionError("S not diagonal")
        if any(d < 0 for d in diag):
            raise AssertionError("negative diagonal entry")
        if any(d == 0 for d in diag[: self.rank]) or any(d != 0 for d in diag[self.rank :]):
            raise AssertionError("rank does not match diagonal support")
        for i in range(self.rank - 1):
            if diag[i + 1] % diag[i]:
                raise AssertionError("divisibility chain broken")


def smith_normal_form(a: IntMatrix) -> SmithDecomposition:
    """Smith normal form of an integer matrix, with unimodular transforms.

    Handles empty and all-zero matrices.  Pivoting picks a minimal-absolute-
    value entry to keep intermediate entries small.
    """
    m, n = a.rows, a.cols
    s = a.to_lists()
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    v = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def row_op(i: int, j: int, q: int) -> None:
        # row_i -= q * row_j
        si, sj = s[i], s[j]
        for k in range(n):
            si[k] -= q * sj[k]
        ui, uj = u[i], u[j]
        for k in range(m):
            ui[k] -= q * uj[k]

    def col_op(i: int, j: int, q: int) -> None:
        # col_i -= q * col_j
        for r in range(m):
            s[r][i] -= q * s[r][j]
        for r in range(n):
            v[r][i] -= q * v[r][j]

    def swap_rows(i: int, j: int) -> None:
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        for r in range(m):
            s[r][i], s[r][j] = s[r][j], s[r][i]
        for r in range(n):
            v[r][i], v[r][j] = v[r][j], v[r][i]

    t = 0
    while True:
        # locate a minimal-absolute-value nonzero pivot in s[t:, t:]
        pi = pj = -1
        pv = 0
        for i in range(t, m):
            si = s[i]
            for j in range(t, n):
                e = si[j]
                if e and (pi < 0 or abs(e) < pv):
                    pi, pj, pv = i, j, abs(e)
            if pv == 1:
                break
        if pi < 0:
            break
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            # clear column t below the pivot
            for i in range(t + 1, m):
                e = s[i][t]
                if e:
                    q = e // s[t][t]
                    if q:
                        row_op(i, t, q)
                    if s[i][t]:
                        swap_rows(t, i)  # strictly smaller remainder becomes pivot
            if any(s[i][t] for i in range(t + 1, m)):
                continue
            # clear row t right of the pivot
            for j in range(t + 1, n):
                e = s[t][j]
                if e:
                    q = e // s[t][t]
                    if q:
                        col_op(j, t, q)
                    if s[t][j]:
                        swap_cols(t, j)
            if any(s[t][j] for j in range(t + 1, n)):
                continue
            if any(s[i][t] for i in range(t + 1, m)):
                continue
            break
        t += 1

    rank = t
    # positive diagonal
    for i in range(rank):
        if s[i][i] < 0:
            s[i] = [-e for e in s[i]]
            u[i] = [-e for e in u[i]]
    # enforce the divisibility chain d_i | d_{i+1} by gcd/lcm exchanges
    changed = True
    while changed:
        changed = False
        for i in range(rank - 1):
            di, dj = s[i][i], s[i + 1][i + 1]
            if dj % di:
                changed = True
                # mix column i+1 into column i, then re-clear the 2x2 corner
                col_op(i, i + 1, -1)  # col_i += col_{i+1}
                while True:
                    e = s[i + 1][i]
                    if not e:
                        break
                    q = e // s[i][i]
                    if q:
                        row_op(i + 1, i, q)
                    if s[i + 1][i]:
                        swap_rows(i, i + 1)
                e = s[i][i + 1]
                if e:
                    q = e // s[i][i]
                    col_op(i + 1, i, q)
                    # remainder is zero because s[i][i] | e at this point
                if s[i][i] < 0:
                    s[i] = [-x for x in s[i]]
                    u[i] = [-x for x in u[i]]
                if s[i + 1][i + 1] < 0:
                    s[i + 1] = [-x for x in s[i + 1]]
                    u[i + 1] = [-x for x in u[i + 1]]

    return SmithDecomposition(
        u=IntMatrix.from_rows(u, cols=m),
        s=IntMatrix.from_rows(s, cols=n),
        v=IntMatrix.from_rows(v, cols=n),
        rank=rank,
    )


def det(a: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if not a.is_square():
        raise ValueError("determinant of a non-square matrix")
    n = a.rows
    if n == 0:
        return 1
    m = a.to_lists()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if not m[k][k]:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            mi = m[i]
            mk = m[k]
            mik = mi[k]
            for j in range(k + 1, n):
                mi[j] = (pivot * mi[j] - mik * mk[j]) // prev
            mi[k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def is_unimodular(a: IntMatrix) -> bool:
    return a.is_square() and abs(det(a)) == 1


def minor_gcd(a: IntMatrix, k: int) -> int:
    """gcd of all k x k minors of a (0 if they all vanish).

    Independent test oracle for the Smith normal form: the product of the
    first k invariant factors equals this gcd whenever it is nonzero.
    """
    if k < 1 or k > min(a.rows, a.cols):
        raise ValueError(f"minor size {k} out of range for {a.rows}x{a.cols}")
    g = 0
    rows_list = a.to_lists()
    for ri in itertools.combinations(range(a.rows), k):
        picked = [rows_list[i] for i in ri]
        for ci in itertools.combinations(range(a.cols), k):
            sub = IntMatrix.from_rows([[r[j] for j in ci] for r in picked], cols=k)
            d = det(sub)
            if d:
                g = _gcd(g, abs(d))
                if g == 1:
                    return 1
    return g


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


# ---------------------------------------------------------------------------
# Finitely generated abelian groups presented by relation matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AbGroupPresentation:
    """coker(R : Z^cols -> Z^rows) together with its normal form.

    The normal form (free rank, invariant factors each >= 2) determines the
    group up to isomorphism.  The Smith transform of the relation matrix is
    kept so induced maps can be expressed in the diagonalized coordinates.
    """

    relations: IntMatrix
    free_rank: int
    invariant_factors: tuple[int, ...]
    smith: SmithDecomposition

    @property
    def generators(self) -> int:
        return self.relations.rows

    def normal_form(self) -> tuple[int, tuple[int, ...]]:
        return (self.free_rank, self.invariant_factors)

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    def same_group(self, other: "AbGroupPresentation") -> bool:
        return self.normal_form() == other.normal_form()

    def order(self) -> int | None:
        """Group order, or None when infinite."""
        if self.free_rank:
            return None
        n = 1
        for t in self.invariant_factors:
            n *= t
        return n

    def __str__(self) -> str:
        parts = ["Z"] * self.free_rank + [f"Z/{t}" for t in self.invariant_factors]
        return " + ".join(parts) if parts else "0"


def cokernel_presentation(a: IntMatrix) -> AbGroupPresentation:
    """Normal form of coker(a : Z^cols -> Z^rows)."""
    smith = smith_normal_form(a)
    free_rank = a.rows - smith.rank
    factors = tuple(f for f in smith.invariant_factors() if f > 1)
    return AbGroupPresentation(
        relations=a, free_rank=free_rank, invariant_factors=factors, smith=smith
    )


@dataclass(frozen=True)
class PresentedGroupMap:
    """A homomorphism coker(R_P) -> coker(R_Q) given on generators."""

    matrix: IntMatrix
    source: AbGroupPresentation
    target: AbGroupPresentation

    def is_iso(self) -> bool:
        return presented_group_iso(self.matrix, self.source, self.target)

    def is_zero(self) -> bool:
        """True iff the map kills every generator in the quotient."""
        return solve_matrix(self.target.relations, self.matrix) is not None


def _descends(f: IntMatrix, p: AbGroupPresentation, q: AbGroupPresentation) -> bool:
    # f induces a map on quotients iff f @ R_P lands in the image of R_Q.
    return solve_matrix(q.relations, f @ p.relations) is not None


def presented_group_iso(f: IntMatrix, p: AbGroupPresentation, q: AbGroupPresentation) -> bool:
    """Decide whether f induces an isomorphism coker(R_P) -> coker(R_Q).

    Raises ValueError when f does not descend to the quotients.
    """
    if f.rows != q.generators or f.cols != p.generators:
        raise ValueError(
            f"map shape {f.rows}x{f.cols} incompatible with presentations "
            f"({q.generators} and {p.generators} generators)"
        )
    if not _descends(f, p, q):
        raise ValueError("map does not descend to the presented quotients")
    if p.normal_form() != q.normal_form():
        return False
    # Two isomorphic finitely generated abelian groups and a surjection
    # between them force an isomorphism, so surjectivity decides.
    # Surjective iff the augmented matrix [f | R_Q] has trivial cokernel.
    aug = f.hstack(q.relations)
    cok = cokernel_presentation(aug)
    return cok.is_trivial()
