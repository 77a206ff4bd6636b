"""Exact dense linear algebra over Z, Q and prime fields.

Everything here is exact: Z uses Python's arbitrary-precision integers,
Q uses ``fractions.Fraction`` and F_p uses integers reduced mod p.  No
floating point appears anywhere.

The integer workhorse is :func:`smith_normal_form`; kernels, solving,
cokernels and homology are derived from it.  Over a field the same
entry points dispatch to Gaussian elimination.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .fgab import FGAbGroup


class ExactLinAlgError(Exception):
    pass


class NotAComplex(ExactLinAlgError):
    """Raised when two maps that should compose to zero do not."""


@dataclass(frozen=True)
class Scalars:
    """Coefficient domain: kind in {'Z', 'Q', 'F'}, characteristic 0 or p."""

    kind: str
    characteristic: int = 0

    def __post_init__(self):
        if self.kind in ("Z", "Q"):
            if self.characteristic != 0:
                raise ValueError(f"{self.kind} has characteristic 0")
        elif self.kind == "F":
            p = self.characteristic
            if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
                raise ValueError("prime field needs a prime characteristic")
        else:
            raise ValueError(f"unknown scalar kind {self.kind!r}")

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    def coerce(self, value):
        if self.kind == "Z":
            if isinstance(value, Fraction):
                if value.denominator != 1:
                    raise ValueError("non-integer scalar over Z")
                return int(value)
            return int(value)
        if self.kind == "Q":
            return Fraction(value)
        return int(value) % self.characteristic

    def invert(self, value):
        if self.kind == "Q":
            return Fraction(1) / value
        if self.kind == "F":
            return pow(value, self.characteristic - 2, self.characteristic)
        raise ValueError("no division over Z")

    def __str__(self):
        return {"Z": "Z", "Q": "Q"}.get(self.kind, f"F{self.characteristic}")

    def to_json(self):
        return {"kind": self.kind, "characteristic": self.characteristic}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["kind"], int(obj.get("characteristic", 0)))


ZZ = Scalars("Z")
QQ = Scalars("Q")


def GF(p: int) -> Scalars:
    return Scalars("F", p)


@dataclass
class ExactMatrix:
    """Dense matrix with exact entries; ``data[i][j]`` is row i, column j.

    Treated as immutable after construction.
    """

    scalars: Scalars
    rows: int
    cols: int
    data: list

    def __post_init__(self):
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise ValueError("entry count must be rows x cols")

    @classmethod
    def from_rows(cls, scalars: Scalars, rows_data) -> "ExactMatrix":
        data = [[scalars.coerce(v) for v in row] for row in rows_data]
        ncols = len(data[0]) if data else 0
        return cls(scalars, len(data), ncols, data)

    @classmethod
    def zero(cls, scalars: Scalars, rows: int, cols: int) -> "ExactMatrix":
        z = scalars.coerce(0)
        return cls(scalars, rows, cols, [[z] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, scalars: Scalars, n: int) -> "ExactMatrix":
        m = cls.zero(scalars, n, n)
        one = scalars.coerce(1)
        for i in range(n):
            m.data[i][i] = one
        return m

    def copy(self) -> "ExactMatrix":
        return ExactMatrix(self.scalars, self.rows, self.cols, [row[:] for row in self.data])

    def column(self, j: int) -> list:
        return [self.data[i][j] for i in range(self.rows)]

    def is_zero(self) -> bool:
        return all(not v for row in self.data for v in row)

    def __eq__(self, other):
        return (
            isinstance(other, ExactMatrix)
            and self.scalars == other.scalars
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        return mat_mul(self, other)


def mat_mul(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    if a.cols != b.rows:
        raise ValueError(f"shape mismatch {a.rows}x{a.cols} @ {b.rows}x{b.cols}")
    scal = a.scalars
    out = ExactMatrix.zero(scal, a.rows, b.cols)
    bd = b.data
    for i in range(a.rows):
        arow = a.data[i]
        orow = out.data[i]
        for k in range(a.cols):
            v = arow[k]
            if v:
                brow = bd[k]
                for j in range(b.cols):
                    if brow[j]:
                        orow[j] += v * brow[j]
    if scal.kind == "F":
        p = scal.characteristic
        for row in out.data:
            for j in range(len(row)):
                row[j] %= p
    return out


def hstack(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    if a.rows != b.rows:
        raise ValueError("row mismatch in hstack")
    data = [a.data[i] + b.data[i] for i in range(a.rows)]
    return ExactMatrix(a.scalars, a.rows, a.cols + b.cols, data)


def from_columns(scalars: Scalars, nrows: int, cols: list) -> ExactMatrix:
    data = [[cols[j][i] for j in range(len(cols))] for i in range(nrows)]
    return ExactMatrix(scalars, nrows, len(cols), data)


# ---------------------------------------------------------------------------
# Smith normal form over Z
# ---------------------------------------------------------------------------


def smith_normal_form(a: ExactMatrix, need_u: bool = True, need_v: bool = True):
    """Return (U, D, V) with U*A*V = D, U and V unimodular, D diagonal
    with nonnegative entries and d_i | d_{i+1}.

    Pivots are chosen with minimal absolute value to limit coefficient
    growth.  Total on every integer matrix.

    >>> A = ExactMatrix.from_rows(ZZ, [[2, 0], [0, 3]])
    >>> U, D, V = smith_normal_form(A)
    >>> [D.data[0][0], D.data[1][1]]
    [1, 6]
    """
    if a.scalars.kind != "Z":
        raise ValueError("Smith normal form requires integer entries")
    m, n = a.rows, a.cols
    d = [row[:] for row in a.data]
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)] if need_u else None
    v = [[1 if i == j else 0 for j in range(n)] for i in range(n)] if need_v else None

    def swap_rows(i, j):
        if i != j:
            d[i], d[j] = d[j], d[i]
            if u is not None:
                u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        if i != j:
            for row in d:
                row[i], row[j] = row[j], row[i]
            if v is not None:
                for row in v:
                    row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):
        # row dst -= q * row src
        if q:
            drow, srow = d[dst], d[src]
            for j in range(n):
                if srow[j]:
                    drow[j] -= q * srow[j]
            if u is not None:
                urow_d, urow_s = u[dst], u[src]
                for j in range(m):
                    if urow_s[j]:
                        urow_d[j] -= q * urow_s[j]

    def add_col(src, dst, q):
        # col dst -= q * col src
        if q:
            for row in d:
                if row[src]:
                    row[dst] -= q * row[src]
            if v is not None:
                for row in v:
                    if row[src]:
                        row[dst] -= q * row[src]

    t = 0
    while True:
        # minimal-absolute-value pivot in the trailing submatrix
        best = None
        piv = None
        for i in range(t, m):
            row = d[i]
            for j in range(t, n):
                val = row[j]
                if val:
                    av = -val if val < 0 else val
                    if best is None or av < best:
                        best, piv = av, (i, j)
                        if av == 1:
                            break
            if best == 1:
                break
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])

        while True:
            pivot = d[t][t]
            dirty = False
            for i in range(t + 1, m):
                if d[i][t]:
                    add_row(t, i, d[i][t] // pivot)
            rem_rows = [i for i in range(t + 1, m) if d[i][t]]
            if rem_rows:
                # a remainder strictly smaller than |pivot| appeared
                i_min = min(rem_rows, key=lambda i: abs(d[i][t]))
                swap_rows(t, i_min)
                continue
            pivot = d[t][t]
            for j in range(t + 1, n):
                if d[t][j]:
                    add_col(t, j, d[t][j] // pivot)
            rem_cols = [j for j in range(t + 1, n) if d[t][j]]
            if rem_cols:
                j_min = min(rem_cols, key=lambda j: abs(d[t][j]))
                swap_cols(t, j_min)
                continue
            # pivot must divide the rest of the submatrix for the chain
            pivot = d[t][t]
            for i in range(t + 1, m):
                row = d[i]
                for j in range(t + 1, n):
                    if row[j] % pivot:
                        add_row(i, t, -1)  # fold row i into row t, retry
                        dirty = True
                        break
                if dirty:
                    break
            if dirty:
                continue
            break
        t += 1

    for i in range(min(m, n)):
        if d[i][i] < 0:
            d[i][i] = -d[i][i]
            if u is not None:
                u[i] = [-x for x in u[i]]

    dm = ExactMatrix(ZZ, m, n, d)
    um = ExactMatrix(ZZ, m, m, u) if need_u else None
    vm = ExactMatrix(ZZ, n, n, v) if need_v else None
    return um, dm, vm


def determinant(a: ExactMatrix):
    """Exact determinant (Bareiss fraction-free over Z, elimination over fields)."""
    if a.rows != a.cols:
        raise ValueError("determinant of a nonsquare matrix")
    n = a.rows
    if n == 0:
        return a.scalars.coerce(1)
    m = [row[:] for row in a.data]
    if a.scalars.kind == "Z":
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
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
                m[i][k] = 0
            prev = m[k][k]
        return sign * m[n - 1][n - 1]
    det = a.scalars.coerce(1)
    for k in range(n):
        pivot_row = next((i for i in range(k, n) if m[i][k]), None)
        if pivot_row is None:
            return a.scalars.coerce(0)
        if pivot_row != k:
            m[k], m[pivot_row] = m[pivot_row], m[k]
            det = -det
        det = a.scalars.coerce(det * m[k][k])
        inv = a.scalars.invert(m[k][k])
        for i in range(k + 1, n):
            if m[i][k]:
                factor = a.scalars.coerce(m[i][k] * inv)
                m[i] = [a.scalars.coerce(x - factor * y) for x, y in zip(m[i], m[k])]
    return det


# ---------------------------------------------------------------------------
# Field elimination
# ---------------------------------------------------------------------------


def _rref(a: ExactMatrix):
    """Reduced row echelon form; returns (matrix rows, pivot column list)."""
    scal = a.scalars
    m = [row[:] for row in a.data]
    rows, cols = a.rows, a.cols
    pivots = []
    r = 0
    for c in range(cols):
        pivot_row = next((i for i in range(r, rows) if m[i][c]), None)
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        inv = scal.invert(m[r][c])
        m[r] = [scal.coerce(x * inv) for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [scal.coerce(x - f * y) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(a: ExactMatrix) -> int:
    if a.rows == 0 or a.cols == 0:
        return 0
    if a.scalars.kind == "Z":
        _, d, _ = smith_normal_form(a, need_u=False, need_v=False)
        return sum(1 for i in range(min(a.rows, a.cols)) if d.data[i][i])
    _, pivots = _rref(a)
    return len(pivots)


def kernel_basis(a: ExactMatrix) -> ExactMatrix:
    """Columns spanning ker(A).

    Over Z the result is a basis of the full kernel lattice (saturated:
    the columns extend to a basis of Z^cols).
    """
    scal = a.scalars
    n = a.cols
    if n == 0:
        return ExactMatrix.zero(scal, 0, 0)
    if a.rows == 0:
        return ExactMatrix.identity(scal, n)
    if scal.kind == "Z":
        _, d, v = smith_normal_form(a, need_u=False)
        r = sum(1 for i in range(min(a.rows, n)) if d.data[i][i])
        cols = [[v.data[i][j] for i in range(n)] for j in range(r, n)]
        return from_columns(scal, n, cols)
    m, pivots = _rref(a)
    free = [c for c in range(n) if c not in pivots]
    cols = []
    for fc in free:
        vec = [scal.coerce(0)] * n
        vec[fc] = scal.coerce(1)
        for r_i, pc in enumerate(pivots):
            vec[pc] = scal.coerce(-m[r_i][fc])
        cols.append(vec)
    return from_columns(scal, n, cols)


def solve_columns(a: ExactMatrix, b: ExactMatrix):
    """Solve A X = B column by column.

    Returns a list with one entry per column of B: a solution vector
    (length A.cols), or None when that column is not in the span (over Z:
    not in the integer column lattice) of A.
    """
    scal = a.scalars
    if a.rows != b.rows:
        raise ValueError("row mismatch in solve")
    if scal.kind == "Z":
        u, d, v = smith_normal_form(a)
        r = min(a.rows, a.cols)
        ub = mat_mul(u, b)
        out = []
        for j in range(b.cols):
            y = [0] * a.cols
            ok = True
            for i in range(a.rows):
                c = ub.data[i][j]
                if i < r and d.data[i][i]:
                    if c % d.data[i][i]:
                        ok = False
                        break
                    y[i] = c // d.data[i][i]
                elif c:
                    ok = False
                    break
            if not ok:
                out.append(None)
            else:
                out.append([sum(v.data[i][k] * y[k] for k in range(a.cols)) for i in range(a.cols)])
        return out
    # eliminate [A | I] so the transform applies to every right-hand side
    aug = hstack(a, ExactMatrix.identity(scal, a.rows))
    m, pivots = _rref(aug)
    pivots = [pc for pc in pivots if pc < a.cols]
    nr = len(pivots)
    out = []
    for j in range(b.cols):
        rhs = [
            scal.coerce(sum(m[i][a.cols + k] * b.data[k][j] for k in range(a.rows)))
            for i in range(a.rows)
        ]
        if any(rhs[i] for i in range(nr, a.rows)):
            out.append(None)
            continue
        sol = [scal.coerce(0)] * a.cols
        for r_i, pc in enumerate(pivots):
            sol[pc] = rhs[r_i]
        out.append(sol)
    return out


def in_column_span(a: ExactMatrix, b: ExactMatrix) -> bool:
    """Is every column of B in the (lattice) span of A's columns?"""
    return all(s is not None for s in solve_columns(a, b))


# ---------------------------------------------------------------------------
# Groups from matrices
# ---------------------------------------------------------------------------


def cokernel(a: ExactMatrix) -> FGAbGroup:
    """Cokernel of A: rows are generators, columns are relations.

    >>> cokernel(ExactMatrix.from_rows(ZZ, [[2, 0], [0, 3]]))
    FGAbGroup(free_rank=0, torsion=(6,))
    >>> cokernel(ExactMatrix.from_rows(ZZ, [[2]]))
    FGAbGroup(free_rank=0, torsion=(2,))
    """
    if a.rows == 0:
        return FGAbGroup.zero()
    if a.cols == 0:
        return FGAbGroup.free(a.rows)
    if a.scalars.kind == "Z":
        _, d, _ = smith_normal_form(a, need_u=False, need_v=False)
        divisors = []
        r = 0
        for i in range(min(a.rows, a.cols)):
            if d.data[i][i]:
                r += 1
                if d.data[i][i] > 1:
                    divisors.append(d.data[i][i])
        return FGAbGroup(a.rows - r, tuple(divisors))
    return FGAbGroup.free(a.rows - rank(a))


def homology_at(d_in: ExactMatrix, d_out: ExactMatrix) -> FGAbGroup:
    """ker(d_out) / im(d_in) for free chain groups.

    ``d_in`` maps into the middle term (its columns are boundaries),
    ``d_out`` maps out of it.  Raises NotAComplex unless d_out . d_in = 0.

    >>> z = ExactMatrix.zero(ZZ, 1, 1)
    >>> two = ExactMatrix.from_rows(ZZ, [[2]])
    >>> homology_at(two, z)
    FGAbGroup(free_rank=0, torsion=(2,))
    """
    if d_in.rows != d_out.cols:
        raise ValueError("middle dimensions disagree")
    if d_in.cols and d_out.rows and not mat_mul(d_out, d_in).is_zero():
        raise NotAComplex("composite of consecutive differentials is nonzero")
    kern = kernel_basis(d_out)
    if kern.cols == 0:
        return FGAbGroup.zero()
    if d_in.cols == 0:
        return cokernel(ExactMatrix.zero(d_in.scalars, kern.cols, 0))
    coords = solve_columns(kern, d_in)
    if any(c is None for c in coords):
        raise ExactLinAlgError("image does not lie in the kernel")
    rel = from_columns(d_in.scalars, kern.cols, coords)
    return cokernel(rel)
