"""Exact rank, kernel and linear-system solving over F_p.

This is the computational workhorse: every cohomology dimension in the
package reduces to the rank of an explicit matrix over F_p.

The dense elimination is blocked.  A panel of columns is eliminated with
immediate reduction; the accumulated multipliers are then applied to the
trailing submatrix with one float64 GEMM per block.  The float path is
exact because block * (p-1)^2 < 2^53, and entries are re-reduced mod p
after every update.  For moduli too large for that bound a plain row-op
elimination (immediate reduction, still exact) takes over.

A Markowitz-style sparse elimination with a dense fallback is available
for matrices that start out very sparse (the multiplication-map blocks
have at most 3 nonzeros per column).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .field import PrimeField, inverse_mod

# Unreduced magnitudes are capped at 2^52, not 2^53: the quotient estimate
# q = floor(x * (1/p)) is then off by at most one and q*p is still exactly
# representable, so one branchless correction restores the true residue.
_FLOAT_EXACT = 2**52
_DEFAULT_BLOCK = 256
_PANEL_LEAF = 16


def _reduce_inplace(a: np.ndarray, p: float) -> None:
    """Exact in-place reduction of integral float64 values (|x| <= 2^52)
    to [0, p)."""
    q = a * (1.0 / p)
    np.floor(q, out=q)
    q *= p
    a -= q
    np.add(a, p, out=a, where=a < 0)
    np.subtract(a, p, out=a, where=a >= p)


def rank_dense(a: np.ndarray, p: int, block: int = _DEFAULT_BLOCK) -> int:
    """Rank over F_p by blocked Gaussian elimination with delayed reduction.

    The working matrix is float64 holding exact integers.  Panel slabs and
    pivot rows are kept reduced; the trailing submatrix accumulates GEMM
    updates unreduced until the 2^52 exactness budget would be exceeded.
    """
    a = np.asarray(a)
    if a.ndim != 2:
        raise ValueError("rank_dense expects a 2-d array")
    m, n = a.shape
    if m == 0 or n == 0:
        return 0
    max_block = _FLOAT_EXACT // (8 * (p - 1) ** 2)
    if max_block < 8:
        w = np.array(a, dtype=np.int64) % p
        return _rank_rowops(w, p)
    block = int(max(8, min(block, max_block)))
    step_growth = block * (p - 1) ** 2  # max magnitude added per block step

    w = (np.asarray(a, dtype=np.int64) % p).astype(np.float64)

    r = 0
    c = 0
    rank = 0
    slack = float(_FLOAT_EXACT)  # remaining unreduced-accumulation budget
    pf = float(p)
    scratch = _GemmScratch()
    while r < m and c < n:
        cb = min(block, n - c)
        _reduce_inplace(w[r:m, c : c + cb], pf)
        piv_cols = _eliminate_panel(w, p, r, c, cb, scratch)
        k = len(piv_cols)
        rank += k
        if k and c + cb < n and r + k < m:
            if slack < 2 * step_growth + p:
                _reduce_inplace(w[r:m, c + cb : n], pf)
                slack = float(_FLOAT_EXACT)
            _apply_pivots(w, p, r, np.asarray(piv_cols), c + cb, n, scratch,
                          reduce_out=False)
            slack -= step_growth
        r += k
        c += cb
    return rank


class _GemmScratch:
    """Reusable buffers for the trailing-update GEMMs (allocation here is
    page-fault bound and would otherwise dominate)."""

    def __init__(self):
        self._bufs: dict[str, np.ndarray] = {}

    def out(self, name: str, rows: int, cols: int) -> np.ndarray:
        need = rows * cols
        buf = self._bufs.get(name)
        if buf is None or buf.size < need:
            buf = np.empty(max(need, 2 * (0 if buf is None else buf.size)),
                           dtype=np.float64)
            self._bufs[name] = buf
        return buf[:need].reshape(rows, cols)


def _eliminate_panel(a: np.ndarray, p: int, r: int, c: int, cb: int,
                     scratch: "_GemmScratch") -> list[int]:
    """Eliminate columns c..c+cb below row r in place; multipliers are stored
    in the eliminated positions.  Returns the pivot column indices.

    Recursive: the left half is eliminated, its pivots are applied to the
    right half with one GEMM, then the right half is eliminated.  The slab
    must enter reduced to [0, p).
    """
    m = a.shape[0]
    if r >= m:
        return []
    if cb <= _PANEL_LEAF:
        return _eliminate_panel_leaf(a, p, r, c, cb)
    half = cb // 2
    piv1 = _eliminate_panel(a, p, r, c, half, scratch)
    k1 = len(piv1)
    if k1 and r + k1 < m:
        _apply_pivots(a, p, r, np.asarray(piv1), c + half, c + cb, scratch,
                      reduce_out=True)
    piv2 = _eliminate_panel(a, p, r + k1, c + half, cb - half, scratch)
    return piv1 + piv2


def _eliminate_panel_leaf(a: np.ndarray, p: int, r: int, c: int, cb: int) -> list[int]:
    """Unblocked elimination of a narrow slab.  Only the current column, the
    multipliers and the pivot-row segment are kept reduced; other slab
    entries accumulate at most p + cb*p^2 < 2^52, re-reduced on demand."""
    m = a.shape[0]
    pf = float(p)
    piv_cols: list[int] = []
    rr = r
    for j in range(c, c + cb):
        col = a[rr:m, j]
        _reduce_inplace(col, pf)
        nz = np.flatnonzero(col)
        if nz.size == 0:
            continue
        pr = rr + int(nz[0])
        if pr != rr:
            a[[rr, pr], :] = a[[pr, rr], :]
        inv = float(inverse_mod(int(a[rr, j]), p))
        if rr + 1 < m:
            f = a[rr + 1 : m, j] * inv
            _reduce_inplace(f, pf)
            a[rr + 1 : m, j] = f
            if j + 1 < c + cb:
                seg = a[rr, j + 1 : c + cb]
                _reduce_inplace(seg, pf)
                a[rr + 1 : m, j + 1 : c + cb] -= f[:, None] * seg
        piv_cols.append(j)
        rr += 1
        if rr == m:
            break
    return piv_cols


def _apply_pivots(a: np.ndarray, p: int, r: int, piv_cols: np.ndarray,
                  s0: int, s1: int, scratch: "_GemmScratch", reduce_out: bool) -> None:
    """Apply the pivots of rows r..r+k (multipliers stored at piv_cols) to
    columns [s0, s1) of every row below row r+k.

    Pivot rows are forward-substituted transiently; their stale stored
    values are never read again by the elimination.  With reduce_out the
    target region is reduced to [0, p) (required wherever a later panel
    elimination will read it)."""
    m = a.shape[0]
    k = len(piv_cols)
    pf = float(p)
    l11 = a[r : r + k, piv_cols]  # strictly lower part = multipliers
    l21 = a[r + k : m, piv_cols]
    t = a[r : r + k, s0:s1].copy()
    _reduce_inplace(t, pf)
    if k > 1:
        # final pivot rows u = L11^{-1} t via one GEMM instead of row-by-row
        # forward substitution
        linv = _unit_lower_inverse(l11, p)
        u = np.matmul(linv, t, out=scratch.out("u", k, s1 - s0))
        _reduce_inplace(u, pf)
    else:
        u = t
    tgt = a[r + k : m, s0:s1]
    prod = np.matmul(l21, u, out=scratch.out("prod", m - r - k, s1 - s0))
    tgt -= prod
    if reduce_out:
        _reduce_inplace(tgt, pf)


def _unit_lower_inverse(l: np.ndarray, p: int) -> np.ndarray:
    """Inverse mod p of the unit lower-triangular matrix whose strictly
    lower part is stored in l (diagonal and upper entries are ignored)."""
    k = l.shape[0]
    pf = float(p)
    x = np.eye(k)
    for i in range(1, k):
        s = l[i, :i] @ x[:i, :i]
        _reduce_inplace(s, pf)
        np.subtract(pf, s, out=s, where=s > 0)
        x[i, :i] = s
    return x


def _rank_rowops(a: np.ndarray, p: int) -> int:
    """Unblocked elimination with immediate reduction (any p < 2^31)."""
    m, n = a.shape
    r = 0
    for j in range(n):
        nz = np.flatnonzero(a[r:m, j])
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            a[[r, pr], :] = a[[pr, r], :]
        inv = inverse_mod(int(a[r, j]), p)
        if r + 1 < m:
            f = a[r + 1 : m, j] * inv % p
            a[r + 1 : m, j:] = (a[r + 1 : m, j:] - f[:, None] * a[r, j:]) % p
        r += 1
        if r == m:
            break
    return r


def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form over F_p; returns (R, pivot column list)."""
    a = np.array(a, dtype=np.int64) % p
    m, n = a.shape
    pivots: list[int] = []
    r = 0
    for j in range(n):
        if r >= m:
            break
        nz = np.flatnonzero(a[r:m, j])
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            a[[r, pr], :] = a[[pr, r], :]
        a[r, :] = a[r, :] * inverse_mod(int(a[r, j]), p) % p
        col = a[:, j].copy()
        col[r] = 0
        rows = np.flatnonzero(col)
        if rows.size:
            a[rows, :] = (a[rows, :] - col[rows, None] * a[r, :]) % p
        pivots.append(j)
        r += 1
    return a[: len(pivots)], pivots


def kernel_basis(a: np.ndarray, p: int) -> list[np.ndarray]:
    """Basis of the right null space of a over F_p.

    Size is cols - rank(a); each returned v satisfies a @ v == 0 mod p.
    """
    a = np.asarray(a, dtype=np.int64)
    n = a.shape[1]
    red, pivots = rref(a, p)
    free = [j for j in range(n) if j not in set(pivots)]
    basis = []
    for f in free:
        v = np.zeros(n, dtype=np.int64)
        v[f] = 1
        for i, pj in enumerate(pivots):
            v[pj] = (-int(red[i, f])) % p
        basis.append(v)
    return basis


@dataclass(frozen=True)
class AffineSolution:
    """A particular solution together with the solution-space dimension."""

    x: np.ndarray
    null_dim: int


def solve_affine(a: np.ndarray, b: np.ndarray, p: int) -> Optional[AffineSolution]:
    """Solve a @ x = b over F_p; None marks an inconsistent system."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    if a.shape[0] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape[0]} rows vs {b.shape[0]} rhs entries")
    m, n = a.shape
    aug = np.concatenate([a % p, (b % p)[:, None]], axis=1)
    red, pivots = rref(aug, p)
    if n in pivots:
        return None
    x = np.zeros(n, dtype=np.int64)
    for i, pj in enumerate(pivots):
        x[pj] = int(red[i, n])
    return AffineSolution(x=x, null_dim=n - len(pivots))


# ---------------------------------------------------------------------------
# Sparse (Markowitz-style) elimination
# ---------------------------------------------------------------------------


def rank_sparse(a: np.ndarray, p: int, fallback_density: float = 0.2) -> int:
    """Rank via structural elimination with Markowitz-style pivoting.

    Pivots are chosen in the sparsest column (ties by index), then the
    sparsest row within it.  When fill-in pushes the active submatrix past
    ``fallback_density`` the remainder is densified and handed to
    :func:`rank_dense`.
    """
    a = np.asarray(a, dtype=np.int64) % p
    m, n = a.shape
    if m == 0 or n == 0:
        return 0
    rows: list[dict[int, int]] = [dict() for _ in range(m)]
    col_rows: dict[int, set[int]] = {}
    ii, jj = np.nonzero(a)
    for i, j in zip(ii.tolist(), jj.tolist()):
        rows[i][j] = int(a[i, j])
        col_rows.setdefault(j, set()).add(i)
    nnz = int(ii.size)
    active_rows = {i for i in range(m) if rows[i]}
    rank = 0

    while col_rows:
        n_active_r = len(active_rows)
        n_active_c = len(col_rows)
        if min(n_active_r, n_active_c) > 32 and nnz > fallback_density * n_active_r * n_active_c:
            return rank + _densify_rank(rows, active_rows, col_rows, p)
        j = min(col_rows, key=lambda c: (len(col_rows[c]), c))
        i = min(col_rows[j], key=lambda r: (len(rows[r]), r))
        piv = rows[i]
        pinv = inverse_mod(piv[j], p)
        others = [r for r in col_rows[j] if r != i]
        for r in others:
            f = rows[r][j] * pinv % p
            row = rows[r]
            for jc, v in piv.items():
                nv = (row.get(jc, 0) - f * v) % p
                if nv:
                    if jc not in row:
                        col_rows.setdefault(jc, set()).add(r)
                        nnz += 1
                    row[jc] = nv
                else:
                    if jc in row:
                        del row[jc]
                        col_rows[jc].discard(r)
                        if not col_rows[jc]:
                            del col_rows[jc]
                        nnz -= 1
            if not row:
                active_rows.discard(r)
        # retire the pivot row and column
        for jc in piv:
            s = col_rows.get(jc)
            if s is not None:
                s.discard(i)
                if not s:
                    del col_rows[jc]
        nnz -= len(piv)
        rows[i] = dict()
        active_rows.discard(i)
        rank += 1
    return rank


def _densify_rank(rows, active_rows, col_rows, p: int) -> int:
    ridx = sorted(active_rows)
    cidx = sorted(col_rows)
    cmap = {j: k for k, j in enumerate(cidx)}
    sub = np.zeros((len(ridx), len(cidx)), dtype=np.int64)
    for k, i in enumerate(ridx):
        for j, v in rows[i].items():
            sub[k, cmap[j]] = v
    return rank_dense(sub, p)


# ---------------------------------------------------------------------------
# Matrix container
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MatrixFp:
    """A matrix over one prime field with a storage-origin tag.

    Entries are kept reduced in an int64 array; ``storage`` records whether
    the matrix was assembled from sparse data, which steers the default
    rank algorithm.
    """

    field: PrimeField
    data: np.ndarray
    storage: str = "dense"

    def __post_init__(self):
        d = np.asarray(self.data, dtype=np.int64)
        if d.ndim != 2:
            raise ValueError("matrix data must be 2-dimensional")
        if d.size and (d.min() < 0 or d.max() >= self.field.p):
            d = d % self.field.p
        object.__setattr__(self, "data", d)
        if self.storage not in ("dense", "sparse"):
            raise ValueError(f"unknown storage tag {self.storage!r}")

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def density(self) -> float:
        if self.data.size == 0:
            return 0.0
        return float(np.count_nonzero(self.data)) / self.data.size

    @classmethod
    def zeros(cls, field: PrimeField, rows: int, cols: int, storage: str = "dense") -> "MatrixFp":
        return cls(field, np.zeros((rows, cols), dtype=np.int64), storage)

    @classmethod
    def identity(cls, field: PrimeField, n: int) -> "MatrixFp":
        return cls(field, np.eye(n, dtype=np.int64))

    @classmethod
    def from_triplets(cls, field: PrimeField, rows: int, cols: int,
                      triplets) -> "MatrixFp":
        a = np.zeros((rows, cols), dtype=np.int64)
        for i, j, v in triplets:
            a[i, j] = (a[i, j] + v) % field.p
        return cls(field, a, storage="sparse")

    @classmethod
    def random(cls, field: PrimeField, rows: int, cols: int, rng: np.random.Generator) -> "MatrixFp":
        return cls(field, rng.integers(0, field.p, size=(rows, cols), dtype=np.int64))

    def rank(self, method: str = "auto") -> int:
        if method == "auto":
            use_sparse = (
                self.storage == "sparse"
                and min(self.rows, self.cols) >= 256
                and self.density < 0.02
            )
            method = "sparse" if use_sparse else "dense"
        if method == "dense":
            return rank_dense(self.data, self.field.p)
        if method == "sparse":
            return rank_sparse(self.data, self.field.p)
        raise ValueError(f"unknown rank method {method!r}")

    def kernel_basis(self) -> list[np.ndarray]:
        return kernel_basis(self.data, self.field.p)

    def solve_affine(self, b: np.ndarray) -> Optional[AffineSolution]:
        return solve_affine(self.data, b, self.field.p)

    def transpose(self) -> "MatrixFp":
        return MatrixFp(self.field, self.data.T.copy(), self.storage)

    def __matmul__(self, other: "MatrixFp") -> "MatrixFp":
        if self.field.p != other.field.p:
            raise ValueError("mixed moduli in matrix product")
        prod = (self.data @ other.data) % self.field.p
        return MatrixFp(self.field, prod)
