"""Exact integer linear algebra on dense numpy arrays.

Everything here is exact.  Arrays live in int64 while entries provably
fit (a conservative cap tracks the largest absolute value an operation
could produce) and escalate to dtype=object — arbitrary-precision Python
integers — the moment they might not.  Escalation is per matrix, so a
reduction whose transforms swell keeps its main matrix on the fast path.

The Smith normal form keeps four transforms (U, U^-1, V, V^-1 with
A = U D V) because downstream homology needs kernels *and* kernel
coordinates; co-tracking inverses through elementary operations is far
cheaper than inverting afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DefectError

# Above this, an int64 slot is considered at risk for the next operation.
_LIMIT = 1 << 62


# --- array plumbing ---------------------------------------------------------

def as_int_array(data) -> np.ndarray:
    """Dense integer array; int64 when every entry fits, object otherwise."""
    if isinstance(data, np.ndarray) and data.dtype in (np.int64, object):
        return data
    try:
        return np.array(data, dtype=np.int64)
    except OverflowError:
        return np.array(data, dtype=object)


def _shrink(arr: np.ndarray) -> np.ndarray:
    """Downcast an object array back to int64 when its entries allow."""
    if arr.dtype != object:
        return arr
    if arr.size and int(np.abs(arr).max()) >= _LIMIT:
        return arr
    return arr.astype(np.int64)


def _maxabs(arr: np.ndarray) -> int:
    if arr.size == 0:
        return 0
    if arr.dtype == object:
        return max(abs(int(x)) for x in arr.flat)
    return int(np.abs(arr).max())


def dot_exact(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product with a guaranteed-exact result.

    Stays in int64 when the worst-case accumulated value fits; otherwise
    computes with Python integers and shrinks back if possible.
    """
    a = as_int_array(a)
    b = as_int_array(b)
    inner = a.shape[-1] if a.ndim > 1 else a.shape[0]
    if a.dtype == np.int64 and b.dtype == np.int64:
        bound = _maxabs(a) * _maxabs(b) * max(inner, 1)
        if bound < _LIMIT:
            return a @ b
    return _shrink(np.dot(a.astype(object), b.astype(object)))


def eye_like(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


# --- primes and CRT ---------------------------------------------------------

_SMALL_PRIMES: list[int] = []
_CRT_PRIMES: list[int] = []


def _small_primes() -> list[int]:
    if not _SMALL_PRIMES:
        sieve = np.ones(1100, dtype=bool)
        sieve[:2] = False
        for i in range(2, 34):
            if sieve[i]:
                sieve[i * i::i] = False
        _SMALL_PRIMES.extend(int(i) for i in np.nonzero(sieve)[0])
    return _SMALL_PRIMES


def crt_primes(count: int) -> list[int]:
    """The first ``count`` primes descending from 2^20 (20-bit moduli keep
    all modular arithmetic comfortably inside int64)."""
    small = _small_primes()
    candidate = _CRT_PRIMES[-1] - 2 if _CRT_PRIMES else (1 << 20) - 1
    while len(_CRT_PRIMES) < count:
        is_prime = True
        for p in small:
            if p * p > candidate:
                break
            if candidate % p == 0:
                is_prime = False
                break
        if is_prime:
            _CRT_PRIMES.append(candidate)
        candidate -= 2
    return _CRT_PRIMES[:count]


def _crt_combine(residues: list[int], moduli: list[int]) -> int:
    """Symmetric representative congruent to every residue."""
    x, m = 0, 1
    for r, p in zip(residues, moduli):
        delta = ((r - x) * pow(m % p, p - 2, p)) % p
        x += m * delta
        m *= p
    if 2 * x > m:
        x -= m
    return x


def _mod_array(a: np.ndarray, p: int) -> np.ndarray:
    if a.dtype == object:
        return np.array([[int(x) % p for x in row] for row in a], dtype=np.int64) \
            if a.ndim == 2 else np.array([int(x) % p for x in a], dtype=np.int64)
    return (a % p).astype(np.int64)


def det_mod(a: np.ndarray, p: int) -> int:
    """Determinant modulo a prime, by Gaussian elimination over F_p."""
    m = _mod_array(a, p)
    n = m.shape[0]
    det = 1
    for col in range(n):
        nz = np.nonzero(m[col:, col])[0]
        if nz.size == 0:
            return 0
        piv = col + int(nz[0])
        if piv != col:
            m[[col, piv]] = m[[piv, col]]
            det = p - det
        pv = int(m[col, col])
        det = (det * pv) % p
        inv = pow(pv, p - 2, p)
        if col + 1 < n:
            factors = (m[col + 1:, col] * inv) % p
            m[col + 1:, col:] = (m[col + 1:, col:] - np.outer(factors, m[col, col:])) % p
    return det


def rank_mod(a: np.ndarray, p: int) -> int:
    """Rank over F_p (a lower bound for the rank over Q)."""
    m = _mod_array(a, p)
    rows, cols = m.shape
    rank = 0
    for col in range(cols):
        if rank == rows:
            break
        nz = np.nonzero(m[rank:, col])[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            m[[rank, piv]] = m[[piv, rank]]
        inv = pow(int(m[rank, col]), p - 2, p)
        if rank + 1 < rows:
            factors = (m[rank + 1:, col] * inv) % p
            m[rank + 1:, col:] = (m[rank + 1:, col:] - np.outer(factors, m[rank, col:])) % p
        rank += 1
    return rank


def _hadamard_bits(a: np.ndarray) -> int:
    """Upper bound on bit length of |det| via Hadamard's inequality."""
    bits = 1
    for row in a:
        norm_sq = sum(int(x) * int(x) for x in row.flat)
        if norm_sq == 0:
            return 1  # a zero row: det is 0
        bits += (norm_sq.bit_length() + 1) // 2 + 1
    return bits


def det_bareiss(a) -> int:
    """Fraction-free determinant; right choice for small dense matrices."""
    m = [[int(x) for x in row] for row in np.asarray(a, dtype=object)]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if m[r][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def det_exact(a: np.ndarray) -> int:
    """Exact determinant: Bareiss when small, CRT + Hadamard bound when big."""
    a = as_int_array(a)
    n = a.shape[0]
    if n == 0:
        return 1
    if n <= 12:
        return det_bareiss(a)
    bits = _hadamard_bits(a)
    primes = crt_primes(bits // 19 + 2)
    residues = [det_mod(a, p) for p in primes]
    return _crt_combine(residues, primes)


def _inverse_mod(a: np.ndarray, p: int) -> np.ndarray | None:
    """Inverse over F_p, or None when singular mod p."""
    n = a.shape[0]
    m = np.concatenate([_mod_array(a, p), np.eye(n, dtype=np.int64)], axis=1)
    for col in range(n):
        nz = np.nonzero(m[col:, col])[0]
        if nz.size == 0:
            return None
        piv = col + int(nz[0])
        if piv != col:
            m[[col, piv]] = m[[piv, col]]
        inv = pow(int(m[col, col]), p - 2, p)
        m[col] = (m[col] * inv) % p
        others = [r for r in range(n) if r != col and m[r, col]]
        if others:
            m[others] = (m[others] - np.outer(m[others, col], m[col])) % p
    return m[:, n:]


def inverse_unimodular(a: np.ndarray) -> np.ndarray:
    """Exact inverse of an integer matrix with determinant +-1.

    Reconstructs the (integral) inverse from enough modular inverses and
    certifies ``a @ inverse == I`` exactly, growing the prime set until
    the certificate holds.  Raises ``ValueError`` when the matrix is not
    unimodular (a unimodular matrix is invertible mod every prime).
    """
    a = as_int_array(a)
    n = a.shape[0]
    if n == 0:
        return a.reshape(0, 0)
    ident = np.eye(n, dtype=object)
    # worst case: inverse entries are (n-1)-minors
    cap_bits = _hadamard_bits(a) + 8
    batch = 4
    x = np.zeros((n, n), dtype=object)
    modulus = 1
    used = 0
    while True:
        primes = crt_primes(used + batch)[used:]
        for p in primes:
            inv_p = _inverse_mod(a, p)
            if inv_p is None:
                raise ValueError("matrix is singular modulo a prime; not unimodular")
            if modulus == 1:
                x = inv_p.astype(object)
                modulus = p
                continue
            m_inv = pow(modulus % p, p - 2, p)
            delta = ((inv_p - x % p) * m_inv) % p
            x = x + modulus * delta
            modulus *= p
        used += batch
        batch *= 2
        # symmetric lift, then certify
        half = modulus // 2
        lifted = np.where(x > half, x - modulus, x)
        if np.array_equal(dot_exact(a, lifted), ident):
            return _shrink(lifted.astype(object))
        if modulus.bit_length() > cap_bits:
            raise ValueError("inverse reconstruction failed; matrix not unimodular")


# --- Smith normal form ------------------------------------------------------

@dataclass
class SmithResult:
    """Decomposition A = U @ D @ V with U, V unimodular.

    ``diag`` holds the diagonal of D (nonnegative, each dividing the
    next, zeros trailing); ``rank`` counts the nonzero entries.  U^-1 and
    V^-1 come along for free from the elementary-operation bookkeeping.
    Kernel data: the columns of ``v_inv[:, rank:]`` are a basis of
    ker(A), and ``(v @ x)[rank:]`` are the coordinates of a kernel vector
    x in that basis.
    """

    diag: list[int]
    u: np.ndarray
    u_inv: np.ndarray
    v: np.ndarray
    v_inv: np.ndarray

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diag if d != 0)

    def d_matrix(self, shape: tuple[int, int]) -> np.ndarray:
        wide = any(abs(v) >= _LIMIT for v in self.diag)
        d = np.zeros(shape, dtype=object if wide else np.int64)
        for i, val in enumerate(self.diag):
            d[i, i] = val
        return d


class _Tracked:
    """The working matrix plus transforms, with swell-guarded updates."""

    def __init__(self, a: np.ndarray):
        rows, cols = a.shape
        self.mats: dict[str, np.ndarray] = {
            "a": a.copy(),
            "p": eye_like(rows), "pinv": eye_like(rows),
            "q": eye_like(cols), "qinv": eye_like(cols),
        }
        self.caps: dict[str, int | None] = {
            name: (_maxabs(m) if m.dtype == np.int64 else None)
            for name, m in self.mats.items()
        }

    def _prepare(self, name: str, growth: int) -> None:
        """Make sure `cap * (1 + growth)` fits; escalate to object if not."""
        cap = self.caps[name]
        if cap is None:
            return
        bound = cap * (1 + growth)
        if bound < _LIMIT:
            self.caps[name] = bound
            return
        true_max = _maxabs(self.mats[name])
        bound = true_max * (1 + growth)
        if bound < _LIMIT:
            self.caps[name] = bound
            return
        self.mats[name] = self.mats[name].astype(object)
        self.caps[name] = None

    # row operations: A <- E A, P <- E P, Pinv <- Pinv E^{-1}

    def row_axpy_batch(self, rows, src: int, qvec, lo: int = 0) -> None:
        """rows[i] -= qvec[i] * row[src] (on A and P; mirrored on Pinv)."""
        qmax = int(max(abs(int(q)) for q in qvec))
        if qmax == 0:
            return
        qsum = int(sum(abs(int(q)) for q in qvec))
        self._prepare("a", qmax)
        self._prepare("p", qmax)
        self._prepare("pinv", qsum)
        a, p, pinv = self.mats["a"], self.mats["p"], self.mats["pinv"]
        qcol = np.asarray(qvec, dtype=a.dtype)
        a[rows, lo:] -= np.outer(qcol, a[src, lo:])
        qcol = np.asarray(qvec, dtype=p.dtype)
        p[rows, :] -= np.outer(qcol, p[src, :])
        qcol = np.asarray(qvec, dtype=pinv.dtype)
        pinv[:, src] += pinv[:, rows] @ qcol

    def row_add(self, dst: int, src: int, lo: int = 0) -> None:
        self.row_axpy_batch([dst], src, [-1], lo=lo)

    def row_swap(self, r1: int, r2: int) -> None:
        if r1 == r2:
            return
        a, p, pinv = self.mats["a"], self.mats["p"], self.mats["pinv"]
        a[[r1, r2]] = a[[r2, r1]]
        p[[r1, r2]] = p[[r2, r1]]
        pinv[:, [r1, r2]] = pinv[:, [r2, r1]]

    def row_negate(self, r: int) -> None:
        a, p, pinv = self.mats["a"], self.mats["p"], self.mats["pinv"]
        a[r, :] *= -1
        p[r, :] *= -1
        pinv[:, r] *= -1

    # column operations: A <- A F, Q <- Q F, Qinv <- F^{-1} Qinv

    def col_axpy_batch(self, cols, src: int, qvec, lo: int = 0) -> None:
        """cols[i] -= qvec[i] * col[src] (on A and Q; mirrored on Qinv)."""
        qmax = int(max(abs(int(q)) for q in qvec))
        if qmax == 0:
            return
        qsum = int(sum(abs(int(q)) for q in qvec))
        self._prepare("a", qmax)
        self._prepare("q", qmax)
        self._prepare("qinv", qsum)
        a, q, qinv = self.mats["a"], self.mats["q"], self.mats["qinv"]
        qrow = np.asarray(qvec, dtype=a.dtype)
        a[lo:, cols] -= np.outer(a[lo:, src], qrow)
        qrow = np.asarray(qvec, dtype=q.dtype)
        q[:, cols] -= np.outer(q[:, src], qrow)
        qrow = np.asarray(qvec, dtype=qinv.dtype)
        qinv[src, :] += qrow @ qinv[cols, :]

    def col_swap(self, c1: int, c2: int) -> None:
        if c1 == c2:
            return
        a, q, qinv = self.mats["a"], self.mats["q"], self.mats["qinv"]
        a[:, [c1, c2]] = a[:, [c2, c1]]
        q[:, [c1, c2]] = q[:, [c2, c1]]
        qinv[[c1, c2]] = qinv[[c2, c1]]


def _nearest_quotients(vals: np.ndarray, p: int) -> np.ndarray:
    """Round-to-nearest quotients (deterministic tie-break toward +inf)."""
    return np.floor_divide(vals + p // 2, p)


def smith(a) -> SmithResult:
    """Smith normal form with full transform bookkeeping.

    Pivoting policy: the submatrix entry of least nonzero absolute value
    (first in row-major order on ties), which keeps intermediate swell
    low in practice.  Batched row/column reductions keep the inner loops
    inside numpy.
    """
    a = as_int_array(np.atleast_2d(a))
    rows, cols = a.shape
    st = _Tracked(a)
    mats = st.mats
    t = 0
    limit = min(rows, cols)
    while t < limit:
        work = mats["a"]
        sub = work[t:, t:]
        if sub.size == 0:
            break
        nonzero = sub != 0
        if not nonzero.any():
            break
        absolute = np.abs(sub)
        sentinel = int(absolute.max()) + 1
        masked = np.where(nonzero, absolute, sentinel)
        flat = int(np.argmin(masked))
        di, dj = divmod(flat, sub.shape[1])
        st.row_swap(t, t + di)
        st.col_swap(t, t + dj)
        if mats["a"][t, t] < 0:
            st.row_negate(t)
        while True:
            _clear_column(st, t)
            if _clear_row_once(st, t):
                continue  # a column swap re-dirtied column t
            pivot = int(mats["a"][t, t])
            bad = _find_nondivisible(mats["a"], t, pivot)
            if bad is None:
                break
            st.row_add(t, bad, lo=t)
        t += 1
    work = mats["a"]
    diag = [int(work[i, i]) for i in range(limit)]
    return SmithResult(
        diag=diag,
        u=_shrink(mats["pinv"]),
        u_inv=_shrink(mats["p"]),
        v=_shrink(mats["qinv"]),
        v_inv=_shrink(mats["q"]),
    )


def _clear_column(st: _Tracked, t: int) -> None:
    """Row-reduce until column t is pivot-only, pivot positive."""
    while True:
        a = st.mats["a"]
        if a[t, t] < 0:
            st.row_negate(t)
        col = a[t + 1:, t]
        nz = np.nonzero(col != 0)[0]
        if nz.size == 0:
            return
        pivot = int(a[t, t])
        qvec = _nearest_quotients(col[nz], pivot)
        st.row_axpy_batch(nz + t + 1, t, qvec, lo=t)
        a = st.mats["a"]
        col = a[t + 1:, t]
        nz = np.nonzero(col != 0)[0]
        if nz.size == 0:
            return
        # remainders survived: promote the smallest to be the new pivot
        best = nz[int(np.argmin(np.abs(col[nz])))]
        st.row_swap(t, t + 1 + int(best))


def _clear_row_once(st: _Tracked, t: int) -> bool:
    """One round of column-reduction on row t.

    Returns True when a swap pulled a new column into position t (which
    can re-dirty column t, so the caller must re-clear it)."""
    a = st.mats["a"]
    row = a[t, t + 1:]
    nz = np.nonzero(row != 0)[0]
    if nz.size == 0:
        return False
    pivot = int(a[t, t])
    qvec = _nearest_quotients(row[nz], pivot)
    st.col_axpy_batch(nz + t + 1, t, qvec, lo=t)
    a = st.mats["a"]
    row = a[t, t + 1:]
    nz = np.nonzero(row != 0)[0]
    if nz.size == 0:
        return False
    best = nz[int(np.argmin(np.abs(row[nz])))]
    st.col_swap(t, t + 1 + int(best))
    return True


def _find_nondivisible(a: np.ndarray, t: int, pivot: int) -> int | None:
    """Row index (absolute) of an entry the pivot fails to divide."""
    if pivot in (0, 1):
        return None
    sub = a[t + 1:, t + 1:]
    if sub.size == 0:
        return None
    bad = np.nonzero((sub % pivot) != 0)
    if bad[0].size == 0:
        return None
    return t + 1 + int(bad[0][0])


# --- Hermite form (row-style) ----------------------------------------------

def hermite_rows(a) -> tuple[np.ndarray, np.ndarray]:
    """Row Hermite normal form: returns (H, T) with T @ A = H, T unimodular.

    Pivots positive, entries above each pivot reduced into [0, pivot).
    Plain Python integers throughout — this is only used on small
    matrices (canonicalizing homology bases), where clarity wins.
    """
    a = np.asarray(a, dtype=object)
    rows, cols = a.shape if a.ndim == 2 else (0, 0)
    h = [[int(x) for x in row] for row in a]
    t = [[int(i == j) for j in range(rows)] for i in range(rows)]
    pivot_row = 0
    for col in range(cols):
        if pivot_row == rows:
            break
        # Euclid down the column
        while True:
            live = [r for r in range(pivot_row, rows) if h[r][col] != 0]
            if not live:
                break
            best = min(live, key=lambda r: abs(h[r][col]))
            if best != pivot_row:
                h[pivot_row], h[best] = h[best], h[pivot_row]
                t[pivot_row], t[best] = t[best], t[pivot_row]
            p = h[pivot_row][col]
            done = True
            for r in range(pivot_row + 1, rows):
                if h[r][col] != 0:
                    q = h[r][col] // p
                    h[r] = [x - q * y for x, y in zip(h[r], h[pivot_row])]
                    t[r] = [x - q * y for x, y in zip(t[r], t[pivot_row])]
                    if h[r][col] != 0:
                        done = False
            if done:
                break
        if h[pivot_row][col] == 0:
            continue
        if h[pivot_row][col] < 0:
            h[pivot_row] = [-x for x in h[pivot_row]]
            t[pivot_row] = [-x for x in t[pivot_row]]
        p = h[pivot_row][col]
        for r in range(pivot_row):
            q = h[r][col] // p
            if q:
                h[r] = [x - q * y for x, y in zip(h[r], h[pivot_row])]
                t[r] = [x - q * y for x, y in zip(t[r], t[pivot_row])]
        pivot_row += 1
    return (_shrink(np.array(h, dtype=object)) if rows else np.zeros((0, cols), dtype=np.int64),
            _shrink(np.array(t, dtype=object)) if rows else np.zeros((0, 0), dtype=np.int64))


def inv_small(a: np.ndarray) -> np.ndarray:
    """Exact inverse of a small unimodular matrix via rational elimination."""
    from fractions import Fraction
    n = a.shape[0]
    if n == 0:
        return np.zeros((0, 0), dtype=np.int64)
    aug = [[Fraction(int(a[i, j])) for j in range(n)]
           + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    out = np.zeros((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            x = aug[i][n + j]
            if x.denominator != 1:
                raise ValueError("matrix is not unimodular")
            out[i, j] = int(x)
    return _shrink(out)


def audit_smith(a: np.ndarray, sm: SmithResult) -> None:
    """Certify a Smith decomposition: reconstruction, unimodular
    transforms, nonnegative divisibility chain.

    Matrices up to 400 rows and columns get fully exact checks.  Above
    that the identities are certified by randomized projection probes —
    exact products against random integer vectors, so any single wrong
    entry is caught with probability at least 1 - 2^-8 per audit.
    Raises :class:`DefectError` on any discrepancy.
    """
    a = as_int_array(np.atleast_2d(a))
    small = max(a.shape) <= 400
    if small:
        d = sm.d_matrix(a.shape)
        recon = dot_exact(dot_exact(sm.u, d), sm.v)
        if not np.array_equal(recon, a):
            raise DefectError("Smith reconstruction U @ D @ V != A")
    else:
        rng = np.random.default_rng(12345)
        probe = rng.integers(0, 2, size=(a.shape[1], 8)).astype(np.int64)
        vx = dot_exact(sm.v, probe)
        scaled = np.zeros((a.shape[0], probe.shape[1]), dtype=object)
        for i, dval in enumerate(sm.diag):
            if dval:
                scaled[i, :] = vx[i, :].astype(object) * dval
        recon = dot_exact(sm.u, _shrink(scaled))
        if not np.array_equal(recon, dot_exact(a, probe)):
            raise DefectError("Smith reconstruction U @ D @ V != A (probe)")
    for name, mat, inv in (("U", sm.u, sm.u_inv), ("V", sm.v, sm.v_inv)):
        n = mat.shape[0]
        if n <= 400:
            if not np.array_equal(dot_exact(mat, inv), np.eye(n, dtype=np.int64)):
                raise DefectError(f"Smith transform {name} failed inverse check")
        else:
            rng = np.random.default_rng(12345)
            probe = rng.integers(-100, 100, size=(n, 8)).astype(np.int64)
            if not np.array_equal(dot_exact(mat, dot_exact(inv, probe)), probe):
                raise DefectError(f"Smith transform {name} failed probe check")
    diag = sm.diag
    for i, dval in enumerate(diag):
        if dval < 0:
            raise DefectError("negative Smith divisor")
        if i + 1 < len(diag) and dval == 0 and diag[i + 1] != 0:
            raise DefectError("zero Smith divisor before a nonzero one")
        if i + 1 < len(diag) and dval != 0 and diag[i + 1] % dval != 0:
            raise DefectError("Smith divisors fail the divisibility chain")
