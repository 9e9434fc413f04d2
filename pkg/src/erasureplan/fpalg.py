"""Exact dense linear algebra over prime fields.

Every other module builds on the primitives here: reduced row echelon
form with an optional column reordering, kernel and row-space bases,
sums and intersections of row spaces, and linear solves.  Matrices are
immutable; every operation returns a fresh value, so results can be
shared freely between threads.

Entries are numpy int64 arrays reduced modulo a prime p.  For p = 2,
row reduction switches to a bit-packed fast path (rows held as Python
integers and eliminated with XOR), which keeps Gaussian elimination
cheap for the binary codes that dominate practical use.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError


def is_prime(n: int) -> bool:
    """Deterministic trial-division primality test (moduli are small)."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _check_prime(p) -> int:
    p = int(p)
    if not is_prime(p):
        raise InvalidInputError(f"modulus {p} is not prime")
    return p


@dataclass(frozen=True)
class FpScalar:
    """A single residue: an integer in [0, p) together with its prime modulus."""

    value: int
    p: int

    def __post_init__(self):
        p = _check_prime(self.p)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "value", int(self.value) % p)

    def __int__(self) -> int:
        return self.value


class FpMatrix:
    """Immutable row-major matrix over the prime field with p elements.

    The backing array is marked read-only; treat instances as values.
    Rows of an ``FpMatrix`` are the standard carrier for subspace bases
    throughout the package, with a 0 x cols matrix representing the
    zero space (never ``None``).
    """

    __slots__ = ("p", "data")

    def __init__(self, entries, p: int):
        p = _check_prime(p)
        data = np.array(entries, dtype=np.int64, copy=True)
        if data.ndim != 2:
            raise InvalidInputError(f"matrix entries must be 2-D, got shape {data.shape}")
        data %= p
        data.flags.writeable = False
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "data", data)

    def __setattr__(self, name, value):
        raise AttributeError("FpMatrix is immutable")

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int) -> "FpMatrix":
        return cls(np.zeros((rows, cols), dtype=np.int64), p)

    @classmethod
    def identity(cls, n: int, p: int) -> "FpMatrix":
        return cls(np.eye(n, dtype=np.int64), p)

    @classmethod
    def from_rows(cls, rows, cols: int, p: int) -> "FpMatrix":
        """Build from an iterable of rows; ``cols`` disambiguates the empty case."""
        rows = list(rows)
        if not rows:
            return cls.zeros(0, cols, p)
        mat = cls(np.array(rows, dtype=np.int64), p)
        if mat.cols != cols:
            raise InvalidInputError(f"expected {cols} columns, got {mat.cols}")
        return mat

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def row(self, i: int) -> np.ndarray:
        return self.data[i]

    def transpose(self) -> "FpMatrix":
        return FpMatrix(self.data.T, self.p)

    def stack(self, other: "FpMatrix") -> "FpMatrix":
        _check_compatible(self, other)
        return FpMatrix(np.vstack([self.data, other.data]), self.p)

    def mul(self, other: "FpMatrix") -> "FpMatrix":
        if self.p != other.p:
            raise InvalidInputError("modulus mismatch")
        if self.cols != other.rows:
            raise InvalidInputError(
                f"cannot multiply {self.shape} by {other.shape}"
            )
        return FpMatrix((self.data @ other.data) % self.p, self.p)

    def neg(self) -> "FpMatrix":
        return FpMatrix((-self.data) % self.p, self.p)

    def to_lists(self) -> list[list[int]]:
        return [[int(v) for v in row] for row in self.data]

    def __eq__(self, other) -> bool:
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return (
            self.p == other.p
            and self.shape == other.shape
            and bool(np.array_equal(self.data, other.data))
        )

    def __hash__(self):
        return hash((self.p, self.shape, self.data.tobytes()))

    def __repr__(self):
        return f"FpMatrix(p={self.p}, {self.rows}x{self.cols})"


def _check_compatible(a: FpMatrix, b: FpMatrix) -> None:
    if a.p != b.p:
        raise InvalidInputError(f"modulus mismatch: {a.p} vs {b.p}")
    if a.cols != b.cols:
        raise InvalidInputError(f"column count mismatch: {a.cols} vs {b.cols}")


@dataclass(frozen=True)
class RrefResult:
    """Outcome of row reduction under a column reordering.

    ``rref`` stores rows in the original column layout; viewed through
    ``col_order`` it is in reduced row echelon form.  ``pivot_cols``
    lists original column indices in the order pivots were found (i.e.
    following ``col_order``), so ``rank == len(pivot_cols)``.
    """

    rref: FpMatrix
    pivot_cols: tuple[int, ...]
    rank: int
    col_order: tuple[int, ...]


def rref(M: FpMatrix, col_order=None) -> RrefResult:
    """Reduced row echelon form of ``M`` after reordering columns.

    Args:
        M: input matrix.
        col_order: permutation of ``range(M.cols)``; position k of the
            working matrix is column ``col_order[k]`` of ``M``.  Defaults
            to the identity.

    Returns:
        An :class:`RrefResult` whose row space equals that of ``M``.
        Deterministic for fixed input: the pivot is always the first
        row with a nonzero entry in the current (permuted) column.
    """
    if col_order is None:
        col_order = tuple(range(M.cols))
    col_order = tuple(int(c) for c in col_order)
    if sorted(col_order) != list(range(M.cols)):
        raise InvalidInputError("col_order is not a permutation of the columns")

    work = M.data[:, col_order] if M.cols else M.data.copy()
    if M.p == 2:
        reduced, pivot_positions = _rref_binary(work)
    else:
        reduced, pivot_positions = _rref_dense(work, M.p)

    out = np.empty_like(reduced)
    if M.cols:
        out[:, list(col_order)] = reduced
    pivot_cols = tuple(col_order[k] for k in pivot_positions)
    return RrefResult(
        rref=FpMatrix(out, M.p),
        pivot_cols=pivot_cols,
        rank=len(pivot_cols),
        col_order=col_order,
    )


def _rref_dense(work: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Gauss-Jordan elimination mod p on ``work`` (mutated copy)."""
    work = work.copy()
    m, n = work.shape
    pivot_positions: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(work[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            work[[r, piv]] = work[[piv, r]]
        inv = pow(int(work[r, c]), p - 2, p)
        work[r] = (work[r] * inv) % p
        factors = work[:, c].copy()
        factors[r] = 0
        hit = np.nonzero(factors)[0]
        if hit.size:
            work[hit] = (work[hit] - np.outer(factors[hit], work[r])) % p
        pivot_positions.append(c)
        r += 1
    return work, pivot_positions


def _pack_rows(work: np.ndarray) -> list[int]:
    """Pack binary rows into Python ints, bit k = column k."""
    packed = []
    for row in work.astype(np.uint8):
        as_bytes = np.packbits(row, bitorder="little").tobytes()
        packed.append(int.from_bytes(as_bytes, "little"))
    return packed


def _unpack_rows(rows: list[int], n: int) -> np.ndarray:
    nbytes = (n + 7) // 8
    out = np.zeros((len(rows), n), dtype=np.int64)
    for i, r in enumerate(rows):
        bits = np.unpackbits(
            np.frombuffer(r.to_bytes(nbytes, "little"), dtype=np.uint8),
            bitorder="little",
        )
        out[i] = bits[:n]
    return out


def _rref_binary(work: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Bit-packed Gauss-Jordan over F_2; XOR-only, no branches on values."""
    m, n = work.shape
    rows = _pack_rows(work)
    pivot_positions: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        mask = 1 << c
        piv = next((i for i in range(r, m) if rows[i] & mask), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(m):
            if i != r and rows[i] & mask:
                rows[i] ^= rows[r]
        pivot_positions.append(c)
        r += 1
    return _unpack_rows(rows, n), pivot_positions


def rank(M: FpMatrix) -> int:
    """Rank of ``M`` over its field."""
    return rref(M).rank


def row_basis(M: FpMatrix) -> FpMatrix:
    """Canonical (RREF) basis of the row space of ``M``."""
    res = rref(M)
    return FpMatrix(res.rref.data[: res.rank], M.p)


def kernel_basis(M: FpMatrix) -> FpMatrix:
    """Basis of the right null space {x : M x = 0}, one vector per row.

    The basis is the standard free-column construction from the RREF,
    hence canonical; the number of rows is cols(M) - rank(M).
    """
    res = rref(M)
    R = res.rref.data
    pivots = list(res.pivot_cols)
    pivot_set = set(pivots)
    free = [c for c in range(M.cols) if c not in pivot_set]
    if not free:
        return FpMatrix.zeros(0, M.cols, M.p)
    basis = np.zeros((len(free), M.cols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = (-int(R[i, f])) % M.p
    return FpMatrix(basis, M.p)


def space_sum(A: FpMatrix, B: FpMatrix) -> FpMatrix:
    """Basis of rowspace(A) + rowspace(B)."""
    _check_compatible(A, B)
    return row_basis(A.stack(B))


def space_intersection(A: FpMatrix, B: FpMatrix) -> FpMatrix:
    """Basis of rowspace(A) ∩ rowspace(B).

    Uses the coefficient-space method: left-kernel vectors (u | v) of
    the stacked matrix [A; -B] satisfy u·A = v·B, and those common
    values are exactly the intersection.
    """
    _check_compatible(A, B)
    stacked = A.stack(B.neg())
    coeffs = kernel_basis(stacked.transpose())
    if coeffs.rows == 0:
        return FpMatrix.zeros(0, A.cols, A.p)
    candidates = (coeffs.data[:, : A.rows] @ A.data) % A.p
    return row_basis(FpMatrix(candidates, A.p))


def solve_linear(M: FpMatrix, s) -> np.ndarray | None:
    """One solution x of M x = s, or ``None`` if the system is inconsistent.

    The returned particular solution has zeros at all free columns, so
    it is the canonical coset representative modulo the kernel.
    """
    s = np.asarray(s, dtype=np.int64) % M.p
    if s.ndim != 1 or s.shape[0] != M.rows:
        raise InvalidInputError(
            f"right-hand side length {s.shape} does not match {M.rows} rows"
        )
    aug = FpMatrix(np.hstack([M.data, s.reshape(-1, 1)]), M.p)
    res = rref(aug)
    x = np.zeros(M.cols, dtype=np.int64)
    for i, pc in enumerate(res.pivot_cols):
        if pc == M.cols:
            return None
        x[pc] = res.rref.data[i, M.cols]
    return x


def in_rowspace(M: FpMatrix, vector) -> bool:
    """True iff ``vector`` lies in the row space of ``M``."""
    v = np.asarray(vector, dtype=np.int64).reshape(1, -1) % M.p
    if v.shape[1] != M.cols:
        raise InvalidInputError("vector length does not match column count")
    return rank(M.stack(FpMatrix(v, M.p))) == rank(M)


def restrict_rowspace(M: FpMatrix, keep_cols) -> FpMatrix:
    """Basis of the vectors in rowspace(M) supported inside ``keep_cols``.

    A row-space element u·M vanishes on the complement of ``keep_cols``
    exactly when u lies in the left kernel of the complementary column
    block, so the result has dimension rows-rank of that block removed:
    dim = rank(M) - rank(M restricted to the dropped columns).
    """
    keep = set(int(c) for c in keep_cols)
    if not keep.issubset(range(M.cols)):
        raise InvalidInputError("keep_cols outside matrix columns")
    dropped = [c for c in range(M.cols) if c not in keep]
    block = FpMatrix(M.data[:, dropped], M.p) if dropped else FpMatrix.zeros(M.rows, 0, M.p)
    coeffs = kernel_basis(block.transpose())
    if coeffs.rows == 0:
        return FpMatrix.zeros(0, M.cols, M.p)
    vectors = (coeffs.data @ M.data) % M.p
    return row_basis(FpMatrix(vectors, M.p))
