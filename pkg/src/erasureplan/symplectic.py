"""Symplectic geometry of F_p^(2n): pairings, duals, supports, projections.

Vectors are stored as (a | b): the first n entries are the X-part, the
last n the Z-part.  All user-facing qudit indices are 1-based; column
indices inside matrices are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .fpalg import FpMatrix, FpScalar, kernel_basis, rank, restrict_rowspace, rref


class PauliVector:
    """A length-2n vector (a | b) over F_p describing a Pauli-type operator."""

    __slots__ = ("p", "n", "data")

    def __init__(self, entries, p: int):
        data = np.asarray(entries, dtype=np.int64)
        if data.ndim != 1 or data.shape[0] % 2 != 0:
            raise InvalidInputError("a Pauli vector must be 1-D with even length")
        mat = FpMatrix(data.reshape(1, -1), p)  # validates the modulus
        object.__setattr__(self, "p", mat.p)
        object.__setattr__(self, "n", mat.cols // 2)
        object.__setattr__(self, "data", mat.data[0])

    def __setattr__(self, name, value):
        raise AttributeError("PauliVector is immutable")

    @classmethod
    def from_parts(cls, a, b, p: int) -> "PauliVector":
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if a.shape != b.shape or a.ndim != 1:
            raise InvalidInputError("X and Z parts must be 1-D and equally long")
        return cls(np.concatenate([a, b]), p)

    @classmethod
    def zero(cls, n: int, p: int) -> "PauliVector":
        return cls(np.zeros(2 * n, dtype=np.int64), p)

    @property
    def a(self) -> np.ndarray:
        return self.data[: self.n]

    @property
    def b(self) -> np.ndarray:
        return self.data[self.n :]

    def to_tuple(self) -> tuple[int, ...]:
        return tuple(int(v) for v in self.data)

    def is_zero(self) -> bool:
        return not self.data.any()

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliVector):
            return NotImplemented
        return self.p == other.p and np.array_equal(self.data, other.data)

    def __hash__(self):
        return hash((self.p, self.data.tobytes()))

    def __repr__(self):
        a = "".join(str(int(v)) for v in self.a)
        b = "".join(str(int(v)) for v in self.b)
        return f"PauliVector(({a}|{b}), p={self.p})"


class ErasurePattern:
    """A set of erased qudit positions, 1-based, inside {1, .., n}."""

    __slots__ = ("n", "indices")

    def __init__(self, n: int, indices):
        n = int(n)
        if n < 0:
            raise InvalidInputError("qudit count must be nonnegative")
        seen = []
        for i in indices:
            i = int(i)
            if not 1 <= i <= n:
                raise InvalidInputError(f"erased index {i} outside 1..{n}")
            if i in seen:
                raise InvalidInputError(f"duplicate erased index {i}")
            seen.append(i)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "indices", tuple(sorted(seen)))

    def __setattr__(self, name, value):
        raise AttributeError("ErasurePattern is immutable")

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __contains__(self, i):
        return i in self.indices

    def __eq__(self, other):
        if not isinstance(other, ErasurePattern):
            return NotImplemented
        return self.n == other.n and self.indices == other.indices

    def __hash__(self):
        return hash((self.n, self.indices))

    def __repr__(self):
        return f"ErasurePattern(n={self.n}, {{{', '.join(map(str, self.indices))}}})"

    def complement(self) -> tuple[int, ...]:
        """The untouched positions, 1-based, ascending."""
        erased = set(self.indices)
        return tuple(i for i in range(1, self.n + 1) if i not in erased)

    def complement_pattern(self) -> "ErasurePattern":
        return ErasurePattern(self.n, self.complement())

    def paired_columns(self) -> tuple[int, ...]:
        """0-based columns of the X then Z halves at the erased positions."""
        zero_based = [i - 1 for i in self.indices]
        return tuple(zero_based) + tuple(i + self.n for i in zero_based)


def _check_pair(x: PauliVector, y: PauliVector) -> None:
    if x.p != y.p or x.n != y.n:
        raise InvalidInputError("Pauli vectors live in different spaces")


def symplectic_product(x: PauliVector, y: PauliVector) -> FpScalar:
    """The standard pairing: sum of a_i b'_i - a'_i b_i mod p.

    Bilinear and antisymmetric; a stabilizer pair commutes exactly when
    this vanishes.
    """
    _check_pair(x, y)
    total = int(x.a @ y.b - y.a @ x.b)
    return FpScalar(total, x.p)


def symplectic_form(n: int, p: int) -> FpMatrix:
    """The fixed 2n x 2n form matrix with blocks (0, -I / I, 0).

    ``symplectic_dual`` is the kernel of (generators @ form); the block
    layout is pinned down here so results are bit-exact across runs.
    """
    eye = np.eye(n, dtype=np.int64)
    zero = np.zeros((n, n), dtype=np.int64)
    top = np.hstack([zero, -eye])
    bottom = np.hstack([eye, zero])
    return FpMatrix(np.vstack([top, bottom]), p)


def pairing_rows(M: FpMatrix) -> FpMatrix:
    """Rows (-b | a) such that row_i . e equals the pairing of M's row i with e."""
    if M.cols % 2 != 0:
        raise InvalidInputError("matrix over F_p^(2n) must have even column count")
    n = M.cols // 2
    return FpMatrix(np.hstack([(-M.data[:, n:]) % M.p, M.data[:, :n]]), M.p)


def symplectic_dual(M: FpMatrix) -> FpMatrix:
    """Basis of the dual space under the symplectic pairing.

    dim(dual) = 2n - rank(M); the dual of the zero space is everything.
    """
    if M.cols % 2 != 0:
        raise InvalidInputError("matrix over F_p^(2n) must have even column count")
    form = symplectic_form(M.cols // 2, M.p)
    return kernel_basis(M.mul(form))


def support(x: PauliVector) -> set[int]:
    """1-based qudit positions where either half of x is nonzero."""
    hit = (x.a != 0) | (x.b != 0)
    return {int(i) + 1 for i in np.nonzero(hit)[0]}


def symplectic_weight(x: PauliVector) -> int:
    """Number of qudits touched by x."""
    return int(((x.a != 0) | (x.b != 0)).sum())


def matrix_support(M: FpMatrix) -> set[int]:
    """Union of the supports of all rows of a matrix over F_p^(2n)."""
    if M.cols % 2 != 0:
        raise InvalidInputError("matrix over F_p^(2n) must have even column count")
    n = M.cols // 2
    if M.rows == 0:
        return set()
    hit = (M.data[:, :n] != 0) | (M.data[:, n:] != 0)
    return {int(i) + 1 for i in np.nonzero(hit.any(axis=0))[0]}


def project(x: PauliVector, pattern: ErasurePattern) -> np.ndarray:
    """Projection onto the erased positions, as (a_i1..a_ik | b_i1..b_ik).

    Positions are taken in ascending order; the result has length 2|I|.
    """
    if pattern.n != x.n:
        raise InvalidInputError("pattern does not match the vector's qudit count")
    return x.data[list(pattern.paired_columns())].copy()


def project_rows(M: FpMatrix, pattern: ErasurePattern) -> FpMatrix:
    """Row-wise projection of a matrix over F_p^(2n) onto the erased positions."""
    if M.cols != 2 * pattern.n:
        raise InvalidInputError("pattern does not match the matrix's qudit count")
    cols = list(pattern.paired_columns())
    return FpMatrix(M.data[:, cols], M.p)


def restrict_to_coords(M: FpMatrix, pattern: ErasurePattern) -> FpMatrix:
    """Basis of rowspace(M) ∩ (vectors supported only on the erased positions).

    The dimension equals rank(M) minus the rank of M restricted to the
    columns of the untouched positions.
    """
    if M.cols != 2 * pattern.n:
        raise InvalidInputError("pattern does not match the matrix's qudit count")
    return restrict_rowspace(M, pattern.paired_columns())


def projected_rank(M: FpMatrix, pattern: ErasurePattern) -> int:
    """Dimension of the projection of rowspace(M) onto the erased positions."""
    return rank(project_rows(M, pattern))
