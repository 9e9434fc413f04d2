"""Measurement planning for erasure correction with stabilizer codes.

A stabilizer code lives here purely as a self-orthogonal subspace C of
F_p^(2n) given by a generator basis.  Given erased positions I, the
planner splits C into observables that touch I (the measurement plan)
and a residual part supported away from I, such that measuring only the
plan determines the erased error up to stabilizer equivalence.  The
plan size dim C - dim(C ∩ F_p^(untouched)) is provably minimal.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from .errors import (
    InconsistentSyndromeError,
    InvalidInputError,
    NotCorrectableError,
    SizeLimitError,
    UndefinedMinimumError,
)
from .fpalg import FpMatrix, in_rowspace, rank, rref, solve_linear
from .symplectic import (
    ErasurePattern,
    PauliVector,
    matrix_support,
    pairing_rows,
    projected_rank,
    restrict_to_coords,
    symplectic_dual,
)


class StabilizerCode:
    """A self-orthogonal subspace of F_p^(2n) with a fixed generator basis.

    Validation at construction: generators are linearly independent,
    pairwise symplectic products vanish, and the dimension is at most n.
    """

    __slots__ = ("generators", "p", "n")

    def __init__(self, generators: FpMatrix):
        if generators.cols % 2 != 0 or generators.cols == 0:
            raise InvalidInputError("generators need an even, positive column count")
        n = generators.cols // 2
        if rank(generators) != generators.rows:
            raise InvalidInputError("generators are linearly dependent")
        if generators.rows > n:
            raise InvalidInputError(
                f"{generators.rows} independent generators exceed n = {n}"
            )
        products = (pairing_rows(generators).data @ generators.data.T) % generators.p
        if products.any():
            i, j = np.argwhere(products)[0]
            raise InvalidInputError(
                f"generators {i} and {j} do not commute (nonzero symplectic product)"
            )
        object.__setattr__(self, "generators", generators)
        object.__setattr__(self, "p", generators.p)
        object.__setattr__(self, "n", n)

    def __setattr__(self, name, value):
        raise AttributeError("StabilizerCode is immutable")

    @classmethod
    def from_rows(cls, rows, n: int, p: int) -> "StabilizerCode":
        return cls(FpMatrix.from_rows(rows, 2 * n, p))

    @property
    def dim(self) -> int:
        """Dimension of the stabilizer space (= number of generators)."""
        return self.generators.rows

    @property
    def k(self) -> int:
        """Number of logical qudits, n - dim."""
        return self.n - self.dim

    def __repr__(self):
        return f"StabilizerCode([[{self.n}, {self.k}]]_{self.p})"


@dataclass(frozen=True)
class Syndrome:
    """Measurement outcomes, one residue per planned observable."""

    values: tuple[int, ...]
    p: int

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) % self.p for v in self.values))

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class MeasurementPlan:
    """Observables to measure for erasures at ``erasure``.

    ``observables`` and ``residual`` together span the stabilizer space;
    the residual rows are supported away from the erased positions and
    their measurements are unnecessary for correcting them.
    ``recovering_set`` is the 1-based set of qudits the plan touches.
    """

    observables: FpMatrix
    residual: FpMatrix
    recovering_set: frozenset[int]
    erasure: ErasurePattern

    @property
    def num_measurements(self) -> int:
        return self.observables.rows


def _check_pattern(code: StabilizerCode, pattern: ErasurePattern) -> None:
    if pattern.n != code.n:
        raise InvalidInputError("erasure pattern does not match the code length")


def _dim_code_cap_erased(code: StabilizerCode, pattern: ErasurePattern) -> int:
    return restrict_to_coords(code.generators, pattern).rows


def erasure_correctable(code: StabilizerCode, pattern: ErasurePattern) -> bool:
    """Whether the code can correct erasures at the given positions.

    Self-orthogonality makes C ∩ F^I a subspace of (dual C) ∩ F^I, so
    the two are equal exactly when their dimensions agree.  The dual
    side is computed without materializing the dual:
    dim((dual C) ∩ F^I) = 2|I| - dim(projection of C onto I).
    """
    _check_pattern(code, pattern)
    dim_ci = _dim_code_cap_erased(code, pattern)
    dim_proj = projected_rank(code.generators, pattern)
    return dim_ci + dim_proj == 2 * len(pattern)


def correctability_witness(code: StabilizerCode, pattern: ErasurePattern) -> PauliVector | None:
    """An undetectable error on the erased positions, or ``None`` if correctable.

    The witness commutes with all generators, is supported inside the
    erasures, and is not a stabilizer.
    """
    _check_pattern(code, pattern)
    dual_on_erased = restrict_to_coords(symplectic_dual(code.generators), pattern)
    for row in dual_on_erased.data:
        if not in_rowspace(code.generators, row):
            return PauliVector(row, code.p)
    return None


def _split_by_erasure(M: FpMatrix, pattern: ErasurePattern) -> tuple[FpMatrix, FpMatrix]:
    """Echelonize with erased columns leading; split rows by erased support.

    Rows of the reduced basis that touch the erased positions form a
    plan basis D with D ∩ F^(untouched) = 0; the remaining rows are a
    basis of C ∩ F^(untouched).
    """
    paired = list(pattern.paired_columns())
    rest = [c for c in range(M.cols) if c not in set(paired)]
    res = rref(M, tuple(paired + rest))
    basis = res.rref.data[: res.rank]
    if paired:
        touching = basis[:, paired].any(axis=1)
    else:
        touching = np.zeros(res.rank, dtype=bool)
    return (
        FpMatrix(basis[touching], M.p),
        FpMatrix(basis[~touching], M.p),
    )


def plan_measurements(code: StabilizerCode, pattern: ErasurePattern) -> MeasurementPlan:
    """Minimal measurement plan for erasures at ``pattern``.

    Raises :class:`NotCorrectableError` (with a witness) when the code
    cannot correct these erasures.  The plan dimension equals
    dim C - dim(C ∩ F^(untouched)), is at most 2|I|, and the whole
    computation is one Gaussian elimination, cubic in n.
    """
    _check_pattern(code, pattern)
    if not erasure_correctable(code, pattern):
        raise NotCorrectableError(
            f"erasures at {set(pattern.indices)} are not correctable",
            witness=correctability_witness(code, pattern),
        )
    observables, residual = _split_by_erasure(code.generators, pattern)
    return MeasurementPlan(
        observables=observables,
        residual=residual,
        recovering_set=frozenset(matrix_support(observables)),
        erasure=pattern,
    )


def verify_plan(code: StabilizerCode, observables: FpMatrix, pattern: ErasurePattern) -> bool:
    """Whether measuring ``observables`` alone corrects erasures at ``pattern``.

    The criterion is C ∩ F^I = (dual D) ∩ F^I for D the row space of
    ``observables``.  An equivalent projected form (projection of the
    dual of C equals the projection of D) is evaluated independently
    and compared, as an internal consistency check.
    """
    _check_pattern(code, pattern)
    if observables.p != code.p or observables.cols != 2 * code.n:
        raise InvalidInputError("observables do not match the code's space")
    if observables.rows and rank(code.generators.stack(observables)) != code.dim:
        raise InvalidInputError("observables are not inside the stabilizer space")

    dim_ci = _dim_code_cap_erased(code, pattern)
    dim_proj_d = projected_rank(observables, pattern)
    primary = dim_ci + dim_proj_d == 2 * len(pattern)

    dim_proj_dual = projected_rank(symplectic_dual(code.generators), pattern)
    dual_form = dim_proj_dual == dim_proj_d
    if primary != dual_form:
        raise RuntimeError(
            "internal inconsistency: the two equivalent plan criteria disagree"
        )
    return primary


def syndrome_of(observables: FpMatrix, error: PauliVector) -> Syndrome:
    """Ideal measurement outcomes of the observables on a given error."""
    if observables.p != error.p or observables.cols != 2 * error.n:
        raise InvalidInputError("observables do not match the error's space")
    values = (pairing_rows(observables).data @ error.data) % observables.p
    return Syndrome(tuple(int(v) for v in values), observables.p)


def decode(code: StabilizerCode, plan: MeasurementPlan, syndrome: Syndrome) -> PauliVector:
    """Error on the erased positions consistent with the measured syndrome.

    Requires ``verify_plan`` to hold for the plan's observables (true
    for every plan produced by :func:`plan_measurements`).  The result
    is the canonical representative: any two consistent errors differ
    by a stabilizer supported on the erasures, and the one returned has
    zeros at the free columns of the solved system, so decoding is
    deterministic.
    """
    _check_pattern(code, plan.erasure)
    if syndrome.p != code.p:
        raise InvalidInputError("syndrome modulus does not match the code")
    if len(syndrome) != plan.observables.rows:
        raise InvalidInputError(
            f"syndrome length {len(syndrome)} != plan size {plan.observables.rows}"
        )
    cols = list(plan.erasure.paired_columns())
    system = FpMatrix(pairing_rows(plan.observables).data[:, cols], code.p)
    local = solve_linear(system, np.asarray(syndrome.values, dtype=np.int64))
    if local is None:
        raise InconsistentSyndromeError(
            "no error on the erased positions matches the syndrome"
        )
    full = np.zeros(2 * code.n, dtype=np.int64)
    full[cols] = local
    return PauliVector(full, code.p)


def residual_check_basis(code: StabilizerCode, pattern: ErasurePattern) -> FpMatrix:
    """Basis of the stabilizers untouched by the erasures.

    These rows form a self-orthogonal code on the remaining n - |I|
    positions and can screen for errors outside the erased set; no
    correctability assumption is needed.
    """
    _check_pattern(code, pattern)
    _, residual = _split_by_erasure(code.generators, pattern)
    return residual


def worst_case_witness(
    code: StabilizerCode, delta: int, limit: int = 2_000_000
) -> tuple[int, ErasurePattern]:
    """Max plan size over all erasure sets of size delta, with a worst set.

    Enumerates every candidate set; ties break to the lexicographically
    smallest witness.  Counts erasure sets against ``limit`` and raises
    :class:`SizeLimitError` beyond it.
    """
    delta = int(delta)
    if not 0 <= delta <= code.n:
        raise InvalidInputError(f"delta must be in 0..{code.n}")
    total = math.comb(code.n, delta)
    if total > limit:
        raise SizeLimitError(
            f"enumerating {total} erasure sets exceeds the limit of {limit}"
        )
    best = -1
    witness = None
    for subset in combinations(range(1, code.n + 1), delta):
        pattern = ErasurePattern(code.n, subset)
        value = projected_rank(code.generators, pattern)
        if value > best:
            best = value
            witness = pattern
    return best, witness


def worst_case_measurements(code: StabilizerCode, delta: int, limit: int = 2_000_000) -> int:
    """Measurements needed in the worst case over all erasure sets of size delta.

    Equals max over |I| = delta of dim(projection of C onto I), which
    is at most 2*delta.
    """
    value, _ = worst_case_witness(code, delta, limit)
    return value


_FIXED_SET_MAX_DIM = 7
_FIXED_SET_MAX_N = 8


def _check_fixed_set_limits(code: StabilizerCode) -> None:
    if code.p != 2 or code.dim > _FIXED_SET_MAX_DIM or code.n > _FIXED_SET_MAX_N:
        raise SizeLimitError(
            "fixed-set search is limited to p=2, dim <= "
            f"{_FIXED_SET_MAX_DIM}, n <= {_FIXED_SET_MAX_N}"
        )


def _iter_rref_matrices(m: int, d: int, p: int):
    """All d-dimensional subspaces of F_p^m, one canonical RREF matrix each."""
    if d == 0:
        yield np.zeros((0, m), dtype=np.int64)
        return
    if d > m:
        return
    for pivots in combinations(range(m), d):
        pivot_set = set(pivots)
        free_cells = [
            (r, c)
            for r, pc in enumerate(pivots)
            for c in range(pc + 1, m)
            if c not in pivot_set
        ]
        base = np.zeros((d, m), dtype=np.int64)
        for r, pc in enumerate(pivots):
            base[r, pc] = 1
        for fill in product(range(p), repeat=len(free_cells)):
            mat = base.copy()
            for (r, c), v in zip(free_cells, fill):
                mat[r, c] = v
            yield mat


def _low_weight_outside_code(code: StabilizerCode, delta: int) -> np.ndarray:
    """All vectors of weight 1..delta not in the stabilizer space, as rows."""
    rows = []
    nonzero_pairs = [
        (a, b) for a in range(code.p) for b in range(code.p) if (a, b) != (0, 0)
    ]
    for w in range(1, delta + 1):
        for positions in combinations(range(code.n), w):
            for pairs in product(nonzero_pairs, repeat=w):
                vec = np.zeros(2 * code.n, dtype=np.int64)
                for pos, (a, b) in zip(positions, pairs):
                    vec[pos] = a
                    vec[pos + code.n] = b
                if not in_rowspace(code.generators, vec):
                    rows.append(vec)
    if not rows:
        return np.zeros((0, 2 * code.n), dtype=np.int64)
    return np.array(rows, dtype=np.int64)


def min_fixed_set(code: StabilizerCode, delta: int) -> tuple[int, FpMatrix]:
    """Smallest fixed observable set correcting every erasure set of size delta.

    Searches subspaces D of the stabilizer space in order of increasing
    dimension for one whose dual contains no non-stabilizer vector of
    weight <= delta; such a D handles all delta-erasure sets at once.
    A candidate passes exactly when every low-weight non-stabilizer
    vector anticommutes with some element of D, so the weight scan runs
    over the finitely many low-weight vectors.  Exponential in dim C;
    refused above the documented desk-scale limits.

    Returns ``(dimension, basis)``.  Raises
    :class:`UndefinedMinimumError` when no subspace works (the code's
    distance is at most delta).
    """
    _check_fixed_set_limits(code)
    delta = int(delta)
    if delta < 0:
        raise InvalidInputError("delta must be nonnegative")
    low = _low_weight_outside_code(code, delta)
    if low.shape[0] == 0:
        return 0, FpMatrix.zeros(0, 2 * code.n, code.p)
    # Column j holds the pairings of every generator with low-weight vector j.
    pairings = (pairing_rows(code.generators).data @ low.T) % code.p
    if not pairings.any(axis=0).all():
        raise UndefinedMinimumError(
            f"a weight-<= {delta} error commutes with the whole stabilizer; "
            "no fixed observable set can correct all such erasures"
        )
    for d in range(code.dim + 1):
        for coeffs in _iter_rref_matrices(code.dim, d, code.p):
            detected = ((coeffs @ pairings) % code.p).any(axis=0)
            if detected.all():
                basis = (coeffs @ code.generators.data) % code.p
                return d, FpMatrix(basis, code.p)
    raise UndefinedMinimumError("no fixed observable set found")  # pragma: no cover


def min_fixed_set_dual(code: StabilizerCode, delta: int) -> int:
    """The fixed-set minimum recomputed through the dual formulation.

    Maximizes dim W over spaces W containing the dual of C such that W
    adds no non-stabilizer vector of weight <= delta; the answer is
    2n - max dim W.  Implemented in quotient coordinates modulo the
    dual of C, independently of :func:`min_fixed_set`'s search, so the
    two can cross-check each other.
    """
    _check_fixed_set_limits(code)
    delta = int(delta)
    if delta < 0:
        raise InvalidInputError("delta must be nonnegative")
    low = _low_weight_outside_code(code, delta)
    m = code.dim
    if low.shape[0] == 0:
        return 0
    dual = symplectic_dual(code.generators)
    res = rref(dual)
    reduced = res.rref.data[: res.rank]
    pivots = list(res.pivot_cols)
    free_cols = [c for c in range(2 * code.n) if c not in set(pivots)]
    if len(free_cols) != m:
        raise RuntimeError("quotient dimension mismatch")  # pragma: no cover

    quotient = []
    for vec in low:
        r = vec.copy()
        for i, pc in enumerate(pivots):
            if r[pc]:
                r = (r - r[pc] * reduced[i]) % code.p
        q = r[free_cols]
        if not q.any():
            raise UndefinedMinimumError(
                f"a weight-<= {delta} error commutes with the whole stabilizer; "
                "no fixed observable set can correct all such erasures"
            )
        quotient.append(q)

    def member(q: np.ndarray, basis: np.ndarray) -> bool:
        r = q.copy()
        for row in basis:
            pc = int(np.nonzero(row)[0][0])
            if r[pc]:
                r = (r - r[pc] * row) % code.p
        return not r.any()

    for dv in range(m, -1, -1):
        for basis in _iter_rref_matrices(m, dv, code.p):
            if not any(member(q, basis) for q in quotient):
                return m - dv
    raise UndefinedMinimumError("no fixed observable set found")  # pragma: no cover


def parse_stabilizer_code(obj) -> StabilizerCode:
    """Build a code from the JSON object {"p": .., "n": .., "generators": [..]}."""
    if not isinstance(obj, dict):
        raise InvalidInputError("code file must hold a JSON object")
    for key in ("p", "n", "generators"):
        if key not in obj:
            raise InvalidInputError(f"code file is missing the '{key}' field")
    p, n = obj["p"], obj["n"]
    if not isinstance(p, int) or not isinstance(n, int) or n < 1:
        raise InvalidInputError("'p' and 'n' must be integers with n >= 1")
    gens = obj["generators"]
    if not isinstance(gens, list) or not all(isinstance(g, list) for g in gens):
        raise InvalidInputError("'generators' must be a list of rows")
    for g in gens:
        if len(g) != 2 * n or not all(isinstance(v, int) for v in g):
            raise InvalidInputError(
                f"each generator row must hold 2n = {2 * n} integers"
            )
    return StabilizerCode.from_rows(gens, n, p)


def stabilizer_code_to_dict(code: StabilizerCode) -> dict:
    return {"p": code.p, "n": code.n, "generators": code.generators.to_lists()}


def load_stabilizer_code(path) -> StabilizerCode:
    """Read a stabilizer code from a JSON file."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidInputError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}") from exc
    return parse_stabilizer_code(obj)
