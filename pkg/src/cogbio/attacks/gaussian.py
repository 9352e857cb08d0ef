"""Linearization attacks: recover the secret by elimination over Z_d.

Every round whose response is 0 yields a true congruence w . x = 0, because
even an empty-case round has zero weight on all pass-objects. Those rows
form a homogeneous system whose nullspace contains the secret's indicator
vector. When the window is so large that the empty case cannot occur
(l > n - k), every round is a genuine weight sum and the full inhomogeneous
system W x = r can be used instead, which needs far fewer rounds.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ParamError
from ..params import SchemeParams
from ..scheme import Secret, Transcript, consistent_with
from .linalg import nullspace_mod, rank_mod, require_prime, solve_affine_mod

RECOVERED = "recovered"
NEEDS_MORE_ROWS = "needs-more-rows"
INCONSISTENT = "inconsistent"

# 2**cap candidate combinations are enumerated when the solution space is
# underdetermined; past this the attack asks for more rounds instead.
SCAN_CAP_DIM = 12


@dataclass(frozen=True)
class EliminationResult:
    secret: Secret | None
    status: str
    nullspace_dim: int
    rows_used: int
    used_all_rounds: bool = False
    slack: dict[int, int] = field(default_factory=dict)  # round index -> slack bit

    @property
    def recovered(self) -> bool:
        return self.status == RECOVERED


def _dense_rows(transcript: Transcript, keep) -> tuple[np.ndarray, np.ndarray, list[int]]:
    """(weight matrix, responses, original round indices) for rounds where keep(r)."""
    n = transcript.params.n
    rows, rhs, idx = [], [], []
    for j, (ch, r) in enumerate(transcript.rounds):
        if not keep(r):
            continue
        vec = np.zeros(n, dtype=np.int64)
        for obj, weight in zip(ch.a, ch.w):
            vec[obj] = weight
        rows.append(vec)
        rhs.append(r)
        idx.append(j)
    mat = np.array(rows, dtype=np.int64).reshape(len(rows), n)
    return mat, np.array(rhs, dtype=np.int64), idx


def _weight_k_binary(vec: np.ndarray, k: int) -> Secret | None:
    vals = set(np.unique(vec).tolist())
    if vals <= {0, 1} and int(vec.sum()) == k:
        return frozenset(int(i) for i in np.flatnonzero(vec))
    return None


def ge_recover(transcript: Transcript) -> EliminationResult:
    """Solve for the secret from zero-response rows (all rows when noise-free).

    With the empty case possible, only r=0 rows are safe to use; elimination
    then finds a rank n-1 system whose one-dimensional nullspace is scanned
    for a binary weight-k vector. With l > n - k there is no empty case, so
    all rounds enter as W x = r and the solution is usually unique.
    """
    params = transcript.params
    require_prime(params.d)
    no_noise = params.l > params.n - params.k
    if no_noise:
        mat, rhs, _ = _dense_rows(transcript, lambda r: True)
        particular, basis = solve_affine_mod(mat, rhs, params.d)
        if particular is None:
            return EliminationResult(None, INCONSISTENT, len(basis), len(mat), True)
        candidates = _scan_affine(params, transcript, particular, basis)
        return _finish(params, candidates, len(basis), len(mat), used_all=True)

    mat, _, _ = _dense_rows(transcript, lambda r: r == 0)
    basis = nullspace_mod(mat, params.d)
    dim = len(basis)
    if dim == 0:
        return EliminationResult(None, INCONSISTENT, 0, len(mat))
    if dim > 1:
        return EliminationResult(None, NEEDS_MORE_ROWS, dim, len(mat))
    candidates = []
    for mult in range(1, params.d):
        secret = _weight_k_binary((basis[0] * mult) % params.d, params.k)
        if secret is not None and consistent_with(params, secret, transcript):
            candidates.append(secret)
    return _finish(params, candidates, dim, len(mat))


def ge_slack_recover(transcript: Transcript) -> EliminationResult:
    """Binary-case variant that keeps response-1 rows via one slack bit each.

    Each response-1 row i becomes w_i . x + s_i = 1 with a fresh unknown
    s_i; a recovered s_i = 1 marks that row as an empty-case round. The
    combined system is solved over Z_2 and the residual solution space is
    scanned for a unique consistent weight-k secret.
    """
    params = transcript.params
    if params.d != 2:
        raise ParamError(f"slack recovery works over Z_2 only, got d={params.d}")
    ones_mat, _, ones_idx = _dense_rows(transcript, lambda r: r == 1)
    zeros_mat, _, _ = _dense_rows(transcript, lambda r: r == 0)
    n, n1 = params.n, len(ones_mat)
    top = np.hstack([ones_mat, np.eye(n1, dtype=np.int64)])
    bottom = np.hstack([zeros_mat, np.zeros((len(zeros_mat), n1), dtype=np.int64)])
    system = np.vstack([top, bottom])
    rhs = np.concatenate([np.ones(n1, dtype=np.int64),
                          np.zeros(len(zeros_mat), dtype=np.int64)])
    particular, basis = solve_affine_mod(system, rhs, 2)
    if particular is None:
        return EliminationResult(None, INCONSISTENT, len(basis), len(system))
    dim = len(basis)
    if dim > SCAN_CAP_DIM:
        return EliminationResult(None, NEEDS_MORE_ROWS, dim, len(system))
    found: dict[Secret, np.ndarray] = {}
    for mask in range(2 ** dim):
        vec = particular.copy()
        for bit in range(dim):
            if mask >> bit & 1:
                vec = (vec + basis[bit]) % 2
        secret = _weight_k_binary(vec[:n], params.k)
        if secret is not None and consistent_with(params, secret, transcript):
            found[secret] = vec
    if len(found) != 1:
        status = NEEDS_MORE_ROWS if found or dim > 0 else INCONSISTENT
        return EliminationResult(None, status, dim, len(system))
    secret, vec = next(iter(found.items()))
    slack = {ones_idx[i]: int(vec[n + i]) for i in range(n1)}
    return EliminationResult(secret, RECOVERED, dim, len(system), slack=slack)


def _scan_affine(params: SchemeParams, transcript: Transcript,
                 particular: np.ndarray, basis: list[np.ndarray]) -> list[Secret]:
    """All consistent weight-k binary points of a small affine solution space."""
    dim = len(basis)
    if dim > SCAN_CAP_DIM:
        return []
    candidates = []
    total = params.d ** dim
    coeffs = np.zeros(dim, dtype=np.int64)
    for index in range(total):
        value = index
        for bit in range(dim):
            coeffs[bit] = value % params.d
            value //= params.d
        vec = particular.copy()
        for bit in range(dim):
            if coeffs[bit]:
                vec = (vec + coeffs[bit] * basis[bit]) % params.d
        secret = _weight_k_binary(vec, params.k)
        if secret is not None and consistent_with(params, secret, transcript):
            candidates.append(secret)
    return list(dict.fromkeys(candidates))


def _finish(params: SchemeParams, candidates: list[Secret], dim: int,
            rows: int, used_all: bool = False) -> EliminationResult:
    if len(candidates) == 1:
        return EliminationResult(candidates[0], RECOVERED, dim, rows, used_all)
    if len(candidates) > 1:
        return EliminationResult(None, NEEDS_MORE_ROWS, dim, rows, used_all)
    return EliminationResult(None, INCONSISTENT, dim, rows, used_all)


def monte_carlo_full_rank(d: int, l: int, n: int, reps: int,
                          rng: np.random.Generator) -> float:
    """Fraction of random n x n challenge-weight matrices of full rank over Z_d.

    Each row picks l positions uniformly and fills them with weights uniform
    in Z_d (zeros allowed), matching how challenges are sampled.
    """
    require_prime(d)
    if not 1 <= l <= n:
        raise ParamError(f"l must be in [1, n], got l={l}, n={n}")
    if reps < 1:
        raise ParamError(f"reps must be >= 1, got {reps}")
    full = 0
    for _ in range(reps):
        positions = np.argsort(rng.random((n, n)), axis=1)[:, :l]
        matrix = np.zeros((n, n), dtype=np.int64)
        np.put_along_axis(matrix, positions, rng.integers(0, d, size=(n, l)), axis=1)
        if rank_mod(matrix, d) == n:
            full += 1
    return full / reps
