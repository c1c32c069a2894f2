"""Cone membership: k-block positivity, Schmidt-number certificates, and
witness duality checks.

``k_block_positivity`` is the workhorse: it minimizes <v|X|v> over unit
vectors of Schmidt rank at most k with the same frame see-saw used by the
norms module (the inner step is an exact minimal-eigenpair computation of the
compressed operator).  A negative minimum below ``REFUTE_TOL`` refutes
k-block positivity with an explicit witness vector; otherwise the verdict is
``heuristically-positive``, which is deliberately one-sided: no completeness
is claimed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    EVAL_TOL,
    HERM_TOL,
    RANK_TOL,
    RECON_TOL,
    REFUTE_TOL,
    UNIT_TOL,
    BipartiteOperator,
    Frame,
    PureState,
    is_hermitian,
    min_eig_hermitian,
    schmidt_rank,
)
from .optim import SeeSawConfig, compress_tensor, frame_ascent, lift_from_frame, run_restarts
from .rand import random_sr_k_vector

__all__ = [
    "BlockPositivityVerdict",
    "SchmidtEnsemble",
    "WitnessCertificate",
    "k_block_positivity",
    "sn_upper_verify",
    "witness_check",
    "reduction_witness",
    "random_schmidt_ensemble",
]


@dataclass(frozen=True)
class BlockPositivityVerdict:
    """Outcome of the k-block-positivity search.

    ``refuted`` carries a Schmidt-rank-<=k witness with
    <witness|X|witness> = min_value < -REFUTE_TOL.  ``heuristically-positive``
    only reports that the search found no violation.
    """

    status: str  # "refuted" | "heuristically-positive"
    min_value: float
    witness_vector: PureState | None
    k: int
    frame: Frame | None = None
    restarts_used: int = 0
    iterations: int = 0

    def __post_init__(self):
        if self.status not in ("refuted", "heuristically-positive"):
            raise ValueError("unknown verdict status %r" % (self.status,))


@dataclass(frozen=True)
class SchmidtEnsemble:
    """Convex mixture of pure states, each of Schmidt rank <= k.

    Existence of such an ensemble for a density operator certifies Schmidt
    number <= k.
    """

    terms: tuple
    k: int

    def __post_init__(self):
        if not self.terms:
            raise ValueError("ensemble needs at least one term")
        dims = self.terms[0][1].dims
        total = 0.0
        for w, state in self.terms:
            if w <= 0:
                raise ValueError("ensemble weights must be positive")
            if state.dims != dims:
                raise ValueError("ensemble states must share dims")
            if schmidt_rank(state) > self.k:
                raise ValueError("ensemble state has Schmidt rank > %d" % self.k)
            total += w
        if abs(total - 1.0) > UNIT_TOL:
            raise ValueError("ensemble weights sum to %.12g, expected 1" % total)

    @property
    def dims(self) -> tuple[int, int]:
        return self.terms[0][1].dims

    def density(self) -> BipartiteOperator:
        """The mixed state sum_i w_i |v_i><v_i|."""
        mats = [w * np.outer(s.amplitudes, s.amplitudes.conj())
                for w, s in self.terms]
        return BipartiteOperator(self.dims, sum(mats))


@dataclass(frozen=True)
class WitnessCertificate:
    """Pairing of a (heuristically) k-block-positive W against a state.

    Valid only when the block-positivity evidence stands and the pairing is
    below -REFUTE_TOL; validity then certifies Schmidt number >= k+1, modulo
    the heuristic evidence for W.
    """

    W: BipartiteOperator
    k: int
    pairing: float
    block_pos_evidence: BlockPositivityVerdict

    @property
    def valid(self) -> bool:
        return (self.block_pos_evidence.status == "heuristically-positive"
                and self.pairing < -REFUTE_TOL)


def _mineig_objective(c: np.ndarray):
    vals, vecs = np.linalg.eigh(c)
    return float(vals[0]), [(1.0 + 0.0j, vecs[:, 0], vecs[:, 0])]


def k_block_positivity(X: BipartiteOperator, k: int,
                       cfg: SeeSawConfig | None = None) -> BlockPositivityVerdict:
    """Minimize <v|X|v> over Schmidt-rank-<=k unit vectors.

    Frame see-saw: for a fixed orthonormal frame the inner minimum is the
    bottom eigenpair of the compression (exact); the frame descends along the
    projected gradient.  At k = min(m, n) the constraint is vacuous and the
    global eigenpair is returned directly.
    """
    cfg = cfg or SeeSawConfig()
    if not is_hermitian(X.mat):
        raise ValueError("k-block positivity needs a Hermitian operator")
    m, n = X.dims
    if not 1 <= k <= min(m, n):
        raise ValueError("k=%d out of range for dims %r" % (k, (X.dims,)))

    if k == min(m, n):
        _, vecs = np.linalg.eigh(X.mat)
        wit = PureState((m, n), vecs[:, 0])
        val = float(np.real(wit.amplitudes.conj() @ X.mat @ wit.amplitudes))
        status = "refuted" if val < -REFUTE_TOL else "heuristically-positive"
        return BlockPositivityVerdict(status=status, min_value=val,
                                      witness_vector=wit, k=k, frame=None,
                                      restarts_used=0, iterations=0)

    t4 = X.blocks()

    def worker(_r: int, rng: np.random.Generator):
        return frame_ascent(t4, k, rng, _mineig_objective, cfg, maximize=False)

    best, outcomes = run_restarts(worker, cfg, minimize=True)
    v = best.payload[0]
    u = best.payload[1][0][1]
    wit = PureState((m, n), lift_from_frame(u, v, m))
    val = float(np.real(wit.amplitudes.conj() @ X.mat @ wit.amplitudes))
    status = "refuted" if val < -REFUTE_TOL else "heuristically-positive"
    iters = int(sum(max(len(o.history) - 1, 0) for o in outcomes))
    return BlockPositivityVerdict(status=status, min_value=val,
                                  witness_vector=wit, k=k,
                                  frame=Frame(vectors=v.T.copy()),
                                  restarts_used=cfg.restarts, iterations=iters)


def sn_upper_verify(rho: BipartiteOperator, ens: SchmidtEnsemble) -> bool:
    """True iff the ensemble reconstructs rho within RECON_TOL, certifying
    Schmidt number <= ens.k."""
    if not is_hermitian(rho.mat):
        raise ValueError("state must be Hermitian")
    if abs(np.trace(rho.mat).real - 1.0) > UNIT_TOL:
        raise ValueError("state must have unit trace")
    if ens.dims != rho.dims:
        raise ValueError("ensemble dims %r do not match state dims %r"
                         % (ens.dims, rho.dims))
    return bool(np.max(np.abs(ens.density().mat - rho.mat)) <= RECON_TOL)


def witness_check(W: BipartiteOperator, rho: BipartiteOperator, k: int,
                  cfg: SeeSawConfig | None = None) -> WitnessCertificate:
    """Pair a candidate witness with a state: runs the block-positivity
    heuristic on W and evaluates Tr(W rho).  A valid certificate implies
    SN(rho) >= k+1."""
    cfg = cfg or SeeSawConfig()
    if not is_hermitian(W.mat):
        raise ValueError("witness must be Hermitian")
    if not is_hermitian(rho.mat):
        raise ValueError("state must be Hermitian")
    if abs(np.trace(rho.mat).real - 1.0) > UNIT_TOL:
        raise ValueError("state must have unit trace")
    if min_eig_hermitian(rho.mat) < -EVAL_TOL:
        raise ValueError("state must be positive semidefinite")
    if W.dims != rho.dims:
        raise ValueError("witness dims %r do not match state dims %r"
                         % (W.dims, rho.dims))
    evidence = k_block_positivity(W, k, cfg)
    pairing = float(np.trace(W.mat @ rho.mat).real)
    return WitnessCertificate(W=W, k=k, pairing=pairing,
                              block_pos_evidence=evidence)


def reduction_witness(n: int, k: int) -> BipartiteOperator:
    """W = I - (n/k)|phi><phi| with |phi> maximally entangled on C^n (x) C^n.

    k-block positive: the largest overlap of a Schmidt-rank-<=k unit vector
    with |phi> is k/n, so the minimal expectation is 1 - (n/k)(k/n) = 0.  Not
    (k+1)-block positive for k < n.
    """
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    phi = np.eye(n, dtype=complex).reshape(-1) / np.sqrt(n)
    mat = np.eye(n * n, dtype=complex) - (n / k) * np.outer(phi, phi.conj())
    return BipartiteOperator((n, n), mat)


def random_schmidt_ensemble(dims: tuple[int, int], k: int, terms: int,
                            rng: np.random.Generator) -> SchmidtEnsemble:
    """Random mixture of ``terms`` Schmidt-rank-<=k pure states with a
    Dirichlet weight vector; certifies SN <= k of its density by construction."""
    weights = rng.dirichlet(np.ones(terms))
    states = [random_sr_k_vector(dims, k, rng) for _ in range(terms)]
    return SchmidtEnsemble(terms=tuple(zip(map(float, weights), states)), k=k)
