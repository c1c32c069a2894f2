"""Choi-matrix calculus for linear maps between matrix algebras.

Convention: J(Phi) = sum_ij |i><j| (x) Phi(|i><j|), input factor first, so the
Choi matrix of a map M_r -> M_n is a BipartiteOperator with dims (r, n) and
apply(Phi, X) = sum_ij X_ij Phi(|i><j|).

The two map norms are multi-restart see-saws with exact inner steps:

* ``idk_op_norm``: sup ||(id_k (x) Phi)(X)|| over the operator-norm unit
  ball.  For fixed output vectors (v, w) the optimal X is the polar partial
  isometry of the pairing matrix (value = its trace norm); for fixed X the
  optimal (v, w) is the top singular pair.
* ``hermitian_trace_norm``: sup ||(id_k (x) Phi)(|u><u|)||_tr over unit u;
  rank-1 projections are extreme among Hermitian trace-ball elements, so this
  is a projected-gradient ascent on the sphere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cones import BlockPositivityVerdict, SchmidtEnsemble, WitnessCertificate, \
    k_block_positivity, sn_upper_verify, witness_check
from .linalg import (
    EVAL_TOL,
    REFUTE_TOL,
    UNIT_TOL,
    BipartiteOperator,
    PureState,
    is_hermitian,
    min_eig_hermitian,
    operator_norm,
    trace_norm,
)
from .optim import RestartOutcome, SeeSawConfig, run_restarts
from .rand import random_unit_vector

__all__ = [
    "MapRepr",
    "MapNormEstimate",
    "ContractionTestResult",
    "identity_map",
    "transpose_map",
    "depolarizing_map",
    "reduction_map",
    "apply",
    "idk_apply",
    "idk_pairing_matrix",
    "k_positivity",
    "k_peb_certify",
    "k_peb_refute",
    "idk_op_norm",
    "hermitian_trace_norm",
    "detection_map",
    "sn_contraction_test",
]


@dataclass(frozen=True)
class MapRepr:
    """A linear map M_r -> M_n held as its Choi matrix."""

    in_dim: int
    out_dim: int
    choi: BipartiteOperator

    def __post_init__(self):
        if self.choi.dims != (self.in_dim, self.out_dim):
            raise ValueError("Choi dims %r do not match (%d, %d)"
                             % (self.choi.dims, self.in_dim, self.out_dim))

    @classmethod
    def from_choi(cls, choi: BipartiteOperator) -> "MapRepr":
        return cls(in_dim=choi.m, out_dim=choi.n, choi=choi)

    @classmethod
    def from_kraus(cls, kraus, in_dim: int, out_dim: int) -> "MapRepr":
        """Phi(X) = sum_i A_i X A_i^dagger from n x r Kraus operators."""
        j4 = np.zeros((in_dim, out_dim, in_dim, out_dim), dtype=complex)
        for a in kraus:
            a = np.asarray(a, dtype=complex)
            if a.shape != (out_dim, in_dim):
                raise ValueError("Kraus operator shape %r, expected %r"
                                 % (a.shape, (out_dim, in_dim)))
            j4 += np.einsum("ai,bj->iajb", a, a.conj())
        mat = j4.reshape(in_dim * out_dim, in_dim * out_dim)
        return cls(in_dim, out_dim, BipartiteOperator((in_dim, out_dim), mat))

    @classmethod
    def from_callable(cls, f, in_dim: int, out_dim: int) -> "MapRepr":
        """Tabulate Phi on the matrix units."""
        j4 = np.zeros((in_dim, out_dim, in_dim, out_dim), dtype=complex)
        for i in range(in_dim):
            for j in range(in_dim):
                e = np.zeros((in_dim, in_dim), dtype=complex)
                e[i, j] = 1.0
                out = np.asarray(f(e), dtype=complex)
                if out.shape != (out_dim, out_dim):
                    raise ValueError("map output shape %r, expected %r"
                                     % (out.shape, (out_dim, out_dim)))
                j4[i, :, j, :] = out
        mat = j4.reshape(in_dim * out_dim, in_dim * out_dim)
        return cls(in_dim, out_dim, BipartiteOperator((in_dim, out_dim), mat))

    def j4(self) -> np.ndarray:
        return self.choi.blocks()

    def is_hermiticity_preserving(self) -> bool:
        return is_hermitian(self.choi.mat)

    def is_cp(self, tol: float = EVAL_TOL) -> bool:
        return (is_hermitian(self.choi.mat)
                and min_eig_hermitian(self.choi.mat) >= -tol)

    def is_trace_preserving(self, tol: float = UNIT_TOL) -> bool:
        # trace-preserving iff Tr Phi(|i><j|) = delta_ij
        red = np.einsum("iaja->ij", self.j4())
        return bool(np.max(np.abs(red - np.eye(self.in_dim))) <= tol)


def identity_map(n: int) -> MapRepr:
    return MapRepr.from_callable(lambda x: x, n, n)


def transpose_map(n: int) -> MapRepr:
    return MapRepr.from_callable(lambda x: x.T, n, n)


def depolarizing_map(n: int) -> MapRepr:
    """Omega(X) = Tr(X) I/n."""
    return MapRepr.from_callable(
        lambda x: np.trace(x) * np.eye(n, dtype=complex) / n, n, n)


def reduction_map(n: int, p: float = 1.0) -> MapRepr:
    """Phi_p(X) = Tr(X) I - p X; k-positive iff p <= 1/k."""
    return MapRepr.from_callable(
        lambda x: np.trace(x) * np.eye(n, dtype=complex) - p * x, n, n)


def apply(phi: MapRepr, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    if x.shape != (phi.in_dim, phi.in_dim):
        raise ValueError("input shape %r, expected %r"
                         % (x.shape, (phi.in_dim, phi.in_dim)))
    return np.einsum("ij,iajb->ab", x, phi.j4())


def idk_apply(phi: MapRepr, x: np.ndarray, k: int) -> np.ndarray:
    """(id_k (x) Phi)(X) for X on C^k (x) C^r."""
    r, n = phi.in_dim, phi.out_dim
    x = np.asarray(x, dtype=complex)
    if x.shape != (k * r, k * r):
        raise ValueError("input shape %r, expected %r" % (x.shape, (k * r,) * 2))
    x4 = x.reshape(k, r, k, r)
    out = np.einsum("piqj,iajb->paqb", x4, phi.j4())
    return out.reshape(k * n, k * n)


def idk_pairing_matrix(phi: MapRepr, v: np.ndarray, w: np.ndarray, k: int) -> np.ndarray:
    """Y with <v|(id_k (x) Phi)(X)|w> = Tr(X Y) for every X on C^k (x) C^r."""
    r, n = phi.in_dim, phi.out_dim
    v4 = np.asarray(v, dtype=complex).reshape(k, n)
    w4 = np.asarray(w, dtype=complex).reshape(k, n)
    y = np.einsum("pa,iajb,qb->qjpi", v4.conj(), phi.j4(), w4)
    return y.reshape(k * r, k * r)


# ---------------------------------------------------------------------------
# positivity / PEB
# ---------------------------------------------------------------------------


def k_positivity(phi: MapRepr, k: int,
                 cfg: SeeSawConfig | None = None) -> BlockPositivityVerdict:
    """k-positive iff the Choi matrix is k-block positive; delegates to the
    cones module.  A refutation witness encodes the violating input state."""
    if not is_hermitian(phi.choi.mat):
        raise ValueError("k-positivity needs a Hermiticity-preserving map")
    return k_block_positivity(phi.choi, k, cfg)


def _choi_state(phi: MapRepr) -> BipartiteOperator:
    if not phi.is_cp():
        raise ValueError("operation defined for completely positive maps only")
    tr = float(np.trace(phi.choi.mat).real)
    if tr <= 0:
        raise ValueError("Choi matrix has nonpositive trace")
    return BipartiteOperator(phi.choi.dims, phi.choi.mat / tr)


def k_peb_certify(phi: MapRepr, ens: SchmidtEnsemble) -> bool:
    """Certify k-partial entanglement breaking: the normalized Choi state has
    Schmidt number <= ens.k iff such an ensemble exists."""
    return sn_upper_verify(_choi_state(phi), ens)


def k_peb_refute(phi: MapRepr, k: int,
                 cfg: SeeSawConfig | None = None) -> WitnessCertificate:
    """Attempt to refute k-PEB: pair the normalized Choi state against the
    reduction-type witness on C^r (x) C^n.  A valid certificate refutes."""
    rho = _choi_state(phi)
    r, n = rho.dims
    d = min(r, n)
    if not 1 <= k <= d:
        raise ValueError("k=%d out of range for Choi dims %r" % (k, (rho.dims,)))
    phi_vec = np.zeros((r, n), dtype=complex)
    for t in range(d):
        phi_vec[t, t] = 1.0 / np.sqrt(d)
    phi_vec = phi_vec.reshape(-1)
    w = np.eye(r * n, dtype=complex) - (d / k) * np.outer(phi_vec, phi_vec.conj())
    return witness_check(BipartiteOperator((r, n), w), rho, k, cfg)


# ---------------------------------------------------------------------------
# map norms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MapNormEstimate:
    """Map-norm value with the attaining input; re-evaluating the norm at
    ``attaining_input`` reproduces ``value`` within EVAL_TOL."""

    value: float
    direction: str  # "lower" | "exact-flagged"
    attaining_input: object
    restarts_used: int
    iterations: int
    converged: bool
    history: list

    def __post_init__(self):
        if self.direction not in ("lower", "exact-flagged"):
            raise ValueError("direction must be lower/exact-flagged")


def _polar_trace_step(y: np.ndarray):
    u, s, vh = np.linalg.svd(y)
    x = vh.conj().T @ u.conj().T
    return float(np.sum(s)), x


def idk_op_norm(phi: MapRepr, k: int, cfg: SeeSawConfig | None = None) -> MapNormEstimate:
    """Lower bound on ||id_k (x) Phi|| = sup{||(id_k (x) Phi)(X)|| : ||X|| <= 1}.

    Alternates two exact partial maximizations (see module docstring).
    Restart 0 starts from X = I, which already attains the supremum for
    completely positive maps (value ||Phi(I)||); those results are flagged
    exact.
    """
    cfg = cfg or SeeSawConfig()
    if k < 1:
        raise ValueError("k must be >= 1")
    r, n = phi.in_dim, phi.out_dim

    def worker(restart: int, rng: np.random.Generator) -> RestartOutcome:
        if restart == 0:
            x = np.eye(k * r, dtype=complex)
        else:
            _, x = _polar_trace_step(idk_pairing_matrix(
                phi, random_unit_vector(k * n, rng),
                random_unit_vector(k * n, rng), k))
        z = idk_apply(phi, x, k)
        u, s, vh = np.linalg.svd(z)
        val = float(s[0])
        v, w = u[:, 0], vh[0, :].conj()
        history = [val]
        converged = False
        for _ in range(cfg.max_iters):
            prev = val
            tr_val, x = _polar_trace_step(idk_pairing_matrix(phi, v, w, k))
            z = idk_apply(phi, x, k)
            u, s, vh = np.linalg.svd(z)
            val = float(s[0])
            v, w = u[:, 0], vh[0, :].conj()
            history.append(val)
            if val - prev < cfg.obj_tol:
                converged = True
                break
        return RestartOutcome(value=val, payload=x, history=history,
                              converged=converged)

    best, outcomes = run_restarts(worker, cfg)
    direction = "exact-flagged" if phi.is_cp() else "lower"
    iters = int(sum(max(len(o.history) - 1, 0) for o in outcomes))
    return MapNormEstimate(value=best.value, direction=direction,
                           attaining_input=best.payload,
                           restarts_used=cfg.restarts, iterations=iters,
                           converged=best.converged,
                           history=[o.history for o in outcomes])


def _sign_matrix(a: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(a)
    return (vecs * np.sign(vals)) @ vecs.conj().T


def hermitian_trace_norm(phi: MapRepr, k: int,
                         cfg: SeeSawConfig | None = None) -> MapNormEstimate:
    """Lower bound on sup ||(id_k (x) Phi)(|u><u|)||_tr over unit vectors u,
    which equals the induced Hermitian trace norm of id_k (x) Phi (rank-1
    projections are extreme among trace-ball Hermitians) and the supremum of
    ||(id (x) Phi)(rho)||_tr over states with Schmidt number <= k."""
    cfg = cfg or SeeSawConfig()
    if k < 1:
        raise ValueError("k must be >= 1")
    if not is_hermitian(phi.choi.mat):
        raise ValueError("Hermitian trace norm needs a Hermiticity-preserving map")
    r = phi.in_dim
    j4 = phi.j4()
    n = phi.out_dim
    d = k * r

    def value_at(u: np.ndarray) -> float:
        return trace_norm(idk_apply(phi, np.outer(u, u.conj()), k))

    def gradient(u: np.ndarray) -> np.ndarray:
        a = idk_apply(phi, np.outer(u, u.conj()), k)
        s4 = _sign_matrix((a + a.conj().T) / 2.0).reshape(k, n, k, n)
        kmat = np.einsum("qbpa,iajb->piqj", s4, j4).reshape(d, d)
        return kmat.T @ u

    def worker(restart: int, rng: np.random.Generator) -> RestartOutcome:
        if restart == 0:
            u = np.zeros((k, r), dtype=complex)
            for t in range(min(k, r)):
                u[t, t] = 1.0
            u = u.reshape(-1) / np.sqrt(min(k, r))
        else:
            u = random_unit_vector(d, rng)
        val = value_at(u)
        history = [val]
        eta = 0.5
        converged = False
        for _ in range(cfg.max_iters):
            g = gradient(u)
            g = g - u * (u.conj() @ g)
            gn = np.linalg.norm(g)
            if gn < 1e-14:
                converged = True
                break
            g = g / gn
            step = eta
            accepted = False
            for _ in range(6):
                cand = u + step * g
                cand = cand / np.linalg.norm(cand)
                cand_val = value_at(cand)
                if cand_val > val:
                    accepted = True
                    break
                step /= 2.0
            if not accepted:
                converged = True
                break
            gain = cand_val - val
            u, val = cand, cand_val
            history.append(val)
            eta = min(step * 1.5, 1.0)
            if gain < cfg.obj_tol:
                converged = True
                break
        return RestartOutcome(value=val, payload=u, history=history,
                              converged=converged)

    best, outcomes = run_restarts(worker, cfg)
    iters = int(sum(max(len(o.history) - 1, 0) for o in outcomes))
    return MapNormEstimate(value=best.value, direction="lower",
                           attaining_input=PureState((k, r), best.payload),
                           restarts_used=cfg.restarts, iterations=iters,
                           converged=best.converged,
                           history=[o.history for o in outcomes])


# ---------------------------------------------------------------------------
# Schmidt-number detection pipeline
# ---------------------------------------------------------------------------


def detection_map(psi: MapRepr, cfg: SeeSawConfig | None = None) -> MapRepr:
    """Block-diagonal detector X -> Psi'(X) (+) (Omega - Psi')(X) into M_2n,
    where Omega is the completely depolarizing channel and Psi' is Psi scaled
    so its induced trace norm stays 10% below 1/n.  Trace-preserving by
    construction; k-positive whenever Psi is (given the norm bound)."""
    cfg = cfg or SeeSawConfig()
    if psi.in_dim != psi.out_dim:
        raise ValueError("detector construction needs a square map")
    if not is_hermitian(psi.choi.mat):
        raise ValueError("detector construction needs a Hermiticity-preserving map")
    n = psi.in_dim
    t = hermitian_trace_norm(psi, 1, cfg).value
    target = 0.9 / n
    scale = 1.0 if t <= target else target / t
    j4 = scale * psi.j4()
    out = np.zeros((n, 2 * n, n, 2 * n), dtype=complex)
    out[:, :n, :, :n] = j4
    eye_n = np.eye(n)
    omega4 = np.einsum("ij,ab->iajb", eye_n, eye_n) / n
    out[:, n:, :, n:] = omega4 - j4
    mat = out.reshape(2 * n * n, 2 * n * n)
    return MapRepr(n, 2 * n, BipartiteOperator((n, 2 * n), mat))


@dataclass(frozen=True)
class ContractionTestResult:
    """Outcome of the trace-norm contraction test at level k."""

    status: str  # "detected" | "not-detected"
    trace_norm_value: float
    k: int
    norm_bound: float

    @property
    def detected(self) -> bool:
        return self.status == "detected"

    @property
    def sn_lower_bound(self) -> int | None:
        """Certified SN(rho) >= k+1 when detected."""
        return self.k + 1 if self.detected else None


def sn_contraction_test(rho: BipartiteOperator, phi: MapRepr, k: int,
                        cfg: SeeSawConfig | None = None,
                        norm_bound: float | None = None) -> ContractionTestResult:
    """Detect Schmidt number > k: any Phi with ||id_k (x) Phi||_tr^H <= 1
    contracts the trace norm of every SN-<=k state, so an output trace norm
    above 1 certifies SN(rho) > k.

    The norm precondition is checked against ``norm_bound`` when the caller
    certifies one, otherwise against the library's own estimate.
    """
    cfg = cfg or SeeSawConfig()
    if not is_hermitian(rho.mat):
        raise ValueError("state must be Hermitian")
    if abs(np.trace(rho.mat).real - 1.0) > UNIT_TOL:
        raise ValueError("state must have unit trace")
    if min_eig_hermitian(rho.mat) < -EVAL_TOL:
        raise ValueError("state must be positive semidefinite")
    if rho.n != phi.in_dim:
        raise ValueError("map input dim %d does not match state second factor %d"
                         % (phi.in_dim, rho.n))
    bound = hermitian_trace_norm(phi, k, cfg).value if norm_bound is None else norm_bound
    if bound > 1.0 + EVAL_TOL:
        raise ValueError("map fails the contraction precondition: "
                         "||id_k (x) Phi||_tr^H = %.12g > 1" % bound)
    val = trace_norm(idk_apply(phi, rho.mat, rho.m))
    status = "detected" if val > 1.0 + REFUTE_TOL else "not-detected"
    return ContractionTestResult(status=status, trace_norm_value=val, k=k,
                                 norm_bound=float(bound))
