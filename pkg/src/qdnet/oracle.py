"""Schrödinger-picture cross-validation.

Gates are applied here as fixed matrices to an evolving state vector, the
conventional composition.  Agreement of these expectation values with the
descriptor picture's current-descriptor polynomials is the package's central
cross-check, so the gate matrices are constructed independently of the
descriptor assembly path.
"""

from __future__ import annotations

import numpy as np

from .errors import (
    DimMismatchError,
    InvalidArgumentError,
    InvalidStateError,
    NonCommutingFoliationError,
    NotObservableError,
    ZeroWeightBranchError,
)
from .linalg import (
    DEFAULT_TOL,
    PAULIS,
    as_operator,
    embed_on_support,
    embed_single,
    frob_dist,
    identity,
    is_hermitian,
    is_projector,
    kron,
    partial_trace,
)
from .network import GateSpec


def as_state_vector(psi, tol: float = DEFAULT_TOL) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    d = psi.shape[0]
    if d < 2 or d & (d - 1):
        raise DimMismatchError(f"state vector length {d} is not a power of two")
    norm = float(np.linalg.norm(psi))
    if abs(norm - 1.0) > tol:
        raise InvalidStateError(f"state vector norm {norm} is not 1 within {tol}")
    return psi


def num_qubits(psi) -> int:
    return int(np.asarray(psi).reshape(-1).shape[0]).bit_length() - 1


def gate_matrix(spec: GateSpec, n: int) -> np.ndarray:
    """Fixed matrix form of a gate on the n-qubit space (the t=0 form)."""
    if spec.kind == "single":
        c0, cx, cy, cz = spec.coeffs
        m2 = c0 * np.eye(2, dtype=complex) + cx * PAULIS["x"] + cy * PAULIS["y"] + cz * PAULIS["z"]
        return embed_single(m2, spec.support[0], n)
    if spec.kind == "cnot":
        # Permutation matrix: flip the target bit wherever the control bit is set.
        for q in spec.support:
            if not 1 <= q <= n:
                raise DimMismatchError(f"qubit index {q} outside 1..{n}")
        dim = 2**n
        control_bit = 1 << (n - spec.control)
        target_bit = 1 << (n - spec.target)
        u = np.zeros((dim, dim), dtype=complex)
        for i in range(dim):
            j = i ^ target_bit if i & control_bit else i
            u[j, i] = 1.0
        return u
    if spec.kind == "raw":
        return embed_on_support(spec.matrix, spec.support, n)
    raise InvalidArgumentError(f"unknown gate kind {spec.kind!r}")


def sv_run(psi0, gates, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Apply a gate sequence to a state vector, in order, via fixed matrices."""
    psi = as_state_vector(psi0, tol)
    n = num_qubits(psi)
    for spec in gates:
        u = gate_matrix(spec, n)
        if u.shape[0] != psi.shape[0]:
            raise DimMismatchError(f"gate dim {u.shape[0]} does not match state dim {psi.shape[0]}")
        psi = u @ psi
    return psi


def sv_expectation(psi, obs, tol: float = DEFAULT_TOL) -> float:
    obs = as_operator(obs)
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if obs.shape[0] != psi.shape[0]:
        raise DimMismatchError(f"observable dim {obs.shape[0]} does not match state dim {psi.shape[0]}")
    if not is_hermitian(obs, tol):
        raise NotObservableError("observable is not Hermitian within tolerance")
    return float(np.vdot(psi, obs @ psi).real)


def conditional_expectation(psi, proj, obs, tol: float = DEFAULT_TOL) -> float:
    """Expectation of ``obs`` in the projected (relative) state: <PiOPi> / <Pi>."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    proj = as_operator(proj)
    obs = as_operator(obs)
    if not (proj.shape[0] == obs.shape[0] == psi.shape[0]):
        raise DimMismatchError("state, projector and observable dimensions must agree")
    if not is_projector(proj, tol):
        raise InvalidArgumentError("conditioning operator is not a projector within tolerance")
    if not is_hermitian(obs, tol):
        raise NotObservableError("observable is not Hermitian within tolerance")
    dev = float(np.linalg.norm(proj @ obs - obs @ proj))
    if dev > tol:
        raise NonCommutingFoliationError(
            f"projector does not commute with the observable (deviation {dev:.3e})"
        )
    weight = float(np.vdot(psi, proj @ psi).real)
    if weight <= tol:
        raise ZeroWeightBranchError(f"conditioning weight {weight:.3e} is numerically zero")
    projected = proj @ psi
    return float(np.vdot(projected, obs @ projected).real) / weight


def density_matrix(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    return np.outer(psi, psi.conj())


def _split_cut(psi, cut) -> tuple[np.ndarray, list[int], list[int], int]:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    n = num_qubits(psi)
    side_a = sorted(set(int(q) for q in cut))
    if not side_a or len(side_a) >= n or any(not 1 <= q <= n for q in side_a):
        raise InvalidArgumentError(f"cut {side_a} is not a proper bipartition of 1..{n}")
    side_b = [q for q in range(1, n + 1) if q not in side_a]
    return psi, side_a, side_b, n


def separability_gap(psi, cut, tol: float = DEFAULT_TOL) -> float:
    """Frobenius distance between rho_A (x) rho_B and rho_AB across the cut.

    Zero (within tolerance) exactly when the cut is unentangled: the reduced
    density matrices of an entangled state cannot be recombined into the whole.
    """
    psi, side_a, side_b, n = _split_cut(psi, cut)
    # Reorder so the A qubits occupy the leading tensor slots.
    order = side_a + side_b
    perm = [q - 1 for q in order]
    psi_ord = psi.reshape([2] * n).transpose(perm).reshape(-1)
    rho_ab = density_matrix(psi_ord)
    ka = len(side_a)
    rho_a = partial_trace(rho_ab, range(1, ka + 1), n)
    rho_b = partial_trace(rho_ab, range(ka + 1, n + 1), n)
    return frob_dist(kron(rho_a, rho_b), rho_ab)


def schmidt_rank(psi, cut, tol: float = DEFAULT_TOL) -> int:
    """Number of singular values above tolerance across the cut."""
    psi, side_a, side_b, n = _split_cut(psi, cut)
    perm = [q - 1 for q in side_a + side_b]
    m = psi.reshape([2] * n).transpose(perm).reshape(2 ** len(side_a), 2 ** len(side_b))
    singular = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(singular > tol))
