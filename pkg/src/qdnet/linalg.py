"""Dense complex-matrix substrate: tensor products, traces, distances, predicates.

Everything operates on plain ``numpy`` arrays of shape (d, d) with d a power
of two.  Qubit 1 is the leftmost tensor factor throughout the package.
"""

from __future__ import annotations

from collections.abc import Iterable

import numpy as np

from .errors import DimMismatchError, InvalidArgumentError, InvalidSubsystemError

#: Default tolerance for every algebraic predicate in the package.
DEFAULT_TOL = 1e-10

AXES = ("x", "y", "z")


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


ID2 = _readonly(np.eye(2, dtype=complex))
SIGMA_X = _readonly(np.array([[0, 1], [1, 0]], dtype=complex))
SIGMA_Y = _readonly(np.array([[0, -1j], [1j, 0]], dtype=complex))
SIGMA_Z = _readonly(np.array([[1, 0], [0, -1]], dtype=complex))

PAULIS = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}

# sigma_i . sigma_j = delta_ij I + i eps_ijk sigma_k; table maps (i, j) -> (phase, k)
EPSILON = {
    ("x", "y"): (1j, "z"),
    ("y", "x"): (-1j, "z"),
    ("y", "z"): (1j, "x"),
    ("z", "y"): (-1j, "x"),
    ("z", "x"): (1j, "y"),
    ("x", "z"): (-1j, "y"),
}


def as_operator(a) -> np.ndarray:
    """Coerce to a square complex matrix on a power-of-two space."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimMismatchError(f"operator must be square, got shape {m.shape}")
    d = m.shape[0]
    if d < 1 or d & (d - 1):
        raise DimMismatchError(f"operator dimension {d} is not a power of two")
    if not np.all(np.isfinite(m.view(float))):
        raise InvalidArgumentError("operator has non-finite entries")
    return m


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex)


def kron(a, b) -> np.ndarray:
    """Kronecker product; the first argument is the leftmost tensor factor."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def dagger(a) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(a, dtype=complex).conj().T


def trace_full(a) -> complex:
    """Trace over the whole network space."""
    return complex(np.trace(np.asarray(a, dtype=complex)))


def frob_norm(a) -> float:
    return float(np.linalg.norm(np.asarray(a, dtype=complex)))


def frob_dist(a, b) -> float:
    """Frobenius distance; zero iff the operators are equal."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise DimMismatchError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))


def commutator(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return a @ b - b @ a


def partial_trace(a, keep: Iterable[int], n: int) -> np.ndarray:
    """Trace out every qubit not in ``keep`` (1-based indices, kept in ascending order).

    The trace is preserved: ``trace_full(result) == trace_full(a)``.  Tracing
    out all qubits yields a 1x1 matrix holding the full trace.
    """
    a = as_operator(a)
    if a.shape[0] != 2**n:
        raise DimMismatchError(f"operator dim {a.shape[0]} does not match n={n}")
    kept = sorted(set(int(q) for q in keep))
    for q in kept:
        if not 1 <= q <= n:
            raise InvalidSubsystemError(f"qubit index {q} outside 1..{n}")
    t = a.reshape([2] * (2 * n))
    row = list(range(n))
    col = list(range(n, 2 * n))
    for q in range(1, n + 1):
        if q not in kept:
            col[q - 1] = row[q - 1]
    out = [row[q - 1] for q in kept] + [col[q - 1] for q in kept]
    k = len(kept)
    return np.einsum(t, row + col, out).reshape(2**k, 2**k)


def is_hermitian(a, tol: float = DEFAULT_TOL) -> bool:
    a = np.asarray(a, dtype=complex)
    return frob_dist(a, a.conj().T) <= tol


def is_unitary(a, tol: float = DEFAULT_TOL) -> bool:
    a = np.asarray(a, dtype=complex)
    eye = identity(a.shape[0])
    return frob_dist(a.conj().T @ a, eye) <= tol and frob_dist(a @ a.conj().T, eye) <= tol


def is_projector(a, tol: float = DEFAULT_TOL) -> bool:
    a = np.asarray(a, dtype=complex)
    return is_hermitian(a, tol) and frob_dist(a @ a, a) <= tol


def check_property(a, kind: str, tol: float = DEFAULT_TOL) -> bool:
    """Tolerance-based predicate dispatch: ``hermitian``, ``unitary`` or ``projector``."""
    if kind == "hermitian":
        return is_hermitian(a, tol)
    if kind == "unitary":
        return is_unitary(a, tol)
    if kind == "projector":
        return is_projector(a, tol)
    raise InvalidArgumentError(f"unknown property kind: {kind!r}")


def embed_single(op2, slot: int, n: int) -> np.ndarray:
    """Place a 2x2 operator on qubit ``slot`` of an n-qubit space (identity elsewhere)."""
    if not 1 <= slot <= n:
        raise InvalidSubsystemError(f"qubit index {slot} outside 1..{n}")
    op2 = np.asarray(op2, dtype=complex)
    if op2.shape != (2, 2):
        raise DimMismatchError(f"expected a 2x2 operator, got {op2.shape}")
    left = identity(2 ** (slot - 1))
    right = identity(2 ** (n - slot))
    return np.kron(np.kron(left, op2), right)


def embed_on_support(m, support: tuple[int, ...], n: int) -> np.ndarray:
    """Embed a 2^k x 2^k operator whose i-th tensor factor acts on qubit ``support[i]``."""
    support = tuple(int(q) for q in support)
    k = len(support)
    if len(set(support)) != k or k == 0:
        raise InvalidSubsystemError(f"support must be non-empty and duplicate-free: {support}")
    for q in support:
        if not 1 <= q <= n:
            raise InvalidSubsystemError(f"qubit index {q} outside 1..{n}")
    m = as_operator(m)
    if m.shape[0] != 2**k:
        raise DimMismatchError(f"operator dim {m.shape[0]} does not match support size {k}")
    big = np.kron(m, identity(2 ** (n - k)))
    # Axis i of `big` currently belongs to `order[i]`; permute into slot order.
    order = list(support) + [q for q in range(1, n + 1) if q not in support]
    perm = [order.index(q) for q in range(1, n + 1)]
    t = big.reshape([2] * (2 * n))
    t = t.transpose(perm + [n + p for p in perm])
    return t.reshape(2**n, 2**n)
