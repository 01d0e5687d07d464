"""Descriptor-based qubit networks.

Each qubit is carried by a triple of Hermitian operators on the full network
space (its descriptors); the constant Heisenberg state supplies expectation
values.  Gates are assembled as polynomials in the *current* descriptors and
applied by conjugating every descriptor component, so locality of single-qubit
gates is a checked property rather than a shortcut.

Conventions (shared by the whole package):

* qubit 1 is the leftmost tensor factor;
* the computational basis state ``|0>`` has z-eigenvalue +1;
* for ``cnot`` the control is written first and is the *measured* qubit: its
  z-value is copied onto the target, which acts as the measurer.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import (
    DimMismatchError,
    InvalidArgumentError,
    InvalidStateError,
    InvalidSubsystemError,
    NotObservableError,
    NotUnitaryError,
)
from .linalg import (
    AXES,
    DEFAULT_TOL,
    EPSILON,
    ID2,
    PAULIS,
    _readonly,
    as_operator,
    embed_single,
    frob_dist,
    identity,
    is_hermitian,
    is_unitary,
)

_AXIS_INDEX = {"x": 0, "y": 1, "z": 2}


@dataclass(frozen=True, eq=False)
class DescriptorTriple:
    """The (x, y, z) observable triple of one qubit at one instant."""

    qubit: int
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        for c in (self.x, self.y, self.z):
            c.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.x.shape[0]

    def component(self, axis: str) -> np.ndarray:
        if axis not in _AXIS_INDEX:
            raise InvalidArgumentError(f"axis must be one of {AXES}, got {axis!r}")
        return (self.x, self.y, self.z)[_AXIS_INDEX[axis]]

    def components(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (self.x, self.y, self.z)

    def stacked(self) -> np.ndarray:
        return np.stack([self.x, self.y, self.z])


@dataclass(frozen=True, eq=False)
class HeisenbergState:
    """Constant dyadic of the network's initial state vector."""

    rho: np.ndarray

    def __post_init__(self):
        self.rho.setflags(write=False)

    @classmethod
    def from_state_vector(cls, psi, tol: float = DEFAULT_TOL) -> "HeisenbergState":
        psi = np.asarray(psi, dtype=complex).reshape(-1)
        norm = float(np.linalg.norm(psi))
        if abs(norm - 1.0) > tol:
            raise InvalidStateError(f"state vector norm {norm} is not 1 within {tol}")
        return cls(rho=np.outer(psi, psi.conj()))

    @property
    def dim(self) -> int:
        return self.rho.shape[0]


@dataclass(frozen=True)
class PhenomenalState:
    """Locally observable data of one qubit: its Bloch vector of expectations."""

    x: float
    y: float
    z: float

    @property
    def bloch(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.bloch))


@dataclass(frozen=True, eq=False)
class GateSpec:
    """A gate described independently of time: kind, support, and parameters.

    ``single`` gates are the span ``c0*1 + cx*qx + cy*qy + cz*qz`` of one
    qubit's descriptors; ``cnot`` is the measurement interaction; ``raw``
    carries an explicit unitary on its support qubits (tensor factor i of the
    matrix acts on ``support[i]``).
    """

    kind: str
    support: tuple[int, ...]
    coeffs: tuple[complex, complex, complex, complex] | None = None
    control: int | None = None
    target: int | None = None
    matrix: np.ndarray | None = None

    @classmethod
    def single(cls, qubit: int, c0, cx, cy, cz) -> "GateSpec":
        return cls(
            kind="single",
            support=(int(qubit),),
            coeffs=(complex(c0), complex(cx), complex(cy), complex(cz)),
        )

    @classmethod
    def cnot(cls, control: int, target: int) -> "GateSpec":
        control, target = int(control), int(target)
        if control == target:
            raise InvalidSubsystemError("cnot control and target must differ")
        return cls(kind="cnot", support=(control, target), control=control, target=target)

    @classmethod
    def raw(cls, matrix, support) -> "GateSpec":
        support = tuple(int(q) for q in support)
        if len(set(support)) != len(support) or not support:
            raise InvalidSubsystemError(f"support must be non-empty and duplicate-free: {support}")
        m = as_operator(matrix)
        if m.shape[0] != 2 ** len(support):
            raise DimMismatchError(
                f"raw gate dim {m.shape[0]} does not match support size {len(support)}"
            )
        return cls(kind="raw", support=support, matrix=_readonly(m.copy()))

    _NAMED = {
        "x": (0, 1, 0, 0),
        "y": (0, 0, 1, 0),
        "z": (0, 0, 0, 1),
        "h": (0, 2**-0.5, 0, 2**-0.5),
    }

    @classmethod
    def named(cls, name: str, qubit: int) -> "GateSpec":
        if name not in cls._NAMED:
            raise InvalidArgumentError(f"unknown gate name {name!r}")
        return cls.single(qubit, *cls._NAMED[name])

    @classmethod
    def rotation_y(cls, qubit: int, angle: float) -> "GateSpec":
        """Single-qubit gate whose conjugation maps q_z to cos(angle) q_z + sin(angle) q_x."""
        half = 0.5 * float(angle)
        return cls.single(qubit, np.cos(half), 0.0, 1j * np.sin(half), 0.0)


@dataclass(frozen=True, eq=False)
class Network:
    """n descriptor triples, the constant Heisenberg state and a time counter."""

    n: int
    triples: tuple[DescriptorTriple, ...]
    rho: HeisenbergState
    t: int

    @property
    def dim(self) -> int:
        return 2**self.n

    @property
    def unit(self) -> np.ndarray:
        return identity(self.dim)

    def triple(self, a: int) -> DescriptorTriple:
        if not 1 <= a <= self.n:
            raise InvalidSubsystemError(f"qubit index {a} outside 1..{self.n}")
        return self.triples[a - 1]

    def observable(self, a: int, axis: str) -> np.ndarray:
        """Current descriptor component of qubit ``a``."""
        return self.triple(a).component(axis)


def initial_triples(n: int) -> tuple[DescriptorTriple, ...]:
    """The t=0 descriptor embedding: Pauli matrices in each qubit's tensor slot."""
    return tuple(
        DescriptorTriple(
            qubit=a,
            x=embed_single(PAULIS["x"], a, n),
            y=embed_single(PAULIS["y"], a, n),
            z=embed_single(PAULIS["z"], a, n),
        )
        for a in range(1, n + 1)
    )


def basis_state(n: int, bits: str) -> np.ndarray:
    """Computational basis vector for a bitstring such as ``"010"``."""
    if len(bits) != n or any(b not in "01" for b in bits):
        raise InvalidArgumentError(f"bad basis string {bits!r} for n={n}")
    psi = np.zeros(2**n, dtype=complex)
    psi[int(bits, 2)] = 1.0
    return psi


def init_network(n: int, psi0=None, tol: float = DEFAULT_TOL) -> Network:
    """Fresh network at t=0 with Pauli descriptors and rho built from ``psi0``.

    ``psi0`` defaults to ``|0...0>`` and must be normalized within ``tol``.
    """
    if n < 1:
        raise InvalidArgumentError(f"need at least one qubit, got n={n}")
    if psi0 is None:
        psi0 = basis_state(n, "0" * n)
    psi0 = np.asarray(psi0, dtype=complex).reshape(-1)
    if psi0.shape[0] != 2**n:
        raise InvalidStateError(f"state vector length {psi0.shape[0]} does not match n={n}")
    rho = HeisenbergState.from_state_vector(psi0, tol=tol)
    return Network(n=n, triples=initial_triples(n), rho=rho, t=0)


def assemble_gate(spec: GateSpec, triples: tuple[DescriptorTriple, ...], n: int) -> np.ndarray:
    """Assemble the gate operator as a polynomial in the given descriptor triples."""
    for q in spec.support:
        if not 1 <= q <= n:
            raise InvalidSubsystemError(f"qubit index {q} outside 1..{n}")
    dim = triples[0].dim
    unit = identity(dim)
    if spec.kind == "single":
        c0, cx, cy, cz = spec.coeffs
        trip = triples[spec.support[0] - 1]
        return c0 * unit + cx * trip.x + cy * trip.y + cz * trip.z
    if spec.kind == "cnot":
        bz = triples[spec.control - 1].z
        ax = triples[spec.target - 1].x
        return 0.5 * (unit + bz) + 0.5 * (unit - bz) @ ax
    if spec.kind == "raw":
        # Expand the support matrix in the Pauli basis, then substitute the
        # current descriptors for the Pauli factors.
        k = len(spec.support)
        m = spec.matrix
        out = np.zeros((dim, dim), dtype=complex)
        for combo in product(("i", "x", "y", "z"), repeat=k):
            basis = np.ones((1, 1), dtype=complex)
            for s in combo:
                basis = np.kron(basis, ID2 if s == "i" else PAULIS[s])
            coeff = np.trace(basis @ m) / 2**k
            if coeff == 0:
                continue
            term = unit
            for q, s in zip(spec.support, combo):
                if s != "i":
                    term = term @ triples[q - 1].component(s)
            out += coeff * term
        return out
    raise InvalidArgumentError(f"unknown gate kind {spec.kind!r}")


def build_gate(net: Network, spec: GateSpec, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Gate operator on the full space, assembled from the network's current descriptors."""
    u = assemble_gate(spec, net.triples, net.n)
    if not is_unitary(u, tol):
        raise NotUnitaryError(f"{spec.kind} gate on {spec.support} is not unitary within {tol}")
    return u


def apply_gate(net: Network, spec: GateSpec, tol: float = DEFAULT_TOL) -> Network:
    """Conjugate every descriptor component by the gate; rho is untouched."""
    u = build_gate(net, spec, tol)
    ud = u.conj().T
    stacked = np.stack([c for trip in net.triples for c in trip.components()])
    evolved = ud @ stacked @ u
    new_triples = tuple(
        DescriptorTriple(
            qubit=a + 1,
            x=evolved[3 * a],
            y=evolved[3 * a + 1],
            z=evolved[3 * a + 2],
        )
        for a in range(net.n)
    )
    return Network(n=net.n, triples=new_triples, rho=net.rho, t=net.t + 1)


def cnot_closed_form(net: Network, control: int, target: int) -> Network:
    """Measurement interaction via its closed-form descriptor update.

    Target: (qx, qy*bz, qz*bz); control: (bx*ax, by*ax, bz); every other
    triple is untouched.  Agrees with ``apply_gate`` on the cnot spec.
    """
    if control == target:
        raise InvalidSubsystemError("cnot control and target must differ")
    b = net.triple(control)
    a = net.triple(target)
    new = list(net.triples)
    new[target - 1] = DescriptorTriple(qubit=target, x=a.x.copy(), y=a.y @ b.z, z=a.z @ b.z)
    new[control - 1] = DescriptorTriple(qubit=control, x=b.x @ a.x, y=b.y @ a.x, z=b.z.copy())
    return Network(n=net.n, triples=tuple(new), rho=net.rho, t=net.t + 1)


def expectation(net: Network, obs, tol: float = DEFAULT_TOL) -> float:
    """Expectation value Tr(obs . rho); the tiny imaginary residue is discarded."""
    obs = np.asarray(obs, dtype=complex)
    if not is_hermitian(obs, tol):
        raise NotObservableError("observable is not Hermitian within tolerance")
    val = complex(np.einsum("ij,ji->", obs, net.rho.rho))
    return float(val.real)


def variance(net: Network, obs, tol: float = DEFAULT_TOL) -> float:
    """Spread <obs^2> - <obs>^2; clamped to exactly 0 when within tolerance of it."""
    obs = np.asarray(obs, dtype=complex)
    if not is_hermitian(obs, tol):
        raise NotObservableError("observable is not Hermitian within tolerance")
    mean = float(np.einsum("ij,ji->", obs, net.rho.rho).real)
    second = float(np.einsum("ij,jk,ki->", obs, obs, net.rho.rho, optimize=True).real)
    v = second - mean * mean
    return 0.0 if abs(v) <= tol else v


def is_sharp(net: Network, obs, tol: float = DEFAULT_TOL) -> bool:
    """An observable is sharp when its variance vanishes: its value is definite."""
    return variance(net, obs, tol) <= tol


def phenomenal_state(net: Network, a: int, tol: float = DEFAULT_TOL) -> PhenomenalState:
    trip = net.triple(a)
    ph = PhenomenalState(
        x=expectation(net, trip.x, tol),
        y=expectation(net, trip.y, tol),
        z=expectation(net, trip.z, tol),
    )
    if ph.norm > 1.0 + tol:
        raise InvalidStateError(f"Bloch norm {ph.norm} exceeds 1 for qubit {a}")
    return ph


# --- invariant residuals -----------------------------------------------------
#
# These return worst-case Frobenius deviations instead of booleans so tests and
# the run-time suite can report *how far* an invariant drifted.


def pauli_defect(triple: DescriptorTriple, unit: np.ndarray | None = None) -> float:
    """Worst deviation from q_i q_j = delta_ij unit + i eps_ijk q_k."""
    if unit is None:
        unit = identity(triple.dim)
    worst = 0.0
    for i in AXES:
        for j in AXES:
            prod = triple.component(i) @ triple.component(j)
            if i == j:
                expected = unit
            else:
                phase, k = EPSILON[(i, j)]
                expected = phase * triple.component(k)
            worst = max(worst, frob_dist(prod, expected))
    return worst


def commutation_defect(t1: DescriptorTriple, t2: DescriptorTriple) -> float:
    """Worst commutator norm between components of two distinct qubits' triples."""
    worst = 0.0
    for c1 in t1.components():
        for c2 in t2.components():
            worst = max(worst, float(np.linalg.norm(c1 @ c2 - c2 @ c1)))
    return worst


def hermiticity_defect(triple: DescriptorTriple) -> float:
    return max(frob_dist(c, c.conj().T) for c in triple.components())


def trace_defect(triple: DescriptorTriple) -> float:
    return max(abs(complex(np.trace(c))) for c in triple.components())


def network_defects(net: Network) -> dict[str, float]:
    """All invariant residuals of a network state, keyed by invariant name."""
    pauli = max(pauli_defect(trip) for trip in net.triples)
    comm = 0.0
    for a in range(net.n):
        for b in range(a + 1, net.n):
            comm = max(comm, commutation_defect(net.triples[a], net.triples[b]))
    herm = max(hermiticity_defect(trip) for trip in net.triples)
    tr = max(trace_defect(trip) for trip in net.triples)
    rho = net.rho.rho
    rho_defect = max(
        frob_dist(rho, rho.conj().T),
        frob_dist(rho @ rho, rho),
        abs(complex(np.trace(rho)) - 1.0),
    )
    return {
        "pauli": pauli,
        "commutation": comm,
        "hermitian": herm,
        "traceless": tr,
        "rho_projector": rho_defect,
    }
