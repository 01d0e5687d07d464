"""Relative descriptors and local branching.

A two-outcome projection-valued measure built from a qubit's z-descriptor
splits another qubit's triple into two relative triples, one per branch.
Relative triples obey the Pauli algebra with the branch projector as unit,
recombine by addition to the absolute triple, and evolve per branch through
the split of any gate that commutes with the branching observable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    InvalidArgumentError,
    InvalidStateError,
    MismatchedBranchesError,
    NonCommutingFoliationError,
    NonCommutingGateError,
    NotUnitaryError,
    ZeroWeightBranchError,
)
from .linalg import DEFAULT_TOL, frob_dist, identity, is_projector, is_unitary
from .network import DescriptorTriple, HeisenbergState, Network, expectation

PLUS, MINUS = 1, -1


def _rho_matrix(rho) -> np.ndarray:
    return rho.rho if isinstance(rho, HeisenbergState) else np.asarray(rho, dtype=complex)


@dataclass(frozen=True, eq=False)
class Pvm:
    """Two orthogonal projectors summing to unity, labelled by outcome +1 / -1."""

    plus: np.ndarray
    minus: np.ndarray
    source: tuple[int, str, int]  # (qubit, axis, time the projectors were built)

    def __post_init__(self):
        self.plus.setflags(write=False)
        self.minus.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.plus.shape[0]

    def projector(self, label: int) -> np.ndarray:
        if label == PLUS:
            return self.plus
        if label == MINUS:
            return self.minus
        raise InvalidArgumentError(f"branch label must be +1 or -1, got {label}")

    @classmethod
    def from_projectors(cls, plus, minus, source, tol: float = DEFAULT_TOL) -> "Pvm":
        """Build from explicit projectors, re-checking the projector algebra."""
        plus = np.asarray(plus, dtype=complex)
        minus = np.asarray(minus, dtype=complex)
        if not (is_projector(plus, tol) and is_projector(minus, tol)):
            raise InvalidStateError("both outcomes must be orthogonal projectors")
        if frob_dist(plus @ minus, np.zeros_like(plus)) > tol:
            raise InvalidStateError("projectors are not orthogonal")
        if frob_dist(plus + minus, identity(plus.shape[0])) > tol:
            raise InvalidStateError("projectors do not sum to unity")
        return cls(plus=plus.copy(), minus=minus.copy(), source=tuple(source))

    def defects(self) -> dict[str, float]:
        """Residuals of orthogonality, idempotence and completeness."""
        eye = identity(self.dim)
        return {
            "orthogonality": frob_dist(self.plus @ self.minus, np.zeros_like(self.plus)),
            "idempotence": max(
                frob_dist(self.plus @ self.plus, self.plus),
                frob_dist(self.minus @ self.minus, self.minus),
            ),
            "completeness": frob_dist(self.plus + self.minus, eye),
        }


@dataclass(frozen=True, eq=False)
class RelativeBranch:
    """One branch of a qubit: projector-multiplied triple, its unit and weight."""

    qubit: int
    triple: DescriptorTriple
    unit: np.ndarray
    label: int
    weight: float
    source: tuple[int, str, int]

    def __post_init__(self):
        self.unit.setflags(write=False)
        if self.weight <= 0:
            raise ZeroWeightBranchError(f"branch {self.label} has weight {self.weight}")


def make_pvm(net: Network, b: int, t0: int | None = None, tol: float = DEFAULT_TOL) -> Pvm:
    """Projectors (1 +- q_bz)/2 built from qubit ``b``'s current z-descriptor."""
    if t0 is None:
        t0 = net.t
    if t0 != net.t:
        raise InvalidArgumentError(
            f"projectors must be built at the branching instant: network is at t={net.t}, got t0={t0}"
        )
    bz = net.triple(b).z
    eye = net.unit
    pvm = Pvm(
        plus=0.5 * (eye + bz),
        minus=0.5 * (eye - bz),
        source=(b, "z", t0),
    )
    worst = max(pvm.defects().values())
    if worst > tol:
        raise InvalidStateError(f"projector algebra violated (deviation {worst:.3e})")
    return pvm


def foliate(
    net: Network,
    a: int,
    pvm: Pvm,
    t: int | None = None,
    tol: float = DEFAULT_TOL,
) -> tuple[RelativeBranch, RelativeBranch]:
    """Split qubit ``a``'s triple into its two branches relative to the PVM.

    Valid only while the projectors still commute with the triple and both
    branch weights are non-zero; the relative triples sum back to the
    absolute one.
    """
    if t is None:
        t = net.t
    if t != net.t:
        raise InvalidArgumentError(
            f"descriptors of past instants are not retained: network is at t={net.t}, got t={t}"
        )
    if t < pvm.source[2]:
        raise InvalidArgumentError(
            f"cannot foliate at t={t} with projectors built later, at t0={pvm.source[2]}"
        )
    trip = net.triple(a)
    for proj in (pvm.plus, pvm.minus):
        for c in trip.components():
            dev = float(np.linalg.norm(proj @ c - c @ proj))
            if dev > tol:
                raise NonCommutingFoliationError(
                    f"projector no longer commutes with qubit {a}'s descriptors "
                    f"(deviation {dev:.3e})"
                )
    weights = {label: expectation(net, pvm.projector(label), tol) for label in (PLUS, MINUS)}
    for label, w in weights.items():
        if w <= tol:
            raise ZeroWeightBranchError(f"branch {label} has weight {w:.3e}")
    branches = tuple(
        RelativeBranch(
            qubit=a,
            triple=DescriptorTriple(
                qubit=a,
                x=pvm.projector(label) @ trip.x,
                y=pvm.projector(label) @ trip.y,
                z=pvm.projector(label) @ trip.z,
            ),
            unit=pvm.projector(label),
            label=label,
            weight=weights[label],
            source=pvm.source,
        )
        for label in (PLUS, MINUS)
    )
    return branches


def relative_expectation(branch: RelativeBranch, component: str, rho, tol: float = DEFAULT_TOL) -> float:
    """Expectation conditioned on the branch: <q_rel> / <projector>."""
    if branch.weight <= tol:
        raise ZeroWeightBranchError(f"branch {branch.label} has weight {branch.weight:.3e}")
    rho = _rho_matrix(rho)
    val = complex(np.einsum("ij,ji->", branch.triple.component(component), rho))
    return float(val.real) / branch.weight


def relative_variance(branch: RelativeBranch, component: str, rho, tol: float = DEFAULT_TOL) -> float:
    """Branch-conditioned spread; zero means the branch observable is sharp."""
    if branch.weight <= tol:
        raise ZeroWeightBranchError(f"branch {branch.label} has weight {branch.weight:.3e}")
    rho = _rho_matrix(rho)
    q = branch.triple.component(component)
    mean = float(np.einsum("ij,ji->", q, rho).real) / branch.weight
    second = float(np.einsum("ij,jk,ki->", q, q, rho, optimize=True).real) / branch.weight
    v = second - mean * mean
    return 0.0 if abs(v) <= tol else v


def relative_recombine(b1: RelativeBranch, b2: RelativeBranch, tol: float = DEFAULT_TOL) -> DescriptorTriple:
    """Sum two sibling branches back into the absolute descriptor triple."""
    if b1.qubit != b2.qubit:
        raise MismatchedBranchesError(f"branches describe different qubits: {b1.qubit} vs {b2.qubit}")
    if b1.label == b2.label:
        raise MismatchedBranchesError(f"both branches carry the label {b1.label}")
    if b1.source != b2.source:
        raise MismatchedBranchesError(f"branches come from different measures: {b1.source} vs {b2.source}")
    if frob_dist(b1.unit + b2.unit, identity(b1.unit.shape[0])) > tol:
        raise MismatchedBranchesError("branch units do not sum to unity")
    return DescriptorTriple(
        qubit=b1.qubit,
        x=b1.triple.x + b2.triple.x,
        y=b1.triple.y + b2.triple.y,
        z=b1.triple.z + b2.triple.z,
    )


def split_unitary(u, pvm: Pvm, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Split a gate into its per-branch parts (u P_+, u P_-).

    The gate must commute with the branching observable; the parts sum back
    to the gate, and conjugating each branch by its part sums to conjugating
    the absolute triple by the gate.
    """
    u = np.asarray(u, dtype=complex)
    if not is_unitary(u, tol):
        raise NotUnitaryError("gate is not unitary within tolerance")
    bz = pvm.plus - pvm.minus
    dev = float(np.linalg.norm(u @ bz - bz @ u))
    if dev > tol:
        raise NonCommutingGateError(
            f"gate does not commute with the branching observable (deviation {dev:.3e})"
        )
    return u @ pvm.plus, u @ pvm.minus


def evolve_branch(branch: RelativeBranch, u_part, tol: float = DEFAULT_TOL) -> RelativeBranch:
    """Conjugate one branch's triple by its own part of a split gate.

    The branch unit and weight are unchanged: the part acts inside the branch.
    """
    u_part = np.asarray(u_part, dtype=complex)
    ud = u_part.conj().T
    trip = branch.triple
    return RelativeBranch(
        qubit=branch.qubit,
        triple=DescriptorTriple(
            qubit=branch.qubit,
            x=ud @ trip.x @ u_part,
            y=ud @ trip.y @ u_part,
            z=ud @ trip.z @ u_part,
        ),
        unit=branch.unit,
        label=branch.label,
        weight=branch.weight,
        source=branch.source,
    )


def apply_relative(
    relative_unitaries: tuple[np.ndarray, np.ndarray],
    branches: tuple[RelativeBranch, RelativeBranch],
    rho,
    tol: float = DEFAULT_TOL,
) -> DescriptorTriple:
    """Evolve each branch by its own gate part and recombine.

    Equals conjugating the absolute triple by the whole gate.  ``rho`` is the
    shared Heisenberg state; branch weights are unaffected by the evolution.
    """
    u_plus, u_minus = (np.asarray(u, dtype=complex) for u in relative_unitaries)
    by_label = {branch.label: branch for branch in branches}
    if set(by_label) != {PLUS, MINUS}:
        raise MismatchedBranchesError("need exactly one +1 branch and one -1 branch")
    if not is_unitary(u_plus + u_minus, tol):
        raise NotUnitaryError("the branch parts do not sum to a unitary gate")
    evolved_plus = evolve_branch(by_label[PLUS], u_plus, tol)
    evolved_minus = evolve_branch(by_label[MINUS], u_minus, tol)
    rho_m = _rho_matrix(rho)
    for branch in (evolved_plus, evolved_minus):
        w = float(np.einsum("ij,ji->", branch.unit, rho_m).real)
        if w <= tol:
            raise ZeroWeightBranchError(f"branch {branch.label} has weight {w:.3e}")
    return relative_recombine(evolved_plus, evolved_minus, tol)
