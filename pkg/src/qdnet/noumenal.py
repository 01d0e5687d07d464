"""Separable subsystem states and the locality verifiers.

A noumenal state is the pair (descriptor triples of a qubit subset, shared
Heisenberg state).  Projection extracts subsystem states, the product glues
compatible ones back together, and the verifiers machine-check that the two
operations are mutually inverse and that remote gates leave subsystem states
untouched.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    IncompatibleError,
    InvalidArgumentError,
    InvalidSubsystemError,
    NonCommutingSupportsError,
    NotUnitaryError,
)
from .linalg import DEFAULT_TOL, frob_dist, is_unitary
from .network import (
    DescriptorTriple,
    GateSpec,
    HeisenbergState,
    Network,
    apply_gate,
    commutation_defect,
)


@dataclass(frozen=True, eq=False)
class NoumenalState:
    """Descriptor triples of a qubit subset plus the shared Heisenberg state."""

    qubits: tuple[int, ...]
    triples: tuple[DescriptorTriple, ...]
    rho: HeisenbergState

    def triple_for(self, a: int) -> DescriptorTriple:
        for trip in self.triples:
            if trip.qubit == a:
                return trip
        raise InvalidSubsystemError(f"qubit {a} is not part of this state")

    def equals(self, other: "NoumenalState", tol: float = DEFAULT_TOL) -> bool:
        """Componentwise equality within tolerance, insensitive to listing order."""
        if set(self.qubits) != set(other.qubits):
            return False
        if frob_dist(self.rho.rho, other.rho.rho) > tol:
            return False
        for a in self.qubits:
            mine, theirs = self.triple_for(a), other.triple_for(a)
            if any(frob_dist(c1, c2) > tol for c1, c2 in zip(mine.components(), theirs.components())):
                return False
        return True


@dataclass(frozen=True)
class CompatibilityWitness:
    """Outcome of a compatibility check; ``reason`` is non-empty whenever ``ok`` is false."""

    ok: bool
    reason: str = ""


def project_noumenal(source: Network | NoumenalState, subset) -> NoumenalState:
    """Extract the noumenal state of exactly the requested qubits."""
    subset = tuple(int(q) for q in subset)
    if len(set(subset)) != len(subset):
        raise InvalidSubsystemError(f"subset has duplicate indices: {subset}")
    if isinstance(source, Network):
        available = set(range(1, source.n + 1))
        lookup = {a: source.triples[a - 1] for a in available}
    else:
        available = set(source.qubits)
        lookup = {trip.qubit: trip for trip in source.triples}
    for q in subset:
        if q not in available:
            raise InvalidSubsystemError(f"qubit {q} is not part of the source state")
    return NoumenalState(
        qubits=subset,
        triples=tuple(lookup[q] for q in subset),
        rho=source.rho,
    )


def compatible(na: NoumenalState, nb: NoumenalState, tol: float = DEFAULT_TOL) -> CompatibilityWitness:
    """Constructive compatibility: disjoint subsets, one rho, commuting descriptors."""
    overlap = set(na.qubits) & set(nb.qubits)
    if overlap:
        return CompatibilityWitness(False, f"overlapping qubits {sorted(overlap)}")
    if frob_dist(na.rho.rho, nb.rho.rho) > tol:
        return CompatibilityWitness(False, "Heisenberg states differ")
    for ta in na.triples:
        for tb in nb.triples:
            dev = commutation_defect(ta, tb)
            if dev > tol:
                return CompatibilityWitness(
                    False,
                    f"descriptors of qubits {ta.qubit} and {tb.qubit} do not commute "
                    f"(deviation {dev:.3e})",
                )
    return CompatibilityWitness(True)


def noumenal_product(na: NoumenalState, nb: NoumenalState, tol: float = DEFAULT_TOL) -> NoumenalState:
    """Glue two compatible subsystem states into the composite state."""
    witness = compatible(na, nb, tol)
    if not witness.ok:
        raise IncompatibleError(witness.reason)
    return NoumenalState(
        qubits=na.qubits + nb.qubits,
        triples=na.triples + nb.triples,
        rho=na.rho,
    )


def apply_to_noumenal(u, ns: NoumenalState, tol: float = DEFAULT_TOL) -> NoumenalState:
    """Conjugate every descriptor component of the state by a unitary; rho unchanged."""
    u = np.asarray(u, dtype=complex)
    if not is_unitary(u, tol):
        raise NotUnitaryError("operation is not unitary within tolerance")
    ud = u.conj().T
    new_triples = tuple(
        DescriptorTriple(
            qubit=trip.qubit,
            x=ud @ trip.x @ u,
            y=ud @ trip.y @ u,
            z=ud @ trip.z @ u,
        )
        for trip in ns.triples
    )
    return NoumenalState(qubits=ns.qubits, triples=new_triples, rho=ns.rho)


def product_of_operations(ua, ub, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Combine two operations with disjoint supports into one: their matrix product.

    Disjointness is witnessed operationally by the operators commuting.
    """
    ua = np.asarray(ua, dtype=complex)
    ub = np.asarray(ub, dtype=complex)
    if not is_unitary(ua, tol) or not is_unitary(ub, tol):
        raise NotUnitaryError("both operations must be unitary")
    dev = float(np.linalg.norm(ua @ ub - ub @ ua))
    if dev > tol:
        raise NonCommutingSupportsError(f"operations do not commute (deviation {dev:.3e})")
    return ua @ ub


def verify_no_action(net: Network, spec: GateSpec, remote, tol: float = DEFAULT_TOL) -> float:
    """Worst-case change the gate causes in the descriptors of ``remote`` qubits.

    Locality holds when the returned deviation is within tolerance.
    """
    remote = tuple(int(q) for q in remote)
    for q in remote:
        if not 1 <= q <= net.n:
            raise InvalidSubsystemError(f"qubit index {q} outside 1..{net.n}")
    if set(remote) & set(spec.support):
        raise InvalidArgumentError(
            f"remote set {sorted(remote)} overlaps the gate support {sorted(spec.support)}"
        )
    after = apply_gate(net, spec, tol)
    worst = 0.0
    for q in remote:
        for before_c, after_c in zip(net.triple(q).components(), after.triple(q).components()):
            worst = max(worst, frob_dist(before_c, after_c))
    return worst


def verify_separability(net: Network, partition, tol: float = DEFAULT_TOL) -> bool:
    """True iff folding the product over the projected blocks reproduces the network state."""
    blocks = [tuple(int(q) for q in block) for block in partition]
    if not blocks or any(not b for b in blocks):
        raise InvalidArgumentError("partition blocks must be non-empty")
    flat = [q for block in blocks for q in block]
    if len(flat) != len(set(flat)):
        raise InvalidArgumentError("partition blocks overlap")
    if set(flat) != set(range(1, net.n + 1)):
        raise InvalidArgumentError(f"partition does not cover qubits 1..{net.n}")
    state = project_noumenal(net, blocks[0])
    try:
        for block in blocks[1:]:
            state = noumenal_product(state, project_noumenal(net, block), tol)
    except IncompatibleError:
        return False
    full = project_noumenal(net, range(1, net.n + 1))
    return state.equals(full, tol)
