"""Seeded random states, gates and circuits for property checks."""

from __future__ import annotations

import numpy as np

from .network import GateSpec, Network, apply_gate, init_network


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a Ginibre sample with the phase ambiguity removed."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    phases = np.diag(r).copy()
    phases /= np.abs(phases)
    return q * phases


def random_state(n: int, rng: np.random.Generator) -> np.ndarray:
    psi = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
    return psi / np.linalg.norm(psi)


def random_single_coeffs(rng: np.random.Generator) -> tuple[complex, complex, complex, complex]:
    """Coefficients (c0, cx, cy, cz) whose span of the descriptors is always unitary.

    Parameterised as exp(i phi) (cos(theta) 1 + i sin(theta) n.sigma) with a
    uniform axis n.
    """
    phi = rng.uniform(0, 2 * np.pi)
    theta = rng.uniform(0, 2 * np.pi)
    axis = rng.standard_normal(3)
    axis /= np.linalg.norm(axis)
    phase = np.exp(1j * phi)
    c0 = phase * np.cos(theta)
    cx, cy, cz = (phase * 1j * np.sin(theta) * comp for comp in axis)
    return (complex(c0), complex(cx), complex(cy), complex(cz))


def random_single_gate(n: int, rng: np.random.Generator, qubit: int | None = None) -> GateSpec:
    if qubit is None:
        qubit = int(rng.integers(1, n + 1))
    return GateSpec.single(qubit, *random_single_coeffs(rng))


def random_gate_spec(n: int, rng: np.random.Generator) -> GateSpec:
    """One random gate: a single-qubit span, a cnot, or a raw 1-2 qubit unitary."""
    kinds = ["single", "raw1"]
    if n >= 2:
        kinds += ["cnot", "raw2"]
    kind = kinds[int(rng.integers(len(kinds)))]
    if kind == "single":
        return random_single_gate(n, rng)
    if kind == "cnot":
        control, target = rng.choice(np.arange(1, n + 1), size=2, replace=False)
        return GateSpec.cnot(int(control), int(target))
    if kind == "raw1":
        qubit = int(rng.integers(1, n + 1))
        return GateSpec.raw(haar_unitary(2, rng), (qubit,))
    pair = rng.choice(np.arange(1, n + 1), size=2, replace=False)
    return GateSpec.raw(haar_unitary(4, rng), (int(pair[0]), int(pair[1])))


def random_circuit(n: int, depth: int, rng: np.random.Generator) -> list[GateSpec]:
    return [random_gate_spec(n, rng) for _ in range(depth)]


def random_network(n: int, depth: int, rng: np.random.Generator) -> Network:
    """Random initial state evolved through a random circuit."""
    net = init_network(n, random_state(n, rng))
    for spec in random_circuit(n, depth, rng):
        net = apply_gate(net, spec)
    return net
