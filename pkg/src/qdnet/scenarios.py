"""Canned end-to-end experiments with machine-checked expectations.

Every scenario is a deterministic computation (no sampling) returning a
report whose checks each compare one number against its expected value at an
explicit tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import oracle
from .branching import foliate, make_pvm, relative_expectation, relative_recombine, relative_variance
from .errors import InvalidArgumentError
from .linalg import AXES, DEFAULT_TOL, SIGMA_X, SIGMA_Z, embed_single, frob_dist, identity
from .network import (
    GateSpec,
    Network,
    apply_gate,
    expectation,
    init_network,
    phenomenal_state,
    variance,
)
from .noumenal import project_noumenal, verify_no_action, verify_separability


@dataclass(frozen=True)
class Check:
    label: str
    expected: float
    actual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return abs(self.expected - self.actual) <= self.tolerance

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "expected": float(self.expected),
            "actual": float(self.actual),
            "tolerance": float(self.tolerance),
            "pass": self.passed,
        }


@dataclass
class ScenarioReport:
    name: str
    checks: list[Check] = field(default_factory=list)
    artifacts: dict = field(default_factory=dict)

    def add(self, label: str, expected: float, actual: float, tolerance: float = DEFAULT_TOL):
        self.checks.append(Check(label, float(expected), float(actual), float(tolerance)))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "checks": [c.to_dict() for c in self.checks],
            "artifacts": self.artifacts,
            "pass": self.passed,
        }


def _add_triple(report: ScenarioReport, label: str, expected, net: Network, qubit: int, tol: float):
    ph = phenomenal_state(net, qubit)
    for axis, e, a in zip(AXES, expected, (ph.x, ph.y, ph.z)):
        report.add(f"{label} {axis}", e, a, tol)


def run_measurement(tol: float = DEFAULT_TOL) -> ScenarioReport:
    """One qubit measures another in superposition; both branches stay sharp."""
    report = ScenarioReport(name="measurement")
    net = init_network(2)
    pre = apply_gate(net, GateSpec.named("h", 2))
    _add_triple(report, "pre <q_1>", (0, 0, 1), pre, 1, tol)
    _add_triple(report, "pre <q_2>", (1, 0, 0), pre, 2, tol)

    post = apply_gate(pre, GateSpec.cnot(2, 1))
    _add_triple(report, "post <q_1>", (0, 0, 0), post, 1, tol)
    _add_triple(report, "post <q_2>", (0, 0, 0), post, 2, tol)
    report.add("absolute variance of q_1z", 1.0, variance(post, post.observable(1, "z")), tol)

    pvm = make_pvm(post, 2)
    report.add("projector orthogonality", 0.0, pvm.defects()["orthogonality"], 1e-12)
    report.add("projector completeness", 0.0, pvm.defects()["completeness"], 1e-12)
    plus, minus = foliate(post, 1, pvm)
    report.add("branch weight +1", 0.5, plus.weight, tol)
    report.add("branch weight -1", 0.5, minus.weight, tol)
    for branch, sign in ((plus, 1.0), (minus, -1.0)):
        for axis, e in zip(AXES, (0.0, 0.0, sign)):
            report.add(
                f"branch {branch.label:+d} relative <q_1{axis}>",
                e,
                relative_expectation(branch, axis, post.rho),
                tol,
            )
        report.add(
            f"branch {branch.label:+d} relative variance z",
            0.0,
            relative_variance(branch, "z", post.rho),
            tol,
        )
    recombined = relative_recombine(plus, minus)
    dev = max(
        frob_dist(c1, c2)
        for c1, c2 in zip(recombined.components(), post.triple(1).components())
    )
    report.add("recombination deviation", 0.0, dev, 1e-12)

    report.artifacts["branch_table"] = [
        {
            "label": branch.label,
            "weight": branch.weight,
            "expectation": [relative_expectation(branch, ax, post.rho) for ax in AXES],
            "variance": [relative_variance(branch, ax, post.rho) for ax in AXES],
        }
        for branch in (plus, minus)
    ]
    return report


def run_epr(tol: float = DEFAULT_TOL) -> ScenarioReport:
    """Entangled pair: measuring one side never touches the other side's descriptors."""
    report = ScenarioReport(name="epr")
    # Qubit 1: Alice, qubit 2: Bob, qubit 3: Alice's measuring ancilla.
    net = init_network(3)
    net = apply_gate(net, GateSpec.named("h", 1))
    net = apply_gate(net, GateSpec.cnot(1, 2))

    bob_before = net.triple(2)
    report.add(
        "Bob deviation under Alice's measurement",
        0.0,
        verify_no_action(net, GateSpec.cnot(1, 3), remote=(2,), tol=tol),
        1e-12,
    )
    net = apply_gate(net, GateSpec.cnot(1, 3))
    bob_dev = max(
        frob_dist(c1, c2) for c1, c2 in zip(bob_before.components(), net.triple(2).components())
    )
    report.add("Bob descriptors bitwise constant", 0.0, bob_dev, 1e-12)

    zz = net.observable(1, "z") @ net.observable(2, "z")
    report.add("<q_Az q_Bz>", 1.0, expectation(net, zz), tol)

    pvm = make_pvm(net, 1)
    plus, minus = foliate(net, 2, pvm)
    for branch, theta in ((plus, 1.0), (minus, -1.0)):
        report.add(
            f"Bob z conditioned on Alice branch {branch.label:+d}",
            theta,
            relative_expectation(branch, "z", net.rho),
            tol,
        )

    # The same conditioning computed on the evolved state vector.
    psi = oracle.sv_run(
        np.eye(8, dtype=complex)[0],
        [GateSpec.named("h", 1), GateSpec.cnot(1, 2), GateSpec.cnot(1, 3)],
    )
    for theta in (1.0, -1.0):
        proj = 0.5 * (identity(8) + theta * embed_single(SIGMA_Z, 1, 3))
        report.add(
            f"oracle conditional Bob z, branch {theta:+.0f}",
            theta,
            oracle.conditional_expectation(psi, proj, embed_single(SIGMA_Z, 2, 3)),
            tol,
        )

    bell = oracle.sv_run(np.eye(4, dtype=complex)[0], [GateSpec.named("h", 1), GateSpec.cnot(1, 2)])
    gap = oracle.separability_gap(bell, (1,))
    report.add("density-matrix gap across the pair", float(np.sqrt(3) / 2), gap, tol)
    report.add(
        "descriptor separability (singletons)",
        1.0,
        float(verify_separability(net, [(1,), (2,), (3,)], tol)),
        0.0,
    )
    report.artifacts["separability_gap"] = gap
    return report


def run_undo(tol: float = DEFAULT_TOL) -> ScenarioReport:
    """Measure and then unmeasure: the interaction is an involution, Alice never moves."""
    report = ScenarioReport(name="undo")
    # Qubit 1: Alice, qubit 2: Bob, qubit 3: Bob's measuring ancilla.
    net = init_network(3)
    net = apply_gate(net, GateSpec.named("h", 1))
    net = apply_gate(net, GateSpec.cnot(1, 2))

    reference = net
    alice_ref = project_noumenal(net, (1,))
    pre_variances = [variance(net, net.observable(q, "z")) for q in (1, 2, 3)]

    measured = apply_gate(net, GateSpec.cnot(2, 3))
    alice_dev_measure = max(
        frob_dist(c1, c2)
        for c1, c2 in zip(alice_ref.triple_for(1).components(), measured.triple(1).components())
    )
    report.add("Alice deviation after measurement", 0.0, alice_dev_measure, 1e-12)

    undone = apply_gate(measured, GateSpec.cnot(2, 3))
    alice_dev_undo = max(
        frob_dist(c1, c2)
        for c1, c2 in zip(alice_ref.triple_for(1).components(), undone.triple(1).components())
    )
    report.add("Alice deviation after undo", 0.0, alice_dev_undo, 1e-12)

    worst = 0.0
    for q in (1, 2, 3):
        for c1, c2 in zip(reference.triple(q).components(), undone.triple(q).components()):
            worst = max(worst, frob_dist(c1, c2))
    report.add("all descriptors restored", 0.0, worst, 1e-12)

    post_variances = [variance(undone, undone.observable(q, "z")) for q in (1, 2, 3)]
    for q, (pre_v, post_v) in enumerate(zip(pre_variances, post_variances), start=1):
        report.add(f"variance of q_{q}z restored", pre_v, post_v, tol)
    report.artifacts["mid_measurement_variances"] = [
        variance(measured, measured.observable(q, "z")) for q in (1, 2, 3)
    ]
    return report


_CHSH_ALICE = (0.0, np.pi / 2)
_CHSH_BOB = (np.pi / 4, -np.pi / 4)


def _setting_observable(net: Network, qubit: int, angle: float) -> np.ndarray:
    return np.cos(angle) * net.observable(qubit, "z") + np.sin(angle) * net.observable(qubit, "x")


def run_chsh(tol: float = DEFAULT_TOL) -> ScenarioReport:
    """Correlations at the four canonical settings violate the classical bound locally."""
    report = ScenarioReport(name="chsh")
    net = init_network(2)
    net = apply_gate(net, GateSpec.named("h", 1))
    net = apply_gate(net, GateSpec.cnot(1, 2))

    psi = oracle.sv_run(np.eye(4, dtype=complex)[0], [GateSpec.named("h", 1), GateSpec.cnot(1, 2)])
    correlations = {}
    for alpha in _CHSH_ALICE:
        for beta in _CHSH_BOB:
            obs = _setting_observable(net, 1, alpha) @ _setting_observable(net, 2, beta)
            e = expectation(net, obs)
            fixed = (
                np.cos(alpha) * embed_single(SIGMA_Z, 1, 2) + np.sin(alpha) * embed_single(SIGMA_X, 1, 2)
            ) @ (np.cos(beta) * embed_single(SIGMA_Z, 2, 2) + np.sin(beta) * embed_single(SIGMA_X, 2, 2))
            e_oracle = oracle.sv_expectation(psi, fixed)
            correlations[(alpha, beta)] = e
            report.add(f"E({alpha:.4f},{beta:+.4f}) matches oracle", e_oracle, e, tol)
            report.add(f"|E({alpha:.4f},{beta:+.4f})| bounded", 0.0, max(0.0, abs(e) - 1.0), 1e-12)

    s = (
        correlations[(0.0, _CHSH_BOB[0])]
        + correlations[(0.0, _CHSH_BOB[1])]
        + correlations[(_CHSH_ALICE[1], _CHSH_BOB[0])]
        - correlations[(_CHSH_ALICE[1], _CHSH_BOB[1])]
    )
    report.add("S", float(2 * np.sqrt(2)), s, 1e-9)

    worst = 0.0
    for beta in _CHSH_BOB:
        worst = max(worst, verify_no_action(net, GateSpec.rotation_y(2, beta), remote=(1,), tol=tol))
    report.add("Alice deviation under Bob's setting change", 0.0, worst, 1e-12)

    report.artifacts["S"] = s
    report.artifacts["correlations"] = [
        {"alpha": a, "beta": b, "E": e} for (a, b), e in sorted(correlations.items())
    ]
    return report


@dataclass(frozen=True)
class BilliardSystem:
    """Positions of N classical balls plus an invertible mixing matrix."""

    positions: np.ndarray
    mixing: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.mixing, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1] or v.shape[0] != self.positions.shape[0]:
            raise InvalidArgumentError(f"mixing matrix shape {v.shape} does not match positions")
        if abs(np.linalg.det(v)) <= 1e-12:
            raise InvalidArgumentError("mixing matrix is singular")

    @property
    def n(self) -> int:
        return self.positions.shape[0]

    def mixed(self) -> np.ndarray:
        return self.mixing @ self.positions


def run_billiard(
    n: int = 2,
    mixing=None,
    move: tuple[int, float] = (2, 1.0),
    positions=None,
    tol: float = DEFAULT_TOL,
) -> ScenarioReport:
    """Mixing ball positions turns a local description into a non-local one.

    Moving one ball shifts every mixed coordinate with a matching matrix
    column entry, yet the mixed coordinates carry the same information since
    the mixing is invertible.
    """
    report = ScenarioReport(name="billiard")
    if mixing is None:
        mixing = np.array([[1.0, 1.0], [0.0, 1.0]]) if n == 2 else np.eye(n) + np.eye(n, k=1)
    if positions is None:
        positions = 0.25 * np.arange(1, n + 1) * (-1.0) ** np.arange(n)
    system = BilliardSystem(
        positions=np.asarray(positions, dtype=float), mixing=np.asarray(mixing, dtype=float)
    )
    ball, delta = int(move[0]), float(move[1])
    if not 1 <= ball <= system.n:
        raise InvalidArgumentError(f"ball index {ball} outside 1..{system.n}")

    moved = system.positions.copy()
    moved[ball - 1] += delta
    shift = system.mixing @ moved - system.mixed()
    for j in range(1, system.n + 1):
        report.add(
            f"mixed coordinate {j} shift from moving ball {ball}",
            system.mixing[j - 1, ball - 1] * delta,
            shift[j - 1],
            tol,
        )
    nonlocal_deps = [
        j for j in range(1, system.n + 1) if j != ball and system.mixing[j - 1, ball - 1] != 0.0
    ]
    recovered = np.linalg.solve(system.mixing, system.mixed())
    report.add(
        "round trip through the mixing",
        0.0,
        float(np.linalg.norm(recovered - system.positions)),
        1e-12,
    )
    report.artifacts["nonlocal_dependencies"] = nonlocal_deps
    report.artifacts["mixed_shift"] = [float(s) for s in shift]
    return report


SCENARIOS = {
    "measurement": run_measurement,
    "epr": run_epr,
    "undo": run_undo,
    "chsh": run_chsh,
    "billiard": run_billiard,
}
