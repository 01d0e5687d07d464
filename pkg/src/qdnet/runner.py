"""Program execution: network + oracle side by side, invariant suite, JSON report.

The report is fully deterministic for a fixed (program, options) pair: floats
are emitted with 17 significant digits and nothing time- or machine-dependent
is recorded.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import oracle
from .branching import foliate, make_pvm, relative_expectation, relative_variance
from .dsl import (
    AssertSharpDirective,
    CircuitProgram,
    Directive,
    ExpectDirective,
    FoliateDirective,
    GateDirective,
    ReportDirective,
)
from .errors import QdnetError
from .linalg import AXES, DEFAULT_TOL, PAULIS, embed_single
from .network import (
    Network,
    apply_gate,
    basis_state,
    commutation_defect,
    expectation,
    hermiticity_defect,
    init_network,
    pauli_defect,
    phenomenal_state,
    trace_defect,
    variance,
)
from .noumenal import verify_separability


@dataclass(frozen=True)
class RunOptions:
    tol: float = DEFAULT_TOL
    oracle: bool = True
    suite: bool = True


@dataclass
class RunReport:
    data: dict

    @property
    def passed(self) -> bool:
        return self.data["summary"]["pass"]

    def to_json(self) -> str:
        return dumps_canonical(self.data)


def _phenomenal_entry(net: Network, tol: float) -> list[dict]:
    out = []
    for q in range(1, net.n + 1):
        ph = phenomenal_state(net, q, tol)
        out.append({"qubit": q, "bloch": [ph.x, ph.y, ph.z]})
    return out


def _suite_entry(net: Network, psi, opts: RunOptions, no_action_dev: float | None) -> dict:
    tol = opts.tol
    suite: dict = {}
    pauli = max(pauli_defect(trip) for trip in net.triples)
    suite["pauli"] = {"max_dev": pauli, "pass": pauli <= tol}
    comm = 0.0
    for a in range(net.n):
        for b in range(a + 1, net.n):
            comm = max(comm, commutation_defect(net.triples[a], net.triples[b]))
    suite["commutation"] = {"max_dev": comm, "pass": comm <= tol}
    herm = max(hermiticity_defect(trip) for trip in net.triples)
    tr = max(trace_defect(trip) for trip in net.triples)
    suite["hermitian"] = {"max_dev": herm, "pass": herm <= tol}
    suite["traceless"] = {"max_dev": tr, "pass": tr <= tol}
    if no_action_dev is not None:
        suite["no_action"] = {"max_dev": no_action_dev, "pass": no_action_dev <= tol}
    sep_ok = verify_separability(net, [(q,) for q in range(1, net.n + 1)], tol)
    suite["separability"] = {"pass": bool(sep_ok)}
    if psi is not None:
        worst = 0.0
        for q in range(1, net.n + 1):
            for axis in AXES:
                desc = expectation(net, net.observable(q, axis), tol)
                fixed = oracle.sv_expectation(psi, embed_single(PAULIS[axis], q, net.n), tol)
                worst = max(worst, abs(desc - fixed))
        for a in range(1, net.n + 1):
            for b in range(a + 1, net.n + 1):
                for axis in AXES:
                    desc = expectation(
                        net, net.observable(a, axis) @ net.observable(b, axis), tol
                    )
                    fixed = oracle.sv_expectation(
                        psi,
                        embed_single(PAULIS[axis], a, net.n) @ embed_single(PAULIS[axis], b, net.n),
                        tol,
                    )
                    worst = max(worst, abs(desc - fixed))
        suite["oracle"] = {"max_dev": worst, "pass": worst <= tol}
    return suite


def _count_suite(suite: dict) -> tuple[int, int]:
    checks = failed = 0
    for entry in suite.values():
        checks += 1
        if not entry["pass"]:
            failed += 1
    return checks, failed


def _with_line(err: QdnetError, directive: Directive) -> QdnetError:
    wrapped = type(err)(f"{err} (while executing {directive.text()!r} from line {directive.line})")
    wrapped.__cause__ = err
    return wrapped


def execute(program: CircuitProgram, options: RunOptions | None = None, **kwargs) -> RunReport:
    """Run a parsed program and collect the step-by-step report.

    Keyword arguments (``tol``, ``oracle``, ``suite``) override ``options``.
    """
    if options is None:
        options = RunOptions(**kwargs)
    elif kwargs:
        raise TypeError("pass either an options object or keyword options, not both")
    tol = options.tol

    net = init_network(program.n, basis_state(program.n, program.init), tol)
    psi = basis_state(program.n, program.init) if options.oracle else None

    steps: list[dict] = []
    branches: list[dict] = []
    n_checks = n_failed = 0

    def record(directive_text: str, no_action_dev: float | None = None, extra: dict | None = None):
        nonlocal n_checks, n_failed
        entry = {
            "t": net.t,
            "directive": directive_text,
            "phenomenal": _phenomenal_entry(net, tol),
        }
        suite = {}
        if options.suite:
            suite = _suite_entry(net, psi, options, no_action_dev)
        if extra:
            suite.update(extra)
        entry["suite"] = suite
        checks, failed = _count_suite(suite)
        n_checks += checks
        n_failed += failed
        steps.append(entry)

    record(f"init {program.init}")

    for directive in program.steps:
        try:
            if isinstance(directive, GateDirective):
                spec = directive.to_spec()
                before = net
                net = apply_gate(net, spec, tol)
                if psi is not None:
                    psi = oracle.gate_matrix(spec, net.n) @ psi
                no_action_dev = None
                if options.suite:
                    remote = [q for q in range(1, net.n + 1) if q not in spec.support]
                    no_action_dev = 0.0
                    for q in remote:
                        for c1, c2 in zip(before.triple(q).components(), net.triple(q).components()):
                            no_action_dev = max(no_action_dev, float(np.linalg.norm(c1 - c2)))
                record(directive.text(), no_action_dev)
            elif isinstance(directive, FoliateDirective):
                pvm = make_pvm(net, directive.on, tol=tol)
                plus, minus = foliate(net, directive.qubit, pvm, tol=tol)
                table = []
                for branch in (plus, minus):
                    table.append(
                        {
                            "label": branch.label,
                            "weight": branch.weight,
                            "expectation": [
                                relative_expectation(branch, ax, net.rho, tol) for ax in AXES
                            ],
                            "variance": [
                                relative_variance(branch, ax, net.rho, tol) for ax in AXES
                            ],
                        }
                    )
                branch_record = {
                    "qubit": directive.qubit,
                    "on": directive.on,
                    "t0": net.t,
                    "branches": table,
                }
                if psi is not None:
                    worst = _branch_oracle_dev(directive, net, psi, (plus, minus), tol)
                    branch_record["oracle_max_dev"] = worst
                    n_checks += 1
                    if worst > tol:
                        n_failed += 1
                branches.append(branch_record)
                record(directive.text())
            elif isinstance(directive, ExpectDirective):
                record(directive.text())
            elif isinstance(directive, AssertSharpDirective):
                obs = net.observable(directive.qubit, directive.axis)
                v = variance(net, obs, tol)
                mean = expectation(net, obs, tol)
                ok = v <= tol and abs(mean - directive.value) <= tol
                record(
                    directive.text(),
                    extra={
                        "assert_sharp": {
                            "variance": v,
                            "expectation": mean,
                            "value": directive.value,
                            "pass": ok,
                        }
                    },
                )
            elif isinstance(directive, ReportDirective):
                record(directive.text())
            else:  # pragma: no cover - parser emits only the kinds above
                raise TypeError(f"unhandled directive {directive!r}")
        except QdnetError as err:
            raise _with_line(err, directive) from err

    data = {
        "program": {
            "n": program.n,
            "init": program.init,
            "text": program.text_lines(),
        },
        "tolerance": tol,
        "steps": steps,
        "branches": branches,
        "summary": {
            "pass": n_failed == 0,
            "n_checks": n_checks,
            "n_failed": n_failed,
        },
    }
    return RunReport(data=data)


def _branch_oracle_dev(directive, net, psi, branch_pair, tol) -> float:
    """Compare branch-relative expectations with oracle conditional expectations.

    Conditioning the evolved state on the fixed z projector of the measured
    qubit is the picture-equivalent of the descriptor projector built at the
    foliation instant.
    """
    fixed_z = embed_single(PAULIS["z"], directive.on, net.n)
    worst = 0.0
    for branch in branch_pair:
        proj = 0.5 * (np.eye(net.dim, dtype=complex) + branch.label * fixed_z)
        for axis in AXES:
            fixed_obs = embed_single(PAULIS[axis], directive.qubit, net.n)
            cond = oracle.conditional_expectation(psi, proj, fixed_obs, tol)
            rel = relative_expectation(branch, axis, net.rho, tol)
            worst = max(worst, abs(cond - rel))
    return worst


# --- deterministic JSON ------------------------------------------------------


def _fmt_float(x: float) -> str:
    s = format(float(x), ".17g")
    if "e" not in s and "." not in s:
        s += ".0"
    return s


def dumps_canonical(obj, indent: int = 0) -> str:
    """JSON with floats at 17 significant digits; byte-stable for equal inputs."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [inner + dumps_canonical(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f"{inner}{json.dumps(str(k))}: {dumps_canonical(v, indent + 1)}" for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    raise TypeError(f"cannot serialize {type(obj)!r}")
