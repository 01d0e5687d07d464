"""Circuit description language: one directive per line, ``#`` comments.

Grammar::

    qubits N
    init <bitstring>
    h a | x a | y a | z a
    gate a c0r c0i cxr cxi cyr cyi czr czi
    cnot b a            # control first (the measured qubit)
    foliate a on b
    expect a
    assert-sharp a <axis> <value>
    report

Files are UTF-8 with LF or CRLF line endings.  Indices are 1-based and
validated against the declared qubit count at parse time; ``gate``
coefficients are checked for unitarity at parse time.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidSubsystemError, NotUnitaryError, ParseError
from .linalg import AXES, ID2, PAULIS, is_unitary
from .network import GateSpec

NAMED_GATES = ("h", "x", "y", "z")


@dataclass(frozen=True)
class Directive:
    line: int = field(compare=False, kw_only=True)

    def text(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class GateDirective(Directive):
    name: str  # h|x|y|z|gate|cnot
    qubits: tuple[int, ...]
    coeffs: tuple[complex, complex, complex, complex] | None = None

    def text(self) -> str:
        if self.name == "gate":
            parts = []
            for c in self.coeffs:
                parts += [repr(float(c.real)), repr(float(c.imag))]
            return f"gate {self.qubits[0]} " + " ".join(parts)
        return f"{self.name} " + " ".join(str(q) for q in self.qubits)

    def to_spec(self) -> GateSpec:
        if self.name == "cnot":
            return GateSpec.cnot(*self.qubits)
        if self.name == "gate":
            return GateSpec.single(self.qubits[0], *self.coeffs)
        return GateSpec.named(self.name, self.qubits[0])


@dataclass(frozen=True)
class FoliateDirective(Directive):
    qubit: int
    on: int

    def text(self) -> str:
        return f"foliate {self.qubit} on {self.on}"


@dataclass(frozen=True)
class ExpectDirective(Directive):
    qubit: int

    def text(self) -> str:
        return f"expect {self.qubit}"


@dataclass(frozen=True)
class AssertSharpDirective(Directive):
    qubit: int
    axis: str
    value: float

    def text(self) -> str:
        return f"assert-sharp {self.qubit} {self.axis} {repr(self.value)}"


@dataclass(frozen=True)
class ReportDirective(Directive):
    def text(self) -> str:
        return "report"


@dataclass(frozen=True)
class CircuitProgram:
    n: int
    init: str
    steps: tuple[Directive, ...]

    def text_lines(self) -> list[str]:
        return [f"qubits {self.n}", f"init {self.init}"] + [d.text() for d in self.steps]


def format_program(program: CircuitProgram) -> str:
    """Canonical text form; parsing it back yields an equal program."""
    return "\n".join(program.text_lines()) + "\n"


def _column_of(raw_line: str, token: str) -> int:
    pos = raw_line.find(token)
    return pos + 1 if pos >= 0 else 1


def _parse_int(token: str, what: str, lineno: int, raw: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"expected an integer {what}, got {token!r}", lineno, _column_of(raw, token)) from None


def _parse_float(token: str, what: str, lineno: int, raw: str) -> float:
    try:
        return float(token)
    except ValueError:
        raise ParseError(f"expected a number {what}, got {token!r}", lineno, _column_of(raw, token)) from None


def _check_index(q: int, n: int, lineno: int) -> int:
    if not 1 <= q <= n:
        raise InvalidSubsystemError(f"qubit index {q} outside 1..{n} (line {lineno})")
    return q


def parse_circuit(text: str) -> CircuitProgram:
    """Parse program text into a validated ``CircuitProgram``."""
    n: int | None = None
    init: str | None = None
    steps: list[Directive] = []
    saw_gate = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        head = tokens[0]

        if head == "qubits":
            if n is not None:
                raise ParseError("duplicate 'qubits' directive", lineno, 1)
            if steps or init is not None:
                raise ParseError("'qubits' must be the first directive", lineno, 1)
            if len(tokens) != 2:
                raise ParseError("usage: qubits N", lineno, 1)
            n = _parse_int(tokens[1], "qubit count", lineno, raw)
            if n < 1:
                raise ParseError(f"need at least one qubit, got {n}", lineno, _column_of(raw, tokens[1]))
            continue

        if n is None:
            raise ParseError("the program must start with a 'qubits' directive", lineno, 1)

        if head == "init":
            if len(tokens) != 2:
                raise ParseError("usage: init <bitstring>", lineno, 1)
            bits = tokens[1]
            if init is not None:
                raise ParseError("duplicate 'init' directive", lineno, 1)
            if steps:
                raise ParseError("'init' must precede all other directives", lineno, 1)
            if len(bits) != n or any(b not in "01" for b in bits):
                raise ParseError(
                    f"init string must be {n} characters of 0/1, got {bits!r}",
                    lineno,
                    _column_of(raw, bits),
                )
            init = bits
            continue

        if head in NAMED_GATES:
            if len(tokens) != 2:
                raise ParseError(f"usage: {head} a", lineno, 1)
            q = _check_index(_parse_int(tokens[1], "qubit index", lineno, raw), n, lineno)
            steps.append(GateDirective(name=head, qubits=(q,), line=lineno))
            saw_gate = True
            continue

        if head == "gate":
            if len(tokens) != 10:
                raise ParseError("usage: gate a c0r c0i cxr cxi cyr cyi czr czi", lineno, 1)
            q = _check_index(_parse_int(tokens[1], "qubit index", lineno, raw), n, lineno)
            reals = [_parse_float(tok, "coefficient", lineno, raw) for tok in tokens[2:]]
            coeffs = tuple(complex(reals[2 * i], reals[2 * i + 1]) for i in range(4))
            m2 = coeffs[0] * np.asarray(ID2)
            for c, axis in zip(coeffs[1:], AXES):
                m2 = m2 + c * PAULIS[axis]
            if not is_unitary(m2):
                raise NotUnitaryError(f"gate coefficients are not unitary (line {lineno})")
            steps.append(GateDirective(name="gate", qubits=(q,), coeffs=coeffs, line=lineno))
            saw_gate = True
            continue

        if head == "cnot":
            if len(tokens) != 3:
                raise ParseError("usage: cnot b a  (control first)", lineno, 1)
            b = _check_index(_parse_int(tokens[1], "control index", lineno, raw), n, lineno)
            a = _check_index(_parse_int(tokens[2], "target index", lineno, raw), n, lineno)
            if a == b:
                raise InvalidSubsystemError(f"cnot control and target must differ (line {lineno})")
            steps.append(GateDirective(name="cnot", qubits=(b, a), line=lineno))
            saw_gate = True
            continue

        if head == "foliate":
            if len(tokens) != 4 or tokens[2] != "on":
                raise ParseError("usage: foliate a on b", lineno, 1)
            a = _check_index(_parse_int(tokens[1], "qubit index", lineno, raw), n, lineno)
            b = _check_index(_parse_int(tokens[3], "qubit index", lineno, raw), n, lineno)
            if not saw_gate:
                raise ParseError("'foliate' must follow at least one gate step", lineno, 1)
            steps.append(FoliateDirective(qubit=a, on=b, line=lineno))
            continue

        if head == "expect":
            if len(tokens) != 2:
                raise ParseError("usage: expect a", lineno, 1)
            q = _check_index(_parse_int(tokens[1], "qubit index", lineno, raw), n, lineno)
            steps.append(ExpectDirective(qubit=q, line=lineno))
            continue

        if head == "assert-sharp":
            if len(tokens) != 4:
                raise ParseError("usage: assert-sharp a <axis> <value>", lineno, 1)
            q = _check_index(_parse_int(tokens[1], "qubit index", lineno, raw), n, lineno)
            axis = tokens[2]
            if axis not in AXES:
                raise ParseError(f"axis must be one of x/y/z, got {axis!r}", lineno, _column_of(raw, axis))
            value = _parse_float(tokens[3], "sharp value", lineno, raw)
            steps.append(AssertSharpDirective(qubit=q, axis=axis, value=value, line=lineno))
            continue

        if head == "report":
            if len(tokens) != 1:
                raise ParseError("usage: report", lineno, 1)
            steps.append(ReportDirective(line=lineno))
            continue

        raise ParseError(f"unknown directive {head!r}", lineno, _column_of(raw, head))

    if n is None:
        raise ParseError("empty program: a 'qubits' directive is required", 1, 1)
    return CircuitProgram(n=n, init=init if init is not None else "0" * n, steps=tuple(steps))
