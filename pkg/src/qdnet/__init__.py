"""Heisenberg-picture qubit-network simulator.

Qubits are represented by triples of network-space observables that evolve by
gate conjugation while the Heisenberg state stays constant.  The package
verifies, numerically, that this description is separable and free of action
at a distance, that it branches locally through projector-relative
descriptors, and that it reproduces Schrödinger-picture expectation values.
"""

from .branching import (
    Pvm,
    RelativeBranch,
    apply_relative,
    evolve_branch,
    foliate,
    make_pvm,
    relative_expectation,
    relative_recombine,
    relative_variance,
    split_unitary,
)
from .dsl import CircuitProgram, format_program, parse_circuit
from .errors import (
    DimMismatchError,
    IncompatibleError,
    InvalidArgumentError,
    InvalidStateError,
    InvalidSubsystemError,
    MismatchedBranchesError,
    NonCommutingFoliationError,
    NonCommutingGateError,
    NonCommutingSupportsError,
    NotObservableError,
    NotUnitaryError,
    ParseError,
    QdnetError,
    ZeroWeightBranchError,
)
from .linalg import (
    DEFAULT_TOL,
    check_property,
    dagger,
    frob_dist,
    kron,
    partial_trace,
    trace_full,
)
from .network import (
    DescriptorTriple,
    GateSpec,
    HeisenbergState,
    Network,
    PhenomenalState,
    apply_gate,
    build_gate,
    cnot_closed_form,
    expectation,
    init_network,
    is_sharp,
    phenomenal_state,
    variance,
)
from .noumenal import (
    CompatibilityWitness,
    NoumenalState,
    apply_to_noumenal,
    compatible,
    noumenal_product,
    product_of_operations,
    project_noumenal,
    verify_no_action,
    verify_separability,
)
from .oracle import (
    conditional_expectation,
    density_matrix,
    schmidt_rank,
    separability_gap,
    sv_expectation,
    sv_run,
)
from .runner import RunOptions, RunReport, execute
from .scenarios import (
    BilliardSystem,
    Check,
    ScenarioReport,
    run_billiard,
    run_chsh,
    run_epr,
    run_measurement,
    run_undo,
)

__version__ = "0.1.0"
