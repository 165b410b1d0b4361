"""Simulator and compiler for globally controlled, translation-invariant
quantum cellular automata on a 1D qudit lattice."""

from .compiler import (
    CNOT,
    CompiledProgram,
    Gate1,
    LogicalCircuit,
    Measure,
    compile_circuit,
    euler_angles,
    logical_readout,
    parse_circuit,
    reference_simulate,
    run_on_partition,
)
from .ensemble import (
    EnsembleParams,
    EnsembleReport,
    expected_partitions,
    expected_working,
    pure_mixed_equivalence,
    run_ensemble,
    scaling_table,
)
from . import errors
from .lattice import (
    FIVE_LEVEL,
    SIX_LEVEL,
    LatticeConfig,
    SchemeMode,
    SparseState,
    expectation_level_count,
    inner_product,
    make_basis_state,
    make_product_state,
)
from .macros import MacroName, create_pointers, macro_program, partition_split, pointer_census
from .oracle import apply_pulse_dense
from .pulses import (
    LX,
    ROT,
    SW,
    ControlledExchange,
    GlobalLevelSwap,
    PulseProgram,
    QubitVector,
    apply_program,
    apply_pulse,
    invert,
    parse_program,
)

compile = compile_circuit  # noqa: A001

__version__ = "0.1.0"

__all__ = [
    "CNOT", "CompiledProgram", "Gate1", "LogicalCircuit", "Measure", "compile", "compile_circuit",
    "euler_angles", "logical_readout", "parse_circuit", "reference_simulate", "run_on_partition",
    "EnsembleParams", "EnsembleReport", "expected_partitions", "expected_working", "pure_mixed_equivalence",
    "run_ensemble", "scaling_table", "errors", "FIVE_LEVEL", "SIX_LEVEL", "LatticeConfig", "SchemeMode",
    "SparseState", "expectation_level_count", "inner_product", "make_basis_state", "make_product_state",
    "MacroName", "create_pointers", "macro_program", "partition_split", "pointer_census",
    "apply_pulse_dense", "LX", "ROT", "SW", "ControlledExchange", "GlobalLevelSwap", "PulseProgram",
    "QubitVector", "apply_program", "apply_pulse", "invert", "parse_program",
]
