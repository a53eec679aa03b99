//! Quantum Hamiltonians, unitary propagation and quantumness time series.

mod flow;
mod hamiltonian;
mod propagate;
mod symmetry;
mod trace;

pub use flow::{
    random_hermitian, schrodinger_as_hamiltonian_flow, to_canonical, ExpectationFlow, FlowComparison, FLOW_DIM_LIMIT,
    FLOW_TOLERANCE,
};
pub use hamiltonian::{build_hamiltonian, HamiltonianSpec, MatrixEntry, MIN_FOCK_CUTOFF};
pub use propagate::{
    check_time_grid, evolve, evolve_with, gap_ratios, recurrence_fidelity, uniform_grid, EvolveOptions, Method,
    Propagator, StepInfo, DENSE_LIMIT,
};
pub use symmetry::{has_dynamical_symmetry, symmetry_residual, SYMMETRY_TOL};
pub use trace::{
    quantumness_trace, quantumness_trace_with, trace_on, QuantumnessTrace, TraceOptions, TraceSidecar, TRACE_COLUMNS,
    TRACE_SCHEMA,
};
