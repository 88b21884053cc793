//! Parameter grids, batch execution and the results file.

mod grid;
mod records;
mod run;

pub use grid::{build_grid, Cell, GridSpec, ParameterGrid};
pub use records::{
    canonical_sort, load_records, persist, read_records, write_records, ExperimentRecord, RECORD_HEADER,
};
pub use run::{load_network_dir, run_grid, CellFailure, RunOutcome};
