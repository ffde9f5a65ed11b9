//! Rank 3: covers by inseparable flats, parallel insertion and `O_{3,n}`.

mod build;
mod cover;
mod descriptor;
mod rules;
mod state;

pub use build::{base_o3_4, build_o3, build_o3_from, coloop_embedding, enumerate_rank3_column_states, ColumnState};
pub use cover::{count_labeled_covers, cycle_covers, linear_spaces, Cover};
pub use descriptor::{add_loops, simple_coefficients, simple_lattice, Rank3Descriptor};
pub use state::{insert_parallel, insert_parallel_with_report, InsertionCase, InsertionReport, Rank3State, Rank3Stats};
