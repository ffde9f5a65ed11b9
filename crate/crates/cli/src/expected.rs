//! Published reference values for the summary tables, shipped as `data/expected_tables.json`.

use std::sync::OnceLock;

use serde::Deserialize;

const RAW: &str = include_str!("../data/expected_tables.json");

/// One reference row. `count` is the number of classes in rank 2 and of
/// distinct expansions in rank 3. `vertices` is absent where none was published.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
pub struct ExpectedRow {
    pub n: usize,
    pub dimension: usize,
    pub count: u64,
    pub vertices: Option<usize>,
}

#[derive(Debug, Deserialize)]
struct Tables {
    rank2: Vec<ExpectedRow>,
    rank3: Vec<ExpectedRow>,
}

fn tables() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(|| serde_json::from_str(RAW).expect("embedded table is valid JSON"))
}

/// All reference rows for a rank, by increasing `n`.
pub fn rows(rank: usize) -> &'static [ExpectedRow] {
    match rank {
        2 => &tables().rank2,
        3 => &tables().rank3,
        _ => &[],
    }
}

pub fn row(rank: usize, n: usize) -> Option<ExpectedRow> {
    rows(rank).iter().find(|r| r.n == n).copied()
}
