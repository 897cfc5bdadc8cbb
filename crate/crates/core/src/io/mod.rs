//! File formats, reports and the command-line front end.

pub mod cli;
pub mod edgelist;
pub mod mtx;
pub mod report;

pub use cli::{run, CommandConfig};
pub use edgelist::{parse_edge_list, read_edge_list};
pub use mtx::{export_operator, read_matrix_market, OperatorKind, SymmetricCoo};
pub use report::Report;
