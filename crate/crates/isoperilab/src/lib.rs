//! Campaign driver for the `isoperilab` command-line tool.

pub mod campaign;
pub mod cli;
pub mod report;

pub use cli::main_with_args;
pub use report::{CampaignReport, Cell};
