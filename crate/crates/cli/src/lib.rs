//! Command-line front end for weightlab: subcommand implementations, the
//! disk cache and the corpus runner.

pub mod cache;
pub mod corpus;
pub mod report;
pub mod run;
