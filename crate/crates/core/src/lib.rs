//! Verification and search for decompositions of complete and complete
//! multipartite graphs into copies of the 24-vertex non-trivial snarks.
//!
//! The crate is organised bottom-up:
//!
//! - [`graph`] and [`iso`]: simple graphs, snark predicates, isomorphism.
//! - [`catalog`]: the 38 snarks and their certification.
//! - [`host`]: complete and multipartite host graphs with dense edge indices.
//! - [`design`]: piecewise-modular maps, orbit development, verification.
//! - [`search`]: simulated annealing that finds base blocks.
//! - [`spectrum`]: divisibility conditions and the ingredient ledger.
//! - [`formats`]: the `.graph` and `.design` text formats and reports.
//!
//! ```
//! use snark_designs::formats::parse_design;
//! use snark_designs::design::verify_design;
//!
//! let text = "design g01-k73
//! snark G1
//! host complete 73
//! map a segments (0,73,1)
//! block a 0 1 2 3 5 6 11 13 15 16 24 30 28 44 4 47 49 10 35 70 8 21 61 45
//! ";
//! let report = verify_design(&parse_design(text).unwrap());
//! assert!(report.pass);
//! assert_eq!(report.developed_block_count, 73);
//! ```

pub mod catalog;
pub mod design;
pub mod formats;
pub mod graph;
pub mod host;
pub mod iso;
pub mod search;
pub mod spectrum;

pub use catalog::SnarkId;
pub use design::{verify_design, DesignRecord, PiecewiseModularMap, VerificationReport};
pub use graph::LabeledGraph;
pub use host::HostGraph;

#[cfg(doctest)]
mod book;
