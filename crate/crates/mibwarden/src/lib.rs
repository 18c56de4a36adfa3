//! File formats, reports, online stream classification and the CLI for
//! `mibwarden-core`.
//!
//! - [`csv_io`]: labeled and unlabeled dataset CSV files
//! - [`model_io`]: the model text format
//! - [`profile`]: generator profiles as JSON
//! - [`bench`] and [`report`]: the five-learner comparison and its JSON/table output
//! - [`stream`]: the snapshot line protocol, over readers or UDP

pub mod bench;
pub mod csv_io;
pub mod error;
pub mod model_io;
pub mod profile;
pub mod report;
pub mod stream;

pub use error::{Error, Result};
