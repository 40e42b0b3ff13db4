//! Command-line front end: read values, cluster them, write the results.

pub mod app;
pub mod document;
pub mod ingest;
pub mod report;

pub use crate::app::run;
pub use crate::document::{emit_json, OutputDocument, SCHEMA_VERSION};
pub use crate::ingest::{ingest, ColumnSelector, IngestError, IngestOptions, InputFormat, Source};
pub use crate::report::emit_report;
