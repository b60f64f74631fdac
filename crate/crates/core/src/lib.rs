//! Full-text self-index built on the compact directed acyclic word graph.

pub mod cdawg;
pub mod dag;
pub mod io;
pub mod la;
pub mod oracle;
pub mod query;
pub mod slp;
pub mod suffix;
pub mod text;

pub use text::{Pattern, Text, TextError, SENTINEL};
