//! Machine-readable descriptions of research software interfaces.
//!
//! A DataDesc document is an OpenAPI 3 file whose `components` describe
//! the classes of a software package: their properties, their public
//! functions with parameters and return values, and for every variable its
//! meaning, format, admissible values and shape. This crate reads and
//! writes such documents, extracts them from annotated source code, merges
//! partial documents, validates concrete data against them and publishes
//! them as documentation, CodeMeta records and registry entries.
//!
//! ```
//! use datadesc::exchange::{emit_document, parse_document};
//!
//! let text = "openapi: 3.0.0\ninfo:\n  title: demo\n  version: '1.0'\ncomponents: {}\n";
//! let parsed = parse_document(text).unwrap();
//! assert!(parsed.diagnostics.is_empty());
//! assert_eq!(emit_document(&parsed.document).unwrap(), text);
//! ```

pub mod diagnostic;
pub mod exchange;
pub mod export;
pub mod merge;
pub mod model;
pub mod source;
pub mod validate;

pub use diagnostic::{Diagnostic, Severity};
pub use model::{
    ClassDescription, DataDescDocument, DataType, DimensionDescription, FunctionDescription, Scalar, SoftwareInfo,
    VariableDescription,
};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/documents.md")]
    mod documents {}
    #[doc = include_str!("../../../book/src/source.md")]
    mod source {}
    #[doc = include_str!("../../../book/src/validation.md")]
    mod validation {}
    #[doc = include_str!("../../../book/src/merging.md")]
    mod merging {}
    #[doc = include_str!("../../../book/src/publishing.md")]
    mod publishing {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
