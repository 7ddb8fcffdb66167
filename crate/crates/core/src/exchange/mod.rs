//! The YAML exchange format: reading, canonical writing, and the CodeMeta
//! view of the info section.

mod codemeta;
mod emit;
pub mod keys;
mod parse;
pub mod yaml;

pub use codemeta::{
    codemeta_to_info, codemeta_to_string, info_to_codemeta, read_info_file, CodeMetaError, InfoFileError,
    CODEMETA_CONTEXT, FALLBACK_VERSION,
};
pub use emit::{document_to_value, emit_document, emit_info_section, info_to_value, EmitError};
pub use parse::{
    document_from_value, info_from_value, parse_document, parse_document_bytes, ParseError, ParsedDocument,
};

pub(crate) use emit::variable_value;
pub(crate) use parse::{read_document, read_variable, scalar_of};
