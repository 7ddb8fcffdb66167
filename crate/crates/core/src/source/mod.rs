//! Extraction of interface descriptions from annotated source files.
//!
//! The supported dialect is a declaration subset of Python 3: class
//! statements, annotated attributes, `def` signatures with hints and
//! literal defaults, decorator calls and docstrings. Nothing is executed
//! or imported. Metadata that a hint cannot carry is written with a
//! `datadesc` decorator whose keywords are the attribute names without
//! the `x-` prefix:
//!
//! ```python
//! class EnergySystemModel:
//!     @datadesc("numberOfTimeSteps", MinimumValue=0, ExclusiveMinimum=True, Required=True)
//!     def __init__(self, numberOfTimeSteps: int = 8760):
//!         ...
//! ```

mod extract;
mod hints;
mod lexer;
mod parser;

use std::path::Path;

use thiserror::Error;

use crate::diagnostic::{normalize, Diagnostic};

pub use extract::{extract_interface, ExtractError, Extraction, DECORATOR_NAME};
pub use hints::{map_type_hint, MappedType};
pub use parser::{
    AnnotatedInterfaceTree, AttributeNode, ClassNode, Decorator, Expr, FunctionNode, Literal, ParamKind, ParamNode,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Dialect {
    #[default]
    Python,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SourceUnit {
    pub path: String,
    pub text: String,
    pub dialect: Dialect,
}

impl SourceUnit {
    pub fn new(path: impl Into<String>, text: impl Into<String>) -> Self {
        SourceUnit {
            path: path.into(),
            text: text.into(),
            dialect: Dialect::Python,
        }
    }

    pub fn from_bytes(path: impl Into<String>, bytes: &[u8]) -> Result<Self, SourceError> {
        let text = std::str::from_utf8(bytes).map_err(|e| SourceError::NotUtf8(e.valid_up_to()))?;
        Ok(Self::new(path, text))
    }

    /// File name without directory or extension.
    pub fn module_name(&self) -> String {
        Path::new(&self.path)
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .filter(|s| !s.is_empty())
            .unwrap_or_else(|| "module".to_owned())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SourceError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("source is not UTF-8 (invalid byte at offset {0})")]
    NotUtf8(usize),
}

impl SourceError {
    pub fn code(&self) -> &'static str {
        "source-syntax"
    }

    pub fn diagnostic(&self, path: &str) -> Diagnostic {
        let at = match self {
            SourceError::Syntax { line, .. } => format!("{path}:{line}"),
            SourceError::NotUtf8(_) => path.to_owned(),
        };
        Diagnostic::error(self.code(), at, self.to_string())
    }
}

/// Parses one unit into its declaration tree. Fails only when the text
/// cannot be tokenized; everything else degrades to diagnostics.
pub fn parse_source(unit: &SourceUnit) -> Result<(AnnotatedInterfaceTree, Vec<Diagnostic>), SourceError> {
    let mut diags = Vec::new();
    let toks = lexer::tokenize(&unit.text, &unit.path, &mut diags)?;
    let (classes, functions) = parser::Parser::new(&toks, &unit.path, &mut diags).module();
    normalize(&mut diags);
    let tree = AnnotatedInterfaceTree {
        file: unit.path.clone(),
        module: unit.module_name(),
        classes,
        functions,
    };
    Ok((tree, diags))
}
