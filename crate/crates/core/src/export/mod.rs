//! Publication artifacts: documentation pages, a CodeMeta record, a
//! package-index stub and a research-graph record. Everything is returned
//! as a [`FileSet`]; nothing is uploaded.

mod docs;
mod fileset;
mod registry;

use thiserror::Error;

use crate::diagnostic::Diagnostic;
use crate::exchange::{codemeta_to_string, info_to_codemeta};
use crate::model::{check_document, DataDescDocument};

pub use docs::DocsFormat;
pub use fileset::{FileSet, FileSetError};

pub const CODEMETA_FILE: &str = "codemeta.json";
pub const PACKAGE_FILE: &str = "pyproject.toml";
pub const REGISTRY_FILE: &str = "registry.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportTarget {
    DocsMarkdown,
    DocsHtml,
    CodeMetaJson,
    PackageMetadata,
    RegistryRecord,
}

impl ExportTarget {
    pub const ALL: [ExportTarget; 5] = [
        ExportTarget::DocsMarkdown,
        ExportTarget::DocsHtml,
        ExportTarget::CodeMetaJson,
        ExportTarget::PackageMetadata,
        ExportTarget::RegistryRecord,
    ];

    /// Command-line spelling.
    pub fn as_str(self) -> &'static str {
        match self {
            ExportTarget::DocsMarkdown => "docs-md",
            ExportTarget::DocsHtml => "docs-html",
            ExportTarget::CodeMetaJson => "codemeta",
            ExportTarget::PackageMetadata => "package",
            ExportTarget::RegistryRecord => "registry",
        }
    }

    pub fn parse(s: &str) -> Option<ExportTarget> {
        Self::ALL.into_iter().find(|t| t.as_str() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExportError {
    #[error("the document is not valid ({} error(s))", .0.len())]
    InvalidDocument(Vec<Diagnostic>),
}

impl ExportError {
    pub fn code(&self) -> &'static str {
        "invalid-document"
    }
}

fn ensure_valid(doc: &DataDescDocument) -> Result<(), ExportError> {
    let errors: Vec<Diagnostic> = check_document(doc).into_iter().filter(Diagnostic::is_error).collect();
    if errors.is_empty() {
        Ok(())
    } else {
        Err(ExportError::InvalidDocument(errors))
    }
}

/// `index.<ext>` for the info section and `classes/<Name>.<ext>` per class.
pub fn render_docs(doc: &DataDescDocument, format: DocsFormat) -> Result<FileSet, ExportError> {
    ensure_valid(doc)?;
    Ok(docs::render(doc, format))
}

/// `codemeta.json`, plus notes on info extensions that have no CodeMeta
/// term.
pub fn export_codemeta(doc: &DataDescDocument) -> Result<(FileSet, Vec<Diagnostic>), ExportError> {
    ensure_valid(doc)?;
    let (record, diags) = info_to_codemeta(&doc.info);
    let mut files = FileSet::new();
    let _ = files.insert(CODEMETA_FILE, codemeta_to_string(&record));
    Ok((files, diags))
}

/// `pyproject.toml` for [`ExportTarget::PackageMetadata`], `registry.json`
/// for [`ExportTarget::RegistryRecord`]. Other targets give an empty set.
pub fn build_registry_payload(doc: &DataDescDocument, target: ExportTarget) -> Result<FileSet, ExportError> {
    ensure_valid(doc)?;
    let mut files = FileSet::new();
    match target {
        ExportTarget::PackageMetadata => {
            let _ = files.insert(PACKAGE_FILE, registry::package_stub(doc));
        }
        ExportTarget::RegistryRecord => {
            let mut text = serde_json::to_string_pretty(&registry::registry_record(doc)).unwrap_or_default();
            text.push('\n');
            let _ = files.insert(REGISTRY_FILE, text);
        }
        _ => {}
    }
    Ok(files)
}

/// Runs one export target.
pub fn export(doc: &DataDescDocument, target: ExportTarget) -> Result<(FileSet, Vec<Diagnostic>), ExportError> {
    match target {
        ExportTarget::DocsMarkdown => Ok((render_docs(doc, DocsFormat::Markdown)?, Vec::new())),
        ExportTarget::DocsHtml => Ok((render_docs(doc, DocsFormat::Html)?, Vec::new())),
        ExportTarget::CodeMetaJson => export_codemeta(doc),
        ExportTarget::PackageMetadata | ExportTarget::RegistryRecord => {
            Ok((build_registry_payload(doc, target)?, Vec::new()))
        }
    }
}
