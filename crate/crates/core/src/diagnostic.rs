//! Structured findings shared by every checking operation.

use std::cmp::Ordering;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Severity {
    Error,
    Warning,
    Info,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
            Severity::Info => "info",
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A machine-readable finding.
///
/// `code` is a stable kebab-case identifier; `path` is a slash-separated
/// location in the serialized document (or in a data value, for instance
/// validation). The empty path denotes the root.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: String,
    pub path: String,
    pub message: String,
}

impl Diagnostic {
    pub fn new(
        severity: Severity,
        code: impl Into<String>,
        path: impl Into<String>,
        message: impl Into<String>,
    ) -> Self {
        Diagnostic {
            severity,
            code: code.into(),
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn error(code: impl Into<String>, path: impl Into<String>, message: impl Into<String>) -> Self {
        Self::new(Severity::Error, code, path, message)
    }

    pub fn warning(code: impl Into<String>, path: impl Into<String>, message: impl Into<String>) -> Self {
        Self::new(Severity::Warning, code, path, message)
    }

    pub fn info(code: impl Into<String>, path: impl Into<String>, message: impl Into<String>) -> Self {
        Self::new(Severity::Info, code, path, message)
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// Path as printed: the root is shown as `/`.
    pub fn display_path(&self) -> &str {
        if self.path.is_empty() {
            "/"
        } else {
            &self.path
        }
    }

    fn sort_key(&self) -> (&str, Severity, &str, &str) {
        (&self.path, self.severity, &self.code, &self.message)
    }
}

impl PartialOrd for Diagnostic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Diagnostic {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

/// `severity code path message`, the one-line form used by the CLI.
impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {}",
            self.severity,
            self.code,
            self.display_path(),
            self.message
        )
    }
}

pub fn has_errors(diagnostics: &[Diagnostic]) -> bool {
    diagnostics.iter().any(Diagnostic::is_error)
}

/// Sorts by path (then severity, code, message) and drops exact duplicates.
pub fn normalize(diagnostics: &mut Vec<Diagnostic>) {
    diagnostics.sort();
    diagnostics.dedup();
}

/// Builds slash-separated node paths. Segments are escaped the way JSON
/// pointers are (`~` → `~0`, `/` → `~1`) so names containing slashes stay
/// addressable.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NodePath(String);

impl NodePath {
    pub fn root() -> Self {
        NodePath(String::new())
    }

    pub fn child(&self, segment: &str) -> NodePath {
        let escaped = segment.replace('~', "~0").replace('/', "~1");
        if self.0.is_empty() {
            NodePath(escaped)
        } else {
            NodePath(format!("{}/{}", self.0, escaped))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<NodePath> for String {
    fn from(path: NodePath) -> String {
        path.0
    }
}

impl From<&NodePath> for String {
    fn from(path: &NodePath) -> String {
        path.0.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_is_one_line() {
        let d = Diagnostic::error("range", "numberOfTimeSteps", "value 0 below minimum");
        assert_eq!(d.to_string(), "error range numberOfTimeSteps value 0 below minimum");
        let root = Diagnostic::info("x", "", "m");
        assert_eq!(root.to_string(), "info x / m");
    }

    #[test]
    fn ordering_is_by_path_first() {
        let mut v = vec![
            Diagnostic::info("b", "z", ""),
            Diagnostic::error("a", "a/b", ""),
            Diagnostic::warning("c", "a", ""),
            Diagnostic::warning("c", "a", ""),
        ];
        normalize(&mut v);
        let paths: Vec<_> = v.iter().map(|d| d.path.as_str()).collect();
        assert_eq!(paths, ["a", "a/b", "z"]);
    }

    #[test]
    fn path_segments_are_escaped() {
        let p = NodePath::root().child("components").child("a/b~c");
        assert_eq!(p.as_str(), "components/a~1b~0c");
    }
}
