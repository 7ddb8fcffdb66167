//! Merging partial descriptions into one document.
//!
//! Documents are merged on their canonical YAML trees, so aliases and
//! attribute order never matter. Maps union by key, lists union in order
//! of first occurrence, equal scalars collapse (numbers by value, so `0`
//! equals `0.0`) and unequal scalars are conflicts. A node that is a map in
//! one input and a scalar or list in the other is also a conflict, as is a
//! variable typed by `type` in one input and by `$ref` in the other.

use serde_yaml::{Mapping, Value};
use thiserror::Error;

use crate::diagnostic::{has_errors, normalize, Diagnostic, NodePath, Severity};
use crate::exchange::{document_to_value, read_document, scalar_of, yaml};
use crate::model::{check_document, lint_document, DataDescDocument};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MergePolicy {
    /// Conflicts abort the merge.
    #[default]
    Error,
    /// The value from the earlier input wins.
    PreferFirst,
    /// The value from the later input wins.
    PreferLast,
}

impl MergePolicy {
    pub fn parse(s: &str) -> Option<MergePolicy> {
        match s {
            "error" => Some(MergePolicy::Error),
            "first" | "prefer-first" => Some(MergePolicy::PreferFirst),
            "last" | "prefer-last" => Some(MergePolicy::PreferLast),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MergeReport {
    /// Absent when the policy is [`MergePolicy::Error`] and there were
    /// conflicts.
    pub merged: Option<DataDescDocument>,
    /// One `merge-conflict` per conflicting node: errors under
    /// [`MergePolicy::Error`], warnings otherwise.
    pub conflicts: Vec<Diagnostic>,
    /// Findings on the merged document other than conflicts.
    pub diagnostics: Vec<Diagnostic>,
}

impl MergeReport {
    pub fn is_clean(&self) -> bool {
        self.merged.is_some() && self.conflicts.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MergeError {
    #[error("nothing to merge")]
    NoDocuments,
    #[error("input {index} is not a valid document ({} error(s))", diagnostics.len())]
    InvalidInput { index: usize, diagnostics: Vec<Diagnostic> },
    #[error("the merged document is not valid ({} error(s))", .0.len())]
    InvalidResult(Vec<Diagnostic>),
}

impl MergeError {
    pub fn code(&self) -> &'static str {
        match self {
            MergeError::NoDocuments => "no-documents",
            MergeError::InvalidInput { .. } => "invalid-input",
            MergeError::InvalidResult(_) => "invalid-result",
        }
    }

    pub fn diagnostics(&self) -> &[Diagnostic] {
        match self {
            MergeError::NoDocuments => &[],
            MergeError::InvalidInput { diagnostics, .. } | MergeError::InvalidResult(diagnostics) => diagnostics,
        }
    }
}

fn errors_of(diags: Vec<Diagnostic>) -> Vec<Diagnostic> {
    diags.into_iter().filter(Diagnostic::is_error).collect()
}

/// Merges complete documents in order. Each input must pass
/// `check_document` without errors.
pub fn merge(docs: &[DataDescDocument], policy: MergePolicy) -> Result<MergeReport, MergeError> {
    if docs.is_empty() {
        return Err(MergeError::NoDocuments);
    }
    let mut trees = Vec::with_capacity(docs.len());
    for (index, doc) in docs.iter().enumerate() {
        let errors = errors_of(check_document(doc));
        if !errors.is_empty() {
            return Err(MergeError::InvalidInput {
                index,
                diagnostics: errors,
            });
        }
        trees.push(document_to_value(doc));
    }
    finish(trees, policy)
}

const PLACEHOLDER_VERSION: &str = "3.0.0";

/// Merges partial documents given as YAML trees. A fragment may lack
/// `openapi`, `info` or `components`; cross-references may point into
/// other fragments. Fragments are only required to be readable; the
/// merged result must pass `check_document`. When no fragment declares
/// `openapi`, the result gets `3.0.0`.
pub fn merge_fragments(fragments: &[Value], policy: MergePolicy) -> Result<MergeReport, MergeError> {
    if fragments.is_empty() {
        return Err(MergeError::NoDocuments);
    }
    let mut trees = Vec::with_capacity(fragments.len());
    for (index, fragment) in fragments.iter().enumerate() {
        let invalid = |message: String, code: &str| MergeError::InvalidInput {
            index,
            diagnostics: vec![Diagnostic::error(code, "", message)],
        };
        let Value::Mapping(map) = fragment else {
            return Err(invalid("a fragment must be a mapping".into(), "invalid-value"));
        };
        let mut map = map.clone();
        let has_version = map.contains_key("openapi");
        let has_info = map.contains_key("info");
        if !has_version {
            map.insert("openapi".into(), PLACEHOLDER_VERSION.into());
        }
        if !has_info {
            let mut info = Mapping::new();
            info.insert("title".into(), "fragment".into());
            info.insert("version".into(), "0".into());
            map.insert("info".into(), Value::Mapping(info));
        }
        let (doc, diags) = read_document(&Value::Mapping(map)).map_err(|e| invalid(e.to_string(), e.code()))?;
        let errors = errors_of(diags);
        if !errors.is_empty() {
            return Err(MergeError::InvalidInput {
                index,
                diagnostics: errors,
            });
        }
        let Value::Mapping(mut canonical) = document_to_value(&doc) else {
            unreachable!()
        };
        if !has_version {
            canonical.remove("openapi");
        }
        if !has_info {
            canonical.remove("info");
        }
        if doc.components.is_empty() && doc.component_extensions.is_empty() {
            canonical.remove("components");
        }
        trees.push(Value::Mapping(canonical));
    }
    finish(trees, policy)
}

fn finish(trees: Vec<Value>, policy: MergePolicy) -> Result<MergeReport, MergeError> {
    let mut m = Merger {
        policy,
        conflicts: Vec::new(),
    };
    let mut iter = trees.into_iter();
    let mut acc = iter.next().unwrap_or(Value::Null);
    for next in iter {
        acc = m.value(acc, next, &NodePath::root());
    }
    if let Value::Mapping(map) = &mut acc {
        if !map.contains_key("openapi") {
            map.insert("openapi".into(), PLACEHOLDER_VERSION.into());
        }
    }
    let mut conflicts = m.conflicts;
    normalize(&mut conflicts);
    if policy == MergePolicy::Error && !conflicts.is_empty() {
        return Ok(MergeReport {
            merged: None,
            conflicts,
            diagnostics: Vec::new(),
        });
    }
    let (doc, mut diagnostics) = read_document(&acc)
        .map_err(|e| MergeError::InvalidResult(vec![Diagnostic::error(e.code(), "", e.to_string())]))?;
    diagnostics.extend(check_document(&doc));
    if has_errors(&diagnostics) {
        return Err(MergeError::InvalidResult(errors_of(diagnostics)));
    }
    diagnostics.extend(lint_document(&doc));
    normalize(&mut diagnostics);
    Ok(MergeReport {
        merged: Some(doc),
        conflicts,
        diagnostics,
    })
}

struct Merger {
    policy: MergePolicy,
    conflicts: Vec<Diagnostic>,
}

fn key_text(k: &Value) -> String {
    match k {
        Value::String(s) => s.clone(),
        other => yaml::to_string(other).trim_end().to_owned(),
    }
}

fn show(v: &Value) -> String {
    match v {
        Value::Mapping(_) => "a mapping".into(),
        Value::Sequence(_) => "a list".into(),
        other => format!("`{}`", yaml::to_string(other).trim_end()),
    }
}

/// Equality with numbers compared by value.
fn same(a: &Value, b: &Value) -> bool {
    match (a, b) {
        (Value::Number(_), Value::Number(_)) => scalar_of(a) == scalar_of(b),
        (Value::Sequence(x), Value::Sequence(y)) => x.len() == y.len() && x.iter().zip(y).all(|(p, q)| same(p, q)),
        (Value::Mapping(x), Value::Mapping(y)) => {
            x.len() == y.len() && x.iter().all(|(k, v)| y.get(k).is_some_and(|w| same(v, w)))
        }
        _ => a == b,
    }
}

impl Merger {
    fn conflict(&mut self, path: &NodePath, first: &Value, second: &Value) {
        let severity = match self.policy {
            MergePolicy::Error => Severity::Error,
            _ => Severity::Warning,
        };
        let resolution = match self.policy {
            MergePolicy::Error => "",
            MergePolicy::PreferFirst => "; the first is kept",
            MergePolicy::PreferLast => "; the last is kept",
        };
        self.conflicts.push(Diagnostic::new(
            severity,
            "merge-conflict",
            path,
            format!("{} conflicts with {}{resolution}", show(first), show(second)),
        ));
    }

    fn pick(&self, a: Value, b: Value) -> Value {
        match self.policy {
            MergePolicy::PreferLast => b,
            _ => a,
        }
    }

    fn value(&mut self, a: Value, b: Value, path: &NodePath) -> Value {
        match (a, b) {
            (Value::Null, b) => b,
            (a, Value::Null) => a,
            (Value::Mapping(a), Value::Mapping(b)) => Value::Mapping(self.mapping(a, b, path)),
            (Value::Sequence(mut a), Value::Sequence(b)) => {
                for item in b {
                    if !a.iter().any(|x| same(x, &item)) {
                        a.push(item);
                    }
                }
                Value::Sequence(a)
            }
            (a, b) if same(&a, &b) => a,
            (a, b) => {
                self.conflict(path, &a, &b);
                self.pick(a, b)
            }
        }
    }

    fn mapping(&mut self, mut a: Mapping, mut b: Mapping, path: &NodePath) -> Mapping {
        let a_ref = a.contains_key("$ref");
        let b_ref = b.contains_key("$ref");
        let a_type = a.contains_key("type");
        let b_type = b.contains_key("type");
        if (a_ref && !a_type && b_type && !b_ref) || (a_type && !a_ref && b_ref && !b_type) {
            let first = a.get("$ref").or_else(|| a.get("type")).cloned().unwrap_or(Value::Null);
            let second = b.get("$ref").or_else(|| b.get("type")).cloned().unwrap_or(Value::Null);
            self.conflict(&path.child("type"), &first, &second);
            let drop_from_a = self.policy == MergePolicy::PreferLast;
            let loser = if drop_from_a { &mut a } else { &mut b };
            loser.remove("$ref");
            loser.remove("type");
        }
        for (k, v) in b {
            let merged = match a.remove(&k) {
                Some(existing) => self.value(existing, v, &path.child(&key_text(&k))),
                None => v,
            };
            a.insert(k, merged);
        }
        a
    }
}
