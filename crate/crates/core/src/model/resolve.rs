use std::collections::HashSet;

use thiserror::Error;

use super::{ClassDescription, DataDescDocument, ReferencePath, VariableDescription};
use crate::diagnostic::{Diagnostic, NodePath};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolveError {
    #[error("malformed reference `{0}`: expected `#/components/schemas/<Name>`")]
    Malformed(String),
    #[error("unresolved reference `{0}`: no such class")]
    Unresolved(String),
}

impl ResolveError {
    pub fn code(&self) -> &'static str {
        match self {
            ResolveError::Malformed(_) => "malformed-reference",
            ResolveError::Unresolved(_) => "unresolved-reference",
        }
    }
}

/// Looks up the class a reference points at, by exact name.
pub fn resolve<'d>(doc: &'d DataDescDocument, reference: &ReferencePath) -> Result<&'d ClassDescription, ResolveError> {
    let name = reference
        .target_name()
        .ok_or_else(|| ResolveError::Malformed(reference.as_str().to_owned()))?;
    doc.components
        .get(&name)
        .ok_or_else(|| ResolveError::Unresolved(reference.as_str().to_owned()))
}

/// Result of expanding the data structure reachable from one class.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReferenceWalk {
    /// Classes reached, in first-visit order, starting with the root.
    pub visited: Vec<String>,
    /// `reference-cycle` warnings and unresolved targets met on the way.
    pub diagnostics: Vec<Diagnostic>,
}

/// Depth-first expansion of class references through properties.
///
/// A reference back to a class that is still being expanded is reported as
/// a `reference-cycle` warning and not followed. Functions are not walked:
/// a method returning its own class is not a structural cycle.
pub fn walk_references(doc: &DataDescDocument, root: &str) -> ReferenceWalk {
    let mut walk = ReferenceWalk::default();
    let mut seen = HashSet::new();
    let mut stack = Vec::new();
    if doc.components.contains_key(root) {
        visit_class(doc, root, &mut stack, &mut seen, &mut walk);
    } else {
        walk.diagnostics.push(Diagnostic::error(
            "unresolved-reference",
            "",
            format!("no class named `{root}`"),
        ));
    }
    walk
}

fn class_path(name: &str) -> NodePath {
    NodePath::root().child("components").child("schemas").child(name)
}

fn visit_class(
    doc: &DataDescDocument,
    name: &str,
    stack: &mut Vec<String>,
    seen: &mut HashSet<String>,
    walk: &mut ReferenceWalk,
) {
    let Some(class) = doc.components.get(name) else {
        return;
    };
    seen.insert(name.to_owned());
    walk.visited.push(name.to_owned());
    stack.push(name.to_owned());
    let base = class_path(name).child("properties");
    for (pname, var) in &class.properties {
        visit_variable(doc, var, &base.child(pname), stack, seen, walk);
    }
    stack.pop();
}

fn visit_variable(
    doc: &DataDescDocument,
    var: &VariableDescription,
    path: &NodePath,
    stack: &mut Vec<String>,
    seen: &mut HashSet<String>,
    walk: &mut ReferenceWalk,
) {
    if let Some(reference) = var.class_reference() {
        match resolve(doc, reference) {
            Ok(target) => {
                if stack.iter().any(|s| s == &target.name) {
                    walk.diagnostics.push(Diagnostic::warning(
                        "reference-cycle",
                        path,
                        format!(
                            "reference to `{}` closes a cycle ({} -> {})",
                            target.name,
                            stack.join(" -> "),
                            target.name
                        ),
                    ));
                } else if !seen.contains(&target.name) {
                    let target = target.name.clone();
                    visit_class(doc, &target, stack, seen, walk);
                }
            }
            Err(e) => walk.diagnostics.push(Diagnostic::error(e.code(), path, e.to_string())),
        }
    }
    for (pname, inner) in &var.properties {
        visit_variable(doc, inner, &path.child("properties").child(pname), stack, seen, walk);
    }
}
