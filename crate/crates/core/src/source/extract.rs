//! Declaration trees to a DataDesc document.

use std::collections::{HashMap, HashSet};

use serde_yaml::{Mapping, Value};
use thiserror::Error;

use super::hints::map_type_hint;
use super::parser::{AnnotatedInterfaceTree, ClassNode, Decorator, Expr, FunctionNode, Literal, ParamKind};
use crate::diagnostic::{normalize, Diagnostic, NodePath};
use crate::exchange::keys::{annotation_key, canonical_key, KeyContext};
use crate::exchange::{read_variable, variable_value};
use crate::model::{
    check_document, lint_document, ClassDescription, DataDescDocument, FunctionDescription, Scalar, SoftwareInfo,
    VariableDescription,
};

/// Decorator that carries DataDesc metadata, optionally module-qualified.
pub const DECORATOR_NAME: &str = "datadesc";

const REQUIRED_KEY: &str = "Required";
const RETURN_TARGET: &str = "return";

#[derive(Debug, Clone, PartialEq)]
pub struct Extraction {
    pub document: DataDescDocument,
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("class `{name}` is declared in {first} and again in {second}")]
    DuplicateClass {
        name: String,
        first: String,
        second: String,
    },
}

impl ExtractError {
    pub fn code(&self) -> &'static str {
        "duplicate-class"
    }
}

struct Member {
    var: VariableDescription,
    required: bool,
    line: usize,
}

struct Ctx<'a> {
    file: &'a str,
    declared: &'a HashSet<String>,
    diags: Vec<Diagnostic>,
}

fn first_line(doc: &Option<String>) -> Option<String> {
    doc.as_deref()?
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty())
        .map(str::to_owned)
}

fn is_marker(d: &Decorator) -> bool {
    d.name == DECORATOR_NAME || d.name.ends_with(&format!(".{DECORATOR_NAME}"))
}

fn literal_value(l: &Literal) -> Value {
    match l {
        Literal::Int(i) => Value::from(*i),
        Literal::Float(f) => Value::from(*f),
        Literal::Str(s) => Value::from(s.clone()),
        Literal::Bool(b) => Value::from(*b),
        Literal::None => Value::Null,
        Literal::List(items) => Value::Sequence(items.iter().map(literal_value).collect()),
        Literal::Dict(entries) => Value::Mapping(
            entries
                .iter()
                .map(|(k, v)| (literal_value(k), literal_value(v)))
                .collect(),
        ),
    }
}

impl Ctx<'_> {
    fn at(&self, line: usize) -> String {
        format!("{}:{line}", self.file)
    }

    fn warn(&mut self, code: &str, line: usize, message: impl Into<String>) {
        let at = self.at(line);
        self.diags.push(Diagnostic::warning(code, at, message));
    }

    fn note(&mut self, code: &str, line: usize, message: impl Into<String>) {
        let at = self.at(line);
        self.diags.push(Diagnostic::info(code, at, message));
    }

    fn member(&mut self, name: &str, hint: Option<&str>, default: Option<&Expr>, line: usize) -> Member {
        let mut var = VariableDescription::new(name);
        if let Some(h) = hint {
            let mapped = map_type_hint(h, self.declared);
            if !mapped.recognised {
                self.warn(
                    "unknown-type-hint",
                    line,
                    format!("hint `{h}` of `{name}` is kept as an opaque type"),
                );
            }
            var.data_type = Some(mapped.data_type);
        }
        let required = match default {
            None => true,
            Some(Expr::Literal(Literal::None)) => false,
            Some(Expr::Literal(Literal::Int(i))) => {
                var.default_value = Some(Scalar::Integer(*i));
                false
            }
            Some(Expr::Literal(Literal::Float(f))) => {
                var.default_value = Some(Scalar::Real(*f));
                false
            }
            Some(Expr::Literal(Literal::Str(s))) => {
                var.default_value = Some(Scalar::Text(s.clone()));
                false
            }
            Some(Expr::Literal(Literal::Bool(b))) => {
                var.default_value = Some(Scalar::Boolean(*b));
                false
            }
            Some(Expr::Literal(Literal::List(_) | Literal::Dict(_))) => {
                self.warn(
                    "non-scalar-default",
                    line,
                    format!("default of `{name}` is a collection and is not recorded"),
                );
                false
            }
            Some(Expr::Dynamic(text)) => {
                self.warn(
                    "dynamic-default",
                    line,
                    format!("default `{text}` of `{name}` needs evaluation and is not recorded"),
                );
                false
            }
        };
        Member { var, required, line }
    }

    /// Overlays decorator keywords onto a member.
    fn annotate(&mut self, m: &mut Member, kwargs: &[(String, Expr)], line: usize) {
        let mut explicit_required = None;
        let mut base = match variable_value(&m.var) {
            Value::Mapping(map) => map,
            _ => Mapping::new(),
        };
        let name = m.var.name.clone();
        for (key, expr) in kwargs {
            if key.eq_ignore_ascii_case(REQUIRED_KEY) {
                match expr {
                    Expr::Literal(Literal::Bool(b)) => explicit_required = Some(*b),
                    _ => self.warn(
                        "invalid-annotation",
                        line,
                        format!("`{key}` of `{name}` must be True or False"),
                    ),
                }
                continue;
            }
            let Some(canonical) = annotation_key(key) else {
                self.warn(
                    "unknown-annotation-key",
                    line,
                    format!("`{key}` is not a DataDesc attribute; ignored"),
                );
                continue;
            };
            let value = match expr {
                Expr::Literal(l) => literal_value(l),
                Expr::Dynamic(text) => {
                    self.warn(
                        "dynamic-annotation",
                        line,
                        format!("`{key}={text}` needs evaluation; ignored"),
                    );
                    continue;
                }
            };
            let displaced = match canonical {
                "type" => base.remove("$ref"),
                "$ref" => base.remove("type"),
                _ => None,
            };
            let previous = base.get(canonical).cloned().or(displaced);
            if previous.is_some_and(|p| p != value) {
                self.warn(
                    "decorator-override",
                    line,
                    format!("`{key}` on `{name}` replaces the value taken from the code"),
                );
            }
            base.insert(canonical.into(), value);
        }
        let (var, diags) = read_variable(&name, &Value::Mapping(base), &NodePath::root());
        for d in diags {
            let message = if d.path.is_empty() {
                d.message
            } else {
                format!("{}: {}", d.path, d.message)
            };
            self.diags
                .push(Diagnostic::new(d.severity, d.code, self.at(line), message));
        }
        m.var = var;
        m.required = explicit_required.unwrap_or(m.required && m.var.default_value.is_none());
    }

    /// Applies an untargeted decorator to a class or function.
    fn owner_keys(&mut self, kwargs: &[(String, Expr)], context: KeyContext, line: usize) -> OwnerKeys {
        let mut out = OwnerKeys::default();
        for (key, expr) in kwargs {
            let canonical = canonical_key(context, key).or_else(|| canonical_key(context, &format!("x-{key}")));
            let value = match expr {
                Expr::Literal(l) => l,
                Expr::Dynamic(text) => {
                    self.warn(
                        "dynamic-annotation",
                        line,
                        format!("`{key}={text}` needs evaluation; ignored"),
                    );
                    continue;
                }
            };
            match (canonical, value) {
                (Some("description"), Literal::Str(s)) => out.description = Some(s.clone()),
                (Some("x-URI"), Literal::Str(s)) => out.uri = Some(s.clone()),
                (Some("x-IsPartOfInterface"), Literal::Bool(b)) => out.part_of_interface = Some(*b),
                (Some(_), _) if matches!(canonical, Some("description" | "x-URI" | "x-IsPartOfInterface")) => self
                    .warn(
                        "invalid-annotation",
                        line,
                        format!("`{key}` has a value of the wrong kind; ignored"),
                    ),
                _ => self.warn(
                    "unknown-annotation-key",
                    line,
                    format!("`{key}` cannot annotate a class or function; ignored"),
                ),
            }
        }
        out
    }

    fn function(&mut self, f: &FunctionNode) -> FunctionDescription {
        let mut out = FunctionDescription::new(&f.name);
        out.description = first_line(&f.docstring);
        out.is_part_of_interface = !f.name.starts_with('_');
        let mut params: Vec<Member> = Vec::new();
        for (i, p) in f.params.iter().enumerate() {
            if i == 0 && matches!(p.name.as_str(), "self" | "cls") {
                continue;
            }
            if p.kind != ParamKind::Normal {
                self.note(
                    "variadic-parameter",
                    p.line,
                    format!("`{}` collects arbitrary arguments; not described", p.name),
                );
                continue;
            }
            params.push(self.member(&p.name, p.hint.as_deref(), p.default.as_ref(), p.line));
        }
        let mut ret = match f.return_hint.as_deref() {
            None | Some("None") => None,
            Some(h) => Some(self.member(RETURN_TARGET, Some(h), Some(&Expr::Literal(Literal::None)), f.line)),
        };
        for d in f.decorators.iter().filter(|d| is_marker(d)) {
            match target(d) {
                None => {
                    let keys = self.owner_keys(&d.kwargs, KeyContext::Function, d.line);
                    keys.apply(&mut out.description, &mut out.is_part_of_interface, None);
                }
                Some(t) if t == RETURN_TARGET && !params.iter().any(|p| p.var.name == t) => {
                    let m = ret.get_or_insert_with(|| Member {
                        var: VariableDescription::new(RETURN_TARGET),
                        required: false,
                        line: d.line,
                    });
                    self.annotate(m, &d.kwargs, d.line);
                }
                Some(t) => match params.iter_mut().find(|p| p.var.name == t) {
                    Some(m) => self.annotate(m, &d.kwargs, d.line),
                    None => self.warn(
                        "unknown-annotation-target",
                        d.line,
                        format!("`{}` has no parameter `{t}`", f.name),
                    ),
                },
            }
            self.target_arity(d);
        }
        for m in params {
            if m.required {
                out.required.insert(m.var.name.clone());
            }
            out.parameters.insert(m.var.name.clone(), m.var);
        }
        out.return_description = ret.map(|m| Box::new(m.var));
        out
    }

    fn target_arity(&mut self, d: &Decorator) {
        if d.args.len() > 1 {
            self.warn(
                "invalid-annotation",
                d.line,
                "a DataDesc decorator names at most one target; the rest is ignored",
            );
        } else if let Some(Expr::Dynamic(_) | Expr::Literal(_)) = d.args.first() {
            if target(d).is_none() {
                self.warn(
                    "invalid-annotation",
                    d.line,
                    "the decorator target must be a string literal",
                );
            }
        }
    }

    fn class(&mut self, c: &ClassNode) -> ClassDescription {
        let mut out = ClassDescription::new(&c.qualified_name);
        out.description = first_line(&c.docstring);
        out.is_part_of_interface = !c.name.starts_with('_');
        let mut props: Vec<Member> = Vec::new();
        let mut put = |ctx: &mut Self, m: Member| {
            if let Some(pos) = props.iter().position(|p| p.var.name == m.var.name) {
                ctx.warn(
                    "duplicate-member",
                    m.line,
                    format!("`{}` is declared again; the later declaration wins", m.var.name),
                );
                props.remove(pos);
            }
            props.push(m);
        };
        for a in &c.attributes {
            let m = self.member(&a.name, a.hint.as_deref(), a.default.as_ref(), a.line);
            put(self, m);
        }
        let mut owner_decorators: Vec<&Decorator> = c.decorators.iter().filter(|d| is_marker(d)).collect();
        for f in &c.methods {
            if f.name == "__init__" {
                for (i, p) in f.params.iter().enumerate() {
                    if i == 0 && matches!(p.name.as_str(), "self" | "cls") {
                        continue;
                    }
                    if p.kind != ParamKind::Normal {
                        self.note(
                            "variadic-parameter",
                            p.line,
                            format!("`{}` collects arbitrary arguments; not described", p.name),
                        );
                        continue;
                    }
                    let m = self.member(&p.name, p.hint.as_deref(), p.default.as_ref(), p.line);
                    put(self, m);
                }
                owner_decorators.extend(f.decorators.iter().filter(|d| is_marker(d)));
            } else if f.name.starts_with("__") && f.name.ends_with("__") {
                continue;
            } else {
                let func = self.function(f);
                out.functions.insert(f.name.clone(), func);
            }
        }
        for d in owner_decorators {
            match target(d) {
                None => {
                    let keys = self.owner_keys(&d.kwargs, KeyContext::Class, d.line);
                    keys.apply(&mut out.description, &mut out.is_part_of_interface, Some(&mut out.uri));
                }
                Some(t) => match props.iter_mut().find(|p| p.var.name == t) {
                    Some(m) => self.annotate(m, &d.kwargs, d.line),
                    None => self.warn(
                        "unknown-annotation-target",
                        d.line,
                        format!("`{}` has no attribute `{t}`", c.qualified_name),
                    ),
                },
            }
            self.target_arity(d);
        }
        for m in props {
            if m.required {
                out.required.insert(m.var.name.clone());
            }
            out.properties.insert(m.var.name.clone(), m.var);
        }
        out
    }
}

#[derive(Default)]
struct OwnerKeys {
    description: Option<String>,
    uri: Option<String>,
    part_of_interface: Option<bool>,
}

impl OwnerKeys {
    fn apply(self, description: &mut Option<String>, part: &mut bool, uri: Option<&mut Option<String>>) {
        if self.description.is_some() {
            *description = self.description;
        }
        if let Some(p) = self.part_of_interface {
            *part = p;
        }
        if let (Some(slot), Some(u)) = (uri, self.uri) {
            *slot = Some(u);
        }
    }
}

fn target(d: &Decorator) -> Option<&str> {
    match d.args.first() {
        Some(Expr::Literal(Literal::Str(s))) => Some(s),
        _ => None,
    }
}

fn collect<'t>(classes: &'t [ClassNode], out: &mut Vec<&'t ClassNode>) {
    for c in classes {
        out.push(c);
        collect(&c.classes, out);
    }
}

/// Builds a document from parsed units. Classes become component schemas
/// (nested ones under their dotted name), `__init__` parameters and
/// annotated attributes become properties, other public and private
/// methods become functions, and module-level functions are collected in
/// a class named after the file.
pub fn extract_interface(trees: &[AnnotatedInterfaceTree], info: SoftwareInfo) -> Result<Extraction, ExtractError> {
    let mut diagnostics = Vec::new();
    let mut chosen: Vec<(&AnnotatedInterfaceTree, &ClassNode)> = Vec::new();
    let mut seen: HashMap<String, (String, usize)> = HashMap::new();
    for tree in trees {
        let mut nodes = Vec::new();
        collect(&tree.classes, &mut nodes);
        for c in nodes {
            let here = format!("{}:{}", tree.file, c.line);
            if let Some((first, idx)) = seen.get(&c.qualified_name) {
                if chosen[*idx].0.file != tree.file {
                    return Err(ExtractError::DuplicateClass {
                        name: c.qualified_name.clone(),
                        first: first.clone(),
                        second: here,
                    });
                }
                diagnostics.push(Diagnostic::warning(
                    "duplicate-member",
                    here.clone(),
                    format!(
                        "class `{}` is defined again; the later definition wins",
                        c.qualified_name
                    ),
                ));
                let idx = *idx;
                chosen[idx] = (tree, c);
                seen.insert(c.qualified_name.clone(), (here, idx));
            } else {
                seen.insert(c.qualified_name.clone(), (here, chosen.len()));
                chosen.push((tree, c));
            }
        }
    }
    for tree in trees.iter().filter(|t| !t.functions.is_empty()) {
        if let Some((first, _)) = seen.get(&tree.module) {
            return Err(ExtractError::DuplicateClass {
                name: tree.module.clone(),
                first: first.clone(),
                second: format!("{} (module functions)", tree.file),
            });
        }
        seen.insert(
            tree.module.clone(),
            (format!("{} (module functions)", tree.file), usize::MAX),
        );
    }
    let declared: HashSet<String> = seen.keys().cloned().collect();

    let mut doc = DataDescDocument::new(info);
    for (tree, node) in &chosen {
        let mut ctx = Ctx {
            file: &tree.file,
            declared: &declared,
            diags: Vec::new(),
        };
        let class = ctx.class(node);
        diagnostics.append(&mut ctx.diags);
        doc.add_class(class);
    }
    for tree in trees.iter().filter(|t| !t.functions.is_empty()) {
        let mut ctx = Ctx {
            file: &tree.file,
            declared: &declared,
            diags: Vec::new(),
        };
        let mut class = ClassDescription::new(&tree.module);
        for f in &tree.functions {
            if class.functions.contains_key(&f.name) {
                ctx.warn(
                    "duplicate-member",
                    f.line,
                    format!("`{}` is defined again; the later definition wins", f.name),
                );
            }
            let func = ctx.function(f);
            class.functions.shift_remove(&f.name);
            class.functions.insert(f.name.clone(), func);
        }
        diagnostics.append(&mut ctx.diags);
        doc.add_class(class);
    }
    diagnostics.extend(check_document(&doc));
    diagnostics.extend(lint_document(&doc));
    normalize(&mut diagnostics);
    Ok(Extraction {
        document: doc,
        diagnostics,
    })
}
