//! Checking concrete data against variable and class descriptions.
//!
//! Every applicable check runs, so a value that breaks `k` independent
//! constraints yields `k` error diagnostics. Regular expressions always
//! match the whole string, whether or not the pattern carries `^`/`$`.
//! Bounds are compared exactly; there is no epsilon.
//!
//! Diagnostic paths here address locations in the data: `a/b` for nested
//! record fields and `a/[London,sales]` for a dimensioned entry.

pub(crate) mod constraints;
mod data;
pub mod file_format;
pub mod regex_dialect;

use std::collections::BTreeMap;

use indexmap::{IndexMap, IndexSet};
use thiserror::Error;

use crate::diagnostic::{has_errors, normalize, Diagnostic, NodePath};
use crate::model::{
    resolve, ClassDescription, DataDescDocument, DataType, DimensionDescription, FunctionDescription,
    VariableDescription,
};
use constraints::{index_violations, ConstraintSet};
use data::format_index;

pub use data::{DataError, DataValue, Dimensioned};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationResult {
    pub valid: bool,
    pub diagnostics: Vec<Diagnostic>,
}

impl ValidationResult {
    fn from_diagnostics(mut diagnostics: Vec<Diagnostic>) -> Self {
        normalize(&mut diagnostics);
        ValidationResult {
            valid: !has_errors(&diagnostics),
            diagnostics,
        }
    }

    pub fn error_codes(&self) -> Vec<&str> {
        self.diagnostics
            .iter()
            .filter(|d| d.is_error())
            .map(|d| d.code.as_str())
            .collect()
    }
}

/// Anything whose members can be checked as a record: classes, functions
/// (their parameters) and grouping variables.
pub trait RecordSchema {
    fn members(&self) -> &IndexMap<String, VariableDescription>;
    fn required_members(&self) -> &IndexSet<String>;
}

impl RecordSchema for ClassDescription {
    fn members(&self) -> &IndexMap<String, VariableDescription> {
        &self.properties
    }
    fn required_members(&self) -> &IndexSet<String> {
        &self.required
    }
}

impl RecordSchema for FunctionDescription {
    fn members(&self) -> &IndexMap<String, VariableDescription> {
        &self.parameters
    }
    fn required_members(&self) -> &IndexSet<String> {
        &self.required
    }
}

impl RecordSchema for VariableDescription {
    fn members(&self) -> &IndexMap<String, VariableDescription> {
        &self.properties
    }
    fn required_members(&self) -> &IndexSet<String> {
        &self.required
    }
}

/// Validation settings. With a document attached, class-reference types
/// are expanded and nested records are checked against the target class.
#[derive(Debug, Clone, Copy, Default)]
pub struct Validator<'d> {
    doc: Option<&'d DataDescDocument>,
    apply_defaults: bool,
}

impl<'d> Validator<'d> {
    pub fn new() -> Self {
        Validator::default()
    }

    pub fn with_document(doc: &'d DataDescDocument) -> Self {
        Validator {
            doc: Some(doc),
            apply_defaults: false,
        }
    }

    /// Treat absent properties that have a default as present.
    pub fn applying_defaults(mut self, yes: bool) -> Self {
        self.apply_defaults = yes;
        self
    }

    pub fn validate_value(&self, value: &DataValue, desc: &VariableDescription) -> ValidationResult {
        let mut out = Vec::new();
        self.value_into(value, desc, &NodePath::root(), &mut out);
        ValidationResult::from_diagnostics(out)
    }

    pub fn validate_record(&self, record: &DataValue, schema: &dyn RecordSchema) -> ValidationResult {
        let mut out = Vec::new();
        self.record_into(record, schema, &NodePath::root(), &mut out);
        ValidationResult::from_diagnostics(out)
    }

    fn value_into(&self, value: &DataValue, desc: &VariableDescription, path: &NodePath, out: &mut Vec<Diagnostic>) {
        let ty = desc.data_type.as_ref();
        match value {
            DataValue::Scalar(s) => {
                let rules = ConstraintSet::of(desc);
                out.extend(
                    rules
                        .scalar_violations(s, true)
                        .into_iter()
                        .map(|v| v.at(path.as_str())),
                );
            }
            DataValue::Record(_) => {
                if ty.is_some_and(|t| !t.is_grouping() && !matches!(t, DataType::Opaque(_))) {
                    out.push(type_error(path, desc, value));
                    return;
                }
                if let (Some(DataType::ClassReference(r)), Some(doc)) = (ty, self.doc) {
                    match resolve(doc, r) {
                        Ok(class) => self.record_into(value, class, path, out),
                        Err(e) => out.push(Diagnostic::error(e.code(), path, e.to_string())),
                    }
                } else if !desc.properties.is_empty() {
                    self.record_into(value, desc, path, out);
                }
            }
            DataValue::Dimensioned(d) => {
                if ty.is_some_and(|t| t.is_grouping() || matches!(t, DataType::File)) {
                    out.push(type_error(path, desc, value));
                    return;
                }
                if !desc.dimensions.is_empty() {
                    dimensions_into(d, &desc.dimensions, path, out);
                }
                // cells are checked against the description minus its axes
                let mut cell = desc.clone();
                cell.dimensions.clear();
                if matches!(cell.data_type, Some(DataType::Array)) {
                    cell.data_type = None;
                }
                for (index, v) in d.entries() {
                    let cpath = path.child(&format!("[{}]", format_index(index)));
                    self.value_into(v, &cell, &cpath, out);
                }
            }
        }
    }

    fn record_into(&self, record: &DataValue, schema: &dyn RecordSchema, path: &NodePath, out: &mut Vec<Diagnostic>) {
        let Some(fields) = record.as_record() else {
            out.push(Diagnostic::error(
                "type",
                path,
                format!("expected a record, got {} `{record}`", record.kind_name()),
            ));
            return;
        };
        let members = schema.members();
        for name in schema.required_members() {
            if fields.contains_key(name) {
                continue;
            }
            let defaulted = self.apply_defaults && members.get(name).is_some_and(|m| m.default_value.is_some());
            if !defaulted {
                out.push(Diagnostic::error(
                    "missing-required",
                    path.child(name),
                    format!("required property `{name}` is missing"),
                ));
            }
        }
        for (name, v) in fields {
            match members.get(name) {
                Some(desc) => self.value_into(v, desc, &path.child(name), out),
                None => out.push(Diagnostic::warning(
                    "unknown-property",
                    path.child(name),
                    format!("`{name}` is not a declared property"),
                )),
            }
        }
    }
}

fn type_error(path: &NodePath, desc: &VariableDescription, value: &DataValue) -> Diagnostic {
    Diagnostic::error(
        "type",
        path,
        format!(
            "expected {}, got {}",
            desc.data_type.as_ref().map(DataType::describe).unwrap_or_default(),
            value.kind_name()
        ),
    )
}

fn dimensions_into(value: &Dimensioned, dims: &[DimensionDescription], path: &NodePath, out: &mut Vec<Diagnostic>) {
    if value.arity() != dims.len() {
        let declared: Vec<&str> = dims.iter().map(|d| d.name.as_str()).collect();
        out.push(Diagnostic::error(
            "dimension-arity",
            path,
            format!(
                "value has {} axes ({}) but {} are declared ({})",
                value.arity(),
                value.axes().join(", "),
                dims.len(),
                declared.join(", ")
            ),
        ));
        return;
    }
    for (pos, (axis, dim)) in value.axes().iter().zip(dims).enumerate() {
        // unnamed axes (plain lists) match by position
        if !axis.is_empty() && axis != &dim.name {
            out.push(Diagnostic::error(
                "dimension-axis",
                path,
                format!("axis {pos} is `{axis}` but `{}` is declared there", dim.name),
            ));
        }
    }
    for (index, _) in value.entries() {
        let cpath = path.child(&format!("[{}]", format_index(index)));
        for (component, dim) in index.iter().zip(dims) {
            out.extend(
                index_violations(component, dim)
                    .into_iter()
                    .map(|v| v.at(cpath.as_str())),
            );
        }
    }
}

pub fn validate_value(value: &DataValue, desc: &VariableDescription) -> ValidationResult {
    Validator::new().validate_value(value, desc)
}

pub fn validate_record(record: &DataValue, schema: &dyn RecordSchema) -> ValidationResult {
    Validator::new().validate_record(record, schema)
}

/// Checks index tuples only: arity, axis names and per-axis index rules.
pub fn validate_dimensions(value: &Dimensioned, dims: &[DimensionDescription]) -> ValidationResult {
    let mut out = Vec::new();
    dimensions_into(value, dims, &NodePath::root(), &mut out);
    ValidationResult::from_diagnostics(out)
}

/// Fills absent properties that declare a default, recursing into present
/// nested records. Present values are never replaced. Returns the filled
/// record and its validation against `schema`.
pub fn apply_defaults(record: &DataValue, schema: &dyn RecordSchema) -> (DataValue, ValidationResult) {
    let filled = fill_defaults(record, schema);
    let result = validate_record(&filled, schema);
    (filled, result)
}

fn fill_defaults(record: &DataValue, schema: &dyn RecordSchema) -> DataValue {
    let Some(fields) = record.as_record() else {
        return record.clone();
    };
    let mut out: BTreeMap<String, DataValue> = BTreeMap::new();
    for (name, v) in fields {
        let filled = match schema.members().get(name) {
            Some(desc) if !desc.properties.is_empty() => fill_defaults(v, desc),
            _ => v.clone(),
        };
        out.insert(name.clone(), filled);
    }
    for (name, desc) in schema.members() {
        if let (false, Some(default)) = (out.contains_key(name), &desc.default_value) {
            out.insert(name.clone(), DataValue::Scalar(default.clone()));
        }
    }
    DataValue::Record(out)
}

/// What a `Class[.function][.param]` target names.
#[derive(Debug, Clone, Copy)]
pub enum Target<'d> {
    Class(&'d ClassDescription),
    Function(&'d FunctionDescription),
    Variable(&'d VariableDescription),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TargetError {
    #[error("no class matches target `{0}`")]
    UnknownClass(String),
    #[error("class `{class}` has no property or function `{member}`")]
    UnknownMember { class: String, member: String },
    #[error("function `{function}` has no parameter `{param}`")]
    UnknownParameter { function: String, param: String },
    #[error("target `{0}` has too many segments")]
    TooDeep(String),
}

/// Resolves `Class`, `Class.property`, `Class.function` or
/// `Class.function.param`. Class names may themselves contain dots; the
/// longest matching class name wins.
pub fn resolve_target<'d>(doc: &'d DataDescDocument, target: &str) -> Result<Target<'d>, TargetError> {
    let segments: Vec<&str> = target.split('.').collect();
    for split in (1..=segments.len()).rev() {
        let class_name = segments[..split].join(".");
        let Some(class) = doc.components.get(&class_name) else {
            continue;
        };
        let rest = &segments[split..];
        return match rest {
            [] => Ok(Target::Class(class)),
            [member] => {
                if let Some(p) = class.properties.get(*member) {
                    Ok(Target::Variable(p))
                } else if let Some(f) = class.functions.get(*member) {
                    Ok(Target::Function(f))
                } else {
                    Err(TargetError::UnknownMember {
                        class: class_name,
                        member: (*member).to_owned(),
                    })
                }
            }
            [function, param] => {
                let f = class
                    .functions
                    .get(*function)
                    .ok_or_else(|| TargetError::UnknownMember {
                        class: class_name.clone(),
                        member: (*function).to_owned(),
                    })?;
                if *param == "return" {
                    if let Some(r) = &f.return_description {
                        return Ok(Target::Variable(r));
                    }
                }
                f.parameters
                    .get(*param)
                    .map(Target::Variable)
                    .ok_or_else(|| TargetError::UnknownParameter {
                        function: (*function).to_owned(),
                        param: (*param).to_owned(),
                    })
            }
            _ => Err(TargetError::TooDeep(target.to_owned())),
        };
    }
    Err(TargetError::UnknownClass(target.to_owned()))
}

/// Validates `value` against whatever `target` names.
pub fn validate_target(doc: &DataDescDocument, target: Target<'_>, value: &DataValue) -> ValidationResult {
    let v = Validator::with_document(doc);
    match target {
        Target::Class(c) => v.validate_record(value, c),
        Target::Function(f) => v.validate_record(value, f),
        Target::Variable(d) => v.validate_value(value, d),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Scalar, SoftwareInfo};

    fn nots() -> VariableDescription {
        VariableDescription::typed("numberOfTimeSteps", DataType::Integer)
            .with_minimum(0, true)
            .with_default(8760)
    }

    #[test]
    fn exclusive_minimum() {
        assert!(validate_value(&8760.into(), &nots()).valid);
        assert_eq!(validate_value(&0.into(), &nots()).error_codes(), ["exclusive-bound"]);
        assert_eq!(validate_value(&(-1).into(), &nots()).error_codes(), ["range"]);
        assert_eq!(validate_value(&1.5.into(), &nots()).error_codes(), ["type"]);
        assert_eq!(validate_value(&"x".into(), &nots()).error_codes(), ["type"]);
    }

    #[test]
    fn k_violations_give_k_errors() {
        let d = VariableDescription::typed("s", DataType::String)
            .with_regex("[a-z]+")
            .with_value_set(["abc", "def"]);
        let r = validate_value(&"XYZ".into(), &d);
        assert_eq!(r.error_codes(), ["regex", "value-set"]);
        let d = VariableDescription::new("n")
            .with_minimum(0, false)
            .with_value_set([1i64, 2]);
        assert_eq!(validate_value(&(-3).into(), &d).error_codes(), ["range", "value-set"]);
    }

    #[test]
    fn dimension_arity_and_axes() {
        let dims = vec![
            DimensionDescription::new("store").with_value_set(["Berlin", "London", "Paris"]),
            DimensionDescription::new("department").with_value_set(["production", "sales", "administration"]),
        ];
        let ok = Dimensioned::new(["store", "department"])
            .with(vec!["London".into(), "sales".into()], 15)
            .unwrap();
        assert!(validate_dimensions(&ok, &dims).valid);
        let swapped = Dimensioned::new(["department", "store"])
            .with(vec!["London".into(), "sales".into()], 15)
            .unwrap();
        let r = validate_dimensions(&swapped, &dims);
        assert!(r.error_codes().contains(&"dimension-axis"));
        let three = Dimensioned::new(["store", "department", "year"])
            .with(vec!["London".into(), "sales".into(), Scalar::Integer(2010)], 15)
            .unwrap();
        assert_eq!(validate_dimensions(&three, &dims).error_codes(), ["dimension-arity"]);
    }

    #[test]
    fn cells_are_checked_against_the_value_facet() {
        let d = VariableDescription::typed("employees", DataType::Integer)
            .with_minimum(0, false)
            .with_dimension(DimensionDescription::new("store"));
        let v = Dimensioned::new(["store"])
            .with(vec!["Berlin".into()], 4)
            .unwrap()
            .with(vec!["Paris".into()], -2)
            .unwrap();
        let r = validate_value(&v.into(), &d);
        assert_eq!(r.error_codes(), ["range"]);
        assert_eq!(r.diagnostics[0].path, "[Paris]");
    }

    #[test]
    fn records_and_defaults() {
        let mut class = ClassDescription::new("EnergySystemModel").with_property(nots());
        class.required.insert("numberOfTimeSteps".into());
        let empty = DataValue::record(Vec::<(String, DataValue)>::new());
        assert_eq!(validate_record(&empty, &class).error_codes(), ["missing-required"]);
        assert!(
            Validator::new()
                .applying_defaults(true)
                .validate_record(&empty, &class)
                .valid
        );
        let (filled, result) = apply_defaults(&empty, &class);
        assert!(result.valid);
        assert_eq!(filled.as_record().unwrap()["numberOfTimeSteps"], DataValue::from(8760));
        let given = DataValue::record([("numberOfTimeSteps", DataValue::from(24))]);
        assert_eq!(apply_defaults(&given, &class).0, given);
    }

    #[test]
    fn class_references_expand_with_a_document() {
        let mut doc = DataDescDocument::new(SoftwareInfo::new("t", "1"));
        let mut inner =
            ClassDescription::new("Inner").with_property(VariableDescription::typed("n", DataType::Integer));
        inner.required.insert("n".into());
        doc.add_class(inner);
        let outer = ClassDescription::new("Outer").with_property(VariableDescription::typed(
            "inner",
            DataType::ClassReference(crate::model::ReferencePath::to_class("Inner")),
        ));
        doc.add_class(outer);
        let value = DataValue::record([("inner", DataValue::record([("n", DataValue::from("x"))]))]);
        let r = validate_target(&doc, resolve_target(&doc, "Outer").unwrap(), &value);
        assert_eq!(r.error_codes(), ["type"]);
        assert_eq!(r.diagnostics[0].path, "inner/n");
    }

    #[test]
    fn targets() {
        let mut doc = DataDescDocument::new(SoftwareInfo::new("t", "1"));
        let mut f = FunctionDescription::new("run");
        f.parameters.insert("x".into(), VariableDescription::new("x"));
        let mut c = ClassDescription::new("pkg.Model").with_property(VariableDescription::new("p"));
        c.functions.insert("run".into(), f);
        doc.add_class(c);
        assert!(matches!(resolve_target(&doc, "pkg.Model"), Ok(Target::Class(_))));
        assert!(matches!(resolve_target(&doc, "pkg.Model.p"), Ok(Target::Variable(_))));
        assert!(matches!(resolve_target(&doc, "pkg.Model.run"), Ok(Target::Function(_))));
        assert!(matches!(
            resolve_target(&doc, "pkg.Model.run.x"),
            Ok(Target::Variable(_))
        ));
        assert!(matches!(
            resolve_target(&doc, "pkg.Model.run.y"),
            Err(TargetError::UnknownParameter { .. })
        ));
        assert!(matches!(
            resolve_target(&doc, "Nope"),
            Err(TargetError::UnknownClass(_))
        ));
    }
}
