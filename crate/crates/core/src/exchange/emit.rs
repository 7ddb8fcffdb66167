//! Writing the model as canonical DataDesc YAML.
//!
//! Classes, members, functions, required lists and extension keys are
//! sorted by name; dimensions keep their declared order and raw subtrees
//! are written as they were read. Attributes at their default value are
//! left out.

use indexmap::{IndexMap, IndexSet};
use serde_yaml::{Mapping, Value};
use thiserror::Error;

use super::yaml;
use crate::diagnostic::Diagnostic;
use crate::model::{
    check_document, ClassDescription, DataDescDocument, DataType, DimensionDescription, Extensions, FileStructureKind,
    FunctionDescription, Person, Scalar, SoftwareInfo, UnitSpec, VariableDescription,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EmitError {
    #[error("document violates {} invariant(s); first: {}", .0.len(), .0.first().map(ToString::to_string).unwrap_or_default())]
    InvalidDocument(Vec<Diagnostic>),
}

/// Canonical YAML text of a valid document.
pub fn emit_document(doc: &DataDescDocument) -> Result<String, EmitError> {
    let errors: Vec<Diagnostic> = check_document(doc).into_iter().filter(Diagnostic::is_error).collect();
    if !errors.is_empty() {
        return Err(EmitError::InvalidDocument(errors));
    }
    Ok(yaml::to_string(&document_to_value(doc)))
}

/// The `info:` wrapper file exchanged with form-based editors.
pub fn emit_info_section(info: &SoftwareInfo) -> String {
    let mut root = Mapping::new();
    root.insert("info".into(), info_to_value(info));
    yaml::to_string(&Value::Mapping(root))
}

/// The canonical YAML tree of a document, with no validity check.
pub fn document_to_value(doc: &DataDescDocument) -> Value {
    let mut root = Mapping::new();
    root.insert("openapi".into(), doc.openapi_version.clone().into());
    root.insert("info".into(), info_to_value(&doc.info));

    let mut components = Mapping::new();
    if !doc.components.is_empty() {
        let mut schemas = Mapping::new();
        for (name, class) in sorted(&doc.components) {
            schemas.insert(name.clone().into(), class_value(class));
        }
        components.insert("schemas".into(), Value::Mapping(schemas));
    }
    put_extensions(&mut components, &doc.component_extensions);
    root.insert("components".into(), Value::Mapping(components));
    put_extensions(&mut root, &doc.extensions);
    Value::Mapping(root)
}

fn sorted<V>(map: &IndexMap<String, V>) -> Vec<(&String, &V)> {
    let mut entries: Vec<_> = map.iter().collect();
    entries.sort_by(|a, b| a.0.cmp(b.0));
    entries
}

fn put_extensions(map: &mut Mapping, ext: &Extensions) {
    for (k, v) in sorted(ext) {
        map.insert(k.clone().into(), v.clone());
    }
}

fn put_text(map: &mut Mapping, key: &str, value: &Option<String>) {
    if let Some(v) = value {
        map.insert(key.into(), v.clone().into());
    }
}

fn put_scalar(map: &mut Mapping, key: &str, value: &Option<Scalar>) {
    if let Some(v) = value {
        map.insert(key.into(), scalar_value(v));
    }
}

pub(crate) fn scalar_value(s: &Scalar) -> Value {
    match s {
        Scalar::Text(t) => Value::String(t.clone()),
        Scalar::Integer(i) => Value::Number((*i).into()),
        Scalar::Real(r) => Value::Number((*r).into()),
        Scalar::Boolean(b) => Value::Bool(*b),
    }
}

fn scalar_list(values: &[Scalar]) -> Value {
    Value::Sequence(values.iter().map(scalar_value).collect())
}

fn name_list(names: &IndexSet<String>) -> Value {
    let mut names: Vec<&String> = names.iter().collect();
    names.sort();
    Value::Sequence(names.into_iter().map(|n| n.clone().into()).collect())
}

fn person_value(p: &Person) -> Value {
    let mut m = Mapping::new();
    put_text(&mut m, "name", &p.name);
    put_text(&mut m, "email", &p.email);
    put_text(&mut m, "url", &p.url);
    Value::Mapping(m)
}

pub fn info_to_value(info: &SoftwareInfo) -> Value {
    let mut m = Mapping::new();
    m.insert("title".into(), info.title.clone().into());
    m.insert("version".into(), info.version.clone().into());
    put_text(&mut m, "description", &info.description);
    if let Some(first) = info.authors.first() {
        m.insert("contact".into(), person_value(first));
    }
    if let Some(license) = &info.license {
        let mut l = Mapping::new();
        l.insert("name".into(), license.name.clone().into());
        put_text(&mut l, "url", &license.url);
        m.insert("license".into(), Value::Mapping(l));
    }
    put_text(&mut m, "x-first-release", &info.first_release);
    put_text(&mut m, "x-programming-lang", &info.programming_language);
    put_text(&mut m, "x-repository", &info.repository);
    if !info.keywords.is_empty() {
        m.insert(
            "x-keywords".into(),
            Value::Sequence(info.keywords.iter().map(|k| k.clone().into()).collect()),
        );
    }
    put_text(&mut m, "x-reference-publication", &info.reference_publication);
    if info.authors.len() > 1 {
        m.insert(
            "x-authors".into(),
            Value::Sequence(info.authors.iter().map(person_value).collect()),
        );
    }
    put_extensions(&mut m, &info.extensions);
    Value::Mapping(m)
}

fn class_value(class: &ClassDescription) -> Value {
    let mut m = Mapping::new();
    put_text(&mut m, "description", &class.description);
    put_text(&mut m, "x-URI", &class.uri);
    if !class.is_part_of_interface {
        m.insert("x-IsPartOfInterface".into(), false.into());
    }
    if !class.properties.is_empty() {
        m.insert("properties".into(), variables_value(&class.properties));
    }
    if !class.required.is_empty() {
        m.insert("required".into(), name_list(&class.required));
    }
    if !class.functions.is_empty() {
        let mut fm = Mapping::new();
        for (name, f) in sorted(&class.functions) {
            fm.insert(name.clone().into(), function_value(f));
        }
        m.insert("x-functions".into(), Value::Mapping(fm));
    }
    put_extensions(&mut m, &class.extensions);
    Value::Mapping(m)
}

fn function_value(f: &FunctionDescription) -> Value {
    let mut m = Mapping::new();
    put_text(&mut m, "description", &f.description);
    if !f.is_part_of_interface {
        m.insert("x-IsPartOfInterface".into(), false.into());
    }
    if !f.parameters.is_empty() {
        m.insert("properties".into(), variables_value(&f.parameters));
    }
    if !f.required.is_empty() {
        m.insert("required".into(), name_list(&f.required));
    }
    if let Some(ret) = &f.return_description {
        m.insert("return".into(), variable_value(ret));
    }
    put_extensions(&mut m, &f.extensions);
    Value::Mapping(m)
}

fn variables_value(vars: &IndexMap<String, VariableDescription>) -> Value {
    let mut m = Mapping::new();
    for (name, v) in sorted(vars) {
        m.insert(name.clone().into(), variable_value(v));
    }
    Value::Mapping(m)
}

/// `Unit` / `x-Unit`: a bare name, or a mapping once there is more to say.
fn unit_value(unit: &UnitSpec) -> Option<Value> {
    if unit.description.is_none() && unit.uri.is_none() {
        return unit.name.clone().map(Value::String);
    }
    let mut m = Mapping::new();
    put_text(&mut m, "Name", &unit.name);
    put_text(&mut m, "Description", &unit.description);
    put_text(&mut m, "URI", &unit.uri);
    Some(Value::Mapping(m))
}

pub(crate) fn variable_value(v: &VariableDescription) -> Value {
    let mut m = Mapping::new();
    put_text(&mut m, "description", &v.description);
    match &v.data_type {
        Some(DataType::ClassReference(r)) => {
            m.insert("$ref".into(), r.as_str().into());
        }
        Some(t) => {
            m.insert("type".into(), t.keyword().unwrap_or_default().into());
        }
        None => {}
    }
    put_text(&mut m, "x-URI", &v.concept_uri);
    if let Some(unit) = &v.unit {
        if let Some(u) = unit_value(unit) {
            m.insert("x-Unit".into(), u);
        }
        put_text(&mut m, "x-UnitType", &unit.unit_type);
    }
    put_text(&mut m, "x-FileFormat", &v.file_format);
    put_text(&mut m, "x-CharacterEncoding", &v.character_encoding);
    put_scalar(&mut m, "x-DefaultValue", &v.default_value);
    put_scalar(&mut m, "x-MinimumValue", &v.minimum);
    if v.exclusive_minimum {
        m.insert("x-ExclusiveMinimum".into(), true.into());
    }
    put_scalar(&mut m, "x-MaximumValue", &v.maximum);
    if v.exclusive_maximum {
        m.insert("x-ExclusiveMaximum".into(), true.into());
    }
    put_text(&mut m, "x-RegularExpression", &v.regular_expression);
    if let Some(set) = &v.value_set {
        m.insert("x-ValueSet".into(), scalar_list(set));
    }
    put_scalar(&mut m, "x-ValueIncrement", &v.value_increment);
    if let Some(role) = v.role {
        m.insert("x-VariableRole".into(), role.as_str().into());
    }
    if !v.properties.is_empty() {
        m.insert("properties".into(), variables_value(&v.properties));
    }
    if !v.required.is_empty() {
        m.insert("required".into(), name_list(&v.required));
    }
    if !v.dimensions.is_empty() {
        let mut dm = Mapping::new();
        for d in &v.dimensions {
            dm.insert(d.name.clone().into(), dimension_value(d));
        }
        m.insert("x-dimensions".into(), Value::Mapping(dm));
    }
    if let Some(fs) = &v.file_structure {
        let key = match fs.kind {
            FileStructureKind::NetCdfFolders => "x-NetCDFFolders",
            FileStructureKind::ExcelSheets => "x-ExcelSheets",
        };
        m.insert(key.into(), fs.tree.clone());
    }
    put_extensions(&mut m, &v.extensions);
    Value::Mapping(m)
}

fn dimension_value(d: &DimensionDescription) -> Value {
    let mut m = Mapping::new();
    put_text(&mut m, "Description", &d.description);
    put_text(&mut m, "URI", &d.uri);
    if let Some(t) = &d.index_type {
        if let Some(k) = t.keyword() {
            m.insert("DataType".into(), k.into());
        }
    }
    put_scalar(&mut m, "ItemMinimumValue", &d.item_minimum);
    put_scalar(&mut m, "ItemMaximumValue", &d.item_maximum);
    if let Some(set) = &d.value_set {
        m.insert("ValueSet".into(), scalar_list(set));
    }
    put_scalar(&mut m, "ValueIncrement", &d.value_increment);
    if let Some(unit) = &d.unit {
        if let Some(u) = unit_value(unit) {
            m.insert("Unit".into(), u);
        }
        put_text(&mut m, "UnitType", &unit.unit_type);
    }
    put_extensions(&mut m, &d.extensions);
    Value::Mapping(m)
}
