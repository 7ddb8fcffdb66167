use chrono::NaiveDate;
use indexmap::{IndexMap, IndexSet};

use super::{
    resolve, walk_references, ClassDescription, DataDescDocument, DataType, DimensionDescription, FunctionDescription,
    Role, Scalar, SoftwareInfo, UnitSpec, VariableDescription, VariablePosition,
};
use crate::diagnostic::{normalize, Diagnostic, NodePath, Severity};
use crate::validate::constraints::ConstraintSet;
use crate::validate::regex_dialect;

/// Reports every structural invariant violation in `doc`, ordered by path.
///
/// The list is empty iff the document satisfies all invariants. Advisory
/// findings that do not break an invariant come from [`lint_document`].
pub fn check_document(doc: &DataDescDocument) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    out.extend(check_info_section(&doc.info));
    let schemas = NodePath::root().child("components").child("schemas");
    for (key, class) in &doc.components {
        check_class(doc, key, class, &schemas.child(key), &mut out);
    }
    normalize(&mut out);
    out
}

/// Warnings about legal but questionable constructs: parameters that are
/// both required and defaulted, and reference cycles in data models.
pub fn lint_document(doc: &DataDescDocument) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let schemas = NodePath::root().child("components").child("schemas");
    for (key, class) in &doc.components {
        let path = schemas.child(key);
        lint_required_defaults(&class.properties, &class.required, &path.child("properties"), &mut out);
        for (fname, func) in &class.functions {
            let fpath = path.child("x-functions").child(fname);
            lint_required_defaults(&func.parameters, &func.required, &fpath.child("properties"), &mut out);
        }
        let walk = walk_references(doc, key);
        out.extend(walk.diagnostics.into_iter().filter(|d| d.code == "reference-cycle"));
    }
    normalize(&mut out);
    out
}

fn lint_required_defaults(
    members: &IndexMap<String, VariableDescription>,
    required: &IndexSet<String>,
    base: &NodePath,
    out: &mut Vec<Diagnostic>,
) {
    for (name, var) in members {
        if required.contains(name) && var.default_value.is_some() {
            out.push(Diagnostic::warning(
                "required-with-default",
                base.child(name),
                format!("`{name}` is required and also has a default value"),
            ));
        }
        lint_required_defaults(
            &var.properties,
            &var.required,
            &base.child(name).child("properties"),
            out,
        );
    }
}

/// Invariant violations of an info section on its own.
pub fn check_info_section(info: &SoftwareInfo) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let base = NodePath::root().child("info");
    if info.title.trim().is_empty() {
        out.push(Diagnostic::error(
            "empty-title",
            base.child("title"),
            "info.title must not be empty",
        ));
    }
    if info.version.trim().is_empty() {
        out.push(Diagnostic::error(
            "empty-version",
            base.child("version"),
            "info.version must not be empty",
        ));
    }
    if let Some(date) = &info.first_release {
        if !is_iso_date(date) {
            out.push(Diagnostic::error(
                "invalid-date",
                base.child("x-first-release"),
                format!("`{date}` is not an ISO-8601 calendar date (YYYY-MM-DD)"),
            ));
        }
    }
    out
}

pub(crate) fn is_iso_date(s: &str) -> bool {
    s.len() == 10 && NaiveDate::parse_from_str(s, "%Y-%m-%d").is_ok()
}

fn check_name(name: &str, key: &str, path: &NodePath, out: &mut Vec<Diagnostic>) {
    if name.trim().is_empty() {
        out.push(Diagnostic::error("empty-name", path, "names must not be empty"));
    } else if name != key {
        out.push(Diagnostic::error(
            "name-mismatch",
            path,
            format!("node is stored under `{key}` but named `{name}`"),
        ));
    }
}

fn check_class(
    doc: &DataDescDocument,
    key: &str,
    class: &ClassDescription,
    path: &NodePath,
    out: &mut Vec<Diagnostic>,
) {
    check_name(&class.name, key, path, out);
    check_required(
        &class.required,
        &class.properties,
        "required-unknown-property",
        path,
        out,
    );
    let props = path.child("properties");
    for (pname, var) in &class.properties {
        check_variable(doc, pname, var, VariablePosition::Property, &props.child(pname), out);
    }
    let funcs = path.child("x-functions");
    for (fname, func) in &class.functions {
        check_function(doc, fname, func, &funcs.child(fname), out);
    }
}

fn check_function(
    doc: &DataDescDocument,
    key: &str,
    func: &FunctionDescription,
    path: &NodePath,
    out: &mut Vec<Diagnostic>,
) {
    check_name(&func.name, key, path, out);
    check_required(
        &func.required,
        &func.parameters,
        "required-unknown-parameter",
        path,
        out,
    );
    let params = path.child("properties");
    for (pname, var) in &func.parameters {
        check_variable(doc, pname, var, VariablePosition::Parameter, &params.child(pname), out);
    }
    if let Some(ret) = &func.return_description {
        let rpath = path.child("return");
        check_variable(doc, &ret.name, ret, VariablePosition::Return, &rpath, out);
    }
}

fn check_required(
    required: &IndexSet<String>,
    members: &IndexMap<String, VariableDescription>,
    code: &str,
    path: &NodePath,
    out: &mut Vec<Diagnostic>,
) {
    for name in required {
        if !members.contains_key(name) {
            out.push(Diagnostic::error(
                code,
                path.child("required"),
                format!("required entry `{name}` names no declared member"),
            ));
        }
    }
}

fn check_variable(
    doc: &DataDescDocument,
    key: &str,
    var: &VariableDescription,
    position: VariablePosition,
    path: &NodePath,
    out: &mut Vec<Diagnostic>,
) {
    if position == VariablePosition::Return {
        if var.name.trim().is_empty() {
            out.push(Diagnostic::error("empty-name", path, "names must not be empty"));
        }
    } else {
        check_name(&var.name, key, path, out);
    }

    // role
    if let Some(role) = var.role {
        let expected = match position {
            VariablePosition::Parameter => Some(Role::Input),
            VariablePosition::Return => Some(Role::Output),
            VariablePosition::Property => None,
        };
        if let Some(expected) = expected {
            if role != expected {
                out.push(Diagnostic::error(
                    "role-mismatch",
                    path.child("x-VariableRole"),
                    format!("role `{}` where `{}` is required", role.as_str(), expected.as_str()),
                ));
            }
        }
    }

    // references
    if let Some(reference) = var.class_reference() {
        if let Err(e) = resolve(doc, reference) {
            out.push(Diagnostic::error(e.code(), path.child("$ref"), e.to_string()));
        }
    }

    if let Some(unit) = &var.unit {
        check_unit(unit, &path.child("x-Unit"), out);
    }

    check_value_facet(var, path, out);

    // structure
    let ty = var.data_type.as_ref();
    if !var.properties.is_empty() && ty.is_some_and(|t| !t.is_grouping()) {
        out.push(Diagnostic::error(
            "properties-on-non-grouping",
            path.child("properties"),
            format!(
                "type `{}` cannot carry properties",
                ty.map(DataType::describe).unwrap_or_default()
            ),
        ));
    }
    if !var.dimensions.is_empty() && ty.is_some_and(|t| t.is_grouping() || matches!(t, DataType::File)) {
        out.push(Diagnostic::error(
            "dimensions-on-non-dimensioned",
            path.child("x-dimensions"),
            format!(
                "type `{}` cannot be resolved along dimensions",
                ty.map(DataType::describe).unwrap_or_default()
            ),
        ));
    }
    check_required(&var.required, &var.properties, "required-unknown-property", path, out);
    let props = path.child("properties");
    for (pname, inner) in &var.properties {
        check_variable(doc, pname, inner, VariablePosition::Property, &props.child(pname), out);
    }
    let dims = path.child("x-dimensions");
    let mut seen = IndexSet::new();
    for dim in &var.dimensions {
        let dpath = dims.child(&dim.name);
        if !seen.insert(dim.name.as_str()) {
            out.push(Diagnostic::error(
                "duplicate-dimension",
                &dpath,
                format!("dimension `{}` declared twice", dim.name),
            ));
        }
        check_dimension(doc, dim, &dpath, out);
    }
}

fn check_unit(unit: &UnitSpec, path: &NodePath, out: &mut Vec<Diagnostic>) {
    if unit.is_empty() {
        out.push(Diagnostic::error(
            "empty-unit",
            path,
            "a unit needs at least one of name, description, URI or unit type",
        ));
    }
}

fn check_value_facet(var: &VariableDescription, path: &NodePath, out: &mut Vec<Diagnostic>) {
    let ty = var.data_type.as_ref();

    // constraints only where meaningful
    let numeric_ok = ty.map_or(true, |t| t.is_numeric() || matches!(t, DataType::Opaque(_)));
    for (bound, key) in [(&var.minimum, "x-MinimumValue"), (&var.maximum, "x-MaximumValue")] {
        if let Some(b) = bound {
            if !b.is_numeric() {
                out.push(Diagnostic::error(
                    "non-numeric-bound",
                    path.child(key),
                    format!("bound `{b}` is not a number"),
                ));
            } else if !numeric_ok {
                out.push(Diagnostic::error(
                    "constraint-type-mismatch",
                    path.child(key),
                    format!(
                        "range constraint on non-numeric type `{}`",
                        ty.map(DataType::describe).unwrap_or_default()
                    ),
                ));
            }
        }
    }
    if var.exclusive_minimum && var.minimum.is_none() {
        out.push(Diagnostic::error(
            "dangling-exclusive-bound",
            path.child("x-ExclusiveMinimum"),
            "exclusive minimum without a minimum",
        ));
    }
    if var.exclusive_maximum && var.maximum.is_none() {
        out.push(Diagnostic::error(
            "dangling-exclusive-bound",
            path.child("x-ExclusiveMaximum"),
            "exclusive maximum without a maximum",
        ));
    }
    if let (Some(min), Some(max)) = (&var.minimum, &var.maximum) {
        if let Some(ord) = super::cmp_numbers(min, max) {
            if ord.is_gt() {
                out.push(Diagnostic::error(
                    "range-inverted",
                    path.child("x-MinimumValue"),
                    format!("minimum {min} exceeds maximum {max}"),
                ));
            } else if ord.is_eq() && (var.exclusive_minimum || var.exclusive_maximum) {
                out.push(Diagnostic::error(
                    "range-empty",
                    path.child("x-MinimumValue"),
                    format!("minimum equals maximum ({min}) but a bound is exclusive"),
                ));
            }
        }
    }
    if let Some(inc) = &var.value_increment {
        check_increment(inc, &path.child("x-ValueIncrement"), out);
    }

    if let Some(pattern) = &var.regular_expression {
        if ty.is_some_and(|t| !matches!(t, DataType::String | DataType::File | DataType::Opaque(_))) {
            out.push(Diagnostic::error(
                "constraint-type-mismatch",
                path.child("x-RegularExpression"),
                format!(
                    "regular expression on non-string type `{}`",
                    ty.map(DataType::describe).unwrap_or_default()
                ),
            ));
        }
        if let Err(e) = regex_dialect::compile(pattern) {
            out.push(Diagnostic::error(
                "invalid-regex",
                path.child("x-RegularExpression"),
                e.to_string(),
            ));
        }
    }

    let rules = ConstraintSet::of(var);
    if let Some(set) = &var.value_set {
        let vpath = path.child("x-ValueSet");
        for (i, entry) in set.iter().enumerate() {
            if set[..i].contains(entry) {
                out.push(Diagnostic::error(
                    "value-set-duplicate",
                    &vpath,
                    format!("value `{entry}` listed more than once"),
                ));
            }
            for v in rules
                .scalar_violations(entry, false)
                .into_iter()
                .filter(|v| v.severity == Severity::Error)
            {
                out.push(Diagnostic::error(
                    "value-set-violation",
                    &vpath,
                    format!("value-set entry `{entry}` violates its own description: {}", v.message),
                ));
            }
        }
    }
    if let Some(default) = &var.default_value {
        for v in rules
            .scalar_violations(default, true)
            .into_iter()
            .filter(|v| v.severity == Severity::Error)
        {
            out.push(Diagnostic::error(
                "default-violation",
                path.child("x-DefaultValue"),
                format!("default `{default}` violates its own description: {}", v.message),
            ));
        }
    }
}

fn check_increment(inc: &Scalar, path: &NodePath, out: &mut Vec<Diagnostic>) {
    match inc.as_f64() {
        Some(x) if x > 0.0 && x.is_finite() => {}
        _ => out.push(Diagnostic::error(
            "invalid-increment",
            path,
            format!("increment `{inc}` must be a positive number"),
        )),
    }
}

fn check_dimension(doc: &DataDescDocument, dim: &DimensionDescription, path: &NodePath, out: &mut Vec<Diagnostic>) {
    if dim.name.trim().is_empty() {
        out.push(Diagnostic::error("empty-name", path, "names must not be empty"));
    }
    if let Some(DataType::ClassReference(r)) = &dim.index_type {
        if let Err(e) = resolve(doc, r) {
            out.push(Diagnostic::error(e.code(), path.child("DataType"), e.to_string()));
        }
    }
    if let (Some(min), Some(max)) = (&dim.item_minimum, &dim.item_maximum) {
        let inverted = match super::cmp_numbers(min, max) {
            Some(ord) => ord.is_gt(),
            None => matches!((min, max), (Scalar::Text(_), Scalar::Text(_))) && min > max,
        };
        if inverted {
            out.push(Diagnostic::error(
                "range-inverted",
                path.child("ItemMinimumValue"),
                format!("item minimum {min} exceeds item maximum {max}"),
            ));
        }
    }
    if let Some(inc) = &dim.value_increment {
        check_increment(inc, &path.child("ValueIncrement"), out);
    }
    if let Some(unit) = &dim.unit {
        check_unit(unit, &path.child("UnitType"), out);
    }
    if let Some(set) = &dim.value_set {
        for (i, entry) in set.iter().enumerate() {
            if set[..i].contains(entry) {
                out.push(Diagnostic::error(
                    "value-set-duplicate",
                    path.child("ValueSet"),
                    format!("index `{entry}` listed more than once"),
                ));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ReferencePath, SoftwareInfo};

    fn codes(diags: &[Diagnostic]) -> Vec<&str> {
        diags.iter().map(|d| d.code.as_str()).collect()
    }

    fn doc() -> DataDescDocument {
        DataDescDocument::new(SoftwareInfo::new("x", "0"))
    }

    fn with_var(var: VariableDescription) -> DataDescDocument {
        let mut d = doc();
        d.add_class(ClassDescription::new("C").with_property(var));
        d
    }

    #[test]
    fn minimal_document_is_clean() {
        assert!(check_document(&doc()).is_empty());
    }

    #[test]
    fn info_rules() {
        let mut d = doc();
        d.info.title.clear();
        d.info.first_release = Some("12.11.2018".into());
        assert_eq!(codes(&check_document(&d)), ["empty-title", "invalid-date"]);
        d.info.first_release = Some("2018-02-30".into());
        assert!(codes(&check_document(&d)).contains(&"invalid-date"));
    }

    #[test]
    fn unknown_required_parameter() {
        let mut d = doc();
        let mut f = FunctionDescription::new("f");
        f.parameters.insert("a".into(), VariableDescription::new("a"));
        f.required.insert("missingParam".into());
        let mut c = ClassDescription::new("C");
        c.functions.insert("f".into(), f);
        d.add_class(c);
        let diags = check_document(&d);
        assert_eq!(codes(&diags), ["required-unknown-parameter"]);
        assert_eq!(diags[0].path, "components/schemas/C/x-functions/f/required");
    }

    #[test]
    fn range_rules() {
        let v = VariableDescription::typed("v", DataType::Integer)
            .with_minimum(5, false)
            .with_maximum(1, false);
        assert_eq!(codes(&check_document(&with_var(v))), ["range-inverted"]);
        let v = VariableDescription::typed("v", DataType::Integer)
            .with_minimum(3, true)
            .with_maximum(3, false);
        assert_eq!(codes(&check_document(&with_var(v))), ["range-empty"]);
        let v = VariableDescription::typed("v", DataType::Integer)
            .with_minimum(3, false)
            .with_maximum(3.0, false);
        assert!(check_document(&with_var(v)).is_empty());
        let v = VariableDescription::typed("v", DataType::String).with_minimum(0, false);
        assert_eq!(codes(&check_document(&with_var(v))), ["constraint-type-mismatch"]);
        let v = VariableDescription::typed("v", DataType::Integer).with_regex("^a$");
        assert_eq!(codes(&check_document(&with_var(v))), ["constraint-type-mismatch"]);
    }

    #[test]
    fn value_set_and_default_rules() {
        let v = VariableDescription::typed("v", DataType::Integer)
            .with_minimum(0, true)
            .with_value_set([1i64, 1, 0]);
        let diags = check_document(&with_var(v));
        assert_eq!(codes(&diags), ["value-set-duplicate", "value-set-violation"]);

        let v = VariableDescription::typed("v", DataType::String)
            .with_regex("[a-z]+")
            .with_default("ABC");
        assert_eq!(codes(&check_document(&with_var(v))), ["default-violation"]);

        let v = VariableDescription::new("v")
            .with_value_set(["a", "b"])
            .with_default("c");
        assert_eq!(codes(&check_document(&with_var(v))), ["default-violation"]);
    }

    #[test]
    fn structure_rules() {
        let v = VariableDescription::typed("v", DataType::Integer).with_property(VariableDescription::new("p"), false);
        assert_eq!(codes(&check_document(&with_var(v))), ["properties-on-non-grouping"]);
        let v = VariableDescription::typed("v", DataType::Object).with_dimension(DimensionDescription::new("t"));
        assert_eq!(codes(&check_document(&with_var(v))), ["dimensions-on-non-dimensioned"]);
        let v = VariableDescription::typed("v", DataType::Integer).with_dimension(DimensionDescription::new("t"));
        assert!(check_document(&with_var(v)).is_empty());
        let mut dim =
            DimensionDescription::new("t").with_item_range(Some(Scalar::Integer(3)), Some(Scalar::Integer(1)));
        dim.value_increment = Some(Scalar::Integer(0));
        let v = VariableDescription::new("v").with_dimension(dim);
        assert_eq!(
            codes(&check_document(&with_var(v))),
            ["range-inverted", "invalid-increment"]
        );
    }

    #[test]
    fn roles_and_references() {
        let mut d = doc();
        let mut f = FunctionDescription::new("f");
        let mut p = VariableDescription::new("p");
        p.role = Some(Role::Output);
        f.parameters.insert("p".into(), p);
        f.return_description = Some(Box::new(VariableDescription::typed(
            "return",
            DataType::ClassReference(ReferencePath::new("#/components/schemas/Nope")),
        )));
        let mut c = ClassDescription::new("C");
        c.functions.insert("f".into(), f);
        d.add_class(c);
        assert_eq!(codes(&check_document(&d)), ["role-mismatch", "unresolved-reference"]);
    }

    #[test]
    fn unit_needs_a_field() {
        let v = VariableDescription::typed("v", DataType::Number).with_unit(UnitSpec::default());
        assert_eq!(codes(&check_document(&with_var(v))), ["empty-unit"]);
    }

    #[test]
    fn lint_flags_required_with_default() {
        let mut c = ClassDescription::new("C")
            .with_property(VariableDescription::typed("n", DataType::Integer).with_default(1));
        c.required.insert("n".into());
        let mut d = doc();
        d.add_class(c);
        assert!(check_document(&d).is_empty());
        let lint = lint_document(&d);
        assert_eq!(codes(&lint), ["required-with-default"]);
        assert_eq!(lint[0].path, "components/schemas/C/properties/n");
    }
}
