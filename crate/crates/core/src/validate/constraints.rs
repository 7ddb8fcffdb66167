//! Scalar-level constraint evaluation, shared by document checking and
//! instance validation.

use std::cmp::Ordering;

use regex::Regex;

use super::file_format::{check_file_format, FileFormatCheck};
use super::regex_dialect;
use crate::diagnostic::{Diagnostic, Severity};
use crate::model::{cmp_numbers, DataType, DimensionDescription, Scalar, VariableDescription};

/// The value facet of one description, with its regex compiled once.
pub(crate) struct ConstraintSet<'a> {
    var: &'a VariableDescription,
    regex: Option<Result<Regex, String>>,
}

/// One violated constraint, not yet placed at a path.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Violation {
    pub severity: Severity,
    pub code: &'static str,
    pub message: String,
}

impl Violation {
    fn error(code: &'static str, message: String) -> Self {
        Violation {
            severity: Severity::Error,
            code,
            message,
        }
    }

    pub fn at(self, path: &str) -> Diagnostic {
        Diagnostic::new(self.severity, self.code, path, self.message)
    }
}

/// Does `value` have the kind `ty` describes? `None` and opaque types
/// accept anything.
pub(crate) fn scalar_matches_type(value: &Scalar, ty: Option<&DataType>) -> bool {
    match ty {
        None | Some(DataType::Opaque(_)) => true,
        Some(DataType::String) | Some(DataType::File) => matches!(value, Scalar::Text(_)),
        Some(DataType::Integer) => matches!(value, Scalar::Integer(_)),
        Some(DataType::Number) => value.is_numeric(),
        Some(DataType::Boolean) => matches!(value, Scalar::Boolean(_)),
        Some(DataType::Object) | Some(DataType::Array) | Some(DataType::ClassReference(_)) => false,
    }
}

/// Is `value` on the grid `base + k * step` (k a natural number)?
pub(crate) fn on_increment_grid(value: &Scalar, base: Option<&Scalar>, step: &Scalar) -> bool {
    let zero = Scalar::Integer(0);
    let base = base.unwrap_or(&zero);
    match (value, base, step) {
        (Scalar::Integer(v), Scalar::Integer(b), Scalar::Integer(s)) if *s > 0 => {
            let diff = i128::from(*v) - i128::from(*b);
            diff >= 0 && diff % i128::from(*s) == 0
        }
        _ => match (value.as_f64(), base.as_f64(), step.as_f64()) {
            (Some(v), Some(b), Some(s)) if s > 0.0 => {
                let k = (v - b) / s;
                let nearest = k.round();
                // relative tolerance for binary fractions such as 0.1
                nearest >= 0.0 && (k - nearest).abs() <= 1e-9 * nearest.abs().max(1.0)
            }
            _ => false,
        },
    }
}

impl<'a> ConstraintSet<'a> {
    pub fn of(var: &'a VariableDescription) -> Self {
        let regex = var
            .regular_expression
            .as_ref()
            .map(|p| regex_dialect::compile(p).map_err(|e| e.to_string()));
        ConstraintSet { var, regex }
    }

    /// All violations of `value` against type, range, regex, increment,
    /// file format and (when `check_value_set`) value-set membership.
    /// Every applicable check runs; nothing short-circuits except checks
    /// that cannot apply once the value has the wrong kind.
    pub fn scalar_violations(&self, value: &Scalar, check_value_set: bool) -> Vec<Violation> {
        self.scalar_violations_typed(value, self.var.data_type.as_ref(), check_value_set)
    }

    pub fn scalar_violations_typed(
        &self,
        value: &Scalar,
        ty: Option<&DataType>,
        check_value_set: bool,
    ) -> Vec<Violation> {
        let var = self.var;
        let mut out = Vec::new();
        let type_ok = scalar_matches_type(value, ty);
        if !type_ok {
            out.push(Violation::error(
                "type",
                format!(
                    "expected {}, got {} `{value}`",
                    ty.map(DataType::describe).unwrap_or_default(),
                    value.kind_name()
                ),
            ));
        }

        if var.minimum.is_some() || var.maximum.is_some() {
            if value.is_numeric() {
                self.range_violations(value, &mut out);
            } else if type_ok {
                out.push(Violation::error(
                    "range",
                    format!("`{value}` is not a number but a range is declared"),
                ));
            }
        }

        if let Some(compiled) = &self.regex {
            match (value, compiled) {
                (Scalar::Text(s), Ok(re)) => {
                    if !re.is_match(s) {
                        out.push(Violation::error(
                            "regex",
                            format!(
                                "`{s}` does not match `{}`",
                                var.regular_expression.as_deref().unwrap_or_default()
                            ),
                        ));
                    }
                }
                (Scalar::Text(_), Err(e)) => out.push(Violation::error("regex", format!("pattern unusable: {e}"))),
                _ if type_ok => out.push(Violation::error(
                    "regex",
                    format!("`{value}` is not text but a pattern is declared"),
                )),
                _ => {}
            }
        }

        if let Some(step) = &var.value_increment {
            if value.is_numeric() && !on_increment_grid(value, var.minimum.as_ref(), step) {
                out.push(Violation::error(
                    "increment",
                    format!("`{value}` is not on the increment grid of step {step}"),
                ));
            }
        }

        if let (Some(tag), Scalar::Text(name)) = (&var.file_format, value) {
            match check_file_format(tag, name, None) {
                FileFormatCheck::Match => {}
                FileFormatCheck::Mismatch => out.push(Violation::error(
                    "file-format",
                    format!("`{name}` does not look like a {tag} file"),
                )),
                FileFormatCheck::UnknownTag => out.push(Violation {
                    severity: Severity::Info,
                    code: "file-format-unknown",
                    message: format!("no signature known for file format `{tag}`"),
                }),
            }
        }

        if check_value_set {
            if let Some(set) = &var.value_set {
                if !set.contains(value) {
                    let listed: Vec<String> = set.iter().map(ToString::to_string).collect();
                    out.push(Violation::error(
                        "value-set",
                        format!("`{value}` is not one of {{{}}}", listed.join(", ")),
                    ));
                }
            }
        }
        out
    }

    fn range_violations(&self, value: &Scalar, out: &mut Vec<Violation>) {
        let var = self.var;
        if matches!(value, Scalar::Real(r) if r.is_nan()) {
            out.push(Violation::error("range", "NaN is outside every range".into()));
            return;
        }
        if let Some(min) = &var.minimum {
            match cmp_numbers(value, min) {
                Some(Ordering::Less) => {
                    out.push(Violation::error("range", format!("{value} is below the minimum {min}")))
                }
                Some(Ordering::Equal) if var.exclusive_minimum => out.push(Violation::error(
                    "exclusive-bound",
                    format!("{value} equals the exclusive minimum"),
                )),
                _ => {}
            }
        }
        if let Some(max) = &var.maximum {
            match cmp_numbers(value, max) {
                Some(Ordering::Greater) => {
                    out.push(Violation::error("range", format!("{value} is above the maximum {max}")))
                }
                Some(Ordering::Equal) if var.exclusive_maximum => out.push(Violation::error(
                    "exclusive-bound",
                    format!("{value} equals the exclusive maximum"),
                )),
                _ => {}
            }
        }
    }
}

/// Violations of one index component against its dimension. All carry the
/// `dimension-index` code.
pub(crate) fn index_violations(index: &Scalar, dim: &DimensionDescription) -> Vec<Violation> {
    let mut out = Vec::new();
    let err = |m: String| Violation::error("dimension-index", m);
    let ty = dim.index_type.as_ref();
    if !scalar_matches_type(index, ty) {
        out.push(err(format!(
            "index `{index}` on axis `{}` is not of type {}",
            dim.name,
            ty.map(DataType::describe).unwrap_or_default()
        )));
    }
    let below = dim.item_minimum.as_ref().map(|min| compare_index(index, min));
    match below {
        Some(Some(Ordering::Less)) => out.push(err(format!(
            "index `{index}` on axis `{}` is below the item minimum {}",
            dim.name,
            dim.item_minimum.as_ref().unwrap()
        ))),
        Some(None) => out.push(err(format!(
            "index `{index}` on axis `{}` cannot be compared with the item minimum",
            dim.name
        ))),
        _ => {}
    }
    let above = dim.item_maximum.as_ref().map(|max| compare_index(index, max));
    match above {
        Some(Some(Ordering::Greater)) => out.push(err(format!(
            "index `{index}` on axis `{}` is above the item maximum {}",
            dim.name,
            dim.item_maximum.as_ref().unwrap()
        ))),
        Some(None) => out.push(err(format!(
            "index `{index}` on axis `{}` cannot be compared with the item maximum",
            dim.name
        ))),
        _ => {}
    }
    if let Some(set) = &dim.value_set {
        if !set.contains(index) {
            out.push(err(format!("index `{index}` is not a declared `{}` value", dim.name)));
        }
    }
    if let Some(step) = &dim.value_increment {
        if !on_increment_grid(index, dim.item_minimum.as_ref(), step) {
            out.push(err(format!(
                "index `{index}` on axis `{}` is not on the increment grid of step {step}",
                dim.name
            )));
        }
    }
    out
}

fn compare_index(index: &Scalar, bound: &Scalar) -> Option<Ordering> {
    match (index, bound) {
        (Scalar::Text(a), Scalar::Text(b)) => Some(a.cmp(b)),
        _ => cmp_numbers(index, bound),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn increment_grid() {
        let s = |x: f64| Scalar::Real(x);
        assert!(on_increment_grid(
            &Scalar::Integer(6),
            Some(&Scalar::Integer(0)),
            &Scalar::Integer(3)
        ));
        assert!(!on_increment_grid(
            &Scalar::Integer(7),
            Some(&Scalar::Integer(0)),
            &Scalar::Integer(3)
        ));
        assert!(!on_increment_grid(&Scalar::Integer(-3), None, &Scalar::Integer(3)));
        assert!(on_increment_grid(&s(0.3), Some(&s(0.0)), &s(0.1)));
        assert!(!on_increment_grid(&s(0.35), Some(&s(0.0)), &s(0.1)));
        assert!(on_increment_grid(
            &Scalar::Integer(2010),
            Some(&Scalar::Integer(2010)),
            &Scalar::Integer(5)
        ));
    }

    #[test]
    fn index_checks() {
        let dim = DimensionDescription::new("location").with_item_range(Some(Scalar::Integer(0)), None);
        assert!(index_violations(&Scalar::Integer(0), &dim).is_empty());
        assert_eq!(index_violations(&Scalar::Integer(-1), &dim).len(), 1);
        assert_eq!(index_violations(&"x".into(), &dim).len(), 1);
        let dim = DimensionDescription::new("store").with_value_set(["Berlin", "London", "Paris"]);
        assert!(index_violations(&"London".into(), &dim).is_empty());
        assert_eq!(index_violations(&"Rome".into(), &dim)[0].code, "dimension-index");
    }
}
