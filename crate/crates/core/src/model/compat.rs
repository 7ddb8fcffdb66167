//! Can the output of one interface feed the input of another?
//!
//! A producer is compatible with a consumer when every value the producer
//! may emit is acceptable to the consumer: matching types, contained
//! numeric ranges, contained value sets, agreeing units and pairwise
//! matching dimensions. Units are never converted.

use std::cmp::Ordering;
use std::collections::HashSet;

use super::{
    cmp_numbers, resolve, DataDescDocument, DataType, DimensionDescription, Scalar, UnitSpec, VariableDescription,
};
use crate::diagnostic::{Diagnostic, NodePath};

#[derive(Debug, Clone, PartialEq)]
pub struct CompatibilityReport {
    pub compatible: bool,
    /// One error per failed clause.
    pub reasons: Vec<Diagnostic>,
}

/// Enumeration cap for deciding value-set containment of an integer range.
const MAX_ENUMERATED: i128 = 10_000;

/// Compatibility checks, optionally with the documents that own each side
/// so class references can be compared structurally.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompatibilityChecker<'a> {
    producer_doc: Option<&'a DataDescDocument>,
    consumer_doc: Option<&'a DataDescDocument>,
}

pub fn check_compatibility(producer: &VariableDescription, consumer: &VariableDescription) -> CompatibilityReport {
    CompatibilityChecker::default().check(producer, consumer)
}

/// A lower or upper bound; `None` value means unbounded.
#[derive(Debug, Clone, Copy)]
struct Bound<'a> {
    value: Option<&'a Scalar>,
    exclusive: bool,
}

impl<'a> CompatibilityChecker<'a> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_documents(producer_doc: &'a DataDescDocument, consumer_doc: &'a DataDescDocument) -> Self {
        CompatibilityChecker {
            producer_doc: Some(producer_doc),
            consumer_doc: Some(consumer_doc),
        }
    }

    pub fn check(&self, producer: &VariableDescription, consumer: &VariableDescription) -> CompatibilityReport {
        let mut reasons = Vec::new();
        let root = NodePath::root();
        if let Some(msg) = self.type_mismatch(producer.data_type.as_ref(), consumer.data_type.as_ref()) {
            reasons.push(Diagnostic::error("type-mismatch", &root, msg));
        }
        let producer_range = (
            Bound {
                value: producer.minimum.as_ref(),
                exclusive: producer.exclusive_minimum,
            },
            Bound {
                value: producer.maximum.as_ref(),
                exclusive: producer.exclusive_maximum,
            },
        );
        let consumer_range = (
            Bound {
                value: consumer.minimum.as_ref(),
                exclusive: consumer.exclusive_minimum,
            },
            Bound {
                value: consumer.maximum.as_ref(),
                exclusive: consumer.exclusive_maximum,
            },
        );
        let integral = matches!(producer.data_type, Some(DataType::Integer));
        if let Some(msg) = range_not_contained(producer_range, producer.value_set.as_deref(), integral, consumer_range)
        {
            reasons.push(Diagnostic::error("range-not-contained", &root, msg));
        }
        if let Some(msg) = value_set_not_contained(
            producer_range,
            producer.value_set.as_deref(),
            producer.data_type.as_ref(),
            consumer.value_set.as_deref(),
        ) {
            reasons.push(Diagnostic::error("value-set-not-contained", &root, msg));
        }
        if let Some(msg) = unit_mismatch(producer.unit.as_ref(), consumer.unit.as_ref()) {
            reasons.push(Diagnostic::error("unit-mismatch", &root, msg));
        }
        self.dimension_reasons(&producer.dimensions, &consumer.dimensions, &root, &mut reasons);
        CompatibilityReport {
            compatible: reasons.is_empty(),
            reasons,
        }
    }

    fn type_mismatch(&self, producer: Option<&DataType>, consumer: Option<&DataType>) -> Option<String> {
        let describe = |t: Option<&DataType>| t.map(DataType::describe).unwrap_or_else(|| "unspecified".into());
        let ok = match (producer, consumer) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(DataType::ClassReference(p)), Some(DataType::ClassReference(c))) => self.classes_equal(p, c),
            (Some(p), Some(c)) => p == c,
        };
        (!ok).then(|| {
            format!(
                "producer type {} does not match consumer type {}",
                describe(producer),
                describe(consumer)
            )
        })
    }

    fn classes_equal(&self, p: &super::ReferencePath, c: &super::ReferencePath) -> bool {
        match (self.producer_doc, self.consumer_doc) {
            (Some(pd), Some(cd)) => {
                let mut assumed = HashSet::new();
                structurally_equal(pd, p, cd, c, &mut assumed)
            }
            _ => p == c,
        }
    }

    fn dimension_reasons(
        &self,
        producer: &[DimensionDescription],
        consumer: &[DimensionDescription],
        root: &NodePath,
        out: &mut Vec<Diagnostic>,
    ) {
        if producer.len() != consumer.len() {
            out.push(Diagnostic::error(
                "dimension-count",
                root,
                format!(
                    "producer has {} dimensions, consumer {}",
                    producer.len(),
                    consumer.len()
                ),
            ));
            return;
        }
        for (pos, (p, c)) in producer.iter().zip(consumer).enumerate() {
            let path = root.child("x-dimensions").child(&c.name);
            let mut failed = Vec::new();
            if let Some(msg) = self.type_mismatch(p.index_type.as_ref(), c.index_type.as_ref()) {
                failed.push(msg);
            }
            fn inclusive(v: Option<&Scalar>) -> Bound<'_> {
                Bound {
                    value: v,
                    exclusive: false,
                }
            }
            let p_range = (inclusive(p.item_minimum.as_ref()), inclusive(p.item_maximum.as_ref()));
            let c_range = (inclusive(c.item_minimum.as_ref()), inclusive(c.item_maximum.as_ref()));
            let integral = matches!(p.index_type, Some(DataType::Integer));
            if let Some(msg) = range_not_contained(p_range, p.value_set.as_deref(), integral, c_range) {
                failed.push(msg);
            }
            if let Some(msg) = value_set_not_contained(
                p_range,
                p.value_set.as_deref(),
                p.index_type.as_ref(),
                c.value_set.as_deref(),
            ) {
                failed.push(msg);
            }
            for msg in failed {
                out.push(Diagnostic::error(
                    "dimension-mismatch",
                    &path,
                    format!("dimension {pos} (`{}` vs `{}`): {msg}", p.name, c.name),
                ));
            }
        }
    }
}

/// Same property names, same required set, and pairwise equal property
/// types (class references compared recursively; a pair already under
/// comparison is assumed equal so cycles terminate).
fn structurally_equal(
    pd: &DataDescDocument,
    p: &super::ReferencePath,
    cd: &DataDescDocument,
    c: &super::ReferencePath,
    assumed: &mut HashSet<(String, String)>,
) -> bool {
    let (Ok(pc), Ok(cc)) = (resolve(pd, p), resolve(cd, c)) else {
        return false;
    };
    if !assumed.insert((pc.name.clone(), cc.name.clone())) {
        return true;
    }
    if pc.required != cc.required || pc.properties.len() != cc.properties.len() {
        return false;
    }
    pc.properties.iter().all(|(name, pv)| {
        let Some(cv) = cc.properties.get(name) else {
            return false;
        };
        match (&pv.data_type, &cv.data_type) {
            (Some(DataType::ClassReference(pr)), Some(DataType::ClassReference(cr))) => {
                structurally_equal(pd, pr, cd, cr, assumed)
            }
            (a, b) => a == b,
        }
    })
}

fn describe_range(range: (Bound<'_>, Bound<'_>)) -> String {
    let lo = match range.0.value {
        Some(v) => format!("{}{v}", if range.0.exclusive { "(" } else { "[" }),
        None => "(-inf".to_owned(),
    };
    let hi = match range.1.value {
        Some(v) => format!("{v}{}", if range.1.exclusive { ")" } else { "]" }),
        None => "+inf)".to_owned(),
    };
    format!("{lo}, {hi}")
}

fn satisfies(value: &Scalar, range: (Bound<'_>, Bound<'_>)) -> bool {
    let lo_ok = match range.0.value {
        None => true,
        Some(min) => match cmp_numbers(value, min) {
            Some(Ordering::Greater) => true,
            Some(Ordering::Equal) => !range.0.exclusive,
            _ => false,
        },
    };
    let hi_ok = match range.1.value {
        None => true,
        Some(max) => match cmp_numbers(value, max) {
            Some(Ordering::Less) => true,
            Some(Ordering::Equal) => !range.1.exclusive,
            _ => false,
        },
    };
    lo_ok && hi_ok
}

/// Smallest and largest integers inside `range`, `None` meaning unbounded.
/// Returns `Err(())` when the range holds no integer.
fn integer_span(range: (Bound<'_>, Bound<'_>)) -> Result<(Option<i128>, Option<i128>), ()> {
    let lo = range.0.value.map(|v| match v {
        Scalar::Integer(i) => i128::from(*i) + i128::from(range.0.exclusive),
        other => {
            let x = other.as_f64().unwrap_or(f64::NAN);
            let c = x.ceil();
            (if c == x && range.0.exclusive { c + 1.0 } else { c }) as i128
        }
    });
    let hi = range.1.value.map(|v| match v {
        Scalar::Integer(i) => i128::from(*i) - i128::from(range.1.exclusive),
        other => {
            let x = other.as_f64().unwrap_or(f64::NAN);
            let f = x.floor();
            (if f == x && range.1.exclusive { f - 1.0 } else { f }) as i128
        }
    });
    match (lo, hi) {
        (Some(l), Some(h)) if l > h => Err(()),
        _ => Ok((lo, hi)),
    }
}

fn int_scalar(i: i128) -> Scalar {
    match i64::try_from(i) {
        Ok(v) => Scalar::Integer(v),
        Err(_) => Scalar::Real(i as f64),
    }
}

fn range_not_contained(
    producer: (Bound<'_>, Bound<'_>),
    producer_set: Option<&[Scalar]>,
    integral: bool,
    consumer: (Bound<'_>, Bound<'_>),
) -> Option<String> {
    if consumer.0.value.is_none() && consumer.1.value.is_none() {
        return None;
    }
    if let Some(set) = producer_set {
        let outside: Vec<String> = set
            .iter()
            .filter(|v| !satisfies(v, consumer))
            .map(ToString::to_string)
            .collect();
        return (!outside.is_empty()).then(|| {
            format!(
                "producer values {{{}}} fall outside {}",
                outside.join(", "),
                describe_range(consumer)
            )
        });
    }
    let contained = if integral {
        match integer_span(producer) {
            Err(()) => true,
            Ok((lo, hi)) => {
                let lo_ok = match lo {
                    Some(l) => satisfies_side(&int_scalar(l), consumer.0, true),
                    None => consumer.0.value.is_none(),
                };
                let hi_ok = match hi {
                    Some(h) => satisfies_side(&int_scalar(h), consumer.1, false),
                    None => consumer.1.value.is_none(),
                };
                lo_ok && hi_ok
            }
        }
    } else {
        side_contained(producer.0, consumer.0, true) && side_contained(producer.1, consumer.1, false)
    };
    (!contained).then(|| {
        format!(
            "producer range {} is not inside consumer range {}",
            describe_range(producer),
            describe_range(consumer)
        )
    })
}

fn satisfies_side(value: &Scalar, bound: Bound<'_>, lower: bool) -> bool {
    let Some(b) = bound.value else { return true };
    match cmp_numbers(value, b) {
        Some(Ordering::Equal) => !bound.exclusive,
        Some(Ordering::Greater) => lower,
        Some(Ordering::Less) => !lower,
        None => false,
    }
}

/// Is the producer's bound on one side at least as tight as the consumer's?
fn side_contained(producer: Bound<'_>, consumer: Bound<'_>, lower: bool) -> bool {
    let Some(c) = consumer.value else { return true };
    let Some(p) = producer.value else { return false };
    match cmp_numbers(p, c) {
        Some(Ordering::Equal) => producer.exclusive || !consumer.exclusive,
        Some(Ordering::Greater) => lower,
        Some(Ordering::Less) => !lower,
        None => false,
    }
}

fn value_set_not_contained(
    producer_range: (Bound<'_>, Bound<'_>),
    producer_set: Option<&[Scalar]>,
    producer_type: Option<&DataType>,
    consumer_set: Option<&[Scalar]>,
) -> Option<String> {
    let consumer_set = consumer_set?;
    let listed = || {
        consumer_set
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    };
    if let Some(set) = producer_set {
        let missing: Vec<String> = set
            .iter()
            .filter(|v| !consumer_set.contains(v))
            .map(ToString::to_string)
            .collect();
        return (!missing.is_empty()).then(|| {
            format!(
                "producer values {{{}}} are not in the consumer set {{{}}}",
                missing.join(", "),
                listed()
            )
        });
    }
    // without a set, the producer's range must be finite and enumerable
    let enumerated: Option<Vec<Scalar>> = match producer_type {
        Some(DataType::Boolean) => Some(vec![Scalar::Boolean(false), Scalar::Boolean(true)]),
        Some(DataType::Integer) => match integer_span(producer_range) {
            Err(()) => Some(Vec::new()),
            Ok((Some(lo), Some(hi))) if hi - lo < MAX_ENUMERATED => Some((lo..=hi).map(int_scalar).collect()),
            Ok(_) => None,
        },
        _ => None,
    };
    match enumerated {
        Some(values) => {
            let missing: Vec<String> = values
                .iter()
                .filter(|v| !consumer_set.contains(v))
                .map(ToString::to_string)
                .collect();
            (!missing.is_empty()).then(|| {
                format!(
                    "producer values {{{}}} are not in the consumer set {{{}}}",
                    missing.join(", "),
                    listed()
                )
            })
        }
        None => Some(format!(
            "producer declares no value set, consumer accepts only {{{}}}",
            listed()
        )),
    }
}

fn unit_mismatch(producer: Option<&UnitSpec>, consumer: Option<&UnitSpec>) -> Option<String> {
    let (p, c) = (producer?, consumer?);
    let label = |u: &UnitSpec| {
        u.uri
            .clone()
            .or_else(|| u.name.clone())
            .or_else(|| u.unit_type.clone().map(|t| format!("type {t}")))
            .unwrap_or_else(|| "unnamed unit".into())
    };
    if c.has_identity() && p.has_identity() {
        return (!p.same_unit(c))
            .then(|| format!("producer unit {} differs from consumer unit {}", label(p), label(c)));
    }
    if let (false, Some(ct)) = (c.has_identity(), &c.unit_type) {
        let ok = p
            .unit_type
            .as_ref()
            .is_some_and(|pt| pt.to_lowercase() == ct.to_lowercase());
        return (!ok).then(|| format!("consumer expects unit type {ct}, producer declares {}", label(p)));
    }
    None
}
