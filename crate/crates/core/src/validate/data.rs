use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::model::{RawValue, Scalar};

/// A concrete value to check against a description.
#[derive(Debug, Clone, PartialEq)]
pub enum DataValue {
    Scalar(Scalar),
    Record(BTreeMap<String, DataValue>),
    Dimensioned(Dimensioned),
}

/// Values keyed by index tuples along named axes.
///
/// All tuples have one component per axis, and each tuple occurs once.
#[derive(Debug, Clone, PartialEq)]
pub struct Dimensioned {
    axes: Vec<String>,
    entries: BTreeMap<Vec<Scalar>, DataValue>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DataError {
    #[error("index tuple has {got} components but the value has {expected} axes")]
    Arity { expected: usize, got: usize },
    #[error("index tuple ({0}) occurs twice")]
    DuplicateIndex(String),
    #[error("null is not a data value (at {0})")]
    Null(String),
    #[error("mapping keys must be strings (at {0})")]
    NonStringKey(String),
    #[error("malformed dimensioned value at {path}: {message}")]
    Malformed { path: String, message: String },
}

pub(crate) fn format_index(index: &[Scalar]) -> String {
    index.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

impl Dimensioned {
    pub fn new<I, S>(axes: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Dimensioned {
            axes: axes.into_iter().map(Into::into).collect(),
            entries: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, index: Vec<Scalar>, value: DataValue) -> Result<(), DataError> {
        if index.len() != self.axes.len() {
            return Err(DataError::Arity {
                expected: self.axes.len(),
                got: index.len(),
            });
        }
        if self.entries.contains_key(&index) {
            return Err(DataError::DuplicateIndex(format_index(&index)));
        }
        self.entries.insert(index, value);
        Ok(())
    }

    pub fn with(mut self, index: Vec<Scalar>, value: impl Into<DataValue>) -> Result<Self, DataError> {
        self.insert(index, value.into())?;
        Ok(self)
    }

    pub fn axes(&self) -> &[String] {
        &self.axes
    }

    pub fn arity(&self) -> usize {
        self.axes.len()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<Scalar>, &DataValue)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl DataValue {
    pub fn record<I, K>(fields: I) -> DataValue
    where
        I: IntoIterator<Item = (K, DataValue)>,
        K: Into<String>,
    {
        DataValue::Record(fields.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    pub fn as_record(&self) -> Option<&BTreeMap<String, DataValue>> {
        match self {
            DataValue::Record(r) => Some(r),
            _ => None,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            DataValue::Scalar(s) => s.kind_name(),
            DataValue::Record(_) => "record",
            DataValue::Dimensioned(_) => "dimensioned value",
        }
    }

    /// Converts a parsed YAML/JSON value.
    ///
    /// Scalars and mappings map directly. A mapping with exactly the keys
    /// `$axes` and `$entries` is a dimensioned value, each entry being
    /// `{index: [...], value: ...}`. A plain sequence becomes a
    /// one-axis dimensioned value indexed 0, 1, ... on an unnamed axis.
    pub fn from_raw(raw: &RawValue) -> Result<DataValue, DataError> {
        from_raw_at(raw, "")
    }
}

fn child(path: &str, seg: &str) -> String {
    if path.is_empty() {
        seg.to_owned()
    } else {
        format!("{path}/{seg}")
    }
}

fn scalar_from_raw(raw: &RawValue, path: &str) -> Result<Scalar, DataError> {
    match raw {
        RawValue::Bool(b) => Ok(Scalar::Boolean(*b)),
        RawValue::Number(n) => Ok(match n.as_i64() {
            Some(i) => Scalar::Integer(i),
            None => Scalar::Real(n.as_f64().unwrap_or(f64::NAN)),
        }),
        RawValue::String(s) => Ok(Scalar::Text(s.clone())),
        RawValue::Tagged(t) => scalar_from_raw(&t.value, path),
        RawValue::Null => Err(DataError::Null(path.to_owned())),
        _ => Err(DataError::Malformed {
            path: path.to_owned(),
            message: "expected a scalar".into(),
        }),
    }
}

fn from_raw_at(raw: &RawValue, path: &str) -> Result<DataValue, DataError> {
    match raw {
        RawValue::Mapping(m) => {
            let axes = m.get("$axes");
            let entries = m.get("$entries");
            if let (Some(axes), Some(entries), 2) = (axes, entries, m.len()) {
                return dimensioned_from_raw(axes, entries, path);
            }
            let mut out = BTreeMap::new();
            for (k, v) in m {
                let key = match k {
                    RawValue::String(s) => s.clone(),
                    _ => return Err(DataError::NonStringKey(path.to_owned())),
                };
                let value = from_raw_at(v, &child(path, &key))?;
                out.insert(key, value);
            }
            Ok(DataValue::Record(out))
        }
        RawValue::Sequence(items) => {
            let mut dim = Dimensioned::new([""]);
            for (i, item) in items.iter().enumerate() {
                let value = from_raw_at(item, &child(path, &format!("[{i}]")))?;
                dim.insert(vec![Scalar::Integer(i as i64)], value)?;
            }
            Ok(DataValue::Dimensioned(dim))
        }
        other => scalar_from_raw(other, path).map(DataValue::Scalar),
    }
}

fn dimensioned_from_raw(axes: &RawValue, entries: &RawValue, path: &str) -> Result<DataValue, DataError> {
    let malformed = |message: &str| DataError::Malformed {
        path: path.to_owned(),
        message: message.to_owned(),
    };
    let axes = axes
        .as_sequence()
        .ok_or_else(|| malformed("`$axes` must be a list of axis names"))?
        .iter()
        .map(|a| a.as_str().map(str::to_owned))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| malformed("axis names must be strings"))?;
    let mut dim = Dimensioned::new(axes);
    let entries = entries
        .as_sequence()
        .ok_or_else(|| malformed("`$entries` must be a list"))?;
    for entry in entries {
        let index = entry
            .get("index")
            .and_then(RawValue::as_sequence)
            .ok_or_else(|| malformed("each entry needs an `index` list"))?
            .iter()
            .map(|c| scalar_from_raw(c, path))
            .collect::<Result<Vec<_>, _>>()?;
        let value = entry
            .get("value")
            .ok_or_else(|| malformed("each entry needs a `value`"))?;
        let seg = format!("[{}]", format_index(&index));
        let value = from_raw_at(value, &child(path, &seg))?;
        dim.insert(index, value)?;
    }
    Ok(DataValue::Dimensioned(dim))
}

impl From<Scalar> for DataValue {
    fn from(s: Scalar) -> Self {
        DataValue::Scalar(s)
    }
}

impl From<i64> for DataValue {
    fn from(i: i64) -> Self {
        DataValue::Scalar(Scalar::Integer(i))
    }
}

impl From<f64> for DataValue {
    fn from(r: f64) -> Self {
        DataValue::Scalar(Scalar::Real(r))
    }
}

impl From<&str> for DataValue {
    fn from(s: &str) -> Self {
        DataValue::Scalar(Scalar::Text(s.to_owned()))
    }
}

impl From<bool> for DataValue {
    fn from(b: bool) -> Self {
        DataValue::Scalar(Scalar::Boolean(b))
    }
}

impl From<Dimensioned> for DataValue {
    fn from(d: Dimensioned) -> Self {
        DataValue::Dimensioned(d)
    }
}

impl fmt::Display for DataValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DataValue::Scalar(s) => write!(f, "{s}"),
            DataValue::Record(r) => {
                f.write_str("{")?;
                for (i, (k, v)) in r.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{k}: {v}")?;
                }
                f.write_str("}")
            }
            DataValue::Dimensioned(d) => write!(f, "<{} entries over ({})>", d.len(), d.axes.join(", ")),
        }
    }
}
