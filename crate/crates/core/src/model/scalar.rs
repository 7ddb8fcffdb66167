use std::cmp::Ordering;
use std::fmt;

/// A single literal value: the payload of defaults, value sets, bounds and
/// dimension indices.
///
/// Integers and reals compare by mathematical value, so `Integer(0)` equals
/// `Real(0.0)`. The ordering is total (booleans, then numbers, then text;
/// NaN sorts after every other number and equals itself).
#[derive(Debug, Clone)]
pub enum Scalar {
    Text(String),
    Integer(i64),
    Real(f64),
    Boolean(bool),
}

impl Scalar {
    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Scalar::Integer(i) => Some(i as f64),
            Scalar::Real(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            Scalar::Text(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, Scalar::Integer(_) | Scalar::Real(_))
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Scalar::Text(_) => "string",
            Scalar::Integer(_) => "integer",
            Scalar::Real(_) => "number",
            Scalar::Boolean(_) => "boolean",
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Scalar::Boolean(_) => 0,
            Scalar::Integer(_) | Scalar::Real(_) => 1,
            Scalar::Text(_) => 2,
        }
    }
}

/// Exact comparison of an `i64` with an `f64`, without rounding the integer.
fn cmp_int_real(i: i64, r: f64) -> Ordering {
    if r.is_nan() {
        return Ordering::Less;
    }
    if r >= 9_223_372_036_854_775_808.0 {
        return Ordering::Less;
    }
    if r < -9_223_372_036_854_775_808.0 {
        return Ordering::Greater;
    }
    let floor = r.floor();
    // floor is now within i64 range
    let fi = floor as i64;
    match i.cmp(&fi) {
        Ordering::Equal if r > floor => Ordering::Less,
        other => other,
    }
}

pub(crate) fn cmp_numbers(a: &Scalar, b: &Scalar) -> Option<Ordering> {
    Some(match (a, b) {
        (Scalar::Integer(x), Scalar::Integer(y)) => x.cmp(y),
        (Scalar::Real(x), Scalar::Real(y)) => x.total_cmp(y),
        (Scalar::Integer(x), Scalar::Real(y)) => cmp_int_real(*x, *y),
        (Scalar::Real(x), Scalar::Integer(y)) => cmp_int_real(*y, *x).reverse(),
        _ => return None,
    })
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.rank().cmp(&other.rank()) {
            Ordering::Equal => {}
            o => return o,
        }
        match (self, other) {
            (Scalar::Boolean(a), Scalar::Boolean(b)) => a.cmp(b),
            (Scalar::Text(a), Scalar::Text(b)) => a.cmp(b),
            (Scalar::Real(a), Scalar::Real(b)) if a.is_nan() || b.is_nan() => a.is_nan().cmp(&b.is_nan()),
            // -0.0 and 0.0 are the same number
            (Scalar::Real(a), Scalar::Real(b)) if *a == *b => Ordering::Equal,
            _ => cmp_numbers(self, other).unwrap_or(Ordering::Equal),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Scalar {}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Text(s) => f.write_str(s),
            Scalar::Integer(i) => write!(f, "{i}"),
            Scalar::Real(r) => write!(f, "{}", crate::exchange::yaml::format_real(*r)),
            Scalar::Boolean(b) => write!(f, "{b}"),
        }
    }
}

impl From<&str> for Scalar {
    fn from(s: &str) -> Self {
        Scalar::Text(s.to_owned())
    }
}

impl From<String> for Scalar {
    fn from(s: String) -> Self {
        Scalar::Text(s)
    }
}

impl From<i64> for Scalar {
    fn from(i: i64) -> Self {
        Scalar::Integer(i)
    }
}

impl From<f64> for Scalar {
    fn from(r: f64) -> Self {
        Scalar::Real(r)
    }
}

impl From<bool> for Scalar {
    fn from(b: bool) -> Self {
        Scalar::Boolean(b)
    }
}
