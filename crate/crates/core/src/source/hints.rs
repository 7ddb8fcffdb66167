//! Type hints to data types.
//!
//! | hint                          | data type          |
//! |-------------------------------|--------------------|
//! | `int`                         | integer            |
//! | `float`                       | number             |
//! | `str`                         | string             |
//! | `bool`                        | boolean            |
//! | `list`, `List[...]`, `tuple`  | array              |
//! | `dict`, `Dict[...]`           | object             |
//! | a declared class              | `$ref` to it       |
//! | anything else                 | opaque, kept as written |
//!
//! `Optional[X]`, `X | None` and `Union[X, None]` map like `X`.

use std::collections::HashSet;

use crate::model::{DataType, ReferencePath};

#[derive(Debug, Clone, PartialEq)]
pub struct MappedType {
    pub data_type: DataType,
    /// False when the hint fell through to an opaque type.
    pub recognised: bool,
}

/// Splits `A, B[C, D], E` at top-level commas.
fn split_args(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out.retain(|a| !a.is_empty());
    out
}

fn split_union(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            '|' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

fn is_none(s: &str) -> bool {
    matches!(s, "None" | "NoneType" | "type(None)")
}

/// Maps hint text to a data type. `declared` holds the class names known
/// to the extraction, both plain and qualified.
pub fn map_type_hint(hint: &str, declared: &HashSet<String>) -> MappedType {
    let hint = hint.trim();
    let union = split_union(hint);
    if union.len() > 1 {
        let rest: Vec<&str> = union.into_iter().filter(|p| !is_none(p)).collect();
        if rest.len() == 1 {
            return map_type_hint(rest[0], declared);
        }
        return opaque(hint);
    }
    let (head, args) = match hint.find('[') {
        Some(i) if hint.ends_with(']') => (hint[..i].trim(), Some(&hint[i + 1..hint.len() - 1])),
        _ => (hint, None),
    };
    let head = head.strip_prefix("typing.").unwrap_or(head);
    match (head, args) {
        ("Optional", Some(a)) => {
            let parts = split_args(a);
            if parts.len() == 1 {
                return map_type_hint(parts[0], declared);
            }
            opaque(hint)
        }
        ("Union", Some(a)) => {
            let parts: Vec<&str> = split_args(a).into_iter().filter(|p| !is_none(p)).collect();
            if parts.len() == 1 {
                return map_type_hint(parts[0], declared);
            }
            opaque(hint)
        }
        ("int", None) => known(DataType::Integer),
        ("float", None) => known(DataType::Number),
        ("str", None) => known(DataType::String),
        ("bool", None) => known(DataType::Boolean),
        ("list" | "List" | "tuple" | "Tuple" | "Sequence" | "set" | "Set", _) => known(DataType::Array),
        ("dict" | "Dict" | "Mapping", _) => known(DataType::Object),
        (name, None) if declared.contains(name) => known(DataType::ClassReference(ReferencePath::to_class(name))),
        (name, None) if !matches!(DataType::from_keyword(name), DataType::Opaque(_)) => {
            known(DataType::from_keyword(name))
        }
        _ => opaque(hint),
    }
}

fn known(data_type: DataType) -> MappedType {
    MappedType {
        data_type,
        recognised: true,
    }
}

fn opaque(hint: &str) -> MappedType {
    MappedType {
        data_type: DataType::Opaque(hint.to_owned()),
        recognised: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(h: &str) -> DataType {
        let declared: HashSet<String> = ["Component".to_owned(), "Outer.Inner".to_owned()].into();
        map_type_hint(h, &declared).data_type
    }

    #[test]
    fn table() {
        assert_eq!(map("int"), DataType::Integer);
        assert_eq!(map("float"), DataType::Number);
        assert_eq!(map("str"), DataType::String);
        assert_eq!(map("bool"), DataType::Boolean);
        assert_eq!(map("List[int]"), DataType::Array);
        assert_eq!(map("typing.Dict[str, List[int]]"), DataType::Object);
        assert_eq!(
            map("Component"),
            DataType::ClassReference(ReferencePath::to_class("Component"))
        );
        assert_eq!(
            map("Outer.Inner"),
            DataType::ClassReference(ReferencePath::to_class("Outer.Inner"))
        );
    }

    #[test]
    fn optional_forms() {
        assert_eq!(map("Optional[str]"), DataType::String);
        assert_eq!(map("str | None"), DataType::String);
        assert_eq!(map("Union[None, int]"), DataType::Integer);
        assert_eq!(map("Union[int, str]"), DataType::Opaque("Union[int, str]".into()));
    }

    #[test]
    fn unknown_hints_are_opaque() {
        let m = map_type_hint("SomeUnknownFrameType", &HashSet::new());
        assert_eq!(m.data_type, DataType::Opaque("SomeUnknownFrameType".into()));
        assert!(!m.recognised);
        assert_eq!(map("pd.DataFrame"), DataType::Opaque("pd.DataFrame".into()));
    }
}
