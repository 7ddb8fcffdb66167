//! Attribute key vocabulary.
//!
//! Every interpreted key has one canonical spelling per context. Lookup is
//! case-insensitive and also accepts the aliases listed here (mostly the
//! plain JSON Schema spellings such as `minimum` or `enum`). Emission always
//! writes the canonical spelling.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KeyContext {
    Info,
    Class,
    Function,
    Variable,
    Dimension,
    Unit,
}

#[derive(Debug, Clone, Copy)]
pub struct KeyEntry {
    pub context: KeyContext,
    pub canonical: &'static str,
    pub aliases: &'static [&'static str],
}

const fn k(context: KeyContext, canonical: &'static str, aliases: &'static [&'static str]) -> KeyEntry {
    KeyEntry {
        context,
        canonical,
        aliases,
    }
}

use KeyContext::*;

pub const KEYS: &[KeyEntry] = &[
    k(Info, "title", &[]),
    k(Info, "version", &[]),
    k(Info, "description", &[]),
    k(Info, "contact", &[]),
    k(Info, "license", &[]),
    k(
        Info,
        "x-first-release",
        &["x-firstRelease", "x-first_release", "x-dateCreated"],
    ),
    k(
        Info,
        "x-programming-lang",
        &["x-programmingLanguage", "x-programming-language"],
    ),
    k(Info, "x-repository", &["x-codeRepository"]),
    k(Info, "x-keywords", &[]),
    k(Info, "x-reference-publication", &["x-referencePublication"]),
    k(Info, "x-authors", &[]),
    k(Class, "description", &[]),
    k(Class, "type", &[]),
    k(Class, "x-URI", &[]),
    k(Class, "x-IsPartOfInterface", &[]),
    k(Class, "properties", &[]),
    k(Class, "required", &[]),
    k(Class, "x-functions", &[]),
    k(Function, "description", &[]),
    k(Function, "x-IsPartOfInterface", &[]),
    k(Function, "properties", &["parameters"]),
    k(Function, "required", &[]),
    k(Function, "return", &["returns", "x-return"]),
    k(Variable, "description", &[]),
    k(Variable, "type", &["x-DataType"]),
    k(Variable, "$ref", &[]),
    k(Variable, "x-URI", &[]),
    k(Variable, "x-Unit", &[]),
    k(Variable, "x-UnitType", &[]),
    k(Variable, "x-FileFormat", &[]),
    k(Variable, "x-CharacterEncoding", &[]),
    k(Variable, "x-NetCDFFolders", &[]),
    k(Variable, "x-ExcelSheets", &[]),
    k(Variable, "x-DefaultValue", &["default"]),
    k(Variable, "x-MinimumValue", &["minimum"]),
    k(Variable, "x-ExclusiveMinimum", &["exclusiveMinimum"]),
    k(Variable, "x-MaximumValue", &["maximum"]),
    k(Variable, "x-ExclusiveMaximum", &["exclusiveMaximum"]),
    k(Variable, "x-RegularExpression", &["pattern"]),
    k(Variable, "x-ValueSet", &["enum"]),
    k(Variable, "x-ValueIncrement", &[]),
    k(Variable, "x-VariableRole", &[]),
    k(Variable, "properties", &[]),
    k(Variable, "required", &[]),
    k(Variable, "x-dimensions", &[]),
    k(Dimension, "Description", &[]),
    k(Dimension, "URI", &[]),
    k(Dimension, "DataType", &["type"]),
    k(Dimension, "Unit", &[]),
    k(Dimension, "UnitType", &[]),
    k(Dimension, "ItemMinimumValue", &["HasMinimumValue"]),
    k(Dimension, "ItemMaximumValue", &["HasMaximumValue"]),
    k(Dimension, "ValueSet", &[]),
    k(Dimension, "ValueIncrement", &[]),
    k(Unit, "Name", &[]),
    k(Unit, "Description", &[]),
    k(Unit, "URI", &[]),
    k(Unit, "UnitType", &[]),
];

/// How a key was recognised.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeyMatch {
    Canonical(&'static str),
    Alias(&'static str),
}

impl KeyMatch {
    pub fn canonical(self) -> &'static str {
        match self {
            KeyMatch::Canonical(c) | KeyMatch::Alias(c) => c,
        }
    }
}

pub fn lookup(context: KeyContext, key: &str) -> Option<KeyMatch> {
    let entries = KEYS.iter().filter(|e| e.context == context);
    for e in entries.clone() {
        if e.canonical.eq_ignore_ascii_case(key) {
            return Some(KeyMatch::Canonical(e.canonical));
        }
    }
    for e in entries {
        if e.aliases.iter().any(|a| a.eq_ignore_ascii_case(key)) {
            return Some(KeyMatch::Alias(e.canonical));
        }
    }
    None
}

pub fn canonical_key(context: KeyContext, key: &str) -> Option<&'static str> {
    lookup(context, key).map(KeyMatch::canonical)
}

/// Canonical variable key for a source-annotation keyword, which may drop
/// the `x-` prefix (`MinimumValue` for `x-MinimumValue`).
pub fn annotation_key(key: &str) -> Option<&'static str> {
    canonical_key(Variable, key).or_else(|| canonical_key(Variable, &format!("x-{key}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn spellings_are_unambiguous_per_context() {
        for ctx in [Info, Class, Function, Variable, Dimension, Unit] {
            let mut seen = HashSet::new();
            for e in KEYS.iter().filter(|e| e.context == ctx) {
                for spelling in std::iter::once(&e.canonical).chain(e.aliases) {
                    assert!(seen.insert(spelling.to_ascii_lowercase()), "{ctx:?}: {spelling} twice");
                }
            }
        }
    }

    #[test]
    fn every_spelling_maps_back_to_its_canonical() {
        for e in KEYS {
            assert_eq!(lookup(e.context, e.canonical), Some(KeyMatch::Canonical(e.canonical)));
            assert_eq!(
                lookup(e.context, &e.canonical.to_uppercase()),
                Some(KeyMatch::Canonical(e.canonical))
            );
            for a in e.aliases {
                assert_eq!(lookup(e.context, a), Some(KeyMatch::Alias(e.canonical)));
            }
        }
    }

    #[test]
    fn lookups() {
        assert_eq!(canonical_key(Variable, "X-MINIMUMVALUE"), Some("x-MinimumValue"));
        assert_eq!(canonical_key(Variable, "enum"), Some("x-ValueSet"));
        assert_eq!(canonical_key(Dimension, "HasMinimumValue"), Some("ItemMinimumValue"));
        assert_eq!(canonical_key(Variable, "x-Whatever"), None);
        assert_eq!(annotation_key("MinimumValue"), Some("x-MinimumValue"));
        assert_eq!(annotation_key("Dimensions"), Some("x-dimensions"));
        assert_eq!(annotation_key("Description"), Some("description"));
        assert_eq!(annotation_key("DataType"), Some("type"));
    }
}
