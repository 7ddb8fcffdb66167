//! Canonical YAML writer.
//!
//! Block style throughout with two-space indentation; sequences under a
//! key sit at the key's own indentation (`required:\n- a`). Empty
//! collections are written `{}` / `[]`. Strings stay plain unless a YAML
//! 1.1 or 1.2 reader could take them for something else (numbers, booleans,
//! null, timestamps such as `2018-11-12`), in which case they are
//! single-quoted; strings with line breaks or non-printable characters are
//! double-quoted with escapes. Key order is the order of the input value.

use std::fmt::Write as _;
use std::sync::OnceLock;

use regex::RegexSet;
use serde_yaml::{Mapping, Value};

/// Keys longer than this use the explicit `? key` form.
const MAX_IMPLICIT_KEY: usize = 1000;

pub fn to_string(value: &Value) -> String {
    let mut out = String::new();
    match value {
        Value::Mapping(m) if !m.is_empty() => write_mapping(m, 0, false, &mut out),
        Value::Sequence(s) if !s.is_empty() => write_sequence(s, 0, false, &mut out),
        other => {
            out.push_str(&inline_text(other, false));
            out.push('\n');
        }
    }
    out
}

/// Shortest text that reads back as the same `f64`, always recognisable
/// as a real (`180.0`, not `180`).
pub fn format_real(x: f64) -> String {
    if x.is_nan() {
        ".nan".to_owned()
    } else if x.is_infinite() {
        if x > 0.0 { ".inf" } else { "-.inf" }.to_owned()
    } else {
        let s = format!("{x:?}");
        if s.contains(['.', 'e', 'E']) {
            s
        } else {
            format!("{s}.0")
        }
    }
}

fn is_block_collection(v: &Value) -> bool {
    match v {
        Value::Mapping(m) => !m.is_empty(),
        Value::Sequence(s) => !s.is_empty(),
        _ => false,
    }
}

fn indent(out: &mut String, n: usize) {
    out.extend(std::iter::repeat(' ').take(n));
}

fn write_mapping(map: &Mapping, level: usize, inline_first: bool, out: &mut String) {
    for (i, (k, v)) in map.iter().enumerate() {
        if i > 0 || !inline_first {
            indent(out, level);
        }
        let key = key_text(k);
        match key {
            Some(key) => {
                out.push_str(&key);
                out.push(':');
                write_value_after_indicator(v, level, true, out);
            }
            None => {
                out.push_str("? ");
                out.push_str(&flow_text(k));
                out.push('\n');
                indent(out, level);
                out.push(':');
                write_value_after_indicator(v, level, false, out);
            }
        }
    }
}

/// Writes what follows `key:` (or `:` of an explicit key).
fn write_value_after_indicator(v: &Value, level: usize, compact_sequence: bool, out: &mut String) {
    match v {
        Value::Mapping(m) if !m.is_empty() => {
            out.push('\n');
            write_mapping(m, level + 2, false, out);
        }
        Value::Sequence(s) if !s.is_empty() => {
            out.push('\n');
            let at = if compact_sequence { level } else { level + 2 };
            write_sequence(s, at, false, out);
        }
        Value::Tagged(t) => {
            out.push(' ');
            out.push_str(&t.tag.to_string());
            if is_block_collection(&t.value) {
                out.push('\n');
                match &t.value {
                    Value::Mapping(m) => write_mapping(m, level + 2, false, out),
                    Value::Sequence(s) => write_sequence(s, level + 2, false, out),
                    _ => unreachable!(),
                }
            } else {
                out.push(' ');
                out.push_str(&inline_text(&t.value, false));
                out.push('\n');
            }
        }
        other => {
            out.push(' ');
            out.push_str(&inline_text(other, false));
            out.push('\n');
        }
    }
}

fn write_sequence(seq: &[Value], level: usize, inline_first: bool, out: &mut String) {
    for (i, item) in seq.iter().enumerate() {
        if i > 0 || !inline_first {
            indent(out, level);
        }
        out.push('-');
        match item {
            Value::Mapping(m) if !m.is_empty() => {
                out.push(' ');
                write_mapping(m, level + 2, true, out);
            }
            Value::Sequence(s) if !s.is_empty() => {
                out.push(' ');
                write_sequence(s, level + 2, true, out);
            }
            Value::Tagged(t) if is_block_collection(&t.value) => {
                out.push(' ');
                out.push_str(&t.tag.to_string());
                out.push('\n');
                match &t.value {
                    Value::Mapping(m) => write_mapping(m, level + 2, false, out),
                    Value::Sequence(s) => write_sequence(s, level + 2, false, out),
                    _ => unreachable!(),
                }
            }
            other => {
                out.push(' ');
                out.push_str(&inline_text(other, false));
                out.push('\n');
            }
        }
    }
}

/// Implicit-key text, or `None` when the key needs the explicit form.
fn key_text(k: &Value) -> Option<String> {
    match k {
        Value::Mapping(_) | Value::Sequence(_) | Value::Tagged(_) => None,
        scalar => {
            let text = inline_text(scalar, true);
            (text.len() <= MAX_IMPLICIT_KEY).then_some(text)
        }
    }
}

/// Single-line text for scalars and empty collections.
fn inline_text(v: &Value, flow: bool) -> String {
    match v {
        Value::Null => "null".to_owned(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.to_string()
            } else if let Some(u) = n.as_u64() {
                u.to_string()
            } else {
                format_real(n.as_f64().unwrap_or(f64::NAN))
            }
        }
        Value::String(s) => quote(s, flow),
        Value::Mapping(m) if m.is_empty() => "{}".to_owned(),
        Value::Sequence(s) if s.is_empty() => "[]".to_owned(),
        other => flow_text(other),
    }
}

/// Flow-style text, used for complex mapping keys.
fn flow_text(v: &Value) -> String {
    match v {
        Value::Mapping(m) => {
            let parts: Vec<String> = m
                .iter()
                .map(|(k, v)| format!("? {} : {}", flow_text(k), flow_text(v)))
                .collect();
            format!("{{{}}}", parts.join(", "))
        }
        Value::Sequence(s) => {
            let parts: Vec<String> = s.iter().map(flow_text).collect();
            format!("[{}]", parts.join(", "))
        }
        Value::Tagged(t) => format!("{} {}", t.tag, flow_text(&t.value)),
        scalar => inline_text(scalar, true),
    }
}

fn is_printable(c: char) -> bool {
    matches!(c,
        '\t' | '\n' | '\r' | ' '..='~' | '\u{85}' | '\u{A0}'..='\u{D7FF}' | '\u{E000}'..='\u{FFFD}')
        || c >= '\u{10000}'
}

/// Characters that force double quoting.
fn needs_escape(c: char) -> bool {
    !is_printable(c) || matches!(c, '\t' | '\n' | '\r' | '\u{85}' | '\u{2028}' | '\u{2029}' | '\u{FEFF}')
}

fn ambiguous_plain() -> &'static RegexSet {
    static SET: OnceLock<RegexSet> = OnceLock::new();
    SET.get_or_init(|| {
        RegexSet::new([
            // YAML 1.1 booleans and null
            r"^(?i:yes|no|true|false|on|off|null)$",
            r"^~$",
            // YAML 1.1 integers, including base prefixes, `_` separators and sexagesimals
            r"^[-+]?(0b[0-1_]+|0[0-7_]+|0|[1-9][0-9_]*|0x[0-9a-fA-F_]+|[1-9][0-9_]*(:[0-5]?[0-9])+)$",
            // YAML 1.1 floats
            r"^([-+]?[0-9][0-9_]*\.[0-9_]*([eE][-+]?[0-9]+)?|[-+]?\.[0-9][0-9_]*([eE][-+]?[0-9]+)?|[-+]?[0-9][0-9_]*(:[0-5]?[0-9])+\.[0-9_]*|[-+]?[0-9]+[eE][-+]?[0-9]+)$",
            r"^[-+]?\.(?i:inf|nan)$",
            // timestamps
            r"^[0-9]{4}-[0-9]{1,2}-[0-9]{1,2}([Tt ]|$)",
            // merge and value keys
            r"^(<<|=)$",
        ])
        .expect("static patterns")
    })
}

fn plain_is_safe(s: &str, flow: bool) -> bool {
    let Some(first) = s.chars().next() else {
        return false;
    };
    let last = s.chars().next_back().unwrap_or(first);
    if first.is_whitespace() || last.is_whitespace() || last == ':' {
        return false;
    }
    if "-?:,[]{}#&*!|>'\"%@`".contains(first) {
        return false;
    }
    if s.chars().any(needs_escape) {
        return false;
    }
    if s.contains(": ") || s.contains(" #") {
        return false;
    }
    if flow && s.contains([',', '[', ']', '{', '}']) {
        return false;
    }
    if ambiguous_plain().is_match(s) {
        return false;
    }
    // the reader's own scalar resolution has the last word
    matches!(serde_yaml::from_str::<Value>(s), Ok(Value::String(ref r)) if r == s)
}

pub(crate) fn quote(s: &str, flow: bool) -> String {
    if plain_is_safe(s, flow) {
        return s.to_owned();
    }
    if !s.chars().any(needs_escape) {
        return format!("'{}'", s.replace('\'', "''"));
    }
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\0' => out.push_str("\\0"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\u{85}' => out.push_str("\\N"),
            '\u{2028}' => out.push_str("\\L"),
            '\u{2029}' => out.push_str("\\P"),
            c if needs_escape(c) => {
                let code = c as u32;
                if code <= 0xFF {
                    let _ = write!(out, "\\x{code:02X}");
                } else {
                    let _ = write!(out, "\\u{code:04X}");
                }
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn yaml(s: &str) -> Value {
        serde_yaml::from_str(s).unwrap()
    }

    #[test]
    fn quoting_rules() {
        assert_eq!(quote("2018-11-12", false), "'2018-11-12'");
        assert_eq!(quote("2.2.2", false), "2.2.2");
        assert_eq!(quote("3.0.0", false), "3.0.0");
        assert_eq!(quote("1.0", false), "'1.0'");
        assert_eq!(quote("Python", false), "Python");
        assert_eq!(
            quote("FINE - A Framework for Integrated Energy System Assessment", false),
            "FINE - A Framework for Integrated Energy System Assessment"
        );
        assert_eq!(quote("yes", false), "'yes'");
        assert_eq!(quote("n", false), "n");
        assert_eq!(quote("0o17", false), "'0o17'");
        assert_eq!(quote("1_000", false), "'1_000'");
        assert_eq!(quote("1:30", false), "'1:30'");
        assert_eq!(quote("1", false), "'1'");
        assert_eq!(quote("", false), "''");
        assert_eq!(
            quote("#/components/schemas/Component", false),
            "'#/components/schemas/Component'"
        );
        assert_eq!(quote("$ref", false), "$ref");
        assert_eq!(quote("it's", false), "it's");
        assert_eq!(quote("'q", false), "'''q'");
        assert_eq!(quote("a: b", false), "'a: b'");
        assert_eq!(quote("two\nlines", false), "\"two\\nlines\"");
        assert_eq!(quote("^[A-Za-z0-9_]+$", false), "^[A-Za-z0-9_]+$");
        assert_eq!(quote("a,b", true), "'a,b'");
    }

    #[test]
    fn reals_keep_their_type() {
        assert_eq!(format_real(180.0), "180.0");
        assert_eq!(format_real(-180.5), "-180.5");
        assert_eq!(format_real(0.1), "0.1");
        assert_eq!(format_real(f64::NEG_INFINITY), "-.inf");
        for x in [1e21, 1e-7, 123456789.125, -0.0, f64::MAX, f64::MIN_POSITIVE] {
            let text = format_real(x);
            assert_eq!(yaml(&text).as_f64(), Some(x), "{text}");
        }
    }

    #[test]
    fn layout() {
        let v = yaml("a:\n  b: 1\n  c: [x, y]\nd: []\ne: {}\nf:\n- {g: 1, h: 2}\n- [1, 2]\n");
        assert_eq!(
            to_string(&v),
            "a:\n  b: 1\n  c:\n  - x\n  - y\nd: []\ne: {}\nf:\n- g: 1\n  h: 2\n- - 1\n  - 2\n"
        );
    }

    #[test]
    fn complex_keys_use_explicit_form() {
        let v = yaml("? [1, 2]\n: x\n");
        let text = to_string(&v);
        assert_eq!(text, "? [1, 2]\n: x\n");
        assert_eq!(yaml(&text), v);
    }

    fn arb_string() -> impl Strategy<Value = String> {
        prop_oneof![
            any::<String>(),
            "[ -~]{0,12}",
            Just("null".to_owned()),
            Just("2018-11-12".to_owned()),
            Just("- x".to_owned()),
            Just("0x1F".to_owned()),
            Just("1_000".to_owned()),
            Just(".5".to_owned()),
            Just("12:30".to_owned()),
            Just(" lead".to_owned()),
            Just("a #b".to_owned()),
        ]
    }

    fn arb_value() -> impl Strategy<Value = Value> {
        let leaf = prop_oneof![
            Just(Value::Null),
            any::<bool>().prop_map(Value::Bool),
            any::<i64>().prop_map(|i| Value::Number(i.into())),
            any::<f64>()
                .prop_filter("NaN never equals itself", |f| !f.is_nan())
                .prop_map(|f| Value::Number(f.into())),
            arb_string().prop_map(Value::String),
        ];
        leaf.prop_recursive(4, 48, 6, |inner| {
            prop_oneof![
                prop::collection::vec(inner.clone(), 0..5).prop_map(Value::Sequence),
                prop::collection::vec((arb_string(), inner), 0..5)
                    .prop_map(|kv| { Value::Mapping(kv.into_iter().map(|(k, v)| (Value::String(k), v)).collect()) }),
            ]
        })
    }

    proptest! {
        #[test]
        fn emitted_text_reads_back_identically(v in arb_value()) {
            let text = to_string(&v);
            let back: Value = serde_yaml::from_str(&text)
                .map_err(|e| TestCaseError::fail(format!("{e}\n---\n{text}")))?;
            prop_assert_eq!(back, v, "{}", text);
        }

        #[test]
        fn strings_read_back(s in arb_string()) {
            let v = Value::Mapping([(Value::String(s.clone()), Value::String(s))].into_iter().collect());
            let text = to_string(&v);
            let back: Value = serde_yaml::from_str(&text).unwrap();
            prop_assert_eq!(back, v);
        }
    }
}
