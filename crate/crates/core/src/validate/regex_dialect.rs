//! The portable regular-expression subset used by `x-RegularExpression`.
//!
//! Allowed: literals, escapes, character classes, anchors, quantifiers
//! (greedy and lazy), alternation and groups (capturing or `(?:...)`).
//! Rejected: backreferences, lookaround, inline flags, named groups,
//! Unicode property classes and the `\A`/`\z` anchors. Matching is always
//! against the whole string.

use regex::Regex;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegexDialectError {
    #[error("construct `{construct}` at offset {offset} is outside the portable regex subset")]
    NonPortable { construct: String, offset: usize },
    #[error("invalid regular expression: {0}")]
    Syntax(String),
}

/// Compiles `pattern` as an anchored (full-string) matcher.
pub fn compile(pattern: &str) -> Result<Regex, RegexDialectError> {
    check_portable(pattern)?;
    Regex::new(&format!("^(?:{pattern})$")).map_err(|e| RegexDialectError::Syntax(e.to_string()))
}

pub fn check_portable(pattern: &str) -> Result<(), RegexDialectError> {
    let chars: Vec<(usize, char)> = pattern.char_indices().collect();
    let mut in_class = false;
    let mut i = 0;
    let reject = |offset: usize, construct: &str| {
        Err(RegexDialectError::NonPortable {
            construct: construct.to_owned(),
            offset,
        })
    };
    while i < chars.len() {
        let (offset, c) = chars[i];
        match c {
            '\\' => {
                let next = chars.get(i + 1).map(|&(_, n)| n);
                match next {
                    Some(d @ '1'..='9') if !in_class => return reject(offset, &format!("\\{d}")),
                    Some(n @ ('k' | 'p' | 'P' | 'A' | 'z' | 'Z' | 'G')) => return reject(offset, &format!("\\{n}")),
                    _ => {}
                }
                i += 2;
                continue;
            }
            '[' if !in_class => {
                in_class = true;
                // a leading `]` or `^]` is literal
                if matches!(chars.get(i + 1), Some((_, '^'))) {
                    i += 1;
                }
                if matches!(chars.get(i + 1), Some((_, ']'))) {
                    i += 1;
                }
            }
            ']' if in_class => in_class = false,
            '(' if !in_class
                && matches!(chars.get(i + 1), Some((_, '?')))
                && !matches!(chars.get(i + 2), Some((_, ':'))) =>
            {
                let end = chars.get(i + 3).map(|&(o, _)| o).unwrap_or(pattern.len());
                return reject(offset, &pattern[offset..end]);
            }
            _ => {}
        }
        i += 1;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filename_pattern_is_full_match() {
        let re = compile("^[A-Za-z0-9_]+$").unwrap();
        assert!(re.is_match("My_File_01"));
        assert!(!re.is_match("my file!"));
        let unanchored = compile("[a-z]+").unwrap();
        assert!(unanchored.is_match("abc"));
        assert!(!unanchored.is_match("abc1"));
        let alt = compile("a|bc").unwrap();
        assert!(alt.is_match("bc"));
        assert!(!alt.is_match("abc"));
    }

    #[test]
    fn non_portable_constructs_are_rejected() {
        for p in [
            r"(a)\1",
            r"(?=a)",
            r"(?!a)",
            r"(?<=a)b",
            r"(?i)abc",
            r"(?P<n>a)",
            r"\p{L}",
            r"\Aabc\z",
        ] {
            assert!(
                matches!(compile(p), Err(RegexDialectError::NonPortable { .. })),
                "{p} should be rejected"
            );
        }
    }

    #[test]
    fn portable_constructs_are_accepted() {
        for p in [
            r"(?:ab)+?",
            r"[\d.]{1,3}",
            r"[(?=]",
            r"\\1",
            r"^\w+\s*$",
            r"[]a]",
            r"x{2,}",
        ] {
            assert!(compile(p).is_ok(), "{p} should compile");
        }
        assert!(matches!(compile("(a"), Err(RegexDialectError::Syntax(_))));
    }
}
