//! CodeMeta crosswalk for the info section, and the info-file reader.
//!
//! | info field                | CodeMeta term          |
//! |---------------------------|------------------------|
//! | `title`                   | `name`                 |
//! | `version`                 | `version`              |
//! | `description`             | `description`          |
//! | `contact`, `x-authors`    | `author`               |
//! | `license`                 | `license`              |
//! | `x-first-release`         | `dateCreated`          |
//! | `x-programming-lang`      | `programmingLanguage`  |
//! | `x-repository`            | `codeRepository`       |
//! | `x-keywords`              | `keywords`             |
//! | `x-reference-publication` | `referencePublication` |
//!
//! CodeMeta terms without a counterpart are kept in the info section as
//! `x-codemeta-<term>` and restored on the way back.

use serde_json::{json, Map, Value as Json};
use thiserror::Error;

use super::parse::{info_from_value, ParseError};
use crate::diagnostic::{normalize, Diagnostic, NodePath};
use crate::model::{License, Person, RawValue, SoftwareInfo};

pub const CODEMETA_CONTEXT: &str = "https://doi.org/10.5063/schema/codemeta-2.0";

const EXTENSION_PREFIX: &str = "x-codemeta-";

/// Version assumed when a CodeMeta record has none.
pub const FALLBACK_VERSION: &str = "0.0.0";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CodeMetaError {
    #[error("a CodeMeta record must be a JSON object")]
    NotAnObject,
    #[error("the CodeMeta record has no `name`")]
    MissingName,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InfoFileError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    CodeMeta(#[from] CodeMetaError),
}

impl InfoFileError {
    pub fn code(&self) -> &'static str {
        match self {
            InfoFileError::Parse(e) => e.code(),
            InfoFileError::CodeMeta(CodeMetaError::NotAnObject) => "codemeta-not-an-object",
            InfoFileError::CodeMeta(CodeMetaError::MissingName) => "codemeta-missing-name",
        }
    }
}

fn person_json(p: &Person) -> Json {
    let mut m = Map::new();
    m.insert("@type".into(), "Person".into());
    if let Some(n) = &p.name {
        m.insert("name".into(), n.clone().into());
    }
    if let Some(e) = &p.email {
        m.insert("email".into(), e.clone().into());
    }
    if let Some(u) = &p.url {
        m.insert("url".into(), u.clone().into());
    }
    Json::Object(m)
}

/// Builds a CodeMeta record. Info extensions other than `x-codemeta-*`
/// have no CodeMeta term; each is reported and left out.
pub fn info_to_codemeta(info: &SoftwareInfo) -> (Json, Vec<Diagnostic>) {
    let mut diags = Vec::new();
    let mut m = Map::new();
    m.insert("@context".into(), CODEMETA_CONTEXT.into());
    m.insert("@type".into(), "SoftwareSourceCode".into());
    m.insert("name".into(), info.title.clone().into());
    m.insert("version".into(), info.version.clone().into());
    let mut text = |key: &str, v: &Option<String>| {
        if let Some(v) = v {
            m.insert(key.into(), v.clone().into());
        }
    };
    text("description", &info.description);
    text("dateCreated", &info.first_release);
    text("programmingLanguage", &info.programming_language);
    text("codeRepository", &info.repository);
    text("referencePublication", &info.reference_publication);
    if !info.authors.is_empty() {
        m.insert(
            "author".into(),
            Json::Array(info.authors.iter().map(person_json).collect()),
        );
    }
    if let Some(l) = &info.license {
        let v = match &l.url {
            None => Json::String(l.name.clone()),
            Some(url) => json!({"@type": "CreativeWork", "name": l.name, "url": url}),
        };
        m.insert("license".into(), v);
    }
    if !info.keywords.is_empty() {
        m.insert("keywords".into(), info.keywords.clone().into());
    }
    let base = NodePath::root().child("info");
    for (key, raw) in &info.extensions {
        match key.strip_prefix(EXTENSION_PREFIX) {
            Some(term) if !term.is_empty() && !m.contains_key(term) => {
                m.insert(term.to_owned(), serde_json::to_value(raw).unwrap_or(Json::Null));
            }
            _ => diags.push(Diagnostic::info(
                "unmapped-field",
                base.child(key),
                format!("`{key}` has no CodeMeta counterpart and is left out"),
            )),
        }
    }
    (Json::Object(m), diags)
}

/// Pretty JSON with sorted keys and two-space indentation.
pub fn codemeta_to_string(record: &Json) -> String {
    let mut s = serde_json::to_string_pretty(record).unwrap_or_default();
    s.push('\n');
    s
}

fn json_text(v: &Json) -> Option<String> {
    match v {
        Json::String(s) => Some(s.clone()),
        Json::Number(n) => Some(n.to_string()),
        Json::Bool(b) => Some(b.to_string()),
        _ => None,
    }
}

fn person_from_json(v: &Json) -> Option<Person> {
    match v {
        Json::String(s) => Some(Person {
            name: Some(s.clone()),
            ..Person::default()
        }),
        Json::Object(o) => {
            let name = o.get("name").and_then(json_text).or_else(|| {
                let parts: Vec<String> = ["givenName", "familyName"]
                    .iter()
                    .filter_map(|k| o.get(*k).and_then(json_text))
                    .collect();
                (!parts.is_empty()).then(|| parts.join(" "))
            });
            let url = o.get("url").or_else(|| o.get("@id")).and_then(json_text);
            Some(Person {
                name,
                email: o.get("email").and_then(json_text),
                url,
            })
        }
        _ => None,
    }
}

/// Reads a CodeMeta record into an info section.
pub fn codemeta_to_info(record: &Json) -> Result<(SoftwareInfo, Vec<Diagnostic>), CodeMetaError> {
    let obj = record.as_object().ok_or(CodeMetaError::NotAnObject)?;
    let mut diags = Vec::new();
    let base = NodePath::root().child("info");
    let title = obj.get("name").and_then(json_text).ok_or(CodeMetaError::MissingName)?;
    let version = obj
        .get("version")
        .or_else(|| obj.get("softwareVersion"))
        .and_then(json_text);
    let version = version.unwrap_or_else(|| {
        diags.push(Diagnostic::warning(
            "missing-version",
            base.child("version"),
            format!("the CodeMeta record has no version; `{FALLBACK_VERSION}` is used"),
        ));
        FALLBACK_VERSION.to_owned()
    });
    let mut info = SoftwareInfo::new(title, version);

    for (term, v) in obj {
        let mut keep = false;
        match term.as_str() {
            "@context" | "name" | "version" | "softwareVersion" => {}
            "@type" => {
                if v.as_str() != Some("SoftwareSourceCode") {
                    diags.push(Diagnostic::warning(
                        "codemeta-type",
                        base.clone(),
                        format!("expected @type SoftwareSourceCode, found {v}"),
                    ));
                }
            }
            "description" => {
                info.description = json_text(v).or_else(|| {
                    keep = true;
                    None
                })
            }
            "dateCreated" => {
                info.first_release = json_text(v).or_else(|| {
                    keep = true;
                    None
                })
            }
            "codeRepository" => {
                info.repository = json_text(v).or_else(|| {
                    keep = true;
                    None
                })
            }
            "referencePublication" => {
                info.reference_publication = json_text(v).or_else(|| {
                    keep = true;
                    None
                })
            }
            "programmingLanguage" => {
                info.programming_language = match v {
                    Json::Object(o) => o.get("name").and_then(json_text),
                    Json::Array(items) if items.len() == 1 => json_text(&items[0]),
                    other => json_text(other),
                };
                keep = info.programming_language.is_none();
            }
            "author" => {
                let items = match v {
                    Json::Array(items) => items.iter().collect(),
                    single => vec![single],
                };
                info.authors = items.into_iter().filter_map(person_from_json).collect();
            }
            "license" => {
                info.license = match v {
                    Json::Object(o) => o.get("name").and_then(json_text).map(|name| License {
                        name,
                        url: o.get("url").or_else(|| o.get("@id")).and_then(json_text),
                    }),
                    other => json_text(other).map(|name| License { name, url: None }),
                };
                keep = info.license.is_none();
            }
            "keywords" => match v {
                Json::Array(items) => info.keywords = items.iter().filter_map(json_text).collect(),
                Json::String(s) => {
                    info.keywords = s
                        .split(',')
                        .map(|k| k.trim().to_owned())
                        .filter(|k| !k.is_empty())
                        .collect()
                }
                _ => keep = true,
            },
            _ => keep = true,
        }
        if keep {
            let raw: RawValue = serde_yaml::to_value(v).unwrap_or(RawValue::Null);
            info.extensions.insert(format!("{EXTENSION_PREFIX}{term}"), raw);
        }
    }
    diags.extend(crate::model::check_info_section(&info));
    normalize(&mut diags);
    Ok((info, diags))
}

/// Reads an info file: a bare info mapping, an `info:` wrapper, or a
/// CodeMeta record (JSON, recognised by `@context` or `@type`).
pub fn read_info_file(text: &str) -> Result<(SoftwareInfo, Vec<Diagnostic>), InfoFileError> {
    let root: RawValue = serde_yaml::from_str(text).map_err(|e| ParseError::YamlSyntax(e.to_string()))?;
    let map = root
        .as_mapping()
        .ok_or_else(|| ParseError::MissingInfoSection("the file is not a mapping".into()))?;
    if map.contains_key("@context") || map.contains_key("@type") {
        let json = serde_json::to_value(&root).map_err(|_| CodeMetaError::NotAnObject)?;
        return Ok(codemeta_to_info(&json)?);
    }
    match map.get("info") {
        Some(inner) => Ok(info_from_value(inner)?),
        None => Ok(info_from_value(&root)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SoftwareInfo {
        let mut info = SoftwareInfo::new("FINE", "2.2.2");
        info.first_release = Some("2018-11-12".into());
        info.programming_language = Some("Python".into());
        info.license = Some(License {
            name: "MIT".into(),
            url: Some("https://opensource.org/licenses/MIT".into()),
        });
        info.authors.push(Person {
            name: Some("A. Author".into()),
            email: Some("a@example.org".into()),
            url: None,
        });
        info.keywords = vec!["energy".into(), "optimization".into()];
        info
    }

    #[test]
    fn record_shape() {
        let (record, diags) = info_to_codemeta(&sample());
        assert!(diags.is_empty());
        assert_eq!(record["@context"], CODEMETA_CONTEXT);
        assert_eq!(record["@type"], "SoftwareSourceCode");
        assert_eq!(record["name"], "FINE");
        assert_eq!(record["dateCreated"], "2018-11-12");
        assert_eq!(record["license"]["@type"], "CreativeWork");
        assert_eq!(record["author"][0]["email"], "a@example.org");
    }

    #[test]
    fn round_trip_keeps_mapped_fields_and_codemeta_extras() {
        let mut info = sample();
        info.extensions
            .insert("x-codemeta-funding".into(), RawValue::String("EU".into()));
        let (record, _) = info_to_codemeta(&info);
        assert_eq!(record["funding"], "EU");
        let (back, diags) = codemeta_to_info(&record).unwrap();
        assert!(diags.is_empty(), "{diags:?}");
        assert_eq!(back, info);
    }

    #[test]
    fn unmapped_fields_are_reported() {
        let mut info = sample();
        info.extensions.insert("x-internal".into(), RawValue::Bool(true));
        let (record, diags) = info_to_codemeta(&info);
        assert!(record.get("x-internal").is_none());
        assert_eq!(diags[0].code, "unmapped-field");
    }

    #[test]
    fn missing_name_and_version() {
        assert_eq!(
            codemeta_to_info(&json!({"version": "1"})),
            Err(CodeMetaError::MissingName)
        );
        let (info, diags) = codemeta_to_info(&json!({"name": "x"})).unwrap();
        assert_eq!(info.version, FALLBACK_VERSION);
        assert_eq!(diags[0].code, "missing-version");
    }

    #[test]
    fn info_file_shapes() {
        let bare = "title: FINE\nversion: 2.2.2\n";
        let wrapped = "info:\n  title: FINE\n  version: 2.2.2\n";
        let codemeta =
            r#"{"@context": "https://doi.org/10.5063/schema/codemeta-2.0", "name": "FINE", "version": "2.2.2"}"#;
        let a = read_info_file(bare).unwrap().0;
        assert_eq!(a, read_info_file(wrapped).unwrap().0);
        assert_eq!(a, read_info_file(codemeta).unwrap().0);
        assert_eq!(read_info_file("- a").unwrap_err().code(), "missing-info-section");
    }
}
