//! Package-index stub and research-graph record.

use serde_json::{json, Value as Json};
use toml::{Table, Value as Toml};

use crate::model::DataDescDocument;

/// `pyproject.toml`-style `[project]` table derived from the info section.
pub(crate) fn package_stub(doc: &DataDescDocument) -> String {
    let info = &doc.info;
    let mut project = Table::new();
    project.insert("name".into(), Toml::String(info.title.clone()));
    project.insert("version".into(), Toml::String(info.version.clone()));
    if let Some(d) = &info.description {
        project.insert("description".into(), Toml::String(d.clone()));
    }
    if !info.authors.is_empty() {
        let authors = info
            .authors
            .iter()
            .map(|p| {
                let mut t = Table::new();
                if let Some(n) = &p.name {
                    t.insert("name".into(), Toml::String(n.clone()));
                }
                if let Some(e) = &p.email {
                    t.insert("email".into(), Toml::String(e.clone()));
                }
                Toml::Table(t)
            })
            .collect();
        project.insert("authors".into(), Toml::Array(authors));
    }
    if let Some(l) = &info.license {
        let mut t = Table::new();
        t.insert("text".into(), Toml::String(l.name.clone()));
        project.insert("license".into(), Toml::Table(t));
    }
    if !info.keywords.is_empty() {
        project.insert(
            "keywords".into(),
            Toml::Array(info.keywords.iter().cloned().map(Toml::String).collect()),
        );
    }
    let mut urls = Table::new();
    if let Some(r) = &info.repository {
        urls.insert("Repository".into(), Toml::String(r.clone()));
    }
    if let Some(u) = info.license.as_ref().and_then(|l| l.url.clone()) {
        urls.insert("License".into(), Toml::String(u));
    }
    if !urls.is_empty() {
        project.insert("urls".into(), Toml::Table(urls));
    }
    let mut root = Table::new();
    root.insert("project".into(), Toml::Table(project));
    toml::to_string(&root).unwrap_or_default()
}

/// Flat record of subject, property, value triples, plus the same facts
/// as top-level lists.
pub(crate) fn registry_record(doc: &DataDescDocument) -> Json {
    let info = &doc.info;
    let software = info.title.as_str();
    let mut triples = vec![
        json!({"subject": software, "property": "softwareName", "value": software}),
        json!({"subject": software, "property": "version", "value": info.version}),
    ];
    if let Some(l) = &info.programming_language {
        triples.push(json!({"subject": software, "property": "programmingLanguage", "value": l}));
    }
    let mut function_names = Vec::new();
    let mut parameter_names = Vec::new();
    let mut classes: Vec<_> = doc.components.iter().collect();
    classes.sort_by(|a, b| a.0.cmp(b.0));
    for (cname, class) in classes {
        triples.push(json!({"subject": software, "property": "hasClass", "value": cname}));
        let mut functions: Vec<_> = class.functions.iter().collect();
        functions.sort_by(|a, b| a.0.cmp(b.0));
        for (fname, f) in functions {
            let qualified = format!("{cname}.{fname}");
            triples.push(json!({"subject": cname, "property": "hasFunction", "value": qualified}));
            function_names.push(fname.clone());
            let mut params: Vec<&String> = f.parameters.keys().collect();
            params.sort();
            for p in params {
                triples.push(json!({"subject": qualified, "property": "hasParameter", "value": p}));
                parameter_names.push(p.clone());
            }
        }
    }
    function_names.sort();
    function_names.dedup();
    parameter_names.sort();
    parameter_names.dedup();
    json!({
        "softwareName": software,
        "version": info.version,
        "programmingLanguage": info.programming_language,
        "functionNames": function_names,
        "parameterNames": parameter_names,
        "triples": triples,
    })
}
