mod common;

use std::path::Path;

use datadesc::export::{
    build_registry_payload, export, render_docs, DocsFormat, ExportTarget, FileSet, PACKAGE_FILE, REGISTRY_FILE,
};
use proptest::prelude::*;

fn golden(target: ExportTarget) -> Vec<(String, Vec<u8>)> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures/golden")
        .join(target.as_str());
    let mut out = Vec::new();
    let mut stack = vec![root.clone()];
    while let Some(dir) = stack.pop() {
        for entry in std::fs::read_dir(&dir).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(&root).unwrap().to_string_lossy().replace('\\', "/");
                out.push((rel, std::fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}

fn owned(files: &FileSet) -> Vec<(String, Vec<u8>)> {
    files.iter().map(|(p, b)| (p.to_owned(), b.to_vec())).collect()
}

#[test]
fn fixture_exports_match_golden_files() {
    let doc = common::fine();
    for target in ExportTarget::ALL {
        let (files, _) = export(&doc, target).unwrap();
        assert_eq!(owned(&files), golden(target), "{}", target.as_str());
    }
}

#[test]
fn docs_mention_every_interface_name() {
    let doc = common::fine();
    for format in [DocsFormat::Markdown, DocsFormat::Html] {
        let pages = render_docs(&doc, format).unwrap();
        let all: String = pages
            .iter()
            .map(|(_, b)| String::from_utf8_lossy(b).into_owned())
            .collect();
        for (cname, class) in &doc.components {
            assert!(all.contains(cname.as_str()), "{cname}");
            for p in class.properties.keys() {
                assert!(all.contains(p.as_str()), "{p}");
            }
            for (fname, f) in &class.functions {
                assert!(all.contains(fname.as_str()), "{fname}");
                for p in f.parameters.keys() {
                    assert!(all.contains(p.as_str()), "{p}");
                }
            }
        }
        for needle in ["8760", "averaging", "ItemMinimumValue"] {
            assert!(all.contains(needle), "{needle}");
        }
    }
}

#[test]
fn html_pages_are_self_contained() {
    let pages = render_docs(&common::fine(), DocsFormat::Html).unwrap();
    for (path, bytes) in pages.iter() {
        let text = std::str::from_utf8(bytes).unwrap();
        assert!(text.starts_with("<!DOCTYPE html>"), "{path}");
        assert!(!text.contains("http://") && !text.contains("<script"), "{path}");
    }
}

#[test]
fn registry_record_lists_functions() {
    let files = build_registry_payload(&common::fine(), ExportTarget::RegistryRecord).unwrap();
    let record: serde_json::Value = serde_json::from_slice(files.get(REGISTRY_FILE).unwrap()).unwrap();
    assert_eq!(
        record["functionNames"],
        serde_json::json!([
            "aggregateTemporally",
            "readNetCDFtoEnergySystemModel",
            "removeComponent"
        ])
    );
    assert_eq!(record["version"], "2.2.2");
}

#[test]
fn package_stub_is_valid_toml() {
    let files = build_registry_payload(&common::fine(), ExportTarget::PackageMetadata).unwrap();
    let table: toml::Table = files.text(PACKAGE_FILE).unwrap().parse().unwrap();
    assert_eq!(table["project"]["version"].as_str(), Some("2.2.2"));
}

#[test]
fn write_to_creates_the_tree() {
    let dir = std::env::temp_dir().join(format!("datadesc-export-{}", std::process::id()));
    let pages = render_docs(&common::fine(), DocsFormat::Markdown).unwrap();
    pages.write_to(&dir).unwrap();
    assert!(dir.join("classes/EnergySystemModel.md").is_file());
    std::fs::remove_dir_all(&dir).unwrap();
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exports_are_deterministic_and_complete(doc in common::document()) {
        for target in ExportTarget::ALL {
            let (a, _) = export(&doc, target).unwrap();
            let (b, _) = export(&doc.clone(), target).unwrap();
            prop_assert_eq!(owned(&a), owned(&b));
        }
        let pages = render_docs(&doc, DocsFormat::Markdown).unwrap();
        prop_assert_eq!(pages.len(), doc.components.len() + 1);
        let registry = build_registry_payload(&doc, ExportTarget::RegistryRecord).unwrap();
        let record: serde_json::Value = serde_json::from_slice(registry.get(REGISTRY_FILE).unwrap()).unwrap();
        let names = record["functionNames"].as_array().unwrap().len();
        let mut expected: Vec<&String> = doc.components.values().flat_map(|c| c.functions.keys()).collect();
        expected.sort();
        expected.dedup();
        prop_assert_eq!(names, expected.len());
        let package = build_registry_payload(&doc, ExportTarget::PackageMetadata).unwrap();
        prop_assert!(package.text(PACKAGE_FILE).unwrap().parse::<toml::Table>().is_ok());
    }
}
