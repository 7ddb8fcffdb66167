mod common;

use datadesc::exchange::{emit_document, parse_document};
use datadesc::model::{DataType, Scalar, SoftwareInfo};
use datadesc::source::{extract_interface, parse_source, Extraction, SourceUnit};
use proptest::prelude::*;

fn extract(files: &[(&str, &str)]) -> Extraction {
    let trees: Vec<_> = files
        .iter()
        .map(|(path, text)| parse_source(&SourceUnit::new(*path, *text)).unwrap().0)
        .collect();
    extract_interface(&trees, SoftwareInfo::new("T", "1")).unwrap()
}

#[test]
fn fixture_source_reproduces_fixture_components() {
    let expected = common::fine();
    let (tree, diags) = parse_source(&SourceUnit::new("fine_esm.py", common::FINE_SOURCE)).unwrap();
    assert!(diags.is_empty(), "{diags:?}");
    let got = extract_interface(&[tree], expected.info.clone()).unwrap();
    assert_eq!(got.document.components, expected.components);
    assert!(got.diagnostics.iter().all(|d| !d.is_error()), "{:?}", got.diagnostics);
}

#[test]
fn fixture_number_of_time_steps_node() {
    let got = extract(&[("fine_esm.py", common::FINE_SOURCE)]);
    let esm = got.document.class("EnergySystemModel").unwrap();
    let n = &esm.properties["numberOfTimeSteps"];
    assert_eq!(n.data_type, Some(DataType::Integer));
    assert_eq!(n.default_value, Some(Scalar::Integer(8760)));
    assert_eq!(n.minimum, Some(Scalar::Integer(0)));
    assert!(n.exclusive_minimum);
    assert!(esm.required.contains("numberOfTimeSteps"));
}

#[test]
fn extraction_is_deterministic_and_reparses() {
    let a = extract(&[("fine_esm.py", common::FINE_SOURCE)]);
    let b = extract(&[("fine_esm.py", common::FINE_SOURCE)]);
    assert_eq!(a, b);
    let text = emit_document(&a.document).unwrap();
    let back = parse_document(&text).unwrap();
    assert!(!back.has_errors(), "{:?}", back.diagnostics);
    assert_eq!(back.document, a.document);
}

#[test]
fn empty_and_comment_only_files() {
    for text in ["", "\n\n", "# nothing here\n", "\"\"\"Module docstring.\"\"\"\n"] {
        let got = extract(&[("m.py", text)]);
        assert!(got.document.components.is_empty(), "{text:?}");
        assert!(got.diagnostics.is_empty(), "{text:?}: {:?}", got.diagnostics);
    }
}

#[test]
fn classes_across_files_are_combined() {
    let got = extract(&[
        ("a.py", "class A:\n    def __init__(self, x: int = 1):\n        pass\n"),
        (
            "b.py",
            "class B:\n    def run(self, a: \"A\") -> float:\n        pass\n",
        ),
    ]);
    let names: Vec<&String> = got.document.components.keys().collect();
    assert_eq!(names, ["A", "B"]);
    let a = &got.document.class("B").unwrap().functions["run"].parameters["a"];
    assert_eq!(a.data_type.as_ref().and_then(|t| t.keyword()), None);
    assert_eq!(a.class_reference().unwrap().target_name().as_deref(), Some("A"));
}

#[test]
fn duplicate_class_across_files_is_an_error() {
    let trees: Vec<_> = [("a.py", "class A:\n    pass\n"), ("b.py", "class A:\n    pass\n")]
        .iter()
        .map(|(p, t)| parse_source(&SourceUnit::new(*p, *t)).unwrap().0)
        .collect();
    let err = extract_interface(&trees, SoftwareInfo::new("T", "1")).unwrap_err();
    assert_eq!(err.code(), "duplicate-class");
}

#[test]
fn unsupported_constructs_are_skipped_not_fatal() {
    let text = "import os\nx = [i for i in range(3)]\nclass A:\n    if True:\n        y = 1\n    def f(self, n: int = 2):\n        return n\n";
    let got = extract(&[("m.py", text)]);
    assert!(got.document.class("A").unwrap().functions.contains_key("f"));
}

#[test]
fn non_utf8_is_reported() {
    let err = SourceUnit::from_bytes("x.py", b"class \xff:\n").unwrap_err();
    assert_eq!(err.code(), "source-syntax");
}

fn python_class(name: &str, params: &[(String, i64, bool)]) -> String {
    let mut out = format!("class {name}:\n");
    for (p, default, exclusive) in params {
        out.push_str(&format!(
            "    @datadesc(\"{p}\", MinimumValue={}, ExclusiveMinimum={})\n",
            default - 1,
            if *exclusive { "True" } else { "False" }
        ));
    }
    let sig: Vec<String> = params.iter().map(|(p, d, _)| format!("{p}: int = {d}")).collect();
    out.push_str(&format!("    def __init__(self, {}):\n        pass\n", sig.join(", ")));
    out
}

proptest! {
    #[test]
    fn decorated_parameters_survive_extraction(
        name in "[A-Z][a-z]{1,6}",
        params in proptest::collection::btree_map("[a-z][a-zA-Z]{1,6}", (-100i64..100, any::<bool>()), 1..5),
    ) {
        let params: Vec<(String, i64, bool)> = params
            .into_iter()
            .filter(|(p, _)| !["if", "in", "is", "or", "as", "def", "for", "and", "not", "del", "try", "else", "elif", "pass", "with", "from", "class", "while", "yield", "raise", "async", "await", "break", "global", "lambda", "import", "return", "assert", "except", "finally", "continue", "nonlocal", "self"].contains(&p.as_str()))
            .map(|(p, (d, x))| (p, d, x))
            .collect();
        prop_assume!(!params.is_empty());
        let text = python_class(&name, &params);
        let got = extract(&[("m.py", &text)]);
        let class = got.document.class(&name).unwrap();
        prop_assert_eq!(class.properties.len(), params.len());
        for (p, d, x) in &params {
            let v = &class.properties[p];
            prop_assert_eq!(&v.data_type, &Some(DataType::Integer));
            prop_assert_eq!(&v.default_value, &Some(Scalar::Integer(*d)));
            prop_assert_eq!(&v.minimum, &Some(Scalar::Integer(d - 1)));
            prop_assert_eq!(v.exclusive_minimum, *x);
        }
        prop_assert!(got.diagnostics.iter().all(|d| !d.is_error()), "{:?}", got.diagnostics);
    }

    #[test]
    fn source_parser_is_total(bytes in proptest::collection::vec(any::<u8>(), 0..512)) {
        if let Ok(unit) = SourceUnit::from_bytes("f.py", &bytes) {
            if let Ok((tree, _)) = parse_source(&unit) {
                let _ = extract_interface(&[tree], SoftwareInfo::new("T", "1"));
            }
        }
    }

    #[test]
    fn python_like_text_is_total(lines in proptest::collection::vec(prop::sample::select(vec![
        "class A:", "    def f(self, x: int = 1):", "        pass", "@datadesc(\"x\", MinimumValue=0)", "    @datadesc(", "    )",
        "def g(a, *b, **c) -> \"A\":", "    x: float = 2.5", "\"\"\"doc", "\"\"\"", "    (", "]", "  ", "\t", "# c", "lambda: 0",
    ]), 0..24)) {
        let text = lines.join("\n");
        if let Ok((tree, _)) = parse_source(&SourceUnit::new("f.py", text)) {
            let _ = extract_interface(&[tree], SoftwareInfo::new("T", "1"));
        }
    }
}
