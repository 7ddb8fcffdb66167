//! One line per acceptance criterion; exits non-zero if any fails.

mod common;

use std::path::Path;
use std::time::{Duration, Instant};

use datadesc::exchange::{codemeta_to_info, emit_document, info_to_codemeta, parse_document, parse_document_bytes};
use datadesc::export::{export, render_docs, DocsFormat, ExportTarget};
use datadesc::merge::{merge, merge_fragments, MergePolicy};
use datadesc::model::{DataDescDocument, DataType, Scalar, SoftwareInfo, VariableDescription};
use datadesc::source::{extract_interface, parse_source, SourceUnit};
use datadesc::validate::{validate_value, DataValue};
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;
use rand::{Rng, SeedableRng};
use serde_yaml::{Mapping, Value};

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn ensure(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn ac1() -> Outcome {
    let start = Instant::now();
    let parsed = parse_document(common::FINE_YAML).map_err(|e| e.to_string())?;
    let errors = parsed.diagnostics.iter().filter(|d| d.is_error()).count();
    ensure(errors == 0, format!("{errors} parse errors"))?;
    let first = emit_document(&parsed.document).map_err(|e| e.to_string())?;
    let again = parse_document(&first).map_err(|e| e.to_string())?;
    ensure(again.document == parsed.document, "re-parsed document differs")?;
    for _ in 0..10 {
        let doc = parse_document(common::FINE_YAML).map_err(|e| e.to_string())?.document;
        ensure(
            emit_document(&doc).map_err(|e| e.to_string())? == first,
            "emission is not byte-identical",
        )?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), format!("took {elapsed:?}"))?;
    Ok(format!("0 errors, identical over 10 runs, {elapsed:.2?}"))
}

fn ac2() -> Outcome {
    let (tree, _) = parse_source(&SourceUnit::new("fine_esm.py", common::FINE_SOURCE)).map_err(|e| e.to_string())?;
    let fine = common::fine();
    let got = extract_interface(&[tree], fine.info.clone()).map_err(|e| e.to_string())?;
    let esm = got.document.class("EnergySystemModel").ok_or("no EnergySystemModel")?;
    let n = esm.properties.get("numberOfTimeSteps").ok_or("no numberOfTimeSteps")?;
    ensure(n.data_type == Some(DataType::Integer), "type")?;
    ensure(n.default_value == Some(Scalar::Integer(8760)), "default")?;
    ensure(n.minimum == Some(Scalar::Integer(0)) && n.exclusive_minimum, "minimum")?;
    ensure(esm.required.contains("numberOfTimeSteps"), "required")?;
    ensure(
        got.document.components == fine.components,
        "components differ from the YAML fixture",
    )?;
    Ok("numberOfTimeSteps: integer, default 8760, 0 < value, required".into())
}

fn ac3() -> Outcome {
    let n = VariableDescription::typed("numberOfTimeSteps", DataType::Integer)
        .with_minimum(0, true)
        .with_default(8760);
    let method = VariableDescription::typed("clusterMethod", DataType::String).with_value_set(["averaging", "k_means"]);
    let lon = VariableDescription::typed("longitude", DataType::Number)
        .with_minimum(-180.0, false)
        .with_maximum(180.0, false);
    let file = VariableDescription::typed("fileName", DataType::String).with_regex("^[A-Za-z0-9_]+$");
    let vectors: Vec<(&VariableDescription, DataValue, bool)> = vec![
        (&n, 8760.into(), true),
        (&n, 0.into(), false),
        (&n, (-1).into(), false),
        (&method, "averaging".into(), true),
        (&method, "median".into(), false),
        (&lon, (-180.0).into(), true),
        (&lon, 180.0.into(), true),
        (&lon, 180.5.into(), false),
        (&file, "My_File_01".into(), true),
        (&file, "my file!".into(), false),
    ];
    for (desc, value, expected) in &vectors {
        ensure(
            validate_value(value, desc).valid == *expected,
            format!("{} = {value}", desc.name),
        )?;
    }
    ensure(
        validate_value(&0.into(), &n).error_codes() == ["exclusive-bound"],
        "0 must be an exclusive-bound error",
    )?;
    let mut checked = 0;
    for min in [None, Some(-4i64), Some(0), Some(3)] {
        for max in [None, Some(-4i64), Some(0), Some(3)] {
            for xmin in [false, true] {
                for xmax in [false, true] {
                    let mut d = VariableDescription::typed("v", DataType::Integer);
                    if let Some(m) = min {
                        d = d.with_minimum(m, xmin);
                    }
                    if let Some(m) = max {
                        d = d.with_maximum(m, xmax);
                    }
                    for v in -10i64..=10 {
                        let lo = min.map_or(true, |m| if xmin { v > m } else { v >= m });
                        let hi = max.map_or(true, |m| if xmax { v < m } else { v <= m });
                        ensure(
                            validate_value(&v.into(), &d).valid == (lo && hi),
                            format!("oracle mismatch at {v}"),
                        )?;
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{} vectors, {checked} oracle cases", vectors.len()))
}

fn ac4() -> Outcome {
    let fine = common::fine();
    let tree = datadesc::exchange::document_to_value(&fine);
    let mut head = tree.as_mapping().ok_or("not a mapping")?.clone();
    let components = head.remove("components").ok_or("no components")?;
    let mut fragments = vec![Value::Mapping(head)];
    for (name, class) in components
        .get("schemas")
        .and_then(Value::as_mapping)
        .ok_or("no schemas")?
    {
        let mut schemas = Mapping::new();
        schemas.insert(name.clone(), class.clone());
        let mut c = Mapping::new();
        c.insert("schemas".into(), Value::Mapping(schemas));
        let mut f = Mapping::new();
        f.insert("components".into(), Value::Mapping(c));
        fragments.push(Value::Mapping(f));
    }
    let split = merge_fragments(&fragments, MergePolicy::Error).map_err(|e| e.to_string())?;
    ensure(split.conflicts.is_empty(), "split merge has conflicts")?;
    ensure(
        split.merged.as_ref() == Some(&fine),
        "split merge differs from the fixture",
    )?;

    let twin = DataDescDocument::new(fine.info.clone());
    let id = merge(&[fine.clone(), twin], MergePolicy::Error).map_err(|e| e.to_string())?;
    ensure(
        id.is_clean() && id.merged.as_ref() == Some(&fine),
        "empty twin is not an identity",
    )?;

    let mut bumped = fine.clone();
    bumped.info.version = "2.3.0".into();
    let conflict = merge(&[fine, bumped], MergePolicy::Error).map_err(|e| e.to_string())?;
    ensure(
        conflict.conflicts.len() == 1,
        format!("{} conflicts", conflict.conflicts.len()),
    )?;
    ensure(
        conflict.conflicts[0].path == "info/version",
        conflict.conflicts[0].path.clone(),
    )?;
    Ok(format!(
        "{} fragments merge cleanly; 1 conflict at info/version",
        fragments.len()
    ))
}

fn ac5() -> Outcome {
    let (record, _) = info_to_codemeta(&common::fine().info);
    ensure(
        record["name"] == "FINE - A Framework for Integrated Energy System Assessment",
        "name",
    )?;
    ensure(record["version"] == "2.2.2", "version")?;
    ensure(record["dateCreated"] == "2018-11-12", "dateCreated")?;
    ensure(record["programmingLanguage"] == "Python", "programmingLanguage")?;
    let mut runner = TestRunner::deterministic();
    let strategy = common::info();
    for i in 0..200 {
        let info: SoftwareInfo = strategy.new_tree(&mut runner).map_err(|e| e.to_string())?.current();
        let (record, _) = info_to_codemeta(&info);
        let (back, _) = codemeta_to_info(&record).map_err(|e| e.to_string())?;
        let mut expected = info;
        expected.extensions.retain(|k, _| k.starts_with("x-codemeta-"));
        ensure(back == expected, format!("round trip {i} differs"))?;
    }
    Ok("fixture record correct; 200 info round trips".into())
}

fn ac6() -> Outcome {
    let doc = common::fine();
    let pages = render_docs(&doc, DocsFormat::Markdown).map_err(|e| e.to_string())?;
    let text: String = pages
        .iter()
        .map(|(_, b)| String::from_utf8_lossy(b).into_owned())
        .collect();
    let mut names = Vec::new();
    for (cname, class) in &doc.components {
        names.push(cname.clone());
        names.extend(class.properties.keys().cloned());
        for (fname, f) in &class.functions {
            names.push(fname.clone());
            names.extend(f.parameters.keys().cloned());
        }
    }
    names.extend(["8760", "averaging", "ItemMinimumValue"].map(String::from));
    for name in &names {
        ensure(text.contains(name.as_str()), format!("`{name}` missing"))?;
    }
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/golden");
    let mut files = 0;
    for target in ExportTarget::ALL {
        let (set, _) = export(&doc, target).map_err(|e| e.to_string())?;
        for (path, bytes) in set.iter() {
            let expected =
                std::fs::read(golden.join(target.as_str()).join(path)).map_err(|e| format!("{path}: {e}"))?;
            ensure(
                expected == bytes,
                format!("{}/{path} differs from golden", target.as_str()),
            )?;
            files += 1;
        }
    }
    Ok(format!("{} names present; {files} files equal golden", names.len()))
}

fn ac7() -> Outcome {
    let start = Instant::now();
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    let seeds = [common::FINE_YAML.as_bytes(), common::FINE_SOURCE.as_bytes()];
    for i in 0..10_000 {
        let bytes: Vec<u8> = if i % 2 == 0 {
            let len = rng.gen_range(0..512);
            (0..len).map(|_| rng.gen()).collect()
        } else {
            let mut b = seeds[(i / 2) % 2].to_vec();
            for _ in 0..rng.gen_range(1..16) {
                let at = rng.gen_range(0..b.len());
                b[at] = rng.gen();
            }
            b.truncate(rng.gen_range(0..=b.len()));
            b
        };
        let outcome = std::panic::catch_unwind(|| {
            let _ = parse_document_bytes(&bytes);
            if let Ok(unit) = SourceUnit::from_bytes("fuzz.py", &bytes) {
                if let Ok((tree, _)) = parse_source(&unit) {
                    let _ = extract_interface(&[tree], SoftwareInfo::new("T", "1"));
                }
            }
        });
        ensure(outcome.is_ok(), format!("panic on input {i}"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), format!("took {elapsed:?}"))?;
    Ok(format!("10000 inputs, no panics, {elapsed:.2?}"))
}

fn main() {
    std::panic::set_hook(Box::new(|_| {}));
    let criteria: [Criterion; 7] = [
        ("AC1", "exchange round trip", ac1),
        ("AC2", "source extraction", ac2),
        ("AC3", "instance validation", ac3),
        ("AC4", "merge", ac4),
        ("AC5", "CodeMeta crosswalk", ac5),
        ("AC6", "documentation export", ac6),
        ("AC7", "robustness", ac7),
    ];
    let mut failed = 0;
    for (id, name, run) in criteria {
        match std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into())) {
            Ok(detail) => println!("{id} PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("{id} FAIL {name}: {why}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
