mod common;

use datadesc::model::{DataType, DimensionDescription, Scalar, VariableDescription};
use datadesc::validate::{
    resolve_target, validate_dimensions, validate_target, validate_value, DataValue, Dimensioned, Target,
};
use proptest::prelude::*;

fn bounded(min: Option<i64>, xmin: bool, max: Option<i64>, xmax: bool) -> VariableDescription {
    let mut v = VariableDescription::typed("n", DataType::Integer);
    if let Some(m) = min {
        v = v.with_minimum(m, xmin);
    }
    if let Some(m) = max {
        v = v.with_maximum(m, xmax);
    }
    v
}

fn as_number(mut v: VariableDescription) -> VariableDescription {
    v.data_type = Some(DataType::Number);
    v
}

fn oracle(v: i64, min: Option<i64>, xmin: bool, max: Option<i64>, xmax: bool) -> bool {
    let lo = min.map_or(true, |m| if xmin { v > m } else { v >= m });
    let hi = max.map_or(true, |m| if xmax { v < m } else { v <= m });
    lo && hi
}

#[test]
fn bounds_agree_with_brute_force_oracle() {
    let edges = [None, Some(-3), Some(0), Some(4)];
    for min in edges {
        for max in edges {
            for xmin in [false, true] {
                for xmax in [false, true] {
                    let d = bounded(min, xmin, max, xmax);
                    for v in -10..=10 {
                        let r = validate_value(&v.into(), &d);
                        assert_eq!(
                            r.valid,
                            oracle(v, min, xmin, max, xmax),
                            "{v} {min:?} {xmin} {max:?} {xmax}"
                        );
                        let real = validate_value(&(v as f64).into(), &as_number(bounded(min, xmin, max, xmax)));
                        assert_eq!(real.valid, oracle(v, min, xmin, max, xmax), "{v}.0");
                    }
                }
            }
        }
    }
}

#[test]
fn fixture_vectors() {
    let doc = common::fine();
    let Ok(Target::Variable(n)) = resolve_target(&doc, "EnergySystemModel.numberOfTimeSteps") else {
        panic!("target");
    };
    assert!(validate_value(&8760.into(), n).valid);
    assert_eq!(validate_value(&0.into(), n).error_codes(), ["exclusive-bound"]);
    assert!(!validate_value(&(-1).into(), n).valid);

    let agg = resolve_target(&doc, "EnergySystemModel.aggregateTemporally").unwrap();
    let record = |method: &str| DataValue::record([("clusterMethod", DataValue::from(method))]);
    let ok = validate_target(&doc, agg, &record("averaging"));
    assert!(ok.valid, "{:?}", ok.diagnostics);
    let bad = validate_target(&doc, agg, &record("median"));
    assert_eq!(bad.error_codes(), ["value-set"]);
}

#[test]
fn averaging_value_set() {
    let d =
        VariableDescription::typed("representationMethod", DataType::String).with_value_set(["averaging", "medoid"]);
    assert!(validate_value(&"averaging".into(), &d).valid);
    assert_eq!(validate_value(&"median".into(), &d).error_codes(), ["value-set"]);
}

#[test]
fn longitude_range() {
    let d = VariableDescription::typed("longitude", DataType::Number)
        .with_minimum(-180.0, false)
        .with_maximum(180.0, false);
    assert!(validate_value(&(-180.0).into(), &d).valid);
    assert!(validate_value(&180.0.into(), &d).valid);
    assert!(validate_value(&180i64.into(), &d).valid);
    assert_eq!(validate_value(&180.5.into(), &d).error_codes(), ["range"]);
}

#[test]
fn file_name_pattern() {
    let d = VariableDescription::typed("fileName", DataType::String).with_regex("^[A-Za-z0-9_]+$");
    assert!(validate_value(&"My_File_01".into(), &d).valid);
    assert_eq!(validate_value(&"my file!".into(), &d).error_codes(), ["regex"]);
    let unanchored = VariableDescription::typed("fileName", DataType::String).with_regex("[A-Za-z0-9_]+");
    assert!(!validate_value(&"my file!".into(), &unanchored).valid);
}

#[test]
fn dimension_item_bounds() {
    let dims = vec![DimensionDescription::new("timeStep")
        .with_index_type(DataType::Integer)
        .with_item_range(Some(Scalar::Integer(0)), None)];
    let ok = Dimensioned::new(["timeStep"]).with(vec![0i64.into()], 1.0).unwrap();
    assert!(validate_dimensions(&ok, &dims).valid);
    let bad = Dimensioned::new(["timeStep"]).with(vec![(-1i64).into()], 1.0).unwrap();
    assert!(!validate_dimensions(&bad, &dims).valid);
}

proptest! {
    #[test]
    fn integer_bounds_match_oracle(
        v in -1000i64..1000,
        min in proptest::option::of(-100i64..100),
        max in proptest::option::of(-100i64..100),
        xmin: bool,
        xmax: bool,
    ) {
        let d = bounded(min, xmin, max, xmax);
        prop_assert_eq!(validate_value(&v.into(), &d).valid, oracle(v, min, xmin, max, xmax));
    }

    #[test]
    fn independent_violations_are_all_reported(in_set: bool, matches: bool) {
        let d = VariableDescription::typed("s", DataType::String)
            .with_regex("^[a-z]+$")
            .with_value_set(["abc", "ABC"]);
        let value = match (in_set, matches) {
            (true, true) => "abc",
            (true, false) => "ABC",
            (false, true) => "xyz",
            (false, false) => "XYZ",
        };
        let expected = usize::from(!in_set) + usize::from(!matches);
        prop_assert_eq!(validate_value(&value.into(), &d).error_codes().len(), expected);
    }

    #[test]
    fn validator_is_total_on_generated_documents(doc in common::document(), n in any::<i64>(), s in "\\PC{0,8}") {
        for class in doc.components.values() {
            for p in class.properties.values() {
                let _ = validate_value(&n.into(), p);
                let _ = validate_value(&s.as_str().into(), p);
            }
        }
    }
}
