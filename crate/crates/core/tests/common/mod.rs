#![allow(dead_code)]

use datadesc::model::{
    ClassDescription, DataDescDocument, DataType, DimensionDescription, FunctionDescription, License, Person, RawValue,
    ReferencePath, Role, Scalar, SoftwareInfo, UnitSpec, VariableDescription,
};
use proptest::collection::{btree_set, vec};
use proptest::option;
use proptest::prelude::*;

pub const FINE_YAML: &str = include_str!("../fixtures/fine.yaml");
pub const FINE_SOURCE: &str = include_str!("../fixtures/fine_esm.py");

pub fn fine() -> DataDescDocument {
    datadesc::exchange::parse_document(FINE_YAML).unwrap().document
}

/// Text that stresses YAML quoting.
pub fn tricky_text() -> impl Strategy<Value = String> {
    prop_oneof![
        3 => "\\PC{0,16}",
        1 => prop::sample::select(vec![
            "yes", "No", "~", "null", "1.0", "0o17", "-", "- a", ": b", "a: b", "#c", "a #b", "'q'", "\"d\"",
            "[x]", "{y}", "2018-11-12", "  pad", "tab\there", "line\nbreak", "*", "&a", "!t", "%", "@", "`",
        ])
        .prop_map(str::to_owned),
    ]
}

pub fn nonblank_text() -> impl Strategy<Value = String> {
    tricky_text().prop_filter("non-blank", |s| !s.trim().is_empty())
}

pub fn ident() -> impl Strategy<Value = String> {
    "[a-zA-Z][a-zA-Z0-9_]{0,8}"
}

fn date() -> impl Strategy<Value = String> {
    (1970u32..2100, 1u32..=12, 1u32..=28).prop_map(|(y, m, d)| format!("{y:04}-{m:02}-{d:02}"))
}

fn person() -> impl Strategy<Value = Person> {
    (
        option::of(nonblank_text()),
        option::of("[a-z]{1,6}@example\\.org"),
        option::of(Just("https://example.org".to_owned())),
    )
        .prop_map(|(name, email, url)| Person { name, email, url })
}

fn raw_scalar() -> impl Strategy<Value = RawValue> {
    prop_oneof![
        tricky_text().prop_map(RawValue::String),
        any::<i32>().prop_map(|i| RawValue::Number(i.into())),
        any::<bool>().prop_map(RawValue::Bool),
    ]
}

pub fn info() -> impl Strategy<Value = SoftwareInfo> {
    (
        (
            nonblank_text(),
            nonblank_text(),
            option::of(tricky_text()),
            option::of(date()),
        ),
        (
            option::of(nonblank_text()),
            vec(person(), 0..3),
            option::of((
                nonblank_text(),
                option::of(Just("https://opensource.org/licenses/MIT".to_owned())),
            )),
        ),
        (
            option::of(nonblank_text()),
            vec(nonblank_text(), 0..3),
            option::of(nonblank_text()),
        ),
        vec(("x-[a-z]{1,6}", raw_scalar()), 0..3),
    )
        .prop_map(
            |(
                (title, version, description, first_release),
                (lang, authors, license),
                (repo, keywords, reference),
                ext,
            )| {
                let mut info = SoftwareInfo::new(title, version);
                info.description = description;
                info.first_release = first_release;
                info.programming_language = lang;
                info.authors = authors;
                info.license = license.map(|(name, url)| License { name, url });
                info.repository = repo;
                info.keywords = keywords;
                info.reference_publication = reference;
                for (k, v) in ext {
                    if !is_info_key(&k) {
                        info.extensions.insert(k, v);
                    }
                }
                info
            },
        )
}

fn is_info_key(k: &str) -> bool {
    datadesc::exchange::keys::lookup(datadesc::exchange::keys::KeyContext::Info, k).is_some()
}

#[derive(Debug, Clone, Copy)]
pub enum Position {
    Property,
    Parameter,
    Return,
}

fn dimension() -> impl Strategy<Value = DimensionDescription> {
    (
        ident(),
        option::of(tricky_text()),
        option::of(nonblank_text()),
        any::<bool>(),
    )
        .prop_map(|(name, description, unit_type, typed)| {
            let mut d = DimensionDescription::new(name);
            d.description = description;
            d.unit = unit_type.map(UnitSpec::of_type);
            if typed {
                d.index_type = Some(DataType::Integer);
                d.item_minimum = Some(Scalar::Integer(0));
            }
            d
        })
}

/// A variable that satisfies every document invariant on its own.
pub fn variable(name: String, position: Position) -> impl Strategy<Value = VariableDescription> {
    let kind = 0u8..5;
    (
        kind,
        (option::of(tricky_text()), option::of(nonblank_text()), any::<bool>()),
        (
            option::of(-50i64..0),
            option::of(1i64..50),
            any::<bool>(),
            any::<bool>(),
            any::<bool>(),
        ),
        btree_set(ident(), 1..4),
        vec(dimension(), 0..3),
        any::<bool>(),
    )
        .prop_map(
            move |(
                kind,
                (description, unit, explicit_role),
                (min, max, xmin, xmax, with_default),
                set,
                dims,
                with_set,
            )| {
                let mut v = VariableDescription::new(name.clone());
                v.description = description;
                v.unit = unit.map(UnitSpec::named);
                match kind {
                    0 => {
                        v.data_type = Some(DataType::Integer);
                        v.minimum = min.map(Scalar::Integer);
                        v.exclusive_minimum = xmin && min.is_some();
                        v.maximum = max.map(Scalar::Integer);
                        v.exclusive_maximum = xmax && max.is_some();
                        if with_default {
                            v.default_value = Some(Scalar::Integer(0));
                        }
                    }
                    1 => {
                        v.data_type = Some(DataType::Number);
                        v.minimum = min.map(|m| Scalar::Real(m as f64 - 0.5));
                        v.exclusive_minimum = xmin && min.is_some();
                        v.maximum = max.map(|m| Scalar::Real(m as f64));
                        v.exclusive_maximum = xmax && max.is_some();
                        if with_default {
                            v.default_value = Some(Scalar::Real(0.25));
                        }
                    }
                    2 => {
                        v.data_type = Some(DataType::String);
                        let set: Vec<Scalar> = set.into_iter().map(Scalar::Text).collect();
                        if with_set {
                            if with_default {
                                v.default_value = Some(set[0].clone());
                            }
                            v.value_set = Some(set);
                        } else if with_default {
                            v.default_value = set.into_iter().next();
                        } else {
                            v.regular_expression = Some("^[a-z]+$".into());
                        }
                    }
                    3 => {
                        v.data_type = Some(DataType::Boolean);
                        if with_default {
                            v.default_value = Some(Scalar::Boolean(xmin));
                        }
                    }
                    _ => {
                        v.file_format = Some("NetCDF".into());
                    }
                }
                if kind != 3 {
                    v.dimensions = dedup_dims(dims);
                }
                if explicit_role {
                    v.role = Some(match position {
                        Position::Property => Role::Internal,
                        Position::Parameter => Role::Input,
                        Position::Return => Role::Output,
                    });
                }
                v
            },
        )
}

fn dedup_dims(dims: Vec<DimensionDescription>) -> Vec<DimensionDescription> {
    let mut seen = std::collections::HashSet::new();
    dims.into_iter().filter(|d| seen.insert(d.name.clone())).collect()
}

fn members(position: Position) -> impl Strategy<Value = Vec<(VariableDescription, bool)>> {
    btree_set(ident(), 0..4).prop_flat_map(move |names| {
        names
            .into_iter()
            .map(|n| (variable(n, position), any::<bool>()))
            .collect::<Vec<_>>()
    })
}

fn function(name: String, classes: Vec<String>) -> impl Strategy<Value = FunctionDescription> {
    (
        members(Position::Parameter),
        option::of(tricky_text()),
        0usize..3,
        prop::sample::select(if classes.is_empty() {
            vec![String::new()]
        } else {
            classes
        }),
        any::<bool>(),
    )
        .prop_flat_map(move |(params, description, ret_kind, target, part)| {
            let name = name.clone();
            variable("return".into(), Position::Return).prop_map(move |mut ret| {
                let mut f = FunctionDescription::new(name.clone());
                f.description = description.clone();
                f.is_part_of_interface = part;
                for (p, req) in params.clone() {
                    if req {
                        f.required.insert(p.name.clone());
                    }
                    f.parameters.insert(p.name.clone(), p);
                }
                f.return_description = match ret_kind {
                    0 => None,
                    1 if !target.is_empty() => {
                        let mut r = VariableDescription::new("return");
                        r.data_type = Some(DataType::ClassReference(ReferencePath::to_class(&target)));
                        Some(Box::new(r))
                    }
                    _ => {
                        ret.name = "return".into();
                        Some(Box::new(ret))
                    }
                };
                f
            })
        })
}

fn class(name: String, classes: Vec<String>) -> impl Strategy<Value = ClassDescription> {
    (
        members(Position::Property),
        option::of(tricky_text()),
        btree_set(ident(), 0..3),
        option::of(any::<i32>()),
    )
        .prop_flat_map(move |(props, description, fnames, custom)| {
            let name = name.clone();
            let funcs: Vec<_> = fnames.into_iter().map(|f| function(f, classes.clone())).collect();
            funcs.prop_map(move |funcs| {
                let mut c = ClassDescription::new(name.clone());
                c.description = description.clone();
                for (p, req) in props.clone() {
                    if req {
                        c.required.insert(p.name.clone());
                    }
                    c.properties.insert(p.name.clone(), p);
                }
                for f in funcs {
                    c.functions.insert(f.name.clone(), f);
                }
                if let Some(v) = custom {
                    c.extensions.insert("x-custom".into(), RawValue::Number(v.into()));
                }
                c
            })
        })
}

/// A document that passes `check_document`.
pub fn document() -> impl Strategy<Value = DataDescDocument> {
    (info(), btree_set("[A-Z][a-zA-Z0-9]{0,8}", 0..4)).prop_flat_map(|(info, names)| {
        let names: Vec<String> = names.into_iter().collect();
        let classes: Vec<_> = names.iter().map(|n| class(n.clone(), names.clone())).collect();
        classes.prop_map(move |classes| {
            let mut doc = DataDescDocument::new(info.clone());
            for c in classes {
                doc.add_class(c);
            }
            doc
        })
    })
}
