//! Reading DataDesc YAML into the model.

use indexmap::{IndexMap, IndexSet};
use serde_yaml::{Mapping, Value};
use thiserror::Error;

use super::keys::{lookup, KeyContext, KeyMatch};
use crate::diagnostic::{normalize, Diagnostic, NodePath};
use crate::model::{
    check_document, lint_document, ClassDescription, DataDescDocument, DataType, DimensionDescription, Extensions,
    FileStructure, FileStructureKind, FunctionDescription, License, Person, ReferencePath, Role, Scalar, SoftwareInfo,
    UnitSpec, VariableDescription,
};

/// Errors that stop parsing altogether.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("not valid YAML: {0}")]
    YamlSyntax(String),
    #[error("no usable info section: {0}")]
    MissingInfoSection(String),
    #[error("unsupported OpenAPI version `{0}` (3.0.x and 3.1.x are read)")]
    UnsupportedOpenApiVersion(String),
}

impl ParseError {
    pub fn code(&self) -> &'static str {
        match self {
            ParseError::YamlSyntax(_) => "yaml-syntax",
            ParseError::MissingInfoSection(_) => "missing-info-section",
            ParseError::UnsupportedOpenApiVersion(_) => "unsupported-openapi-version",
        }
    }
}

/// A document together with everything noticed while reading and checking it.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedDocument {
    pub document: DataDescDocument,
    pub diagnostics: Vec<Diagnostic>,
}

impl ParsedDocument {
    pub fn has_errors(&self) -> bool {
        crate::diagnostic::has_errors(&self.diagnostics)
    }
}

/// Standard OpenAPI component kinds other than `schemas`; kept verbatim.
const COMPONENT_KINDS: &[&str] = &[
    "responses",
    "parameters",
    "examples",
    "requestBodies",
    "headers",
    "securitySchemes",
    "links",
    "callbacks",
    "pathItems",
];

pub fn parse_document(text: &str) -> Result<ParsedDocument, ParseError> {
    let value: Value = serde_yaml::from_str(text).map_err(|e| ParseError::YamlSyntax(e.to_string()))?;
    document_from_value(&value)
}

pub fn parse_document_bytes(bytes: &[u8]) -> Result<ParsedDocument, ParseError> {
    let text = std::str::from_utf8(bytes).map_err(|e| ParseError::YamlSyntax(format!("input is not UTF-8: {e}")))?;
    parse_document(text)
}

/// Reads an already-parsed YAML tree, then runs the document checks.
pub fn document_from_value(value: &Value) -> Result<ParsedDocument, ParseError> {
    let (document, mut diagnostics) = read_document(value)?;
    diagnostics.extend(check_document(&document));
    diagnostics.extend(lint_document(&document));
    normalize(&mut diagnostics);
    Ok(ParsedDocument { document, diagnostics })
}

pub(crate) fn read_document(value: &Value) -> Result<(DataDescDocument, Vec<Diagnostic>), ParseError> {
    let root = value
        .as_mapping()
        .ok_or_else(|| ParseError::MissingInfoSection("the document is not a mapping".into()))?;

    let version = match root.get("openapi") {
        None => return Err(ParseError::UnsupportedOpenApiVersion("(missing)".into())),
        Some(v) => scalar_text(v).ok_or_else(|| ParseError::UnsupportedOpenApiVersion(format!("{v:?}")))?,
    };
    if !supported_version(&version) {
        return Err(ParseError::UnsupportedOpenApiVersion(version));
    }
    let info = match root.get("info") {
        Some(Value::Mapping(m)) => m,
        Some(_) => return Err(ParseError::MissingInfoSection("`info` is not a mapping".into())),
        None => return Err(ParseError::MissingInfoSection("`info` is missing".into())),
    };

    let mut r = Reader::default();
    let info = r.info(info, &NodePath::root().child("info"));
    let mut doc = DataDescDocument::new(info);
    doc.openapi_version = version;

    for (k, v) in root {
        let key = r.key(k, &NodePath::root());
        match key.as_str() {
            "openapi" | "info" => {}
            "components" => r.components(v, &mut doc),
            _ => {
                doc.extensions.insert(key, v.clone());
            }
        }
    }
    Ok((doc, r.diags))
}

/// Reads one variable description outside a document.
pub(crate) fn read_variable(name: &str, value: &Value, path: &NodePath) -> (VariableDescription, Vec<Diagnostic>) {
    let mut r = Reader::default();
    let var = r.variable(name, value, path);
    (var, r.diags)
}

/// Reads a bare info mapping (`title`, `version`, ...).
pub fn info_from_value(value: &Value) -> Result<(SoftwareInfo, Vec<Diagnostic>), ParseError> {
    let map = value
        .as_mapping()
        .ok_or_else(|| ParseError::MissingInfoSection("`info` is not a mapping".into()))?;
    let mut r = Reader::default();
    let info = r.info(map, &NodePath::root().child("info"));
    let mut diags = r.diags;
    diags.extend(crate::model::check_info_section(&info));
    normalize(&mut diags);
    Ok((info, diags))
}

fn supported_version(v: &str) -> bool {
    let mut parts = v.split('.');
    matches!((parts.next(), parts.next()), (Some("3"), Some("0" | "1")))
        && parts.all(|p| !p.is_empty() && p.bytes().all(|b| b.is_ascii_digit()))
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Tagged(t) => scalar_text(&t.value),
        _ => None,
    }
}

pub(crate) fn scalar_of(v: &Value) -> Option<Scalar> {
    match v {
        Value::String(s) => Some(Scalar::Text(s.clone())),
        Value::Bool(b) => Some(Scalar::Boolean(*b)),
        Value::Number(n) => Some(match n.as_i64() {
            Some(i) => Scalar::Integer(i),
            None => Scalar::Real(n.as_f64().unwrap_or(f64::NAN)),
        }),
        Value::Tagged(t) => scalar_of(&t.value),
        _ => None,
    }
}

#[derive(Default)]
struct Reader {
    diags: Vec<Diagnostic>,
}

/// Recognised attributes of one mapping, by canonical key, plus the rest.
struct Split<'v> {
    known: IndexMap<&'static str, &'v Value>,
    unknown: Extensions,
}

impl<'v> Split<'v> {
    fn take(&mut self, key: &str) -> Option<&'v Value> {
        self.known.shift_remove(key)
    }
}

impl Reader {
    fn warn(&mut self, code: &str, path: &NodePath, message: impl Into<String>) {
        self.diags.push(Diagnostic::warning(code, path, message));
    }

    fn key(&mut self, k: &Value, path: &NodePath) -> String {
        match scalar_text(k) {
            Some(s) => s,
            None => {
                let text = serde_yaml::to_string(k).unwrap_or_default().trim().to_owned();
                self.warn("invalid-key", path, format!("non-scalar key `{text}` read as text"));
                text
            }
        }
    }

    fn split<'v>(&mut self, map: &'v Mapping, ctx: KeyContext, path: &NodePath) -> Split<'v> {
        let mut known: IndexMap<&'static str, (&'v Value, bool)> = IndexMap::new();
        let mut unknown = Extensions::new();
        for (k, v) in map {
            let key = self.key(k, path);
            match lookup(ctx, &key) {
                Some(m) => {
                    let canonical = m.canonical();
                    let via_alias = matches!(m, KeyMatch::Alias(_));
                    if let Some((_, prev_alias)) = known.get(canonical) {
                        self.warn(
                            "duplicate-attribute",
                            &path.child(canonical),
                            format!("`{key}` repeats `{canonical}`; the canonical spelling is kept"),
                        );
                        if *prev_alias && !via_alias {
                            known.insert(canonical, (v, false));
                        }
                    } else {
                        known.insert(canonical, (v, via_alias));
                    }
                }
                None => {
                    unknown.insert(key, v.clone());
                }
            }
        }
        Split {
            known: known.into_iter().map(|(k, (v, _))| (k, v)).collect(),
            unknown,
        }
    }

    fn text(&mut self, v: &Value, path: &NodePath) -> Option<String> {
        match v {
            Value::Null => None,
            other => {
                let t = scalar_text(other);
                if t.is_none() {
                    self.warn("invalid-value", path, "expected text");
                }
                t
            }
        }
    }

    fn boolean(&mut self, v: &Value, path: &NodePath) -> Option<bool> {
        match v {
            Value::Bool(b) => Some(*b),
            Value::Tagged(t) => self.boolean(&t.value, path),
            _ => {
                self.warn("invalid-value", path, "expected true or false");
                None
            }
        }
    }

    fn scalar(&mut self, v: &Value, path: &NodePath) -> Option<Scalar> {
        let s = scalar_of(v);
        if s.is_none() {
            self.warn("invalid-value", path, "expected a single value");
        }
        s
    }

    fn scalar_list(&mut self, v: &Value, path: &NodePath) -> Option<Vec<Scalar>> {
        match v {
            Value::Sequence(items) => Some(
                items
                    .iter()
                    .enumerate()
                    .filter_map(|(i, item)| self.scalar(item, &path.child(&i.to_string())))
                    .collect(),
            ),
            _ => {
                self.warn("invalid-value", path, "expected a list of values");
                None
            }
        }
    }

    fn name_set(&mut self, v: &Value, path: &NodePath) -> IndexSet<String> {
        match v {
            Value::Sequence(items) => items
                .iter()
                .enumerate()
                .filter_map(|(i, item)| self.text(item, &path.child(&i.to_string())))
                .collect(),
            Value::Null => IndexSet::new(),
            _ => {
                self.warn("invalid-value", path, "expected a list of names");
                IndexSet::new()
            }
        }
    }

    fn mapping<'v>(&mut self, v: &'v Value, path: &NodePath) -> Option<&'v Mapping> {
        match v {
            Value::Mapping(m) => Some(m),
            Value::Null => None,
            Value::Tagged(t) => self.mapping(&t.value, path),
            _ => {
                self.warn("invalid-value", path, "expected a mapping");
                None
            }
        }
    }

    fn person(&mut self, v: &Value, path: &NodePath) -> Option<Person> {
        match v {
            Value::Mapping(m) => {
                let mut p = Person::default();
                for (k, val) in m {
                    let key = self.key(k, path);
                    let at = path.child(&key);
                    match key.to_ascii_lowercase().as_str() {
                        "name" => p.name = self.text(val, &at),
                        "email" => p.email = self.text(val, &at),
                        "url" => p.url = self.text(val, &at),
                        _ => self.warn(
                            "unknown-attribute",
                            &at,
                            format!("`{key}` is not a person attribute; dropped"),
                        ),
                    }
                }
                Some(p)
            }
            other => self.text(other, path).map(|name| Person {
                name: Some(name),
                ..Person::default()
            }),
        }
    }

    fn info(&mut self, map: &Mapping, path: &NodePath) -> SoftwareInfo {
        let mut s = self.split(map, KeyContext::Info, path);
        let mut info = SoftwareInfo::default();
        if let Some(v) = s.take("title") {
            info.title = self.text(v, &path.child("title")).unwrap_or_default();
        }
        if let Some(v) = s.take("version") {
            info.version = self.text(v, &path.child("version")).unwrap_or_default();
        }
        if let Some(v) = s.take("description") {
            info.description = self.text(v, &path.child("description"));
        }
        let contact = s.take("contact").and_then(|v| self.person(v, &path.child("contact")));
        if let Some(v) = s.take("x-authors") {
            let at = path.child("x-authors");
            match v {
                Value::Sequence(items) => {
                    for (i, item) in items.iter().enumerate() {
                        if let Some(p) = self.person(item, &at.child(&i.to_string())) {
                            info.authors.push(p);
                        }
                    }
                }
                other => info.authors.extend(self.person(other, &at)),
            }
        }
        if let Some(contact) = contact {
            if info.authors.is_empty() {
                info.authors.push(contact);
            } else if info.authors[0] != contact {
                self.warn(
                    "duplicate-attribute",
                    &path.child("contact"),
                    "`contact` differs from the first entry of `x-authors`; `x-authors` is kept",
                );
            }
        }
        if let Some(v) = s.take("license") {
            let at = path.child("license");
            info.license = match v {
                Value::Mapping(m) => {
                    let mut lic = License::default();
                    for (k, val) in m {
                        let key = self.key(k, &at);
                        match key.to_ascii_lowercase().as_str() {
                            "name" => lic.name = self.text(val, &at.child("name")).unwrap_or_default(),
                            "url" => lic.url = self.text(val, &at.child("url")),
                            _ => self.warn("unknown-attribute", &at.child(&key), "not a license attribute; dropped"),
                        }
                    }
                    Some(lic)
                }
                other => self.text(other, &at).map(|name| License { name, url: None }),
            };
        }
        if let Some(v) = s.take("x-first-release") {
            info.first_release = self.text(v, &path.child("x-first-release"));
        }
        if let Some(v) = s.take("x-programming-lang") {
            info.programming_language = self.text(v, &path.child("x-programming-lang"));
        }
        if let Some(v) = s.take("x-repository") {
            info.repository = self.text(v, &path.child("x-repository"));
        }
        if let Some(v) = s.take("x-keywords") {
            let at = path.child("x-keywords");
            info.keywords = match v {
                Value::Sequence(items) => items
                    .iter()
                    .enumerate()
                    .filter_map(|(i, item)| self.text(item, &at.child(&i.to_string())))
                    .collect(),
                other => self.text(other, &at).into_iter().collect(),
            };
        }
        if let Some(v) = s.take("x-reference-publication") {
            info.reference_publication = self.text(v, &path.child("x-reference-publication"));
        }
        info.extensions = s.unknown;
        info
    }

    fn components(&mut self, v: &Value, doc: &mut DataDescDocument) {
        let path = NodePath::root().child("components");
        let Some(map) = self.mapping(v, &path) else { return };
        for (k, v) in map {
            let key = self.key(k, &path);
            if key == "schemas" {
                let at = path.child("schemas");
                let Some(schemas) = self.mapping(v, &at) else { continue };
                for (name, body) in schemas {
                    let name = self.key(name, &at);
                    let class_path = at.child(&name);
                    match body {
                        Value::Mapping(_) | Value::Null => self.add_class(doc, &name, body, &class_path),
                        _ => self.diags.push(Diagnostic::error(
                            "invalid-value",
                            &class_path,
                            "a class schema must be a mapping; skipped",
                        )),
                    }
                }
            } else if COMPONENT_KINDS.contains(&key.as_str()) || key.starts_with("x-") {
                doc.component_extensions.insert(key, v.clone());
            } else if matches!(v, Value::Mapping(_) | Value::Null) {
                let class_path = path.child(&key);
                self.diags.push(Diagnostic::info(
                    "class-outside-schemas",
                    &class_path,
                    format!(
                        "class `{key}` sits directly under `components`; it is written back under `components/schemas`"
                    ),
                ));
                self.add_class(doc, &key, v, &class_path);
            } else {
                doc.component_extensions.insert(key, v.clone());
            }
        }
    }

    fn add_class(&mut self, doc: &mut DataDescDocument, name: &str, body: &Value, path: &NodePath) {
        if doc.components.contains_key(name) {
            self.diags.push(Diagnostic::error(
                "duplicate-class",
                path,
                format!("class `{name}` is declared twice; the first declaration is kept"),
            ));
            return;
        }
        let class = self.class(name, body, path);
        doc.components.insert(name.to_owned(), class);
    }

    fn class(&mut self, name: &str, body: &Value, path: &NodePath) -> ClassDescription {
        let mut class = ClassDescription::new(name);
        let Some(map) = self.mapping(body, path) else {
            return class;
        };
        let mut s = self.split(map, KeyContext::Class, path);
        if let Some(v) = s.take("type") {
            if v.as_str() != Some("object") {
                class.extensions.insert("type".into(), v.clone());
            }
        }
        if let Some(v) = s.take("description") {
            class.description = self.text(v, &path.child("description"));
        }
        if let Some(v) = s.take("x-URI") {
            class.uri = self.text(v, &path.child("x-URI"));
        }
        if let Some(v) = s.take("x-IsPartOfInterface") {
            class.is_part_of_interface = self.boolean(v, &path.child("x-IsPartOfInterface")).unwrap_or(true);
        }
        if let Some(v) = s.take("properties") {
            class.properties = self.variables(v, &path.child("properties"));
        }
        if let Some(v) = s.take("required") {
            class.required = self.name_set(v, &path.child("required"));
        }
        if let Some(v) = s.take("x-functions") {
            let at = path.child("x-functions");
            if let Some(map) = self.mapping(v, &at) {
                for (k, body) in map {
                    let fname = self.key(k, &at);
                    let f = self.function(&fname, body, &at.child(&fname));
                    class.functions.insert(fname, f);
                }
            }
        }
        class.extensions.extend(s.unknown);
        class
    }

    fn function(&mut self, name: &str, body: &Value, path: &NodePath) -> FunctionDescription {
        let mut f = FunctionDescription::new(name);
        let Some(map) = self.mapping(body, path) else { return f };
        let mut s = self.split(map, KeyContext::Function, path);
        if let Some(v) = s.take("description") {
            f.description = self.text(v, &path.child("description"));
        }
        if let Some(v) = s.take("x-IsPartOfInterface") {
            f.is_part_of_interface = self.boolean(v, &path.child("x-IsPartOfInterface")).unwrap_or(true);
        }
        if let Some(v) = s.take("properties") {
            f.parameters = self.variables(v, &path.child("properties"));
        }
        if let Some(v) = s.take("required") {
            f.required = self.name_set(v, &path.child("required"));
        }
        if let Some(v) = s.take("return") {
            f.return_description = Some(Box::new(self.variable("return", v, &path.child("return"))));
        }
        f.extensions = s.unknown;
        f
    }

    fn variables(&mut self, v: &Value, path: &NodePath) -> IndexMap<String, VariableDescription> {
        let mut out = IndexMap::new();
        if let Some(map) = self.mapping(v, path) {
            for (k, body) in map {
                let name = self.key(k, path);
                let var = self.variable(&name, body, &path.child(&name));
                out.insert(name, var);
            }
        }
        out
    }

    fn unit(&mut self, v: &Value, ctx_key: &str, path: &NodePath, unit: &mut Option<UnitSpec>) {
        let at = path.child(ctx_key);
        let spec = unit.get_or_insert_with(UnitSpec::default);
        match v {
            Value::Mapping(m) => {
                let mut s = self.split(m, KeyContext::Unit, &at);
                if let Some(v) = s.take("Name") {
                    spec.name = self.text(v, &at.child("Name"));
                }
                if let Some(v) = s.take("Description") {
                    spec.description = self.text(v, &at.child("Description"));
                }
                if let Some(v) = s.take("URI") {
                    spec.uri = self.text(v, &at.child("URI"));
                }
                if let Some(v) = s.take("UnitType") {
                    spec.unit_type = self.text(v, &at.child("UnitType"));
                }
                for key in s.unknown.keys() {
                    self.warn(
                        "unknown-attribute",
                        &at.child(key),
                        format!("`{key}` is not a unit attribute; dropped"),
                    );
                }
            }
            other => spec.name = self.text(other, &at),
        }
    }

    fn unit_type(&mut self, v: &Value, key: &str, path: &NodePath, unit: &mut Option<UnitSpec>) {
        let at = path.child(key);
        let text = self.text(v, &at);
        let spec = unit.get_or_insert_with(UnitSpec::default);
        if spec.unit_type.is_some() && spec.unit_type != text {
            self.warn(
                "duplicate-attribute",
                &at,
                "unit type given twice; the separate key wins",
            );
        }
        spec.unit_type = text;
    }

    fn variable(&mut self, name: &str, body: &Value, path: &NodePath) -> VariableDescription {
        let mut var = VariableDescription::new(name);
        let map = match body {
            Value::Mapping(m) => m,
            Value::Null => return var,
            Value::Tagged(t) => return self.variable(name, &t.value, path),
            _ => {
                self.diags.push(Diagnostic::error(
                    "invalid-value",
                    path,
                    "a variable description must be a mapping",
                ));
                return var;
            }
        };
        let mut s = self.split(map, KeyContext::Variable, path);
        if let Some(v) = s.take("description") {
            var.description = self.text(v, &path.child("description"));
        }
        let ty = s.take("type");
        if let Some(v) = s.take("$ref") {
            if let Some(r) = self.text(v, &path.child("$ref")) {
                var.data_type = Some(DataType::ClassReference(ReferencePath::new(r)));
            }
            if let Some(t) = ty {
                self.warn(
                    "ref-with-type",
                    &path.child("type"),
                    "`type` next to `$ref` is kept but not interpreted",
                );
                var.extensions.insert("type".into(), t.clone());
            }
        } else if let Some(v) = ty {
            var.data_type = self.text(v, &path.child("type")).map(|t| DataType::from_keyword(&t));
        }
        if let Some(v) = s.take("x-URI") {
            var.concept_uri = self.text(v, &path.child("x-URI"));
        }
        if let Some(v) = s.take("x-Unit") {
            self.unit(v, "x-Unit", path, &mut var.unit);
        }
        if let Some(v) = s.take("x-UnitType") {
            self.unit_type(v, "x-UnitType", path, &mut var.unit);
        }
        if let Some(v) = s.take("x-FileFormat") {
            var.file_format = self.text(v, &path.child("x-FileFormat"));
        }
        if let Some(v) = s.take("x-CharacterEncoding") {
            var.character_encoding = self.text(v, &path.child("x-CharacterEncoding"));
        }
        for (key, kind) in [
            ("x-NetCDFFolders", FileStructureKind::NetCdfFolders),
            ("x-ExcelSheets", FileStructureKind::ExcelSheets),
        ] {
            if let Some(v) = s.take(key) {
                if var.file_structure.is_none() {
                    var.file_structure = Some(FileStructure { kind, tree: v.clone() });
                } else {
                    var.extensions.insert(key.into(), v.clone());
                }
            }
        }
        if let Some(v) = s.take("x-DefaultValue") {
            var.default_value = self.scalar(v, &path.child("x-DefaultValue"));
        }
        if let Some(v) = s.take("x-MinimumValue") {
            var.minimum = self.scalar(v, &path.child("x-MinimumValue"));
        }
        if let Some(v) = s.take("x-ExclusiveMinimum") {
            var.exclusive_minimum = self.boolean(v, &path.child("x-ExclusiveMinimum")).unwrap_or(false);
        }
        if let Some(v) = s.take("x-MaximumValue") {
            var.maximum = self.scalar(v, &path.child("x-MaximumValue"));
        }
        if let Some(v) = s.take("x-ExclusiveMaximum") {
            var.exclusive_maximum = self.boolean(v, &path.child("x-ExclusiveMaximum")).unwrap_or(false);
        }
        if let Some(v) = s.take("x-RegularExpression") {
            var.regular_expression = self.text(v, &path.child("x-RegularExpression"));
        }
        if let Some(v) = s.take("x-ValueSet") {
            var.value_set = self.scalar_list(v, &path.child("x-ValueSet"));
        }
        if let Some(v) = s.take("x-ValueIncrement") {
            var.value_increment = self.scalar(v, &path.child("x-ValueIncrement"));
        }
        if let Some(v) = s.take("x-VariableRole") {
            let at = path.child("x-VariableRole");
            match self.text(v, &at).as_deref().map(Role::parse) {
                Some(Some(role)) => var.role = Some(role),
                _ => {
                    self.warn(
                        "invalid-value",
                        &at,
                        "role must be input, output or internal; kept uninterpreted",
                    );
                    var.extensions.insert("x-VariableRole".into(), v.clone());
                }
            }
        }
        if let Some(v) = s.take("properties") {
            var.properties = self.variables(v, &path.child("properties"));
        }
        if let Some(v) = s.take("required") {
            var.required = self.name_set(v, &path.child("required"));
        }
        if let Some(v) = s.take("x-dimensions") {
            let at = path.child("x-dimensions");
            if let Some(map) = self.mapping(v, &at) {
                for (k, body) in map {
                    let dname = self.key(k, &at);
                    let dim = self.dimension(&dname, body, &at.child(&dname));
                    var.dimensions.push(dim);
                }
            }
        }
        var.extensions.extend(s.unknown);
        var
    }

    fn dimension(&mut self, name: &str, body: &Value, path: &NodePath) -> DimensionDescription {
        let mut dim = DimensionDescription::new(name);
        let Some(map) = self.mapping(body, path) else {
            return dim;
        };
        let mut s = self.split(map, KeyContext::Dimension, path);
        if let Some(v) = s.take("Description") {
            dim.description = self.text(v, &path.child("Description"));
        }
        if let Some(v) = s.take("URI") {
            dim.uri = self.text(v, &path.child("URI"));
        }
        if let Some(v) = s.take("DataType") {
            dim.index_type = self
                .text(v, &path.child("DataType"))
                .map(|t| DataType::from_keyword(&t));
        }
        if let Some(v) = s.take("Unit") {
            self.unit(v, "Unit", path, &mut dim.unit);
        }
        if let Some(v) = s.take("UnitType") {
            self.unit_type(v, "UnitType", path, &mut dim.unit);
        }
        if let Some(v) = s.take("ItemMinimumValue") {
            dim.item_minimum = self.scalar(v, &path.child("ItemMinimumValue"));
        }
        if let Some(v) = s.take("ItemMaximumValue") {
            dim.item_maximum = self.scalar(v, &path.child("ItemMaximumValue"));
        }
        if let Some(v) = s.take("ValueSet") {
            dim.value_set = self.scalar_list(v, &path.child("ValueSet"));
        }
        if let Some(v) = s.take("ValueIncrement") {
            dim.value_increment = self.scalar(v, &path.child("ValueIncrement"));
        }
        dim.extensions = s.unknown;
        dim
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "openapi: 3.0.0\ninfo:\n  title: T\n  version: '1'\ncomponents:\n  schemas:\n    A:\n      properties:\n        n:\n          type: integer\n          minimum: 0\n          x-dimensions:\n            t:\n              HasMinimumValue: 0\n";

    #[test]
    fn aliases_read_as_canonical_attributes() {
        let p = parse_document(SMALL).unwrap();
        let n = &p.document.components["A"].properties["n"];
        assert_eq!(n.minimum, Some(Scalar::Integer(0)));
        assert_eq!(n.dimensions[0].item_minimum, Some(Scalar::Integer(0)));
        assert!(p.diagnostics.is_empty(), "{:?}", p.diagnostics);
    }

    #[test]
    fn alias_and_canonical_together_warn() {
        let text = SMALL.replace("minimum: 0", "minimum: 0\n          x-MinimumValue: 1");
        let p = parse_document(&text).unwrap();
        assert_eq!(
            p.document.components["A"].properties["n"].minimum,
            Some(Scalar::Integer(1))
        );
        assert!(p.diagnostics.iter().any(|d| d.code == "duplicate-attribute"));
    }

    #[test]
    fn fatal_errors() {
        assert_eq!(parse_document("a: [").unwrap_err().code(), "yaml-syntax");
        assert_eq!(
            parse_document("openapi: 3.0.0\n").unwrap_err().code(),
            "missing-info-section"
        );
        assert_eq!(
            parse_document("openapi: 2.0\ninfo: {title: a, version: b}\n")
                .unwrap_err()
                .code(),
            "unsupported-openapi-version"
        );
        assert_eq!(parse_document_bytes(b"\xff\xfe").unwrap_err().code(), "yaml-syntax");
        assert!(parse_document("openapi: 3.1.0\ninfo: {title: a, version: b}\n").is_ok());
    }

    #[test]
    fn unknown_keys_are_kept() {
        let text = "openapi: 3.0.0\ninfo: {title: a, version: b, x-funding: EU}\npaths: {}\ncomponents:\n  responses: {r: 1}\n  schemas:\n    A: {x-note: [1, 2]}\n";
        let p = parse_document(text).unwrap();
        assert!(p.document.extensions.contains_key("paths"));
        assert!(p.document.info.extensions.contains_key("x-funding"));
        assert!(p.document.component_extensions.contains_key("responses"));
        assert!(p.document.components["A"].extensions.contains_key("x-note"));
    }

    #[test]
    fn versions() {
        assert!(supported_version("3.0.0"));
        assert!(supported_version("3.1"));
        assert!(!supported_version("3.2.0"));
        assert!(!supported_version("3.0.x"));
    }
}
