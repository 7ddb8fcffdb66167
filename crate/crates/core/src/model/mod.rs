//! In-memory form of a DataDesc document.
//!
//! A document has an `info` section (general software metadata) and a set
//! of component classes. Classes own properties and interface functions;
//! every property, parameter and return value is a [`VariableDescription`]
//! carrying four facets: content, format, value and structure.
//!
//! Named collections (classes, properties, functions, parameters) are
//! `IndexMap`s: equality ignores key order, and emission sorts them.
//! Dimensions are a `Vec` because their order is significant.

mod check;
mod compat;
mod resolve;
mod scalar;

use indexmap::{IndexMap, IndexSet};

pub use check::{check_document, check_info_section, lint_document};
pub use compat::{check_compatibility, CompatibilityChecker, CompatibilityReport};
pub use resolve::{resolve, walk_references, ReferenceWalk, ResolveError};
pub use scalar::Scalar;

pub(crate) use scalar::cmp_numbers;

/// Raw YAML subtree, kept verbatim.
pub type RawValue = serde_yaml::Value;

/// Extension keys this library does not interpret, in input order.
pub type Extensions = IndexMap<String, RawValue>;

pub const SCHEMA_REF_PREFIX: &str = "#/components/schemas/";

#[derive(Debug, Clone, PartialEq)]
pub struct DataDescDocument {
    pub openapi_version: String,
    pub info: SoftwareInfo,
    pub components: IndexMap<String, ClassDescription>,
    /// Top-level keys other than `openapi`, `info` and `components`
    /// (for example `paths` or `servers`).
    pub extensions: Extensions,
    /// Keys under `components` other than the class schemas.
    pub component_extensions: Extensions,
}

impl DataDescDocument {
    pub fn new(info: SoftwareInfo) -> Self {
        DataDescDocument {
            openapi_version: "3.0.0".to_owned(),
            info,
            components: IndexMap::new(),
            extensions: Extensions::new(),
            component_extensions: Extensions::new(),
        }
    }

    pub fn class(&self, name: &str) -> Option<&ClassDescription> {
        self.components.get(name)
    }

    pub fn add_class(&mut self, class: ClassDescription) -> &mut Self {
        self.components.insert(class.name.clone(), class);
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Person {
    pub name: Option<String>,
    pub email: Option<String>,
    pub url: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct License {
    pub name: String,
    pub url: Option<String>,
}

/// The `info` section. Besides the OpenAPI-mandated title and version it
/// carries the fields that cross-walk onto CodeMeta terms.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SoftwareInfo {
    pub title: String,
    pub version: String,
    pub description: Option<String>,
    /// ISO-8601 calendar date (`YYYY-MM-DD`).
    pub first_release: Option<String>,
    pub programming_language: Option<String>,
    pub authors: Vec<Person>,
    pub license: Option<License>,
    pub repository: Option<String>,
    pub keywords: Vec<String>,
    pub reference_publication: Option<String>,
    pub extensions: Extensions,
}

impl SoftwareInfo {
    pub fn new(title: impl Into<String>, version: impl Into<String>) -> Self {
        SoftwareInfo {
            title: title.into(),
            version: version.into(),
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassDescription {
    pub name: String,
    pub description: Option<String>,
    pub uri: Option<String>,
    pub is_part_of_interface: bool,
    pub properties: IndexMap<String, VariableDescription>,
    /// Names of properties that must be set.
    pub required: IndexSet<String>,
    pub functions: IndexMap<String, FunctionDescription>,
    pub extensions: Extensions,
}

impl ClassDescription {
    pub fn new(name: impl Into<String>) -> Self {
        ClassDescription {
            name: name.into(),
            description: None,
            uri: None,
            is_part_of_interface: true,
            properties: IndexMap::new(),
            required: IndexSet::new(),
            functions: IndexMap::new(),
            extensions: Extensions::new(),
        }
    }

    pub fn with_property(mut self, var: VariableDescription) -> Self {
        self.properties.insert(var.name.clone(), var);
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionDescription {
    pub name: String,
    pub description: Option<String>,
    pub is_part_of_interface: bool,
    pub parameters: IndexMap<String, VariableDescription>,
    /// Names of parameters that must be passed.
    pub required: IndexSet<String>,
    /// A reference return is a variable whose type is a class reference.
    pub return_description: Option<Box<VariableDescription>>,
    pub extensions: Extensions,
}

impl FunctionDescription {
    pub fn new(name: impl Into<String>) -> Self {
        FunctionDescription {
            name: name.into(),
            description: None,
            is_part_of_interface: true,
            parameters: IndexMap::new(),
            required: IndexSet::new(),
            return_description: None,
            extensions: Extensions::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Input,
    Output,
    Internal,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Input => "input",
            Role::Output => "output",
            Role::Internal => "internal",
        }
    }

    pub fn parse(s: &str) -> Option<Role> {
        match s.to_ascii_lowercase().as_str() {
            "input" => Some(Role::Input),
            "output" => Some(Role::Output),
            "internal" => Some(Role::Internal),
            _ => None,
        }
    }
}

/// Where a variable sits; decides its default role.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VariablePosition {
    Parameter,
    Property,
    Return,
}

impl VariablePosition {
    pub fn default_role(self) -> Role {
        match self {
            VariablePosition::Parameter => Role::Input,
            VariablePosition::Property => Role::Internal,
            VariablePosition::Return => Role::Output,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FileStructureKind {
    NetCdfFolders,
    ExcelSheets,
}

/// Documented inner layout of a referenced file, kept as a raw subtree.
#[derive(Debug, Clone, PartialEq)]
pub struct FileStructure {
    pub kind: FileStructureKind,
    pub tree: RawValue,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VariableDescription {
    // content
    pub name: String,
    pub description: Option<String>,
    pub concept_uri: Option<String>,
    pub unit: Option<UnitSpec>,
    // format; `None` means the type was left unspecified
    pub data_type: Option<DataType>,
    pub file_format: Option<String>,
    pub character_encoding: Option<String>,
    pub file_structure: Option<FileStructure>,
    // value
    pub minimum: Option<Scalar>,
    pub exclusive_minimum: bool,
    pub maximum: Option<Scalar>,
    pub exclusive_maximum: bool,
    pub regular_expression: Option<String>,
    pub value_set: Option<Vec<Scalar>>,
    pub value_increment: Option<Scalar>,
    pub default_value: Option<Scalar>,
    // structure
    pub properties: IndexMap<String, VariableDescription>,
    /// Required members of `properties`.
    pub required: IndexSet<String>,
    pub dimensions: Vec<DimensionDescription>,
    /// Explicit role; `None` falls back to the position default.
    pub role: Option<Role>,
    pub extensions: Extensions,
}

impl VariableDescription {
    pub fn new(name: impl Into<String>) -> Self {
        VariableDescription {
            name: name.into(),
            description: None,
            concept_uri: None,
            unit: None,
            data_type: None,
            file_format: None,
            character_encoding: None,
            file_structure: None,
            minimum: None,
            exclusive_minimum: false,
            maximum: None,
            exclusive_maximum: false,
            regular_expression: None,
            value_set: None,
            value_increment: None,
            default_value: None,
            properties: IndexMap::new(),
            required: IndexSet::new(),
            dimensions: Vec::new(),
            role: None,
            extensions: Extensions::new(),
        }
    }

    pub fn typed(name: impl Into<String>, data_type: DataType) -> Self {
        VariableDescription {
            data_type: Some(data_type),
            ..Self::new(name)
        }
    }

    pub fn with_minimum(mut self, min: impl Into<Scalar>, exclusive: bool) -> Self {
        self.minimum = Some(min.into());
        self.exclusive_minimum = exclusive;
        self
    }

    pub fn with_maximum(mut self, max: impl Into<Scalar>, exclusive: bool) -> Self {
        self.maximum = Some(max.into());
        self.exclusive_maximum = exclusive;
        self
    }

    pub fn with_value_set<I, S>(mut self, values: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<Scalar>,
    {
        self.value_set = Some(values.into_iter().map(Into::into).collect());
        self
    }

    pub fn with_regex(mut self, pattern: impl Into<String>) -> Self {
        self.regular_expression = Some(pattern.into());
        self
    }

    pub fn with_default(mut self, value: impl Into<Scalar>) -> Self {
        self.default_value = Some(value.into());
        self
    }

    pub fn with_unit(mut self, unit: UnitSpec) -> Self {
        self.unit = Some(unit);
        self
    }

    pub fn with_dimension(mut self, dim: DimensionDescription) -> Self {
        self.dimensions.push(dim);
        self
    }

    pub fn with_property(mut self, var: VariableDescription, required: bool) -> Self {
        if required {
            self.required.insert(var.name.clone());
        }
        self.properties.insert(var.name.clone(), var);
        self
    }

    pub fn effective_role(&self, position: VariablePosition) -> Role {
        self.role.unwrap_or_else(|| position.default_role())
    }

    pub fn class_reference(&self) -> Option<&ReferencePath> {
        match &self.data_type {
            Some(DataType::ClassReference(r)) => Some(r),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct UnitSpec {
    pub name: Option<String>,
    pub description: Option<String>,
    pub uri: Option<String>,
    pub unit_type: Option<String>,
}

impl UnitSpec {
    pub fn named(name: impl Into<String>) -> Self {
        UnitSpec {
            name: Some(name.into()),
            ..Default::default()
        }
    }

    pub fn of_type(unit_type: impl Into<String>) -> Self {
        UnitSpec {
            unit_type: Some(unit_type.into()),
            ..Default::default()
        }
    }

    pub fn is_empty(&self) -> bool {
        self.name.is_none() && self.description.is_none() && self.uri.is_none() && self.unit_type.is_none()
    }

    /// True when a concrete unit (not just a unit type) is declared.
    pub fn has_identity(&self) -> bool {
        self.name.is_some() || self.uri.is_some()
    }

    /// Same concrete unit: by URI when both carry one, else by
    /// case-insensitive name.
    pub fn same_unit(&self, other: &UnitSpec) -> bool {
        match (&self.uri, &other.uri) {
            (Some(a), Some(b)) => a == b,
            _ => match (&self.name, &other.name) {
                (Some(a), Some(b)) => a.to_lowercase() == b.to_lowercase(),
                _ => false,
            },
        }
    }
}

/// One axis of a dimensioned variable.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionDescription {
    pub name: String,
    pub description: Option<String>,
    pub uri: Option<String>,
    pub index_type: Option<DataType>,
    pub unit: Option<UnitSpec>,
    pub item_minimum: Option<Scalar>,
    pub item_maximum: Option<Scalar>,
    pub value_set: Option<Vec<Scalar>>,
    pub value_increment: Option<Scalar>,
    pub extensions: Extensions,
}

impl DimensionDescription {
    pub fn new(name: impl Into<String>) -> Self {
        DimensionDescription {
            name: name.into(),
            description: None,
            uri: None,
            index_type: None,
            unit: None,
            item_minimum: None,
            item_maximum: None,
            value_set: None,
            value_increment: None,
            extensions: Extensions::new(),
        }
    }

    pub fn with_index_type(mut self, t: DataType) -> Self {
        self.index_type = Some(t);
        self
    }

    pub fn with_item_range(mut self, min: Option<Scalar>, max: Option<Scalar>) -> Self {
        self.item_minimum = min;
        self.item_maximum = max;
        self
    }

    pub fn with_value_set<I, S>(mut self, values: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<Scalar>,
    {
        self.value_set = Some(values.into_iter().map(Into::into).collect());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DataType {
    String,
    Integer,
    Number,
    Boolean,
    Object,
    Array,
    File,
    ClassReference(ReferencePath),
    /// Any type name outside the fixed vocabulary, kept as written.
    Opaque(String),
}

impl DataType {
    /// The serialized `type` keyword. Class references serialize as `$ref`
    /// and have no keyword.
    pub fn keyword(&self) -> Option<&str> {
        Some(match self {
            DataType::String => "string",
            DataType::Integer => "integer",
            DataType::Number => "number",
            DataType::Boolean => "boolean",
            DataType::Object => "object",
            DataType::Array => "array",
            DataType::File => "file",
            DataType::ClassReference(_) => return None,
            DataType::Opaque(s) => s,
        })
    }

    pub fn from_keyword(s: &str) -> DataType {
        match s {
            "string" => DataType::String,
            "integer" => DataType::Integer,
            "number" => DataType::Number,
            "boolean" => DataType::Boolean,
            "object" => DataType::Object,
            "array" => DataType::Array,
            "file" => DataType::File,
            other => DataType::Opaque(other.to_owned()),
        }
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, DataType::Integer | DataType::Number)
    }

    pub fn is_grouping(&self) -> bool {
        matches!(self, DataType::Object | DataType::ClassReference(_))
    }

    pub fn describe(&self) -> String {
        match self {
            DataType::ClassReference(r) => format!("$ref {}", r.as_str()),
            other => other.keyword().unwrap_or_default().to_owned(),
        }
    }
}

/// A `$ref` to a class schema, `#/components/schemas/<Name>`.
///
/// The raw text is kept so malformed references stay representable and
/// can be reported.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReferencePath(String);

impl ReferencePath {
    pub fn new(path: impl Into<String>) -> Self {
        ReferencePath(path.into())
    }

    pub fn to_class(name: &str) -> Self {
        let escaped = name.replace('~', "~0").replace('/', "~1");
        ReferencePath(format!("{SCHEMA_REF_PREFIX}{escaped}"))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The referenced class name, or `None` when the path is malformed.
    pub fn target_name(&self) -> Option<String> {
        let rest = self.0.strip_prefix(SCHEMA_REF_PREFIX)?;
        if rest.is_empty() || rest.contains('/') {
            return None;
        }
        Some(rest.replace("~1", "/").replace("~0", "~"))
    }

    pub fn is_well_formed(&self) -> bool {
        self.target_name().is_some()
    }
}

impl std::fmt::Display for ReferencePath {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_path_shapes() {
        assert_eq!(
            ReferencePath::new("#/components/schemas/Component")
                .target_name()
                .as_deref(),
            Some("Component")
        );
        assert_eq!(ReferencePath::new("Component").target_name(), None);
        assert_eq!(ReferencePath::new("#/components/schemas/").target_name(), None);
        assert_eq!(ReferencePath::new("#/components/schemas/a/b").target_name(), None);
        let odd = ReferencePath::to_class("a/b");
        assert_eq!(odd.as_str(), "#/components/schemas/a~1b");
        assert_eq!(odd.target_name().as_deref(), Some("a/b"));
    }

    #[test]
    fn units_compare_by_uri_then_name() {
        let m = UnitSpec::named("Meter");
        assert!(m.same_unit(&UnitSpec::named("meter")));
        let a = UnitSpec {
            uri: Some("u:1".into()),
            ..UnitSpec::named("meter")
        };
        let b = UnitSpec {
            uri: Some("u:2".into()),
            ..UnitSpec::named("meter")
        };
        assert!(!a.same_unit(&b));
        assert!(a.same_unit(&m));
        assert!(!UnitSpec::of_type("length").same_unit(&UnitSpec::of_type("length")));
    }

    #[test]
    fn role_defaults_follow_position() {
        let v = VariableDescription::new("x");
        assert_eq!(v.effective_role(VariablePosition::Parameter), Role::Input);
        assert_eq!(v.effective_role(VariablePosition::Property), Role::Internal);
        assert_eq!(v.effective_role(VariablePosition::Return), Role::Output);
    }
}
