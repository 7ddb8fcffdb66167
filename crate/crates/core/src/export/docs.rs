//! Human-readable documentation: an index page for the info section and
//! one page per class, as Markdown or as self-contained HTML.

use std::collections::HashSet;

use indexmap::IndexMap;

use super::fileset::FileSet;
use crate::exchange::yaml;
use crate::model::{
    ClassDescription, DataDescDocument, DataType, DimensionDescription, Extensions, FunctionDescription, Scalar,
    UnitSpec, VariableDescription, VariablePosition,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DocsFormat {
    Markdown,
    Html,
}

impl DocsFormat {
    fn extension(self) -> &'static str {
        match self {
            DocsFormat::Markdown => "md",
            DocsFormat::Html => "html",
        }
    }
}

enum Inline {
    Text(String),
    Code(String),
    Strong(String),
    /// Link to another page, by page stem.
    Link(String, String),
}

enum Block {
    Heading(usize, Vec<Inline>),
    Para(Vec<Inline>),
    List(Vec<Vec<Inline>>),
    Table(Vec<String>, Vec<Vec<Vec<Inline>>>),
    Code(String),
}

struct Page {
    stem: String,
    title: String,
    blocks: Vec<Block>,
}

const INDEX: &str = "index";
const CLASS_DIR: &str = "classes";

fn text(s: impl Into<String>) -> Inline {
    Inline::Text(s.into())
}

fn code(s: impl Into<String>) -> Inline {
    Inline::Code(s.into())
}

pub(crate) fn scalar_text(s: &Scalar) -> String {
    match s {
        Scalar::Text(t) => t.clone(),
        Scalar::Integer(i) => i.to_string(),
        Scalar::Real(r) => yaml::format_real(*r),
        Scalar::Boolean(b) => b.to_string(),
    }
}

fn slug(name: &str) -> String {
    let mut s: String = name
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.') {
                c
            } else {
                '_'
            }
        })
        .collect();
    if s.is_empty() || s.starts_with('.') {
        s.insert(0, '_');
    }
    s
}

struct Builder<'d> {
    doc: &'d DataDescDocument,
    pages: IndexMap<String, String>,
}

impl<'d> Builder<'d> {
    fn new(doc: &'d DataDescDocument) -> Self {
        let mut names: Vec<&String> = doc.components.keys().collect();
        names.sort();
        let mut taken = HashSet::new();
        let mut pages = IndexMap::new();
        for name in names {
            let base = slug(name);
            let mut candidate = base.clone();
            let mut n = 2;
            while !taken.insert(candidate.to_lowercase()) {
                candidate = format!("{base}-{n}");
                n += 1;
            }
            pages.insert(name.clone(), format!("{CLASS_DIR}/{candidate}"));
        }
        Builder { doc, pages }
    }

    fn class_link(&self, name: &str) -> Inline {
        match self.pages.get(name) {
            Some(stem) => Inline::Link(name.to_owned(), stem.clone()),
            None => code(name),
        }
    }

    fn index(&self) -> Page {
        let info = &self.doc.info;
        let mut blocks = vec![Block::Heading(1, vec![text(&info.title)])];
        if let Some(d) = &info.description {
            blocks.push(Block::Para(vec![text(d)]));
        }
        let mut items = vec![vec![Inline::Strong("Version:".into()), text(" "), code(&info.version)]];
        let mut field = |label: &str, value: &Option<String>| {
            if let Some(v) = value {
                items.push(vec![Inline::Strong(format!("{label}:")), text(format!(" {v}"))]);
            }
        };
        field("First release", &info.first_release);
        field("Programming language", &info.programming_language);
        field("Repository", &info.repository);
        field("Reference publication", &info.reference_publication);
        if let Some(l) = &info.license {
            let mut line = vec![Inline::Strong("License:".into()), text(format!(" {}", l.name))];
            if let Some(u) = &l.url {
                line.push(text(format!(" ({u})")));
            }
            items.push(line);
        }
        if !info.authors.is_empty() {
            let names: Vec<String> = info
                .authors
                .iter()
                .map(|p| {
                    let mut s = p.name.clone().unwrap_or_else(|| "(unnamed)".into());
                    if let Some(e) = &p.email {
                        s.push_str(&format!(" <{e}>"));
                    }
                    s
                })
                .collect();
            items.push(vec![
                Inline::Strong("Authors:".into()),
                text(format!(" {}", names.join(", "))),
            ]);
        }
        if !info.keywords.is_empty() {
            items.push(vec![
                Inline::Strong("Keywords:".into()),
                text(format!(" {}", info.keywords.join(", "))),
            ]);
        }
        items.push(vec![
            Inline::Strong("OpenAPI:".into()),
            text(" "),
            code(&self.doc.openapi_version),
        ]);
        blocks.push(Block::List(items));
        extension_blocks(&info.extensions, &mut blocks);
        if !self.pages.is_empty() {
            blocks.push(Block::Heading(2, vec![text("Classes")]));
            let items = self
                .pages
                .keys()
                .map(|name| {
                    let mut line = vec![self.class_link(name)];
                    if let Some(d) = self.doc.components[name].description.as_deref() {
                        line.push(text(format!(": {}", d.lines().next().unwrap_or_default())));
                    }
                    line
                })
                .collect();
            blocks.push(Block::List(items));
        }
        Page {
            stem: INDEX.into(),
            title: info.title.clone(),
            blocks,
        }
    }

    fn class_page(&self, name: &str, class: &ClassDescription) -> Page {
        let mut blocks = vec![
            Block::Heading(1, vec![text(name)]),
            Block::Para(vec![Inline::Link("Index".into(), INDEX.into())]),
        ];
        if let Some(d) = &class.description {
            blocks.push(Block::Para(vec![text(d)]));
        }
        let mut items = Vec::new();
        if let Some(u) = &class.uri {
            items.push(vec![Inline::Strong("Concept:".into()), text(format!(" {u}"))]);
        }
        if !class.is_part_of_interface {
            items.push(vec![text("Not part of the public interface.")]);
        }
        if !items.is_empty() {
            blocks.push(Block::List(items));
        }
        extension_blocks(&class.extensions, &mut blocks);
        if !class.properties.is_empty() {
            blocks.push(Block::Heading(2, vec![text("Properties")]));
            for (pname, var) in sorted(&class.properties) {
                let required = class.required.contains(pname.as_str());
                self.variable(var, 3, required, VariablePosition::Property, &mut blocks);
            }
        }
        if !class.functions.is_empty() {
            blocks.push(Block::Heading(2, vec![text("Functions")]));
            for (_, f) in sorted(&class.functions) {
                self.function(f, &mut blocks);
            }
        }
        Page {
            stem: self.pages[name].clone(),
            title: name.to_owned(),
            blocks,
        }
    }

    fn function(&self, f: &FunctionDescription, blocks: &mut Vec<Block>) {
        let mut names: Vec<&String> = f.parameters.keys().collect();
        names.sort();
        let signature = format!(
            "{}({})",
            f.name,
            names.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", ")
        );
        blocks.push(Block::Heading(3, vec![code(signature)]));
        if let Some(d) = &f.description {
            blocks.push(Block::Para(vec![text(d)]));
        }
        if !f.is_part_of_interface {
            blocks.push(Block::Para(vec![text("Not part of the public interface.")]));
        }
        extension_blocks(&f.extensions, blocks);
        for (pname, var) in sorted(&f.parameters) {
            let required = f.required.contains(pname.as_str());
            self.variable(var, 4, required, VariablePosition::Parameter, blocks);
        }
        if let Some(ret) = &f.return_description {
            self.variable(ret, 4, false, VariablePosition::Return, blocks);
        }
    }

    fn variable(
        &self,
        var: &VariableDescription,
        level: usize,
        required: bool,
        position: VariablePosition,
        blocks: &mut Vec<Block>,
    ) {
        let label = match position {
            VariablePosition::Property => "Property",
            VariablePosition::Parameter => "Parameter",
            VariablePosition::Return => "Returns",
        };
        let heading = if position == VariablePosition::Return && var.name == "return" {
            vec![text(label)]
        } else {
            vec![text(format!("{label} ")), code(&var.name)]
        };
        blocks.push(Block::Heading(level.min(6), heading));
        if let Some(d) = &var.description {
            blocks.push(Block::Para(vec![text(d)]));
        }
        let mut items: Vec<Vec<Inline>> = Vec::new();
        let strong = |s: &str| Inline::Strong(format!("{s}:"));
        if position != VariablePosition::Return {
            items.push(vec![strong("Required"), text(if required { " yes" } else { " no" })]);
        }
        match &var.data_type {
            Some(DataType::ClassReference(r)) => {
                let target = r.target_name().unwrap_or_else(|| r.as_str().to_owned());
                items.push(vec![strong("Type"), text(" reference to "), self.class_link(&target)]);
            }
            Some(t) => items.push(vec![strong("Type"), text(" "), code(t.keyword().unwrap_or_default())]),
            None => items.push(vec![strong("Type"), text(" unspecified")]),
        }
        items.push(vec![
            strong("Role"),
            text(format!(" {}", var.effective_role(position).as_str())),
        ]);
        if let Some(u) = &var.concept_uri {
            items.push(vec![strong("Concept"), text(format!(" {u}"))]);
        }
        if let Some(unit) = &var.unit {
            items.push(vec![strong("Unit"), text(format!(" {}", unit_text(unit)))]);
        }
        if let Some(v) = &var.default_value {
            items.push(vec![strong("Default"), text(" "), code(scalar_text(v))]);
        }
        if let Some(r) = range_text(
            &var.minimum,
            var.exclusive_minimum,
            &var.maximum,
            var.exclusive_maximum,
            "value",
        ) {
            items.push(vec![strong("Range"), text(" "), code(r)]);
        }
        if let Some(set) = &var.value_set {
            let mut line = vec![strong("Allowed values")];
            for (i, v) in set.iter().enumerate() {
                line.push(text(if i == 0 { " " } else { ", " }));
                line.push(code(scalar_text(v)));
            }
            items.push(line);
        }
        if let Some(inc) = &var.value_increment {
            items.push(vec![strong("Increment"), text(" "), code(scalar_text(inc))]);
        }
        if let Some(p) = &var.regular_expression {
            items.push(vec![strong("Pattern"), text(" "), code(p)]);
        }
        if let Some(f) = &var.file_format {
            items.push(vec![strong("File format"), text(format!(" {f}"))]);
        }
        if let Some(e) = &var.character_encoding {
            items.push(vec![strong("Character encoding"), text(format!(" {e}"))]);
        }
        blocks.push(Block::List(items));
        if !var.dimensions.is_empty() {
            blocks.push(Block::Para(vec![Inline::Strong("Dimensions".into())]));
            blocks.push(dimension_table(&var.dimensions));
        }
        if let Some(fs) = &var.file_structure {
            let key = match fs.kind {
                crate::model::FileStructureKind::NetCdfFolders => "NetCDF folders",
                crate::model::FileStructureKind::ExcelSheets => "Excel sheets",
            };
            blocks.push(Block::Para(vec![Inline::Strong(format!("{key}:"))]));
            blocks.push(Block::Code(yaml::to_string(&fs.tree)));
        }
        extension_blocks(&var.extensions, blocks);
        for (cname, child) in sorted(&var.properties) {
            let req = var.required.contains(cname.as_str());
            self.variable(child, level + 1, req, VariablePosition::Property, blocks);
        }
    }
}

fn sorted<V>(map: &IndexMap<String, V>) -> Vec<(&String, &V)> {
    let mut v: Vec<_> = map.iter().collect();
    v.sort_by(|a, b| a.0.cmp(b.0));
    v
}

fn unit_text(u: &UnitSpec) -> String {
    let mut parts = Vec::new();
    if let Some(n) = &u.name {
        parts.push(n.clone());
    }
    if let Some(d) = &u.description {
        parts.push(format!("({d})"));
    }
    if let Some(uri) = &u.uri {
        parts.push(format!("<{uri}>"));
    }
    if let Some(t) = &u.unit_type {
        parts.push(format!("[{t}]"));
    }
    parts.join(" ")
}

fn range_text(min: &Option<Scalar>, xmin: bool, max: &Option<Scalar>, xmax: bool, var: &str) -> Option<String> {
    let lo = min.as_ref().map(|m| (scalar_text(m), if xmin { "<" } else { "<=" }));
    let hi = max.as_ref().map(|m| (scalar_text(m), if xmax { "<" } else { "<=" }));
    match (lo, hi) {
        (None, None) => None,
        (Some((l, op)), None) => Some(format!("{l} {op} {var}")),
        (None, Some((h, op))) => Some(format!("{var} {op} {h}")),
        (Some((l, lop)), Some((h, hop))) => Some(format!("{l} {lop} {var} {hop} {h}")),
    }
}

const DIMENSION_COLUMNS: [&str; 9] = [
    "Description",
    "URI",
    "DataType",
    "ItemMinimumValue",
    "ItemMaximumValue",
    "ValueSet",
    "ValueIncrement",
    "Unit",
    "UnitType",
];

fn dimension_cell(d: &DimensionDescription, column: &str) -> Option<String> {
    let list = |set: &Option<Vec<Scalar>>| {
        set.as_ref()
            .map(|s| s.iter().map(scalar_text).collect::<Vec<_>>().join(", "))
    };
    match column {
        "Description" => d.description.clone(),
        "URI" => d.uri.clone(),
        "DataType" => d.index_type.as_ref().map(DataType::describe),
        "ItemMinimumValue" => d.item_minimum.as_ref().map(scalar_text),
        "ItemMaximumValue" => d.item_maximum.as_ref().map(scalar_text),
        "ValueSet" => list(&d.value_set),
        "ValueIncrement" => d.value_increment.as_ref().map(scalar_text),
        "Unit" => d
            .unit
            .as_ref()
            .filter(|u| u.has_identity() || u.description.is_some())
            .map(|u| {
                unit_text(&UnitSpec {
                    unit_type: None,
                    ..u.clone()
                })
            }),
        "UnitType" => d.unit.as_ref().and_then(|u| u.unit_type.clone()),
        _ => None,
    }
}

fn dimension_table(dims: &[DimensionDescription]) -> Block {
    let columns: Vec<&str> = DIMENSION_COLUMNS
        .iter()
        .copied()
        .filter(|c| dims.iter().any(|d| dimension_cell(d, c).is_some()))
        .collect();
    let has_extra = dims.iter().any(|d| !d.extensions.is_empty());
    let mut head = vec!["Dimension".to_owned()];
    head.extend(columns.iter().map(|c| c.to_string()));
    if has_extra {
        head.push("Other".into());
    }
    let rows = dims
        .iter()
        .map(|d| {
            let mut row = vec![vec![code(&d.name)]];
            for c in &columns {
                row.push(vec![text(dimension_cell(d, c).unwrap_or_default())]);
            }
            if has_extra {
                let extra: Vec<String> = d
                    .extensions
                    .iter()
                    .map(|(k, v)| format!("{k}: {}", yaml::to_string(v).trim_end().replace('\n', " ")))
                    .collect();
                row.push(vec![text(extra.join("; "))]);
            }
            row
        })
        .collect();
    Block::Table(head, rows)
}

fn extension_blocks(ext: &Extensions, blocks: &mut Vec<Block>) {
    if ext.is_empty() {
        return;
    }
    let mut map = serde_yaml::Mapping::new();
    for (k, v) in sorted(ext) {
        map.insert(k.clone().into(), v.clone());
    }
    blocks.push(Block::Para(vec![Inline::Strong("Other attributes:".into())]));
    blocks.push(Block::Code(yaml::to_string(&serde_yaml::Value::Mapping(map))));
}

/// Relative link from one page stem to another.
fn href(from: &str, to: &str, ext: &str) -> String {
    let depth = from.matches('/').count();
    let from_dir = from.rsplit_once('/').map(|(d, _)| d);
    let to_dir = to.rsplit_once('/').map(|(d, _)| d);
    let target = if from_dir == to_dir && from_dir.is_some() {
        to.rsplit_once('/').map(|(_, f)| f).unwrap_or(to).to_owned()
    } else {
        format!("{}{to}", "../".repeat(depth))
    };
    format!("{target}.{ext}")
}

fn md_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut in_space = false;
    for c in s.chars() {
        if c.is_whitespace() {
            if !in_space {
                out.push(' ');
            }
            in_space = true;
            continue;
        }
        in_space = false;
        if matches!(
            c,
            '\\' | '`' | '*' | '_' | '[' | ']' | '<' | '>' | '|' | '#' | '!' | '&'
        ) {
            out.push('\\');
        }
        out.push(c);
    }
    out
}

fn md_code(s: &str) -> String {
    let flat = s.replace(['\n', '\r'], " ");
    let longest = flat.split(|c| c != '`').map(str::len).max().unwrap_or(0);
    let fence = "`".repeat(longest + 1);
    if flat.starts_with('`') || flat.ends_with('`') || flat.is_empty() {
        format!("{fence} {flat} {fence}")
    } else {
        format!("{fence}{flat}{fence}")
    }
}

fn md_inlines(items: &[Inline], page: &str) -> String {
    let mut s = String::new();
    for i in items {
        match i {
            Inline::Text(t) => s.push_str(&md_escape(t)),
            Inline::Code(c) => s.push_str(&md_code(c)),
            Inline::Strong(t) => s.push_str(&format!("**{}**", md_escape(t))),
            Inline::Link(t, to) => s.push_str(&format!("[{}]({})", md_escape(t), href(page, to, "md"))),
        }
    }
    let trimmed = s.trim();
    if trimmed.starts_with(['-', '+', '=']) {
        return format!("\\{trimmed}");
    }
    let digits = trimmed.chars().take_while(char::is_ascii_digit).count();
    match trimmed[digits..].chars().next() {
        Some(c @ ('.' | ')')) if digits > 0 => format!("{}\\{c}{}", &trimmed[..digits], &trimmed[digits + 1..]),
        _ => trimmed.to_owned(),
    }
}

fn markdown(page: &Page) -> String {
    let mut out = String::new();
    for b in &page.blocks {
        match b {
            Block::Heading(level, t) => {
                out.push_str(&format!("{} {}\n\n", "#".repeat(*level), md_inlines(t, &page.stem)))
            }
            Block::Para(t) => out.push_str(&format!("{}\n\n", md_inlines(t, &page.stem))),
            Block::List(items) => {
                for item in items {
                    out.push_str(&format!("- {}\n", md_inlines(item, &page.stem)));
                }
                out.push('\n');
            }
            Block::Table(head, rows) => {
                let cells: Vec<String> = head.iter().map(|h| md_escape(h)).collect();
                out.push_str(&format!("| {} |\n", cells.join(" | ")));
                out.push_str(&format!("|{}\n", " --- |".repeat(head.len())));
                for row in rows {
                    let cells: Vec<String> = row.iter().map(|c| md_inlines(c, &page.stem)).collect();
                    out.push_str(&format!("| {} |\n", cells.join(" | ")));
                }
                out.push('\n');
            }
            Block::Code(body) => {
                let longest = body.split(|c| c != '`').map(str::len).max().unwrap_or(0);
                let fence = "`".repeat(longest.max(2) + 1);
                out.push_str(&format!("{fence}yaml\n{body}"));
                if !body.ends_with('\n') {
                    out.push('\n');
                }
                out.push_str(&format!("{fence}\n\n"));
            }
        }
    }
    while out.ends_with("\n\n") {
        out.pop();
    }
    out
}

fn html_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            c => out.push(c),
        }
    }
    out
}

fn html_inlines(items: &[Inline], page: &str) -> String {
    let mut s = String::new();
    for i in items {
        match i {
            Inline::Text(t) => s.push_str(&html_escape(t)),
            Inline::Code(c) => s.push_str(&format!("<code>{}</code>", html_escape(c))),
            Inline::Strong(t) => s.push_str(&format!("<strong>{}</strong>", html_escape(t))),
            Inline::Link(t, to) => s.push_str(&format!(
                "<a href=\"{}\">{}</a>",
                html_escape(&href(page, to, "html")),
                html_escape(t)
            )),
        }
    }
    s
}

const STYLE: &str = "body{font-family:sans-serif;max-width:60em;margin:2em auto;padding:0 1em;line-height:1.5}\
code,pre{background:#f4f4f4;border-radius:3px}pre{padding:.5em;overflow:auto}\
table{border-collapse:collapse}td,th{border:1px solid #ccc;padding:.2em .5em;text-align:left}";

fn html(page: &Page) -> String {
    let mut out = String::new();
    out.push_str("<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n");
    out.push_str(&format!(
        "<title>{}</title>\n<style>{STYLE}</style>\n</head>\n<body>\n",
        html_escape(&page.title)
    ));
    for b in &page.blocks {
        match b {
            Block::Heading(level, t) => {
                out.push_str(&format!("<h{level}>{}</h{level}>\n", html_inlines(t, &page.stem)))
            }
            Block::Para(t) => out.push_str(&format!("<p>{}</p>\n", html_inlines(t, &page.stem))),
            Block::List(items) => {
                out.push_str("<ul>\n");
                for item in items {
                    out.push_str(&format!("<li>{}</li>\n", html_inlines(item, &page.stem)));
                }
                out.push_str("</ul>\n");
            }
            Block::Table(head, rows) => {
                out.push_str("<table>\n<tr>");
                for h in head {
                    out.push_str(&format!("<th>{}</th>", html_escape(h)));
                }
                out.push_str("</tr>\n");
                for row in rows {
                    out.push_str("<tr>");
                    for c in row {
                        out.push_str(&format!("<td>{}</td>", html_inlines(c, &page.stem)));
                    }
                    out.push_str("</tr>\n");
                }
                out.push_str("</table>\n");
            }
            Block::Code(body) => out.push_str(&format!("<pre><code>{}</code></pre>\n", html_escape(body))),
        }
    }
    out.push_str("</body>\n</html>\n");
    out
}

pub(crate) fn render(doc: &DataDescDocument, format: DocsFormat) -> FileSet {
    let b = Builder::new(doc);
    let mut pages = vec![b.index()];
    for name in b.pages.keys() {
        pages.push(b.class_page(name, &doc.components[name]));
    }
    let mut files = FileSet::new();
    for page in pages {
        let body = match format {
            DocsFormat::Markdown => markdown(&page),
            DocsFormat::Html => html(&page),
        };
        // Stems are unique and normalized by construction.
        let _ = files.insert(format!("{}.{}", page.stem, format.extension()), body);
    }
    files
}
