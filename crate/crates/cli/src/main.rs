//! `datadesc` command-line tool.
//!
//! Exit status: 0 on success, 1 when the input has errors (invalid
//! documents, invalid data, merge conflicts), 2 on usage or I/O problems.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use datadesc::diagnostic::{has_errors, Diagnostic};
use datadesc::exchange::{emit_document, parse_document_bytes, read_info_file, ParsedDocument};
use datadesc::export::{export, ExportTarget};
use datadesc::merge::{merge_fragments, MergePolicy};
use datadesc::model::{DataDescDocument, SoftwareInfo};
use datadesc::source::{extract_interface, parse_source, SourceUnit};
use datadesc::validate::{resolve_target, validate_target, DataValue};

#[derive(Parser)]
#[command(
    name = "datadesc",
    version,
    about = "Describe, check and publish software interfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a document and report every finding.
    Check { document: PathBuf },
    /// Build a document from annotated source files.
    Extract {
        #[arg(required = true)]
        sources: Vec<PathBuf>,
        /// Info section as YAML or a CodeMeta JSON record.
        #[arg(long)]
        info: Option<PathBuf>,
        #[arg(long, default_value = "unnamed", conflicts_with = "info")]
        title: String,
        #[arg(long = "software-version", default_value = "0.0.0", conflicts_with = "info")]
        software_version: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Merge complete or partial documents.
    Merge {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = OnConflict::Error)]
        on_conflict: OnConflict,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a data file against a class, function, property or parameter.
    ValidateData {
        document: PathBuf,
        /// `Class`, `Class.member` or `Class.function.param`.
        #[arg(long)]
        target: String,
        data: PathBuf,
    },
    /// Write publication artifacts.
    Export {
        document: PathBuf,
        #[arg(long, value_enum)]
        target: Vec<Target>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OnConflict {
    Error,
    First,
    Last,
}

impl From<OnConflict> for MergePolicy {
    fn from(c: OnConflict) -> Self {
        match c {
            OnConflict::Error => MergePolicy::Error,
            OnConflict::First => MergePolicy::PreferFirst,
            OnConflict::Last => MergePolicy::PreferLast,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    DocsMd,
    DocsHtml,
    Codemeta,
    Package,
    Registry,
}

impl From<Target> for ExportTarget {
    fn from(t: Target) -> Self {
        match t {
            Target::DocsMd => ExportTarget::DocsMarkdown,
            Target::DocsHtml => ExportTarget::DocsHtml,
            Target::Codemeta => ExportTarget::CodeMetaJson,
            Target::Package => ExportTarget::PackageMetadata,
            Target::Registry => ExportTarget::RegistryRecord,
        }
    }
}

enum Failure {
    Findings,
    Fatal(String),
}

type Run = Result<(), Failure>;

fn fatal(e: impl std::fmt::Display) -> Failure {
    Failure::Fatal(e.to_string())
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::Fatal(format!("{}: {e}", path.display())))
}

fn report(diagnostics: &[Diagnostic]) {
    let mut err = io::stderr().lock();
    for d in diagnostics {
        let _ = writeln!(err, "{d}");
    }
}

fn load(path: &Path) -> Result<ParsedDocument, Failure> {
    parse_document_bytes(&read(path)?).map_err(|e| Failure::Fatal(format!("{}: {} {e}", path.display(), e.code())))
}

fn load_valid(path: &Path) -> Result<DataDescDocument, Failure> {
    let parsed = load(path)?;
    if parsed.has_errors() {
        let errors: Vec<Diagnostic> = parsed.diagnostics.into_iter().filter(Diagnostic::is_error).collect();
        report(&errors);
        return Err(Failure::Findings);
    }
    Ok(parsed.document)
}

fn write_text(output: Option<&Path>, text: &str) -> Run {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Fatal(format!("{}: {e}", p.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(fatal),
    }
}

fn check(document: &Path) -> Run {
    let parsed = load(document)?;
    report(&parsed.diagnostics);
    if parsed.has_errors() {
        Err(Failure::Findings)
    } else {
        Ok(())
    }
}

fn extract(sources: &[PathBuf], info: SoftwareInfo, output: Option<&Path>) -> Run {
    let mut trees = Vec::new();
    let mut diagnostics = Vec::new();
    for path in sources {
        let name = path.display().to_string();
        let unit = SourceUnit::from_bytes(name.clone(), &read(path)?).map_err(|e| fatal(e.diagnostic(&name)))?;
        let (tree, diags) = parse_source(&unit).map_err(|e| fatal(e.diagnostic(&name)))?;
        diagnostics.extend(diags);
        trees.push(tree);
    }
    let extraction = extract_interface(&trees, info).map_err(|e| Failure::Fatal(format!("{} {e}", e.code())))?;
    diagnostics.extend(extraction.diagnostics);
    report(&diagnostics);
    if has_errors(&diagnostics) {
        return Err(Failure::Findings);
    }
    write_text(output, &emit_document(&extraction.document).map_err(fatal)?)
}

fn merge(inputs: &[PathBuf], policy: MergePolicy, output: Option<&Path>) -> Run {
    let mut fragments = Vec::new();
    for path in inputs {
        let bytes = read(path)?;
        let value = serde_yaml::from_slice(&bytes).map_err(|e| Failure::Fatal(format!("{}: {e}", path.display())))?;
        fragments.push(value);
    }
    let result = match merge_fragments(&fragments, policy) {
        Ok(r) => r,
        Err(e) => {
            report(e.diagnostics());
            return Err(Failure::Fatal(format!("{} {e}", e.code())));
        }
    };
    report(&result.conflicts);
    report(&result.diagnostics);
    let Some(doc) = result.merged else {
        return Err(Failure::Findings);
    };
    write_text(output, &emit_document(&doc).map_err(fatal)?)
}

fn validate_data(document: &Path, target: &str, data: &Path) -> Run {
    let doc = load_valid(document)?;
    let target = resolve_target(&doc, target).map_err(fatal)?;
    let raw = serde_yaml::from_slice(&read(data)?).map_err(|e| Failure::Fatal(format!("{}: {e}", data.display())))?;
    let value = DataValue::from_raw(&raw).map_err(fatal)?;
    let result = validate_target(&doc, target, &value);
    report(&result.diagnostics);
    if result.valid {
        Ok(())
    } else {
        Err(Failure::Findings)
    }
}

fn export_all(document: &Path, targets: &[Target], out: &Path) -> Run {
    let doc = load_valid(document)?;
    let targets: Vec<ExportTarget> = if targets.is_empty() {
        ExportTarget::ALL.to_vec()
    } else {
        targets.iter().map(|&t| t.into()).collect()
    };
    for target in targets {
        let (files, diags) = export(&doc, target).map_err(fatal)?;
        report(&diags);
        files
            .write_to(out)
            .map_err(|e| Failure::Fatal(format!("{}: {e}", out.display())))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Run {
    match cli.command {
        Command::Check { document } => check(&document),
        Command::Extract {
            sources,
            info,
            title,
            software_version,
            output,
        } => {
            let info = match info {
                Some(path) => {
                    let text = String::from_utf8(read(&path)?).map_err(fatal)?;
                    let (info, diags) =
                        read_info_file(&text).map_err(|e| Failure::Fatal(format!("{}: {e}", path.display())))?;
                    report(&diags);
                    info
                }
                None => SoftwareInfo::new(title, software_version),
            };
            extract(&sources, info, output.as_deref())
        }
        Command::Merge {
            inputs,
            on_conflict,
            output,
        } => merge(&inputs, on_conflict.into(), output.as_deref()),
        Command::ValidateData { document, target, data } => validate_data(&document, &target, &data),
        Command::Export { document, target, out } => export_all(&document, &target, &out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Findings) => ExitCode::from(1),
        Err(Failure::Fatal(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
