//! Declared file-format tags checked against file names and leading bytes.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileFormatCheck {
    Match,
    Mismatch,
    /// The tag is not in the table; nothing can be said.
    UnknownTag,
}

struct Format {
    tags: &'static [&'static str],
    extensions: &'static [&'static str],
    magic: &'static [&'static [u8]],
    text_prefix: &'static [&'static str],
}

const FORMATS: &[Format] = &[
    Format {
        tags: &["netcdf", "nc"],
        extensions: &["nc", "nc4", "cdf"],
        magic: &[b"CDF\x01", b"CDF\x02", b"CDF\x05", b"\x89HDF\r\n\x1a\n"],
        text_prefix: &[],
    },
    Format {
        tags: &["xlsx", "excel"],
        extensions: &["xlsx", "xlsm"],
        magic: &[b"PK\x03\x04"],
        text_prefix: &[],
    },
    Format {
        tags: &["xls"],
        extensions: &["xls"],
        magic: &[b"\xD0\xCF\x11\xE0\xA1\xB1\x1A\xE1"],
        text_prefix: &[],
    },
    Format {
        tags: &["xml"],
        extensions: &["xml"],
        magic: &[],
        text_prefix: &["<?xml", "<"],
    },
    Format {
        tags: &["json"],
        extensions: &["json"],
        magic: &[],
        text_prefix: &["{", "["],
    },
    Format {
        tags: &["csv"],
        extensions: &["csv"],
        magic: &[],
        text_prefix: &[],
    },
    Format {
        tags: &["txt", "text"],
        extensions: &["txt", "text"],
        magic: &[],
        text_prefix: &[],
    },
    Format {
        tags: &["pdf"],
        extensions: &["pdf"],
        magic: &[b"%PDF-"],
        text_prefix: &[],
    },
    Format {
        tags: &["jpg", "jpeg"],
        extensions: &["jpg", "jpeg"],
        magic: &[b"\xFF\xD8\xFF"],
        text_prefix: &[],
    },
    Format {
        tags: &["html", "htm"],
        extensions: &["html", "htm"],
        magic: &[],
        text_prefix: &["<!doctype html", "<html"],
    },
];

fn lookup(tag: &str) -> Option<&'static Format> {
    let tag = tag.trim().to_ascii_lowercase();
    FORMATS.iter().find(|f| f.tags.contains(&tag.as_str()))
}

pub fn is_known_format(tag: &str) -> bool {
    lookup(tag).is_some()
}

/// Checks a file name (and, when given, its leading bytes) against `tag`.
///
/// The extension must be one of the tag's extensions. When `content` is
/// supplied and the format has a signature, the content must start with it;
/// formats without a signature (CSV, TXT) are judged on the name alone.
pub fn check_file_format(tag: &str, file_name: &str, content: Option<&[u8]>) -> FileFormatCheck {
    let Some(format) = lookup(tag) else {
        return FileFormatCheck::UnknownTag;
    };
    let ext = std::path::Path::new(file_name)
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase);
    let ext_ok = ext.is_some_and(|e| format.extensions.contains(&e.as_str()));
    if !ext_ok {
        return FileFormatCheck::Mismatch;
    }
    if let Some(bytes) = content {
        if !format.magic.is_empty() && !format.magic.iter().any(|m| bytes.starts_with(m)) {
            return FileFormatCheck::Mismatch;
        }
        if !format.text_prefix.is_empty() {
            let head: String = String::from_utf8_lossy(&bytes[..bytes.len().min(64)])
                .trim_start_matches('\u{feff}')
                .trim_start()
                .to_ascii_lowercase();
            if !format.text_prefix.iter().any(|p| head.starts_with(p)) {
                return FileFormatCheck::Mismatch;
            }
        }
    }
    FileFormatCheck::Match
}
