//! Turn raw downloaded plain-text books into clean, UTF-8, metadata-tagged
//! document bodies.
//!
//! The stages mirror the corpus preparation workflow: decode bytes against a
//! fixed list of candidate encodings, cut away the Project Gutenberg
//! preamble/license boilerplate, then pull title, author, year, and
//! translation status out of the header lines.
//!
//! The header field extractors are best-effort pattern matches tuned for
//! era-typical Finnish title pages; missing fields stay absent rather than
//! being guessed.

pub mod encoding;

use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use encoding::TextEncoding;

/// A downloaded book before any processing.
#[derive(Debug, Clone)]
pub struct RawBook {
    /// File stem or catalog id; the join key for everything downstream.
    pub source_id: String,
    pub bytes: Vec<u8>,
    /// Encoding claimed by an external catalog, if any. Informational only:
    /// decoding always follows the fixed candidate order.
    pub declared_encoding: Option<String>,
}

/// Bibliographic fields recovered from a book's header lines.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub title: String,
    pub author: Option<String>,
    pub year: Option<u16>,
    pub is_translation: bool,
    pub source_id: String,
}

/// A decoded, boilerplate-free book body plus its metadata.
#[derive(Debug, Clone)]
pub struct CleanDocument {
    pub metadata: Metadata,
    pub body: String,
    pub warnings: Vec<String>,
}

#[derive(Debug, Error)]
pub enum IngestError {
    /// Every candidate encoding failed; the document must be skipped and
    /// counted in the run manifest.
    #[error("{source_id}: no candidate encoding could decode the input")]
    EncodingUndecodable { source_id: String },
    #[error("{source_id}: input is empty")]
    EmptyInput { source_id: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Result of a successful decode: the text and the candidate that won.
#[derive(Debug, Clone)]
pub struct Decoded {
    pub text: String,
    pub encoding: TextEncoding,
}

/// Decode a raw book to UTF-8 text.
///
/// Candidates are tried in a fixed order (strict UTF-8, then ISO-8859-1,
/// ISO-8859-15, Windows-1252); the first that decodes without error and
/// whose output contains no replacement characters wins. A leading UTF-8
/// byte-order mark is dropped before decoding.
pub fn normalize_encoding(raw: &RawBook) -> Result<Decoded, IngestError> {
    if raw.bytes.is_empty() {
        return Err(IngestError::EmptyInput {
            source_id: raw.source_id.clone(),
        });
    }
    let bytes = match raw.bytes.strip_prefix(&[0xEF, 0xBB, 0xBF]) {
        Some(rest) => rest,
        None => &raw.bytes,
    };
    for candidate in encoding::CANDIDATE_ORDER {
        if let Some(text) = encoding::decode(bytes, candidate) {
            if !text.contains('\u{FFFD}') {
                return Ok(Decoded {
                    text,
                    encoding: candidate,
                });
            }
        }
    }
    Err(IngestError::EncodingUndecodable {
        source_id: raw.source_id.clone(),
    })
}

fn is_marker_line(line: &str, prefix: &str) -> bool {
    let trimmed = line.trim();
    trimmed.starts_with(prefix) && trimmed.ends_with("***")
}

/// Remove the Project Gutenberg preamble and trailing license text.
///
/// The body is the text strictly between the first `*** START OF ... ***`
/// line and the first `*** END OF ... ***` line after it, with surrounding
/// whitespace trimmed. Either marker may be missing; with no markers at all
/// the text comes back unchanged. Idempotent.
pub fn strip_boilerplate(text: &str) -> (String, bool) {
    let mut body_start = 0usize;
    let mut found_start = false;
    let mut offset = 0usize;
    for line in text.split_inclusive('\n') {
        if is_marker_line(line, "*** START OF") {
            body_start = offset + line.len();
            found_start = true;
            break;
        }
        offset += line.len();
    }

    let mut body_end = text.len();
    let mut found_end = false;
    let mut offset = 0usize;
    for line in text.split_inclusive('\n') {
        if offset >= body_start && is_marker_line(line, "*** END OF") {
            body_end = offset;
            found_end = true;
            break;
        }
        offset += line.len();
    }

    if !found_start && !found_end {
        return (text.to_string(), false);
    }
    let body_end = body_end.max(body_start);
    (text[body_start..body_end].trim().to_string(), true)
}

const HEADER_WINDOW: usize = 20;

static AUTHOR_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"(?i)^(?:kirj\.|kirjoittanut|kirjoitti|tekijä:?)\s*(.*)$").unwrap()
});
static TRANSLATOR_LINE_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)^(?:suomenta|suomennet|käänn)").unwrap());
static YEAR_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\b(\d{3,4})\b").unwrap());
static YEAR_ONLY_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^\(?\d{3,4}\)?\.?$").unwrap());
static ROMAN_HEADING_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^[IVXL]+\.?$").unwrap());

fn is_title_candidate(line: &str) -> bool {
    line.len() <= 80
        && !AUTHOR_RE.is_match(line)
        && !TRANSLATOR_LINE_RE.is_match(line)
        && !YEAR_ONLY_RE.is_match(line)
        && !ROMAN_HEADING_RE.is_match(line)
        && !line.ends_with(['.', ',', ';', ':', '!', '?'])
}

/// Pull title, author, and year out of labeled header lines near the top of
/// a boilerplate-free body. Fields that cannot be recognized stay absent;
/// a missing title falls back to the source id so downstream joins always
/// have a key.
pub fn extract_metadata(body: &str, source_id: &str) -> Metadata {
    let header: Vec<&str> = body
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .take(HEADER_WINDOW)
        .collect();

    let mut author = None;
    for (i, line) in header.iter().enumerate() {
        if let Some(caps) = AUTHOR_RE.captures(line) {
            let payload = caps.get(1).map_or("", |m| m.as_str().trim());
            // Label alone on its line: the name follows on the next one.
            let payload = if payload.is_empty() {
                header.get(i + 1).copied().unwrap_or("")
            } else {
                payload
            };
            let cleaned = payload.trim_end_matches(['.', ',', ';', ':']).trim();
            if !cleaned.is_empty() && !YEAR_ONLY_RE.is_match(cleaned) {
                author = Some(cleaned.to_string());
            }
            break;
        }
    }

    let mut year = None;
    for line in &header {
        if let Some(caps) = YEAR_RE.captures(line) {
            year = caps[1].parse::<u16>().ok().filter(|y| *y >= 100);
            if year.is_some() {
                break;
            }
        }
    }

    let title = header
        .iter()
        .find(|l| is_title_candidate(l))
        .map(|s| s.to_string())
        .unwrap_or_else(|| source_id.to_string());

    Metadata {
        title,
        author,
        year,
        is_translation: detect_translation(body),
        source_id: source_id.to_string(),
    }
}

/// Translation-credit terms all share these stems ("translator",
/// "translated", and inflections).
const TRANSLATION_PREFIXES: [&str; 3] = ["suomenta", "suomennet", "käänn"];

/// True iff any of the first ten non-empty lines carries a translation
/// credit. Text after the tenth non-empty line never affects the result.
pub fn detect_translation(body: &str) -> bool {
    body.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .take(10)
        .any(|line| {
            let lower = line.to_lowercase();
            lower
                .split(|c: char| !c.is_alphanumeric())
                .any(|word| TRANSLATION_PREFIXES.iter().any(|p| word.starts_with(p)))
        })
}

/// Run the full cleaning pipeline on one raw book.
pub fn clean_document(raw: &RawBook) -> Result<CleanDocument, IngestError> {
    let decoded = normalize_encoding(raw)?;
    let mut warnings = Vec::new();
    if decoded.encoding != TextEncoding::Utf8 {
        warnings.push(format!("decoded as {}", decoded.encoding));
    }
    if let Some(declared) = &raw.declared_encoding {
        let declared_norm = declared.trim().to_lowercase();
        if !declared_norm.is_empty() && declared_norm != decoded.encoding.name() {
            warnings.push(format!(
                "catalog declared {declared} but {} was used",
                decoded.encoding
            ));
        }
    }
    let (body, stripped) = strip_boilerplate(&decoded.text);
    if !stripped {
        warnings.push("no boilerplate markers found".to_string());
    }
    let metadata = extract_metadata(&body, &raw.source_id);
    Ok(CleanDocument {
        metadata,
        body,
        warnings,
    })
}
