//! CoNLL-U consumption: token lines become [`Token`]s, `# newpar` comments
//! drive paragraph indices, blank lines drive sentence indices.

use std::io::BufRead;

use crate::ingest::Metadata;

use super::{AnnotatedDocument, StructureError, Token};

const CONLLU_COLUMNS: usize = 10;

/// Parse one book's CoNLL-U stream into an annotated document.
///
/// Multiword range lines (`a-b`) and empty nodes (`a.b`) are skipped in
/// favor of their parts. Chapter indices start at 0; run
/// [`super::chapterize`] afterwards to populate them.
pub fn parse_conllu(
    reader: impl BufRead,
    metadata: Metadata,
) -> Result<AnnotatedDocument, StructureError> {
    let mut tokens: Vec<Token> = Vec::new();
    let mut sentence_idx = 0usize;
    let mut paragraph_idx = 0usize;
    let mut sentence_has_tokens = false;
    let mut pending_newpar = false;

    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = i + 1;
        let trimmed = line.trim_end_matches(['\r', '\n']);
        if trimmed.trim().is_empty() {
            if sentence_has_tokens {
                sentence_idx += 1;
                sentence_has_tokens = false;
            }
            continue;
        }
        if trimmed.starts_with('#') {
            if trimmed[1..].trim_start().starts_with("newpar") {
                pending_newpar = true;
            }
            continue;
        }
        let columns: Vec<&str> = trimmed.split('\t').collect();
        if columns.len() != CONLLU_COLUMNS {
            return Err(StructureError::MalformedLine { line: line_no });
        }
        let id = columns[0];
        if id.contains('-') || id.contains('.') {
            continue;
        }
        if pending_newpar {
            if !tokens.is_empty() {
                paragraph_idx += 1;
            }
            pending_newpar = false;
        }
        let surface = columns[1].to_string();
        let raw_lemma = columns[2];
        let lemma = if raw_lemma.is_empty() || raw_lemma == "_" {
            surface.to_lowercase()
        } else {
            raw_lemma.to_lowercase()
        };
        tokens.push(Token {
            surface,
            lemma,
            is_word: columns[3] != "PUNCT",
            sentence_idx,
            paragraph_idx,
            chapter_idx: 0,
        });
        sentence_has_tokens = true;
    }

    Ok(AnnotatedDocument::new(metadata, tokens))
}
