//! Whitespace tokenizer used when no lemmatized CoNLL-U input is available.
//! Lemmas are just lowercased surfaces, which is enough to drive the rest of
//! the pipeline on base-form text and fixtures.

use crate::ingest::Metadata;

use super::{AnnotatedDocument, Token};

/// Split a body into maximal blocks separated by at least one blank line.
/// Returns `(paragraph_text, byte_range)` pairs; used by both the fallback
/// tokenizer and chapter detection.
pub(crate) fn paragraph_blocks(body: &str) -> Vec<&str> {
    let mut blocks = Vec::new();
    let mut block_start: Option<usize> = None;
    let mut offset = 0;
    let mut block_end = 0;
    for line in body.split_inclusive('\n') {
        let is_blank = line.trim().is_empty();
        if is_blank {
            if let Some(start) = block_start.take() {
                blocks.push(body[start..block_end].trim_end());
            }
        } else if block_start.is_none() {
            block_start = Some(offset);
        }
        offset += line.len();
        if !is_blank {
            block_end = offset;
        }
    }
    if let Some(start) = block_start {
        blocks.push(body[start..block_end].trim_end());
    }
    blocks
}

fn is_sentence_end(chunk: &str) -> bool {
    chunk.ends_with(['.', '!', '?'])
}

/// Tokenize clean text: whitespace-separated chunks with leading/trailing
/// punctuation detached into single-character tokens. Sentences end where a
/// `.`, `!`, or `?` is followed by whitespace; paragraphs are blank-line
/// blocks.
pub fn fallback_tokenize(body: &str, metadata: Metadata) -> AnnotatedDocument {
    let mut tokens: Vec<Token> = Vec::new();
    let mut sentence_idx = 0usize;
    let mut sentence_open = false;

    for (paragraph_idx, block) in paragraph_blocks(body).iter().enumerate() {
        if sentence_open {
            // Sentences never span paragraphs.
            sentence_idx += 1;
            sentence_open = false;
        }
        for chunk in block.split_whitespace() {
            let chars: Vec<char> = chunk.chars().collect();
            let mut start = 0;
            while start < chars.len() && !chars[start].is_alphanumeric() {
                start += 1;
            }
            let mut end = chars.len();
            while end > start && !chars[end - 1].is_alphanumeric() {
                end -= 1;
            }
            let mut push = |surface: String, is_word: bool| {
                let lemma = if is_word {
                    surface.to_lowercase()
                } else {
                    surface.clone()
                };
                tokens.push(Token {
                    surface,
                    lemma,
                    is_word,
                    sentence_idx,
                    paragraph_idx,
                    chapter_idx: 0,
                });
            };
            for &c in &chars[..start] {
                push(c.to_string(), false);
            }
            if start < end {
                push(chars[start..end].iter().collect(), true);
            }
            for &c in &chars[end..] {
                push(c.to_string(), false);
            }
            sentence_open = true;
            if is_sentence_end(chunk) {
                sentence_idx += 1;
                sentence_open = false;
            }
        }
    }

    let mut doc = AnnotatedDocument::new(metadata, tokens);
    if doc.tokens.is_empty() {
        doc.warnings.push("empty body produced no tokens".to_string());
    }
    doc
}
