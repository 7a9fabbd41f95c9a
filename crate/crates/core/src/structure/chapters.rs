//! Chapter boundary detection for era-typical Finnish typography.
//!
//! A paragraph counts as a chapter heading when it is a single short line
//! matching one of: a Roman numeral (I–XL, optional trailing dot), `LUKU`
//! with an optional number, `<number>. LUKU`, `<ordinal> luku`, or a fully
//! uppercase line of at most five words.

use std::collections::BTreeSet;
use std::sync::LazyLock;

use regex::Regex;

use super::{tokenize::paragraph_blocks, AnnotatedDocument};

const MAX_HEADING_CHARS: usize = 60;
const MAX_HEADING_WORDS: usize = 5;

static ROMAN_NUMERALS: LazyLock<BTreeSet<String>> = LazyLock::new(|| {
    (1..=40).map(roman).collect()
});

fn roman(mut n: u32) -> String {
    const STEPS: [(u32, &str); 6] = [
        (40, "XL"),
        (10, "X"),
        (9, "IX"),
        (5, "V"),
        (4, "IV"),
        (1, "I"),
    ];
    let mut out = String::new();
    for (value, glyph) in STEPS {
        while n >= value {
            out.push_str(glyph);
            n -= value;
        }
    }
    out
}

static LUKU_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"(?i)^luku(\s+(\d{1,3}|[ivxl]{1,6}))?\.?$").unwrap()
});
static NUMBERED_LUKU_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)^\d{1,3}\.?\s+luku\.?$").unwrap());
static ORDINAL_LUKU_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(
        r"(?i)^(ensimmäinen|toinen|kolmas|neljäs|viides|kuudes|seitsemäs|kahdeksas|yhdeksäs|kymmenes|yhdestoista|kahdestoista|kolmastoista|neljästoista|viidestoista|kuudestoista|seitsemästoista|kahdeksastoista|yhdeksästoista|kahdeskymmenes)\s+luku\.?$",
    )
    .unwrap()
});

fn is_fully_uppercase(text: &str) -> bool {
    let mut has_letter = false;
    for c in text.chars() {
        if c.is_alphabetic() {
            has_letter = true;
            if c.is_lowercase() {
                return false;
            }
        }
    }
    has_letter && text.split_whitespace().count() <= MAX_HEADING_WORDS
}

/// Heading test for one paragraph's text.
pub(crate) fn is_heading(paragraph: &str) -> bool {
    let text = paragraph.trim();
    if text.is_empty() || text.contains('\n') || text.chars().count() > MAX_HEADING_CHARS {
        return false;
    }
    let stripped = text.strip_suffix('.').unwrap_or(text);
    if ROMAN_NUMERALS.contains(stripped) {
        return true;
    }
    LUKU_RE.is_match(text)
        || NUMBERED_LUKU_RE.is_match(text)
        || ORDINAL_LUKU_RE.is_match(text)
        || is_fully_uppercase(text)
}

/// Assign chapter indices to every token of `doc`.
///
/// Paragraph texts are taken from `body` when its blank-line blocks line up
/// with the document's paragraph indices, otherwise reconstructed from token
/// surfaces. Chapter indices are rebased so chapter 0 is always occupied;
/// a document with no headings has exactly one chapter. Deterministic and
/// idempotent.
pub fn chapterize(mut doc: AnnotatedDocument, body: &str) -> AnnotatedDocument {
    let paragraph_count = doc.paragraph_count();
    if paragraph_count == 0 {
        doc.chapter_count = 0;
        doc.heading_paragraphs = BTreeSet::new();
        return doc;
    }

    let blocks = paragraph_blocks(body);
    let texts: Vec<String> = if blocks.len() == paragraph_count {
        blocks.iter().map(|b| b.to_string()).collect()
    } else {
        // Body paragraphs do not line up with the annotation (e.g. the
        // CoNLL-U segmenter merged or split blocks); fall back to token
        // surfaces joined as a single line.
        let mut texts = vec![String::new(); paragraph_count];
        for token in &doc.tokens {
            let text = &mut texts[token.paragraph_idx];
            if !text.is_empty() {
                text.push(' ');
            }
            text.push_str(&token.surface);
        }
        texts
    };

    let mut heading_paragraphs = BTreeSet::new();
    let mut raw_chapter = vec![0usize; paragraph_count];
    let mut headings_seen = 0usize;
    for (idx, text) in texts.iter().enumerate() {
        if is_heading(text) {
            headings_seen += 1;
            heading_paragraphs.insert(idx);
        }
        raw_chapter[idx] = headings_seen;
    }

    let base = doc
        .tokens
        .iter()
        .map(|t| raw_chapter[t.paragraph_idx])
        .min()
        .unwrap_or(0);
    for token in &mut doc.tokens {
        token.chapter_idx = raw_chapter[token.paragraph_idx] - base;
    }
    doc.chapter_count = doc
        .tokens
        .iter()
        .map(|t| t.chapter_idx + 1)
        .max()
        .unwrap_or(0);
    doc.heading_paragraphs = heading_paragraphs;
    doc
}
