//! Document structure: annotated token streams, chapter boundaries, and the
//! two mood-target segmentations.

mod chapters;
mod conllu;
mod tokenize;

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::ingest::Metadata;

pub use chapters::chapterize;
pub use conllu::parse_conllu;
pub use tokenize::fallback_tokenize;

/// One token of a book, carrying its annotation and position indices.
///
/// Indices are non-negative and non-decreasing in document order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Token {
    pub surface: String,
    /// Lowercased lemma; for punctuation tokens this is just the surface.
    pub lemma: String,
    /// False for punctuation.
    pub is_word: bool,
    pub sentence_idx: usize,
    pub paragraph_idx: usize,
    pub chapter_idx: usize,
}

/// A book as an ordered token stream plus structural bookkeeping.
#[derive(Debug, Clone)]
pub struct AnnotatedDocument {
    pub metadata: Metadata,
    pub tokens: Vec<Token>,
    /// `1 + max(chapter_idx)`, or 0 for an empty document.
    pub chapter_count: usize,
    /// Paragraph indices recognized as chapter headings by [`chapterize`].
    pub heading_paragraphs: BTreeSet<usize>,
    pub warnings: Vec<String>,
}

impl AnnotatedDocument {
    pub(crate) fn new(metadata: Metadata, tokens: Vec<Token>) -> Self {
        let chapter_count = tokens
            .iter()
            .map(|t| t.chapter_idx + 1)
            .max()
            .unwrap_or(0);
        AnnotatedDocument {
            metadata,
            tokens,
            chapter_count,
            heading_paragraphs: BTreeSet::new(),
            warnings: Vec::new(),
        }
    }

    pub fn doc_id(&self) -> &str {
        &self.metadata.source_id
    }

    /// Paragraph count implied by the token stream.
    pub fn paragraph_count(&self) -> usize {
        self.tokens
            .iter()
            .map(|t| t.paragraph_idx + 1)
            .max()
            .unwrap_or(0)
    }
}

/// Which segmentation produced a [`Segment`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SegmentOrigin {
    /// The first paragraphs of the book.
    FirstParagraphs,
    /// The opening tokens of one chapter.
    ChapterOpenings,
}

impl SegmentOrigin {
    /// Stable label used in CSV output and CLI flags.
    pub fn label(self) -> &'static str {
        match self {
            SegmentOrigin::FirstParagraphs => "first-paragraphs",
            SegmentOrigin::ChapterOpenings => "chapter-openings",
        }
    }
}

/// A contiguous token slice selected by a segmentation strategy.
#[derive(Debug, Clone)]
pub struct Segment {
    pub doc_id: String,
    pub origin: SegmentOrigin,
    /// Set for chapter-opening segments; `None` for book-level ones.
    pub chapter_idx: Option<usize>,
    pub tokens: Vec<Token>,
}

#[derive(Debug, Error)]
pub enum StructureError {
    #[error("line {line}: expected 10 tab-separated columns")]
    MalformedLine { line: usize },
    #[error("document has no tokens")]
    EmptyDocument,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Tokens of the first `n` non-heading paragraphs of chapter 0.
///
/// Heading paragraphs are structural, not mood-bearing prose, and are
/// skipped. Books with fewer than `n` paragraphs contribute what they have.
pub fn segment_first_paragraphs(
    doc: &AnnotatedDocument,
    n: usize,
) -> Result<Segment, StructureError> {
    if n == 0 {
        return Err(StructureError::InvalidParameter(
            "paragraph count must be at least 1".to_string(),
        ));
    }
    if doc.tokens.is_empty() {
        return Err(StructureError::EmptyDocument);
    }
    let mut tokens = Vec::new();
    let mut seen_paragraphs = Vec::new();
    for token in doc.tokens.iter().filter(|t| t.chapter_idx == 0) {
        if doc.heading_paragraphs.contains(&token.paragraph_idx) {
            continue;
        }
        if seen_paragraphs.last() != Some(&token.paragraph_idx) {
            if seen_paragraphs.len() == n {
                break;
            }
            seen_paragraphs.push(token.paragraph_idx);
        }
        tokens.push(token.clone());
    }
    if tokens.is_empty() {
        return Err(StructureError::EmptyDocument);
    }
    Ok(Segment {
        doc_id: doc.doc_id().to_string(),
        origin: SegmentOrigin::FirstParagraphs,
        chapter_idx: None,
        tokens,
    })
}

/// One segment per chapter holding its first `k` tokens (word and
/// punctuation alike, heading paragraphs excluded). Chapters shorter than
/// `k` are used whole; chapters left empty after heading exclusion yield no
/// segment.
pub fn segment_chapter_openings(
    doc: &AnnotatedDocument,
    k: usize,
) -> Result<Vec<Segment>, StructureError> {
    if k == 0 {
        return Err(StructureError::InvalidParameter(
            "token count must be at least 1".to_string(),
        ));
    }
    if doc.tokens.is_empty() {
        return Err(StructureError::EmptyDocument);
    }
    let mut per_chapter: Vec<Vec<Token>> = vec![Vec::new(); doc.chapter_count];
    for token in &doc.tokens {
        if doc.heading_paragraphs.contains(&token.paragraph_idx) {
            continue;
        }
        let bucket = &mut per_chapter[token.chapter_idx];
        if bucket.len() < k {
            bucket.push(token.clone());
        }
    }
    Ok(per_chapter
        .into_iter()
        .enumerate()
        .filter(|(_, tokens)| !tokens.is_empty())
        .map(|(chapter_idx, tokens)| Segment {
            doc_id: doc.doc_id().to_string(),
            origin: SegmentOrigin::ChapterOpenings,
            chapter_idx: Some(chapter_idx),
            tokens,
        })
        .collect())
}

#[cfg(test)]
pub(crate) fn test_metadata(source_id: &str) -> Metadata {
    Metadata {
        title: source_id.to_string(),
        author: None,
        year: None,
        is_translation: false,
        source_id: source_id.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc_with_chapters(tokens_per_chapter: &[usize]) -> AnnotatedDocument {
        let mut tokens = Vec::new();
        for (chapter, &count) in tokens_per_chapter.iter().enumerate() {
            for i in 0..count {
                tokens.push(Token {
                    surface: format!("sana{chapter}_{i}"),
                    lemma: format!("sana{chapter}_{i}"),
                    is_word: true,
                    sentence_idx: chapter,
                    paragraph_idx: chapter,
                    chapter_idx: chapter,
                });
            }
        }
        AnnotatedDocument::new(test_metadata("doc"), tokens)
    }

    #[test]
    fn chapter_openings_truncate_at_k() {
        let doc = doc_with_chapters(&[350, 500, 120]);
        let segments = segment_chapter_openings(&doc, 200).unwrap();
        let sizes: Vec<usize> = segments.iter().map(|s| s.tokens.len()).collect();
        assert_eq!(sizes, vec![200, 200, 120]);
    }

    #[test]
    fn single_chapter_yields_single_segment() {
        let doc = doc_with_chapters(&[40]);
        let segments = segment_chapter_openings(&doc, 200).unwrap();
        assert_eq!(segments.len(), 1);
        assert_eq!(segments[0].chapter_idx, Some(0));
    }

    #[test]
    fn zero_k_is_invalid() {
        let doc = doc_with_chapters(&[10]);
        assert!(matches!(
            segment_chapter_openings(&doc, 0),
            Err(StructureError::InvalidParameter(_))
        ));
    }

    #[test]
    fn empty_document_cannot_be_segmented() {
        let doc = AnnotatedDocument::new(test_metadata("empty"), Vec::new());
        assert!(matches!(
            segment_first_paragraphs(&doc, 3),
            Err(StructureError::EmptyDocument)
        ));
        assert!(matches!(
            segment_chapter_openings(&doc, 200),
            Err(StructureError::EmptyDocument)
        ));
    }

    #[test]
    fn first_paragraphs_take_n() {
        // 5 paragraphs of 2 tokens each, all chapter 0.
        let mut tokens = Vec::new();
        for p in 0..5 {
            for i in 0..2 {
                tokens.push(Token {
                    surface: format!("w{p}_{i}"),
                    lemma: format!("w{p}_{i}"),
                    is_word: true,
                    sentence_idx: p,
                    paragraph_idx: p,
                    chapter_idx: 0,
                });
            }
        }
        let doc = AnnotatedDocument::new(test_metadata("doc"), tokens);
        let seg = segment_first_paragraphs(&doc, 3).unwrap();
        assert_eq!(seg.tokens.len(), 6);
        assert!(seg.tokens.iter().all(|t| t.paragraph_idx < 3));
    }

    #[test]
    fn first_paragraphs_use_all_when_short() {
        let mut tokens = Vec::new();
        for p in 0..2 {
            tokens.push(Token {
                surface: format!("w{p}"),
                lemma: format!("w{p}"),
                is_word: true,
                sentence_idx: p,
                paragraph_idx: p,
                chapter_idx: 0,
            });
        }
        let doc = AnnotatedDocument::new(test_metadata("doc"), tokens);
        let seg = segment_first_paragraphs(&doc, 3).unwrap();
        assert_eq!(seg.tokens.len(), 2);
    }

    #[test]
    fn first_paragraphs_skip_headings() {
        let mut tokens = vec![Token {
            surface: "I".to_string(),
            lemma: "i".to_string(),
            is_word: true,
            sentence_idx: 0,
            paragraph_idx: 0,
            chapter_idx: 0,
        }];
        for p in 1..5 {
            tokens.push(Token {
                surface: format!("w{p}"),
                lemma: format!("w{p}"),
                is_word: true,
                sentence_idx: p,
                paragraph_idx: p,
                chapter_idx: 0,
            });
        }
        let mut doc = AnnotatedDocument::new(test_metadata("doc"), tokens);
        doc.heading_paragraphs.insert(0);
        let seg = segment_first_paragraphs(&doc, 3).unwrap();
        let paragraphs: Vec<usize> = seg.tokens.iter().map(|t| t.paragraph_idx).collect();
        assert_eq!(paragraphs, vec![1, 2, 3]);
    }
}
