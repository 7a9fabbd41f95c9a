//! Corpus analysis toolkit for lexicon-based mood detection in literary texts.
//!
//! The pipeline turns raw plain-text books into normalized emotion-intensity
//! profiles:
//!
//! 1. [`ingest`] — decode legacy encodings, strip Project Gutenberg
//!    boilerplate, extract title/author/year metadata, flag translations.
//! 2. [`structure`] — parse CoNLL-U annotations (or fall back to a built-in
//!    tokenizer), detect chapter boundaries, and cut the two mood-target
//!    segmentations: the first paragraphs of a book and the opening tokens
//!    of every chapter.
//! 3. [`lexicon`] — load, validate, and patch emotion-intensity lexicons in
//!    the NRC-style `word<TAB>emotion<TAB>intensity` format, and compute
//!    emotion co-occurrence statistics.
//! 4. [`embed`] — word-vector similarity for lexicon refinement, either from
//!    pretrained vectors or from a count-based PPMI space built over the
//!    corpus itself.
//! 5. [`score`] — per-segment emotion-intensity profiles normalized per
//!    1000 word tokens, corpus aggregation, and strategy comparison.
//!
//! The `litmood` binary (see [`cli`]) orchestrates these stages and writes
//! score tables, co-occurrence matrices, and SVG charts.

pub mod cli;
pub mod embed;
pub mod ingest;
pub mod lexicon;
pub mod plot;
pub mod score;
pub mod structure;

pub use ingest::{CleanDocument, IngestError, Metadata, RawBook};
pub use lexicon::{Emotion, EmotionLexicon, LexiconError, LexiconPatch};
pub use score::{EmotionProfile, ScoreError, ScoringStrategy};
pub use structure::{AnnotatedDocument, Segment, SegmentOrigin, StructureError, Token};

/// Tool version recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
