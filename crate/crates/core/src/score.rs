//! Normalized emotion-intensity profiles.
//!
//! Every word token's lemma is looked up in the lexicon; each association
//! found adds its intensity to that emotion's accumulator. The final score
//! per emotion is `1000 · sum / token_count`, where the denominator counts
//! word tokens only — punctuation would deflate scores by typography and
//! break inter-text comparability.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lexicon::{Emotion, EmotionLexicon};
use crate::structure::{
    segment_chapter_openings, segment_first_paragraphs, AnnotatedDocument, Segment,
    SegmentOrigin, StructureError,
};

#[derive(Debug, Error)]
pub enum ScoreError {
    #[error("segment contains no word tokens")]
    EmptySegment,
    #[error("strategies cover different documents: {0}")]
    MismatchedDocuments(String),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// Per-emotion intensity per 1000 word tokens, for one segment or one
/// per-document aggregate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmotionProfile {
    pub doc_id: String,
    #[serde(rename = "strategy", with = "origin_label")]
    pub origin: SegmentOrigin,
    /// Chapter for chapter-opening segments; `None` for book-level profiles
    /// and per-document aggregates.
    pub chapter_idx: Option<usize>,
    pub scores: BTreeMap<Emotion, f64>,
    /// Word tokens in the segment (the normalization denominator).
    pub token_count: usize,
    /// Word tokens with at least one lexicon association.
    pub matched_count: usize,
}

mod origin_label {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::structure::SegmentOrigin;

    pub fn serialize<S: Serializer>(
        origin: &SegmentOrigin,
        serializer: S,
    ) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(origin.label())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> Result<SegmentOrigin, D::Error> {
        let label = String::deserialize(deserializer)?;
        match label.as_str() {
            "first-paragraphs" => Ok(SegmentOrigin::FirstParagraphs),
            "chapter-openings" => Ok(SegmentOrigin::ChapterOpenings),
            other => Err(D::Error::custom(format!("unknown strategy {other:?}"))),
        }
    }
}

impl EmotionProfile {
    /// Scores renormalized to sum 1; `None` for all-zero profiles.
    pub fn proportions(&self) -> Option<BTreeMap<Emotion, f64>> {
        let total: f64 = self.scores.values().sum();
        if total <= 0.0 {
            return None;
        }
        Some(
            self.scores
                .iter()
                .map(|(emotion, score)| (emotion.clone(), score / total))
                .collect(),
        )
    }
}

/// One lexicon hit: the segment-relative token position, the lemma, and the
/// association that fired.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRow {
    pub position: usize,
    pub lemma: String,
    pub emotion: Emotion,
    pub intensity: f64,
}

/// Every lexicon hit behind one profile, for score auditing.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct MatchTrace {
    pub rows: Vec<TraceRow>,
}

/// Score one segment. The trace records every association that contributed.
pub fn score_segment(
    segment: &Segment,
    lexicon: &EmotionLexicon,
) -> Result<(EmotionProfile, MatchTrace), ScoreError> {
    let mut accumulators: BTreeMap<Emotion, f64> = BTreeMap::new();
    let mut trace = MatchTrace::default();
    let mut token_count = 0usize;
    let mut matched_count = 0usize;

    for (position, token) in segment.tokens.iter().enumerate() {
        if !token.is_word {
            continue;
        }
        token_count += 1;
        if let Some(associations) = lexicon.associations(&token.lemma) {
            matched_count += 1;
            for (emotion, &intensity) in associations {
                *accumulators.entry(emotion.clone()).or_insert(0.0) += intensity;
                trace.rows.push(TraceRow {
                    position,
                    lemma: token.lemma.clone(),
                    emotion: emotion.clone(),
                    intensity,
                });
            }
        }
    }
    if token_count == 0 {
        return Err(ScoreError::EmptySegment);
    }

    let scores = lexicon
        .emotion_set()
        .into_iter()
        .map(|emotion| {
            let sum = accumulators.get(&emotion).copied().unwrap_or(0.0);
            (emotion, 1000.0 * sum / token_count as f64)
        })
        .collect();

    Ok((
        EmotionProfile {
            doc_id: segment.doc_id.clone(),
            origin: segment.origin,
            chapter_idx: segment.chapter_idx,
            scores,
            token_count,
            matched_count,
        },
        trace,
    ))
}

/// Segmentation choice with its parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScoringStrategy {
    FirstParagraphs { n: usize },
    ChapterOpenings { k: usize },
}

impl ScoringStrategy {
    pub fn origin(self) -> SegmentOrigin {
        match self {
            ScoringStrategy::FirstParagraphs { .. } => SegmentOrigin::FirstParagraphs,
            ScoringStrategy::ChapterOpenings { .. } => SegmentOrigin::ChapterOpenings,
        }
    }
}

/// A trace tagged with the segment it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentTrace {
    pub doc_id: String,
    pub chapter_idx: Option<usize>,
    pub trace: MatchTrace,
}

#[derive(Debug, Clone, Default)]
pub struct ScoreOptions {
    pub parallel: bool,
    pub collect_traces: bool,
}

/// Profiles for a whole corpus plus per-document failures.
#[derive(Debug, Clone, Default)]
pub struct CorpusScores {
    /// Ordered by `(doc_id, chapter_idx)` with per-document aggregates last.
    pub profiles: Vec<EmotionProfile>,
    pub traces: Vec<SegmentTrace>,
    /// `(doc_id, error)` pairs; a failing document never aborts the run.
    pub failures: Vec<(String, String)>,
}

fn score_document(
    doc: &AnnotatedDocument,
    lexicon: &EmotionLexicon,
    strategy: ScoringStrategy,
    collect_traces: bool,
) -> Result<(Vec<EmotionProfile>, Vec<SegmentTrace>), ScoreError> {
    let mut profiles = Vec::new();
    let mut traces = Vec::new();
    let mut keep_trace = |profile: &EmotionProfile, trace: MatchTrace| {
        if collect_traces {
            traces.push(SegmentTrace {
                doc_id: profile.doc_id.clone(),
                chapter_idx: profile.chapter_idx,
                trace,
            });
        }
    };
    match strategy {
        ScoringStrategy::FirstParagraphs { n } => {
            let segment = segment_first_paragraphs(doc, n)?;
            let (profile, trace) = score_segment(&segment, lexicon)?;
            keep_trace(&profile, trace);
            profiles.push(profile);
        }
        ScoringStrategy::ChapterOpenings { k } => {
            let segments = segment_chapter_openings(doc, k)?;
            let mut chapter_profiles = Vec::new();
            for segment in &segments {
                match score_segment(segment, lexicon) {
                    Ok((profile, trace)) => {
                        keep_trace(&profile, trace);
                        chapter_profiles.push(profile);
                    }
                    // A chapter of pure punctuation has no denominator;
                    // skip it rather than fail the book.
                    Err(ScoreError::EmptySegment) => {}
                    Err(e) => return Err(e),
                }
            }
            if chapter_profiles.is_empty() {
                return Err(ScoreError::EmptySegment);
            }
            profiles.push(mean_profile(doc.doc_id(), &chapter_profiles));
            let mut all = chapter_profiles;
            all.push(profiles.pop().expect("just pushed"));
            profiles = all;
        }
    }
    Ok((profiles, traces))
}

/// Unweighted mean of each emotion's normalized score over chapters, the
/// per-document aggregate for the chapter-openings strategy.
fn mean_profile(doc_id: &str, chapters: &[EmotionProfile]) -> EmotionProfile {
    let count = chapters.len() as f64;
    let mut scores: BTreeMap<Emotion, f64> = BTreeMap::new();
    for profile in chapters {
        for (emotion, score) in &profile.scores {
            *scores.entry(emotion.clone()).or_insert(0.0) += score;
        }
    }
    for value in scores.values_mut() {
        *value /= count;
    }
    EmotionProfile {
        doc_id: doc_id.to_string(),
        origin: SegmentOrigin::ChapterOpenings,
        chapter_idx: None,
        scores,
        token_count: chapters.iter().map(|p| p.token_count).sum(),
        matched_count: chapters.iter().map(|p| p.matched_count).sum(),
    }
}

/// Apply a segmentation strategy to every document and score the segments.
///
/// For chapter openings, a per-document mean profile is appended after the
/// chapter profiles. Output order is deterministic regardless of `parallel`.
pub fn score_corpus(
    docs: &[AnnotatedDocument],
    lexicon: &EmotionLexicon,
    strategy: ScoringStrategy,
    options: &ScoreOptions,
) -> CorpusScores {
    let worker = |doc: &AnnotatedDocument| {
        score_document(doc, lexicon, strategy, options.collect_traces)
            .map_err(|e| (doc.doc_id().to_string(), e.to_string()))
    };
    let results: Vec<_> = if options.parallel {
        docs.par_iter().map(worker).collect()
    } else {
        docs.iter().map(worker).collect()
    };

    let mut scores = CorpusScores::default();
    for result in results {
        match result {
            Ok((profiles, traces)) => {
                scores.profiles.extend(profiles);
                scores.traces.extend(traces);
            }
            Err(failure) => scores.failures.push(failure),
        }
    }
    let sort_key = |p: &EmotionProfile| {
        (
            p.doc_id.clone(),
            p.chapter_idx.map_or(usize::MAX, |c| c),
        )
    };
    scores.profiles.sort_by_key(sort_key);
    scores
        .traces
        .sort_by_key(|t| (t.doc_id.clone(), t.chapter_idx.map_or(usize::MAX, |c| c)));
    scores.failures.sort();
    scores
}

/// L1 distances between per-document emotion proportions and the lexicon's
/// own emotion proportions, for two strategies side by side.
#[derive(Debug, Clone, Serialize)]
pub struct DivergenceReport {
    pub label_a: String,
    pub label_b: String,
    pub per_doc: Vec<DocDivergence>,
    pub mean_a: Option<f64>,
    pub mean_b: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DocDivergence {
    pub doc_id: String,
    /// `None` when the profile was all-zero and had to be skipped.
    pub distance_a: Option<f64>,
    pub distance_b: Option<f64>,
}

fn document_level<'a>(
    profiles: &'a [EmotionProfile],
) -> BTreeMap<&'a str, &'a EmotionProfile> {
    // The document-level row is the one without a chapter index: the single
    // first-paragraphs profile, or the chapter-openings mean.
    profiles
        .iter()
        .filter(|p| p.chapter_idx.is_none())
        .map(|p| (p.doc_id.as_str(), p))
        .collect()
}

fn l1_to_lexicon(
    profile: &EmotionProfile,
    lexicon_proportions: &BTreeMap<Emotion, f64>,
) -> Option<f64> {
    let proportions = profile.proportions()?;
    let mut emotions: Vec<&Emotion> = lexicon_proportions.keys().collect();
    for emotion in proportions.keys() {
        if !lexicon_proportions.contains_key(emotion) {
            emotions.push(emotion);
        }
    }
    Some(
        emotions
            .iter()
            .map(|emotion| {
                let p = proportions.get(emotion).copied().unwrap_or(0.0);
                let q = lexicon_proportions.get(emotion).copied().unwrap_or(0.0);
                (p - q).abs()
            })
            .sum(),
    )
}

fn mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        None
    } else {
        Some(values.iter().sum::<f64>() / values.len() as f64)
    }
}

/// Compare two strategies' document-level profiles against the lexicon
/// distribution. Both profile sets must cover the same documents.
pub fn compare_strategies(
    profiles_a: &[EmotionProfile],
    profiles_b: &[EmotionProfile],
    lexicon: &EmotionLexicon,
) -> Result<DivergenceReport, ScoreError> {
    let docs_a = document_level(profiles_a);
    let docs_b = document_level(profiles_b);
    if docs_a.keys().ne(docs_b.keys()) {
        let only_a: Vec<&&str> = docs_a.keys().filter(|k| !docs_b.contains_key(**k)).collect();
        let only_b: Vec<&&str> = docs_b.keys().filter(|k| !docs_a.contains_key(**k)).collect();
        return Err(ScoreError::MismatchedDocuments(format!(
            "only in a: {only_a:?}, only in b: {only_b:?}"
        )));
    }

    let lexicon_proportions = lexicon.emotion_proportions();
    let label = |profiles: &[EmotionProfile], fallback: &str| {
        profiles
            .first()
            .map(|p| p.origin.label().to_string())
            .unwrap_or_else(|| fallback.to_string())
    };

    let mut per_doc = Vec::new();
    let mut distances_a = Vec::new();
    let mut distances_b = Vec::new();
    for (doc_id, profile_a) in &docs_a {
        let profile_b = docs_b[doc_id];
        let distance_a = l1_to_lexicon(profile_a, &lexicon_proportions);
        let distance_b = l1_to_lexicon(profile_b, &lexicon_proportions);
        if let Some(d) = distance_a {
            distances_a.push(d);
        }
        if let Some(d) = distance_b {
            distances_b.push(d);
        }
        per_doc.push(DocDivergence {
            doc_id: doc_id.to_string(),
            distance_a,
            distance_b,
        });
    }

    Ok(DivergenceReport {
        label_a: label(profiles_a, "a"),
        label_b: label(profiles_b, "b"),
        per_doc,
        mean_a: mean(&distances_a),
        mean_b: mean(&distances_b),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::Token;

    fn word(lemma: &str) -> Token {
        Token {
            surface: lemma.to_string(),
            lemma: lemma.to_string(),
            is_word: true,
            sentence_idx: 0,
            paragraph_idx: 0,
            chapter_idx: 0,
        }
    }

    fn segment(lemmas: &[&str]) -> Segment {
        Segment {
            doc_id: "doc".to_string(),
            origin: SegmentOrigin::FirstParagraphs,
            chapter_idx: None,
            tokens: lemmas.iter().map(|l| word(l)).collect(),
        }
    }

    fn lexicon(lines: &str) -> EmotionLexicon {
        EmotionLexicon::load(lines.as_bytes(), "test").unwrap()
    }

    #[test]
    fn single_match_in_ten_words_scores_eighty() {
        let lex = lexicon("ilo\tjoy\t0.8");
        let mut lemmas = vec!["ilo"];
        lemmas.extend(["sana"; 9]);
        let (profile, trace) = score_segment(&segment(&lemmas), &lex).unwrap();
        assert_eq!(profile.scores[&Emotion::Joy], 80.0);
        for emotion in Emotion::CANONICAL {
            if emotion != Emotion::Joy {
                assert_eq!(profile.scores[&emotion], 0.0);
            }
        }
        assert_eq!(profile.token_count, 10);
        assert_eq!(profile.matched_count, 1);
        assert_eq!(trace.rows.len(), 1);
        assert_eq!(trace.rows[0].lemma, "ilo");
    }

    #[test]
    fn empty_lexicon_gives_all_zero_profile() {
        let lex = EmotionLexicon::new("empty");
        let (profile, trace) = score_segment(&segment(&["sana", "toinen"]), &lex).unwrap();
        assert!(profile.scores.values().all(|&v| v == 0.0));
        assert!(trace.rows.is_empty());
        assert_eq!(profile.matched_count, 0);
    }

    #[test]
    fn multi_label_word_feeds_every_emotion() {
        let lex = lexicon("sota\tanger\t0.6\nsota\tfear\t0.4");
        let (profile, trace) = score_segment(&segment(&["sota"]), &lex).unwrap();
        assert_eq!(profile.scores[&Emotion::Anger], 600.0);
        assert_eq!(profile.scores[&Emotion::Fear], 400.0);
        assert_eq!(trace.rows.len(), 2);
        assert_eq!(profile.matched_count, 1);
    }

    #[test]
    fn punctuation_is_excluded_from_denominator() {
        let lex = lexicon("ilo\tjoy\t0.8");
        let mut tokens = vec![word("ilo")];
        let mut punct = word(".");
        punct.is_word = false;
        tokens.push(punct);
        let seg = Segment {
            doc_id: "doc".to_string(),
            origin: SegmentOrigin::FirstParagraphs,
            chapter_idx: None,
            tokens,
        };
        let (profile, _) = score_segment(&seg, &lex).unwrap();
        assert_eq!(profile.token_count, 1);
        assert_eq!(profile.scores[&Emotion::Joy], 800.0);
    }

    #[test]
    fn all_punctuation_segment_is_empty() {
        let lex = lexicon("ilo\tjoy\t0.8");
        let mut punct = word("!");
        punct.is_word = false;
        let seg = Segment {
            doc_id: "doc".to_string(),
            origin: SegmentOrigin::FirstParagraphs,
            chapter_idx: None,
            tokens: vec![punct],
        };
        assert!(matches!(
            score_segment(&seg, &lex),
            Err(ScoreError::EmptySegment)
        ));
    }

    #[test]
    fn trace_totals_reproduce_scores() {
        let lex = lexicon("ilo\tjoy\t0.8\nsota\tanger\t0.6\nsota\tfear\t0.4\npelko\tfear\t0.85");
        let (profile, trace) =
            score_segment(&segment(&["ilo", "sota", "pelko", "muu", "sana"]), &lex).unwrap();
        let mut sums: BTreeMap<Emotion, f64> = BTreeMap::new();
        for row in &trace.rows {
            *sums.entry(row.emotion.clone()).or_insert(0.0) += row.intensity;
        }
        for (emotion, score) in &profile.scores {
            let sum = sums.get(emotion).copied().unwrap_or(0.0);
            let expected = 1000.0 * sum / profile.token_count as f64;
            assert!((score - expected).abs() < 1e-9);
        }
    }

    fn doc_of(body: &str, id: &str) -> AnnotatedDocument {
        let meta = crate::ingest::Metadata {
            title: id.to_string(),
            author: None,
            year: None,
            is_translation: false,
            source_id: id.to_string(),
        };
        let doc = crate::structure::fallback_tokenize(body, meta);
        crate::structure::chapterize(doc, body)
    }

    #[test]
    fn first_paragraphs_yields_one_profile_per_doc() {
        let lex = lexicon("ilo\tjoy\t0.8");
        let docs = vec![doc_of("Ilo on suuri.\n\nToinen kappale.", "a")];
        let scores = score_corpus(
            &docs,
            &lex,
            ScoringStrategy::FirstParagraphs { n: 3 },
            &ScoreOptions::default(),
        );
        assert_eq!(scores.profiles.len(), 1);
        assert!(scores.failures.is_empty());
    }

    #[test]
    fn chapter_openings_appends_mean_profile() {
        let lex = lexicon("ilo\tjoy\t0.8\npelko\tfear\t0.6");
        let body = "I\n\nIlo tuli.\n\nII\n\nPelko meni.\n\nIII\n\nIlo pelko.\n\nIV\n\nSana vain.";
        let docs = vec![doc_of(body, "a")];
        let scores = score_corpus(
            &docs,
            &lex,
            ScoringStrategy::ChapterOpenings { k: 200 },
            &ScoreOptions::default(),
        );
        assert_eq!(scores.profiles.len(), 5);
        let aggregate = scores
            .profiles
            .iter()
            .find(|p| p.chapter_idx.is_none())
            .unwrap();
        // Aggregates sort after their chapters.
        assert_eq!(scores.profiles.last().unwrap(), aggregate);
    }

    #[test]
    fn mean_profile_averages_chapter_scores() {
        let lex = lexicon("ilo\tjoy\t0.5");
        // Chapter 1: joy 10/1000 tokens; chapter 2: joy 30/1000 equivalent.
        let mk = |score: f64| {
            let mut scores: BTreeMap<Emotion, f64> =
                lex.emotion_set().into_iter().map(|e| (e, 0.0)).collect();
            scores.insert(Emotion::Joy, score);
            EmotionProfile {
                doc_id: "a".to_string(),
                origin: SegmentOrigin::ChapterOpenings,
                chapter_idx: Some(0),
                scores,
                token_count: 100,
                matched_count: 2,
            }
        };
        let aggregate = mean_profile("a", &[mk(10.0), mk(30.0)]);
        assert_eq!(aggregate.scores[&Emotion::Joy], 20.0);
        assert_eq!(aggregate.token_count, 200);
    }

    #[test]
    fn failures_are_recorded_and_run_continues() {
        let lex = lexicon("ilo\tjoy\t0.8");
        let good = doc_of("Ilo voittaa aina.", "good");
        let empty = doc_of("", "bad");
        let scores = score_corpus(
            &[empty, good],
            &lex,
            ScoringStrategy::FirstParagraphs { n: 3 },
            &ScoreOptions::default(),
        );
        assert_eq!(scores.profiles.len(), 1);
        assert_eq!(scores.failures.len(), 1);
        assert_eq!(scores.failures[0].0, "bad");
    }

    #[test]
    fn concentrated_profile_against_uniform_lexicon_is_12_sevenths() {
        // One emotion takes the whole profile; lexicon spreads uniformly
        // over seven emotions: L1 = 2·(1 − 1/7).
        let mut lines = String::new();
        for (i, emotion) in Emotion::CANONICAL.iter().enumerate() {
            lines.push_str(&format!("w{i}\t{emotion}\t0.5\n"));
        }
        let lex = lexicon(&lines);
        let mut scores: BTreeMap<Emotion, f64> =
            lex.emotion_set().into_iter().map(|e| (e, 0.0)).collect();
        scores.insert(Emotion::Anger, 42.0);
        let profile = EmotionProfile {
            doc_id: "a".to_string(),
            origin: SegmentOrigin::FirstParagraphs,
            chapter_idx: None,
            scores,
            token_count: 10,
            matched_count: 1,
        };
        let distance = l1_to_lexicon(&profile, &lex.emotion_proportions()).unwrap();
        assert!((distance - 12.0 / 7.0).abs() < 1e-12);
    }

    #[test]
    fn identical_proportions_have_zero_distance() {
        let lex = lexicon("a\tjoy\t0.5\nb\tfear\t0.5");
        let mut scores: BTreeMap<Emotion, f64> =
            lex.emotion_set().into_iter().map(|e| (e, 0.0)).collect();
        scores.insert(Emotion::Joy, 10.0);
        scores.insert(Emotion::Fear, 10.0);
        let profile = EmotionProfile {
            doc_id: "a".to_string(),
            origin: SegmentOrigin::FirstParagraphs,
            chapter_idx: None,
            scores,
            token_count: 10,
            matched_count: 2,
        };
        let distance = l1_to_lexicon(&profile, &lex.emotion_proportions()).unwrap();
        assert!(distance.abs() < 1e-12);
    }

    #[test]
    fn mismatched_documents_are_an_error() {
        let lex = lexicon("ilo\tjoy\t0.8");
        let docs_a = vec![doc_of("Ilo yksi.", "a")];
        let docs_b = vec![doc_of("Ilo kaksi.", "b")];
        let a = score_corpus(
            &docs_a,
            &lex,
            ScoringStrategy::FirstParagraphs { n: 3 },
            &ScoreOptions::default(),
        );
        let b = score_corpus(
            &docs_b,
            &lex,
            ScoringStrategy::FirstParagraphs { n: 3 },
            &ScoreOptions::default(),
        );
        assert!(matches!(
            compare_strategies(&a.profiles, &b.profiles, &lex),
            Err(ScoreError::MismatchedDocuments(_))
        ));
    }

    #[test]
    fn parallel_and_serial_scoring_agree() {
        let lex = lexicon("ilo\tjoy\t0.8\npelko\tfear\t0.6");
        let docs: Vec<AnnotatedDocument> = (0..8)
            .map(|i| doc_of("Ilo ja pelko elävät.\n\nToinen kappale tulee.", &format!("d{i}")))
            .collect();
        let serial = score_corpus(
            &docs,
            &lex,
            ScoringStrategy::FirstParagraphs { n: 3 },
            &ScoreOptions { parallel: false, collect_traces: false },
        );
        let parallel = score_corpus(
            &docs,
            &lex,
            ScoringStrategy::FirstParagraphs { n: 3 },
            &ScoreOptions { parallel: true, collect_traces: false },
        );
        assert_eq!(serial.profiles, parallel.profiles);
    }
}
