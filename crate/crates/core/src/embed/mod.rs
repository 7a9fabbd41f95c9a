//! Word-vector similarity for lexicon refinement.
//!
//! Vectors come from a pretrained word2vec-style text file or from
//! [`build_ppmi_space`], a count-based fallback that needs nothing beyond
//! the corpus itself. Candidate words are matched against lexicon words by
//! cosine similarity and the best neighbor's associations are copied into a
//! reviewable proposal — the lexicon itself is never touched here.

mod ppmi;

use std::collections::BTreeMap;
use std::io::BufRead;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lexicon::{EmotionAssociation, EmotionLexicon};

pub use ppmi::{build_ppmi_space, cooccurrence_counts, CooccurrenceCounts};

#[derive(Debug, Error)]
pub enum EmbedError {
    #[error("malformed header: expected `vocab_size dim` with dim > 0")]
    MalformedHeader,
    #[error("line {line}: expected {expected} vector components, found {found}")]
    DimensionMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: vector component is not a number")]
    MalformedComponent { line: usize },
    #[error("cosine needs equal dimensions, got {0} and {1}")]
    CosineDimensions(usize, usize),
    #[error("cosine is undefined for zero vectors")]
    ZeroVector,
    #[error("corpus yields no vocabulary")]
    EmptyCorpus,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A fixed-dimension word-vector vocabulary. Words are lowercased.
#[derive(Debug, Clone)]
pub struct EmbeddingSpace {
    vectors: BTreeMap<String, Vec<f64>>,
    dim: usize,
    warnings: Vec<String>,
}

impl EmbeddingSpace {
    /// Build from an existing map; every vector must have dimension `dim`.
    pub fn from_vectors(vectors: BTreeMap<String, Vec<f64>>, dim: usize) -> Self {
        debug_assert!(dim > 0 && vectors.values().all(|v| v.len() == dim));
        EmbeddingSpace {
            vectors,
            dim,
            warnings: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, word: &str) -> Option<&[f64]> {
        if word.chars().any(char::is_uppercase) {
            self.vectors.get(&word.to_lowercase()).map(Vec::as_slice)
        } else {
            self.vectors.get(word).map(Vec::as_slice)
        }
    }

    pub fn words(&self) -> impl Iterator<Item = &String> {
        self.vectors.keys()
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }
}

/// Load a plain-text vector file: a `vocab_size dim` header line followed by
/// `word v1 ... v_dim` lines. Duplicate words keep the last occurrence with
/// a warning.
pub fn load_vectors(reader: impl BufRead) -> Result<EmbeddingSpace, EmbedError> {
    let mut lines = reader.lines();
    let header = match lines.next() {
        Some(line) => line?,
        None => return Err(EmbedError::MalformedHeader),
    };
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(EmbedError::MalformedHeader);
    }
    let declared_vocab: usize = fields[0].parse().map_err(|_| EmbedError::MalformedHeader)?;
    let dim: usize = fields[1].parse().map_err(|_| EmbedError::MalformedHeader)?;
    if dim == 0 {
        return Err(EmbedError::MalformedHeader);
    }

    let mut vectors: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    let mut warnings = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        let line_no = i + 2;
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let word = fields
            .next()
            .expect("non-empty line has a first field")
            .to_lowercase();
        let mut vector = Vec::with_capacity(dim);
        for field in fields {
            vector.push(
                field
                    .parse::<f64>()
                    .map_err(|_| EmbedError::MalformedComponent { line: line_no })?,
            );
        }
        if vector.len() != dim {
            return Err(EmbedError::DimensionMismatch {
                line: line_no,
                expected: dim,
                found: vector.len(),
            });
        }
        if vectors.insert(word.clone(), vector).is_some() {
            warnings.push(format!("line {line_no}: duplicate word {word:?}; last wins"));
        }
    }
    if vectors.len() != declared_vocab {
        warnings.push(format!(
            "header declared {declared_vocab} words, file contains {}",
            vectors.len()
        ));
    }
    Ok(EmbeddingSpace {
        vectors,
        dim,
        warnings,
    })
}

/// Cosine similarity `u·v / (‖u‖‖v‖)`, clamped to `[-1, 1]`.
pub fn cosine(u: &[f64], v: &[f64]) -> Result<f64, EmbedError> {
    if u.len() != v.len() {
        return Err(EmbedError::CosineDimensions(u.len(), v.len()));
    }
    let mut dot = 0.0;
    let mut norm_u = 0.0;
    let mut norm_v = 0.0;
    for (a, b) in u.iter().zip(v) {
        dot += a * b;
        norm_u += a * a;
        norm_v += b * b;
    }
    if norm_u == 0.0 || norm_v == 0.0 {
        return Err(EmbedError::ZeroVector);
    }
    Ok((dot / (norm_u * norm_v).sqrt()).clamp(-1.0, 1.0))
}

/// A candidate word with the lexicon neighbor whose associations it would
/// copy. Serializes with `lemma`/`source_lemma` field names so a reviewed
/// proposal list can be pasted directly into a patch file's `additions`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityProposal {
    #[serde(rename = "lemma")]
    pub candidate: String,
    #[serde(rename = "source_lemma")]
    pub neighbor: String,
    pub similarity: f64,
    pub associations: Vec<EmotionAssociation>,
}

/// A candidate that produced no proposal, with the reason.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedCandidate {
    pub candidate: String,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProposalOutcome {
    pub proposals: Vec<SimilarityProposal>,
    pub skipped: Vec<SkippedCandidate>,
}

/// For each candidate present in the space, find its `k` nearest lexicon
/// words by cosine, keep those at or above `min_sim`, and copy the top
/// survivor's full association set. Ties break to the lexicographically
/// smaller neighbor. Candidates absent from the space or with no surviving
/// neighbor land in the skipped list.
pub fn propose_additions(
    space: &EmbeddingSpace,
    lexicon: &EmotionLexicon,
    candidates: &[String],
    k: usize,
    min_sim: f64,
) -> ProposalOutcome {
    let lexicon_words: Vec<(&String, &[f64])> = lexicon
        .iter()
        .filter_map(|(word, _)| space.get(word).map(|vector| (word, vector)))
        .collect();

    let mut outcome = ProposalOutcome::default();
    for candidate in candidates {
        let normalized = candidate.trim().to_lowercase();
        if normalized.is_empty() {
            continue;
        }
        let Some(candidate_vector) = space.get(&normalized) else {
            outcome.skipped.push(SkippedCandidate {
                candidate: normalized,
                reason: "not in embedding space".to_string(),
            });
            continue;
        };
        let mut neighbors: Vec<(f64, &str)> = Vec::new();
        for (word, vector) in &lexicon_words {
            if word.as_str() == normalized {
                continue;
            }
            if let Ok(similarity) = cosine(candidate_vector, vector) {
                neighbors.push((similarity, word));
            }
        }
        neighbors.sort_by(|a, b| {
            b.0.partial_cmp(&a.0)
                .expect("cosine is never NaN")
                .then_with(|| a.1.cmp(b.1))
        });
        let best = neighbors
            .into_iter()
            .take(k)
            .find(|(similarity, _)| *similarity >= min_sim);
        match best {
            Some((similarity, neighbor)) => {
                let associations = lexicon
                    .associations(neighbor)
                    .expect("neighbor came from the lexicon")
                    .iter()
                    .map(|(emotion, intensity)| EmotionAssociation {
                        emotion: emotion.clone(),
                        intensity: *intensity,
                    })
                    .collect();
                outcome.proposals.push(SimilarityProposal {
                    candidate: normalized,
                    neighbor: neighbor.to_string(),
                    similarity,
                    associations,
                });
            }
            None => outcome.skipped.push(SkippedCandidate {
                candidate: normalized,
                reason: format!("no lexicon neighbor with similarity >= {min_sim}"),
            }),
        }
    }
    outcome
}
