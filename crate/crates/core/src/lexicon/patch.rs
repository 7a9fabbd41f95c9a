//! Auditable lexicon patches: removals plus additions that carry the source
//! word and similarity that justified them.

use std::io::Read;

use serde::{Deserialize, Serialize};

use super::{EmotionAssociation, LexiconError};

/// One added lemma with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatchAddition {
    pub lemma: String,
    /// The lexicon word whose associations were copied.
    pub source_lemma: String,
    /// Cosine similarity between `lemma` and `source_lemma` at patch time.
    pub similarity: f64,
    pub associations: Vec<EmotionAssociation>,
}

/// Removals and additions applied to a lexicon as one reviewed unit.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LexiconPatch {
    #[serde(default)]
    pub removals: Vec<String>,
    #[serde(default)]
    pub additions: Vec<PatchAddition>,
}

impl LexiconPatch {
    /// Parse a patch from JSON and validate its invariants.
    pub fn from_reader(reader: impl Read) -> Result<Self, LexiconError> {
        let patch: LexiconPatch = serde_json::from_reader(reader)?;
        patch.validate()?;
        Ok(patch)
    }

    /// Check invariants: removals and added lemmas are disjoint, intensities
    /// lie in `[0, 1]`, similarities in `[-1, 1]`.
    pub fn validate(&self) -> Result<(), LexiconError> {
        let removals: std::collections::BTreeSet<String> =
            self.removals.iter().map(|r| r.trim().to_lowercase()).collect();
        for addition in &self.additions {
            let lemma = addition.lemma.trim().to_lowercase();
            if removals.contains(&lemma) {
                return Err(LexiconError::InvalidPatch(format!(
                    "lemma {lemma:?} appears in both removals and additions"
                )));
            }
            if !(-1.0..=1.0).contains(&addition.similarity) {
                return Err(LexiconError::InvalidPatch(format!(
                    "addition {lemma:?} has similarity {} outside [-1, 1]",
                    addition.similarity
                )));
            }
            for assoc in &addition.associations {
                if !(0.0..=1.0).contains(&assoc.intensity) {
                    return Err(LexiconError::InvalidPatch(format!(
                        "addition {lemma:?} has intensity {} outside [0, 1]",
                        assoc.intensity
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.removals.is_empty() && self.additions.is_empty()
    }
}
