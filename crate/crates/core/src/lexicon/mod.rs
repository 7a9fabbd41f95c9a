//! Emotion-intensity lexicons in the NRC-style tab-separated format:
//! `word<TAB>emotion<TAB>intensity` with intensities in `[0, 1]`.

mod cooccur;
mod patch;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use cooccur::CooccurrenceMatrix;
pub use patch::{LexiconPatch, PatchAddition};

/// An emotion label. The seven canonical labels are always legal; any other
/// label found in an input file is preserved rather than rejected.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Emotion {
    Anger,
    Anticipation,
    Disgust,
    Fear,
    Joy,
    Sadness,
    Trust,
    Other(String),
}

impl Emotion {
    pub const CANONICAL: [Emotion; 7] = [
        Emotion::Anger,
        Emotion::Anticipation,
        Emotion::Disgust,
        Emotion::Fear,
        Emotion::Joy,
        Emotion::Sadness,
        Emotion::Trust,
    ];

    pub fn parse(label: &str) -> Emotion {
        match label.trim().to_lowercase().as_str() {
            "anger" => Emotion::Anger,
            "anticipation" => Emotion::Anticipation,
            "disgust" => Emotion::Disgust,
            "fear" => Emotion::Fear,
            "joy" => Emotion::Joy,
            "sadness" => Emotion::Sadness,
            "trust" => Emotion::Trust,
            other => Emotion::Other(other.to_string()),
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Emotion::Anger => "anger",
            Emotion::Anticipation => "anticipation",
            Emotion::Disgust => "disgust",
            Emotion::Fear => "fear",
            Emotion::Joy => "joy",
            Emotion::Sadness => "sadness",
            Emotion::Trust => "trust",
            Emotion::Other(label) => label,
        }
    }

    /// Sort key: canonical emotions in their fixed order, then any extra
    /// labels alphabetically. This drives every table column layout.
    fn rank(&self) -> (u8, &str) {
        match self {
            Emotion::Anger => (0, ""),
            Emotion::Anticipation => (1, ""),
            Emotion::Disgust => (2, ""),
            Emotion::Fear => (3, ""),
            Emotion::Joy => (4, ""),
            Emotion::Sadness => (5, ""),
            Emotion::Trust => (6, ""),
            Emotion::Other(label) => (7, label),
        }
    }
}

impl Ord for Emotion {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.rank().cmp(&other.rank())
    }
}

impl PartialOrd for Emotion {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Emotion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for Emotion {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Emotion {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let label = String::deserialize(deserializer)?;
        if label.trim().is_empty() {
            return Err(D::Error::custom("empty emotion label"));
        }
        Ok(Emotion::parse(&label))
    }
}

/// One (emotion, intensity) pair; the JSON shape shared by patch files and
/// refinement proposals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmotionAssociation {
    pub emotion: Emotion,
    pub intensity: f64,
}

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("line {line}: expected 3 tab-separated columns")]
    MalformedLine { line: usize },
    #[error("line {line}: intensity {value} outside [0, 1]")]
    IntensityOutOfRange { line: usize, value: f64 },
    #[error("invalid patch: {0}")]
    InvalidPatch(String),
    #[error("patch is not valid JSON: {0}")]
    PatchJson(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Immutable map from lemma to its emotion associations.
///
/// Lemmas are lowercased, every (lemma, emotion) pair appears at most once,
/// and all intensities lie in `[0, 1]`. Patching produces a new value.
#[derive(Debug, Clone, PartialEq)]
pub struct EmotionLexicon {
    entries: BTreeMap<String, BTreeMap<Emotion, f64>>,
    version_tag: String,
    warnings: Vec<String>,
}

impl EmotionLexicon {
    pub fn new(version_tag: &str) -> Self {
        EmotionLexicon {
            entries: BTreeMap::new(),
            version_tag: version_tag.to_string(),
            warnings: Vec::new(),
        }
    }

    /// Load a lexicon from TSV. `#`-prefixed lines are comments. Duplicate
    /// (word, emotion) lines keep the last occurrence, with a warning.
    /// Multiword entries are skipped with a warning: scoring matches single
    /// lemmas. A leading header row is tolerated.
    pub fn load(reader: impl BufRead, version_tag: &str) -> Result<Self, LexiconError> {
        let mut lexicon = EmotionLexicon::new(version_tag);
        let mut seen_data_line = false;
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let line_no = i + 1;
            let trimmed = line.trim_end_matches(['\r', '\n']);
            if trimmed.trim().is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let columns: Vec<&str> = trimmed.split('\t').collect();
            if columns.len() != 3 {
                return Err(LexiconError::MalformedLine { line: line_no });
            }
            let intensity: f64 = match columns[2].trim().parse() {
                Ok(v) => v,
                Err(_) if !seen_data_line => {
                    // NRC-style files open with a `word emotion intensity`
                    // header row.
                    lexicon
                        .warnings
                        .push(format!("line {line_no}: skipped header row"));
                    seen_data_line = true;
                    continue;
                }
                Err(_) => return Err(LexiconError::MalformedLine { line: line_no }),
            };
            seen_data_line = true;
            if !(0.0..=1.0).contains(&intensity) {
                return Err(LexiconError::IntensityOutOfRange {
                    line: line_no,
                    value: intensity,
                });
            }
            let word = columns[0].trim().to_lowercase();
            if word.is_empty() {
                return Err(LexiconError::MalformedLine { line: line_no });
            }
            if word.contains(char::is_whitespace) {
                lexicon.warnings.push(format!(
                    "line {line_no}: skipped multiword entry {word:?}"
                ));
                continue;
            }
            let emotion = Emotion::parse(columns[1]);
            let slot = lexicon.entries.entry(word.clone()).or_default();
            if slot.insert(emotion.clone(), intensity).is_some() {
                lexicon.warnings.push(format!(
                    "line {line_no}: duplicate entry for ({word}, {emotion}); last occurrence wins"
                ));
            }
        }
        Ok(lexicon)
    }

    /// Load from a file, using the file stem as version tag.
    pub fn load_path(path: &Path) -> Result<Self, LexiconError> {
        let tag = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "lexicon".to_string());
        Self::load(BufReader::new(File::open(path)?), &tag)
    }

    /// Case-insensitive exact-match lookup; `None` when the lemma is absent.
    /// Already-lowercase queries (the scoring hot path) avoid allocation.
    pub fn associations(&self, lemma: &str) -> Option<&BTreeMap<Emotion, f64>> {
        if lemma.chars().any(char::is_uppercase) {
            self.entries.get(&lemma.to_lowercase())
        } else {
            self.entries.get(lemma)
        }
    }

    /// Lookup returning an owned association set; empty when absent.
    pub fn lookup(&self, lemma: &str) -> BTreeMap<Emotion, f64> {
        self.associations(lemma).cloned().unwrap_or_default()
    }

    pub fn contains(&self, lemma: &str) -> bool {
        self.associations(lemma).is_some()
    }

    /// Number of lemmas.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total number of (lemma, emotion) associations.
    pub fn association_count(&self) -> usize {
        self.entries.values().map(BTreeMap::len).sum()
    }

    pub fn version_tag(&self) -> &str {
        &self.version_tag
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &BTreeMap<Emotion, f64>)> {
        self.entries.iter()
    }

    /// The canonical seven emotions plus any extra labels present, in table
    /// order.
    pub fn emotion_set(&self) -> BTreeSet<Emotion> {
        let mut set: BTreeSet<Emotion> = Emotion::CANONICAL.iter().cloned().collect();
        for associations in self.entries.values() {
            set.extend(associations.keys().cloned());
        }
        set
    }

    /// Each emotion's share of the total association count. Zero map when
    /// the lexicon is empty.
    pub fn emotion_proportions(&self) -> BTreeMap<Emotion, f64> {
        let total = self.association_count();
        let mut proportions: BTreeMap<Emotion, f64> =
            self.emotion_set().into_iter().map(|e| (e, 0.0)).collect();
        if total == 0 {
            return proportions;
        }
        for associations in self.entries.values() {
            for emotion in associations.keys() {
                *proportions.get_mut(emotion).expect("emotion in set") += 1.0;
            }
        }
        for value in proportions.values_mut() {
            *value /= total as f64;
        }
        proportions
    }

    /// Apply removals then additions, producing a new lexicon with a fresh
    /// version tag. Removals that do not match any entry are downgraded to
    /// warnings so a patch can be replayed against a different lexicon
    /// release.
    pub fn apply_patch(&self, patch: &LexiconPatch) -> EmotionLexicon {
        let mut entries = self.entries.clone();
        let mut warnings = Vec::new();
        for removal in &patch.removals {
            let lemma = removal.trim().to_lowercase();
            if entries.remove(&lemma).is_none() {
                warnings.push(format!("removal not found in lexicon: {lemma}"));
            }
        }
        for addition in &patch.additions {
            let lemma = addition.lemma.trim().to_lowercase();
            if lemma.is_empty() || lemma.contains(char::is_whitespace) {
                warnings.push(format!(
                    "skipped addition with unusable lemma {:?}",
                    addition.lemma
                ));
                continue;
            }
            let mut associations = BTreeMap::new();
            for assoc in &addition.associations {
                associations.insert(assoc.emotion.clone(), assoc.intensity);
            }
            if associations.is_empty() {
                warnings.push(format!("skipped addition {lemma:?}: no associations"));
                continue;
            }
            entries.insert(lemma, associations);
        }
        EmotionLexicon {
            entries,
            version_tag: format!(
                "{}+r{}a{}",
                self.version_tag,
                patch.removals.len(),
                patch.additions.len()
            ),
            warnings,
        }
    }

    /// Serialize back to the TSV input format (full float precision, so a
    /// reload reproduces the lexicon exactly).
    pub fn write_tsv(&self, mut writer: impl Write) -> std::io::Result<()> {
        for (word, associations) in &self.entries {
            for (emotion, intensity) in associations {
                writeln!(writer, "{word}\t{emotion}\t{intensity}")?;
            }
        }
        Ok(())
    }

    /// Conditional co-occurrence of emotions over lexicon words:
    /// `values[i][j] = P(emotion j | emotion i)` by set-membership counting.
    pub fn cooccurrence(&self) -> CooccurrenceMatrix {
        cooccur::compute(self)
    }
}
