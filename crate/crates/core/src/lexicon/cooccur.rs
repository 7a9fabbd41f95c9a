//! Emotion co-occurrence: how likely a word carrying one emotion is to also
//! carry another. Counting is by set membership, unweighted by intensity.

use std::collections::BTreeMap;
use std::io::Write;

use super::{Emotion, EmotionLexicon};

/// Square matrix of conditional probabilities
/// `values[i][j] = P(emotion j | emotion i)` over lexicon words.
///
/// The diagonal is 1 for every emotion with at least one word; rows for
/// emotions with no words are all zero.
#[derive(Debug, Clone, PartialEq)]
pub struct CooccurrenceMatrix {
    pub emotions: Vec<Emotion>,
    pub values: Vec<Vec<f64>>,
    /// Number of lexicon words carrying each emotion (the row denominators).
    pub word_counts: Vec<usize>,
}

impl CooccurrenceMatrix {
    pub fn get(&self, row: &Emotion, column: &Emotion) -> Option<f64> {
        let i = self.emotions.iter().position(|e| e == row)?;
        let j = self.emotions.iter().position(|e| e == column)?;
        Some(self.values[i][j])
    }

    /// CSV with an emotion-labeled header row and column, two decimals.
    pub fn write_csv(&self, writer: impl Write) -> Result<(), csv::Error> {
        let mut csv_writer = csv::Writer::from_writer(writer);
        let mut header = vec![String::from("emotion")];
        header.extend(self.emotions.iter().map(|e| e.name().to_string()));
        csv_writer.write_record(&header)?;
        for (i, emotion) in self.emotions.iter().enumerate() {
            let mut record = vec![emotion.name().to_string()];
            record.extend(self.values[i].iter().map(|v| format!("{v:.2}")));
            csv_writer.write_record(&record)?;
        }
        csv_writer.flush()?;
        Ok(())
    }
}

pub(super) fn compute(lexicon: &EmotionLexicon) -> CooccurrenceMatrix {
    let emotions: Vec<Emotion> = lexicon.emotion_set().into_iter().collect();
    let index: BTreeMap<&Emotion, usize> =
        emotions.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let n = emotions.len();
    let mut joint = vec![vec![0usize; n]; n];
    for (_, associations) in lexicon.iter() {
        let present: Vec<usize> = associations.keys().map(|e| index[e]).collect();
        for &i in &present {
            for &j in &present {
                joint[i][j] += 1;
            }
        }
    }
    let word_counts: Vec<usize> = (0..n).map(|i| joint[i][i]).collect();
    let values = joint
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .map(|&count| {
                    if word_counts[i] == 0 {
                        0.0
                    } else {
                        count as f64 / word_counts[i] as f64
                    }
                })
                .collect()
        })
        .collect();
    CooccurrenceMatrix {
        emotions,
        values,
        word_counts,
    }
}

#[cfg(test)]
mod tests {
    use super::super::EmotionLexicon;
    use super::*;

    #[test]
    fn two_word_lexicon_matches_hand_count() {
        // w1 carries anger+fear, w2 carries anger only:
        // P(fear|anger) = 1/2, P(anger|fear) = 1/1.
        let lex = EmotionLexicon::load(
            "w1\tanger\t0.5\nw1\tfear\t0.5\nw2\tanger\t0.5".as_bytes(),
            "toy",
        )
        .unwrap();
        let matrix = lex.cooccurrence();
        assert_eq!(matrix.get(&Emotion::Anger, &Emotion::Fear), Some(0.5));
        assert_eq!(matrix.get(&Emotion::Fear, &Emotion::Anger), Some(1.0));
        assert_eq!(matrix.get(&Emotion::Anger, &Emotion::Anger), Some(1.0));
    }

    #[test]
    fn single_emotion_lexicon_is_identity_like() {
        let lex = EmotionLexicon::load("ilo\tjoy\t0.9".as_bytes(), "toy").unwrap();
        let matrix = lex.cooccurrence();
        for (i, row_emotion) in matrix.emotions.iter().enumerate() {
            for (j, _) in matrix.emotions.iter().enumerate() {
                let expected = if i == j && *row_emotion == Emotion::Joy {
                    1.0
                } else {
                    0.0
                };
                assert_eq!(matrix.values[i][j], expected);
            }
        }
    }

    #[test]
    fn empty_lexicon_is_all_zero_over_canonical_emotions() {
        let lex = EmotionLexicon::new("empty");
        let matrix = lex.cooccurrence();
        assert_eq!(matrix.emotions.len(), 7);
        assert!(matrix.values.iter().flatten().all(|&v| v == 0.0));
    }

    #[test]
    fn asymmetry_identity_holds() {
        let lex = EmotionLexicon::load(
            "a\tanger\t0.1\na\tfear\t0.2\nb\tanger\t0.3\nc\tfear\t0.4\nc\tsadness\t0.5\nd\tfear\t0.6"
                .as_bytes(),
            "toy",
        )
        .unwrap();
        let matrix = lex.cooccurrence();
        let n = matrix.emotions.len();
        for i in 0..n {
            for j in 0..n {
                let lhs = matrix.values[i][j] * matrix.word_counts[i] as f64;
                let rhs = matrix.values[j][i] * matrix.word_counts[j] as f64;
                assert!((lhs - rhs).abs() < 1e-12, "joint counts disagree at ({i},{j})");
            }
        }
    }

    #[test]
    fn csv_has_labeled_header_and_two_decimals() {
        let lex = EmotionLexicon::load("w1\tanger\t0.5\nw1\tfear\t0.5\nw2\tanger\t0.5".as_bytes(), "toy")
            .unwrap();
        let mut out = Vec::new();
        lex.cooccurrence().write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "emotion,anger,anticipation,disgust,fear,joy,sadness,trust"
        );
        let anger_row = lines.next().unwrap();
        assert_eq!(anger_row, "anger,1.00,0.00,0.00,0.50,0.00,0.00,0.00");
    }
}
