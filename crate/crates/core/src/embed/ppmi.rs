//! Count-based PPMI word vectors: a deterministic, dependency-free stand-in
//! for trained embeddings, good enough to drive lexicon refinement at desk
//! scale.

use std::collections::{BTreeMap, HashMap};

use crate::structure::AnnotatedDocument;

use super::{EmbedError, EmbeddingSpace};

/// Symmetric co-occurrence counts over word-token lemmas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CooccurrenceCounts {
    /// Vocabulary after the `min_count` cut, sorted.
    pub vocab: Vec<String>,
    /// Ordered pair counts `(word, context) -> count`; symmetric, so each
    /// unordered co-occurrence appears in both directions.
    pub pairs: BTreeMap<(String, String), u64>,
}

fn sentences(docs: &[AnnotatedDocument]) -> Vec<Vec<&str>> {
    let mut sentences = Vec::new();
    for doc in docs {
        let mut current: Vec<&str> = Vec::new();
        let mut current_key: Option<(usize, usize)> = None;
        for token in &doc.tokens {
            if !token.is_word {
                continue;
            }
            let key = (token.paragraph_idx, token.sentence_idx);
            if current_key != Some(key) {
                if !current.is_empty() {
                    sentences.push(std::mem::take(&mut current));
                }
                current_key = Some(key);
            }
            current.push(token.lemma.as_str());
        }
        if !current.is_empty() {
            sentences.push(current);
        }
    }
    sentences
}

/// Tally co-occurrences of word tokens within `±window` positions inside a
/// sentence, over the vocabulary of lemmas occurring at least `min_count`
/// times.
pub fn cooccurrence_counts(
    docs: &[AnnotatedDocument],
    window: usize,
    min_count: usize,
) -> Result<CooccurrenceCounts, EmbedError> {
    if docs.is_empty() || window == 0 {
        return Err(EmbedError::EmptyCorpus);
    }
    let sentences = sentences(docs);

    let mut frequency: HashMap<&str, usize> = HashMap::new();
    for sentence in &sentences {
        for lemma in sentence {
            *frequency.entry(lemma).or_insert(0) += 1;
        }
    }
    let mut vocab: Vec<String> = frequency
        .iter()
        .filter(|(_, &count)| count >= min_count)
        .map(|(lemma, _)| lemma.to_string())
        .collect();
    vocab.sort();
    if vocab.is_empty() {
        return Err(EmbedError::EmptyCorpus);
    }
    let in_vocab: std::collections::HashSet<&str> =
        vocab.iter().map(String::as_str).collect();

    let mut pairs: BTreeMap<(String, String), u64> = BTreeMap::new();
    for sentence in &sentences {
        for (i, &left) in sentence.iter().enumerate() {
            if !in_vocab.contains(left) {
                continue;
            }
            for &right in sentence.iter().skip(i + 1).take(window) {
                if !in_vocab.contains(right) {
                    continue;
                }
                *pairs
                    .entry((left.to_string(), right.to_string()))
                    .or_insert(0) += 1;
                *pairs
                    .entry((right.to_string(), left.to_string()))
                    .or_insert(0) += 1;
            }
        }
    }
    Ok(CooccurrenceCounts { vocab, pairs })
}

/// Build an embedding space where each word's vector is its PPMI row over
/// the context vocabulary: `max(0, ln(count(w,c)·N / (count(w)·count(c))))`.
pub fn build_ppmi_space(
    docs: &[AnnotatedDocument],
    window: usize,
    min_count: usize,
) -> Result<EmbeddingSpace, EmbedError> {
    let counts = cooccurrence_counts(docs, window, min_count)?;
    let index: BTreeMap<&str, usize> = counts
        .vocab
        .iter()
        .enumerate()
        .map(|(i, w)| (w.as_str(), i))
        .collect();
    let dim = counts.vocab.len();

    let mut marginals = vec![0u64; dim];
    let mut total = 0u64;
    for ((left, _), &count) in &counts.pairs {
        marginals[index[left.as_str()]] += count;
        total += count;
    }

    let mut vectors: BTreeMap<String, Vec<f64>> = counts
        .vocab
        .iter()
        .map(|w| (w.clone(), vec![0.0; dim]))
        .collect();
    if total > 0 {
        for ((left, right), &count) in &counts.pairs {
            let i = index[left.as_str()];
            let j = index[right.as_str()];
            let ratio = (count as f64 * total as f64) / (marginals[i] as f64 * marginals[j] as f64);
            let ppmi = ratio.ln().max(0.0);
            vectors.get_mut(left).expect("vocab word")[j] = ppmi;
        }
    }
    Ok(EmbeddingSpace::from_vectors(vectors, dim))
}
