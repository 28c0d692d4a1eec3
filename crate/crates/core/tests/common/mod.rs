#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use rankdiv::ingest::{serialize_record, zipf_word, CorpusRecord, SpecError, SyntheticCorpus, SyntheticSpec, ZipfTable};

/// Rank diversity computed the slow way: count every bin with a BTreeMap,
/// sort by (count desc, key asc), collect the set of occupants per rank.
/// Returns integer numerators `|X(k)|` for k = 1..=K.
pub fn naive_occupants(bins: &[Vec<String>], intersect: bool) -> Option<Vec<u32>> {
    let mut ranked: Vec<Vec<String>> = Vec::new();
    for bin in bins {
        let mut counts: BTreeMap<&str, u64> = BTreeMap::new();
        for tok in bin {
            *counts.entry(tok.as_str()).or_default() += 1;
        }
        if counts.is_empty() {
            return None;
        }
        let mut list: Vec<(&str, u64)> = counts.into_iter().collect();
        list.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
        ranked.push(list.into_iter().map(|(s, _)| s.to_owned()).collect());
    }
    let k_max = if intersect {
        ranked.iter().map(Vec::len).min()?
    } else {
        ranked.iter().map(Vec::len).max()?
    };
    let mut out = Vec::with_capacity(k_max);
    for k in 0..k_max {
        let set: BTreeSet<&String> = ranked.iter().filter_map(|r| r.get(k)).collect();
        out.push(set.len() as u32);
    }
    Some(out)
}

/// Synthetic corpus whose records are strings of fixed phrases.
///
/// Phrase `p` is a deterministic word sequence; records draw phrases from a
/// Zipf law over the inventory. Longer N-grams are then repeated often enough
/// to have a stable head while their vocabulary still grows with N.
/// Timestamps and locations come from the wrapped [`SyntheticCorpus`].
pub struct PhraseCorpus {
    base: SyntheticCorpus,
    phrases: Vec<Vec<String>>,
    phrase_law: ZipfTable,
    phrases_per_record: u32,
    words: ZipfTable,
    free_words: u32,
    seed: u64,
}

pub struct PhraseSpec {
    pub inventory: u32,
    pub phrase_exponent: f64,
    pub phrase_len: u32,
    pub phrases_per_record: u32,
    pub word_vocab: u32,
    pub word_exponent: f64,
    /// Words drawn i.i.d. from the word law and inserted at random positions.
    pub free_words: u32,
}

impl PhraseCorpus {
    pub fn new(base: SyntheticSpec, p: PhraseSpec) -> Result<Self, SpecError> {
        let seed = base.seed;
        let words = ZipfTable::new(p.word_vocab, p.word_exponent)?;
        let phrases = (0..p.inventory)
            .map(|id| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0f9a_4a5e);
                rng.set_stream(u64::from(id));
                (0..p.phrase_len).map(|_| zipf_word(words.sample(&mut rng))).collect()
            })
            .collect();
        Ok(PhraseCorpus {
            base: SyntheticCorpus::new(base)?,
            phrases,
            phrase_law: ZipfTable::new(p.inventory, p.phrase_exponent)?,
            phrases_per_record: p.phrases_per_record,
            words,
            free_words: p.free_words,
            seed,
        })
    }

    pub fn spec(&self) -> &SyntheticSpec {
        self.base.spec()
    }

    pub fn len(&self) -> u64 {
        self.base.len()
    }

    pub fn record(&self, index: u64) -> CorpusRecord {
        let mut rec = self.base.record(index);
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed.wrapping_add(0x9e37_79b9_7f4a_7c15));
        rng.set_stream(index);
        let mut words: Vec<&str> = Vec::new();
        for _ in 0..self.phrases_per_record {
            let p = self.phrase_law.sample(&mut rng) as usize - 1;
            words.extend(self.phrases[p].iter().map(String::as_str));
        }
        let mut words: Vec<String> = words.into_iter().map(str::to_owned).collect();
        for _ in 0..self.free_words {
            let at = rng.random_range(0..=words.len());
            words.insert(at, zipf_word(self.words.sample(&mut rng)));
        }
        rec.text = words.join(" ");
        rec
    }

    pub fn records(&self) -> Vec<CorpusRecord> {
        (0..self.len()).into_par_iter().map(|i| self.record(i)).collect()
    }

    pub fn write_jsonl(&self, path: &Path) {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path).unwrap());
        const CHUNK: u64 = 16_384;
        let mut start = 0;
        while start < self.len() {
            let end = (start + CHUNK).min(self.len());
            let lines: Vec<String> = (start..end)
                .into_par_iter()
                .map(|i| serialize_record(&self.record(i)))
                .collect();
            for l in lines {
                writeln!(out, "{l}").unwrap();
            }
            start = end;
        }
        out.flush().unwrap();
    }
}

/// Writes records as JSON lines.
pub fn write_records(path: &Path, records: &[CorpusRecord]) {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path).unwrap());
    for r in records {
        writeln!(out, "{}", serialize_record(r)).unwrap();
    }
    out.flush().unwrap();
}
