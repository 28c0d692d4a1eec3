//! Frequency leaderboards and rank diversity for non-word token classes.

use rayon::prelude::*;
use thiserror::Error;

use crate::ingest::CorpusRecord;
use crate::rankdiv::{count_sharded, rank_bins, rank_diversity, RankDiversityCurve, RankMode, RankTable};
use crate::scales::{BinSlot, TemporalScale};
use crate::tokenize::{tokenize, TokenClass};

pub const DEFAULT_TOP_K: usize = 20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TokenStatsError {
    #[error("leaderboards cover emoji, hashtag and mention tokens, not `{0}`")]
    UnsupportedClass(TokenClass),
    #[error("K must be at least 1")]
    ZeroK,
    #[error(transparent)]
    Rank(#[from] crate::rankdiv::RankError),
    #[error(transparent)]
    Scale(#[from] crate::scales::ScaleError),
}

/// Most frequent surfaces of one class, by descending count then surface.
#[derive(Debug, Clone, PartialEq)]
pub struct TokenLeaderboard {
    pub country: String,
    pub class: TokenClass,
    pub entries: Vec<(String, u64)>,
}

fn check_class(class: TokenClass) -> Result<(), TokenStatsError> {
    match class {
        TokenClass::Emoji | TokenClass::Hashtag | TokenClass::Mention => Ok(()),
        other => Err(TokenStatsError::UnsupportedClass(other)),
    }
}

fn surfaces(rec: &CorpusRecord, class: TokenClass) -> impl Iterator<Item = String> {
    tokenize(&rec.text)
        .into_iter()
        .filter(move |t| t.class == class)
        .map(|t| t.surface)
}

/// Top `k` surfaces of `class` over all records (fewer if the class has
/// fewer distinct surfaces, empty if it has none).
pub fn leaderboard(
    records: &[CorpusRecord],
    class: TokenClass,
    k: usize,
    country: &str,
) -> Result<TokenLeaderboard, TokenStatsError> {
    check_class(class)?;
    if k == 0 {
        return Err(TokenStatsError::ZeroK);
    }
    let items: Vec<String> = records
        .par_iter()
        .flat_map_iter(|r| surfaces(r, class))
        .collect();
    let entries = match crate::rankdiv::rank_bin(0, count_sharded(&items)) {
        Ok(table) => table.entries().iter().take(k).cloned().collect(),
        Err(_) => Vec::new(),
    };
    Ok(TokenLeaderboard {
        country: country.to_owned(),
        class,
        entries,
    })
}

/// Per-bin rank tables of single tokens of `class`. Records past the last
/// complete bin are ignored.
pub fn class_rank_tables(
    records: &[CorpusRecord],
    class: TokenClass,
    scale: &TemporalScale,
) -> Result<Vec<RankTable<String>>, TokenStatsError> {
    let mut binned: Vec<Vec<String>> = vec![Vec::new(); scale.bins() as usize];
    for rec in records {
        if let BinSlot::Bin(b) = scale.bin_index(rec.timestamp)? {
            binned[b as usize].extend(surfaces(rec, class));
        }
    }
    Ok(rank_bins(&binned)?)
}

/// Rank diversity of single tokens of `class`.
pub fn class_rank_diversity(
    records: &[CorpusRecord],
    class: TokenClass,
    scale: &TemporalScale,
    mode: RankMode,
) -> Result<RankDiversityCurve, TokenStatsError> {
    check_class(class)?;
    let tables = class_rank_tables(records, class, scale)?;
    Ok(rank_diversity(&tables, mode)?)
}
