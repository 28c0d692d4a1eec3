//! Frequency ranking per time bin, rank trajectories and the rank-diversity
//! curve `d(k) = |X(k)| / T`, where `X(k)` is the set of distinct items seen
//! at rank `k` across the `T` bins.

use std::hash::{BuildHasher, Hash};

use rayon::prelude::*;
use rustc_hash::{FxBuildHasher, FxHashMap};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RankError {
    #[error("bin {0} is empty")]
    EmptyBin(u32),
    #[error("no bins to compare")]
    NoBins,
}

/// Items of one bin ordered by descending count; ties ordered by the item's
/// natural order (bytewise for strings).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankTable<S> {
    pub bin: u32,
    entries: Vec<(S, u64)>,
}

impl<S: Ord> RankTable<S> {
    /// Number of ranked items `V_bin`.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Item at rank `k` (1-based).
    pub fn at_rank(&self, k: usize) -> Option<&S> {
        k.checked_sub(1)
            .and_then(|i| self.entries.get(i))
            .map(|(s, _)| s)
    }

    pub fn rank_of(&self, item: &S) -> Option<u32> {
        self.entries
            .iter()
            .position(|(s, _)| s == item)
            .map(|i| i as u32 + 1)
    }

    pub fn entries(&self) -> &[(S, u64)] {
        &self.entries
    }
}

/// Ranks the counts of one bin. Duplicate keys are summed and zero counts
/// ignored.
pub fn rank_bin<S: Ord>(
    bin: u32,
    counts: impl IntoIterator<Item = (S, u64)>,
) -> Result<RankTable<S>, RankError> {
    let mut entries: Vec<(S, u64)> = counts.into_iter().filter(|(_, c)| *c > 0).collect();
    if entries.is_empty() {
        return Err(RankError::EmptyBin(bin));
    }
    entries.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    entries.dedup_by(|later, first| {
        if later.0 == first.0 {
            first.1 += later.1;
            true
        } else {
            false
        }
    });
    entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    Ok(RankTable { bin, entries })
}

/// How far the curve extends when bins have different vocabulary sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RankMode {
    /// Up to the smallest bin vocabulary: every bin has an occupant at every
    /// reported rank.
    #[default]
    Intersect,
    /// Up to the largest bin vocabulary; bins too small to reach `k` simply
    /// contribute no occupant.
    Union,
}

impl RankMode {
    pub fn as_str(self) -> &'static str {
        match self {
            RankMode::Intersect => "intersect",
            RankMode::Union => "union",
        }
    }
}

impl std::str::FromStr for RankMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "intersect" | "min" => Ok(RankMode::Intersect),
            "union" => Ok(RankMode::Union),
            _ => Err(format!("unknown rank mode `{s}` (expected intersect|union)")),
        }
    }
}

/// `d(k)` for `k = 1..=k_max`, stored as integer numerators `|X(k)|` over a
/// common denominator `T`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankDiversityCurve {
    bins: u32,
    mode: RankMode,
    occupants: Vec<u32>,
}

impl RankDiversityCurve {
    /// Builds a curve from raw numerators. Every numerator must lie in
    /// `1..=bins`.
    pub fn from_occupants(bins: u32, mode: RankMode, occupants: Vec<u32>) -> Option<Self> {
        (bins > 0 && occupants.iter().all(|&x| x >= 1 && x <= bins)).then_some(
            RankDiversityCurve {
                bins,
                mode,
                occupants,
            },
        )
    }

    /// Number of time bins `T`.
    pub fn bins(&self) -> u32 {
        self.bins
    }

    pub fn k_max(&self) -> usize {
        self.occupants.len()
    }

    pub fn mode(&self) -> RankMode {
        self.mode
    }

    /// `|X(k)|` for `k = 1..=k_max`.
    pub fn occupants(&self) -> &[u32] {
        &self.occupants
    }

    pub fn d(&self, k: usize) -> Option<f64> {
        k.checked_sub(1)
            .and_then(|i| self.occupants.get(i))
            .map(|&x| f64::from(x) / f64::from(self.bins))
    }

    /// `(k, d(k))` pairs.
    pub fn points(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        let t = f64::from(self.bins);
        self.occupants
            .iter()
            .enumerate()
            .map(move |(i, &x)| (i + 1, f64::from(x) / t))
    }
}

/// Rank diversity over `tables`, one per time bin of the same cell.
pub fn rank_diversity<S: Ord + Sync>(
    tables: &[RankTable<S>],
    mode: RankMode,
) -> Result<RankDiversityCurve, RankError> {
    if tables.is_empty() {
        return Err(RankError::NoBins);
    }
    if let Some(t) = tables.iter().find(|t| t.is_empty()) {
        return Err(RankError::EmptyBin(t.bin));
    }
    let sizes = tables.iter().map(RankTable::len);
    let k_max = match mode {
        RankMode::Intersect => sizes.min(),
        RankMode::Union => sizes.max(),
    }
    .unwrap_or(0);
    let occupants: Vec<u32> = (0..k_max)
        .into_par_iter()
        .with_min_len(64)
        .map_init(Vec::new, |column: &mut Vec<&S>, i| {
            column.clear();
            column.extend(tables.iter().filter_map(|t| t.entries.get(i).map(|(s, _)| s)));
            column.sort_unstable();
            column.dedup();
            column.len() as u32
        })
        .collect();
    Ok(RankDiversityCurve {
        bins: u32::try_from(tables.len()).expect("bin count fits in u32"),
        mode,
        occupants,
    })
}

/// Rank of one item across bins.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankTrajectory<S> {
    pub item: S,
    /// `(bin id, rank)`; `None` where the item is absent from the bin.
    pub ranks: Vec<(u32, Option<u32>)>,
}

impl<S> RankTrajectory<S> {
    pub fn present_bins(&self) -> usize {
        self.ranks.iter().filter(|(_, r)| r.is_some()).count()
    }
}

pub fn rank_trajectory<S: Ord + Clone>(tables: &[RankTable<S>], item: &S) -> RankTrajectory<S> {
    RankTrajectory {
        item: item.clone(),
        ranks: tables.iter().map(|t| (t.bin, t.rank_of(item))).collect(),
    }
}

const SHARDS: usize = 16;
const CHUNK: usize = 1 << 14;

/// Counts items in parallel. Each chunk splits its counts into hash shards;
/// shard `s` of every chunk is merged in chunk order. Output is sorted by
/// item, so it does not depend on scheduling.
pub fn count_sharded<S>(items: &[S]) -> Vec<(S, u64)>
where
    S: Hash + Eq + Ord + Clone + Send + Sync,
{
    let hasher = FxBuildHasher;
    let partials: Vec<Vec<FxHashMap<S, u64>>> = items
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut shards: Vec<FxHashMap<S, u64>> = vec![FxHashMap::default(); SHARDS];
            for item in chunk {
                let s = (hasher.hash_one(item) as usize) % SHARDS;
                *shards[s].entry(item.clone()).or_insert(0) += 1;
            }
            shards
        })
        .collect();
    let mut merged: Vec<(S, u64)> = (0..SHARDS)
        .into_par_iter()
        .flat_map_iter(|s| {
            let mut acc: FxHashMap<S, u64> = FxHashMap::default();
            for partial in &partials {
                for (k, v) in &partial[s] {
                    *acc.entry(k.clone()).or_insert(0) += v;
                }
            }
            acc.into_iter()
        })
        .collect();
    merged.par_sort_unstable_by(|a, b| a.0.cmp(&b.0));
    merged
}

/// Ranks each bin's items (bins in parallel). `binned[b]` holds every item
/// occurrence falling in bin `b`.
pub fn rank_bins<S>(binned: &[Vec<S>]) -> Result<Vec<RankTable<S>>, RankError>
where
    S: Hash + Eq + Ord + Clone + Send + Sync,
{
    binned
        .par_iter()
        .enumerate()
        .map(|(b, items)| rank_bin(b as u32, count_sharded(items)))
        .collect()
}
