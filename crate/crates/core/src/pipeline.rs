//! The in-memory dataset and the grid runner.
//!
//! Records are loaded once, tokenized, and their token surfaces interned to
//! `u32` ids numbered in byte order of the surface. N-gram keys are tuples of
//! those ids, so comparing keys compares the underlying surfaces and the
//! lexicographic rank tie-break is preserved without touching strings.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{RunConfig, CONFIG_SCHEMA_VERSION};
use crate::error::{Error, Result};
use crate::fit::{fit_sigmoid, SigmoidFit};
use crate::ingest::{parse_record, CorpusRecord, StudyWindow};
use crate::rankdiv::{rank_bin, rank_diversity, RankDiversityCurve, RankMode, RankTable};
use crate::report::{self, CurveName, FitRow};
use crate::scales::{
    containing_radius, haversine_km, sample_indices, BinSlot, CellIndex, GeoPoint, ScaleError,
    ScaleGrid, SpatialExtent, SpatialScale, TemporalScale,
};
use crate::stats::{MuGrid, ModelKind, RegressionReport, RelevanceReport, StatsError};
use crate::tokenize::{check_ngram, tokenize, ClassFilter, MAX_NGRAM};

const BATCH_LINES: usize = 1 << 16;
const KEPT_ERRORS: usize = 32;

struct Item {
    ts: i64,
    loc: GeoPoint,
    tokens: Box<[u32]>,
}

/// Tokenized records, ordered by record id, with token surfaces interned.
pub struct Dataset {
    items: Vec<Item>,
    vocab: Vec<String>,
    filter: ClassFilter,
    skipped: u64,
    errors: Vec<String>,
}

#[derive(Default)]
struct Builder {
    rows: Vec<(String, Item)>,
    intern: FxHashMap<String, u32>,
    vocab: Vec<String>,
}

impl Builder {
    fn push(&mut self, id: String, ts: i64, loc: GeoPoint, surfaces: Vec<String>) {
        let tokens = surfaces
            .into_iter()
            .map(|s| match self.intern.get(&s) {
                Some(&t) => t,
                None => {
                    let t = u32::try_from(self.vocab.len()).expect("vocabulary fits in u32");
                    self.vocab.push(s.clone());
                    self.intern.insert(s, t);
                    t
                }
            })
            .collect();
        self.rows.push((id, Item { ts, loc, tokens }));
    }

    fn finish(mut self, filter: ClassFilter, skipped: u64, errors: Vec<String>) -> Dataset {
        drop(self.intern);
        self.rows.par_sort_by(|a, b| a.0.cmp(&b.0));
        let mut order: Vec<u32> = (0..self.vocab.len() as u32).collect();
        order.par_sort_unstable_by(|&a, &b| self.vocab[a as usize].cmp(&self.vocab[b as usize]));
        let mut remap = vec![0u32; order.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old as usize] = new as u32;
        }
        let mut old_vocab: Vec<Option<String>> = self.vocab.into_iter().map(Some).collect();
        let vocab: Vec<String> = order
            .iter()
            .map(|&old| old_vocab[old as usize].take().expect("each id used once"))
            .collect();
        let items: Vec<Item> = self
            .rows
            .into_par_iter()
            .map(|(_, mut item)| {
                for t in item.tokens.iter_mut() {
                    *t = remap[*t as usize];
                }
                item
            })
            .collect();
        Dataset {
            items,
            vocab,
            filter,
            skipped,
            errors,
        }
    }
}

fn surfaces(text: &str, filter: ClassFilter) -> Vec<String> {
    tokenize(text)
        .into_iter()
        .filter(|t| filter.admits(t.class))
        .map(|t| t.surface)
        .collect()
}

impl Dataset {
    /// Builds a dataset from records that are already validated.
    pub fn from_records<I>(records: I, filter: ClassFilter) -> Dataset
    where
        I: IntoIterator<Item = CorpusRecord>,
    {
        let mut b = Builder::default();
        for r in records {
            let loc = r.location();
            let toks = surfaces(&r.text, filter);
            b.push(r.id, r.timestamp, loc, toks);
        }
        b.finish(filter, 0, Vec::new())
    }

    /// Reads line-delimited JSON files. Malformed or out-of-window lines are
    /// skipped and counted.
    pub fn load(paths: &[PathBuf], window: &StudyWindow, filter: ClassFilter) -> Result<Dataset> {
        let mut b = Builder::default();
        let mut skipped = 0u64;
        let mut errors = Vec::new();
        for path in paths {
            let file = File::open(path).map_err(|e| Error::io(path, e))?;
            let mut reader = BufReader::with_capacity(1 << 20, file);
            let mut line_no = 0u64;
            loop {
                let mut batch: Vec<(u64, Vec<u8>)> = Vec::with_capacity(BATCH_LINES);
                while batch.len() < BATCH_LINES {
                    let mut buf = Vec::new();
                    let read = reader.read_until(b'\n', &mut buf).map_err(|e| Error::io(path, e))?;
                    if read == 0 {
                        break;
                    }
                    line_no += 1;
                    while matches!(buf.last(), Some(b'\n' | b'\r')) {
                        buf.pop();
                    }
                    if !buf.iter().all(u8::is_ascii_whitespace) {
                        batch.push((line_no, buf));
                    }
                }
                if batch.is_empty() {
                    break;
                }
                let parsed: Vec<_> = batch
                    .par_iter()
                    .map(|(no, line)| {
                        parse_record(line, *no, window).map(|r| {
                            let toks = surfaces(&r.text, filter);
                            let loc = r.location();
                            (r.id, r.timestamp, loc, toks)
                        })
                    })
                    .collect();
                for p in parsed {
                    match p {
                        Ok((id, ts, loc, toks)) => b.push(id, ts, loc, toks),
                        Err(e) => {
                            skipped += 1;
                            if errors.len() < KEPT_ERRORS {
                                errors.push(format!("{}: {e}", path.display()));
                            }
                        }
                    }
                }
            }
        }
        Ok(b.finish(filter, skipped, errors))
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn filter(&self) -> ClassFilter {
        self.filter
    }

    pub fn skipped(&self) -> u64 {
        self.skipped
    }

    /// The first few skipped-line messages.
    pub fn errors(&self) -> &[String] {
        &self.errors
    }

    /// Distinct token surfaces, in byte order.
    pub fn vocabulary(&self) -> &[String] {
        &self.vocab
    }

    /// Indices (in id order) of records inside `scale`.
    pub fn population(&self, scale: &SpatialScale) -> Vec<u32> {
        self.items
            .par_iter()
            .enumerate()
            .filter(|(_, it)| scale.contains(it.loc))
            .map(|(i, _)| i as u32)
            .collect()
    }

    /// `n` records drawn uniformly without replacement from those inside
    /// `scale`. Matches [`crate::scales::spatial_sample`] on the same records.
    pub fn sample(&self, scale: &SpatialScale, n: usize, seed: u64) -> Result<Vec<u32>, ScaleError> {
        let pop = self.population(scale);
        if pop.len() < n {
            return Err(ScaleError::InsufficientPopulation {
                requested: n,
                available: pop.len(),
                radius: scale.extent,
            });
        }
        Ok(sample_indices(pop.len(), n, seed)
            .into_iter()
            .map(|i| pop[i])
            .collect())
    }

    pub fn max_distance_km(&self, center: GeoPoint) -> f64 {
        self.items
            .par_iter()
            .map(|it| haversine_km(center, it.loc))
            .reduce(|| 0.0, f64::max)
    }

    /// N-gram occurrences of the selected records.
    pub fn ngram_index(&self, selection: &[u32], n: usize) -> Result<NgramIndex, Error> {
        check_ngram(n).map_err(|e| Error::Config(e.to_string()))?;
        let mut provisional: FxHashMap<[u32; MAX_NGRAM], u32> = FxHashMap::default();
        let mut keys: Vec<[u32; MAX_NGRAM]> = Vec::new();
        let mut records = Vec::with_capacity(selection.len());
        let mut flat = Vec::new();
        for &idx in selection {
            let item = &self.items[idx as usize];
            let start = flat.len();
            for w in item.tokens.windows(n) {
                let mut key = [0u32; MAX_NGRAM];
                key[..n].copy_from_slice(w);
                let id = *provisional.entry(key).or_insert_with(|| {
                    keys.push(key);
                    (keys.len() - 1) as u32
                });
                flat.push(id);
            }
            records.push((item.ts, start..flat.len()));
        }
        drop(provisional);
        let mut order: Vec<u32> = (0..keys.len() as u32).collect();
        order.par_sort_unstable_by(|&a, &b| keys[a as usize].cmp(&keys[b as usize]));
        let mut remap = vec![0u32; order.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old as usize] = new as u32;
        }
        flat.par_iter_mut().for_each(|id| *id = remap[*id as usize]);
        let keys = order.iter().map(|&o| keys[o as usize]).collect();
        Ok(NgramIndex {
            n,
            records,
            flat,
            keys,
        })
    }

    fn surface_of(&self, key: &[u32]) -> String {
        key.iter()
            .map(|&t| self.vocab[t as usize].as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// N-gram ids of a record selection. Ids are numbered in the byte order of
/// the N-gram's parts.
pub struct NgramIndex {
    n: usize,
    records: Vec<(i64, std::ops::Range<usize>)>,
    flat: Vec<u32>,
    keys: Vec<[u32; MAX_NGRAM]>,
}

impl NgramIndex {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Total N-gram occurrences.
    pub fn occurrences(&self) -> usize {
        self.flat.len()
    }

    pub fn distinct(&self) -> usize {
        self.keys.len()
    }

    /// Rank tables of N-gram ids, one per bin of `scale`.
    pub fn tables(&self, scale: &TemporalScale) -> Result<Vec<RankTable<u32>>, Error> {
        let mut binned: Vec<Vec<u32>> = vec![Vec::new(); scale.bins() as usize];
        for (ts, range) in &self.records {
            if let BinSlot::Bin(b) = scale.bin_index(*ts)? {
                binned[b as usize].extend_from_slice(&self.flat[range.clone()]);
            }
        }
        Ok(binned
            .into_par_iter()
            .enumerate()
            .map(|(b, mut ids)| {
                ids.sort_unstable();
                let mut counts: Vec<(u32, u64)> = Vec::new();
                for id in ids {
                    match counts.last_mut() {
                        Some((last, c)) if *last == id => *c += 1,
                        _ => counts.push((id, 1)),
                    }
                }
                rank_bin(b as u32, counts)
            })
            .collect::<Result<Vec<_>, _>>()?)
    }

    pub fn curve(&self, scale: &TemporalScale, mode: RankMode) -> Result<RankDiversityCurve, Error> {
        Ok(rank_diversity(&self.tables(scale)?, mode)?)
    }

    /// Id of the N-gram whose parts are `parts`.
    pub fn id_of(&self, dataset: &Dataset, parts: &[&str]) -> Option<u32> {
        if parts.len() != self.n {
            return None;
        }
        let mut key = [0u32; MAX_NGRAM];
        for (slot, part) in key.iter_mut().zip(parts) {
            *slot = dataset
                .vocab
                .binary_search_by(|v| v.as_str().cmp(part))
                .ok()? as u32;
        }
        self.keys.binary_search(&key).ok().map(|i| i as u32)
    }

    /// Space-joined surface of an N-gram id.
    pub fn surface(&self, dataset: &Dataset, id: u32) -> String {
        dataset.surface_of(&self.keys[id as usize][..self.n])
    }

    /// Re-keys id tables by surface.
    pub fn string_tables(&self, dataset: &Dataset, tables: &[RankTable<u32>]) -> Vec<RankTable<String>> {
        tables
            .iter()
            .map(|t| {
                rank_bin(
                    t.bin,
                    t.entries()
                        .iter()
                        .map(|&(id, c)| (self.surface(dataset, id), c)),
                )
                .expect("source table is non-empty")
            })
            .collect()
    }
}

/// Result of one grid cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub index: CellIndex,
    pub n: usize,
    pub extent: SpatialExtent,
    pub dt_hours: u32,
    pub curve: RankDiversityCurve,
    pub fit: SigmoidFit,
}

fn cell_label(n: usize, extent: SpatialExtent, dt: u32) -> String {
    format!("(N={n}, radius={extent}, dt={dt} h)")
}

/// Everything a grid run computes, before anything is written.
#[derive(Debug, Clone)]
pub struct GridRun {
    pub country: String,
    pub grid: ScaleGrid,
    pub sample_size: usize,
    /// Radius standing in for the whole-country extent in `fits` and the
    /// regressions.
    pub whole_country_radius_km: f64,
    pub records_loaded: usize,
    pub records_skipped: u64,
    pub cells: Vec<CellResult>,
    pub mu: MuGrid,
    pub relevance: Option<RelevanceReport>,
    pub regressions: Vec<RegressionReport>,
    pub warnings: Vec<String>,
}

impl GridRun {
    pub fn fit_rows(&self) -> Vec<FitRow> {
        self.cells
            .iter()
            .map(|c| FitRow::new(c.n, c.extent, self.whole_country_radius_km, c.dt_hours, &c.fit))
            .collect()
    }
}

/// Sample size to use: the configured one, else the population of the
/// smallest extent. Fails when the smallest extent holds fewer records.
pub fn resolve_sample_size(config: &RunConfig, dataset: &Dataset, center: GeoPoint) -> Result<usize> {
    let grid = config.grid()?;
    let smallest = grid.spatial[0];
    let scale = match smallest {
        SpatialExtent::RadiusKm(r) => SpatialScale::circle(center, r)?,
        SpatialExtent::WholeCountry => SpatialScale::whole_country(center),
    };
    let available = dataset.population(&scale).len();
    let n = config.sample_size.unwrap_or(available);
    if n == 0 {
        return Err(Error::Config(format!("no records within {smallest} of the center")));
    }
    if available < n {
        return Err(Error::Config(
            ScaleError::InsufficientPopulation {
                requested: n,
                available,
                radius: smallest,
            }
            .to_string(),
        ));
    }
    Ok(n)
}

/// Computes every cell of the grid on an already loaded dataset.
pub fn compute_grid(config: &RunConfig, dataset: &Dataset) -> Result<GridRun> {
    config.validate()?;
    let window = config.study_window()?;
    let center = config.center_point()?;
    let grid = config.grid()?;
    let n = resolve_sample_size(config, dataset, center)?;
    let whole_r = config
        .whole_country_radius_km
        .unwrap_or_else(|| containing_radius(dataset.max_distance_km(center)));

    let scales: Vec<TemporalScale> = grid
        .temporal
        .iter()
        .map(|&dt| TemporalScale::new(dt, window.start(), window.span_seconds()))
        .collect::<Result<_, _>>()?;

    let samples: Vec<Vec<u32>> = grid
        .spatial
        .par_iter()
        .map(|&extent| {
            let scale = match extent {
                SpatialExtent::RadiusKm(r) => SpatialScale::circle(center, r)?,
                SpatialExtent::WholeCountry => SpatialScale::whole_country(center),
            };
            dataset.sample(&scale, n, config.seed)
        })
        .collect::<Result<_, _>>()?;

    let tasks: Vec<(usize, usize)> = (0..grid.grammatical.len())
        .flat_map(|i| (0..grid.spatial.len()).map(move |j| (i, j)))
        .collect();
    let per_task: Vec<Result<Vec<CellResult>>> = tasks
        .par_iter()
        .map(|&(i, j)| {
            let ngram = grid.grammatical[i];
            let extent = grid.spatial[j];
            let index = dataset.ngram_index(&samples[j], ngram)?;
            let mut out = Vec::with_capacity(scales.len());
            for (s, scale) in scales.iter().enumerate() {
                let dt = scale.delta_t_hours();
                let wrap = |e: Error| Error::Cell {
                    cell: cell_label(ngram, extent, dt),
                    source: Box::new(e),
                };
                let curve = index.curve(scale, config.rank_mode).map_err(wrap)?;
                let fit = fit_sigmoid(&curve).map_err(|e| wrap(e.into()))?;
                out.push(CellResult {
                    index: CellIndex {
                        grammatical: i,
                        spatial: j,
                        temporal: s,
                    },
                    n: ngram,
                    extent,
                    dt_hours: dt,
                    curve,
                    fit,
                });
            }
            Ok(out)
        })
        .collect();
    let mut cells = Vec::with_capacity(grid.len());
    for r in per_task {
        cells.extend(r?);
    }

    let radius_value = |e: SpatialExtent| match e {
        SpatialExtent::RadiusKm(r) => r,
        SpatialExtent::WholeCountry => whole_r,
    };
    let mut mu = MuGrid::new(
        &config.country,
        grid.grammatical.iter().map(|&g| g as f64).collect(),
        grid.spatial.iter().map(|&e| radius_value(e)).collect(),
        grid.temporal.iter().map(|&t| f64::from(t)).collect(),
    )?;
    for c in &cells {
        mu.set(c.index.grammatical, c.index.spatial, c.index.temporal, c.fit.params.mu);
    }

    let mut warnings = Vec::new();
    let relevance = match RelevanceReport::compute(&mu) {
        Ok(r) => Some(r),
        Err(e @ StatsError::SingleValueAxis(..)) => {
            warnings.push(format!("relevance skipped: {e}"));
            None
        }
        Err(e) => return Err(e.into()),
    };
    let mut regressions = Vec::new();
    for kind in [ModelKind::Linear, ModelKind::Multiplicative] {
        match crate::stats::regress(&mu, kind, config.spatial_predictor) {
            Ok(r) => regressions.push(r),
            Err(e @ (StatsError::RankDeficient(_) | StatsError::TooFewObservations { .. })) => {
                warnings.push(format!("{} regression skipped: {e}", kind.as_str()));
            }
            Err(e) => return Err(e.into()),
        }
    }
    for c in &cells {
        if !c.fit.converged {
            warnings.push(format!(
                "fit for {} hit the iteration cap",
                cell_label(c.n, c.extent, c.dt_hours)
            ));
        }
    }

    Ok(GridRun {
        country: config.country.clone(),
        grid,
        sample_size: n,
        whole_country_radius_km: whole_r,
        records_loaded: dataset.len(),
        records_skipped: dataset.skipped(),
        cells,
        mu,
        relevance,
        regressions,
        warnings,
    })
}

/// Machine-readable description of a finished run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub engine_version: String,
    pub config_schema_version: u32,
    pub config: RunConfig,
    pub seed: u64,
    /// Sampling draws every spatial extent with the same seed.
    pub seed_scope: String,
    pub sample_size: usize,
    pub whole_country_radius_km: f64,
    pub records_loaded: usize,
    pub records_skipped: u64,
    pub cells: usize,
    /// Emoji classification source, for reproducibility of token classes.
    pub emoji_property: String,
    /// SHA-256 of every written file, keyed by file name.
    pub files: BTreeMap<String, String>,
}

pub const MANIFEST_FILE: &str = "manifest.json";

impl Manifest {
    pub fn from_json(text: &str) -> Result<Manifest> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("manifest: {e}")))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Every output file of a run as `(file name, contents)`, manifest last.
pub fn render_outputs(config: &RunConfig, run: &GridRun) -> Result<Vec<(String, Vec<u8>)>> {
    let csv_err = |e: report::ReportError| Error::Data(e.to_string());
    let mut files: Vec<(String, Vec<u8>)> = Vec::with_capacity(run.cells.len() + 4);
    for c in &run.cells {
        let name = CurveName {
            country: run.country.clone(),
            n: c.n,
            extent: c.extent,
            dt_hours: c.dt_hours,
        };
        files.push((name.file_name(), report::curve_csv(&c.curve).into_bytes()));
    }
    files.push((
        format!("fits_{}.csv", run.country),
        report::fits_csv(&run.fit_rows()).map_err(csv_err)?.into_bytes(),
    ));
    if let Some(rel) = &run.relevance {
        files.push((
            "relevance.csv".into(),
            report::relevance_csv(std::slice::from_ref(rel)).into_bytes(),
        ));
    }
    if !run.regressions.is_empty() {
        let rows: Vec<(String, RegressionReport)> = run
            .regressions
            .iter()
            .map(|r| (run.country.clone(), r.clone()))
            .collect();
        files.push((
            "regression.csv".into(),
            report::regression_csv(&rows).map_err(csv_err)?.into_bytes(),
        ));
    }
    let manifest = Manifest {
        engine_version: crate::VERSION.to_owned(),
        config_schema_version: CONFIG_SCHEMA_VERSION,
        config: config.clone(),
        seed: config.seed,
        seed_scope: "shared across spatial extents".into(),
        sample_size: run.sample_size,
        whole_country_radius_km: run.whole_country_radius_km,
        records_loaded: run.records_loaded,
        records_skipped: run.records_skipped,
        cells: run.cells.len(),
        emoji_property: crate::tokenize::emoji_property_set(),
        files: files
            .iter()
            .map(|(name, bytes)| (name.clone(), sha256_hex(bytes)))
            .collect(),
    };
    files.push((MANIFEST_FILE.into(), manifest.to_json().into_bytes()));
    Ok(files)
}

/// Writes files atomically into `dir`. On failure, files already written by
/// this call are removed.
pub fn write_outputs(dir: &Path, files: &[(String, Vec<u8>)]) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written: Vec<PathBuf> = Vec::with_capacity(files.len());
    for (name, bytes) in files {
        let path = dir.join(name);
        if let Err(e) = report::write_atomic(&path, bytes) {
            for p in &written {
                let _ = std::fs::remove_file(p);
            }
            return Err(Error::io(path, e));
        }
        written.push(path);
    }
    Ok(())
}

/// Loads the inputs, computes the grid and writes all outputs. Nothing is
/// written unless every cell succeeds.
pub fn run_grid(config: &RunConfig) -> Result<GridRun> {
    config.validate()?;
    let work = || -> Result<GridRun> {
        let window = config.study_window()?;
        let dataset = Dataset::load(&config.inputs, &window, ClassFilter::words())?;
        if dataset.is_empty() {
            return Err(Error::Data("no valid records in the study window".into()));
        }
        let run = compute_grid(config, &dataset)?;
        let files = render_outputs(config, &run)?;
        write_outputs(&config.output_dir, &files)?;
        Ok(run)
    };
    match config.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{SyntheticCorpus, SyntheticSpec};
    use crate::rankdiv::rank_bins;
    use crate::scales::spatial_sample;
    use crate::tokenize::ngrams;

    fn corpus() -> Vec<CorpusRecord> {
        let mut spec = SyntheticSpec::zipf(60, 1.0);
        spec.bins = 8;
        spec.records_per_bin = 40;
        spec.seed = 3;
        SyntheticCorpus::new(spec).unwrap().par_records()
    }

    #[test]
    fn interned_vocabulary_is_sorted() {
        let ds = Dataset::from_records(corpus(), ClassFilter::words());
        assert!(ds.vocabulary().windows(2).all(|w| w[0] < w[1]));
        assert_eq!(ds.len(), 320);
    }

    #[test]
    fn id_tables_match_string_tables() {
        let recs = corpus();
        let ds = Dataset::from_records(recs.clone(), ClassFilter::words());
        let scale = TemporalScale::with_any_width(3, crate::ingest::DEFAULT_ORIGIN, 8 * 3 * 3600).unwrap();
        let all: Vec<u32> = (0..ds.len() as u32).collect();
        for n in 1..=3 {
            let idx = ds.ngram_index(&all, n).unwrap();
            let fast = idx.string_tables(&ds, &idx.tables(&scale).unwrap());

            let mut binned: Vec<Vec<String>> = vec![Vec::new(); 8];
            for r in &recs {
                if let BinSlot::Bin(b) = scale.bin_index(r.timestamp).unwrap() {
                    let toks = tokenize(&r.text);
                    binned[b as usize].extend(
                        ngrams(&toks, n, ClassFilter::words())
                            .unwrap()
                            .into_iter()
                            .map(|g| g.to_string()),
                    );
                }
            }
            assert_eq!(fast, rank_bins(&binned).unwrap(), "N = {n}");
        }
    }

    #[test]
    fn sample_matches_record_sampling() {
        let recs = corpus();
        let ds = Dataset::from_records(recs.clone(), ClassFilter::words());
        let center = crate::ingest::Placement::default().center;
        let scale = SpatialScale::circle(center, 200.0).unwrap();
        let fast = ds.sample(&scale, 50, 9).unwrap();
        let slow = spatial_sample(&recs, &scale, 50, 9).unwrap();
        let mut sorted = recs.clone();
        sorted.sort_by(|a, b| a.id.cmp(&b.id));
        let fast_ids: Vec<&str> = fast.iter().map(|&i| sorted[i as usize].id.as_str()).collect();
        let slow_ids: Vec<&str> = slow.iter().map(|r| r.id.as_str()).collect();
        assert_eq!(fast_ids, slow_ids);
    }

    #[test]
    fn id_lookup_round_trips() {
        let ds = Dataset::from_records(corpus(), ClassFilter::words());
        let all: Vec<u32> = (0..ds.len() as u32).collect();
        let idx = ds.ngram_index(&all, 2).unwrap();
        for id in [0, 5, idx.distinct() as u32 - 1] {
            let s = idx.surface(&ds, id);
            let parts: Vec<&str> = s.split(' ').collect();
            assert_eq!(idx.id_of(&ds, &parts), Some(id));
        }
        assert_eq!(idx.id_of(&ds, &["nope", "w1"]), None);
    }
}
