//! Line-delimited JSON corpus reading and synthetic corpus generation.
//!
//! Input lines look like
//!
//! ```text
//! {"id":"123","ts":1388534400,"lat":19.43,"lon":-99.13,"text":"hola"}
//! ```
//!
//! [`RecordReader`] streams such lines one at a time, skipping (and counting)
//! malformed ones. [`SyntheticCorpus`] produces corpora with the same schema
//! from a Zipf or random-typing text model.

use std::fmt;
use std::io::{self, BufRead, Write};

use chrono::{DateTime, NaiveDate, Utc};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

use crate::scales::GeoPoint;

/// One timestamped, geolocated text item.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusRecord {
    pub id: String,
    #[serde(rename = "ts")]
    pub timestamp: i64,
    #[serde(rename = "lat")]
    pub latitude: f64,
    #[serde(rename = "lon")]
    pub longitude: f64,
    pub text: String,
}

impl CorpusRecord {
    pub fn location(&self) -> GeoPoint {
        GeoPoint {
            lat: self.latitude,
            lon: self.longitude,
        }
    }
}

/// Half-open study window `[start, end)` in epoch seconds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StudyWindow {
    start: i64,
    end: i64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WindowError {
    #[error("window end {end} is not after start {start}")]
    Empty { start: i64, end: i64 },
    #[error("cannot parse `{0}` as an ISO-8601 date or timestamp")]
    BadTimestamp(String),
}

impl StudyWindow {
    pub fn new(start: i64, end: i64) -> Result<Self, WindowError> {
        if end <= start {
            return Err(WindowError::Empty { start, end });
        }
        Ok(StudyWindow { start, end })
    }

    /// Parses `2014-01-01` (midnight UTC) or RFC 3339 timestamps.
    pub fn from_iso(start: &str, end: &str) -> Result<Self, WindowError> {
        Self::new(parse_iso8601(start)?, parse_iso8601(end)?)
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn end(&self) -> i64 {
        self.end
    }

    pub fn span_seconds(&self) -> i64 {
        self.end - self.start
    }

    pub fn contains(&self, ts: i64) -> bool {
        ts >= self.start && ts < self.end
    }
}

pub fn parse_iso8601(s: &str) -> Result<i64, WindowError> {
    let s = s.trim();
    if let Ok(dt) = DateTime::parse_from_rfc3339(s) {
        return Ok(dt.timestamp());
    }
    if let Ok(d) = NaiveDate::parse_from_str(s, "%Y-%m-%d") {
        if let Some(dt) = d.and_hms_opt(0, 0, 0) {
            return Ok(dt.and_utc().timestamp());
        }
    }
    Err(WindowError::BadTimestamp(s.to_owned()))
}

pub fn format_iso8601(ts: i64) -> String {
    DateTime::<Utc>::from_timestamp(ts, 0)
        .map(|d| d.format("%Y-%m-%dT%H:%M:%SZ").to_string())
        .unwrap_or_else(|| ts.to_string())
}

#[derive(Debug, Clone, PartialEq)]
pub enum RecordErrorKind {
    Utf8,
    Syntax(String),
    NotAnObject,
    MissingField(&'static str),
    FieldType {
        field: &'static str,
        expected: &'static str,
    },
    CoordinateRange { lat: f64, lon: f64 },
    ZeroCoordinates,
    OutsideWindow { timestamp: i64 },
    EmptyText,
}

impl fmt::Display for RecordErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecordErrorKind::Utf8 => f.write_str("invalid UTF-8"),
            RecordErrorKind::Syntax(msg) => write!(f, "malformed JSON: {msg}"),
            RecordErrorKind::NotAnObject => f.write_str("record is not a JSON object"),
            RecordErrorKind::MissingField(name) => write!(f, "missing field `{name}`"),
            RecordErrorKind::FieldType { field, expected } => {
                write!(f, "field `{field}` must be {expected}")
            }
            RecordErrorKind::CoordinateRange { lat, lon } => {
                write!(f, "coordinate out of range (lat {lat}, lon {lon})")
            }
            RecordErrorKind::ZeroCoordinates => f.write_str("missing (zero) coordinates"),
            RecordErrorKind::OutsideWindow { timestamp } => {
                write!(f, "timestamp {timestamp} outside the study window")
            }
            RecordErrorKind::EmptyText => f.write_str("empty text"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {kind}")]
pub struct RecordError {
    pub line: u64,
    pub kind: RecordErrorKind,
}

/// Parses and validates one input line. `line_no` is 1-based and only used
/// for error reporting.
pub fn parse_record(
    line: &[u8],
    line_no: u64,
    window: &StudyWindow,
) -> Result<CorpusRecord, RecordError> {
    let err = |kind| RecordError {
        line: line_no,
        kind,
    };
    let text = std::str::from_utf8(line).map_err(|_| err(RecordErrorKind::Utf8))?;
    let value: Value =
        serde_json::from_str(text).map_err(|e| err(RecordErrorKind::Syntax(e.to_string())))?;
    let Value::Object(obj) = value else {
        return Err(err(RecordErrorKind::NotAnObject));
    };
    let rec = record_from_object(&obj).map_err(err)?;

    if !GeoPoint::new(rec.latitude, rec.longitude).is_ok() {
        return Err(err(RecordErrorKind::CoordinateRange {
            lat: rec.latitude,
            lon: rec.longitude,
        }));
    }
    if rec.latitude == 0.0 && rec.longitude == 0.0 {
        return Err(err(RecordErrorKind::ZeroCoordinates));
    }
    if !window.contains(rec.timestamp) {
        return Err(err(RecordErrorKind::OutsideWindow {
            timestamp: rec.timestamp,
        }));
    }
    if rec.text.is_empty() {
        return Err(err(RecordErrorKind::EmptyText));
    }
    Ok(rec)
}

fn record_from_object(obj: &Map<String, Value>) -> Result<CorpusRecord, RecordErrorKind> {
    fn field<'a>(obj: &'a Map<String, Value>, name: &'static str) -> Result<&'a Value, RecordErrorKind> {
        match obj.get(name) {
            None | Some(Value::Null) => Err(RecordErrorKind::MissingField(name)),
            Some(v) => Ok(v),
        }
    }
    let id = field(obj, "id")?
        .as_str()
        .ok_or(RecordErrorKind::FieldType {
            field: "id",
            expected: "a string",
        })?
        .to_owned();
    let timestamp = field(obj, "ts")?.as_i64().ok_or(RecordErrorKind::FieldType {
        field: "ts",
        expected: "an integer",
    })?;
    let latitude = field(obj, "lat")?.as_f64().ok_or(RecordErrorKind::FieldType {
        field: "lat",
        expected: "a number",
    })?;
    let longitude = field(obj, "lon")?.as_f64().ok_or(RecordErrorKind::FieldType {
        field: "lon",
        expected: "a number",
    })?;
    let text = field(obj, "text")?
        .as_str()
        .ok_or(RecordErrorKind::FieldType {
            field: "text",
            expected: "a string",
        })?
        .nfc()
        .collect();
    Ok(CorpusRecord {
        id,
        timestamp,
        latitude,
        longitude,
        text,
    })
}

/// One JSON line (without the trailing newline).
pub fn serialize_record(rec: &CorpusRecord) -> String {
    serde_json::to_string(rec).expect("record serialization is infallible")
}

const KEPT_ERRORS: usize = 32;
const SHRINK_ABOVE: usize = 1 << 20;

/// Streaming reader over line-delimited records. Holds a single line buffer;
/// invalid lines are skipped and counted.
pub struct RecordReader<R> {
    inner: R,
    window: StudyWindow,
    buf: Vec<u8>,
    line_no: u64,
    accepted: u64,
    skipped: u64,
    errors: Vec<RecordError>,
    peak_buffer: usize,
}

impl<R: BufRead> RecordReader<R> {
    pub fn new(inner: R, window: StudyWindow) -> Self {
        RecordReader {
            inner,
            window,
            buf: Vec::with_capacity(512),
            line_no: 0,
            accepted: 0,
            skipped: 0,
            errors: Vec::new(),
            peak_buffer: 0,
        }
    }

    pub fn accepted(&self) -> u64 {
        self.accepted
    }

    pub fn skipped(&self) -> u64 {
        self.skipped
    }

    /// The first few parse errors encountered.
    pub fn errors(&self) -> &[RecordError] {
        &self.errors
    }

    /// Largest line-buffer capacity reached so far, in bytes.
    pub fn peak_buffer_bytes(&self) -> usize {
        self.peak_buffer
    }
}

impl<R: BufRead> Iterator for RecordReader<R> {
    type Item = io::Result<CorpusRecord>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if self.buf.capacity() > SHRINK_ABOVE {
                self.buf = Vec::with_capacity(512);
            }
            self.buf.clear();
            match self.inner.read_until(b'\n', &mut self.buf) {
                Ok(0) => return None,
                Ok(_) => {}
                Err(e) => return Some(Err(e)),
            }
            self.peak_buffer = self.peak_buffer.max(self.buf.capacity());
            self.line_no += 1;
            let line = trim_line(&self.buf);
            if line.iter().all(u8::is_ascii_whitespace) {
                continue;
            }
            match parse_record(line, self.line_no, &self.window) {
                Ok(rec) => {
                    self.accepted += 1;
                    return Some(Ok(rec));
                }
                Err(e) => {
                    self.skipped += 1;
                    if self.errors.len() < KEPT_ERRORS {
                        self.errors.push(e);
                    }
                }
            }
        }
    }
}

fn trim_line(buf: &[u8]) -> &[u8] {
    let mut end = buf.len();
    while end > 0 && (buf[end - 1] == b'\n' || buf[end - 1] == b'\r') {
        end -= 1;
    }
    &buf[..end]
}

// ---------------------------------------------------------------------------
// Synthetic corpora
// ---------------------------------------------------------------------------

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecError {
    #[error("vocabulary size must be positive")]
    EmptyVocabulary,
    #[error("zipf exponent must be positive and finite, got {0}")]
    BadExponent(f64),
    #[error("alphabet size must be in 1..=26, got {0}")]
    BadAlphabet(u8),
    #[error("space probability must lie strictly between 0 and 1, got {0}")]
    BadSpaceProbability(f64),
    #[error("`{0}` must be positive")]
    NonPositive(&'static str),
    #[error("placement radii must satisfy 0 < min_km <= max_km, got {min_km}..{max_km}")]
    BadPlacement { min_km: f64, max_km: f64 },
}

/// Text model for synthetic corpora.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum TextModel {
    /// Each token drawn i.i.d. with `P(rank r) ∝ r^(-exponent)`.
    Zipf { vocabulary_size: u32, exponent: f64 },
    /// Uniform letters; each character ends the word with `space_probability`.
    RandomTyping {
        alphabet_size: u8,
        space_probability: f64,
    },
}

/// Spatial placement of synthetic records: uniform bearing around `center`
/// and log-uniform distance in `[min_km, max_km]`, so every doubling of a
/// circle's radius adds a comparable share of records.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Placement {
    pub center: GeoPoint,
    pub min_km: f64,
    pub max_km: f64,
}

impl Default for Placement {
    fn default() -> Self {
        Placement {
            center: GeoPoint {
                lat: 19.4326,
                lon: -99.1332,
            },
            min_km: 0.5,
            max_km: 1500.0,
        }
    }
}

/// 2014-01-01T00:00:00Z
pub const DEFAULT_ORIGIN: i64 = 1_388_534_400;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    #[serde(flatten)]
    pub model: TextModel,
    pub tokens_per_record: u32,
    pub records_per_bin: u32,
    pub bins: u32,
    pub seed: u64,
    pub origin: i64,
    pub bin_hours: u32,
    pub placement: Placement,
}

impl SyntheticSpec {
    pub fn zipf(vocabulary_size: u32, exponent: f64) -> Self {
        SyntheticSpec {
            model: TextModel::Zipf {
                vocabulary_size,
                exponent,
            },
            tokens_per_record: 12,
            records_per_bin: 100,
            bins: 10,
            seed: 0,
            origin: DEFAULT_ORIGIN,
            bin_hours: 3,
            placement: Placement::default(),
        }
    }

    pub fn random_typing(alphabet_size: u8, space_probability: f64) -> Self {
        SyntheticSpec {
            model: TextModel::RandomTyping {
                alphabet_size,
                space_probability,
            },
            ..Self::zipf(1, 1.0)
        }
    }

    pub fn bin_seconds(&self) -> i64 {
        i64::from(self.bin_hours) * 3600
    }

    /// The window exactly covering the generated bins.
    pub fn window(&self) -> StudyWindow {
        StudyWindow {
            start: self.origin,
            end: self.origin + i64::from(self.bins) * self.bin_seconds(),
        }
    }

    pub fn record_count(&self) -> u64 {
        u64::from(self.bins) * u64::from(self.records_per_bin)
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        match self.model {
            TextModel::Zipf {
                vocabulary_size,
                exponent,
            } => {
                if vocabulary_size == 0 {
                    return Err(SpecError::EmptyVocabulary);
                }
                if !(exponent.is_finite() && exponent > 0.0) {
                    return Err(SpecError::BadExponent(exponent));
                }
            }
            TextModel::RandomTyping {
                alphabet_size,
                space_probability,
            } => {
                if !(1..=26).contains(&alphabet_size) {
                    return Err(SpecError::BadAlphabet(alphabet_size));
                }
                if !(space_probability > 0.0 && space_probability < 1.0) {
                    return Err(SpecError::BadSpaceProbability(space_probability));
                }
            }
        }
        for (name, v) in [
            ("tokens_per_record", self.tokens_per_record),
            ("records_per_bin", self.records_per_bin),
            ("bins", self.bins),
            ("bin_hours", self.bin_hours),
        ] {
            if v == 0 {
                return Err(SpecError::NonPositive(name));
            }
        }
        let p = self.placement;
        if !(p.min_km > 0.0 && p.min_km <= p.max_km && p.max_km.is_finite()) || !p.center.in_range()
        {
            return Err(SpecError::BadPlacement {
                min_km: p.min_km,
                max_km: p.max_km,
            });
        }
        Ok(())
    }
}

/// Surface of the Zipf vocabulary word at `rank` (1-based).
pub fn zipf_word(rank: u32) -> String {
    format!("w{rank}")
}

/// Inverse-CDF sampler over ranks `1..=V` with `P(r) ∝ r^(-s)`.
#[derive(Debug, Clone)]
pub struct ZipfTable {
    cumulative: Vec<f64>,
}

impl ZipfTable {
    pub fn new(vocabulary_size: u32, exponent: f64) -> Result<Self, SpecError> {
        if vocabulary_size == 0 {
            return Err(SpecError::EmptyVocabulary);
        }
        if !(exponent.is_finite() && exponent > 0.0) {
            return Err(SpecError::BadExponent(exponent));
        }
        let mut cumulative = Vec::with_capacity(vocabulary_size as usize);
        let mut acc = 0.0;
        for r in 1..=vocabulary_size {
            acc += f64::from(r).powf(-exponent);
            cumulative.push(acc);
        }
        for c in &mut cumulative {
            *c /= acc;
        }
        Ok(ZipfTable { cumulative })
    }

    pub fn vocabulary_size(&self) -> u32 {
        self.cumulative.len() as u32
    }

    /// Rank for a uniform draw `u ∈ [0, 1)`.
    pub fn rank_for(&self, u: f64) -> u32 {
        let idx = self.cumulative.partition_point(|&c| c <= u);
        (idx.min(self.cumulative.len() - 1) + 1) as u32
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        self.rank_for(rng.random::<f64>())
    }
}

/// Deterministic synthetic corpus. Record `i` is a pure function of the spec
/// and `i`: each record draws from its own ChaCha stream.
#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    spec: SyntheticSpec,
    zipf: Option<ZipfTable>,
}

impl SyntheticCorpus {
    pub fn new(spec: SyntheticSpec) -> Result<Self, SpecError> {
        spec.validate()?;
        let zipf = match spec.model {
            TextModel::Zipf {
                vocabulary_size,
                exponent,
            } => Some(ZipfTable::new(vocabulary_size, exponent)?),
            TextModel::RandomTyping { .. } => None,
        };
        Ok(SyntheticCorpus { spec, zipf })
    }

    pub fn spec(&self) -> &SyntheticSpec {
        &self.spec
    }

    pub fn len(&self) -> u64 {
        self.spec.record_count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn rng_for(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.spec.seed);
        rng.set_stream(index);
        rng
    }

    /// Words of record `index`, in order.
    pub fn words(&self, index: u64) -> Vec<String> {
        let mut rng = self.rng_for(index);
        // Timestamp and placement draws come first in the stream.
        let _ = rng.random::<u64>();
        let _ = rng.random::<f64>();
        let _ = rng.random::<f64>();
        self.draw_words(&mut rng)
    }

    fn draw_words(&self, rng: &mut ChaCha8Rng) -> Vec<String> {
        let n = self.spec.tokens_per_record as usize;
        match (&self.spec.model, &self.zipf) {
            (TextModel::Zipf { .. }, Some(table)) => {
                (0..n).map(|_| zipf_word(table.sample(rng))).collect()
            }
            (
                TextModel::RandomTyping {
                    alphabet_size,
                    space_probability,
                },
                _,
            ) => (0..n)
                .map(|_| {
                    let mut w = String::new();
                    loop {
                        w.push((b'a' + rng.random_range(0..*alphabet_size)) as char);
                        if rng.random::<f64>() < *space_probability {
                            break w;
                        }
                    }
                })
                .collect(),
            _ => unreachable!("zipf table is built for the zipf model"),
        }
    }

    pub fn record(&self, index: u64) -> CorpusRecord {
        let spec = &self.spec;
        let mut rng = self.rng_for(index);
        let bin = index / u64::from(spec.records_per_bin);
        let offset = (rng.random::<u64>() % spec.bin_seconds() as u64) as i64;
        let timestamp = spec.origin + bin as i64 * spec.bin_seconds() + offset;
        let bearing = rng.random::<f64>() * std::f64::consts::TAU;
        let u = rng.random::<f64>();
        let p = spec.placement;
        let distance = p.min_km * (p.max_km / p.min_km).powf(u);
        let loc = p.center.destination(bearing, distance);
        let text = self.draw_words(&mut rng).join(" ");
        CorpusRecord {
            id: format!("syn{index:012}"),
            timestamp,
            latitude: loc.lat,
            longitude: loc.lon,
            text,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = CorpusRecord> + '_ {
        (0..self.len()).map(move |i| self.record(i))
    }

    /// All records, generated in parallel, ordered by index.
    pub fn par_records(&self) -> Vec<CorpusRecord> {
        (0..self.len())
            .into_par_iter()
            .map(|i| self.record(i))
            .collect()
    }

    /// Writes the corpus as line-delimited JSON, generating in parallel
    /// chunks while keeping index order.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> io::Result<()> {
        const CHUNK: u64 = 16_384;
        let mut start = 0;
        while start < self.len() {
            let end = (start + CHUNK).min(self.len());
            let lines: Vec<String> = (start..end)
                .into_par_iter()
                .map(|i| serialize_record(&self.record(i)))
                .collect();
            for line in lines {
                out.write_all(line.as_bytes())?;
                out.write_all(b"\n")?;
            }
            start = end;
        }
        out.flush()
    }
}

/// Generates the records of `spec` in index order.
pub fn generate_corpus(spec: SyntheticSpec) -> Result<impl Iterator<Item = CorpusRecord>, SpecError> {
    let corpus = SyntheticCorpus::new(spec)?;
    Ok((0..corpus.len()).map(move |i| corpus.record(i)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn window() -> StudyWindow {
        StudyWindow::from_iso("2014-01-01", "2015-01-01").unwrap()
    }

    #[test]
    fn parses_well_formed_line() {
        let line = br#"{"id":"1","ts":1400000000,"lat":19.43,"lon":-99.13,"text":"hola"}"#;
        let rec = parse_record(line, 1, &window()).unwrap();
        assert_eq!(rec.id, "1");
        assert_eq!(rec.timestamp, 1_400_000_000);
        assert_eq!(rec.latitude, 19.43);
        assert_eq!(rec.longitude, -99.13);
        assert_eq!(rec.text, "hola");
    }

    #[test]
    fn rejects_out_of_range_latitude() {
        let line = br#"{"id":"1","ts":1400000000,"lat":95.0,"lon":-99.13,"text":"hola"}"#;
        let e = parse_record(line, 7, &window()).unwrap_err();
        assert_eq!(e.line, 7);
        assert!(matches!(e.kind, RecordErrorKind::CoordinateRange { .. }));
    }

    #[test]
    fn rejects_timestamp_before_window() {
        let ts = window().start() - 1;
        let line = format!(r#"{{"id":"1","ts":{ts},"lat":19.4,"lon":-99.1,"text":"x"}}"#);
        let e = parse_record(line.as_bytes(), 1, &window()).unwrap_err();
        assert_eq!(e.kind, RecordErrorKind::OutsideWindow { timestamp: ts });
        // end is exclusive
        let ts = window().end();
        let line = format!(r#"{{"id":"1","ts":{ts},"lat":19.4,"lon":-99.1,"text":"x"}}"#);
        assert!(parse_record(line.as_bytes(), 1, &window()).is_err());
    }

    #[test]
    fn error_kinds() {
        let w = window();
        let cases: [(&[u8], fn(&RecordErrorKind) -> bool); 7] = [
            (b"{not json", |k| matches!(k, RecordErrorKind::Syntax(_))),
            (b"[1,2]", |k| matches!(k, RecordErrorKind::NotAnObject)),
            (
                br#"{"id":"1","lat":1,"lon":1,"text":"a"}"#,
                |k| matches!(k, RecordErrorKind::MissingField("ts")),
            ),
            (
                br#"{"id":"1","ts":1400000000.5,"lat":1,"lon":1,"text":"a"}"#,
                |k| matches!(k, RecordErrorKind::FieldType { field: "ts", .. }),
            ),
            (
                br#"{"id":"1","ts":1400000000,"lat":0,"lon":0,"text":"a"}"#,
                |k| matches!(k, RecordErrorKind::ZeroCoordinates),
            ),
            (
                br#"{"id":"1","ts":1400000000,"lat":1,"lon":1,"text":""}"#,
                |k| matches!(k, RecordErrorKind::EmptyText),
            ),
            (b"\xff\xfe", |k| matches!(k, RecordErrorKind::Utf8)),
        ];
        for (line, check) in cases {
            let e = parse_record(line, 3, &w).unwrap_err();
            assert!(check(&e.kind), "{:?} -> {:?}", String::from_utf8_lossy(line), e);
        }
    }

    #[test]
    fn text_is_nfc_normalized() {
        let line = "{\"id\":\"1\",\"ts\":1400000000,\"lat\":1,\"lon\":1,\"text\":\"me\u{301}xico\"}";
        let rec = parse_record(line.as_bytes(), 1, &window()).unwrap();
        assert_eq!(rec.text, "m\u{e9}xico");
    }

    #[test]
    fn reader_skips_and_counts_bad_lines() {
        let input = concat!(
            r#"{"id":"a","ts":1400000000,"lat":1,"lon":1,"text":"x"}"#,
            "\n\n",
            "garbage\n",
            r#"{"id":"b","ts":1400000001,"lat":1,"lon":1,"text":"y"}"#,
            "\r\n",
            r#"{"id":"c","ts":1,"lat":1,"lon":1,"text":"z"}"#,
        );
        let mut reader = RecordReader::new(input.as_bytes(), window());
        let ids: Vec<String> = reader.by_ref().map(|r| r.unwrap().id).collect();
        assert_eq!(ids, vec!["a", "b"]);
        assert_eq!(reader.skipped(), 2);
        assert_eq!(reader.errors()[0].line, 3);
        assert_eq!(reader.errors()[1].line, 5);
    }

    #[test]
    fn spec_errors() {
        assert_eq!(
            SyntheticCorpus::new(SyntheticSpec::zipf(0, 1.0)).unwrap_err(),
            SpecError::EmptyVocabulary
        );
        for p in [0.0, 1.0, -0.5, f64::NAN] {
            assert!(matches!(
                SyntheticCorpus::new(SyntheticSpec::random_typing(5, p)).unwrap_err(),
                SpecError::BadSpaceProbability(_)
            ));
        }
    }

    #[test]
    fn zipf_two_word_ratio() {
        let table = ZipfTable::new(2, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut counts = [0u64; 2];
        for _ in 0..200_000 {
            counts[table.sample(&mut rng) as usize - 1] += 1;
        }
        let ratio = counts[0] as f64 / counts[1] as f64;
        assert!((ratio - 2.0).abs() < 0.05, "ratio {ratio}");
    }

    #[test]
    fn zipf_inverse_cdf_edges() {
        let table = ZipfTable::new(3, 1.0).unwrap();
        assert_eq!(table.rank_for(0.0), 1);
        assert_eq!(table.rank_for(0.999_999_999), 3);
        // P(1) = 1 / (1 + 1/2 + 1/3) = 6/11
        assert_eq!(table.rank_for(6.0 / 11.0 - 1e-12), 1);
        assert_eq!(table.rank_for(6.0 / 11.0 + 1e-12), 2);
    }

    #[test]
    fn bins_are_uniformly_occupied() {
        let mut spec = SyntheticSpec::zipf(50, 1.0);
        spec.bins = 7;
        spec.records_per_bin = 13;
        let w = spec.window();
        let mut occupancy = vec![0u32; 7];
        for rec in generate_corpus(spec.clone()).unwrap() {
            assert!(w.contains(rec.timestamp));
            occupancy[((rec.timestamp - spec.origin) / spec.bin_seconds()) as usize] += 1;
        }
        assert_eq!(occupancy, vec![13; 7]);
    }

    #[test]
    fn words_match_record_text() {
        let corpus = SyntheticCorpus::new(SyntheticSpec::random_typing(4, 0.3)).unwrap();
        for i in [0, 5, 999] {
            assert_eq!(corpus.words(i).join(" "), corpus.record(i).text);
        }
    }

    #[test]
    fn parallel_generation_matches_sequential() {
        let corpus = SyntheticCorpus::new(SyntheticSpec::zipf(30, 1.2)).unwrap();
        let seq: Vec<_> = corpus.iter().collect();
        assert_eq!(seq, corpus.par_records());
    }
}
