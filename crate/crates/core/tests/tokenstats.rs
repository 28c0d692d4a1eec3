use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rankdiv::fit::fit_sigmoid;
use rankdiv::ingest::CorpusRecord;
use rankdiv::pipeline::Dataset;
use rankdiv::rankdiv::RankMode;
use rankdiv::scales::{GeoPoint, SpatialScale, TemporalScale};
use rankdiv::tokenize::{tokenize, ClassFilter, TokenClass};
use rankdiv::tokenstats::{class_rank_diversity, leaderboard, DEFAULT_TOP_K};

const ORIGIN: i64 = 1_388_534_400;
const BIN: i64 = 3 * 3600;

fn rec(i: usize, bin: i64, text: String) -> CorpusRecord {
    CorpusRecord {
        id: format!("{i:07}"),
        timestamp: ORIGIN + bin * BIN + (i as i64 % BIN),
        latitude: 40.0,
        longitude: -3.7,
        text,
    }
}

fn scale(bins: i64) -> TemporalScale {
    TemporalScale::new(3, ORIGIN, bins * BIN).unwrap()
}

fn emoji_inventory() -> Vec<String> {
    ('\u{1F300}'..='\u{1F64F}')
        .map(String::from)
        .filter(|s| {
            let t = tokenize(s);
            t.len() == 1 && t[0].class == TokenClass::Emoji
        })
        .collect()
}

/// Index drawn with probability proportional to `1 / (i + 1)`.
fn zipf_index(rng: &mut ChaCha8Rng, n: usize) -> usize {
    let u: f64 = rng.random_range(0.0..1.0);
    (((n + 1) as f64).powf(u) - 1.0).floor() as usize
}

fn text_strategy() -> impl Strategy<Value = String> {
    prop::collection::vec(
        prop_oneof![
            Just("😂".to_owned()),
            Just("❤️".to_owned()),
            Just("👍🏽".to_owned()),
            "#[a-c]{1,2}",
            "@[a-c]{1,2}",
            "[a-c]{1,3}",
        ],
        0..12,
    )
    .prop_map(|v| v.join(" "))
}

proptest! {
    #[test]
    fn leaderboard_never_exceeds_class_total(texts in prop::collection::vec(text_strategy(), 0..30), k in 1usize..30) {
        let recs: Vec<CorpusRecord> = texts.into_iter().enumerate().map(|(i, t)| rec(i, 0, t)).collect();
        for class in [TokenClass::Emoji, TokenClass::Hashtag, TokenClass::Mention] {
            let total = recs
                .iter()
                .flat_map(|r| tokenize(&r.text))
                .filter(|t| t.class == class)
                .count() as u64;
            let board = leaderboard(&recs, class, k, "xx").unwrap();
            prop_assert!(board.entries.len() <= k);
            prop_assert!(board.entries.iter().map(|e| e.1).sum::<u64>() <= total);
            for w in board.entries.windows(2) {
                prop_assert!(w[0].1 > w[1].1 || (w[0].1 == w[1].1 && w[0].0 < w[1].0));
            }
        }
    }

    #[test]
    fn class_curve_equals_filtered_pipeline(
        texts in prop::collection::vec(text_strategy(), 40..120),
        class_index in 0usize..3,
    ) {
        let class = [TokenClass::Emoji, TokenClass::Hashtag, TokenClass::Mention][class_index];
        let recs: Vec<CorpusRecord> = texts
            .into_iter()
            .enumerate()
            .map(|(i, t)| rec(i, (i % 4) as i64, t))
            .collect();
        let sc = scale(4);
        let direct = class_rank_diversity(&recs, class, &sc, RankMode::Intersect);
        let ds = Dataset::from_records(recs.clone(), ClassFilter::only(class));
        let all = ds.population(&SpatialScale::whole_country(GeoPoint::new(40.0, -3.7).unwrap()));
        let generic = ds.ngram_index(&all, 1).unwrap().curve(&sc, RankMode::Intersect);
        match (direct, generic) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a.occupants(), b.occupants()),
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a.is_ok(), b.is_ok()),
        }
    }
}

#[test]
fn stable_emoji_top_gives_minimal_diversity() {
    let recs: Vec<CorpusRecord> = (0..30)
        .map(|i| rec(i, (i / 3) as i64, format!("😂 😂 #t{i} @u{}", i % 3)))
        .collect();
    let c = class_rank_diversity(&recs, TokenClass::Emoji, &scale(10), RankMode::Intersect).unwrap();
    assert_eq!(c.d(1), Some(0.1));
}

#[test]
fn disjoint_hashtags_are_fully_diverse() {
    let recs = vec![
        rec(0, 0, "#a #a #b".into()),
        rec(1, 1, "#c #c #d".into()),
    ];
    let c = class_rank_diversity(&recs, TokenClass::Hashtag, &scale(2), RankMode::Intersect).unwrap();
    assert!(c.points().all(|(_, d)| d == 1.0));
}

#[test]
fn leaderboard_defaults_to_twenty() {
    let text: String = (0..30).map(|i| format!("@m{i:02} ")).collect();
    let recs = vec![rec(0, 0, text)];
    let board = leaderboard(&recs, TokenClass::Mention, DEFAULT_TOP_K, "xx").unwrap();
    assert_eq!(board.entries.len(), 20);
    assert_eq!(board.entries[0], ("@m00".into(), 1));
}

#[test]
fn mentions_turn_over_faster_than_emojis() {
    let emojis = emoji_inventory();
    assert!(emojis.len() > 500, "{}", emojis.len());
    let bins = 24;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut recs = Vec::new();
    for b in 0..bins {
        for _ in 0..800 {
            let mut parts = Vec::new();
            for _ in 0..3 {
                parts.push(emojis[zipf_index(&mut rng, emojis.len())].clone());
            }
            // Half the handles are regulars, the rest come from a pool that
            // drifts from bin to bin.
            let h = if rng.random_bool(0.5) {
                zipf_index(&mut rng, 20)
            } else {
                100 + zipf_index(&mut rng, 3000) + 40 * b as usize
            };
            parts.push(format!("@user{h}"));
            recs.push(rec(recs.len(), b, parts.join(" ")));
        }
    }
    let sc = scale(bins);
    let mu = |class| {
        let curve = class_rank_diversity(&recs, class, &sc, RankMode::Intersect).unwrap();
        fit_sigmoid(&curve).unwrap().params.mu
    };
    let (mentions, emoji) = (mu(TokenClass::Mention), mu(TokenClass::Emoji));
    assert!(mentions < emoji, "mentions {mentions} emoji {emoji}");
}

#[test]
fn word_class_is_rejected() {
    let recs = vec![rec(0, 0, "hola".into())];
    assert!(class_rank_diversity(&recs, TokenClass::Word, &scale(1), RankMode::Intersect).is_err());
    assert!(leaderboard(&recs, TokenClass::Url, 5, "xx").is_err());
}
