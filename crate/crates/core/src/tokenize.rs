//! Tokenization of record text into classified tokens, and N-gram windows.
//!
//! Classes:
//! - `word`: maximal run of alphanumeric grapheme clusters, case-folded
//!   (accents kept).
//! - `hashtag` / `mention`: `#` or `@` followed by one or more letters,
//!   digits or underscores. Case-folded like words.
//! - `emoji`: one extended grapheme cluster starting with a non-ASCII
//!   `Emoji=Yes` code point. Skin-tone modifiers are split off into their
//!   own tokens and variation selectors are dropped from the surface.
//! - `url`: `http://`, `https://` or `www.` up to the next whitespace.
//! - `other`: any remaining non-whitespace cluster (punctuation, symbols,
//!   Devanagari).

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use unicode_normalization::UnicodeNormalization;
use unicode_properties::UnicodeEmoji;
use unicode_segmentation::UnicodeSegmentation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TokenClass {
    Word,
    Emoji,
    Hashtag,
    Mention,
    Url,
    Other,
}

impl TokenClass {
    pub fn as_str(self) -> &'static str {
        match self {
            TokenClass::Word => "word",
            TokenClass::Emoji => "emoji",
            TokenClass::Hashtag => "hashtag",
            TokenClass::Mention => "mention",
            TokenClass::Url => "url",
            TokenClass::Other => "other",
        }
    }
}

impl fmt::Display for TokenClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TokenClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "word" => Ok(TokenClass::Word),
            "emoji" => Ok(TokenClass::Emoji),
            "hashtag" => Ok(TokenClass::Hashtag),
            "mention" => Ok(TokenClass::Mention),
            "url" => Ok(TokenClass::Url),
            "other" => Ok(TokenClass::Other),
            _ => Err(format!("unknown token class `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub class: TokenClass,
    /// Byte range of the source text this token was read from. A skin-tone
    /// modifier split out of an emoji cluster lies inside the span of the
    /// cluster's base token; all other spans are disjoint and in order.
    pub span: Range<usize>,
}

const FITZPATRICK: std::ops::RangeInclusive<char> = '\u{1F3FB}'..='\u{1F3FF}';

/// Which emoji property set classifies `emoji` tokens, e.g.
/// `Emoji=Yes, Unicode 17.0.0`.
pub fn emoji_property_set() -> String {
    let (a, b, c) = unicode_properties::UNICODE_VERSION;
    format!("Emoji=Yes excluding ASCII, Unicode {a}.{b}.{c}")
}

pub fn is_fitzpatrick_modifier(c: char) -> bool {
    FITZPATRICK.contains(&c)
}

fn is_devanagari(c: char) -> bool {
    matches!(c, '\u{0900}'..='\u{097F}' | '\u{A8E0}'..='\u{A8FF}')
}

fn is_emoji_cluster(g: &str) -> bool {
    g.chars()
        .next()
        .is_some_and(|c| !c.is_ascii() && c.is_emoji_char())
}

fn is_word_cluster(g: &str) -> bool {
    g.chars()
        .next()
        .is_some_and(|c| c.is_alphanumeric() && !is_devanagari(c))
}

fn is_tag_char(g: &str) -> bool {
    is_word_cluster(g) || g == "_"
}

/// Full Unicode case folding, re-normalized to NFC.
pub fn fold_case(s: &str) -> String {
    caseless::default_case_fold_str(s).nfc().collect()
}

fn url_prefix_len(rest: &str) -> Option<usize> {
    const PREFIXES: [&str; 3] = ["https://", "http://", "www."];
    PREFIXES.iter().find_map(|p| {
        rest.get(..p.len())
            .filter(|head| head.eq_ignore_ascii_case(p))
            .map(|_| p.len())
    })
}

/// Splits NFC text into classified tokens. Whitespace separates tokens and
/// never appears in a surface.
pub fn tokenize(text: &str) -> Vec<Token> {
    let graphemes = split_stray_modifiers(text.grapheme_indices(true));
    let end_of = |i: usize| -> usize {
        graphemes
            .get(i)
            .map(|(off, _)| *off)
            .unwrap_or(text.len())
    };
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < graphemes.len() {
        let (start, g) = graphemes[i];
        if g.chars().all(char::is_whitespace) {
            i += 1;
            continue;
        }
        if url_prefix_len(&text[start..]).is_some() {
            let mut j = i;
            while j < graphemes.len() && !graphemes[j].1.chars().all(char::is_whitespace) {
                j += 1;
            }
            tokens.push(Token {
                surface: text[start..end_of(j)].to_owned(),
                class: TokenClass::Url,
                span: start..end_of(j),
            });
            i = j;
            continue;
        }
        if g == "#" || g == "@" || g == "\u{FF03}" || g == "\u{FF20}" {
            let mut j = i + 1;
            while j < graphemes.len() && is_tag_char(graphemes[j].1) {
                j += 1;
            }
            if j > i + 1 {
                let sigil = if g == "#" || g == "\u{FF03}" { '#' } else { '@' };
                let body = &text[graphemes[i + 1].0..end_of(j)];
                let mut surface = String::with_capacity(body.len() + 1);
                surface.push(sigil);
                surface.push_str(&fold_case(body));
                tokens.push(Token {
                    surface,
                    class: if sigil == '#' {
                        TokenClass::Hashtag
                    } else {
                        TokenClass::Mention
                    },
                    span: start..end_of(j),
                });
                i = j;
                continue;
            }
        }
        if is_word_cluster(g) {
            let mut j = i + 1;
            while j < graphemes.len() && is_word_cluster(graphemes[j].1) {
                j += 1;
            }
            tokens.push(Token {
                surface: fold_case(&text[start..end_of(j)]),
                class: TokenClass::Word,
                span: start..end_of(j),
            });
            i = j;
            continue;
        }
        if is_emoji_cluster(g) {
            push_emoji(&mut tokens, start, g);
            i += 1;
            continue;
        }
        tokens.push(Token {
            surface: g.to_owned(),
            class: TokenClass::Other,
            span: start..start + g.len(),
        });
        i += 1;
    }
    tokens
}

/// A skin-tone modifier extends whatever cluster precedes it, including
/// letters. Outside emoji clusters, cut each modifier into its own piece.
fn split_stray_modifiers<'a>(clusters: impl Iterator<Item = (usize, &'a str)>) -> Vec<(usize, &'a str)> {
    let mut out = Vec::new();
    for (start, g) in clusters {
        if is_emoji_cluster(g) || !g.chars().any(is_fitzpatrick_modifier) {
            out.push((start, g));
            continue;
        }
        let mut piece = 0;
        for (off, c) in g.char_indices() {
            if is_fitzpatrick_modifier(c) {
                if piece < off {
                    out.push((start + piece, &g[piece..off]));
                }
                out.push((start + off, &g[off..off + c.len_utf8()]));
                piece = off + c.len_utf8();
            }
        }
        if piece < g.len() {
            out.push((start + piece, &g[piece..]));
        }
    }
    out
}

fn push_emoji(tokens: &mut Vec<Token>, start: usize, cluster: &str) {
    let base: String = cluster
        .chars()
        .filter(|&c| !is_fitzpatrick_modifier(c) && c != '\u{FE0F}' && c != '\u{FE0E}')
        .collect();
    if !base.is_empty() {
        tokens.push(Token {
            surface: base,
            class: TokenClass::Emoji,
            span: start..start + cluster.len(),
        });
    }
    for (off, c) in cluster.char_indices() {
        if is_fitzpatrick_modifier(c) {
            tokens.push(Token {
                surface: c.to_string(),
                class: TokenClass::Emoji,
                span: start + off..start + off + c.len_utf8(),
            });
        }
    }
}

/// Token classes admitted into N-gram assembly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ClassFilter {
    mask: u8,
}

impl ClassFilter {
    pub const fn only(class: TokenClass) -> Self {
        ClassFilter {
            mask: 1 << class as u8,
        }
    }

    pub const fn words() -> Self {
        Self::only(TokenClass::Word)
    }

    pub fn any_of(classes: &[TokenClass]) -> Self {
        ClassFilter {
            mask: classes.iter().fold(0, |m, &c| m | (1 << c as u8)),
        }
    }

    pub fn admits(&self, class: TokenClass) -> bool {
        self.mask & (1 << class as u8) != 0
    }
}

impl Default for ClassFilter {
    fn default() -> Self {
        Self::words()
    }
}

pub const MAX_NGRAM: usize = 5;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("N-gram length {0} outside 1..=5")]
pub struct NgramRangeError(pub usize);

/// `N` contiguous token surfaces from one record.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NGram {
    pub parts: Vec<String>,
}

impl NGram {
    pub fn n(&self) -> usize {
        self.parts.len()
    }
}

impl fmt::Display for NGram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.parts.join(" "))
    }
}

pub fn check_ngram(n: usize) -> Result<(), NgramRangeError> {
    if (1..=MAX_NGRAM).contains(&n) {
        Ok(())
    } else {
        Err(NgramRangeError(n))
    }
}

/// All contiguous windows of length `n` over the tokens admitted by `filter`.
/// Windows are taken after filtering, so dropped tokens do not break runs.
pub fn ngrams(tokens: &[Token], n: usize, filter: ClassFilter) -> Result<Vec<NGram>, NgramRangeError> {
    check_ngram(n)?;
    let kept: Vec<&str> = tokens
        .iter()
        .filter(|t| filter.admits(t.class))
        .map(|t| t.surface.as_str())
        .collect();
    Ok(kept
        .windows(n)
        .map(|w| NGram {
            parts: w.iter().map(|s| (*s).to_owned()).collect(),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn classes(text: &str) -> Vec<(String, TokenClass)> {
        tokenize(text)
            .into_iter()
            .map(|t| (t.surface, t.class))
            .collect()
    }

    fn tok(s: &str, class: TokenClass) -> Token {
        Token {
            surface: s.to_owned(),
            class,
            span: 0..0,
        }
    }

    #[test]
    fn mixed_sentence() {
        use TokenClass::*;
        assert_eq!(
            classes("I #love CDMX @aicm3 😂"),
            vec![
                ("i".into(), Word),
                ("#love".into(), Hashtag),
                ("cdmx".into(), Word),
                ("@aicm3".into(), Mention),
                ("😂".into(), Emoji),
            ]
        );
    }

    #[test]
    fn empty_and_blank() {
        assert!(tokenize("").is_empty());
        assert!(tokenize(" \t\n ").is_empty());
    }

    #[test]
    fn fitzpatrick_modifier_split() {
        assert_eq!(
            classes("👍🏽"),
            vec![
                ("👍".into(), TokenClass::Emoji),
                ("\u{1F3FD}".into(), TokenClass::Emoji)
            ]
        );
        assert_eq!(classes("\u{1F3FB}"), vec![("\u{1F3FB}".into(), TokenClass::Emoji)]);
    }

    #[test]
    fn modifier_after_letter_is_split() {
        use TokenClass::*;
        assert_eq!(classes("a\u{1F3FB}"), vec![("a".into(), Word), ("\u{1F3FB}".into(), Emoji)]);
        assert_eq!(
            classes("#ab\u{1F3FF}c"),
            vec![("#ab".into(), Hashtag), ("\u{1F3FF}".into(), Emoji), ("c".into(), Word)]
        );
    }

    #[test]
    fn zwj_sequence_is_one_token() {
        // woman technologist, medium skin tone
        let t = classes("\u{1F469}\u{1F3FD}\u{200D}\u{1F4BB}");
        assert_eq!(
            t,
            vec![
                ("\u{1F469}\u{200D}\u{1F4BB}".into(), TokenClass::Emoji),
                ("\u{1F3FD}".into(), TokenClass::Emoji),
            ]
        );
        // family: one cluster
        let t = classes("\u{1F468}\u{200D}\u{1F469}\u{200D}\u{1F467}");
        assert_eq!(t.len(), 1);
    }

    #[test]
    fn variation_selector_dropped() {
        assert_eq!(classes("\u{2764}\u{FE0F}"), classes("\u{2764}"));
        assert_eq!(classes("\u{2764}")[0].1, TokenClass::Emoji);
    }

    #[test]
    fn accents_kept_case_folded() {
        assert_eq!(classes("#México")[0].0, "#méxico");
        assert_ne!(classes("#México")[0].0, classes("#Mexico")[0].0);
        assert_eq!(classes("STRASSE Straße")[1].0, "strasse");
    }

    #[test]
    fn urls_and_punctuation() {
        use TokenClass::*;
        assert_eq!(
            classes("see https://t.co/xyz, ok!"),
            vec![
                ("see".into(), Word),
                ("https://t.co/xyz,".into(), Url),
                ("ok".into(), Word),
                ("!".into(), Other),
            ]
        );
        assert_eq!(classes("WWW.example.com")[0].1, Url);
    }

    #[test]
    fn bare_sigils_are_other() {
        use TokenClass::*;
        assert_eq!(classes("# @"), vec![("#".into(), Other), ("@".into(), Other)]);
        assert_eq!(
            classes("a@b_c."),
            vec![("a".into(), Word), ("@b_c".into(), Mention), (".".into(), Other)]
        );
    }

    #[test]
    fn digits_and_ascii_emoji_codepoints_are_not_emoji() {
        assert_eq!(classes("2014")[0].1, TokenClass::Word);
        assert_eq!(classes("*")[0].1, TokenClass::Other);
    }

    #[test]
    fn devanagari_is_other() {
        let t = classes("\u{0928}\u{092E}");
        assert!(!t.is_empty());
        assert!(t.iter().all(|(_, c)| *c == TokenClass::Other));
    }

    #[test]
    fn ngram_windows() {
        let toks: Vec<Token> = ["a", "b", "c"].iter().map(|s| tok(s, TokenClass::Word)).collect();
        let bigrams = ngrams(&toks, 2, ClassFilter::words()).unwrap();
        let joined: Vec<String> = bigrams.iter().map(ToString::to_string).collect();
        assert_eq!(joined, vec!["a b", "b c"]);
        assert_eq!(ngrams(&toks, 1, ClassFilter::words()).unwrap().len(), 3);
        assert!(ngrams(&toks[..2], 5, ClassFilter::words()).unwrap().is_empty());
        assert_eq!(ngrams(&toks, 0, ClassFilter::words()), Err(NgramRangeError(0)));
        assert_eq!(ngrams(&toks, 6, ClassFilter::words()), Err(NgramRangeError(6)));
    }

    #[test]
    fn filter_drops_special_tokens() {
        let toks = tokenize("hola #tag amigo 😂 mio");
        let g = ngrams(&toks, 2, ClassFilter::words()).unwrap();
        assert_eq!(g[0].to_string(), "hola amigo");
        assert_eq!(g[1].to_string(), "amigo mio");
        let tags = ngrams(&toks, 1, ClassFilter::only(TokenClass::Hashtag)).unwrap();
        assert_eq!(tags.len(), 1);
    }
}
