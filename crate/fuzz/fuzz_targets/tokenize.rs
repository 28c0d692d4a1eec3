#![no_main]

use libfuzzer_sys::fuzz_target;
use rankdiv::tokenize::{is_fitzpatrick_modifier, ngrams, tokenize, ClassFilter, TokenClass};

fuzz_target!(|text: &str| {
    let tokens = tokenize(text);
    let mut last = 0..0;
    for t in &tokens {
        assert!(!t.surface.is_empty() && t.span.end <= text.len());
        let modifier = t.surface.chars().all(is_fitzpatrick_modifier);
        if modifier && last.start <= t.span.start && t.span.end <= last.end {
            continue;
        }
        assert!(t.span.start >= last.end);
        last = t.span.clone();
    }
    let filter = ClassFilter::any_of(&[TokenClass::Word, TokenClass::Hashtag, TokenClass::Emoji]);
    for n in 1..=5 {
        let grams = ngrams(&tokens, n, filter).unwrap();
        let kept = tokens.iter().filter(|t| filter.admits(t.class)).count();
        assert_eq!(grams.len(), (kept + 1).saturating_sub(n));
    }
});
