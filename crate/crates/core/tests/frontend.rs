use std::collections::HashMap;

use proptest::prelude::*;
use ttsprep::frontend::{
    expand_cardinal, grapheme_to_phoneme, normalize_text, PhonemeInventory, STRESS,
};

fn golden(path: &str) -> Vec<(String, String)> {
    let text = std::fs::read_to_string(format!("{}/tests/data/{path}", env!("CARGO_MANIFEST_DIR")))
        .unwrap();
    text.lines()
        .map(|l| {
            let (k, v) = l.split_once('\t').unwrap();
            (k.to_string(), v.to_string())
        })
        .collect()
}

#[test]
fn g2p_golden_words() {
    let inv = PhonemeInventory::castilian();
    for (word, expected) in golden("g2p_golden.tsv") {
        let got = grapheme_to_phoneme(&word, &inv).unwrap().to_string();
        assert_eq!(got, expected, "word {word:?}");
    }
}

#[test]
fn cardinal_golden_values() {
    for (n, expected) in golden("cardinal_golden.tsv") {
        assert_eq!(expand_cardinal(n.parse().unwrap()).unwrap(), expected);
    }
}

#[test]
fn cardinal_is_injective() {
    let mut seen: HashMap<String, u32> = HashMap::with_capacity(1_000_000);
    for n in 0..=999_999 {
        let s = expand_cardinal(n).unwrap();
        if let Some(prev) = seen.insert(s.clone(), n) {
            panic!("{prev} and {n} both spell {s:?}");
        }
    }
}

#[test]
fn normalization_uses_cardinal_expansion() {
    let expected = format!("tiene {} años", expand_cardinal(42).unwrap());
    assert_eq!(normalize_text("Tiene 42 años.").as_str(), expected);
    assert_eq!(expected, "tiene cuarenta y dos años");
}

#[test]
fn sentence_round_trip_through_frontend() {
    let inv = PhonemeInventory::castilian();
    let text = normalize_text("¿Quién llegó ayer, a las 10?");
    assert_eq!(text.as_str(), "quién llegó ayer a las diez");
    let seq = grapheme_to_phoneme(&text, &inv).unwrap();
    assert_eq!(
        seq.to_string(),
        "k j ˈ e n # ʝ e g ˈ o # a ʝ ˈ e ɾ # ˈ a # l ˈ a s # d j ˈ e θ"
    );
}

fn spanish_word() -> impl Strategy<Value = String> {
    proptest::collection::vec(
        prop::sample::select(vec![
            "a", "e", "i", "o", "u", "á", "é", "í", "ó", "ú", "ü", "ñ", "b", "c", "ch", "d", "f",
            "g", "gu", "h", "j", "k", "l", "ll", "m", "n", "p", "qu", "r", "rr", "s", "t", "v",
            "w", "x", "y", "z",
        ]),
        1..8,
    )
    .prop_map(|parts| parts.concat())
}

proptest! {
    #[test]
    fn normalize_is_idempotent(raw in "\\PC{0,40}") {
        let once = normalize_text(&raw);
        let twice = normalize_text(once.as_str());
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn normalize_output_is_in_alphabet(raw in "[A-Za-zÁÉÍÓÚÑáéíóúñü0-9 ,.;¿?¡!-]{0,40}") {
        let out = normalize_text(&raw);
        prop_assert!(ttsprep::frontend::NormalizedText::parse(out.as_str()).is_ok());
    }

    #[test]
    fn g2p_closure_and_single_stress(words in proptest::collection::vec(spanish_word(), 1..5)) {
        let inv = PhonemeInventory::castilian();
        let text = words.join(" ");
        // words made only of h are legitimately rejected
        prop_assume!(words.iter().all(|w| w.chars().any(|c| c != 'h')));
        let seq = grapheme_to_phoneme(&text, &inv).unwrap();
        prop_assert!(!seq.is_empty());
        for s in seq.symbols() {
            prop_assert!(inv.contains(s));
        }
        let mut n_words = 0;
        for word in seq.words() {
            n_words += 1;
            prop_assert_eq!(word.iter().filter(|s| *s == STRESS).count(), 1);
        }
        prop_assert_eq!(n_words, words.len());
        prop_assert_eq!(&grapheme_to_phoneme(&text, &inv).unwrap(), &seq);
    }
}
