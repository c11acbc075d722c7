//! Finite alphabets and word enumeration.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};

/// Default limit on `|Σ|^t` for exhaustive word enumeration.
pub const DEFAULT_ENUM_CAP: u64 = 1_000_000;

/// A word as a sequence of symbol indices into a [`Scale`], oldest first.
pub type Word = Vec<usize>;

/// Ordered finite set of distinct symbols.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scale {
    symbols: Vec<String>,
}

impl Scale {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = S>) -> Result<Self> {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::EmptyScale);
        }
        let mut seen = HashSet::new();
        for s in &symbols {
            if !seen.insert(s.as_str()) {
                return Err(Error::DuplicateSymbol(s.clone()));
            }
        }
        Ok(Self { symbols })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol(&self, index: usize) -> &str {
        &self.symbols[index]
    }

    pub fn index_of(&self, symbol: &str) -> Result<usize> {
        self.symbols
            .iter()
            .position(|s| s == symbol)
            .ok_or_else(|| Error::UnknownSymbol(symbol.to_string()))
    }

    /// Translates symbol tokens into a word.
    pub fn word<S: AsRef<str>>(&self, symbols: &[S]) -> Result<Word> {
        symbols.iter().map(|s| self.index_of(s.as_ref())).collect()
    }

    /// Parses a word. Separators (comma, whitespace) split tokens; without
    /// separators and with single-character symbols each character is a
    /// token. The empty string and `□` denote the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() || text == "□" {
            return Ok(Vec::new());
        }
        if text.contains(|c: char| c == ',' || c.is_whitespace()) {
            let tokens: Vec<&str> = text
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .collect();
            return self.word(&tokens);
        }
        if self.symbols.iter().all(|s| s.chars().count() == 1) {
            text.chars()
                .map(|c| self.index_of(&c.to_string()))
                .collect()
        } else {
            self.word(&[text])
        }
    }

    /// Renders a word; single-character scales are concatenated, others
    /// comma separated.
    pub fn format_word(&self, word: &[usize]) -> String {
        if word.is_empty() {
            return "□".to_string();
        }
        let sep = if self.symbols.iter().all(|s| s.chars().count() == 1) {
            ""
        } else {
            ","
        };
        word.iter()
            .map(|&i| self.symbols[i].as_str())
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// Cartesian product scale with tuple symbols `(a,b,...)`.
    pub fn product(scales: &[&Scale]) -> Result<Self> {
        let mut symbols = vec![Vec::<&str>::new()];
        for s in scales {
            symbols = symbols
                .into_iter()
                .flat_map(|prefix| {
                    s.symbols.iter().map(move |x| {
                        let mut p = prefix.clone();
                        p.push(x.as_str());
                        p
                    })
                })
                .collect();
        }
        Self::new(symbols.into_iter().map(|t| format!("({})", t.join(","))))
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.symbols.join(", "))
    }
}

/// Number of words of length `t`, or an error past `cap`.
pub fn check_enumeration(alphabet: usize, t: usize, cap: u64) -> Result<u64> {
    let count = (alphabet as u128)
        .checked_pow(t as u32)
        .unwrap_or(u128::MAX);
    if count > cap as u128 {
        return Err(Error::EnumerationCap { count, cap });
    }
    Ok(count as u64)
}

/// Visits every word of length `t` over `alphabet` symbols in lexicographic
/// order. `step(state, a)` extends a prefix state by one symbol; prefix
/// states are cached so each prefix is computed once.
pub fn for_each_word<S, F, V>(alphabet: usize, t: usize, init: S, mut step: F, mut visit: V)
where
    F: FnMut(&S, usize) -> S,
    V: FnMut(&[usize], &S),
{
    if t == 0 {
        visit(&[], &init);
        return;
    }
    if alphabet == 0 {
        return;
    }
    let mut word = vec![0usize; t];
    // states[k] is the state after the first k symbols
    let mut states: Vec<S> = Vec::with_capacity(t + 1);
    states.push(init);
    for k in 0..t {
        let next = step(&states[k], 0);
        states.push(next);
    }
    loop {
        visit(&word, &states[t]);
        // odometer increment from the last position
        let mut pos = t;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            word[pos] += 1;
            if word[pos] < alphabet {
                break;
            }
            word[pos] = 0;
        }
        states.truncate(pos + 1);
        for k in pos..t {
            let next = step(&states[k], word[k]);
            states.push(next);
        }
    }
}

/// All words of length exactly `t`, lexicographic.
pub fn all_words(alphabet: usize, t: usize) -> Vec<Word> {
    let mut out = Vec::new();
    for_each_word(alphabet, t, (), |_, _| (), |w, _| out.push(w.to_vec()));
    out
}

/// All words of length `0..=max_len`, shortest first.
pub fn words_up_to(alphabet: usize, max_len: usize) -> Vec<Word> {
    (0..=max_len).flat_map(|t| all_words(alphabet, t)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scale_validation() {
        assert_eq!(Scale::new(Vec::<String>::new()), Err(Error::EmptyScale));
        assert_eq!(
            Scale::new(["a", "a"]),
            Err(Error::DuplicateSymbol("a".into()))
        );
        let s = Scale::new(["a", "b"]).unwrap();
        assert_eq!(s.index_of("c"), Err(Error::UnknownSymbol("c".into())));
    }

    #[test]
    fn word_parsing() {
        let s = Scale::new(["a", "b"]).unwrap();
        assert_eq!(s.parse_word("abba").unwrap(), vec![0, 1, 1, 0]);
        assert_eq!(s.parse_word("a, b").unwrap(), vec![0, 1]);
        assert_eq!(s.parse_word("").unwrap(), Vec::<usize>::new());
        assert_eq!(s.format_word(&[1, 0]), "ba");
        let long = Scale::new(["up", "down"]).unwrap();
        assert_eq!(long.parse_word("down,up").unwrap(), vec![1, 0]);
        assert_eq!(long.format_word(&[1, 0]), "down,up");
        assert!(s.parse_word("abc").is_err());
    }

    #[test]
    fn lexicographic_enumeration() {
        let words = all_words(2, 3);
        assert_eq!(words.len(), 8);
        assert_eq!(words[0], vec![0, 0, 0]);
        assert_eq!(words[1], vec![0, 0, 1]);
        assert_eq!(words[7], vec![1, 1, 1]);
        assert_eq!(all_words(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(words_up_to(2, 2).len(), 7);
    }

    #[test]
    fn prefix_states_are_consistent() {
        // state = the word itself, rebuilt through step
        for_each_word(
            3,
            4,
            Vec::new(),
            |s: &Vec<usize>, a| {
                let mut s = s.clone();
                s.push(a);
                s
            },
            |w, s| assert_eq!(w, s.as_slice()),
        );
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(check_enumeration(2, 10, 1_000_000).unwrap(), 1024);
        assert!(matches!(
            check_enumeration(10, 7, 1_000_000),
            Err(Error::EnumerationCap {
                count: 10_000_000,
                ..
            })
        ));
    }

    #[test]
    fn product_scale() {
        let pm = Scale::new(["-1", "+1"]).unwrap();
        let p = Scale::product(&[&pm, &pm]).unwrap();
        assert_eq!(p.symbols(), ["(-1,-1)", "(-1,+1)", "(+1,-1)", "(+1,+1)"]);
    }
}
