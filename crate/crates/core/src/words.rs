//! Square-free and anagram-free (abelian-square-free) words.
//!
//! Symbols are 0-based integers; letters (`a`, `b`, ...) only appear when a
//! word is rendered or parsed as text.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

pub type Symbol = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("symbol {symbol} is outside the alphabet of size {alphabet_size}")]
    SymbolOutOfRange { symbol: Symbol, alphabet_size: u32 },
    #[error("alphabet size must be positive")]
    EmptyAlphabet,
    #[error("letter {0:?} is not in a..z")]
    InvalidLetter(char),
    #[error("exhaustive search is only supported for alphabets of size 1..=3, got {0}")]
    UnsupportedAlphabet(u32),
}

/// A finite word over the alphabet `{0, .., alphabet_size - 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    symbols: Vec<Symbol>,
    alphabet_size: u32,
}

impl Word {
    pub fn new(symbols: Vec<Symbol>, alphabet_size: u32) -> Result<Self, WordError> {
        if alphabet_size == 0 {
            return Err(WordError::EmptyAlphabet);
        }
        if let Some(&symbol) = symbols.iter().find(|&&s| s >= alphabet_size) {
            return Err(WordError::SymbolOutOfRange { symbol, alphabet_size });
        }
        Ok(Self { symbols, alphabet_size })
    }

    pub fn empty(alphabet_size: u32) -> Result<Self, WordError> {
        Self::new(Vec::new(), alphabet_size)
    }

    /// Parses `"abca"`-style text. The alphabet is the smallest one covering
    /// the letters used (at least one symbol).
    pub fn from_letters(text: &str) -> Result<Self, WordError> {
        let symbols = text
            .chars()
            .map(|c| {
                if c.is_ascii_lowercase() {
                    Ok(c as Symbol - 'a' as Symbol)
                } else {
                    Err(WordError::InvalidLetter(c))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        let alphabet_size = symbols.iter().max().map_or(1, |&m| m + 1);
        Self::new(symbols, alphabet_size)
    }

    pub fn with_alphabet(self, alphabet_size: u32) -> Result<Self, WordError> {
        Self::new(self.symbols, alphabet_size)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.symbols
    }

    pub fn alphabet_size(&self) -> u32 {
        self.alphabet_size
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Renders symbols as `a`, `b`, ... (symbols past `z` render as `?`).
    pub fn to_letters(&self) -> String {
        self.symbols
            .iter()
            .map(|&s| char::from_u32('a' as u32 + s).filter(char::is_ascii_lowercase).unwrap_or('?'))
            .collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_letters())
    }
}

/// Count-wise multiset of symbols (or colours). Zero counts are never stored,
/// so derived equality is multiset equality.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColourMultiset {
    counts: BTreeMap<Symbol, usize>,
}

impl ColourMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, symbol: Symbol) {
        *self.counts.entry(symbol).or_insert(0) += 1;
    }

    pub fn count(&self, symbol: Symbol) -> usize {
        self.counts.get(&symbol).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn counts(&self) -> &BTreeMap<Symbol, usize> {
        &self.counts
    }
}

impl FromIterator<Symbol> for ColourMultiset {
    fn from_iter<I: IntoIterator<Item = Symbol>>(iter: I) -> Self {
        let mut m = Self::new();
        for s in iter {
            m.insert(s);
        }
        m
    }
}

/// True iff `seq` has even, non-zero length and its halves share a multiset.
pub fn halves_match(seq: &[Symbol]) -> bool {
    if seq.is_empty() || seq.len() % 2 != 0 {
        return false;
    }
    let (left, right) = seq.split_at(seq.len() / 2);
    left.iter().copied().collect::<ColourMultiset>() == right.iter().copied().collect::<ColourMultiset>()
}

/// Signed per-symbol balance between the two halves of a window, with the
/// number of unbalanced symbols kept alongside so emptiness checks are O(1).
#[derive(Debug, Clone)]
pub(crate) struct HalfBalance {
    diff: Vec<i64>,
    unbalanced: usize,
}

impl HalfBalance {
    pub(crate) fn new(width: usize) -> Self {
        Self { diff: vec![0; width], unbalanced: 0 }
    }

    #[inline]
    pub(crate) fn add(&mut self, symbol: Symbol, delta: i64) {
        let slot = &mut self.diff[symbol as usize];
        let before = *slot;
        *slot += delta;
        match (before == 0, *slot == 0) {
            (true, false) => self.unbalanced += 1,
            (false, true) => self.unbalanced -= 1,
            _ => {}
        }
    }

    #[inline]
    pub(crate) fn balanced(&self) -> bool {
        self.unbalanced == 0
    }

    pub(crate) fn clear(&mut self) {
        self.diff.iter_mut().for_each(|d| *d = 0);
        self.unbalanced = 0;
    }
}

fn symbol_width(seq: &[Symbol]) -> usize {
    seq.iter().max().map_or(0, |&m| m as usize + 1)
}

/// First `(start, length)` (by start, then length) of an even factor whose
/// halves share a multiset. O(n²) using a rolling balance per half-length.
pub fn first_abelian_square(seq: &[Symbol]) -> Option<(usize, usize)> {
    let n = seq.len();
    let mut balance = HalfBalance::new(symbol_width(seq));
    let mut best: Option<(usize, usize)> = None;
    for half in 1..=n / 2 {
        let len = 2 * half;
        let end = (n - len + 1).min(best.map_or(usize::MAX, |(s, _)| s));
        if end == 0 {
            break;
        }
        balance.clear();
        for &s in &seq[..half] {
            balance.add(s, 1);
        }
        for &s in &seq[half..len] {
            balance.add(s, -1);
        }
        for start in 0..end {
            if balance.balanced() {
                best = Some((start, len));
                break;
            }
            if start + 1 < end {
                balance.add(seq[start], -1);
                balance.add(seq[start + half], 2);
                balance.add(seq[start + len], -1);
            }
        }
    }
    best
}

/// First `(start, length)` of a factor of the form `uu` with `u` non-empty.
pub fn first_square(seq: &[Symbol]) -> Option<(usize, usize)> {
    let n = seq.len();
    let mut best: Option<(usize, usize)> = None;
    for period in 1..=n / 2 {
        let mut run = 0;
        for i in 0..n - period {
            if seq[i] == seq[i + period] {
                run += 1;
            } else {
                run = 0;
            }
            if run >= period {
                let start = i + 1 - period;
                if best.map_or(true, |(s, _)| start < s) {
                    best = Some((start, 2 * period));
                }
                break;
            }
            if best.is_some_and(|(s, _)| i >= s + period) {
                break;
            }
        }
    }
    best
}

pub fn is_anagram(w: &Word) -> bool {
    halves_match(w.symbols())
}

pub fn find_abelian_square(w: &Word) -> Option<(usize, usize)> {
    first_abelian_square(w.symbols())
}

pub fn find_square(w: &Word) -> Option<(usize, usize)> {
    first_square(w.symbols())
}

/// Keeps the positions of `w` whose symbol is in `keep`, in order.
pub fn restrict(w: &Word, keep: &[Symbol]) -> Word {
    Word {
        symbols: w.symbols.iter().copied().filter(|s| keep.contains(s)).collect(),
        alphabet_size: w.alphabet_size,
    }
}

fn iterate_morphism<F>(len: usize, image: F, image_len: usize) -> Vec<Symbol>
where
    F: Fn(Symbol) -> Vec<Symbol>,
{
    let mut w = vec![0];
    while w.len() < len {
        // Each round maps a prefix of the fixed point to a longer prefix.
        let need = len.div_ceil(image_len).min(w.len());
        w = w[..need].iter().flat_map(|&s| image(s)).collect();
    }
    w.truncate(len);
    w
}

/// Prefix of the ternary square-free Thue word, the fixed point of
/// `0 -> 012, 1 -> 02, 2 -> 1`.
pub fn thue_word(len: usize) -> Word {
    let image = |s: Symbol| match s {
        0 => vec![0, 1, 2],
        1 => vec![0, 2],
        _ => vec![1],
    };
    Word { symbols: iterate_morphism(len, image, 1), alphabet_size: 3 }
}

/// Image of `a` under Keränen's 85-uniform abelian-square-free morphism on
/// four letters. The image of letter `i` is this word with every letter
/// shifted cyclically by `i`.
pub const KERANEN_IMAGE_A: &str = "abcacdcbcdcadcdbdabacabadbabcbdbcbacbcdcacb\
abdabacadcbcdcacdbcbacbcdcacdcbdcdadbdcbca";

pub const KERANEN_IMAGE_LEN: usize = 85;

fn keranen_image(letter: Symbol) -> Vec<Symbol> {
    KERANEN_IMAGE_A.bytes().map(|b| (Symbol::from(b - b'a') + letter) % 4).collect()
}

/// Length-`len` prefix of the fixed point of Keränen's morphism starting at `a`.
/// The result is abelian-square-free and identical on every call.
pub fn keranen_word(len: usize) -> Word {
    Word { symbols: iterate_morphism(len, keranen_image, KERANEN_IMAGE_LEN), alphabet_size: 4 }
}

/// Exhaustive depth-first search for the longest anagram-free word over an
/// alphabet of size 1, 2 or 3. Returns the maximum length and the
/// lexicographically first word attaining it.
pub fn longest_anagram_free(alphabet_size: u32) -> Result<(usize, Word), WordError> {
    if !(1..=3).contains(&alphabet_size) {
        return Err(WordError::UnsupportedAlphabet(alphabet_size));
    }
    fn extend(prefix: &mut Vec<Symbol>, alphabet: u32, best: &mut Vec<Symbol>) {
        if prefix.len() > best.len() {
            best.clone_from(prefix);
        }
        for s in 0..alphabet {
            prefix.push(s);
            let n = prefix.len();
            let fresh_anagram = (1..=n / 2).any(|half| halves_match(&prefix[n - 2 * half..]));
            if !fresh_anagram {
                extend(prefix, alphabet, best);
            }
            prefix.pop();
        }
    }
    let mut best = Vec::new();
    extend(&mut Vec::new(), alphabet_size, &mut best);
    let len = best.len();
    Ok((len, Word::new(best, alphabet_size)?))
}

/// Minimum and maximum number of occurrences of `symbol` over all factors of
/// length `window`, or `None` when the word is shorter than the window.
pub fn occurrence_range(seq: &[Symbol], symbol: Symbol, window: usize) -> Option<(usize, usize)> {
    if window == 0 || seq.len() < window {
        return None;
    }
    let mut count = seq[..window].iter().filter(|&&s| s == symbol).count();
    let (mut lo, mut hi) = (count, count);
    for i in window..seq.len() {
        count += usize::from(seq[i] == symbol);
        count -= usize::from(seq[i - window] == symbol);
        lo = lo.min(count);
        hi = hi.max(count);
    }
    Some((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(text: &str) -> Word {
        Word::from_letters(text).unwrap()
    }

    #[test]
    fn anagram_examples() {
        assert!(is_anagram(&w("abba")));
        assert!(!is_anagram(&w("aabb")));
        assert!(!is_anagram(&w("abc")));
        assert!(!is_anagram(&w("")));
    }

    #[test]
    fn abelian_square_examples() {
        assert_eq!(find_abelian_square(&w("abcd")), None);
        assert_eq!(find_abelian_square(&w("abab")), Some((0, 4)));
        assert_eq!(find_abelian_square(&w("aa")), Some((0, 2)));
        // earliest start wins over shorter length
        assert_eq!(find_abelian_square(&w("abcacbxx")), Some((0, 6)));
        assert_eq!(find_abelian_square(&w("cabcbb")), Some((4, 2)));
    }

    #[test]
    fn square_examples() {
        assert_eq!(find_square(&w("abcabc")), Some((0, 6)));
        assert_eq!(find_square(&w("abcacb")), None);
        assert_eq!(find_square(&w("")), None);
        assert_eq!(find_square(&w("abcbc")), Some((1, 4)));
        assert_eq!(find_square(&w("abcdcbcb")), Some((4, 4)));
    }

    #[test]
    fn thue_prefixes() {
        assert!(thue_word(0).is_empty());
        let four = thue_word(4);
        assert_eq!(four.len(), 4);
        assert_eq!(four.alphabet_size(), 3);
        assert_eq!(find_square(&four), None);
        assert_eq!(thue_word(12).to_letters(), "abcacbabcbac");
        assert_eq!(find_square(&thue_word(1000)), None);
    }

    #[test]
    fn keranen_prefixes() {
        assert!(keranen_word(0).is_empty());
        let image = keranen_word(85);
        assert_eq!(image.to_letters(), KERANEN_IMAGE_A);
        assert_eq!(find_abelian_square(&image), None);
        // the second block is the image of the second letter of the image of `a`
        let two = keranen_word(170);
        let shifted: Vec<Symbol> = image.symbols().iter().map(|s| (s + 1) % 4).collect();
        assert_eq!(&two.symbols()[85..], shifted.as_slice());
        assert_eq!(keranen_word(500), keranen_word(500));
    }

    #[test]
    fn restrict_examples() {
        let acbc = w("acbc");
        assert_eq!(restrict(&acbc, &[0, 1]).to_letters(), "ab");
        assert_eq!(restrict(&acbc, &[0, 1, 2]), acbc);
        assert!(restrict(&acbc, &[]).is_empty());
    }

    #[test]
    fn longest_words() {
        let (len, witness) = longest_anagram_free(1).unwrap();
        assert_eq!((len, witness.to_letters().as_str()), (1, "a"));
        let (len, witness) = longest_anagram_free(2).unwrap();
        assert_eq!(len, 3);
        assert_eq!(find_abelian_square(&witness), None);
        let (len, witness) = longest_anagram_free(3).unwrap();
        assert_eq!(len, 7);
        assert_eq!(find_abelian_square(&witness), None);
        assert_eq!(longest_anagram_free(4), Err(WordError::UnsupportedAlphabet(4)));
        assert_eq!(longest_anagram_free(0), Err(WordError::UnsupportedAlphabet(0)));
    }

    #[test]
    fn word_validation() {
        assert!(matches!(Word::new(vec![0, 3], 3), Err(WordError::SymbolOutOfRange { symbol: 3, .. })));
        assert_eq!(Word::new(vec![], 0), Err(WordError::EmptyAlphabet));
        assert_eq!(Word::from_letters("aB"), Err(WordError::InvalidLetter('B')));
    }

    #[test]
    fn occurrence_window_counts() {
        let seq = [0, 1, 0, 2, 0];
        assert_eq!(occurrence_range(&seq, 0, 2), Some((1, 1)));
        assert_eq!(occurrence_range(&seq, 0, 3), Some((1, 2)));
        assert_eq!(occurrence_range(&seq, 0, 6), None);
    }
}
