//! Words over an ordered alphabet and the length-wise lexicographic order.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Ordered list of generator names. Position defines the total order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Alphabet {
    letters: Vec<String>,
    index: HashMap<String, usize>,
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Alphabet {
    pub fn new<I, S>(letters: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out = Alphabet::default();
        for l in letters {
            let l = l.into();
            if !is_identifier(&l) {
                return Err(Error::InvalidInput(format!("`{l}` is not a valid generator name")));
            }
            if out.index.contains_key(&l) {
                return Err(Error::DuplicateGenerator(l));
            }
            out.index.insert(l.clone(), out.letters.len());
            out.letters.push(l);
        }
        Ok(out)
    }

    /// Generators `prefix1 .. prefixN`.
    pub fn numbered(prefix: &str, n: usize) -> Self {
        Alphabet::new((1..=n).map(|i| format!("{prefix}{i}"))).expect("generated names are valid")
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.letters[i]
    }

    pub fn names(&self) -> &[String] {
        &self.letters
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Parses whitespace-separated identifiers into a word.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        text.split_whitespace()
            .map(|t| self.position(t).ok_or_else(|| Error::UnknownGenerator(t.to_string())))
            .collect::<Result<Vec<_>>>()
            .map(Word::from)
    }

    /// Whitespace-separated rendering; the empty word renders as `e`.
    pub fn render(&self, w: &Word) -> String {
        if w.is_empty() {
            return "e".to_string();
        }
        w.letters().iter().map(|&i| self.letters[i].as_str()).collect::<Vec<_>>().join(" ")
    }

    /// Concatenated rendering used for node labels.
    pub fn render_compact(&self, w: &Word) -> String {
        if w.is_empty() {
            return "e".to_string();
        }
        w.letters().iter().map(|&i| self.letters[i].as_str()).collect()
    }
}

/// A finite sequence of letter indices. The empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn push(&mut self, letter: usize) {
        self.0.push(letter);
    }

    pub fn first(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<usize> {
        self.0.last().copied()
    }

    /// Whether `factor` occurs as a consecutive subword.
    pub fn contains_factor(&self, factor: &Word) -> bool {
        if factor.is_empty() {
            return true;
        }
        self.0.windows(factor.len()).any(|w| w == factor.letters())
    }

    /// Index of this word in `F_k` under base-`m` numbering, first letter most
    /// significant. Numeric order coincides with the k-lexicographic order.
    pub fn encode(&self, m: usize) -> u64 {
        self.0.iter().fold(0u64, |acc, &l| acc * m as u64 + l as u64)
    }

    pub fn decode(mut code: u64, m: usize, len: usize) -> Word {
        let mut v = vec![0; len];
        for slot in v.iter_mut().rev() {
            *slot = (code % m as u64) as usize;
            code /= m as u64;
        }
        Word(v)
    }
}

impl From<Vec<usize>> for Word {
    fn from(v: Vec<usize>) -> Self {
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// Compares two words of equal length by the first differing letter.
pub fn klex_compare(a: &Word, b: &Word) -> Result<Ordering> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { expected: a.len(), got: b.len() });
    }
    Ok(a.letters().cmp(b.letters()))
}
