use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A word over `{a, b}` stored as its a-runs.
///
/// `runs = [e0, e1, ..., eg]` denotes `a^e0 b a^e1 b ... b a^eg`, so the
/// number of `b`s is `runs.len() - 1`. The empty word is `[0]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Word {
    runs: Vec<u32>,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid word {text:?}: unexpected character {ch:?}")]
pub struct WordParseError {
    pub text: String,
    pub ch: char,
}

impl Word {
    pub fn empty() -> Self {
        Word { runs: vec![0] }
    }

    /// `a^e`.
    pub fn a_pow(e: u32) -> Self {
        Word { runs: vec![e] }
    }

    /// The single letter `b`.
    pub fn b() -> Self {
        Word { runs: vec![0, 0] }
    }

    /// Builds a word from its a-runs. Panics on an empty run vector.
    pub fn from_runs(runs: impl Into<Vec<u32>>) -> Self {
        let runs = runs.into();
        assert!(!runs.is_empty(), "a word has at least one a-run");
        Word { runs }
    }

    pub fn runs(&self) -> &[u32] {
        &self.runs
    }

    pub fn is_empty(&self) -> bool {
        self.runs.len() == 1 && self.runs[0] == 0
    }

    pub fn b_count(&self) -> usize {
        self.runs.len() - 1
    }

    pub fn a_count(&self) -> u64 {
        self.runs.iter().map(|&e| u64::from(e)).sum()
    }

    pub fn len(&self) -> u64 {
        self.a_count() + self.b_count() as u64
    }

    pub fn first_run(&self) -> u32 {
        self.runs[0]
    }

    pub fn last_run(&self) -> u32 {
        *self.runs.last().unwrap()
    }

    /// Returns `true` when the word lies in `a*`.
    pub fn is_a_power(&self) -> bool {
        self.runs.len() == 1
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut runs = Vec::with_capacity(self.runs.len() + other.runs.len() - 1);
        runs.extend_from_slice(&self.runs);
        *runs.last_mut().unwrap() += other.runs[0];
        runs.extend_from_slice(&other.runs[1..]);
        Word { runs }
    }

    pub fn reversed(&self) -> Word {
        let mut runs = self.runs.clone();
        runs.reverse();
        Word { runs }
    }

    /// Splits `x b a^j` into `(x, j)`; `None` for words in `a*`.
    pub fn split_last_b(&self) -> Option<(Word, u32)> {
        if self.runs.len() < 2 {
            return None;
        }
        let (head, last) = self.runs.split_at(self.runs.len() - 1);
        Some((
            Word {
                runs: head.to_vec(),
            },
            last[0],
        ))
    }

    /// Splits `a^m b s` into `(m, s)`; `None` for words in `a*`.
    pub fn split_first_b(&self) -> Option<(u32, Word)> {
        if self.runs.len() < 2 {
            return None;
        }
        Some((
            self.runs[0],
            Word {
                runs: self.runs[1..].to_vec(),
            },
        ))
    }

    /// Multiplies on the left by `a^e`.
    pub fn a_prefixed(&self, e: u32) -> Word {
        let mut runs = self.runs.clone();
        runs[0] += e;
        Word { runs }
    }

    /// Multiplies on the right by `a^e`.
    pub fn a_suffixed(&self, e: u32) -> Word {
        let mut runs = self.runs.clone();
        *runs.last_mut().unwrap() += e;
        Word { runs }
    }

    /// Spells the word out as bytes `b'a'` / `b'b'`.
    pub fn letters(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.len() as usize);
        for (idx, &e) in self.runs.iter().enumerate() {
            if idx > 0 {
                out.push(b'b');
            }
            out.extend(std::iter::repeat_n(b'a', e as usize));
        }
        out
    }

    pub fn from_letters(letters: &[u8]) -> Option<Word> {
        let mut runs = vec![0u32];
        for &c in letters {
            match c {
                b'a' => *runs.last_mut().unwrap() += 1,
                b'b' => runs.push(0),
                _ => return None,
            }
        }
        Some(Word { runs })
    }

    /// Exponent notation, e.g. `a^2ba^3`, `b`, `1`.
    pub fn to_pretty(&self) -> String {
        if self.is_empty() {
            return "1".to_string();
        }
        let mut out = String::new();
        for (idx, &e) in self.runs.iter().enumerate() {
            if idx > 0 {
                out.push('b');
            }
            match e {
                0 => {}
                1 => out.push('a'),
                _ => {
                    out.push_str("a^");
                    out.push_str(&e.to_string());
                }
            }
        }
        out
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.b_count().cmp(&other.b_count()))
            .then_with(|| self.runs.cmp(&other.runs))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("1");
        }
        // letters() only ever yields ASCII
        f.write_str(std::str::from_utf8(&self.letters()).unwrap())
    }
}

impl FromStr for Word {
    type Err = WordParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "1" || s.is_empty() {
            return Ok(Word::empty());
        }
        if let Some(ch) = s.chars().find(|c| *c != 'a' && *c != 'b') {
            return Err(WordParseError {
                text: s.to_string(),
                ch,
            });
        }
        Ok(Word::from_letters(s.as_bytes()).unwrap())
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
