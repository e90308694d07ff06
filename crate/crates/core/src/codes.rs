//! Finite sets of words: unique decipherability, Kraft sums, maximality,
//! and codes read off a factorization pair.

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ncpoly::{NcPoly, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodeError {
    #[error("a code cannot contain the empty word")]
    EmptyWord,
    #[error("invalid word {0:?}")]
    InvalidWord(String),
    #[error("duplicate word {0}")]
    Duplicate(String),
    #[error("word {word} has coefficient {coeff}, expected 0 or 1")]
    NonCharacteristic { word: String, coeff: BigInt },
    #[error("P(A-1)S + 1 contains the empty word")]
    EmptyWordPresent,
}

/// A finite set of nonempty words.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CodeSpec {
    words: BTreeSet<Word>,
}

impl CodeSpec {
    pub fn new<I: IntoIterator<Item = Word>>(words: I) -> Result<Self, CodeError> {
        let mut set = BTreeSet::new();
        for w in words {
            if w.is_empty() {
                return Err(CodeError::EmptyWord);
            }
            if let Some(dup) = set.replace(w) {
                return Err(CodeError::Duplicate(dup.to_string()));
            }
        }
        Ok(CodeSpec { words: set })
    }

    /// Parses words given in letter form (`"aab"`).
    pub fn parse<'a, I: IntoIterator<Item = &'a str>>(words: I) -> Result<Self, CodeError> {
        let mut parsed = Vec::new();
        for text in words {
            let w: Word = text
                .parse()
                .map_err(|_| CodeError::InvalidWord(text.to_string()))?;
            parsed.push(w);
        }
        Self::new(parsed)
    }

    pub fn words(&self) -> &BTreeSet<Word> {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.contains(w)
    }

    /// `C_r`: the words with exactly `r` letters `b`.
    pub fn layer(&self, r: usize) -> impl Iterator<Item = &Word> + '_ {
        self.words.iter().filter(move |w| w.b_count() == r)
    }

    pub fn reversal(&self) -> Self {
        CodeSpec {
            words: self.words.iter().map(Word::reversed).collect(),
        }
    }

    pub fn characteristic(&self) -> NcPoly {
        NcPoly::from_words(&self.words)
    }

    /// Largest number of `b`s in a word; `None` for the empty set.
    pub fn b_degree(&self) -> Option<usize> {
        self.words.iter().map(Word::b_count).max()
    }
}

#[derive(Serialize, Deserialize)]
struct CodeRepr {
    words: Vec<String>,
}

impl Serialize for CodeSpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        CodeRepr {
            words: self.words.iter().map(Word::to_string).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CodeSpec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = CodeRepr::deserialize(deserializer)?;
        let mut words = Vec::with_capacity(repr.words.len());
        for text in &repr.words {
            words.push(text.parse::<Word>().map_err(serde::de::Error::custom)?);
        }
        CodeSpec::new(words).map_err(serde::de::Error::custom)
    }
}

/// One word with two distinct factorizations into codewords.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ambiguity {
    pub word: String,
    pub left: Vec<String>,
    pub right: Vec<String>,
}

impl Ambiguity {
    /// Both sides concatenate to `word`, use only codewords, and differ.
    pub fn is_valid_for(&self, code: &CodeSpec) -> bool {
        let member = |s: &String| s.parse::<Word>().is_ok_and(|w| code.contains(&w));
        self.left != self.right
            && self.left.iter().all(member)
            && self.right.iter().all(member)
            && self.left.concat() == self.word
            && self.right.concat() == self.word
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeVerdict {
    pub is_code: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Ambiguity>,
}

#[derive(Default)]
struct Trie {
    children: Vec<[u32; 2]>,
    terminal: Vec<Option<u32>>,
}

const NONE: u32 = u32::MAX;

impl Trie {
    fn build(words: &[Vec<u8>]) -> Self {
        let mut t = Trie {
            children: vec![[NONE; 2]],
            terminal: vec![None],
        };
        for (idx, w) in words.iter().enumerate() {
            let mut node = 0usize;
            for &c in w {
                let slot = (c - b'a') as usize;
                if t.children[node][slot] == NONE {
                    t.children[node][slot] = t.children.len() as u32;
                    t.children.push([NONE; 2]);
                    t.terminal.push(None);
                }
                node = t.children[node][slot] as usize;
            }
            t.terminal[node] = Some(idx as u32);
        }
        t
    }

    /// Codewords that are prefixes of `s` (including `s` itself).
    fn prefixes_of(&self, s: &[u8], out: &mut Vec<u32>) {
        let mut node = 0usize;
        for &c in s {
            node = match self.children[node][(c - b'a') as usize] {
                NONE => return,
                next => next as usize,
            };
            if let Some(idx) = self.terminal[node] {
                out.push(idx);
            }
        }
    }

    /// Codewords having `s` as a proper prefix.
    fn extensions_of(&self, s: &[u8], out: &mut Vec<u32>) {
        let mut node = 0usize;
        for &c in s {
            node = match self.children[node][(c - b'a') as usize] {
                NONE => return,
                next => next as usize,
            };
        }
        let mut stack: Vec<usize> = self.children[node]
            .iter()
            .filter(|&&c| c != NONE)
            .map(|&c| c as usize)
            .collect();
        while let Some(v) = stack.pop() {
            if let Some(idx) = self.terminal[v] {
                out.push(idx);
            }
            stack.extend(
                self.children[v]
                    .iter()
                    .filter(|&&c| c != NONE)
                    .map(|&c| c as usize),
            );
        }
    }
}

struct Node {
    parent: Option<usize>,
    word: u32,
    suffix: Vec<u8>,
}

/// Sardinas–Patterson test. Dangling suffixes are explored breadth first,
/// each remembering the codeword that produced it, so a failure comes with
/// a certified double factorization.
pub fn sardinas_patterson(code: &CodeSpec) -> CodeVerdict {
    let words: Vec<Vec<u8>> = code.words.iter().map(Word::letters).collect();
    let trie = Trie::build(&words);
    let mut nodes: Vec<Node> = Vec::new();
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut queue = VecDeque::new();
    let mut scratch = Vec::new();

    // Roots: u a proper prefix of v gives the dangling suffix v = u d.
    for (ui, u) in words.iter().enumerate() {
        scratch.clear();
        trie.extensions_of(u, &mut scratch);
        for &vi in &scratch {
            let d = words[vi as usize][u.len()..].to_vec();
            if !seen.contains(&d) {
                let root = nodes.len();
                nodes.push(Node {
                    parent: None,
                    word: ui as u32,
                    suffix: d.clone(),
                });
                nodes.push(Node {
                    parent: Some(root),
                    word: vi,
                    suffix: d.clone(),
                });
                seen.insert(d);
                queue.push_back(root + 1);
            }
        }
    }

    while let Some(at) = queue.pop_front() {
        let d = nodes[at].suffix.clone();
        scratch.clear();
        trie.prefixes_of(&d, &mut scratch);
        trie.extensions_of(&d, &mut scratch);
        for &ci in &scratch {
            let c = &words[ci as usize];
            let next: Vec<u8> = if c.len() <= d.len() {
                d[c.len()..].to_vec()
            } else {
                c[d.len()..].to_vec()
            };
            if next.is_empty() {
                nodes.push(Node {
                    parent: Some(at),
                    word: ci,
                    suffix: next,
                });
                let witness = rebuild(&nodes, nodes.len() - 1, &words);
                debug_assert!(witness.is_valid_for(code));
                return CodeVerdict {
                    is_code: false,
                    witness: Some(witness),
                };
            }
            if !seen.contains(&next) {
                nodes.push(Node {
                    parent: Some(at),
                    word: ci,
                    suffix: next.clone(),
                });
                seen.insert(next);
                queue.push_back(nodes.len() - 1);
            }
        }
    }
    CodeVerdict {
        is_code: true,
        witness: None,
    }
}

// Replays the chain of appended codewords; each one goes to the side that
// is currently shorter.
fn rebuild(nodes: &[Node], leaf: usize, words: &[Vec<u8>]) -> Ambiguity {
    let mut chain = Vec::new();
    let mut cur = Some(leaf);
    while let Some(i) = cur {
        chain.push(nodes[i].word as usize);
        cur = nodes[i].parent;
    }
    chain.reverse();
    let mut left: Vec<usize> = vec![chain[0]];
    let mut right: Vec<usize> = Vec::new();
    let (mut left_len, mut right_len) = (words[chain[0]].len(), 0usize);
    for &c in &chain[1..] {
        if right_len < left_len {
            right.push(c);
            right_len += words[c].len();
        } else {
            left.push(c);
            left_len += words[c].len();
        }
    }
    let show = |v: &[usize]| {
        v.iter()
            .map(|&i| String::from_utf8(words[i].clone()).unwrap())
            .collect::<Vec<_>>()
    };
    let left = show(&left);
    let right = show(&right);
    Ambiguity {
        word: left.concat(),
        left,
        right,
    }
}

pub fn is_code(code: &CodeSpec) -> bool {
    sardinas_patterson(code).is_code
}

/// `sum over w in C of 2^(-|w|)`, exactly.
pub fn kraft_sum(code: &CodeSpec) -> BigRational {
    let mut total = BigRational::zero();
    for w in &code.words {
        let denom = BigInt::one() << (w.len() as usize);
        total += BigRational::new(BigInt::one(), denom);
    }
    total
}

/// A finite code is maximal exactly when its Kraft sum is 1.
pub fn is_maximal_code(code: &CodeSpec) -> bool {
    kraft_sum(code).is_one() && is_code(code)
}

/// `P(A - 1)S + 1`.
pub fn code_polynomial(p: &NcPoly, s: &NcPoly) -> NcPoly {
    let mut out = &(p * &NcPoly::alphabet_minus_one()) * s;
    out += &NcPoly::one();
    out
}

/// The set whose characteristic polynomial is `P(A - 1)S + 1`.
pub fn code_from_factorization(p: &NcPoly, s: &NcPoly) -> Result<CodeSpec, CodeError> {
    code_from_polynomial(&code_polynomial(p, s))
}

/// Support of a characteristic polynomial without constant term.
pub fn code_from_polynomial(c: &NcPoly) -> Result<CodeSpec, CodeError> {
    if let Some((w, coeff)) = c.first_non_characteristic() {
        return Err(CodeError::NonCharacteristic {
            word: w.to_pretty(),
            coeff: coeff.clone(),
        });
    }
    if c.contains(&Word::empty()) {
        return Err(CodeError::EmptyWordPresent);
    }
    Ok(CodeSpec {
        words: c.support().cloned().collect(),
    })
}
