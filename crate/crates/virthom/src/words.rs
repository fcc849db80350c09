//! Free-group word algebra: reduction, composition, inversion, enumeration.
//!
//! A [`Word`] is always stored freely reduced; raw letter sequences exist
//! only transiently on their way through [`Word::reduce`]. All operations
//! that combine words check that both sides share the same alphabet rank.

use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("alphabet must have at least one generator")]
    EmptyAlphabet,
    #[error("duplicate generator name `{0}`")]
    DuplicateName(String),
    #[error("generator index {gen} out of range for rank {rank}")]
    GeneratorOutOfRange { gen: usize, rank: usize },
    #[error("letter exponent must be +1 or -1, got {0}")]
    BadExponent(i8),
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("cannot parse word token `{0}`")]
    ParseToken(String),
}

/// The free generating set `S`: an ordered list of distinct generator names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new<I: IntoIterator<Item = S>, S: Into<String>>(names: I) -> Result<Self, WordError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(WordError::EmptyAlphabet);
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(WordError::DuplicateName(n.clone()));
            }
        }
        Ok(Alphabet { names })
    }

    /// Default names `a`, `b`, `c`, ... (then `g26`, `g27`, ... past `z`).
    pub fn of_size(size: usize) -> Result<Self, WordError> {
        let names = (0..size)
            .map(|i| {
                if i < 26 {
                    ((b'a' + i as u8) as char).to_string()
                } else {
                    format!("g{i}")
                }
            })
            .collect::<Vec<_>>();
        Alphabet::new(names)
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, gen: usize) -> &str {
        &self.names[gen]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// One symbol `s` or `s^-1` of a word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: usize,
    pub exp: i8,
}

impl Letter {
    pub fn new(gen: usize, exp: i8) -> Result<Self, WordError> {
        if exp != 1 && exp != -1 {
            return Err(WordError::BadExponent(exp));
        }
        Ok(Letter { gen, exp })
    }

    pub fn inverse(self) -> Letter {
        Letter {
            gen: self.gen,
            exp: -self.exp,
        }
    }

    fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.exp == -other.exp
    }

    /// Letter at a position of the fixed order `a, a^-1, b, b^-1, ...`.
    fn from_order_key(key: usize) -> Letter {
        Letter {
            gen: key / 2,
            exp: if key % 2 == 0 { 1 } else { -1 },
        }
    }
}

/// A freely reduced word over an alphabet of the stored rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty(rank: usize) -> Word {
        Word {
            rank,
            letters: Vec::new(),
        }
    }

    /// Single-letter word `s^exp`.
    pub fn letter(rank: usize, gen: usize, exp: i8) -> Result<Word, WordError> {
        let l = Letter::new(gen, exp)?;
        if gen >= rank {
            return Err(WordError::GeneratorOutOfRange { gen, rank });
        }
        Ok(Word {
            rank,
            letters: vec![l],
        })
    }

    /// Free reduction of a raw letter sequence: the unique reduced form.
    pub fn reduce(rank: usize, raw: &[Letter]) -> Result<Word, WordError> {
        let mut letters: Vec<Letter> = Vec::with_capacity(raw.len());
        for &l in raw {
            if l.exp != 1 && l.exp != -1 {
                return Err(WordError::BadExponent(l.exp));
            }
            if l.gen >= rank {
                return Err(WordError::GeneratorOutOfRange { gen: l.gen, rank });
            }
            match letters.last() {
                Some(&top) if top.cancels(l) => {
                    letters.pop();
                }
                _ => letters.push(l),
            }
        }
        Ok(Word { rank, letters })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Reduced product `self . other`.
    pub fn concat(&self, other: &Word) -> Result<Word, WordError> {
        if self.rank != other.rank {
            return Err(WordError::RankMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        let mut letters = self.letters.clone();
        for &l in &other.letters {
            match letters.last() {
                Some(&top) if top.cancels(l) => {
                    letters.pop();
                }
                _ => letters.push(l),
            }
        }
        Ok(Word {
            rank: self.rank,
            letters,
        })
    }

    /// Letters reversed, exponents negated: `concat(w, w.invert())` is empty.
    pub fn invert(&self) -> Word {
        Word {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// `self` raised to an integer power (negative powers invert first).
    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.invert() } else { self.clone() };
        let mut acc = Word::empty(self.rank);
        for _ in 0..n.unsigned_abs() {
            acc = acc.concat(&base).expect("same rank");
        }
        acc
    }

    /// Renders over generator names, e.g. `a b^-1 a`; the empty word is `1`.
    pub fn format(&self, alphabet: &Alphabet) -> String {
        if self.letters.is_empty() {
            return "1".to_string();
        }
        let mut out = String::new();
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(alphabet.name(l.gen));
            if l.exp < 0 {
                let _ = write!(out, "^-1");
            }
        }
        out
    }

    /// Parses the format produced by [`Word::format`]; `1` is the empty word.
    pub fn parse(alphabet: &Alphabet, input: &str) -> Result<Word, WordError> {
        let mut raw = Vec::new();
        for token in input.split_whitespace() {
            if token == "1" {
                continue;
            }
            let (name, exp) = match token.strip_suffix("^-1") {
                Some(base) => (base, -1),
                None => match token.strip_suffix("^1") {
                    Some(base) => (base, 1),
                    None => (token, 1),
                },
            };
            let gen = alphabet
                .index_of(name)
                .ok_or_else(|| WordError::ParseToken(token.to_string()))?;
            raw.push(Letter { gen, exp });
        }
        Word::reduce(alphabet.size(), &raw)
    }
}

/// All freely reduced words of length at most `max_len`, in shortlex order
/// (by length, then lexicographically in the order `a, a^-1, b, b^-1, ...`).
pub fn enumerate_words(rank: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty(rank)];
    let mut frontier: Vec<Word> = vec![Word::empty(rank)];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(frontier.len() * 2 * rank);
        for w in &frontier {
            for key in 0..2 * rank {
                let l = Letter::from_order_key(key);
                if w.letters.last().is_some_and(|&top| top.cancels(l)) {
                    continue;
                }
                let mut letters = w.letters.clone();
                letters.push(l);
                next.push(Word { rank, letters });
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Number of freely reduced words of length at most `max_len`.
pub fn reduced_word_count(rank: usize, max_len: usize) -> u128 {
    let mut total: u128 = 1;
    let mut layer: u128 = 1;
    for len in 1..=max_len {
        layer *= if len == 1 {
            2 * rank as u128
        } else {
            2 * rank as u128 - 1
        };
        total += layer;
    }
    total
}

/// Depth-first visit of every reduced word of length at most `max_len`.
///
/// `f` receives the current reduced letter sequence; visiting order is
/// depth-first (not shortlex), which keeps the walk allocation-free.
pub fn for_each_reduced_word<F: FnMut(&[Letter])>(rank: usize, max_len: usize, mut f: F) {
    let mut stack: Vec<Letter> = Vec::with_capacity(max_len);
    f(&stack);
    if max_len == 0 {
        return;
    }
    // Iterative DFS: `cursor[d]` is the next letter key to try at depth d.
    let mut cursor = vec![0usize; max_len + 1];
    loop {
        let depth = stack.len();
        let mut advanced = false;
        while cursor[depth] < 2 * rank {
            let l = Letter::from_order_key(cursor[depth]);
            cursor[depth] += 1;
            if stack.last().is_some_and(|&top| top.cancels(l)) {
                continue;
            }
            stack.push(l);
            f(&stack);
            if stack.len() < max_len {
                cursor[stack.len()] = 0;
            } else {
                stack.pop();
                continue;
            }
            advanced = true;
            break;
        }
        if !advanced {
            if stack.pop().is_none() {
                return;
            }
        }
    }
}
