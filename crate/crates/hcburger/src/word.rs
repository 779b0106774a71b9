//! Letters, weights, words and the LIFO reduction.

use std::fmt;
use std::str::FromStr;

use crate::rng::Stream;

/// The two burger types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Burger {
    Ham,
    Cheese,
}

impl Burger {
    pub fn other(self) -> Burger {
        match self {
            Burger::Ham => Burger::Cheese,
            Burger::Cheese => Burger::Ham,
        }
    }

    /// `+1` for hamburgers, `-1` for cheeseburgers.
    pub fn sign(self) -> i64 {
        match self {
            Burger::Ham => 1,
            Burger::Cheese => -1,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Burger::Ham => 'h',
            Burger::Cheese => 'c',
        }
    }
}

/// One symbol of the inventory model.
///
/// `h`, `c` are burgers; `H`, `C` are orders for a specific type and `F` is
/// an order for the freshest burger of either type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum Letter {
    Ham = 0,
    Cheese = 1,
    HamOrder = 2,
    CheeseOrder = 3,
    Flexible = 4,
}

impl Letter {
    pub const ALL: [Letter; 5] = [
        Letter::Ham,
        Letter::Cheese,
        Letter::HamOrder,
        Letter::CheeseOrder,
        Letter::Flexible,
    ];

    #[inline]
    pub fn is_burger(self) -> bool {
        matches!(self, Letter::Ham | Letter::Cheese)
    }

    #[inline]
    pub fn is_order(self) -> bool {
        !self.is_burger()
    }

    /// The burger type of `h`, `c`, `H`, `C`; `None` for `F`.
    #[inline]
    pub fn burger(self) -> Option<Burger> {
        match self {
            Letter::Ham | Letter::HamOrder => Some(Burger::Ham),
            Letter::Cheese | Letter::CheeseOrder => Some(Burger::Cheese),
            Letter::Flexible => None,
        }
    }

    pub fn burger_of(b: Burger) -> Letter {
        match b {
            Burger::Ham => Letter::Ham,
            Burger::Cheese => Letter::Cheese,
        }
    }

    pub fn order_of(b: Burger) -> Letter {
        match b {
            Burger::Ham => Letter::HamOrder,
            Burger::Cheese => Letter::CheeseOrder,
        }
    }

    /// Exchange hamburgers and cheeseburgers.
    pub fn swapped(self) -> Letter {
        match self {
            Letter::Ham => Letter::Cheese,
            Letter::Cheese => Letter::Ham,
            Letter::HamOrder => Letter::CheeseOrder,
            Letter::CheeseOrder => Letter::HamOrder,
            Letter::Flexible => Letter::Flexible,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Letter::Ham => 'h',
            Letter::Cheese => 'c',
            Letter::HamOrder => 'H',
            Letter::CheeseOrder => 'C',
            Letter::Flexible => 'F',
        }
    }

    pub fn from_char(ch: char) -> Option<Letter> {
        Some(match ch {
            'h' => Letter::Ham,
            'c' => Letter::Cheese,
            'H' => Letter::HamOrder,
            'C' => Letter::CheeseOrder,
            'F' => Letter::Flexible,
            _ => return None,
        })
    }

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// Probabilities of the five letters for a given `p`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightTable {
    p: f64,
    w: [f64; 5],
}

#[derive(Debug, thiserror::Error, PartialEq)]
#[error("p must lie in [0, 1], got {0}")]
pub struct InvalidP(pub f64);

impl WeightTable {
    pub fn new(p: f64) -> Result<Self, InvalidP> {
        if !(0.0..=1.0).contains(&p) {
            return Err(InvalidP(p));
        }
        let q = (1.0 - p) / 4.0;
        Ok(WeightTable { p, w: [0.25, 0.25, q, q, p / 2.0] })
    }

    /// The critical case `p = 1/2`.
    pub fn critical() -> Self {
        WeightTable::new(0.5).unwrap()
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn weight(&self, l: Letter) -> f64 {
        self.w[l.index()]
    }

    pub fn is_critical(&self) -> bool {
        self.p == 0.5
    }
}

impl Default for WeightTable {
    fn default() -> Self {
        WeightTable::critical()
    }
}

/// Anything that hands out letters one at a time.
///
/// Random sources never run dry; finite ones return `None` at the end.
pub trait LetterSource {
    fn next_letter(&mut self) -> Option<Letter>;
}

/// I.i.d. letters drawn from a [`WeightTable`].
///
/// At `p = 1/2` every weight is a multiple of 1/8, so each letter costs three
/// random bits. Other values of `p` compare a 53-bit uniform with the
/// cumulative weights.
#[derive(Clone, Debug)]
pub struct RandomLetters {
    stream: Stream,
    cumulative: [f64; 4],
    fast: bool,
    bits: u64,
    left: u32,
}

// Three-bit codes at p = 1/2: two codes each for h, c and F, one for H and C.
const CRITICAL_CODE: [Letter; 8] = [
    Letter::Ham,
    Letter::Ham,
    Letter::Cheese,
    Letter::Cheese,
    Letter::HamOrder,
    Letter::CheeseOrder,
    Letter::Flexible,
    Letter::Flexible,
];

impl RandomLetters {
    pub fn new(weights: WeightTable, stream: Stream) -> Self {
        let w = weights.w;
        let cumulative = [w[0], w[0] + w[1], w[0] + w[1] + w[2], w[0] + w[1] + w[2] + w[3]];
        RandomLetters { stream, cumulative, fast: weights.is_critical(), bits: 0, left: 0 }
    }

    #[inline]
    pub fn draw(&mut self) -> Letter {
        if self.fast {
            if self.left == 0 {
                self.bits = self.stream.next_u64();
                self.left = 21;
            }
            let code = (self.bits & 7) as usize;
            self.bits >>= 3;
            self.left -= 1;
            CRITICAL_CODE[code]
        } else {
            let u = self.stream.uniform();
            let c = &self.cumulative;
            if u < c[0] {
                Letter::Ham
            } else if u < c[1] {
                Letter::Cheese
            } else if u < c[2] {
                Letter::HamOrder
            } else if u < c[3] {
                Letter::CheeseOrder
            } else {
                Letter::Flexible
            }
        }
    }
}

impl LetterSource for RandomLetters {
    #[inline]
    fn next_letter(&mut self) -> Option<Letter> {
        Some(self.draw())
    }
}

/// Reads a slice from left to right.
pub struct Forward<'a> {
    letters: &'a [Letter],
    pos: usize,
}

impl<'a> Forward<'a> {
    pub fn new(letters: &'a [Letter]) -> Self {
        Forward { letters, pos: 0 }
    }
}

impl LetterSource for Forward<'_> {
    fn next_letter(&mut self) -> Option<Letter> {
        let l = self.letters.get(self.pos).copied();
        self.pos += 1;
        l
    }
}

/// Reads a slice from right to left, i.e. X(-1), X(-2), ... when the slice
/// holds X(-k..-1).
pub struct Backward<'a> {
    letters: &'a [Letter],
    pos: usize,
}

impl<'a> Backward<'a> {
    pub fn new(letters: &'a [Letter]) -> Self {
        Backward { letters, pos: letters.len() }
    }
}

impl LetterSource for Backward<'_> {
    fn next_letter(&mut self) -> Option<Letter> {
        if self.pos == 0 {
            return None;
        }
        self.pos -= 1;
        Some(self.letters[self.pos])
    }
}

/// A finite word, stored one byte per letter.
///
/// `origin` is the index of the first letter in the bi-infinite sequence.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    pub letters: Vec<Letter>,
    pub origin: i64,
}

#[derive(Debug, thiserror::Error, PartialEq)]
#[error("invalid letter {ch:?} at offset {at}")]
pub struct ParseWordError {
    pub ch: char,
    pub at: usize,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word { letters, origin: 1 }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn count(&self, l: Letter) -> usize {
        self.letters.iter().filter(|&&x| x == l).count()
    }

    /// Product of the letter weights.
    pub fn weight(&self, weights: &WeightTable) -> f64 {
        self.letters.iter().map(|&l| weights.weight(l)).product()
    }
}

impl FromStr for Word {
    type Err = ParseWordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .enumerate()
            .map(|(at, ch)| Letter::from_char(ch).ok_or(ParseWordError { ch, at }))
            .collect::<Result<Vec<_>, _>>()
            .map(Word::new)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

/// Parse a word, panicking on bad input. Handy in tests and examples.
pub fn word(s: &str) -> Word {
    s.parse().expect("word over {h,c,H,C,F}")
}

/// `n` i.i.d. letters. The same `seed` always gives the same word.
pub fn sample_word(n: usize, weights: WeightTable, seed: u64) -> Word {
    let mut src = RandomLetters::new(weights, Stream::new(seed, crate::rng::lane::FORWARD));
    Word::new((0..n).map(|_| src.draw()).collect())
}

/// Canonical reduced word: unmatched orders, then unmatched burgers, each in
/// their original order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ReducedWord {
    pub orders: Vec<Letter>,
    pub burgers: Vec<Letter>,
}

impl ReducedWord {
    pub fn is_empty(&self) -> bool {
        self.orders.is_empty() && self.burgers.is_empty()
    }

    pub fn len(&self) -> usize {
        self.orders.len() + self.burgers.len()
    }

    pub fn to_word(&self) -> Word {
        Word::new(self.orders.iter().chain(&self.burgers).copied().collect())
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_word())
    }
}

/// Partner of every position under the stack discipline.
///
/// `offset[i]` is `partner - i`, zero when unmatched. For an order, `kind[i]`
/// is the type of the burger it consumed; for a burger it is its own type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchTable {
    offset: Vec<i32>,
    kind: Vec<Option<Burger>>,
}

impl MatchTable {
    pub fn len(&self) -> usize {
        self.offset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offset.is_empty()
    }

    #[inline]
    pub fn partner(&self, i: usize) -> Option<usize> {
        match self.offset[i] {
            0 => None,
            d => Some((i as i64 + d as i64) as usize),
        }
    }

    /// Type consumed by the order at `i`, if it is matched.
    pub fn match_type(&self, i: usize) -> Option<Burger> {
        if self.offset[i] == 0 {
            None
        } else {
            self.kind[i]
        }
    }

    pub fn unmatched(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.offset[i] == 0).collect()
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.len()).filter_map(|i| self.partner(i).filter(|&j| j > i).map(|j| (i, j))).collect()
    }
}

/// Match every order with the burger it consumes.
pub fn match_positions(w: &Word) -> MatchTable {
    let n = w.len();
    let mut offset = vec![0i32; n];
    let mut kind: Vec<Option<Burger>> = w.letters.iter().map(|l| l.burger()).collect();
    // One stack of all burgers and one per type; entries consumed through the
    // other stack are skipped lazily.
    let mut all: Vec<u32> = Vec::new();
    let mut by_type: [Vec<u32>; 2] = [Vec::new(), Vec::new()];
    let mut alive = vec![false; n];
    let top = |s: &mut Vec<u32>, alive: &[bool]| -> Option<u32> {
        while let Some(&j) = s.last() {
            if alive[j as usize] {
                return Some(j);
            }
            s.pop();
        }
        None
    };
    for (i, &l) in w.letters.iter().enumerate() {
        let found = match l {
            Letter::Ham | Letter::Cheese => {
                alive[i] = true;
                all.push(i as u32);
                by_type[(l == Letter::Cheese) as usize].push(i as u32);
                None
            }
            Letter::HamOrder => top(&mut by_type[0], &alive),
            Letter::CheeseOrder => top(&mut by_type[1], &alive),
            Letter::Flexible => top(&mut all, &alive),
        };
        if let Some(j) = found {
            let j = j as usize;
            alive[j] = false;
            offset[i] = j as i32 - i as i32;
            offset[j] = i as i32 - j as i32;
            kind[i] = w.letters[j].burger();
        }
    }
    MatchTable { offset, kind }
}

/// Reduce with the rules `cC = hH = cF = hF = ∅`, `cH = Hc`, `hC = Ch`.
pub fn reduce(w: &Word) -> ReducedWord {
    let m = match_positions(w);
    let mut r = ReducedWord::default();
    for i in m.unmatched() {
        let l = w.letters[i];
        if l.is_order() {
            r.orders.push(l);
        } else {
            r.burgers.push(l);
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_one() {
        for p in [0.0, 0.3, 0.5, 1.0] {
            let w = WeightTable::new(p).unwrap();
            let s: f64 = Letter::ALL.iter().map(|&l| w.weight(l)).sum();
            assert!((s - 1.0).abs() < 1e-15);
        }
        assert!(WeightTable::new(1.5).is_err());
    }

    #[test]
    fn critical_code_matches_weights() {
        let w = WeightTable::critical();
        for l in Letter::ALL {
            let k = CRITICAL_CODE.iter().filter(|&&x| x == l).count();
            assert_eq!(k as f64 / 8.0, w.weight(l));
        }
    }

    #[test]
    fn parse_roundtrip() {
        let w = word("hcHFcH");
        assert_eq!(w.to_string(), "hcHFcH");
        assert_eq!("hx".parse::<Word>(), Err(ParseWordError { ch: 'x', at: 1 }));
    }

    #[test]
    fn flexible_takes_freshest() {
        let m = match_positions(&word("hcF"));
        assert_eq!(m.partner(2), Some(1));
        assert_eq!(m.match_type(2), Some(Burger::Cheese));
    }
}
