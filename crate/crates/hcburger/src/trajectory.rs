//! Burger count and discrepancy along a window X(1..n).
//!
//! With `H = #h - #H - #(F taking h)` and `C` likewise, `S = H + C` and
//! `D = H - C`. The type taken by an `F` may lie left of position 1; the
//! window then reads X(0), X(-1), ... on demand until the past stack yields a
//! burger. That read is bounded by a cap (64·n by default). Past the cap the
//! remaining `F` types are unknown and `D` is reported as undefined from the
//! first such `F` on.

use std::collections::VecDeque;

use crate::backward::{PastStack, ScanError};
use crate::rng::{lane, Stream};
use crate::word::{Burger, Letter, LetterSource, RandomLetters, WeightTable};

/// Default cap on past letters, per window letter.
pub const DEFAULT_CAP_FACTOR: u64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Origin {
    Window,
    Past,
}

/// Burger stack made of the revealed past (front) under the window (back).
#[derive(Clone, Debug)]
struct Stack<P> {
    runs: VecDeque<(Burger, u64)>,
    window: [u64; 2],
    past: PastStack<P>,
}

fn ix(b: Burger) -> usize {
    b as usize
}

impl<P: LetterSource> Stack<P> {
    fn new(past: PastStack<P>) -> Self {
        Stack { runs: VecDeque::new(), window: [0, 0], past }
    }

    #[inline]
    fn push_top(&mut self, b: Burger) {
        self.window[ix(b)] += 1;
        match self.runs.back_mut() {
            Some((t, n)) if *t == b => *n += 1,
            _ => self.runs.push_back((b, 1)),
        }
    }

    fn push_bottom(&mut self, b: Burger) {
        match self.runs.front_mut() {
            Some((t, n)) if *t == b => *n += 1,
            _ => self.runs.push_front((b, 1)),
        }
    }

    #[inline]
    fn take_any(&mut self) -> Result<(Burger, Origin), ScanError> {
        if let Some((t, n)) = self.runs.back_mut() {
            let t = *t;
            *n -= 1;
            if *n == 0 {
                self.runs.pop_back();
            }
            let origin = if self.window[0] + self.window[1] > 0 {
                self.window[ix(t)] -= 1;
                Origin::Window
            } else {
                Origin::Past
            };
            return Ok((t, origin));
        }
        Ok((self.past.reveal()?, Origin::Past))
    }

    #[inline]
    fn take(&mut self, b: Burger) -> Result<Origin, ScanError> {
        let origin = if self.window[ix(b)] > 0 { Origin::Window } else { Origin::Past };
        let len = self.runs.len();
        let found = match self.runs.back() {
            Some(&(t, _)) if t == b => {
                let r = self.runs.back_mut().unwrap();
                r.1 -= 1;
                if r.1 == 0 {
                    self.runs.pop_back();
                }
                true
            }
            Some(_) if len >= 2 => {
                let r = &mut self.runs[len - 2];
                r.1 -= 1;
                if r.1 == 0 {
                    let top = self.runs.pop_back().unwrap();
                    self.runs.pop_back();
                    match self.runs.back_mut() {
                        Some(below) => below.1 += top.1,
                        None => self.runs.push_back(top),
                    }
                }
                true
            }
            _ => false,
        };
        if found {
            if origin == Origin::Window {
                self.window[ix(b)] -= 1;
            }
            return Ok(origin);
        }
        loop {
            let x = self.past.reveal()?;
            if x == b {
                return Ok(Origin::Past);
            }
            self.push_bottom(x);
        }
    }
}

/// What one window letter did to the counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Tick {
    pub letter: Letter,
    /// Type consumed by an order; `None` for burgers and unresolved `F`s.
    pub took: Option<Burger>,
    /// The order consumed a burger from the left of position 1.
    pub from_past: bool,
}

/// Drives the window letters through the two-sided stack.
pub struct Window<P> {
    stack: Stack<P>,
    broken: bool,
}

impl<P: LetterSource> Window<P> {
    pub fn new(past: P, cap: u64) -> Self {
        Window { stack: Stack::new(PastStack::new(past, cap)), broken: false }
    }

    /// Letters of the past read so far.
    pub fn past_letters(&self) -> u64 {
        self.stack.past.letters_read()
    }

    /// True once the past cap has been hit.
    pub fn is_broken(&self) -> bool {
        self.broken
    }

    #[inline]
    pub fn feed(&mut self, l: Letter) -> Tick {
        let mut t = Tick { letter: l, took: None, from_past: false };
        if self.broken {
            return t;
        }
        let res = match l {
            Letter::Ham | Letter::Cheese => {
                self.stack.push_top(l.burger().unwrap());
                return t;
            }
            Letter::HamOrder => self.stack.take(Burger::Ham).map(|o| (Burger::Ham, o)),
            Letter::CheeseOrder => self.stack.take(Burger::Cheese).map(|o| (Burger::Cheese, o)),
            Letter::Flexible => self.stack.take_any(),
        };
        match res {
            Ok((b, o)) => {
                t.took = Some(b);
                t.from_past = o == Origin::Past;
            }
            Err(_) => self.broken = true,
        }
        t
    }
}

/// Per-prefix counts of a window.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CountTrajectory {
    /// `S_k`, `H_k`, `C_k` for `k = 1..=n`, at index `k - 1`.
    pub s: Vec<i64>,
    pub ham: Vec<i64>,
    pub cheese: Vec<i64>,
    /// `D_k` is defined for `k <= defined`.
    pub defined: usize,
    /// How far left the lazy buffer grew.
    pub past_letters: u64,
    /// Position (1-based) of the first `F` left unresolved by the cap.
    pub unresolved_at: Option<usize>,
    /// `F`s of the window taken from the left of 1, with the type taken.
    pub past_flexible: Vec<(usize, Burger)>,
}

impl CountTrajectory {
    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    /// `D_k` for `1 <= k <= n`, if defined.
    pub fn d(&self, k: usize) -> Option<i64> {
        (k >= 1 && k <= self.defined).then(|| self.ham[k - 1] - self.cheese[k - 1])
    }

    /// Contribution of the past-matched `F`s up to `k` to `D_k`.
    pub fn delta_f(&self, k: usize) -> i64 {
        self.past_flexible.iter().take_while(|(i, _)| *i <= k).map(|&(_, b)| -b.sign()).sum()
    }
}

/// Running totals without per-step storage.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Endpoint {
    pub s: i64,
    pub ham: i64,
    pub cheese: i64,
    pub defined: bool,
    pub past_letters: u64,
    /// `F`s taken from the left of 1.
    pub past_flexible: u64,
    /// Their contribution to `D`.
    pub delta_f: i64,
}

impl Endpoint {
    pub fn d(&self) -> Option<i64> {
        self.defined.then_some(self.ham - self.cheese)
    }
}

fn run<W: LetterSource, P: LetterSource>(
    window: &mut W,
    past: P,
    n: usize,
    cap: u64,
    mut visit: impl FnMut(usize, Tick, bool),
) -> u64 {
    let mut w = Window::new(past, cap);
    for k in 1..=n {
        let l = window.next_letter().expect("window source too short");
        let t = w.feed(l);
        visit(k, t, w.is_broken());
    }
    w.past_letters()
}

#[inline]
fn apply(ham: &mut i64, cheese: &mut i64, t: Tick) {
    match t.letter {
        Letter::Ham => *ham += 1,
        Letter::Cheese => *cheese += 1,
        Letter::HamOrder => *ham -= 1,
        Letter::CheeseOrder => *cheese -= 1,
        Letter::Flexible => match t.took {
            Some(Burger::Ham) => *ham -= 1,
            Some(Burger::Cheese) => *cheese -= 1,
            None => {}
        },
    }
}

/// Counts along the letters of `window`, with X(0), X(-1), ... from `past`.
pub fn trajectory_from<W: LetterSource, P: LetterSource>(
    window: &mut W,
    past: P,
    n: usize,
    cap: u64,
) -> CountTrajectory {
    let mut tr = CountTrajectory {
        s: Vec::with_capacity(n),
        ham: Vec::with_capacity(n),
        cheese: Vec::with_capacity(n),
        ..Default::default()
    };
    let (mut s, mut h, mut c) = (0i64, 0i64, 0i64);
    let mut ok = true;
    tr.past_letters = run(window, past, n, cap, |k, t, broken| {
        s += if t.letter.is_burger() { 1 } else { -1 };
        if ok && broken {
            ok = false;
            tr.unresolved_at = Some(k);
        }
        apply(&mut h, &mut c, t);
        if ok {
            tr.defined = k;
            if t.letter == Letter::Flexible && t.from_past {
                tr.past_flexible.push((k, t.took.unwrap()));
            }
        }
        tr.s.push(s);
        tr.ham.push(h);
        tr.cheese.push(c);
    });
    tr
}

/// Totals at time `n`, with X(0), X(-1), ... from `past`.
pub fn endpoint_from<W: LetterSource, P: LetterSource>(
    window: &mut W,
    past: P,
    n: usize,
    cap: u64,
) -> Endpoint {
    let mut e = Endpoint { defined: true, ..Default::default() };
    let (mut h, mut c) = (0i64, 0i64);
    e.past_letters = run(window, past, n, cap, |_, t, broken| {
        e.s += if t.letter.is_burger() { 1 } else { -1 };
        if broken {
            e.defined = false;
        }
        apply(&mut h, &mut c, t);
        if t.letter == Letter::Flexible && t.from_past {
            e.past_flexible += 1;
            e.delta_f -= t.took.unwrap().sign();
        }
    });
    e.ham = h;
    e.cheese = c;
    e
}

/// Sources for replica `replica` of an experiment seeded by `seed`.
pub fn sources(weights: WeightTable, seed: u64, replica: u64) -> (RandomLetters, RandomLetters) {
    (
        RandomLetters::new(weights, Stream::replica(seed, replica, lane::FORWARD)),
        RandomLetters::new(weights, Stream::replica(seed, replica, lane::PAST)),
    )
}

/// Counts of an i.i.d. window of length `n` at `p = 1/2`.
pub fn trajectory(n: usize, seed: u64) -> CountTrajectory {
    trajectory_with(WeightTable::critical(), n, seed, 0, DEFAULT_CAP_FACTOR * n as u64)
}

pub fn trajectory_with(
    weights: WeightTable,
    n: usize,
    seed: u64,
    replica: u64,
    cap: u64,
) -> CountTrajectory {
    let (mut fw, past) = sources(weights, seed, replica);
    trajectory_from(&mut fw, past, n, cap)
}

pub fn endpoint(weights: WeightTable, n: usize, seed: u64, replica: u64, cap: u64) -> Endpoint {
    let (mut fw, past) = sources(weights, seed, replica);
    endpoint_from(&mut fw, past, n, cap)
}

/// The same window run against its own past and against an independent one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MarkovSplit {
    pub own: Endpoint,
    pub fresh: Endpoint,
}

impl MarkovSplit {
    /// `D(1,n) - (D'(1,n) + Δ_F - Δ'_F)`; zero whenever both are defined.
    pub fn defect(&self) -> Option<i64> {
        Some(self.own.d()? - (self.fresh.d()? + self.own.delta_f - self.fresh.delta_f))
    }
}

pub fn markov_split(weights: WeightTable, n: usize, seed: u64, replica: u64, cap: u64) -> MarkovSplit {
    let own = endpoint(weights, n, seed, replica, cap);
    let mut fw = RandomLetters::new(weights, Stream::replica(seed, replica, lane::FORWARD));
    let past = RandomLetters::new(weights, Stream::replica(seed, replica, lane::PAST_PRIME));
    let fresh = endpoint_from(&mut fw, past, n, cap);
    MarkovSplit { own, fresh }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{word, Backward, Forward};

    fn tr(win: &str, past: &str) -> CountTrajectory {
        let w = word(win);
        let p = word(past);
        trajectory_from(&mut Forward::new(&w.letters), Backward::new(&p.letters), w.len(), 1000)
    }

    #[test]
    fn hh_and_cf() {
        let t = tr("hH", "");
        assert_eq!(t.s, vec![1, 0]);
        assert_eq!((t.d(1), t.d(2)), (Some(1), Some(0)));
        let t = tr("cF", "");
        assert_eq!(t.s, vec![1, 0]);
        assert_eq!((t.d(1), t.d(2)), (Some(-1), Some(0)));
    }

    #[test]
    fn flexible_reaches_into_past() {
        // Past X(-1..0) = "hc": the stack at time 0 is h, c (c on top).
        let t = tr("HF", "hc");
        assert_eq!(t.past_flexible, vec![(2, Burger::Cheese)]);
        assert_eq!(t.d(2), Some(0));
        assert_eq!(t.past_letters, 2);
    }

    #[test]
    fn unresolved_when_past_runs_out() {
        let t = tr("hFF", "");
        assert_eq!(t.unresolved_at, Some(3));
        assert_eq!(t.defined, 2);
        assert_eq!(t.d(3), None);
        assert_eq!(t.s, vec![1, 0, -1]);
    }
}
