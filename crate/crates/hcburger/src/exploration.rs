//! Exploration into the past and into the future.
//!
//! Past: the letters left of a frontier split greedily into single letters
//! from `{h, c, H, C}` and maximal `F`-excursions. Each piece is an
//! [`ExcursionStep`] and moves one coordinate of the reduced walk.
//!
//! Future: the letters right of 0 split into blocks, each ending at the first
//! `F` that finds nothing left in the window stack.

use crate::backward::{scan_f_excursion, CapExceeded, Event, PendingOrders, ScanError};
use crate::rng::{lane, Stream};
use crate::word::{Burger, Letter, LetterSource, RandomLetters, WeightTable, Word};

/// What a past step consists of.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepKind {
    Single(Letter),
    /// A maximal `F`-excursion whose `F` was taken by a burger of this type.
    Excursion(Burger),
}

/// One step of the past exploration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExcursionStep {
    pub kind: StepKind,
    /// Reduced length contribution; -1 for a burger.
    pub xi: i64,
    /// Letters consumed.
    pub eta: u64,
}

impl ExcursionStep {
    pub fn single(l: Letter) -> Self {
        debug_assert!(l != Letter::Flexible);
        ExcursionStep { kind: StepKind::Single(l), xi: if l.is_burger() { -1 } else { 1 }, eta: 1 }
    }

    /// The coordinate this step moves: `h`, `H` and cheese-type excursions are
    /// hamburger steps.
    pub fn side(&self) -> Burger {
        match self.kind {
            StepKind::Single(l) => l.burger().unwrap(),
            StepKind::Excursion(b) => b.other(),
        }
    }

    /// The same step with the two burger types exchanged.
    pub fn swapped(&self) -> Self {
        let kind = match self.kind {
            StepKind::Single(l) => StepKind::Single(l.swapped()),
            StepKind::Excursion(b) => StepKind::Excursion(b.other()),
        };
        ExcursionStep { kind, ..*self }
    }

    pub fn is_excursion(&self) -> bool {
        matches!(self.kind, StepKind::Excursion(_))
    }
}

/// Read one past step from `src`.
pub fn next_step<S: LetterSource>(
    src: &mut S,
    cap: u64,
    scratch: &mut PendingOrders,
) -> Result<Option<ExcursionStep>, ScanError> {
    let Some(l) = src.next_letter() else { return Ok(None) };
    if l != Letter::Flexible {
        return Ok(Some(ExcursionStep::single(l)));
    }
    let e = scan_f_excursion(src, cap, scratch)?;
    Ok(Some(ExcursionStep { kind: StepKind::Excursion(e.burger), xi: e.xi as i64, eta: e.eta }))
}

/// Split a leftward letter stream into at most `max_steps` steps.
///
/// A finite source may end between two steps; ending inside an excursion is
/// an error.
pub fn decompose_past<S: LetterSource>(
    src: &mut S,
    max_steps: usize,
    cap: u64,
) -> Result<Vec<ExcursionStep>, ScanError> {
    let mut scratch = PendingOrders::excursion();
    let mut out = Vec::new();
    while out.len() < max_steps {
        match next_step(src, cap, &mut scratch)? {
            Some(s) => out.push(s),
            None => break,
        }
    }
    Ok(out)
}

/// Draws past steps from a random stream at `p = 1/2`.
#[derive(Clone, Debug)]
pub struct StepSampler {
    src: RandomLetters,
    scratch: PendingOrders,
    cap: u64,
}

impl StepSampler {
    /// `cap` bounds the letters of one excursion scan.
    pub fn new(stream: Stream, cap: u64) -> Self {
        StepSampler {
            src: RandomLetters::new(WeightTable::critical(), stream),
            scratch: PendingOrders::excursion(),
            cap,
        }
    }

    /// A step of the pooled law.
    pub fn pooled(&mut self) -> Result<ExcursionStep, CapExceeded> {
        match next_step(&mut self.src, self.cap, &mut self.scratch) {
            Ok(Some(s)) => Ok(s),
            Err(ScanError::Cap(c)) => Err(c),
            _ => unreachable!("random letters never run dry"),
        }
    }

    /// A step of the hamburger-side law: the pooled step, mirrored when it
    /// belongs to the other side.
    pub fn ham_side(&mut self) -> Result<ExcursionStep, CapExceeded> {
        let s = self.pooled()?;
        Ok(if s.side() == Burger::Ham { s } else { s.swapped() })
    }

    /// `Some(τ)` for the first time the non-lazy hamburger walk hits -1, or
    /// `None` if it has not happened within `max` steps.
    pub fn tau_ham(&mut self, max: u64) -> Result<Option<u64>, CapExceeded> {
        let mut h = 0i64;
        for k in 1..=max {
            h += self.ham_side()?.xi;
            if h < 0 {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }

    /// The full exploration of an `F` at position 0.
    pub fn excursion(&mut self, record: bool) -> Result<ExcursionOutcome, CapExceeded> {
        match explore_excursion(&mut self.src, self.cap, record, &mut self.scratch) {
            Ok(o) => Ok(o),
            Err(ScanError::Cap(c)) => Err(c),
            Err(ScanError::Exhausted { .. }) => unreachable!("random letters never run dry"),
        }
    }
}

/// One pooled `(ξ, η)` step from a fresh stream.
pub fn sample_xi_eta(seed: u64) -> ExcursionStep {
    StepSampler::new(Stream::new(seed, lane::PAST), u64::MAX).pooled().unwrap()
}

/// The lazy and non-lazy reduced walks built from a step sequence.
///
/// Lazy vectors hold the value after each step, so `ham_lazy[n - 1]` is the
/// walk after `n` steps.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReducedWalkPath {
    pub ham_lazy: Vec<i64>,
    pub cheese_lazy: Vec<i64>,
    /// Letters consumed after each step.
    pub sigma: Vec<u64>,
    /// Non-lazy walks, one entry per step of their own side.
    pub ham: Vec<i64>,
    pub cheese: Vec<i64>,
    /// `gaps[i]` counts cheese steps between the `i`-th and `(i+1)`-th
    /// hamburger steps (`gaps[0]`: before the first one).
    pub gaps: Vec<u64>,
    /// Cheese steps after the last hamburger step.
    pub trailing: u64,
}

fn first_below(v: &[i64], level: i64) -> Option<usize> {
    v.iter().position(|&x| x < level).map(|i| i + 1)
}

impl ReducedWalkPath {
    /// Lazy step at which the hamburger coordinate first reaches -1.
    pub fn tau_ham_lazy(&self) -> Option<usize> {
        first_below(&self.ham_lazy, 0)
    }

    pub fn tau_cheese_lazy(&self) -> Option<usize> {
        first_below(&self.cheese_lazy, 0)
    }

    /// `τ←`: the first lazy step at which either coordinate reaches -1.
    pub fn tau(&self) -> Option<usize> {
        match (self.tau_ham_lazy(), self.tau_cheese_lazy()) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    /// Hitting time of -1 for the non-lazy hamburger walk.
    pub fn tau_ham(&self) -> Option<usize> {
        first_below(&self.ham, 0)
    }

    pub fn tau_cheese(&self) -> Option<usize> {
        first_below(&self.cheese, 0)
    }

    /// First lazy step at which the two coordinates sum to -1.
    pub fn first_sum_below(&self) -> Option<usize> {
        (0..self.ham_lazy.len())
            .find(|&i| self.ham_lazy[i] + self.cheese_lazy[i] < 0)
            .map(|i| i + 1)
    }

    /// Rebuild the lazy walks from the non-lazy ones and the gaps.
    pub fn rebuild_lazy(&self) -> (Vec<i64>, Vec<i64>) {
        let (mut h, mut c) = (0i64, 0i64);
        let (mut hv, mut cv) = (Vec::new(), Vec::new());
        let mut ci = 0;
        let mut push_cheese = |n: u64, h: i64, c: &mut i64, hv: &mut Vec<i64>, cv: &mut Vec<i64>| {
            for _ in 0..n {
                *c = self.cheese[ci];
                ci += 1;
                hv.push(h);
                cv.push(*c);
            }
        };
        for (k, &g) in self.gaps.iter().enumerate() {
            push_cheese(g, h, &mut c, &mut hv, &mut cv);
            h = self.ham[k];
            hv.push(h);
            cv.push(c);
        }
        push_cheese(self.trailing, h, &mut c, &mut hv, &mut cv);
        (hv, cv)
    }
}

/// Accumulate a step sequence into the reduced walks.
pub fn reduced_walk(steps: &[ExcursionStep]) -> ReducedWalkPath {
    let mut p = ReducedWalkPath::default();
    let (mut h, mut c, mut s) = (0i64, 0i64, 0u64);
    let mut gap = 0u64;
    for st in steps {
        s += st.eta;
        match st.side() {
            Burger::Ham => {
                h += st.xi;
                p.ham.push(h);
                p.gaps.push(gap);
                gap = 0;
            }
            Burger::Cheese => {
                c += st.xi;
                p.cheese.push(c);
                gap += 1;
            }
        }
        p.ham_lazy.push(h);
        p.cheese_lazy.push(c);
        p.sigma.push(s);
    }
    p.trailing = gap;
    p
}

/// Step-by-step record of an exploration from `X(0) = F`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExcursionPath {
    /// X(-1), X(-2), ... in reading order.
    pub letters: Vec<Letter>,
    /// Letters consumed after each completed step.
    pub step_end: Vec<u64>,
    /// Lazy walk after each completed step.
    pub ham: Vec<u64>,
    pub cheese: Vec<u64>,
}

/// The `F`-excursion of the `F` at position 0, read step by step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExcursionOutcome {
    /// Type of the burger matched to X(0).
    pub burger: Burger,
    /// Reduced length of the excursion.
    pub xi: u64,
    /// Letters of the excursion, X(0) included.
    pub eta: u64,
    /// `τ←`, the number of steps.
    pub steps: u64,
    pub ham_steps: u64,
    pub cheese_steps: u64,
    pub path: Option<ExcursionPath>,
}

impl ExcursionOutcome {
    /// `τ^h` or `τ^c`, whichever is hit.
    pub fn tau_matched(&self) -> u64 {
        match self.burger {
            Burger::Ham => self.ham_steps,
            Burger::Cheese => self.cheese_steps,
        }
    }

    /// Length, `H*` and `C*` of the word `Y(u-1)...Y(1)X(0)` for `u = 1..=τ←`.
    /// Needs a recorded path.
    pub fn windows(&self) -> impl Iterator<Item = (u64, u64, u64)> + '_ {
        let p = self.path.as_ref().expect("windows need a recorded path");
        std::iter::once((1, 0, 0)).chain(
            (0..self.steps as usize - 1).map(move |i| (1 + p.step_end[i], p.ham[i], p.cheese[i])),
        )
    }

    /// The word `Y(u-1)...Y(1)X(0)`. Needs a recorded path.
    pub fn window_word(&self, u: u64) -> Word {
        let p = self.path.as_ref().expect("window_word needs a recorded path");
        let len = if u == 1 { 0 } else { p.step_end[u as usize - 2] as usize };
        let mut letters: Vec<Letter> = p.letters[..len].iter().rev().copied().collect();
        letters.push(Letter::Flexible);
        Word { letters, origin: 1 - len as i64 }
    }
}

/// Explore leftward from an `F` at position 0 until it is matched.
pub fn explore_excursion<S: LetterSource>(
    src: &mut S,
    cap: u64,
    record: bool,
    pending: &mut PendingOrders,
) -> Result<ExcursionOutcome, ScanError> {
    pending.reset_excursion();
    let mut path = record.then(ExcursionPath::default);
    let (mut eta, mut steps, mut ham_steps, mut cheese_steps) = (1u64, 0u64, 0u64, 0u64);
    loop {
        if eta > cap {
            return Err(CapExceeded { letters: eta }.into());
        }
        let l = src.next_letter().ok_or(ScanError::Exhausted { letters: eta })?;
        eta += 1;
        if let Some(p) = path.as_mut() {
            p.letters.push(l);
        }
        let at_top = pending.depth() == 1;
        let ev = pending.push(l);
        if let Event::BottomClosed { burger, remaining } = ev {
            steps += 1;
            match burger {
                Burger::Ham => ham_steps += 1,
                Burger::Cheese => cheese_steps += 1,
            }
            return Ok(ExcursionOutcome { burger, xi: remaining, eta, steps, ham_steps, cheese_steps, path });
        }
        if pending.depth() == 1 {
            let side = if at_top { l.burger().unwrap() } else { l.burger().unwrap().other() };
            match side {
                Burger::Ham => ham_steps += 1,
                Burger::Cheese => cheese_steps += 1,
            }
            steps += 1;
            if let Some(p) = path.as_mut() {
                let (h, c) = pending.bottom_counts();
                p.step_end.push(eta - 1);
                p.ham.push(h);
                p.cheese.push(c);
            }
        }
    }
}

/// Loop, cluster and envelope sizes around an `F` at position 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ObservableSample {
    pub loop_len: u64,
    pub cluster_perimeter: u64,
    pub envelope_boundary: u64,
    pub match_type: Burger,
}

impl From<&ExcursionOutcome> for ObservableSample {
    fn from(o: &ExcursionOutcome) -> Self {
        ObservableSample {
            loop_len: o.steps,
            cluster_perimeter: o.tau_matched() - 1,
            envelope_boundary: o.xi,
            match_type: o.burger,
        }
    }
}

/// Observables of a typical loop, from a fresh past.
pub fn sample_typical_observables(seed: u64) -> ObservableSample {
    let o = StepSampler::new(Stream::new(seed, lane::PAST), u64::MAX).excursion(false).unwrap();
    ObservableSample::from(&o)
}

/// Where the final `F` of a future block was matched.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FinalMatch {
    Ham,
    Cheese,
    BeyondWindow,
}

/// One block of the exploration into the future.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FutureBlock {
    /// Index of the first letter, 1 for the first block.
    pub start: u64,
    pub tau_f: u64,
    /// Orders with no partner inside the window, the final `F` excluded.
    pub hstar: u64,
    pub cstar: u64,
    pub final_match: FinalMatch,
    pub word: Option<Word>,
}

impl FutureBlock {
    pub fn dstar(&self) -> i64 {
        self.hstar as i64 - self.cstar as i64
    }
}

/// Burger stack of the forward window as alternating runs, top last.
#[derive(Clone, Debug, Default)]
pub struct RunStack {
    runs: Vec<(Burger, u64)>,
}

impl RunStack {
    pub fn clear(&mut self) {
        self.runs.clear();
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    #[inline]
    pub fn push(&mut self, b: Burger) {
        match self.runs.last_mut() {
            Some((t, n)) if *t == b => *n += 1,
            _ => self.runs.push((b, 1)),
        }
    }

    /// Take the top burger.
    #[inline]
    pub fn pop_any(&mut self) -> Option<Burger> {
        let (t, n) = self.runs.last_mut()?;
        let t = *t;
        *n -= 1;
        if *n == 0 {
            self.runs.pop();
        }
        Some(t)
    }

    /// Take the topmost burger of type `b`; false if there is none.
    #[inline]
    pub fn pop_type(&mut self, b: Burger) -> bool {
        let len = self.runs.len();
        match self.runs.last() {
            None => false,
            Some(&(t, _)) if t == b => {
                self.pop_any();
                true
            }
            Some(_) if len >= 2 => {
                let r = &mut self.runs[len - 2];
                r.1 -= 1;
                if r.1 == 0 {
                    let top = self.runs.pop().unwrap();
                    self.runs.pop();
                    match self.runs.last_mut() {
                        Some(below) => below.1 += top.1,
                        None => self.runs.push(top),
                    }
                }
                true
            }
            Some(_) => false,
        }
    }
}

/// A future block was cut by the letter budget. Counts are those reached so
/// far; `H*` and `C*` can only grow.
#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("future block longer than {len} letters")]
pub struct BlockTruncated {
    pub len: u64,
    pub hstar: u64,
    pub cstar: u64,
}

/// Read one block from `src`, which starts with an empty window stack.
pub fn next_future_block<S: LetterSource>(
    src: &mut S,
    cap: u64,
    record: bool,
    stack: &mut RunStack,
) -> Result<Option<FutureBlock>, BlockTruncated> {
    stack.clear();
    let mut letters = record.then(Vec::new);
    let (mut len, mut hstar, mut cstar) = (0u64, 0u64, 0u64);
    loop {
        if len >= cap {
            return Err(BlockTruncated { len, hstar, cstar });
        }
        let Some(l) = src.next_letter() else { return Ok(None) };
        len += 1;
        if let Some(v) = letters.as_mut() {
            v.push(l);
        }
        match l {
            Letter::Ham => stack.push(Burger::Ham),
            Letter::Cheese => stack.push(Burger::Cheese),
            Letter::HamOrder => hstar += !stack.pop_type(Burger::Ham) as u64,
            Letter::CheeseOrder => cstar += !stack.pop_type(Burger::Cheese) as u64,
            Letter::Flexible => {
                if stack.pop_any().is_none() {
                    return Ok(Some(FutureBlock {
                        start: 1,
                        tau_f: len,
                        hstar,
                        cstar,
                        final_match: FinalMatch::BeyondWindow,
                        word: letters.map(Word::new),
                    }));
                }
            }
        }
    }
}

/// Blocks completed within X(1..n), with running totals.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FutureRun {
    pub blocks: Vec<FutureBlock>,
    /// Running sums of `H*` and `C*` over the blocks.
    pub ham_right: Vec<u64>,
    pub cheese_right: Vec<u64>,
    /// Letters of X(1..n) after the last completed block.
    pub open_len: u64,
}

impl FutureRun {
    /// Number of `F`s in X(1..n) matched to the left of 1.
    pub fn unmatched_f(&self) -> usize {
        self.blocks.len()
    }
}

/// Split X(1..n) into future blocks.
pub fn future_exploration<S: LetterSource>(src: &mut S, n: u64) -> FutureRun {
    let mut run = FutureRun::default();
    let mut stack = RunStack::default();
    let mut pos = 0u64;
    let (mut hs, mut cs) = (0u64, 0u64);
    while pos < n {
        match next_future_block(src, n - pos, false, &mut stack) {
            Ok(Some(mut b)) => {
                b.start = pos + 1;
                pos += b.tau_f;
                hs += b.hstar;
                cs += b.cstar;
                run.ham_right.push(hs);
                run.cheese_right.push(cs);
                run.blocks.push(b);
            }
            Ok(None) => break,
            Err(t) => {
                run.open_len = t.len;
                break;
            }
        }
    }
    run
}

/// Samples words with the law of a future block from the past side: an
/// `F`-excursion size-biased by its number of steps, cut at a uniform step.
///
/// Size-biasing is done by rejection against a cap on the number of steps.
/// A proposal above the cap is thrown away and the cap doubled; such events
/// are counted in `exceedances`.
#[derive(Clone, Debug)]
pub struct BiasedSampler {
    steps: StepSampler,
    aux: Stream,
    pub r_max: u64,
    pub proposals: u64,
    pub exceedances: u64,
    pub truncated: u64,
}

impl BiasedSampler {
    pub fn new(seed: u64, replica: u64, r_max: u64, letter_cap: u64) -> Self {
        BiasedSampler {
            steps: StepSampler::new(Stream::replica(seed, replica, lane::PAST), letter_cap),
            aux: Stream::replica(seed, replica, lane::AUX),
            r_max,
            proposals: 0,
            exceedances: 0,
            truncated: 0,
        }
    }

    pub fn sample(&mut self) -> Word {
        loop {
            self.proposals += 1;
            let Ok(e) = self.steps.excursion(true) else {
                self.truncated += 1;
                continue;
            };
            let r = e.steps;
            if r > self.r_max {
                self.exceedances += 1;
                self.r_max = r.next_power_of_two().max(2 * self.r_max);
                continue;
            }
            if self.aux.uniform_1_to(self.r_max) <= r {
                let u = self.aux.uniform_1_to(r);
                return e.window_word(u);
            }
        }
    }
}

/// One draw of the size-biased sampler.
pub fn biased_excursion_pf(seed: u64) -> Word {
    BiasedSampler::new(seed, 0, 64, u64::MAX).sample()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{word, Backward, Forward};

    fn steps_of(s: &str) -> Vec<ExcursionStep> {
        let w = word(s);
        decompose_past(&mut Backward::new(&w.letters), usize::MAX, u64::MAX).unwrap()
    }

    #[test]
    fn single_letter_steps() {
        let s = steps_of("H");
        assert_eq!(s, vec![ExcursionStep::single(Letter::HamOrder)]);
        assert_eq!(s[0].side(), Burger::Ham);
        assert_eq!((s[0].xi, s[0].eta), (1, 1));
    }

    #[test]
    fn excursion_steps() {
        assert_eq!(
            steps_of("cF"),
            vec![ExcursionStep { kind: StepKind::Excursion(Burger::Cheese), xi: 0, eta: 2 }]
        );
        let s = steps_of("cHF");
        assert_eq!(s, vec![ExcursionStep { kind: StepKind::Excursion(Burger::Cheese), xi: 1, eta: 3 }]);
        assert_eq!(s[0].side(), Burger::Ham);
    }

    #[test]
    fn walk_accumulates() {
        let st: Vec<_> = [Letter::HamOrder, Letter::HamOrder, Letter::Ham]
            .into_iter()
            .map(ExcursionStep::single)
            .collect();
        let p = reduced_walk(&st);
        assert_eq!(p.ham_lazy, vec![1, 2, 1]);
        assert_eq!(p.tau_ham(), None);
        let p = reduced_walk(&[ExcursionStep::single(Letter::Ham)]);
        assert_eq!((p.tau_ham(), p.tau_ham_lazy()), (Some(1), Some(1)));
    }

    #[test]
    fn run_stack_reaches_below_top_run() {
        let mut s = RunStack::default();
        for b in [Burger::Cheese, Burger::Ham, Burger::Cheese, Burger::Cheese] {
            s.push(b);
        }
        assert!(s.pop_type(Burger::Ham));
        assert_eq!(s.runs, vec![(Burger::Cheese, 3)]);
        assert!(!s.pop_type(Burger::Ham));
    }

    #[test]
    fn future_blocks_small() {
        let w = word("hHFF");
        let r = future_exploration(&mut Forward::new(&w.letters), 4);
        assert_eq!(r.blocks.len(), 2);
        assert_eq!((r.blocks[0].tau_f, r.blocks[0].hstar), (3, 0));
        assert_eq!((r.blocks[1].start, r.blocks[1].tau_f), (4, 1));
        let w = word("cHF");
        assert!(future_exploration(&mut Forward::new(&w.letters), 3).blocks.is_empty());
    }
}
