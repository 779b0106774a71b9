//! The right-to-left automaton.
//!
//! Read leftward, an order waits for a burger further left, so the pending
//! state is a sequence of orders. A burger of type `b` is taken by the first
//! pending order that is either `b`'s order or an `F`. Between two pending `F`s
//! only the counts of `H` and `C` matter, which gives the block structure
//! below: each block holds counts and ends with an `F`, except possibly the
//! bottom one.

use crate::word::{Burger, Letter, LetterSource};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct Block {
    ham: u64,
    cheese: u64,
    closed: bool,
}

impl Block {
    #[inline]
    fn count_mut(&mut self, b: Burger) -> &mut u64 {
        match b {
            Burger::Ham => &mut self.ham,
            Burger::Cheese => &mut self.cheese,
        }
    }

    #[inline]
    fn count(&self, b: Burger) -> u64 {
        match b {
            Burger::Ham => self.ham,
            Burger::Cheese => self.cheese,
        }
    }
}

/// What happened to the last letter fed to [`PendingOrders::push`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Event {
    /// An order joined the pending sequence.
    Queued,
    /// A burger was taken by a pending `H` or `C`.
    TakenByOrder,
    /// A burger was taken by a pending `F` which was not the bottom one.
    TakenByFlexible,
    /// A burger was taken by the bottom `F`. `remaining` pending orders of the
    /// other type were left in its block.
    BottomClosed { burger: Burger, remaining: u64 },
    /// No pending order wants this burger.
    Unmatched(Burger),
}

/// Pending orders of a leftward scan, top (nearest the frontier) last.
#[derive(Clone, Debug)]
pub struct PendingOrders {
    blocks: Vec<Block>,
}

impl PendingOrders {
    /// Nothing pending: the state right of position 0 when revealing the past.
    pub fn open() -> Self {
        PendingOrders { blocks: vec![Block::default()] }
    }

    /// A single pending `F`: the state just after reading an `F` that starts an
    /// excursion scan.
    pub fn excursion() -> Self {
        PendingOrders { blocks: vec![Block { closed: true, ..Block::default() }] }
    }

    pub fn reset_excursion(&mut self) {
        self.blocks.clear();
        self.blocks.push(Block { closed: true, ..Block::default() });
    }

    /// Number of blocks; 1 means the scan is at its top level.
    #[inline]
    pub fn depth(&self) -> usize {
        self.blocks.len()
    }

    /// Pending `(H, C)` counts in the bottom block.
    pub fn bottom_counts(&self) -> (u64, u64) {
        let b = self.blocks[0];
        (b.ham, b.cheese)
    }

    #[inline]
    pub fn push(&mut self, l: Letter) -> Event {
        let top = self.blocks.last_mut().expect("blocks never empty while scanning");
        match l {
            Letter::HamOrder => {
                top.ham += 1;
                Event::Queued
            }
            Letter::CheeseOrder => {
                top.cheese += 1;
                Event::Queued
            }
            Letter::Flexible => {
                self.blocks.push(Block { closed: true, ..Block::default() });
                Event::Queued
            }
            Letter::Ham | Letter::Cheese => {
                let b = if l == Letter::Ham { Burger::Ham } else { Burger::Cheese };
                let slot = top.count_mut(b);
                if *slot > 0 {
                    *slot -= 1;
                    return Event::TakenByOrder;
                }
                if !top.closed {
                    return Event::Unmatched(b);
                }
                let done = self.blocks.pop().unwrap();
                match self.blocks.last_mut() {
                    Some(next) => {
                        next.ham += done.ham;
                        next.cheese += done.cheese;
                        Event::TakenByFlexible
                    }
                    None => Event::BottomClosed { burger: b, remaining: done.count(b.other()) },
                }
            }
        }
    }
}

/// The letter budget of a scan ran out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("scan stopped after {letters} letters")]
pub struct CapExceeded {
    pub letters: u64,
}

/// Why a scan over a finite source stopped early.
#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ScanError {
    #[error(transparent)]
    Cap(#[from] CapExceeded),
    #[error("letter source ran dry after {letters} letters")]
    Exhausted { letters: u64 },
}

/// An `F` and everything back to its match.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FExcursion {
    /// Type of the burger that took the `F`.
    pub burger: Burger,
    /// Orders of the other type left pending in the reduced excursion.
    pub xi: u64,
    /// Letters in the excursion, the `F` included.
    pub eta: u64,
}

/// Scan leftward from an `F` that has just been read until it is matched.
///
/// `scratch` is reset and reused to avoid reallocating in hot loops.
pub fn scan_f_excursion<S: LetterSource>(
    src: &mut S,
    cap: u64,
    scratch: &mut PendingOrders,
) -> Result<FExcursion, ScanError> {
    scratch.reset_excursion();
    let mut eta = 1u64;
    loop {
        if eta > cap {
            return Err(CapExceeded { letters: eta }.into());
        }
        let l = src.next_letter().ok_or(ScanError::Exhausted { letters: eta })?;
        eta += 1;
        if let Event::BottomClosed { burger, remaining } = scratch.push(l) {
            return Ok(FExcursion { burger, xi: remaining, eta });
        }
    }
}

/// Lazily reveals the burgers of the past stack, top first.
///
/// The past is X(0), X(-1), ... read from `src`. A burger that no pending
/// order takes is the next burger of the stack left behind by time 0.
#[derive(Clone, Debug)]
pub struct PastStack<S> {
    src: S,
    pending: PendingOrders,
    read: u64,
    cap: u64,
}

impl<S: LetterSource> PastStack<S> {
    pub fn new(src: S, cap: u64) -> Self {
        PastStack { src, pending: PendingOrders::open(), read: 0, cap }
    }

    /// Letters of the past read so far.
    pub fn letters_read(&self) -> u64 {
        self.read
    }

    pub fn reveal(&mut self) -> Result<Burger, ScanError> {
        loop {
            if self.read >= self.cap {
                return Err(CapExceeded { letters: self.read }.into());
            }
            let l = self.src.next_letter().ok_or(ScanError::Exhausted { letters: self.read })?;
            self.read += 1;
            if let Event::Unmatched(b) = self.pending.push(l) {
                return Ok(b);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{word, Backward};

    fn scan(s: &str) -> FExcursion {
        // `s` ends with the F that opens the scan.
        let w = word(s);
        let (body, last) = w.letters.split_at(w.len() - 1);
        assert_eq!(last, &[Letter::Flexible]);
        let mut src = Backward::new(body);
        scan_f_excursion(&mut src, u64::MAX, &mut PendingOrders::excursion()).unwrap()
    }

    #[test]
    fn small_excursions() {
        assert_eq!(scan("cF"), FExcursion { burger: Burger::Cheese, xi: 0, eta: 2 });
        assert_eq!(scan("cHF"), FExcursion { burger: Burger::Cheese, xi: 1, eta: 3 });
        assert_eq!(scan("hChhCFHchcCHFCF").eta, 15);
    }

    #[test]
    fn past_stack_order() {
        // X(-3..0) = "chHc": the stack left at time 0 is c, c from the top.
        let w = word("chHc");
        let mut p = PastStack::new(Backward::new(&w.letters), 100);
        assert_eq!(p.reveal(), Ok(Burger::Cheese));
        assert_eq!(p.reveal(), Ok(Burger::Cheese));
        assert!(matches!(p.reveal(), Err(ScanError::Exhausted { .. })));
    }
}
