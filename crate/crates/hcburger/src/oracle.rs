//! Exact computations on short words.
//!
//! Probabilities are carried in a [`Mass`]: dyadic rationals at `p = 1/2`,
//! `f64` otherwise. Enumeration runs over reduction states rather than
//! words wherever the predicate allows it.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Debug;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};

use crate::bijection::{extract_fk_map, triangulation_to_word, word_to_triangulation};
use crate::exploration::{ExcursionStep, StepKind};
use crate::word::{match_positions, reduce, Burger, Letter, ReducedWord, WeightTable, Word};

/// Exact rational probability.
pub type Dyadic = Ratio<i128>;

pub trait Mass:
    Clone + PartialEq + PartialOrd + Debug + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn as_f64(&self) -> f64;
}

impl Mass for Dyadic {
    fn zero() -> Self {
        Ratio::from_integer(0)
    }
    fn one() -> Self {
        Ratio::from_integer(1)
    }
    fn as_f64(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}

impl Mass for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn as_f64(&self) -> f64 {
        *self
    }
}

/// Letter weights in a [`Mass`], indexed by [`Letter::index`].
#[derive(Clone, Debug, PartialEq)]
pub struct Weights<M>(pub [M; 5]);

impl<M: Mass> Weights<M> {
    pub fn of(&self, l: Letter) -> M {
        self.0[l.index()].clone()
    }

    pub fn word(&self, w: &Word) -> M {
        w.letters.iter().fold(M::one(), |acc, &l| acc * self.of(l))
    }
}

/// `1/4, 1/4, 1/8, 1/8, 1/4`.
pub fn critical_weights() -> Weights<Dyadic> {
    let r = |n, d| Ratio::new(n, d);
    Weights([r(1, 4), r(1, 4), r(1, 8), r(1, 8), r(1, 4)])
}

pub fn float_weights(w: &WeightTable) -> Weights<f64> {
    Weights(Letter::ALL.map(|l| w.weight(l)))
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("length {n} above the limit {max} for this enumeration")]
    SizeCap { n: usize, max: usize },
    #[error("bijection check failed on {word}: {reason}")]
    Bijection { word: String, reason: String },
}

/// What an enumeration counts.
#[derive(Clone)]
pub enum Predicate {
    Any,
    EmptyReduction,
    ReducesTo(ReducedWord),
    /// Words `b ... F` whose final `F` is matched to the first letter.
    FExcursion,
    /// Any test on the word; enumerated letter by letter.
    Custom(&'static str, fn(&Word) -> bool),
}

impl Predicate {
    pub fn describe(&self) -> String {
        match self {
            Predicate::Any => "any word".into(),
            Predicate::EmptyReduction => "empty reduction".into(),
            Predicate::ReducesTo(r) => format!("reduces to {r}"),
            Predicate::FExcursion => "F-excursion".into(),
            Predicate::Custom(d, _) => (*d).into(),
        }
    }
}

/// Total weight of the words of each length up to `n` that satisfy a
/// predicate.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedEnumeration<M> {
    pub description: String,
    /// `by_length[k]` is the weight of matching words of length `k`.
    pub by_length: Vec<M>,
    /// Matching words of length `n`, when asked for.
    pub words: Vec<(Word, M)>,
}

impl<M: Mass> WeightedEnumeration<M> {
    pub fn total(&self) -> M {
        self.by_length.last().cloned().unwrap_or_else(M::zero)
    }
}

/// Largest length for predicates that need every word.
pub const MAX_BRUTE_FORCE: usize = 10;
/// Largest length for predicates that factor through the reduction.
pub const MAX_ENUMERATION: usize = 16;

/// Reduction state: unmatched orders, then unmatched burgers.
type State = (Vec<Letter>, Vec<Letter>);

fn push_letter(s: &State, l: Letter) -> State {
    let (mut o, mut b) = s.clone();
    match l {
        Letter::Ham | Letter::Cheese => b.push(l),
        Letter::HamOrder | Letter::CheeseOrder => {
            let want = Letter::burger_of(l.burger().unwrap());
            match b.iter().rposition(|&x| x == want) {
                Some(i) => {
                    b.remove(i);
                }
                None => o.push(l),
            }
        }
        Letter::Flexible => {
            if b.pop().is_none() {
                o.push(l);
            }
        }
    }
    (o, b)
}

/// Enumerate words of length `n` with the weights `w`.
///
/// `keep` retains the matching words of length `n`; it forces the
/// letter-by-letter route.
pub fn enumerate_words<M: Mass>(
    n: usize,
    pred: &Predicate,
    w: &Weights<M>,
    keep: bool,
) -> Result<WeightedEnumeration<M>, OracleError> {
    let factors = !matches!(pred, Predicate::Custom(..) | Predicate::Any);
    if keep || !factors {
        if n > MAX_BRUTE_FORCE {
            return Err(OracleError::SizeCap { n, max: MAX_BRUTE_FORCE });
        }
        return Ok(brute_force(n, pred, w, keep));
    }
    if n > MAX_ENUMERATION {
        return Err(OracleError::SizeCap { n, max: MAX_ENUMERATION });
    }
    if let Predicate::FExcursion = pred {
        let pmf = excursion_table(n, w);
        let mut by_length = vec![M::zero(); n + 1];
        for ((_, _, eta), m) in pmf {
            by_length[eta] = by_length[eta].clone() + m;
        }
        return Ok(WeightedEnumeration { description: pred.describe(), by_length, words: vec![] });
    }
    let alive = |s: &State, left: usize| -> bool {
        match pred {
            Predicate::EmptyReduction => s.0.is_empty() && s.1.len() <= left,
            Predicate::ReducesTo(r) => s.0.len() <= r.orders.len() && s.0[..] == r.orders[..s.0.len()],
            _ => true,
        }
    };
    let accept = |s: &State| -> bool {
        match pred {
            Predicate::EmptyReduction => s.0.is_empty() && s.1.is_empty(),
            Predicate::ReducesTo(r) => s.0 == r.orders && s.1 == r.burgers,
            _ => unreachable!(),
        }
    };
    let mut layer: HashMap<State, M> = HashMap::new();
    layer.insert((vec![], vec![]), M::one());
    let mut by_length = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let acc = layer.iter().filter(|(s, _)| accept(s)).fold(M::zero(), |a, (_, m)| a + m.clone());
        by_length.push(acc);
        if k == n {
            break;
        }
        let mut next: HashMap<State, M> = HashMap::new();
        for (s, m) in &layer {
            for l in Letter::ALL {
                let t = push_letter(s, l);
                if !alive(&t, n - k - 1) {
                    continue;
                }
                let v = m.clone() * w.of(l);
                match next.get_mut(&t) {
                    Some(x) => *x = x.clone() + v,
                    None => {
                        next.insert(t, v);
                    }
                }
            }
        }
        layer = next;
    }
    Ok(WeightedEnumeration { description: pred.describe(), by_length, words: vec![] })
}

fn matches(pred: &Predicate, w: &Word) -> bool {
    match pred {
        Predicate::Any => true,
        Predicate::EmptyReduction => reduce(w).is_empty(),
        Predicate::ReducesTo(r) => &reduce(w) == r,
        Predicate::FExcursion => is_f_excursion(w),
        Predicate::Custom(_, f) => f(w),
    }
}

/// The last letter is an `F` matched to the first.
pub fn is_f_excursion(w: &Word) -> bool {
    let n = w.len();
    n >= 2 && w.letters[n - 1] == Letter::Flexible && match_positions(w).partner(n - 1) == Some(0)
}

fn brute_force<M: Mass>(n: usize, pred: &Predicate, w: &Weights<M>, keep: bool) -> WeightedEnumeration<M> {
    let mut by_length = vec![M::zero(); n + 1];
    let mut words = Vec::new();
    let mut cur = Word::new(Vec::with_capacity(n));
    let mut total = M::zero();
    fn rec<M: Mass>(
        cur: &mut Word,
        m: M,
        n: usize,
        pred: &Predicate,
        w: &Weights<M>,
        keep: bool,
        total: &mut M,
        words: &mut Vec<(Word, M)>,
    ) {
        if cur.len() == n {
            if matches(pred, cur) {
                *total = total.clone() + m.clone();
                if keep {
                    words.push((cur.clone(), m));
                }
            }
            return;
        }
        for l in Letter::ALL {
            cur.letters.push(l);
            rec(cur, m.clone() * w.of(l), n, pred, w, keep, total, words);
            cur.letters.pop();
        }
    }
    rec(&mut cur, M::one(), n, pred, w, keep, &mut total, &mut words);
    by_length[n] = total;
    WeightedEnumeration { description: pred.describe(), by_length, words }
}

/// Weight of `F`-excursions by `(match type, ξ, η)` for `η ≤ max_len`.
fn excursion_table<M: Mass>(max_len: usize, w: &Weights<M>) -> BTreeMap<(Burger, u64, usize), M> {
    let mut out = BTreeMap::new();
    for b in [Burger::Ham, Burger::Cheese] {
        // State: leftover orders of the other type, and the burgers stacked
        // above the first letter as (height, bits), bit set for cheese.
        let mut layer: HashMap<(u64, u32, u32), M> = HashMap::new();
        layer.insert((0, 0, 0), w.of(Letter::burger_of(b)));
        for len in 2..=max_len {
            // Close with the final F.
            for (&(xi, h, _), m) in &layer {
                if h == 0 {
                    let v = m.clone() * w.of(Letter::Flexible);
                    let e = out.entry((b, xi, len)).or_insert_with(M::zero);
                    *e = e.clone() + v;
                }
            }
            if len == max_len {
                break;
            }
            let room = (max_len - len) as u32;
            let mut next: HashMap<(u64, u32, u32), M> = HashMap::new();
            for (&(xi, h, bits), m) in &layer {
                for l in Letter::ALL {
                    let t = match l {
                        Letter::Ham | Letter::Cheese => {
                            // Every burger above the bottom must be eaten before the end.
                            if h + 1 > room {
                                continue;
                            }
                            let bit = (l == Letter::Cheese) as u32;
                            (xi, h + 1, bits | (bit << h))
                        }
                        Letter::Flexible => {
                            if h == 0 {
                                continue;
                            }
                            (xi, h - 1, bits & !(1 << (h - 1)))
                        }
                        Letter::HamOrder | Letter::CheeseOrder => {
                            let want = (l == Letter::CheeseOrder) as u32;
                            match (0..h).rev().find(|&i| (bits >> i) & 1 == want) {
                                Some(i) => {
                                    let low = bits & ((1 << i) - 1);
                                    let high = (bits >> (i + 1)) << i;
                                    (xi, h - 1, low | high)
                                }
                                None if l.burger() == Some(b) => continue,
                                None => (xi + 1, h, bits),
                            }
                        }
                    };
                    let v = m.clone() * w.of(l);
                    match next.get_mut(&t) {
                        Some(x) => *x = x.clone() + v,
                        None => {
                            next.insert(t, v);
                        }
                    }
                }
            }
            layer = next;
        }
    }
    out
}

/// A pmf known exactly on some atoms, with the mass left out.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedPmf<K, M> {
    pub atoms: Vec<(K, M)>,
    /// `1 - Σ atoms`, exact when the total mass is known to be one.
    pub residual: M,
}

impl<K: PartialEq, M: Mass> TruncatedPmf<K, M> {
    pub fn enumerated(&self) -> M {
        self.atoms.iter().fold(M::zero(), |a, (_, m)| a + m.clone())
    }

    pub fn get(&self, k: &K) -> M {
        self.atoms.iter().find(|(x, _)| x == k).map(|(_, m)| m.clone()).unwrap_or_else(M::zero)
    }
}

/// Joint law of the pooled step `(kind, ξ, η)` restricted to `η ≤ max_len`.
///
/// Every step is finite almost surely, so the residual is exactly the mass
/// of longer steps.
pub fn excursion_pmf(max_len: usize) -> Result<TruncatedPmf<ExcursionStep, Dyadic>, OracleError> {
    excursion_pmf_with(max_len, &critical_weights())
}

pub fn excursion_pmf_with<M: Mass>(
    max_len: usize,
    w: &Weights<M>,
) -> Result<TruncatedPmf<ExcursionStep, M>, OracleError> {
    if max_len > MAX_ENUMERATION {
        return Err(OracleError::SizeCap { n: max_len, max: MAX_ENUMERATION });
    }
    let mut atoms: Vec<(ExcursionStep, M)> = Vec::new();
    if max_len >= 1 {
        for l in [Letter::Ham, Letter::Cheese, Letter::HamOrder, Letter::CheeseOrder] {
            atoms.push((ExcursionStep::single(l), w.of(l)));
        }
    }
    for ((b, xi, eta), m) in excursion_table(max_len, w) {
        atoms.push((ExcursionStep { kind: StepKind::Excursion(b), xi: xi as i64, eta: eta as u64 }, m));
    }
    let total = atoms.iter().fold(M::zero(), |a, (_, m)| a + m.clone());
    Ok(TruncatedPmf { atoms, residual: M::one() - total })
}

/// `P(τ^h = m)` from the truncated step law, with its error bars.
#[derive(Clone, Debug, PartialEq)]
pub struct TauPmf {
    /// `lower[m - 1]` counts paths made of enumerated steps only.
    pub lower: Vec<BigRational>,
    /// Mass of ham-side steps longer than the truncation.
    pub step_residual: Dyadic,
}

impl TauPmf {
    /// `P(τ^h = m) ∈ [lower, lower + (m - 1)·residual]`: only the first
    /// `m - 1` steps can be unenumerated, the last one being `h`.
    pub fn bounds(&self, m: usize) -> (f64, f64) {
        let lo = self.lower[m - 1].to_f64().unwrap_or(f64::NAN);
        (lo, lo + (m as f64 - 1.0) * self.step_residual.as_f64())
    }
}

fn big(d: &Dyadic) -> BigRational {
    BigRational::new(BigInt::from(*d.numer()), BigInt::from(*d.denom()))
}

/// Exact law of the non-lazy hamburger hitting time for `τ ≤ max_tau`,
/// using steps of at most `max_len` letters.
pub fn exact_tau_pmf(max_len: usize, max_tau: usize) -> Result<TauPmf, OracleError> {
    if max_len > 14 {
        return Err(OracleError::SizeCap { n: max_len, max: 14 });
    }
    let pmf = excursion_pmf(max_len)?;
    // Ham-side law: h-side steps of the pooled law, doubled.
    let two = Ratio::from_integer(2);
    let mut up: BTreeMap<i64, Dyadic> = BTreeMap::new();
    let mut down = <Dyadic as Mass>::zero();
    for (s, m) in &pmf.atoms {
        if s.side() != Burger::Ham {
            continue;
        }
        if s.xi < 0 {
            down += *m * two;
        } else {
            *up.entry(s.xi).or_insert_with(<Dyadic as Mass>::zero) += *m * two;
        }
    }
    let down = big(&down);
    let up: Vec<(i64, BigRational)> = up.iter().map(|(&k, q)| (k, big(q))).collect();
    let mut lower = Vec::with_capacity(max_tau);
    // dist[level] after k steps without hitting -1.
    let mut dist: BTreeMap<i64, BigRational> = BTreeMap::new();
    dist.insert(0, BigRational::one());
    for _ in 0..max_tau {
        lower.push(dist.get(&0).cloned().unwrap_or_else(BigRational::zero) * &down);
        let mut next: BTreeMap<i64, BigRational> = BTreeMap::new();
        for (&lv, m) in &dist {
            if lv > 0 {
                *next.entry(lv - 1).or_insert_with(BigRational::zero) += m * &down;
            }
            for (k, q) in &up {
                *next.entry(lv + k).or_insert_with(BigRational::zero) += m * q;
            }
        }
        dist = next;
    }
    // The two sides carry the same residual.
    Ok(TauPmf { lower, step_residual: pmf.residual })
}

/// Outcome of an exhaustive bijection check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BijectionReport {
    pub k: usize,
    pub words: u64,
    /// Number of words per loop count.
    pub by_loops: BTreeMap<usize, u64>,
}

impl BijectionReport {
    pub fn to_text(&self) -> String {
        let mut s = format!("k={} words={}\n", self.k, self.words);
        for (l, c) in &self.by_loops {
            s.push_str(&format!("loops={l} count={c}\n"));
        }
        s
    }
}

/// Round trip and structural checks on one word with empty reduction.
/// Returns the number of loops.
pub fn check_word(w: &Word) -> Result<usize, OracleError> {
    let fail = |reason: String| OracleError::Bijection { word: w.to_string(), reason };
    let t = word_to_triangulation(w).map_err(|e| fail(e.to_string()))?;
    t.validate().map_err(|e| fail(e.to_string()))?;
    if t.triangle_count() != w.len() {
        return Err(fail(format!("{} triangles", t.triangle_count())));
    }
    let f = w.count(Letter::Flexible);
    if t.loop_count != f + 1 {
        return Err(fail(format!("{} loops for {f} F letters", t.loop_count)));
    }
    let back = triangulation_to_word(&t).map_err(|e| fail(e.to_string()))?;
    if &back != w {
        return Err(fail(format!("round trip gave {back}")));
    }
    let m = extract_fk_map(&t).map_err(|e| fail(e.to_string()))?;
    if m.edges.len() != w.len() / 2 || m.euler_characteristic() != 2 {
        return Err(fail(format!("map with {} edges, Euler {}", m.edges.len(), m.euler_characteristic())));
    }
    Ok(t.loop_count)
}

/// Check every word of length `2k` with empty reduction.
pub fn verify_bijection(k: usize) -> Result<BijectionReport, OracleError> {
    if k > 5 {
        return Err(OracleError::SizeCap { n: 2 * k, max: 10 });
    }
    let mut report = BijectionReport { k, words: 0, by_loops: BTreeMap::new() };
    let mut cur = Vec::with_capacity(2 * k);
    let mut err = None;
    fn rec(
        cur: &mut Vec<Letter>,
        state: &State,
        n: usize,
        report: &mut BijectionReport,
        err: &mut Option<OracleError>,
    ) {
        if err.is_some() {
            return;
        }
        if cur.len() == n {
            let w = Word::new(cur.clone());
            match check_word(&w) {
                Ok(l) => {
                    report.words += 1;
                    *report.by_loops.entry(l).or_default() += 1;
                }
                Err(e) => *err = Some(e),
            }
            return;
        }
        for l in Letter::ALL {
            let t = push_letter(state, l);
            if !t.0.is_empty() || t.1.len() > n - cur.len() - 1 {
                continue;
            }
            cur.push(l);
            rec(cur, &t, n, report, err);
            cur.pop();
        }
    }
    rec(&mut cur, &(vec![], vec![]), 2 * k, &mut report, &mut err);
    match err {
        Some(e) => Err(e),
        None => Ok(report),
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::word;

    fn r(n: i128, d: i128) -> Dyadic {
        Ratio::new(n, d)
    }

    #[test]
    fn two_letter_empty_reduction() {
        let e = enumerate_words(2, &Predicate::EmptyReduction, &critical_weights(), false).unwrap();
        assert_eq!(e.total(), r(3, 16));
        let b = enumerate_words(2, &Predicate::EmptyReduction, &critical_weights(), true).unwrap();
        assert_eq!(b.total(), r(3, 16));
        assert_eq!(b.words.len(), 4);
    }

    #[test]
    fn word_weight() {
        assert_eq!(critical_weights().word(&word("hcHFcH")), r(1, 1 << 14));
    }

    #[test]
    fn short_steps() {
        let p = excursion_pmf(4).unwrap();
        let eta1 = p.atoms.iter().filter(|(s, _)| s.eta == 1).fold(<Dyadic as Mass>::zero(), |a, (_, m)| a + *m);
        assert_eq!(eta1, r(3, 4));
        let eta2 = p.atoms.iter().filter(|(s, _)| s.eta == 2).fold(<Dyadic as Mass>::zero(), |a, (_, m)| a + *m);
        assert_eq!(eta2, r(1, 8));
    }

    #[test]
    fn tau_one_is_half() {
        let t = exact_tau_pmf(6, 3).unwrap();
        assert_eq!(t.lower[0], big(&r(1, 2)));
    }

    #[test]
    fn bijection_k1() {
        let rep = verify_bijection(1).unwrap();
        assert_eq!(rep.words, 4);
        assert_eq!(rep.by_loops.get(&1), Some(&2));
        assert_eq!(rep.by_loops.get(&2), Some(&2));
    }
}
