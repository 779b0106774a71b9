use hcburger::backward::PendingOrders;
use hcburger::bijection::{
    close_excursion, cluster_of_f, excursion_loop_len, triangulation_to_word, word_to_triangulation,
};
use hcburger::exploration::{
    decompose_past, explore_excursion, next_future_block, reduced_walk, RunStack, StepSampler,
};
use hcburger::rng::Stream;
use hcburger::oracle::{check_word, critical_weights, enumerate_words, is_f_excursion, verify_bijection, Predicate};
use hcburger::trajectory::{markov_split, trajectory};
use hcburger::word::{match_positions, reduce, sample_word, word, Backward, Forward, Letter, ReducedWord};
use hcburger::{Burger, WeightTable, Word};
use proptest::prelude::*;

fn letter() -> impl Strategy<Value = Letter> {
    prop::sample::select(Letter::ALL.to_vec())
}

fn any_word(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(letter(), 0..=max).prop_map(Word::new)
}

/// Put burgers in front of the unmatched orders and orders after the
/// unmatched burgers, so the result reduces to the empty word.
fn close(w: &Word) -> Word {
    let r = reduce(w);
    let mut out: Vec<Letter> = r
        .orders
        .iter()
        .rev()
        .map(|&o| Letter::burger_of(o.burger().unwrap_or(Burger::Ham)))
        .collect();
    out.extend_from_slice(&w.letters);
    out.extend(r.burgers.iter().rev().map(|&b| Letter::order_of(b.burger().unwrap())));
    Word::new(out)
}

fn all_words(n: usize, f: &mut impl FnMut(&Word)) {
    fn rec(cur: &mut Vec<Letter>, n: usize, f: &mut impl FnMut(&Word)) {
        if cur.len() == n {
            f(&Word::new(cur.clone()));
            return;
        }
        for l in Letter::ALL {
            cur.push(l);
            rec(cur, n, f);
            cur.pop();
        }
    }
    rec(&mut Vec::with_capacity(n), n, f);
}

/// Every F-excursion word of length at most `max`.
fn f_excursions(max: usize) -> Vec<Word> {
    fn rec(cur: &mut Vec<Letter>, stack: &mut Vec<Burger>, bottom: Burger, max: usize, out: &mut Vec<Word>) {
        if stack.is_empty() {
            let mut w = cur.clone();
            w.push(Letter::Flexible);
            out.push(Word::new(w));
        }
        if cur.len() + stack.len().max(1) + 1 > max {
            return;
        }
        for l in Letter::ALL {
            let undo: Option<(usize, Burger)>;
            match l {
                Letter::Ham | Letter::Cheese => {
                    if cur.len() + 2 + stack.len() + 1 > max {
                        continue;
                    }
                    stack.push(l.burger().unwrap());
                    undo = None;
                }
                Letter::Flexible => {
                    let Some(b) = stack.pop() else { continue };
                    undo = Some((stack.len(), b));
                }
                _ => {
                    let t = l.burger().unwrap();
                    match stack.iter().rposition(|&b| b == t) {
                        Some(i) => {
                            stack.remove(i);
                            undo = Some((i, t));
                        }
                        None if t == bottom => continue,
                        None => undo = None,
                    }
                }
            }
            cur.push(l);
            rec(cur, stack, bottom, max, out);
            cur.pop();
            match (l.is_burger(), undo) {
                (true, _) => {
                    stack.pop();
                }
                (false, Some((i, b))) => stack.insert(i, b),
                (false, None) => {}
            }
        }
    }
    let mut out = Vec::new();
    for b in [Burger::Ham, Burger::Cheese] {
        rec(&mut vec![Letter::burger_of(b)], &mut Vec::new(), b, max, &mut out);
    }
    out
}

fn tau_left(e: &Word) -> (u64, u64) {
    let body = &e.letters[..e.len() - 1];
    let o = explore_excursion(&mut Backward::new(body), u64::MAX, false, &mut PendingOrders::excursion()).unwrap();
    (o.steps, o.tau_matched())
}

#[test]
fn empty_reduction_iff_all_matched_exhaustive() {
    for n in 0..=8 {
        all_words(n, &mut |w| {
            assert_eq!(reduce(w).is_empty(), match_positions(w).unmatched().is_empty(), "{w}");
        });
    }
}

#[test]
fn concatenation_law_exhaustive_short() {
    let mut words = Vec::new();
    for n in 0..=3 {
        all_words(n, &mut |w| words.push(w.clone()));
    }
    for u in &words {
        for v in &words {
            let uv = Word::new([u.letters.clone(), v.letters.clone()].concat());
            let inner = Word::new([reduce(u).to_word().letters, reduce(v).to_word().letters].concat());
            assert_eq!(reduce(&uv), reduce(&inner), "{u} {v}");
        }
    }
}

#[test]
fn letter_frequencies_chi_square() {
    let n = 1_000_000;
    let w = sample_word(n, WeightTable::critical(), 2024);
    let wt = WeightTable::critical();
    let chi2: f64 = Letter::ALL
        .iter()
        .map(|&l| {
            let e = n as f64 * wt.weight(l);
            let o = w.count(l) as f64;
            (o - e) * (o - e) / e
        })
        .sum();
    // 4 degrees of freedom, 0.1% level.
    assert!(chi2 < 18.47, "chi2 = {chi2}");
}

#[test]
fn burger_count_walk_steps() {
    for seed in 0..5 {
        let t = trajectory(2000, seed);
        let mut prev = 0;
        for &s in &t.s {
            assert_eq!((s - prev).abs(), 1);
            prev = s;
        }
    }
}

#[test]
fn bijection_exhaustive_to_length_eight() {
    let expected = [4, 36, 432, 6048];
    for k in 1..=4 {
        let r = verify_bijection(k).unwrap();
        assert_eq!(r.words, expected[k - 1]);
        assert_eq!(r.by_loops.values().sum::<u64>(), r.words);
    }
}

#[test]
fn bijection_random_closed_words() {
    for seed in 0..10_000u64 {
        let n = 10 + (seed % 40) as usize;
        let w = close(&sample_word(n, WeightTable::critical(), seed));
        check_word(&w).unwrap();
    }
}

#[test]
fn loop_length_is_tau_left() {
    let ex = f_excursions(12);
    assert!(ex.len() > 1000);
    for e in &ex {
        assert!(is_f_excursion(e), "{e}");
        let (steps, _) = tau_left(e);
        assert_eq!(excursion_loop_len(e).unwrap() as u64, steps, "{e}");
    }
}

#[test]
fn excursion_list_matches_oracle_weights() {
    let w = critical_weights();
    let e = enumerate_words(12, &Predicate::FExcursion, &w, false).unwrap();
    let mut by_len = vec![e.by_length[0]; 13];
    for x in by_len.iter_mut() {
        *x -= *x;
    }
    for x in f_excursions(12) {
        by_len[x.len()] += w.word(&x);
    }
    assert_eq!(by_len, e.by_length);
}

#[test]
fn boundary_is_tau_matched_minus_one() {
    for e in f_excursions(10) {
        let (_, tm) = tau_left(&e);
        let w = close_excursion(&e);
        let t = word_to_triangulation(&w).unwrap();
        let c = cluster_of_f(&t, &w, w.len()).unwrap();
        assert_eq!(c.boundary_len as u64, tm - 1, "{e}");
    }
}

#[test]
fn pinned_figure_word() {
    let w = word("hcHhhcHcHCFhhhHCHF");
    let t = word_to_triangulation(&w).unwrap();
    assert_eq!((t.triangle_count(), t.loop_count), (18, 3));
    assert_eq!(triangulation_to_word(&t).unwrap(), w);
}

#[test]
fn markov_identity_pathwise() {
    let mut checked = 0;
    for r in 0..300 {
        let m = markov_split(WeightTable::critical(), 500, 11, r, 64 * 500);
        if let Some(d) = m.defect() {
            assert_eq!(d, 0, "replica {r}");
            checked += 1;
        }
    }
    assert!(checked > 200);
}

#[test]
fn past_windows_are_future_blocks() {
    let mut s = StepSampler::new(Stream::new(5, 0), 1 << 20);
    let mut stack = RunStack::default();
    let mut windows = 0;
    for _ in 0..2000 {
        let Ok(e) = s.excursion(true) else { continue };
        for (u, (len, h, c)) in (1..).zip(e.windows()) {
            let w = e.window_word(u);
            assert_eq!(w.len() as u64, len);
            let b = next_future_block(&mut Forward::new(&w.letters), len, false, &mut stack).unwrap().unwrap();
            assert_eq!((b.tau_f, b.hstar, b.cstar), (len, h, c), "{w}");
            windows += 1;
        }
    }
    assert!(windows > 5000);
}

fn orders_minus_burgers(r: &ReducedWord, b: Burger) -> i64 {
    let o = r.orders.iter().filter(|&&l| l == Letter::order_of(b)).count() as i64;
    let u = r.burgers.iter().filter(|&&l| l == Letter::burger_of(b)).count() as i64;
    o - u
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn empty_reduction_iff_all_matched(w in any_word(12)) {
        prop_assert_eq!(reduce(&w).is_empty(), match_positions(&w).unmatched().is_empty());
    }

    #[test]
    fn matching_stable_under_extension(u in any_word(12), v in any_word(8)) {
        let mu = match_positions(&u);
        let uv = Word::new([u.letters.clone(), v.letters.clone()].concat());
        let muv = match_positions(&uv);
        for i in 0..u.len() {
            if u.letters[i].is_order() && mu.partner(i).is_some() {
                prop_assert_eq!(mu.partner(i), muv.partner(i));
            }
        }
    }

    #[test]
    fn concatenation_law(u in any_word(8), v in any_word(8)) {
        let uv = Word::new([u.letters.clone(), v.letters.clone()].concat());
        let inner = Word::new([reduce(&u).to_word().letters, reduce(&v).to_word().letters].concat());
        prop_assert_eq!(reduce(&uv), reduce(&inner));
    }

    #[test]
    fn loop_count_is_f_count_plus_one(w in any_word(30)) {
        let w = close(&w);
        // The empty word has no triangles and no loop.
        prop_assume!(!w.is_empty());
        let t = word_to_triangulation(&w).unwrap();
        prop_assert_eq!(t.loop_count, w.count(Letter::Flexible) + 1);
        prop_assert_eq!(triangulation_to_word(&t).unwrap(), w);
    }

    #[test]
    fn time_change_and_coupling(seed in 0u64..1_000_000) {
        let past = sample_word(4000, WeightTable::critical(), seed);
        let steps = decompose_past(&mut Backward::new(&past.letters), 40, u64::MAX);
        prop_assume!(steps.is_ok());
        let steps = steps.unwrap();
        let p = reduced_walk(&steps);
        let n = past.len();
        for k in 0..steps.len() {
            let sigma = p.sigma[k] as usize;
            let r = reduce(&Word::new(past.letters[n - sigma..].to_vec()));
            prop_assert_eq!(p.ham_lazy[k], orders_minus_burgers(&r, Burger::Ham));
            prop_assert_eq!(p.cheese_lazy[k], orders_minus_burgers(&r, Burger::Cheese));
        }
        let (h, c) = p.rebuild_lazy();
        prop_assert_eq!(h, p.ham_lazy.clone());
        prop_assert_eq!(c, p.cheese_lazy.clone());
        // σ at the first step where the two coordinates sum to -1 is the
        // first time the raw backward count does.
        if let Some(t1) = p.first_sum_below() {
            let mut s = 0i64;
            let mut hit = None;
            for (m, &l) in past.letters.iter().rev().enumerate() {
                s += if l.is_burger() { -1 } else { 1 };
                if s == -1 {
                    hit = Some(m as u64 + 1);
                    break;
                }
            }
            prop_assert_eq!(hit, Some(p.sigma[t1 - 1]));
        }
    }

    #[test]
    fn future_blocks_are_orders_then_f(seed in 0u64..1_000_000) {
        let w = sample_word(3000, WeightTable::critical(), seed);
        let mut src = Forward::new(&w.letters);
        let mut stack = RunStack::default();
        while let Ok(Some(b)) = next_future_block(&mut src, 3000, true, &mut stack) {
            let r = reduce(b.word.as_ref().unwrap());
            prop_assert!(r.burgers.is_empty());
            prop_assert_eq!(r.orders.last(), Some(&Letter::Flexible));
            prop_assert!(r.orders[..r.orders.len() - 1].iter().all(|&l| l != Letter::Flexible));
            prop_assert_eq!(r.orders.len() as u64, b.hstar + b.cstar + 1);
        }
    }
}
