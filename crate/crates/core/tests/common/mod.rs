//! Fixtures and brute-force oracles shared by the integration tests. The
//! oracles work from `Lcn::step`/`Lcn::output` only and never touch the
//! graph machinery they are checked against.
#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use lcnkit::model::{Lcn, StateFeedback};
use rand::rngs::StdRng;
use rand::Rng;

pub fn absorbing_network() -> Lcn {
    Lcn::new(
        4,
        4,
        4,
        &[1, 1, 1, 1, 1, 2, 1, 2, 3, 3, 1, 1, 3, 4, 1, 2],
        None,
    )
    .unwrap()
}

pub fn ring_network() -> Lcn {
    Lcn::new(4, 2, 4, &[2, 2, 1, 3, 4, 4, 2, 2], None).unwrap()
}

pub fn ring_breaking_gain() -> StateFeedback {
    StateFeedback::new(4, 2, 2, &[1, 2, 2, 2, 1, 2, 1, 2]).unwrap()
}

pub const SPLIT_OUTPUT: [usize; 4] = [1, 1, 1, 2];

pub fn ring_with_output() -> Lcn {
    Lcn::new(4, 2, 2, &[2, 2, 1, 3, 4, 4, 2, 2], Some(&SPLIT_OUTPUT)).unwrap()
}

pub fn ring_feedback_with_output() -> Lcn {
    Lcn::new(4, 2, 2, &[2, 2, 3, 3, 4, 4, 2, 2], Some(&SPLIT_OUTPUT)).unwrap()
}

pub fn merging_network() -> Lcn {
    Lcn::new(4, 2, 2, &[1, 1, 1, 1, 1, 1, 2, 3], Some(&SPLIT_OUTPUT)).unwrap()
}

pub const EIGHT_STATE_L: [usize; 32] = [
    1, 1, 2, 3, 2, 3, 1, 4, 3, 5, 7, 6, 6, 7, 8, 1, 2, 3, 7, 6, 1, 2, 3, 4, 3, 4, 7, 8, 5, 6, 7, 4,
];
pub const EIGHT_STATE_H: [usize; 8] = [1, 1, 1, 1, 1, 2, 2, 2];

pub fn eight_state() -> Lcn {
    Lcn::new(8, 4, 4, &EIGHT_STATE_L, Some(&EIGHT_STATE_H)).unwrap()
}

pub fn three_state_open() -> Lcn {
    Lcn::new(3, 2, 2, &[1, 3, 3, 2, 1, 1], Some(&[1, 1, 2])).unwrap()
}

pub fn three_state_closed() -> Lcn {
    Lcn::new(3, 1, 2, &[1, 2, 1], Some(&[1, 1, 2])).unwrap()
}

pub fn random_lcn(rng: &mut StdRng, n: usize, m: usize, q: usize) -> Lcn {
    let l: Vec<usize> = (0..n * m).map(|_| rng.gen_range(1..=n)).collect();
    let h: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=q)).collect();
    Lcn::new(n, m, q, &l, Some(&h)).unwrap()
}

pub fn random_small_lcn(rng: &mut StdRng) -> Lcn {
    let n = rng.gen_range(1..=4);
    let m = rng.gen_range(1..=2);
    let q = rng.gen_range(1..=2);
    random_lcn(rng, n, m, q)
}

pub fn random_feedback(rng: &mut StdRng, n: usize, m: usize, p: usize) -> StateFeedback {
    let g: Vec<usize> = (0..n * p).map(|_| rng.gen_range(1..=m)).collect();
    StateFeedback::new(n, m, p, &g).unwrap()
}

/// Calls `f` with every vector in `[1, base]^len`.
pub fn for_each_tuple(len: usize, base: usize, mut f: impl FnMut(&[usize])) {
    let mut t = vec![1; len];
    loop {
        f(&t);
        let mut i = 0;
        loop {
            if i == len {
                return;
            }
            if t[i] < base {
                t[i] += 1;
                break;
            }
            t[i] = 1;
            i += 1;
        }
    }
}

/// Every network with `n` states, `m` inputs and `q` outputs.
pub fn for_each_lcn(n: usize, m: usize, q: usize, mut f: impl FnMut(&Lcn)) {
    for_each_tuple(n * m, n, |l| {
        for_each_tuple(n, q, |h| f(&Lcn::new(n, m, q, l, Some(h)).unwrap()))
    });
}

/// Observability by the definition: some pair of distinct initial states
/// produces identical outputs along some input sequence of length
/// `N(N+1)/2 + 1`. That many steps visit more pair-states than exist, so a
/// repeat (and hence an infinite indistinguishable run) is forced.
pub fn observable_by_sequences(lcn: &Lcn) -> bool {
    let n = lcn.state_dim();
    let horizon = n * (n + 1) / 2 + 1;
    fn indistinguishable(lcn: &Lcn, a: usize, b: usize, remaining: usize) -> bool {
        if lcn.output(a).unwrap() != lcn.output(b).unwrap() {
            return false;
        }
        if remaining == 0 {
            return true;
        }
        (1..=lcn.input_dim()).any(|u| {
            indistinguishable(
                lcn,
                lcn.step(a, u).unwrap(),
                lcn.step(b, u).unwrap(),
                remaining - 1,
            )
        })
    }
    !(1..=n).any(|a| (a + 1..=n).any(|b| indistinguishable(lcn, a, b, horizon)))
}

/// Controllability by the definition: every state reaches every state in at
/// least one step.
pub fn controllable_by_bfs(lcn: &Lcn) -> bool {
    let n = lcn.state_dim();
    (1..=n).all(|src| {
        let mut seen = vec![false; n + 1];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for u in 1..=lcn.input_dim() {
            let y = lcn.step(src, u).unwrap();
            if !seen[y] {
                seen[y] = true;
                queue.push_back(y);
            }
        }
        while let Some(x) = queue.pop_front() {
            for u in 1..=lcn.input_dim() {
                let y = lcn.step(x, u).unwrap();
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen[1..].iter().all(|&s| s)
    })
}

/// Successor map of the closed-loop system under `g`, by direct stepping.
pub fn closed_loop_map(lcn: &Lcn, g: &[usize]) -> Vec<usize> {
    (1..=lcn.state_dim())
        .map(|x| lcn.step(x, g[x - 1]).unwrap())
        .collect()
}

/// `Num_i` by brute force over all successor tuples.
pub fn num_by_brute_force(lcn: &Lcn, members: &[usize]) -> u128 {
    let sets: Vec<Vec<usize>> = members
        .iter()
        .map(|&x| {
            (1..=lcn.input_dim())
                .map(|u| lcn.step(x, u).unwrap())
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect()
        })
        .collect();
    let mut count = 0u128;
    let radix: Vec<usize> = sets.iter().map(Vec::len).collect();
    let mut idx = vec![0usize; sets.len()];
    loop {
        let picks: BTreeSet<usize> = idx.iter().zip(&sets).map(|(&i, s)| s[i]).collect();
        if picks.len() == sets.len() {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == idx.len() {
                return count;
            }
            idx[i] += 1;
            if idx[i] < radix[i] {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// Random network with `1..=max_n` states, `1..=max_m` inputs, `1..=max_q` outputs.
pub fn random_lcn_up_to(rng: &mut StdRng, max_n: usize, max_m: usize, max_q: usize) -> Lcn {
    let n = rng.gen_range(1..=max_n);
    let m = rng.gen_range(1..=max_m);
    let q = rng.gen_range(1..=max_q);
    random_lcn(rng, n, m, q)
}
