//! Deciding whether state feedback can make an unobservable network
//! observable.
//!
//! Any feedback `G` with `P` new inputs that achieves observability can be
//! replaced by the closed-loop controller reading one column of every block
//! `G_i`: its observability graph has a subset of the edges. So the search
//! runs over closed-loop controllers only, which are finite in number.
//!
//! Two states with the same output must never be sent to the same successor
//! (that is an edge into the diagonal), so candidates are generated as
//! successor maps that are injective on each output class. Their number is
//! the product of the per-class counts `Num_i`; when one of them is zero no
//! controller can work.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{is_controllable, is_observable};
use crate::feedback::{apply_closed_loop, ClosedLoopController};
use crate::model::Lcn;

/// States grouped by output value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OutputClass {
    /// 1-based output index `k_i`.
    pub output: usize,
    /// 1-based states, ascending.
    pub members: Vec<usize>,
}

impl OutputClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Partition of the states by output, classes ordered by output index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OutputClassPartition {
    pub classes: Vec<OutputClass>,
}

pub fn output_partition(lcn: &Lcn) -> OutputClassPartition {
    let mut by_output: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for x in 1..=lcn.state_dim() {
        by_output.entry(lcn.out0(x - 1) + 1).or_default().push(x);
    }
    OutputClassPartition {
        classes: by_output
            .into_iter()
            .map(|(output, members)| OutputClass { output, members })
            .collect(),
    }
}

/// Which constant-block pattern was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum ConstantBlockRule {
    /// `L_j = L_k = δ_N^target ⊗ 1ᵀ`: the pair always merges.
    SharedTarget { target: usize },
    /// `L_j = δ_N^j ⊗ 1ᵀ`, `L_k = δ_N^k ⊗ 1ᵀ`: the pair is frozen.
    Fixed,
    /// `L_j = δ_N^k ⊗ 1ᵀ`, `L_k = δ_N^j ⊗ 1ᵀ`: the pair swaps forever.
    Swapped,
}

/// Two equal-output states `first < second` whose blocks defeat every
/// controller.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConstantBlockWitness {
    #[serde(flatten)]
    pub rule: ConstantBlockRule,
    pub first: usize,
    pub second: usize,
}

impl ConstantBlockWitness {
    /// 1 for the shared-target pattern, 2 for fixed or swapped pairs.
    pub fn rule_number(&self) -> u8 {
        match self.rule {
            ConstantBlockRule::SharedTarget { .. } => 1,
            ConstantBlockRule::Fixed | ConstantBlockRule::Swapped => 2,
        }
    }
}

fn constant_block(lcn: &Lcn, x: usize) -> Option<usize> {
    let first = lcn.next0(x, 0);
    (1..lcn.input_dim())
        .all(|u| lcn.next0(x, u) == first)
        .then_some(first)
}

/// Looks for equal-output states `j < k` with constant blocks that either
/// share a target or fix/swap the pair. Shared targets are searched first.
pub fn constant_block_witness(lcn: &Lcn) -> Option<ConstantBlockWitness> {
    let n = lcn.state_dim();
    let constant: Vec<Option<usize>> = (0..n).map(|x| constant_block(lcn, x)).collect();
    let pairs = || (0..n).flat_map(move |j| (j + 1..n).map(move |k| (j, k)));
    let same_output = |j: usize, k: usize| lcn.out0(j) == lcn.out0(k);

    let shared = pairs().find_map(|(j, k)| match (constant[j], constant[k]) {
        (Some(a), Some(b)) if a == b && same_output(j, k) => Some(ConstantBlockWitness {
            rule: ConstantBlockRule::SharedTarget { target: a + 1 },
            first: j + 1,
            second: k + 1,
        }),
        _ => None,
    });
    shared.or_else(|| {
        pairs().find_map(|(j, k)| {
            let rule = match (constant[j], constant[k]) {
                (Some(a), Some(b)) if a == j && b == k => ConstantBlockRule::Fixed,
                (Some(a), Some(b)) if a == k && b == j => ConstantBlockRule::Swapped,
                _ => return None,
            };
            same_output(j, k).then_some(ConstantBlockWitness {
                rule,
                first: j + 1,
                second: k + 1,
            })
        })
    })
}

/// Distinct successors of each state, ascending, 0-based.
fn successor_sets(lcn: &Lcn) -> Vec<Vec<usize>> {
    (0..lcn.state_dim())
        .map(|x| {
            let mut s: Vec<usize> = (0..lcn.input_dim()).map(|u| lcn.next0(x, u)).collect();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect()
}

/// Number of ways to pick one successor per member of class `class_index`
/// (0-based) with all picks pairwise different.
pub fn num_factor(lcn: &Lcn, partition: &OutputClassPartition, class_index: usize) -> u128 {
    let succ = successor_sets(lcn);
    let options: Vec<&[usize]> = partition.classes[class_index]
        .members
        .iter()
        .map(|&x| succ[x - 1].as_slice())
        .collect();
    let mut used = vec![false; lcn.state_dim()];
    count_injective(&options, &mut used)
}

fn count_injective(options: &[&[usize]], used: &mut [bool]) -> u128 {
    match options {
        [] => 1,
        [last] => last.iter().filter(|&&v| !used[v]).count() as u128,
        [head, rest @ ..] => {
            let mut total = 0u128;
            for &v in *head {
                if used[v] {
                    continue;
                }
                used[v] = true;
                total = total.saturating_add(count_injective(rest, used));
                used[v] = false;
            }
            total
        }
    }
}

/// Candidate-count bounds. Products saturate at `u128::MAX`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bounds {
    /// `∏ |Col(L_i)|`: distinct closed-loop successor maps.
    pub naive: u128,
    /// `∏ Num_i`: those that are injective on every output class.
    pub refined: u128,
    /// `Num_i` per output class, in partition order.
    pub num_factors: Vec<u128>,
}

pub fn bounds(lcn: &Lcn) -> Bounds {
    let partition = output_partition(lcn);
    let naive = successor_sets(lcn)
        .iter()
        .fold(1u128, |acc, s| acc.saturating_mul(s.len() as u128));
    let num_factors: Vec<u128> = (0..partition.classes.len())
        .map(|i| num_factor(lcn, &partition, i))
        .collect();
    let refined = num_factors
        .iter()
        .fold(1u128, |acc, &f| acc.saturating_mul(f));
    Bounds {
        naive,
        refined,
        num_factors,
    }
}

/// First output class (1-based, partition order) in which every choice of
/// successors collides. Decided by bipartite matching between members and
/// successor values, independently of the counting in [`num_factor`].
pub fn colliding_class(lcn: &Lcn, partition: &OutputClassPartition) -> Option<usize> {
    let succ = successor_sets(lcn);
    partition
        .classes
        .iter()
        .position(|class| {
            let options: Vec<&[usize]> = class
                .members
                .iter()
                .map(|&x| succ[x - 1].as_slice())
                .collect();
            !has_distinct_representatives(&options, lcn.state_dim())
        })
        .map(|i| i + 1)
}

/// Kuhn's augmenting-path matching: can every member get its own value?
fn has_distinct_representatives(options: &[&[usize]], n_values: usize) -> bool {
    fn augment(
        member: usize,
        options: &[&[usize]],
        owner: &mut [Option<usize>],
        visited: &mut [bool],
    ) -> bool {
        for &v in options[member] {
            if visited[v] {
                continue;
            }
            visited[v] = true;
            if owner[v].is_none_or(|other| augment(other, options, owner, visited)) {
                owner[v] = Some(member);
                return true;
            }
        }
        false
    }

    if options.len() > n_values {
        return false;
    }
    let mut owner = vec![None; n_values];
    (0..options.len()).all(|member| {
        let mut visited = vec![false; n_values];
        augment(member, options, &mut owner, &mut visited)
    })
}

/// Lazily enumerates closed-loop controllers, one per successor map that is
/// injective on every output class.
///
/// States are visited class by class (classes by output index, members
/// ascending) and successors are tried in ascending order, so maps come out
/// in lexicographic order of that state sequence. Each chosen successor is
/// realised by the smallest input producing it.
#[derive(Debug, Clone)]
pub struct CandidateEnumerator {
    /// 0-based state at each search position.
    order: Vec<usize>,
    /// Class of each search position.
    class_of: Vec<usize>,
    /// `(successor, smallest input)` pairs per search position, 0-based.
    options: Vec<Vec<(usize, usize)>>,
    /// Per class, which successors are taken.
    used: Vec<Vec<bool>>,
    choice: Vec<usize>,
    started: bool,
    done: bool,
}

impl CandidateEnumerator {
    pub fn new(lcn: &Lcn, partition: &OutputClassPartition) -> Self {
        let n = lcn.state_dim();
        let mut order = Vec::with_capacity(n);
        let mut class_of = Vec::with_capacity(n);
        for (c, class) in partition.classes.iter().enumerate() {
            for &x in &class.members {
                order.push(x - 1);
                class_of.push(c);
            }
        }
        let options = order
            .iter()
            .map(|&x| {
                let mut first_input: BTreeMap<usize, usize> = BTreeMap::new();
                for u in 0..lcn.input_dim() {
                    first_input.entry(lcn.next0(x, u)).or_insert(u);
                }
                first_input.into_iter().collect()
            })
            .collect();
        Self {
            order,
            class_of,
            options,
            used: vec![vec![false; n]; partition.classes.len()],
            choice: vec![0; n],
            started: false,
            done: false,
        }
    }

    /// Fills positions `pos..` starting with option `start` at `pos`,
    /// backtracking as needed. Positions before `pos` are assigned.
    fn search(&mut self, mut pos: usize, mut start: usize) -> bool {
        let len = self.order.len();
        loop {
            if pos == len {
                return true;
            }
            let class = self.class_of[pos];
            let used = &self.used[class];
            let found = self.options[pos][start..]
                .iter()
                .position(|&(v, _)| !used[v])
                .map(|k| k + start);
            match found {
                Some(k) => {
                    self.choice[pos] = k;
                    self.used[class][self.options[pos][k].0] = true;
                    pos += 1;
                    start = 0;
                }
                None => {
                    if pos == 0 {
                        return false;
                    }
                    pos -= 1;
                    let k = self.choice[pos];
                    self.used[self.class_of[pos]][self.options[pos][k].0] = false;
                    start = k + 1;
                }
            }
        }
    }

    fn current(&self) -> ClosedLoopController {
        let mut g = vec![0; self.order.len()];
        for (pos, &x) in self.order.iter().enumerate() {
            g[x] = self.options[pos][self.choice[pos]].1 + 1;
        }
        ClosedLoopController::from_raw(g)
    }
}

impl Iterator for CandidateEnumerator {
    type Item = ClosedLoopController;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let found = if !self.started {
            self.started = true;
            self.search(0, 0)
        } else {
            let last = self.order.len() - 1;
            let k = self.choice[last];
            self.used[self.class_of[last]][self.options[last][k].0] = false;
            self.search(last, k + 1)
        };
        if found {
            Some(self.current())
        } else {
            self.done = true;
            None
        }
    }
}

/// Enumerates candidate controllers; see [`CandidateEnumerator`].
pub fn enumerate_candidates(lcn: &Lcn, partition: &OutputClassPartition) -> CandidateEnumerator {
    CandidateEnumerator::new(lcn, partition)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Synthesized,
    NotSynthesizable,
    /// The candidate cap was reached before a decision.
    DecisionIncomplete,
}

/// Categories of successor maps that were never evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PruneRule {
    /// Maps sending two equal-output states to one successor (naive minus
    /// refined bound).
    WithinClassCollision,
    /// Injective maps left unexamined after an early decision or the cap.
    NotExamined,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SynthesisReport {
    pub verdict: Verdict,
    pub witness: Option<ClosedLoopController>,
    /// The network was observable before any feedback.
    pub already_observable: bool,
    pub naive_bound: u128,
    pub refined_bound: u128,
    pub num_factors: Vec<u128>,
    pub candidates_checked: u64,
    pub pruned_by: BTreeMap<PruneRule, u128>,
    pub constant_block: Option<ConstantBlockWitness>,
    /// 1-based output class with no collision-free successor choice.
    pub colliding_class: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthesisOptions {
    /// Stop with [`Verdict::DecisionIncomplete`] after this many candidates.
    pub max_candidates: Option<u64>,
    /// Evaluate candidates on the rayon pool.
    pub parallel: bool,
    /// Candidates handed to the pool at a time.
    pub batch_size: usize,
}

impl Default for SynthesisOptions {
    fn default() -> Self {
        Self {
            max_candidates: None,
            parallel: true,
            batch_size: 512,
        }
    }
}

/// Decides observability synthesis with default options.
pub fn synthesize_observability(lcn: &Lcn) -> SynthesisReport {
    synthesize_observability_with(lcn, &SynthesisOptions::default())
}

fn makes_observable(lcn: &Lcn, g: &ClosedLoopController) -> bool {
    let closed = apply_closed_loop(lcn, g).expect("candidate matches network dimensions");
    is_observable(&closed).observable
}

/// Decides whether some state feedback makes `lcn` observable.
///
/// The lexicographically first observable candidate is reported regardless
/// of how evaluation is scheduled.
pub fn synthesize_observability_with(lcn: &Lcn, options: &SynthesisOptions) -> SynthesisReport {
    let partition = output_partition(lcn);
    let Bounds {
        naive,
        refined,
        num_factors,
    } = bounds(lcn);
    let constant_block = constant_block_witness(lcn);
    let colliding = colliding_class(lcn, &partition);

    let mut report = SynthesisReport {
        verdict: Verdict::NotSynthesizable,
        witness: None,
        already_observable: false,
        naive_bound: naive,
        refined_bound: refined,
        num_factors,
        candidates_checked: 0,
        pruned_by: BTreeMap::new(),
        constant_block,
        colliding_class: colliding,
    };
    report
        .pruned_by
        .insert(PruneRule::WithinClassCollision, naive - refined);

    if is_observable(lcn).observable {
        // A constant input only deletes edges from the observability graph,
        // so it keeps an observable network observable.
        report.verdict = Verdict::Synthesized;
        report.already_observable = true;
        report.witness = Some(ClosedLoopController::constant(lcn.state_dim(), 1));
        report.pruned_by.insert(PruneRule::NotExamined, refined);
        return report;
    }
    if constant_block.is_some() || colliding.is_some() {
        report.pruned_by.insert(PruneRule::NotExamined, refined);
        return report;
    }

    let cap = options.max_candidates.unwrap_or(u64::MAX);
    let batch_size = options.batch_size.max(1);
    let mut candidates = enumerate_candidates(lcn, &partition);
    let mut checked = 0u64;
    let mut exhausted = false;
    while checked < cap {
        let take = batch_size.min(usize::try_from(cap - checked).unwrap_or(usize::MAX));
        let batch: Vec<ClosedLoopController> = candidates.by_ref().take(take).collect();
        if batch.len() < take {
            exhausted = true;
        }
        let hit = if options.parallel {
            batch
                .par_iter()
                .position_first(|g| makes_observable(lcn, g))
        } else {
            batch.iter().position(|g| makes_observable(lcn, g))
        };
        if let Some(i) = hit {
            checked += i as u64 + 1;
            report.verdict = Verdict::Synthesized;
            report.witness = Some(batch[i].clone());
            break;
        }
        checked += batch.len() as u64;
        if exhausted {
            break;
        }
    }
    if report.witness.is_none() {
        // the cap may coincide with the last candidate
        if !exhausted && candidates.next().is_some() {
            report.verdict = Verdict::DecisionIncomplete;
        }
    }
    report.candidates_checked = checked;
    report.pruned_by.insert(
        PruneRule::NotExamined,
        refined.saturating_sub(checked as u128),
    );
    report
}

/// What feedback can do for controllability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ControllabilityVerdict {
    /// Already controllable; note that feedback may still destroy this.
    AlreadyControllable,
    /// Uncontrollable, and feedback only removes transitions, so no
    /// controller of any kind can help.
    NeverSynthesizable { source: usize, target: usize },
}

pub fn controllability_synthesis_verdict(lcn: &Lcn) -> ControllabilityVerdict {
    match is_controllable(lcn).witness {
        None => ControllabilityVerdict::AlreadyControllable,
        Some((source, target)) => ControllabilityVerdict::NeverSynthesizable { source, target },
    }
}
