//! Substituting state-feedback controllers into networks.
//!
//! Feeding `u = G ⋉ x ⋉ v` into `x⁺ = L ⋉ x ⋉ u` gives
//! `x⁺ = [L_1 G_1, …, L_N G_N] ⋉ x ⋉ v`. Each `L_i G_i` is a product of
//! logical matrices, so its `l`-th column is column `G_i[l]` of `L_i` and
//! the whole substitution is index composition.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::{Lcn, LcnParts, ModelError, StateFeedback};
use crate::stp::DenseMatrix;

/// A closed-loop controller `u = [g_1, …, g_N] ⋉ x`: one input per state.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClosedLoopController {
    g: Vec<usize>,
}

impl ClosedLoopController {
    /// `g` holds 1-based inputs in `1..=input_dim`, one per state.
    pub fn new(input_dim: usize, g: Vec<usize>) -> Result<Self, ModelError> {
        if g.is_empty() {
            return Err(ModelError::Invalid(vec![
                crate::model::Violation::ZeroDimension { name: "N".into() },
            ]));
        }
        if let Some(&bad) = g.iter().find(|&&u| u == 0 || u > input_dim) {
            return Err(ModelError::IndexOutOfRange {
                what: "input",
                index: bad,
                bound: input_dim,
            });
        }
        Ok(Self { g })
    }

    pub(crate) fn from_raw(g: Vec<usize>) -> Self {
        Self { g }
    }

    /// The constant controller choosing `input` in every state.
    pub fn constant(state_dim: usize, input: usize) -> Self {
        Self {
            g: vec![input; state_dim],
        }
    }

    /// 1-based inputs, one per state.
    pub fn inputs(&self) -> &[usize] {
        &self.g
    }

    pub fn state_dim(&self) -> usize {
        self.g.len()
    }

    pub fn to_state_feedback(&self, input_dim: usize) -> Result<StateFeedback, ModelError> {
        StateFeedback::new(self.g.len(), input_dim, 1, &self.g)
    }
}

impl fmt::Display for ClosedLoopController {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<String> = self.g.iter().map(usize::to_string).collect();
        write!(f, "[{}]", g.join(","))
    }
}

fn check_dims(lcn: &Lcn, fb: &StateFeedback) -> Result<(), ModelError> {
    if fb.state_dim() != lcn.state_dim() || fb.input_dim() != lcn.input_dim() {
        return Err(ModelError::DimensionMismatch {
            expected_states: fb.state_dim(),
            expected_inputs: fb.input_dim(),
            states: lcn.state_dim(),
            inputs: lcn.input_dim(),
        });
    }
    Ok(())
}

/// The feedback system `[L_1 G_1, …, L_N G_N]` with the same output map and
/// `P` as its input dimension. Input factor metadata is dropped because
/// the factors of the new input are not known.
pub fn apply_feedback(lcn: &Lcn, fb: &StateFeedback) -> Result<Lcn, ModelError> {
    check_dims(lcn, fb)?;
    let n = lcn.state_dim();
    let p = fb.new_input_dim();
    let mut transition = Vec::with_capacity(n * p);
    for x in 0..n {
        for v in 0..p {
            transition.push(lcn.next0(x, fb.input0(x, v)) + 1);
        }
    }
    Lcn::try_from(LcnParts {
        input_dim: p,
        input_factors: None,
        transition,
        ..lcn.to_parts()
    })
}

/// Closed-loop shorthand for [`apply_feedback`]; the result has `M = 1`.
pub fn apply_closed_loop(lcn: &Lcn, g: &ClosedLoopController) -> Result<Lcn, ModelError> {
    apply_feedback(lcn, &g.to_state_feedback(lcn.input_dim())?)
}

/// Adjacency matrix `[L_1 G_1 1_P, …, L_N G_N 1_P]` of the feedback system.
pub fn feedback_adjacency(lcn: &Lcn, fb: &StateFeedback) -> Result<DenseMatrix, ModelError> {
    check_dims(lcn, fb)?;
    let n = lcn.state_dim();
    let mut adj = DenseMatrix::zeros(n, n);
    for x in 0..n {
        for v in 0..fb.new_input_dim() {
            *adj.get_mut(lcn.next0(x, fb.input0(x, v)), x) += 1;
        }
    }
    Ok(adj)
}

/// The closed-loop controller taking the `i`-th column of every block
/// `G_j`, i.e. `fb` with the new input frozen to `δ_P^i`.
pub fn column_slice(fb: &StateFeedback, i: usize) -> Result<ClosedLoopController, ModelError> {
    let p = fb.new_input_dim();
    if i == 0 || i > p {
        return Err(ModelError::IndexOutOfRange {
            what: "new input",
            index: i,
            bound: p,
        });
    }
    Ok(ClosedLoopController::from_raw(
        (0..fb.state_dim())
            .map(|x| fb.input0(x, i - 1) + 1)
            .collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::transition_graph;

    fn ring_network() -> Lcn {
        Lcn::new(4, 2, 4, &[2, 2, 1, 3, 4, 4, 2, 2], None).unwrap()
    }

    fn ring_breaking_gain() -> StateFeedback {
        StateFeedback::new(4, 2, 2, &[1, 2, 2, 2, 1, 2, 1, 2]).unwrap()
    }

    fn eight_state() -> Lcn {
        Lcn::new(
            8,
            4,
            4,
            &[
                1, 1, 2, 3, 2, 3, 1, 4, 3, 5, 7, 6, 6, 7, 8, 1, 2, 3, 7, 6, 1, 2, 3, 4, 3, 4, 7, 8,
                5, 6, 7, 4,
            ],
            Some(&[1, 1, 1, 1, 1, 2, 2, 2]),
        )
        .unwrap()
    }

    #[test]
    fn ring_network_feedback() {
        let out = apply_feedback(&ring_network(), &ring_breaking_gain()).unwrap();
        assert_eq!(
            out.transition_matrix().indices(),
            vec![2, 2, 3, 3, 4, 4, 2, 2]
        );
        assert_eq!(out.input_dim(), 2);
        let adj = feedback_adjacency(&ring_network(), &ring_breaking_gain()).unwrap();
        assert_eq!(
            adj,
            DenseMatrix::from_rows(&[[0, 0, 0, 0], [2, 0, 0, 2], [0, 2, 0, 0], [0, 0, 2, 0]])
        );
        assert_eq!(&adj, transition_graph(&out).adjacency());
    }

    #[test]
    fn eight_state_closed_loops() {
        let ones = ClosedLoopController::constant(8, 1);
        let out = apply_closed_loop(&eight_state(), &ones).unwrap();
        assert_eq!(
            out.transition_matrix().indices(),
            vec![1, 2, 3, 6, 2, 1, 3, 5]
        );
        assert_eq!(out.input_dim(), 1);
        assert_eq!(out.output_matrix(), eight_state().output_matrix());

        let g = ClosedLoopController::new(4, vec![1, 2, 2, 1, 3, 1, 1, 1]).unwrap();
        let out = apply_closed_loop(&eight_state(), &g).unwrap();
        assert_eq!(
            out.transition_matrix().indices(),
            vec![1, 3, 5, 6, 7, 1, 3, 5]
        );

        let adj = feedback_adjacency(&eight_state(), &ones.to_state_feedback(4).unwrap()).unwrap();
        assert_eq!(adj.get(0, 0), 1);
    }

    #[test]
    fn single_input_identity_feedback() {
        let lcn = Lcn::new(3, 1, 3, &[2, 3, 1], None).unwrap();
        let out = apply_closed_loop(&lcn, &ClosedLoopController::constant(3, 1)).unwrap();
        assert_eq!(out, lcn);
    }

    #[test]
    fn closed_loop_adjacency_columns_sum_to_one() {
        let ex1 = Lcn::new(
            4,
            4,
            4,
            &[1, 1, 1, 1, 1, 2, 1, 2, 3, 3, 1, 1, 3, 4, 1, 2],
            None,
        )
        .unwrap();
        let g = ClosedLoopController::new(4, vec![2, 4, 1, 3]).unwrap();
        let adj = feedback_adjacency(&ex1, &g.to_state_feedback(4).unwrap()).unwrap();
        assert_eq!(adj.column_sums(), vec![1; 4]);
    }

    #[test]
    fn slices() {
        let g = ring_breaking_gain();
        assert_eq!(column_slice(&g, 1).unwrap().inputs(), &[1, 2, 1, 1]);
        assert_eq!(column_slice(&g, 2).unwrap().inputs(), &[2, 2, 2, 2]);
        assert!(column_slice(&g, 3).is_err());
        let closed = StateFeedback::new(4, 2, 1, &[2, 1, 1, 2]).unwrap();
        assert_eq!(column_slice(&closed, 1).unwrap().inputs(), &[2, 1, 1, 2]);
    }

    #[test]
    fn mismatched_dimensions() {
        let fb = StateFeedback::new(3, 2, 1, &[1, 1, 1]).unwrap();
        assert!(matches!(
            apply_feedback(&ring_network(), &fb),
            Err(ModelError::DimensionMismatch { .. })
        ));
        let fb = StateFeedback::new(4, 3, 1, &[1, 1, 1, 1]).unwrap();
        assert!(feedback_adjacency(&ring_network(), &fb).is_err());
        assert!(ClosedLoopController::new(2, vec![1, 3]).is_err());
    }
}
