use std::fmt;

use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::rat::{lcm_of_denominators, Rat};

/// A diagonal `μ_d` action `ζ · χ^m = ζ^{⟨v, m⟩} χ^m`, stored with the
/// smallest order through which it factors.
///
/// An empty weight vector marks an action on a finite set of points
/// (a `μ_d`-torsor) rather than on a torus.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MuAction {
    order: u64,
    weights: Vec<i64>,
}

impl MuAction {
    pub fn trivial(n: usize) -> Self {
        Self { order: 1, weights: vec![0; n] }
    }

    /// `μ_d` acting with weights `v` (taken mod `d`), reduced to the minimal order.
    pub fn new(order: u64, weights: Vec<i64>) -> Self {
        assert!(order > 0, "action order must be positive");
        if weights.is_empty() {
            return Self::torsor(order);
        }
        let d = order as i64;
        let g = weights.iter().fold(d, |g, w| g.gcd(w));
        let d = d / g;
        Self { order: d as u64, weights: weights.iter().map(|w| (w / g).rem_euclid(d)).collect() }
    }

    /// The action of `μ_N` on the `N` points of a `μ_N`-torsor.
    pub fn torsor(order: u64) -> Self {
        assert!(order > 0, "action order must be positive");
        Self { order, weights: Vec::new() }
    }

    /// Action induced by a rational weight vector `w = v / d`.
    pub fn from_weight(w: &[Rat]) -> Self {
        let d = lcm_of_denominators(w);
        let v = w
            .iter()
            .map(|x| (x * Rat::from_integer(d.clone())).to_integer().to_i64().expect("weight fits in i64"))
            .collect();
        Self::new(d.to_u64().expect("order fits in u64"), v)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// The weights as rationals `v / d` in `[0, 1)`.
    pub fn rational_weights(&self) -> Vec<Rat> {
        self.weights
            .iter()
            .map(|v| Rat::new((*v).into(), (self.order as i64).into()))
            .collect()
    }
}

impl fmt::Display for MuAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.weights.is_empty() {
            write!(f, "mu(d={})", self.order)
        } else {
            let v: Vec<String> = self.weights.iter().map(i64::to_string).collect();
            write!(f, "mu(d={}; v={})", self.order, v.join(","))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn reduces_to_minimal_order() {
        assert_eq!(MuAction::new(6, vec![2, 4]), MuAction::new(3, vec![1, 2]));
        assert!(MuAction::new(4, vec![4, -8]).is_trivial());
        assert_eq!(MuAction::new(3, vec![-1]).weights(), &[2]);
        let a = MuAction::from_weight(&[rat(1, 2)]);
        assert_eq!((a.order(), a.weights()), (2, &[1][..]));
        assert!(MuAction::from_weight(&[rat(3, 1), rat(-2, 1)]).is_trivial());
        assert_eq!(MuAction::new(3, vec![1, 2]).to_string(), "mu(d=3; v=1,2)");
        assert_eq!(MuAction::torsor(2).to_string(), "mu(d=2)");
    }
}
