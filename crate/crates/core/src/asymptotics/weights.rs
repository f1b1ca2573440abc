use serde::{Deserialize, Serialize};

/// Decay exponents toward past null infinity, spacelike infinity and future null infinity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightTriple {
    pub a_minus: f64,
    pub a_zero: f64,
    pub a_plus: f64,
}

impl WeightTriple {
    pub fn new(a_minus: f64, a_zero: f64, a_plus: f64) -> Self {
        WeightTriple { a_minus, a_zero, a_plus }
    }

    pub fn is_finite(&self) -> bool {
        self.a_minus.is_finite() && self.a_zero.is_finite() && self.a_plus.is_finite()
    }
}

/// `a- >= -1/2`, `a+ < a0 < a-`, `a+ < 0` and `a- != 0`.
pub fn admissible(a: WeightTriple) -> bool {
    a.is_finite() && a.a_minus >= -0.5 && a.a_plus < a.a_zero && a.a_zero < a.a_minus && a.a_plus < 0.0 && a.a_minus != 0.0
}

/// `af` is an admissible inhomogeneous weight relative to the admissible `a`:
/// `af- > 1`, `a- <= af- - 1`, `a+ <= af+ - 1` and `a0 <= min(af- - 3/2, af0 - 2)`
/// if `af- <= 3/2`, `a0 <= af0 - 2` otherwise.
pub fn admissible_inhom(a: WeightTriple, af: WeightTriple) -> bool {
    if !admissible(a) || !af.is_finite() || !(af.a_minus > 1.0) {
        return false;
    }
    let zero_bound = if af.a_minus <= 1.5 { (af.a_minus - 1.5).min(af.a_zero - 2.0) } else { af.a_zero - 2.0 };
    a.a_minus <= af.a_minus - 1.0 && a.a_plus <= af.a_plus - 1.0 && a.a_zero <= zero_bound
}

/// `af >= a + (1, 2, 1)` componentwise with `af- > 1`, for admissible `a`.
pub fn extended_admissible(a: WeightTriple, af: WeightTriple) -> bool {
    admissible(a)
        && af.is_finite()
        && af.a_minus > 1.0
        && af.a_minus >= a.a_minus + 1.0
        && af.a_zero >= a.a_zero + 2.0
        && af.a_plus >= a.a_plus + 1.0
}

/// Weight `a^N + n a` of a perturbation of homogeneity `n` and weight `a^N`.
pub fn perturbation_weight(a: WeightTriple, n: u32, an: WeightTriple) -> WeightTriple {
    let n = n as f64;
    WeightTriple::new(an.a_minus + n * a.a_minus, an.a_zero + n * a.a_zero, an.a_plus + n * a.a_plus)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_examples() {
        assert!(admissible(WeightTriple::new(-0.25, -0.5, -0.75)));
        assert!(!admissible(WeightTriple::new(0.0, -0.5, -1.0)));
        assert!(!admissible(WeightTriple::new(-0.6, -0.7, -0.8)));
    }

    #[test]
    fn semilinear_example_is_extended_but_not_inhomogeneous() {
        let eps = 0.01;
        let an = WeightTriple::new(0.75 + eps, 2.0 - eps, 2.5);
        let a = WeightTriple::new(0.25, 0.1, -0.5);
        let af = perturbation_weight(a, 2, an);
        assert!((af.a_minus - 1.26).abs() < 1e-12 && (af.a_zero - 2.19).abs() < 1e-12);
        assert!(extended_admissible(a, af));
        assert!(!admissible_inhom(a, af));
        for k in 0..400 {
            let a0 = -0.6 + k as f64 * (0.85 / 400.0);
            let a = WeightTriple::new(0.25, a0, -0.7);
            if admissible(a) {
                assert!(!admissible_inhom(a, perturbation_weight(a, 2, an)), "a0 = {a0}");
            }
        }
    }

    #[test]
    fn inhom_threshold_branch() {
        let a = WeightTriple::new(0.1, -0.2, -0.5);
        assert!(admissible_inhom(a, WeightTriple::new(1.6, 1.8, 0.5)));
        let slow = WeightTriple::new(1.2, 1.8, 0.5);
        assert!(!admissible_inhom(a, slow));
        assert!(extended_admissible(a, slow));
    }
}
