//! Sums of powers `Σ λ_j g_j^k` and their verification.

use crate::poly::MultiForm;
use crate::scalar::{Field, GaussRational, C64};
use crate::tolerance::Tolerances;

#[derive(Clone, PartialEq, Debug)]
pub struct PowerTerm<F> {
    pub coef: F,
    pub base: MultiForm<F>,
}

/// `Σ coef_j * base_j^exponent`, every base of degree `base_degree`.
#[derive(Clone, PartialEq, Debug)]
pub struct PowerSum<F> {
    pub nvars: usize,
    pub base_degree: u32,
    pub exponent: u32,
    pub terms: Vec<PowerTerm<F>>,
}

/// A power sum whose bases are linear forms.
pub type WaringDecomposition<F> = PowerSum<F>;

impl<F: Field> PowerSum<F> {
    pub fn new(nvars: usize, base_degree: u32, exponent: u32) -> Self {
        Self { nvars, base_degree, exponent, terms: Vec::new() }
    }

    pub fn push(&mut self, coef: F, base: MultiForm<F>) {
        debug_assert_eq!(base.nvars(), self.nvars);
        debug_assert!(base.is_zero() || base.degree() == self.base_degree);
        self.terms.push(PowerTerm { coef, base });
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.base_degree * self.exponent
    }

    pub fn expand(&self) -> MultiForm<F> {
        let mut acc = MultiForm::zero(self.nvars, self.degree());
        for t in &self.terms {
            let p = t.base.pow(self.exponent).scale(&t.coef);
            acc = acc.try_add(&p).expect("terms share the target degree");
        }
        acc
    }

    /// Drops terms with a zero multiplier or a zero base.
    pub fn prune(mut self) -> Self {
        self.terms.retain(|t| !t.coef.is_zero() && !t.base.is_zero());
        self
    }

    /// Relative coefficient distance between the expansion and `target`.
    pub fn residual(&self, target: &MultiForm<F>) -> f64 {
        self.expand().relative_distance(target)
    }

    /// Exact fields: equality. Floats: residual within `tol.verify`.
    pub fn verify(&self, target: &MultiForm<F>, tol: &Tolerances) -> bool {
        let e = self.expand();
        if F::EXACT {
            e == *target
        } else {
            e.relative_distance(target) <= tol.verify
        }
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> PowerSum<G> {
        PowerSum {
            nvars: self.nvars,
            base_degree: self.base_degree,
            exponent: self.exponent,
            terms: self.terms.iter().map(|t| PowerTerm { coef: f(&t.coef), base: t.base.map(&f) }).collect(),
        }
    }

    pub fn to_c64(&self) -> PowerSum<C64> {
        self.map(Field::to_c64)
    }
}

/// A power sum that is exact when every ingredient lies in Q(i), and
/// floating otherwise.
#[derive(Clone, PartialEq, Debug)]
pub enum Decomposition {
    Exact(PowerSum<GaussRational>),
    Float(PowerSum<C64>),
}

impl Decomposition {
    pub fn len(&self) -> usize {
        match self {
            Self::Exact(p) => p.len(),
            Self::Float(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Self::Exact(_))
    }

    pub fn exponent(&self) -> u32 {
        match self {
            Self::Exact(p) => p.exponent,
            Self::Float(p) => p.exponent,
        }
    }

    pub fn base_degree(&self) -> u32 {
        match self {
            Self::Exact(p) => p.base_degree,
            Self::Float(p) => p.base_degree,
        }
    }

    pub fn to_c64(&self) -> PowerSum<C64> {
        match self {
            Self::Exact(p) => p.to_c64(),
            Self::Float(p) => p.clone(),
        }
    }

    pub fn exact(&self) -> Option<&PowerSum<GaussRational>> {
        match self {
            Self::Exact(p) => Some(p),
            Self::Float(_) => None,
        }
    }

    pub fn residual(&self, target: &MultiForm<GaussRational>) -> f64 {
        match self {
            Self::Exact(p) => p.residual(target),
            Self::Float(p) => p.residual(&target.to_c64()),
        }
    }

    pub fn verify(&self, target: &MultiForm<GaussRational>, tol: &Tolerances) -> bool {
        match self {
            Self::Exact(p) => p.verify(target, tol),
            Self::Float(p) => p.verify(&target.to_c64(), tol),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{q, BinaryForm};

    #[test]
    fn expands_six_x2y() {
        let lin = |a: i64, b: i64| BinaryForm::linear(q(a, 1), q(b, 1)).to_multi();
        let mut s = PowerSum::new(2, 1, 3);
        s.push(q(1, 1), lin(-1, 1));
        s.push(q(-2, 1), lin(0, 1));
        s.push(q(1, 1), lin(1, 1));
        let target = BinaryForm::from_i64s(&[0, 6, 0, 0]).to_multi();
        assert!(s.verify(&target, &Tolerances::default()));
        assert!(Decomposition::Float(s.to_c64()).verify(&target, &Tolerances::default()));
    }
}
