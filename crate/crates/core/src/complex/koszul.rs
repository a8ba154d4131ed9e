use std::sync::Arc;

use super::{Complex, ModElem};
use crate::algebra::{AlgebraError, GradedAlgebra};
use crate::field::Field;

/// Koszul resolution of k[x]/(x²): one generator ε_n per degree, internal
/// degree n, d(ε_n) = x ε_{n−1} + (−1)^n ε_{n−1} x.
#[derive(Debug)]
pub struct KoszulDualNumbers {
    alg: Arc<GradedAlgebra>,
    top: usize,
    x: usize,
}

impl KoszulDualNumbers {
    pub fn new(field: &Field, label: &str, top: usize) -> Result<KoszulDualNumbers, AlgebraError> {
        let alg = Arc::new(crate::algebra::truncated_poly(field, label, 2)?);
        Ok(KoszulDualNumbers::over(alg, top))
    }

    /// Over an existing copy of k[x]/(x²).
    pub fn over(alg: Arc<GradedAlgebra>, top: usize) -> KoszulDualNumbers {
        assert_eq!(alg.dim(), 2, "dual numbers expected");
        let x = 1 - alg.unit();
        KoszulDualNumbers { alg, top, x }
    }
}

impl Complex for KoszulDualNumbers {
    fn algebra(&self) -> &Arc<GradedAlgebra> {
        &self.alg
    }

    fn top_degree(&self) -> usize {
        self.top
    }

    fn rank(&self, _n: usize) -> usize {
        1
    }

    fn internal_degree(&self, n: usize, _g: usize) -> Vec<i64> {
        vec![n as i64]
    }

    fn label(&self, n: usize, _g: usize) -> String {
        format!("e({n})")
    }

    fn differential(&self, n: usize, _g: usize) -> Arc<ModElem> {
        let k = self.alg.field();
        let u = self.alg.unit();
        let sign = if n % 2 == 0 { k.one() } else { k.from_i64(-1) };
        Arc::new(ModElem::from([((self.x, 0, u), k.one()), ((u, 0, self.x), sign)]))
    }
}

#[cfg(test)]
mod tests {
    use super::super::{check_complex, render_elem};
    use super::*;

    #[test]
    fn koszul_differentials() {
        let k = KoszulDualNumbers::new(&Field::rationals(), "x", 8).unwrap();
        assert_eq!(render_elem(&k, 0, &k.differential(1, 0)), "-e(0)*x + x*e(0)");
        assert_eq!(render_elem(&k, 1, &k.differential(2, 0)), "e(1)*x + x*e(1)");
        assert_eq!(k.internal_degree(2, 0), vec![2]);
        check_complex(&k, 8).unwrap();
    }
}
