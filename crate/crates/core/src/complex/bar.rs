use std::sync::Arc;

use super::{Complex, ModElem, Triple};
use crate::algebra::{add_term, GradedAlgebra};

/// Bar resolution, W_n = n-tuples of basis monomials, or its normalized
/// version with non-unit monomials only.
#[derive(Debug)]
pub struct BarResolution {
    alg: Arc<GradedAlgebra>,
    top: usize,
    normalized: bool,
    letters: Vec<usize>,
    position: Vec<Option<usize>>,
}

impl BarResolution {
    pub fn new(alg: Arc<GradedAlgebra>, top: usize) -> BarResolution {
        let letters = (0..alg.dim()).collect();
        BarResolution::build(alg, top, false, letters)
    }

    pub fn normalized(alg: Arc<GradedAlgebra>, top: usize) -> BarResolution {
        let letters = alg.normalization_split().1;
        BarResolution::build(alg, top, true, letters)
    }

    fn build(alg: Arc<GradedAlgebra>, top: usize, normalized: bool, letters: Vec<usize>) -> Self {
        let mut position = vec![None; alg.dim()];
        for (i, l) in letters.iter().enumerate() {
            position[*l] = Some(i);
        }
        BarResolution { alg, top, normalized, letters, position }
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Basis monomials making up generator `g` of degree `n`.
    pub fn decode(&self, n: usize, mut g: usize) -> Vec<usize> {
        let l = self.letters.len();
        let mut out = vec![0; n];
        for slot in out.iter_mut().rev() {
            *slot = self.letters[g % l];
            g /= l;
        }
        out
    }

    /// Generator index of a tuple, or `None` if some entry is not a letter
    /// (a unit entry in the normalized complex).
    pub fn encode(&self, tuple: &[usize]) -> Option<usize> {
        let l = self.letters.len();
        let mut g = 0;
        for m in tuple {
            g = g * l + self.position[*m]?;
        }
        Some(g)
    }
}

impl Complex for BarResolution {
    fn algebra(&self) -> &Arc<GradedAlgebra> {
        &self.alg
    }

    fn top_degree(&self) -> usize {
        self.top
    }

    fn rank(&self, n: usize) -> usize {
        self.letters.len().pow(n as u32)
    }

    fn internal_degree(&self, n: usize, g: usize) -> Vec<i64> {
        let mut d = vec![0; self.alg.grading_rank()];
        for m in self.decode(n, g) {
            for (x, y) in d.iter_mut().zip(self.alg.degree(m)) {
                *x += y;
            }
        }
        d
    }

    fn label(&self, n: usize, g: usize) -> String {
        let t: Vec<&str> = self.decode(n, g).iter().map(|m| self.alg.label(*m)).collect();
        format!("[{}]", t.join("|"))
    }

    fn differential(&self, n: usize, g: usize) -> Arc<ModElem> {
        let alg = &self.alg;
        let k = alg.field();
        let u = alg.unit();
        let t = self.decode(n, g);
        let mut out = ModElem::new();
        let mut push = |key: Option<Triple>, c| {
            if let Some(key) = key {
                add_term(k, &mut out, key, &c);
            }
        };
        push(self.encode(&t[1..]).map(|h| (t[0], h, u)), k.one());
        for j in 1..n {
            let sign = if j % 2 == 0 { k.one() } else { k.from_i64(-1) };
            for (m, c) in alg.basis_mul(t[j - 1], t[j]) {
                let mut s = t[..j - 1].to_vec();
                s.push(*m);
                s.extend_from_slice(&t[j + 1..]);
                push(self.encode(&s).map(|h| (u, h, u)), k.mul(&sign, c));
            }
        }
        let sign = if n % 2 == 0 { k.one() } else { k.from_i64(-1) };
        push(self.encode(&t[..n - 1]).map(|h| (u, h, t[n - 1])), sign);
        Arc::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{check_complex, render_elem};
    use super::*;
    use crate::algebra::{lambda_q, truncated_poly};
    use crate::field::Field;

    fn dual() -> Arc<GradedAlgebra> {
        Arc::new(truncated_poly(&Field::rationals(), "x", 2).unwrap())
    }

    #[test]
    fn bar_of_dual_numbers() {
        let b = BarResolution::new(dual(), 4);
        assert_eq!(b.rank(1), 2);
        let g = b.encode(&[1]).unwrap();
        assert_eq!(render_elem(&b, 0, &b.differential(1, g)), "-[]*x + x*[]");
        check_complex(&b, 4).unwrap();
    }

    #[test]
    fn normalized_bar_of_dual_numbers() {
        let b = BarResolution::normalized(dual(), 6);
        assert!((0..=6).all(|n| b.rank(n) == 1));
        assert_eq!(render_elem(&b, 0, &b.differential(1, 0)), "-[]*x + x*[]");
        assert_eq!(render_elem(&b, 1, &b.differential(2, 0)), "[x]*x + x*[x]");
        check_complex(&b, 6).unwrap();
    }

    #[test]
    fn bar_of_lambda_q() {
        let (l, _) = lambda_q(&Field::rational_functions()).unwrap();
        let l = Arc::new(l);
        check_complex(&BarResolution::new(l.clone(), 3), 3).unwrap();
        check_complex(&BarResolution::normalized(l, 4), 4).unwrap();
    }
}
