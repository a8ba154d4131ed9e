use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use super::{
    add_acted, apply_map, d_elem, gen_elem, homogeneous_triples, CheckFailure, Complex, GenMap,
    ModElem, TableMap,
};
use crate::algebra::{add_term, AlgElem};
use crate::linalg::SparseMatrix;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChainMapError {
    #[error("complexes are over different algebras")]
    AlgebraMismatch,
    #[error("degree {degree} exceeds the built range {top}")]
    Degree { degree: usize, top: usize },
    #[error("no lift exists in degree {degree} for generator {generator}; inputs are not resolutions")]
    Inconsistent { degree: usize, generator: String },
}

/// Lift the identity of Λ to a chain map `source → target` through degree
/// `upto`, degree by degree, taking the deterministic particular solution.
pub fn lift_chain_map(
    source: &dyn Complex,
    target: &dyn Complex,
    upto: usize,
) -> Result<TableMap, ChainMapError> {
    let alg = target.algebra();
    if source.algebra().dim() != alg.dim() || source.algebra().labels() != alg.labels() {
        return Err(ChainMapError::AlgebraMismatch);
    }
    let top = source.top_degree().min(target.top_degree());
    if upto > top {
        return Err(ChainMapError::Degree { degree: upto, top });
    }
    let k = alg.field();
    let mut images: Vec<Vec<Arc<ModElem>>> = vec![vec![Arc::new(gen_elem(alg, 0))]];
    for n in 1..=upto {
        let prev = TableMap { offset: 0, images: images.clone() };
        let mut row = Vec::new();
        // group generators by internal degree to share one elimination
        let mut by_deg: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
        for g in 0..source.rank(n) {
            by_deg.entry(source.internal_degree(n, g)).or_default().push(g);
        }
        let mut sol: BTreeMap<usize, ModElem> = BTreeMap::new();
        for (deg, gens) in by_deg {
            let cols = homogeneous_triples(target, n, &deg);
            let col_images: Vec<ModElem> = cols
                .iter()
                .map(|(a, h, b)| {
                    let mut out = ModElem::new();
                    add_acted(alg, &mut out, *a, &target.differential(n, *h), *b, &k.one());
                    out
                })
                .collect();
            let rhs: Vec<ModElem> = gens
                .iter()
                .map(|g| apply_map(alg, &prev, n - 1, &source.differential(n, *g)))
                .collect();
            let mut rows: BTreeMap<super::Triple, usize> = BTreeMap::new();
            for key in col_images.iter().chain(rhs.iter()).flat_map(|e| e.keys()) {
                let len = rows.len();
                rows.entry(*key).or_insert(len);
            }
            let mut m = SparseMatrix::zeros(k, rows.len(), cols.len());
            for (c, e) in col_images.iter().enumerate() {
                for (key, v) in e {
                    m.set(rows[key], c, v.clone());
                }
            }
            let bs: Vec<Vec<_>> = rhs
                .iter()
                .map(|e| {
                    let mut b = vec![k.zero(); rows.len()];
                    for (key, v) in e {
                        b[rows[key]] = v.clone();
                    }
                    b
                })
                .collect();
            for (g, x) in gens.iter().zip(m.solve_many(&bs)) {
                let x = x.ok_or_else(|| ChainMapError::Inconsistent {
                    degree: n,
                    generator: source.label(n, *g),
                })?;
                let mut e = ModElem::new();
                for (c, v) in x.iter().enumerate() {
                    add_term(k, &mut e, cols[c], v);
                }
                sol.insert(*g, e);
            }
        }
        for g in 0..source.rank(n) {
            row.push(Arc::new(sol.remove(&g).unwrap_or_default()));
        }
        images.push(row);
    }
    Ok(TableMap { offset: 0, images })
}

/// Check that `map` commutes with the differentials through `upto` and is
/// compatible with the augmentations in degree 0.
pub fn check_chain_map(
    source: &dyn Complex,
    target: &dyn Complex,
    map: &dyn GenMap,
    upto: usize,
) -> Result<(), CheckFailure> {
    let alg = target.algebra();
    let k = alg.field();
    let fail = |n: usize, g: usize, what: &str| CheckFailure {
        degree: n,
        generator: source.label(n, g),
        what: what.into(),
    };
    for g in 0..source.rank(0) {
        let img = map.image(0, g);
        let mut aug = AlgElem::new();
        for ((a, _, b), v) in img.iter() {
            for (m, x) in alg.basis_mul(*a, *b) {
                add_term(k, &mut aug, *m, &k.mul(v, x));
            }
        }
        if aug != alg.one() {
            return Err(fail(0, g, "not compatible with the augmentation"));
        }
    }
    check_commutes(source, target, map, upto)
}

/// Check d∘f = f∘d on generators of degrees 1..=upto.
pub fn check_commutes(
    source: &dyn Complex,
    target: &dyn Complex,
    map: &dyn GenMap,
    upto: usize,
) -> Result<(), CheckFailure> {
    let alg = target.algebra();
    let fail = |n: usize, g: usize, what: &str| CheckFailure {
        degree: n,
        generator: source.label(n, g),
        what: what.into(),
    };
    for n in 1..=upto {
        for g in 0..source.rank(n) {
            let lhs = d_elem(target, n, &map.image(n, g));
            let rhs = apply_map(alg, map, n - 1, &source.differential(n, g));
            if lhs != rhs {
                return Err(fail(n, g, "does not commute with the differential"));
            }
        }
    }
    Ok(())
}
