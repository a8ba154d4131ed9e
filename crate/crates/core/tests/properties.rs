use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use hochschild::algebra::{lambda_q, truncated_poly, twisted_tensor_algebra, GradedAlgebra};
use hochschild::cohomology::Cochain;
use hochschild::complex::{check_complex, BarResolution, KoszulDualNumbers, TwistedTot};
use hochschild::field::{Field, Scalar, Twist};
use hochschild::linalg::SparseMatrix;
use hochschild::qci::{build_case, PhiChoice, QciBuild};

fn fields() -> Vec<Field> {
    vec![
        Field::rationals(),
        Field::prime(7).unwrap(),
        Field::rational_functions(),
        Field::cyclotomic(3).unwrap(),
        Field::cyclotomic(4).unwrap(),
        Field::cyclotomic_mod(2, 3).unwrap(),
    ]
}

/// Σ c_i g^i for the field's q (or 2 when there is none).
fn poly_in(k: &Field, coeffs: &[i64]) -> Scalar {
    let g = k.q().unwrap_or_else(|_| k.from_i64(2));
    let mut acc = k.zero();
    let mut p = k.one();
    for c in coeffs {
        acc = k.add(&acc, &k.mul(&k.from_i64(*c), &p));
        p = k.mul(&p, &g);
    }
    acc
}

fn scalar(k: &Field, num: &[i64], den: &[i64]) -> Scalar {
    let d = poly_in(k, den);
    let n = poly_in(k, num);
    if k.is_zero(&d) {
        n
    } else {
        k.div(&n, &d).unwrap()
    }
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4i64..5, 1..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(f in 0usize..6, a in coeffs(), b in coeffs(), c in coeffs(), d in coeffs(), e in coeffs(), g in coeffs()) {
        let k = &fields()[f];
        let (x, y, z) = (scalar(k, &a, &b), scalar(k, &c, &d), scalar(k, &e, &g));
        prop_assert_eq!(k.add(&x, &y), k.add(&y, &x));
        prop_assert_eq!(k.mul(&x, &y), k.mul(&y, &x));
        prop_assert_eq!(k.mul(&k.mul(&x, &y), &z), k.mul(&x, &k.mul(&y, &z)));
        prop_assert_eq!(k.add(&k.add(&x, &y), &z), k.add(&x, &k.add(&y, &z)));
        prop_assert_eq!(k.mul(&x, &k.add(&y, &z)), k.add(&k.mul(&x, &y), &k.mul(&x, &z)));
        prop_assert!(k.is_zero(&k.add(&x, &k.neg(&x))));
        if !k.is_zero(&x) {
            prop_assert!(k.is_one(&k.mul(&x, &k.inv(&x))));
        }
        prop_assert_eq!(k.parse(&k.render(&x)).unwrap(), x);
    }

    #[test]
    fn twist_is_bimultiplicative(e in prop::collection::vec((prop::sample::select(vec![-1i64, 2, 3, -5]), -2i64..3), 4), a in prop::collection::vec(-3i64..4, 4), b in prop::collection::vec(-3i64..4, 4)) {
        let k = Field::rational_functions();
        let q = k.q().unwrap();
        // entries c·q^m
        let rows: Vec<Vec<Scalar>> = e.chunks(2).map(|r| r.iter().map(|(c, m)| k.mul(&k.from_i64(*c), &k.pow(&q, *m))).collect()).collect();
        let t = Twist::new(&k, rows).unwrap();
        let (a1, a2, b1, b2) = (&a[0..2], &a[2..4], &b[0..2], &b[2..4]);
        let sum = |u: &[i64], v: &[i64]| -> Vec<i64> { u.iter().zip(v).map(|(p, q)| p + q).collect() };
        prop_assert_eq!(t.eval(&sum(a1, a2), b1).unwrap(), k.mul(&t.eval(a1, b1).unwrap(), &t.eval(a2, b1).unwrap()));
        prop_assert_eq!(t.eval(a1, &sum(b1, b2)).unwrap(), k.mul(&t.eval(a1, b1).unwrap(), &t.eval(a1, b2).unwrap()));
        prop_assert!(k.is_one(&t.eval(&[0, 0], b1).unwrap()));
    }

    #[test]
    fn cyclotomic_order(r in 1u64..13, p in prop::sample::select(vec![0u64, 2, 3, 5, 7])) {
        prop_assume!(p == 0 || r % p != 0);
        let k = if p == 0 { Field::cyclotomic(r) } else { Field::cyclotomic_mod(p, r) };
        // over F_p only irreducible cyclotomic polynomials give fields
        prop_assume!(p == 0 || k.is_ok());
        let k = k.unwrap();
        let q = k.q().unwrap();
        // order by repeated multiplication
        let mut acc = q.clone();
        let mut n = 1;
        while !k.is_one(&acc) {
            acc = k.mul(&acc, &q);
            n += 1;
        }
        prop_assert_eq!(n, r);
        prop_assert_eq!(k.order(&q).unwrap(), Some(r));
    }
}

/// Dense elimination over ℚ.
fn dense_rank(m: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<BigRational>> =
        m.iter().map(|r| r.iter().map(|x| BigRational::from_integer((*x).into())).collect()).collect();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(rank, p);
        for i in 0..a.len() {
            if i != rank && !a[i][c].is_zero() {
                let f = &a[i][c] / &a[rank][c];
                for j in 0..cols {
                    let v = &a[rank][j] * &f;
                    a[i][j] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-2i64..3, c), r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn rank_nullity(m in matrix(), x in prop::collection::vec(-3i64..4, 6)) {
        let k = Field::rationals();
        let s: Vec<Vec<Scalar>> = m.iter().map(|r| r.iter().map(|v| k.from_i64(*v)).collect()).collect();
        let a = SparseMatrix::from_dense(&k, &s);
        let cols = m[0].len();
        prop_assert_eq!(a.rank(), dense_rank(&m));
        let ker = a.kernel_basis();
        prop_assert_eq!(a.rank() + ker.len(), cols);
        for v in &ker {
            prop_assert!(a.mul_vec(v).iter().all(|e| k.is_zero(e)));
        }
        prop_assert_eq!(a.transpose().rank(), a.rank());
        // b in the image is solvable, and the solution solves it
        let xs: Vec<Scalar> = x[..cols].iter().map(|v| k.from_i64(*v)).collect();
        let b = a.mul_vec(&xs);
        let y = a.solve(&b).expect("b is in the image");
        prop_assert_eq!(a.mul_vec(&y), b);
    }

    #[test]
    fn solve_detects_inconsistency(m in matrix()) {
        let k = Field::prime(5).unwrap();
        let s: Vec<Vec<Scalar>> = m.iter().map(|r| r.iter().map(|v| k.from_i64(*v)).collect()).collect();
        let a = SparseMatrix::from_dense(&k, &s);
        prop_assume!(a.rank() < a.rows());
        // some unit vector lies outside the column space
        let outside = (0..a.rows()).any(|i| {
            let mut e = vec![k.zero(); a.rows()];
            e[i] = k.one();
            a.solve(&e).is_none()
        });
        prop_assert!(outside);
    }
}

fn q_literal() -> impl Strategy<Value = String> {
    (prop::sample::select(vec![-3i64, -2, 2, 3, 5]), prop::sample::select(vec![1i64, 2, 3]))
        .prop_map(|(n, d)| if d == 1 { n.to_string() } else { format!("{n}/{d}") })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn lambda_q_relations_and_round_trip(q in q_literal()) {
        let k = Field::rationals().with_q(&q).unwrap();
        let (l, _) = lambda_q(&k).unwrap();
        let b = |s: &str| l.basis(l.index_of(s).unwrap());
        let qv = k.q().unwrap();
        // xy + q yx = 0, x² = y² = 0
        let lhs = l.add(&l.mul(&b("x"), &b("y")), &l.scale(&l.mul(&b("y"), &b("x")), &qv));
        prop_assert!(lhs.values().all(|c| k.is_zero(c)));
        prop_assert!(l.mul(&b("x"), &b("x")).values().all(|c| k.is_zero(c)));
        let p = l.to_presentation();
        let back = GradedAlgebra::from_json(&serde_json::to_string(&p).unwrap()).unwrap();
        prop_assert_eq!(back.to_presentation(), p);
    }

    #[test]
    fn twisted_truncated_algebras(m in 2usize..5, n in 2usize..4, t in prop::sample::select(vec!["1", "-1", "2", "-1/3"])) {
        let k = Field::rationals();
        let r = truncated_poly(&k, "x", m).unwrap();
        let s = truncated_poly(&k, "y", n).unwrap();
        let tw = Twist::new(&k, vec![vec![k.parse(t).unwrap()]]).unwrap();
        // construction verifies associativity and the unit
        let a = twisted_tensor_algebra(&r, &s, &tw).unwrap();
        prop_assert_eq!(a.dim(), m * n);
        let bar = BarResolution::normalized(Arc::new(a), 3);
        prop_assert!(check_complex(&bar, 3).is_ok());
    }

    #[test]
    fn koszul_tot_is_a_complex(q in q_literal()) {
        let k = Field::rationals().with_q(&q).unwrap();
        let (_, f) = lambda_q(&k).unwrap();
        let px = Arc::new(KoszulDualNumbers::over(f.left.clone(), 6));
        let py = Arc::new(KoszulDualNumbers::over(f.right.clone(), 6));
        let tot = TwistedTot::new(px, py, &f.twist).unwrap();
        prop_assert!(check_complex(&tot, 6).is_ok());
    }
}

/// Homogeneous expression Σ c·m·e(i,j) of homological degree n and internal
/// degree (dx, dy): e(i,j) pairs with m of degree (i − dx, j − dy).
fn expression() -> impl Strategy<Value = (usize, i64, i64, Vec<(usize, i64)>)> {
    (1usize..5, -1i64..3, -1i64..3, prop::collection::vec((0usize..4, -3i64..4), 1..4))
}

fn build_expr(n: usize, dx: i64, dy: i64, terms: &[(usize, i64)]) -> Option<String> {
    let monos = [("1", 0, 0), ("x", 1, 0), ("y", 0, 1), ("xy", 1, 1)];
    let mut out = Vec::new();
    for (m, c) in terms {
        let (label, mx, my) = monos[*m];
        let (i, j) = (dx + mx, dy + my);
        if i < 0 || j < 0 || (i + j) as usize != n || *c == 0 {
            continue;
        }
        out.push(format!("{c}*{label}*e({i},{j})"));
    }
    (!out.is_empty()).then(|| out.join(" + "))
}

fn random_class(b: &QciBuild, n: usize, coeffs: &[i64]) -> Option<Cochain> {
    let k = &b.field;
    let reps: Vec<Cochain> = b.ctx.cohomology_all(n).unwrap().into_iter().flat_map(|c| c.reps).collect();
    if reps.is_empty() {
        return None;
    }
    // a combination inside one internal degree
    let pick = &reps[coeffs[0].unsigned_abs() as usize % reps.len()];
    let mut acc = Cochain::zero(pick.n, pick.deg.clone());
    for (r, c) in reps.iter().filter(|r| r.deg == pick.deg).zip(coeffs.iter().cycle()) {
        acc = acc.add(k, r, &k.from_i64(*c)).unwrap();
    }
    Some(acc)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cochain_round_trip((n, dx, dy, terms) in expression()) {
        let b = build_case(&Field::rational_functions(), 5, PhiChoice::Qci).unwrap();
        if let Some(e) = build_expr(n, dx, dy, &terms) {
            let c = b.parse(&e).unwrap();
            prop_assert_eq!(b.parse(&b.render(&c)).unwrap(), c);
        }
    }

    #[test]
    fn laws_on_random_classes(q in prop::sample::select(vec!["-1", "1", "2"]), n in prop::collection::vec(0usize..3, 3), c in prop::collection::vec(-2i64..3, 4)) {
        let k = Field::rationals().with_q(q).unwrap();
        let b = build_case(&k, 6, PhiChoice::Qci).unwrap();
        let f = random_class(&b, n[0], &c);
        let g = random_class(&b, n[1], &c[1..]);
        let h = random_class(&b, n[2], &c[2..]);
        if let (Some(f), Some(g), Some(h)) = (f, g, h) {
            let ctx = &b.ctx;
            let (i, j, l) = (f.n, g.n, h.n);
            prop_assert!(ctx.cup_commutes(&f, &g).unwrap());
            if i + j >= 1 {
                prop_assert!(ctx.antisymmetric(&f, &g).unwrap());
                let br = ctx.bracket(&f, &g).unwrap();
                prop_assert!(ctx.is_cocycle(&br).unwrap());
            }
            if i + j + l >= 2 {
                prop_assert!(ctx.jacobi(&f, &g, &h).unwrap());
            }
            if i + j + l >= 1 {
                prop_assert!(ctx.derivation_law(&f, &g, &h).unwrap());
            }
        }
    }
}

#[test]
fn dense_rank_oracle_sanity() {
    assert_eq!(dense_rank(&[vec![1, 2], vec![2, 4]]), 1);
    assert_eq!(dense_rank(&[vec![1, 0], vec![0, 1]]), 2);
}
