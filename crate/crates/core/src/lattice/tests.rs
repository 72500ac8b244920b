use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use super::*;

fn mat(rows: &[&[i64]]) -> IntMatrix {
    IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

/// Columns (3,-2,2), (1,0,1), (0,0,1).
fn example_b() -> IntMatrix {
    IntMatrix::from_columns(&[vec![3, -2, 2], vec![1, 0, 1], vec![0, 0, 1]]).unwrap()
}

fn all_ones_skew() -> IntMatrix {
    mat(&[&[0, 1, 1], &[-1, 0, 1], &[-1, -1, 0]])
}

// Oracle: Laplace expansion along the first row.
fn cofactor_det(m: &IntMatrix) -> BigInt {
    let n = m.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut total = BigInt::zero();
    for j in 0..n {
        let minor_rows: Vec<Vec<BigInt>> = (1..n)
            .map(|i| {
                (0..n)
                    .filter(|&c| c != j)
                    .map(|c| m.get(i, c).clone())
                    .collect()
            })
            .collect();
        let minor = IntMatrix::from_rows(&minor_rows).unwrap_or_else(|_| IntMatrix::zeros(0, 0));
        let term = m.get(0, j) * cofactor_det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

// Oracle: rank over Q by plain Gaussian elimination on rationals.
fn rational_rank(m: &IntMatrix) -> usize {
    let mut a: Vec<Vec<BigRational>> = m
        .to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(BigRational::from_integer).collect())
        .collect();
    let (rows, cols) = (m.rows(), m.cols());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for r in 0..rows {
            if r != rank && !a[r][c].is_zero() {
                let f = &a[r][c] / &a[rank][c];
                let pivot = a[rank].clone();
                for (x, v) in a[r].iter_mut().zip(&pivot) {
                    *x -= &f * v;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn check_smith(m: &IntMatrix) {
    let s = smith_normal_form(m);
    assert_eq!(
        s.u.mul(m).unwrap().mul(&s.v).unwrap(),
        s.d,
        "U*M*V != D for {m:?}"
    );
    assert_eq!(cofactor_det(&s.u).abs(), BigInt::one());
    assert_eq!(cofactor_det(&s.v).abs(), BigInt::one());
    let k = m.rows().min(m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if i != j {
                assert!(s.d.get(i, j).is_zero());
            }
        }
    }
    let diag: Vec<BigInt> = (0..k).map(|i| s.d.get(i, i).clone()).collect();
    let mut seen_zero = false;
    for w in diag.windows(2) {
        if w[0].is_zero() {
            seen_zero = true;
        }
        if seen_zero {
            assert!(w[1].is_zero(), "zeros must trail: {diag:?}");
        } else if !w[1].is_zero() {
            assert!(
                (&w[1] % &w[0]).is_zero(),
                "divisibility chain broken: {diag:?}"
            );
        }
    }
    assert!(diag.iter().all(|d| !d.is_negative()));
}

#[test]
fn smith_examples() {
    let s = smith_normal_form(&IntMatrix::identity(3));
    assert_eq!(s.d, IntMatrix::identity(3));
    assert_eq!(s.u, IntMatrix::identity(3));
    assert_eq!(s.v, IntMatrix::identity(3));

    let s = smith_normal_form(&mat(&[&[2, 0], &[0, 3]]));
    assert_eq!(s.d, mat(&[&[1, 0], &[0, 6]]));
    check_smith(&mat(&[&[2, 0], &[0, 3]]));

    // gcd of entries 1, gcd of 2x2 minors 1, |det| 2
    let s = smith_normal_form(&example_b());
    assert_eq!(s.invariant_factors(), vec![1.into(), 1.into(), 2.into()]);
    check_smith(&example_b());
}

#[test]
fn smith_rectangular_and_zero() {
    check_smith(&mat(&[&[4, 6, 8], &[6, 9, 12]]));
    check_smith(&IntMatrix::zeros(2, 3));
    check_smith(&mat(&[&[0, 0], &[0, 5], &[10, 0]]));
}

#[test]
fn nullspace_examples() {
    assert_eq!(
        integer_nullspace(&all_ones_skew()),
        vec![ExponentVector::new(vec![1, -1, 1])]
    );
    assert_eq!(
        integer_nullspace(&IntMatrix::zeros(2, 2)),
        vec![
            ExponentVector::new(vec![0, 1]),
            ExponentVector::new(vec![1, 0])
        ]
    );
    assert!(integer_nullspace(&mat(&[&[0, 1], &[-1, 0]])).is_empty());
}

#[test]
fn nullspace_is_saturated() {
    // kernel of a*M = 0 for M = [2; 4] (column) is spanned by (2,-1)
    let m = mat(&[&[2], &[4]]);
    assert_eq!(
        integer_nullspace(&m),
        vec![ExponentVector::new(vec![2, -1])]
    );
}

#[test]
fn det_examples() {
    assert_eq!(det_int(&example_b()).unwrap(), BigInt::from(2));
    assert_eq!(cofactor_det(&example_b()), BigInt::from(2));
    assert_eq!(det_int(&IntMatrix::identity(4)).unwrap(), BigInt::one());
    assert_eq!(
        det_int(&mat(&[&[0, 1], &[1, 0]])).unwrap(),
        BigInt::from(-1)
    );
    assert!(matches!(
        det_int(&IntMatrix::zeros(2, 3)),
        Err(Error::NotSquare { .. })
    ));
}

#[test]
fn unimodular_inverse_examples() {
    assert_eq!(
        unimodular_inverse(&mat(&[&[1, 1], &[0, 1]])).unwrap(),
        mat(&[&[1, -1], &[0, 1]])
    );
    assert!(matches!(
        unimodular_inverse(&example_b()),
        Err(Error::NotUnimodular(_))
    ));
    assert_eq!(
        unimodular_inverse(&IntMatrix::identity(3)).unwrap(),
        IntMatrix::identity(3)
    );
}

#[test]
fn hermite_membership_matches_column_solve() {
    // columns of example B: e1 is in the lattice, e2 is not, e3 is.
    let h = hermite_rows(&example_b().transpose());
    let e = |i: usize| -> Vec<BigInt> {
        (0..3)
            .map(|k| {
                if k == i {
                    BigInt::one()
                } else {
                    BigInt::zero()
                }
            })
            .collect()
    };
    assert!(in_hermite_lattice(&h, &e(0)));
    assert!(!in_hermite_lattice(&h, &e(1)));
    assert!(in_hermite_lattice(&h, &e(2)));
    assert!(in_hermite_lattice(
        &h,
        &[BigInt::zero(), BigInt::from(2), BigInt::zero()]
    ));
}

fn arb_matrix(rows: usize, cols: usize, r: i64) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-r..=r, rows * cols).prop_map(move |v| {
        let rows_v: Vec<Vec<i64>> = v.chunks(cols).map(|c| c.to_vec()).collect();
        IntMatrix::from_rows(&rows_v).unwrap()
    })
}

fn arb_skew(n: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-3i64..=3, n * (n - 1) / 2).prop_map(move |v| {
        let mut m = IntMatrix::zeros(n, n);
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                m.set(i, j, v[k].into());
                m.set(j, i, (-v[k]).into());
                k += 1;
            }
        }
        m
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn smith_recomposes(m in (1usize..5, 1usize..5).prop_flat_map(|(r, c)| arb_matrix(r, c, 6))) {
        check_smith(&m);
    }

    #[test]
    fn nullspace_kills_and_has_full_count(m in (1usize..5, 1usize..5).prop_flat_map(|(r, c)| arb_matrix(r, c, 3))) {
        let ker = integer_left_kernel(&m);
        prop_assert_eq!(ker.len(), m.rows() - rational_rank(&m));
        for a in &ker {
            prop_assert!(m.left_apply(a).iter().all(Zero::is_zero));
            let first = a.iter().find(|x| !x.is_zero()).unwrap();
            prop_assert!(first.is_positive());
            let g = a.iter().fold(BigInt::zero(), |g, x| num_integer::Integer::gcd(&g, x));
            prop_assert_eq!(g, BigInt::one());
        }
    }

    #[test]
    fn det_is_multiplicative(p in arb_matrix(3, 3, 4), m in arb_matrix(3, 3, 4)) {
        let pm = p.mul(&m).unwrap();
        prop_assert_eq!(det_int(&pm).unwrap(), det_int(&p).unwrap() * det_int(&m).unwrap());
        prop_assert_eq!(det_int(&m).unwrap(), cofactor_det(&m));
    }

    #[test]
    fn odd_skew_is_singular(m in prop_oneof![arb_skew(3), arb_skew(5)]) {
        prop_assert!(m.is_skew_symmetric());
        prop_assert!(det_int(&m).unwrap().is_zero());
    }
}
