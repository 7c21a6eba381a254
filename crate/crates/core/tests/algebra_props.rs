use jordanscope::algebra::{char_poly, parse_entry, GaussRat, Matrix, MultiPoly, Ring};
use jordanscope::corpus::random_unimodular;
use jordanscope::ranklab::{exact_rank, minors};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
enum Expr {
    Var(usize),
    Int(i64),
    I,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

const NAMES: [&str; 3] = ["z", "w", "u"];

impl Expr {
    fn render(&self) -> String {
        match self {
            Expr::Var(i) => NAMES[*i].to_string(),
            Expr::Int(k) => format!("({k})"),
            Expr::I => "i".into(),
            Expr::Add(a, b) => format!("({} + {})", a.render(), b.render()),
            Expr::Sub(a, b) => format!("({} - {})", a.render(), b.render()),
            Expr::Mul(a, b) => format!("({} * {})", a.render(), b.render()),
            Expr::Neg(a) => format!("(-{})", a.render()),
            Expr::Pow(a, e) => format!("({})^{e}", a.render()),
        }
    }

    fn value(&self, pt: &[GaussRat]) -> GaussRat {
        match self {
            Expr::Var(i) => pt[*i].clone(),
            Expr::Int(k) => GaussRat::from_i64(*k),
            Expr::I => GaussRat::i(),
            Expr::Add(a, b) => a.value(pt) + b.value(pt),
            Expr::Sub(a, b) => a.value(pt) - b.value(pt),
            Expr::Mul(a, b) => a.value(pt) * b.value(pt),
            Expr::Neg(a) => -a.value(pt),
            Expr::Pow(a, e) => {
                let v = a.value(pt);
                (0..*e).fold(GaussRat::one(), |acc, _| acc * v.clone())
            }
        }
    }
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0usize..3).prop_map(Expr::Var),
        (-9i64..=9).prop_map(Expr::Int),
        Just(Expr::I),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
            (inner, 0u32..4).prop_map(|(a, e)| Expr::Pow(Box::new(a), e)),
        ]
    })
}

fn rational() -> impl Strategy<Value = GaussRat> {
    (-20i64..=20, 1i64..=7, -20i64..=20, 1i64..=7)
        .prop_map(|(a, b, c, d)| GaussRat::new(GaussRat::ratio(a, b).re, GaussRat::ratio(c, d).re))
}

fn poly() -> impl Strategy<Value = MultiPoly> {
    expr().prop_map(|e| parse_entry(&e.render(), &names()).unwrap())
}

fn names() -> Vec<String> {
    NAMES.iter().map(|s| s.to_string()).collect()
}

fn int_matrix(n: usize) -> impl Strategy<Value = Matrix<GaussRat>> {
    proptest::collection::vec(-4i64..=4, n * n)
        .prop_map(move |v| Matrix::from_vec(n, n, v.into_iter().map(GaussRat::from_i64).collect()))
}

/// Determinant by cofactor expansion along the first row.
fn det_cofactor(m: &Matrix<GaussRat>) -> GaussRat {
    let n = m.rows();
    if n == 0 {
        return GaussRat::one();
    }
    let mut acc = GaussRat::zero();
    for c in 0..n {
        let rows: Vec<usize> = (1..n).collect();
        let cols: Vec<usize> = (0..n).filter(|&k| k != c).collect();
        let term = m[(0, c)].clone() * det_cofactor(&m.select(&rows, &cols));
        acc = if c % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn parse_matches_tree_evaluation(e in expr(), pt in proptest::collection::vec(rational(), 3)) {
        let p = parse_entry(&e.render(), &names()).unwrap();
        prop_assert_eq!(p.eval(&pt), e.value(&pt));
    }

    #[test]
    fn display_round_trip(p in poly()) {
        let again = parse_entry(&p.to_string_with(&names()), &names()).unwrap();
        prop_assert_eq!(again, p);
    }

    #[test]
    fn ring_laws(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(a.clone() + b.clone(), b.clone() + a.clone());
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b.clone() + c.clone()));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(b.clone() + c.clone()), &a * &b + &a * &c);
        prop_assert!((a.clone() - a.clone()).is_zero());
        prop_assert_eq!(&a * &MultiPoly::one(), a.clone());
    }

    #[test]
    fn char_poly_similarity_invariant(n in 1usize..=5, seed in any::<u64>(), entries in proptest::collection::vec(-4i64..=4, 25)) {
        let a = Matrix::from_vec(n, n, entries[..n * n].iter().map(|&k| GaussRat::from_i64(k)).collect());
        let t = random_unimodular(&mut ChaCha8Rng::seed_from_u64(seed), n);
        let b = t.mul(&a).mul(&t.inverse().unwrap());
        prop_assert_eq!(char_poly(&a).unwrap(), char_poly(&b).unwrap());
    }

    #[test]
    fn rank_invariances(m in int_matrix(5), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = exact_rank(&m);
        prop_assert_eq!(exact_rank(&m.transpose()), r);
        let (p, q) = (random_unimodular(&mut rng, 5), random_unimodular(&mut rng, 5));
        prop_assert_eq!(exact_rank(&p.mul(&m).mul(&q)), r);
    }

    #[test]
    fn rank_is_largest_nonzero_minor_order(entries in proptest::collection::vec(-2i64..=2, 20), low_rank in any::<bool>()) {
        let mut m = Matrix::from_vec(4, 5, entries.into_iter().map(GaussRat::from_i64).collect());
        if low_rank {
            // make the last row a combination of the first two
            for c in 0..5 {
                m[(3, c)] = m[(0, c)].clone() - m[(1, c)].clone();
            }
        }
        let r = exact_rank(&m);
        for k in 1..=4 {
            prop_assert_eq!(!minors(&m, k).unwrap().is_empty(), k <= r);
        }
    }

    #[test]
    fn determinant_oracle(m in int_matrix(5)) {
        let det = det_cofactor(&m);
        let p0 = char_poly(&m).unwrap().coeffs()[0].clone();
        // det = (−1)^n P(0) with n = 5
        prop_assert_eq!(det.clone(), -p0);
        let full = minors(&m, 5).unwrap();
        match full.first() {
            Some(minor) => prop_assert_eq!(minor.value.clone(), det.clone()),
            None => prop_assert!(det.is_zero()),
        }
        prop_assert_eq!(det.is_zero(), exact_rank(&m) < 5);
    }
}
