use jordanscope::algebra::{gcd_squarefree_oracle, GaussRat, MonicPoly, C64};
use jordanscope::corpus::{jordan_instance, polynomial_corpus};
use jordanscope::jordan::{census_exact, census_float, jordan_basis, jordan_census, verify_rank_identities};
use jordanscope::ranklab::{exact_rank, op_norm, DEFAULT_REL_TOL};
use jordanscope::sylv::{build_split_matrix, distinct_zero_count, distinct_zero_count_float};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn split_rank_law_on_polynomial_corpus() {
    let corpus = polynomial_corpus(&mut ChaCha8Rng::seed_from_u64(11), 6, 500);
    assert!(corpus.len() >= 500);
    for inst in &corpus {
        let n = inst.poly.degree();
        let (m, _) = gcd_squarefree_oracle(&inst.poly);
        assert_eq!(m, inst.multiplicities.len());
        let sm = build_split_matrix(&inst.poly).unwrap();
        assert_eq!(exact_rank(&sm.entries), n + m - 1, "roots {:?}", inst.roots);
        assert_eq!(distinct_zero_count(&inst.poly).unwrap(), m);
    }
}

#[test]
fn float_rank_law_on_well_separated_polynomials() {
    let corpus = polynomial_corpus(&mut ChaCha8Rng::seed_from_u64(12), 4, 100);
    for inst in &corpus {
        let p = MonicPoly::new(inst.poly.poly().map(GaussRat::to_c64)).unwrap();
        assert_eq!(distinct_zero_count_float(&p, 1e-10).unwrap(), inst.multiplicities.len());
    }
}

#[test]
fn census_recovers_jordan_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..300 {
        let inst = jordan_instance(&mut rng, 6);
        let census = census_exact(&inst.a, DEFAULT_REL_TOL).unwrap();
        assert!(census.exact_ranks);
        assert_eq!(census.signature(), inst.blocks, "J = {:?}", inst.j);
        let exact: Vec<GaussRat> = census.exact.iter().map(|e| e.clone().unwrap()).collect();
        assert_eq!(exact, inst.eigenvalues);
    }
}

#[test]
fn identities_hold_on_exact_and_float_paths() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..100 {
        let inst = jordan_instance(&mut rng, 6);
        let census = census_exact(&inst.a, DEFAULT_REL_TOL).unwrap();
        let report = verify_rank_identities(&inst.a, &inst.eigenvalues, &census, DEFAULT_REL_TOL).unwrap();
        assert!(report.all_pass, "{:?}", report.failures().collect::<Vec<_>>());

        let af = inst.a.to_c64();
        let eig: Vec<C64> = inst.eigenvalues.iter().map(GaussRat::to_c64).collect();
        // eigenvalue positions are supplied; the ranks are floating
        let with_mult: Vec<(C64, usize)> = eig.iter().copied().zip(census.multiplicities.iter().copied()).collect();
        let float = jordan_census(&af, &with_mult, DEFAULT_REL_TOL).unwrap();
        assert!(!float.exact_ranks);
        assert_eq!(float.signature(), inst.blocks);
        let report = verify_rank_identities(&af, &eig, &float, DEFAULT_REL_TOL).unwrap();
        assert!(report.all_pass, "{:?}", report.failures().collect::<Vec<_>>());
    }
}

#[test]
fn staircase_basis_conjugates_to_jordan_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..100 {
        let inst = jordan_instance(&mut rng, 6);
        let census = census_exact(&inst.a, DEFAULT_REL_TOL).unwrap();
        let af = inst.a.to_c64();
        let basis = jordan_basis(&af, &census, DEFAULT_REL_TOL).unwrap();
        let t_inv = basis.t.inverse().unwrap();
        let res = op_norm(&t_inv.mul(&af).mul(&basis.t).sub(&basis.j));
        assert!(res <= 1e-8 * (1.0 + op_norm(&af)) * basis.condition, "residual {res}");
        assert_eq!(basis.j, inst.j.to_c64());
    }
}

#[test]
fn float_census_on_simple_spectra() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let mut tried = 0;
    while tried < 100 {
        let inst = jordan_instance(&mut rng, 4);
        if inst.blocks.iter().any(|b| b != &[1]) {
            continue;
        }
        tried += 1;
        let float = census_float(&inst.a.to_c64(), DEFAULT_REL_TOL).unwrap();
        assert_eq!(float.signature(), inst.blocks);
    }
}
