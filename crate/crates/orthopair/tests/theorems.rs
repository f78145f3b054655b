//! Randomized laws that hold for every input, not just the sampled corpus
//! the suites draw. Shrinking narrows any counterexample to a small matrix.

use num_bigint::BigInt;
use proptest::prelude::*;

use orthopair::{
    complement, gauss_rank, intersect, kernel_basis, minor_invariant_factors, saturate,
    smith_normal_form, value_matches, ExactMatrix, FiniteSpace, Pairing, Ring, Scalar, SheafModule,
    SubmoduleBasis,
};

fn matrix(ring: Ring, max_dim: usize) -> impl Strategy<Value = ExactMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        proptest::collection::vec(-9i64..=9, r * c).prop_map(move |entries| {
            ExactMatrix::from_fn(ring, r, c, |i, j| {
                Scalar::from_int(ring, entries[i * c + j])
            })
        })
    })
}

fn square(ring: Ring, max_dim: usize) -> impl Strategy<Value = ExactMatrix> {
    (1..=max_dim).prop_flat_map(move |n| {
        proptest::collection::vec(-9i64..=9, n * n).prop_map(move |entries| {
            ExactMatrix::from_fn(ring, n, n, |i, j| {
                Scalar::from_int(ring, entries[i * n + j])
            })
        })
    })
}

fn is_diagonal(m: &ExactMatrix) -> bool {
    (0..m.rows()).all(|i| (0..m.cols()).all(|j| i == j || m.get(i, j).is_zero()))
}

proptest! {
    #[test]
    fn smith_is_an_exact_unimodular_diagonalization(m in matrix(Ring::Integer, 5)) {
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.d.clone());
        prop_assert!(s.u.det().is_unit());
        prop_assert!(s.v.det().is_unit());
        prop_assert_eq!(s.u.mul(&s.u_inv), ExactMatrix::identity(Ring::Integer, m.rows()));
        prop_assert_eq!(s.v.mul(&s.v_inv), ExactMatrix::identity(Ring::Integer, m.cols()));
        prop_assert!(is_diagonal(&s.d));
        let factors = s.invariant_factors();
        for pair in factors.windows(2) {
            prop_assert!(pair[1].div_exact(&pair[0]).is_some(),
                "{} does not divide {}", pair[0], pair[1]);
        }
    }

    #[test]
    fn smith_rank_agrees_with_gaussian_elimination(m in matrix(Ring::Rational, 5)) {
        prop_assert_eq!(smith_normal_form(&m).rank(), gauss_rank(&m));
    }

    #[test]
    fn invariant_factors_match_the_gcd_minor_ladder(m in matrix(Ring::Integer, 4)) {
        let from_smith: Vec<String> = smith_normal_form(&m)
            .invariant_factors()
            .iter()
            .map(Scalar::to_string)
            .collect();
        let from_minors: Vec<String> = minor_invariant_factors(&m)
            .iter()
            .map(BigInt::to_string)
            .collect();
        prop_assert_eq!(from_smith, from_minors);
    }

    #[test]
    fn kernel_columns_annihilate_and_fill_the_rank_gap(
        m in prop_oneof![matrix(Ring::Integer, 5), matrix(Ring::Rational, 5)],
    ) {
        let k = kernel_basis(&m);
        prop_assert!(m.mul(k.generators()).is_zero());
        prop_assert_eq!(smith_normal_form(&m).rank() + k.dim(), m.cols());
        prop_assert!(k.is_saturated());
    }

    #[test]
    fn biorthogonal_closure_is_idempotent(gens in matrix(Ring::Rational, 5)) {
        let e = SheafModule::constant(&FiniteSpace::point(), Ring::Rational, gens.rows());
        let p = Pairing::canonical(&e).unwrap();
        let s = SubmoduleBasis::span(&gens);
        let closed = p.biorthogonal(1, &s);
        prop_assert!(closed.contains_all(&s));
        prop_assert_eq!(p.biorthogonal(1, &closed), closed.clone());
    }

    #[test]
    fn orthogonality_reverses_containment(
        gens in matrix(Ring::Rational, 5),
        keep in 0usize..5,
    ) {
        let kept = keep.min(gens.cols());
        let truncated =
            ExactMatrix::from_fn(Ring::Rational, gens.rows(), kept, |i, j| gens.get(i, j).clone());
        let small = SubmoduleBasis::span(&truncated);
        let large = SubmoduleBasis::span(&gens);
        let e = SheafModule::constant(&FiniteSpace::point(), Ring::Rational, gens.rows());
        let p = Pairing::canonical(&e).unwrap();
        prop_assert!(p.orthogonal_in_f(1, &small).contains_all(&p.orthogonal_in_f(1, &large)));
    }

    #[test]
    fn saturation_is_an_idempotent_closure(gens in matrix(Ring::Integer, 5)) {
        let s = SubmoduleBasis::span(&gens);
        let sat = saturate(&s);
        prop_assert!(sat.is_saturated());
        prop_assert!(sat.contains_all(&s));
        prop_assert_eq!(sat.dim(), s.dim());
        prop_assert_eq!(saturate(&sat), sat.clone());
    }

    #[test]
    fn complements_meet_trivially_and_span_everything(gens in matrix(Ring::Rational, 5)) {
        let s = SubmoduleBasis::span(&gens);
        let c = complement(&s).unwrap();
        prop_assert_eq!(intersect(&s, &c).dim(), 0);
        prop_assert_eq!(s.dim() + c.dim(), s.ambient_rank());
    }

    #[test]
    fn determinants_multiply(a in square(Ring::Rational, 4), b in square(Ring::Rational, 4)) {
        prop_assume!(a.rows() == b.rows());
        prop_assert_eq!(a.mul(&b).det(), a.det().mul(&b.det()));
    }

    #[test]
    fn scalars_roundtrip_through_display(n in -9999i64..=9999, d in 1i64..=9999) {
        let s = Scalar::from_int(Ring::Rational, n)
            .div_exact(&Scalar::from_int(Ring::Rational, d))
            .unwrap();
        prop_assert_eq!(Scalar::parse(Ring::Rational, &s.to_string()).unwrap(), s);
        let z = Scalar::from_int(Ring::Integer, n);
        prop_assert_eq!(Scalar::parse(Ring::Integer, &z.to_string()).unwrap(), z);
    }

    #[test]
    fn expectation_matching_is_reflexive_and_projective(
        xs in proptest::collection::vec(-99i64..=99, 0..6),
        k in -99i64..=99,
    ) {
        let full = serde_json::json!({"xs": xs, "k": k, "nested": {"k": k}});
        prop_assert!(value_matches(&full, &full));
        let partial = serde_json::json!({"nested": {"k": k}});
        prop_assert!(value_matches(&partial, &full));
        let wrong = serde_json::json!({"k": k + 1});
        prop_assert!(!value_matches(&wrong, &full));
    }
}
