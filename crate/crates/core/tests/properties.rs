mod common;

use common::*;
use proptest::prelude::*;
use slashgeom::extended::{b_adjoint, is_b_skew, make_i, make_j, BlockEndo};
use slashgeom::json::{matrix_to_json, parse_matrix};
use slashgeom::lie::{
    courant_cols, d_closed_2form, eigensection_involutive, heisenberg_times_line, is_subalgebra,
    jacobi_check, LieAlgebraData,
};
use slashgeom::linalg::{eigenspace, inverse, Eigenvalue};
use slashgeom::matrix::RMat;
use slashgeom::orbit::{all_labels, classify, frame, normal_form, OrbitLabel};
use slashgeom::sampling::{conjugate, Sampler};
use slashgeom::scalars::{q, GaussianRational, LorentzRational, RationalQuaternion, Rational};
use slashgeom::slash::{
    bfield, check_slash, form_criterion_complex, form_criterion_symplectic, lift_tensor,
    lift_two_form, sig_complex_11, sig_symplectic_m11, SideData,
};

fn algebras() -> Vec<LieAlgebraData> {
    let br = |d: usize, list: &[(usize, usize, &[i64])]| {
        let brackets: Vec<(usize, usize, Vec<Rational>)> = list
            .iter()
            .map(|(i, j, c)| (*i, *j, c.iter().map(|&x| q(x)).collect()))
            .collect();
        LieAlgebraData::from_brackets(d, &brackets).unwrap()
    };
    vec![
        LieAlgebraData::abelian(4),
        heisenberg_times_line(),
        // aff(R) x aff(R)
        br(4, &[(0, 1, &[0, 1, 0, 0]), (2, 3, &[0, 0, 0, 1])]),
        // so(3) x R
        br(4, &[(0, 1, &[0, 0, 1, 0]), (1, 2, &[1, 0, 0, 0]), (0, 2, &[0, -1, 0, 0])]),
        // the filiform algebra n4
        br(4, &[(0, 1, &[0, 0, 1, 0]), (0, 2, &[0, 0, 0, 1])]),
    ]
}

fn rvec(smp: &mut Sampler, n: usize) -> Vec<Rational> {
    (0..n).map(|_| smp.rational(4, 3)).collect()
}

/// A paracomplex structure on `R^n`, not necessarily split.
fn random_involution(smp: &mut Sampler, n: usize) -> RMat {
    let p = smp.invertible(n, 1);
    let d: Vec<i64> = (0..n).map(|_| if smp.coin() { 1 } else { -1 }).collect();
    conj(&p, &diag_i64(&d))
}

fn nondegenerate_skew(smp: &mut Sampler, n: usize) -> RMat {
    loop {
        let t = smp.skew(n, 2);
        if inverse(&t).is_some() {
            return t;
        }
    }
}

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

fn table_label(s: &BlockEndo, data: &SideData, like: &OrbitLabel) -> Option<OrbitLabel> {
    let c = classify(s, data).ok()?;
    std::iter::once(c.label)
        .chain(c.alternatives)
        .find(|l| l.side == like.side && l.lambda == like.lambda && l.ell == like.ell)
}

#[test]
fn test_algebras_satisfy_jacobi() {
    for g in algebras() {
        assert!(jacobi_check(&g));
    }
}

proptest! {
    #![proptest_config(cfg(48))]

    #[test]
    fn courant_bracket_is_antisymmetric(seed in any::<u64>(), which in 0usize..5) {
        let g = &algebras()[which];
        let mut smp = Sampler::new(seed);
        let x = rvec(&mut smp, 8);
        let y = rvec(&mut smp, 8);
        let xy = courant_cols(&x, &y, g);
        let yx: Vec<Rational> = courant_cols(&y, &x, g).into_iter().map(|v| -v).collect();
        prop_assert_eq!(xy, yx);
    }

    #[test]
    fn graph_involutivity_is_closedness(seed in any::<u64>(), which in 0usize..5) {
        let g = &algebras()[which];
        let mut smp = Sampler::new(seed);
        let theta = if smp.coin() {
            let space = skew_space(4, |b| closedness(b, g));
            combine(&mut smp, &space, 4)
        } else {
            smp.skew(4, 2)
        };
        prop_assume!(inverse(&theta).is_some());
        let closed = d_closed_2form(&theta, g);
        let plus = lift_two_form(&theta, 1).unwrap();
        let minus = lift_two_form(&theta, -1).unwrap();
        prop_assert_eq!(eigensection_involutive(&plus, Eigenvalue::One, g), closed);
        prop_assert_eq!(eigensection_involutive(&plus, Eigenvalue::MinusOne, g), closed);
        prop_assert_eq!(eigensection_involutive(&minus, Eigenvalue::I, g), closed);
        prop_assert_eq!(eigensection_involutive(&minus, Eigenvalue::MinusI, g), closed);
    }

    #[test]
    fn diagonal_plus_involutivity_is_subalgebra(seed in any::<u64>(), which in 0usize..5) {
        let g = &algebras()[which];
        let mut smp = Sampler::new(seed);
        let r = random_involution(&mut smp, 4);
        let rr = lift_tensor(&r).unwrap();
        for (mu, val) in [(Eigenvalue::One, 1), (Eigenvalue::MinusOne, -1)] {
            let sub = is_subalgebra(&eigenspace(&r, &q(val)), g);
            prop_assert_eq!(eigensection_involutive(&rr, mu, g), sub);
        }
    }

    #[test]
    fn closed_bfields_preserve_involutivity(seed in any::<u64>(), which in 0usize..5) {
        let g = &algebras()[which];
        let mut smp = Sampler::new(seed);
        let space = skew_space(4, |b| closedness(b, g));
        let w2 = combine(&mut smp, &space, 4);
        let s = if smp.coin() {
            lift_tensor(&random_involution(&mut smp, 4)).unwrap()
        } else {
            lift_two_form(&nondegenerate_skew(&mut smp, 4), if smp.coin() { 1 } else { -1 }).unwrap()
        };
        let t = bfield(&w2, &s).unwrap();
        prop_assert!(is_b_skew(&t));
        prop_assert_eq!(&t * &t, &s * &s);
        let mus = if (&s * &s).is_scalar(1) {
            [Eigenvalue::One, Eigenvalue::MinusOne]
        } else {
            [Eigenvalue::I, Eigenvalue::MinusI]
        };
        for mu in mus {
            prop_assert_eq!(eigensection_involutive(&t, mu, g), eigensection_involutive(&s, mu, g));
        }
    }

    #[test]
    fn form_criterion_matches_compatibility(seed in any::<u64>(), complex in any::<bool>(), lambda_neg in any::<bool>(), ell_neg in any::<bool>()) {
        let mut smp = Sampler::new(seed);
        let lambda = if lambda_neg { -1 } else { 1 };
        let ell = if ell_neg { -1 } else { 1 };
        let side = if complex { slashgeom::slash::Side::Complex } else { slashgeom::slash::Side::Symplectic };
        let labels: Vec<OrbitLabel> = all_labels(2)
            .into_iter()
            .filter(|l| l.side == side && l.lambda == lambda)
            .collect();
        let nf = normal_form(&labels[smp.index(labels.len())]).unwrap();
        let structure = frame(&nf.data, if complex { ell } else { lambda * ell }).unwrap().structure;
        let f = smp.group_element(&structure, 2);
        let f = if smp.coin() { f } else { &b_isometry(&mut smp, 4, 2) * &f };
        let s = conjugate(&f, &nf.s);
        let (direct, form) = match &nf.data {
            SideData::Complex(j) => (
                s.anticommutator(&make_j(j, ell).unwrap()).is_zero(),
                form_criterion_complex(&s, j, lambda, ell).unwrap(),
            ),
            SideData::Symplectic(w) => (
                s.commutator(&make_i(w, lambda * ell).unwrap()).is_zero(),
                form_criterion_symplectic(&s, w, lambda, ell).unwrap(),
            ),
        };
        prop_assert_eq!(direct, form);
    }

    #[test]
    fn orbit_invariants_are_conjugation_invariant(seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let labels: Vec<OrbitLabel> = (1..=2).flat_map(all_labels).collect();
        let label = labels[pick.index(labels.len())];
        let nf = normal_form(&label).unwrap();
        let mut smp = Sampler::new(seed);
        let structure = frame(&nf.data, label.structure_param()).unwrap().structure;
        let f = smp.group_element(&structure, 3);
        let t = conjugate(&f, &nf.s);
        // the group only preserves membership in the label's own table
        prop_assert_eq!(table_label(&nf.s, &nf.data, &label), Some(label));
        prop_assert_eq!(table_label(&t, &nf.data, &label), Some(label));
        match &nf.data {
            SideData::Complex(j) if label.lambda == 1 && label.ell == 1 => {
                prop_assert_eq!(sig_complex_11(&t, j).unwrap(), sig_complex_11(&nf.s, j).unwrap());
            }
            SideData::Symplectic(w) if label.lambda == -1 && label.ell == 1 => {
                prop_assert_eq!(sig_symplectic_m11(&t, w).unwrap(), sig_symplectic_m11(&nf.s, w).unwrap());
            }
            _ => {}
        }
    }

    #[test]
    fn matrices_round_trip_through_json(seed in any::<u64>(), r in 1usize..5, c in 1usize..5) {
        let mut smp = Sampler::new(seed);
        let m = RMat::from_fn(r, c, |_, _| smp.rational(50, 40));
        let v = matrix_to_json(&m);
        prop_assert_eq!(parse_matrix(&v).unwrap(), m);
        let text = serde_json::to_string(&v).unwrap();
        let again: serde_json::Value = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(serde_json::to_string(&again).unwrap(), text);
    }

    #[test]
    fn scalar_algebras_are_consistent(seed in any::<u64>()) {
        let mut smp = Sampler::new(seed);
        let mut r = || smp.rational(5, 4);
        let z = GaussianRational::new(r(), r());
        let w = GaussianRational::new(r(), r());
        prop_assert_eq!((z.clone() * w.clone()).norm(), z.norm() * w.norm());
        let a = LorentzRational::new(r(), r());
        let b = LorentzRational::new(r(), r());
        prop_assert_eq!((a.clone() * b.clone()).quadrance(), a.quadrance() * b.quadrance());
        let (p, s) = a.split();
        prop_assert_eq!(LorentzRational::from_split(&p, &s), a);
        let x = RationalQuaternion::new(r(), r(), r(), r());
        let y = RationalQuaternion::new(r(), r(), r(), r());
        prop_assert_eq!((x.clone() * y.clone()).norm(), x.norm() * y.norm());
        if let Some(xi) = x.inv() {
            prop_assert_eq!(x.clone() * xi, RationalQuaternion::new(q(1), q(0), q(0), q(0)));
        }
    }

    #[test]
    fn b_adjoint_is_an_involution(seed in any::<u64>()) {
        let mut smp = Sampler::new(seed);
        let e = BlockEndo::from_matrix(smp.int_matrix(6, 6, 3)).unwrap();
        prop_assert_eq!(b_adjoint(&b_adjoint(&e)), e);
    }
}

#[test]
fn normal_forms_separate_labels() {
    for m in 1..=3 {
        let labels = all_labels(m);
        for label in &labels {
            let nf = normal_form(label).unwrap();
            let c = classify(&nf.s, &nf.data).unwrap();
            let mut found: Vec<OrbitLabel> = vec![c.label];
            found.extend(c.alternatives);
            // exactly one label per (side, lambda, ell) table, and it is ours
            let same_table: Vec<&OrbitLabel> = found
                .iter()
                .filter(|l| l.side == label.side && l.lambda == label.lambda && l.ell == label.ell)
                .collect();
            assert_eq!(same_table, vec![label], "{label}");
            for other in &labels {
                if other != label && other.side == label.side && other.lambda == label.lambda && other.ell == label.ell {
                    assert!(!found.contains(other));
                }
            }
        }
    }
}

#[test]
fn complex_automorphisms_transport_structures() {
    let mut smp = Sampler::new(11);
    for m in 1..=2 {
        let nf = normal_form(&OrbitLabel::new(slashgeom::slash::Side::Complex, 1, 1, m, Some(m)).unwrap()).unwrap();
        let j = nf.data.matrix().clone();
        let p = complex_linear(&mut smp, &j);
        assert!(check_slash(&nf.s, &nf.data, 1, 1).unwrap().passed());
        let sig = sig_complex_11(&nf.s, &j).unwrap();
        assert_eq!(sig.n, m);
        assert!(sig.shape_ok);
        // a lifted automorphism of j preserves J, so the sig survives
        let big = RMat::block_diag(&[&p, &inverse(&p).unwrap().transpose()]);
        let s2 = conjugate(&big, &nf.s);
        assert!(check_slash(&s2, &nf.data, 1, 1).unwrap().passed());
        assert_eq!(sig_complex_11(&s2, &j).unwrap().n, m);
    }
}
