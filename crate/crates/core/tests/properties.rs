//! Property tests: random matrices for the linear algebra, sampled corpus
//! objects for the module-theoretic invariants.

mod common;

use std::sync::{Arc, OnceLock};

use proptest::prelude::*;
use rand::SeedableRng;

use qfw_core::algebra::{enveloping, opposite, product_algebra, tensor_algebra, Algebra, AlgebraHom};
use qfw_core::decomp::{decompose, match_classes, WorkRng};
use qfw_core::fixtures::{algebras, corpus, extensions, run_fixture, Task};
use qfw_core::modrep::{
    hom_space, induced_left, induced_right, is_fg_projective, left_dual, regular_bimodule,
    regular_left, restrict_bimodule, tensor_over, Bimodule, LeftModule,
};
use qfw_core::report::Verdict;
use qfw_core::simdiv::{
    divides, divides_modules, dual_certificate, dual_sequence, qf_analysis, similar_modules,
    verify_cert, verify_cert_modules,
};
use qfw_core::{Mat, PrimeField, Side};

const PS: [u64; 4] = [5, 7, 11, 2_147_483_647];

fn rng(seed: u64) -> WorkRng {
    WorkRng::seed_from_u64(seed)
}

fn mat_strategy(max: usize) -> impl Strategy<Value = Mat> {
    (0..PS.len(), 1..=max, 1..=max).prop_flat_map(|(pi, r, c)| {
        let f = PrimeField::new(PS[pi]).unwrap();
        let p = f.p();
        // Small values keep the rank interesting; the rest cover the full range.
        let entry = prop_oneof![3 => 0u32..2, 1 => 0u32..p];
        proptest::collection::vec(entry, r * c).prop_map(move |d| Mat::from_vec(f, r, c, d).unwrap())
    })
}

fn square_strategy(max: usize) -> impl Strategy<Value = Mat> {
    (0..PS.len(), 1..=max).prop_flat_map(|(pi, n)| {
        let f = PrimeField::new(PS[pi]).unwrap();
        let p = f.p();
        let entry = prop_oneof![3 => 0u32..3, 1 => 0u32..p];
        proptest::collection::vec(entry, n * n).prop_map(move |d| Mat::from_vec(f, n, n, d).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rref_is_idempotent(a in mat_strategy(7)) {
        let r = a.rref();
        let rr = r.matrix.rref();
        prop_assert_eq!(&rr.matrix, &r.matrix);
        prop_assert_eq!(rr.pivots, r.pivots);
        prop_assert_eq!(r.rank, a.transpose().rank());
    }

    #[test]
    fn nullspace_has_complementary_dimension(a in mat_strategy(7)) {
        let ns = a.nullspace();
        prop_assert_eq!(ns.len(), a.cols() - a.rank());
        for v in &ns {
            prop_assert!(a.mul_vec(v).iter().all(|&x| x == 0));
        }
        let basis = Mat::from_columns(a.field(), a.cols(), &ns);
        if !ns.is_empty() {
            prop_assert_eq!(basis.rank(), ns.len());
        }
    }

    #[test]
    fn solve_recovers_consistent_systems(a in mat_strategy(6), seed in any::<u64>()) {
        use rand::Rng;
        let f = a.field();
        let mut r = rng(seed);
        let x: Vec<u32> = (0..a.cols() * 2).map(|_| r.gen_range(0..f.p())).collect();
        let x = Mat::from_vec(f, a.cols(), 2, x).unwrap();
        let b = a.mul(&x);
        let y = a.solve_right(&b).unwrap().expect("b is in the column space");
        prop_assert_eq!(a.mul(&y), b);
    }

    #[test]
    fn invertible_iff_full_rank(a in square_strategy(6)) {
        let n = a.rows();
        match a.invert().unwrap() {
            Some(inv) => {
                prop_assert_eq!(a.rank(), n);
                prop_assert!(a.mul(&inv).is_identity());
                prop_assert!(inv.mul(&a).is_identity());
            }
            None => prop_assert!(a.rank() < n),
        }
    }

    #[test]
    fn vec_of_product_is_kronecker(a in square_strategy(3), seed in any::<u64>()) {
        use rand::Rng;
        let f = a.field();
        let n = a.rows();
        let mut r = rng(seed);
        let mut rand_mat = || Mat::from_vec(f, n, n, (0..n * n).map(|_| r.gen_range(0..f.p())).collect()).unwrap();
        let (x, b) = (rand_mat(), rand_mat());
        let lhs = a.mul(&x).mul(&b).vectorize();
        let rhs = a.kron(&b.transpose()).mul_vec(&x.vectorize());
        prop_assert_eq!(lhs, rhs);
    }
}

struct Zoo {
    algebras: Vec<(&'static str, Arc<Algebra>)>,
    extensions: Vec<(String, AlgebraHom)>,
}

fn zoo() -> &'static Zoo {
    static Z: OnceLock<Zoo> = OnceLock::new();
    Z.get_or_init(|| {
        let f = PrimeField::new(5).unwrap();
        Zoo {
            algebras: algebras(f),
            extensions: extensions(f).into_iter().map(|(n, h, _, _)| (n, h)).collect(),
        }
    })
}

fn alg(i: usize) -> &'static Arc<Algebra> {
    let a = &zoo().algebras;
    &a[i % a.len()].1
}

fn ext(i: usize) -> &'static AlgebraHom {
    let e = &zoo().extensions;
    &e[i % e.len()].1
}

fn assoc(a: &Algebra) -> bool {
    common::associative(a.field(), a.dim(), a.structure_constants(), a.unit())
}

/// Modules over `a`: regular, its indecomposable summands, and sums of those.
fn module_family(a: &Arc<Algebra>) -> Vec<LeftModule> {
    let reg = regular_left(a);
    let d = decompose(&reg, &mut rng(0)).unwrap();
    let reps: Vec<LeftModule> = d.classes.iter().map(|c| c.representative.clone()).collect();
    let mut out = vec![reg.clone(), reg.power(2)];
    out.extend(reps.iter().cloned());
    for (i, x) in reps.iter().enumerate() {
        out.push(x.power(2));
        for y in &reps[i..] {
            out.push(x.direct_sum(y).unwrap());
        }
        out.push(x.direct_sum(&reg).unwrap());
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn constructors_are_associative(i in 0usize..7, j in 0usize..7) {
        let (a, b) = (alg(i), alg(j));
        prop_assert!(assoc(&opposite(a)));
        if a.dim() * b.dim() <= 16 {
            prop_assert!(assoc(&tensor_algebra(a, b).unwrap()));
            prop_assert!(assoc(&enveloping(a, b).unwrap().algebra));
        }
        prop_assert!(assoc(&product_algebra(a, b).unwrap()));
    }

    #[test]
    fn induced_bimodule_actions_commute(i in 0usize..12) {
        let h = ext(i);
        for m in [induced_left(h), induced_right(h)] {
            for l in m.left_action() {
                for r in m.right_action() {
                    prop_assert_eq!(l.mul(r), r.mul(l));
                }
            }
        }
    }

    #[test]
    fn hom_basis_intertwines(i in 0usize..7, j in 0usize..64, k in 0usize..64) {
        let a = alg(i);
        let fam = module_family(a);
        let (m, n) = (&fam[j % fam.len()], &fam[k % fam.len()]);
        let h = hom_space(m, n).unwrap();
        let ours = common::hom_basis(&common::Acts::of_module(m), &common::Acts::of_module(n));
        prop_assert_eq!(h.dim(), ours.len());
        for b in h.basis() {
            prop_assert!(m.is_hom_to(n, b));
        }
    }

    #[test]
    fn split_witness_verifies(i in 0usize..7, j in 0usize..64) {
        let fam = module_family(alg(i));
        let m = &fam[j % fam.len()];
        // Every member is a summand of a free module.
        let w = is_fg_projective(m).unwrap();
        prop_assert!(w.as_ref().is_some_and(|w| w.verify(m)));
    }

    #[test]
    fn summands_of_projectives_are_projective(i in 0usize..12, seed in any::<u64>()) {
        let h = ext(i);
        let m = restrict_bimodule(&induced_left(h), Side::Left);
        let d = decompose(&m, &mut rng(seed)).unwrap();
        let proj = is_fg_projective(&m).unwrap().is_some();
        for c in &d.classes {
            prop_assert!(divides_modules(&c.representative, &m, &mut rng(seed)).unwrap().is_some());
            if proj {
                prop_assert!(is_fg_projective(&c.representative).unwrap().is_some());
            }
        }
    }

    #[test]
    fn decomposition_is_seed_independent(i in 0usize..7, j in 0usize..64, s1 in any::<u64>(), s2 in any::<u64>()) {
        let fam = module_family(alg(i));
        let m = &fam[j % fam.len()];
        let d1 = decompose(m, &mut rng(s1)).unwrap();
        let d2 = decompose(m, &mut rng(s2)).unwrap();
        prop_assert!(d1.verify() && d2.verify());
        prop_assert_eq!(d1.signature(), d2.signature());
        let matched = match_classes(&d1, &d2).unwrap();
        prop_assert!(matched.iter().all(Option::is_some));
    }

    #[test]
    fn similarity_is_an_equivalence(i in 0usize..7, j in 0usize..64, k in 0usize..64, l in 0usize..64) {
        let fam = module_family(alg(i));
        let pick = |x: usize| &fam[x % fam.len()];
        let (x, y, z) = (pick(j), pick(k), pick(l));
        let mut r = rng(7);
        let mut sim = |a: &LeftModule, b: &LeftModule| similar_modules(a, b, &mut r).unwrap().is_some();
        prop_assert!(sim(x, x));
        let xy = sim(x, y);
        prop_assert_eq!(xy, sim(y, x));
        if xy && sim(y, z) {
            prop_assert!(sim(x, z));
        }
        prop_assert_eq!(xy, common::similar(&common::Acts::of_module(x), &common::Acts::of_module(y)));
    }

    #[test]
    fn divisibility_has_a_complement(i in 0usize..7, j in 0usize..64, k in 0usize..64) {
        let fam = module_family(alg(i));
        let (m, n) = (&fam[j % fam.len()], &fam[k % fam.len()]);
        if let Some(c) = divides_modules(m, n, &mut rng(1)).unwrap() {
            prop_assert!(verify_cert_modules(&c, m, n).ok);
            // e = φψ is idempotent on N^n and its complement ker ψ has the right size.
            let e = c.phi.mul(&c.psi);
            prop_assert_eq!(e.mul(&e), e.clone());
            let big = n.power(c.copies);
            prop_assert!(big.is_hom_to(&big, &e));
            let comp = Mat::identity(e.field(), e.rows()).sub(&e);
            prop_assert_eq!(comp.rank() + m.dim(), big.dim());
        }
    }
}

fn bimodule_family() -> &'static Vec<Bimodule> {
    static B: OnceLock<Vec<Bimodule>> = OnceLock::new();
    B.get_or_init(|| {
        let mut out = Vec::new();
        for (_, a) in &zoo().algebras {
            out.push(regular_bimodule(a));
        }
        for (_, h) in &zoo().extensions {
            out.push(induced_left(h));
            out.push(induced_right(h));
        }
        out
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn divisibility_transports_to_duals(j in 0usize..64, k in 0usize..64) {
        let fam = bimodule_family();
        let (m, n) = (&fam[j % fam.len()], &fam[k % fam.len()]);
        prop_assume!(m.same_algebras(n));
        let Some(c) = divides(m, n, &mut rng(2)).unwrap() else { return Ok(()); };
        let dm = left_dual(m).unwrap();
        let dn = left_dual(&n.power(c.copies)).unwrap();
        let lifted = qfw_core::simdiv::DividesCert { copies: 1, phi: c.phi.clone(), psi: c.psi.clone() };
        let d = dual_certificate(&lifted, &dm, &dn).unwrap();
        prop_assert!(verify_cert(&d, &dm.bimodule, &dn.bimodule).ok);
    }

    #[test]
    fn tensoring_preserves_divisibility(j in 0usize..64, k in 0usize..64) {
        let fam = bimodule_family();
        let (m, n) = (&fam[j % fam.len()], &fam[k % fam.len()]);
        prop_assume!(m.same_algebras(n));
        let Some(c) = divides(m, n, &mut rng(3)).unwrap() else { return Ok(()); };
        let s = m.right_algebra();
        let p = regular_bimodule(s);
        let big = n.power(c.copies);
        let tm = tensor_over(s, m, &p).unwrap();
        let tn = tensor_over(s, &big, &p).unwrap();
        let id = Mat::identity(p.field(), p.dim());
        let phi = tm.quotient.map_to(&tn.quotient, &c.phi, &id);
        let psi = tn.quotient.map_to(&tm.quotient, &c.psi, &id);
        let t = qfw_core::simdiv::DividesCert { copies: 1, phi, psi };
        prop_assert!(verify_cert(&t, &tm.bimodule, &tn.bimodule).ok);
    }

    #[test]
    fn qf_matches_first_dual_stage(j in 0usize..64) {
        let m = &bimodule_family()[j % bimodule_family().len()];
        let a = qf_analysis(m, &mut rng(4)).unwrap();
        if a.is_qf() {
            prop_assert!(dual_sequence(m, 1).is_ok());
            prop_assert!(common::similar(
                &common::Acts::of_bimodule(&a.left_dual.bimodule),
                &common::Acts::of_bimodule(&a.right_dual.bimodule)
            ));
        }
        prop_assert_eq!(a.is_qf(), common::qf_bimodule(m));
    }
}

#[test]
fn frobenius_implies_qf_on_corpus() {
    let fixtures = corpus();
    let frob: Vec<_> = fixtures.iter().filter(|f| f.task == Task::CheckFrobeniusExtension).collect();
    assert!(!frob.is_empty());
    for fx in frob {
        let r = run_fixture(fx, 0).unwrap();
        if r.verdict == Verdict::Yes {
            let mut plain = fx.clone();
            plain.task = Task::CheckExtension;
            let q = run_fixture(&plain, 0).unwrap();
            assert_eq!(q.verdict, Verdict::Yes, "{}", fx.name);
        }
    }
    for (name, h) in &zoo().extensions {
        let e = qfw_core::ringext::make_extension(h).unwrap();
        let fr = qfw_core::ringext::is_frobenius_extension(&e, &mut rng(0)).unwrap();
        if fr.verdict == Verdict::Yes {
            let q = qfw_core::ringext::is_qf_extension(&e, &mut rng(0)).unwrap();
            assert_eq!(q.verdict, Verdict::Yes, "{name}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn reports_are_deterministic_per_seed(i in 0usize..1000, seed in any::<u64>()) {
        let fixtures = corpus();
        let fx = &fixtures[i % fixtures.len()];
        let a = serde_json::to_string(&run_fixture(fx, seed).unwrap()).unwrap();
        let b = serde_json::to_string(&run_fixture(fx, seed).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }
}
