//! Ring extensions `φ: R → S` and their quasi-Frobenius / Frobenius predicates.

use rand::Rng;

use crate::algebra::{same_algebra, AlgebraHom};
use crate::decomp::iso;
use crate::error::{Error, Result, Side};
use crate::exactla::Mat;
use crate::modrep::{
    induced_left, induced_right, is_fg_projective, left_dual, restrict_bimodule, tensor_quotient,
    Bimodule, LeftModule,
};
use crate::report::{Check, Report, Verdict};
use crate::simdiv::{divides, iso_certificate, qf_analysis, qf_report, split_certificate};

pub const ANCHOR_QF_RS: &str = "quasi-Frobenius extension: _R S_S is a quasi-Frobenius bimodule";
pub const ANCHOR_QF_SR: &str = "quasi-Frobenius extension: _S S_R is a quasi-Frobenius bimodule";
pub const ANCHOR_FROBENIUS: &str = "Frobenius extension: S is isomorphic to Hom_R(S, R) as (S,R)-bimodules";
pub const ANCHOR_COMPOSE: &str = "composition: for β quasi-Frobenius, α is quasi-Frobenius iff β∘α is";
pub const ANCHOR_PAIR: &str = "quasi-Frobenius pair: composite of the witness transformations is the identity";

#[derive(Clone, Debug)]
pub struct Extension {
    pub hom: AlgebraHom,
    /// `_R S_S`.
    pub rs: Bimodule,
    /// `_S S_R`.
    pub sr: Bimodule,
}

pub fn make_extension(hom: &AlgebraHom) -> Result<Extension> {
    let rs = induced_left(hom);
    let sr = induced_right(hom);
    rs.carrier().validate()?;
    sr.carrier().validate()?;
    Ok(Extension {
        hom: hom.clone(),
        rs,
        sr,
    })
}

impl Extension {
    pub fn compose(&self, after: &Extension) -> Result<Extension> {
        make_extension(&self.hom.then(&after.hom)?)
    }
}

pub fn is_qf_extension<R: Rng + ?Sized>(e: &Extension, rng: &mut R) -> Result<Report> {
    let primary = qf_analysis(&e.rs, rng)?;
    let cross = qf_analysis(&e.sr, rng)?;
    let (a, b) = (primary.is_qf(), cross.is_qf());
    let mut rs_check = Check::new("rs-qf", ANCHOR_QF_RS, Verdict::from_bool(a));
    if primary.left_split.is_none() {
        rs_check = rs_check.with_reason("_R S not projective");
    } else if primary.right_split.is_none() {
        rs_check = rs_check.with_reason("S_S not projective");
    } else if primary.similarity.is_none() {
        rs_check = rs_check.with_reason("S and Hom_R(S, R) are not similar");
    }
    let sr_check = Check::new("sr-qf", ANCHOR_QF_SR, Verdict::from_bool(b));
    let verdict = if a == b {
        Verdict::from_bool(a)
    } else {
        Verdict::Inconsistent
    };
    let mut report = Report::new(verdict, vec![rs_check, sr_check]);
    report.absorb("rs", qf_report(&e.rs, &primary));
    report.absorb("sr", qf_report(&e.sr, &cross));
    Ok(report)
}

pub fn is_frobenius_extension<R: Rng + ?Sized>(e: &Extension, rng: &mut R) -> Result<Report> {
    let left = restrict_bimodule(&e.rs, Side::Left);
    let split = is_fg_projective(&left)?;
    let proj = match &split {
        Some(w) => Check::new("left-projective", ANCHOR_FROBENIUS, Verdict::Yes)
            .with_certificate(Some(split_certificate(w, &left))),
        None => Check::new("left-projective", ANCHOR_FROBENIUS, Verdict::No)
            .with_reason("_R S not projective"),
    };
    let mut checks = vec![proj];
    let mut ok = split.is_some();
    if ok {
        let d = left_dual(&e.rs)?;
        let map = iso(e.sr.carrier(), d.bimodule.carrier(), rng)?;
        let c = match &map {
            Some(x) => Check::new("s-iso-dual", ANCHOR_FROBENIUS, Verdict::Yes)
                .with_certificate(Some(iso_certificate(x, &e.sr, &d.bimodule))),
            None => Check::new("s-iso-dual", ANCHOR_FROBENIUS, Verdict::No)
                .with_reason("S and Hom_R(S, R) are not isomorphic"),
        };
        ok = map.is_some();
        checks.push(c);
    }
    Ok(Report::new(Verdict::from_bool(ok), checks))
}

/// For `β` quasi-Frobenius, `α` is quasi-Frobenius iff `β∘α` is. Vacuous when
/// `β` fails; `Inconsistent` if the equivalence is violated.
pub fn compose_check<R: Rng + ?Sized>(alpha: &Extension, beta: &Extension, rng: &mut R) -> Result<Report> {
    if !same_algebra(&alpha.hom.target, &beta.hom.source) {
        return Err(Error::AlgebraMismatch);
    }
    let rb = is_qf_extension(beta, rng)?;
    let mut report = Report::new(Verdict::Vacuous, vec![Check::new("beta-qf", ANCHOR_COMPOSE, rb.verdict)]);
    let beta_ok = rb.verdict.is_yes();
    report.absorb("beta", rb);
    if !beta_ok {
        return Ok(report);
    }
    let composite = alpha.compose(beta)?;
    let ra = is_qf_extension(alpha, rng)?;
    let rc = is_qf_extension(&composite, rng)?;
    for r in [&ra, &rc] {
        if r.verdict == Verdict::Inconsistent {
            report.verdict = Verdict::Inconsistent;
        }
    }
    report.checks.push(Check::new("alpha-qf", ANCHOR_COMPOSE, ra.verdict));
    report.checks.push(Check::new("composite-qf", ANCHOR_COMPOSE, rc.verdict));
    if report.verdict != Verdict::Inconsistent {
        report.verdict = if ra.verdict == rc.verdict {
            Verdict::Yes
        } else {
            Verdict::Inconsistent
        };
    }
    report.absorb("alpha", ra);
    report.absorb("composite", rc);
    Ok(report)
}

/// Witness matrices for the quasi-Frobenius pair at an S-module `X`:
/// `alpha: X → (S ⊗_R X)^copies` and `alpha_bar: (S ⊗_R X)^copies → X`.
#[derive(Clone, Debug)]
pub struct PairWitness {
    pub copies: usize,
    pub alpha: Mat,
    pub alpha_bar: Mat,
    pub verified: bool,
}

/// `α_X(x) = Σ_k u(f_k) ⊗ s_k x` from a dual basis `(s_k, f_k)` of `_R S` and
/// `u: Hom_R(S, R) → S^n` split by `v`; `ᾱ(s ⊗ y) = v(s)(1)·y`.
pub fn qf_pair_witness<R: Rng + ?Sized>(e: &Extension, x: &LeftModule, rng: &mut R) -> Result<PairWitness> {
    if !same_algebra(x.algebra(), &e.hom.target) {
        return Err(Error::AlgebraMismatch);
    }
    let hom = &e.hom;
    let s = &hom.target;
    let r = &hom.source;
    let f = s.field();
    let (ds, dx) = (s.dim(), x.dim());
    let left = restrict_bimodule(&e.rs, Side::Left);
    let Some(split) = is_fg_projective(&left)? else {
        return Err(Error::Precondition("_R S is not projective".into()));
    };
    let dual = left_dual(&e.rs)?;
    let Some(cert) = divides(&dual.bimodule, &e.sr, rng)? else {
        return Err(Error::Precondition(
            "Hom_R(S, R) does not divide a power of S".into(),
        ));
    };
    let n = cert.copies;
    // S ⊗_R X over the generators of R acting through φ.
    let gens: Vec<Vec<u32>> = r.generators().to_vec();
    let right_on_s: Vec<Mat> = gens.iter().map(|g| s.right_mult_elem(&hom.apply(g))).collect();
    let left_on_x: Vec<Mat> = gens.iter().map(|g| x.act(&hom.apply(g))).collect();
    let t = tensor_quotient(f, ds, dx, &right_on_s, &left_on_x);
    let q = t.dim();
    let rd = r.dim();
    // u(f_k) for the dual functionals f_k = block k of σ.
    let u_images: Vec<Vec<u32>> = (0..ds)
        .map(|k| {
            let fk = split.sigma.block(k * rd, 0, rd, ds);
            let c = dual
                .hom
                .coordinates(&fk)
                .ok_or_else(|| Error::Inconsistent("dual functional leaves Hom_R(S, R)".into()))?;
            Ok(cert.phi.mul_vec(&c))
        })
        .collect::<Result<_>>()?;
    let mut alpha = Mat::zeros(f, n * q, dx);
    for col in 0..dx {
        let ex: Vec<u32> = (0..dx).map(|i| u32::from(i == col)).collect();
        for (k, uk) in u_images.iter().enumerate() {
            let skx = x.act(&s.basis_vector(k)).mul_vec(&ex);
            for blk in 0..n {
                let c = t.class_of(&uk[blk * ds..(blk + 1) * ds], &skx);
                for (i, v) in c.into_iter().enumerate() {
                    let row = blk * q + i;
                    alpha.set(row, col, f.add(alpha.get(row, col), v));
                }
            }
        }
    }
    let mut alpha_bar = Mat::zeros(f, dx, n * q);
    for blk in 0..n {
        for i in 0..q {
            let (a, b) = t.representative(i);
            let g = dual.hom.element(&cert.psi.column(blk * ds + a));
            let g1 = g.mul_vec(s.unit());
            let y = x.act(&hom.apply(&g1)).column(b);
            for (row, v) in y.into_iter().enumerate() {
                alpha_bar.set(row, blk * q + i, v);
            }
        }
    }
    let id_x = Mat::identity(f, dx);
    let s_on_t: Vec<Mat> = s
        .left_mults()
        .iter()
        .map(|l| t.map_to(&t, l, &id_x).repeat_diag(n))
        .collect();
    let linear = x
        .action()
        .iter()
        .zip(&s_on_t)
        .all(|(ax, at)| alpha.mul(ax) == at.mul(&alpha));
    let verified = linear && alpha_bar.mul(&alpha).is_identity();
    Ok(PairWitness {
        copies: n,
        alpha,
        alpha_bar,
        verified,
    })
}

pub fn pair_report(w: &PairWitness) -> Check {
    let c = Check::new("pair-witness", ANCHOR_PAIR, Verdict::from_bool(w.verified));
    if w.verified {
        c
    } else {
        c.with_reason("composite not identity")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{
        field_algebra, group_algebra, make_hom, matrix_algebra, product_algebra, truncated_polynomial,
        Group,
    };
    use crate::decomp::WorkRng;
    use crate::exactla::PrimeField;
    use crate::modrep::regular_left;
    use crate::verify::verify_certificate;
    use rand::SeedableRng;

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    fn rng() -> WorkRng {
        WorkRng::seed_from_u64(11)
    }

    fn unit_ext(s: &std::sync::Arc<crate::algebra::Algebra>) -> Extension {
        make_extension(&AlgebraHom::unit_embedding(s)).unwrap()
    }

    fn quotient_ext() -> Extension {
        let d = truncated_polynomial(f5(), 2);
        let k = field_algebra(f5());
        let h = make_hom(&d, &k, Mat::from_rows(f5(), &[vec![1, 0]]).unwrap()).unwrap();
        make_extension(&h).unwrap()
    }

    fn all_certs_verify(r: &Report) -> bool {
        r.certificates().all(|(_, c)| verify_certificate(c).ok)
    }

    #[test]
    fn extensions_construct() {
        let c2 = group_algebra(f5(), &Group::cyclic(2));
        let id = make_extension(&AlgebraHom::identity(&c2)).unwrap();
        assert_eq!(id.rs.left_action(), c2.left_mults());
        unit_ext(&c2);
        unit_ext(&matrix_algebra(f5(), 2));
    }

    #[test]
    fn qf_extension_examples() {
        let mut r = rng();
        for s in [group_algebra(f5(), &Group::cyclic(2)), matrix_algebra(f5(), 2)] {
            let rep = is_qf_extension(&unit_ext(&s), &mut r).unwrap();
            assert_eq!(rep.verdict, Verdict::Yes);
            assert!(all_certs_verify(&rep));
            assert!(rep.certificates().count() >= 3);
        }
        let rep = is_qf_extension(&quotient_ext(), &mut r).unwrap();
        assert_eq!(rep.verdict, Verdict::No);
        assert_eq!(rep.check("rs-qf").unwrap().reason.as_deref(), Some("_R S not projective"));
    }

    #[test]
    fn frobenius_extension_examples() {
        let mut r = rng();
        for s in [group_algebra(f5(), &Group::cyclic(3)), matrix_algebra(f5(), 2)] {
            let rep = is_frobenius_extension(&unit_ext(&s), &mut r).unwrap();
            assert_eq!(rep.verdict, Verdict::Yes);
            assert!(all_certs_verify(&rep));
        }
        assert_eq!(is_frobenius_extension(&quotient_ext(), &mut r).unwrap().verdict, Verdict::No);
    }

    #[test]
    fn composition() {
        let mut r = rng();
        let c2 = group_algebra(f5(), &Group::cyclic(2));
        let id = make_extension(&AlgebraHom::identity(&c2)).unwrap();
        assert_eq!(compose_check(&id, &id, &mut r).unwrap().verdict, Verdict::Yes);
        let cc = product_algebra(&c2, &c2).unwrap();
        let diag = Mat::vstack(f5(), 2, &[&Mat::identity(f5(), 2), &Mat::identity(f5(), 2)]);
        let beta = make_extension(&make_hom(&c2, &cc, diag).unwrap()).unwrap();
        let rep = compose_check(&unit_ext(&c2), &beta, &mut r).unwrap();
        assert_eq!(rep.verdict, Verdict::Yes);
        assert_eq!(rep.check("composite-qf").unwrap().verdict, Verdict::Yes);
        let k = field_algebra(f5());
        let beta2 = make_extension(&AlgebraHom::unit_embedding(&c2)).unwrap();
        let id_k = make_extension(&AlgebraHom::identity(&k)).unwrap();
        assert_eq!(compose_check(&id_k, &beta2, &mut r).unwrap().verdict, Verdict::Yes);
        let q = quotient_ext();
        let id_k2 = make_extension(&AlgebraHom::identity(&q.hom.target)).unwrap();
        let rep = compose_check(&q, &id_k2, &mut r).unwrap();
        assert_eq!(rep.verdict, Verdict::Yes);
        assert_eq!(rep.check("alpha-qf").unwrap().verdict, Verdict::No);
        assert_eq!(rep.check("composite-qf").unwrap().verdict, Verdict::No);
        assert!(matches!(compose_check(&id_k, &q, &mut r), Err(Error::AlgebraMismatch)));
    }

    #[test]
    fn pair_witnesses() {
        let mut r = rng();
        let c2 = group_algebra(f5(), &Group::cyclic(2));
        let id = make_extension(&AlgebraHom::identity(&c2)).unwrap();
        let w = qf_pair_witness(&id, &regular_left(&c2), &mut r).unwrap();
        assert!(w.verified && w.copies == 1 && w.alpha.is_invertible());
        let triv = LeftModule::new(&c2, 1, vec![Mat::identity(f5(), 1), Mat::identity(f5(), 1)]).unwrap();
        assert!(qf_pair_witness(&unit_ext(&c2), &triv, &mut r).unwrap().verified);
        let m2 = matrix_algebra(f5(), 2);
        let x = crate::decomp::decompose(&regular_left(&m2), &mut r).unwrap().classes[0]
            .representative
            .clone();
        assert_eq!(x.dim(), 2);
        assert!(qf_pair_witness(&unit_ext(&m2), &x, &mut r).unwrap().verified);
        let q = quotient_ext();
        let k1 = regular_left(&q.hom.target);
        assert!(matches!(qf_pair_witness(&q, &k1, &mut r), Err(Error::Precondition(_))));
    }
}
