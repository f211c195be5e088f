//! Divisibility and similarity with explicit certificates, and the
//! quasi-Frobenius / Frobenius bimodule predicates built on them.

use rand::Rng;

use crate::decomp::{decompose, iso, match_classes, Decomposition};
use crate::error::{Error, Result, Side};
use crate::exactla::Mat;
use crate::modrep::{
    is_fg_projective, left_dual, regular_left, restrict_bimodule, right_dual, tensor_over,
    Bimodule, Dual, LeftModule, SplitWitness,
};
use crate::report::{
    mat_to_json, ActionSet, Certificate, Check, DividesData, IsoData, Report, SplitData, Verdict,
};
use crate::verify::CertCheck;

/// `M | N^copies` witnessed by `psi ∘ phi = id_M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DividesCert {
    pub copies: usize,
    pub phi: Mat,
    pub psi: Mat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimilarityCert {
    pub forward: DividesCert,
    pub backward: DividesCert,
}

/// Certificate that `dm.module` divides a power of `dn.module`, assembled
/// from summand injections, projections and class isomorphisms.
pub fn divides_decomposed(dm: &Decomposition, dn: &Decomposition) -> Result<Option<DividesCert>> {
    let f = dm.module.field();
    let (d_m, d_n) = (dm.module.dim(), dn.module.dim());
    let matches = match_classes(dm, dn)?;
    let mut pairs = Vec::with_capacity(matches.len());
    for m in matches {
        match m {
            Some(x) => pairs.push(x),
            None => return Ok(None),
        }
    }
    let copies = dm
        .classes
        .iter()
        .zip(&pairs)
        .map(|(c, (j, _))| c.multiplicity().div_ceil(dn.classes[*j].multiplicity()))
        .max()
        .unwrap_or(1)
        .max(1);
    let mut phi = Mat::zeros(f, copies * d_n, d_m);
    let mut psi = Mat::zeros(f, d_m, copies * d_n);
    for (cm, (j, theta)) in dm.classes.iter().zip(&pairs) {
        let cn = &dn.classes[*j];
        let theta_inv = theta.invert()?.expect("class isomorphism is invertible");
        for (k, xm) in cm.copies.iter().enumerate() {
            let block = k / cn.multiplicity();
            let xn = &cn.copies[k % cn.multiplicity()];
            let fwd = xn.inj.mul(theta).mul(&xm.proj);
            let back = xm.inj.mul(&theta_inv).mul(&xn.proj);
            let mut pb = phi.block(block * d_n, 0, d_n, d_m);
            pb = pb.add(&fwd);
            phi.set_block(block * d_n, 0, &pb);
            let mut sb = psi.block(0, block * d_n, d_m, d_n);
            sb = sb.add(&back);
            psi.set_block(0, block * d_n, &sb);
        }
    }
    Ok(Some(DividesCert { copies, phi, psi }))
}

pub fn divides_modules<R: Rng + ?Sized>(
    m: &LeftModule,
    n: &LeftModule,
    rng: &mut R,
) -> Result<Option<DividesCert>> {
    let dm = decompose(m, rng)?;
    let dn = decompose(n, rng)?;
    divides_decomposed(&dm, &dn)
}

pub fn divides<R: Rng + ?Sized>(
    m: &Bimodule,
    n: &Bimodule,
    rng: &mut R,
) -> Result<Option<DividesCert>> {
    if !m.same_algebras(n) {
        return Err(Error::AlgebraMismatch);
    }
    divides_modules(m.carrier(), n.carrier(), rng)
}

pub fn similar_decomposed(dm: &Decomposition, dn: &Decomposition) -> Result<Option<SimilarityCert>> {
    let forward = divides_decomposed(dm, dn)?;
    let backward = divides_decomposed(dn, dm)?;
    let classes_equal = match_classes(dm, dn)?.iter().all(Option::is_some)
        && match_classes(dn, dm)?.iter().all(Option::is_some);
    let both = forward.is_some() && backward.is_some();
    if both != classes_equal {
        return Err(Error::Inconsistent(
            "mutual divisibility and class-set equality disagree".into(),
        ));
    }
    Ok(forward
        .zip(backward)
        .map(|(forward, backward)| SimilarityCert { forward, backward }))
}

pub fn similar_modules<R: Rng + ?Sized>(
    m: &LeftModule,
    n: &LeftModule,
    rng: &mut R,
) -> Result<Option<SimilarityCert>> {
    let dm = decompose(m, rng)?;
    let dn = decompose(n, rng)?;
    similar_decomposed(&dm, &dn)
}

pub fn similar<R: Rng + ?Sized>(
    m: &Bimodule,
    n: &Bimodule,
    rng: &mut R,
) -> Result<Option<SimilarityCert>> {
    if !m.same_algebras(n) {
        return Err(Error::AlgebraMismatch);
    }
    similar_modules(m.carrier(), n.carrier(), rng)
}

fn verify_generic(cert: &DividesCert, src: &[Mat], tgt: &[Mat], dm: usize, dn: usize) -> CertCheck {
    let mut reasons = Vec::new();
    let big = cert.copies * dn;
    let shapes = cert.phi.rows() == big
        && cert.phi.cols() == dm
        && cert.psi.rows() == dm
        && cert.psi.cols() == big;
    if !shapes {
        reasons.push("certificate matrices have the wrong shape".into());
    } else {
        if !cert.psi.mul(&cert.phi).is_identity() {
            reasons.push("composite not identity".into());
        }
        let tgt_n: Vec<Mat> = tgt.iter().map(|b| b.repeat_diag(cert.copies)).collect();
        let ok = src.len() == tgt.len()
            && src
                .iter()
                .zip(&tgt_n)
                .all(|(a, b)| cert.phi.mul(a) == b.mul(&cert.phi) && cert.psi.mul(b) == a.mul(&cert.psi));
        if !ok {
            reasons.push("not a bimodule map".into());
        }
    }
    CertCheck {
        ok: reasons.is_empty(),
        reasons,
    }
}

/// Re-checks a divisibility certificate between bimodules by matrix identities.
pub fn verify_cert(cert: &DividesCert, m: &Bimodule, n: &Bimodule) -> CertCheck {
    let src: Vec<Mat> = m.left_action().iter().chain(m.right_action()).cloned().collect();
    let tgt: Vec<Mat> = n.left_action().iter().chain(n.right_action()).cloned().collect();
    verify_generic(cert, &src, &tgt, m.dim(), n.dim())
}

pub fn verify_cert_modules(cert: &DividesCert, m: &LeftModule, n: &LeftModule) -> CertCheck {
    verify_generic(cert, m.action(), n.action(), m.dim(), n.dim())
}

pub fn divides_data(cert: &DividesCert, source: ActionSet, target: ActionSet, p: u32) -> DividesData {
    DividesData {
        p,
        source,
        target,
        copies: cert.copies,
        phi: mat_to_json(&cert.phi),
        psi: mat_to_json(&cert.psi),
    }
}

pub fn similarity_certificate(c: &SimilarityCert, m: &Bimodule, n: &Bimodule) -> Certificate {
    let p = m.field().p();
    Certificate::Similarity {
        forward: divides_data(&c.forward, ActionSet::of_bimodule(m), ActionSet::of_bimodule(n), p),
        backward: divides_data(&c.backward, ActionSet::of_bimodule(n), ActionSet::of_bimodule(m), p),
    }
}

pub fn similarity_certificate_modules(c: &SimilarityCert, m: &LeftModule, n: &LeftModule) -> Certificate {
    let p = m.field().p();
    Certificate::Similarity {
        forward: divides_data(&c.forward, ActionSet::of_module(m), ActionSet::of_module(n), p),
        backward: divides_data(&c.backward, ActionSet::of_module(n), ActionSet::of_module(m), p),
    }
}

pub fn divides_certificate(c: &DividesCert, m: &Bimodule, n: &Bimodule) -> Certificate {
    Certificate::Divides(divides_data(
        c,
        ActionSet::of_bimodule(m),
        ActionSet::of_bimodule(n),
        m.field().p(),
    ))
}

pub fn split_certificate(w: &SplitWitness, m: &LeftModule) -> Certificate {
    Certificate::Split(SplitData {
        p: m.field().p(),
        module: ActionSet::of_module(m),
        regular: ActionSet::of_module(&regular_left(m.algebra())),
        copies: w.copies,
        pi: mat_to_json(&w.pi),
        sigma: mat_to_json(&w.sigma),
    })
}

pub fn iso_certificate(map: &Mat, m: &Bimodule, n: &Bimodule) -> Certificate {
    Certificate::Iso(IsoData {
        p: m.field().p(),
        source: ActionSet::of_bimodule(m),
        target: ActionSet::of_bimodule(n),
        map: mat_to_json(map),
    })
}

pub const ANCHOR_QF_BIMODULE: &str = "quasi-Frobenius bimodule: projective on both sides, left and right duals similar";
pub const ANCHOR_FROBENIUS_BIMODULE: &str = "Frobenius bimodule: projective on both sides, left and right duals isomorphic";
pub const ANCHOR_PROJECTIVE: &str = "finitely generated projective via a dual basis";
pub const ANCHOR_TENSOR: &str = "tensor product of quasi-Frobenius bimodules is quasi-Frobenius";

/// Everything computed while deciding whether a bimodule is quasi-Frobenius.
#[derive(Clone, Debug)]
pub struct QfAnalysis {
    pub left_split: Option<SplitWitness>,
    pub right_split: Option<SplitWitness>,
    pub left_dual: Dual,
    pub right_dual: Dual,
    pub similarity: Option<SimilarityCert>,
}

impl QfAnalysis {
    pub fn is_qf(&self) -> bool {
        self.left_split.is_some() && self.right_split.is_some() && self.similarity.is_some()
    }
}

pub fn qf_analysis<R: Rng + ?Sized>(m: &Bimodule, rng: &mut R) -> Result<QfAnalysis> {
    let left_split = is_fg_projective(&restrict_bimodule(m, Side::Left))?;
    let right_split = is_fg_projective(&restrict_bimodule(m, Side::Right))?;
    let ld = left_dual(m)?;
    let rd = right_dual(m)?;
    let similarity = similar(&ld.bimodule, &rd.bimodule, rng)?;
    Ok(QfAnalysis {
        left_split,
        right_split,
        left_dual: ld,
        right_dual: rd,
        similarity,
    })
}

fn projectivity_checks(m: &Bimodule, left: &Option<SplitWitness>, right: &Option<SplitWitness>) -> Vec<Check> {
    let mut out = Vec::new();
    for (side, w) in [(Side::Left, left), (Side::Right, right)] {
        let module = restrict_bimodule(m, side);
        let name = format!("{side}-projective");
        let check = match w {
            Some(w) => Check::new(&name, ANCHOR_PROJECTIVE, Verdict::Yes)
                .with_certificate(Some(split_certificate(w, &module))),
            None => Check::new(&name, ANCHOR_PROJECTIVE, Verdict::No)
                .with_reason(format!("{side} restriction not projective")),
        };
        out.push(check);
    }
    out
}

pub fn qf_report(m: &Bimodule, a: &QfAnalysis) -> Report {
    let mut checks = projectivity_checks(m, &a.left_split, &a.right_split);
    let sim = match &a.similarity {
        Some(c) => Check::new("duals-similar", ANCHOR_QF_BIMODULE, Verdict::Yes).with_certificate(Some(
            similarity_certificate(c, &a.left_dual.bimodule, &a.right_dual.bimodule),
        )),
        None => Check::new("duals-similar", ANCHOR_QF_BIMODULE, Verdict::No)
            .with_reason("left and right duals are not similar"),
    };
    checks.push(sim);
    Report::new(Verdict::from_bool(a.is_qf()), checks)
}

pub fn is_qf_bimodule<R: Rng + ?Sized>(m: &Bimodule, rng: &mut R) -> Result<Report> {
    let a = qf_analysis(m, rng)?;
    Ok(qf_report(m, &a))
}

pub fn is_frobenius_bimodule<R: Rng + ?Sized>(m: &Bimodule, rng: &mut R) -> Result<Report> {
    let left = is_fg_projective(&restrict_bimodule(m, Side::Left))?;
    let right = is_fg_projective(&restrict_bimodule(m, Side::Right))?;
    let ld = left_dual(m)?;
    let rd = right_dual(m)?;
    let map = iso(ld.bimodule.carrier(), rd.bimodule.carrier(), rng)?;
    let mut checks = projectivity_checks(m, &left, &right);
    let iso_check = match &map {
        Some(x) => Check::new("duals-isomorphic", ANCHOR_FROBENIUS_BIMODULE, Verdict::Yes)
            .with_certificate(Some(iso_certificate(x, &ld.bimodule, &rd.bimodule))),
        None => Check::new("duals-isomorphic", ANCHOR_FROBENIUS_BIMODULE, Verdict::No)
            .with_reason("left and right duals are not isomorphic"),
    };
    checks.push(iso_check);
    let verdict = Verdict::from_bool(left.is_some() && right.is_some() && map.is_some());
    Ok(Report::new(verdict, checks))
}

/// One entry of the alternating dual sequence; `index > 0` iterates left
/// duals, `index < 0` right duals.
#[derive(Clone, Debug)]
pub struct DualStage {
    pub index: i64,
    pub side: Option<Side>,
    pub bimodule: Bimodule,
}

pub fn dual_sequence(m: &Bimodule, depth: usize) -> Result<Vec<DualStage>> {
    let mut forward = Vec::new();
    let mut cur = m.clone();
    for k in 1..=depth {
        if is_fg_projective(&restrict_bimodule(&cur, Side::Left))?.is_none() {
            return Err(Error::NotProjectiveAtStage(k as i64));
        }
        cur = left_dual(&cur)?.bimodule;
        forward.push(DualStage {
            index: k as i64,
            side: Some(Side::Left),
            bimodule: cur.clone(),
        });
    }
    let mut backward = Vec::new();
    let mut cur = m.clone();
    for k in 1..=depth {
        if is_fg_projective(&restrict_bimodule(&cur, Side::Right))?.is_none() {
            return Err(Error::NotProjectiveAtStage(-(k as i64)));
        }
        cur = right_dual(&cur)?.bimodule;
        backward.push(DualStage {
            index: -(k as i64),
            side: Some(Side::Right),
            bimodule: cur.clone(),
        });
    }
    backward.reverse();
    backward.push(DualStage {
        index: 0,
        side: None,
        bimodule: m.clone(),
    });
    backward.extend(forward);
    Ok(backward)
}

pub fn qf_tensor_check<R: Rng + ?Sized>(m: &Bimodule, n: &Bimodule, rng: &mut R) -> Result<Report> {
    let s = m.right_algebra();
    if !crate::algebra::same_algebra(s, n.left_algebra()) {
        return Err(Error::Precondition(
            "the middle algebras of the two bimodules differ".into(),
        ));
    }
    let rm = is_qf_bimodule(m, rng)?;
    let rn = is_qf_bimodule(n, rng)?;
    let premises = rm.verdict.is_yes() && rn.verdict.is_yes();
    let mut report = Report::new(Verdict::Vacuous, vec![]);
    report.checks.push(Check::new("first-factor-qf", ANCHOR_QF_BIMODULE, rm.verdict));
    report.checks.push(Check::new("second-factor-qf", ANCHOR_QF_BIMODULE, rn.verdict));
    report.absorb("first", rm);
    report.absorb("second", rn);
    if !premises {
        return Ok(report);
    }
    let t = tensor_over(s, m, n)?;
    let rt = is_qf_bimodule(&t.bimodule, rng)?;
    let verdict = if rt.verdict.is_yes() {
        Verdict::Yes
    } else {
        Verdict::Inconsistent
    };
    report
        .checks
        .push(Check::new("tensor-qf", ANCHOR_TENSOR, rt.verdict));
    report.absorb("tensor", rt);
    report.verdict = verdict;
    Ok(report)
}

/// Dual maps of a divisibility certificate: from `M | N^n` by `(φ, ψ)`,
/// `left_dual(M) | left_dual(N)^n` by `(ψ*, φ*)` applied componentwise.
pub fn dual_certificate(
    cert: &DividesCert,
    dual_m: &Dual,
    dual_n: &Dual,
) -> Result<DividesCert> {
    let f = cert.phi.field();
    let n = cert.copies;
    let dn = cert.phi.rows() / n.max(1);
    let hm = &dual_m.hom;
    let hn = &dual_n.hom;
    let (km, kn) = (hm.dim(), hn.dim());
    // φ*: (N*)^n → M*, (g_1..g_n) ↦ Σ g_t ∘ φ_t ; ψ*: M* → (N*)^n, h ↦ (h ∘ ψ_t)
    let phi_t: Vec<Mat> = (0..n).map(|t| cert.phi.block(t * dn, 0, dn, cert.phi.cols())).collect();
    let psi_t: Vec<Mat> = (0..n).map(|t| cert.psi.block(0, t * dn, cert.psi.rows(), dn)).collect();
    let mut up = Mat::zeros(f, n * kn, km);
    for (b, h) in hm.basis().iter().enumerate() {
        for t in 0..n {
            let c = hn
                .coordinates(&h.mul(&psi_t[t]))
                .ok_or_else(|| Error::Inconsistent("dual map leaves the Hom space".into()))?;
            for (i, v) in c.into_iter().enumerate() {
                up.set(t * kn + i, b, v);
            }
        }
    }
    let mut down = Mat::zeros(f, km, n * kn);
    for t in 0..n {
        for (b, g) in hn.basis().iter().enumerate() {
            let c = hm
                .coordinates(&g.mul(&phi_t[t]))
                .ok_or_else(|| Error::Inconsistent("dual map leaves the Hom space".into()))?;
            for (i, v) in c.into_iter().enumerate() {
                down.set(i, t * kn + b, v);
            }
        }
    }
    Ok(DividesCert {
        copies: n,
        phi: up,
        psi: down,
    })
}
