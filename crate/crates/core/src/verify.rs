//! Independent certificate checking. Only matrix arithmetic is used: no
//! decomposition, Hom spaces or algebra structure.

use crate::exactla::{Mat, PrimeField};
use crate::report::{
    ActionSet, Certificate, CompositeData, DecompositionData, DividesData, IsoData, MatrixJson,
    SplitData,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertCheck {
    pub ok: bool,
    pub reasons: Vec<String>,
}

impl CertCheck {
    fn from_reasons(reasons: Vec<String>) -> CertCheck {
        CertCheck {
            ok: reasons.is_empty(),
            reasons,
        }
    }
}

type Res<T> = std::result::Result<T, String>;

fn matrix(f: PrimeField, m: &MatrixJson, rows: usize, cols: usize, what: &str) -> Res<Mat> {
    if m.len() != rows {
        return Err(format!("{what}: expected {rows} rows, found {}", m.len()));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for r in m {
        if r.len() != cols {
            return Err(format!("{what}: expected {cols} columns, found {}", r.len()));
        }
        data.extend_from_slice(r);
    }
    Mat::from_vec(f, rows, cols, data).map_err(|e| format!("{what}: {e}"))
}

fn actions(f: PrimeField, a: &ActionSet, what: &str) -> Res<Vec<Mat>> {
    a.actions
        .iter()
        .enumerate()
        .map(|(i, m)| matrix(f, m, a.dim, a.dim, &format!("{what} action {i}")))
        .collect()
}

/// `map: source → target` intertwines `src[i]` and `tgt[i]`.
fn intertwines(map: &Mat, src: &[Mat], tgt: &[Mat]) -> bool {
    src.len() == tgt.len() && src.iter().zip(tgt).all(|(a, b)| map.mul(a) == b.mul(map))
}

fn field(p: u32) -> Res<PrimeField> {
    PrimeField::new(p as u64).map_err(|e| e.to_string())
}

fn check_divides(d: &DividesData, reasons: &mut Vec<String>) -> Res<()> {
    let f = field(d.p)?;
    let src = actions(f, &d.source, "source")?;
    let tgt = actions(f, &d.target, "target")?;
    if src.len() != tgt.len() {
        return Err("source and target carry different numbers of actions".into());
    }
    let big = d.copies * d.target.dim;
    let phi = matrix(f, &d.phi, big, d.source.dim, "phi")?;
    let psi = matrix(f, &d.psi, d.source.dim, big, "psi")?;
    if !psi.mul(&phi).is_identity() {
        reasons.push("composite not identity".into());
    }
    let tgt_n: Vec<Mat> = tgt.iter().map(|b| b.repeat_diag(d.copies)).collect();
    if !intertwines(&phi, &src, &tgt_n) || !intertwines(&psi, &tgt_n, &src) {
        reasons.push("not a bimodule map".into());
    }
    Ok(())
}

fn check_split(d: &SplitData, reasons: &mut Vec<String>) -> Res<()> {
    let f = field(d.p)?;
    let m = actions(f, &d.module, "module")?;
    let reg = actions(f, &d.regular, "regular")?;
    let free: Vec<Mat> = reg.iter().map(|r| r.repeat_diag(d.copies)).collect();
    let big = d.copies * d.regular.dim;
    let pi = matrix(f, &d.pi, d.module.dim, big, "pi")?;
    let sigma = matrix(f, &d.sigma, big, d.module.dim, "sigma")?;
    if !pi.mul(&sigma).is_identity() {
        reasons.push("composite not identity".into());
    }
    if !intertwines(&pi, &free, &m) || !intertwines(&sigma, &m, &free) {
        reasons.push("not a module map".into());
    }
    Ok(())
}

fn check_iso(d: &IsoData, reasons: &mut Vec<String>) -> Res<()> {
    let f = field(d.p)?;
    let src = actions(f, &d.source, "source")?;
    let tgt = actions(f, &d.target, "target")?;
    let map = matrix(f, &d.map, d.target.dim, d.source.dim, "map")?;
    if !map.is_invertible() {
        reasons.push("map not invertible".into());
    }
    if !intertwines(&map, &src, &tgt) {
        reasons.push("not a bimodule map".into());
    }
    Ok(())
}

fn check_composite(d: &CompositeData, reasons: &mut Vec<String>) -> Res<()> {
    let f = field(d.p)?;
    let src = actions(f, &d.source, "source")?;
    let mid = actions(f, &d.middle, "middle")?;
    let first = matrix(f, &d.first, d.middle.dim, d.source.dim, "first")?;
    let second = matrix(f, &d.second, d.source.dim, d.middle.dim, "second")?;
    if !second.mul(&first).is_identity() {
        reasons.push("composite not identity".into());
    }
    if !intertwines(&first, &src, &mid) || !intertwines(&second, &mid, &src) {
        reasons.push("not a module map".into());
    }
    Ok(())
}

fn check_decomposition(d: &DecompositionData, reasons: &mut Vec<String>) -> Res<()> {
    let f = field(d.p)?;
    let m = actions(f, &d.module, "module")?;
    let mut parts = Vec::new();
    for (i, s) in d.summands.iter().enumerate() {
        let acts = actions(f, &s.module, &format!("summand {i}"))?;
        let inj = matrix(f, &s.inj, d.module.dim, s.module.dim, &format!("summand {i} inj"))?;
        let proj = matrix(f, &s.proj, s.module.dim, d.module.dim, &format!("summand {i} proj"))?;
        parts.push((acts, inj, proj));
    }
    let mut sum = Mat::zeros(f, d.module.dim, d.module.dim);
    for (_, inj, proj) in &parts {
        sum = sum.add(&inj.mul(proj));
    }
    if d.module.dim > 0 && !sum.is_identity() {
        reasons.push("injections and projections do not sum to the identity".into());
    }
    for (i, (acts, inj, proj)) in parts.iter().enumerate() {
        if !intertwines(inj, acts, &m) || !intertwines(proj, &m, acts) {
            reasons.push(format!("summand {i}: not a module map"));
        }
        for (j, (_, inj2, _)) in parts.iter().enumerate() {
            let prod = proj.mul(inj2);
            let ok = if i == j { prod.is_identity() } else { prod.is_zero() };
            if !ok {
                reasons.push(format!("summands {i}, {j}: projections not orthogonal"));
            }
        }
    }
    Ok(())
}

pub fn verify_certificate(cert: &Certificate) -> CertCheck {
    let mut reasons = Vec::new();
    let res = match cert {
        Certificate::Divides(d) => check_divides(d, &mut reasons),
        Certificate::Similarity { forward, backward } => check_divides(forward, &mut reasons)
            .and_then(|_| check_divides(backward, &mut reasons)),
        Certificate::Split(d) => check_split(d, &mut reasons),
        Certificate::Iso(d) => check_iso(d, &mut reasons),
        Certificate::Composite(d) => check_composite(d, &mut reasons),
        Certificate::Decomposition(d) => check_decomposition(d, &mut reasons),
    };
    if let Err(e) = res {
        reasons.push(format!("malformed certificate: {e}"));
    }
    CertCheck::from_reasons(reasons)
}
