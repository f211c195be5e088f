//! Krull–Schmidt engine: endomorphism rings, radicals, idempotents,
//! decompositions and isomorphism tests.

use std::sync::Arc;

use rand::Rng;

use crate::algebra::{quotient_algebra, same_algebra, Algebra};
use crate::error::{Error, Result};
use crate::exactla::{Echelon, Mat, PrimeField};
use crate::modrep::{hom_space, HomSpace, LeftModule};
use crate::par;
use crate::poly::{factor, Poly};

/// Random generator used by every randomized step.
pub type WorkRng = rand_chacha::ChaCha8Rng;

pub const DEFAULT_ISO_TRIALS: usize = 20;
const IDEMPOTENT_TRIALS: usize = 400;

/// `End(M)` as an algebra under composition, with its realizing Hom space.
#[derive(Clone, Debug)]
pub struct EndRing {
    pub algebra: Arc<Algebra>,
    pub hom: HomSpace,
}

impl EndRing {
    pub fn matrix(&self, x: &[u32]) -> Mat {
        self.hom.element(x)
    }
}

pub fn end_ring(m: &LeftModule) -> Result<EndRing> {
    if m.dim() == 0 {
        return Err(Error::Precondition("endomorphism ring of the zero module".into()));
    }
    let f = m.field();
    let hom = hom_space(m, m)?;
    let h = hom.dim();
    let basis = hom.basis();
    let rows: Vec<Vec<u32>> = par::map_range(h * h, h * h * m.dim().pow(3), |ij| {
        let (i, j) = (ij / h, ij % h);
        hom.coordinates(&basis[i].mul(&basis[j]))
            .expect("endomorphisms compose")
    });
    let mul: Vec<u32> = rows.into_iter().flatten().collect();
    let unit = hom
        .coordinates(&Mat::identity(f, m.dim()))
        .expect("identity is an endomorphism");
    let algebra = Algebra::new(f, h, mul, unit)
        .map_err(|e| Error::Inconsistent(format!("endomorphism ring invalid: {e}")))?;
    Ok(EndRing { algebra, hom })
}

fn mat_mul_mod(a: &[u64], b: &[u64], n: usize, m: u64) -> Vec<u64> {
    let mut out = vec![0u64; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] = (out[i * n + j] + x * b[k * n + j]) % m;
            }
        }
    }
    out
}

/// `Tr(X^e) mod m` for an integer matrix with entries below `m`.
fn trace_power_mod(x: &[u64], n: usize, mut e: u64, m: u64) -> u64 {
    let mut base = x.to_vec();
    let mut acc: Vec<u64> = (0..n * n).map(|k| u64::from(k % (n + 1) == 0) % m).collect();
    while e > 0 {
        if e & 1 == 1 {
            acc = mat_mul_mod(&acc, &base, n, m);
        }
        e >>= 1;
        if e > 0 {
            base = mat_mul_mod(&base, &base, n, m);
        }
    }
    (0..n).fold(0, |s, i| (s + acc[i * n + i]) % m)
}

/// Jacobson radical by the generalized trace-form descent: `I_{-1} = E` and
/// `I_i = {x ∈ I_{i-1} : g_i(xy) = 0 for all y}` with
/// `g_i(z) = Tr(L̃_z^{p^i}) / p^i mod p` computed on integer lifts; the radical
/// is `I_l` for `l = ⌊log_p dim E⌋`. Valid in every characteristic.
pub fn radical(e: &Algebra) -> Result<Vec<Vec<u32>>> {
    let f = e.field();
    let n = e.dim();
    let p = f.p() as u64;
    let mut l = 0u32;
    while p.checked_pow(l + 1).is_some_and(|q| q <= n as u64) {
        l += 1;
    }
    let traces: Vec<u32> = e.left_mults().iter().map(|m| m.trace()).collect();
    let mut ideal: Vec<Vec<u32>> = (0..n).map(|i| e.basis_vector(i)).collect();
    for i in 0..=l {
        if ideal.is_empty() {
            break;
        }
        let q = p.pow(i);
        let modulus = q * p;
        let g = |z: &[u32]| -> Result<u32> {
            if i == 0 {
                return Ok(z
                    .iter()
                    .zip(&traces)
                    .fold(0u32, |acc, (&a, &t)| f.mul_add(acc, a, t)));
            }
            let lz = e.left_mult_elem(z);
            let x: Vec<u64> = lz.data().iter().map(|&v| v as u64).collect();
            let t = trace_power_mod(&x, n, q, modulus);
            if !t.is_multiple_of(q) {
                return Err(Error::Inconsistent(format!(
                    "trace of a {q}-th power not divisible by {q} in radical descent"
                )));
            }
            Ok(((t / q) % p) as u32)
        };
        let k = ideal.len();
        let rows: Vec<Result<Vec<u32>>> = par::map_range(k, k * n * n * n, |a| {
            (0..n)
                .map(|j| g(&e.mul_elems(&ideal[a], &e.basis_vector(j))))
                .collect()
        });
        let gm_rows: Vec<Vec<u32>> = rows.into_iter().collect::<Result<_>>()?;
        // left kernel: c with Σ_a c_a G[a][j] = 0
        let gm = Mat::from_columns(f, n, &gm_rows);
        let combos = gm.nullspace();
        let basis = Mat::from_columns(f, n, &ideal);
        ideal = combos.iter().map(|c| basis.mul_vec(c)).collect();
    }
    verify_nilpotent_ideal(e, &ideal)?;
    Ok(ideal)
}

fn verify_nilpotent_ideal(e: &Algebra, ideal: &[Vec<u32>]) -> Result<()> {
    let f = e.field();
    let n = e.dim();
    let mut span = Echelon::new(f, n);
    for v in ideal {
        span.insert(v);
    }
    for v in ideal {
        for j in 0..n {
            let b = e.basis_vector(j);
            if !span.contains(&e.mul_elems(v, &b)) || !span.contains(&e.mul_elems(&b, v)) {
                return Err(Error::Inconsistent("radical is not a two-sided ideal".into()));
            }
        }
    }
    let mut power: Vec<Vec<u32>> = ideal.to_vec();
    for _ in 0..=n {
        if power.is_empty() {
            return Ok(());
        }
        let mut next = Echelon::new(f, n);
        for x in &power {
            for y in ideal {
                next.insert(&e.mul_elems(x, y));
            }
        }
        power = next.rows().to_vec();
    }
    Err(Error::Inconsistent("radical is not nilpotent".into()))
}

/// Minimal polynomial of an algebra element.
pub fn minimal_polynomial(a: &Algebra, x: &[u32]) -> Poly {
    let f = a.field();
    let n = a.dim();
    let mut span = Echelon::new(f, n);
    let mut powers: Vec<Vec<u32>> = vec![a.unit().to_vec()];
    span.insert(a.unit());
    loop {
        let next = a.mul_elems(powers.last().expect("nonempty"), x);
        if span.insert(&next) {
            powers.push(next);
            continue;
        }
        let basis = Mat::from_columns(f, n, &powers);
        let c = basis
            .solve_right(&Mat::column_vector(f, &next))
            .expect("shapes agree")
            .expect("dependent power lies in the span");
        let mut coeffs: Vec<u32> = (0..powers.len()).map(|i| f.neg(c.get(i, 0))).collect();
        coeffs.push(1);
        return Poly::new(f, coeffs);
    }
}

pub fn eval_poly(a: &Algebra, poly: &Poly, x: &[u32]) -> Vec<u32> {
    let mut acc = a.zero_vector();
    for &c in poly.coeffs().iter().rev() {
        acc = a.mul_elems(&acc, x);
        let cu = a.scale_elem(c, a.unit());
        acc = a.add_elems(&acc, &cu);
    }
    acc
}

/// A nontrivial idempotent from an element whose minimal polynomial has at
/// least two distinct irreducible factors.
fn crt_idempotent<R: Rng + ?Sized>(a: &Algebra, x: &[u32], rng: &mut R) -> Option<Vec<u32>> {
    let m = minimal_polynomial(a, x);
    let fac = factor(&m, rng);
    if fac.len() < 2 {
        return None;
    }
    let (g, k) = &fac[0];
    let first = (0..*k).fold(Poly::one(a.field()), |acc, _| acc.mul(g));
    let rest = m.div_exact(&first);
    let (d, _u, v) = first.ext_gcd(&rest);
    debug_assert!(d.is_one());
    // v·rest ≡ 1 mod first and ≡ 0 mod rest
    let e = v.mul(&rest).rem(&m);
    Some(eval_poly(a, &e, x))
}

fn is_idempotent(a: &Algebra, e: &[u32]) -> bool {
    a.mul_elems(e, e) == e
}

fn semisimple_idempotent<R: Rng + ?Sized>(b: &Algebra, rng: &mut R) -> Result<Option<Vec<u32>>> {
    let f = b.field();
    let n = b.dim();
    if n == 1 {
        return Ok(None);
    }
    if b.is_commutative() {
        // Berlekamp subalgebra {x : x^p = x}
        let p = f.p() as u64;
        let cols: Vec<Vec<u32>> = (0..n)
            .map(|j| {
                let e = b.basis_vector(j);
                b.sub_elems(&b.pow_elem(&e, p), &e)
            })
            .collect();
        let fixed = Mat::from_columns(f, n, &cols).nullspace();
        if fixed.len() <= 1 {
            return Ok(None);
        }
        let y = fixed
            .iter()
            .find(|v| !b.is_scalar(v))
            .expect("two-dimensional fixed space has a non-scalar");
        let e = crt_idempotent(b, y, rng)
            .ok_or_else(|| Error::Inconsistent("split element has a single eigenvalue".into()))?;
        return Ok(Some(e));
    }
    for j in 0..n {
        if let Some(e) = crt_idempotent(b, &b.basis_vector(j), rng) {
            return Ok(Some(e));
        }
    }
    for _ in 0..IDEMPOTENT_TRIALS {
        let x: Vec<u32> = (0..n).map(|_| rng.gen_range(0..f.p())).collect();
        if let Some(e) = crt_idempotent(b, &x, rng) {
            return Ok(Some(e));
        }
    }
    Err(Error::Inconsistent(
        "no idempotent found in a noncommutative semisimple algebra".into(),
    ))
}

/// A nontrivial idempotent of `E`, or `None` when `E` is local.
pub fn find_idempotent<R: Rng + ?Sized>(e: &Algebra, rng: &mut R) -> Result<Option<Vec<u32>>> {
    let j = radical(e)?;
    if j.len() + 1 == e.dim() {
        return Ok(None);
    }
    let q = quotient_algebra(e, &j)?;
    let Some(eb) = semisimple_idempotent(&q.algebra, rng)? else {
        return Ok(None);
    };
    let mut x = q.lift.mul_vec(&eb);
    for _ in 0..64 {
        if is_idempotent(e, &x) {
            break;
        }
        let f = e.field();
        let x2 = e.mul_elems(&x, &x);
        let x3 = e.mul_elems(&x2, &x);
        x = e.sub_elems(&e.scale_elem(3 % f.p(), &x2), &e.scale_elem(2, &x3));
    }
    if !is_idempotent(e, &x) || x.iter().all(|&c| c == 0) || x == e.unit() {
        return Err(Error::Inconsistent("idempotent lifting failed".into()));
    }
    Ok(Some(x))
}

/// One copy of a summand: `inj: S → M`, `proj: M → S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SummandCopy {
    pub inj: Mat,
    pub proj: Mat,
}

#[derive(Clone, Debug)]
pub struct SummandClass {
    pub representative: LeftModule,
    pub copies: Vec<SummandCopy>,
}

impl SummandClass {
    pub fn multiplicity(&self) -> usize {
        self.copies.len()
    }
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub module: LeftModule,
    pub classes: Vec<SummandClass>,
}

impl Decomposition {
    /// Sorted `(dimension, multiplicity)` pairs.
    pub fn signature(&self) -> Vec<(usize, usize)> {
        let mut s: Vec<(usize, usize)> = self
            .classes
            .iter()
            .map(|c| (c.representative.dim(), c.multiplicity()))
            .collect();
        s.sort();
        s
    }

    pub fn summand_count(&self) -> usize {
        self.classes.iter().map(|c| c.copies.len()).sum()
    }

    /// Exact check of the idempotent decomposition identities and linearity.
    pub fn verify(&self) -> bool {
        let m = &self.module;
        let f = m.field();
        let copies: Vec<(&LeftModule, &SummandCopy)> = self
            .classes
            .iter()
            .flat_map(|c| c.copies.iter().map(move |x| (&c.representative, x)))
            .collect();
        let mut sum = Mat::zeros(f, m.dim(), m.dim());
        for (_, c) in &copies {
            sum = sum.add(&c.inj.mul(&c.proj));
        }
        if !sum.is_identity() && m.dim() > 0 {
            return false;
        }
        for (i, (si, ci)) in copies.iter().enumerate() {
            if !si.is_hom_to(m, &ci.inj) || !m.is_hom_to(si, &ci.proj) {
                return false;
            }
            for (j, (sj, cj)) in copies.iter().enumerate() {
                let prod = ci.proj.mul(&cj.inj);
                let ok = if i == j {
                    prod.is_identity()
                } else {
                    prod.is_zero() && prod.rows() == si.dim() && prod.cols() == sj.dim()
                };
                if !ok {
                    return false;
                }
            }
        }
        true
    }
}

struct Leaf {
    module: LeftModule,
    inj: Mat,
    proj: Mat,
}

fn split_leaves<R: Rng + ?Sized>(m: &LeftModule, rng: &mut R) -> Result<Vec<Leaf>> {
    let f = m.field();
    let d = m.dim();
    if d == 0 {
        return Ok(vec![]);
    }
    let end = end_ring(m)?;
    let Some(e) = find_idempotent(&end.algebra, rng)? else {
        return Ok(vec![Leaf {
            module: m.clone(),
            inj: Mat::identity(f, d),
            proj: Mat::identity(f, d),
        }]);
    };
    let fe = end.matrix(&e);
    let ge = Mat::identity(f, d).sub(&fe);
    let mut leaves = Vec::new();
    for idem in [fe, ge] {
        let inj = idem.column_basis();
        let proj = inj
            .left_inverse()
            .ok_or_else(|| Error::Inconsistent("column basis lacks a left inverse".into()))?
            .mul(&idem);
        let sub = m.summand(&inj, &proj);
        for leaf in split_leaves(&sub, rng)? {
            leaves.push(Leaf {
                module: leaf.module,
                inj: inj.mul(&leaf.inj),
                proj: leaf.proj.mul(&proj),
            });
        }
    }
    Ok(leaves)
}

fn encoding(m: &LeftModule) -> Vec<u32> {
    m.action().iter().flat_map(|a| a.data().iter().copied()).collect()
}

/// Isomorphism between modules with local endomorphism rings: some basis
/// element of the Hom space is invertible iff they are isomorphic.
pub fn indecomposable_iso(m: &LeftModule, n: &LeftModule) -> Result<Option<Mat>> {
    if m.dim() != n.dim() {
        return Ok(None);
    }
    let h = hom_space(m, n)?;
    Ok(h.basis().iter().find(|b| b.is_invertible()).cloned())
}

pub fn decompose<R: Rng + ?Sized>(m: &LeftModule, rng: &mut R) -> Result<Decomposition> {
    let mut leaves = split_leaves(m, rng)?;
    leaves.sort_by_cached_key(|l| (l.module.dim(), encoding(&l.module)));
    let mut classes: Vec<SummandClass> = Vec::new();
    'leaf: for leaf in leaves {
        for class in classes.iter_mut() {
            if let Some(theta) = indecomposable_iso(&class.representative, &leaf.module)? {
                let theta_inv = theta.invert()?.expect("invertible");
                class.copies.push(SummandCopy {
                    inj: leaf.inj.mul(&theta),
                    proj: theta_inv.mul(&leaf.proj),
                });
                continue 'leaf;
            }
        }
        classes.push(SummandClass {
            representative: leaf.module,
            copies: vec![SummandCopy {
                inj: leaf.inj,
                proj: leaf.proj,
            }],
        });
    }
    classes.sort_by_cached_key(|c| {
        (
            c.representative.dim(),
            c.multiplicity(),
            encoding(&c.representative),
        )
    });
    let dec = Decomposition {
        module: m.clone(),
        classes,
    };
    if !dec.verify() {
        return Err(Error::Inconsistent("decomposition identities fail".into()));
    }
    Ok(dec)
}

/// For each class of `a`, the matching class of `b` and an isomorphism
/// from the representative of `a` to that of `b`.
pub fn match_classes(a: &Decomposition, b: &Decomposition) -> Result<Vec<Option<(usize, Mat)>>> {
    a.classes
        .iter()
        .map(|ca| {
            for (j, cb) in b.classes.iter().enumerate() {
                if let Some(t) = indecomposable_iso(&ca.representative, &cb.representative)? {
                    return Ok(Some((j, t)));
                }
            }
            Ok(None)
        })
        .collect()
}

fn random_combination<R: Rng + ?Sized>(h: &HomSpace, f: PrimeField, rng: &mut R) -> Mat {
    let c: Vec<u32> = (0..h.dim()).map(|_| rng.gen_range(0..f.p())).collect();
    h.element(&c)
}

/// An isomorphism `M → N` or `None`.
pub fn iso<R: Rng + ?Sized>(m: &LeftModule, n: &LeftModule, rng: &mut R) -> Result<Option<Mat>> {
    iso_with_trials(m, n, rng, DEFAULT_ISO_TRIALS)
}

pub fn iso_with_trials<R: Rng + ?Sized>(
    m: &LeftModule,
    n: &LeftModule,
    rng: &mut R,
    trials: usize,
) -> Result<Option<Mat>> {
    if !same_algebra(m.algebra(), n.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    let f = m.field();
    if m.dim() != n.dim() {
        return Ok(None);
    }
    if m.dim() == 0 {
        return Ok(Some(Mat::zeros(f, 0, 0)));
    }
    let h = hom_space(m, n)?;
    if h.dim() == 0 {
        return Ok(None);
    }
    for b in h.basis() {
        if b.is_invertible() {
            return Ok(Some(b.clone()));
        }
    }
    for _ in 0..trials {
        let x = random_combination(&h, f, rng);
        if x.is_invertible() {
            return Ok(Some(x));
        }
    }
    let dm = decompose(m, rng)?;
    let dn = decompose(n, rng)?;
    if dm.classes.len() != dn.classes.len() {
        return Ok(None);
    }
    let matches = match_classes(&dm, &dn)?;
    let mut map = Mat::zeros(f, n.dim(), m.dim());
    let mut used = vec![false; dn.classes.len()];
    for (ca, mt) in dm.classes.iter().zip(matches) {
        let Some((j, theta)) = mt else {
            return Ok(None);
        };
        let cb = &dn.classes[j];
        if used[j] || cb.multiplicity() != ca.multiplicity() {
            return Ok(None);
        }
        used[j] = true;
        for (xa, xb) in ca.copies.iter().zip(&cb.copies) {
            map = map.add(&xb.inj.mul(&theta).mul(&xa.proj));
        }
    }
    if m.is_hom_to(n, &map) && map.is_invertible() {
        Ok(Some(map))
    } else {
        Err(Error::Inconsistent(
            "matched decompositions failed to assemble an isomorphism".into(),
        ))
    }
}
