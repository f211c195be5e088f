//! Independent oracles for the integration and acceptance tests. Hom spaces
//! come from a Kronecker-product nullspace; divisibility from the trace ideal
//! `span{ψ∘φ}` and, where small enough, exhaustive split-map enumeration.
#![allow(dead_code)]

use qfw_core::algebra::Algebra;
use qfw_core::coring::Coring;
use qfw_core::modrep::{Bimodule, LeftModule};
use qfw_core::{Echelon, Mat, PrimeField};

/// A module given only by the matrices any map must intertwine.
#[derive(Clone, Debug)]
pub struct Acts {
    pub f: PrimeField,
    pub dim: usize,
    pub acts: Vec<Mat>,
}

impl Acts {
    pub fn new(f: PrimeField, dim: usize, acts: Vec<Mat>) -> Acts {
        Acts { f, dim, acts }
    }

    pub fn of_module(m: &LeftModule) -> Acts {
        Acts::new(m.field(), m.dim(), m.action().to_vec())
    }

    /// Left actions followed by right actions.
    pub fn of_bimodule(m: &Bimodule) -> Acts {
        let acts = m.left_action().iter().chain(m.right_action()).cloned().collect();
        Acts::new(m.field(), m.dim(), acts)
    }

    pub fn power(&self, k: usize) -> Acts {
        Acts::new(self.f, self.dim * k, self.acts.iter().map(|a| a.repeat_diag(k)).collect())
    }
}

/// Basis of `{X : X·src_i = tgt_i·X}`, maps `src → tgt` of shape `tgt.dim × src.dim`.
pub fn hom_basis(src: &Acts, tgt: &Acts) -> Vec<Mat> {
    assert_eq!(src.acts.len(), tgt.acts.len(), "action lists differ in length");
    let f = src.f;
    let (m, n) = (src.dim, tgt.dim);
    if m == 0 || n == 0 {
        return Vec::new();
    }
    // Row-major vec: vec(A X B) = (A ⊗ Bᵀ) vec(X).
    let id_m = Mat::identity(f, m);
    let id_n = Mat::identity(f, n);
    let blocks: Vec<Mat> = src
        .acts
        .iter()
        .zip(&tgt.acts)
        .map(|(a, b)| b.kron(&id_m).sub(&id_n.kron(&a.transpose())))
        .collect();
    let refs: Vec<&Mat> = blocks.iter().collect();
    let sys = if refs.is_empty() {
        Mat::zeros(f, 1, n * m)
    } else {
        Mat::vstack(f, n * m, &refs)
    };
    sys.nullspace()
        .into_iter()
        .map(|v| Mat::from_vectorized(f, n, m, &v))
        .collect()
}

/// `M | N^k` for some `k` iff `id_M` lies in the span of all `ψ∘φ`.
pub fn divides(m: &Acts, n: &Acts) -> bool {
    if m.dim == 0 {
        return true;
    }
    let phis = hom_basis(m, n);
    let psis = hom_basis(n, m);
    let mut span = Echelon::new(m.f, m.dim * m.dim);
    for psi in &psis {
        for phi in &phis {
            span.insert(&psi.mul(phi).vectorize());
        }
    }
    span.contains(&Mat::identity(m.f, m.dim).vectorize())
}

pub fn similar(m: &Acts, n: &Acts) -> bool {
    divides(m, n) && divides(n, m)
}

/// Whether some `φ: M → N^k` is split by a module map, by enumerating every
/// `φ`. `None` when `Hom(M, N^k)` has more than `budget` elements.
pub fn split_mono_exhaustive(m: &Acts, n: &Acts, k: usize, budget: u64) -> Option<bool> {
    let nk = n.power(k);
    let phis = hom_basis(m, &nk);
    let psis = hom_basis(&nk, m);
    let p = m.f.p() as u64;
    let total = (p as f64).powi(phis.len() as i32);
    if total > budget as f64 {
        return None;
    }
    let id = Mat::identity(m.f, m.dim).vectorize();
    let mut coeffs = vec![0u32; phis.len()];
    loop {
        let mut phi = Mat::zeros(m.f, nk.dim, m.dim);
        for (c, b) in coeffs.iter().zip(&phis) {
            if *c != 0 {
                phi.add_scaled(*c, b);
            }
        }
        // ψ∘φ = id is linear in the coordinates of ψ.
        let cols: Vec<Vec<u32>> = psis.iter().map(|psi| psi.mul(&phi).vectorize()).collect();
        if !cols.is_empty() {
            let a = Mat::from_columns(m.f, m.dim * m.dim, &cols);
            let b = Mat::column_vector(m.f, &id);
            if a.solve_right(&b).expect("shapes agree").is_some() {
                return Some(true);
            }
        } else if m.dim == 0 {
            return Some(true);
        }
        // Next coefficient vector in base p.
        let mut i = 0;
        loop {
            if i == coeffs.len() {
                return Some(false);
            }
            coeffs[i] += 1;
            if coeffs[i] as u64 == p {
                coeffs[i] = 0;
                i += 1;
            } else {
                break;
            }
        }
    }
}

/// Exhaustive divisibility with `k` up to `max_copies`; `None` if some
/// enumeration exceeds the budget before a split map is found.
pub fn divides_exhaustive(m: &Acts, n: &Acts, max_copies: usize, budget: u64) -> Option<bool> {
    for k in 1..=max_copies {
        match split_mono_exhaustive(m, n, k, budget) {
            Some(true) => return Some(true),
            Some(false) => {}
            None => return None,
        }
    }
    Some(false)
}

/// Coordinates of `x` in the span of `basis` (all same shape).
pub fn coords(f: PrimeField, basis: &[Mat], x: &Mat) -> Option<Vec<u32>> {
    let cols: Vec<Vec<u32>> = basis.iter().map(Mat::vectorize).collect();
    let a = Mat::from_columns(f, x.rows() * x.cols(), &cols);
    let sol = a.solve_right(&Mat::column_vector(f, &x.vectorize())).ok()??;
    Some(sol.column(0))
}

/// Matrix of a linear operator on a Hom space, columns = coordinates of the
/// images of the basis.
fn operator(f: PrimeField, basis: &[Mat], image: impl Fn(&Mat) -> Mat) -> Mat {
    let cols: Vec<Vec<u32>> = basis
        .iter()
        .map(|b| coords(f, basis, &image(b)).expect("operator preserves the Hom space"))
        .collect();
    Mat::from_columns(f, basis.len(), &cols)
}

/// Left regular `A` as action set over the basis of `A`.
pub fn regular_left(a: &Algebra) -> Acts {
    Acts::new(a.field(), a.dim(), a.left_mults().to_vec())
}

/// Right regular `A`, `x ↦ x·e_j`.
pub fn regular_right(a: &Algebra) -> Acts {
    Acts::new(a.field(), a.dim(), a.right_mults().to_vec())
}

/// `Hom_R(_R M, R)` as an `(S, R)`-bimodule: `(s·f)(m) = f(ms)`, `(f·r)(m) = f(m)r`.
pub fn left_dual(m: &Bimodule) -> Acts {
    let (r, s) = (m.left_algebra(), m.right_algebra());
    let f = m.field();
    let basis = hom_basis(&Acts::new(f, m.dim(), m.left_action().to_vec()), &regular_left(r));
    let mut acts: Vec<Mat> = m
        .right_action()
        .iter()
        .map(|rs| operator(f, &basis, |b| b.mul(rs)))
        .collect();
    acts.extend(r.right_mults().iter().map(|rr| operator(f, &basis, |b| rr.mul(b))));
    debug_assert_eq!(acts.len(), s.dim() + r.dim());
    Acts::new(f, basis.len(), acts)
}

/// `Hom_S(M_S, S)` as an `(S, R)`-bimodule: `(s·g)(m) = s·g(m)`, `(g·r)(m) = g(rm)`.
pub fn right_dual(m: &Bimodule) -> Acts {
    let s = m.right_algebra();
    let f = m.field();
    let basis = hom_basis(&Acts::new(f, m.dim(), m.right_action().to_vec()), &regular_right(s));
    let mut acts: Vec<Mat> = s
        .left_mults()
        .iter()
        .map(|ls| operator(f, &basis, |b| ls.mul(b)))
        .collect();
    acts.extend(m.left_action().iter().map(|lr| operator(f, &basis, |b| b.mul(lr))));
    Acts::new(f, basis.len(), acts)
}

pub fn left_projective(m: &Bimodule) -> bool {
    divides(
        &Acts::new(m.field(), m.dim(), m.left_action().to_vec()),
        &regular_left(m.left_algebra()),
    )
}

pub fn right_projective(m: &Bimodule) -> bool {
    divides(
        &Acts::new(m.field(), m.dim(), m.right_action().to_vec()),
        &regular_right(m.right_algebra()),
    )
}

/// Quasi-Frobenius bimodule, decided entirely by the oracle.
pub fn qf_bimodule(m: &Bimodule) -> bool {
    left_projective(m) && right_projective(m) && similar(&left_dual(m), &right_dual(m))
}

/// `*C` rebuilt from the definition. Returns `C` and `*C` as action sets of
/// `(A, *C)`-bimodules, plus the structure constants of `*C`.
pub struct LeftConvolution {
    pub c: Acts,
    pub star: Acts,
    pub dim: usize,
    pub mul: Vec<u32>,
    pub unit: Vec<u32>,
}

pub fn left_convolution(c: &Coring) -> LeftConvolution {
    let a = c.base();
    let f = a.field();
    let car = c.carrier();
    let dc = c.dim();
    let basis = hom_basis(&Acts::new(f, dc, car.left_action().to_vec()), &regular_left(a));
    let h = basis.len();
    let dl = c.delta_lift();
    // Φ_f(x) = x₍₁₎·f(x₍₂₎), a right action of f on C.
    let phi: Vec<Mat> = basis
        .iter()
        .map(|fu| {
            let mut out = Mat::zeros(f, dc, dc);
            for x in 0..dc {
                let d = dl.column(x);
                let mut col = vec![0u32; dc];
                for (ij, &v) in d.iter().enumerate() {
                    if v == 0 {
                        continue;
                    }
                    let (i, j) = (ij / dc, ij % dc);
                    let act = car.right_act(&fu.column(j));
                    for (t, r) in col.iter_mut().enumerate() {
                        *r = f.add(*r, f.mul(v, act.get(t, i)));
                    }
                }
                for (t, v) in col.into_iter().enumerate() {
                    out.set(t, x, v);
                }
            }
            out
        })
        .collect();
    let mut mul = vec![0u32; h * h * h];
    for u in 0..h {
        for v in 0..h {
            // (f_u * f_v)(x) = f_v(Φ_{f_u}(x))
            let w = coords(f, &basis, &basis[v].mul(&phi[u])).expect("product stays in *C");
            mul[(u * h + v) * h..(u * h + v + 1) * h].copy_from_slice(&w);
        }
    }
    let unit = coords(f, &basis, c.eps()).expect("ε lies in *C");
    let right_mult = |v: usize| {
        let mut m = Mat::zeros(f, h, h);
        for u in 0..h {
            for k in 0..h {
                m.set(k, u, mul[(u * h + v) * h + k]);
            }
        }
        m
    };
    let mut c_acts: Vec<Mat> = car.left_action().to_vec();
    c_acts.extend(phi.iter().cloned());
    let mut star_acts: Vec<Mat> = car
        .right_action()
        .iter()
        .map(|ra| operator(f, &basis, |b| b.mul(ra)))
        .collect();
    star_acts.extend((0..h).map(right_mult));
    LeftConvolution {
        c: Acts::new(f, dc, c_acts),
        star: Acts::new(f, h, star_acts),
        dim: h,
        mul,
        unit,
    }
}

/// `_A C` projective and `C ~ *C` as `(A, *C)`-bimodules.
pub fn qf_coring(c: &Coring) -> bool {
    let a = c.base();
    let car = c.carrier();
    let proj = divides(
        &Acts::new(a.field(), c.dim(), car.left_action().to_vec()),
        &regular_left(a),
    );
    if !proj {
        return false;
    }
    let lc = left_convolution(c);
    similar(&lc.c, &lc.star)
}

/// Associativity and unit of flat structure constants, checked on all triples.
pub fn associative(f: PrimeField, n: usize, mul: &[u32], unit: &[u32]) -> bool {
    let prod = |x: &[u32], y: &[u32]| -> Vec<u32> {
        let mut out = vec![0u32; n];
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            for j in 0..n {
                if y[j] == 0 {
                    continue;
                }
                let c = f.mul(x[i], y[j]);
                for k in 0..n {
                    out[k] = f.add(out[k], f.mul(c, mul[(i * n + j) * n + k]));
                }
            }
        }
        out
    };
    let e = |i: usize| (0..n).map(|k| u32::from(k == i)).collect::<Vec<u32>>();
    for i in 0..n {
        if prod(unit, &e(i)) != e(i) || prod(&e(i), unit) != e(i) {
            return false;
        }
        for j in 0..n {
            let ij = prod(&e(i), &e(j));
            for k in 0..n {
                if prod(&ij, &e(k)) != prod(&e(i), &prod(&e(j), &e(k))) {
                    return false;
                }
            }
        }
    }
    true
}

pub fn f(p: u64) -> PrimeField {
    PrimeField::new(p).expect("valid prime")
}
