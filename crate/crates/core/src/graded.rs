//! Finite-group-graded algebras and graded modules: restriction to the
//! identity component, induction, coinduction, suspension and the
//! quasi-Frobenius criterion for the restriction functor.

use std::sync::Arc;

use rand::Rng;

use crate::algebra::{field_algebra, make_hom, Algebra, AlgebraHom, Group};
use crate::error::{Error, Result};
use crate::exactla::Mat;
use crate::modrep::{bimodule_from_actions, hom_space, is_fg_projective, tensor_over, Bimodule, LeftModule};
use crate::report::{Check, Report, Verdict};
use crate::simdiv::{similar, similarity_certificate, split_certificate};

pub const ANCHOR_COMPONENT: &str = "restriction functor: each R_x finitely generated projective over R_e";
pub const ANCHOR_SIMILAR: &str = "restriction functor: R ~ Coind(R_e) as (R, R_e)-bimodules";

/// `R = ⊕ R_x` with basis ordered by component; `products[x*|G| + y]` is
/// `R_x ⊗ R_y → R_{xy}` of shape `dim R_{xy} × (dim R_x · dim R_y)`.
#[derive(Clone, Debug)]
pub struct GradedRing {
    group: Group,
    dims: Vec<usize>,
    offsets: Vec<usize>,
    products: Vec<Mat>,
    total: Arc<Algebra>,
    identity: Arc<Algebra>,
    inclusion: AlgebraHom,
}

pub fn make_graded_ring(group: &Group, dims: Vec<usize>, products: Vec<Mat>) -> Result<GradedRing> {
    let g = group.order();
    if dims.len() != g {
        return Err(Error::Grading(format!("{} component dimensions for a group of order {g}", dims.len())));
    }
    if products.len() != g * g {
        return Err(Error::Grading(format!("{} product maps, expected {}", products.len(), g * g)));
    }
    let mut offsets = vec![0usize; g + 1];
    for x in 0..g {
        offsets[x + 1] = offsets[x] + dims[x];
    }
    let n = offsets[g];
    let field = match products.first() {
        Some(m) => m.field(),
        None => return Err(Error::Grading("no product maps".into())),
    };
    let mut mul = vec![0u32; n * n * n];
    for x in 0..g {
        for y in 0..g {
            let xy = group.mul(x, y);
            let p = &products[x * g + y];
            if p.rows() != dims[xy] || p.cols() != dims[x] * dims[y] {
                return Err(Error::Grading(format!(
                    "product map ({x},{y}) is {}x{}, expected {}x{}",
                    p.rows(),
                    p.cols(),
                    dims[xy],
                    dims[x] * dims[y]
                )));
            }
            for i in 0..dims[x] {
                for j in 0..dims[y] {
                    let (gi, gj) = (offsets[x] + i, offsets[y] + j);
                    for k in 0..dims[xy] {
                        mul[(gi * n + gj) * n + offsets[xy] + k] = p.get(k, i * dims[y] + j);
                    }
                }
            }
        }
    }
    let e = group.identity();
    // unit: Σ u_k e_k over R_e with left and right multiplication the identity
    let de = dims[e];
    let mut system_cols = Vec::with_capacity(de);
    for k in 0..de {
        let b = offsets[e] + k;
        let mut col = Vec::with_capacity(2 * n * n);
        for i in 0..n {
            for j in 0..n {
                col.push(mul[(b * n + j) * n + i]);
            }
        }
        for i in 0..n {
            for j in 0..n {
                col.push(mul[(j * n + b) * n + i]);
            }
        }
        system_cols.push(col);
    }
    let system = Mat::from_columns(field, 2 * n * n, &system_cols);
    let id = Mat::identity(field, n).vectorize();
    let rhs: Vec<u32> = id.iter().chain(id.iter()).copied().collect();
    let sol = if de == 0 {
        None
    } else {
        system.solve_right(&Mat::column_vector(field, &rhs))?
    };
    let Some(u) = sol else {
        return Err(Error::Grading("no unit in the identity component".into()));
    };
    let mut unit = vec![0u32; n];
    for k in 0..de {
        unit[offsets[e] + k] = u.get(k, 0);
    }
    let total = Algebra::new(field, n, mul, unit.clone())?;
    let pe = &products[e * g + e];
    let mut emul = vec![0u32; de * de * de];
    for i in 0..de {
        for j in 0..de {
            for k in 0..de {
                emul[(i * de + j) * de + k] = pe.get(k, i * de + j);
            }
        }
    }
    let identity = Algebra::new(field, de, emul, unit[offsets[e]..offsets[e] + de].to_vec())?;
    let mut inc = Mat::zeros(field, n, de);
    for k in 0..de {
        inc.set(offsets[e] + k, k, 1);
    }
    let inclusion = make_hom(&identity, &total, inc)?;
    Ok(GradedRing {
        group: group.clone(),
        dims,
        offsets,
        products,
        total,
        identity,
        inclusion,
    })
}

/// Grading of an algebra whose basis vectors are homogeneous, `labels[i]`
/// the degree of basis vector `i`. The result reorders the basis by degree.
pub fn grade_by_basis(a: &Algebra, group: &Group, labels: &[usize]) -> Result<GradedRing> {
    let g = group.order();
    let n = a.dim();
    if labels.len() != n || labels.iter().any(|&l| l >= g) {
        return Err(Error::Grading("one degree in the group per basis vector required".into()));
    }
    let comps: Vec<Vec<usize>> = (0..g).map(|x| (0..n).filter(|&i| labels[i] == x).collect()).collect();
    let f = a.field();
    let mut products = Vec::with_capacity(g * g);
    for x in 0..g {
        for y in 0..g {
            let xy = group.mul(x, y);
            let mut p = Mat::zeros(f, comps[xy].len(), comps[x].len() * comps[y].len());
            for (i, &bi) in comps[x].iter().enumerate() {
                for (j, &bj) in comps[y].iter().enumerate() {
                    for &(k, v) in a.product(bi, bj) {
                        match comps[xy].iter().position(|&c| c == k) {
                            Some(pos) => p.set(pos, i * comps[y].len() + j, v),
                            None => {
                                return Err(Error::Grading(format!(
                                    "product of basis vectors {bi} and {bj} leaves degree {xy}"
                                )))
                            }
                        }
                    }
                }
            }
            products.push(p);
        }
    }
    let dims = comps.iter().map(Vec::len).collect();
    make_graded_ring(group, dims, products)
}

impl GradedRing {
    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn products(&self) -> &[Mat] {
        &self.products
    }

    pub fn total(&self) -> &Arc<Algebra> {
        &self.total
    }

    /// `R_e`.
    pub fn identity_component(&self) -> &Arc<Algebra> {
        &self.identity
    }

    pub fn inclusion(&self) -> &AlgebraHom {
        &self.inclusion
    }

    /// Total basis indices of `R_x`.
    pub fn component(&self, x: usize) -> Vec<usize> {
        (self.offsets[x]..self.offsets[x + 1]).collect()
    }

    fn degree_of(&self, i: usize) -> usize {
        (0..self.group.order())
            .find(|&x| i < self.offsets[x + 1])
            .expect("index inside the algebra")
    }

    /// `R_x` as a left `R_e`-module.
    pub fn component_module(&self, x: usize) -> LeftModule {
        let e = self.group.identity();
        let idx = self.component(x);
        let action = self
            .component(e)
            .iter()
            .map(|&k| self.total.left_mult(k).select_rows(&idx).select_cols(&idx))
            .collect();
        LeftModule::new_unchecked(&self.identity, idx.len(), action)
    }

    /// `R` as an `(R, R_e)`-bimodule.
    pub fn as_bimodule(&self) -> Result<Bimodule> {
        let right = self
            .component(self.group.identity())
            .iter()
            .map(|&k| self.total.right_mult(k).clone())
            .collect();
        bimodule_from_actions(&self.total, &self.identity, self.total.left_mults().to_vec(), right)
    }
}

/// A graded left module: `blocks[x]` lists the total basis indices of `M_x`.
#[derive(Clone, Debug)]
pub struct GradedModule {
    pub ring: GradedRing,
    pub total: LeftModule,
    pub blocks: Vec<Vec<usize>>,
}

pub fn make_graded_module(ring: &GradedRing, total: LeftModule, blocks: Vec<Vec<usize>>) -> Result<GradedModule> {
    let g = ring.group.order();
    if blocks.len() != g {
        return Err(Error::Grading("one block per group element required".into()));
    }
    let mut seen = vec![false; total.dim()];
    for b in &blocks {
        for &i in b {
            if i >= total.dim() || seen[i] {
                return Err(Error::Grading("blocks must partition the basis".into()));
            }
            seen[i] = true;
        }
    }
    if seen.iter().any(|&s| !s) {
        return Err(Error::Grading("blocks must partition the basis".into()));
    }
    let mut degree = vec![0usize; total.dim()];
    for (x, b) in blocks.iter().enumerate() {
        for &i in b {
            degree[i] = x;
        }
    }
    for (t, act) in total.action().iter().enumerate() {
        let x = ring.degree_of(t);
        for col in 0..total.dim() {
            let target = ring.group.mul(x, degree[col]);
            for row in 0..total.dim() {
                if act.get(row, col) != 0 && degree[row] != target {
                    return Err(Error::Grading(format!(
                        "R_{x} maps degree {} outside degree {target}",
                        degree[col]
                    )));
                }
            }
        }
    }
    Ok(GradedModule {
        ring: ring.clone(),
        total,
        blocks,
    })
}

pub fn regular_graded(ring: &GradedRing) -> GradedModule {
    let blocks = (0..ring.group.order()).map(|x| ring.component(x)).collect();
    GradedModule {
        ring: ring.clone(),
        total: crate::modrep::regular_left(&ring.total),
        blocks,
    }
}

impl GradedModule {
    pub fn component_dims(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }
}

/// `M ↦ M_e` as an `R_e`-module.
pub fn restrict_e(m: &GradedModule) -> Result<LeftModule> {
    let r = &m.ring;
    let idx = &m.blocks[r.group.identity()];
    let action = r
        .component(r.group.identity())
        .iter()
        .map(|&k| m.total.action()[k].select_rows(idx).select_cols(idx))
        .collect();
    LeftModule::new(&r.identity, idx.len(), action)
}

/// `x`-suspension: `M(x)_y = M_{yx}`, same total module.
pub fn suspend(m: &GradedModule, x: usize) -> GradedModule {
    let g = &m.ring.group;
    let blocks = (0..g.order()).map(|y| m.blocks[g.mul(y, x)].clone()).collect();
    GradedModule {
        ring: m.ring.clone(),
        total: m.total.clone(),
        blocks,
    }
}

/// `Ind(N)_y = R_y ⊗_{R_e} N`, with the canonical `N → Ind(N)_e`, `n ↦ 1 ⊗ n`.
#[derive(Clone, Debug)]
pub struct Induced {
    pub module: GradedModule,
    pub unit: Mat,
}

pub fn induce(ring: &GradedRing, n: &LeftModule) -> Result<Induced> {
    if !crate::algebra::same_algebra(n.algebra(), &ring.identity) {
        return Err(Error::AlgebraMismatch);
    }
    let f = ring.total.field();
    let k = field_algebra(f);
    let nb = bimodule_from_actions(&ring.identity, &k, n.action().to_vec(), vec![Mat::identity(f, n.dim())])?;
    let tp = tensor_over(&ring.identity, &ring.as_bimodule()?, &nb)?;
    let q = tp.quotient.dim();
    let mut blocks = vec![Vec::new(); ring.group.order()];
    for i in 0..q {
        let (a, _) = tp.quotient.representative(i);
        blocks[ring.degree_of(a)].push(i);
    }
    let total = LeftModule::new(&ring.total, q, tp.bimodule.left_action().to_vec())?;
    let module = make_graded_module(ring, total, blocks)?;
    let e_idx = &module.blocks[ring.group.identity()];
    let cols: Vec<Vec<u32>> = (0..n.dim())
        .map(|j| {
            let ej: Vec<u32> = (0..n.dim()).map(|t| u32::from(t == j)).collect();
            let v = tp.quotient.class_of(ring.total.unit(), &ej);
            e_idx.iter().map(|&i| v[i]).collect()
        })
        .collect();
    let unit = Mat::from_columns(f, e_idx.len(), &cols);
    Ok(Induced { module, unit })
}

/// `Coind(N)_y ≅ Hom_{R_e}(R_{y⁻¹}, N)` with `(r·f)(r') = f(r'r)`, and the
/// canonical `Coind(N)_e → N`, `f ↦ f(1)`.
#[derive(Clone, Debug)]
pub struct Coinduced {
    pub module: GradedModule,
    /// Basis maps `R → N`, one per basis vector of the total module.
    pub maps: Vec<Mat>,
    pub counit: Mat,
    coordinates: Mat,
}

impl Coinduced {
    pub fn coordinates_of(&self, map: &Mat) -> Result<Vec<u32>> {
        let v = map.vectorize();
        let c = self.coordinates.mul_vec(&v);
        let mut back = Mat::zeros(map.field(), map.rows(), map.cols());
        for (ci, m) in c.iter().zip(&self.maps) {
            back.add_scaled(*ci, m);
        }
        if back != *map {
            return Err(Error::Inconsistent("map is not in the coinduced module".into()));
        }
        Ok(c)
    }
}

pub fn coinduce(ring: &GradedRing, n: &LeftModule) -> Result<Coinduced> {
    if !crate::algebra::same_algebra(n.algebra(), &ring.identity) {
        return Err(Error::AlgebraMismatch);
    }
    let f = ring.total.field();
    let g = &ring.group;
    let dr = ring.total.dim();
    let mut maps = Vec::new();
    let mut blocks = vec![Vec::new(); g.order()];
    for y in 0..g.order() {
        let src = g.inv(y);
        let idx = ring.component(src);
        let hom = hom_space(&ring.component_module(src), n)?;
        for b in hom.basis() {
            let mut full = Mat::zeros(f, n.dim(), dr);
            for (c, &i) in idx.iter().enumerate() {
                for r in 0..n.dim() {
                    full.set(r, i, b.get(r, c));
                }
            }
            blocks[y].push(maps.len());
            maps.push(full);
        }
    }
    let d = maps.len();
    let cols: Vec<Vec<u32>> = maps.iter().map(Mat::vectorize).collect();
    let basis = Mat::from_columns(f, n.dim() * dr, &cols);
    let coordinates = if d == 0 {
        Mat::zeros(f, 0, n.dim() * dr)
    } else {
        basis.left_inverse().expect("coinduced basis is independent")
    };
    let mut out = Coinduced {
        module: GradedModule {
            ring: ring.clone(),
            total: LeftModule::zero(&ring.total),
            blocks: blocks.clone(),
        },
        maps,
        counit: Mat::zeros(f, n.dim(), 0),
        coordinates,
    };
    let mut action = Vec::with_capacity(dr);
    for t in 0..dr {
        let rm = ring.total.right_mult(t);
        let cols = out
            .maps
            .iter()
            .map(|m| out.coordinates_of(&m.mul(rm)))
            .collect::<Result<Vec<_>>>()?;
        action.push(Mat::from_columns(f, d, &cols));
    }
    let total = LeftModule::new(&ring.total, d, action)?;
    out.module = make_graded_module(ring, total, blocks)?;
    let e_idx = &out.module.blocks[g.identity()];
    let cols: Vec<Vec<u32>> = e_idx.iter().map(|&i| out.maps[i].mul_vec(ring.total.unit())).collect();
    out.counit = Mat::from_columns(f, n.dim(), &cols);
    Ok(out)
}

/// `Coind(R_e)` as an `(R, R_e)`-bimodule, `(f·a)(r) = f(r)a`.
pub fn coinduced_bimodule(ring: &GradedRing, c: &Coinduced) -> Result<Bimodule> {
    let f = ring.total.field();
    let d = c.maps.len();
    let right = ring
        .identity
        .right_mults()
        .iter()
        .map(|ra| {
            let cols = c
                .maps
                .iter()
                .map(|m| c.coordinates_of(&ra.mul(m)))
                .collect::<Result<Vec<_>>>()?;
            Ok(Mat::from_columns(f, d, &cols))
        })
        .collect::<Result<Vec<_>>>()?;
    bimodule_from_actions(&ring.total, &ring.identity, c.module.total.action().to_vec(), right)
}

pub fn is_qf_restriction<R: Rng + ?Sized>(ring: &GradedRing, rng: &mut R) -> Result<Report> {
    let mut checks = Vec::new();
    let mut ok = true;
    for x in 0..ring.group.order() {
        let m = ring.component_module(x);
        let name = format!("component-{x}-projective");
        match is_fg_projective(&m)? {
            Some(w) => checks.push(
                Check::new(&name, ANCHOR_COMPONENT, Verdict::Yes).with_certificate(Some(split_certificate(&w, &m))),
            ),
            None => {
                ok = false;
                checks.push(
                    Check::new(&name, ANCHOR_COMPONENT, Verdict::No)
                        .with_reason(format!("R_{x} not projective over R_e")),
                );
            }
        }
    }
    let re = crate::modrep::regular_left(&ring.identity);
    let co = coinduce(ring, &re)?;
    let rb = ring.as_bimodule()?;
    let cb = coinduced_bimodule(ring, &co)?;
    match similar(&rb, &cb, rng)? {
        Some(s) => checks.push(
            Check::new("similar-coinduced", ANCHOR_SIMILAR, Verdict::Yes)
                .with_certificate(Some(similarity_certificate(&s, &rb, &cb))),
        ),
        None => {
            ok = false;
            checks.push(
                Check::new("similar-coinduced", ANCHOR_SIMILAR, Verdict::No)
                    .with_reason("R and Coind(R_e) are not similar"),
            );
        }
    }
    Ok(Report::new(Verdict::from_bool(ok), checks))
}
