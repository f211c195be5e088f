//! Modules and bimodules as explicit matrix representations.

use std::sync::{Arc, OnceLock};

use crate::algebra::{enveloping, opposite, same_algebra, Algebra, AlgebraHom};
use crate::error::{Error, Result, Side};
use crate::exactla::{Mat, PrimeField};
use crate::par;

/// A left module: `action[i]` is the matrix of `e_i`.
#[derive(Clone, Debug)]
pub struct LeftModule {
    algebra: Arc<Algebra>,
    dim: usize,
    action: Vec<Mat>,
    gen_action: Vec<Mat>,
}

impl LeftModule {
    pub fn new(algebra: &Arc<Algebra>, dim: usize, action: Vec<Mat>) -> Result<LeftModule> {
        if action.len() != algebra.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} action matrices for an algebra of dimension {}",
                action.len(),
                algebra.dim()
            )));
        }
        for (i, m) in action.iter().enumerate() {
            if m.field() != algebra.field() {
                return Err(Error::FieldMismatch);
            }
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "action matrix {i} is {}x{}, expected {dim}x{dim}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        let m = Self::new_unchecked(algebra, dim, action);
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(algebra: &Arc<Algebra>, dim: usize, action: Vec<Mat>) -> LeftModule {
        let f = algebra.field();
        let gen_action = algebra
            .generators()
            .iter()
            .map(|g| Mat::linear_combination(f, dim, dim, g, &action))
            .collect();
        LeftModule {
            algebra: algebra.clone(),
            dim,
            action,
            gen_action,
        }
    }

    /// Unit and multiplicativity laws on all basis pairs.
    pub fn validate(&self) -> Result<()> {
        let a = &self.algebra;
        let n = a.dim();
        let f = a.field();
        if !self.act(a.unit()).is_identity() {
            return Err(Error::ModuleLaw("the unit does not act as the identity".into()));
        }
        let bad = par::map_range(n, n * n * self.dim.pow(3), |i| {
            (0..n).find(|&j| {
                let lhs = self.action[i].mul(&self.action[j]);
                let mut rhs = Mat::zeros(f, self.dim, self.dim);
                for &(k, c) in a.product(i, j) {
                    rhs.add_scaled(c, &self.action[k]);
                }
                lhs != rhs
            })
        });
        if let Some((i, j)) = bad
            .into_iter()
            .enumerate()
            .find_map(|(i, j)| j.map(|j| (i, j)))
        {
            return Err(Error::ModuleLaw(format!(
                "action of e{i}·e{j} differs from the product of the actions"
            )));
        }
        Ok(())
    }

    pub fn zero(algebra: &Arc<Algebra>) -> LeftModule {
        let f = algebra.field();
        Self::new_unchecked(algebra, 0, vec![Mat::zeros(f, 0, 0); algebra.dim()])
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn field(&self) -> PrimeField {
        self.algebra.field()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self) -> &[Mat] {
        &self.action
    }

    /// Actions of the algebra's generators; intertwining these suffices.
    pub fn generator_action(&self) -> &[Mat] {
        &self.gen_action
    }

    /// Matrix of an arbitrary algebra element.
    pub fn act(&self, x: &[u32]) -> Mat {
        Mat::linear_combination(self.field(), self.dim, self.dim, x, &self.action)
    }

    /// Whether `f` (target.dim × self.dim) intertwines every basis action.
    pub fn is_hom_to(&self, target: &LeftModule, f: &Mat) -> bool {
        same_algebra(&self.algebra, &target.algebra)
            && f.rows() == target.dim
            && f.cols() == self.dim
            && self
                .action
                .iter()
                .zip(&target.action)
                .all(|(a, b)| f.mul(a) == b.mul(f))
    }

    pub fn direct_sum(&self, other: &LeftModule) -> Result<LeftModule> {
        if !same_algebra(&self.algebra, &other.algebra) {
            return Err(Error::AlgebraMismatch);
        }
        let f = self.field();
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| Mat::block_diag(f, &[a, b]))
            .collect();
        Ok(Self::new_unchecked(&self.algebra, self.dim + other.dim, action))
    }

    /// `self^n`.
    pub fn power(&self, n: usize) -> LeftModule {
        let action = self.action.iter().map(|a| a.repeat_diag(n)).collect();
        Self::new_unchecked(&self.algebra, self.dim * n, action)
    }

    /// The summand cut out by `proj ∘ inj = id`, with action `proj ρ inj`.
    pub fn summand(&self, inj: &Mat, proj: &Mat) -> LeftModule {
        let d = inj.cols();
        let action = self.action.iter().map(|a| proj.mul(&a.mul(inj))).collect();
        Self::new_unchecked(&self.algebra, d, action)
    }

    /// Same actions over an isomorphic copy of the algebra (checked equal).
    pub fn over(&self, algebra: &Arc<Algebra>) -> Result<LeftModule> {
        if !same_algebra(&self.algebra, algebra) {
            return Err(Error::AlgebraMismatch);
        }
        Ok(Self::new_unchecked(algebra, self.dim, self.action.clone()))
    }

    /// Pull back along `φ: B → A`.
    pub fn restrict_along(&self, hom: &AlgebraHom) -> Result<LeftModule> {
        if !same_algebra(&hom.target, &self.algebra) {
            return Err(Error::AlgebraMismatch);
        }
        let action = (0..hom.source.dim())
            .map(|i| self.act(&hom.matrix.column(i)))
            .collect();
        Ok(Self::new_unchecked(&hom.source, self.dim, action))
    }
}

pub fn regular_left(a: &Arc<Algebra>) -> LeftModule {
    LeftModule::new_unchecked(a, a.dim(), a.left_mults().to_vec())
}

/// Solution space of `F A_g = B_g F` for all pairs, `F` of shape `dn × dm`.
#[derive(Clone, Debug)]
pub struct HomSpace {
    field: PrimeField,
    rows: usize,
    cols: usize,
    basis: Vec<Mat>,
    positions: Vec<usize>,
    coord_inv: Mat,
}

impl HomSpace {
    fn from_basis(field: PrimeField, rows: usize, cols: usize, basis: Vec<Mat>) -> HomSpace {
        let h = basis.len();
        let len = rows * cols;
        let cols_vecs: Vec<Vec<u32>> = basis.iter().map(|b| b.vectorize()).collect();
        let b = Mat::from_columns(field, len, &cols_vecs);
        let positions = if h == 0 { vec![] } else { b.transpose().rref().pivots };
        let coord_inv = if h == 0 {
            Mat::zeros(field, 0, 0)
        } else {
            b.select_rows(&positions)
                .invert()
                .expect("square")
                .expect("independent basis")
        };
        HomSpace {
            field,
            rows,
            cols,
            basis,
            positions,
            coord_inv,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Mat] {
        &self.basis
    }

    /// Shape of the maps: (target dim, source dim).
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Coordinates of `f` in the basis, or `None` if `f` is not in the space.
    pub fn coordinates(&self, f: &Mat) -> Option<Vec<u32>> {
        if f.rows() != self.rows || f.cols() != self.cols {
            return None;
        }
        let data = f.data();
        let sample: Vec<u32> = self.positions.iter().map(|&p| data[p]).collect();
        let c = if self.basis.is_empty() {
            vec![]
        } else {
            self.coord_inv.mul_vec(&sample)
        };
        (self.element(&c) == *f).then_some(c)
    }

    pub fn element(&self, c: &[u32]) -> Mat {
        Mat::linear_combination(self.field, self.rows, self.cols, c, &self.basis)
    }
}

/// Intertwiners between two families of action matrices of equal length.
pub fn intertwiners(field: PrimeField, dm: usize, dn: usize, pairs: &[(&Mat, &Mat)]) -> HomSpace {
    let len = dm * dn;
    // Current solution space as columns of vectorized dn×dm matrices.
    let mut basis: Vec<Vec<u32>> = (0..len)
        .map(|i| {
            let mut v = vec![0u32; len];
            v[i] = 1;
            v
        })
        .collect();
    for (a, b) in pairs {
        if basis.is_empty() {
            break;
        }
        let images: Vec<Vec<u32>> = par::map_range(basis.len(), basis.len() * len * (dm + dn), |i| {
            let x = Mat::from_vectorized(field, dn, dm, &basis[i]);
            x.mul(a).sub(&b.mul(&x)).vectorize()
        });
        let e = Mat::from_columns(field, len, &images);
        let null = e.nullspace();
        let k = Mat::from_columns(field, len, &basis);
        basis = null.iter().map(|y| k.mul_vec(y)).collect();
    }
    let mats = basis
        .iter()
        .map(|v| Mat::from_vectorized(field, dn, dm, v))
        .collect();
    HomSpace::from_basis(field, dn, dm, mats)
}

pub fn hom_space(m: &LeftModule, n: &LeftModule) -> Result<HomSpace> {
    if !same_algebra(&m.algebra, &n.algebra) {
        return Err(Error::AlgebraMismatch);
    }
    let pairs: Vec<(&Mat, &Mat)> = m.gen_action.iter().zip(&n.gen_action).collect();
    Ok(intertwiners(m.field(), m.dim, n.dim, &pairs))
}

/// An (R,S)-bimodule: left action of R, right action of S (`right_action[j]`
/// is the matrix of `m ↦ m·f_j`).
#[derive(Clone, Debug)]
pub struct Bimodule {
    left: Arc<Algebra>,
    right: Arc<Algebra>,
    right_op: Arc<Algebra>,
    dim: usize,
    left_action: Vec<Mat>,
    right_action: Vec<Mat>,
    carrier: OnceLock<LeftModule>,
}

pub fn bimodule_from_actions(
    r: &Arc<Algebra>,
    s: &Arc<Algebra>,
    left_action: Vec<Mat>,
    right_action: Vec<Mat>,
) -> Result<Bimodule> {
    if r.field() != s.field() {
        return Err(Error::FieldMismatch);
    }
    let dim = left_action.first().map_or_else(
        || right_action.first().map_or(0, |m| m.rows()),
        |m| m.rows(),
    );
    let left = LeftModule::new(r, dim, left_action)?;
    let right_op = opposite(s);
    let right = LeftModule::new(&right_op, dim, right_action)
        .map_err(|e| match e {
            Error::ModuleLaw(msg) => Error::ModuleLaw(format!("right action: {msg}")),
            other => other,
        })?;
    let work = r.dim() * s.dim() * dim.pow(3);
    let bad = par::map_range(r.dim(), work, |i| {
        (0..s.dim()).find(|&j| {
            left.action[i].mul(&right.action[j]) != right.action[j].mul(&left.action[i])
        })
    });
    if let Some((i, j)) = bad
        .into_iter()
        .enumerate()
        .find_map(|(i, j)| j.map(|j| (i, j)))
    {
        return Err(Error::ActionsDoNotCommute { i, j });
    }
    Ok(Bimodule {
        left: r.clone(),
        right: s.clone(),
        right_op,
        dim,
        left_action: left.action,
        right_action: right.action,
        carrier: OnceLock::new(),
    })
}

impl Bimodule {
    pub(crate) fn new_unchecked(
        r: &Arc<Algebra>,
        s: &Arc<Algebra>,
        dim: usize,
        left_action: Vec<Mat>,
        right_action: Vec<Mat>,
    ) -> Bimodule {
        Bimodule {
            left: r.clone(),
            right: s.clone(),
            right_op: opposite(s),
            dim,
            left_action,
            right_action,
            carrier: OnceLock::new(),
        }
    }

    pub fn left_algebra(&self) -> &Arc<Algebra> {
        &self.left
    }

    pub fn right_algebra(&self) -> &Arc<Algebra> {
        &self.right
    }

    pub fn field(&self) -> PrimeField {
        self.left.field()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn left_action(&self) -> &[Mat] {
        &self.left_action
    }

    pub fn right_action(&self) -> &[Mat] {
        &self.right_action
    }

    pub fn left_act(&self, r: &[u32]) -> Mat {
        Mat::linear_combination(self.field(), self.dim, self.dim, r, &self.left_action)
    }

    pub fn right_act(&self, s: &[u32]) -> Mat {
        Mat::linear_combination(self.field(), self.dim, self.dim, s, &self.right_action)
    }

    /// The module over `R ⊗ S^op` with `ρ(e_i ⊗ f_j) = L_i R_j`.
    pub fn carrier(&self) -> &LeftModule {
        self.carrier.get_or_init(|| {
            let env = enveloping(&self.left, &self.right).expect("same field");
            let action = par::map_range(
                self.left.dim() * self.right.dim(),
                self.left.dim() * self.right.dim() * self.dim.pow(3),
                |ij| {
                    let (i, j) = (ij / self.right.dim(), ij % self.right.dim());
                    self.left_action[i].mul(&self.right_action[j])
                },
            );
            LeftModule::new_unchecked(&env.algebra, self.dim, action)
        })
    }

    pub fn same_algebras(&self, other: &Bimodule) -> bool {
        same_algebra(&self.left, &other.left) && same_algebra(&self.right, &other.right)
    }

    /// Whether `f` (other.dim × self.dim) is a bimodule map.
    pub fn is_map_to(&self, other: &Bimodule, f: &Mat) -> bool {
        self.same_algebras(other)
            && f.rows() == other.dim
            && f.cols() == self.dim
            && self
                .left_action
                .iter()
                .zip(&other.left_action)
                .chain(self.right_action.iter().zip(&other.right_action))
                .all(|(a, b)| f.mul(a) == b.mul(f))
    }

    pub fn direct_sum(&self, other: &Bimodule) -> Result<Bimodule> {
        if !self.same_algebras(other) {
            return Err(Error::AlgebraMismatch);
        }
        let f = self.field();
        let sum = |a: &[Mat], b: &[Mat]| -> Vec<Mat> {
            a.iter().zip(b).map(|(x, y)| Mat::block_diag(f, &[x, y])).collect()
        };
        Ok(Bimodule::new_unchecked(
            &self.left,
            &self.right,
            self.dim + other.dim,
            sum(&self.left_action, &other.left_action),
            sum(&self.right_action, &other.right_action),
        ))
    }

    pub fn power(&self, n: usize) -> Bimodule {
        Bimodule::new_unchecked(
            &self.left,
            &self.right,
            self.dim * n,
            self.left_action.iter().map(|a| a.repeat_diag(n)).collect(),
            self.right_action.iter().map(|a| a.repeat_diag(n)).collect(),
        )
    }

    /// Rebuilds a bimodule from its enveloping-algebra carrier.
    pub fn from_carrier(r: &Arc<Algebra>, s: &Arc<Algebra>, carrier: &LeftModule) -> Result<Bimodule> {
        let env = enveloping(r, s)?;
        if !same_algebra(&env.algebra, carrier.algebra()) {
            return Err(Error::AlgebraMismatch);
        }
        let left_action = env.left_embedding.columns().iter().map(|c| carrier.act(c)).collect();
        let right_action = env.right_embedding.columns().iter().map(|c| carrier.act(c)).collect();
        bimodule_from_actions(r, s, left_action, right_action)
    }
}

pub fn regular_bimodule(a: &Arc<Algebra>) -> Bimodule {
    Bimodule::new_unchecked(a, a, a.dim(), a.left_mults().to_vec(), a.right_mults().to_vec())
}

/// `_R S_S` for `φ: R → S`: left action through φ, right regular.
pub fn induced_left(hom: &AlgebraHom) -> Bimodule {
    let s = &hom.target;
    let left = hom.matrix.columns().iter().map(|c| s.left_mult_elem(c)).collect();
    Bimodule::new_unchecked(&hom.source, s, s.dim(), left, s.right_mults().to_vec())
}

/// `_S S_R` for `φ: R → S`: left regular, right action through φ.
pub fn induced_right(hom: &AlgebraHom) -> Bimodule {
    let s = &hom.target;
    let right = hom.matrix.columns().iter().map(|c| s.right_mult_elem(c)).collect();
    Bimodule::new_unchecked(s, &hom.source, s.dim(), s.left_mults().to_vec(), right)
}

/// Left restriction over R, or right restriction as a left module over S^op.
pub fn restrict_bimodule(m: &Bimodule, side: Side) -> LeftModule {
    match side {
        Side::Left => LeftModule::new_unchecked(&m.left, m.dim, m.left_action.clone()),
        Side::Right => LeftModule::new_unchecked(&m.right_op, m.dim, m.right_action.clone()),
    }
}

/// `M ⊗_S N` as a quotient of `M ⊗_k N` (index `a*dim N + b`).
#[derive(Clone, Debug)]
pub struct TensorQuotient {
    pub left_dim: usize,
    pub right_dim: usize,
    /// `q × (left_dim·right_dim)`.
    pub proj: Mat,
    /// Coset representatives, `(left_dim·right_dim) × q`.
    pub lift: Mat,
    proj_t: Mat,
    free: Vec<usize>,
}

impl TensorQuotient {
    pub fn dim(&self) -> usize {
        self.free.len()
    }

    /// Projection of a vector of `M ⊗_k N`.
    pub fn project(&self, v: &[u32]) -> Vec<u32> {
        self.proj.mul_vec(v)
    }

    /// Class of `m ⊗ n`.
    pub fn class_of(&self, m: &[u32], n: &[u32]) -> Vec<u32> {
        let f = self.proj.field();
        let q = self.dim();
        let mut out = vec![0u32; q];
        for (a, &x) in m.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (b, &y) in n.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let c = f.mul(x, y);
                let row = self.proj_t.row(a * self.right_dim + b);
                for (o, &r) in out.iter_mut().zip(row) {
                    *o = f.mul_add(*o, c, r);
                }
            }
        }
        out
    }

    /// Coordinates `(a, b)` of the k-basis element lifting quotient basis vector `i`.
    pub fn representative(&self, i: usize) -> (usize, usize) {
        let c = self.free[i];
        (c / self.right_dim, c % self.right_dim)
    }

    /// Induced map `π' (f ⊗ g) lift` into another quotient.
    pub fn map_to(&self, target: &TensorQuotient, f: &Mat, g: &Mat) -> Mat {
        let field = f.field();
        let q = self.dim();
        let cols: Vec<Vec<u32>> = par::map_range(q, q * target.dim() * f.rows() * g.rows(), |i| {
            let (a, b) = self.representative(i);
            target.class_of(&f.column(a), &g.column(b))
        });
        Mat::from_columns(field, target.dim(), &cols)
    }
}

pub fn tensor_quotient(
    field: PrimeField,
    left_dim: usize,
    right_dim: usize,
    right_actions: &[Mat],
    left_actions: &[Mat],
) -> TensorQuotient {
    let len = left_dim * right_dim;
    let mut rows: Vec<u32> = Vec::new();
    let mut nrows = 0;
    for (rs, ls) in right_actions.iter().zip(left_actions) {
        for a in 0..left_dim {
            for b in 0..right_dim {
                let mut v = vec![0u32; len];
                for a2 in 0..left_dim {
                    let c = rs.get(a2, a);
                    if c != 0 {
                        v[a2 * right_dim + b] = c;
                    }
                }
                for b2 in 0..right_dim {
                    let c = ls.get(b2, b);
                    if c != 0 {
                        let k = a * right_dim + b2;
                        v[k] = field.sub(v[k], c);
                    }
                }
                if v.iter().any(|&x| x != 0) {
                    rows.extend(v);
                    nrows += 1;
                }
            }
        }
    }
    let rel = Mat::from_raw(field, nrows, len, rows);
    let r = rel.rref();
    let mut is_pivot = vec![false; len];
    for &c in &r.pivots {
        is_pivot[c] = true;
    }
    let free: Vec<usize> = (0..len).filter(|&c| !is_pivot[c]).collect();
    let q = free.len();
    let mut proj = Mat::zeros(field, q, len);
    let mut lift = Mat::zeros(field, len, q);
    for (qi, &c) in free.iter().enumerate() {
        proj.set(qi, c, 1);
        lift.set(c, qi, 1);
        for (row, &pc) in r.pivots.iter().enumerate() {
            proj.set(qi, pc, field.neg(r.matrix.get(row, c)));
        }
    }
    let proj_t = proj.transpose();
    TensorQuotient {
        left_dim,
        right_dim,
        proj,
        lift,
        proj_t,
        free,
    }
}

/// `M ⊗_S N` with its induced (R,T)-bimodule structure.
#[derive(Clone, Debug)]
pub struct TensorProduct {
    pub bimodule: Bimodule,
    pub quotient: TensorQuotient,
}

/// Largest `dim M · dim N` accepted by [`tensor_over`]; the relation matrix
/// is dense in that many columns.
pub const MAX_TENSOR_DIM: usize = 2048;

pub fn tensor_over(s: &Arc<Algebra>, m: &Bimodule, n: &Bimodule) -> Result<TensorProduct> {
    if !same_algebra(&m.right, s) || !same_algebra(&n.left, s) {
        return Err(Error::Precondition(
            "tensor factors must share the middle algebra".into(),
        ));
    }
    if m.dim * n.dim > MAX_TENSOR_DIM {
        return Err(Error::TooLarge(format!(
            "tensor product of dimensions {} and {} exceeds {MAX_TENSOR_DIM}",
            m.dim, n.dim
        )));
    }
    let f = m.field();
    let gens: Vec<&Vec<u32>> = s.generators().iter().collect();
    let rs: Vec<Mat> = gens.iter().map(|g| m.right_act(g)).collect();
    let ls: Vec<Mat> = gens.iter().map(|g| n.left_act(g)).collect();
    let quotient = tensor_quotient(f, m.dim, n.dim, &rs, &ls);
    let id_m = Mat::identity(f, m.dim);
    let id_n = Mat::identity(f, n.dim);
    let left_action: Vec<Mat> = m
        .left_action
        .iter()
        .map(|a| quotient.map_to(&quotient, a, &id_n))
        .collect();
    let right_action: Vec<Mat> = n
        .right_action
        .iter()
        .map(|b| quotient.map_to(&quotient, &id_m, b))
        .collect();
    let bimodule = bimodule_from_actions(&m.left, &n.right, left_action, right_action)
        .map_err(|e| Error::Inconsistent(format!("induced tensor actions invalid: {e}")))?;
    Ok(TensorProduct { bimodule, quotient })
}

/// A dual bimodule together with the Hom space realizing it.
#[derive(Clone, Debug)]
pub struct Dual {
    pub bimodule: Bimodule,
    pub hom: HomSpace,
}

fn coords_matrix(hom: &HomSpace, images: impl Iterator<Item = Mat>) -> Result<Mat> {
    let f = hom.field;
    let cols: Vec<Vec<u32>> = images
        .map(|g| {
            hom.coordinates(&g)
                .ok_or_else(|| Error::Inconsistent("dual action leaves the Hom space".into()))
        })
        .collect::<Result<_>>()?;
    Ok(Mat::from_columns(f, hom.dim(), &cols))
}

/// `Hom_R(_R M, _R R)` as an (S,R)-bimodule: `(s·f·r)(m) = f(m·s)·r`.
pub fn left_dual(m: &Bimodule) -> Result<Dual> {
    let r = &m.left;
    let s = &m.right;
    let hom = hom_space(&restrict_bimodule(m, Side::Left), &regular_left(r))?;
    let left = m
        .right_action
        .iter()
        .map(|rs| coords_matrix(&hom, hom.basis.iter().map(|b| b.mul(rs))))
        .collect::<Result<Vec<_>>>()?;
    let right = r
        .right_mults()
        .iter()
        .map(|rr| coords_matrix(&hom, hom.basis.iter().map(|b| rr.mul(b))))
        .collect::<Result<Vec<_>>>()?;
    let bimodule = bimodule_from_actions(s, r, left, right)?;
    Ok(Dual { bimodule, hom })
}

/// `Hom_S(M_S, S_S)` as an (S,R)-bimodule: `(s·g·r)(m) = s·g(r·m)`.
pub fn right_dual(m: &Bimodule) -> Result<Dual> {
    let r = &m.left;
    let s = &m.right;
    let reg_op = LeftModule::new_unchecked(&m.right_op, s.dim(), s.right_mults().to_vec());
    let hom = hom_space(&restrict_bimodule(m, Side::Right), &reg_op)?;
    let left = s
        .left_mults()
        .iter()
        .map(|ls| coords_matrix(&hom, hom.basis.iter().map(|b| ls.mul(b))))
        .collect::<Result<Vec<_>>>()?;
    let right = m
        .left_action
        .iter()
        .map(|lr| coords_matrix(&hom, hom.basis.iter().map(|b| b.mul(lr))))
        .collect::<Result<Vec<_>>>()?;
    let bimodule = bimodule_from_actions(s, r, left, right)?;
    Ok(Dual { bimodule, hom })
}

/// `π: A^d → M` and an A-linear section `σ`, with `π σ = id`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitWitness {
    pub copies: usize,
    pub pi: Mat,
    pub sigma: Mat,
}

pub fn is_fg_projective(m: &LeftModule) -> Result<Option<SplitWitness>> {
    let a = &m.algebra;
    let f = m.field();
    let (n, d) = (a.dim(), m.dim);
    if d == 0 {
        return Ok(Some(SplitWitness {
            copies: 0,
            pi: Mat::zeros(f, 0, 0),
            sigma: Mat::zeros(f, 0, 0),
        }));
    }
    let hom = hom_space(m, &regular_left(a))?;
    let h = hom.dim();
    if h == 0 {
        return Ok(None);
    }
    // W_k: a ↦ a·m_k, a d × n matrix.
    let w: Vec<Mat> = (0..d)
        .map(|k| {
            let cols: Vec<Vec<u32>> = m.action.iter().map(|act| act.column(k)).collect();
            Mat::from_columns(f, d, &cols)
        })
        .collect();
    let products: Vec<Vec<u32>> = par::map_range(d * h, d * h * d * d * n, |kb| {
        let (k, b) = (kb / h, kb % h);
        w[k].mul(&hom.basis[b]).vectorize()
    });
    let system = Mat::from_columns(f, d * d, &products);
    let target = Mat::column_vector(f, &Mat::identity(f, d).vectorize());
    let Some(c) = system.solve_right(&target)? else {
        return Ok(None);
    };
    let mut sigma = Mat::zeros(f, n * d, d);
    for k in 0..d {
        let coeffs: Vec<u32> = (0..h).map(|b| c.get(k * h + b, 0)).collect();
        sigma.set_block(k * n, 0, &hom.element(&coeffs));
    }
    let blocks: Vec<&Mat> = w.iter().collect();
    let pi = Mat::hstack(f, d, &blocks);
    debug_assert!(pi.mul(&sigma).is_identity());
    Ok(Some(SplitWitness {
        copies: d,
        pi,
        sigma,
    }))
}

impl SplitWitness {
    /// Re-checks `π σ = id` and A-linearity of both maps.
    pub fn verify(&self, m: &LeftModule) -> bool {
        let a = m.algebra();
        let free = regular_left(a).power(self.copies);
        self.pi.rows() == m.dim()
            && self.sigma.cols() == m.dim()
            && self.pi.mul(&self.sigma).is_identity()
            && free.is_hom_to(m, &self.pi)
            && m.is_hom_to(&free, &self.sigma)
    }
}
