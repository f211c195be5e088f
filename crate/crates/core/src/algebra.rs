//! Finite-dimensional associative unital algebras given by structure constants.

use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::exactla::{Echelon, Mat, PrimeField};
use crate::par;

/// An algebra with basis `e_0..e_{n-1}` and `e_i e_j = Σ_k c[i][j][k] e_k`.
#[derive(Clone)]
pub struct Algebra {
    field: PrimeField,
    dim: usize,
    mul: Vec<u32>,
    unit: Vec<u32>,
    products: Vec<Vec<(usize, u32)>>,
    left: Vec<Mat>,
    right: Vec<Mat>,
    generators: Vec<Vec<u32>>,
}

impl std::fmt::Debug for Algebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Algebra(dim {} over {:?})", self.dim, self.field)
    }
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.dim == other.dim
            && self.unit == other.unit
            && self.mul == other.mul
    }
}
impl Eq for Algebra {}

/// Whether two handles denote the same algebra (same presentation).
pub fn same_algebra(a: &Arc<Algebra>, b: &Arc<Algebra>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Algebra {
    /// Validates and builds an algebra from flat constants `mul[(i*n + j)*n + k]`.
    pub fn new(field: PrimeField, dim: usize, mul: Vec<u32>, unit: Vec<u32>) -> Result<Arc<Algebra>> {
        Self::build(field, dim, mul, unit, None)
    }

    /// Builds from nested constants `c[i][j][k]`.
    pub fn from_nested(
        field: PrimeField,
        dim: usize,
        c: &[Vec<Vec<u32>>],
        unit: Vec<u32>,
    ) -> Result<Arc<Algebra>> {
        let shape_err = || Error::DimensionMismatch(format!("structure constants must be {dim}x{dim}x{dim}"));
        if c.len() != dim {
            return Err(shape_err());
        }
        let mut mul = Vec::with_capacity(dim * dim * dim);
        for ci in c {
            if ci.len() != dim {
                return Err(shape_err());
            }
            for cij in ci {
                if cij.len() != dim {
                    return Err(shape_err());
                }
                mul.extend_from_slice(cij);
            }
        }
        Self::new(field, dim, mul, unit)
    }

    fn build(
        field: PrimeField,
        dim: usize,
        mul: Vec<u32>,
        unit: Vec<u32>,
        candidates: Option<Vec<Vec<u32>>>,
    ) -> Result<Arc<Algebra>> {
        if dim == 0 {
            return Err(Error::DimensionMismatch("algebra of dimension 0".into()));
        }
        if mul.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "{} structure constants for dimension {dim}",
                mul.len()
            )));
        }
        if unit.len() != dim {
            return Err(Error::DimensionMismatch(format!(
                "unit has length {} for dimension {dim}",
                unit.len()
            )));
        }
        for &v in mul.iter().chain(&unit) {
            field.check(v as u64)?;
        }
        let products: Vec<Vec<(usize, u32)>> = (0..dim * dim)
            .map(|ij| {
                (0..dim)
                    .filter_map(|k| {
                        let c = mul[ij * dim + k];
                        (c != 0).then_some((k, c))
                    })
                    .collect()
            })
            .collect();
        let mut a = Algebra {
            field,
            dim,
            mul,
            unit,
            products,
            left: vec![],
            right: vec![],
            generators: vec![],
        };
        a.check_unit()?;
        a.check_associative()?;
        a.left = (0..dim).map(|i| a.compute_left(i)).collect();
        a.right = (0..dim).map(|j| a.compute_right(j)).collect();
        let basis = (0..dim).map(|i| a.basis_vector(i));
        a.generators = match candidates {
            Some(c) => a.greedy_generators(c.into_iter().chain(basis)),
            None => a.greedy_generators(basis),
        };
        Ok(Arc::new(a))
    }

    fn check_unit(&self) -> Result<()> {
        let n = self.dim;
        for i in 0..n {
            let e = self.basis_vector(i);
            if self.mul_elems(&self.unit, &e) != e || self.mul_elems(&e, &self.unit) != e {
                return Err(Error::UnitViolation(i));
            }
        }
        Ok(())
    }

    fn check_associative(&self) -> Result<()> {
        let n = self.dim;
        let f = self.field;
        let first = par::map_range(n, n * n * n * 4, |i| {
            let mut lhs = vec![0u32; n];
            let mut rhs = vec![0u32; n];
            for j in 0..n {
                for l in 0..n {
                    lhs.iter_mut().for_each(|x| *x = 0);
                    rhs.iter_mut().for_each(|x| *x = 0);
                    for &(k, c) in &self.products[i * n + j] {
                        for &(m, d) in &self.products[k * n + l] {
                            lhs[m] = f.mul_add(lhs[m], c, d);
                        }
                    }
                    for &(k, c) in &self.products[j * n + l] {
                        for &(m, d) in &self.products[i * n + k] {
                            rhs[m] = f.mul_add(rhs[m], c, d);
                        }
                    }
                    if lhs != rhs {
                        return Some((j, l));
                    }
                }
            }
            None
        });
        if let Some((i, (j, l))) = first
            .into_iter()
            .enumerate()
            .find_map(|(i, r)| r.map(|jl| (i, jl)))
        {
            return Err(Error::AssociativityViolation { i, j, l });
        }
        Ok(())
    }

    fn compute_left(&self, i: usize) -> Mat {
        let n = self.dim;
        let mut m = Mat::zeros(self.field, n, n);
        for j in 0..n {
            for &(k, c) in &self.products[i * n + j] {
                m.set(k, j, c);
            }
        }
        m
    }

    fn compute_right(&self, j: usize) -> Mat {
        let n = self.dim;
        let mut m = Mat::zeros(self.field, n, n);
        for i in 0..n {
            for &(k, c) in &self.products[i * n + j] {
                m.set(k, i, c);
            }
        }
        m
    }

    /// Greedy generating set: keep a candidate when it leaves the subalgebra
    /// generated so far.
    fn greedy_generators(&self, candidates: impl Iterator<Item = Vec<u32>>) -> Vec<Vec<u32>> {
        let n = self.dim;
        let mut span = Echelon::new(self.field, n);
        let mut elems: Vec<Vec<u32>> = Vec::new();
        span.insert(&self.unit);
        elems.push(self.unit.clone());
        let mut gens: Vec<Vec<u32>> = Vec::new();
        for cand in candidates {
            if span.rank() == n {
                break;
            }
            if span.contains(&cand) {
                continue;
            }
            gens.push(cand);
            let mut queue: Vec<Vec<u32>> = elems.clone();
            while let Some(v) = queue.pop() {
                for g in &gens {
                    let w = self.mul_elems(&v, g);
                    if span.insert(&w) {
                        elems.push(w.clone());
                        queue.push(w);
                    }
                }
            }
        }
        gens
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &[u32] {
        &self.unit
    }

    /// Flat structure constants `c[(i*n + j)*n + k]`.
    pub fn structure_constants(&self) -> &[u32] {
        &self.mul
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> u32 {
        self.mul[(i * self.dim + j) * self.dim + k]
    }

    /// Nonzero coordinates of `e_i e_j`.
    pub fn product(&self, i: usize, j: usize) -> &[(usize, u32)] {
        &self.products[i * self.dim + j]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<u32> {
        let mut v = vec![0u32; self.dim];
        v[i] = 1;
        v
    }

    pub fn zero_vector(&self) -> Vec<u32> {
        vec![0u32; self.dim]
    }

    /// Matrix of `y ↦ e_i y`.
    pub fn left_mult(&self, i: usize) -> &Mat {
        &self.left[i]
    }

    /// Matrix of `y ↦ y e_j`.
    pub fn right_mult(&self, j: usize) -> &Mat {
        &self.right[j]
    }

    pub fn left_mults(&self) -> &[Mat] {
        &self.left
    }

    pub fn right_mults(&self) -> &[Mat] {
        &self.right
    }

    pub fn left_mult_elem(&self, x: &[u32]) -> Mat {
        Mat::linear_combination(self.field, self.dim, self.dim, x, &self.left)
    }

    pub fn right_mult_elem(&self, x: &[u32]) -> Mat {
        Mat::linear_combination(self.field, self.dim, self.dim, x, &self.right)
    }

    /// Elements generating the algebra (with the unit).
    pub fn generators(&self) -> &[Vec<u32>] {
        &self.generators
    }

    pub fn mul_elems(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let n = self.dim;
        let f = self.field;
        let mut out = vec![0u32; n];
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let ab = f.mul(a, b);
                for &(k, c) in &self.products[i * n + j] {
                    out[k] = f.mul_add(out[k], ab, c);
                }
            }
        }
        out
    }

    pub fn add_elems(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        x.iter().zip(y).map(|(&a, &b)| self.field.add(a, b)).collect()
    }

    pub fn sub_elems(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        x.iter().zip(y).map(|(&a, &b)| self.field.sub(a, b)).collect()
    }

    pub fn scale_elem(&self, c: u32, x: &[u32]) -> Vec<u32> {
        x.iter().map(|&a| self.field.mul(a, c)).collect()
    }

    pub fn pow_elem(&self, x: &[u32], mut e: u64) -> Vec<u32> {
        let mut base = x.to_vec();
        let mut acc = self.unit.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_elems(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul_elems(&base, &base);
            }
        }
        acc
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.dim;
        (0..n).all(|i| (0..n).all(|j| self.products[i * n + j] == self.products[j * n + i]))
    }

    /// Whether `x` is a scalar multiple of the unit.
    pub fn is_scalar(&self, x: &[u32]) -> bool {
        let mut e = Echelon::new(self.field, self.dim);
        e.insert(&self.unit);
        e.contains(x)
    }

    fn from_parts_trusted(
        field: PrimeField,
        dim: usize,
        mul: Vec<u32>,
        unit: Vec<u32>,
        candidates: Option<Vec<Vec<u32>>>,
    ) -> Arc<Algebra> {
        Self::build(field, dim, mul, unit, candidates)
            .unwrap_or_else(|e| panic!("constructed algebra failed validation: {e}"))
    }
}

pub fn field_algebra(field: PrimeField) -> Arc<Algebra> {
    Algebra::from_parts_trusted(field, 1, vec![1], vec![1], None)
}

pub fn opposite(a: &Algebra) -> Arc<Algebra> {
    let n = a.dim;
    let mut mul = vec![0u32; n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                mul[(i * n + j) * n + k] = a.mul[(j * n + i) * n + k];
            }
        }
    }
    Algebra::from_parts_trusted(a.field, n, mul, a.unit.clone(), Some(a.generators.clone()))
}

fn kron_vec(field: PrimeField, x: &[u32], y: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(x.len() * y.len());
    for &a in x {
        for &b in y {
            out.push(field.mul(a, b));
        }
    }
    out
}

pub fn tensor_algebra(a: &Algebra, b: &Algebra) -> Result<Arc<Algebra>> {
    if a.field != b.field {
        return Err(Error::FieldMismatch);
    }
    let f = a.field;
    let (na, nb) = (a.dim, b.dim);
    let n = na * nb;
    let mut mul = vec![0u32; n * n * n];
    for i in 0..na {
        for ip in 0..na {
            for &(k, c) in a.product(i, ip) {
                for j in 0..nb {
                    for jp in 0..nb {
                        for &(l, d) in b.product(j, jp) {
                            let row = (i * nb + j) * n + (ip * nb + jp);
                            mul[row * n + k * nb + l] = f.mul(c, d);
                        }
                    }
                }
            }
        }
    }
    let unit = kron_vec(f, &a.unit, &b.unit);
    let mut cands: Vec<Vec<u32>> = a.generators.iter().map(|g| kron_vec(f, g, &b.unit)).collect();
    cands.extend(b.generators.iter().map(|g| kron_vec(f, &a.unit, g)));
    Ok(Algebra::from_parts_trusted(f, n, mul, unit, Some(cands)))
}

/// `R ⊗ S^op`, whose left modules are the (R,S)-bimodules.
#[derive(Clone, Debug)]
pub struct Envelope {
    pub algebra: Arc<Algebra>,
    pub left: Arc<Algebra>,
    pub right: Arc<Algebra>,
    /// `r ↦ r ⊗ 1`, a `dim(R ⊗ S^op) × dim R` matrix.
    pub left_embedding: Mat,
    /// `s ↦ 1 ⊗ s`.
    pub right_embedding: Mat,
}

type EnvCache = Mutex<Vec<(Arc<Algebra>, Arc<Algebra>, Arc<Envelope>)>>;

fn env_cache() -> &'static EnvCache {
    static CACHE: OnceLock<EnvCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(Vec::new()))
}

const ENV_CACHE_LIMIT: usize = 128;

pub fn enveloping(r: &Arc<Algebra>, s: &Arc<Algebra>) -> Result<Arc<Envelope>> {
    if r.field != s.field {
        return Err(Error::FieldMismatch);
    }
    {
        let cache = env_cache().lock().expect("cache poisoned");
        if let Some((_, _, e)) = cache
            .iter()
            .find(|(a, b, _)| same_algebra(a, r) && same_algebra(b, s))
        {
            return Ok(e.clone());
        }
    }
    let f = r.field;
    let sop = opposite(s);
    let algebra = tensor_algebra(r, &sop)?;
    let (nr, ns) = (r.dim, s.dim);
    let mut left_embedding = Mat::zeros(f, nr * ns, nr);
    for i in 0..nr {
        let col = kron_vec(f, &r.basis_vector(i), &s.unit);
        for (k, &v) in col.iter().enumerate() {
            left_embedding.set(k, i, v);
        }
    }
    let mut right_embedding = Mat::zeros(f, nr * ns, ns);
    for j in 0..ns {
        let col = kron_vec(f, &r.unit, &s.basis_vector(j));
        for (k, &v) in col.iter().enumerate() {
            right_embedding.set(k, j, v);
        }
    }
    let env = Arc::new(Envelope {
        algebra,
        left: r.clone(),
        right: s.clone(),
        left_embedding,
        right_embedding,
    });
    let mut cache = env_cache().lock().expect("cache poisoned");
    if cache.len() >= ENV_CACHE_LIMIT {
        cache.remove(0);
    }
    cache.push((r.clone(), s.clone(), env.clone()));
    Ok(env)
}

/// Direct product `A × B` with basis `(e_i, 0)` then `(0, f_j)`.
pub fn product_algebra(a: &Algebra, b: &Algebra) -> Result<Arc<Algebra>> {
    if a.field != b.field {
        return Err(Error::FieldMismatch);
    }
    let (na, nb) = (a.dim, b.dim);
    let n = na + nb;
    let mut mul = vec![0u32; n * n * n];
    for i in 0..na {
        for j in 0..na {
            for &(k, c) in a.product(i, j) {
                mul[(i * n + j) * n + k] = c;
            }
        }
    }
    for i in 0..nb {
        for j in 0..nb {
            for &(k, c) in b.product(i, j) {
                mul[((na + i) * n + na + j) * n + na + k] = c;
            }
        }
    }
    let mut unit = a.unit.clone();
    unit.extend_from_slice(&b.unit);
    Algebra::new(a.field, n, mul, unit)
}

/// `M_n(F_p)` with matrix units `E_{ij}` at index `i*n + j`.
pub fn matrix_algebra(field: PrimeField, n: usize) -> Arc<Algebra> {
    let d = n * n;
    let mut mul = vec![0u32; d * d * d];
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                mul[((i * n + j) * d + (j * n + l)) * d + i * n + l] = 1;
            }
        }
    }
    let mut unit = vec![0u32; d];
    for i in 0..n {
        unit[i * n + i] = 1;
    }
    Algebra::from_parts_trusted(field, d, mul, unit, None)
}

/// `F_p[x]/(x^k)` with basis `1, x, ..., x^{k-1}`.
pub fn truncated_polynomial(field: PrimeField, k: usize) -> Arc<Algebra> {
    let mut mul = vec![0u32; k * k * k];
    for i in 0..k {
        for j in 0..k {
            if i + j < k {
                mul[(i * k + j) * k + i + j] = 1;
            }
        }
    }
    let mut unit = vec![0u32; k];
    unit[0] = 1;
    Algebra::from_parts_trusted(field, k, mul, unit, None)
}

/// Upper-triangular `n × n` matrices; basis `E_{ij}` (`i <= j`) in row-major order.
pub fn upper_triangular(field: PrimeField, n: usize) -> Arc<Algebra> {
    let idx: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let pos = |i: usize, j: usize| idx.iter().position(|&x| x == (i, j)).expect("upper entry");
    let d = idx.len();
    let mut mul = vec![0u32; d * d * d];
    for (a, &(i, j)) in idx.iter().enumerate() {
        for (b, &(k, l)) in idx.iter().enumerate() {
            if j == k {
                mul[(a * d + b) * d + pos(i, l)] = 1;
            }
        }
    }
    let mut unit = vec![0u32; d];
    for i in 0..n {
        unit[pos(i, i)] = 1;
    }
    Algebra::from_parts_trusted(field, d, mul, unit, None)
}

/// A finite group by multiplication table over `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl Group {
    pub fn new(table: Vec<Vec<usize>>) -> Result<Group> {
        let n = table.len();
        if n == 0 {
            return Err(Error::NotAGroup("empty table".into()));
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotAGroup(format!("row {a} has length {}", row.len())));
            }
            if let Some(&x) = row.iter().find(|&&x| x >= n) {
                return Err(Error::NotAGroup(format!("entry {x} out of range in row {a}")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::NotAGroup(format!(
                            "associativity fails on ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| Error::NotAGroup("no identity element".into()))?;
        let mut inverses = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| Error::NotAGroup(format!("element {a} has no inverse")))?;
            inverses.push(inv);
        }
        Ok(Group {
            table,
            identity,
            inverses,
        })
    }

    pub fn cyclic(n: usize) -> Group {
        Group::new(
            (0..n)
                .map(|a| (0..n).map(|b| (a + b) % n).collect())
                .collect(),
        )
        .expect("cyclic group table")
    }

    /// Symmetric group on three letters.
    pub fn s3() -> Group {
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [1, 0, 2],
            [0, 2, 1],
            [2, 1, 0],
            [1, 2, 0],
            [2, 0, 1],
        ];
        let pos = |p: [usize; 3]| perms.iter().position(|&q| q == p).expect("perm");
        let table = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| pos([a[b[0]], a[b[1]], a[b[2]]]))
                    .collect()
            })
            .collect();
        Group::new(table).expect("S3 table")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }
}

pub fn group_algebra(field: PrimeField, group: &Group) -> Arc<Algebra> {
    let n = group.order();
    let mut mul = vec![0u32; n * n * n];
    for g in 0..n {
        for h in 0..n {
            mul[(g * n + h) * n + group.mul(g, h)] = 1;
        }
    }
    let mut unit = vec![0u32; n];
    unit[group.identity()] = 1;
    Algebra::from_parts_trusted(field, n, mul, unit, None)
}

/// A unital algebra homomorphism, `matrix` of shape `dim(target) × dim(source)`.
#[derive(Clone, Debug)]
pub struct AlgebraHom {
    pub source: Arc<Algebra>,
    pub target: Arc<Algebra>,
    pub matrix: Mat,
}

pub fn make_hom(source: &Arc<Algebra>, target: &Arc<Algebra>, matrix: Mat) -> Result<AlgebraHom> {
    if source.field != target.field || matrix.field() != source.field {
        return Err(Error::FieldMismatch);
    }
    if matrix.rows() != target.dim || matrix.cols() != source.dim {
        return Err(Error::DimensionMismatch(format!(
            "hom matrix is {}x{}, expected {}x{}",
            matrix.rows(),
            matrix.cols(),
            target.dim,
            source.dim
        )));
    }
    if matrix.mul_vec(&source.unit) != target.unit {
        return Err(Error::NotUnital);
    }
    let images = matrix.columns();
    let n = source.dim;
    for i in 0..n {
        for j in 0..n {
            let lhs = matrix.mul_vec(&source.mul_elems(&source.basis_vector(i), &source.basis_vector(j)));
            let rhs = target.mul_elems(&images[i], &images[j]);
            if lhs != rhs {
                return Err(Error::NotMultiplicative { i, j });
            }
        }
    }
    Ok(AlgebraHom {
        source: source.clone(),
        target: target.clone(),
        matrix,
    })
}

impl AlgebraHom {
    pub fn identity(a: &Arc<Algebra>) -> AlgebraHom {
        AlgebraHom {
            source: a.clone(),
            target: a.clone(),
            matrix: Mat::identity(a.field, a.dim),
        }
    }

    /// Unit map `F_p → A`.
    pub fn unit_embedding(a: &Arc<Algebra>) -> AlgebraHom {
        AlgebraHom {
            source: field_algebra(a.field),
            target: a.clone(),
            matrix: Mat::column_vector(a.field, &a.unit),
        }
    }

    /// `after ∘ self`.
    pub fn then(&self, after: &AlgebraHom) -> Result<AlgebraHom> {
        if !same_algebra(&self.target, &after.source) {
            return Err(Error::AlgebraMismatch);
        }
        Ok(AlgebraHom {
            source: self.source.clone(),
            target: after.target.clone(),
            matrix: after.matrix.mul(&self.matrix),
        })
    }

    pub fn apply(&self, x: &[u32]) -> Vec<u32> {
        self.matrix.mul_vec(x)
    }
}

/// Quotient `A/I` by a two-sided ideal given by a basis, with projection and
/// coset-representative lift (rref non-pivot coordinates).
#[derive(Clone, Debug)]
pub struct QuotientAlgebra {
    pub algebra: Arc<Algebra>,
    pub proj: Mat,
    pub lift: Mat,
}

pub fn quotient_algebra(a: &Algebra, ideal: &[Vec<u32>]) -> Result<QuotientAlgebra> {
    let f = a.field;
    let n = a.dim;
    let rows: Vec<Vec<i64>> = ideal
        .iter()
        .map(|v| v.iter().map(|&x| x as i64).collect())
        .collect();
    let (pivots, rref) = if rows.is_empty() {
        (vec![], Mat::zeros(f, 0, n))
    } else {
        let r = Mat::from_rows(f, &rows)?.rref();
        (r.pivots.clone(), r.matrix.block(0, 0, r.rank, n))
    };
    let mut is_pivot = vec![false; n];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let free: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
    let q = free.len();
    if q == 0 {
        return Err(Error::Precondition("quotient by the whole algebra".into()));
    }
    let mut proj = Mat::zeros(f, q, n);
    let mut lift = Mat::zeros(f, n, q);
    for (qi, &c) in free.iter().enumerate() {
        proj.set(qi, c, 1);
        lift.set(c, qi, 1);
        for (r, &pc) in pivots.iter().enumerate() {
            proj.set(qi, pc, f.neg(rref.get(r, c)));
        }
    }
    let mut mul = vec![0u32; q * q * q];
    for i in 0..q {
        for j in 0..q {
            let prod = a.mul_elems(&lift.column(i), &lift.column(j));
            let img = proj.mul_vec(&prod);
            mul[(i * q + j) * q..(i * q + j + 1) * q].copy_from_slice(&img);
        }
    }
    let unit = proj.mul_vec(&a.unit);
    let algebra = Algebra::new(f, q, mul, unit)?;
    Ok(QuotientAlgebra {
        algebra,
        proj,
        lift,
    })
}
