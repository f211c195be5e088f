//! JSON input documents. Every error carries a JSON pointer into the input.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{make_hom, Algebra, AlgebraHom, Group};
use crate::coring::{make_coring, Coring};
use crate::exactla::{Mat, PrimeField};
use crate::graded::{make_graded_ring, GradedRing};
use crate::modrep::{bimodule_from_actions, Bimodule, LeftModule};

pub type IntMatrix = Vec<Vec<i64>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    pub dim: usize,
    /// `mul[i][j][k]`: coefficient of `e_k` in `e_i e_j`.
    pub mul: Vec<Vec<Vec<i64>>>,
    pub unit: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomDoc {
    pub source: AlgebraDoc,
    pub target: AlgebraDoc,
    pub matrix: IntMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDoc {
    pub algebra: AlgebraDoc,
    pub dim: usize,
    pub action: Vec<IntMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BimoduleDoc {
    pub left: AlgebraDoc,
    pub right: AlgebraDoc,
    pub left_action: Vec<IntMatrix>,
    pub right_action: Vec<IntMatrix>,
}

/// Bimodule over the coring base on both sides.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CarrierDoc {
    pub left_action: Vec<IntMatrix>,
    pub right_action: Vec<IntMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoringDoc {
    pub base: AlgebraDoc,
    pub carrier: CarrierDoc,
    pub delta: IntMatrix,
    pub eps: IntMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradedDoc {
    pub group_table: Vec<Vec<usize>>,
    pub components: Vec<usize>,
    /// `products[x*|G| + y]`: `R_x ⊗ R_y → R_{xy}`.
    pub products: Vec<IntMatrix>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub p: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hom: Option<HomDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<ModuleDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bimodule: Option<BimoduleDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coring: Option<CoringDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graded: Option<GradedDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemaError {
    pub pointer: String,
    pub message: String,
}

impl SchemaError {
    fn new(pointer: impl Into<String>, message: impl Into<String>) -> SchemaError {
        SchemaError {
            pointer: pointer.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ptr = if self.pointer.is_empty() { "/" } else { &self.pointer };
        write!(f, "{ptr}: {}", self.message)
    }
}

impl std::error::Error for SchemaError {}

type Res<T> = std::result::Result<T, SchemaError>;

fn escape(seg: &str) -> String {
    seg.replace('~', "~0").replace('/', "~1")
}

pub fn parse_document(text: &str) -> Res<Document> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let mut ptr = String::new();
        for seg in e.path().iter() {
            use serde_path_to_error::Segment;
            match seg {
                Segment::Seq { index } => ptr.push_str(&format!("/{index}")),
                Segment::Map { key } => ptr.push_str(&format!("/{}", escape(key))),
                Segment::Enum { variant } => ptr.push_str(&format!("/{}", escape(variant))),
                Segment::Unknown => {}
            }
        }
        SchemaError::new(ptr, e.inner().to_string())
    })
}

/// A validated input.
#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum Input {
    Algebra(Arc<Algebra>),
    Hom(AlgebraHom),
    Module(LeftModule),
    Bimodule(Bimodule),
    Coring(Coring),
    Graded(GradedRing),
}

impl Input {
    pub fn kind(&self) -> &'static str {
        match self {
            Input::Algebra(_) => "algebra",
            Input::Hom(_) => "hom",
            Input::Module(_) => "module",
            Input::Bimodule(_) => "bimodule",
            Input::Coring(_) => "coring",
            Input::Graded(_) => "graded",
        }
    }
}

fn entry(f: PrimeField, v: i64, ptr: &str) -> Res<u32> {
    if v < 0 || v as u64 >= f.p() as u64 {
        return Err(SchemaError::new(
            ptr,
            format!("entry {v} is not a field representative in [0, {})", f.p()),
        ));
    }
    Ok(v as u32)
}

fn matrix(f: PrimeField, m: &IntMatrix, rows: usize, cols: usize, ptr: &str) -> Res<Mat> {
    if m.len() != rows {
        return Err(SchemaError::new(ptr, format!("expected {rows} rows, found {}", m.len())));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for (i, r) in m.iter().enumerate() {
        if r.len() != cols {
            return Err(SchemaError::new(
                format!("{ptr}/{i}"),
                format!("expected {cols} columns, found {}", r.len()),
            ));
        }
        for (j, &v) in r.iter().enumerate() {
            data.push(entry(f, v, &format!("{ptr}/{i}/{j}"))?);
        }
    }
    Mat::from_vec(f, rows, cols, data).map_err(|e| SchemaError::new(ptr, e.to_string()))
}

/// Square action matrices; `dim` inferred from the first when `None`.
fn actions(f: PrimeField, list: &[IntMatrix], count: usize, dim: Option<usize>, ptr: &str) -> Res<(usize, Vec<Mat>)> {
    if list.len() != count {
        return Err(SchemaError::new(
            ptr,
            format!("expected {count} action matrices, found {}", list.len()),
        ));
    }
    let d = dim.or_else(|| list.first().map(Vec::len)).unwrap_or(0);
    let mats = list
        .iter()
        .enumerate()
        .map(|(i, m)| matrix(f, m, d, d, &format!("{ptr}/{i}")))
        .collect::<Res<Vec<_>>>()?;
    Ok((d, mats))
}

pub fn build_algebra(f: PrimeField, doc: &AlgebraDoc, ptr: &str) -> Res<Arc<Algebra>> {
    let n = doc.dim;
    if doc.mul.len() != n {
        return Err(SchemaError::new(format!("{ptr}/mul"), format!("expected {n} slices, found {}", doc.mul.len())));
    }
    let mut flat = Vec::with_capacity(n * n * n);
    for (i, slice) in doc.mul.iter().enumerate() {
        let m = matrix(f, slice, n, n, &format!("{ptr}/mul/{i}"))?;
        flat.extend_from_slice(m.data());
    }
    if doc.unit.len() != n {
        return Err(SchemaError::new(format!("{ptr}/unit"), format!("expected {n} entries, found {}", doc.unit.len())));
    }
    let unit = doc
        .unit
        .iter()
        .enumerate()
        .map(|(i, &v)| entry(f, v, &format!("{ptr}/unit/{i}")))
        .collect::<Res<Vec<_>>>()?;
    Algebra::new(f, n, flat, unit).map_err(|e| SchemaError::new(ptr, e.to_string()))
}

fn build_module(f: PrimeField, doc: &ModuleDoc, ptr: &str) -> Res<LeftModule> {
    let a = build_algebra(f, &doc.algebra, &format!("{ptr}/algebra"))?;
    let (d, acts) = actions(f, &doc.action, a.dim(), Some(doc.dim), &format!("{ptr}/action"))?;
    LeftModule::new(&a, d, acts).map_err(|e| SchemaError::new(ptr, e.to_string()))
}

fn build_bimodule_over(
    f: PrimeField,
    left: &Arc<Algebra>,
    right: &Arc<Algebra>,
    la: &[IntMatrix],
    ra: &[IntMatrix],
    ptr: &str,
) -> Res<Bimodule> {
    let (d, l) = actions(f, la, left.dim(), None, &format!("{ptr}/left_action"))?;
    let (_, r) = actions(f, ra, right.dim(), Some(d), &format!("{ptr}/right_action"))?;
    bimodule_from_actions(left, right, l, r).map_err(|e| SchemaError::new(ptr, e.to_string()))
}

fn build_bimodule(f: PrimeField, doc: &BimoduleDoc, ptr: &str) -> Res<Bimodule> {
    let left = build_algebra(f, &doc.left, &format!("{ptr}/left"))?;
    let right = build_algebra(f, &doc.right, &format!("{ptr}/right"))?;
    build_bimodule_over(f, &left, &right, &doc.left_action, &doc.right_action, ptr)
}

fn build_hom(f: PrimeField, doc: &HomDoc, ptr: &str) -> Res<AlgebraHom> {
    let s = build_algebra(f, &doc.source, &format!("{ptr}/source"))?;
    let t = build_algebra(f, &doc.target, &format!("{ptr}/target"))?;
    let m = matrix(f, &doc.matrix, t.dim(), s.dim(), &format!("{ptr}/matrix"))?;
    make_hom(&s, &t, m).map_err(|e| SchemaError::new(ptr, e.to_string()))
}

fn build_coring(f: PrimeField, doc: &CoringDoc, ptr: &str) -> Res<Coring> {
    let a = build_algebra(f, &doc.base, &format!("{ptr}/base"))?;
    let carrier = build_bimodule_over(
        f,
        &a,
        &a,
        &doc.carrier.left_action,
        &doc.carrier.right_action,
        &format!("{ptr}/carrier"),
    )?;
    let c = carrier.dim();
    let q = crate::modrep::tensor_over(&a, &carrier, &carrier)
        .map_err(|e| SchemaError::new(ptr, e.to_string()))?
        .quotient
        .dim();
    let delta = matrix(f, &doc.delta, q, c, &format!("{ptr}/delta"))?;
    let eps = matrix(f, &doc.eps, a.dim(), c, &format!("{ptr}/eps"))?;
    make_coring(&a, &carrier, delta, eps).map_err(|e| SchemaError::new(ptr, e.to_string()))
}

fn build_graded(f: PrimeField, doc: &GradedDoc, ptr: &str) -> Res<GradedRing> {
    let group = Group::new(doc.group_table.clone())
        .map_err(|e| SchemaError::new(format!("{ptr}/group_table"), e.to_string()))?;
    let g = group.order();
    if doc.components.len() != g {
        return Err(SchemaError::new(
            format!("{ptr}/components"),
            format!("expected {g} component dimensions, found {}", doc.components.len()),
        ));
    }
    if doc.products.len() != g * g {
        return Err(SchemaError::new(
            format!("{ptr}/products"),
            format!("expected {} product maps, found {}", g * g, doc.products.len()),
        ));
    }
    let dims = &doc.components;
    let mut products = Vec::with_capacity(g * g);
    for x in 0..g {
        for y in 0..g {
            let i = x * g + y;
            let xy = group.mul(x, y);
            products.push(matrix(
                f,
                &doc.products[i],
                dims[xy],
                dims[x] * dims[y],
                &format!("{ptr}/products/{i}"),
            )?);
        }
    }
    make_graded_ring(&group, dims.clone(), products).map_err(|e| SchemaError::new(ptr, e.to_string()))
}

impl Document {
    pub fn build(&self) -> Res<Input> {
        let f = PrimeField::new(self.p).map_err(|e| SchemaError::new("/p", e.to_string()))?;
        let present = [
            self.algebra.is_some(),
            self.hom.is_some(),
            self.module.is_some(),
            self.bimodule.is_some(),
            self.coring.is_some(),
            self.graded.is_some(),
        ]
        .iter()
        .filter(|&&b| b)
        .count();
        if present != 1 {
            return Err(SchemaError::new(
                "",
                "exactly one of algebra, hom, module, bimodule, coring, graded is required",
            ));
        }
        if let Some(d) = &self.algebra {
            return build_algebra(f, d, "/algebra").map(Input::Algebra);
        }
        if let Some(d) = &self.hom {
            return build_hom(f, d, "/hom").map(Input::Hom);
        }
        if let Some(d) = &self.module {
            return build_module(f, d, "/module").map(Input::Module);
        }
        if let Some(d) = &self.bimodule {
            return build_bimodule(f, d, "/bimodule").map(Input::Bimodule);
        }
        if let Some(d) = &self.coring {
            return build_coring(f, d, "/coring").map(Input::Coring);
        }
        let d = self.graded.as_ref().expect("one payload present");
        build_graded(f, d, "/graded").map(Input::Graded)
    }

    /// Indented JSON with numeric rows kept on one line.
    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("documents serialize");
        let mut out = String::new();
        write_compact_rows(&v, 0, &mut out);
        out
    }
}

pub fn write_compact_rows(v: &serde_json::Value, depth: usize, out: &mut String) {
    use serde_json::Value;
    let pad = |d: usize| "  ".repeat(d);
    match v {
        Value::Array(xs) if xs.iter().all(Value::is_number) => {
            out.push_str(&serde_json::to_string(v).expect("numbers serialize"));
        }
        Value::Array(xs) if xs.is_empty() => out.push_str("[]"),
        Value::Array(xs) => {
            out.push_str("[\n");
            for (i, x) in xs.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                write_compact_rows(x, depth + 1, out);
                out.push_str(if i + 1 < xs.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push(']');
        }
        Value::Object(m) if m.is_empty() => out.push_str("{}"),
        Value::Object(m) => {
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                out.push_str(&serde_json::to_string(k).expect("keys serialize"));
                out.push_str(": ");
                write_compact_rows(x, depth + 1, out);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push('}');
        }
        other => out.push_str(&serde_json::to_string(other).expect("scalars serialize")),
    }
}

pub fn parse_input(text: &str) -> Res<Input> {
    parse_document(text)?.build()
}

fn int_matrix(m: &Mat) -> IntMatrix {
    (0..m.rows()).map(|i| m.row(i).iter().map(|&v| v as i64).collect()).collect()
}

pub fn algebra_doc(a: &Algebra) -> AlgebraDoc {
    let n = a.dim();
    let mul = (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a.constant(i, j, k) as i64).collect()).collect())
        .collect();
    AlgebraDoc {
        dim: n,
        mul,
        unit: a.unit().iter().map(|&v| v as i64).collect(),
    }
}

pub fn hom_document(h: &AlgebraHom) -> Document {
    Document {
        p: h.source.field().p() as u64,
        hom: Some(HomDoc {
            source: algebra_doc(&h.source),
            target: algebra_doc(&h.target),
            matrix: int_matrix(&h.matrix),
        }),
        ..Document::default()
    }
}

pub fn algebra_document(a: &Algebra) -> Document {
    Document {
        p: a.field().p() as u64,
        algebra: Some(algebra_doc(a)),
        ..Document::default()
    }
}

pub fn module_document(m: &LeftModule) -> Document {
    Document {
        p: m.field().p() as u64,
        module: Some(ModuleDoc {
            algebra: algebra_doc(m.algebra()),
            dim: m.dim(),
            action: m.action().iter().map(int_matrix).collect(),
        }),
        ..Document::default()
    }
}

pub fn bimodule_document(m: &Bimodule) -> Document {
    Document {
        p: m.field().p() as u64,
        bimodule: Some(BimoduleDoc {
            left: algebra_doc(m.left_algebra()),
            right: algebra_doc(m.right_algebra()),
            left_action: m.left_action().iter().map(int_matrix).collect(),
            right_action: m.right_action().iter().map(int_matrix).collect(),
        }),
        ..Document::default()
    }
}

pub fn coring_document(c: &Coring) -> Document {
    Document {
        p: c.base().field().p() as u64,
        coring: Some(CoringDoc {
            base: algebra_doc(c.base()),
            carrier: CarrierDoc {
                left_action: c.carrier().left_action().iter().map(int_matrix).collect(),
                right_action: c.carrier().right_action().iter().map(int_matrix).collect(),
            },
            delta: int_matrix(c.delta()),
            eps: int_matrix(c.eps()),
        }),
        ..Document::default()
    }
}

pub fn graded_document(r: &GradedRing) -> Document {
    Document {
        p: r.total().field().p() as u64,
        graded: Some(GradedDoc {
            group_table: r.group().table().to_vec(),
            components: r.dims().to_vec(),
            products: r.products().iter().map(int_matrix).collect(),
        }),
        ..Document::default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{group_algebra, matrix_algebra, truncated_polynomial, upper_triangular};
    use crate::coring::trivial_coring;
    use crate::graded::grade_by_basis;
    use crate::modrep::{regular_bimodule, regular_left};

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    #[test]
    fn round_trips() {
        let m2 = matrix_algebra(f5(), 2);
        let doc = algebra_document(&m2);
        match parse_input(&doc.to_json()).unwrap() {
            Input::Algebra(a) => assert_eq!(*a, *m2),
            other => panic!("{}", other.kind()),
        }
        let d = truncated_polynomial(f5(), 2);
        let docs = [
            hom_document(&AlgebraHom::unit_embedding(&d)),
            module_document(&regular_left(&d)),
            bimodule_document(&regular_bimodule(&d)),
            coring_document(&trivial_coring(&d).unwrap()),
            graded_document(
                &grade_by_basis(&upper_triangular(f5(), 2), &Group::cyclic(2), &[0, 1, 0]).unwrap(),
            ),
        ];
        let kinds = ["hom", "module", "bimodule", "coring", "graded"];
        for (doc, kind) in docs.iter().zip(kinds) {
            let text = doc.to_json();
            assert_eq!(parse_document(&text).unwrap(), *doc);
            assert_eq!(parse_input(&text).unwrap().kind(), kind);
        }
        let c2 = group_algebra(f5(), &Group::cyclic(2));
        assert!(matches!(parse_input(&algebra_document(&c2).to_json()), Ok(Input::Algebra(_))));
    }

    #[test]
    fn pointers() {
        let e = parse_document(r#"{"p": 5, "algebra": {"dim": 1, "mul": [[["x"]]], "unit": [1]}}"#).unwrap_err();
        assert_eq!(e.pointer, "/algebra/mul/0/0/0");
        let e = parse_input(r#"{"p": 5, "algebra": {"dim": 1, "mul": [[[7]]], "unit": [1]}}"#).unwrap_err();
        assert_eq!(e.pointer, "/algebra/mul/0/0/0");
        let e = parse_input(r#"{"p": 6, "algebra": {"dim": 1, "mul": [[[1]]], "unit": [1]}}"#).unwrap_err();
        assert_eq!(e.pointer, "/p");
        let e = parse_input(r#"{"p": 5}"#).unwrap_err();
        assert_eq!(e.pointer, "");
        let e = parse_input(r#"{"p": 5, "algebra": {"dim": 1, "mul": [[[1]]], "unit": [0]}}"#).unwrap_err();
        assert_eq!(e.pointer, "/algebra");
        let e = parse_document(r#"{"p": 5, "algebra": {"dim": 1, "mul": [[[1]]], "unit": [1], "extra": 0}}"#)
            .unwrap_err();
        assert_eq!(e.pointer, "/algebra/extra");
        let e = parse_input(
            r#"{"p": 5, "module": {"algebra": {"dim": 1, "mul": [[[1]]], "unit": [1]}, "dim": 2, "action": [[[1, 0]]]}}"#,
        )
        .unwrap_err();
        assert_eq!(e.pointer, "/module/action/0");
    }
}
