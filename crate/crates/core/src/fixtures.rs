//! The bundled corpus and the battery runner.

use std::sync::Arc;

use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    field_algebra, group_algebra, make_hom, matrix_algebra, product_algebra, truncated_polynomial,
    upper_triangular, Algebra, AlgebraHom, Group,
};
use crate::coring::{sweedler, trivial_coring};
use crate::decomp::WorkRng;
use crate::error::{Error, Result};
use crate::exactla::{Mat, PrimeField};
use crate::graded::grade_by_basis;
use crate::modrep::{hom_space, induced_left, regular_bimodule, regular_left, LeftModule};
use crate::pipeline::{check_bimodule, check_coring, check_extension, check_graded, ExtensionOptions};
use crate::report::{Report, Verdict};
use crate::ringext::make_extension;
use crate::schema::{
    bimodule_document, coring_document, graded_document, hom_document, Document, Input,
};
use crate::verify::verify_certificate;

pub const PRIMES: [u64; 3] = [5, 7, 11];

/// Bumped whenever a fixture document or expectation changes.
pub const CORPUS_VERSION: &str = "v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    CheckBimodule,
    CheckExtension,
    CheckFrobeniusExtension,
    CheckCoring,
    CheckGraded,
}

impl Task {
    pub fn subcommand(self) -> &'static str {
        match self {
            Task::CheckBimodule => "check-bimodule",
            Task::CheckExtension | Task::CheckFrobeniusExtension => "check-extension",
            Task::CheckCoring => "check-coring",
            Task::CheckGraded => "check-graded",
        }
    }

    pub fn flags(self) -> &'static [&'static str] {
        match self {
            Task::CheckFrobeniusExtension => &["--frobenius"],
            _ => &[],
        }
    }
}

/// How the expected verdict was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// Immediate from the construction.
    Construction,
    /// Recomputed by an independent oracle in the test suite, then frozen.
    Oracle,
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub task: Task,
    pub document: Document,
    pub expected: Verdict,
    pub basis: Basis,
    pub oracle: String,
}

/// One manifest line; the document lives in `<name>.json` next to it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestEntry {
    pub name: String,
    pub file: String,
    pub subcommand: String,
    pub flags: Vec<String>,
    pub expected: Verdict,
    pub basis: Basis,
    pub oracle: String,
}

impl Fixture {
    pub fn manifest_entry(&self) -> ManifestEntry {
        ManifestEntry {
            name: self.name.clone(),
            file: format!("{}.json", self.name),
            subcommand: self.task.subcommand().into(),
            flags: self.task.flags().iter().map(|s| s.to_string()).collect(),
            expected: self.expected,
            basis: self.basis,
            oracle: self.oracle.clone(),
        }
    }
}

/// Named algebras of the corpus.
pub fn algebras(f: PrimeField) -> Vec<(&'static str, Arc<Algebra>)> {
    let fa = field_algebra(f);
    vec![
        ("f", fa.clone()),
        ("c2", group_algebra(f, &Group::cyclic(2))),
        ("c3", group_algebra(f, &Group::cyclic(3))),
        ("x2", truncated_polynomial(f, 2)),
        ("m2", matrix_algebra(f, 2)),
        ("fxf", product_algebra(&fa, &fa).expect("same field")),
        ("t2", upper_triangular(f, 2)),
    ]
}

fn hom(f: PrimeField, src: &Arc<Algebra>, tgt: &Arc<Algebra>, rows: &[Vec<i64>]) -> AlgebraHom {
    let m = Mat::from_rows(f, rows).expect("well-formed matrix");
    make_hom(src, tgt, m).expect("corpus map is an algebra map")
}

/// Named extensions with their expected quasi-Frobenius verdicts.
pub fn extensions(f: PrimeField) -> Vec<(String, AlgebraHom, Verdict, &'static str)> {
    let algs = algebras(f);
    let get = |n: &str| algs.iter().find(|(k, _)| *k == n).expect("named algebra").1.clone();
    let mut out = Vec::new();
    for (name, a) in algs.iter().skip(1) {
        let qf = *name != "t2";
        let why = if qf {
            "unit embedding into a self-injective algebra; trace-ideal similarity oracle"
        } else {
            "T2 is not self-injective; trace-ideal similarity oracle"
        };
        out.push((format!("to_{name}"), AlgebraHom::unit_embedding(a), Verdict::from_bool(qf), why));
    }
    let (x2, fa, fxf, t2, c2) = (get("x2"), get("f"), get("fxf"), get("t2"), get("c2"));
    out.push((
        "x2_onto_f".into(),
        hom(f, &x2, &fa, &[vec![1, 0]]),
        Verdict::No,
        "F is not projective over F[x]/(x^2); exhaustive section search",
    ));
    out.push((
        "t2_onto_fxf".into(),
        hom(f, &t2, &fxf, &[vec![1, 0, 0], vec![0, 0, 1]]),
        Verdict::No,
        "F x F is not projective over T2; exhaustive section search",
    ));
    out.push((
        "fxf_onto_f".into(),
        hom(f, &fxf, &fa, &[vec![1, 0]]),
        Verdict::Yes,
        "projection onto a block; trace-ideal similarity oracle",
    ));
    let c2c2 = product_algebra(&c2, &c2).expect("same field");
    out.push((
        "c2_diag".into(),
        hom(f, &c2, &c2c2, &[vec![1, 0], vec![0, 1], vec![1, 0], vec![0, 1]]),
        Verdict::Yes,
        "diagonal of a semisimple algebra; trace-ideal similarity oracle",
    ));
    let x2f = product_algebra(&x2, &fa).expect("same field");
    out.push((
        "x2_diag".into(),
        hom(f, &x2, &x2f, &[vec![1, 0], vec![0, 1], vec![1, 0]]),
        Verdict::No,
        "the factor F is not projective over F[x]/(x^2); trace-ideal oracle",
    ));
    out
}

/// Sweedler corings whose verdict differs from the extension's, as found by
/// the coring oracle.
fn sweedler_expected(ext: &str, ext_verdict: Verdict) -> (Verdict, Basis, &'static str) {
    match ext {
        "x2_onto_f" | "t2_onto_fxf" => (
            Verdict::Yes,
            Basis::Construction,
            "S ⊗_R S = S for a surjection, so the coring is trivial",
        ),
        _ if ext_verdict.is_yes() => (
            Verdict::Yes,
            Basis::Oracle,
            "quasi-Frobenius extension; convolution rings and trace-ideal oracle",
        ),
        _ => (
            Verdict::No,
            Basis::Oracle,
            "convolution rings rebuilt from the definition; trace-ideal oracle",
        ),
    }
}

/// `F[Q]/J^L` for the cyclic quiver on two vertices. Basis `(v, l)`: the path
/// of length `l < L` starting at `v`, indexed `v*L + l`.
pub fn nakayama_base(f: PrimeField, loewy: usize) -> Result<Arc<Algebra>> {
    let n = 2 * loewy;
    let idx = |v: usize, l: usize| v * loewy + l;
    let mut mul = vec![0u32; n * n * n];
    for u in 0..2 {
        for l1 in 0..loewy {
            for v in 0..2 {
                for l2 in 0..loewy {
                    // (u,l1)·(v,l2): first (v,l2), then (u,l1).
                    if (v + l2) % 2 == u && l1 + l2 < loewy {
                        mul[(idx(u, l1) * n + idx(v, l2)) * n + idx(v, l1 + l2)] = 1;
                    }
                }
            }
        }
    }
    let mut unit = vec![0u32; n];
    unit[idx(0, 0)] = 1;
    unit[idx(1, 0)] = 1;
    Algebra::new(f, n, mul, unit)
}

fn projective_cover(b: &Arc<Algebra>, loewy: usize, v: usize) -> LeftModule {
    let f = b.field();
    let reg = regular_left(b);
    let cols: Vec<usize> = (0..loewy).map(|l| v * loewy + l).collect();
    let inj = Mat::identity(f, b.dim()).select_cols(&cols);
    let proj = Mat::identity(f, b.dim()).select_rows(&cols);
    reg.summand(&inj, &proj)
}

/// `End_B(P_0^a ⊕ P_1^b)` over the Nakayama base of Loewy length `loewy`.
pub fn nakayama_endomorphism_algebra(f: PrimeField, loewy: usize, a: usize, b: usize) -> Result<Arc<Algebra>> {
    let base = nakayama_base(f, loewy)?;
    let p0 = projective_cover(&base, loewy, 0);
    let p1 = projective_cover(&base, loewy, 1);
    let mut p = LeftModule::zero(&base);
    for _ in 0..a {
        p = p.direct_sum(&p0)?;
    }
    for _ in 0..b {
        p = p.direct_sum(&p1)?;
    }
    let h = hom_space(&p, &p)?;
    let n = h.dim();
    let mut mul = vec![0u32; n * n * n];
    for (i, x) in h.basis().iter().enumerate() {
        for (j, y) in h.basis().iter().enumerate() {
            let c = h
                .coordinates(&x.mul(y))
                .ok_or_else(|| Error::Inconsistent("composite leaves the endomorphism ring".into()))?;
            mul[(i * n + j) * n..(i * n + j + 1) * n].copy_from_slice(&c);
        }
    }
    let unit = h
        .coordinates(&Mat::identity(f, p.dim()))
        .ok_or_else(|| Error::Inconsistent("identity missing from the endomorphism ring".into()))?;
    Algebra::new(f, n, mul, unit)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NakayamaHit {
    pub loewy: usize,
    pub a: usize,
    pub b: usize,
    pub dim: usize,
    pub qf: Verdict,
    pub frobenius: Verdict,
}

/// Exhaustive scan of `End_B(P_0^a ⊕ P_1^b)` for `2 <= L <= max_loewy` and
/// `1 <= a, b <= max_mult`, keeping algebras that are quasi-Frobenius but not
/// Frobenius over the ground field.
pub fn search_qf_not_frobenius(f: PrimeField, max_loewy: usize, max_mult: usize, seed: u64) -> Result<Vec<NakayamaHit>> {
    let mut hits = Vec::new();
    for loewy in 2..=max_loewy {
        for a in 1..=max_mult {
            for b in 1..=max_mult {
                let alg = nakayama_endomorphism_algebra(f, loewy, a, b)?;
                let e = make_extension(&AlgebraHom::unit_embedding(&alg))?;
                let mut rng = WorkRng::seed_from_u64(seed);
                let qf = crate::ringext::is_qf_extension(&e, &mut rng)?.verdict;
                let frobenius = crate::ringext::is_frobenius_extension(&e, &mut rng)?.verdict;
                if qf.is_yes() && !frobenius.is_yes() {
                    hits.push(NakayamaHit {
                        loewy,
                        a,
                        b,
                        dim: alg.dim(),
                        qf,
                        frobenius,
                    });
                }
            }
        }
    }
    Ok(hits)
}

fn fixture(name: String, task: Task, document: Document, expected: Verdict, basis: Basis, oracle: &str) -> Fixture {
    Fixture {
        name,
        task,
        document,
        expected,
        basis,
        oracle: oracle.into(),
    }
}

/// The full corpus in a fixed order.
pub fn corpus() -> Vec<Fixture> {
    let mut out = Vec::new();
    for p in PRIMES {
        let f = PrimeField::new(p).expect("corpus primes are valid");
        let tag = format!("f{p}");
        for (name, a) in algebras(f) {
            out.push(fixture(
                format!("{tag}_regular_{name}"),
                Task::CheckBimodule,
                bimodule_document(&regular_bimodule(&a)),
                Verdict::Yes,
                Basis::Construction,
                "both duals of _A A_A are A itself",
            ));
        }
        for (name, a) in algebras(f) {
            let qf = name != "t2";
            out.push(fixture(
                format!("{tag}_field_{name}"),
                Task::CheckBimodule,
                bimodule_document(&induced_left(&AlgebraHom::unit_embedding(&a))),
                Verdict::from_bool(qf),
                Basis::Oracle,
                "_F A_A is quasi-Frobenius iff A is self-injective; trace-ideal oracle",
            ));
        }
        for (name, a) in algebras(f) {
            out.push(fixture(
                format!("{tag}_trivial_{name}"),
                Task::CheckCoring,
                coring_document(&trivial_coring(&a).expect("trivial coring")),
                Verdict::Yes,
                Basis::Construction,
                "trivial coring: C = A, all duals are A itself",
            ));
        }
        for (name, h, verdict, why) in extensions(f) {
            out.push(fixture(
                format!("{tag}_{name}"),
                Task::CheckExtension,
                hom_document(&h),
                verdict,
                Basis::Oracle,
                why,
            ));
            let (sv, sb, swhy) = sweedler_expected(&name, verdict);
            let e = make_extension(&h).expect("corpus extension");
            out.push(fixture(
                format!("{tag}_sweedler_{name}"),
                Task::CheckCoring,
                coring_document(&sweedler(&e).expect("Sweedler coring")),
                sv,
                sb,
                swhy,
            ));
        }
        let c2 = Group::cyclic(2);
        out.push(fixture(
            format!("{tag}_graded_c2"),
            Task::CheckGraded,
            graded_document(&grade_by_basis(&group_algebra(f, &c2), &c2, &[0, 1]).expect("C2 grading")),
            Verdict::Yes,
            Basis::Oracle,
            "strongly graded group algebra; exhaustive split-map search",
        ));
        out.push(fixture(
            format!("{tag}_graded_t2"),
            Task::CheckGraded,
            graded_document(&grade_by_basis(&upper_triangular(f, 2), &c2, &[0, 1, 0]).expect("T2 grading")),
            Verdict::No,
            Basis::Oracle,
            "R and Coind(R_e) compared by exhaustive split-map search",
        ));
    }
    let f = PrimeField::new(5).expect("valid prime");
    let nak = nakayama_endomorphism_algebra(f, 2, 2, 1).expect("Nakayama endomorphism algebra");
    let h = AlgebraHom::unit_embedding(&nak);
    out.push(fixture(
        "f5_nakayama_qf".into(),
        Task::CheckExtension,
        hom_document(&h),
        Verdict::Yes,
        Basis::Oracle,
        "End_B(P0^2 + P1), B self-injective Nakayama of Loewy length 2: Morita equivalent to B",
    ));
    out.push(fixture(
        "f5_nakayama_frobenius".into(),
        Task::CheckFrobeniusExtension,
        hom_document(&h),
        Verdict::No,
        Basis::Oracle,
        "Nakayama permutation swaps P0 and P1 with multiplicities 2 and 1",
    ));
    out
}

pub fn manifest(fixtures: &[Fixture]) -> Vec<ManifestEntry> {
    fixtures.iter().map(Fixture::manifest_entry).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub version: String,
    pub fixtures: Vec<ManifestEntry>,
}

/// File name and contents of every file in the versioned fixture directory.
pub fn render(fixtures: &[Fixture]) -> Vec<(String, String)> {
    let mut files: Vec<(String, String)> = fixtures
        .iter()
        .map(|fx| (format!("{}.json", fx.name), fx.document.to_json() + "\n"))
        .collect();
    let m = Manifest {
        version: CORPUS_VERSION.into(),
        fixtures: manifest(fixtures),
    };
    files.push((
        "manifest.json".into(),
        serde_json::to_string_pretty(&m).expect("manifest serializes") + "\n",
    ));
    files
}

/// Runs one fixture through its subcommand.
pub fn run_fixture(fx: &Fixture, seed: u64) -> Result<Report> {
    let input = fx.document.build().map_err(|e| Error::Precondition(e.to_string()))?;
    let mut rng = WorkRng::seed_from_u64(seed);
    match (fx.task, input) {
        (Task::CheckBimodule, Input::Bimodule(m)) => check_bimodule(&m, false, &mut rng),
        (Task::CheckExtension, Input::Hom(h)) => check_extension(&h, &ExtensionOptions::default(), &mut rng),
        (Task::CheckFrobeniusExtension, Input::Hom(h)) => {
            let opts = ExtensionOptions {
                frobenius: true,
                ..Default::default()
            };
            check_extension(&h, &opts, &mut rng)
        }
        (Task::CheckCoring, Input::Coring(c)) => check_coring(&c, &mut rng),
        (Task::CheckGraded, Input::Graded(g)) => check_graded(&g, &mut rng),
        (t, i) => Err(Error::Precondition(format!(
            "{} expects a different document than {}",
            t.subcommand(),
            i.kind()
        ))),
    }
}

#[derive(Clone, Debug)]
pub struct BatteryItem {
    pub name: String,
    pub expected: Verdict,
    pub report: std::result::Result<Report, String>,
    pub certificates_ok: bool,
    pub pass: bool,
}

pub fn run_item(fx: &Fixture, seed: u64) -> BatteryItem {
    let report = run_fixture(fx, seed).map_err(|e| e.to_string());
    let certificates_ok = report
        .as_ref()
        .map(|r| r.certificates().all(|(_, c)| verify_certificate(c).ok))
        .unwrap_or(false);
    let pass = certificates_ok && matches!(&report, Ok(r) if r.verdict == fx.expected);
    BatteryItem {
        name: fx.name.clone(),
        expected: fx.expected,
        report,
        certificates_ok,
        pass,
    }
}

/// Every fixture under one seed, in corpus order.
pub fn battery(fixtures: &[Fixture], seed: u64) -> Vec<BatteryItem> {
    crate::par::map_items(fixtures, |fx| run_item(fx, seed))
}
