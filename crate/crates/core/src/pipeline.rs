//! One entry point per subcommand, shared by the CLI and the fixture battery.

use rand::Rng;

use crate::algebra::AlgebraHom;
use crate::coring::{is_qf_coring, Coring};
use crate::decomp::{decompose, Decomposition};
use crate::error::{Error, Result};
use crate::graded::{is_qf_restriction, GradedRing};
use crate::modrep::{regular_left, Bimodule, LeftModule};
use crate::report::{
    mat_to_json, ActionSet, Certificate, Check, DecompositionData, Report, SummandData, Verdict,
};
use crate::ringext::{
    compose_check, is_frobenius_extension, is_qf_extension, make_extension, pair_report,
    qf_pair_witness,
};
use crate::simdiv::{
    divides_certificate, divides_data, divides_modules, dual_sequence, is_frobenius_bimodule,
    is_qf_bimodule, similar_modules, similarity_certificate, similarity_certificate_modules,
};
use crate::verify::verify_certificate;

pub const ANCHOR_DECOMPOSE: &str = "Krull–Schmidt decomposition into indecomposable summands";
pub const ANCHOR_DIVIDES: &str = "M divides N: M is a direct summand of some N^n";
pub const ANCHOR_SIMILAR: &str = "similarity: mutual divisibility";
pub const ANCHOR_DUALS: &str = "iterated left and right duals";

/// Either side of a `similar` / `divides` query.
#[derive(Clone, Debug)]
pub enum Operand {
    Module(LeftModule),
    Bimodule(Bimodule),
}

impl Operand {
    pub fn carrier(&self) -> &LeftModule {
        match self {
            Operand::Module(m) => m,
            Operand::Bimodule(b) => b.carrier(),
        }
    }

    fn compatible(&self, other: &Operand) -> bool {
        match (self, other) {
            (Operand::Module(a), Operand::Module(b)) => {
                crate::algebra::same_algebra(a.algebra(), b.algebra())
            }
            (Operand::Bimodule(a), Operand::Bimodule(b)) => a.same_algebras(b),
            _ => false,
        }
    }
}

/// Re-verifies every embedded certificate. A failing certificate turns the
/// report inconsistent.
pub fn seal(mut report: Report) -> Report {
    let mut failures = Vec::new();
    for (c, cert) in report.certificates() {
        let res = verify_certificate(cert);
        if !res.ok {
            failures.push(format!("{}: {}", c.name, res.reasons.join("; ")));
        }
    }
    if !failures.is_empty() {
        report.verdict = Verdict::Inconsistent;
        report.checks.push(
            Check::new("certificates", "independent certificate verification", Verdict::No)
                .with_reason(failures.join(" | ")),
        );
    }
    report
}

pub fn check_bimodule<R: Rng + ?Sized>(m: &Bimodule, frobenius: bool, rng: &mut R) -> Result<Report> {
    let r = if frobenius {
        is_frobenius_bimodule(m, rng)?
    } else {
        is_qf_bimodule(m, rng)?
    };
    Ok(seal(r))
}

#[derive(Clone, Debug, Default)]
pub struct ExtensionOptions {
    pub frobenius: bool,
    /// Second extension `β` for the composition check.
    pub then: Option<AlgebraHom>,
    /// Add pair witnesses on the indecomposable summands of `S`.
    pub witness: bool,
}

pub fn check_extension<R: Rng + ?Sized>(h: &AlgebraHom, opts: &ExtensionOptions, rng: &mut R) -> Result<Report> {
    let e = make_extension(h)?;
    let mut report = if opts.frobenius {
        is_frobenius_extension(&e, rng)?
    } else if let Some(b) = &opts.then {
        compose_check(&e, &make_extension(b)?, rng)?
    } else {
        is_qf_extension(&e, rng)?
    };
    if opts.witness && report.verdict.is_yes() && opts.then.is_none() {
        let reg = regular_left(&h.target);
        let mut xs = vec![reg.clone()];
        for c in decompose(&reg, rng)?.classes {
            xs.push(c.representative);
        }
        for (i, x) in xs.iter().enumerate() {
            let w = qf_pair_witness(&e, x, rng)?;
            let mut c = pair_report(&w);
            c.name = format!("pair-witness-{i}");
            if !w.verified {
                report.verdict = Verdict::Inconsistent;
            }
            report.checks.push(c);
        }
    }
    Ok(seal(report))
}

pub fn check_coring<R: Rng + ?Sized>(c: &Coring, rng: &mut R) -> Result<Report> {
    Ok(seal(is_qf_coring(c, rng)?))
}

pub fn check_graded<R: Rng + ?Sized>(g: &GradedRing, rng: &mut R) -> Result<Report> {
    Ok(seal(is_qf_restriction(g, rng)?))
}

pub fn decomposition_certificate(d: &Decomposition) -> Certificate {
    let summands = d
        .classes
        .iter()
        .flat_map(|c| {
            c.copies.iter().map(move |x| SummandData {
                module: ActionSet::of_module(&c.representative),
                inj: mat_to_json(&x.inj),
                proj: mat_to_json(&x.proj),
            })
        })
        .collect();
    Certificate::Decomposition(DecompositionData {
        p: d.module.field().p(),
        module: ActionSet::of_module(&d.module),
        summands,
    })
}

pub fn decompose_report<R: Rng + ?Sized>(m: &LeftModule, rng: &mut R) -> Result<Report> {
    let d = decompose(m, rng)?;
    let sig = d
        .signature()
        .iter()
        .map(|(dim, mult)| format!("{dim}^{mult}"))
        .collect::<Vec<_>>()
        .join(" + ");
    let check = Check::new("decomposition", ANCHOR_DECOMPOSE, Verdict::Yes)
        .with_certificate(Some(decomposition_certificate(&d)))
        .with_reason(format!("summand dimensions {sig}"));
    Ok(seal(Report::new(Verdict::Yes, vec![check])))
}

pub fn divides_report<R: Rng + ?Sized>(m: &Operand, n: &Operand, rng: &mut R) -> Result<Report> {
    if !m.compatible(n) {
        return Err(Error::AlgebraMismatch);
    }
    let cert = divides_modules(m.carrier(), n.carrier(), rng)?;
    let check = match (&cert, m, n) {
        (Some(c), Operand::Bimodule(a), Operand::Bimodule(b)) => {
            Check::new("divides", ANCHOR_DIVIDES, Verdict::Yes).with_certificate(Some(divides_certificate(c, a, b)))
        }
        (Some(c), _, _) => Check::new("divides", ANCHOR_DIVIDES, Verdict::Yes).with_certificate(Some(
            Certificate::Divides(divides_data(
                c,
                ActionSet::of_module(m.carrier()),
                ActionSet::of_module(n.carrier()),
                m.carrier().field().p(),
            )),
        )),
        (None, _, _) => Check::new("divides", ANCHOR_DIVIDES, Verdict::No)
            .with_reason("an indecomposable summand of the first operand is missing from the second"),
    };
    let check = match &cert {
        Some(c) => check.with_reason(least_power(c.copies)),
        None => check,
    };
    Ok(seal(Report::new(check.verdict, vec![check])))
}

fn least_power(n: usize) -> String {
    format!("least power: {n} (summand multiplicities, rounded up)")
}

pub fn similar_report<R: Rng + ?Sized>(m: &Operand, n: &Operand, rng: &mut R) -> Result<Report> {
    if !m.compatible(n) {
        return Err(Error::AlgebraMismatch);
    }
    let cert = similar_modules(m.carrier(), n.carrier(), rng)?;
    let check = match (&cert, m, n) {
        (Some(c), Operand::Bimodule(a), Operand::Bimodule(b)) => {
            Check::new("similar", ANCHOR_SIMILAR, Verdict::Yes).with_certificate(Some(similarity_certificate(c, a, b)))
        }
        (Some(c), _, _) => Check::new("similar", ANCHOR_SIMILAR, Verdict::Yes)
            .with_certificate(Some(similarity_certificate_modules(c, m.carrier(), n.carrier()))),
        (None, _, _) => Check::new("similar", ANCHOR_SIMILAR, Verdict::No)
            .with_reason("the sets of indecomposable summand classes differ"),
    };
    let check = match &cert {
        Some(c) => check.with_reason(format!(
            "least powers: {} forward, {} backward",
            c.forward.copies, c.backward.copies
        )),
        None => check,
    };
    Ok(seal(Report::new(check.verdict, vec![check])))
}

/// Stages `-depth..=depth`; `No` when some restriction stops being projective.
pub fn dual_sequence_report(m: &Bimodule, depth: usize) -> Result<Report> {
    match dual_sequence(m, depth) {
        Ok(stages) => {
            let checks = stages
                .iter()
                .map(|s| {
                    Check::new(&format!("stage {}", s.index), ANCHOR_DUALS, Verdict::Yes)
                        .with_reason(format!("dimension {}", s.bimodule.dim()))
                })
                .collect();
            Ok(Report::new(Verdict::Yes, checks))
        }
        Err(Error::NotProjectiveAtStage(k)) => Ok(Report::new(
            Verdict::No,
            vec![Check::new(&format!("stage {k}"), ANCHOR_DUALS, Verdict::No)
                .with_reason(Error::NotProjectiveAtStage(k).to_string())],
        )),
        Err(e) => Err(e),
    }
}
