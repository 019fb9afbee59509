//! Batch verification jobs: every computation of the build is reproducible
//! as a named, seeded, tolerance-controlled job emitting a JSON report.
//!
//! Reports are deterministic for a fixed (job, seed, tolerance, version):
//! all sampling flows through SplitMix64 (pinned by name and reference
//! vector in the report itself), collections are ordered, and reruns with
//! the same configuration produce byte-identical files.

use crate::chars::{enumerate, CharacteristicMatrix, ParityFilter};
use crate::cocycle::{kappa_pow2, kappa_pow4, verify_transformation, verify_translation};
use crate::error::{Error, Result};
use crate::genus2;
use crate::genus3;
use crate::group::GroupDescriptor;
use crate::intmat::IntMat;
use crate::quotient::{
    fricke_iso, match_subgroups, phi_iso, structure_report, verify_kernel_normality,
    FiniteQuotient,
};
use crate::rng::SplitMix64;
use crate::symplectic::SymplecticMatrix;
use crate::theta::{
    verify_addition_formula, verify_riemann_product, verify_riemann_squares,
    EvalOptions, SiegelPoint,
};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;
use std::fmt;
use std::path::{Path, PathBuf};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum JobName {
    Census,
    Transformation,
    Riemann,
    Quotients,
    GModule,
    Fricke,
    Fibers,
    Classify,
    R16,
    QInvariance,
    All,
}

impl JobName {
    pub fn parse(s: &str) -> Result<JobName> {
        Ok(match s {
            "census" => JobName::Census,
            "transformation" => JobName::Transformation,
            "riemann" => JobName::Riemann,
            "quotients" => JobName::Quotients,
            "gmodule" => JobName::GModule,
            "fricke" => JobName::Fricke,
            "fibers" => JobName::Fibers,
            "classify" => JobName::Classify,
            "r16" => JobName::R16,
            "q-invariance" => JobName::QInvariance,
            "all" => JobName::All,
            other => return Err(Error::UnknownJob(other.to_string())),
        })
    }

    pub fn all_individual() -> &'static [JobName] {
        &[
            JobName::Census,
            JobName::Transformation,
            JobName::Riemann,
            JobName::Quotients,
            JobName::GModule,
            JobName::Fricke,
            JobName::Fibers,
            JobName::Classify,
            JobName::R16,
            JobName::QInvariance,
        ]
    }
}

impl fmt::Display for JobName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            JobName::Census => "census",
            JobName::Transformation => "transformation",
            JobName::Riemann => "riemann",
            JobName::Quotients => "quotients",
            JobName::GModule => "gmodule",
            JobName::Fricke => "fricke",
            JobName::Fibers => "fibers",
            JobName::Classify => "classify",
            JobName::R16 => "r16",
            JobName::QInvariance => "q-invariance",
            JobName::All => "all",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Debug)]
pub struct JobConfig {
    pub job: JobName,
    pub seed: u64,
    pub tol: f64,
    pub samples: Option<usize>,
    pub genus: Option<usize>,
    pub out: Option<PathBuf>,
}

impl JobConfig {
    pub fn new(job: JobName) -> JobConfig {
        JobConfig {
            job,
            seed: 1,
            tol: 1e-8,
            samples: None,
            genus: None,
            out: None,
        }
    }

    fn opts(&self) -> EvalOptions {
        // the engine works at a tighter tolerance than the checks assert
        EvalOptions::with_tol((self.tol * 1e-4).min(1e-12))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    pub details: serde_json::Value,
}

impl CheckResult {
    fn pass(name: &str) -> CheckResult {
        CheckResult {
            name: name.into(),
            status: "pass".into(),
            residual: None,
            threshold: None,
            details: json!({}),
        }
    }

    fn residual(name: &str, residual: f64, threshold: f64) -> CheckResult {
        CheckResult {
            name: name.into(),
            status: if residual < threshold { "pass" } else { "fail" }.into(),
            residual: Some(residual),
            threshold: Some(threshold),
            details: json!({}),
        }
    }

    fn boolean(name: &str, ok: bool) -> CheckResult {
        CheckResult {
            name: name.into(),
            status: if ok { "pass" } else { "fail" }.into(),
            residual: None,
            threshold: None,
            details: json!({}),
        }
    }

    fn with_details(mut self, details: serde_json::Value) -> CheckResult {
        self.details = details;
        self
    }

    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub job: String,
    pub seed: u64,
    pub tolerance: f64,
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub genus: Option<usize>,
    pub prng: serde_json::Value,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

fn prng_schema() -> serde_json::Value {
    json!({
        "name": "splitmix64",
        "reference_seed": 0,
        "reference_outputs": [
            "0xe220a8397b1dcdaf",
            "0x6e789e6aa1b965f4",
            "0x06c45d188009454f"
        ]
    })
}

fn finish(cfg: &JobConfig, checks: Vec<CheckResult>) -> Report {
    let passed = checks.iter().all(|c| c.passed());
    Report {
        schema_version: SCHEMA_VERSION,
        job: cfg.job.to_string(),
        seed: cfg.seed,
        tolerance: cfg.tol,
        samples: cfg.samples,
        genus: cfg.genus,
        prng: prng_schema(),
        checks,
        passed,
    }
}

/// Runs a job and, if configured, writes the report to `out`.
pub fn run(cfg: &JobConfig) -> Result<Report> {
    let report = match cfg.job {
        JobName::Census => run_census(cfg),
        JobName::Transformation => run_transformation(cfg),
        JobName::Riemann => run_riemann(cfg),
        JobName::Quotients => run_quotients(cfg),
        JobName::GModule => run_gmodule(cfg),
        JobName::Fricke => run_fricke(cfg),
        JobName::Fibers => run_fibers(cfg),
        JobName::Classify => run_classify(cfg),
        JobName::R16 => run_r16(cfg),
        JobName::QInvariance => run_q_invariance(cfg),
        JobName::All => run_all(cfg),
    }?;
    if let Some(path) = &cfg.out {
        write_json(path, &report)?;
    }
    Ok(report)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

fn run_all(cfg: &JobConfig) -> Result<Report> {
    let mut checks = Vec::new();
    for &job in JobName::all_individual() {
        let sub = JobConfig {
            job,
            out: None,
            ..cfg.clone()
        };
        let rep = run(&sub)?;
        for mut c in rep.checks {
            c.name = format!("{}/{}", job, c.name);
            checks.push(c);
        }
    }
    Ok(finish(cfg, checks))
}

fn run_census(cfg: &JobConfig) -> Result<Report> {
    let mut checks = Vec::new();
    let mut counts = serde_json::Map::new();
    let mut ok = true;
    for g in 1..=4usize {
        let even = enumerate(g, ParityFilter::Even).len();
        let odd = enumerate(g, ParityFilter::Odd).len();
        let p = 1usize << (g - 1);
        let want_even = p * ((1 << g) + 1);
        let want_odd = p * ((1 << g) - 1);
        ok &= even == want_even && odd == want_odd;
        counts.insert(format!("g{g}"), json!({"even": even, "odd": odd}));
    }
    checks.push(
        CheckResult::boolean("census_closed_form", ok)
            .with_details(serde_json::Value::Object(counts)),
    );
    Ok(finish(cfg, checks))
}

/// Samples gamma as a word of length <= 12 and tau with the image point
/// well-conditioned; ill-conditioned draws are skipped and counted.
fn conditioned_pairs(
    desc: &GroupDescriptor,
    rng: &mut SplitMix64,
    count: usize,
    max_word: usize,
) -> Result<(Vec<(SymplecticMatrix, SiegelPoint)>, usize)> {
    let mut out = Vec::with_capacity(count);
    let mut skipped = 0usize;
    let mut guard = 0usize;
    while out.len() < count {
        guard += 1;
        if guard > 200 * count {
            return Err(Error::IllConditioned(
                "sampling failed to find enough well-conditioned pairs".into(),
            ));
        }
        let w = rng.below(max_word + 1);
        let gamma = desc.random_element_with(rng, w)?;
        let tau = SiegelPoint::random(desc.genus, rng);
        match tau.apply(&gamma) {
            Ok(gt) if gt.lambda_min() > 0.02 => out.push((gamma, tau)),
            _ => skipped += 1,
        }
    }
    Ok((out, skipped))
}

fn run_transformation(cfg: &JobConfig) -> Result<Report> {
    let genus = cfg.genus.unwrap_or(2);
    let samples = cfg.samples.unwrap_or(100);
    let opts = cfg.opts();
    let mut rng = SplitMix64::new(cfg.seed);
    let mut checks = Vec::new();

    let sp = GroupDescriptor::sp(genus);
    let (pairs, skipped) = conditioned_pairs(&sp, &mut rng, samples, 12)?;
    let mut max_rel: f64 = 0.0;
    let mut max_k8: f64 = 0.0;
    let mut k4_bad = 0usize;
    let mut failures: Vec<serde_json::Value> = Vec::new();
    for (gamma, tau) in &pairs {
        let rep = match verify_transformation(gamma, tau, opts) {
            Ok(r) => r,
            Err(Error::RadiusExceeded { .. }) | Err(Error::IllConditioned(_)) => continue,
            Err(e) => return Err(e),
        };
        let rel = rep.relative();
        if rel >= cfg.tol {
            failures.push(json!({
                "matrix": gamma.to_json().ok().map(|m| m.rows),
                "residual": rel,
            }));
        }
        max_rel = max_rel.max(rel);
        max_k8 = max_k8.max((rep.kappa.powi(8) - Complex64::new(1.0, 0.0)).norm());
        let k4 = kappa_pow4(gamma) as f64;
        if (rep.kappa.powi(4) - Complex64::new(k4, 0.0)).norm() > 1e-6 {
            k4_bad += 1;
        }
    }
    checks.push(
        CheckResult::residual("transformation_residual", max_rel, cfg.tol).with_details(json!({
            "samples": pairs.len(),
            "skipped_ill_conditioned": skipped,
            "failures": failures,
        })),
    );
    checks.push(CheckResult::residual("kappa8_defect", max_k8, 1e-6));
    checks.push(CheckResult::boolean("kappa4_closed_form", k4_bad == 0));

    // kappa^2 on Gamma_g(2) samples
    let d2 = GroupDescriptor::principal(2, genus);
    let (pairs2, _) = conditioned_pairs(&d2, &mut rng, samples, 12)?;
    let mut k2_bad = 0usize;
    for (gamma, tau) in &pairs2 {
        let rep = match verify_transformation(gamma, tau, opts) {
            Ok(r) => r,
            Err(Error::RadiusExceeded { .. }) | Err(Error::IllConditioned(_)) => continue,
            Err(e) => return Err(e),
        };
        let want = kappa_pow2(gamma)? as f64;
        if (rep.kappa.powi(2) - Complex64::new(want, 0.0)).norm() > 1e-6 {
            k2_bad += 1;
        }
    }
    checks.push(
        CheckResult::boolean("kappa2_closed_form", k2_bad == 0)
            .with_details(json!({"samples": pairs2.len()})),
    );

    // gamma_S translations against the closed form
    let mut worst_tr: f64 = 0.0;
    for _ in 0..5 {
        let tau = SiegelPoint::random(genus, &mut rng);
        let entries: Vec<i64> = (0..genus * (genus + 1) / 2)
            .map(|_| rng.below(5) as i64 - 2)
            .collect();
        let s = IntMat::symmetric_from_upper(genus, &entries);
        worst_tr = worst_tr.max(verify_translation(&s, &tau, opts)?);
    }
    checks.push(CheckResult::residual(
        "translation_closed_form",
        worst_tr,
        cfg.tol,
    ));
    Ok(finish(cfg, checks))
}

fn run_riemann(cfg: &JobConfig) -> Result<Report> {
    let samples = cfg.samples.unwrap_or(10);
    let opts = cfg.opts();
    let mut rng = SplitMix64::new(cfg.seed);
    let mut checks = Vec::new();
    for g in [2usize, 3] {
        let mut worst_prod: f64 = 0.0;
        let mut worst_sq: f64 = 0.0;
        for _ in 0..samples {
            let tau = SiegelPoint::random(g, &mut rng);
            worst_prod = worst_prod.max(verify_riemann_product(&tau, opts)?);
            worst_sq = worst_sq.max(verify_riemann_squares(&tau, opts)?);
        }
        checks.push(CheckResult::residual(
            &format!("riemann_product_g{g}"),
            worst_prod,
            cfg.tol,
        ));
        checks.push(CheckResult::residual(
            &format!("riemann_squares_g{g}"),
            worst_sq,
            cfg.tol,
        ));
    }
    let mut worst_add: f64 = 0.0;
    for _ in 0..samples {
        let tau = SiegelPoint::random(2, &mut rng);
        let zw: Vec<Complex64> = (0..4)
            .map(|_| Complex64::new(0.3 * rng.symmetric(), 0.2 * rng.symmetric()))
            .collect();
        worst_add = worst_add.max(verify_addition_formula(
            &tau,
            &zw[0..2],
            &zw[2..4],
            opts,
        )?);
    }
    checks.push(CheckResult::residual(
        "addition_formula_g2",
        worst_add,
        cfg.tol,
    ));
    Ok(finish(cfg, checks))
}

fn g_quotient() -> Result<FiniteQuotient> {
    FiniteQuotient::enumerate(
        GroupDescriptor::gamma0(2, 2),
        GroupDescriptor::igusa_upper(2),
    )
}

fn g_codomain() -> Result<FiniteQuotient> {
    FiniteQuotient::enumerate(GroupDescriptor::gamma00(2), GroupDescriptor::igusa(2))
}

fn run_quotients(cfg: &JobConfig) -> Result<Report> {
    let mut checks = Vec::new();
    let dom = g_quotient()?;
    checks.push(
        CheckResult::boolean("index_96", dom.order() == 96)
            .with_details(json!({"order": dom.order()})),
    );
    let f2q = FiniteQuotient::enumerate(
        GroupDescriptor::igusa_upper(2),
        GroupDescriptor::igusa(2),
    )?;
    checks.push(
        CheckResult::boolean(
            "f2_cubed",
            f2q.order() == 8 && f2q.is_abelian() && f2q.exponent() == 2,
        )
        .with_details(json!({"order": f2q.order()})),
    );
    let q64 = genus3::phi_sum_quotient()?;
    // every epsilon-word lands in its own class
    let bs = genus3::b_matrices();
    let mut word_classes = std::collections::BTreeSet::new();
    for mask in 0..64usize {
        let mut b = IntMat::zeros(3, 3);
        for (i, bi) in bs.iter().enumerate() {
            if (mask >> i) & 1 == 1 {
                b = &b + bi;
            }
        }
        let m = SymplecticMatrix::gamma_s(&b).unwrap();
        word_classes.insert(q64.class_of(&m)?);
    }
    checks.push(
        CheckResult::boolean(
            "genus3_quotient_64",
            q64.order() == 64 && word_classes.len() == 64,
        )
        .with_details(json!({"order": q64.order(), "distinct_words": word_classes.len()})),
    );
    let st = structure_report(&dom, 16);
    let structure_ok = st
        .normal_subgroup
        .as_ref()
        .map(|n| {
            n.order == 16 && n.exponent == 2 && n.quotient_order == 6 && !n.quotient_abelian
        })
        .unwrap_or(false);
    checks.push(
        CheckResult::boolean("g_structure_f2_4_by_s3", structure_ok)
            .with_details(serde_json::to_value(&st)?),
    );
    checks.push(CheckResult::boolean(
        "kernel_normality_sampled",
        verify_kernel_normality(&dom, 25, cfg.seed)?,
    ));

    // the isomorphism phi and the matched subgroup pairs
    let cod = g_codomain()?;
    checks.push(CheckResult::boolean("codomain_order_96", cod.order() == 96));
    let map = phi_iso(&dom, &cod)?; // multiplicativity and bijectivity checked inside
    checks.push(CheckResult::pass("phi_multiplicative_bijective"));
    let img: Vec<u16> = dom
        .generator_classes()
        .iter()
        .map(|&c| map.apply(c))
        .collect();
    checks.push(CheckResult::boolean(
        "phi_generator_images_generate",
        cod.subgroup_closure(&img).len() == cod.order(),
    ));
    let b1 = IntMat::symmetric_from_upper(2, &[2, 0, 0]);
    let b2 = IntMat::symmetric_from_upper(2, &[0, 0, 2]);
    let gens = vec![
        SymplecticMatrix::gamma_s(&b1).unwrap(),
        SymplecticMatrix::gamma_s(&b2).unwrap(),
        SymplecticMatrix::gamma_s_lower(&b1).unwrap(),
        SymplecticMatrix::gamma_s_lower(&b2).unwrap(),
    ];
    let matched = match_subgroups(&dom, &cod, &map, &gens)?;
    let gopel_ok = matched.h_order == 16
        && matched.gamma == Some(GroupDescriptor::principal(2, 2))
        && matched.gamma_prime == Some(GroupDescriptor::gamma1(2))
        && matched.fingerprints_equal;
    checks.push(
        CheckResult::boolean("matched_pair_gamma2_gamma1", gopel_ok).with_details(json!({
            "h_order": matched.h_order,
            "gamma": matched.gamma.map(|d| d.to_json().group),
            "gamma_prime": matched.gamma_prime.map(|d| d.to_json().group),
        })),
    );
    Ok(finish(cfg, checks))
}

fn run_gmodule(cfg: &JobConfig) -> Result<Report> {
    let samples = cfg.samples.unwrap_or(3);
    let rep = genus2::verify_g_module(None, samples, cfg.seed, cfg.opts())?;
    let checks = vec![
        CheckResult::boolean("projective_homomorphism", rep.projective_homomorphism),
        CheckResult::boolean("composition_defects_are_signs", rep.defects_are_signs),
        CheckResult::boolean(
            "defects_match_across_phi",
            rep.defects_match_across_phi,
        ),
        CheckResult::boolean("exact_match_all_classes", rep.exact_match_all_classes)
            .with_details(json!({"classes": rep.classes_checked})),
        CheckResult::residual("slash_residual_f", rep.max_residual_f, cfg.tol),
        CheckResult::residual("slash_residual_fsq", rep.max_residual_fsq, cfg.tol),
    ];
    Ok(finish(cfg, checks))
}

fn run_fricke(cfg: &JobConfig) -> Result<Report> {
    let mut rng = SplitMix64::new(cfg.seed);
    let mut checks = Vec::new();
    // conjugation fixes Gamma_2^2(2,4) and Gamma_0(2); swaps Gamma_0^0(2) and Gamma_0(4)
    let up = GroupDescriptor::igusa_upper(2);
    let g0 = GroupDescriptor::gamma0(2, 2);
    let g00 = GroupDescriptor::gamma00(2);
    let g04 = GroupDescriptor::gamma0(4, 2);
    let mut fixed = true;
    for d in [&up, &g0] {
        for gen in d.generators()? {
            fixed &= d.member(&gen.fricke_conjugate()?)?;
        }
        for _ in 0..100 {
            let m = d.random_element_with(&mut rng, 8)?;
            fixed &= d.member(&m.fricke_conjugate()?)?;
        }
    }
    checks.push(CheckResult::boolean("fixed_groups_under_fricke", fixed));
    let mut swapped = true;
    for _ in 0..100 {
        let m = g00.random_element_with(&mut rng, 8)?;
        swapped &= g04.member(&m.fricke_conjugate()?)?;
        let m = g04.random_element_with(&mut rng, 8)?;
        swapped &= g00.member(&m.fricke_conjugate()?)?;
    }
    checks.push(CheckResult::boolean("gamma00_fricke_is_gamma04", swapped));
    // involution
    let mut involution = true;
    for _ in 0..50 {
        let m = g0.random_element_with(&mut rng, 8)?;
        involution &= m.fricke_conjugate()?.fricke_conjugate()? == m;
    }
    checks.push(CheckResult::boolean("conjugation_involution", involution));
    // the Fricke isomorphism mod 8
    let dom = g_quotient()?;
    let cod = FiniteQuotient::enumerate(g04, GroupDescriptor::igusa_fricke(2))?;
    checks.push(CheckResult::boolean(
        "fricke_codomain_order_96",
        cod.order() == 96,
    ));
    let _map = fricke_iso(&dom, &cod)?;
    checks.push(CheckResult::pass("fricke_iso_multiplicative_bijective"));
    // the ratio identity f_a(J2.tau) / (det tau^{1/2} theta_a(tau))
    let rep = genus2::verify_fricke_identities(
        cfg.samples.unwrap_or(5),
        cfg.seed.wrapping_add(1),
        cfg.opts(),
    )?;
    checks.push(
        CheckResult::residual("ratio_constancy", rep.ratio_spread, cfg.tol).with_details(json!({
            "multiplier": [rep.multiplier.re, rep.multiplier.im],
        })),
    );
    checks.push(CheckResult::residual(
        "multiplier_eighth_root",
        rep.eighth_root_defect,
        1e-6,
    ));
    checks.push(CheckResult::residual(
        "hadamard_change_of_basis",
        rep.hadamard_residual,
        cfg.tol,
    ));
    Ok(finish(cfg, checks))
}

fn run_fibers(cfg: &JobConfig) -> Result<Report> {
    let samples = cfg.samples.unwrap_or(100);
    let mut rng = SplitMix64::new(cfg.seed);
    let mut all_eight = true;
    for _ in 0..samples {
        let coords = [
            Complex64::new(rng.symmetric() + 1.5, rng.symmetric()),
            Complex64::new(rng.symmetric() + 1.5, rng.symmetric()),
            Complex64::new(rng.symmetric() - 1.5, rng.symmetric()),
            Complex64::new(rng.symmetric() + 1.5, rng.symmetric()),
        ];
        let p = genus2::ProjectivePoint3::new(coords)?;
        if genus2::fiber_count(&p, 1e-9) != 8 {
            all_eight = false;
        }
    }
    let mut checks = vec![CheckResult::boolean("generic_fibers_of_8", all_eight)
        .with_details(json!({"samples": samples}))];
    // modular interpretation: squaring the f-vector
    let tau = SiegelPoint::random(2, &mut rng);
    let fv = genus2::f_vector(&tau, cfg.opts())?;
    let p = genus2::ProjectivePoint3::new(fv)?;
    let sq = genus2::squaring_map(&p);
    let direct = genus2::ProjectivePoint3::new([
        fv[0] * fv[0],
        fv[1] * fv[1],
        fv[2] * fv[2],
        fv[3] * fv[3],
    ])?;
    checks.push(CheckResult::boolean(
        "squaring_matches_f_squares",
        sq.approx_eq(&direct, 1e-10),
    ));
    // the integer-weight subring facts ride along with the squaring picture
    let sub = genus2::verify_integer_weight_subring(5, cfg.seed.wrapping_add(2), cfg.opts())?;
    checks.push(CheckResult::residual(
        "fsq_invariance",
        sub.max_fsq_deviation,
        cfg.tol,
    ));
    checks.push(CheckResult::residual(
        "thetasq_invariance",
        sub.max_thetasq_deviation,
        cfg.tol,
    ));
    checks.push(CheckResult::residual(
        "riemann_expansion",
        sub.max_expansion_residual,
        cfg.tol,
    ));
    checks.push(CheckResult::boolean(
        "sign_characters_separate",
        sub.characters_separate,
    ));
    Ok(finish(cfg, checks))
}

fn run_classify(cfg: &JobConfig) -> Result<Report> {
    let opts = cfg.opts();
    let mut checks = Vec::new();
    let q = genus3::phi_sum_quotient()?;
    let report = genus3::classify_all(&q)?;
    // per-M coefficient tables for audit
    let mut tables = Vec::new();
    for m in &report.nonvanishing {
        let comb = genus3::symmetrize(m, &q)?;
        let coeffs: Vec<serde_json::Value> = comb
            .coefficients()
            .iter()
            .map(|((n1, n2), c)| {
                json!({
                    "n1": n1.to_string(),
                    "n2": n2.to_string(),
                    "coefficient": c.0.to_vec(),
                })
            })
            .collect();
        tables.push(json!({
            "m": format!("{m}"),
            "coefficients": coeffs,
        }));
    }
    checks.push(
        CheckResult::boolean(
            "nonvanishing_count_42",
            report.nonvanishing.len() == 42 && report.total == 378,
        )
        .with_details(json!({
            "total": report.total,
            "nonvanishing": report.nonvanishing.len(),
            "vanishing": report.vanishing_count,
            "coefficient_tables": tables,
        })),
    );
    checks.push(CheckResult::boolean(
        "criterion_equal_first_components",
        report.criterion_matches,
    ));
    checks.push(CheckResult::boolean(
        "census_consistent",
        report.census_consistent,
    ));
    // worked example: four ordered terms of coefficient 16, two unordered of 32
    let m = genus3::worked_example();
    let ordered = genus3::symmetrize_ordered(&m, &q)?;
    let expected = genus3::worked_example_terms();
    let ordered_ok = ordered.len() == 4
        && expected.iter().all(|t| {
            ordered.get(t).copied() == Some(crate::cyclotomic::Cyclotomic8::from_int(16))
        });
    let unordered = genus3::symmetrize(&m, &q)?;
    let unordered_ok = unordered.support_len() == 2
        && unordered
            .coefficients()
            .values()
            .all(|c| *c == crate::cyclotomic::Cyclotomic8::from_int(32));
    checks.push(CheckResult::boolean(
        "worked_example_coefficients",
        ordered_ok && unordered_ok,
    ));
    // numeric gap check: 5 nonvanishing and 5 vanishing M at a random tau
    let mut rng = SplitMix64::new(cfg.seed);
    let tau = SiegelPoint::random(3, &mut rng);
    let pairs = genus3::odd_pairs();
    let vanishing: Vec<&CharacteristicMatrix> = pairs
        .iter()
        .filter(|m| m.columns()[0].top() != m.columns()[1].top())
        .take(5)
        .collect();
    let mut min_nonvan = f64::INFINITY;
    let mut max_van: f64 = 0.0;
    let mut agreement: f64 = 0.0;
    for m in report.nonvanishing.iter().take(5) {
        let (direct, scale) = genus3::phi_direct(m, &q, &tau, opts)?;
        let (formal, _) = genus3::symmetrize(m, &q)?.evaluate(&tau, opts)?;
        agreement = agreement.max((direct.clone() - formal).norm() / scale.max(1e-30));
        min_nonvan = min_nonvan.min(direct.norm() / scale.max(1e-30));
    }
    for m in vanishing {
        let (direct, scale) = genus3::phi_direct(m, &q, &tau, opts)?;
        max_van = max_van.max(direct.norm() / scale.max(1e-30));
    }
    checks.push(CheckResult::residual(
        "formal_numeric_agreement",
        agreement,
        1e-6,
    ));
    checks.push(
        CheckResult::boolean("numeric_gap", min_nonvan > 1e-6 && max_van < 1e-8).with_details(
            json!({
                "min_nonvanishing_relative": min_nonvan,
                "max_vanishing_relative": max_van,
            }),
        ),
    );
    // transformation law of W under random small words in Gamma_3(2,4)
    let d = GroupDescriptor::igusa(3);
    let mut worst_w: f64 = 0.0;
    let mut done = 0;
    while done < 3 {
        let gamma = d.random_element_with(&mut rng, 3)?;
        let tau = SiegelPoint::random(3, &mut rng);
        match tau.apply(&gamma) {
            Ok(gt) if gt.lambda_min() > 0.05 => {
                worst_w = worst_w.max(genus3::verify_w_transformation(
                    &genus3::worked_example(),
                    &gamma,
                    &tau,
                    opts,
                )?);
                done += 1;
            }
            _ => continue,
        }
    }
    checks.push(CheckResult::residual("w_transformation_law", worst_w, 1e-6));
    Ok(finish(cfg, checks))
}

fn run_r16(cfg: &JobConfig) -> Result<Report> {
    let samples = cfg.samples.unwrap_or(10);
    let opts = cfg.opts();
    let mut rng = SplitMix64::new(cfg.seed);
    let mut worst: f64 = 0.0;
    let mut worst_translated: f64 = 0.0;
    for _ in 0..samples {
        let tau = SiegelPoint::random(3, &mut rng);
        worst = worst.max(genus3::verify_r16(&tau, opts)?);
        let s = IntMat::symmetric_from_upper(3, &[2, 0, 0, 2, 0, 2]);
        worst_translated = worst_translated.max(genus3::verify_r16(&tau.translate(&s)?, opts)?);
    }
    let mut checks = vec![
        CheckResult::residual("r16_identity", worst, cfg.tol),
        CheckResult::residual("r16_translated", worst_translated, cfg.tol),
    ];
    // genus-2 analogue: informational only, no relation expected there
    let tau2 = SiegelPoint::random(2, &mut rng);
    let g2 = genus3::r16_genus2_value(&tau2, opts)?;
    checks.push(CheckResult::pass("r16_genus2_informational").with_details(json!({
        "relative_value": g2,
        "note": "no relation expected in genus 2; reported, not asserted"
    })));
    Ok(finish(cfg, checks))
}

fn run_q_invariance(cfg: &JobConfig) -> Result<Report> {
    let samples = cfg.samples.unwrap_or(5);
    let opts = cfg.opts();
    let mut rng = SplitMix64::new(cfg.seed);
    let mut worst: f64 = 0.0;
    let mut census = true;
    let mut done = 0;
    while done < samples {
        let tau = SiegelPoint::random(3, &mut rng);
        match genus3::verify_q_invariance(&tau, opts) {
            Ok(rep) => {
                worst = worst.max(rep.max_ratio_deviation);
                census &= rep.sign_census_ok;
                done += 1;
            }
            Err(Error::IllConditioned(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    let checks = vec![
        CheckResult::residual("q_ratio_deviation", worst, cfg.tol),
        CheckResult::boolean("sign_census", census),
    ];
    Ok(finish(cfg, checks))
}

/// Canonical golden files for regression diffing.
pub fn emit_goldens(dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();

    // sign table of M_1, M_2, M_3 on the f_a
    let mut signs = serde_json::Map::new();
    for i in 1..=3usize {
        let row: Vec<i8> = (0..4)
            .map(|ai| genus2::sign_action(i, genus2::index_a(ai)))
            .collect();
        signs.insert(format!("M{i}"), json!(row));
    }
    let p = dir.join("sign_table.json");
    write_json(
        &p,
        &json!({
            "basis": ["f_00", "f_01", "f_10", "f_11"],
            "signs": signs,
        }),
    )?;
    written.push(p);

    // monomial matrices of the generator families on both sides
    let mut families = Vec::new();
    for fam in genus2::gmodule_generators() {
        let act = fam.action();
        let matrix: Vec<Vec<String>> = act
            .matrix()
            .iter()
            .map(|row| row.iter().map(|c| c.to_string()).collect())
            .collect();
        families.push(json!({
            "domain_matrix": fam.domain_matrix().to_json()?.rows,
            "codomain_matrix": fam.codomain_matrix().to_json()?.rows,
            "permutation": act.perm.to_vec(),
            "monomial_matrix_zeta8": matrix,
        }));
    }
    let p = dir.join("monomial_matrices.json");
    write_json(&p, &json!({"basis": ["f_00", "f_01", "f_10", "f_11"], "generators": families}))?;
    written.push(p);

    // group orders
    let dom = g_quotient()?;
    let cod = g_codomain()?;
    let f2q = FiniteQuotient::enumerate(
        GroupDescriptor::igusa_upper(2),
        GroupDescriptor::igusa(2),
    )?;
    let q64 = genus3::phi_sum_quotient()?;
    let fricke_cod = FiniteQuotient::enumerate(
        GroupDescriptor::gamma0(4, 2),
        GroupDescriptor::igusa_fricke(2),
    )?;
    let p = dir.join("group_orders.json");
    write_json(
        &p,
        &json!({
            "index_gamma0_2_over_upper_igusa": dom.order(),
            "gamma00_over_igusa": cod.order(),
            "upper_igusa_over_igusa_g2": f2q.order(),
            "upper_igusa_over_igusa_g3": q64.order(),
            "gamma0_4_over_igusa_fricke": fricke_cod.order(),
            "g_structure": "F2^4 x| S3",
        }),
    )?;
    written.push(p);

    // the worked example and the classification
    let q = genus3::phi_sum_quotient()?;
    let m = genus3::worked_example();
    let ordered = genus3::symmetrize_ordered(&m, &q)?;
    let ordered_json: Vec<serde_json::Value> = ordered
        .iter()
        .map(|((n1, n2), c)| {
            json!({
                "n1": n1.to_string(),
                "n2": n2.to_string(),
                "coefficient": c.0.to_vec(),
            })
        })
        .collect();
    let report = genus3::classify_all(&q)?;
    let nonvanishing: Vec<String> = report
        .nonvanishing
        .iter()
        .map(|m| format!("{}", m))
        .collect();
    let p = dir.join("classification.json");
    write_json(
        &p,
        &json!({
            "total_pairs": report.total,
            "nonvanishing_count": report.nonvanishing.len(),
            "example_m": format!("{}", m),
            "example_terms_ordered": ordered_json,
            "nonvanishing": nonvanishing,
        }),
    )?;
    written.push(p);
    Ok(written)
}

/// Evaluate one theta job for the CLI: input and output speak JSON.
#[derive(serde::Deserialize)]
pub struct ThetaEvalInput {
    pub characteristic: String,
    pub tau: crate::theta::SiegelPointJson,
    #[serde(default)]
    pub z: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub tol: Option<f64>,
}

#[derive(Serialize)]
pub struct ThetaEvalOutput {
    pub value: [f64; 2],
    pub radius: u32,
    pub tail_bound: f64,
}

pub fn theta_eval(input: &ThetaEvalInput) -> Result<ThetaEvalOutput> {
    let m = parse_characteristic(&input.characteristic)?;
    let tau = SiegelPoint::from_json(&input.tau)?;
    let z: Vec<Complex64> = match &input.z {
        Some(v) => v.iter().map(|c| Complex64::new(c[0], c[1])).collect(),
        None => vec![Complex64::new(0.0, 0.0); m.genus()],
    };
    let opts = EvalOptions::with_tol(input.tol.unwrap_or(1e-12));
    let v = crate::theta::theta(&m, &tau, &z, opts)?;
    Ok(ThetaEvalOutput {
        value: [v.value.re, v.value.im],
        radius: v.radius,
        tail_bound: v.tail_bound,
    })
}

/// Parses the "m'|m''" bit-string form, e.g. "001|011".
pub fn parse_characteristic(s: &str) -> Result<crate::ThetaCharacteristic> {
    let (top, bot) = s
        .split_once('|')
        .ok_or_else(|| Error::Config(format!("characteristic {s:?} must look like 01|10")))?;
    let parse = |part: &str| -> Result<Vec<u8>> {
        part.chars()
            .map(|c| match c {
                '0' => Ok(0u8),
                '1' => Ok(1u8),
                _ => Err(Error::Config(format!("bad bit {c:?} in {s:?}"))),
            })
            .collect()
    };
    crate::ThetaCharacteristic::new(parse(top)?, parse(bot)?)
}
