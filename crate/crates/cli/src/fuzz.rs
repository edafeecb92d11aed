//! Deterministic random presentations and the invariant suite run on them.
//!
//! Generation is seeded and draws from one stream, so a (seed, count,
//! profile) triple always reproduces the same cases and the same report
//! bytes.

use fimod_core::complex;
use fimod_core::filtration::{self, FiltrationVerdict};
use fimod_core::homology;
use fimod_core::module::ExtendedDegree;
use fimod_core::{FieldSpec, TruncatedFIModule};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::formats::{PresentationFile, Relation, RelationTerm};

/// Shape of the random presentations.
#[derive(Debug, Clone)]
pub struct FuzzProfile {
    pub fields: Vec<FieldSpec>,
    pub max_generators: usize,
    /// Degree pool for generators; repetition weights the draw.
    pub degree_pool: Vec<usize>,
    pub max_relations: usize,
    pub max_relation_degree: usize,
    pub window_low: usize,
    pub window_high: usize,
    /// Window used when a degree-3 generator appears (keeps the dense
    /// linear algebra at the top degrees affordable).
    pub window_for_degree3: usize,
}

impl Default for FuzzProfile {
    fn default() -> Self {
        FuzzProfile {
            fields: vec![
                FieldSpec::Rationals,
                FieldSpec::PrimeField(2),
                FieldSpec::PrimeField(3),
            ],
            max_generators: 3,
            degree_pool: vec![0, 0, 1, 1, 1, 2, 2, 3],
            max_relations: 4,
            max_relation_degree: 3,
            window_low: 8,
            window_high: 10,
            window_for_degree3: 8,
        }
    }
}

/// Draws one presentation.
pub fn generate_presentation(
    rng: &mut ChaCha8Rng,
    profile: &FuzzProfile,
    field: Option<FieldSpec>,
) -> PresentationFile {
    let field = field.unwrap_or_else(|| *profile.fields.choose(rng).expect("nonempty pool"));
    let n_gens = rng.gen_range(1..=profile.max_generators);
    let mut degrees: Vec<usize> =
        (0..n_gens).map(|_| *profile.degree_pool.choose(rng).unwrap()).collect();
    // At most one generator of the top degree per case: the dense linear
    // algebra at the window edge grows with the falling factorial.
    let mut seen_top = false;
    for d in degrees.iter_mut() {
        if *d >= 3 {
            if seen_top {
                *d = 2;
            }
            seen_top = true;
        }
    }
    let generators: Vec<(String, usize)> =
        degrees.iter().enumerate().map(|(i, &d)| (format!("g{i}"), d)).collect();
    let max_degree = generators.iter().map(|(_, d)| *d).max().unwrap();
    let window = if max_degree >= 3 {
        profile.window_for_degree3
    } else {
        rng.gen_range(profile.window_low..=profile.window_high)
    };
    let min_degree = generators.iter().map(|(_, d)| *d).min().unwrap();
    let n_rels = rng.gen_range(0..=profile.max_relations);
    let mut relations = Vec::new();
    for r in 0..n_rels {
        let degree = rng.gen_range(min_degree..=profile.max_relation_degree.max(min_degree));
        let eligible: Vec<usize> = generators
            .iter()
            .enumerate()
            .filter(|(_, (_, d))| *d <= degree)
            .map(|(i, _)| i)
            .collect();
        if eligible.is_empty() {
            continue;
        }
        let n_terms = rng.gen_range(1..=3);
        let mut terms = Vec::new();
        for _ in 0..n_terms {
            let g = *eligible.choose(rng).unwrap();
            let gen_degree = generators[g].1;
            let pool = fimod_core::fi::enumerate_injections(gen_degree, degree);
            let injection = pool.choose(rng).unwrap().clone();
            let coefficient = match field {
                FieldSpec::Rationals => {
                    let c = *[-3i64, -2, -1, 1, 2, 3].choose(rng).unwrap();
                    field.from_integer(c)
                }
                FieldSpec::PrimeField(p) => field.from_integer(rng.gen_range(1..p as i64)),
            };
            terms.push(RelationTerm {
                coefficient,
                injection,
                generator: generators[g].0.clone(),
            });
        }
        relations.push(Relation { name: format!("r{r}"), terms });
    }
    PresentationFile { field, window, generators, relations }
}

/// Which checks the suite runs.
#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    pub smax: usize,
    pub oracle_cap: usize,
    pub margin: usize,
    pub two_route: bool,
    pub equivalences: bool,
    pub regularity: bool,
    pub shift_inequality: bool,
    pub commute_iso: bool,
    pub derivative_degree: bool,
    pub complex: bool,
    pub shallow_validate: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            smax: 3,
            oracle_cap: 6,
            margin: 2,
            two_route: true,
            equivalences: true,
            regularity: true,
            shift_inequality: true,
            commute_iso: true,
            derivative_degree: true,
            complex: true,
            shallow_validate: true,
        }
    }
}

/// Summary of one case: certified violations are engine or theorem bugs;
/// uncertified notes are honest window limitations.
#[derive(Debug, Clone, Serialize)]
pub struct CaseOutcome {
    pub name: String,
    pub field: String,
    pub window: usize,
    pub dims: Vec<usize>,
    pub gd: String,
    pub td: String,
    pub hd: Vec<String>,
    pub filtered: String,
    pub violations: Vec<String>,
    pub uncertified: Vec<String>,
}

fn ext(e: ExtendedDegree) -> String {
    format!("{e}")
}

/// Runs the configured invariant suite on a materialized module.
pub fn run_suite(name: &str, v: &TruncatedFIModule, cfg: &SuiteConfig) -> CaseOutcome {
    let mut violations = Vec::new();
    let mut uncertified = Vec::new();

    if cfg.shallow_validate {
        // Full functor validation at the desk-scale degrees.
        let shallow = v.restrict_window(v.window().min(5)).expect("shrinking");
        let report = shallow.validate();
        if !report.is_valid() {
            violations.push(format!(
                "functor relations violated: {}",
                report.violations[0].relation
            ));
        }
    }

    let h = homology::homology(v, cfg.smax);
    let (td, td_cert) = v.torsion_degree(cfg.margin);
    if !td_cert {
        uncertified.push("torsion degree not certified".into());
    }

    if cfg.two_route {
        let oracle = homology::homology_oracle(v, cfg.smax, cfg.oracle_cap);
        if oracle.complete {
            let shared = oracle.degree_cap.min(h.computed_up_to);
            for s in 0..=cfg.smax {
                for n in 0..=shared {
                    let da = h.entries[s].value.dims.get(n).copied().unwrap_or(0);
                    let db = oracle.entries[s].dims.get(n).copied().unwrap_or(0);
                    if da != db {
                        violations.push(format!(
                            "two-route disagreement at H_{s} degree {n}: {da} vs {db}"
                        ));
                    }
                }
            }
        } else {
            uncertified.push("oracle resolution exceeded its budget".into());
        }
    }

    let filtered = filtration::is_sharp_filtered(v);
    if cfg.equivalences {
        // Vanishing of H_1, H_2, H_3 and extraction success must agree on
        // certified verdicts.
        let zero: Vec<Option<bool>> = (1..=cfg.smax.min(3))
            .map(|s| {
                let e = &h.entries[s];
                if e.certified {
                    Some(e.hd == ExtendedDegree::NegInfinity)
                } else if e.hd != ExtendedDegree::NegInfinity && v.bounds().is_some() {
                    // A visible nonzero class refutes even past the horizon.
                    Some(false)
                } else {
                    None
                }
            })
            .collect();
        let certain: Vec<bool> = zero.iter().copied().flatten().collect();
        if certain.windows(2).any(|w| w[0] != w[1]) {
            violations.push(format!("homology vanishing answers disagree: {zero:?}"));
        }
        match filtered.verdict {
            FiltrationVerdict::Yes => {
                if certain.iter().any(|&z| !z) {
                    violations.push("filtered but some higher homology is nonzero".into());
                }
                match filtration::extract_filtration(v) {
                    Ok(report) => {
                        let poly = filtration::dimension_polynomial_check(v, &report);
                        if !poly.verified {
                            violations.push("binomial dimension count failed".into());
                        }
                    }
                    Err(e) => violations.push(format!("filtration extraction failed: {e}")),
                }
            }
            FiltrationVerdict::No => {
                if certain.iter().all(|&z| z) && !certain.is_empty() {
                    violations.push("not filtered but all homology vanishes".into());
                }
            }
            FiltrationVerdict::Uncertified => {
                uncertified.push("filtration verdict window-limited".into());
            }
        }
    }

    if cfg.regularity {
        let reg = homology::check_regularity(v, cfg.smax, cfg.margin);
        for c in reg.certified_violations() {
            violations.push(format!(
                "regularity bound {} fails at s = {}: hd = {}, bound = {:?}",
                c.name, c.s, c.hd, c.bound
            ));
        }
    }

    if cfg.shift_inequality && v.window() >= 1 {
        match homology::check_shift_inequality(v, cfg.smax) {
            Ok(checks) => {
                for c in checks {
                    if c.certified && !c.holds {
                        violations.push(format!(
                            "shift inequality fails at s = {}: {} > {}",
                            c.s, c.lhs, c.rhs
                        ));
                    }
                }
            }
            Err(e) => uncertified.push(format!("shift inequality unavailable: {e}")),
        }
    }

    if cfg.commute_iso && v.window() >= 2 {
        if let Err(e) = v.sigma_d_commute_iso() {
            violations.push(format!("shift/derivative commuting map failed: {e}"));
        }
    }

    if cfg.derivative_degree && v.window() >= 1 {
        let gd = h.hd(0);
        let dv = v.derivative().expect("window checked");
        let gd_d = homology::h0(&dv).top_degree();
        match gd {
            ExtendedDegree::Finite(g) if g >= 1 => {
                if gd_d != ExtendedDegree::Finite(g - 1) {
                    violations.push(format!(
                        "derivative degree: gd = {g} but gd of the derivative is {gd_d}"
                    ));
                }
            }
            _ => {
                if !dv.is_zero() {
                    violations.push("derivative of a degree-zero module is nonzero".into());
                }
            }
        }
    }

    if cfg.complex {
        let c = complex::build_filtered_complex(v, cfg.margin);
        if c.complete {
            let report = complex::verify_complex(&c);
            for f in report.failures() {
                violations.push(format!("complex check `{}` failed: {}", f.name, f.detail));
            }
            // Past the largest observed torsion degree the shifted complex
            // must be exact.
            let max_torsion = c
                .stages
                .iter()
                .flat_map(|s| {
                    s.torsion_dims
                        .iter()
                        .enumerate()
                        .filter(|(_, &d)| d > 0)
                        .map(|(n, _)| n + 1)
                })
                .max()
                .unwrap_or(0);
            let deepest = c.stages.iter().map(|s| s.term.window()).min().unwrap_or(0);
            if max_torsion <= deepest {
                match complex::shifted_complex_resolves(&c, max_torsion) {
                    Ok(true) => {}
                    Ok(false) => violations
                        .push("shifted complex fails to resolve past the torsion".into()),
                    Err(e) => uncertified.push(format!("shifted complex unavailable: {e}")),
                }
            } else {
                uncertified.push("window too small to shift past the torsion".into());
            }
        } else {
            uncertified.push(format!(
                "complex construction stopped: {}",
                c.stop_reason.as_deref().unwrap_or("unknown")
            ));
        }
    }

    CaseOutcome {
        name: name.to_string(),
        field: crate::formats::field_text(v.field()),
        window: v.window(),
        dims: v.dims().to_vec(),
        gd: ext(h.hd(0)),
        td: ext(td),
        hd: (0..=cfg.smax).map(|s| ext(h.hd(s))).collect(),
        filtered: format!("{:?}", filtered.verdict),
        violations,
        uncertified,
    }
}

#[derive(Debug, Serialize)]
pub struct FuzzSummary {
    pub seed: u64,
    pub count: usize,
    pub cases: Vec<CaseOutcome>,
    pub total_violations: usize,
    pub total_uncertified: usize,
    pub filtered_yes: usize,
    pub filtered_no: usize,
}

/// Generates `count` cases from the seed and runs the suite on each.
pub fn run_fuzz(
    count: usize,
    seed: u64,
    field: Option<FieldSpec>,
    profile: &FuzzProfile,
    cfg: &SuiteConfig,
) -> FuzzSummary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = Vec::with_capacity(count);
    for i in 0..count {
        let pf = generate_presentation(&mut rng, profile, field);
        let module = crate::formats::materialize(&pf).expect("generated presentations are valid");
        let outcome = run_suite(&format!("case{i}"), &module, cfg);
        cases.push(outcome);
    }
    let total_violations = cases.iter().map(|c| c.violations.len()).sum();
    let total_uncertified = cases.iter().map(|c| c.uncertified.len()).sum();
    let filtered_yes = cases.iter().filter(|c| c.filtered == "Yes").count();
    let filtered_no = cases.iter().filter(|c| c.filtered == "No").count();
    FuzzSummary {
        seed,
        count,
        cases,
        total_violations,
        total_uncertified,
        filtered_yes,
        filtered_no,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic() {
        let profile = FuzzProfile::default();
        let a: Vec<PresentationFile> = {
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            (0..5).map(|_| generate_presentation(&mut rng, &profile, None)).collect()
        };
        let b: Vec<PresentationFile> = {
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            (0..5).map(|_| generate_presentation(&mut rng, &profile, None)).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn generated_presentations_materialize() {
        let profile = FuzzProfile::default();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let pf = generate_presentation(&mut rng, &profile, None);
            let m = crate::formats::materialize(&pf).unwrap();
            assert_eq!(m.window(), pf.window);
        }
    }

    #[test]
    fn suite_is_quiet_on_a_clean_case() {
        let pf = crate::formats::parse_presentation(
            "field Q\nwindow 8\ngenerator g 1\nrelation r = 1->2:(1) @ g - 1->2:(2) @ g\n",
        )
        .unwrap();
        let m = crate::formats::materialize(&pf).unwrap();
        let outcome = run_suite("trunc", &m, &SuiteConfig::default());
        assert!(outcome.violations.is_empty(), "{:?}", outcome.violations);
    }
}
