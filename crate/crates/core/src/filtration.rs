//! The induced-module filtration: testing for it, extracting it, and the
//! projective-dimension classification it carries over a field.
//!
//! A module is filtered by induced modules exactly when its first homology
//! vanishes. When it is, the canonical chain of below-degree submodules
//! exhibits the filtration, each layer is (zero or) induced from its
//! bottom symmetric-group representation, and the projective dimension of
//! the whole module is zero or infinity according to whether every layer's
//! representation is projective over its group algebra.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::fi::{self, Injection};
use crate::homology::{self, CoverStrategy, ResolveOptions};
use crate::linalg::{self, Matrix};
use crate::module::{
    DegreeBounds, ExtendedDegree, GradedSubmodule, ModuleError, TruncatedFIModule,
};
use crate::scalar::{FieldSpec, Scalar};

/// A finite-dimensional representation of one symmetric group, stored by
/// its adjacent transposition actions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricGroupModule {
    pub n: usize,
    pub dim: usize,
    pub field: FieldSpec,
    /// Actions of `s_1, .., s_{n-1}`.
    pub sym: Vec<Matrix>,
}

impl SymmetricGroupModule {
    pub fn new(n: usize, field: FieldSpec, sym: Vec<Matrix>) -> Result<Self, String> {
        let dim = sym.first().map_or(0, Matrix::rows);
        let m = SymmetricGroupModule { n, dim, field, sym };
        m.validate()?;
        Ok(m)
    }

    /// A representation with no generator constraints (`n <= 1`) or with
    /// every generator acting as the identity.
    pub fn of_dim(n: usize, field: FieldSpec, dim: usize) -> Self {
        SymmetricGroupModule {
            n,
            dim,
            field,
            sym: (1..n).map(|_| Matrix::identity(field, dim)).collect(),
        }
    }

    pub fn trivial(n: usize, field: FieldSpec) -> Self {
        SymmetricGroupModule::of_dim(n, field, 1)
    }

    pub fn regular(n: usize, field: FieldSpec) -> Self {
        let perms = fi::enumerate_injections(n, n);
        let dim = perms.len();
        let sym = (1..n)
            .map(|i| {
                let s = Injection::transposition(n, i);
                let mut m = Matrix::zero(field, dim, dim);
                for (c, p) in perms.iter().enumerate() {
                    let r = s.compose(p).lex_rank();
                    m.set(r, c, field.one());
                }
                m
            })
            .collect();
        SymmetricGroupModule { n, dim, field, sym }
    }

    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.sym.len() != self.n.saturating_sub(1) {
            return Err("wrong number of generator matrices".into());
        }
        for m in &self.sym {
            if m.rows() != self.dim || m.cols() != self.dim {
                return Err("generator matrix has wrong shape".into());
            }
        }
        let id = Matrix::identity(self.field, self.dim);
        for (i, m) in self.sym.iter().enumerate() {
            if m.mul(m) != id {
                return Err(alloc::format!("s{}^2 is not the identity", i + 1));
            }
        }
        for i in 0..self.sym.len().saturating_sub(1) {
            let (a, b) = (&self.sym[i], &self.sym[i + 1]);
            if a.mul(&b.mul(a)) != b.mul(&a.mul(b)) {
                return Err(alloc::format!("braid relation fails at s{}", i + 1));
            }
        }
        for i in 0..self.sym.len() {
            for j in i + 2..self.sym.len() {
                if self.sym[i].mul(&self.sym[j]) != self.sym[j].mul(&self.sym[i]) {
                    return Err(alloc::format!(
                        "commuting relation fails for s{} s{}",
                        i + 1,
                        j + 1
                    ));
                }
            }
        }
        Ok(())
    }

    /// Action of an arbitrary bijection through its adjacent word.
    pub fn apply(&self, sigma: &Injection, v: &[Scalar]) -> Vec<Scalar> {
        let mut cur = v.to_vec();
        for i in sigma.adjacent_word() {
            cur = self.sym[i - 1].mul_vec(&cur);
        }
        cur
    }
}

/// The module induced up from a symmetric-group representation: degree `n`
/// is spanned by (order-preserving injection, basis vector of the
/// representation), of dimension `binomial(n, i) * dim`.
pub fn induce(t: &SymmetricGroupModule, window: usize) -> Result<TruncatedFIModule, ModuleError> {
    let s = t.n;
    if s > window {
        return Err(ModuleError::DegreeAboveWindow { degree: s, window });
    }
    let field = t.field;
    let cosets: Vec<Vec<Injection>> = (0..=window)
        .map(|n| {
            fi::enumerate_injections(s, n)
                .into_iter()
                .filter(|a| a.images().windows(2).all(|w| w[0] < w[1]))
                .collect()
        })
        .collect();
    let dims: Vec<usize> = cosets.iter().map(|c| c.len() * t.dim).collect();
    let index = |coset: usize, j: usize| coset * t.dim + j;
    // A generator morphism sends (increasing alpha, x) to
    // (increasing part of beta . alpha, rho . x) where rho is the
    // source-side permutation of the factorisation.
    let act = |beta: &Injection, n: usize| -> Matrix {
        let m_deg = beta.target();
        let mut out = Matrix::zero(field, dims[m_deg], dims[n]);
        for (c, alpha) in cosets[n].iter().enumerate() {
            let (incr, rho) = beta.compose(alpha).factor_increasing();
            let coset = cosets[m_deg]
                .binary_search(&incr)
                .expect("increasing injections are enumerated");
            for j in 0..t.dim {
                let mut x = vec![field.zero(); t.dim];
                x[j] = field.one();
                let moved = t.apply(&rho, &x);
                for (r, val) in moved.into_iter().enumerate() {
                    if !val.is_zero() {
                        out.set(index(coset, r), index(c, j), val);
                    }
                }
            }
        }
        out
    };
    let incl: Vec<Matrix> =
        (0..window).map(|n| act(&Injection::standard_inclusion(n), n)).collect();
    let sym: Vec<Vec<Matrix>> = (0..=window)
        .map(|n| (1..n).map(|i| act(&Injection::transposition(n, i), n)).collect())
        .collect();
    // Presentation bounds: the module is a quotient of a free module on
    // degree-s generators whose relation kernel is again induced from
    // degree s, hence generated there.
    let bound = if t.dim == 0 {
        ExtendedDegree::NegInfinity
    } else {
        ExtendedDegree::Finite(s)
    };
    let module = TruncatedFIModule::new(field, dims, incl, sym)
        .expect("induced module shape is consistent")
        .with_bounds(DegreeBounds { generators: bound, relations: bound });
    Ok(module)
}

/// The three-valued outcome of the filtration test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiltrationVerdict {
    Yes,
    No,
    Uncertified,
}

/// One layer of the canonical filtration.
#[derive(Debug, Clone)]
pub struct FiltrationLayer {
    pub degree: usize,
    pub bottom: SymmetricGroupModule,
    /// Dimension sequence of the layer, matching the induced module's.
    pub dims: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct FiltrationReport {
    pub verdict: FiltrationVerdict,
    /// Degree of a nonzero first-homology class, when the verdict is `No`.
    pub refuted_at: Option<usize>,
    /// The canonical chain of below-degree submodules, when extracted.
    pub chain: Vec<GradedSubmodule>,
    pub layers: Vec<FiltrationLayer>,
    /// Degree up to which homology was computed.
    pub certified_up_to: usize,
}

/// Tests whether the module is filtered by induced modules: yes exactly
/// when its first homology vanishes. A nonzero class refutes whenever
/// presentation bounds are known (the computation is then degreewise
/// exact); a zero answer is a `Yes` only inside the certified horizon.
pub fn is_sharp_filtered(v: &TruncatedFIModule) -> FiltrationReport {
    let report = homology::homology(v, 1);
    let entry = &report.entries[1];
    let verdict = if v.bounds().is_none() {
        FiltrationVerdict::Uncertified
    } else if let ExtendedDegree::Finite(d) = entry.hd {
        return FiltrationReport {
            verdict: FiltrationVerdict::No,
            refuted_at: Some(d),
            chain: Vec::new(),
            layers: Vec::new(),
            certified_up_to: report.computed_up_to,
        };
    } else if entry.certified {
        FiltrationVerdict::Yes
    } else {
        FiltrationVerdict::Uncertified
    };
    FiltrationReport {
        verdict,
        refuted_at: None,
        chain: Vec::new(),
        layers: Vec::new(),
        certified_up_to: report.computed_up_to,
    }
}

/// Extracts the canonical filtration of a module that tested `Yes`: the
/// chain of below-degree submodules, the bottom representation of each
/// nonzero layer, and the verification that each layer matches the module
/// induced from it (equal dimension sequences and a surjective evaluation,
/// i.e. the layer is generated in its bottom degree).
pub fn extract_filtration(v: &TruncatedFIModule) -> Result<FiltrationReport, String> {
    let test = is_sharp_filtered(v);
    if test.verdict != FiltrationVerdict::Yes {
        return Err(alloc::format!(
            "filtration extraction needs a certified filtered module, verdict was {:?}",
            test.verdict
        ));
    }
    let field = v.field();
    let window = v.window();
    let gd = homology::h0(v).top_degree();
    let ExtendedDegree::Finite(top) = gd else {
        // The zero module: an empty chain.
        return Ok(FiltrationReport {
            verdict: FiltrationVerdict::Yes,
            refuted_at: None,
            chain: Vec::new(),
            layers: Vec::new(),
            certified_up_to: test.certified_up_to,
        });
    };
    let mut chain = Vec::with_capacity(top + 1);
    for s in 0..=top {
        chain.push(v.below_degree_submodule(s).map_err(|e| alloc::format!("{e}"))?);
    }
    if chain[top].dims() != v.dims().to_vec() {
        return Err("module is not generated below its generating degree".into());
    }
    let mut layers = Vec::new();
    let mut prev: Option<&GradedSubmodule> = None;
    for s in 0..=top {
        let current = &chain[s];
        let step_module = v.submodule_as_module(current).map_err(|e| alloc::format!("{e}"))?;
        // Express the previous chain member inside this one.
        let inner = match prev {
            None => GradedSubmodule::zero(field, &step_module.dims().to_vec()),
            Some(p) => {
                let mut values = Vec::with_capacity(window + 1);
                for n in 0..=window {
                    let mut sub = linalg::Subspace::zero(field, current.values[n].dim());
                    for b in p.values[n].basis() {
                        let coords =
                            current.values[n].coordinates(b).ok_or("chain is not nested")?;
                        sub.insert(coords);
                    }
                    values.push(sub);
                }
                GradedSubmodule { values, generated_in: p.generated_in }
            }
        };
        let (layer, _) = step_module.quotient(&inner).map_err(|e| alloc::format!("{e}"))?;
        prev = Some(current);
        if layer.is_zero() {
            continue;
        }
        let bottom = SymmetricGroupModule {
            n: s,
            dim: layer.dim(s),
            field,
            sym: (1..s).map(|i| layer.sym_matrix(s, i).clone()).collect(),
        };
        bottom.validate()?;
        // The layer must be generated in its bottom degree (surjective
        // evaluation from the induced module)...
        let h = homology::h0(&layer);
        for (n, &d) in h.dims.iter().enumerate() {
            if n != s && d != 0 {
                return Err(alloc::format!(
                    "layer {s} has generators at degree {n}; filtration verification failed"
                ));
            }
        }
        // ...and must have the induced module's dimension sequence.
        let model = induce(&bottom, window).map_err(|e| alloc::format!("{e}"))?;
        if model.dims() != layer.dims() {
            return Err(alloc::format!(
                "layer {s} does not match its induced model: {:?} vs {:?}",
                layer.dims(),
                model.dims()
            ));
        }
        for (n, &d) in layer.dims().iter().enumerate() {
            debug_assert_eq!(d, fi::binomial(n, s) * bottom.dim);
        }
        layers.push(FiltrationLayer { degree: s, bottom, dims: layer.dims().to_vec() });
    }
    Ok(FiltrationReport {
        verdict: FiltrationVerdict::Yes,
        refuted_at: None,
        chain,
        layers,
        certified_up_to: test.certified_up_to,
    })
}

/// Decides projectivity over the group algebra by solving for an
/// equivariant section of the evaluation surjection from the free module
/// on a basis of `t`. Exact and field-agnostic.
pub fn is_projective_over_group_algebra(t: &SymmetricGroupModule) -> bool {
    if t.dim == 0 || t.n <= 1 {
        return true;
    }
    let field = t.field;
    let perms = fi::enumerate_injections(t.n, t.n);
    let order = perms.len();
    let fdim = order * t.dim; // free module on a basis of t
    // Evaluation: free -> t, (sigma, j) -> sigma . x_j.
    let mut mu = Matrix::zero(field, t.dim, fdim);
    for (c, p) in perms.iter().enumerate() {
        for j in 0..t.dim {
            let mut x = vec![field.zero(); t.dim];
            x[j] = field.one();
            let moved = t.apply(p, &x);
            for (r, val) in moved.into_iter().enumerate() {
                mu.set(r, c * t.dim + j, val);
            }
        }
    }
    // Generator actions on the free module: left multiplication on the
    // group coordinate.
    let free_action = |i: usize| -> Matrix {
        let s = Injection::transposition(t.n, i);
        let mut m = Matrix::zero(field, fdim, fdim);
        for (c, p) in perms.iter().enumerate() {
            let r = s.compose(p).lex_rank();
            for j in 0..t.dim {
                m.set(r * t.dim + j, c * t.dim + j, field.one());
            }
        }
        m
    };
    // Unknown section X (fdim rows, t.dim columns), column-major variables:
    // X[k, c] at index c * fdim + k.
    let vars = fdim * t.dim;
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let mut rhs: Vec<Scalar> = Vec::new();
    // Section property: mu . X = identity.
    for r in 0..t.dim {
        for c in 0..t.dim {
            let mut row = vec![field.zero(); vars];
            for k in 0..fdim {
                row[c * fdim + k] = mu.get(r, k).clone();
            }
            rows.push(row);
            rhs.push(if r == c { field.one() } else { field.zero() });
        }
    }
    // Equivariance: F(s_i) . X = X . T(s_i) for every generator.
    for i in 1..t.n {
        let fa = free_action(i);
        let ta = &t.sym[i - 1];
        for r in 0..fdim {
            for c in 0..t.dim {
                let mut row = vec![field.zero(); vars];
                for k in 0..fdim {
                    let v = fa.get(r, k);
                    if !v.is_zero() {
                        row[c * fdim + k] = &row[c * fdim + k] + v;
                    }
                }
                for k in 0..t.dim {
                    let v = ta.get(k, c);
                    if !v.is_zero() {
                        row[k * fdim + r] = &row[k * fdim + r] - v;
                    }
                }
                rows.push(row);
                rhs.push(field.zero());
            }
        }
    }
    let system = Matrix::from_rows(field, vars, rows);
    linalg::solve(&system, &rhs).is_some()
}

/// Projective-dimension classification over a field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PdClassification {
    /// Finite projective dimension; over a field this forces projectivity.
    Projective,
    InfinitePd,
    Uncertified,
}

#[derive(Debug, Clone)]
pub struct PdComponent {
    pub degree: usize,
    pub dim: usize,
    pub projective: bool,
}

#[derive(Debug, Clone)]
pub struct PdReport {
    pub classification: PdClassification,
    pub components: Vec<PdComponent>,
    /// Which branch decided: the filtration test or a component.
    pub reason: String,
}

/// Classifies the projective dimension: infinite unless the module is
/// filtered by induced modules whose bottom representations are all
/// projective over their group algebras, in which case it is projective
/// (the finite value over a field is zero).
pub fn classify_pd(v: &TruncatedFIModule) -> PdReport {
    let test = is_sharp_filtered(v);
    match test.verdict {
        FiltrationVerdict::No => {
            return PdReport {
                classification: PdClassification::InfinitePd,
                components: Vec::new(),
                reason: alloc::format!(
                    "not filtered: nonzero first homology at degree {}",
                    test.refuted_at.unwrap_or(0)
                ),
            }
        }
        FiltrationVerdict::Uncertified => {
            return PdReport {
                classification: PdClassification::Uncertified,
                components: Vec::new(),
                reason: "filtration test exceeded the certified horizon".into(),
            }
        }
        FiltrationVerdict::Yes => {}
    }
    let filtration = match extract_filtration(v) {
        Ok(f) => f,
        Err(e) => {
            return PdReport {
                classification: PdClassification::Uncertified,
                components: Vec::new(),
                reason: e,
            }
        }
    };
    let mut components = Vec::new();
    let mut all = true;
    for layer in &filtration.layers {
        let projective = is_projective_over_group_algebra(&layer.bottom);
        all = all && projective;
        components.push(PdComponent { degree: layer.degree, dim: layer.bottom.dim, projective });
    }
    PdReport {
        classification: if all {
            PdClassification::Projective
        } else {
            PdClassification::InfinitePd
        },
        components,
        reason: if all {
            "filtered with every bottom representation projective".into()
        } else {
            "filtered but some bottom representation is not projective".into()
        },
    }
}

/// Outcome of the search for a shift making the module filtered.
#[derive(Debug, Clone)]
pub struct ShiftSearch {
    pub found: Option<usize>,
    /// Verdicts per tried shift amount.
    pub trail: Vec<FiltrationVerdict>,
    pub window_limited: bool,
}

/// Smallest `d <= dmax` such that the `d`-fold shift tests `Yes`, walking
/// upward; stops early when the window no longer certifies.
pub fn shift_until_filtered(v: &TruncatedFIModule, dmax: usize) -> ShiftSearch {
    let mut trail = Vec::new();
    let mut current = v.clone();
    for d in 0..=dmax {
        let report = is_sharp_filtered(&current);
        trail.push(report.verdict);
        match report.verdict {
            FiltrationVerdict::Yes => {
                return ShiftSearch { found: Some(d), trail, window_limited: false }
            }
            FiltrationVerdict::Uncertified => {
                return ShiftSearch { found: None, trail, window_limited: true }
            }
            FiltrationVerdict::No => {}
        }
        if d == dmax || current.window() == 0 {
            break;
        }
        current = match current.shift() {
            Ok(s) => s,
            Err(_) => return ShiftSearch { found: None, trail, window_limited: true },
        };
    }
    ShiftSearch { found: None, trail, window_limited: false }
}

/// The binomial growth report for a filtered module.
#[derive(Debug, Clone)]
pub struct PolyFitReport {
    /// `(bottom degree, multiplicity)` per layer: the dimension at degree
    /// `n` is the sum of `binomial(n, s) * multiplicity`.
    pub coefficients: Vec<(usize, usize)>,
    pub verified: bool,
}

/// Verifies that the dimension sequence equals the binomial combination
/// determined by the filtration layers, at every window degree.
pub fn dimension_polynomial_check(
    v: &TruncatedFIModule,
    report: &FiltrationReport,
) -> PolyFitReport {
    let coefficients: Vec<(usize, usize)> =
        report.layers.iter().map(|l| (l.degree, l.bottom.dim)).collect();
    let verified = v.dims().iter().enumerate().all(|(n, &d)| {
        d == coefficients.iter().map(|&(s, m)| fi::binomial(n, s) * m).sum::<usize>()
    });
    PolyFitReport { coefficients, verified }
}

/// Realizes the kernel of a module map as a module carrying honest bounds
/// from a fresh greedy cover; used by the short-exact-sequence checks.
pub fn kernel_as_bounded_module(
    map: &crate::module::ModuleMap,
) -> Result<TruncatedFIModule, ModuleError> {
    let kernel = map.kernel();
    let mut module = map.source.submodule_as_module(&kernel)?;
    let opts = ResolveOptions {
        strategy: CoverStrategy::Greedy,
        degree_cap: None,
        dim_budget: homology::DEFAULT_DIM_BUDGET,
    };
    let res = homology::resolve_with(&module, 1, opts);
    if res.complete && !res.steps.is_empty() {
        let relations = if res.steps.len() >= 2 {
            res.steps[1].degree
        } else {
            *res.cycle_degrees.first().unwrap_or(&ExtendedDegree::NegInfinity)
        };
        module.set_bounds(Some(DegreeBounds { generators: res.steps[0].degree, relations }));
    }
    Ok(module)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::{FreeModuleSpec, ModuleMap};

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn free(degrees: &[usize], window: usize) -> TruncatedFIModule {
        TruncatedFIModule::free(&FreeModuleSpec { generators: degrees.to_vec() }, q(), window)
            .unwrap()
    }

    fn induced_trivial(field: FieldSpec, window: usize) -> TruncatedFIModule {
        induce(&SymmetricGroupModule::trivial(2, field), window).unwrap()
    }

    #[test]
    fn induced_module_examples() {
        // Inducing the regular representation gives the free module.
        for n in [1usize, 2, 3] {
            let reg = SymmetricGroupModule::regular(n, q());
            let ind = induce(&reg, 5).unwrap();
            let m = free(&[n], 5);
            assert_eq!(ind.dims(), m.dims());
            assert!(ind.validate().is_valid());
        }
        // Inducing the trivial representation of S_2 gives binomial dims.
        let f2 = FieldSpec::PrimeField(2);
        let ind = induced_trivial(f2, 6);
        let expect: Vec<usize> = (0..=6).map(|n| fi::binomial(n, 2)).collect();
        assert_eq!(ind.dims(), expect);
        assert!(ind.validate().is_valid());
        // Inducing a zero module gives zero.
        let z = SymmetricGroupModule::of_dim(2, q(), 0);
        assert!(induce(&z, 4).unwrap().is_zero());
    }

    #[test]
    fn filtration_test_verdicts() {
        for degrees in [&[0][..], &[1], &[2]] {
            let r = is_sharp_filtered(&free(degrees, 6));
            assert_eq!(r.verdict, FiltrationVerdict::Yes);
        }
        let pt = TruncatedFIModule::point_at_zero(q(), 6);
        let r = is_sharp_filtered(&pt);
        assert_eq!(r.verdict, FiltrationVerdict::No);
        assert_eq!(r.refuted_at, Some(1));
        let ind = induced_trivial(FieldSpec::PrimeField(2), 6);
        assert_eq!(is_sharp_filtered(&ind).verdict, FiltrationVerdict::Yes);
        // A window too small to certify answers honestly.
        let narrow = induced_trivial(q(), 3);
        assert_eq!(is_sharp_filtered(&narrow).verdict, FiltrationVerdict::Uncertified);
    }

    #[test]
    fn extraction_of_free_module_layers() {
        let m2 = free(&[2], 6);
        let report = extract_filtration(&m2).unwrap();
        assert_eq!(report.layers.len(), 1);
        let layer = &report.layers[0];
        assert_eq!(layer.degree, 2);
        assert_eq!(layer.bottom.dim, 2);
        // The bottom of M(2) is the regular representation of S_2.
        assert_eq!(layer.bottom.sym, SymmetricGroupModule::regular(2, q()).sym);
        let sum = free(&[0], 6).direct_sum(&free(&[1], 6)).unwrap();
        let report = extract_filtration(&sum).unwrap();
        let degrees: Vec<(usize, usize)> =
            report.layers.iter().map(|l| (l.degree, l.bottom.dim)).collect();
        assert_eq!(degrees, vec![(0, 1), (1, 1)]);
        // The zero module has an empty chain.
        let z = TruncatedFIModule::zero(q(), 4);
        assert!(extract_filtration(&z).unwrap().layers.is_empty());
    }

    #[test]
    fn extraction_of_induced_trivial() {
        let ind = induced_trivial(FieldSpec::PrimeField(2), 6);
        let report = extract_filtration(&ind).unwrap();
        assert_eq!(report.layers.len(), 1);
        assert_eq!(report.layers[0].degree, 2);
        assert_eq!(report.layers[0].bottom.dim, 1);
    }

    #[test]
    fn projectivity_over_group_algebras() {
        // The regular representation is free, hence projective.
        for n in [2usize, 3] {
            for field in [q(), FieldSpec::PrimeField(2), FieldSpec::PrimeField(3)] {
                assert!(is_projective_over_group_algebra(&SymmetricGroupModule::regular(
                    n, field
                )));
            }
        }
        // The trivial representation is projective exactly when the
        // characteristic does not divide the group order.
        assert!(!is_projective_over_group_algebra(&SymmetricGroupModule::trivial(
            2,
            FieldSpec::PrimeField(2)
        )));
        assert!(is_projective_over_group_algebra(&SymmetricGroupModule::trivial(2, q())));
        assert!(is_projective_over_group_algebra(&SymmetricGroupModule::trivial(
            2,
            FieldSpec::PrimeField(3)
        )));
        assert!(!is_projective_over_group_algebra(&SymmetricGroupModule::trivial(
            3,
            FieldSpec::PrimeField(3)
        )));
        assert!(!is_projective_over_group_algebra(&SymmetricGroupModule::trivial(
            3,
            FieldSpec::PrimeField(2)
        )));
        assert!(is_projective_over_group_algebra(&SymmetricGroupModule::trivial(
            3,
            FieldSpec::PrimeField(5)
        )));
    }

    #[test]
    fn pd_classification_cases() {
        for degrees in [&[0][..], &[1], &[2]] {
            let r = classify_pd(&free(degrees, 6));
            assert_eq!(r.classification, PdClassification::Projective);
        }
        // Induced trivial over F2: filtered, but the bottom is not
        // projective over its group algebra.
        let r = classify_pd(&induced_trivial(FieldSpec::PrimeField(2), 6));
        assert_eq!(r.classification, PdClassification::InfinitePd);
        assert_eq!(r.components.len(), 1);
        assert!(!r.components[0].projective);
        // The same module over the rationals is projective.
        let r = classify_pd(&induced_trivial(q(), 6));
        assert_eq!(r.classification, PdClassification::Projective);
        // The point module: infinite via the non-filtered branch.
        let r = classify_pd(&TruncatedFIModule::point_at_zero(q(), 6));
        assert_eq!(r.classification, PdClassification::InfinitePd);
        assert!(r.components.is_empty());
        // The zero module is projective.
        let r = classify_pd(&TruncatedFIModule::zero(q(), 4));
        assert_eq!(r.classification, PdClassification::Projective);
    }

    #[test]
    fn shift_search_cases() {
        assert_eq!(shift_until_filtered(&free(&[2], 6), 3).found, Some(0));
        // The point module becomes (vacuously) filtered after one shift.
        let pt = TruncatedFIModule::point_at_zero(q(), 6);
        assert_eq!(shift_until_filtered(&pt, 3).found, Some(1));
        // The mixed example sheds its torsion after one shift.
        let mixed = crate::module::tests::mixed_example(7);
        assert_eq!(shift_until_filtered(&mixed, 3).found, Some(1));
    }

    #[test]
    fn dimension_polynomials() {
        let m1 = free(&[1], 6);
        let r = extract_filtration(&m1).unwrap();
        let p = dimension_polynomial_check(&m1, &r);
        assert!(p.verified);
        assert_eq!(p.coefficients, vec![(1, 1)]);
        let m2 = free(&[2], 6);
        let p = dimension_polynomial_check(&m2, &extract_filtration(&m2).unwrap());
        assert!(p.verified);
        assert_eq!(p.coefficients, vec![(2, 2)]);
        let ind = induced_trivial(FieldSpec::PrimeField(2), 6);
        let p = dimension_polynomial_check(&ind, &extract_filtration(&ind).unwrap());
        assert!(p.verified);
        assert_eq!(p.coefficients, vec![(2, 1)]);
    }

    #[test]
    fn torsionless_generated_at_zero_is_filtered_with_one_layer() {
        let m = free(&[0, 0], 6);
        let r = extract_filtration(&m).unwrap();
        assert_eq!(r.layers.len(), 1);
        assert_eq!(r.layers[0].degree, 0);
        assert_eq!(r.layers[0].bottom.dim, 2);
    }

    #[test]
    fn derivative_recursion_for_filtered_modules() {
        // The torsionless part of the mixed example has a filtered
        // derivative and is itself filtered.
        let mixed = crate::module::tests::mixed_example(7);
        let (_, torsionless, certified) = mixed.torsion_split(2);
        assert!(certified);
        let dv = torsionless.derivative().unwrap();
        assert_eq!(is_sharp_filtered(&dv).verdict, FiltrationVerdict::Yes);
        assert_eq!(is_sharp_filtered(&torsionless).verdict, FiltrationVerdict::Yes);
    }

    #[test]
    fn two_out_of_three_for_short_exact_sequences() {
        // Sub and quotient filtered when the whole is: a filtration step of
        // M(0) + M(1) against its quotient.
        let v = free(&[0], 6).direct_sum(&free(&[1], 6)).unwrap();
        let step = v.below_degree_submodule(0).unwrap();
        let mut sub = v.submodule_as_module(&step).unwrap();
        sub.set_bounds(Some(DegreeBounds::free(ExtendedDegree::Finite(0))));
        let (quot, _) = v.quotient(&step).unwrap();
        assert_eq!(is_sharp_filtered(&sub).verdict, FiltrationVerdict::Yes);
        assert_eq!(is_sharp_filtered(&quot).verdict, FiltrationVerdict::Yes);
        // Kernel of a surjection between filtered modules is filtered.
        let target = induce(&SymmetricGroupModule::trivial(2, q()), 6).unwrap();
        let cover = homology::minimal_cover(&target);
        let map = ModuleMap::new(cover.free.clone(), target, cover.map.clone()).unwrap();
        let kernel = kernel_as_bounded_module(&map).unwrap();
        assert_eq!(is_sharp_filtered(&kernel).verdict, FiltrationVerdict::Yes);
    }
}
