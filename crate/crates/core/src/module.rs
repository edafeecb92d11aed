//! FI-modules truncated to a finite degree window.
//!
//! A [`TruncatedFIModule`] stores one vector space per degree `0..=N`
//! together with the actions of the generating morphisms only: the standard
//! inclusion out of each degree and the adjacent transpositions of each
//! symmetric group. Arbitrary injections act through the factorisation
//! `sigma . inclusion_chain`.
//!
//! The functors here consume window degrees: the shift and the derivative
//! return modules on window `N - 1`. Constructions coming from a
//! presentation carry [`DegreeBounds`] so that downstream homology can
//! certify results despite the truncation.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::fi::{self, Injection};
use crate::linalg::{self, Matrix, Subspace};
use crate::scalar::{FieldSpec, Scalar};

/// A degree value that may be minus infinity (the convention for the zero
/// module dimension invariants).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExtendedDegree {
    NegInfinity,
    Finite(usize),
}

impl ExtendedDegree {
    pub fn finite(self) -> Option<usize> {
        match self {
            ExtendedDegree::NegInfinity => None,
            ExtendedDegree::Finite(n) => Some(n),
        }
    }

    /// Addition that absorbs into minus infinity.
    pub fn plus(self, k: usize) -> ExtendedDegree {
        match self {
            ExtendedDegree::NegInfinity => ExtendedDegree::NegInfinity,
            ExtendedDegree::Finite(n) => ExtendedDegree::Finite(n + k),
        }
    }

    pub fn minus_one(self) -> ExtendedDegree {
        match self {
            ExtendedDegree::Finite(n) if n >= 1 => ExtendedDegree::Finite(n - 1),
            _ => ExtendedDegree::NegInfinity,
        }
    }

    pub fn max(self, other: ExtendedDegree) -> ExtendedDegree {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl fmt::Display for ExtendedDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedDegree::NegInfinity => write!(f, "-inf"),
            ExtendedDegree::Finite(n) => write!(f, "{n}"),
        }
    }
}

/// Presentation-derived degree bounds: `generators` bounds the generating
/// degree, `relations` bounds the degree of a generating set of relations.
/// These feed the certification horizons in the homology engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeBounds {
    pub generators: ExtendedDegree,
    pub relations: ExtendedDegree,
}

impl DegreeBounds {
    pub fn free(gd: ExtendedDegree) -> Self {
        DegreeBounds { generators: gd, relations: ExtendedDegree::NegInfinity }
    }
}

/// Errors raised by window-sensitive operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleError {
    WindowTooSmall { needed: usize, actual: usize },
    ClosureViolation { degree: usize, detail: String },
    DegreeAboveWindow { degree: usize, window: usize },
    FieldMismatch,
    WindowMismatch,
}

impl fmt::Display for ModuleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleError::WindowTooSmall { needed, actual } => {
                write!(f, "window too small: need at least {needed}, have {actual}")
            }
            ModuleError::ClosureViolation { degree, detail } => {
                write!(f, "submodule not closed at degree {degree}: {detail}")
            }
            ModuleError::DegreeAboveWindow { degree, window } => {
                write!(f, "degree {degree} above window {window}")
            }
            ModuleError::FieldMismatch => write!(f, "field mismatch"),
            ModuleError::WindowMismatch => write!(f, "window mismatch"),
        }
    }
}

/// A multiset of generator degrees describing a free module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeModuleSpec {
    pub generators: Vec<usize>,
}

impl FreeModuleSpec {
    pub fn single(degree: usize) -> Self {
        FreeModuleSpec { generators: vec![degree] }
    }

    pub fn empty() -> Self {
        FreeModuleSpec { generators: Vec::new() }
    }

    pub fn generating_degree(&self) -> ExtendedDegree {
        self.generators
            .iter()
            .copied()
            .max()
            .map_or(ExtendedDegree::NegInfinity, ExtendedDegree::Finite)
    }

    pub fn direct_sum(&self, other: &FreeModuleSpec) -> FreeModuleSpec {
        let mut generators = self.generators.clone();
        generators.extend_from_slice(&other.generators);
        FreeModuleSpec { generators }
    }
}

/// A free module realised on a window, with its basis of pairs
/// (generator, injection) laid out per degree. Generator actions permute
/// the basis, so this form supports fast symbolic application.
#[derive(Debug, Clone)]
pub struct FreeRealization {
    pub spec: FreeModuleSpec,
    pub field: FieldSpec,
    window: usize,
    basis: Vec<Vec<(usize, Injection)>>,
    offsets: Vec<Vec<usize>>,
}

impl FreeRealization {
    pub fn new(spec: FreeModuleSpec, field: FieldSpec, window: usize) -> Result<Self, ModuleError> {
        for &d in &spec.generators {
            if d > window {
                return Err(ModuleError::DegreeAboveWindow { degree: d, window });
            }
        }
        let mut basis = Vec::with_capacity(window + 1);
        let mut offsets = Vec::with_capacity(window + 1);
        for n in 0..=window {
            let mut level = Vec::new();
            let mut offs = Vec::with_capacity(spec.generators.len());
            for (g, &d) in spec.generators.iter().enumerate() {
                offs.push(level.len());
                for a in fi::enumerate_injections(d, n) {
                    level.push((g, a));
                }
            }
            basis.push(level);
            offsets.push(offs);
        }
        Ok(FreeRealization { spec, field, window, basis, offsets })
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn dims(&self) -> Vec<usize> {
        self.basis.iter().map(Vec::len).collect()
    }

    pub fn dim(&self, n: usize) -> usize {
        self.basis[n].len()
    }

    pub fn basis_at(&self, n: usize) -> &[(usize, Injection)] {
        &self.basis[n]
    }

    /// Indices of the basis elements whose injection is a bijection, i.e.
    /// whose generator sits at exactly this degree.
    pub fn bijection_indices(&self, n: usize) -> Vec<usize> {
        self.basis[n]
            .iter()
            .enumerate()
            .filter(|(_, (_, a))| a.is_bijection())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn index_of(&self, n: usize, generator: usize, a: &Injection) -> usize {
        self.offsets[n][generator] + a.lex_rank()
    }

    /// Index of `beta . alpha` where `alpha` is the basis injection at
    /// `idx` in degree `n` and `beta` is any injection `[n] -> [m]`.
    pub fn push_index(&self, n: usize, idx: usize, beta: &Injection) -> usize {
        let (g, a) = &self.basis[n][idx];
        self.index_of(beta.target(), *g, &beta.compose(a))
    }

    /// Applies an injection `[n] -> [m]` to a coordinate vector at degree
    /// `n` by permuting basis indices.
    pub fn apply_injection(&self, beta: &Injection, n: usize, v: &[Scalar]) -> Vec<Scalar> {
        let m = beta.target();
        let mut out = vec![self.field.zero(); self.dim(m)];
        for (idx, x) in v.iter().enumerate() {
            if !x.is_zero() {
                out[self.push_index(n, idx, beta)] = x.clone();
            }
        }
        out
    }

    /// Materialises the generator actions as permutation matrices.
    pub fn to_module(&self) -> TruncatedFIModule {
        let dims = self.dims();
        let mut incl = Vec::with_capacity(self.window);
        for n in 0..self.window {
            let pi = Injection::standard_inclusion(n);
            let mut m = Matrix::zero(self.field, dims[n + 1], dims[n]);
            for idx in 0..dims[n] {
                m.set(self.push_index(n, idx, &pi), idx, self.field.one());
            }
            incl.push(m);
        }
        let mut sym = Vec::with_capacity(self.window + 1);
        for n in 0..=self.window {
            let mut level = Vec::new();
            for i in 1..n {
                let s = Injection::transposition(n, i);
                let mut m = Matrix::zero(self.field, dims[n], dims[n]);
                for idx in 0..dims[n] {
                    m.set(self.push_index(n, idx, &s), idx, self.field.one());
                }
                level.push(m);
            }
            sym.push(level);
        }
        TruncatedFIModule {
            field: self.field,
            dims,
            incl,
            sym,
            bounds: Some(DegreeBounds::free(self.spec.generating_degree())),
        }
    }

    /// Smallest submodule of the free module containing the given vectors,
    /// using symbolic index permutation for the generator actions.
    pub fn submodule_generated_by(&self, vectors: &[(usize, Vec<Scalar>)]) -> GradedSubmodule {
        let dims = self.dims();
        close_submodule(
            self.field,
            &dims,
            vectors,
            &|n, i, v| self.apply_injection(&Injection::transposition(n, i), n, v),
            &|n, v| self.apply_injection(&Injection::standard_inclusion(n), n, v),
        )
    }
}

/// A family of subspaces, one per degree, closed under the module actions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedSubmodule {
    pub values: Vec<Subspace>,
    /// Upper bound for the degrees of a generating set (used to propagate
    /// relation-degree bounds into quotients).
    pub generated_in: ExtendedDegree,
}

impl GradedSubmodule {
    pub fn zero(field: FieldSpec, dims: &[usize]) -> Self {
        GradedSubmodule {
            values: dims.iter().map(|&d| Subspace::zero(field, d)).collect(),
            generated_in: ExtendedDegree::NegInfinity,
        }
    }

    pub fn dims(&self) -> Vec<usize> {
        self.values.iter().map(Subspace::dim).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Subspace::is_zero)
    }

    pub fn top_degree(&self) -> ExtendedDegree {
        self.values
            .iter()
            .enumerate()
            .rev()
            .find(|(_, s)| !s.is_zero())
            .map_or(ExtendedDegree::NegInfinity, |(n, _)| ExtendedDegree::Finite(n))
    }
}

fn close_submodule(
    field: FieldSpec,
    dims: &[usize],
    vectors: &[(usize, Vec<Scalar>)],
    apply_sym: &dyn Fn(usize, usize, &[Scalar]) -> Vec<Scalar>,
    apply_incl: &dyn Fn(usize, &[Scalar]) -> Vec<Scalar>,
) -> GradedSubmodule {
    let window = dims.len() - 1;
    let mut values: Vec<Subspace> = dims.iter().map(|&d| Subspace::zero(field, d)).collect();
    let mut generated_in = ExtendedDegree::NegInfinity;
    for (n, v) in vectors {
        assert!(*n <= window, "seed degree above window");
        assert_eq!(v.len(), dims[*n], "seed dimension mismatch");
        if values[*n].insert(v.clone()) && v.iter().any(|x| !x.is_zero()) {
            generated_in = generated_in.max(ExtendedDegree::Finite(*n));
        }
    }
    // Transpositions act within a degree and inclusions only push upward,
    // so one upward sweep with a symmetric-group orbit walk per degree
    // reaches the closure.
    for n in 0..=window {
        let mut queue: Vec<Vec<Scalar>> = values[n].basis().to_vec();
        while let Some(b) = queue.pop() {
            for i in 1..n {
                let moved = apply_sym(n, i, &b);
                if values[n].insert(moved.clone()) {
                    queue.push(moved);
                }
            }
        }
        if n < window {
            let lifted: Vec<Vec<Scalar>> =
                values[n].basis().iter().map(|b| apply_incl(n, b)).collect();
            for v in lifted {
                values[n + 1].insert(v);
            }
        }
    }
    GradedSubmodule { values, generated_in }
}

/// Outcome of a full relation check, listing every violated identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<RelationViolation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationViolation {
    pub degree: usize,
    pub relation: String,
    pub first_difference: Option<(usize, usize)>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// An FI-module on degrees `0..=N` over an exact field.
#[derive(Clone)]
pub struct TruncatedFIModule {
    field: FieldSpec,
    dims: Vec<usize>,
    /// `incl[n]`: the action of the standard inclusion, `V_n -> V_{n+1}`.
    incl: Vec<Matrix>,
    /// `sym[n][i-1]`: the action of the adjacent transposition `(i, i+1)`
    /// on `V_n`, for `1 <= i < n`.
    sym: Vec<Vec<Matrix>>,
    bounds: Option<DegreeBounds>,
}

impl PartialEq for TruncatedFIModule {
    // Equality on the nose: same dimension sequence and action matrices.
    // Certification metadata is not part of the module.
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.dims == other.dims
            && self.incl == other.incl
            && self.sym == other.sym
    }
}

impl Eq for TruncatedFIModule {}

impl fmt::Debug for TruncatedFIModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncatedFIModule over {} dims {:?}", self.field, self.dims)
    }
}

impl TruncatedFIModule {
    pub fn new(
        field: FieldSpec,
        dims: Vec<usize>,
        incl: Vec<Matrix>,
        sym: Vec<Vec<Matrix>>,
    ) -> Result<Self, String> {
        if dims.is_empty() {
            return Err("empty dimension sequence".into());
        }
        let window = dims.len() - 1;
        if incl.len() != window {
            return Err(alloc::format!("expected {window} inclusion matrices, got {}", incl.len()));
        }
        if sym.len() != window + 1 {
            return Err(alloc::format!(
                "expected {} transposition families, got {}",
                window + 1,
                sym.len()
            ));
        }
        for (n, m) in incl.iter().enumerate() {
            if m.rows() != dims[n + 1] || m.cols() != dims[n] {
                return Err(alloc::format!("inclusion at degree {n} has wrong shape"));
            }
            if m.field() != field {
                return Err(alloc::format!("inclusion at degree {n} over wrong field"));
            }
        }
        for (n, fam) in sym.iter().enumerate() {
            if fam.len() != n.saturating_sub(1) {
                return Err(alloc::format!(
                    "degree {n} needs {} transposition matrices, got {}",
                    n.saturating_sub(1),
                    fam.len()
                ));
            }
            for (i, m) in fam.iter().enumerate() {
                if m.rows() != dims[n] || m.cols() != dims[n] || m.field() != field {
                    return Err(alloc::format!(
                        "transposition {} at degree {n} has wrong shape or field",
                        i + 1
                    ));
                }
            }
        }
        Ok(TruncatedFIModule { field, dims, incl, sym, bounds: None })
    }

    pub fn zero(field: FieldSpec, window: usize) -> Self {
        let dims = vec![0; window + 1];
        let incl = (0..window).map(|_| Matrix::zero(field, 0, 0)).collect();
        let sym = (0..=window)
            .map(|n| (1..n).map(|_| Matrix::zero(field, 0, 0)).collect())
            .collect();
        TruncatedFIModule {
            field,
            dims,
            incl,
            sym,
            bounds: Some(DegreeBounds {
                generators: ExtendedDegree::NegInfinity,
                relations: ExtendedDegree::NegInfinity,
            }),
        }
    }

    /// The free module on the given generator degrees.
    pub fn free(
        spec: &FreeModuleSpec,
        field: FieldSpec,
        window: usize,
    ) -> Result<Self, ModuleError> {
        Ok(FreeRealization::new(spec.clone(), field, window)?.to_module())
    }

    /// The module `k` concentrated in degree 0: the quotient of the free
    /// module on one degree-0 generator by everything above degree 0.
    pub fn point_at_zero(field: FieldSpec, window: usize) -> Self {
        let free = FreeRealization::new(FreeModuleSpec::single(0), field, window)
            .expect("degree 0 fits any window");
        let module = free.to_module();
        if window == 0 {
            return module;
        }
        let mut seed = vec![field.zero(); 1];
        seed[0] = field.one();
        let sub = free.submodule_generated_by(&[(1, seed)]);
        let mut q = module.quotient(&sub).expect("closed by construction").0;
        q.bounds = Some(DegreeBounds {
            generators: ExtendedDegree::Finite(0),
            relations: ExtendedDegree::Finite(1),
        });
        q
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn window(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, n: usize) -> usize {
        self.dims[n]
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    pub fn incl_matrix(&self, n: usize) -> &Matrix {
        &self.incl[n]
    }

    /// The action of the adjacent transposition `(i, i+1)` on `V_n`,
    /// 1-based `i`.
    pub fn sym_matrix(&self, n: usize, i: usize) -> &Matrix {
        &self.sym[n][i - 1]
    }

    pub fn bounds(&self) -> Option<DegreeBounds> {
        self.bounds
    }

    pub fn set_bounds(&mut self, bounds: Option<DegreeBounds>) {
        self.bounds = bounds;
    }

    pub fn with_bounds(mut self, bounds: DegreeBounds) -> Self {
        self.bounds = Some(bounds);
        self
    }

    /// Applies a bijection of `[n]` to a vector in `V_n` through its
    /// adjacent-transposition word.
    pub fn apply_permutation(&self, n: usize, sigma: &Injection, v: &[Scalar]) -> Vec<Scalar> {
        let mut cur = v.to_vec();
        for i in sigma.adjacent_word() {
            cur = self.sym_matrix(n, i).mul_vec(&cur);
        }
        cur
    }

    /// Applies an arbitrary injection `[m] -> [n]` to a vector in `V_m` by
    /// factoring through the stored generator actions.
    pub fn apply_injection(&self, alpha: &Injection, v: &[Scalar]) -> Vec<Scalar> {
        let (m, n) = (alpha.source(), alpha.target());
        assert!(n <= self.window(), "injection target above window");
        assert_eq!(v.len(), self.dims[m], "vector dimension mismatch");
        let mut cur = v.to_vec();
        for k in m..n {
            cur = self.incl[k].mul_vec(&cur);
        }
        self.apply_permutation(n, &alpha.factor_permutation(), &cur)
    }

    /// Checks every defining relation of a truncated FI-module: the
    /// symmetric group presentations, compatibility of transpositions with
    /// the inclusions, and invariance of two-step inclusion images under
    /// the transposition of the two new slots. Together these make the
    /// stored matrices the generator actions of an honest functor.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let mut check = |degree: usize, relation: String, lhs: &Matrix, rhs: &Matrix| {
            if lhs != rhs {
                let mut diff = None;
                'outer: for r in 0..lhs.rows() {
                    for c in 0..lhs.cols() {
                        if lhs.get(r, c) != rhs.get(r, c) {
                            diff = Some((r, c));
                            break 'outer;
                        }
                    }
                }
                violations.push(RelationViolation { degree, relation, first_difference: diff });
            }
        };
        let w = self.window();
        for n in 0..=w {
            let id = Matrix::identity(self.field, self.dims[n]);
            for i in 1..n {
                let s = self.sym_matrix(n, i);
                check(n, alloc::format!("s{i}^2 = id"), &s.mul(s), &id);
            }
            for i in 1..n.saturating_sub(1) {
                let a = self.sym_matrix(n, i);
                let b = self.sym_matrix(n, i + 1);
                check(
                    n,
                    alloc::format!("braid s{i} s{} s{i} = s{} s{i} s{}", i + 1, i + 1, i + 1),
                    &a.mul(&b.mul(a)),
                    &b.mul(&a.mul(b)),
                );
            }
            for i in 1..n {
                for j in i + 2..n {
                    let a = self.sym_matrix(n, i);
                    let b = self.sym_matrix(n, j);
                    check(n, alloc::format!("s{i} s{j} = s{j} s{i}"), &a.mul(b), &b.mul(a));
                }
            }
        }
        for n in 0..w {
            for i in 1..n {
                // The transposition (i, i+1) of degree n corresponds to
                // (i+1, i+2) one degree up under the self-embedding.
                check(
                    n,
                    alloc::format!("inclusion compatibility with s{i}"),
                    &self.sym_matrix(n + 1, i + 1).mul(&self.incl[n]),
                    &self.incl[n].mul(self.sym_matrix(n, i)),
                );
            }
        }
        for n in 0..w.saturating_sub(1) {
            // The two freshly added slots of a double inclusion are
            // interchangeable.
            let two_step = self.incl[n + 1].mul(&self.incl[n]);
            check(
                n,
                "two-step image fixed by swapping the new slots".into(),
                &self.sym_matrix(n + 2, 1).mul(&two_step),
                &two_step,
            );
        }
        ValidationReport { violations }
    }

    /// Truncation: zeroes every degree below `n`, keeps the rest.
    pub fn truncate(&self, n: usize) -> Result<TruncatedFIModule, ModuleError> {
        let w = self.window();
        if n > w {
            return Err(ModuleError::DegreeAboveWindow { degree: n, window: w });
        }
        if n == 0 {
            return Ok(self.clone());
        }
        let mut dims = self.dims.clone();
        for d in dims.iter_mut().take(n) {
            *d = 0;
        }
        let mut incl = Vec::with_capacity(w);
        for k in 0..w {
            if k + 1 < n {
                incl.push(Matrix::zero(self.field, 0, 0));
            } else if k + 1 == n {
                incl.push(Matrix::zero(self.field, dims[k + 1], 0));
            } else {
                incl.push(self.incl[k].clone());
            }
        }
        let mut sym = Vec::with_capacity(w + 1);
        for k in 0..=w {
            if k < n {
                sym.push((1..k).map(|_| Matrix::zero(self.field, 0, 0)).collect());
            } else {
                sym.push(self.sym[k].clone());
            }
        }
        // Truncation invalidates presentation bounds (new generators appear
        // at the cut degree).
        Ok(TruncatedFIModule { field: self.field, dims, incl, sym, bounds: None })
    }

    /// Forgets the top degrees, keeping `0..=new_window`.
    pub fn restrict_window(&self, new_window: usize) -> Result<TruncatedFIModule, ModuleError> {
        let w = self.window();
        if new_window > w {
            return Err(ModuleError::WindowTooSmall { needed: new_window, actual: w });
        }
        Ok(TruncatedFIModule {
            field: self.field,
            dims: self.dims[..=new_window].to_vec(),
            incl: self.incl[..new_window].to_vec(),
            sym: self.sym[..=new_window].to_vec(),
            bounds: self.bounds,
        })
    }

    /// The shift: degree `n` becomes degree `n + 1`, the symmetric groups
    /// act through the self-embedding, and the new inclusion action is the
    /// old one twisted by the transposition of the two fresh slots. The
    /// window shrinks by one.
    pub fn shift(&self) -> Result<TruncatedFIModule, ModuleError> {
        let w = self.window();
        if w == 0 {
            return Err(ModuleError::WindowTooSmall { needed: 1, actual: 0 });
        }
        let dims: Vec<usize> = self.dims[1..].to_vec();
        let mut sym = Vec::with_capacity(w);
        for n in 0..w {
            // s_i at shifted degree n is s_{i+1} at original degree n+1.
            let fam: Vec<Matrix> = (1..n).map(|i| self.sym_matrix(n + 1, i + 1).clone()).collect();
            sym.push(fam);
        }
        let mut incl = Vec::with_capacity(w - 1);
        for n in 0..w - 1 {
            // The embedded inclusion is the original one followed by the
            // swap of the two lowest slots of degree n+2.
            incl.push(self.sym_matrix(n + 2, 1).mul(&self.incl[n + 1]));
        }
        Ok(TruncatedFIModule { field: self.field, dims, incl, sym, bounds: self.bounds })
    }

    /// Iterated shift.
    pub fn shift_by(&self, d: usize) -> Result<TruncatedFIModule, ModuleError> {
        let mut cur = self.clone();
        for _ in 0..d {
            cur = cur.shift()?;
        }
        Ok(cur)
    }

    /// The natural map into the shift; its component at degree `n` is the
    /// stored inclusion action.
    pub fn natural_map(&self) -> Result<ModuleMap, ModuleError> {
        let shifted = self.shift()?;
        let source = self.restrict_window(self.window() - 1)?;
        let components = self.incl.clone();
        Ok(ModuleMap { source, target: shifted, components })
    }

    /// The derivative: cokernel of the natural map into the shift.
    pub fn derivative(&self) -> Result<TruncatedFIModule, ModuleError> {
        Ok(self.derivative_with_data()?.0)
    }

    pub fn derivative_with_data(&self) -> Result<(TruncatedFIModule, QuotientData), ModuleError> {
        let shifted = self.shift()?;
        let w = shifted.window();
        let values: Vec<Subspace> =
            (0..=w).map(|n| linalg::image(&self.incl[n])).collect();
        let image = GradedSubmodule {
            values,
            generated_in: self.bounds.map_or(ExtendedDegree::NegInfinity, |b| b.generators),
        };
        let (mut module, data) = shifted.quotient(&image)?;
        module.bounds = self.bounds.map(|b| DegreeBounds {
            generators: b.generators.minus_one(),
            relations: b.relations.max(b.generators),
        });
        Ok((module, data))
    }

    /// The explicit natural isomorphism between shift-then-derivative and
    /// derivative-then-shift, induced degreewise by the transposition of
    /// the two lowest slots. Returns the verified map.
    pub fn sigma_d_commute_iso(&self) -> Result<ModuleMap, ModuleError> {
        let w = self.window();
        if w < 2 {
            return Err(ModuleError::WindowTooSmall { needed: 2, actual: w });
        }
        // Source: shift of the derivative; target: derivative of the shift.
        let (derivative, d_data) = self.derivative_with_data()?;
        let source = derivative.shift()?;
        let shifted = self.shift()?;
        let (target, t_data) = shifted.derivative_with_data()?;
        let mut components = Vec::with_capacity(w - 1);
        for n in 0..=w - 2 {
            // Both sides are quotients of V_{n+2}; the map descends from
            // the action of the transposition (1 2) of degree n+2.
            let swap = self.sym_matrix(n + 2, 1);
            let proj_t = &t_data.projections[n];
            let sect_cols = &d_data.free_columns[n + 1];
            let mut comp = Matrix::zero(self.field, target.dim(n), source.dim(n));
            for (j, &c) in sect_cols.iter().enumerate() {
                let col = proj_t.mul_vec(&swap.column(c));
                for (r, x) in col.into_iter().enumerate() {
                    comp.set(r, j, x);
                }
            }
            components.push(comp);
        }
        let map = ModuleMap { source, target, components };
        map.verify().map_err(|detail| ModuleError::ClosureViolation { degree: 0, detail })?;
        for (n, comp) in map.components.iter().enumerate() {
            if comp.rows() != comp.cols() || comp.rank() != comp.rows() {
                return Err(ModuleError::ClosureViolation {
                    degree: n,
                    detail: "commuting map is not invertible".into(),
                });
            }
        }
        Ok(map)
    }

    /// Smallest submodule containing the given vectors.
    pub fn submodule_generated_by(&self, vectors: &[(usize, Vec<Scalar>)]) -> GradedSubmodule {
        close_submodule(
            self.field,
            &self.dims,
            vectors,
            &|n, i, v| self.sym_matrix(n, i).mul_vec(v),
            &|n, v| self.incl[n].mul_vec(v),
        )
    }

    /// The submodule generated by all degrees `<= n`.
    pub fn below_degree_submodule(&self, n: usize) -> Result<GradedSubmodule, ModuleError> {
        let w = self.window();
        if n > w {
            return Err(ModuleError::DegreeAboveWindow { degree: n, window: w });
        }
        let mut seeds = Vec::new();
        for k in 0..=n {
            for j in 0..self.dims[k] {
                let mut v = vec![self.field.zero(); self.dims[k]];
                v[j] = self.field.one();
                seeds.push((k, v));
            }
        }
        Ok(self.submodule_generated_by(&seeds))
    }

    /// Verifies that `w` is closed under every generator action.
    pub fn check_submodule(&self, w: &GradedSubmodule) -> Result<(), ModuleError> {
        if w.values.len() != self.dims.len() {
            return Err(ModuleError::WindowMismatch);
        }
        for n in 0..=self.window() {
            if w.values[n].ambient_dim() != self.dims[n] {
                return Err(ModuleError::ClosureViolation {
                    degree: n,
                    detail: "ambient dimension mismatch".into(),
                });
            }
            for b in w.values[n].basis() {
                for i in 1..n {
                    if !w.values[n].contains(&self.sym_matrix(n, i).mul_vec(b)) {
                        return Err(ModuleError::ClosureViolation {
                            degree: n,
                            detail: alloc::format!("not stable under transposition {i}"),
                        });
                    }
                }
                if n < self.window() && !w.values[n + 1].contains(&self.incl[n].mul_vec(b)) {
                    return Err(ModuleError::ClosureViolation {
                        degree: n,
                        detail: "inclusion image escapes".into(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Quotient by a graded submodule, with induced actions on canonical
    /// complement coordinates. Trusts that `w` is closed; see
    /// [`TruncatedFIModule::quotient_checked`].
    pub fn quotient(
        &self,
        w: &GradedSubmodule,
    ) -> Result<(TruncatedFIModule, QuotientData), ModuleError> {
        if w.values.len() != self.dims.len() {
            return Err(ModuleError::WindowMismatch);
        }
        let window = self.window();
        let mut projections = Vec::with_capacity(window + 1);
        let mut free_columns = Vec::with_capacity(window + 1);
        let mut dims = Vec::with_capacity(window + 1);
        for n in 0..=window {
            let (p, _) = linalg::quotient_basis(self.dims[n], &w.values[n]);
            let free: Vec<usize> =
                (0..self.dims[n]).filter(|c| !w.values[n].pivots().contains(c)).collect();
            dims.push(p.rows());
            projections.push(p);
            free_columns.push(free);
        }
        let induced = |a: &Matrix, proj: &Matrix, cols: &[usize]| -> Matrix {
            // Section columns are standard basis vectors, so each induced
            // column is the projection of a single column of the action.
            let mut out = Matrix::zero(self.field, proj.rows(), cols.len());
            for (j, &c) in cols.iter().enumerate() {
                let col = proj.mul_vec(&a.column(c));
                for (r, x) in col.into_iter().enumerate() {
                    out.set(r, j, x);
                }
            }
            out
        };
        let mut incl = Vec::with_capacity(window);
        for n in 0..window {
            incl.push(induced(&self.incl[n], &projections[n + 1], &free_columns[n]));
        }
        let mut sym = Vec::with_capacity(window + 1);
        for n in 0..=window {
            let fam: Vec<Matrix> = (1..n)
                .map(|i| induced(self.sym_matrix(n, i), &projections[n], &free_columns[n]))
                .collect();
            sym.push(fam);
        }
        let bounds = self.bounds.map(|b| DegreeBounds {
            generators: b.generators,
            relations: b.relations.max(w.generated_in),
        });
        let module = TruncatedFIModule { field: self.field, dims, incl, sym, bounds };
        Ok((module, QuotientData { projections, free_columns }))
    }

    /// Quotient that first verifies closure of `w`.
    pub fn quotient_checked(
        &self,
        w: &GradedSubmodule,
    ) -> Result<(TruncatedFIModule, QuotientData), ModuleError> {
        self.check_submodule(w)?;
        self.quotient(w)
    }

    /// Realises a graded submodule as a module in its own right, in the
    /// coordinates of the canonical echelon bases.
    pub fn submodule_as_module(&self, w: &GradedSubmodule) -> Result<TruncatedFIModule, ModuleError> {
        let window = self.window();
        let express = |sub: &Subspace, v: &[Scalar], degree: usize| -> Result<Vec<Scalar>, ModuleError> {
            sub.coordinates(v).ok_or_else(|| ModuleError::ClosureViolation {
                degree,
                detail: "image escapes the submodule".into(),
            })
        };
        let dims: Vec<usize> = w.dims();
        let mut incl = Vec::with_capacity(window);
        for n in 0..window {
            let mut cols = Vec::with_capacity(dims[n]);
            for b in w.values[n].basis() {
                cols.push(express(&w.values[n + 1], &self.incl[n].mul_vec(b), n)?);
            }
            incl.push(Matrix::from_columns(self.field, dims[n + 1], cols));
        }
        let mut sym = Vec::with_capacity(window + 1);
        for n in 0..=window {
            let mut fam = Vec::new();
            for i in 1..n {
                let mut cols = Vec::with_capacity(dims[n]);
                for b in w.values[n].basis() {
                    cols.push(express(&w.values[n], &self.sym_matrix(n, i).mul_vec(b), n)?);
                }
                fam.push(Matrix::from_columns(self.field, dims[n], cols));
            }
            sym.push(fam);
        }
        Ok(TruncatedFIModule { field: self.field, dims, incl, sym, bounds: None })
    }

    pub fn direct_sum(&self, other: &TruncatedFIModule) -> Result<TruncatedFIModule, ModuleError> {
        if self.field != other.field {
            return Err(ModuleError::FieldMismatch);
        }
        if self.window() != other.window() {
            return Err(ModuleError::WindowMismatch);
        }
        let w = self.window();
        let dims = (0..=w).map(|n| self.dims[n] + other.dims[n]).collect();
        let incl = (0..w).map(|n| self.incl[n].direct_sum(&other.incl[n])).collect();
        let sym = (0..=w)
            .map(|n| {
                (1..n)
                    .map(|i| self.sym_matrix(n, i).direct_sum(other.sym_matrix(n, i)))
                    .collect()
            })
            .collect();
        let bounds = match (self.bounds, other.bounds) {
            (Some(a), Some(b)) => Some(DegreeBounds {
                generators: a.generators.max(b.generators),
                relations: a.relations.max(b.relations),
            }),
            _ => None,
        };
        Ok(TruncatedFIModule { field: self.field, dims, incl, sym, bounds })
    }

    /// Vectors at degree `n` that die on the way to the window edge: the
    /// kernel of the composite inclusion into the top degree.
    pub fn torsion_submodule(&self) -> GradedSubmodule {
        let w = self.window();
        let mut values = vec![Subspace::zero(self.field, 0); w + 1];
        values[w] = Subspace::zero(self.field, self.dims[w]);
        for n in (0..w).rev() {
            let (proj, _) = linalg::quotient_basis(self.dims[n + 1], &values[n + 1]);
            values[n] = linalg::kernel(&proj.mul(&self.incl[n]));
        }
        let generated_in = values
            .iter()
            .enumerate()
            .rev()
            .find(|(_, s)| !s.is_zero())
            .map_or(ExtendedDegree::NegInfinity, |(n, _)| ExtendedDegree::Finite(n));
        GradedSubmodule { values, generated_in }
    }

    /// Splits off the torsion part: returns the torsion submodule, the
    /// torsionless quotient, and a certification flag that holds when the
    /// trailing `margin` degrees of the window have injective inclusions
    /// (so no torsion can be hiding near the edge).
    pub fn torsion_split(&self, margin: usize) -> (GradedSubmodule, TruncatedFIModule, bool) {
        let torsion = self.torsion_submodule();
        let (mut quotient, _) = self.quotient(&torsion).expect("torsion part is closed");
        let (td, certified) = self.torsion_degree(margin);
        if let Some(b) = self.bounds {
            quotient.bounds = Some(DegreeBounds {
                generators: b.generators,
                relations: b.relations.max(td),
            });
        }
        (torsion, quotient, certified)
    }

    /// The top degree carrying a vector killed by the inclusion out of its
    /// degree, or minus infinity; certified when the trailing `margin`
    /// degrees have injective inclusions.
    pub fn torsion_degree(&self, margin: usize) -> (ExtendedDegree, bool) {
        let w = self.window();
        let mut td = ExtendedDegree::NegInfinity;
        for n in (0..w).rev() {
            if !linalg::kernel(&self.incl[n]).is_zero() {
                td = ExtendedDegree::Finite(n);
                break;
            }
        }
        let certified = margin <= w
            && (w - margin..w).all(|n| linalg::kernel(&self.incl[n]).is_zero());
        (td, certified)
    }
}

/// Projections and complement coordinates of a degreewise quotient.
#[derive(Debug, Clone)]
pub struct QuotientData {
    pub projections: Vec<Matrix>,
    pub free_columns: Vec<Vec<usize>>,
}

/// A degreewise linear map commuting with all generator actions.
#[derive(Debug, Clone)]
pub struct ModuleMap {
    pub source: TruncatedFIModule,
    pub target: TruncatedFIModule,
    pub components: Vec<Matrix>,
}

impl ModuleMap {
    pub fn new(
        source: TruncatedFIModule,
        target: TruncatedFIModule,
        components: Vec<Matrix>,
    ) -> Result<Self, String> {
        let map = ModuleMap { source, target, components };
        map.verify()?;
        Ok(map)
    }

    pub fn window(&self) -> usize {
        self.source.window()
    }

    /// Checks shapes and exact commutation with every generator action.
    pub fn verify(&self) -> Result<(), String> {
        let w = self.source.window();
        if self.target.window() != w {
            return Err("source and target windows differ".into());
        }
        if self.components.len() != w + 1 {
            return Err("wrong number of components".into());
        }
        for n in 0..=w {
            let c = &self.components[n];
            if c.rows() != self.target.dim(n) || c.cols() != self.source.dim(n) {
                return Err(alloc::format!("component at degree {n} has wrong shape"));
            }
        }
        for n in 0..w {
            let lhs = self.components[n + 1].mul(self.source.incl_matrix(n));
            let rhs = self.target.incl_matrix(n).mul(&self.components[n]);
            if lhs != rhs {
                return Err(alloc::format!("does not commute with inclusion at degree {n}"));
            }
        }
        for n in 0..=w {
            for i in 1..n {
                let lhs = self.components[n].mul(self.source.sym_matrix(n, i));
                let rhs = self.target.sym_matrix(n, i).mul(&self.components[n]);
                if lhs != rhs {
                    return Err(alloc::format!(
                        "does not commute with transposition {i} at degree {n}"
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn kernel(&self) -> GradedSubmodule {
        let values: Vec<Subspace> =
            self.components.iter().map(linalg::kernel).collect();
        let generated_in = values
            .iter()
            .enumerate()
            .rev()
            .find(|(_, s)| !s.is_zero())
            .map_or(ExtendedDegree::NegInfinity, |(n, _)| ExtendedDegree::Finite(n));
        GradedSubmodule { values, generated_in }
    }

    pub fn image(&self) -> GradedSubmodule {
        let values: Vec<Subspace> = self.components.iter().map(linalg::image).collect();
        let generated_in = self
            .source
            .bounds()
            .map_or(ExtendedDegree::NegInfinity, |b| b.generators);
        GradedSubmodule { values, generated_in }
    }

    /// Cokernel with its quotient data.
    pub fn cokernel(&self) -> (TruncatedFIModule, QuotientData) {
        let image = self.image();
        let (mut module, data) =
            self.target.quotient(&image).expect("images of module maps are closed");
        module.set_bounds(match (self.source.bounds(), self.target.bounds()) {
            (Some(s), Some(t)) => Some(DegreeBounds {
                generators: t.generators,
                relations: t.relations.max(s.generators),
            }),
            _ => None,
        });
        (module, data)
    }

    pub fn is_surjective(&self) -> bool {
        self.components
            .iter()
            .enumerate()
            .all(|(n, c)| c.rank() == self.target.dim(n))
    }

    pub fn is_injective(&self) -> bool {
        self.components.iter().all(|c| linalg::kernel(c).is_zero())
    }

    /// Composes `self` after `first`.
    pub fn compose(&self, first: &ModuleMap) -> ModuleMap {
        assert_eq!(first.target, self.source, "object mismatch in composition");
        let components = self
            .components
            .iter()
            .zip(&first.components)
            .map(|(g, f)| g.mul(f))
            .collect();
        ModuleMap { source: first.source.clone(), target: self.target.clone(), components }
    }
}

/// Applies the derivative functor to a map: both sides become cokernels of
/// their natural maps into the shift, and the component at degree `n` is
/// induced by the original component at degree `n + 1`.
pub fn derivative_map(f: &ModuleMap) -> Result<ModuleMap, ModuleError> {
    let (ds, sdata) = f.source.derivative_with_data()?;
    let (dt, tdata) = f.target.derivative_with_data()?;
    let field = f.source.field();
    let mut components = Vec::with_capacity(ds.window() + 1);
    for n in 0..=ds.window() {
        let mut cols = Vec::with_capacity(ds.dim(n));
        for &c in &sdata.free_columns[n] {
            cols.push(tdata.projections[n].mul_vec(&f.components[n + 1].column(c)));
        }
        components.push(Matrix::from_columns(field, dt.dim(n), cols));
    }
    Ok(ModuleMap { source: ds, target: dt, components })
}

/// A sequence of vector spaces with symmetric group actions and zero
/// connecting maps; the shape of homology values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedVectorSequence {
    pub field: FieldSpec,
    pub dims: Vec<usize>,
    /// Per degree, the actions of the adjacent transpositions.
    pub sym: Vec<Vec<Matrix>>,
}

impl GradedVectorSequence {
    pub fn zero(field: FieldSpec, window: usize) -> Self {
        GradedVectorSequence {
            field,
            dims: vec![0; window + 1],
            sym: (0..=window).map(|n| vec![Matrix::zero(field, 0, 0); n.saturating_sub(1)]).collect(),
        }
    }

    pub fn window(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    pub fn top_degree(&self) -> ExtendedDegree {
        self.dims
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &d)| d > 0)
            .map_or(ExtendedDegree::NegInfinity, |(n, _)| ExtendedDegree::Finite(n))
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn free(degrees: &[usize], window: usize) -> TruncatedFIModule {
        TruncatedFIModule::free(
            &FreeModuleSpec { generators: degrees.to_vec() },
            q(),
            window,
        )
        .unwrap()
    }

    #[test]
    fn free_module_dimensions() {
        assert_eq!(free(&[1], 4).dims(), &[0, 1, 2, 3, 4]);
        assert_eq!(free(&[0], 4).dims(), &[1, 1, 1, 1, 1]);
        assert_eq!(free(&[2], 4).dims(), &[0, 0, 2, 6, 12]);
        assert_eq!(free(&[3], 6).dims(), &[0, 0, 0, 6, 24, 60, 120]);
    }

    #[test]
    fn free_modules_validate() {
        for degrees in [&[0][..], &[1], &[2], &[0, 2], &[1, 1, 3]] {
            let report = free(degrees, 5).validate();
            assert!(report.is_valid(), "violations: {:?}", report.violations);
        }
    }

    #[test]
    fn validation_flags_a_corrupted_transposition() {
        let mut m = free(&[2], 4);
        let bad = Matrix::identity(q(), m.dim(3));
        m.sym[3][0] = bad;
        let report = m.validate();
        assert!(!report.is_valid());
        assert!(report
            .violations
            .iter()
            .any(|v| v.relation.contains("compatibility") || v.relation.contains("braid")));
    }

    #[test]
    fn validation_needs_the_two_step_relation() {
        // dims (1,1,1) with both inclusions the identity but s_1 acting by
        // -1 passes the symmetric group and compatibility checks yet is not
        // a functor; the two-step check must catch it.
        let dims = vec![1, 1, 1];
        let incl = vec![Matrix::identity(q(), 1), Matrix::identity(q(), 1)];
        let neg = Matrix::from_rows(q(), 1, vec![vec![q().from_integer(-1)]]);
        let sym = vec![vec![], vec![], vec![neg]];
        let m = TruncatedFIModule::new(q(), dims, incl, sym).unwrap();
        let report = m.validate();
        assert!(!report.is_valid());
        assert!(report.violations.iter().all(|v| v.relation.contains("two-step")));
    }

    #[test]
    fn truncation_examples() {
        let m0 = free(&[0], 4);
        let t = m0.truncate(1).unwrap();
        assert_eq!(t.dims(), &[0, 1, 1, 1, 1]);
        assert_eq!(m0.truncate(0).unwrap(), m0);
        let top = m0.truncate(4).unwrap();
        assert_eq!(top.dims(), &[0, 0, 0, 0, 1]);
        assert!(t.validate().is_valid());
    }

    #[test]
    fn shift_of_free_modules() {
        // Shift of M(1) has the dimensions of M(1) + M(0).
        let m1 = free(&[1], 5);
        let s = m1.shift().unwrap();
        assert_eq!(s.dims(), &[1, 2, 3, 4, 5]);
        assert!(s.validate().is_valid());
        // Shift of M(0) is M(0) again.
        let m0 = free(&[0], 5);
        assert_eq!(m0.shift().unwrap(), free(&[0], 4));
        // Shift of the point module is zero.
        let pt = TruncatedFIModule::point_at_zero(q(), 5);
        assert!(pt.shift().unwrap().is_zero());
        // Shift dims match the free direct sum M(2) + M(1)^2.
        let m2 = free(&[2], 5);
        assert_eq!(m2.shift().unwrap().dims(), free(&[2, 1, 1], 4).dims());
        assert!(m2.shift().unwrap().validate().is_valid());
    }

    #[test]
    fn natural_map_cases() {
        let m0 = free(&[0], 4);
        let nm = m0.natural_map().unwrap();
        nm.verify().unwrap();
        for c in &nm.components {
            assert_eq!(c, &Matrix::identity(q(), 1));
        }
        let pt = TruncatedFIModule::point_at_zero(q(), 4);
        let nm = pt.natural_map().unwrap();
        nm.verify().unwrap();
        assert!(nm.components.iter().all(Matrix::is_zero));
        let m1 = free(&[1], 4);
        let nm = m1.natural_map().unwrap();
        nm.verify().unwrap();
        assert!(nm.is_injective());
    }

    #[test]
    fn derivative_of_free_modules() {
        // D M(1) has the dimensions of M(0).
        let d = free(&[1], 5).derivative().unwrap();
        assert_eq!(d.dims(), &[1, 1, 1, 1, 1]);
        assert!(d.validate().is_valid());
        // D M(2) has the dimensions of M(1)^2.
        let d = free(&[2], 5).derivative().unwrap();
        assert_eq!(d.dims(), &[0, 2, 4, 6, 8]);
        assert!(d.validate().is_valid());
        // D M(0) = 0.
        assert!(free(&[0], 5).derivative().unwrap().is_zero());
    }

    #[test]
    fn shift_window_errors() {
        let z = TruncatedFIModule::zero(q(), 0);
        assert!(matches!(z.shift(), Err(ModuleError::WindowTooSmall { .. })));
        assert!(matches!(z.natural_map(), Err(ModuleError::WindowTooSmall { .. })));
    }

    #[test]
    fn commuting_iso_on_free_modules() {
        // Both composites vanish on M(0).
        let iso = free(&[0], 4).sigma_d_commute_iso().unwrap();
        assert!(iso.source.is_zero() && iso.target.is_zero());
        // On M(2) the map is a verified isomorphism in every degree.
        let iso = free(&[2], 5).sigma_d_commute_iso().unwrap();
        assert_eq!(iso.source.dims(), &[2, 4, 6, 8]);
        assert_eq!(iso.source.dims(), iso.target.dims());
    }

    #[test]
    fn submodule_generation() {
        let m0 = free(&[0], 4);
        let one = vec![q().one()];
        let sub = m0.submodule_generated_by(&[(0, one)]);
        assert_eq!(sub.dims(), vec![1, 1, 1, 1, 1]);
        // A single degree-1 basis vector of M(1) generates everything.
        let m1 = free(&[1], 4);
        let sub = m1.submodule_generated_by(&[(1, vec![q().one()])]);
        assert_eq!(sub.dims(), m1.dims().to_vec());
        // Empty input generates zero.
        assert!(m1.submodule_generated_by(&[]).is_zero());
    }

    #[test]
    fn below_degree_submodules() {
        let m2 = free(&[2], 4);
        assert_eq!(m2.below_degree_submodule(4).unwrap().dims(), m2.dims().to_vec());
        assert!(m2.below_degree_submodule(1).unwrap().is_zero());
        let mixed = free(&[0], 4).direct_sum(&free(&[2], 4)).unwrap();
        let sub = mixed.below_degree_submodule(0).unwrap();
        assert_eq!(sub.dims(), vec![1, 1, 1, 1, 1]);
    }

    #[test]
    fn quotient_examples() {
        let m1 = free(&[1], 4);
        let whole = m1.below_degree_submodule(4).unwrap();
        let (z, _) = m1.quotient_checked(&whole).unwrap();
        assert!(z.is_zero());
        let (same, _) = m1.quotient(&GradedSubmodule::zero(q(), m1.dims())).unwrap();
        assert_eq!(same, m1);
        let sum = free(&[0], 4).direct_sum(&free(&[1], 4)).unwrap();
        assert_eq!(sum.dims(), &[1, 2, 3, 4, 5]);
        assert!(sum.validate().is_valid());
    }

    #[test]
    fn point_module_is_all_torsion() {
        let pt = TruncatedFIModule::point_at_zero(q(), 5);
        assert_eq!(pt.dims(), &[1, 0, 0, 0, 0, 0]);
        assert!(pt.validate().is_valid());
        let (torsion, quotient, certified) = pt.torsion_split(2);
        assert_eq!(torsion.dims(), vec![1, 0, 0, 0, 0, 0]);
        assert!(quotient.is_zero());
        assert!(certified);
        let (td, cert) = pt.torsion_degree(2);
        assert_eq!(td, ExtendedDegree::Finite(0));
        assert!(cert);
    }

    #[test]
    fn free_modules_are_torsionless() {
        for degrees in [&[0][..], &[1], &[2], &[0, 2]] {
            let m = free(degrees, 5);
            let (torsion, quotient, certified) = m.torsion_split(2);
            assert!(torsion.is_zero());
            assert!(certified);
            assert_eq!(quotient, m);
            assert_eq!(m.torsion_degree(2).0, ExtendedDegree::NegInfinity);
        }
    }

    #[test]
    fn truncated_constant_module_is_torsionless() {
        let t = free(&[0], 5).truncate(1).unwrap();
        let (td, certified) = t.torsion_degree(2);
        assert_eq!(td, ExtendedDegree::NegInfinity);
        assert!(certified);
    }

    #[test]
    fn mixed_module_torsion_split() {
        // M(0) + M(1) modulo the degree-1 image of the M(0) part: a point
        // module glued to M(1).
        let m = mixed_example(6);
        assert_eq!(m.dims(), &[1, 1, 2, 3, 4, 5, 6]);
        let (torsion, torsionless, certified) = m.torsion_split(2);
        assert!(certified);
        assert_eq!(torsion.dims(), vec![1, 0, 0, 0, 0, 0, 0]);
        assert_eq!(torsionless.dims(), &[0, 1, 2, 3, 4, 5, 6]);
        assert_eq!(m.torsion_degree(2).0, ExtendedDegree::Finite(0));
    }

    pub(crate) fn mixed_example(window: usize) -> TruncatedFIModule {
        let spec = FreeModuleSpec { generators: vec![0, 1] };
        let real = FreeRealization::new(spec, q(), window).unwrap();
        // Kill the degree-1 image of the degree-0 generator.
        let mut seed = vec![q().zero(); real.dim(1)];
        let idx = real.index_of(1, 0, &Injection::standard_inclusion(0));
        seed[idx] = q().one();
        let sub = real.submodule_generated_by(&[(1, seed)]);
        real.to_module().quotient(&sub).unwrap().0
    }

    #[test]
    fn shift_preserves_torsionless_and_exactness() {
        let m = mixed_example(6);
        let (_, torsionless, certified) = m.torsion_split(2);
        assert!(certified);
        let shifted = torsionless.shift().unwrap();
        let (t2, _, c2) = shifted.torsion_split(2);
        assert!(c2);
        assert!(t2.is_zero());
        // Kernel of the natural map sits inside the torsion part.
        let nm = m.natural_map().unwrap();
        let ker = nm.kernel();
        let torsion = m.torsion_submodule();
        for n in 0..=nm.window() {
            assert!(torsion.values[n].contains_subspace(&ker.values[n]));
        }
        // For the torsionless part the natural map is injective and its
        // cokernel is the derivative.
        let nmf = torsionless.natural_map().unwrap();
        assert!(nmf.is_injective());
        let (coker, _) = nmf.cokernel();
        assert_eq!(coker, torsionless.derivative().unwrap());
    }

    #[test]
    fn apply_injection_matches_matrix_route() {
        let m2 = free(&[2], 5);
        let real = FreeRealization::new(FreeModuleSpec::single(2), q(), 5).unwrap();
        for alpha in fi::enumerate_injections(2, 4) {
            let mut v = vec![q().zero(); m2.dim(2)];
            v[1] = q().from_integer(3);
            let via_module = m2.apply_injection(&alpha, &v);
            let via_indices = real.apply_injection(&alpha, 2, &v);
            assert_eq!(via_module, via_indices);
        }
    }

    #[test]
    fn direct_sum_requires_matching_shape() {
        let a = free(&[1], 4);
        let b = free(&[1], 3);
        assert!(matches!(a.direct_sum(&b), Err(ModuleError::WindowMismatch)));
    }
}
