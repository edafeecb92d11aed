//! Morphisms of the category of finite sets and injections, at the level of
//! the skeleton with objects `[n] = {1, .., n}`.
//!
//! An [`Injection`] is stored as its image tuple. Besides composition and
//! enumeration this module provides the self-embedding (which shifts an
//! injection up by one slot, sending the new first point to 1), the standard
//! degree-raising inclusions `r -> r + 1`, and the factorisation of an
//! arbitrary injection as a permutation followed by a chain of standard
//! inclusions. The factorisation is what lets modules store their actions on
//! generators only.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

/// An injection `[m] -> [n]`, stored as the tuple `(f(1), .., f(m))` of
/// pairwise distinct values in `1..=n`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Injection {
    source: usize,
    target: usize,
    images: Vec<usize>,
}

impl Injection {
    pub fn new(source: usize, target: usize, images: Vec<usize>) -> Result<Self, String> {
        if images.len() != source {
            return Err(alloc::format!(
                "injection [{source}]->[{target}] needs {source} images, got {}",
                images.len()
            ));
        }
        if source > target {
            return Err(alloc::format!("no injections [{source}]->[{target}]"));
        }
        let mut seen = vec![false; target];
        for &v in &images {
            if v == 0 || v > target {
                return Err(alloc::format!("image value {v} outside 1..={target}"));
            }
            if seen[v - 1] {
                return Err(alloc::format!("repeated image value {v}"));
            }
            seen[v - 1] = true;
        }
        Ok(Injection { source, target, images })
    }

    pub fn identity(n: usize) -> Self {
        Injection { source: n, target: n, images: (1..=n).collect() }
    }

    /// The standard inclusion `[n] -> [n+1]`, `r -> r + 1`.
    pub fn standard_inclusion(n: usize) -> Self {
        Injection { source: n, target: n + 1, images: (2..=n + 1).collect() }
    }

    /// The chain of standard inclusions `[m] -> [n]`, `r -> r + (n - m)`.
    pub fn inclusion_chain(m: usize, n: usize) -> Self {
        assert!(m <= n);
        Injection { source: m, target: n, images: (n - m + 1..=n).collect() }
    }

    /// The adjacent transposition `(i, i+1)` as a bijection of `[n]`,
    /// `1 <= i < n`.
    pub fn transposition(n: usize, i: usize) -> Self {
        assert!(i >= 1 && i < n, "transposition index out of range");
        let mut images: Vec<usize> = (1..=n).collect();
        images.swap(i - 1, i);
        Injection { source: n, target: n, images }
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, r: usize) -> usize {
        self.images[r - 1]
    }

    pub fn is_bijection(&self) -> bool {
        self.source == self.target
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, &v)| v == k + 1)
    }

    /// Composition `self . f` (apply `f` first).
    pub fn compose(&self, f: &Injection) -> Injection {
        assert_eq!(
            f.target, self.source,
            "object mismatch: cannot compose [{}]->[{}] after [{}]->[{}]",
            self.source, self.target, f.source, f.target
        );
        Injection {
            source: f.source,
            target: self.target,
            images: f.images.iter().map(|&r| self.apply(r)).collect(),
        }
    }

    /// The self-embedding: `[m]->[n]` becomes `[m+1]->[n+1]` fixing the new
    /// first point and shifting everything else up by one.
    pub fn self_embed(&self) -> Injection {
        let mut images = Vec::with_capacity(self.source + 1);
        images.push(1);
        images.extend(self.images.iter().map(|&v| v + 1));
        Injection { source: self.source + 1, target: self.target + 1, images }
    }

    /// Inverse of a bijection.
    pub fn inverse(&self) -> Injection {
        assert!(self.is_bijection(), "only bijections are invertible");
        let mut images = vec![0; self.source];
        for (r, &v) in self.images.iter().enumerate() {
            images[v - 1] = r + 1;
        }
        Injection { source: self.source, target: self.target, images }
    }

    /// Writes `self = sigma . inclusion_chain(m, n)` and returns `sigma`,
    /// the unique-up-to-stabiliser bijection of `[n]` that restricts to
    /// `self` on the top `m` slots; the remaining slots carry the unused
    /// values in increasing order, so the choice is deterministic.
    pub fn factor_permutation(&self) -> Injection {
        let (m, n) = (self.source, self.target);
        let mut images = vec![0; n];
        let mut used = vec![false; n];
        for (r, &v) in self.images.iter().enumerate() {
            images[n - m + r] = v;
            used[v - 1] = true;
        }
        let mut unused = (1..=n).filter(|&v| !used[v - 1]);
        for slot in images.iter_mut().take(n - m) {
            *slot = unused.next().expect("exactly n - m unused values");
        }
        Injection { source: n, target: n, images }
    }

    /// Decomposes a bijection into adjacent transpositions. The returned
    /// indices `i1, .., ik` satisfy `self = s_ik . ... . s_i1`; applying the
    /// transpositions' actions to a vector in the returned order yields the
    /// action of `self`.
    pub fn adjacent_word(&self) -> Vec<usize> {
        assert!(self.is_bijection());
        let mut line = self.images.clone();
        let mut swaps = Vec::new();
        loop {
            let mut changed = false;
            for j in 0..line.len().saturating_sub(1) {
                if line[j] > line[j + 1] {
                    line.swap(j, j + 1);
                    swaps.push(j + 1);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        swaps
    }

    /// Splits `self` as `increasing . rho` with `increasing` an
    /// order-preserving injection and `rho` a bijection of the source.
    pub fn factor_increasing(&self) -> (Injection, Injection) {
        let mut sorted: Vec<usize> = self.images.clone();
        sorted.sort_unstable();
        let increasing =
            Injection { source: self.source, target: self.target, images: sorted.clone() };
        let rho_images = self
            .images
            .iter()
            .map(|v| sorted.binary_search(v).expect("value present") + 1)
            .collect();
        let rho = Injection { source: self.source, target: self.source, images: rho_images };
        (increasing, rho)
    }

    /// Lexicographic position of `self` in `enumerate_injections(m, n)`.
    pub fn lex_rank(&self) -> usize {
        let (m, n) = (self.source, self.target);
        let mut used = vec![false; n];
        let mut rank = 0usize;
        for (i, &a) in self.images.iter().enumerate() {
            let smaller = (1..a).filter(|&v| !used[v - 1]).count();
            rank += smaller * falling_factorial(n - i - 1, m - i - 1);
            used[a - 1] = true;
        }
        rank
    }
}

/// `n (n-1) ... (n-k+1)`, the number of injections `[k] -> [n]`.
pub fn falling_factorial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    ((n - k + 1)..=n).product()
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut acc = 1usize;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// All injections `[m] -> [n]` in lexicographic order of image tuples.
/// Empty for `m > n`; the single empty injection for `m = 0`.
pub fn enumerate_injections(m: usize, n: usize) -> Vec<Injection> {
    if m > n {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(falling_factorial(n, m));
    let mut current = Vec::with_capacity(m);
    let mut used = vec![false; n];
    fn rec(
        m: usize,
        n: usize,
        current: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Injection>,
    ) {
        if current.len() == m {
            out.push(Injection { source: m, target: n, images: current.clone() });
            return;
        }
        for v in 1..=n {
            if !used[v - 1] {
                used[v - 1] = true;
                current.push(v);
                rec(m, n, current, used, out);
                current.pop();
                used[v - 1] = false;
            }
        }
    }
    rec(m, n, &mut current, &mut used, &mut out);
    out
}

/// The adjacent transpositions `s_1, .., s_{n-1}` of `[n]`; empty for
/// `n <= 1`.
pub fn adjacent_transpositions(n: usize) -> Vec<Injection> {
    (1..n).map(|i| Injection::transposition(n, i)).collect()
}

impl fmt::Display for Injection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}:(", self.source, self.target)?;
        for (k, v) in self.images.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Injection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Injection {
    type Err = String;

    /// Parses the `m->n:(a1,...,am)` syntax, e.g. `2->4:(3,1)`.
    fn from_str(s: &str) -> Result<Self, String> {
        let err = || alloc::format!("malformed injection `{s}`, expected m->n:(a1,...,am)");
        let (src, rest) = s.split_once("->").ok_or_else(err)?;
        let (tgt, imgs) = rest.split_once(':').ok_or_else(err)?;
        let source: usize = src.trim().parse().map_err(|_| err())?;
        let target: usize = tgt.trim().parse().map_err(|_| err())?;
        let imgs = imgs.trim();
        let inner = imgs.strip_prefix('(').and_then(|t| t.strip_suffix(')')).ok_or_else(err)?;
        let images = if inner.trim().is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| err()))
                .collect::<Result<Vec<_>, _>>()?
        };
        Injection::new(source, target, images)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inj(s: &str) -> Injection {
        s.parse().unwrap()
    }

    #[test]
    fn compose_examples() {
        // f:[1]->[2]=(2), g:[2]->[3]=(3,1): g.f = (1)
        assert_eq!(inj("2->3:(3,1)").compose(&inj("1->2:(2)")), inj("1->3:(1)"));
        // identity absorbs
        let f = inj("2->3:(3,1)");
        assert_eq!(Injection::identity(3).compose(&f), f);
        assert_eq!(f.compose(&Injection::identity(2)), f);
        // pi_2 . pi_1 = r -> r + 2
        let chain = Injection::standard_inclusion(2).compose(&Injection::standard_inclusion(1));
        assert_eq!(chain, inj("1->3:(3)"));
        assert_eq!(chain, Injection::inclusion_chain(1, 3));
    }

    #[test]
    fn self_embed_examples() {
        assert_eq!(inj("1->2:(2)").self_embed(), inj("2->3:(1,3)"));
        assert_eq!(Injection::identity(3).self_embed(), Injection::identity(4));
        assert_eq!(Injection::standard_inclusion(1).self_embed(), inj("2->3:(1,3)"));
    }

    #[test]
    fn enumeration_examples() {
        let e = enumerate_injections(1, 3);
        assert_eq!(e, vec![inj("1->3:(1)"), inj("1->3:(2)"), inj("1->3:(3)")]);
        assert_eq!(enumerate_injections(2, 2), vec![inj("2->2:(1,2)"), inj("2->2:(2,1)")]);
        assert_eq!(enumerate_injections(0, 4).len(), 1);
        assert!(enumerate_injections(3, 2).is_empty());
        assert_eq!(enumerate_injections(2, 4).len(), falling_factorial(4, 2));
    }

    #[test]
    fn transposition_examples() {
        assert_eq!(
            adjacent_transpositions(3),
            vec![inj("3->3:(2,1,3)"), inj("3->3:(1,3,2)")]
        );
        assert!(adjacent_transpositions(1).is_empty());
        assert_eq!(adjacent_transpositions(2), vec![inj("2->2:(2,1)")]);
    }

    #[test]
    fn lex_rank_matches_enumeration() {
        for (m, n) in [(0, 3), (1, 4), (2, 4), (3, 3), (2, 5)] {
            for (k, a) in enumerate_injections(m, n).iter().enumerate() {
                assert_eq!(a.lex_rank(), k, "rank of {a}");
            }
        }
    }

    #[test]
    fn factorisation_through_generators() {
        // Every injection equals its factor permutation composed with the
        // inclusion chain; exhaustive for small degrees.
        for m in 0..=5usize {
            for n in m..=5usize {
                for a in enumerate_injections(m, n) {
                    let sigma = a.factor_permutation();
                    assert_eq!(sigma.compose(&Injection::inclusion_chain(m, n)), a);
                }
            }
        }
    }

    #[test]
    fn adjacent_word_reconstructs() {
        for sigma in enumerate_injections(4, 4) {
            let word = sigma.adjacent_word();
            let mut acc = Injection::identity(4);
            for i in word {
                acc = Injection::transposition(4, i).compose(&acc);
            }
            assert_eq!(acc, sigma);
        }
    }

    #[test]
    fn self_embedding_is_functorial() {
        for m in 0..=3usize {
            for n in m..=4usize {
                for f in enumerate_injections(m, n) {
                    for g in enumerate_injections(n, 4) {
                        assert_eq!(
                            g.compose(&f).self_embed(),
                            g.self_embed().compose(&f.self_embed())
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn standard_inclusions_are_natural() {
        // self_embed(f) . pi_m = pi_n . f; this is what makes the map into
        // the shifted module a module map.
        for m in 0..=4usize {
            for n in m..=4usize {
                for f in enumerate_injections(m, n) {
                    assert_eq!(
                        f.self_embed().compose(&Injection::standard_inclusion(m)),
                        Injection::standard_inclusion(n).compose(&f)
                    );
                }
            }
        }
    }

    #[test]
    fn factor_increasing_splits() {
        for a in enumerate_injections(3, 5) {
            let (incr, rho) = a.factor_increasing();
            assert!(incr.images().windows(2).all(|w| w[0] < w[1]));
            assert!(rho.is_bijection());
            assert_eq!(incr.compose(&rho), a);
        }
    }

    #[test]
    fn text_round_trip() {
        for s in ["2->4:(3,1)", "0->2:()", "3->3:(2,3,1)"] {
            let a = inj(s);
            assert_eq!(alloc::format!("{a}"), s);
        }
        assert!("2->4:(3,3)".parse::<Injection>().is_err());
        assert!("4->2:(1,2,3,4)".parse::<Injection>().is_err());
        assert!("2->4:(5,1)".parse::<Injection>().is_err());
    }
}
