//! The symmetric inverse monoid `I_n` and its congruences `ρ(k, N)`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::perm::{Perm, SymNormal};

const UNDEF: u8 = u8::MAX;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InjectionError {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("not injective: {0} is hit twice")]
    NotInjective(usize),
    #[error("image {0} out of range for degree {1}")]
    OutOfRange(usize, usize),
    #[error("not H-related")]
    NotHRelated,
    #[error("cannot parse partial injection `{0}`")]
    Parse(String),
    #[error("invalid congruence parameters: {0}")]
    InvalidSpec(String),
}

/// Green's relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Green {
    H,
    L,
    R,
    D,
    J,
}

/// A partial injection on `{0, .., n-1}` stored as an image array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialInjection(Vec<u8>);

impl PartialInjection {
    pub fn new(images: &[Option<usize>]) -> Result<Self, InjectionError> {
        let n = images.len();
        let mut hit = vec![false; n];
        let mut map = Vec::with_capacity(n);
        for img in images {
            match *img {
                None => map.push(UNDEF),
                Some(j) if j >= n => return Err(InjectionError::OutOfRange(j, n)),
                Some(j) => {
                    if hit[j] {
                        return Err(InjectionError::NotInjective(j));
                    }
                    hit[j] = true;
                    map.push(j as u8);
                }
            }
        }
        Ok(PartialInjection(map))
    }

    pub fn identity(n: usize) -> Self {
        PartialInjection((0..n as u8).collect())
    }

    pub fn empty(n: usize) -> Self {
        PartialInjection(vec![UNDEF; n])
    }

    pub fn partial_identity(n: usize, dom: &[usize]) -> Self {
        let mut map = vec![UNDEF; n];
        for &i in dom {
            map[i] = i as u8;
        }
        PartialInjection(map)
    }

    /// Bijection between the sorted domain and the sorted image: `x_i ↦ y_{i σ}`.
    pub fn from_perm_between(n: usize, dom: &[usize], img: &[usize], sigma: &Perm) -> Self {
        let mut map = vec![UNDEF; n];
        for (i, &x) in dom.iter().enumerate() {
            map[x] = img[sigma.apply(i)] as u8;
        }
        PartialInjection(map)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> Option<usize> {
        match self.0[i] {
            UNDEF => None,
            j => Some(j as usize),
        }
    }

    pub fn rank(&self) -> usize {
        self.0.iter().filter(|&&j| j != UNDEF).count()
    }

    /// Sorted domain.
    pub fn domain(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] != UNDEF).collect()
    }

    /// Sorted image.
    pub fn image(&self) -> Vec<usize> {
        let mut im: Vec<usize> = self.0.iter().filter(|&&j| j != UNDEF).map(|&j| j as usize).collect();
        im.sort_unstable();
        im
    }

    /// `self` followed by `other`: `i(ab) = (ia)b`.
    pub fn compose(&self, other: &PartialInjection) -> Result<PartialInjection, InjectionError> {
        if self.degree() != other.degree() {
            return Err(InjectionError::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(self.then(other))
    }

    /// Unchecked [`compose`](Self::compose).
    #[inline]
    pub fn then(&self, other: &PartialInjection) -> PartialInjection {
        PartialInjection(
            self.0
                .iter()
                .map(|&j| if j == UNDEF { UNDEF } else { other.0[j as usize] })
                .collect(),
        )
    }

    pub fn inverse(&self) -> PartialInjection {
        let mut inv = vec![UNDEF; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            if j != UNDEF {
                inv[j as usize] = i as u8;
            }
        }
        PartialInjection(inv)
    }

    pub fn is_idempotent(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| j == UNDEF || j as usize == i)
    }

    pub fn is_total(&self) -> bool {
        self.0.iter().all(|&j| j != UNDEF)
    }

    pub fn green_related(&self, other: &PartialInjection, rel: Green) -> Result<bool, InjectionError> {
        if self.degree() != other.degree() {
            return Err(InjectionError::DegreeMismatch(self.degree(), other.degree()));
        }
        let same_dom = || self.domain() == other.domain();
        let same_im = || self.image() == other.image();
        Ok(match rel {
            Green::R => same_dom(),
            Green::L => same_im(),
            Green::H => same_dom() && same_im(),
            Green::D | Green::J => self.rank() == other.rank(),
        })
    }

    /// The permutation `μ` with `a_i b = c_{iμ}`, where `a_1 < … < a_k` is
    /// the domain and `c_i = a_i a`.
    ///
    /// Satisfies `μ(a,c) = μ(b,c).then(μ(a,b))` on an H-class.
    pub fn h_class_permutation(&self, b: &PartialInjection) -> Result<Perm, InjectionError> {
        if !self.green_related(b, Green::H)? {
            return Err(InjectionError::NotHRelated);
        }
        let dom = self.domain();
        let mut pos = vec![0u8; self.degree()];
        for (i, &x) in dom.iter().enumerate() {
            pos[self.0[x] as usize] = i as u8;
        }
        let images = dom.iter().map(|&x| pos[b.0[x] as usize]).collect();
        Ok(Perm::from_images(images).expect("H-related maps give a bijection"))
    }

    /// Every partial injection of degree `n`, by rank, then domain, then map.
    pub fn all(n: usize) -> Vec<PartialInjection> {
        let mut out = Vec::new();
        for k in 0..=n {
            for dom in subsets(n, k) {
                for img in subsets(n, k) {
                    for p in Perm::all(k) {
                        out.push(PartialInjection::from_perm_between(n, &dom, &img, &p));
                    }
                }
            }
        }
        out
    }

    pub fn monoid_size(n: usize) -> u128 {
        (0..=n as u128)
            .map(|k| binomial(n as u128, k).pow(2) * (1..=k).product::<u128>())
            .sum()
    }
}

pub(crate) fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Text form `[2,1,-,3]`, 1-based, `-` for undefined.
impl fmt::Display for PartialInjection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, &j) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            if j == UNDEF {
                write!(f, "-")?;
            } else {
                write!(f, "{}", j + 1)?;
            }
        }
        write!(f, "]")
    }
}

impl fmt::Debug for PartialInjection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for PartialInjection {
    type Err = InjectionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || InjectionError::Parse(s.to_string());
        let body = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(err)?;
        if body.trim().is_empty() {
            return Ok(PartialInjection(Vec::new()));
        }
        let mut images = Vec::new();
        for tok in body.split(',') {
            let tok = tok.trim();
            if tok == "-" || tok == "−" {
                images.push(None);
            } else {
                let v: usize = tok.parse().map_err(|_| err())?;
                if v == 0 {
                    return Err(err());
                }
                images.push(Some(v - 1));
            }
        }
        if images.len() >= UNDEF as usize {
            return Err(err());
        }
        PartialInjection::new(&images)
    }
}

/// The congruence `ρ(k, N)` on `I_n`; `k = n + 1` is the universal congruence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InCongruenceSpec {
    n: usize,
    k: usize,
    normal: Option<SymNormal>,
}

impl InCongruenceSpec {
    pub fn new(n: usize, k: usize, normal: Option<SymNormal>) -> Result<Self, InjectionError> {
        let ok = match normal {
            None => k == n + 1,
            Some(q) => (1..=n).contains(&k) && q.is_valid(k),
        };
        if ok {
            Ok(InCongruenceSpec { n, k, normal })
        } else {
            Err(InjectionError::InvalidSpec(format!("k={k}, N={normal:?} at n={n}")))
        }
    }

    pub fn universal(n: usize) -> Self {
        InCongruenceSpec {
            n,
            k: n + 1,
            normal: None,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn normal(&self) -> Option<SymNormal> {
        self.normal
    }

    pub fn is_universal(&self) -> bool {
        self.k == self.n + 1
    }

    pub fn related(&self, a: &PartialInjection, b: &PartialInjection) -> bool {
        let (ra, rb) = (a.rank(), b.rank());
        if (ra < self.k && rb < self.k) || a == b {
            return true;
        }
        match self.normal {
            Some(q) if ra == self.k && rb == self.k => match a.h_class_permutation(b) {
                Ok(mu) => q.contains(&mu),
                Err(_) => false,
            },
            _ => false,
        }
    }

    /// Every congruence on `I_n`, universal last.
    pub fn enumerate(n: usize) -> Vec<InCongruenceSpec> {
        let mut out: Vec<InCongruenceSpec> = (1..=n)
            .flat_map(|k| {
                SymNormal::all(k)
                    .into_iter()
                    .map(move |q| InCongruenceSpec { n, k, normal: Some(q) })
            })
            .collect();
        out.push(InCongruenceSpec::universal(n));
        out
    }
}

impl fmt::Display for InCongruenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.normal {
            None => write!(f, "universal"),
            Some(q) => write!(f, "rho({}, {})", self.k, q.name()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pi(s: &str) -> PartialInjection {
        s.parse().unwrap()
    }

    #[test]
    fn underlying_injection_product() {
        let a = pi("[2,1,-,3]");
        let b = pi("[1,-,2,4]");
        assert_eq!(a.compose(&b).unwrap(), pi("[-,1,-,2]"));
    }

    #[test]
    fn inverse_of_sample_injection() {
        let a = pi("[2,1,-,3]");
        let inv = a.inverse();
        assert_eq!(inv, pi("[2,1,4,-]"));
        assert_eq!(a.then(&inv).then(&a), a);
    }

    #[test]
    fn text_form_round_trips_and_rejects_garbage() {
        for s in ["[2,1,-,3]", "[-,-]", "[1]", "[]"] {
            assert_eq!(pi(s).to_string(), s);
        }
        for s in ["[1,1]", "[0]", "[3,1]", "2,1", "[a]"] {
            assert!(s.parse::<PartialInjection>().is_err(), "{s}");
        }
    }

    #[test]
    fn monoid_sizes() {
        for n in 0..=5 {
            assert_eq!(
                PartialInjection::all(n).len() as u128,
                PartialInjection::monoid_size(n),
                "n={n}"
            );
        }
        assert_eq!(PartialInjection::monoid_size(2), 7);
    }

    #[test]
    fn green_examples() {
        let a = pi("[1,-]");
        let b = pi("[2,-]");
        assert!(a.green_related(&b, Green::R).unwrap());
        assert!(!a.green_related(&b, Green::L).unwrap());
        assert!(!a.green_related(&PartialInjection::identity(2), Green::D).unwrap());
        assert!(a.green_related(&pi("[1,-,-]"), Green::R).is_err());
    }

    #[test]
    fn h_class_permutation_examples() {
        let id = PartialInjection::identity(2);
        let swap = pi("[2,1]");
        assert!(id.h_class_permutation(&id).unwrap().is_identity());
        assert_eq!(id.h_class_permutation(&swap).unwrap(), Perm::transposition(2, 0, 1));
        assert!(id.h_class_permutation(&pi("[1,-]")).is_err());
    }

    #[test]
    fn h_class_permutation_composes() {
        let all = PartialInjection::all(3);
        for a in all.iter().filter(|a| a.rank() == 2) {
            let h: Vec<_> = all.iter().filter(|b| a.green_related(b, Green::H).unwrap()).collect();
            for b in &h {
                for c in &h {
                    let ab = a.h_class_permutation(b).unwrap();
                    let bc = b.h_class_permutation(c).unwrap();
                    assert_eq!(bc.then(&ab), a.h_class_permutation(c).unwrap());
                }
            }
        }
    }

    #[test]
    fn congruence_counts_and_identity() {
        assert_eq!(InCongruenceSpec::enumerate(2).len(), 4);
        assert_eq!(InCongruenceSpec::enumerate(4).len(), 1 + 2 + 3 + 4 + 1);
        let eq = InCongruenceSpec::new(3, 1, Some(SymNormal::Trivial)).unwrap();
        let all = PartialInjection::all(3);
        for a in &all {
            for b in &all {
                assert_eq!(eq.related(a, b), a == b);
            }
        }
        assert!(InCongruenceSpec::new(3, 4, Some(SymNormal::Trivial)).is_err());
        assert!(InCongruenceSpec::new(3, 2, Some(SymNormal::Klein)).is_err());
    }

    #[test]
    fn k2_collapses_as_described() {
        let spec = InCongruenceSpec::new(2, 2, Some(SymNormal::Symmetric)).unwrap();
        let zero = PartialInjection::empty(2);
        let r1 = pi("[2,-]");
        assert!(spec.related(&zero, &r1));
        assert!(spec.related(&PartialInjection::identity(2), &pi("[2,1]")));
        assert!(!spec.related(&zero, &PartialInjection::identity(2)));
    }

    fn arb_injection(n: usize) -> impl Strategy<Value = PartialInjection> {
        (
            proptest::collection::vec(any::<bool>(), n),
            Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
        )
            .prop_map(move |(keep, images)| {
                let imgs: Vec<Option<usize>> = (0..n).map(|i| keep[i].then_some(images[i])).collect();
                PartialInjection::new(&imgs).unwrap()
            })
    }

    proptest! {
        #[test]
        fn inverse_laws(a in arb_injection(5), b in arb_injection(5)) {
            let ai = a.inverse();
            prop_assert_eq!(a.then(&ai).then(&a), a.clone());
            prop_assert_eq!(ai.inverse(), a.clone());
            prop_assert!(a.then(&ai).is_idempotent());
            prop_assert!(a.then(&b).rank() <= a.rank().min(b.rank()));
        }

        #[test]
        fn composition_associates(a in arb_injection(4), b in arb_injection(4), c in arb_injection(4)) {
            prop_assert_eq!(a.then(&b).then(&c), a.then(&b.then(&c)));
        }
    }
}
