//! Congruences on `G ≀ I_n` in canonical form `ρ(m, {T_i}, L)`.
//!
//! Elements of rank below `m` form a single class. At rank `m` two elements
//! are related when they are H-related and `x⁻¹y` maps into `L ⊴ G ≀ S_m`.
//! Above rank `m` they are related when the maps agree and the label quotient
//! lies in `T_rank`. The universal congruence is the spec with `m = n + 1`.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde_json::{json, Value};
use thiserror::Error;

use crate::group::{Elem, FiniteGroup};
use crate::invariant::{InvariantCatalog, InvariantError, InvariantSubgroup};
use crate::perm::{Perm, SymNormal};
use crate::sym_inverse::{InCongruenceSpec, PartialInjection};
use crate::wreath_monoid::{WreathElement, WreathError, WreathMonoid};
use crate::wreath_normal::{GwsNormal, WreathNormalError, WreathNormals};

#[derive(Debug, Error)]
pub enum CongruenceError {
    #[error("invalid congruence spec: {0}")]
    InvalidSpec(String),
    #[error("partition is not a congruence: {0}")]
    NotCongruence(String),
    #[error("kernel contains an element outside the idempotent centralizer: {0}")]
    KernelNotInCentralizer(String),
    #[error("kernel misses the idempotent {0}")]
    KernelNotFull(String),
    #[error("kernel is not closed under inverses: {0}")]
    KernelNotInverseClosed(String),
    #[error("kernel is not closed under products: {0}")]
    KernelNotClosed(String),
    #[error("kernel is not self-conjugate: {0}")]
    KernelNotSelfConjugate(String),
    #[error(transparent)]
    Wreath(#[from] WreathNormalError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Monoid(#[from] WreathError),
}

/// `ρ(m, {T_i : m < i ≤ n}, L)`; `l` is `None` only for the universal congruence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CongruenceSpec {
    n: usize,
    m: usize,
    chain: Vec<InvariantSubgroup>,
    l: Option<GwsNormal>,
}

impl CongruenceSpec {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_universal(&self) -> bool {
        self.m == self.n + 1
    }

    /// `T_i` for `m < i ≤ n`.
    pub fn level(&self, i: usize) -> Option<&InvariantSubgroup> {
        i.checked_sub(self.m + 1).and_then(|j| self.chain.get(j))
    }

    pub fn chain(&self) -> &[InvariantSubgroup] {
        &self.chain
    }

    pub fn l(&self) -> Option<&GwsNormal> {
        self.l.as_ref()
    }

    /// Idempotent-separating: no Rees part and `L` inside the base group.
    pub fn is_idempotent_separating(&self) -> bool {
        self.m == 1 && matches!(self.l, Some(GwsNormal::Base(_)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RestrictMode {
    /// `{(a, b) : (1_a; a) ρ (1_b; b)}`.
    ViaEta1,
    /// `{(a, b) : (g; a) ρ (h; b) for some labels}`.
    ViaEta2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CongruenceCounts {
    pub total: u128,
    pub idempotent_separating: u128,
}

/// Congruence machinery for `G ≀ I_n` at a fixed `n`.
#[derive(Debug, Clone)]
pub struct CongruenceClassifier {
    normals: Arc<WreathNormals>,
    n: usize,
}

/// Labels over the sorted domain and the induced permutation of an element
/// whose domain equals its image.
pub fn psi(x: &WreathElement) -> (Vec<Elem>, Perm) {
    let dom = x.perm().domain();
    let mut pos = vec![0u8; x.degree()];
    for (i, &d) in dom.iter().enumerate() {
        pos[d] = i as u8;
    }
    let images = dom
        .iter()
        .map(|&d| pos[x.perm().apply(d).expect("in domain")])
        .collect();
    (x.omega(), Perm::from_images(images).expect("domain equals image"))
}

impl CongruenceClassifier {
    pub fn new(group: Arc<FiniteGroup>, n: usize) -> Result<Self, CongruenceError> {
        let cat = Arc::new(InvariantCatalog::new(group)?);
        Ok(Self::from_normals(Arc::new(WreathNormals::new(cat)), n))
    }

    pub fn from_normals(normals: Arc<WreathNormals>, n: usize) -> Self {
        CongruenceClassifier { normals, n }
    }

    /// The same group at another degree, sharing all cached data.
    pub fn with_degree(&self, n: usize) -> Self {
        Self::from_normals(self.normals.clone(), n)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn normals(&self) -> &Arc<WreathNormals> {
        &self.normals
    }

    pub fn catalog(&self) -> &Arc<InvariantCatalog> {
        self.normals.catalog()
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.catalog().group()
    }

    pub fn universal(&self) -> CongruenceSpec {
        CongruenceSpec {
            n: self.n,
            m: self.n + 1,
            chain: Vec::new(),
            l: None,
        }
    }

    /// `χ(T_1, …, T_n)` for a full closed chain.
    pub fn from_chain(&self, chain: &[InvariantSubgroup]) -> Result<CongruenceSpec, CongruenceError> {
        if chain.len() != self.n || self.n == 0 {
            return Err(CongruenceError::InvalidSpec(
                "chain must have one level per rank".into(),
            ));
        }
        self.build(1, chain[1..].to_vec(), Some(GwsNormal::Base(chain[0].clone())))
    }

    pub fn identity(&self) -> CongruenceSpec {
        let cat = self.catalog();
        let chain: Vec<_> = (1..=self.n).map(|i| cat.trivial(i)).collect();
        self.from_chain(&chain).expect("trivial chain is closed")
    }

    /// The maximum idempotent-separating congruence.
    pub fn mu(&self) -> CongruenceSpec {
        let cat = self.catalog();
        let chain: Vec<_> = (1..=self.n).map(|i| cat.whole(i)).collect();
        self.from_chain(&chain).expect("whole chain is closed")
    }

    /// Validated spec.
    pub fn build(
        &self,
        m: usize,
        chain: Vec<InvariantSubgroup>,
        l: Option<GwsNormal>,
    ) -> Result<CongruenceSpec, CongruenceError> {
        let spec = CongruenceSpec { n: self.n, m, chain, l };
        self.validate(&spec)?;
        Ok(spec)
    }

    pub fn validate(&self, s: &CongruenceSpec) -> Result<(), CongruenceError> {
        let bad = |msg: String| Err(CongruenceError::InvalidSpec(msg));
        if s.n != self.n {
            return bad(format!("degree {} but classifier has {}", s.n, self.n));
        }
        if s.m == 0 || s.m > self.n + 1 {
            return bad(format!("m = {} out of range", s.m));
        }
        if s.is_universal() {
            return if s.chain.is_empty() && s.l.is_none() {
                Ok(())
            } else {
                bad("universal spec carries no data".into())
            };
        }
        let Some(l) = &s.l else {
            return bad("L is required below the universal spec".into());
        };
        if l.degree() != s.m {
            return bad(format!("L has degree {} but m = {}", l.degree(), s.m));
        }
        if s.chain.len() != self.n - s.m || s.chain.iter().enumerate().any(|(j, t)| t.degree() != s.m + 1 + j) {
            return bad("chain levels must be m+1..n".into());
        }
        let cat = self.catalog();
        if !cat.chain_is_closed(&s.chain) {
            return bad("chain is not closed".into());
        }
        if let Some(lower) = self.lower_bound(s.m, &s.chain) {
            if !self.normals.leq(&lower, l) {
                return bad("L does not contain the projection of T_{m+1}".into());
            }
        }
        Ok(())
    }

    /// `Base(T_{m+1} π)`, the least admissible `L`.
    fn lower_bound(&self, m: usize, chain: &[InvariantSubgroup]) -> Option<GwsNormal> {
        let first = chain.first()?;
        debug_assert_eq!(first.degree(), m + 1);
        self.catalog().project(first).map(GwsNormal::Base)
    }

    fn label_quotient(&self, x: &WreathElement, y: &WreathElement) -> Vec<Elem> {
        let g = self.group();
        x.omega()
            .iter()
            .zip(y.omega())
            .map(|(&a, b)| g.mul(g.inv(a), b))
            .collect()
    }

    pub fn related(&self, s: &CongruenceSpec, x: &WreathElement, y: &WreathElement) -> bool {
        let (rx, ry) = (x.rank(), y.rank());
        if s.is_universal() || (rx < s.m && ry < s.m) || x == y {
            return true;
        }
        if rx != ry || rx < s.m {
            return false;
        }
        if rx > s.m {
            return x.perm() == y.perm()
                && self
                    .catalog()
                    .contains(s.level(rx).expect("level above m"), &self.label_quotient(x, y));
        }
        let (a, b) = (x.perm(), y.perm());
        if a.domain() != b.domain() || a.image() != b.image() {
            return false;
        }
        let monoid = WreathMonoid::new(self.group().clone(), self.n);
        let q = monoid.mul(&monoid.inverse(x), y);
        let (labels, p) = psi(&q);
        self.normals.contains(s.l.as_ref().expect("non-universal"), &labels, &p)
    }

    /// Membership in `χ(T_1, …, T_n)`.
    pub fn chi_related(&self, chain: &[InvariantSubgroup], x: &WreathElement, y: &WreathElement) -> bool {
        x.perm() == y.perm()
            && (x.rank() == 0
                || self
                    .catalog()
                    .contains(&chain[x.rank() - 1], &self.label_quotient(x, y)))
    }

    /// Containment of congruences.
    pub fn leq(&self, s1: &CongruenceSpec, s2: &CongruenceSpec) -> bool {
        if s2.is_universal() {
            return true;
        }
        if s1.is_universal() || s1.m > s2.m {
            return false;
        }
        let cat = self.catalog();
        for i in s2.m + 1..=self.n {
            if !cat.leq(s1.level(i).unwrap(), s2.level(i).unwrap()) {
                return false;
            }
        }
        let l2 = s2.l.as_ref().unwrap();
        if s1.m < s2.m {
            let t = s1.level(s2.m).unwrap().clone();
            self.normals.leq(&GwsNormal::Base(t), l2)
        } else {
            self.normals.leq(s1.l.as_ref().unwrap(), l2)
        }
    }

    pub fn join(&self, s1: &CongruenceSpec, s2: &CongruenceSpec) -> Result<CongruenceSpec, CongruenceError> {
        if s1.is_universal() || s2.is_universal() {
            return Ok(self.universal());
        }
        let (a, b) = if s1.m >= s2.m { (s1, s2) } else { (s2, s1) };
        let cat = self.catalog();
        let mut chain = Vec::new();
        for i in a.m + 1..=self.n {
            chain.push(cat.join(a.level(i).unwrap(), b.level(i).unwrap())?);
        }
        let la = a.l.as_ref().unwrap();
        let other = if a.m > b.m {
            GwsNormal::Base(b.level(a.m).unwrap().clone())
        } else {
            b.l.clone().unwrap()
        };
        let l = self.normals.join(la, &other)?;
        self.build(a.m, chain, Some(l))
    }

    pub fn meet(&self, s1: &CongruenceSpec, s2: &CongruenceSpec) -> Result<CongruenceSpec, CongruenceError> {
        if s1.is_universal() {
            return Ok(s2.clone());
        }
        if s2.is_universal() {
            return Ok(s1.clone());
        }
        let (a, b) = if s1.m >= s2.m { (s1, s2) } else { (s2, s1) };
        let cat = self.catalog();
        let mut chain = Vec::new();
        for i in b.m + 1..=self.n {
            let y = if i > a.m {
                a.level(i).unwrap().clone()
            } else if i == a.m {
                self.normals.base_kernel(a.l.as_ref().unwrap())
            } else {
                cat.whole(i)
            };
            chain.push(cat.meet(&y, b.level(i).unwrap())?);
        }
        let l = if a.m > b.m {
            b.l.clone().unwrap()
        } else {
            self.normals.meet(a.l.as_ref().unwrap(), b.l.as_ref().unwrap())?
        };
        self.build(b.m, chain, Some(l))
    }

    /// Every congruence, ordered by `m`, then chain, then `L`; universal last.
    pub fn enumerate_all(&self) -> Result<Vec<CongruenceSpec>, CongruenceError> {
        let cat = self.catalog();
        let mut out = Vec::new();
        for m in 1..=self.n {
            let ls = self.normals.enumerate(m)?;
            for chain in cat.enumerate_closed_chains(self.n, m + 1)? {
                let chain = chain.into_levels();
                let lower = self.lower_bound(m, &chain);
                for l in ls.iter() {
                    if lower.as_ref().is_none_or(|b| self.normals.leq(b, l)) {
                        out.push(CongruenceSpec {
                            n: self.n,
                            m,
                            chain: chain.clone(),
                            l: Some(l.clone()),
                        });
                    }
                }
            }
        }
        out.push(self.universal());
        Ok(out)
    }

    /// Idempotent-separating congruences, one per full closed chain.
    pub fn enumerate_idempotent_separating(&self) -> Result<Vec<CongruenceSpec>, CongruenceError> {
        self.catalog()
            .enumerate_closed_chains(self.n, 1)?
            .iter()
            .map(|c| self.from_chain(c.levels()))
            .collect()
    }

    /// Counts without listing, by dynamic programming over chain levels.
    pub fn count(&self) -> Result<CongruenceCounts, CongruenceError> {
        let n = self.n;
        let cat = self.catalog();
        let levels: Vec<Arc<Vec<InvariantSubgroup>>> = (1..=n).map(|i| cat.enumerate(i)).collect::<Result<_, _>>()?;
        // f[i-1][t] = closed chains T_i..T_n with T_i = levels[i-1][t]
        let mut f: Vec<Vec<u128>> = vec![Vec::new(); n];
        f[n - 1] = vec![1; levels[n - 1].len()];
        let mut projections: Vec<Vec<InvariantSubgroup>> = vec![Vec::new(); n];
        for i in (1..n).rev() {
            projections[i] = levels[i].iter().map(|t| cat.project(t).unwrap()).collect();
            f[i - 1] = levels[i - 1]
                .iter()
                .map(|t| {
                    projections[i]
                        .iter()
                        .zip(&f[i])
                        .filter(|(p, _)| cat.leq(p, t))
                        .map(|(_, &c)| c)
                        .sum()
                })
                .collect();
        }
        let idempotent_separating = f[0].iter().sum();
        let mut total = 1 + self.normals.enumerate(n)?.len() as u128;
        for m in 1..n {
            let ls = self.normals.enumerate(m)?;
            for (p, &c) in projections[m].iter().zip(&f[m]) {
                let base = GwsNormal::Base(p.clone());
                total += c * ls.iter().filter(|l| self.normals.leq(&base, l)).count() as u128;
            }
        }
        Ok(CongruenceCounts {
            total,
            idempotent_separating,
        })
    }

    /// Recovers the spec of a congruence given as a class id per element of `monoid.enumerate()`.
    pub fn decompose(&self, monoid: &WreathMonoid, classes: &[usize]) -> Result<CongruenceSpec, CongruenceError> {
        let elems = monoid.enumerate()?;
        if monoid.degree() != self.n || classes.len() != elems.len() {
            return Err(CongruenceError::InvalidSpec(
                "partition does not match the monoid".into(),
            ));
        }
        let class_of = |x: &WreathElement| classes[monoid.index_of(x).expect("enumerated")];
        let zero_class = class_of(&monoid.zero());
        let mut k = 0;
        while k < self.n
            && elems
                .iter()
                .zip(classes)
                .all(|(x, &c)| x.rank() > k + 1 || c == zero_class)
        {
            k += 1;
        }
        let m = k + 1;
        if m == self.n + 1 {
            return Ok(self.universal());
        }
        let cat = self.catalog();
        let not_cong = |what: String| CongruenceError::NotCongruence(what);
        let mut chain = Vec::new();
        for i in m + 1..=self.n {
            let e = WreathElement::unit_labels(PartialInjection::partial_identity(self.n, &(0..i).collect::<Vec<_>>()));
            let ce = class_of(&e);
            let tuples: Vec<Vec<Elem>> = elems
                .iter()
                .zip(classes)
                .filter(|(x, &c)| c == ce && x.perm() == e.perm())
                .map(|(x, _)| x.omega())
                .collect();
            let t = cat
                .enumerate(i)?
                .iter()
                .find(|t| cat.order(t) == tuples.len() as u128 && tuples.iter().all(|g| cat.contains(t, g)))
                .cloned()
                .ok_or_else(|| not_cong(format!("rank {i} class is not an invariant normal subgroup")))?;
            chain.push(t);
        }
        let dom: Vec<usize> = (0..m).collect();
        let e = WreathElement::unit_labels(PartialInjection::partial_identity(self.n, &dom));
        let ce = class_of(&e);
        let images: Vec<(Vec<Elem>, Perm)> = elems
            .iter()
            .zip(classes)
            .filter(|(x, &c)| c == ce && x.perm().domain() == dom && x.perm().image() == dom)
            .map(|(x, _)| psi(x))
            .collect();
        let l = self
            .normals
            .enumerate(m)?
            .iter()
            .find(|l| {
                self.normals.order(l) == images.len() as u128
                    && images.iter().all(|(g, p)| self.normals.contains(l, g, p))
            })
            .cloned()
            .ok_or_else(|| not_cong(format!("rank {m} class is not a normal subgroup")))?;
        self.build(m, chain, Some(l))
    }

    /// Class ids over `monoid.enumerate()`, numbered by first occurrence.
    pub fn partition(&self, s: &CongruenceSpec, monoid: &WreathMonoid) -> Result<Vec<usize>, CongruenceError> {
        let elems = monoid.enumerate()?;
        let mut reps: Vec<usize> = Vec::new();
        let mut classes = Vec::with_capacity(elems.len());
        // related elements share rank and, above the collapsed ideal, an R- and L-class
        let mut buckets: HashMap<(usize, Vec<usize>, Vec<usize>), Vec<usize>> = HashMap::new();
        for x in elems {
            let key = if x.rank() < s.m || s.is_universal() {
                (usize::MAX, Vec::new(), Vec::new())
            } else {
                (x.rank(), x.perm().domain(), x.perm().image())
            };
            let bucket = buckets.entry(key).or_default();
            let found = bucket.iter().copied().find(|&r| self.related(s, &elems[reps[r]], x));
            let id = found.unwrap_or_else(|| {
                reps.push(classes.len());
                bucket.push(reps.len() - 1);
                reps.len() - 1
            });
            classes.push(id);
        }
        Ok(classes)
    }

    pub fn restrict_to_in(&self, s: &CongruenceSpec, mode: RestrictMode) -> InCongruenceSpec {
        if s.is_universal() {
            return InCongruenceSpec::universal(self.n);
        }
        let q = match (s.l.as_ref().unwrap(), mode) {
            (GwsNormal::Base(_), _) => SymNormal::Trivial,
            (GwsNormal::Twisted(t), RestrictMode::ViaEta2) => t.q(),
            (GwsNormal::Twisted(t), RestrictMode::ViaEta1) => {
                if t.odd_image() == 0 {
                    t.q()
                } else {
                    SymNormal::Alternating
                }
            }
        };
        let q = if q.is_valid(s.m) { q } else { SymNormal::Trivial };
        InCongruenceSpec::new(self.n, s.m, Some(q)).expect("restriction parameters are valid")
    }

    /// The congruence generated by the image of `s` under `Θ: G ≀ I_n → G ≀ I_{n+1}`.
    pub fn embed_spec(&self, s: &CongruenceSpec) -> CongruenceSpec {
        let cat = self.catalog();
        let n = self.n + 1;
        if s.is_universal() {
            return CongruenceSpec {
                n,
                m: n,
                chain: Vec::new(),
                l: Some(GwsNormal::Base(cat.trivial(n))),
            };
        }
        let mut chain = s.chain.clone();
        chain.push(cat.trivial(n));
        CongruenceSpec {
            n,
            m: s.m,
            chain,
            l: s.l.clone(),
        }
    }

    /// `{(1_e-labelled g; e) : e idempotent, Ω(g) ∈ T_rank(e)}` as monoid elements.
    pub fn kernel(
        &self,
        chain: &[InvariantSubgroup],
        monoid: &WreathMonoid,
    ) -> Result<Vec<WreathElement>, CongruenceError> {
        Ok(monoid
            .enumerate()?
            .iter()
            .filter(|x| {
                x.in_e_centralizer() && (x.rank() == 0 || self.catalog().contains(&chain[x.rank() - 1], &x.omega()))
            })
            .cloned()
            .collect())
    }

    /// Full chain of the idempotent-separating congruence with kernel `t`.
    pub fn subsemigroup_to_chi(
        &self,
        t: &[WreathElement],
        monoid: &WreathMonoid,
    ) -> Result<Vec<InvariantSubgroup>, CongruenceError> {
        let set: std::collections::HashSet<&WreathElement> = t.iter().collect();
        if let Some(x) = t.iter().find(|x| !x.in_e_centralizer()) {
            return Err(CongruenceError::KernelNotInCentralizer(x.to_string()));
        }
        if let Some(e) = monoid.enumerate_idempotents().into_iter().find(|e| !set.contains(e)) {
            return Err(CongruenceError::KernelNotFull(e.to_string()));
        }
        if let Some(x) = t.iter().find(|x| !set.contains(&monoid.inverse(x))) {
            return Err(CongruenceError::KernelNotInverseClosed(x.to_string()));
        }
        for x in t {
            if let Some(y) = t.iter().find(|y| !set.contains(&monoid.mul(x, y))) {
                return Err(CongruenceError::KernelNotClosed(format!("{x} * {y}")));
            }
        }
        for s in monoid.enumerate()? {
            let si = monoid.inverse(s);
            if let Some(x) = t.iter().find(|x| !set.contains(&monoid.mul(&monoid.mul(s, x), &si))) {
                return Err(CongruenceError::KernelNotSelfConjugate(format!("{s} conjugating {x}")));
            }
        }
        let cat = self.catalog();
        let mut chain = Vec::new();
        for i in 1..=self.n {
            let e = PartialInjection::partial_identity(self.n, &(0..i).collect::<Vec<_>>());
            let tuples: Vec<Vec<Elem>> = t.iter().filter(|x| x.perm() == &e).map(|x| x.omega()).collect();
            let k = cat
                .enumerate(i)?
                .iter()
                .find(|k| cat.order(k) == tuples.len() as u128 && tuples.iter().all(|g| cat.contains(k, g)))
                .cloned()
                .ok_or_else(|| CongruenceError::KernelNotSelfConjugate(format!("rank {i} labels")))?;
            chain.push(k);
        }
        Ok(chain)
    }

    pub fn describe(&self, s: &CongruenceSpec) -> String {
        if s.is_universal() {
            return "universal".into();
        }
        let cat = self.catalog();
        let chain: Vec<String> = s
            .chain
            .iter()
            .map(|t| format!("T{}={}", t.degree(), cat.describe(t)))
            .collect();
        format!(
            "m={} L={} {}",
            s.m,
            self.normals.describe(s.l.as_ref().unwrap()),
            chain.join(" ")
        )
        .trim_end()
        .to_string()
    }

    pub fn to_json(&self, s: &CongruenceSpec) -> Value {
        let cat = self.catalog();
        json!({
            "n": s.n,
            "m": s.m,
            "universal": s.is_universal(),
            "chain": s.chain.iter().map(|t| cat.to_json(t)).collect::<Vec<_>>(),
            "L": s.l.as_ref().map(|l| self.normals.to_json(l)),
        })
    }

    /// Hasse diagram of `specs` under [`leq`](Self::leq).
    pub fn to_dot(&self, specs: &[CongruenceSpec]) -> String {
        let k = specs.len();
        let le: Vec<Vec<bool>> = specs
            .iter()
            .map(|a| specs.iter().map(|b| self.leq(a, b)).collect())
            .collect();
        let mut out = String::from("digraph congruences {\n  rankdir=BT;\n");
        for (i, s) in specs.iter().enumerate() {
            let label = self.describe(s).replace('"', "'");
            writeln!(out, "  c{i} [label=\"{label}\"];").unwrap();
        }
        for i in 0..k {
            for j in 0..k {
                if i != j
                    && le[i][j]
                    && !(0..k).any(|z| z != i && z != j && le[i][z] && le[z][j] && !le[z][i] && !le[j][z])
                {
                    writeln!(out, "  c{i} -> c{j};").unwrap();
                }
            }
        }
        out.push_str("}\n");
        out
    }
}
