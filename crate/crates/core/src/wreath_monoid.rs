//! The partial wreath product `G ≀ I_n` in pair form `(g; a)`.
//!
//! Labels are `None` (zero) exactly off `dom(a)`. Products follow
//! `(g; a)(h; b) = (g·h_a; ab)` with `(h_a)_i = h_{ia}`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::Rng;
use thiserror::Error;

use crate::group::{Elem, FiniteGroup};
use crate::sym_inverse::{Green, InjectionError, PartialInjection};

pub const DEFAULT_MONOID_BOUND: usize = 5000;

const ZERO: u32 = u32::MAX;

#[derive(Debug, Error)]
pub enum WreathError {
    #[error("label {0} must be zero exactly when {0} is outside the domain")]
    LabelSupport(usize),
    #[error("label {0} is not an element of the group")]
    LabelOutOfRange(Elem),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("monoid has {size} elements, bound is {bound}")]
    TooLarge { size: u128, bound: usize },
    #[error("cannot parse wreath element `{0}`")]
    Parse(String),
    #[error(transparent)]
    Injection(#[from] InjectionError),
}

/// An element `(g; a)` of `G ≀ I_n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WreathElement {
    labels: Vec<u32>,
    perm: PartialInjection,
}

/// Label-level product shared by concrete groups and symbolic words.
pub fn multiply_labels<T: Clone>(
    g: &[Option<T>],
    a: &PartialInjection,
    h: &[Option<T>],
    b: &PartialInjection,
    mul: impl Fn(&T, &T) -> T,
) -> (Vec<Option<T>>, PartialInjection) {
    let ab = a.then(b);
    let labels = (0..g.len())
        .map(|i| match (a.apply(i), &g[i]) {
            (Some(j), Some(gi)) => h[j].as_ref().map(|hj| mul(gi, hj)),
            _ => None,
        })
        .collect();
    (labels, ab)
}

impl WreathElement {
    pub fn new(labels: &[Option<Elem>], perm: PartialInjection) -> Result<Self, WreathError> {
        if labels.len() != perm.degree() {
            return Err(WreathError::DegreeMismatch(labels.len(), perm.degree()));
        }
        for (i, l) in labels.iter().enumerate() {
            if l.is_some() != perm.apply(i).is_some() {
                return Err(WreathError::LabelSupport(i + 1));
            }
        }
        Ok(WreathElement {
            labels: labels.iter().map(|l| l.map_or(ZERO, |x| x as u32)).collect(),
            perm,
        })
    }

    /// `(1_e; e)` for a partial identity `e`, or `(1_{dom a}; a)` in general.
    pub fn unit_labels(perm: PartialInjection) -> Self {
        let labels = (0..perm.degree())
            .map(|i| if perm.apply(i).is_some() { 0 } else { ZERO })
            .collect();
        WreathElement { labels, perm }
    }

    /// Builds from labels over the sorted domain (the `Ω` coordinates).
    pub fn from_omega(omega: &[Elem], perm: PartialInjection) -> Self {
        let mut labels = vec![ZERO; perm.degree()];
        for (slot, &x) in perm.domain().iter().zip(omega) {
            labels[*slot] = x as u32;
        }
        WreathElement { labels, perm }
    }

    pub fn degree(&self) -> usize {
        self.perm.degree()
    }

    pub fn perm(&self) -> &PartialInjection {
        &self.perm
    }

    pub fn rank(&self) -> usize {
        self.perm.rank()
    }

    #[inline]
    pub fn label(&self, i: usize) -> Option<Elem> {
        match self.labels[i] {
            ZERO => None,
            x => Some(x as usize),
        }
    }

    pub fn labels(&self) -> Vec<Option<Elem>> {
        (0..self.labels.len()).map(|i| self.label(i)).collect()
    }

    /// Labels over the sorted domain.
    pub fn omega(&self) -> Vec<Elem> {
        self.labels
            .iter()
            .filter(|&&x| x != ZERO)
            .map(|&x| x as usize)
            .collect()
    }

    pub fn is_idempotent(&self) -> bool {
        self.perm.is_idempotent() && self.labels.iter().all(|&x| x == 0 || x == ZERO)
    }

    /// Membership in `Eζ`: the map part is a partial identity.
    pub fn in_e_centralizer(&self) -> bool {
        self.perm.is_idempotent()
    }

    /// `Θ`: appends a zero label and an undefined point.
    pub fn theta_embed(&self, n_plus: usize) -> Result<Self, WreathError> {
        if n_plus != self.degree() + 1 {
            return Err(WreathError::DegreeMismatch(n_plus, self.degree() + 1));
        }
        let mut images: Vec<Option<usize>> = (0..self.degree()).map(|i| self.perm.apply(i)).collect();
        images.push(None);
        let mut labels = self.labels.clone();
        labels.push(ZERO);
        Ok(WreathElement {
            labels,
            perm: PartialInjection::new(&images)?,
        })
    }
}

/// Text form `(g1,g2,-,g4 ; [2,1,-,3])` with element indices as labels.
impl fmt::Display for WreathElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self
            .labels()
            .iter()
            .map(|l| l.map_or("-".to_string(), |x| x.to_string()))
            .collect();
        write!(f, "({} ; {})", labels.join(","), self.perm)
    }
}

impl fmt::Debug for WreathElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Splits `(l1,l2,... ; [..])` into raw label tokens (`None` for `-`) and the map.
pub fn parse_element_text(s: &str) -> Result<(Vec<Option<String>>, PartialInjection), WreathError> {
    let err = || WreathError::Parse(s.to_string());
    let body = s
        .trim()
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(err)?;
    let (labels, perm) = body.split_once(';').ok_or_else(err)?;
    let perm: PartialInjection = perm.trim().parse()?;
    let labels: Vec<Option<String>> = if labels.trim().is_empty() {
        Vec::new()
    } else {
        labels
            .split(',')
            .map(|t| match t.trim() {
                "-" | "−" => None,
                "" => Some(String::new()),
                tok => Some(tok.to_string()),
            })
            .collect()
    };
    if labels.iter().any(|l| l.as_deref() == Some("")) {
        return Err(err());
    }
    if labels.len() != perm.degree() {
        return Err(WreathError::DegreeMismatch(labels.len(), perm.degree()));
    }
    for (i, l) in labels.iter().enumerate() {
        if l.is_some() != perm.apply(i).is_some() {
            return Err(WreathError::LabelSupport(i + 1));
        }
    }
    Ok((labels, perm))
}

/// The monoid `G ≀ I_n` with a lazily built element list.
#[derive(Debug)]
pub struct WreathMonoid {
    group: Arc<FiniteGroup>,
    n: usize,
    elements: OnceLock<Vec<WreathElement>>,
    index: OnceLock<HashMap<WreathElement, usize>>,
}

impl WreathMonoid {
    pub fn new(group: Arc<FiniteGroup>, n: usize) -> Self {
        WreathMonoid {
            group,
            n,
            elements: OnceLock::new(),
            index: OnceLock::new(),
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// `Σ_k C(n,k)² k! |G|^k`.
    pub fn size(&self) -> u128 {
        let g = self.group.order() as u128;
        (0..=self.n as u128)
            .map(|k| {
                crate::sym_inverse::binomial(self.n as u128, k).pow(2) * (1..=k).product::<u128>() * g.pow(k as u32)
            })
            .sum()
    }

    pub fn parse(&self, s: &str) -> Result<WreathElement, WreathError> {
        let (labels, perm) = parse_element_text(s)?;
        if perm.degree() != self.n {
            return Err(WreathError::DegreeMismatch(perm.degree(), self.n));
        }
        let mut out = Vec::with_capacity(labels.len());
        for l in labels {
            out.push(match l {
                None => None,
                Some(tok) => {
                    let x: Elem = tok.parse().map_err(|_| WreathError::Parse(s.to_string()))?;
                    if x >= self.group.order() {
                        return Err(WreathError::LabelOutOfRange(x));
                    }
                    Some(x)
                }
            });
        }
        WreathElement::new(&out, perm)
    }

    pub fn check(&self, x: &WreathElement) -> Result<(), WreathError> {
        if x.degree() != self.n {
            return Err(WreathError::DegreeMismatch(x.degree(), self.n));
        }
        if let Some(l) = x.labels().into_iter().flatten().find(|&l| l >= self.group.order()) {
            return Err(WreathError::LabelOutOfRange(l));
        }
        Ok(())
    }

    pub fn multiply(&self, x: &WreathElement, y: &WreathElement) -> Result<WreathElement, WreathError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul(x, y))
    }

    /// Unchecked product.
    pub fn mul(&self, x: &WreathElement, y: &WreathElement) -> WreathElement {
        let g = &self.group;
        let perm = x.perm.then(&y.perm);
        let labels = (0..self.n)
            .map(|i| match x.perm.apply(i) {
                Some(j) if y.labels[j] != ZERO => g.mul(x.labels[i] as usize, y.labels[j] as usize) as u32,
                _ => ZERO,
            })
            .collect();
        WreathElement { labels, perm }
    }

    /// `(g_{a⁻¹}⁻¹; a⁻¹)`.
    pub fn inverse(&self, x: &WreathElement) -> WreathElement {
        let inv = x.perm.inverse();
        let labels = (0..self.n)
            .map(|j| match inv.apply(j) {
                Some(i) => self.group.inv(x.labels[i] as usize) as u32,
                None => ZERO,
            })
            .collect();
        WreathElement { labels, perm: inv }
    }

    pub fn identity(&self) -> WreathElement {
        WreathElement::unit_labels(PartialInjection::identity(self.n))
    }

    pub fn zero(&self) -> WreathElement {
        WreathElement::unit_labels(PartialInjection::empty(self.n))
    }

    pub fn green_related(&self, x: &WreathElement, y: &WreathElement, rel: Green) -> Result<bool, WreathError> {
        Ok(x.perm.green_related(&y.perm, rel)?)
    }

    pub fn ideal_rank(&self, x: &WreathElement) -> usize {
        x.rank()
    }

    pub fn enumerate(&self) -> Result<&[WreathElement], WreathError> {
        self.enumerate_bounded(DEFAULT_MONOID_BOUND)
    }

    /// All elements, ordered by map (rank first) then labels.
    pub fn enumerate_bounded(&self, bound: usize) -> Result<&[WreathElement], WreathError> {
        if let Some(v) = self.elements.get() {
            return Ok(v);
        }
        let size = self.size();
        if size > bound as u128 {
            return Err(WreathError::TooLarge { size, bound });
        }
        let k = self.group.order();
        let mut out = Vec::with_capacity(size as usize);
        for a in PartialInjection::all(self.n) {
            let r = a.rank();
            let mut omega = vec![0; r];
            loop {
                out.push(WreathElement::from_omega(&omega, a.clone()));
                let mut wrapped = true;
                for slot in omega.iter_mut().rev() {
                    *slot += 1;
                    if *slot < k {
                        wrapped = false;
                        break;
                    }
                    *slot = 0;
                }
                if wrapped {
                    break;
                }
            }
        }
        Ok(self.elements.get_or_init(|| out))
    }

    /// Position of `x` in [`enumerate`](Self::enumerate).
    pub fn index_of(&self, x: &WreathElement) -> Option<usize> {
        let elems = self.elements.get()?;
        self.index
            .get_or_init(|| elems.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect())
            .get(x)
            .copied()
    }

    /// The `2^n` idempotents `(1_e; e)`.
    pub fn enumerate_idempotents(&self) -> Vec<WreathElement> {
        (0..=self.n)
            .flat_map(|k| crate::sym_inverse::subsets(self.n, k))
            .map(|d| WreathElement::unit_labels(PartialInjection::partial_identity(self.n, &d)))
            .collect()
    }

    pub fn random_element<R: Rng>(&self, rng: &mut R) -> WreathElement {
        let mut images: Vec<usize> = (0..self.n).collect();
        for i in (1..self.n).rev() {
            images.swap(i, rng.gen_range(0..=i));
        }
        let keep: Vec<Option<usize>> = images.iter().map(|&j| rng.gen_bool(0.6).then_some(j)).collect();
        let perm = PartialInjection::new(&keep).expect("shuffle is injective");
        let omega: Vec<Elem> = (0..perm.rank()).map(|_| rng.gen_range(0..self.group.order())).collect();
        WreathElement::from_omega(&omega, perm)
    }
}
