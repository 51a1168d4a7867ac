//! The wreath product `G ≀ S_m` and its normal subgroups.
//!
//! A normal subgroup either lies in the base `G^m` (an invariant normal
//! subgroup `K`) or projects onto a nontrivial `Q ⊴ S_m`. In the second case
//! it is `{(g; p) : p ∈ Q, g_1⋯g_m N = ξ(p)}` for some `N ⊴ G` with `G/N`
//! abelian and a conjugation-invariant `ξ: Q → G/N`. Such a `ξ` is trivial
//! unless `Q = S_m`, where it sends odd permutations to an element `c` with
//! `c² = 1`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde_json::{json, Value};
use thiserror::Error;

use crate::bitset::BitSet;
use crate::group::{direct_power, DirectPower, Elem, FiniteGroup, GroupError, QuotientGroup, Subgroup};
use crate::invariant::{InvariantCatalog, InvariantError, InvariantSubgroup};
use crate::perm::{factorial, Perm, SymNormal};

pub const DEFAULT_WREATH_BOUND: usize = crate::group::TABLE_BOUND;

#[derive(Debug, Error)]
pub enum WreathNormalError {
    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("subgroup is not normal in the wreath product")]
    NotNormal,
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// `G ≀ S_m` with product `(h; p)(g; q) = (h g^p; pq)`.
///
/// Element `(g; p)` has index `encode(g) · m! + lex_rank(p)`.
#[derive(Debug)]
pub struct WreathSymGroup {
    power: DirectPower,
    perms: Vec<Perm>,
    group: Arc<FiniteGroup>,
}

pub fn build_wreath_sym(base: &Arc<FiniteGroup>, m: usize, bound: usize) -> Result<WreathSymGroup, GroupError> {
    let order = (base.order() as u128)
        .checked_pow(m as u32)
        .and_then(|x| x.checked_mul(factorial(m) as u128))
        .unwrap_or(u128::MAX);
    crate::group::check_bound(format!("{} wr S{m}", base.name()), order, bound)?;
    let power = direct_power(base, m, bound)?;
    let perms = Perm::all(m);
    let mut mul_table = vec![0usize; perms.len() * perms.len()];
    for (i, p) in perms.iter().enumerate() {
        for (j, q) in perms.iter().enumerate() {
            mul_table[i * perms.len() + j] = p.then(q).lex_rank();
        }
    }
    let k = perms.len();
    let pg = power.group().clone();
    let group = FiniteGroup::tabulate(format!("{} wr S{m}", base.name()), order as usize, |a, b| {
        let (ha, pa) = (a / k, a % k);
        let (hb, pb) = (b / k, b % k);
        let moved = power.encode(&perms[pa].act(&power.decode(hb)));
        pg.mul(ha, moved) * k + mul_table[pa * k + pb]
    })?;
    Ok(WreathSymGroup {
        power,
        perms,
        group: Arc::new(group),
    })
}

impl WreathSymGroup {
    pub fn m(&self) -> usize {
        self.power.m()
    }

    pub fn base(&self) -> &Arc<FiniteGroup> {
        self.power.base()
    }

    pub fn power(&self) -> &DirectPower {
        &self.power
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn perms(&self) -> &[Perm] {
        &self.perms
    }

    pub fn encode(&self, g: &[Elem], p: &Perm) -> Elem {
        self.power.encode(g) * self.perms.len() + p.lex_rank()
    }

    pub fn decode(&self, x: Elem) -> (Vec<Elem>, Perm) {
        let k = self.perms.len();
        (self.power.decode(x / k), self.perms[x % k].clone())
    }

    /// `{(x; y) : y ∈ Q, xJ = ξ(y)}` if `t` is a normal subgroup triple.
    pub fn triple_to_subgroup(&self, t: &NormalSubgroupTriple) -> Option<Subgroup> {
        if !self.validate_triple(t) {
            return None;
        }
        let quo = QuotientGroup::new(self.power.group(), &t.j).ok()?;
        let k = self.perms.len();
        let bits = BitSet::from_indices(
            self.order(),
            self.group.elements().filter(|&x| {
                let (h, r) = (x / k, x % k);
                t.xi[r] != NONE && quo.project(h) == t.xi[r] as usize
            }),
        );
        Some(Subgroup::from_bits_unchecked(bits))
    }

    /// Checks that `J` is normal and invariant, `Q` is normal, `ξ` is a crossed
    /// homomorphism, and both compatibility conditions hold.
    pub fn validate_triple(&self, t: &NormalSubgroupTriple) -> bool {
        let k = self.perms.len();
        let h = self.power.group();
        if t.j.parent_order() != h.order() || t.q.universe() != k || t.xi.len() != k {
            return false;
        }
        if !h.is_subgroup(t.j.bits()) || !h.is_normal(&t.j) {
            return false;
        }
        let act = |p: &Perm, x: Elem| self.power.encode(&p.act(&self.power.decode(x)));
        if !self.perms.iter().all(|p| t.j.iter().all(|x| t.j.contains(act(p, x)))) {
            return false;
        }
        let qs: Vec<usize> = t.q.iter().collect();
        let rank = |p: Perm| p.lex_rank();
        if !t.q.contains(0)
            || !qs.iter().all(|&a| {
                qs.iter()
                    .all(|&b| t.q.contains(rank(self.perms[a].then(&self.perms[b]))))
            })
        {
            return false;
        }
        let conj = |p: &Perm, y: usize| rank(p.then(&self.perms[y]).then(&p.inverse()));
        if !self.perms.iter().all(|p| qs.iter().all(|&y| t.q.contains(conj(p, y)))) {
            return false;
        }
        let Ok(quo) = QuotientGroup::new(h, &t.j) else {
            return false;
        };
        if (0..k).any(|r| (t.xi[r] != NONE) != t.q.contains(r)) || qs.iter().any(|&r| t.xi[r] as usize >= quo.order()) {
            return false;
        }
        let xi = |r: usize| t.xi[r] as usize;
        let coset_act = |p: &Perm, c: usize| quo.project(act(p, quo.rep(c)));
        // crossed homomorphism: ξ(yy') = ξ(y) ξ(y')^y
        let crossed = qs.iter().all(|&a| {
            qs.iter().all(|&b| {
                let ab = rank(self.perms[a].then(&self.perms[b]));
                xi(ab) == quo.group().mul(xi(a), coset_act(&self.perms[a], xi(b)))
            })
        });
        // (i): ξ(q)^p = ξ(p q p⁻¹)
        let cond_i = self
            .perms
            .iter()
            .all(|p| qs.iter().all(|&q| coset_act(p, xi(q)) == xi(conj(p, q))));
        // (ii): h^q J = ξ(q)⁻¹ h ξ(q) J
        let cond_ii = qs.iter().all(|&q| {
            let x = quo.rep(xi(q));
            h.elements()
                .all(|y| quo.project(act(&self.perms[q], y)) == quo.project(h.mul(h.mul(h.inv(x), y), x)))
        });
        crossed && cond_i && cond_ii
    }

    /// Base kernel, projection and induced coset map of a subgroup.
    pub fn extract_triple(&self, s: &Subgroup) -> Option<NormalSubgroupTriple> {
        let k = self.perms.len();
        let h = self.power.group();
        let j = h
            .subgroup(BitSet::from_indices(
                h.order(),
                s.iter().filter(|x| x % k == 0).map(|x| x / k),
            ))
            .ok()?;
        let quo = QuotientGroup::new(h, &j).ok()?;
        let mut xi = vec![NONE; k];
        let mut q = BitSet::new(k);
        for x in s.iter() {
            let c = quo.project(x / k) as u32;
            if q.insert(x % k) {
                xi[x % k] = c;
            } else if xi[x % k] != c {
                return None;
            }
        }
        Some(NormalSubgroupTriple { j, q, xi })
    }
}

const NONE: u32 = u32::MAX;

/// `(J, Q, ξ)` for `G^m ⋊ S_m`: `J ≤ G^m`, `Q` a set of permutation ranks and
/// `ξ` the `G^m/J` coset index per rank (`u32::MAX` outside `Q`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalSubgroupTriple {
    pub j: Subgroup,
    pub q: BitSet,
    pub xi: Vec<u32>,
}

/// Symbolic normal subgroup of `G ≀ S_m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GwsNormal {
    Base(InvariantSubgroup),
    Twisted(TwistedNormal),
}

/// `{(g; p) : p ∈ Q, g_1⋯g_m N = ξ(p)}` with `ξ(p) = c` for odd `p` and `1` otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwistedNormal {
    degree: usize,
    n: usize,
    q: SymNormal,
    odd_image: Elem,
}

impl TwistedNormal {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> SymNormal {
        self.q
    }

    /// `G/N` coset index of `ξ` on odd permutations.
    pub fn odd_image(&self) -> Elem {
        self.odd_image
    }
}

impl GwsNormal {
    pub fn degree(&self) -> usize {
        match self {
            GwsNormal::Base(k) => k.degree(),
            GwsNormal::Twisted(t) => t.degree,
        }
    }

    pub fn projection(&self) -> SymNormal {
        match self {
            GwsNormal::Base(_) => SymNormal::Trivial,
            GwsNormal::Twisted(t) => t.q,
        }
    }
}

impl fmt::Display for GwsNormal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GwsNormal::Base(k) => write!(f, "base {k}"),
            GwsNormal::Twisted(t) => write!(f, "twisted N{} {} c={}", t.n, t.q.name(), t.odd_image),
        }
    }
}

/// Normal subgroups of `G ≀ S_m` for every `m`, over a shared catalog.
#[derive(Debug)]
pub struct WreathNormals {
    cat: Arc<InvariantCatalog>,
    levels: Mutex<HashMap<usize, Arc<Vec<GwsNormal>>>>,
}

impl WreathNormals {
    pub fn new(cat: Arc<InvariantCatalog>) -> Self {
        WreathNormals {
            cat,
            levels: Mutex::new(HashMap::new()),
        }
    }

    pub fn catalog(&self) -> &Arc<InvariantCatalog> {
        &self.cat
    }

    fn quo(&self, n: usize) -> &QuotientGroup {
        self.cat.lattice().quotient(n).expect("catalog builds all quotients")
    }

    /// `G/N` coset of `g_1 ⋯ g_m`.
    fn product_coset(&self, n: usize, g: &[Elem]) -> Elem {
        let q = self.quo(n);
        g.iter().fold(0, |acc, &x| q.group().mul(acc, q.project(x)))
    }

    pub fn base(&self, k: InvariantSubgroup) -> GwsNormal {
        GwsNormal::Base(k)
    }

    pub fn twisted(
        &self,
        degree: usize,
        n: usize,
        q: SymNormal,
        odd_image: Elem,
    ) -> Result<GwsNormal, WreathNormalError> {
        let bad = |s: &str| Err(WreathNormalError::InvalidDescriptor(s.to_string()));
        let lat = self.cat.lattice();
        if degree < 2 {
            return bad("twisted subgroups need degree at least 2");
        }
        if q == SymNormal::Trivial || !q.is_valid(degree) {
            return bad("Q must be a nontrivial normal subgroup of S_m");
        }
        if n >= lat.len() || !lat.has_abelian_quotient(n) {
            return bad("G/N must be abelian");
        }
        let quo = self.quo(n);
        if odd_image >= quo.order() || quo.group().mul(odd_image, odd_image) != 0 {
            return bad("xi must send odd permutations to an element of order at most 2");
        }
        if q != SymNormal::Symmetric && odd_image != 0 {
            return bad("xi is trivial unless Q is the full symmetric group");
        }
        Ok(GwsNormal::Twisted(TwistedNormal {
            degree,
            n,
            q,
            odd_image,
        }))
    }

    /// The degree-2 lift of `{(g, h) : hN = θ(gN)}` by `ζ: S_2 → G/N`.
    ///
    /// `theta` is a table on `G/N` cosets. The coset map `(g, h) ↦ gN θ(hN)⁻¹`
    /// is only well defined when `θ` is inversion; other tables are rejected.
    pub fn m2_special(&self, n: usize, theta: &[Elem], zeta: Elem) -> Result<GwsNormal, WreathNormalError> {
        let lat = self.cat.lattice();
        if n >= lat.len() || !lat.has_abelian_quotient(n) {
            return Err(WreathNormalError::InvalidDescriptor("G/N must be abelian".into()));
        }
        let quo = self.quo(n);
        let inversion: Vec<Elem> = (0..quo.order()).map(|c| quo.group().inv(c)).collect();
        if theta != inversion.as_slice() {
            return Err(WreathNormalError::InvalidDescriptor(format!(
                "theta {theta:?} does not give a well-defined map to G/N; only inversion {inversion:?} does"
            )));
        }
        self.twisted(2, n, SymNormal::Symmetric, zeta)
    }

    /// Intersection with the base group, as an invariant subgroup of `G^m`.
    pub fn base_kernel(&self, l: &GwsNormal) -> InvariantSubgroup {
        match l {
            GwsNormal::Base(k) => k.clone(),
            GwsNormal::Twisted(t) => self.cat.product_kernel(t.n, t.degree),
        }
    }

    /// `ξ(p)` as a `G/N` coset; `None` outside `Q`.
    pub fn xi(&self, t: &TwistedNormal, p: &Perm) -> Option<Elem> {
        if !t.q.contains(p) {
            None
        } else if p.is_even() {
            Some(0)
        } else {
            Some(t.odd_image)
        }
    }

    pub fn contains(&self, l: &GwsNormal, g: &[Elem], p: &Perm) -> bool {
        match l {
            GwsNormal::Base(k) => p.is_identity() && self.cat.contains(k, g),
            GwsNormal::Twisted(t) => self.xi(t, p) == Some(self.product_coset(t.n, g)),
        }
    }

    pub fn order(&self, l: &GwsNormal) -> u128 {
        match l {
            GwsNormal::Base(k) => self.cat.order(k),
            GwsNormal::Twisted(t) => self.cat.order(&self.base_kernel(l)) * t.q.order(t.degree),
        }
    }

    /// Elements whose normal closure is `l`.
    pub fn generators(&self, l: &GwsNormal) -> Vec<(Vec<Elem>, Perm)> {
        let m = l.degree();
        let mut out: Vec<(Vec<Elem>, Perm)> = self
            .cat
            .generators(&self.base_kernel(l))
            .into_iter()
            .map(|g| (g, Perm::identity(m)))
            .collect();
        if let GwsNormal::Twisted(t) = l {
            let quo = self.quo(t.n);
            for p in t.q.generators(m) {
                let mut g = vec![0; m];
                g[0] = quo.rep(self.xi(t, &p).expect("generator lies in Q"));
                out.push((g, p));
            }
        }
        out
    }

    pub fn leq(&self, a: &GwsNormal, b: &GwsNormal) -> bool {
        a.degree() == b.degree()
            && self.order(a) <= self.order(b)
            && self.generators(a).iter().all(|(g, p)| self.contains(b, g, p))
    }

    /// Every normal subgroup of `G ≀ S_m`, by size then descriptor.
    pub fn enumerate(&self, m: usize) -> Result<Arc<Vec<GwsNormal>>, WreathNormalError> {
        if let Some(v) = self.levels.lock().unwrap().get(&m) {
            return Ok(v.clone());
        }
        let mut out: Vec<GwsNormal> = self.cat.enumerate(m)?.iter().cloned().map(GwsNormal::Base).collect();
        if m >= 2 {
            let lat = self.cat.lattice();
            for q in SymNormal::all(m).into_iter().filter(|&q| q != SymNormal::Trivial) {
                for n in (0..lat.len()).filter(|&n| lat.has_abelian_quotient(n)) {
                    let quo = self.quo(n);
                    for c in quo.group().elements() {
                        if let Ok(l) = self.twisted(m, n, q, c) {
                            out.push(l);
                        }
                    }
                }
            }
        }
        out.sort_by(|a, b| self.order(a).cmp(&self.order(b)).then_with(|| a.cmp(b)));
        let out = Arc::new(out);
        self.levels.lock().unwrap().insert(m, out.clone());
        Ok(out)
    }

    pub fn join(&self, a: &GwsNormal, b: &GwsNormal) -> Result<GwsNormal, WreathNormalError> {
        Ok(self
            .enumerate(a.degree())?
            .iter()
            .filter(|l| self.leq(a, l) && self.leq(b, l))
            .min_by_key(|l| self.order(l))
            .expect("the whole group is an upper bound")
            .clone())
    }

    pub fn meet(&self, a: &GwsNormal, b: &GwsNormal) -> Result<GwsNormal, WreathNormalError> {
        Ok(self
            .enumerate(a.degree())?
            .iter()
            .filter(|l| self.leq(l, a) && self.leq(l, b))
            .max_by_key(|l| self.order(l))
            .expect("the trivial subgroup is a lower bound")
            .clone())
    }

    pub fn realize(&self, l: &GwsNormal, w: &WreathSymGroup) -> Subgroup {
        assert_eq!(w.m(), l.degree());
        Subgroup::from_bits_unchecked(BitSet::from_indices(
            w.order(),
            w.group().elements().filter(|&x| {
                let (g, p) = w.decode(x);
                self.contains(l, &g, &p)
            }),
        ))
    }

    /// Symbolic form of an explicit normal subgroup.
    pub fn classify(&self, w: &WreathSymGroup, s: &Subgroup) -> Result<GwsNormal, WreathNormalError> {
        if !w.group().is_normal(s) {
            return Err(WreathNormalError::NotNormal);
        }
        let t = w.extract_triple(s).ok_or(WreathNormalError::NotNormal)?;
        let k = self.cat.extract(w.power(), &t.j)?;
        let m = w.m();
        let q = SymNormal::all(m)
            .into_iter()
            .find(|q| w.perms().iter().all(|p| q.contains(p) == t.q.contains(p.lex_rank())))
            .ok_or(WreathNormalError::NotNormal)?;
        let l = if q == SymNormal::Trivial {
            GwsNormal::Base(k)
        } else {
            let unit = self.cat.group().generate_from(
                t.j.iter()
                    .map(|x| w.power().decode(x))
                    .filter(|g| g[1..].iter().all(|&y| y == 0))
                    .map(|g| g[0]),
            );
            let n = self.cat.lattice().index_of(&unit).ok_or(WreathNormalError::NotNormal)?;
            let c = if q == SymNormal::Symmetric {
                let tau = Perm::transposition(m, 0, 1);
                let jq = QuotientGroup::new(w.power().group(), &t.j)?;
                let x = jq.rep(t.xi[tau.lex_rank()] as usize);
                self.product_coset(n, &w.power().decode(x))
            } else {
                0
            };
            self.twisted(m, n, q, c)?
        };
        if &self.realize(&l, w) != s {
            return Err(WreathNormalError::InvalidDescriptor(
                "classification does not rebuild the subgroup".into(),
            ));
        }
        Ok(l)
    }

    pub fn describe(&self, l: &GwsNormal) -> String {
        match l {
            GwsNormal::Base(k) => format!("type-i {}", self.cat.describe(k)),
            GwsNormal::Twisted(t) => format!(
                "{} N=N{}[{}] Q={} xi(odd)={}",
                if t.degree == 2 { "m2" } else { "type-ii" },
                t.n,
                self.cat.lattice().subgroup(t.n).len(),
                t.q.name(),
                t.odd_image
            ),
        }
    }

    pub fn to_json(&self, l: &GwsNormal) -> Value {
        let mut v = match l {
            GwsNormal::Base(k) => json!({ "kind": "type-i", "K": self.cat.to_json(k) }),
            GwsNormal::Twisted(t) => {
                let sub = self.cat.lattice().subgroup(t.n);
                let n = json!({ "index": t.n, "order": sub.len(), "members": sub.members() });
                if t.degree == 2 {
                    json!({
                        "kind": "m2",
                        "N": n,
                        "K": self.cat.to_json(&self.base_kernel(l)),
                        "theta": "inversion",
                        "zeta": t.odd_image,
                    })
                } else {
                    json!({
                        "kind": "type-ii",
                        "N": n,
                        "Q": t.q.name(),
                        "xi": { "even": 0, "odd": t.odd_image },
                    })
                }
            }
        };
        v["degree"] = json!(l.degree());
        v["order"] = json!(self.order(l).to_string());
        v
    }
}
