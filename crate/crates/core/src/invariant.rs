//! Invariant normal subgroups of `G^m` in symbolic form.
//!
//! Degree 1 subgroups are normal subgroups of `G`. Degree 2 subgroups are
//! Goursat pairs `(A, C, θ)` with `θ` an involutive automorphism of `A/C`.
//! Degree `m ≥ 3` subgroups are quadruples `(L, M, N, φ)` with
//! `N ≤ M ≤ L`, `[G, L] ⊆ N` and `φ: L → L/N`, realized as
//! `{ g ∈ L^m : g_1 M = … = g_m M, φ(g_1) = g_1^{2-m} g_2 ⋯ g_m N }`.
//!
//! Subgroup indices refer to a shared [`NormalLattice`]; cosets are indices
//! into the corresponding quotient.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde_json::{json, Value};
use thiserror::Error;

use crate::group::{all_homs, DirectPower, Elem, FiniteGroup, GroupError, NormalLattice, QuotientGroup, Subgroup};
use crate::perm::Perm;

const NONE: u32 = u32::MAX;

#[derive(Debug, Error)]
pub enum InvariantError {
    #[error("subgroup is not invariant under coordinate permutations")]
    NotInvariant,
    #[error("subgroup is not normal in the direct power")]
    NotNormal,
    #[error("invalid quadruple: {0}")]
    InvalidQuadruple(String),
    #[error("subgroup is not in the normal lattice")]
    NotInLattice,
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// `(A, C, θ)`; `theta` maps `G/C` coset indices, `NONE` outside `A/C`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GoursatPair {
    pub a: usize,
    pub c: usize,
    theta: Vec<u32>,
}

impl GoursatPair {
    pub fn theta(&self, coset: Elem) -> Option<Elem> {
        match self.theta[coset] {
            NONE => None,
            x => Some(x as usize),
        }
    }
}

/// `(L, M, N, φ)`; `phi` maps elements of `G` to `G/N` coset indices, `NONE` outside `L`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InvariantQuadruple {
    pub l: usize,
    pub m: usize,
    pub n: usize,
    phi: Vec<u32>,
}

impl InvariantQuadruple {
    pub fn phi(&self, g: Elem) -> Option<Elem> {
        match self.phi[g] {
            NONE => None,
            x => Some(x as usize),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InvariantForm {
    Normal(usize),
    Pair(GoursatPair),
    Quad(InvariantQuadruple),
}

/// An invariant normal subgroup of `G^degree`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InvariantSubgroup {
    degree: usize,
    form: InvariantForm,
}

impl InvariantSubgroup {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn form(&self) -> &InvariantForm {
        &self.form
    }
}

type Tables = Arc<Vec<Vec<u32>>>;

/// Normal lattice of `G` together with the per-degree invariant subgroup lists.
#[derive(Debug)]
pub struct InvariantCatalog {
    lattice: Arc<NormalLattice>,
    gens: Vec<Vec<Elem>>,
    homs: Mutex<HashMap<(usize, usize), Tables>>,
    involutions: Mutex<HashMap<(usize, usize), Tables>>,
    levels: Mutex<HashMap<usize, Arc<Vec<InvariantSubgroup>>>>,
}

impl InvariantCatalog {
    pub fn new(group: Arc<FiniteGroup>) -> Result<Self, InvariantError> {
        let lattice = NormalLattice::new(group)?;
        Self::from_lattice(Arc::new(lattice))
    }

    pub fn from_lattice(lattice: Arc<NormalLattice>) -> Result<Self, InvariantError> {
        for i in 0..lattice.len() {
            lattice.quotient(i)?;
        }
        let g = lattice.group();
        let gens = lattice.subgroups().iter().map(|s| g.subgroup_generators(s)).collect();
        Ok(InvariantCatalog {
            lattice,
            gens,
            homs: Mutex::new(HashMap::new()),
            involutions: Mutex::new(HashMap::new()),
            levels: Mutex::new(HashMap::new()),
        })
    }

    pub fn lattice(&self) -> &Arc<NormalLattice> {
        &self.lattice
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.lattice.group()
    }

    fn sub(&self, i: usize) -> &Subgroup {
        self.lattice.subgroup(i)
    }

    fn quo(&self, i: usize) -> &QuotientGroup {
        self.lattice.quotient(i).expect("quotients are built at construction")
    }

    /// Upper section `U/D` as a group, with the `G/D` coset index of each element.
    fn section(&self, upper: usize, lower: usize) -> (FiniteGroup, Vec<Elem>) {
        let q = self.quo(lower);
        let image = q.group().generate_from(self.sub(upper).iter().map(|x| q.project(x)));
        image.as_group(q.group(), "section")
    }

    /// All homomorphisms `L → L/N` as `G → G/N` coset tables.
    fn homs_to_section(&self, l: usize, n: usize) -> Arc<Vec<Vec<u32>>> {
        if let Some(v) = self.homs.lock().unwrap().get(&(l, n)) {
            return v.clone();
        }
        let g = self.group();
        let (lg, l_members) = self.sub(l).as_group(g, "L");
        let (sec, sec_cosets) = self.section(l, n);
        let homs = all_homs(&lg, &sec).expect("sections are small");
        let tables: Vec<Vec<u32>> = homs
            .iter()
            .map(|h| {
                let mut phi = vec![NONE; g.order()];
                for (i, &x) in l_members.iter().enumerate() {
                    phi[x] = sec_cosets[h.apply(i)] as u32;
                }
                phi
            })
            .collect();
        let tables = Arc::new(tables);
        self.homs.lock().unwrap().insert((l, n), tables.clone());
        tables
    }

    /// Involutive automorphisms of `A/C` as `G/C` coset tables.
    fn involutions_of(&self, a: usize, c: usize) -> Arc<Vec<Vec<u32>>> {
        if let Some(v) = self.involutions.lock().unwrap().get(&(a, c)) {
            return v.clone();
        }
        let (sec, cosets) = self.section(a, c);
        let k = self.quo(c).order();
        let tables: Vec<Vec<u32>> = all_homs(&sec, &sec)
            .expect("sections are small")
            .into_iter()
            .filter(|h| {
                let mut hit = vec![false; sec.order()];
                sec.elements().all(|x| !std::mem::replace(&mut hit[h.apply(x)], true))
                    && sec.elements().all(|x| h.apply(h.apply(x)) == x)
            })
            .map(|h| {
                let mut theta = vec![NONE; k];
                for (i, &coset) in cosets.iter().enumerate() {
                    theta[coset] = cosets[h.apply(i)] as u32;
                }
                theta
            })
            .collect();
        let tables = Arc::new(tables);
        self.involutions.lock().unwrap().insert((a, c), tables.clone());
        tables
    }

    fn identity_theta(&self, a: usize, c: usize) -> Vec<u32> {
        let q = self.quo(c);
        let mut theta = vec![NONE; q.order()];
        for x in self.sub(a).iter() {
            let coset = q.project(x);
            theta[coset] = coset as u32;
        }
        theta
    }

    fn quotient_phi(&self, l: usize, n: usize) -> Vec<u32> {
        let q = self.quo(n);
        let mut phi = vec![NONE; self.group().order()];
        for x in self.sub(l).iter() {
            phi[x] = q.project(x) as u32;
        }
        phi
    }

    /// Whether `φ` satisfies the degree-`m` conditions for `(L, M, N)`.
    fn phi_fits(&self, l: usize, m_sub: usize, n: usize, phi: &[u32], degree: usize) -> bool {
        let g = self.group();
        let qn = self.quo(n);
        let msub = self.sub(m_sub);
        let exp = 1 - degree as i64;
        msub.iter().all(|x| phi[x] as usize == qn.project(g.pow(x, exp)))
            && self
                .sub(l)
                .iter()
                .all(|x| msub.contains(g.mul(g.inv(x), qn.rep(phi[x] as usize))))
    }

    /// `L^m` with `φ = x ↦ xL`: the power of a single normal subgroup.
    pub fn power_of(&self, i: usize, degree: usize) -> InvariantSubgroup {
        let form = match degree {
            0 => panic!("degree 0"),
            1 => InvariantForm::Normal(i),
            2 => InvariantForm::Pair(GoursatPair {
                a: i,
                c: i,
                theta: self.identity_theta(i, i),
            }),
            _ => InvariantForm::Quad(InvariantQuadruple {
                l: i,
                m: i,
                n: i,
                phi: self.quotient_phi(i, i),
            }),
        };
        InvariantSubgroup { degree, form }
    }

    pub fn trivial(&self, degree: usize) -> InvariantSubgroup {
        self.power_of(self.lattice.trivial(), degree)
    }

    pub fn whole(&self, degree: usize) -> InvariantSubgroup {
        self.power_of(self.lattice.whole(), degree)
    }

    /// `K_m(G, G, N, g ↦ g^{1-m} N)` for `m ≥ 3`, or `{(g,h) : gh ∈ N}` for `m = 2`,
    /// or `N` for `m = 1`: the tuples whose product lies in `N`, for `G/N` abelian.
    pub fn product_kernel(&self, n: usize, degree: usize) -> InvariantSubgroup {
        let top = self.lattice.whole();
        let g = self.group();
        let q = self.quo(n);
        let form = match degree {
            0 => panic!("degree 0"),
            1 => InvariantForm::Normal(n),
            2 => InvariantForm::Pair(GoursatPair {
                a: top,
                c: n,
                theta: (0..q.order()).map(|c| q.project(g.inv(q.rep(c))) as u32).collect(),
            }),
            _ => InvariantForm::Quad(InvariantQuadruple {
                l: top,
                m: top,
                n,
                phi: g
                    .elements()
                    .map(|x| q.project(g.pow(x, 1 - degree as i64)) as u32)
                    .collect(),
            }),
        };
        InvariantSubgroup { degree, form }
    }

    /// Validated `K_m(L, M, N, φ)`; `phi[x]` is the `G/N` coset of `φ(x)` for `x ∈ L`.
    pub fn build_k(
        &self,
        degree: usize,
        l: usize,
        m_sub: usize,
        n: usize,
        phi: &[Option<Elem>],
    ) -> Result<InvariantSubgroup, InvariantError> {
        let bad = |s: &str| Err(InvariantError::InvalidQuadruple(s.to_string()));
        if degree < 3 {
            return bad("quadruples need degree at least 3");
        }
        let lat = &self.lattice;
        if [l, m_sub, n].iter().any(|&i| i >= lat.len()) {
            return bad("subgroup index out of range");
        }
        if !(lat.leq(n, m_sub) && lat.leq(m_sub, l)) {
            return bad("need N <= M <= L");
        }
        if !lat.leq(lat.commutator(l), n) {
            return bad("need [G,L] <= N");
        }
        let g = self.group();
        if phi.len() != g.order() {
            return bad("phi must have one entry per group element");
        }
        let qn = self.quo(n);
        let lsub = self.sub(l);
        let mut table = vec![NONE; g.order()];
        for x in g.elements() {
            match (lsub.contains(x), phi[x]) {
                (true, Some(c)) if c < qn.order() && lsub.contains(qn.rep(c)) => table[x] = c as u32,
                (false, None) => {}
                _ => return bad("phi must map L into L/N"),
            }
        }
        for a in lsub.iter() {
            for b in lsub.iter() {
                let lhs = table[g.mul(a, b)] as usize;
                if lhs != qn.group().mul(table[a] as usize, table[b] as usize) {
                    return bad("phi is not a homomorphism");
                }
            }
        }
        if !self.phi_fits(l, m_sub, n, &table, degree) {
            return bad("phi violates the restriction or coset condition");
        }
        Ok(InvariantSubgroup {
            degree,
            form: InvariantForm::Quad(InvariantQuadruple {
                l,
                m: m_sub,
                n,
                phi: table,
            }),
        })
    }

    /// Every invariant normal subgroup of `G^degree`, ordered by size then data.
    pub fn enumerate(&self, degree: usize) -> Result<Arc<Vec<InvariantSubgroup>>, InvariantError> {
        if degree == 0 {
            return Err(InvariantError::ZeroDegree);
        }
        if let Some(v) = self.levels.lock().unwrap().get(&degree) {
            return Ok(v.clone());
        }
        let lat = &self.lattice;
        let k = lat.len();
        let mut out = Vec::new();
        match degree {
            1 => out.extend((0..k).map(|i| self.power_of(i, 1))),
            2 => {
                for a in 0..k {
                    for c in 0..k {
                        if !lat.leq(c, a) || !lat.leq(lat.commutator(a), c) {
                            continue;
                        }
                        for theta in self.involutions_of(a, c).iter() {
                            out.push(InvariantSubgroup {
                                degree,
                                form: InvariantForm::Pair(GoursatPair {
                                    a,
                                    c,
                                    theta: theta.clone(),
                                }),
                            });
                        }
                    }
                }
            }
            _ => {
                for l in 0..k {
                    for n in 0..k {
                        if !lat.leq(n, l) || !lat.leq(lat.commutator(l), n) {
                            continue;
                        }
                        let homs = self.homs_to_section(l, n);
                        for m_sub in (0..k).filter(|&m| lat.leq(n, m) && lat.leq(m, l)) {
                            for phi in homs.iter() {
                                if self.phi_fits(l, m_sub, n, phi, degree) {
                                    out.push(InvariantSubgroup {
                                        degree,
                                        form: InvariantForm::Quad(InvariantQuadruple {
                                            l,
                                            m: m_sub,
                                            n,
                                            phi: phi.clone(),
                                        }),
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        out.sort_by(|x, y| self.order(x).cmp(&self.order(y)).then_with(|| x.cmp(y)));
        out.dedup();
        let out = Arc::new(out);
        self.levels.lock().unwrap().insert(degree, out.clone());
        Ok(out)
    }

    pub fn order(&self, k: &InvariantSubgroup) -> u128 {
        let size = |i: usize| self.sub(i).len() as u128;
        match &k.form {
            InvariantForm::Normal(n) => size(*n),
            InvariantForm::Pair(p) => size(p.a) * size(p.c),
            InvariantForm::Quad(q) => size(q.l) * size(q.m).pow(k.degree as u32 - 2) * size(q.n),
        }
    }

    /// Membership of a tuple of `G` elements.
    pub fn contains(&self, k: &InvariantSubgroup, t: &[Elem]) -> bool {
        debug_assert_eq!(t.len(), k.degree);
        let g = self.group();
        match &k.form {
            InvariantForm::Normal(n) => self.sub(*n).contains(t[0]),
            InvariantForm::Pair(p) => {
                let a = self.sub(p.a);
                if !a.contains(t[0]) || !a.contains(t[1]) {
                    return false;
                }
                let q = self.quo(p.c);
                p.theta[q.project(t[0])] as usize == q.project(t[1])
            }
            InvariantForm::Quad(qd) => {
                let l = self.sub(qd.l);
                if !t.iter().all(|&x| l.contains(x)) {
                    return false;
                }
                let msub = self.sub(qd.m);
                let inv0 = g.inv(t[0]);
                if !t[1..].iter().all(|&x| msub.contains(g.mul(inv0, x))) {
                    return false;
                }
                let mut prod = g.pow(t[0], 2 - k.degree as i64);
                for &x in &t[1..] {
                    prod = g.mul(prod, x);
                }
                qd.phi[t[0]] as usize == self.quo(qd.n).project(prod)
            }
        }
    }

    /// Tuples whose invariant normal closure is `k`.
    pub fn generators(&self, k: &InvariantSubgroup) -> Vec<Vec<Elem>> {
        let g = self.group();
        let m = k.degree;
        let unit = |x: Elem| {
            let mut t = vec![0; m];
            t[0] = x;
            t
        };
        match &k.form {
            InvariantForm::Normal(n) => self.gens[*n].iter().map(|&x| vec![x]).collect(),
            InvariantForm::Pair(p) => {
                let q = self.quo(p.c);
                let mut out: Vec<Vec<Elem>> = self.gens[p.a]
                    .iter()
                    .map(|&x| vec![x, q.rep(p.theta[q.project(x)] as usize)])
                    .collect();
                out.extend(self.gens[p.c].iter().map(|&x| unit(x)));
                out
            }
            InvariantForm::Quad(qd) => {
                let msub = self.sub(qd.m);
                let mut out = Vec::new();
                for &l in &self.gens[qd.l] {
                    let mut t = vec![l; m];
                    let y = msub
                        .iter()
                        .map(|x| g.mul(l, x))
                        .find(|&y| {
                            t[0] = y;
                            self.contains(k, &t)
                        })
                        .expect("every l has a partner in lM");
                    t[0] = y;
                    out.push(t);
                }
                for &x in &self.gens[qd.m] {
                    let mut t = vec![0; m];
                    t[0] = x;
                    t[1] = g.inv(x);
                    out.push(t);
                }
                out.extend(self.gens[qd.n].iter().map(|&x| unit(x)));
                out
            }
        }
    }

    /// `k1 ⊆ k2`.
    pub fn leq(&self, k1: &InvariantSubgroup, k2: &InvariantSubgroup) -> bool {
        k1.degree == k2.degree
            && self.order(k1) <= self.order(k2)
            && self.generators(k1).iter().all(|t| self.contains(k2, t))
    }

    /// Projection onto the first `degree - 1` coordinates; `None` at degree 1.
    pub fn project(&self, k: &InvariantSubgroup) -> Option<InvariantSubgroup> {
        let degree = k.degree.checked_sub(1).filter(|&d| d >= 1)?;
        let form = match &k.form {
            InvariantForm::Normal(_) => unreachable!(),
            InvariantForm::Pair(p) => InvariantForm::Normal(p.a),
            InvariantForm::Quad(q) if degree == 2 => InvariantForm::Pair(GoursatPair {
                a: q.l,
                c: q.m,
                theta: self.identity_theta(q.l, q.m),
            }),
            InvariantForm::Quad(q) => InvariantForm::Quad(InvariantQuadruple {
                l: q.l,
                m: q.m,
                n: q.m,
                phi: self.quotient_phi(q.l, q.m),
            }),
        };
        Some(InvariantSubgroup { degree, form })
    }

    /// Quadruple comparison: `L_1 ⊆ L_2`, `M_1 ⊆ M_2`, `N_1 ⊆ N_2` and `lφ_1 ⊆ lφ_2`.
    pub fn quadruple_leq(&self, k1: &InvariantSubgroup, k2: &InvariantSubgroup) -> Option<bool> {
        let (InvariantForm::Quad(a), InvariantForm::Quad(b)) = (&k1.form, &k2.form) else {
            return None;
        };
        let lat = &self.lattice;
        if !(lat.leq(a.l, b.l) && lat.leq(a.m, b.m) && lat.leq(a.n, b.n)) {
            return Some(false);
        }
        let (qa, qb) = (self.quo(a.n), self.quo(b.n));
        Some(
            self.sub(a.l)
                .iter()
                .all(|x| qb.project(qa.rep(a.phi[x] as usize)) == b.phi[x] as usize),
        )
    }

    /// Least upper bound within the enumerated degree.
    pub fn join(&self, k1: &InvariantSubgroup, k2: &InvariantSubgroup) -> Result<InvariantSubgroup, InvariantError> {
        let list = self.enumerate(k1.degree)?;
        Ok(list
            .iter()
            .filter(|k| self.leq(k1, k) && self.leq(k2, k))
            .min_by_key(|k| self.order(k))
            .expect("the whole power is an upper bound")
            .clone())
    }

    /// Greatest lower bound within the enumerated degree.
    pub fn meet(&self, k1: &InvariantSubgroup, k2: &InvariantSubgroup) -> Result<InvariantSubgroup, InvariantError> {
        let list = self.enumerate(k1.degree)?;
        Ok(list
            .iter()
            .filter(|k| self.leq(k, k1) && self.leq(k, k2))
            .max_by_key(|k| self.order(k))
            .expect("the trivial subgroup is a lower bound")
            .clone())
    }

    /// The subgroup of an explicit direct power.
    pub fn realize(&self, k: &InvariantSubgroup, power: &DirectPower) -> Subgroup {
        assert_eq!(power.m(), k.degree);
        Subgroup::from_bits_unchecked(crate::bitset::BitSet::from_indices(
            power.order(),
            (0..power.order()).filter(|&x| self.contains(k, &power.decode(x))),
        ))
    }

    /// Reads off the symbolic data of an explicit invariant normal subgroup.
    pub fn extract(&self, power: &DirectPower, k: &Subgroup) -> Result<InvariantSubgroup, InvariantError> {
        let m = power.m();
        let pg = power.group();
        if !pg.is_normal(k) {
            return Err(InvariantError::NotNormal);
        }
        for i in 0..m.saturating_sub(1) {
            let swap = Perm::transposition(m, i, i + 1);
            if !k.iter().all(|x| k.contains(power.encode(&swap.act(&power.decode(x))))) {
                return Err(InvariantError::NotInvariant);
            }
        }
        let g = self.group();
        let tuples: Vec<Vec<Elem>> = k.iter().map(|x| power.decode(x)).collect();
        let lookup = |set: Subgroup| self.lattice.index_of(&set).ok_or(InvariantError::NotInLattice);
        let first = lookup(g.generate_from(tuples.iter().map(|t| t[0])))?;
        let unit_kernel =
            lookup(g.generate_from(tuples.iter().filter(|t| t[1..].iter().all(|&x| x == 0)).map(|t| t[0])))?;
        let form = match m {
            1 => InvariantForm::Normal(first),
            2 => {
                let q = self.quo(unit_kernel);
                let mut theta = vec![NONE; q.order()];
                for t in &tuples {
                    theta[q.project(t[0])] = q.project(t[1]) as u32;
                }
                InvariantForm::Pair(GoursatPair {
                    a: first,
                    c: unit_kernel,
                    theta,
                })
            }
            _ => {
                let m_sub = lookup(
                    g.generate_from(
                        tuples
                            .iter()
                            .filter(|t| t[1] == g.inv(t[0]) && t[2..].iter().all(|&x| x == 0))
                            .map(|t| t[0]),
                    ),
                )?;
                let qn = self.quo(unit_kernel);
                let mut phi = vec![NONE; g.order()];
                for t in &tuples {
                    if t[1..].iter().all(|&x| x == t[1]) {
                        phi[t[1]] = qn.project(t[0]) as u32;
                    }
                }
                InvariantForm::Quad(InvariantQuadruple {
                    l: first,
                    m: m_sub,
                    n: unit_kernel,
                    phi,
                })
            }
        };
        let sym = InvariantSubgroup { degree: m, form };
        if &self.realize(&sym, power) != k {
            return Err(InvariantError::InvalidQuadruple(
                "extracted data does not rebuild the subgroup".into(),
            ));
        }
        Ok(sym)
    }

    /// `T_i π ⊆ T_{i-1}` for consecutive levels.
    pub fn chain_is_closed(&self, levels: &[InvariantSubgroup]) -> bool {
        levels
            .windows(2)
            .all(|w| w[1].degree == w[0].degree + 1 && self.project(&w[1]).is_some_and(|p| self.leq(&p, &w[0])))
    }

    /// Closed chains `T_from, …, T_n`, built top-down.
    pub fn enumerate_closed_chains(&self, n: usize, from: usize) -> Result<Vec<ClosedChain>, InvariantError> {
        if from > n {
            return Ok(vec![ClosedChain {
                start: from,
                levels: Vec::new(),
            }]);
        }
        let mut lists = Vec::new();
        for d in from..=n {
            lists.push(self.enumerate(d)?);
        }
        let mut out = Vec::new();
        let mut stack: Vec<InvariantSubgroup> = Vec::new();
        self.extend_chains(&lists, lists.len(), &mut stack, &mut out, from);
        out.sort();
        Ok(out)
    }

    fn extend_chains(
        &self,
        lists: &[Arc<Vec<InvariantSubgroup>>],
        remaining: usize,
        stack: &mut Vec<InvariantSubgroup>,
        out: &mut Vec<ClosedChain>,
        from: usize,
    ) {
        if remaining == 0 {
            let mut levels = stack.clone();
            levels.reverse();
            out.push(ClosedChain { start: from, levels });
            return;
        }
        let below = stack.last().and_then(|t| self.project(t));
        for t in lists[remaining - 1].iter() {
            if below.as_ref().is_some_and(|p| !self.leq(p, t)) {
                continue;
            }
            stack.push(t.clone());
            self.extend_chains(lists, remaining - 1, stack, out, from);
            stack.pop();
        }
    }

    pub fn describe(&self, k: &InvariantSubgroup) -> String {
        let name = |i: usize| format!("N{i}[{}]", self.sub(i).len());
        match &k.form {
            InvariantForm::Normal(n) => name(*n),
            InvariantForm::Pair(p) => {
                let identity = p.theta == self.identity_theta(p.a, p.c);
                format!(
                    "X(A={}, C={}, theta={})",
                    name(p.a),
                    name(p.c),
                    if identity {
                        "id".to_string()
                    } else {
                        fmt_table(&p.theta)
                    }
                )
            }
            InvariantForm::Quad(q) => format!(
                "K{}(L={}, M={}, N={}, phi={})",
                k.degree,
                name(q.l),
                name(q.m),
                name(q.n),
                fmt_table(&q.phi)
            ),
        }
    }

    pub fn to_json(&self, k: &InvariantSubgroup) -> Value {
        let sub = |i: usize| json!({ "index": i, "order": self.sub(i).len(), "members": self.sub(i).members() });
        let table = |t: &[u32]| -> Vec<Value> {
            t.iter()
                .map(|&x| if x == NONE { Value::Null } else { json!(x) })
                .collect()
        };
        let mut v = match &k.form {
            InvariantForm::Normal(n) => json!({ "form": "normal", "N": sub(*n) }),
            InvariantForm::Pair(p) => json!({ "form": "pair", "A": sub(p.a), "C": sub(p.c), "theta": table(&p.theta) }),
            InvariantForm::Quad(q) => json!({
                "form": "quadruple", "L": sub(q.l), "M": sub(q.m), "N": sub(q.n), "phi": table(&q.phi)
            }),
        };
        v["degree"] = json!(k.degree);
        v["order"] = json!(self.order(k).to_string());
        v
    }
}

fn fmt_table(t: &[u32]) -> String {
    let parts: Vec<String> = t
        .iter()
        .map(|&x| if x == NONE { "-".into() } else { x.to_string() })
        .collect();
    format!("[{}]", parts.join(","))
}

/// Levels `T_start, …, T_n` of a closed chain.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClosedChain {
    start: usize,
    levels: Vec<InvariantSubgroup>,
}

impl ClosedChain {
    pub fn new(start: usize, levels: Vec<InvariantSubgroup>) -> Self {
        debug_assert!(levels.iter().enumerate().all(|(i, t)| t.degree == start + i));
        ClosedChain { start, levels }
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn levels(&self) -> &[InvariantSubgroup] {
        &self.levels
    }

    /// `T_i`, if `i` is within the chain.
    pub fn level(&self, i: usize) -> Option<&InvariantSubgroup> {
        i.checked_sub(self.start).and_then(|j| self.levels.get(j))
    }

    pub fn into_levels(self) -> Vec<InvariantSubgroup> {
        self.levels
    }
}

impl fmt::Display for InvariantSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.form)
    }
}
