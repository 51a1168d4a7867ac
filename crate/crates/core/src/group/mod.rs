//! Finite groups on dense element indices.
//!
//! Every group has identity `0`. Small groups carry a full Cayley table;
//! direct powers too large to tabulate multiply coordinatewise through their
//! base group instead. Subgroups are bitsets over the parent's indices, so
//! membership tests are a single bit probe.

mod hom;
mod lattice;
mod parse;
mod power;
mod quotient;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bitset::BitSet;
use crate::perm::{factorial, Perm};

pub use hom::{all_homs, all_homs_bounded, GroupHom};
pub use lattice::NormalLattice;
pub use parse::{make_group, parse_cayley_document, CayleyDocument};
pub use power::{direct_power, DirectPower};
pub use quotient::QuotientGroup;

/// Index of a group element.
pub type Elem = usize;

/// Largest group that may be constructed (tabulated or not).
pub const DEFAULT_GROUP_BOUND: usize = 1_000_000;
/// Largest group whose subgroups we are willing to enumerate.
pub const DEFAULT_SUBGROUP_BOUND: usize = 10_000;
/// Largest order for which a Cayley table is materialized.
pub const TABLE_BOUND: usize = 4096;

/// Exhaustive associativity check up to this order, sampled above it.
const EXHAUSTIVE_AXIOM_ORDER: usize = 64;
const SAMPLED_TRIPLES: usize = 100_000;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("malformed Cayley table: {0}")]
    Malformed(String),
    #[error("table is not associative: ({0}*{1})*{2} != {0}*({1}*{2})")]
    NotAssociative(Elem, Elem, Elem),
    #[error("element 0 is not a two-sided identity")]
    MissingIdentity,
    #[error("element {0} has no two-sided inverse")]
    MissingInverse(Elem),
    #[error("instance too large: {what} needs {size} elements, bound is {bound}")]
    TooLarge { what: String, size: u128, bound: usize },
    #[error("subgroup is not normal in {0}")]
    NotNormal(String),
    #[error("element set is not a subgroup of {0}")]
    NotSubgroup(String),
    #[error("unrecognized group spec `{0}`")]
    BadSpec(String),
    #[error("invalid Cayley document: {0}")]
    Json(#[from] serde_json::Error),
}

pub(crate) fn check_bound(what: impl Into<String>, size: u128, bound: usize) -> Result<(), GroupError> {
    if size > bound as u128 {
        Err(GroupError::TooLarge {
            what: what.into(),
            size,
            bound,
        })
    } else {
        Ok(())
    }
}

#[derive(Clone)]
enum Law {
    Table(Vec<u32>),
    Power { base: Arc<FiniteGroup>, m: usize },
}

/// A finite group with elements `0..order`, identity `0`.
#[derive(Clone)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    law: Law,
    inverse: Vec<u32>,
    generators: OnceLock<Vec<Elem>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (order {})", self.name, self.order)
    }
}

impl FiniteGroup {
    /// Builds a group from a row-major Cayley table and runs the full axiom check.
    pub fn from_table(name: impl Into<String>, rows: &[Vec<usize>]) -> Result<Self, GroupError> {
        let order = rows.len();
        if order == 0 {
            return Err(GroupError::Malformed("empty table".into()));
        }
        check_bound("Cayley table", order as u128, TABLE_BOUND)?;
        let mut table = Vec::with_capacity(order * order);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(GroupError::Malformed(format!(
                    "row {i} has {} entries, expected {order}",
                    row.len()
                )));
            }
            for &x in row {
                if x >= order {
                    return Err(GroupError::Malformed(format!("entry {x} out of range")));
                }
                table.push(x as u32);
            }
        }
        let group = Self::from_flat_table(name.into(), order, table)?;
        group.validate()?;
        Ok(group)
    }

    /// Table-backed group; computes inverses but does not check associativity.
    fn from_flat_table(name: String, order: usize, table: Vec<u32>) -> Result<Self, GroupError> {
        for x in 0..order {
            if table[x] as usize != x || table[x * order] as usize != x {
                return Err(GroupError::MissingIdentity);
            }
        }
        let mut inverse = vec![0u32; order];
        for x in 0..order {
            let row = &table[x * order..(x + 1) * order];
            let y = row.iter().position(|&v| v == 0).ok_or(GroupError::MissingInverse(x))?;
            if table[y * order + x] != 0 {
                return Err(GroupError::MissingInverse(x));
            }
            inverse[x] = y as u32;
        }
        Ok(FiniteGroup {
            name,
            order,
            law: Law::Table(table),
            inverse,
            generators: OnceLock::new(),
        })
    }

    fn from_law(name: String, order: usize, law: Law, inverse: Vec<u32>) -> Self {
        FiniteGroup {
            name,
            order,
            law,
            inverse,
            generators: OnceLock::new(),
        }
    }

    /// Tabulates `mul` over `0..order` and validates the result.
    pub(crate) fn tabulate(
        name: String,
        order: usize,
        mut mul: impl FnMut(usize, usize) -> usize,
    ) -> Result<Self, GroupError> {
        check_bound(format!("Cayley table of {name}"), order as u128, TABLE_BOUND)?;
        let mut table = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                table.push(mul(a, b) as u32);
            }
        }
        let g = Self::from_flat_table(name, order, table)?;
        g.validate()?;
        Ok(g)
    }

    /// Group axioms: identity and inverses exhaustively, associativity
    /// exhaustively for small orders and on a fixed random sample otherwise.
    pub fn validate(&self) -> Result<(), GroupError> {
        let n = self.order;
        for x in 0..n {
            if self.mul(0, x) != x || self.mul(x, 0) != x {
                return Err(GroupError::MissingIdentity);
            }
            let y = self.inv(x);
            if self.mul(x, y) != 0 || self.mul(y, x) != 0 {
                return Err(GroupError::MissingInverse(x));
            }
        }
        let assoc = |a: Elem, b: Elem, c: Elem| {
            if self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c)) {
                Ok(())
            } else {
                Err(GroupError::NotAssociative(a, b, c))
            }
        };
        if n <= EXHAUSTIVE_AXIOM_ORDER {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        assoc(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x05ee_d0fa_550c);
            for _ in 0..SAMPLED_TRIPLES {
                assoc(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))?;
            }
        }
        Ok(())
    }

    pub fn trivial() -> Self {
        Self::from_flat_table("1".into(), 1, vec![0]).expect("trivial group")
    }

    pub fn cyclic(k: usize) -> Result<Self, GroupError> {
        if k == 0 {
            return Err(GroupError::BadSpec("C0".into()));
        }
        Self::tabulate(format!("C{k}"), k, |a, b| (a + b) % k)
    }

    /// Dihedral group of order `2k`; element `r^i s^j` has index `i + k*j`.
    pub fn dihedral(k: usize) -> Result<Self, GroupError> {
        if k == 0 {
            return Err(GroupError::BadSpec("D0".into()));
        }
        Self::tabulate(format!("D{k}"), 2 * k, |a, b| {
            let (i, s) = (a % k, a / k);
            let (j, t) = (b % k, b / k);
            let rot = if s == 0 { (i + j) % k } else { (i + k - j) % k };
            rot + k * ((s + t) % 2)
        })
    }

    pub fn klein() -> Result<Self, GroupError> {
        let c2 = Self::cyclic(2)?;
        let mut v = c2.direct_product(&c2)?;
        v.name = "V4".into();
        Ok(v)
    }

    /// Symmetric group on `k` points; element `i` is the `i`-th permutation
    /// in lexicographic order.
    pub fn symmetric(k: usize) -> Result<Self, GroupError> {
        check_bound(format!("S{k}"), factorial(k) as u128, TABLE_BOUND)?;
        Self::from_perms(format!("S{k}"), Perm::all(k))
    }

    /// Alternating group on `k` points, even permutations in lexicographic order.
    pub fn alternating(k: usize) -> Result<Self, GroupError> {
        check_bound(format!("A{k}"), factorial(k) as u128, TABLE_BOUND)?;
        let perms = Perm::all(k).into_iter().filter(Perm::is_even).collect();
        Self::from_perms(format!("A{k}"), perms)
    }

    /// Permutation group on an explicit, product-closed list whose first entry is the identity.
    pub fn from_perms(name: String, perms: Vec<Perm>) -> Result<Self, GroupError> {
        let index: HashMap<&Perm, usize> = perms.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut closed = true;
        let g = Self::tabulate(name.clone(), perms.len(), |a, b| {
            match index.get(&perms[a].then(&perms[b])) {
                Some(&i) => i,
                None => {
                    closed = false;
                    0
                }
            }
        });
        if !closed {
            return Err(GroupError::NotSubgroup(name));
        }
        g
    }

    /// Direct product `self × other`; `(g, h)` has index `g * |other| + h`.
    pub fn direct_product(&self, other: &FiniteGroup) -> Result<Self, GroupError> {
        let k = other.order;
        Self::tabulate(format!("{}x{}", self.name, other.name), self.order * k, |a, b| {
            self.mul(a / k, b / k) * k + other.mul(a % k, b % k)
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Elem {
        0
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.law {
            Law::Table(t) => t[a * self.order + b] as usize,
            Law::Power { base, m } => {
                let k = base.order;
                let (mut a, mut b) = (a, b);
                let (mut out, mut weight) = (0, 1);
                for _ in 0..*m {
                    out += base.mul(a % k, b % k) * weight;
                    a /= k;
                    b /= k;
                    weight *= k;
                }
                out
            }
        }
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverse[a] as usize
    }

    /// `g x g⁻¹`.
    #[inline]
    pub fn conj(&self, g: Elem, x: Elem) -> Elem {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn pow(&self, a: Elem, e: i64) -> Elem {
        let base = if e < 0 { self.inv(a) } else { a };
        let mut e = e.unsigned_abs();
        let (mut acc, mut sq) = (0, base);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, sq);
            }
            sq = self.mul(sq, sq);
            e >>= 1;
        }
        acc
    }

    pub fn element_order(&self, a: Elem) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generators();
        gens.iter()
            .all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// A small generating set, chosen greedily in index order.
    pub fn generators(&self) -> &[Elem] {
        self.generators.get_or_init(|| {
            if let Law::Power { base, m } = &self.law {
                // one copy of each base generator per coordinate
                let k = base.order;
                let mut gens = Vec::new();
                for coord in 0..*m {
                    let weight = k.pow((*m - 1 - coord) as u32);
                    gens.extend(base.generators().iter().map(|&g| g * weight));
                }
                return gens;
            }
            let mut gens = Vec::new();
            let mut span = BitSet::from_indices(self.order, [0]);
            for x in 0..self.order {
                if !span.contains(x) {
                    gens.push(x);
                    span = self.generate(&gens).bits;
                }
            }
            gens
        })
    }

    /// Subgroup generated by `gens`.
    pub fn generate(&self, gens: &[Elem]) -> Subgroup {
        let mut bits = BitSet::from_indices(self.order, [0]);
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if bits.insert(y) {
                    stack.push(y);
                }
            }
        }
        Subgroup { bits }
    }

    /// Subgroup generated by `elems`, adding only elements not yet reached as generators.
    pub fn generate_from<I: IntoIterator<Item = Elem>>(&self, elems: I) -> Subgroup {
        let mut gens = Vec::new();
        let mut span = Subgroup::trivial(self.order);
        for x in elems {
            if !span.contains(x) {
                gens.push(x);
                span = self.generate(&gens);
            }
        }
        span
    }

    /// A small generating set of `h`, chosen greedily in index order.
    pub fn subgroup_generators(&self, h: &Subgroup) -> Vec<Elem> {
        let mut gens = Vec::new();
        let mut span = Subgroup::trivial(self.order);
        for x in h.iter() {
            if !span.contains(x) {
                gens.push(x);
                span = self.generate(&gens);
            }
        }
        gens
    }

    /// Conjugacy class of `x`, as an orbit under conjugation by the generators.
    pub fn conjugacy_class(&self, x: Elem) -> Vec<Elem> {
        let gens = self.generators();
        let mut seen = BitSet::from_indices(self.order, [x]);
        let mut out = vec![x];
        let mut i = 0;
        while i < out.len() {
            let y = out[i];
            for &g in gens {
                let z = self.conj(g, y);
                if seen.insert(z) {
                    out.push(z);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    /// All conjugacy classes, ordered by smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<Elem>> {
        let mut assigned = BitSet::new(self.order);
        let mut classes = Vec::new();
        for x in 0..self.order {
            if assigned.contains(x) {
                continue;
            }
            let class = self.conjugacy_class(x);
            for &y in &class {
                assigned.insert(y);
            }
            classes.push(class);
        }
        classes
    }

    pub fn normal_closure(&self, elems: &[Elem]) -> Subgroup {
        self.generate_from(elems.iter().flat_map(|&x| self.conjugacy_class(x)))
    }

    /// Checks closure under products and inverses.
    pub fn is_subgroup(&self, set: &BitSet) -> bool {
        if set.universe() != self.order || !set.contains(0) {
            return false;
        }
        let members: Vec<Elem> = set.iter().collect();
        members
            .iter()
            .all(|&a| members.iter().all(|&b| set.contains(self.mul(a, b))))
    }

    /// Checks invariance under conjugation by the generators.
    pub fn is_normal(&self, h: &Subgroup) -> bool {
        let gens = self.generators();
        h.iter().all(|x| gens.iter().all(|&g| h.contains(self.conj(g, x))))
    }

    /// Validates an arbitrary element set as a subgroup.
    pub fn subgroup(&self, set: BitSet) -> Result<Subgroup, GroupError> {
        if self.is_subgroup(&set) {
            Ok(Subgroup { bits: set })
        } else {
            Err(GroupError::NotSubgroup(self.name.clone()))
        }
    }

    /// `N·C` for normal subgroups, built as a union of cosets of `N`.
    pub fn product_of_normals(&self, n: &Subgroup, c: &Subgroup) -> Subgroup {
        let n_members: Vec<Elem> = n.iter().collect();
        let mut bits = n.bits.clone();
        for x in c.iter() {
            if !bits.contains(x) {
                for &y in &n_members {
                    bits.insert(self.mul(y, x));
                }
            }
        }
        Subgroup { bits }
    }

    pub fn all_normal_subgroups(&self) -> Result<Vec<Subgroup>, GroupError> {
        self.all_normal_subgroups_bounded(DEFAULT_SUBGROUP_BOUND)
    }

    /// Every normal subgroup, in canonical order (size, then members).
    ///
    /// Normal subgroups are joins of normal closures of single conjugacy
    /// classes; we close the set of class closures under joins.
    pub fn all_normal_subgroups_bounded(&self, bound: usize) -> Result<Vec<Subgroup>, GroupError> {
        check_bound(format!("normal subgroups of {}", self.name), self.order as u128, bound)?;
        let mut closures: Vec<Subgroup> = Vec::new();
        for class in self.conjugacy_classes() {
            let c = self.generate_from(class);
            if !closures.contains(&c) {
                closures.push(c);
            }
        }
        let trivial = Subgroup::trivial(self.order);
        let mut seen: std::collections::HashSet<Subgroup> = [trivial.clone()].into();
        let mut found = vec![trivial];
        let mut i = 0;
        while i < found.len() {
            let n = found[i].clone();
            for c in &closures {
                if c.is_subgroup_of(&n) {
                    continue;
                }
                let j = self.product_of_normals(&n, c);
                if seen.insert(j.clone()) {
                    found.push(j);
                }
            }
            i += 1;
        }
        found.sort();
        Ok(found)
    }

    /// `[G, L]`: the subgroup generated by all `g l g⁻¹ l⁻¹`.
    pub fn commutator_with(&self, l: &Subgroup) -> Subgroup {
        let members: Vec<Elem> = l.iter().collect();
        self.generate_from(
            self.elements()
                .flat_map(|g| members.iter().map(move |&x| self.mul(self.conj(g, x), self.inv(x)))),
        )
    }

    pub fn derived_subgroup(&self) -> Subgroup {
        self.commutator_with(&Subgroup::whole(self.order))
    }

    /// Number of factors in a longest chief series (`0` for the trivial group).
    pub fn chief_length(&self) -> Result<usize, GroupError> {
        let normals = self.all_normal_subgroups()?;
        let mut depth = vec![0usize; normals.len()];
        for i in 0..normals.len() {
            for j in 0..i {
                if normals[j].len() < normals[i].len() && normals[j].is_subgroup_of(&normals[i]) {
                    depth[i] = depth[i].max(depth[j] + 1);
                }
            }
        }
        Ok(*depth.last().unwrap())
    }
}

/// A subgroup of some parent group, stored as a membership bitset.
///
/// Ordering is canonical: by size, then lexicographically by members.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    bits: BitSet,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.bits)
    }
}

impl Subgroup {
    pub fn trivial(parent_order: usize) -> Self {
        Subgroup {
            bits: BitSet::from_indices(parent_order, [0]),
        }
    }

    pub fn whole(parent_order: usize) -> Self {
        Subgroup {
            bits: BitSet::full(parent_order),
        }
    }

    /// Wraps a bitset without checking closure.
    pub(crate) fn from_bits_unchecked(bits: BitSet) -> Self {
        Subgroup { bits }
    }

    pub fn bits(&self) -> &BitSet {
        &self.bits
    }

    pub fn parent_order(&self) -> usize {
        self.bits.universe()
    }

    #[inline]
    pub fn contains(&self, x: Elem) -> bool {
        self.bits.contains(x)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_trivial(&self) -> bool {
        self.len() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.len() == self.parent_order()
    }

    pub fn iter(&self) -> impl Iterator<Item = Elem> + '_ {
        self.bits.iter()
    }

    pub fn members(&self) -> Vec<Elem> {
        self.bits.iter().collect()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        Subgroup {
            bits: self.bits.intersection(&other.bits),
        }
    }

    /// The subgroup as a group in its own right. Element `i` of the result is
    /// the `i`-th smallest member, returned in the embedding vector.
    pub fn as_group(&self, parent: &FiniteGroup, name: impl Into<String>) -> (FiniteGroup, Vec<Elem>) {
        let members = self.members();
        let index: HashMap<Elem, usize> = members.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let k = members.len();
        let mut table = Vec::with_capacity(k * k);
        for &a in &members {
            for &b in &members {
                table.push(index[&parent.mul(a, b)] as u32);
            }
        }
        let group = FiniteGroup::from_flat_table(name.into(), k, table).expect("subgroup of a valid group is a group");
        (group, members)
    }
}
