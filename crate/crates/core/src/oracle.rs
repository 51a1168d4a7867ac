//! Brute-force cross-checks: congruences of explicit semigroup tables,
//! subgroup search by generation, chain counting and growth measurements.

use std::collections::{HashMap, HashSet};
use std::env;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::congruence::{CongruenceClassifier, CongruenceError};
use crate::group::{FiniteGroup, GroupError, Subgroup};
use crate::wreath_monoid::{WreathError, WreathMonoid};

pub const DEFAULT_ORACLE_BOUND: usize = 250;
pub const DEFAULT_SUBGROUP_SEARCH_BOUND: usize = 20_000;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("semigroup has {size} elements, oracle bound is {bound}")]
    TooLarge { size: usize, bound: usize },
    #[error("table is not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("table is malformed: {0}")]
    Malformed(String),
    #[error("more than {0} subgroups")]
    TooManySubgroups(usize),
    #[error(transparent)]
    Monoid(#[from] WreathError),
    #[error(transparent)]
    Congruence(#[from] CongruenceError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Oracle size bound, overridable through `PAMCONG_MAX_ORACLE`.
pub fn oracle_bound() -> usize {
    env::var("PAMCONG_MAX_ORACLE")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_ORACLE_BOUND)
}

/// An explicit finite semigroup.
#[derive(Clone, Debug)]
pub struct SemigroupTable {
    size: usize,
    table: Vec<u32>,
    generators: Vec<usize>,
}

impl SemigroupTable {
    /// Tabulates `mul` and checks associativity exhaustively.
    pub fn from_fn(size: usize, mut mul: impl FnMut(usize, usize) -> usize) -> Result<Self, OracleError> {
        if size == 0 {
            return Err(OracleError::Malformed("empty semigroup".into()));
        }
        let mut table = Vec::with_capacity(size * size);
        for a in 0..size {
            for b in 0..size {
                let c = mul(a, b);
                if c >= size {
                    return Err(OracleError::Malformed(format!("{a}*{b} = {c} out of range")));
                }
                table.push(c as u32);
            }
        }
        let mut s = SemigroupTable {
            size,
            table,
            generators: Vec::new(),
        };
        s.check_associative()?;
        s.generators = s.greedy_generators();
        Ok(s)
    }

    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self, OracleError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(OracleError::Malformed("table must be square".into()));
        }
        Self::from_fn(n, |a, b| rows[a][b])
    }

    /// Table of `G ≀ I_n` in [`WreathMonoid::enumerate`] order.
    pub fn from_monoid(monoid: &WreathMonoid, bound: usize) -> Result<Self, OracleError> {
        let size = monoid.size();
        if size > bound as u128 {
            return Err(OracleError::TooLarge {
                size: size.min(usize::MAX as u128) as usize,
                bound,
            });
        }
        let elems = monoid.enumerate()?;
        Self::from_fn(elems.len(), |a, b| {
            monoid.index_of(&monoid.mul(&elems[a], &elems[b])).expect("closed")
        })
    }

    pub fn from_group(g: &FiniteGroup, bound: usize) -> Result<Self, OracleError> {
        if g.order() > bound {
            return Err(OracleError::TooLarge { size: g.order(), bound });
        }
        Self::from_fn(g.order(), |a, b| g.mul(a, b))
    }

    fn check_associative(&self) -> Result<(), OracleError> {
        let n = self.size;
        let rows: Vec<(usize, usize, usize)> = (0..n)
            .into_par_iter()
            .filter_map(|a| {
                for b in 0..n {
                    let ab = self.mul(a, b);
                    for c in 0..n {
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                            return Some((a, b, c));
                        }
                    }
                }
                None
            })
            .collect();
        match rows.first() {
            Some(&(a, b, c)) => Err(OracleError::NotAssociative(a, b, c)),
            None => Ok(()),
        }
    }

    /// Generators chosen greedily in index order.
    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut reached = vec![false; self.size];
        for x in 0..self.size {
            if reached[x] {
                continue;
            }
            gens.push(x);
            let mut stack: Vec<usize> = (0..self.size).filter(|&y| reached[y]).collect();
            stack.push(x);
            reached[x] = true;
            while let Some(y) = stack.pop() {
                for &g in &gens {
                    for z in [self.mul(y, g), self.mul(g, y)] {
                        if !reached[z] {
                            reached[z] = true;
                            stack.push(z);
                        }
                    }
                }
            }
        }
        gens
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.size + b] as usize
    }
}

struct UnionFind(Vec<u32>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n as u32).collect())
    }

    fn from_partition(p: &Partition) -> Self {
        UnionFind(p.0.clone())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] as usize != r {
            r = self.0[r] as usize;
        }
        let mut y = x;
        while self.0[y] as usize != r {
            let next = self.0[y] as usize;
            self.0[y] = r as u32;
            y = next;
        }
        r
    }

    /// Merges and reports whether the classes were distinct.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.0[hi] = lo as u32;
        true
    }

    fn into_partition(mut self) -> Partition {
        let n = self.0.len();
        for x in 0..n {
            self.find(x);
        }
        Partition(self.0)
    }
}

/// A partition in canonical form: each element maps to the least member of its class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn discrete(n: usize) -> Self {
        Partition((0..n as u32).collect())
    }

    pub fn universal(n: usize) -> Self {
        Partition(vec![0; n])
    }

    /// From arbitrary class labels.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut first: HashMap<usize, u32> = HashMap::new();
        Partition(
            labels
                .iter()
                .enumerate()
                .map(|(i, l)| *first.entry(*l).or_insert(i as u32))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.0[a] == self.0[b]
    }

    pub fn class_count(&self) -> usize {
        self.0.iter().enumerate().filter(|(i, &r)| *i == r as usize).count()
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut by_rep: Vec<Vec<usize>> = vec![Vec::new(); self.0.len()];
        for (i, &r) in self.0.iter().enumerate() {
            by_rep[r as usize].push(i);
        }
        by_rep.into_iter().filter(|c| !c.is_empty()).collect()
    }

    /// `self ⊆ other` as relations.
    pub fn refines(&self, other: &Partition) -> bool {
        self.0
            .iter()
            .enumerate()
            .all(|(i, &r)| other.0[i] == other.0[r as usize])
    }

    pub fn join(&self, other: &Partition) -> Partition {
        let mut uf = UnionFind::from_partition(self);
        for (i, &r) in other.0.iter().enumerate() {
            uf.union(i, r as usize);
        }
        uf.into_partition()
    }

    pub fn meet(&self, other: &Partition) -> Partition {
        let labels: Vec<usize> = self
            .0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| a as usize * self.0.len() + b as usize)
            .collect();
        Partition::from_labels(&labels)
    }

    /// `[[ids],[ids],…]`.
    pub fn dump(&self) -> String {
        let parts: Vec<String> = self
            .classes()
            .iter()
            .map(|c| {
                let ids: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                format!("[{}]", ids.join(","))
            })
            .collect();
        format!("[{}]", parts.join(","))
    }
}

/// Left and right compatibility of a partition.
pub fn is_congruence(s: &SemigroupTable, p: &Partition) -> bool {
    (0..s.size()).into_par_iter().all(|x| {
        let r = p.0[x] as usize;
        r == x || (0..s.size()).all(|t| p.related(s.mul(t, x), s.mul(t, r)) && p.related(s.mul(x, t), s.mul(r, t)))
    })
}

/// Least congruence containing `(a, b)`.
pub fn principal_congruence(s: &SemigroupTable, a: usize, b: usize) -> Partition {
    let mut uf = UnionFind::new(s.size());
    let mut work = vec![(a, b)];
    while let Some((x, y)) = work.pop() {
        if !uf.union(x, y) {
            continue;
        }
        for &g in s.generators() {
            work.push((s.mul(g, x), s.mul(g, y)));
            work.push((s.mul(x, g), s.mul(y, g)));
        }
    }
    uf.into_partition()
}

/// Least congruence containing all `pairs`.
pub fn generated_congruence(s: &SemigroupTable, pairs: &[(usize, usize)]) -> Partition {
    pairs
        .iter()
        .map(|&(a, b)| principal_congruence(s, a, b))
        .fold(Partition::discrete(s.size()), |acc, p| acc.join(&p))
}

/// Every congruence, as joins of principal congruences, sorted.
pub fn all_congruences(s: &SemigroupTable, bound: usize) -> Result<Vec<Partition>, OracleError> {
    if s.size() > bound {
        return Err(OracleError::TooLarge { size: s.size(), bound });
    }
    let n = s.size();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let mut principals: Vec<Partition> = pairs.par_iter().map(|&(a, b)| principal_congruence(s, a, b)).collect();
    principals.sort();
    principals.dedup();
    let mut seen: HashSet<Partition> = HashSet::new();
    let mut found = vec![Partition::discrete(n)];
    seen.insert(found[0].clone());
    let mut i = 0;
    while i < found.len() {
        let base = found[i].clone();
        let next: Vec<Partition> = principals
            .par_iter()
            .filter(|p| !p.refines(&base))
            .map(|p| base.join(p))
            .collect();
        for c in next {
            if seen.insert(c.clone()) {
                found.push(c);
            }
        }
        i += 1;
    }
    found.sort();
    Ok(found)
}

/// Every subgroup, as joins of cyclic subgroups.
pub fn all_subgroups(g: &FiniteGroup, bound: usize) -> Result<Vec<Subgroup>, OracleError> {
    let mut cyclic: Vec<Subgroup> = g.elements().map(|x| g.generate(&[x])).collect();
    cyclic.sort();
    cyclic.dedup();
    let mut seen: HashSet<Subgroup> = cyclic.iter().cloned().collect();
    let mut found = cyclic.clone();
    let mut i = 0;
    while i < found.len() {
        let h = found[i].clone();
        for c in &cyclic {
            if c.is_subgroup_of(&h) {
                continue;
            }
            let j = g.generate_from(h.iter().chain(c.iter()));
            if seen.insert(j.clone()) {
                found.push(j);
                if found.len() > bound {
                    return Err(OracleError::TooManySubgroups(bound));
                }
            }
        }
        i += 1;
    }
    found.sort();
    Ok(found)
}

/// Normal subgroups by exhaustive conjugation over all elements.
pub fn normal_subgroups(g: &FiniteGroup, bound: usize) -> Result<Vec<Subgroup>, OracleError> {
    Ok(all_subgroups(g, bound)?
        .into_iter()
        .filter(|h| h.iter().all(|x| g.elements().all(|y| h.contains(g.conj(y, x)))))
        .collect())
}

/// Monotone sequences of length `k` in a chain of `c` elements: `C(k+c-1, c-1)`.
pub fn chain_count(c: usize, k: usize) -> BigUint {
    if c == 0 {
        return BigUint::from((k == 0) as u32);
    }
    let (top, r) = ((k + c - 1) as u64, (c - 1) as u64);
    let mut acc = BigUint::from(1u32);
    for i in 0..r {
        acc = acc * (top - i) / (i + 1);
    }
    acc
}

/// Direct recursive count of monotone sequences.
pub fn enumerate_chains(c: usize, k: usize) -> BigUint {
    fn go(lo: usize, c: usize, k: usize, memo: &mut HashMap<(usize, usize), BigUint>) -> BigUint {
        if k == 0 {
            return BigUint::from(1u32);
        }
        if let Some(v) = memo.get(&(lo, k)) {
            return v.clone();
        }
        let v: BigUint = (lo..c).map(|x| go(x, c, k - 1, memo)).sum();
        memo.insert((lo, k), v.clone());
        v
    }
    go(0, c, k, &mut HashMap::new())
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthRow {
    pub n: usize,
    pub congruences: String,
    pub idempotent_separating: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthReport {
    pub group: String,
    pub chief_length: usize,
    pub rows: Vec<GrowthRow>,
    /// Least-squares log-log slope of the congruence count over the top half of the range.
    pub slope: Option<f64>,
    pub slope_idempotent_separating: Option<f64>,
    /// `[c, 2c-1]`.
    pub window: (f64, f64),
    /// `[c-1, 2(c-1)]`.
    pub window_idempotent_separating: (f64, f64),
    pub nondecreasing: bool,
    pub flags: Vec<String>,
}

/// Slope of `ln y` against `ln x` by least squares.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Classification counts for `n = 1..=n_max` with fitted growth exponents.
pub fn growth_experiment(g: std::sync::Arc<FiniteGroup>, n_max: usize) -> Result<GrowthReport, OracleError> {
    let c = g.chief_length()?;
    let base = CongruenceClassifier::new(g.clone(), 1)?;
    let mut counts = Vec::new();
    for n in 1..=n_max {
        counts.push((n, base.with_degree(n).count()?));
    }
    let lo = (n_max / 2).max(1);
    let top: Vec<_> = counts.iter().filter(|(n, _)| *n >= lo).collect();
    let slope = loglog_slope(&top.iter().map(|(n, k)| (*n as f64, k.total as f64)).collect::<Vec<_>>());
    let slope_is = loglog_slope(
        &top.iter()
            .map(|(n, k)| (*n as f64, k.idempotent_separating as f64))
            .collect::<Vec<_>>(),
    );
    let nondecreasing = counts
        .windows(2)
        .all(|w| w[0].1.total <= w[1].1.total && w[0].1.idempotent_separating <= w[1].1.idempotent_separating);
    let cf = c as f64;
    let window = (cf, 2.0 * cf - 1.0);
    let window_is = (cf - 1.0, 2.0 * (cf - 1.0));
    let mut flags = Vec::new();
    if !nondecreasing {
        flags.push("counts decrease".to_string());
    }
    if c >= 1 {
        if let Some(s) = slope {
            if s < window.0 - 0.5 || s > window.1 + 0.5 {
                flags.push(format!(
                    "congruence slope {s:.3} outside [{}, {}] +- 0.5",
                    window.0, window.1
                ));
            }
        }
        if let Some(s) = slope_is {
            if s < window_is.0 - 0.5 || s > window_is.1 + 0.5 {
                flags.push(format!(
                    "idempotent-separating slope {s:.3} outside [{}, {}] +- 0.5",
                    window_is.0, window_is.1
                ));
            }
        }
    }
    Ok(GrowthReport {
        group: g.name().to_string(),
        chief_length: c,
        rows: counts
            .iter()
            .map(|(n, k)| GrowthRow {
                n: *n,
                congruences: k.total.to_string(),
                idempotent_separating: k.idempotent_separating.to_string(),
            })
            .collect(),
        slope,
        slope_idempotent_separating: slope_is,
        window,
        window_idempotent_separating: window_is,
        nondecreasing,
        flags,
    })
}

impl GrowthReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,congruences,idempotent_separating\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{}\n", r.n, r.congruences, r.idempotent_separating));
        }
        out
    }
}

/// Partitions of every classified congruence over `monoid.enumerate()`, sorted.
pub fn extensionalize_all(
    classifier: &CongruenceClassifier,
    monoid: &WreathMonoid,
) -> Result<Vec<Partition>, OracleError> {
    let specs = classifier.enumerate_all()?;
    let mut out: Vec<Partition> = specs
        .iter()
        .map(|s| classifier.partition(s, monoid).map(|c| Partition::from_labels(&c)))
        .collect::<Result<_, _>>()?;
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::make_group;
    use std::sync::Arc;

    #[test]
    fn semilattice_and_group() {
        let s = SemigroupTable::from_rows(&[vec![0, 0], vec![0, 1]]).unwrap();
        assert_eq!(all_congruences(&s, 10).unwrap().len(), 2);
        let s3 = make_group("S3").unwrap();
        let t = SemigroupTable::from_group(&s3, 100).unwrap();
        assert_eq!(all_congruences(&t, 100).unwrap().len(), 3);
        // (g, 1) generates the cosets of the normal closure of g
        for x in s3.elements() {
            let p = principal_congruence(&t, x, 0);
            let n = s3.normal_closure(&[x]);
            for a in s3.elements() {
                for b in s3.elements() {
                    assert_eq!(p.related(a, b), n.contains(s3.mul(s3.inv(a), b)));
                }
            }
        }
    }

    #[test]
    fn rejects_non_associative() {
        let rows = vec![vec![1, 0], vec![0, 0]];
        assert!(matches!(
            SemigroupTable::from_rows(&rows),
            Err(OracleError::NotAssociative(..))
        ));
    }

    #[test]
    fn symmetric_inverse_two() {
        let m = WreathMonoid::new(Arc::new(make_group("1").unwrap()), 2);
        let s = SemigroupTable::from_monoid(&m, 250).unwrap();
        let all = all_congruences(&s, 250).unwrap();
        assert_eq!(all.len(), 4);
        for p in &all {
            assert!(is_congruence(&s, p));
            for q in &all {
                assert!(all.contains(&p.join(q)));
                assert!(all.contains(&p.meet(q)));
            }
        }
        let zero = m.index_of(&m.zero()).unwrap();
        let e = m.index_of(&m.parse("(- ,0 ; [-,2])").unwrap()).unwrap();
        let p = principal_congruence(&s, zero, e);
        let elems = m.enumerate().unwrap();
        for (i, x) in elems.iter().enumerate() {
            assert_eq!(p.related(i, zero), x.rank() <= 1);
        }
    }

    #[test]
    fn generator_translations_suffice() {
        let m = WreathMonoid::new(Arc::new(make_group("C2").unwrap()), 2);
        let s = SemigroupTable::from_monoid(&m, 250).unwrap();
        let pair = |u: usize, v: usize| {
            Partition::from_labels(&(0..s.size()).map(|i| if i == v { u } else { i }).collect::<Vec<_>>())
        };
        let full = |a: usize, b: usize| {
            let mut p = pair(a, b);
            loop {
                let mut next = p.clone();
                for x in 0..s.size() {
                    for y in 0..s.size() {
                        if !p.related(x, y) {
                            continue;
                        }
                        for t in 0..s.size() {
                            for (u, v) in [(s.mul(t, x), s.mul(t, y)), (s.mul(x, t), s.mul(y, t))] {
                                if !next.related(u, v) {
                                    next = next.join(&pair(u, v));
                                }
                            }
                        }
                    }
                }
                if next == p {
                    return p;
                }
                p = next;
            }
        };
        for (a, b) in [(0, 1), (2, 5), (3, 16), (7, 11)] {
            assert_eq!(principal_congruence(&s, a, b), full(a, b));
        }
    }

    #[test]
    fn oracle_subgroups() {
        for (spec, total, normal) in [("S3", 6, 3), ("C4", 3, 3), ("D4", 10, 6), ("C2xC2", 5, 5)] {
            let g = make_group(spec).unwrap();
            assert_eq!(all_subgroups(&g, 1000).unwrap().len(), total, "{spec}");
            let ns = normal_subgroups(&g, 1000).unwrap();
            assert_eq!(ns.len(), normal, "{spec}");
            let mut fast = g.all_normal_subgroups().unwrap();
            fast.sort();
            assert_eq!(ns, fast);
        }
    }

    #[test]
    fn chain_counts() {
        assert_eq!(chain_count(2, 3), BigUint::from(4u32));
        assert_eq!(chain_count(3, 2), BigUint::from(6u32));
        for c in 0..=5 {
            for k in 0..=12 {
                assert_eq!(chain_count(c, k), enumerate_chains(c, k), "c={c} k={k}");
            }
        }
        assert_eq!(chain_count(1, 40), BigUint::from(1u32));
    }

    #[test]
    fn slope_fit() {
        let pts: Vec<(f64, f64)> = (1..10u32).map(|x| (x as f64, 3.0 * (x as f64).powi(2))).collect();
        assert!((loglog_slope(&pts).unwrap() - 2.0).abs() < 1e-9);
        assert_eq!(loglog_slope(&pts[..1]), None);
    }

    #[test]
    fn partition_dump_and_lattice() {
        let p = Partition::from_labels(&[5, 3, 5, 7]);
        assert_eq!(p.dump(), "[[0,2],[1],[3]]");
        assert_eq!(p.class_count(), 3);
        let q = Partition::from_labels(&[0, 0, 1, 1]);
        assert_eq!(p.join(&q), Partition::universal(4));
        assert_eq!(p.meet(&q), Partition::discrete(4));
        assert!(Partition::discrete(4).refines(&p));
    }
}
