//! Permutations of `0..m`, composed left to right: `i(pq) = (ip)q`.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u8>);

impl Perm {
    pub fn identity(m: usize) -> Self {
        Perm((0..m as u8).collect())
    }

    /// Builds a permutation from its image list; `None` if not a bijection.
    pub fn from_images(images: Vec<u8>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            let i = i as usize;
            if i >= images.len() || seen[i] {
                return None;
            }
            seen[i] = true;
        }
        Some(Perm(images))
    }

    /// Transposition of `i` and `j` in `S_m`.
    pub fn transposition(m: usize, i: usize, j: usize) -> Self {
        let mut p = Perm::identity(m);
        p.0.swap(i, j);
        p
    }

    /// The cycle `c[0] -> c[1] -> ... -> c[0]`.
    pub fn cycle(m: usize, c: &[usize]) -> Self {
        let mut p = Perm::identity(m);
        for (k, &from) in c.iter().enumerate() {
            p.0[from] = c[(k + 1) % c.len()] as u8;
        }
        p
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn images(&self) -> &[u8] {
        &self.0
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u8; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u8;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j as usize)
    }

    pub fn is_even(&self) -> bool {
        let mut seen = vec![false; self.0.len()];
        let mut transpositions = 0;
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i] as usize;
                len += 1;
            }
            transpositions += len - 1;
        }
        transpositions % 2 == 0
    }

    /// Cycle type, sorted decreasingly, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i] as usize;
                len += 1;
            }
            out.push(len);
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    /// Right action on tuples: `(g^p)_i = g_{ip}`.
    pub fn act<T: Clone>(&self, tuple: &[T]) -> Vec<T> {
        (0..tuple.len()).map(|i| tuple[self.apply(i)].clone()).collect()
    }

    /// All permutations of `0..m` in lexicographic order (identity first).
    pub fn all(m: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut cur: Vec<u8> = (0..m as u8).collect();
        loop {
            out.push(Perm(cur.clone()));
            // next lexicographic permutation
            let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
                break;
            };
            let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }

    /// Position of `self` in [`Perm::all`] (Lehmer code).
    pub fn lex_rank(&self) -> usize {
        let m = self.0.len();
        let mut rank = 0;
        for i in 0..m {
            let smaller = self.0[i + 1..].iter().filter(|&&x| x < self.0[i]).count();
            rank = rank * (m - i) + smaller;
        }
        rank
    }
}

pub fn factorial(m: usize) -> usize {
    (1..=m).product()
}

/// Normal subgroups of `S_m`: trivial, `A_m`, `S_m`, and the Klein group when `m = 4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymNormal {
    Trivial,
    Klein,
    Alternating,
    Symmetric,
}

impl SymNormal {
    /// The distinct normal subgroups of `S_m`, smallest first.
    pub fn all(m: usize) -> Vec<SymNormal> {
        use SymNormal::*;
        match m {
            0 | 1 => vec![Trivial],
            2 => vec![Trivial, Symmetric],
            4 => vec![Trivial, Klein, Alternating, Symmetric],
            _ => vec![Trivial, Alternating, Symmetric],
        }
    }

    /// Whether this is the canonical name of a normal subgroup of `S_m`.
    pub fn is_valid(self, m: usize) -> bool {
        SymNormal::all(m).contains(&self)
    }

    pub fn contains(self, p: &Perm) -> bool {
        match self {
            SymNormal::Trivial => p.is_identity(),
            SymNormal::Klein => p.is_identity() || p.cycle_type() == [2, 2],
            SymNormal::Alternating => p.is_even(),
            SymNormal::Symmetric => true,
        }
    }

    pub fn order(self, m: usize) -> u128 {
        let full: u128 = (1..=m as u128).product();
        match self {
            SymNormal::Trivial => 1,
            SymNormal::Klein => 4,
            SymNormal::Alternating => (full / 2).max(1),
            SymNormal::Symmetric => full,
        }
    }

    /// Generators: 3-cycles `(1 2 k)`, transpositions `(1 k)`, or the two Klein involutions.
    pub fn generators(self, m: usize) -> Vec<Perm> {
        match self {
            SymNormal::Trivial => vec![],
            SymNormal::Klein => vec![
                Perm::from_images(vec![1, 0, 3, 2]).unwrap(),
                Perm::from_images(vec![2, 3, 0, 1]).unwrap(),
            ],
            SymNormal::Alternating => (2..m).map(|k| Perm::cycle(m, &[0, 1, k])).collect(),
            SymNormal::Symmetric => (1..m).map(|k| Perm::transposition(m, 0, k)).collect(),
        }
    }

    pub fn is_subgroup_of(self, other: SymNormal, m: usize) -> bool {
        self.generators(m).iter().all(|p| other.contains(p))
    }

    pub fn name(self) -> &'static str {
        match self {
            SymNormal::Trivial => "trivial",
            SymNormal::Klein => "klein",
            SymNormal::Alternating => "alternating",
            SymNormal::Symmetric => "symmetric",
        }
    }

    pub fn from_name(s: &str) -> Option<SymNormal> {
        Some(match s {
            "trivial" => SymNormal::Trivial,
            "klein" => SymNormal::Klein,
            "alternating" => SymNormal::Alternating,
            "symmetric" => SymNormal::Symmetric,
            _ => return None,
        })
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Cycle notation on `1..=m`, e.g. `(1 2)(3 4)`; the identity prints as `()`.
impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.0.len()];
        let mut wrote = false;
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            write!(f, "(")?;
            let mut i = start;
            let mut first = true;
            while !seen[i] {
                seen[i] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{}", i + 1)?;
                first = false;
                i = self.0[i] as usize;
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lex_enumeration_and_rank_agree() {
        let all = Perm::all(4);
        assert_eq!(all.len(), 24);
        assert!(all[0].is_identity());
        for (i, p) in all.iter().enumerate() {
            assert_eq!(p.lex_rank(), i);
        }
    }

    #[test]
    fn composition_is_left_to_right() {
        let p = Perm::transposition(3, 0, 1);
        let q = Perm::transposition(3, 1, 2);
        // 0 -p-> 1 -q-> 2
        assert_eq!(p.then(&q).apply(0), 2);
        assert!(p.then(&p).is_identity());
    }

    #[test]
    fn action_is_a_right_action() {
        let g = vec!['a', 'b', 'c'];
        let p = Perm::cycle(3, &[0, 1, 2]);
        let q = Perm::transposition(3, 0, 1);
        // (g^p)^q = g^{qp}
        assert_eq!(q.act(&p.act(&g)), q.then(&p).act(&g));
    }

    #[test]
    fn parity_and_display() {
        assert!(Perm::cycle(3, &[0, 1, 2]).is_even());
        assert!(!Perm::transposition(4, 0, 3).is_even());
        assert_eq!(Perm::cycle(4, &[0, 2]).to_string(), "(1 3)");
        assert_eq!(Perm::identity(2).to_string(), "()");
    }

    #[test]
    fn sym_normal_members_match_generated_closure() {
        for m in 1..=5 {
            let all = Perm::all(m);
            for q in SymNormal::all(m) {
                let mut closure = vec![Perm::identity(m)];
                let gens = q.generators(m);
                let mut i = 0;
                while i < closure.len() {
                    for g in &gens {
                        let x = closure[i].then(g);
                        if !closure.contains(&x) {
                            closure.push(x);
                        }
                    }
                    i += 1;
                }
                let members = all.iter().filter(|p| q.contains(p)).count();
                assert_eq!(closure.len(), members, "{q:?} in S{m}");
                assert_eq!(members as u128, q.order(m));
                for p in &all {
                    for x in &closure {
                        assert!(q.contains(&p.inverse().then(x).then(p)));
                    }
                }
            }
        }
    }
}
