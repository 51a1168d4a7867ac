use super::{check_bound, Elem, FiniteGroup, GroupError};

const DEFAULT_ASSIGNMENT_BOUND: usize = 10_000_000;

/// A homomorphism given by its image table.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupHom {
    images: Vec<Elem>,
}

impl GroupHom {
    pub fn from_images(images: Vec<Elem>) -> Self {
        GroupHom { images }
    }

    #[inline]
    pub fn apply(&self, x: Elem) -> Elem {
        self.images[x]
    }

    pub fn images(&self) -> &[Elem] {
        &self.images
    }

    pub fn is_trivial(&self) -> bool {
        self.images.iter().all(|&x| x == 0)
    }

    pub fn is_homomorphism(&self, dom: &FiniteGroup, cod: &FiniteGroup) -> bool {
        self.images.len() == dom.order()
            && self.images.iter().all(|&x| x < cod.order())
            && dom.elements().all(|a| {
                dom.elements()
                    .all(|b| self.images[dom.mul(a, b)] == cod.mul(self.images[a], self.images[b]))
            })
    }
}

/// Extends a generator assignment to all of `dom`, or `None` if inconsistent.
fn extend(dom: &FiniteGroup, cod: &FiniteGroup, gens: &[Elem], imgs: &[Elem]) -> Option<Vec<Elem>> {
    let mut map = vec![usize::MAX; dom.order()];
    map[0] = 0;
    let mut stack = vec![0];
    while let Some(x) = stack.pop() {
        for (&g, &ig) in gens.iter().zip(imgs) {
            let y = dom.mul(x, g);
            let iy = cod.mul(map[x], ig);
            if map[y] == usize::MAX {
                map[y] = iy;
                stack.push(y);
            } else if map[y] != iy {
                return None;
            }
        }
    }
    Some(map)
}

pub fn all_homs(dom: &FiniteGroup, cod: &FiniteGroup) -> Result<Vec<GroupHom>, GroupError> {
    all_homs_bounded(dom, cod, DEFAULT_ASSIGNMENT_BOUND)
}

/// All homomorphisms `dom -> cod`, sorted by image table.
pub fn all_homs_bounded(dom: &FiniteGroup, cod: &FiniteGroup, bound: usize) -> Result<Vec<GroupHom>, GroupError> {
    let gens = dom.generators().to_vec();
    let candidates: Vec<Vec<Elem>> = gens
        .iter()
        .map(|&g| {
            let k = dom.element_order(g);
            cod.elements()
                .filter(|&y| k.is_multiple_of(cod.element_order(y)))
                .collect()
        })
        .collect();
    let total = candidates
        .iter()
        .fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128));
    check_bound(format!("homomorphisms {} -> {}", dom.name(), cod.name()), total, bound)?;
    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    loop {
        let imgs: Vec<Elem> = choice.iter().zip(&candidates).map(|(&i, c)| c[i]).collect();
        if let Some(map) = extend(dom, cod, &gens, &imgs) {
            out.push(GroupHom { images: map });
        }
        // odometer
        let mut pos = 0;
        loop {
            if pos == gens.len() {
                out.sort();
                return Ok(out);
            }
            choice[pos] += 1;
            if choice[pos] < candidates[pos].len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exhaustive oracle over every function `dom -> cod`.
    fn homs_by_brute_force(dom: &FiniteGroup, cod: &FiniteGroup) -> usize {
        let (n, k) = (dom.order(), cod.order());
        let mut count = 0;
        let mut images = vec![0; n];
        loop {
            if GroupHom::from_images(images.clone()).is_homomorphism(dom, cod) {
                count += 1;
            }
            let mut pos = 0;
            loop {
                if pos == n {
                    return count;
                }
                images[pos] += 1;
                if images[pos] < k {
                    break;
                }
                images[pos] = 0;
                pos += 1;
            }
        }
    }

    #[test]
    fn counts_match_brute_force() {
        let c2 = FiniteGroup::cyclic(2).unwrap();
        let c3 = FiniteGroup::cyclic(3).unwrap();
        let c4 = FiniteGroup::cyclic(4).unwrap();
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let v4 = FiniteGroup::klein().unwrap();
        for (a, b) in [(&c2, &s3), (&s3, &c2), (&c4, &v4), (&v4, &s3), (&c3, &s3), (&s3, &c3)] {
            let fast = all_homs(a, b).unwrap();
            assert!(fast.iter().all(|h| h.is_homomorphism(a, b)));
            assert_eq!(fast.len(), homs_by_brute_force(a, b), "{} -> {}", a.name(), b.name());
        }
    }

    #[test]
    fn endomorphisms_of_s3() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        // 6 automorphisms, 3 maps onto a C2, 1 trivial
        assert_eq!(all_homs(&s3, &s3).unwrap().len(), 10);
    }
}
