use std::sync::Arc;

use super::{check_bound, Elem, FiniteGroup, GroupError, Law, TABLE_BOUND};

/// `G^m` with mixed-radix encoding: coordinate `0` is the most significant digit.
#[derive(Clone, Debug)]
pub struct DirectPower {
    base: Arc<FiniteGroup>,
    m: usize,
    group: Arc<FiniteGroup>,
}

pub fn direct_power(base: &Arc<FiniteGroup>, m: usize, bound: usize) -> Result<DirectPower, GroupError> {
    let k = base.order();
    let order = (k as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    check_bound(format!("{}^{m}", base.name()), order, bound)?;
    let order = order as usize;
    let name = if m == 1 {
        base.name().to_string()
    } else {
        format!("{}^{m}", base.name())
    };
    let power_law = Law::Power { base: base.clone(), m };
    let mut inverse = vec![0u32; order];
    for (x, slot) in inverse.iter_mut().enumerate() {
        let (mut x, mut out, mut w) = (x, 0, 1);
        for _ in 0..m {
            out += base.inv(x % k) * w;
            x /= k;
            w *= k;
        }
        *slot = out as u32;
    }
    let lazy = FiniteGroup::from_law(name.clone(), order, power_law, inverse);
    let group = if order <= TABLE_BOUND {
        let mut table = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                table.push(lazy.mul(a, b) as u32);
            }
        }
        let inverse = lazy.inverse.clone();
        FiniteGroup::from_law(name, order, Law::Table(table), inverse)
    } else {
        lazy
    };
    Ok(DirectPower {
        base: base.clone(),
        m,
        group: Arc::new(group),
    })
}

impl DirectPower {
    pub fn base(&self) -> &Arc<FiniteGroup> {
        &self.base
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn encode(&self, coords: &[Elem]) -> Elem {
        debug_assert_eq!(coords.len(), self.m);
        let k = self.base.order();
        coords.iter().fold(0, |acc, &c| acc * k + c)
    }

    pub fn decode(&self, x: Elem) -> Vec<Elem> {
        let k = self.base.order();
        let mut out = vec![0; self.m];
        let mut x = x;
        for slot in out.iter_mut().rev() {
            *slot = x % k;
            x /= k;
        }
        out
    }

    /// Index of the tuple with `g` in coordinate `i` and identity elsewhere.
    pub fn embed_at(&self, i: usize, g: Elem) -> Elem {
        g * self.base.order().pow((self.m - 1 - i) as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DEFAULT_GROUP_BOUND;

    #[test]
    fn encode_decode_round_trip() {
        let s3 = Arc::new(FiniteGroup::symmetric(3).unwrap());
        let p = direct_power(&s3, 3, DEFAULT_GROUP_BOUND).unwrap();
        assert_eq!(p.order(), 216);
        for x in 0..p.order() {
            assert_eq!(p.encode(&p.decode(x)), x);
        }
    }

    #[test]
    fn multiplication_is_coordinatewise() {
        let s3 = Arc::new(FiniteGroup::symmetric(3).unwrap());
        for m in [2, 5] {
            let p = direct_power(&s3, m, DEFAULT_GROUP_BOUND).unwrap();
            for (a, b) in [(7, 100 % p.order()), (3, 5), (p.order() - 1, 17)] {
                let (da, db) = (p.decode(a), p.decode(b));
                let want: Vec<Elem> = da.iter().zip(&db).map(|(&x, &y)| s3.mul(x, y)).collect();
                assert_eq!(p.decode(p.group().mul(a, b)), want);
                let inv: Vec<Elem> = da.iter().map(|&x| s3.inv(x)).collect();
                assert_eq!(p.decode(p.group().inv(a)), inv);
            }
        }
    }

    #[test]
    fn large_power_is_untabulated_and_generated_per_coordinate() {
        let c2 = Arc::new(FiniteGroup::cyclic(2).unwrap());
        let p = direct_power(&c2, 14, DEFAULT_GROUP_BOUND).unwrap();
        assert_eq!(p.order(), 1 << 14);
        assert_eq!(p.group().generators().len(), 14);
        assert_eq!(p.group().generate(p.group().generators()).len(), 1 << 14);
    }

    #[test]
    fn bound_is_enforced() {
        let s3 = Arc::new(FiniteGroup::symmetric(3).unwrap());
        assert!(matches!(
            direct_power(&s3, 9, DEFAULT_GROUP_BOUND),
            Err(GroupError::TooLarge { .. })
        ));
    }
}
