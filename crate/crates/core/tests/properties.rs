use std::sync::{Arc, OnceLock};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pamcong::congruence::{CongruenceClassifier, CongruenceSpec};
use pamcong::group::make_group;
use pamcong::invariant::{InvariantCatalog, InvariantSubgroup};
use pamcong::wreath_monoid::{WreathElement, WreathMonoid};

struct Fixture {
    monoid: WreathMonoid,
    bigger: WreathMonoid,
    classifier: CongruenceClassifier,
    specs: Vec<CongruenceSpec>,
    catalog: Arc<InvariantCatalog>,
    invariant: Vec<InvariantSubgroup>,
}

fn fixture() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| {
        let g = Arc::new(make_group("C3").unwrap());
        let classifier = CongruenceClassifier::new(g.clone(), 3).unwrap();
        let specs = classifier.enumerate_all().unwrap();
        let catalog = Arc::new(InvariantCatalog::new(Arc::new(make_group("S3").unwrap())).unwrap());
        let invariant = catalog.enumerate(3).unwrap().to_vec();
        Fixture {
            monoid: WreathMonoid::new(g.clone(), 3),
            bigger: WreathMonoid::new(g, 4),
            classifier,
            specs,
            catalog,
            invariant,
        }
    })
}

fn elements(seed: u64) -> (WreathElement, WreathElement, WreathElement) {
    let f = fixture();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (
        f.monoid.random_element(&mut rng),
        f.monoid.random_element(&mut rng),
        f.monoid.random_element(&mut rng),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn product_is_associative(seed in any::<u64>()) {
        let m = &fixture().monoid;
        let (x, y, z) = elements(seed);
        prop_assert_eq!(m.mul(&m.mul(&x, &y), &z), m.mul(&x, &m.mul(&y, &z)));
    }

    #[test]
    fn inverse_is_involutive_and_antimorphic(seed in any::<u64>()) {
        let m = &fixture().monoid;
        let (x, y, _) = elements(seed);
        prop_assert_eq!(m.inverse(&m.inverse(&x)), x.clone());
        prop_assert_eq!(m.inverse(&m.mul(&x, &y)), m.mul(&m.inverse(&y), &m.inverse(&x)));
    }

    #[test]
    fn theta_is_a_homomorphism(seed in any::<u64>()) {
        let f = fixture();
        let (x, y, _) = elements(seed);
        let lhs = f.monoid.mul(&x, &y).theta_embed(4).unwrap();
        let rhs = f.bigger.mul(&x.theta_embed(4).unwrap(), &y.theta_embed(4).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn classified_relations_are_compatible(seed in any::<u64>(), k in any::<prop::sample::Index>()) {
        let f = fixture();
        let s = &f.specs[k.index(f.specs.len())];
        let (x, y, z) = elements(seed);
        // elements below rank m are all related
        let (x, y) = if f.classifier.related(s, &x, &y) {
            (x, y)
        } else {
            let e = f
                .monoid
                .enumerate_idempotents()
                .into_iter()
                .find(|e| e.rank() + 1 == s.m())
                .unwrap();
            (f.monoid.mul(&x, &e), f.monoid.mul(&y, &e))
        };
        prop_assert!(f.classifier.related(s, &x, &y));
        prop_assert!(f.classifier.related(s, &f.monoid.mul(&x, &z), &f.monoid.mul(&y, &z)));
        prop_assert!(f.classifier.related(s, &f.monoid.mul(&z, &x), &f.monoid.mul(&z, &y)));
    }

    #[test]
    fn relation_is_coarser_for_larger_specs(seed in any::<u64>(), a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let f = fixture();
        let s1 = &f.specs[a.index(f.specs.len())];
        let s2 = &f.specs[b.index(f.specs.len())];
        let (x, y, z) = elements(seed);
        let j = f.classifier.join(s1, s2).unwrap();
        let m = f.classifier.meet(s1, s2).unwrap();
        prop_assert!(f.classifier.leq(&m, s1) && f.classifier.leq(s1, &j));
        for (u, v) in [(&x, &y), (&x, &z), (&y, &z)] {
            let r1 = f.classifier.related(s1, u, v);
            let r2 = f.classifier.related(s2, u, v);
            prop_assert_eq!(f.classifier.related(&m, u, v), r1 && r2);
            if r1 || r2 {
                prop_assert!(f.classifier.related(&j, u, v));
            }
            if f.classifier.leq(s1, s2) && r1 {
                prop_assert!(r2);
            }
        }
    }

    #[test]
    fn invariant_join_meet_orders(a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let f = fixture();
        let k1 = &f.invariant[a.index(f.invariant.len())];
        let k2 = &f.invariant[b.index(f.invariant.len())];
        let j = f.catalog.join(k1, k2).unwrap();
        let m = f.catalog.meet(k1, k2).unwrap();
        prop_assert_eq!(f.catalog.order(&j) * f.catalog.order(&m), f.catalog.order(k1) * f.catalog.order(k2));
        prop_assert!(f.catalog.leq(&m, k1) && f.catalog.leq(k1, &j));
        prop_assert_eq!(f.catalog.join(k2, k1).unwrap(), j);
    }
}
