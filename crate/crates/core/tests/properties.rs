use std::sync::OnceLock;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use torsionlab_core::bitset::BitSet;
use torsionlab_core::corpus::module_corpus;
use torsionlab_core::delta::{delta_satisfied, random_reducible, reduce_delta};
use torsionlab_core::ideal::all_left_ideals;
use torsionlab_core::lattice::{FiniteLattice, Modularity};
use torsionlab_core::module::{all_submodules, quotient, satisfies_quasiidentity, Module, Submodule};
use torsionlab_core::ring::Ring;
use torsionlab_core::spec::{build_ring, builtin_rings};
use torsionlab_core::torsion::{enumerate_torsion_notions, is_torsion_free, k_closure, TorsionNotion};

struct Fixture {
    ring: Ring,
    notions: Vec<TorsionNotion>,
    corpus: Vec<Module>,
}

fn fixtures() -> &'static [Fixture] {
    static CELL: OnceLock<Vec<Fixture>> = OnceLock::new();
    CELL.get_or_init(|| {
        builtin_rings()
            .into_iter()
            .filter(|r| r.order() <= 8)
            .map(|ring| Fixture {
                notions: enumerate_torsion_notions(&ring).unwrap(),
                corpus: module_corpus(&ring, 2).unwrap(),
                ring,
            })
            .collect()
    })
}

fn pick<T>(items: &[T], k: usize) -> &T {
    &items[k % items.len()]
}

/// A notion and a torsion-free module for it.
fn tf_pair(i: usize, j: usize, k: usize) -> (&'static TorsionNotion, &'static Module) {
    let fx = pick(fixtures(), i);
    let f = pick(&fx.notions, j);
    let tf: Vec<&Module> = fx.corpus.iter().filter(|m| is_torsion_free(f, m).unwrap()).collect();
    (f, tf[k % tf.len()])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn closure_is_a_closure_operator(i in 0usize..64, j in 0usize..8, k in 0usize..512, a in 0usize..4096, b in 0usize..4096) {
        let (f, m) = tf_pair(i, j, k);
        let subs = all_submodules(m);
        let s = pick(&subs, a);
        let t = pick(&subs, b).sum(s).unwrap();
        let cs = k_closure(f, m, s).unwrap();
        prop_assert!(s.is_subset(&cs));
        prop_assert_eq!(k_closure(f, m, &cs).unwrap(), cs.clone());
        prop_assert!(cs.is_subset(&k_closure(f, m, &t).unwrap()));
        let q = quotient(m, &cs).unwrap().module;
        prop_assert!(is_torsion_free(f, &q).unwrap());
    }

    #[test]
    fn quasiidentities_are_antitone(i in 0usize..64, a in 0usize..64, b in 0usize..64, k in 0usize..512) {
        let fx = pick(fixtures(), i);
        let ideals = all_left_ideals(&fx.ring);
        let (x, y) = (pick(&ideals, a), pick(&ideals, b));
        let m = pick(&fx.corpus, k);
        if x.is_subset(y) && satisfies_quasiidentity(m, x).unwrap() {
            prop_assert!(satisfies_quasiidentity(m, y).unwrap());
        }
    }

    #[test]
    fn quotient_correspondence(i in 0usize..64, k in 0usize..512, a in 0usize..4096) {
        let fx = pick(fixtures(), i);
        let m = pick(&fx.corpus, k);
        let subs = all_submodules(m);
        let s = pick(&subs, a);
        let above = subs.iter().filter(|t| s.is_subset(t)).count();
        let q = quotient(m, s).unwrap();
        prop_assert_eq!(all_submodules(&q.module).len(), above);
        prop_assert_eq!(q.module.order() * s.size(), m.order());
    }

    #[test]
    fn submodule_lattices_are_modular(i in 0usize..64, k in 0usize..512) {
        let fx = pick(fixtures(), i);
        let m = pick(&fx.corpus, k);
        let subs: Vec<Submodule> = all_submodules(m);
        let mut sets: Vec<BitSet> = subs.iter().map(|s| s.elements().clone()).collect();
        sets.sort();
        let by_set = |x: &BitSet| subs.iter().find(|s| s.elements() == x).unwrap().clone();
        let lattice = FiniteLattice::from_family(
            sets,
            |x, y| x.intersection(y),
            |x, y| by_set(x).sum(&by_set(y)).unwrap().elements().clone(),
        )
        .unwrap();
        prop_assert_eq!(lattice.is_modular(), Modularity::Pass);
    }

    #[test]
    fn random_delta_matches_quasiidentity(i in 0usize..64, seed in any::<u64>()) {
        let fx = pick(fixtures(), i);
        let d = random_reducible(&fx.ring, &mut ChaCha8Rng::seed_from_u64(seed));
        let a = reduce_delta(&d).unwrap().ideal;
        for m in &fx.corpus {
            prop_assert_eq!(delta_satisfied(m, &d).unwrap(), satisfies_quasiidentity(m, &a).unwrap());
        }
    }

    #[test]
    fn ring_names_reparse(i in 0usize..64) {
        let fx = pick(fixtures(), i);
        let again = build_ring(fx.ring.name()).unwrap();
        prop_assert_eq!(&again, fx.ring.as_ref());
    }
}
