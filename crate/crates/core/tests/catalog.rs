use gcas::catalog::{enumerate_feasible, CatalogBounds, Source};
use gcas::construct::{build_t1_set, build_t2_set, OffsetStrategy, Theorem1Params, Theorem2Params};
use gcas::sweep::{random_t1_function, random_t2_function};
use gcas::{check_gcas, Modulus};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const BOUNDS: CatalogBounds = CatalogBounds { max_l1: 8, max_l2: 9, max_set_size: 64, max_q: 12 };

#[test]
fn every_single_alphabet_row_builds_and_verifies() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let rows = enumerate_feasible(Source::Th1, &BOUNDS);
    assert!(rows.len() > 50);
    for r in rows.iter().filter(|r| r.l1 * r.l2 <= 256) {
        let w = |k: &str| r.witness.get(k).unwrap() as usize;
        let q = Modulus::new(r.q).unwrap();
        let function = random_t1_function(&mut rng, q, w("b") as u32, w("m"), w("n"), w("k"));
        let params = Theorem1Params { function, offset_order: w("N") as u32 };
        let set = build_t1_set(&params).unwrap();
        assert_eq!(set.len() as u64, r.set_size);
        assert_eq!(set.shape(), (r.l1 as usize, r.l2 as usize));
        assert!(check_gcas(&set).unwrap().is_gcas, "{r:?}");
    }
}

#[test]
fn every_two_alphabet_row_builds_and_verifies() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let rows = enumerate_feasible(Source::Th2, &BOUNDS);
    assert!(rows.len() > 50);
    for r in rows.iter().filter(|r| r.l1 * r.l2 <= 256) {
        let w = |k: &str| r.witness.get(k).unwrap() as usize;
        let q = Modulus::new(r.q).unwrap();
        let function =
            random_t2_function(&mut rng, q, (w("b1") as u32, w("m"), w("k1")), (w("b2") as u32, w("n"), w("k2")));
        let params = Theorem2Params {
            function,
            row_offset_order: w("N1") as u32,
            col_offset_order: w("N2") as u32,
            strategy: OffsetStrategy::default(),
        };
        let set = build_t2_set(&params).unwrap();
        assert_eq!(set.len() as u64, r.set_size);
        assert_eq!(set.shape(), (r.l1 as usize, r.l2 as usize));
        assert!(check_gcas(&set).unwrap().is_gcas, "{r:?}");
    }
}
