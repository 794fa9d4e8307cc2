use fdes::formal::{enumerate_generators, relations, RelationSystem, Space};

#[test]
fn eisenstein_dimension_table() {
    let expected = [1, 2, 5, 8, 15, 22, 35, 48, 69, 90, 121, 152];
    for (k, want) in (1..=12).zip(expected) {
        let t = std::time::Instant::now();
        let sys = RelationSystem::build(Space::Eisenstein, k).unwrap();
        eprintln!("weight {k}: {} gens, rank {}, {:?}", sys.basis().len(), sys.rank(), t.elapsed());
        assert_eq!(sys.dimension(), want, "weight {k}");
    }
}

#[test]
fn zeta_dimensions() {
    for k in 1..=20u32 {
        let sys = RelationSystem::build(Space::Zeta, k).unwrap();
        assert_eq!(sys.dimension() as u32, (k + 1) / 2, "weight {k}");
        assert_eq!(sys.rank() + sys.dimension(), enumerate_generators(Space::Zeta, k).len());
        assert!(relations(Space::Zeta, k).iter().all(|r| sys.is_zero(r).unwrap()));
    }
}
