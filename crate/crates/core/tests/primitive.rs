mod common;

use proptest::prelude::*;
use rand::Rng;
use zigzag::autom::Generator;
use zigzag::error::Error;
use zigzag::necklace::{Alphabet, CycSum, FreePoly, Letter};
use zigzag::parse::{parse_cycsum, parse_free};
use zigzag::primitive::{cyclic_orbits, pair_set, solve_primitive, solve_primitive_with_orbits, validate};
use zigzag::quiver::QuiverSpec;

fn ab() -> Alphabet {
    Alphabet::free(&["a", "b"])
}

fn derivatives(f: &CycSum, letters: &[Letter]) -> Vec<FreePoly> {
    letters.iter().map(|&l| f.derivative(l)).collect()
}

#[test]
fn worked_example() {
    let u = vec![parse_free("bab + bb", &ab()).unwrap(), parse_free("aba + ab + ba", &ab()).unwrap()];
    let (f, orbits) = solve_primitive_with_orbits(&[0, 1], &u).unwrap();
    assert_eq!(f, parse_cycsum("1/2 abab + bba", &ab()).unwrap());
    assert_eq!(orbits.len(), 2);
    assert_eq!(derivatives(&f, &[0, 1]), u);
}

#[test]
fn small_instances() {
    let zero = vec![FreePoly::zero(), FreePoly::zero()];
    assert!(solve_primitive(&[0, 1], &zero).unwrap().is_zero());
    let swap = vec![FreePoly::letter(1), FreePoly::letter(0)];
    assert_eq!(solve_primitive(&[0, 1], &swap).unwrap(), parse_cycsum("ab", &ab()).unwrap());
    let orbits = cyclic_orbits(&[0, 1], &pair_set(&swap)).unwrap();
    assert_eq!(orbits.len(), 1);
    assert_eq!(orbits[0].len(), 2);
}

#[test]
fn non_cocycles_and_foreign_letters_are_rejected() {
    let not_closed = vec![FreePoly::letter(1), FreePoly::zero()];
    assert!(matches!(solve_primitive(&[0, 1], &not_closed), Err(Error::NotACocycle(_))));
    // letter 2 lies outside G = {a, b}
    let foreign = vec![FreePoly::letter(2), FreePoly::zero()];
    let v = validate(&[0, 1], &foreign);
    assert!(!v.ok && v.witness.is_some());
    assert!(solve_primitive(&[0, 1], &foreign).is_err());
}

proptest! {
    #![proptest_config(common::prop_config(200))]

    #[test]
    fn solver_recovers_random_necklaces(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let n = rng.random_range(1..=4);
        let letters: Vec<Letter> = (0..n as Letter).collect();
        let f = common::cycsum(&mut rng, n, 6, 4);
        let u = derivatives(&f, &letters);
        let g = solve_primitive(&letters, &u).unwrap();
        prop_assert_eq!(g, f);
    }
}

/// Solutions of the triangular cocycle equation give symplectic triangular maps.
#[test]
fn solved_cocycles_build_symplectic_maps() {
    for seed in 0..30 {
        let mut rng = common::rng(900 + seed);
        let spec = QuiverSpec::zigzag(rng.random_range(2..=4)).unwrap();
        let n = Alphabet::triangular(&spec).len();
        let letters: Vec<Letter> = (0..n as Letter).collect();
        let f = common::triangular_f(&mut rng, n, 4, 3);
        let g = solve_primitive(&letters, &derivatives(&f, &letters)).unwrap();
        assert!(Generator::Triangular(g).build(&spec).unwrap().is_symplectic(), "seed={seed}");
    }
}
