//! Seeded generators of random test data shared by the integration suites.
#![allow(dead_code)]

use num_traits::Zero;
use proptest::test_runner::{Config, RngSeed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zigzag::autom::{Generator, GeneratorWord};
use zigzag::necklace::{Alphabet, CycSum, Letter};
use zigzag::polymat::{PolyMat, UniPoly, Var};
use zigzag::quiver::{Arrow, NCPoly, QuiverSpec};
use zigzag::scalar::{GaussScalar, SMat};

/// Property runs are reproducible: fixed seed, no failure persistence files.
pub fn prop_config(cases: u32) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(0x2161_7a69), failure_persistence: None, ..Config::default() }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p/q` with `|p| ≤ 3`, `q ∈ {1, 2}`, occasionally with an imaginary part.
pub fn scalar(rng: &mut ChaCha8Rng) -> GaussScalar {
    let re = GaussScalar::ratio(rng.random_range(-3..=3), rng.random_range(1..=2));
    if rng.random_bool(0.2) {
        &re + &(&GaussScalar::i() * &GaussScalar::from_int(rng.random_range(-2..=2)))
    } else {
        re
    }
}

pub fn nonzero_scalar(rng: &mut ChaCha8Rng) -> GaussScalar {
    loop {
        let c = scalar(rng);
        if !c.is_zero() {
            return c;
        }
    }
}

/// Up to `terms` words of length `1..=max_len` over letters `0..letters`.
pub fn cycsum(rng: &mut ChaCha8Rng, letters: usize, max_len: usize, terms: usize) -> CycSum {
    let mut f = CycSum::zero();
    for _ in 0..terms {
        let len = rng.random_range(1..=max_len);
        let w: Vec<Letter> = (0..len).map(|_| rng.random_range(0..letters) as Letter).collect();
        f.add_word(&w, scalar(rng));
    }
    f
}

/// Necklace over a triangular alphabet in which every word has a `b` letter.
pub fn triangular_f(rng: &mut ChaCha8Rng, letters: usize, max_len: usize, terms: usize) -> CycSum {
    let mut f = CycSum::zero();
    for _ in 0..terms {
        let len = rng.random_range(1..=max_len);
        let mut w: Vec<Letter> = (0..len).map(|_| rng.random_range(0..letters) as Letter).collect();
        if w.iter().all(|&l| l == 0) {
            let k = rng.random_range(0..len);
            w[k] = rng.random_range(1..letters) as Letter;
        }
        f.add_word(&w, scalar(rng));
    }
    f
}

/// Integer matrix of determinant 1: a product of a few elementary shears.
pub fn unimodular(rng: &mut ChaCha8Rng, r: usize) -> SMat {
    let mut t = SMat::identity(r);
    if r < 2 {
        return t;
    }
    for _ in 0..3 {
        let i = rng.random_range(0..r);
        let mut j = rng.random_range(0..r);
        while j == i {
            j = rng.random_range(0..r);
        }
        let mut e = SMat::identity(r);
        e.set(i, j, GaussScalar::from_int(rng.random_range(-2..=2)));
        t = t.mul(&e);
    }
    t
}

/// Random generator of the group; `small` keeps polynomial generators short and mild for numerics.
pub fn generator(rng: &mut ChaCha8Rng, spec: &QuiverSpec, small: bool) -> Generator {
    if small {
        generator_sized(rng, spec, 2, 2, true)
    } else {
        generator_sized(rng, spec, 4, 3, false)
    }
}

/// Polynomial generators use up to `terms` necklace words of length `1..=max_len`; `halve`
/// scales them by `1/2`.
pub fn generator_sized(
    rng: &mut ChaCha8Rng,
    spec: &QuiverSpec,
    max_len: usize,
    terms: usize,
    halve: bool,
) -> Generator {
    let tri = Alphabet::triangular(spec).len();
    let op = Alphabet::op_triangular(spec).len();
    let half = GaussScalar::ratio(1, 2);
    let poly = |rng: &mut ChaCha8Rng, letters: usize| {
        let f = cycsum(rng, letters, max_len, terms);
        if halve {
            f.scale(&half)
        } else {
            f
        }
    };
    loop {
        let g = match rng.random_range(0..7) {
            0 | 1 => Generator::Triangular(poly(rng, tri)),
            2 | 3 => Generator::OpTriangular(poly(rng, op)),
            4 => Generator::AffineGL(unimodular(rng, spec.r)),
            5 => {
                let k = GaussScalar::from_int(rng.random_range(-2..=2));
                let one = GaussScalar::from_int(1);
                let zero = GaussScalar::zero();
                Generator::AffineSL2 { a: [[one.clone(), k], [zero.clone(), one]], b: [scalar(rng), zero] }
            }
            _ => match rng.random_range(0..3) {
                0 => Generator::FourierZero,
                1 if spec.r.is_multiple_of(2) => Generator::FourierR,
                2 if spec.r >= 2 => Generator::Phi,
                _ => continue,
            },
        };
        return g;
    }
}

pub fn word(rng: &mut ChaCha8Rng, spec: &QuiverSpec, len: usize, small: bool) -> GeneratorWord {
    GeneratorWord::new((0..len).map(|_| generator(rng, spec, small)).collect())
}

/// Word whose symbolic expansion stays small: one necklace word of length at most 2 per
/// polynomial generator.
pub fn symbolic_word(rng: &mut ChaCha8Rng, spec: &QuiverSpec, len: usize) -> GeneratorWord {
    GeneratorWord::new((0..len).map(|_| generator_sized(rng, spec, 2, 1, false)).collect())
}

pub fn unipoly(rng: &mut ChaCha8Rng, max_deg: usize, var: Var) -> UniPoly {
    let d = rng.random_range(0..=max_deg);
    UniPoly::new((0..=d).map(|_| scalar(rng)).collect(), var)
}

/// Invertible polynomial matrix: a product of polynomial transvections, a permutation and a
/// diagonal of nonzero scalars.
pub fn unit_polymat(rng: &mut ChaCha8Rng, r: usize, max_deg: usize, var: Var) -> PolyMat {
    let mut m = PolyMat::identity(r, var);
    if r >= 2 {
        for _ in 0..3 {
            let i = rng.random_range(0..r);
            let mut j = rng.random_range(0..r);
            while j == i {
                j = rng.random_range(0..r);
            }
            let mut e = PolyMat::identity(r, var);
            e.set(i, j, unipoly(rng, max_deg, var));
            m = m.mul(&e);
        }
        let i = rng.random_range(0..r);
        let j = rng.random_range(0..r);
        let mut p = SMat::identity(r);
        if i != j {
            p.set(i, i, GaussScalar::zero());
            p.set(j, j, GaussScalar::zero());
            p.set(i, j, GaussScalar::from_int(1));
            p.set(j, i, GaussScalar::from_int(1));
        }
        m = m.mul(&PolyMat::from_scalar(&p, var));
    }
    let mut d = SMat::identity(r);
    d.set(0, 0, nonzero_scalar(rng));
    m.mul(&PolyMat::from_scalar(&d, var))
}

/// Element of the vertex-1 algebra: words in `a`, `a*` and `e_αβ = d_α b_β`, lengths `0..=max_len`.
pub fn a1_element(rng: &mut ChaCha8Rng, r: usize, max_len: usize, terms: usize) -> NCPoly {
    let mut p = NCPoly::zero();
    for _ in 0..terms {
        let len = rng.random_range(0..=max_len);
        let mut arrows = Vec::new();
        for _ in 0..len {
            match rng.random_range(0..3) {
                0 => arrows.push(Arrow::A),
                1 => arrows.push(Arrow::AStar),
                _ => {
                    arrows.push(Arrow::D(rng.random_range(1..=r) as u16));
                    arrows.push(Arrow::B(rng.random_range(1..=r) as u16));
                }
            }
        }
        let term = if arrows.is_empty() { NCPoly::idem(1) } else { NCPoly::word(&arrows) };
        p += &term.scale(&scalar(rng));
    }
    p
}
