//! Necklace primitives: given generators `g_k` and `u_k` with `Σ_k [g_k, u_k] = 0`,
//! find `f` with `∂f/∂g_k = u_k`.
//!
//! The support pairs `(k, w)` are permuted by the step `(i, m·g_j) ↦ (j, g_i·m)`;
//! each orbit is the set of cuts of a single necklace.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::necklace::{CycSum, FreePoly, LWord, Letter};
use crate::scalar::GaussScalar;

/// `(index into G, word in the support of u_index)`.
pub type Pair = (usize, Vec<Letter>);

/// Outcome of [`validate`]; `witness` is the first offending pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Validation {
    pub ok: bool,
    pub witness: Option<Pair>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    /// Starts at the representative (the least pair) and follows the step.
    pub pairs: Vec<Pair>,
    /// Multiplier applied to `g_k·w` for the representative; set by [`solve_primitive`].
    pub scale: Option<GaussScalar>,
}

impl Orbit {
    pub fn representative(&self) -> &Pair {
        &self.pairs[0]
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

fn pair_key(p: &Pair) -> (usize, LWord) {
    (p.0, LWord(p.1.clone()))
}

/// All support pairs in increasing order.
pub fn pair_set(u: &[FreePoly]) -> Vec<Pair> {
    let mut keys: BTreeSet<(usize, LWord)> = BTreeSet::new();
    for (k, uk) in u.iter().enumerate() {
        for (w, _) in uk.terms() {
            keys.insert((k, LWord(w.to_vec())));
        }
    }
    keys.into_iter().map(|(k, w)| (k, w.0)).collect()
}

/// `(i, m·g_j) ↦ (j, g_i·m)`; the empty word is fixed. `None` if the last letter is not in `G`.
pub fn step(g: &[Letter], p: &Pair) -> Option<Pair> {
    let (i, w) = p;
    let Some((&last, m)) = w.split_last() else {
        return Some(p.clone());
    };
    let j = g.iter().position(|&x| x == last)?;
    let mut nw = Vec::with_capacity(w.len());
    nw.push(g[*i]);
    nw.extend_from_slice(m);
    Some((j, nw))
}

/// Every support word is a word in `G` and the pair set is closed under the step.
pub fn validate(g: &[Letter], u: &[FreePoly]) -> Validation {
    let pairs = pair_set(u);
    let keys: BTreeSet<(usize, LWord)> = pairs.iter().map(pair_key).collect();
    for p in &pairs {
        let bad = p.1.iter().any(|l| !g.contains(l)) || step(g, p).is_none_or(|q| !keys.contains(&pair_key(&q)));
        if bad {
            return Validation { ok: false, witness: Some(p.clone()) };
        }
    }
    Validation { ok: true, witness: None }
}

/// Partition of the pair set into step orbits, in order of their least pair.
pub fn cyclic_orbits(g: &[Letter], pairs: &[Pair]) -> Result<Vec<Orbit>> {
    let keys: BTreeSet<(usize, LWord)> = pairs.iter().map(pair_key).collect();
    let mut seen: BTreeSet<(usize, LWord)> = BTreeSet::new();
    let mut orbits = Vec::new();
    for start in &keys {
        if seen.contains(start) {
            continue;
        }
        let first: Pair = (start.0, start.1 .0.clone());
        let mut cur = first.clone();
        let mut members = Vec::new();
        loop {
            let key = pair_key(&cur);
            if !keys.contains(&key) || !seen.insert(key) {
                return Err(Error::NotClosed(format!("pair ({}, {:?}) leaves the support or repeats", cur.0, cur.1)));
            }
            members.push(cur.clone());
            cur = step(g, &cur)
                .ok_or_else(|| Error::NotClosed(format!("pair ({}, {:?}) ends outside G", cur.0, cur.1)))?;
            if cur == first {
                break;
            }
        }
        orbits.push(Orbit { pairs: members, scale: None });
    }
    Ok(orbits)
}

/// `Σ_k [g_k, u_k]` in the free algebra.
pub fn commutator_sum(g: &[Letter], u: &[FreePoly]) -> FreePoly {
    let mut acc = FreePoly::zero();
    for (gk, uk) in g.iter().zip(u) {
        acc = &acc + &FreePoly::letter(*gk).commutator(uk);
    }
    acc
}

/// Primitive together with the orbits it was assembled from.
pub fn solve_primitive_with_orbits(g: &[Letter], u: &[FreePoly]) -> Result<(CycSum, Vec<Orbit>)> {
    if g.len() != u.len() {
        return Err(Error::Invalid(format!("{} generators but {} components", g.len(), u.len())));
    }
    let cs = commutator_sum(g, u);
    if !cs.is_zero() {
        return Err(Error::NotACocycle(format!("{} terms survive", cs.len())));
    }
    let v = validate(g, u);
    if let Some((k, w)) = v.witness {
        return Err(Error::NotSolvable(format!("support pair ({k}, {w:?}) breaks the cyclic structure")));
    }
    let mut orbits = cyclic_orbits(g, &pair_set(u))?;
    let mut f = CycSum::zero();
    for orbit in &mut orbits {
        let (k, w) = orbit.representative().clone();
        let mut word = vec![g[k]];
        word.extend_from_slice(&w);
        let cand = CycSum::word(&word, GaussScalar::from_int(1));
        let got = cand.derivative(g[k]).coeff(&w);
        let want = u[k].coeff(&w);
        let c = &want * &got.inv().ok_or_else(|| Error::NotSolvable("candidate has a vanishing derivative".into()))?;
        f = &f + &cand.scale(&c);
        orbit.scale = Some(c);
    }
    for (gk, uk) in g.iter().zip(u) {
        if &f.derivative(*gk) != uk {
            return Err(Error::NotSolvable("assembled primitive fails verification".into()));
        }
    }
    Ok((f, orbits))
}

pub fn solve_primitive(g: &[Letter], u: &[FreePoly]) -> Result<CycSum> {
    solve_primitive_with_orbits(g, u).map(|(f, _)| f)
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: Letter = 0;
    const B: Letter = 1;

    fn fp(terms: &[(&[Letter], i64)]) -> FreePoly {
        let mut p = FreePoly::zero();
        for (w, c) in terms {
            p.add_term(w.to_vec(), GaussScalar::from_int(*c));
        }
        p
    }

    fn example() -> Vec<FreePoly> {
        vec![fp(&[(&[B, A, B], 1), (&[B, B], 1)]), fp(&[(&[A, B, A], 1), (&[A, B], 1), (&[B, A], 1)])]
    }

    #[test]
    fn two_orbits_of_the_worked_example() {
        let u = example();
        assert!(validate(&[A, B], &u).ok);
        let orbits = cyclic_orbits(&[A, B], &pair_set(&u)).unwrap();
        let sets: Vec<Vec<Pair>> = orbits.iter().map(|o| o.pairs.clone()).collect();
        assert_eq!(
            sets,
            vec![vec![(0, vec![B, B]), (1, vec![A, B]), (1, vec![B, A])], vec![(0, vec![B, A, B]), (1, vec![A, B, A])]]
        );
        let f = solve_primitive(&[A, B], &u).unwrap();
        let mut want = CycSum::word(&[A, B, A, B], GaussScalar::ratio(1, 2));
        want.add_word(&[B, B, A], GaussScalar::from_int(1));
        assert_eq!(f, want);
    }

    #[test]
    fn small_cases() {
        let g = [A, B];
        assert!(validate(&g, &[FreePoly::zero(), FreePoly::zero()]).ok);
        assert!(solve_primitive(&g, &[FreePoly::zero(), FreePoly::zero()]).unwrap().is_zero());
        let v = validate(&g, &[fp(&[(&[2], 1)]), FreePoly::zero()]);
        assert_eq!(v, Validation { ok: false, witness: Some((0, vec![2])) });
        let f = solve_primitive(&g, &[fp(&[(&[B], 1)]), fp(&[(&[A], 1)])]).unwrap();
        assert_eq!(f, CycSum::word(&[A, B], GaussScalar::from_int(1)));
        let orbits = cyclic_orbits(&[A], &[(0, vec![A])]).unwrap();
        assert_eq!(orbits.len(), 1);
        assert_eq!(orbits[0].len(), 1);
        assert!(matches!(solve_primitive(&g, &[fp(&[(&[B], 1)]), FreePoly::zero()]), Err(Error::NotACocycle(_))));
    }
}
