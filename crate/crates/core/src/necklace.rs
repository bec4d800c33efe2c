//! Necklace calculus: cyclic words over letters or arrows, necklace derivatives,
//! the Poisson bracket on closed paths and the moment elements.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::quiver::{write_atoms, write_linear, Arrow, NCPoly, Path, QuiverSpec};
use crate::scalar::GaussScalar;

pub type Letter = u16;

/// Word over letters, ordered by length and then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LWord(pub Vec<Letter>);

impl Ord for LWord {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&o.0.len()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for LWord {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

/// Lexicographically least rotation.
pub fn min_rotation<T: Ord + Clone>(w: &[T]) -> Vec<T> {
    let n = w.len();
    if n <= 1 {
        return w.to_vec();
    }
    let mut best = 0;
    for k in 1..n {
        let better =
            (0..n).map(|i| &w[(k + i) % n]).cmp((0..n).map(|i| &w[(best + i) % n])) == std::cmp::Ordering::Less;
        if better {
            best = k;
        }
    }
    (0..n).map(|i| w[(best + i) % n].clone()).collect()
}

/// Ordered set of free letters, each optionally expanding to a cycle at vertex 1.
#[derive(Clone, Debug, PartialEq)]
pub struct Alphabet {
    names: Vec<String>,
    expansions: Vec<Option<NCPoly>>,
}

impl Alphabet {
    pub fn free<S: AsRef<str>>(names: &[S]) -> Alphabet {
        Alphabet { names: names.iter().map(|s| s.as_ref().to_string()).collect(), expansions: vec![None; names.len()] }
    }

    pub fn with_expansions(entries: Vec<(String, NCPoly)>) -> Alphabet {
        let (names, exps): (Vec<_>, Vec<_>) = entries.into_iter().map(|(n, e)| (n, Some(e))).unzip();
        Alphabet { names, expansions: exps }
    }

    /// Letters `a, b_ij = x_i y_j` generating the triangular necklaces.
    pub fn triangular(spec: &QuiverSpec) -> Alphabet {
        let mut entries = vec![("a".to_string(), NCPoly::arrow(Arrow::A))];
        for i in 1..=spec.n_x() {
            for j in 1..=spec.n_y() {
                entries.push((format!("b{i}{j}"), spec.x(i).mul(&spec.y(j))));
            }
        }
        Alphabet::with_expansions(entries)
    }

    /// Letters `a*, b*_ij = y_i* x_j* = d_{2i} b_{2j−1}`, so `i` runs over the `y`s and `j` over the `x`s.
    pub fn op_triangular(spec: &QuiverSpec) -> Alphabet {
        let mut entries = vec![("a*".to_string(), NCPoly::arrow(Arrow::AStar))];
        for i in 1..=spec.n_y() {
            for j in 1..=spec.n_x() {
                entries.push((format!("b{i}{j}*"), spec.y_star(i).mul(&spec.x_star(j))));
            }
        }
        Alphabet::with_expansions(entries)
    }

    /// Letters `E_αβ = d_α b_β`.
    pub fn cycles(spec: &QuiverSpec) -> Alphabet {
        let mut entries = Vec::new();
        for al in 1..=spec.r as u16 {
            for be in 1..=spec.r as u16 {
                entries.push((format!("E{al}{be}"), NCPoly::word(&[Arrow::D(al), Arrow::B(be)])));
            }
        }
        Alphabet::with_expansions(entries)
    }

    /// Letters `a, ℓ_k = x y_k = d_1 b_{k+1}` for the single-x orientation.
    pub fn single_x(spec: &QuiverSpec) -> Alphabet {
        let mut entries = vec![("a".to_string(), NCPoly::arrow(Arrow::A))];
        for k in 1..spec.r as u16 {
            entries.push((format!("l{k}"), NCPoly::word(&[Arrow::D(1), Arrow::B(k + 1)])));
        }
        Alphabet::with_expansions(entries)
    }

    /// Union of the triangular, op-triangular and cycle alphabets (names are distinct).
    pub fn combined(spec: &QuiverSpec) -> Alphabet {
        let mut a = Alphabet::triangular(spec);
        for other in [Alphabet::op_triangular(spec), Alphabet::cycles(spec)] {
            a.names.extend(other.names);
            a.expansions.extend(other.expansions);
        }
        a
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, l: Letter) -> &str {
        &self.names[l as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn lookup(&self, name: &str) -> Option<Letter> {
        self.names.iter().position(|n| n == name).map(|i| i as Letter)
    }

    pub fn letter(&self, name: &str) -> Result<Letter> {
        self.lookup(name).ok_or_else(|| Error::UnknownLetter(name.to_string()))
    }

    pub fn expansion(&self, l: Letter) -> Option<&NCPoly> {
        self.expansions.get(l as usize).and_then(|e| e.as_ref())
    }

    /// Index of `b_ij` inside [`Alphabet::triangular`].
    pub fn b_index(spec: &QuiverSpec, i: usize, j: usize) -> Letter {
        (1 + (i - 1) * spec.n_y() + (j - 1)) as Letter
    }

    /// Index of `b*_ij` inside [`Alphabet::op_triangular`].
    pub fn b_star_index(spec: &QuiverSpec, i: usize, j: usize) -> Letter {
        (1 + (i - 1) * spec.n_x() + (j - 1)) as Letter
    }

    fn expand_word(&self, w: &[Letter]) -> Result<NCPoly> {
        let mut acc = NCPoly::idem(1);
        for &l in w {
            let e = self
                .expansion(l)
                .ok_or_else(|| Error::UnknownLetter(format!("{} has no arrow expansion", self.name(l))))?;
            acc = acc.mul(e);
        }
        Ok(acc)
    }
}

/// Linear combination of letter words (an element of the free algebra).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct FreePoly {
    terms: BTreeMap<LWord, GaussScalar>,
}

impl FreePoly {
    pub fn zero() -> Self {
        FreePoly::default()
    }

    pub fn one() -> Self {
        FreePoly::word(vec![], GaussScalar::from_int(1))
    }

    pub fn letter(l: Letter) -> Self {
        FreePoly::word(vec![l], GaussScalar::from_int(1))
    }

    pub fn word(w: Vec<Letter>, c: GaussScalar) -> Self {
        let mut out = FreePoly::zero();
        out.add_term(w, c);
        out
    }

    pub fn add_term(&mut self, w: Vec<Letter>, c: GaussScalar) {
        if c.is_zero() {
            return;
        }
        let key = LWord(w);
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[Letter], &GaussScalar)> {
        self.terms.iter().map(|(w, c)| (w.0.as_slice(), c))
    }

    pub fn coeff(&self, w: &[Letter]) -> GaussScalar {
        self.terms.get(&LWord(w.to_vec())).cloned().unwrap_or_else(GaussScalar::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &GaussScalar) -> FreePoly {
        let mut out = FreePoly::zero();
        for (w, v) in &self.terms {
            out.add_term(w.0.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, o: &FreePoly) -> FreePoly {
        let mut out = FreePoly::zero();
        for (w, c) in &self.terms {
            for (u, d) in &o.terms {
                let mut ww = w.0.clone();
                ww.extend_from_slice(&u.0);
                out.add_term(ww, c * d);
            }
        }
        out
    }

    pub fn commutator(&self, o: &FreePoly) -> FreePoly {
        &self.mul(o) - &o.mul(self)
    }

    pub fn max_letter(&self) -> Option<Letter> {
        self.terms.keys().flat_map(|w| w.0.iter().copied()).max()
    }

    /// Arrow expansion through the alphabet; the empty word maps to `ε₁`.
    pub fn expand(&self, alph: &Alphabet) -> Result<NCPoly> {
        let mut out = NCPoly::zero();
        for (w, c) in &self.terms {
            out += &alph.expand_word(&w.0)?.scale(c);
        }
        Ok(out)
    }

    /// Replaces each letter `l` by `map[l]`.
    pub fn substitute(&self, map: &[FreePoly]) -> FreePoly {
        let mut out = FreePoly::zero();
        for (w, c) in &self.terms {
            let mut acc = FreePoly::one();
            for &l in &w.0 {
                acc = acc.mul(&map[l as usize]);
            }
            out = &out + &acc.scale(c);
        }
        out
    }

    pub fn display<'a>(&'a self, alph: &'a Alphabet) -> Named<'a, FreePoly> {
        Named(self, alph)
    }
}

impl std::ops::Add for &FreePoly {
    type Output = FreePoly;
    fn add(self, o: &FreePoly) -> FreePoly {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(w.0.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &FreePoly {
    type Output = FreePoly;
    fn sub(self, o: &FreePoly) -> FreePoly {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(w.0.clone(), -c);
        }
        out
    }
}

impl std::ops::Neg for &FreePoly {
    type Output = FreePoly;
    fn neg(self) -> FreePoly {
        self.scale(&GaussScalar::from_int(-1))
    }
}

/// Linear combination of necklaces over letters, each stored as its least rotation.
/// Length-zero words are dropped: scalars vanish in this quotient.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct CycSum {
    terms: BTreeMap<LWord, GaussScalar>,
}

impl CycSum {
    pub fn zero() -> Self {
        CycSum::default()
    }

    pub fn word(w: &[Letter], c: GaussScalar) -> Self {
        let mut out = CycSum::zero();
        out.add_word(w, c);
        out
    }

    pub fn add_word(&mut self, w: &[Letter], c: GaussScalar) {
        if w.is_empty() || c.is_zero() {
            return;
        }
        let key = LWord(min_rotation(w));
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    /// Necklace class of every word of a free polynomial.
    pub fn from_free(p: &FreePoly) -> CycSum {
        let mut out = CycSum::zero();
        for (w, c) in p.terms() {
            out.add_word(w, c.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[Letter], &GaussScalar)> {
        self.terms.iter().map(|(w, c)| (w.0.as_slice(), c))
    }

    pub fn coeff(&self, w: &[Letter]) -> GaussScalar {
        self.terms.get(&LWord(min_rotation(w))).cloned().unwrap_or_else(GaussScalar::zero)
    }

    pub fn scale(&self, c: &GaussScalar) -> CycSum {
        let mut out = CycSum::zero();
        for (w, v) in &self.terms {
            out.add_word(&w.0, v * c);
        }
        out
    }

    pub fn max_letter(&self) -> Option<Letter> {
        self.terms.keys().flat_map(|w| w.0.iter().copied()).max()
    }

    /// Renames letters through `map`.
    pub fn relabel(&self, map: impl Fn(Letter) -> Letter) -> CycSum {
        let mut out = CycSum::zero();
        for (w, c) in &self.terms {
            let nw: Vec<Letter> = w.0.iter().map(|&l| map(l)).collect();
            out.add_word(&nw, c.clone());
        }
        out
    }

    /// `∂f/∂g`: every occurrence of `g` contributes the word read cyclically from just after it.
    pub fn derivative(&self, g: Letter) -> FreePoly {
        let mut out = FreePoly::zero();
        for (w, c) in &self.terms {
            let n = w.0.len();
            for k in 0..n {
                if w.0[k] == g {
                    let rest: Vec<Letter> = (1..n).map(|i| w.0[(k + i) % n]).collect();
                    out.add_term(rest, c.clone());
                }
            }
        }
        out
    }

    /// Checked derivative: `g` must belong to `alph`.
    pub fn necklace_derivative(&self, alph: &Alphabet, g: Letter) -> Result<FreePoly> {
        if g as usize >= alph.len() {
            return Err(Error::UnknownLetter(format!("letter #{g}")));
        }
        Ok(self.derivative(g))
    }

    /// Arrow expansion of a representative of each necklace.
    pub fn expand(&self, alph: &Alphabet) -> Result<NCPoly> {
        let mut out = NCPoly::zero();
        for (w, c) in &self.terms {
            out += &alph.expand_word(&w.0)?.scale(c);
        }
        Ok(out)
    }

    pub fn display<'a>(&'a self, alph: &'a Alphabet) -> Named<'a, CycSum> {
        Named(self, alph)
    }
}

impl std::ops::Add for &CycSum {
    type Output = CycSum;
    fn add(self, o: &CycSum) -> CycSum {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_word(&w.0, c.clone());
        }
        out
    }
}

impl std::ops::Sub for &CycSum {
    type Output = CycSum;
    fn sub(self, o: &CycSum) -> CycSum {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_word(&w.0, -c);
        }
        out
    }
}

impl std::ops::Neg for &CycSum {
    type Output = CycSum;
    fn neg(self) -> CycSum {
        self.scale(&GaussScalar::from_int(-1))
    }
}

/// Printing adaptor pairing a letter-level value with its alphabet.
pub struct Named<'a, T>(pub &'a T, pub &'a Alphabet);

fn word_name(alph: &Alphabet, w: &[Letter]) -> String {
    let mut s = String::new();
    write_atoms(&mut s, w, |l| alph.name(l).to_string());
    s
}

impl fmt::Display for Named<'_, FreePoly> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_linear(f, self.0.terms.iter().map(|(w, c)| (word_name(self.1, &w.0), c)))
    }
}

impl fmt::Display for Named<'_, CycSum> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_linear(f, self.0.terms.iter().map(|(w, c)| (word_name(self.1, &w.0), c)))
    }
}

/// Least rotation of a closed path. Empty paths are their own class.
pub fn canonicalize(p: &Path) -> Result<Path> {
    if !p.is_closed() {
        return Err(Error::NotClosed(format!("path from {} to {}", p.src, p.tgt)));
    }
    if p.arrows.is_empty() {
        return Ok(p.clone());
    }
    let arrows = min_rotation(&p.arrows);
    Ok(Path::from_arrows(arrows).expect("rotation of a cycle is a cycle"))
}

/// Linear combination of necklaces of closed paths, including idempotent terms.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct NecklaceSum {
    terms: BTreeMap<Path, GaussScalar>,
}

impl NecklaceSum {
    pub fn zero() -> Self {
        NecklaceSum::default()
    }

    /// Necklace class of a polynomial whose terms are all closed paths.
    pub fn from_poly(p: &NCPoly) -> Result<NecklaceSum> {
        let mut out = NecklaceSum::zero();
        for (path, c) in p.terms() {
            out.add_path(path, c.clone())?;
        }
        Ok(out)
    }

    pub fn add_path(&mut self, p: &Path, c: GaussScalar) -> Result<()> {
        if c.is_zero() {
            return Ok(());
        }
        let key = canonicalize(p)?;
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Path, &GaussScalar)> {
        self.terms.iter()
    }

    /// Canonical representatives as a polynomial.
    pub fn to_poly(&self) -> NCPoly {
        let mut out = NCPoly::zero();
        for (p, c) in &self.terms {
            out.add_term(p.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &GaussScalar) -> NecklaceSum {
        NecklaceSum::from_poly(&self.to_poly().scale(c)).expect("closed paths stay closed")
    }

    /// `∂w/∂ξ` for an arrow: a path from `target(ξ)` to `source(ξ)`.
    pub fn derivative(&self, xi: Arrow) -> NCPoly {
        let mut out = NCPoly::zero();
        for (p, c) in &self.terms {
            let n = p.arrows.len();
            for k in 0..n {
                if p.arrows[k] == xi {
                    let rest: Vec<Arrow> = (1..n).map(|i| p.arrows[(k + i) % n]).collect();
                    let path = if rest.is_empty() { Path::idem(xi.source()) } else { Path::from_arrows(rest).unwrap() };
                    out.add_term(path, c.clone());
                }
            }
        }
        out
    }
}

impl std::ops::Add for &NecklaceSum {
    type Output = NecklaceSum;
    fn add(self, o: &NecklaceSum) -> NecklaceSum {
        let mut out = self.clone();
        for (p, c) in &o.terms {
            out.add_path(p, c.clone()).unwrap();
        }
        out
    }
}

impl std::ops::Sub for &NecklaceSum {
    type Output = NecklaceSum;
    fn sub(self, o: &NecklaceSum) -> NecklaceSum {
        let mut out = self.clone();
        for (p, c) in &o.terms {
            out.add_path(p, -c).unwrap();
        }
        out
    }
}

impl fmt::Display for NecklaceSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

/// `{w₁, w₂} = Σ_ξ (∂w₁/∂ξ · ∂w₂/∂ξ* − ∂w₁/∂ξ* · ∂w₂/∂ξ)` over the unstarred arrows of `spec`,
/// reduced to necklaces.
pub fn poisson_bracket(w1: &NecklaceSum, w2: &NecklaceSum, spec: &QuiverSpec) -> NecklaceSum {
    let mut acc = NCPoly::zero();
    for pair in spec.star_pairs() {
        let s = GaussScalar::from_int(pair.sign as i64);
        let d1u = w1.derivative(pair.arrow);
        let d1v = w1.derivative(pair.partner);
        let d2u = w2.derivative(pair.arrow);
        let d2v = w2.derivative(pair.partner);
        let term = &d1u.mul(&d2v) - &d1v.mul(&d2u);
        acc += &term.scale(&s);
    }
    NecklaceSum::from_poly(&acc).expect("bracket terms are closed")
}

/// Moment element `c = Σ [ξ, ξ*]` and its two vertex components.
pub fn moment_element(spec: &QuiverSpec) -> (NCPoly, NCPoly, NCPoly) {
    let mut c = NCPoly::zero();
    for pair in spec.star_pairs() {
        let xi = NCPoly::arrow(pair.arrow).scale(&GaussScalar::from_int(pair.sign as i64));
        c += &xi.commutator(&NCPoly::arrow(pair.partner));
    }
    let c1 = c.project_block(1, 1);
    let c2 = c.project_block(2, 2);
    (c, c1, c2)
}
