//! Path algebra of the two-vertex doubled quiver: loops `a, a*` at vertex 1,
//! arrows `d_1..d_r` from 2 to 1 and `b_1..b_r` from 1 to 2.
//!
//! Words are stored in function-composition order: the rightmost arrow is
//! traversed first, so `d_α b_β` is a cycle at vertex 1.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::GaussScalar;

/// Variant order gives the canonical arrow order `a < a* < d_1 < … < d_r < b_1 < … < b_r`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Arrow {
    A,
    AStar,
    D(u16),
    B(u16),
}

impl Arrow {
    pub fn source(self) -> u8 {
        match self {
            Arrow::A | Arrow::AStar | Arrow::B(_) => 1,
            Arrow::D(_) => 2,
        }
    }

    pub fn target(self) -> u8 {
        match self {
            Arrow::A | Arrow::AStar | Arrow::D(_) => 1,
            Arrow::B(_) => 2,
        }
    }

    /// Star partner: `a ↔ a*`, `d_α ↔ b_α`.
    pub fn partner(self) -> Arrow {
        match self {
            Arrow::A => Arrow::AStar,
            Arrow::AStar => Arrow::A,
            Arrow::D(k) => Arrow::B(k),
            Arrow::B(k) => Arrow::D(k),
        }
    }

    pub fn name(self) -> String {
        match self {
            Arrow::A => "a".into(),
            Arrow::AStar => "a*".into(),
            Arrow::D(k) => format!("d{k}"),
            Arrow::B(k) => format!("b{k}"),
        }
    }

    pub fn index(self) -> Option<usize> {
        match self {
            Arrow::D(k) | Arrow::B(k) => Some(k as usize),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// `x_i = −d_{2i−1}`, `x_i* = b_{2i−1}`, `y_j = b_{2j}`, `y_j* = d_{2j}`.
    #[default]
    Zigzag,
    /// `x = d_1`, `y_k = b_{k+1}`.
    SingleX,
    /// Every `d_α` unstarred with `d_α* = b_α`.
    AllD,
}

impl std::str::FromStr for Orientation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zigzag" => Ok(Orientation::Zigzag),
            "single_x" | "single-x" => Ok(Orientation::SingleX),
            "all_d" | "all-d" => Ok(Orientation::AllD),
            _ => Err(Error::Invalid(format!("unknown orientation {s}"))),
        }
    }
}

/// One unstarred arrow `ξ = sign · arrow` together with its partner `ξ* = partner`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct StarPair {
    pub arrow: Arrow,
    pub sign: i8,
    pub partner: Arrow,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct QuiverSpec {
    pub r: usize,
    pub orientation: Orientation,
}

impl QuiverSpec {
    pub fn new(r: usize, orientation: Orientation) -> Result<Self> {
        if r < 1 {
            return Err(Error::InvalidRank(r));
        }
        Ok(QuiverSpec { r, orientation })
    }

    pub fn zigzag(r: usize) -> Result<Self> {
        QuiverSpec::new(r, Orientation::Zigzag)
    }

    pub fn n_x(&self) -> usize {
        self.r.div_ceil(2)
    }

    pub fn n_y(&self) -> usize {
        self.r / 2
    }

    pub fn q(&self) -> usize {
        self.n_x() * self.n_y()
    }

    pub fn num_arrows(&self) -> usize {
        2 + 2 * self.r
    }

    pub fn arrows(&self) -> Vec<Arrow> {
        let r = self.r as u16;
        let mut v = vec![Arrow::A, Arrow::AStar];
        v.extend((1..=r).map(Arrow::D));
        v.extend((1..=r).map(Arrow::B));
        v
    }

    pub fn arrow_slot(&self, a: Arrow) -> usize {
        match a {
            Arrow::A => 0,
            Arrow::AStar => 1,
            Arrow::D(k) => 1 + k as usize,
            Arrow::B(k) => 1 + self.r + k as usize,
        }
    }

    pub fn contains(&self, a: Arrow) -> bool {
        match a.index() {
            Some(k) => (1..=self.r).contains(&k),
            None => true,
        }
    }

    /// Unstarred arrows for this orientation, each with sign and partner.
    pub fn star_pairs(&self) -> Vec<StarPair> {
        let mut out = vec![StarPair { arrow: Arrow::A, sign: 1, partner: Arrow::AStar }];
        for k in 1..=self.r as u16 {
            let pair = match self.orientation {
                Orientation::Zigzag if k % 2 == 1 => StarPair { arrow: Arrow::D(k), sign: -1, partner: Arrow::B(k) },
                Orientation::Zigzag => StarPair { arrow: Arrow::B(k), sign: 1, partner: Arrow::D(k) },
                Orientation::SingleX if k == 1 => StarPair { arrow: Arrow::D(1), sign: 1, partner: Arrow::B(1) },
                Orientation::SingleX => StarPair { arrow: Arrow::B(k), sign: 1, partner: Arrow::D(k) },
                Orientation::AllD => StarPair { arrow: Arrow::D(k), sign: 1, partner: Arrow::B(k) },
            };
            out.push(pair);
        }
        out
    }

    /// Named aliases of the unstarred arrows and their partners, each as `(name, sign, arrow)`.
    pub fn aliases(&self) -> Vec<(String, i8, Arrow)> {
        let mut out = Vec::new();
        match self.orientation {
            Orientation::Zigzag => {
                let short_x = self.n_x() == 1;
                let short_y = self.n_y() == 1;
                for i in 1..=self.n_x() {
                    let d = Arrow::D((2 * i - 1) as u16);
                    let b = Arrow::B((2 * i - 1) as u16);
                    out.push((format!("x{i}"), -1, d));
                    out.push((format!("x{i}*"), 1, b));
                    if short_x {
                        out.push(("x".into(), -1, d));
                        out.push(("x*".into(), 1, b));
                    }
                }
                for j in 1..=self.n_y() {
                    let b = Arrow::B((2 * j) as u16);
                    let d = Arrow::D((2 * j) as u16);
                    out.push((format!("y{j}"), 1, b));
                    out.push((format!("y{j}*"), 1, d));
                    if short_y {
                        out.push(("y".into(), 1, b));
                        out.push(("y*".into(), 1, d));
                    }
                }
            }
            Orientation::SingleX => {
                out.push(("x".into(), 1, Arrow::D(1)));
                out.push(("x*".into(), 1, Arrow::B(1)));
                for k in 1..self.r {
                    out.push((format!("y{k}"), 1, Arrow::B(k as u16 + 1)));
                    out.push((format!("y{k}*"), 1, Arrow::D(k as u16 + 1)));
                }
            }
            Orientation::AllD => {}
        }
        out
    }

    /// `x_i` as a polynomial (carries the sign `x_i = −d_{2i−1}`).
    pub fn x(&self, i: usize) -> NCPoly {
        -NCPoly::arrow(Arrow::D((2 * i - 1) as u16))
    }
    pub fn x_star(&self, i: usize) -> NCPoly {
        NCPoly::arrow(Arrow::B((2 * i - 1) as u16))
    }
    pub fn y(&self, j: usize) -> NCPoly {
        NCPoly::arrow(Arrow::B((2 * j) as u16))
    }
    pub fn y_star(&self, j: usize) -> NCPoly {
        NCPoly::arrow(Arrow::D((2 * j) as u16))
    }

    /// Identity assignment, indexed by `arrow_slot`.
    pub fn identity_images(&self) -> Vec<NCPoly> {
        self.arrows().into_iter().map(NCPoly::arrow).collect()
    }
}

/// A path `tgt ← src`. Arrows listed left to right in composition order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Path {
    pub tgt: u8,
    pub src: u8,
    pub arrows: Vec<Arrow>,
}

impl Path {
    pub fn idem(v: u8) -> Path {
        Path { tgt: v, src: v, arrows: Vec::new() }
    }

    pub fn arrow(a: Arrow) -> Path {
        Path { tgt: a.target(), src: a.source(), arrows: vec![a] }
    }

    /// Builds a path from arrows, checking composability.
    pub fn from_arrows(arrows: Vec<Arrow>) -> Option<Path> {
        let first = *arrows.first()?;
        let last = *arrows.last()?;
        for w in arrows.windows(2) {
            if w[0].source() != w[1].target() {
                return None;
            }
        }
        Some(Path { tgt: first.target(), src: last.source(), arrows })
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.tgt == self.src
    }

    pub fn concat(&self, o: &Path) -> Option<Path> {
        if self.src != o.tgt {
            return None;
        }
        let mut arrows = Vec::with_capacity(self.arrows.len() + o.arrows.len());
        arrows.extend_from_slice(&self.arrows);
        arrows.extend_from_slice(&o.arrows);
        Some(Path { tgt: self.tgt, src: o.src, arrows })
    }
}

impl Ord for Path {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.arrows
            .len()
            .cmp(&o.arrows.len())
            .then_with(|| self.arrows.cmp(&o.arrows))
            .then_with(|| self.tgt.cmp(&o.tgt))
            .then_with(|| self.src.cmp(&o.src))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

/// Finite linear combination of paths with Gaussian-rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct NCPoly {
    terms: BTreeMap<Path, GaussScalar>,
}

impl NCPoly {
    pub fn zero() -> Self {
        NCPoly::default()
    }

    pub fn term(c: GaussScalar, p: Path) -> Self {
        let mut out = NCPoly::zero();
        out.add_term(p, c);
        out
    }

    pub fn from_path(p: Path) -> Self {
        NCPoly::term(GaussScalar::one(), p)
    }

    pub fn arrow(a: Arrow) -> Self {
        NCPoly::from_path(Path::arrow(a))
    }

    pub fn idem(v: u8) -> Self {
        NCPoly::from_path(Path::idem(v))
    }

    /// `c · ε_v`.
    pub fn scalar(c: GaussScalar, v: u8) -> Self {
        NCPoly::term(c, Path::idem(v))
    }

    /// Monomial from arrows in composition order; zero if not composable.
    pub fn word(arrows: &[Arrow]) -> Self {
        match Path::from_arrows(arrows.to_vec()) {
            Some(p) => NCPoly::from_path(p),
            None => NCPoly::zero(),
        }
    }

    pub fn add_term(&mut self, p: Path, c: GaussScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&p) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&p);
                }
            }
            None => {
                self.terms.insert(p, c);
            }
        }
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

    pub fn terms(&self) -> impl Iterator<Item = (&Path, &GaussScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, p: &Path) -> GaussScalar {
        self.terms.get(p).cloned().unwrap_or_else(GaussScalar::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|p| p.len()).max()
    }

    pub fn scale(&self, c: &GaussScalar) -> NCPoly {
        if c.is_zero() {
            return NCPoly::zero();
        }
        NCPoly { terms: self.terms.iter().map(|(p, v)| (p.clone(), v * c)).collect() }
    }

    pub fn mul(&self, o: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (p, c) in &self.terms {
            for (q, d) in &o.terms {
                if let Some(pq) = p.concat(q) {
                    out.add_term(pq, c * d);
                }
            }
        }
        out
    }

    pub fn pow(&self, k: usize, vertex: u8) -> NCPoly {
        let mut acc = NCPoly::idem(vertex);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn commutator(&self, o: &NCPoly) -> NCPoly {
        &self.mul(o) - &o.mul(self)
    }

    /// Common `(target, source)` of every term, if the polynomial sits in one block.
    pub fn block(&self) -> Option<(u8, u8)> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let b = (first.tgt, first.src);
        if it.all(|p| (p.tgt, p.src) == b) {
            Some(b)
        } else {
            None
        }
    }

    pub fn in_block(&self, i: u8, j: u8) -> bool {
        self.terms.keys().all(|p| p.tgt == i && p.src == j)
    }

    /// Part of `self` spanned by paths from `j` to `i`.
    pub fn project_block(&self, i: u8, j: u8) -> NCPoly {
        NCPoly {
            terms: self
                .terms
                .iter()
                .filter(|(p, _)| p.tgt == i && p.src == j)
                .map(|(p, c)| (p.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn max_index(&self) -> usize {
        self.terms.keys().flat_map(|p| p.arrows.iter().filter_map(|a| a.index())).max().unwrap_or(0)
    }

    pub fn uses_arrow(&self, a: Arrow) -> bool {
        self.terms.keys().any(|p| p.arrows.contains(&a))
    }

    /// Keeps only the terms whose arrows all satisfy `keep`.
    pub fn filter_arrows(&self, keep: impl Fn(Arrow) -> bool) -> NCPoly {
        NCPoly {
            terms: self
                .terms
                .iter()
                .filter(|(p, _)| p.arrows.iter().all(|&a| keep(a)))
                .map(|(p, c)| (p.clone(), c.clone()))
                .collect(),
        }
    }

    /// Ring-morphism extension of `images` (indexed by `spec.arrow_slot`); idempotents are fixed.
    pub fn substitute(&self, spec: &QuiverSpec, images: &[NCPoly]) -> Result<NCPoly> {
        if images.len() != spec.num_arrows() {
            return Err(Error::SpecMismatch);
        }
        for (a, img) in spec.arrows().into_iter().zip(images) {
            if !img.in_block(a.target(), a.source()) {
                return Err(Error::BlockViolation(format!("image of {} leaves its block", a.name())));
            }
        }
        if self.max_index() > spec.r {
            return Err(Error::SpecMismatch);
        }
        Ok(self.substitute_unchecked(spec, images))
    }

    pub(crate) fn substitute_unchecked(&self, spec: &QuiverSpec, images: &[NCPoly]) -> NCPoly {
        let mut out = NCPoly::zero();
        for (p, c) in &self.terms {
            if p.arrows.is_empty() {
                out.add_term(p.clone(), c.clone());
                continue;
            }
            let mut acc = images[spec.arrow_slot(p.arrows[p.arrows.len() - 1])].clone();
            for &a in p.arrows.iter().rev().skip(1) {
                acc = images[spec.arrow_slot(a)].mul(&acc);
                if acc.is_zero() {
                    break;
                }
            }
            for (q, d) in acc.terms {
                out.add_term(q, &d * c);
            }
        }
        out
    }

    /// Writes `p ∈ A₁₂` as `Σ_β ρ_β d_β` with `ρ_β ∈ A₁`.
    pub fn decompose_left(&self, r: usize) -> Result<Vec<NCPoly>> {
        if !self.in_block(1, 2) {
            return Err(Error::BlockViolation("decompose_left expects paths from 2 to 1".into()));
        }
        let mut rho = vec![NCPoly::zero(); r];
        for (p, c) in &self.terms {
            let (&last, rest) = p.arrows.split_last().expect("A12 path has an arrow");
            let Arrow::D(k) = last else { unreachable!("first traversed arrow from vertex 2 is some d") };
            let k = k as usize;
            if k == 0 || k > r {
                return Err(Error::SpecMismatch);
            }
            let coeff_path = if rest.is_empty() { Path::idem(1) } else { Path::from_arrows(rest.to_vec()).unwrap() };
            rho[k - 1].add_term(coeff_path, c.clone());
        }
        Ok(rho)
    }

    /// Writes `p ∈ A₂₁` as `Σ_β b_β ρ_β` with `ρ_β ∈ A₁`.
    pub fn decompose_right(&self, r: usize) -> Result<Vec<NCPoly>> {
        if !self.in_block(2, 1) {
            return Err(Error::BlockViolation("decompose_right expects paths from 1 to 2".into()));
        }
        let mut rho = vec![NCPoly::zero(); r];
        for (p, c) in &self.terms {
            let (&first, rest) = p.arrows.split_first().expect("A21 path has an arrow");
            let Arrow::B(k) = first else { unreachable!("last traversed arrow into vertex 2 is some b") };
            let k = k as usize;
            if k == 0 || k > r {
                return Err(Error::SpecMismatch);
            }
            let coeff_path = if rest.is_empty() { Path::idem(1) } else { Path::from_arrows(rest.to_vec()).unwrap() };
            rho[k - 1].add_term(coeff_path, c.clone());
        }
        Ok(rho)
    }
}

impl std::ops::Add for &NCPoly {
    type Output = NCPoly;
    fn add(self, o: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        for (p, c) in &o.terms {
            out.add_term(p.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &NCPoly {
    type Output = NCPoly;
    fn sub(self, o: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        for (p, c) in &o.terms {
            out.add_term(p.clone(), -c);
        }
        out
    }
}

impl std::ops::Neg for NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        NCPoly { terms: self.terms.into_iter().map(|(p, c)| (p, -c)).collect() }
    }
}

impl std::ops::Neg for &NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        -self.clone()
    }
}

impl std::ops::AddAssign<&NCPoly> for NCPoly {
    fn add_assign(&mut self, o: &NCPoly) {
        for (p, c) in &o.terms {
            self.add_term(p.clone(), c.clone());
        }
    }
}

impl std::ops::SubAssign<&NCPoly> for NCPoly {
    fn sub_assign(&mut self, o: &NCPoly) {
        for (p, c) in &o.terms {
            self.add_term(p.clone(), -c);
        }
    }
}

/// Writes a monomial as space-separated atoms with runs folded into powers.
pub(crate) fn write_atoms<T: PartialEq + Copy>(out: &mut String, atoms: &[T], name: impl Fn(T) -> String) {
    let mut i = 0;
    let mut first = true;
    while i < atoms.len() {
        let mut j = i + 1;
        while j < atoms.len() && atoms[j] == atoms[i] {
            j += 1;
        }
        if !first {
            out.push(' ');
        }
        first = false;
        out.push_str(&name(atoms[i]));
        if j - i > 1 {
            out.push_str(&format!("^{}", j - i));
        }
        i = j;
    }
}

/// Shared printer for linear combinations: `c w + c' w' - …`.
pub(crate) fn write_linear<'a, I>(f: &mut fmt::Formatter<'_>, terms: I) -> fmt::Result
where
    I: Iterator<Item = (String, &'a GaussScalar)>,
{
    let mut first = true;
    for (word, c) in terms {
        let neg = c.is_negative_display();
        let mag = if neg { -c } else { c.clone() };
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, "{}", if neg { " - " } else { " + " })?;
        }
        first = false;
        if word.is_empty() {
            write!(f, "{mag}")?;
        } else if mag.is_one() {
            write!(f, "{word}")?;
        } else {
            write!(f, "{mag} {word}")?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_linear(
            f,
            self.terms.iter().map(|(p, c)| {
                let mut s = String::new();
                if p.arrows.is_empty() {
                    s.push_str(if p.tgt == 1 { "e1" } else { "e2" });
                } else {
                    write_atoms(&mut s, &p.arrows, |a| a.name());
                }
                (s, c)
            }),
        )
    }
}
