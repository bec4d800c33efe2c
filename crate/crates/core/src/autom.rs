//! Algebra endomorphisms of the path algebra given by arrow images, the tame
//! generator families and the crossed matrices `M`, `N`.
//!
//! Composition follows the right action on representations:
//! `p.compose(ψ, σ) = (p.ψ).σ`, which as maps of the algebra is `ξ ↦ ψ(σ(ξ))`.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::necklace::{moment_element, Alphabet, CycSum, Letter, NecklaceSum};
use crate::quiver::{Arrow, NCPoly, QuiverSpec};
use crate::scalar::{GaussScalar, SMat};

/// Endomorphism fixing the idempotents, stored as the image of every arrow.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Endo {
    spec: QuiverSpec,
    images: Vec<NCPoly>,
}

impl Endo {
    pub fn identity(spec: &QuiverSpec) -> Endo {
        Endo { spec: *spec, images: spec.identity_images() }
    }

    /// Checks that every image stays in the block of its arrow.
    pub fn from_images(spec: &QuiverSpec, images: Vec<NCPoly>) -> Result<Endo> {
        if images.len() != spec.num_arrows() {
            return Err(Error::SpecMismatch);
        }
        for (a, img) in spec.arrows().into_iter().zip(&images) {
            if !img.in_block(a.target(), a.source()) {
                return Err(Error::BlockViolation(format!("image of {} is {img}", a.name())));
            }
            if img.max_index() > spec.r {
                return Err(Error::SpecMismatch);
            }
        }
        Ok(Endo { spec: *spec, images })
    }

    pub fn spec(&self) -> &QuiverSpec {
        &self.spec
    }

    pub fn image(&self, a: Arrow) -> &NCPoly {
        &self.images[self.spec.arrow_slot(a)]
    }

    pub fn images(&self) -> &[NCPoly] {
        &self.images
    }

    fn set(&mut self, a: Arrow, p: NCPoly) {
        let k = self.spec.arrow_slot(a);
        self.images[k] = p;
    }

    /// `ψ(p)`.
    pub fn apply(&self, p: &NCPoly) -> NCPoly {
        p.substitute_unchecked(&self.spec, &self.images)
    }

    /// `ψ` followed by `σ` in the right action: `ξ ↦ ψ(σ(ξ))`.
    pub fn compose(&self, sigma: &Endo) -> Result<Endo> {
        if self.spec != sigma.spec {
            return Err(Error::SpecMismatch);
        }
        let images = sigma.images.iter().map(|img| self.apply(img)).collect();
        Ok(Endo { spec: self.spec, images })
    }

    pub fn is_identity(&self) -> bool {
        self.images == self.spec.identity_images()
    }

    /// `ψ(c) − c` for the moment element of the orientation.
    pub fn symplectic_residual(&self) -> NCPoly {
        let (c, _, _) = moment_element(&self.spec);
        &self.apply(&c) - &c
    }

    pub fn is_symplectic(&self) -> bool {
        self.symplectic_residual().is_zero()
    }

    /// Images of `a` and `a*` modulo the ideal generated by the `d`s and `b`s.
    pub fn project_q0(&self) -> (NCPoly, NCPoly) {
        let keep = |x: Arrow| matches!(x, Arrow::A | Arrow::AStar);
        (self.image(Arrow::A).filter_arrows(keep), self.image(Arrow::AStar).filter_arrows(keep))
    }

    pub fn is_reduced(&self) -> bool {
        let (pa, pas) = self.project_q0();
        pa == NCPoly::arrow(Arrow::A) && pas == NCPoly::arrow(Arrow::AStar)
    }

    /// `ψ(b_α) = Σ_β b_β N_βα`.
    pub fn crossed_n(&self) -> AMat {
        let r = self.spec.r;
        let mut n = AMat::zeros(r);
        for al in 1..=r {
            let rho = self.image(Arrow::B(al as u16)).decompose_right(r).expect("b image lies in A21");
            for (be, p) in rho.into_iter().enumerate() {
                n.set(be, al - 1, p);
            }
        }
        n
    }

    /// `ψ(d_α) = Σ_β M_αβ d_β`.
    pub fn crossed_m(&self) -> AMat {
        let r = self.spec.r;
        let mut m = AMat::zeros(r);
        for al in 1..=r {
            let rho = self.image(Arrow::D(al as u16)).decompose_left(r).expect("d image lies in A12");
            for (be, p) in rho.into_iter().enumerate() {
                m.set(al - 1, be, p);
            }
        }
        m
    }

    /// Triangular map read off an arrow-level necklace: `ξ* ↦ ξ* + ∂F/∂ξ` for every
    /// unstarred `ξ`, all unstarred arrows fixed. Works for any orientation.
    pub fn triangular_from_necklace(spec: &QuiverSpec, f: &NecklaceSum) -> Result<Endo> {
        let mut e = Endo::identity(spec);
        for pair in spec.star_pairs() {
            if pair.arrow == Arrow::A || pair.arrow == Arrow::AStar || spec.contains(pair.arrow) {
                let shift = f.derivative(pair.arrow).scale(&GaussScalar::from_int(pair.sign as i64));
                let img = e.image(pair.partner) + &shift;
                e.set(pair.partner, img);
            }
        }
        Endo::from_images(spec, e.images)
    }
}

impl fmt::Display for Endo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, img) in self.spec.arrows().into_iter().zip(&self.images) {
            writeln!(f, "{} -> {}", a.name(), img)?;
        }
        Ok(())
    }
}

/// Square matrix over the path algebra (entries in `A₁` for crossed matrices).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AMat {
    pub n: usize,
    entries: Vec<NCPoly>,
}

impl AMat {
    pub fn zeros(n: usize) -> AMat {
        AMat { n, entries: vec![NCPoly::zero(); n * n] }
    }

    pub fn identity(n: usize) -> AMat {
        let mut m = AMat::zeros(n);
        for i in 0..n {
            m.set(i, i, NCPoly::idem(1));
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &NCPoly {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: NCPoly) {
        self.entries[i * self.n + j] = p;
    }

    pub fn mul(&self, o: &AMat) -> AMat {
        let n = self.n;
        let mut out = AMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = NCPoly::zero();
                for k in 0..n {
                    acc += &self.get(i, k).mul(o.get(k, j));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// Entrywise `ψ(·)`.
    pub fn map(&self, psi: &Endo) -> AMat {
        AMat { n: self.n, entries: self.entries.iter().map(|p| psi.apply(p)).collect() }
    }

    /// Embeds a scalar matrix as multiples of `ε₁`.
    pub fn from_scalar(t: &SMat) -> AMat {
        let mut m = AMat::zeros(t.rows);
        for i in 0..t.rows {
            for j in 0..t.cols {
                m.set(i, j, NCPoly::scalar(t.get(i, j).clone(), 1));
            }
        }
        m
    }

    pub fn is_identity(&self) -> bool {
        *self == AMat::identity(self.n)
    }
}

impl fmt::Display for AMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join("; "))?;
        }
        Ok(())
    }
}

/// Tagged generator with a closed-form expansion.
#[allow(clippy::large_enum_variant)]
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Generator {
    /// `Λ(f)`, `f` over [`Alphabet::triangular`].
    Triangular(CycSum),
    /// `Λ′(f)`, `f` over [`Alphabet::op_triangular`].
    OpTriangular(CycSum),
    /// `a ↦ A₁₁a + A₁₂a* + B₁`, `a* ↦ A₂₁a + A₂₂a* + B₂`, with `det A = 1`.
    AffineSL2 { a: [[GaussScalar; 2]; 2], b: [GaussScalar; 2] },
    /// `b_α ↦ Σ_β b_β T_βα`, `d_α ↦ Σ_β (T⁻¹)_αβ d_β`.
    AffineGL(SMat),
    /// Swaps the `x` and `y` families (even rank only).
    FourierR,
    /// `(a, a*) ↦ (−a*, a)`.
    FourierZero,
    /// Acts as the rank-2 Fourier map on `a, x₁, y₁` and their partners, fixing the rest.
    Phi,
}

fn sl2_matrix(a: [[i64; 2]; 2]) -> [[GaussScalar; 2]; 2] {
    [[a[0][0].into(), a[0][1].into()], [a[1][0].into(), a[1][1].into()]]
}

impl Generator {
    pub fn kind(&self) -> &'static str {
        match self {
            Generator::Triangular(_) => "triangular",
            Generator::OpTriangular(_) => "op_triangular",
            Generator::AffineSL2 { .. } => "affine_sl2",
            Generator::AffineGL(_) => "affine_gl",
            Generator::FourierR => "fourier_r",
            Generator::FourierZero => "fourier_zero",
            Generator::Phi => "phi",
        }
    }

    /// The `x ↔ y` block swap used by the Fourier maps on indices `2i−1, 2i`.
    fn swap_block(spec: &QuiverSpec, pairs: usize) -> SMat {
        let mut t = SMat::identity(spec.r);
        for i in 0..pairs {
            let (p, q) = (2 * i, 2 * i + 1);
            t.set(p, p, GaussScalar::zero());
            t.set(q, q, GaussScalar::zero());
            t.set(q, p, GaussScalar::one());
            t.set(p, q, GaussScalar::from_int(-1));
        }
        t
    }

    pub fn build(&self, spec: &QuiverSpec) -> Result<Endo> {
        match self {
            Generator::Triangular(f) => build_triangular(spec, f),
            Generator::OpTriangular(f) => build_op_triangular(spec, f),
            Generator::AffineSL2 { a, b } => {
                let det = &(&a[0][0] * &a[1][1]) - &(&a[0][1] * &a[1][0]);
                if !det.is_one() {
                    return Err(Error::NotInvertible(format!("SL2 part has determinant {det}")));
                }
                let mut e = Endo::identity(spec);
                let (x, xs, one) = (NCPoly::arrow(Arrow::A), NCPoly::arrow(Arrow::AStar), NCPoly::idem(1));
                let row = |i: usize| &(&x.scale(&a[i][0]) + &xs.scale(&a[i][1])) + &one.scale(&b[i]);
                e.set(Arrow::A, row(0));
                e.set(Arrow::AStar, row(1));
                Ok(e)
            }
            Generator::AffineGL(t) => build_affine_gl(spec, t),
            Generator::FourierR => {
                if !spec.r.is_multiple_of(2) {
                    return Err(Error::OddRank(spec.r));
                }
                let f0 = Generator::FourierZero.build(spec)?;
                let gl = build_affine_gl(spec, &Generator::swap_block(spec, spec.r / 2))?;
                f0.compose(&gl)
            }
            Generator::FourierZero => {
                let mut e = Endo::identity(spec);
                e.set(Arrow::A, -NCPoly::arrow(Arrow::AStar));
                e.set(Arrow::AStar, NCPoly::arrow(Arrow::A));
                Ok(e)
            }
            Generator::Phi => {
                if spec.r < 2 {
                    return Err(Error::RankMismatch { expected: 2, got: spec.r });
                }
                let f0 = Generator::FourierZero.build(spec)?;
                let gl = build_affine_gl(spec, &Generator::swap_block(spec, 1))?;
                f0.compose(&gl)
            }
        }
    }

    /// Closed-form inverse as a short word.
    pub fn inverse(&self, spec: &QuiverSpec) -> Result<Vec<Generator>> {
        let f0_inv =
            Generator::AffineSL2 { a: sl2_matrix([[0, 1], [-1, 0]]), b: [GaussScalar::zero(), GaussScalar::zero()] };
        Ok(match self {
            Generator::Triangular(f) => vec![Generator::Triangular(-f)],
            Generator::OpTriangular(f) => vec![Generator::OpTriangular(-f)],
            Generator::AffineSL2 { a, b } => {
                // inverse of x ↦ Ax + B is x ↦ A⁻¹x − A⁻¹B, and A⁻¹ = adj(A) when det A = 1
                let inv = [[a[1][1].clone(), -&a[0][1]], [-&a[1][0], a[0][0].clone()]];
                let nb = [
                    -&(&(&inv[0][0] * &b[0]) + &(&inv[0][1] * &b[1])),
                    -&(&(&inv[1][0] * &b[0]) + &(&inv[1][1] * &b[1])),
                ];
                vec![Generator::AffineSL2 { a: inv, b: nb }]
            }
            Generator::AffineGL(t) => {
                let inv = t.inverse().ok_or_else(|| Error::NotInvertible("affine GL matrix".into()))?;
                vec![Generator::AffineGL(inv)]
            }
            Generator::FourierZero => vec![f0_inv],
            Generator::FourierR => {
                if !spec.r.is_multiple_of(2) {
                    return Err(Error::OddRank(spec.r));
                }
                let t = Generator::swap_block(spec, spec.r / 2).inverse().expect("permutation-like");
                vec![f0_inv, Generator::AffineGL(t)]
            }
            Generator::Phi => {
                let t = Generator::swap_block(spec, 1).inverse().expect("permutation-like");
                vec![f0_inv, Generator::AffineGL(t)]
            }
        })
    }

    /// Image under the projection to the one-vertex quiver, as a generator acting on `a, a*` only.
    pub fn q0_part(&self, spec: &QuiverSpec) -> Option<Generator> {
        match self {
            Generator::Triangular(f) => {
                let g = keep_pure(f, 0);
                (!g.is_zero()).then_some(Generator::Triangular(g))
            }
            Generator::OpTriangular(f) => {
                let g = keep_pure(f, 0);
                (!g.is_zero()).then_some(Generator::OpTriangular(g))
            }
            Generator::AffineSL2 { .. } => Some(self.clone()),
            Generator::AffineGL(_) => None,
            Generator::FourierR | Generator::FourierZero | Generator::Phi => {
                let _ = spec;
                Some(Generator::FourierZero)
            }
        }
    }
}

fn keep_pure(f: &CycSum, letter: Letter) -> CycSum {
    let mut out = CycSum::zero();
    for (w, c) in f.terms() {
        if w.iter().all(|&l| l == letter) {
            out.add_word(w, c.clone());
        }
    }
    out
}

fn check_alphabet(f: &CycSum, alph: &Alphabet) -> Result<()> {
    if let Some(m) = f.max_letter() {
        if m as usize >= alph.len() {
            return Err(Error::UnknownLetter(format!("letter #{m} outside an alphabet of {} letters", alph.len())));
        }
    }
    Ok(())
}

fn build_triangular(spec: &QuiverSpec, f: &CycSum) -> Result<Endo> {
    let alph = Alphabet::triangular(spec);
    check_alphabet(f, &alph)?;
    let mut e = Endo::identity(spec);
    let da = f.derivative(0).expand(&alph)?;
    e.set(Arrow::AStar, e.image(Arrow::AStar) + &da);
    for i in 1..=spec.n_x() {
        let mut img = spec.x_star(i);
        for j in 1..=spec.n_y() {
            let u = f.derivative(Alphabet::b_index(spec, i, j)).expand(&alph)?;
            img += &spec.y(j).mul(&u);
        }
        e.set(Arrow::B((2 * i - 1) as u16), img);
    }
    for j in 1..=spec.n_y() {
        let mut img = spec.y_star(j);
        for i in 1..=spec.n_x() {
            let u = f.derivative(Alphabet::b_index(spec, i, j)).expand(&alph)?;
            img += &u.mul(&spec.x(i));
        }
        e.set(Arrow::D((2 * j) as u16), img);
    }
    Ok(e)
}

fn build_op_triangular(spec: &QuiverSpec, f: &CycSum) -> Result<Endo> {
    let alph = Alphabet::op_triangular(spec);
    check_alphabet(f, &alph)?;
    let mut e = Endo::identity(spec);
    let da = f.derivative(0).expand(&alph)?;
    e.set(Arrow::A, e.image(Arrow::A) + &da);
    for j in 1..=spec.n_x() {
        let mut xj = spec.x(j);
        for i in 1..=spec.n_y() {
            let v = f.derivative(Alphabet::b_star_index(spec, i, j)).expand(&alph)?;
            xj += &v.mul(&spec.y_star(i));
        }
        // x_j = −d_{2j−1}
        e.set(Arrow::D((2 * j - 1) as u16), -xj);
    }
    for i in 1..=spec.n_y() {
        let mut img = spec.y(i);
        for j in 1..=spec.n_x() {
            let v = f.derivative(Alphabet::b_star_index(spec, i, j)).expand(&alph)?;
            img += &spec.x_star(j).mul(&v);
        }
        e.set(Arrow::B((2 * i) as u16), img);
    }
    Ok(e)
}

fn build_affine_gl(spec: &QuiverSpec, t: &SMat) -> Result<Endo> {
    let r = spec.r;
    if t.rows != r || t.cols != r {
        return Err(Error::RankMismatch { expected: r, got: t.rows });
    }
    let tinv = t.inverse().ok_or_else(|| Error::NotInvertible("affine GL matrix is singular".into()))?;
    let mut e = Endo::identity(spec);
    for al in 1..=r {
        let mut bimg = NCPoly::zero();
        let mut dimg = NCPoly::zero();
        for be in 1..=r {
            bimg += &NCPoly::arrow(Arrow::B(be as u16)).scale(t.get(be - 1, al - 1));
            dimg += &NCPoly::arrow(Arrow::D(be as u16)).scale(tinv.get(al - 1, be - 1));
        }
        e.set(Arrow::B(al as u16), bimg);
        e.set(Arrow::D(al as u16), dimg);
    }
    Ok(e)
}

/// `o(Λ(f)) = Λ′(f̃)` with `f̃ = −f(a ↦ a*, b_ij ↦ b*_ij)`.
///
/// At odd rank `b*_ij` needs `i ≤ ⌊r/2⌋`, so letters `b_ij` with `i = ⌈r/2⌉` have no image.
pub fn o_map(spec: &QuiverSpec, f: &CycSum) -> Result<Generator> {
    check_alphabet(f, &Alphabet::triangular(spec))?;
    let mut map = vec![0 as Letter];
    for i in 1..=spec.n_x() {
        for j in 1..=spec.n_y() {
            map.push(if i <= spec.n_y() { Alphabet::b_star_index(spec, i, j) } else { Letter::MAX });
        }
    }
    if f.terms().any(|(w, _)| w.iter().any(|&l| map[l as usize] == Letter::MAX)) {
        return Err(Error::UnknownLetter(format!("b{}j has no starred partner at rank {}", spec.n_x(), spec.r)));
    }
    Ok(Generator::OpTriangular(-&f.relabel(|l| map[l as usize])))
}

/// Finite sequence of generators applied left to right.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct GeneratorWord {
    pub gens: Vec<Generator>,
}

impl GeneratorWord {
    pub fn new(gens: Vec<Generator>) -> Self {
        GeneratorWord { gens }
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn push(&mut self, g: Generator) {
        self.gens.push(g);
    }

    pub fn extend(&mut self, w: GeneratorWord) {
        self.gens.extend(w.gens);
    }

    pub fn expand(&self, spec: &QuiverSpec) -> Result<Endo> {
        let mut acc = Endo::identity(spec);
        for g in &self.gens {
            acc = acc.compose(&g.build(spec)?)?;
        }
        Ok(acc)
    }

    pub fn invert(&self, spec: &QuiverSpec) -> Result<GeneratorWord> {
        let mut out = Vec::new();
        for g in self.gens.iter().rev() {
            out.extend(g.inverse(spec)?);
        }
        Ok(GeneratorWord { gens: out })
    }

    /// Symplecticity checked generator by generator (the group property closes it).
    pub fn generators_symplectic(&self, spec: &QuiverSpec) -> Result<bool> {
        for g in &self.gens {
            if !g.build(spec)?.is_symplectic() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Splits the word as `κ` followed by `ι(π(ψ))`: the second word acts on `a, a*` only
    /// and the expansion of `κ` is reduced.
    pub fn semidirect_split(&self, spec: &QuiverSpec) -> Result<(GeneratorWord, GeneratorWord)> {
        let iota = GeneratorWord { gens: self.gens.iter().filter_map(|g| g.q0_part(spec)).collect() };
        let mut kappa = self.clone();
        kappa.extend(iota.invert(spec)?);
        Ok((kappa, iota))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::Arrow::*;

    fn g(n: i64) -> GaussScalar {
        GaussScalar::from_int(n)
    }
    fn ar(a: Arrow) -> NCPoly {
        NCPoly::arrow(a)
    }

    /// `Λ(a² b₂₁)` on rank 3, with the images expected from the triangular formulas.
    #[test]
    fn lambda_a2_b21_images() {
        let spec = QuiverSpec::zigzag(3).unwrap();
        let b21 = Alphabet::b_index(&spec, 2, 1);
        let f = CycSum::word(&[0, 0, b21], g(1));
        let e = Generator::Triangular(f).build(&spec).unwrap();
        let (a, x2, y) = (ar(A), spec.x(2), spec.y(1));
        assert_eq!(e.image(A), &a);
        let astar = &(&ar(AStar) + &a.mul(&x2).mul(&y)) + &x2.mul(&y).mul(&a);
        assert_eq!(e.image(AStar), &astar);
        assert_eq!(e.image(B(3)), &(&spec.x_star(2) + &y.mul(&a).mul(&a)));
        assert_eq!(e.image(D(2)), &(&spec.y_star(1) + &a.mul(&a).mul(&x2)));
        for fixed in [D(1), D(3), B(1), B(2)] {
            assert_eq!(e.image(fixed), &ar(fixed));
        }
        assert!(e.is_symplectic());
        assert!(Generator::Triangular(CycSum::zero()).build(&spec).unwrap().is_identity());
    }

    #[test]
    fn fourier_zero_has_order_four() {
        let spec = QuiverSpec::zigzag(2).unwrap();
        let f0 = Generator::FourierZero.build(&spec).unwrap();
        let f4 = f0.compose(&f0).unwrap().compose(&f0).unwrap().compose(&f0).unwrap();
        assert!(f4.is_identity());
        assert!(!f0.compose(&f0).unwrap().is_identity());
    }

    #[test]
    fn symplectic_checks() {
        let spec = QuiverSpec::zigzag(2).unwrap();
        let mut images = spec.identity_images();
        images[0] = ar(A).scale(&g(2));
        assert!(!Endo::from_images(&spec, images).unwrap().is_symplectic());
        let bad = Generator::AffineSL2 { a: sl2_matrix([[2, 0], [0, 1]]), b: [g(0), g(0)] };
        assert!(matches!(bad.build(&spec), Err(Error::NotInvertible(_))));
        let good = Generator::AffineSL2 { a: sl2_matrix([[2, 1], [1, 1]]), b: [g(3), g(-1)] };
        assert!(good.build(&spec).unwrap().is_symplectic());
        assert!(matches!(Generator::FourierR.build(&QuiverSpec::zigzag(3).unwrap()), Err(Error::OddRank(3))));
    }

    #[test]
    fn reducedness_and_projection() {
        let spec = QuiverSpec::zigzag(2).unwrap();
        let b11 = Alphabet::b_index(&spec, 1, 1);
        let pb = CycSum::word(&[0, 0, b11], g(3));
        let e = Generator::Triangular(pb).build(&spec).unwrap();
        assert!(e.is_reduced());
        assert_eq!(e.project_q0(), (ar(A), ar(AStar)));
        let a2 = Generator::Triangular(CycSum::word(&[0, 0], g(1))).build(&spec).unwrap();
        assert!(!a2.is_reduced());
        assert_eq!(a2.project_q0(), (ar(A), &ar(AStar) + &ar(A).scale(&g(2))));
        let f0 = Generator::FourierZero.build(&spec).unwrap();
        assert_eq!(f0.project_q0(), (-ar(AStar), ar(A)));
        let t = SMat::from_ints(&[&[1, 2], &[0, 1]]);
        assert!(Generator::AffineGL(t).build(&spec).unwrap().is_reduced());
    }

    #[test]
    fn affine_gl_crossed_matrices() {
        let spec = QuiverSpec::zigzag(3).unwrap();
        let t = SMat::from_ints(&[&[1, 2, 0], &[0, 1, 0], &[3, 0, 1]]);
        let e = Generator::AffineGL(t.clone()).build(&spec).unwrap();
        assert_eq!(e.crossed_n(), AMat::from_scalar(&t));
        assert_eq!(e.crossed_m(), AMat::from_scalar(&t.inverse().unwrap()));
        assert!(e.is_symplectic());
        assert!(Endo::identity(&spec).crossed_n().is_identity());
    }

    #[test]
    fn inverses_cancel() {
        let spec = QuiverSpec::zigzag(4).unwrap();
        let b12 = Alphabet::b_index(&spec, 1, 2);
        let word = GeneratorWord::new(vec![
            Generator::Triangular(CycSum::word(&[0, b12], g(2))),
            Generator::FourierR,
            Generator::AffineSL2 { a: sl2_matrix([[1, 1], [0, 1]]), b: [g(1), g(2)] },
            Generator::Phi,
            Generator::OpTriangular(CycSum::word(&[0, 0], GaussScalar::ratio(1, 3))),
        ]);
        let e = word.expand(&spec).unwrap();
        let inv = word.invert(&spec).unwrap().expand(&spec).unwrap();
        assert!(e.compose(&inv).unwrap().is_identity());
        assert!(inv.compose(&e).unwrap().is_identity());
    }
}
