//! Matrices over a univariate polynomial ring, their factorization into
//! transvections and a constant matrix, and the embedding into automorphism words.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::autom::{AMat, Generator, GeneratorWord};
use crate::error::{Error, Result};
use crate::necklace::{Alphabet, CycSum};
use crate::quiver::{Arrow, NCPoly, QuiverSpec};
use crate::scalar::{GaussScalar, SMat};

/// The loop a polynomial is written in.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
pub enum Var {
    #[default]
    #[serde(rename = "a")]
    A,
    #[serde(rename = "a*")]
    AStar,
}

impl Var {
    pub fn arrow(self) -> Arrow {
        match self {
            Var::A => Arrow::A,
            Var::AStar => Arrow::AStar,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::A => "a",
            Var::AStar => "a*",
        }
    }
}

/// Dense polynomial; `coeffs[k]` multiplies `var^k`, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct UniPoly {
    coeffs: Vec<GaussScalar>,
    pub var: Var,
}

impl UniPoly {
    pub fn zero(var: Var) -> Self {
        UniPoly { coeffs: Vec::new(), var }
    }

    pub fn constant(c: GaussScalar, var: Var) -> Self {
        UniPoly::new(vec![c], var)
    }

    pub fn one(var: Var) -> Self {
        UniPoly::constant(GaussScalar::one(), var)
    }

    pub fn new(mut coeffs: Vec<GaussScalar>, var: Var) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs, var }
    }

    pub fn from_ints(c: &[i64], var: Var) -> Self {
        UniPoly::new(c.iter().map(|&x| GaussScalar::from_int(x)).collect(), var)
    }

    pub fn coeffs(&self) -> &[GaussScalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn coeff(&self, k: usize) -> GaussScalar {
        self.coeffs.get(k).cloned().unwrap_or_else(GaussScalar::zero)
    }

    pub fn scale(&self, c: &GaussScalar) -> Self {
        UniPoly::new(self.coeffs.iter().map(|x| x * c).collect(), self.var)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new((0..n).map(|k| &self.coeff(k) + &o.coeff(k)).collect(), self.var)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&GaussScalar::from_int(-1))
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero(self.var);
        }
        let mut out = vec![GaussScalar::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            for (j, y) in o.coeffs.iter().enumerate() {
                out[i + j] += &(x * y);
            }
        }
        UniPoly::new(out, self.var)
    }

    /// Euclidean division; `None` when dividing by zero.
    pub fn div_rem(&self, d: &Self) -> Option<(Self, Self)> {
        let dd = d.degree()?;
        let lead_inv = d.coeffs[dd].inv()?;
        let mut rem = self.coeffs.clone();
        let mut q = vec![GaussScalar::zero(); rem.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1;
            let c = &rem[k] * &lead_inv;
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k - dd + j] -= &(&c * dc);
            }
            q[k - dd] = c;
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        Some((UniPoly::new(q, self.var), UniPoly::new(rem, self.var)))
    }

    pub fn eval(&self, x: &GaussScalar) -> GaussScalar {
        self.coeffs.iter().rev().fold(GaussScalar::zero(), |acc, c| &(&acc * x) + c)
    }

    /// Embeds as a cycle at vertex 1 in the loop `var`.
    pub fn to_ncpoly(&self) -> NCPoly {
        let mut out = NCPoly::zero();
        let x = NCPoly::arrow(self.var.arrow());
        let mut pw = NCPoly::idem(1);
        for c in &self.coeffs {
            out += &pw.scale(c);
            pw = pw.mul(&x);
        }
        out
    }

    /// Inverse of [`UniPoly::to_ncpoly`]; `None` if `p` involves anything but the loop `var`.
    pub fn from_ncpoly(p: &NCPoly, var: Var) -> Option<UniPoly> {
        let mut coeffs = Vec::new();
        for (path, c) in p.terms() {
            if path.tgt != 1 || path.arrows.iter().any(|&x| x != var.arrow()) {
                return None;
            }
            let k = path.arrows.len();
            if coeffs.len() <= k {
                coeffs.resize(k + 1, GaussScalar::zero());
            }
            coeffs[k] = c.clone();
        }
        Some(UniPoly::new(coeffs, var))
    }

    /// `p(var)·b11` (or `p(a*)·b*11`) as a necklace over the matching triangular alphabet.
    pub fn times_b11(&self, spec: &QuiverSpec) -> CycSum {
        let b11 = match self.var {
            Var::A => Alphabet::b_index(spec, 1, 1),
            Var::AStar => Alphabet::b_star_index(spec, 1, 1),
        };
        let mut f = CycSum::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            let mut w = vec![0; k];
            w.push(b11);
            f.add_word(&w, c.clone());
        }
        f
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.var.name();
        crate::quiver::write_linear(
            f,
            self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| {
                let w = match k {
                    0 => String::new(),
                    1 => v.to_string(),
                    _ => format!("{v}^{k}"),
                };
                (w, c)
            }),
        )
    }
}

/// Square matrix of [`UniPoly`] entries, all in one variable.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMat {
    pub n: usize,
    pub var: Var,
    entries: Vec<UniPoly>,
}

/// One factor of a [`pm_factor`] decomposition.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ElemFactor {
    /// `I + p·e_{αβ}`, 1-based, `α ≠ β`.
    Transvection(usize, usize, UniPoly),
    ScalarMat(SMat),
}

impl PolyMat {
    pub fn zeros(n: usize, var: Var) -> Self {
        PolyMat { n, var, entries: vec![UniPoly::zero(var); n * n] }
    }

    pub fn identity(n: usize, var: Var) -> Self {
        let mut m = PolyMat::zeros(n, var);
        for i in 0..n {
            m.set(i, i, UniPoly::one(var));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<UniPoly>>, var: Var) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("polynomial matrix must be square".into()));
        }
        let entries = rows.into_iter().flatten().map(|p| UniPoly { var, ..p }).collect();
        Ok(PolyMat { n, var, entries })
    }

    pub fn from_scalar(t: &SMat, var: Var) -> Self {
        let mut m = PolyMat::zeros(t.rows, var);
        for i in 0..t.rows {
            for j in 0..t.cols {
                m.set(i, j, UniPoly::constant(t.get(i, j).clone(), var));
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &UniPoly {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: UniPoly) {
        self.entries[i * self.n + j] = p;
    }

    pub fn rows(&self) -> Vec<Vec<UniPoly>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j).clone()).collect()).collect()
    }

    pub fn mul(&self, o: &PolyMat) -> PolyMat {
        let n = self.n;
        let mut out = PolyMat::zeros(n, self.var);
        for i in 0..n {
            for j in 0..n {
                let mut acc = UniPoly::zero(self.var);
                for k in 0..n {
                    acc = acc.add(&self.get(i, k).mul(o.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        *self == PolyMat::identity(self.n, self.var)
    }

    /// Determinant by cofactor-free fraction-free elimination over the polynomial ring (Bareiss).
    pub fn det(&self) -> UniPoly {
        let n = self.n;
        if n == 0 {
            return UniPoly::one(self.var);
        }
        let mut m = self.rows();
        let mut sign = GaussScalar::one();
        let mut prev = UniPoly::one(self.var);
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(i, k);
                        sign = -&sign;
                    }
                    None => return UniPoly::zero(self.var),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                    m[i][j] = num.div_rem(&prev).expect("Bareiss pivot is nonzero").0;
                }
            }
            prev = m[k][k].clone();
        }
        m[n - 1][n - 1].scale(&sign)
    }

    /// Nonzero constant determinant, else `NotUnit`.
    fn unit_det(&self) -> Result<GaussScalar> {
        let d = self.det();
        if d.is_zero() || !d.is_constant() {
            return Err(Error::NotUnit(format!("determinant {d}")));
        }
        Ok(d.coeff(0))
    }

    pub fn inverse(&self) -> Result<PolyMat> {
        let factors = pm_factor(self)?;
        let mut inv = PolyMat::identity(self.n, self.var);
        for fac in factors.iter().rev() {
            inv = inv.mul(&factor_inverse(fac, self.n, self.var)?);
        }
        Ok(inv)
    }

    /// Entries embedded in the path algebra.
    pub fn to_amat(&self) -> AMat {
        let mut m = AMat::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(i, j, self.get(i, j).to_ncpoly());
            }
        }
        m
    }

    pub fn from_amat(m: &AMat, var: Var) -> Option<PolyMat> {
        let mut out = PolyMat::zeros(m.n, var);
        for i in 0..m.n {
            for j in 0..m.n {
                out.set(i, j, UniPoly::from_ncpoly(m.get(i, j), var)?);
            }
        }
        Some(out)
    }
}

impl fmt::Display for PolyMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "{}", row.join("; "))?;
        }
        Ok(())
    }
}

impl ElemFactor {
    pub fn to_matrix(&self, n: usize, var: Var) -> PolyMat {
        match self {
            ElemFactor::Transvection(al, be, p) => {
                let mut m = PolyMat::identity(n, var);
                m.set(al - 1, be - 1, UniPoly { var, ..p.clone() });
                m
            }
            ElemFactor::ScalarMat(t) => PolyMat::from_scalar(t, var),
        }
    }
}

fn factor_inverse(f: &ElemFactor, n: usize, var: Var) -> Result<PolyMat> {
    Ok(match f {
        ElemFactor::Transvection(al, be, p) => ElemFactor::Transvection(*al, *be, p.neg()).to_matrix(n, var),
        ElemFactor::ScalarMat(t) => {
            let inv = t.inverse().ok_or_else(|| Error::NotUnit("singular constant factor".into()))?;
            PolyMat::from_scalar(&inv, var)
        }
    })
}

/// Factors `A = F₁·F₂·…·F_k` with transvections first and at most one trailing constant matrix.
pub fn pm_factor(a: &PolyMat) -> Result<Vec<ElemFactor>> {
    a.unit_det()?;
    let n = a.n;
    let var = a.var;
    let mut m = a.rows();
    // row operations applied on the left; their inverses, in order, are the leading factors
    let mut ops: Vec<ElemFactor> = Vec::new();
    let mut row_op = |m: &mut Vec<Vec<UniPoly>>, i: usize, k: usize, q: &UniPoly| {
        // row_i -= q·row_k, recorded as the inverse transvection I + q e_ik
        let scaled: Vec<UniPoly> = m[k].iter().map(|e| q.mul(e)).collect();
        for (e, t) in m[i].iter_mut().zip(&scaled) {
            *e = e.sub(t);
        }
        ops.push(ElemFactor::Transvection(i + 1, k + 1, q.clone()));
    };
    for c in 0..n {
        loop {
            let piv = (c..n)
                .filter(|&i| !m[i][c].is_zero())
                .min_by_key(|&i| (m[i][c].degree(), i))
                .ok_or_else(|| Error::NotUnit("column has no pivot".into()))?;
            let mut done = true;
            for i in c..n {
                if i != piv && !m[i][c].is_zero() {
                    let (q, _) = m[i][c].div_rem(&m[piv][c]).expect("pivot is nonzero");
                    row_op(&mut m, i, piv, &q);
                    done = false;
                }
            }
            if done {
                if piv != c {
                    // move the pivot onto the diagonal with two constant transvections
                    let one = UniPoly::constant(GaussScalar::from_int(-1), var);
                    row_op(&mut m, c, piv, &one);
                    let ratio = UniPoly::constant(m[piv][c].coeff(0) * m[c][c].coeff(0).inv().expect("pivot"), var);
                    row_op(&mut m, piv, c, &ratio);
                }
                break;
            }
        }
        if !m[c][c].is_constant() {
            return Err(Error::NotUnit(format!("pivot {} is not a unit", m[c][c])));
        }
        let pinv = m[c][c].coeff(0).inv().expect("nonzero pivot");
        for i in 0..c {
            if !m[i][c].is_zero() {
                let q = m[i][c].scale(&pinv);
                row_op(&mut m, i, c, &q);
            }
        }
    }
    let mut d = SMat::zeros(n, n);
    for (i, row) in m.iter().enumerate() {
        for (j, p) in row.iter().enumerate() {
            if !p.is_zero() {
                d.set(i, j, p.coeff(0));
            }
        }
    }
    let mut factors = ops;
    if !d.is_identity() {
        factors.push(ElemFactor::ScalarMat(d));
    }
    Ok(factors)
}

/// Permutation matrix sending `e₁ ↦ e_first` and `e₂ ↦ e_second` (1-based targets).
fn placing_permutation(n: usize, first: usize, second: usize) -> SMat {
    let mut images = vec![first - 1, second - 1];
    images.extend((0..n).filter(|k| *k != first - 1 && *k != second - 1));
    let mut p = SMat::zeros(n, n);
    for (col, &row) in images.iter().enumerate() {
        p.set(row, col, GaussScalar::one());
    }
    p
}

/// Word whose crossed matrix `N` is `A`.
pub fn psi_embed(spec: &QuiverSpec, a: &PolyMat) -> Result<GeneratorWord> {
    if a.n != spec.r {
        return Err(Error::RankMismatch { expected: spec.r, got: a.n });
    }
    let mut word = GeneratorWord::default();
    for fac in pm_factor(a)? {
        match fac {
            ElemFactor::Transvection(al, be, p) => {
                // base transvection: (2,1) for Λ(p(a)b11), (1,2) for Λ′(p(a*)b*11)
                let (core, perm) = match a.var {
                    Var::A => (Generator::Triangular(p.times_b11(spec)), placing_permutation(spec.r, be, al)),
                    Var::AStar => (
                        Generator::OpTriangular(UniPoly { var: Var::AStar, ..p }.times_b11(spec)),
                        placing_permutation(spec.r, al, be),
                    ),
                };
                if spec.r < 2 {
                    return Err(Error::RankMismatch { expected: 2, got: spec.r });
                }
                if perm.is_identity() {
                    word.push(core);
                } else {
                    let inv = perm.inverse().expect("permutation");
                    word.push(Generator::AffineGL(perm));
                    word.push(core);
                    word.push(Generator::AffineGL(inv));
                }
            }
            ElemFactor::ScalarMat(t) => word.push(Generator::AffineGL(t)),
        }
    }
    Ok(word)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pa(c: &[i64]) -> UniPoly {
        UniPoly::from_ints(c, Var::A)
    }

    fn product(fs: &[ElemFactor], n: usize, var: Var) -> PolyMat {
        fs.iter().fold(PolyMat::identity(n, var), |acc, f| acc.mul(&f.to_matrix(n, var)))
    }

    #[test]
    fn division_and_display() {
        let (q, r) = pa(&[1, 0, 1]).div_rem(&pa(&[1, 1])).unwrap();
        assert_eq!(q, pa(&[-1, 1]));
        assert_eq!(r, pa(&[2]));
        assert_eq!(pa(&[1, -2, 0, 3]).to_string(), "1 - 2 a + 3 a^3");
        assert_eq!(UniPoly::zero(Var::AStar).to_string(), "0");
        assert_eq!(UniPoly::from_ints(&[0, 1], Var::AStar).to_string(), "a*");
    }

    #[test]
    fn determinants() {
        assert!(PolyMat::identity(3, Var::A).det().is_constant());
        let m = PolyMat::from_rows(vec![vec![pa(&[0, 1]), pa(&[1])], vec![pa(&[1]), pa(&[0])]], Var::A).unwrap();
        assert_eq!(m.det(), pa(&[-1]));
        let s = PolyMat::from_rows(vec![vec![pa(&[0, 1]), pa(&[0])], vec![pa(&[0]), pa(&[1])]], Var::A).unwrap();
        assert!(matches!(pm_factor(&s), Err(Error::NotUnit(_))));
    }

    #[test]
    fn factor_examples() {
        let up = PolyMat::from_rows(vec![vec![pa(&[1]), pa(&[2, 0, 1])], vec![pa(&[0]), pa(&[1])]], Var::A).unwrap();
        let f = pm_factor(&up).unwrap();
        assert_eq!(f, vec![ElemFactor::Transvection(1, 2, pa(&[2, 0, 1]))]);
        let rot = PolyMat::from_rows(vec![vec![pa(&[0]), pa(&[1])], vec![pa(&[-1]), pa(&[0])]], Var::A).unwrap();
        let f = pm_factor(&rot).unwrap();
        assert_eq!(product(&f, 2, Var::A), rot);
        let diag = PolyMat::from_scalar(&SMat::from_ints(&[&[2, 0, 0], &[0, 1, 0], &[0, 0, 3]]), Var::A);
        assert!(matches!(pm_factor(&diag).unwrap().as_slice(), [ElemFactor::ScalarMat(_)]));
        assert!(pm_factor(&PolyMat::identity(3, Var::A)).unwrap().is_empty());
        let t = ElemFactor::Transvection(2, 1, pa(&[0, 1])).to_matrix(2, Var::A);
        assert_eq!(t.inverse().unwrap(), ElemFactor::Transvection(2, 1, pa(&[0, -1])).to_matrix(2, Var::A));
    }

    #[test]
    fn embedding_of_a_transvection() {
        let spec = QuiverSpec::zigzag(3).unwrap();
        let p = pa(&[1, 0, 2]);
        let m = ElemFactor::Transvection(2, 1, p.clone()).to_matrix(3, Var::A);
        let w = psi_embed(&spec, &m).unwrap();
        assert_eq!(w.gens, vec![Generator::Triangular(p.times_b11(&spec))]);
        assert!(psi_embed(&spec, &PolyMat::identity(3, Var::A)).unwrap().is_empty());
        assert!(matches!(psi_embed(&spec, &PolyMat::identity(2, Var::A)), Err(Error::RankMismatch { .. })));
    }
}
