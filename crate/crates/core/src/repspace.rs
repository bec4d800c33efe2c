//! Points `(X, Y, v, w)` of the moment fiber `[X,Y] − vw = τI`, evaluation of path-algebra
//! elements on them, the right action of endomorphisms, gauge moves and the
//! Gibbons–Hermsen flows.
//!
//! Arrow table: `a ↦ X`, `a* ↦ Y`, `d_α ↦ v_{•α}` (n×1), `b_α ↦ w_{α•}` (1×n),
//! `ε₁ ↦ I_n`, `ε₂ ↦ 1`. A path is evaluated as the product of its arrows left to right.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::autom::{Endo, Generator, GeneratorWord};
use crate::error::{Error, Result};
use crate::quiver::{Arrow, NCPoly, QuiverSpec};

pub type CMat = DMatrix<Complex64>;

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct RepPoint {
    pub n: usize,
    pub r: usize,
    pub tau: Complex64,
    pub x: CMat,
    pub y: CMat,
    pub v: CMat,
    pub w: CMat,
    pub tol: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FiberKind {
    Cprime,
    Cdoubleprime,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn sample(rng: &mut ChaCha8Rng) -> Complex64 {
    c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

impl RepPoint {
    pub fn new(tau: Complex64, x: CMat, y: CMat, v: CMat, w: CMat) -> Result<RepPoint> {
        let n = x.nrows();
        let r = v.ncols();
        let shapes_ok = x.shape() == (n, n) && y.shape() == (n, n) && v.nrows() == n && w.shape() == (r, n);
        if !shapes_ok {
            return Err(Error::Invalid("inconsistent matrix shapes".into()));
        }
        if tau.is_zero() {
            return Err(Error::FreeActionLost);
        }
        Ok(RepPoint { n, r, tau, x, y, v, w, tol: DEFAULT_TOL })
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    /// `1 + ‖X‖‖Y‖ + ‖v‖‖w‖`.
    pub fn scale(&self) -> f64 {
        1.0 + self.x.norm() * self.y.norm() + self.v.norm() * self.w.norm()
    }

    /// `‖[X,Y] − vw − τI‖_F`.
    pub fn moment_residual(&self) -> f64 {
        let m = &self.x * &self.y - &self.y * &self.x - &self.v * &self.w - CMat::identity(self.n, self.n) * self.tau;
        m.norm()
    }

    pub fn relative_residual(&self) -> f64 {
        self.moment_residual() / self.scale()
    }

    pub fn on_fiber(&self) -> bool {
        self.relative_residual() <= self.tol
    }

    /// Matrix assigned to an arrow.
    pub fn arrow_matrix(&self, a: Arrow) -> CMat {
        match a {
            Arrow::A => self.x.clone(),
            Arrow::AStar => self.y.clone(),
            Arrow::D(k) => CMat::from_iterator(self.n, 1, self.v.column(k as usize - 1).iter().cloned()),
            Arrow::B(k) => CMat::from_iterator(1, self.n, self.w.row(k as usize - 1).iter().cloned()),
        }
    }

    fn dim(&self, vertex: u8) -> usize {
        if vertex == 1 {
            self.n
        } else {
            1
        }
    }

    /// Evaluates a block-homogeneous element.
    pub fn eval_poly(&self, p: &NCPoly) -> Result<CMat> {
        let (tgt, src) = match p.block() {
            Some(b) => b,
            None if p.is_zero() => (1, 1),
            None => return Err(Error::BlockViolation(format!("{p} mixes blocks"))),
        };
        if p.max_index() > self.r {
            return Err(Error::SpecMismatch);
        }
        let mut out = CMat::zeros(self.dim(tgt), self.dim(src));
        for (path, coef) in p.terms() {
            let start = CMat::identity(self.dim(path.tgt), self.dim(path.tgt));
            let m = path.arrows.iter().fold(start, |m, &a| m * self.arrow_matrix(a));
            out += m * coef.to_c64();
        }
        Ok(out)
    }

    /// `p.ψ`: every arrow matrix replaced by the evaluation of its image.
    pub fn act(&self, psi: &Endo) -> Result<RepPoint> {
        let spec = psi.spec();
        if spec.r != self.r {
            return Err(Error::RankMismatch { expected: self.r, got: spec.r });
        }
        let x = self.eval_poly(psi.image(Arrow::A))?;
        let y = self.eval_poly(psi.image(Arrow::AStar))?;
        let mut v = CMat::zeros(self.n, self.r);
        let mut w = CMat::zeros(self.r, self.n);
        for al in 1..=self.r {
            v.set_column(al - 1, &self.eval_poly(psi.image(Arrow::D(al as u16)))?.column(0));
            w.set_row(al - 1, &self.eval_poly(psi.image(Arrow::B(al as u16)))?.row(0));
        }
        let out = RepPoint { x, y, v, w, ..self.clone() };
        let res = out.relative_residual();
        if res > 1e3 * self.tol && res > 1e3 * self.relative_residual() {
            return Err(Error::NumericalDrift(res));
        }
        Ok(out)
    }

    pub fn act_generator(&self, g: &Generator) -> Result<RepPoint> {
        self.act(&g.build(&self.spec())?)
    }

    /// Applies the generators one at a time: `p.g₁.g₂…`.
    pub fn act_word(&self, word: &GeneratorWord) -> Result<RepPoint> {
        let mut p = self.clone();
        for g in &word.gens {
            p = p.act_generator(g)?;
        }
        Ok(p)
    }

    pub fn spec(&self) -> QuiverSpec {
        QuiverSpec::zigzag(self.r).expect("r ≥ 1")
    }

    /// `(gXg⁻¹, gYg⁻¹, gv, wg⁻¹)`.
    pub fn gauge(&self, g: &CMat) -> Result<RepPoint> {
        let gi = g.clone().try_inverse().ok_or_else(|| Error::NotInvertible("gauge matrix is singular".into()))?;
        Ok(RepPoint { x: g * &self.x * &gi, y: g * &self.y * &gi, v: g * &self.v, w: &self.w * &gi, ..self.clone() })
    }

    /// Distinct eigenvalues sorted by (Re, Im), or the offending gap.
    pub fn regular_spectrum(m: &CMat) -> std::result::Result<Vec<Complex64>, f64> {
        let ev = eigenvalues(m).ok_or(0.0)?;
        let rho = ev.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let gap_tol = 1e-6 * (1.0 + rho);
        let sorted = sort_banded(ev, gap_tol / 2.0);
        let gap = min_gap(&sorted);
        if gap <= gap_tol {
            return Err(gap);
        }
        Ok(sorted)
    }

    pub fn x_regular(&self) -> bool {
        RepPoint::regular_spectrum(&self.x).is_ok()
    }

    pub fn y_regular(&self) -> bool {
        RepPoint::regular_spectrum(&self.y).is_ok()
    }

    /// Gauge making `X` diagonal with sorted eigenvalues; returns the gauged point and `g`.
    pub fn diagonalize_x(&self) -> Result<(RepPoint, CMat)> {
        let (lams, g) = diagonalizing_gauge(&self.x)?;
        let mut out = self.gauge(&g)?;
        out.x = CMat::from_diagonal(&nalgebra::DVector::from_vec(lams));
        Ok((out, g))
    }

    /// Same as [`RepPoint::diagonalize_x`] for `Y`.
    pub fn diagonalize_y(&self) -> Result<(RepPoint, CMat)> {
        let (mus, g) = diagonalizing_gauge(&self.y)?;
        let mut out = self.gauge(&g)?;
        out.y = CMat::from_diagonal(&nalgebra::DVector::from_vec(mus));
        Ok((out, g))
    }

    /// `tr Y^k v m w`.
    pub fn hamiltonian(&self, k: u32, m: &CMat) -> Complex64 {
        (self.y_pow(k) * &self.v * m * &self.w).trace()
    }

    fn y_pow(&self, k: u32) -> CMat {
        let mut out = CMat::identity(self.n, self.n);
        for _ in 0..k {
            out *= &self.y;
        }
        out
    }

    /// Closed-form flow of `J_{k, e_αβ}` (1-based, `α ≠ β`).
    pub fn flow_elementary(&self, k: u32, alpha: usize, beta: usize, t: f64) -> Result<RepPoint> {
        if alpha == beta {
            return Err(Error::NonPolynomialFlow);
        }
        if alpha == 0 || beta == 0 || alpha > self.r || beta > self.r {
            return Err(Error::Invalid(format!("indices ({alpha}, {beta}) outside 1..={}", self.r)));
        }
        let va = self.v.column(alpha - 1).into_owned();
        let wb = self.w.row(beta - 1).into_owned();
        let tc = c(t, 0.0);
        let mut dx = CMat::zeros(self.n, self.n);
        for i in 1..=k {
            dx += self.y_pow(k - i) * &va * &wb * self.y_pow(i - 1);
        }
        let yk = self.y_pow(k);
        let mut out = self.clone();
        out.x += dx * tc;
        let nv = self.v.column(beta - 1) - &yk * &va * tc;
        out.v.set_column(beta - 1, &nv);
        let nw = self.w.row(alpha - 1) + &wb * &yk * tc;
        out.w.set_row(alpha - 1, &nw);
        Ok(out)
    }

    /// Right-hand side of the `J_{k,m}` equations of motion, with signs that keep the fiber.
    fn flow_field(&self, k: u32, m: &CMat) -> (CMat, CMat, CMat) {
        let vmw = &self.v * m * &self.w;
        let mut dx = CMat::zeros(self.n, self.n);
        for i in 1..=k {
            dx += self.y_pow(k - i) * &vmw * self.y_pow(i - 1);
        }
        let yk = self.y_pow(k);
        let dv = -(&yk * &self.v * m);
        let dw = m * &self.w * &yk;
        (dx, dv, dw)
    }

    /// Fixed-step RK4 integration of the `J_{k,m}` flow (`Y` is constant).
    pub fn flow_ode(&self, k: u32, m: &CMat, t: f64, steps: usize) -> Result<RepPoint> {
        if steps == 0 {
            return Err(Error::Invalid("at least one step".into()));
        }
        let h = c(t / steps as f64, 0.0);
        let half = c(0.5, 0.0);
        let mut p = self.clone();
        let shifted = |p: &RepPoint, d: &(CMat, CMat, CMat), s: Complex64| RepPoint {
            x: &p.x + &d.0 * s,
            v: &p.v + &d.1 * s,
            w: &p.w + &d.2 * s,
            ..p.clone()
        };
        for _ in 0..steps {
            let k1 = p.flow_field(k, m);
            let k2 = shifted(&p, &k1, h * half).flow_field(k, m);
            let k3 = shifted(&p, &k2, h * half).flow_field(k, m);
            let k4 = shifted(&p, &k3, h).flow_field(k, m);
            let sixth = h / 6.0;
            let two = c(2.0, 0.0);
            p.x += (&k1.0 + &k2.0 * two + &k3.0 * two + &k4.0) * sixth;
            p.v += (&k1.1 + &k2.1 * two + &k3.1 * two + &k4.1) * sixth;
            p.w += (&k1.2 + &k2.2 * two + &k3.2 * two + &k4.2) * sixth;
        }
        Ok(p)
    }

    /// Invariants of the gauge class on the locus where `X` is regular semisimple:
    /// sorted spectrum, diagonal of `Y` and the products `v_{iα} w_{βi}` in the eigenbasis.
    pub fn invariants(&self) -> Result<Vec<Complex64>> {
        let (d, _) = self.diagonalize_x()?;
        let mut out: Vec<Complex64> = (0..self.n).map(|i| d.x[(i, i)]).collect();
        out.extend((0..self.n).map(|i| d.y[(i, i)]));
        for i in 0..self.n {
            for al in 0..self.r {
                for be in 0..self.r {
                    out.push(d.v[(i, al)] * d.w[(be, i)]);
                }
            }
        }
        Ok(out)
    }

    /// Equality in the quotient by the gauge group, decided on the locus where `X` (or else `Y`) is
    /// regular semisimple.
    pub fn orbit_equal(&self, other: &RepPoint, tol: f64) -> Result<bool> {
        if self.n != other.n || self.r != other.r {
            return Ok(false);
        }
        let (p, q) = match (self.x_regular(), other.x_regular()) {
            (true, true) => (self.clone(), other.clone()),
            (false, false) if self.y_regular() && other.y_regular() => {
                let f0 = Generator::FourierZero;
                (self.act_generator(&f0)?, other.act_generator(&f0)?)
            }
            (false, false) => return Err(Error::NotComparable),
            _ => return Ok(false),
        };
        let (a, b) = (p.invariants()?, q.invariants()?);
        Ok(a.iter().zip(&b).all(|(x, y)| (x - y).norm() <= tol * (1.0 + x.norm().max(y.norm()))))
    }

    /// Seeded point with `X` diagonal (or its image under `F₀`).
    pub fn random_fiber_point(n: usize, r: usize, tau: Complex64, seed: u64, kind: FiberKind) -> Result<RepPoint> {
        if tau.is_zero() {
            return Err(Error::FreeActionLost);
        }
        if n == 0 || r == 0 {
            return Err(Error::InvalidRank(r.min(n)));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut xs: Vec<Complex64> = Vec::with_capacity(n);
        while xs.len() < n {
            let z = sample(&mut rng) * 2.0;
            if xs.iter().all(|x| (x - z).norm() > 0.2) {
                xs.push(z);
            }
        }
        let v = CMat::from_fn(n, r, |_, _| sample(&mut rng) + c(0.5, 0.0));
        let mut w = CMat::from_fn(r, n, |_, _| sample(&mut rng));
        for i in 0..n {
            // fix v_{i•} w_{•i} = −τ through the largest entry of the row
            let al = (0..r).max_by(|&p, &q| v[(i, p)].norm().total_cmp(&v[(i, q)].norm())).expect("r ≥ 1");
            let s: Complex64 = (0..r).map(|b| v[(i, b)] * w[(b, i)]).sum();
            w[(al, i)] += (-tau - s) / v[(i, al)];
        }
        let vw = &v * &w;
        let y = CMat::from_fn(n, n, |i, j| if i == j { c(0.0, 0.0) } else { vw[(i, j)] / (xs[i] - xs[j]) });
        let mut y = y;
        for i in 0..n {
            y[(i, i)] = sample(&mut rng);
        }
        let x = CMat::from_diagonal(&nalgebra::DVector::from_vec(xs));
        let p = RepPoint::new(tau, x, y, v, w)?;
        match kind {
            FiberKind::Cprime => Ok(p),
            FiberKind::Cdoubleprime => p.act_generator(&Generator::FourierZero),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(RepPointJson::from(self)).expect("plain data")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<RepPoint> {
        let j: RepPointJson = serde_json::from_value(v.clone()).map_err(|e| Error::Invalid(e.to_string()))?;
        j.try_into()
    }
}

/// Sorted eigenvalues of a regular semisimple `m` and `g` with `g m g⁻¹` diagonal.
pub fn diagonalizing_gauge(m: &CMat) -> Result<(Vec<Complex64>, CMat)> {
    let lams = RepPoint::regular_spectrum(m).map_err(Error::NotRegularSemisimple)?;
    let n = m.nrows();
    let mut p = CMat::zeros(n, n);
    for (k, lam) in lams.iter().enumerate() {
        p.set_column(k, &null_vector(&(m - CMat::identity(n, n) * *lam)));
    }
    let g = p.try_inverse().ok_or(Error::NotRegularSemisimple(0.0))?;
    Ok((lams, g))
}

/// Eigenvalues through a complex Schur form.
pub fn eigenvalues(m: &CMat) -> Option<Vec<Complex64>> {
    let n = m.nrows();
    if n == 0 {
        return Some(Vec::new());
    }
    let schur = nalgebra::linalg::Schur::try_new(m.clone(), 1e-15, 10_000)?;
    let (_, t) = schur.unpack();
    Some((0..n).map(|i| t[(i, i)]).collect())
}

/// Sort by real part, breaking near-ties (within `band`, chained) by imaginary part.
fn sort_banded(mut ev: Vec<Complex64>, band: f64) -> Vec<Complex64> {
    ev.sort_by(|a, b| a.re.total_cmp(&b.re));
    let mut out = Vec::with_capacity(ev.len());
    let mut i = 0;
    while i < ev.len() {
        let mut j = i + 1;
        while j < ev.len() && ev[j].re - ev[j - 1].re <= band {
            j += 1;
        }
        let mut group = ev[i..j].to_vec();
        group.sort_by(|a, b| a.im.total_cmp(&b.im));
        out.extend(group);
        i = j;
    }
    out
}

fn min_gap(ev: &[Complex64]) -> f64 {
    let mut gap = f64::INFINITY;
    for i in 0..ev.len() {
        for j in i + 1..ev.len() {
            gap = gap.min((ev[i] - ev[j]).norm());
        }
    }
    gap
}

/// Unit right singular vector of the smallest singular value.
pub fn null_vector(m: &CMat) -> nalgebra::DVector<Complex64> {
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.expect("requested");
    let k = (0..svd.singular_values.len())
        .min_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]))
        .expect("nonempty");
    vt.row(k).transpose().map(|z| z.conj())
}

#[derive(Serialize, Deserialize)]
struct RepPointJson {
    n: usize,
    r: usize,
    tau: [f64; 2],
    #[serde(rename = "X")]
    x: Vec<Vec<[f64; 2]>>,
    #[serde(rename = "Y")]
    y: Vec<Vec<[f64; 2]>>,
    v: Vec<Vec<[f64; 2]>>,
    w: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tol: Option<f64>,
}

pub fn cmat_to_rows(m: &CMat) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
}

pub fn cmat_from_rows(rows: &[Vec<[f64; 2]>], nrows: usize, ncols: usize) -> Result<CMat> {
    if rows.len() != nrows || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Invalid(format!("expected a {nrows}×{ncols} matrix")));
    }
    Ok(CMat::from_fn(nrows, ncols, |i, j| c(rows[i][j][0], rows[i][j][1])))
}

impl From<&RepPoint> for RepPointJson {
    fn from(p: &RepPoint) -> Self {
        RepPointJson {
            n: p.n,
            r: p.r,
            tau: [p.tau.re, p.tau.im],
            x: cmat_to_rows(&p.x),
            y: cmat_to_rows(&p.y),
            v: cmat_to_rows(&p.v),
            w: cmat_to_rows(&p.w),
            tol: Some(p.tol),
        }
    }
}

impl TryFrom<RepPointJson> for RepPoint {
    type Error = Error;
    fn try_from(j: RepPointJson) -> Result<RepPoint> {
        let p = RepPoint::new(
            c(j.tau[0], j.tau[1]),
            cmat_from_rows(&j.x, j.n, j.n)?,
            cmat_from_rows(&j.y, j.n, j.n)?,
            cmat_from_rows(&j.v, j.n, j.r)?,
            cmat_from_rows(&j.w, j.r, j.n)?,
        )?;
        Ok(match j.tol {
            Some(t) => p.with_tol(t),
            None => p,
        })
    }
}
