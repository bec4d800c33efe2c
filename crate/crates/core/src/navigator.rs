//! Moves points of the regular locus (X or Y regular semisimple) down to rank one with
//! explicit generator words, and connects pairs of points.
//!
//! One rank step at active rank `r` kills `v_{•r}` and `w_{r•}`:
//! with `X` diagonal a triangular `Λ(p(a)·b)` kills one of them, `F₀` swaps the roles of
//! `X` and `Y`, and with `Y` diagonal an op-triangular `Λ′(q(a*)·b*)` kills the other.
//! The denominators of both interpolations sit at index `r − 1`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::autom::{Generator, GeneratorWord};
use crate::error::{Error, Result};
use crate::necklace::{Alphabet, CycSum, Letter};
use crate::polymat::{UniPoly, Var};
use crate::quiver::QuiverSpec;
use crate::repspace::{CMat, RepPoint};
use crate::scalar::{GaussScalar, SMat};

/// Orbit tolerance used by [`connect`] for its short-circuit and final verification.
pub const CONNECT_TOL: f64 = 1e-6;

/// Number of rank-one bridge targets tried by [`connect`], in each direction.
pub const BRIDGE_VARIANTS: usize = 6;

/// Entry of `v` or `w` that a shear makes entrywise nonzero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    /// Row `ρ` of `w` (1-based).
    WRow(usize),
    /// Column `κ` of `v` (1-based).
    VColumn(usize),
}

/// Diagnostics of one navigator move.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NavStep {
    /// Active rank when the move was made.
    pub rank: usize,
    /// `prime`, `first`, `second` or `bridge`.
    pub stage: String,
    /// `odd` or `even` for the half-steps, empty otherwise.
    pub case: String,
    /// Whether a denominator shear was emitted.
    pub shear: bool,
    pub nodes: Vec<[f64; 2]>,
    pub values: Vec<[f64; 2]>,
    /// Relative moment residual after the move.
    pub residual: f64,
    /// Largest entry of `v_{•rank}` and `w_{rank•}` after the move.
    pub killed: f64,
}

/// A word together with the per-move diagnostics; `start.act_word(word) == final_point`.
#[derive(Clone, Debug, PartialEq)]
pub struct NavTrace {
    pub start: RepPoint,
    pub word: GeneratorWord,
    pub steps: Vec<NavStep>,
    pub final_point: RepPoint,
}

impl NavTrace {
    fn new(start: &RepPoint) -> NavTrace {
        NavTrace { start: start.clone(), word: GeneratorWord::default(), steps: Vec::new(), final_point: start.clone() }
    }

    fn apply(&mut self, g: Generator) -> Result<()> {
        self.final_point = self.final_point.act_generator(&g)?;
        self.word.push(g);
        Ok(())
    }

    fn record(&mut self, rank: usize, stage: &str, case: &str, shear: bool, nodes: &[Complex64], values: &[Complex64]) {
        let c2 = |z: &Complex64| [z.re, z.im];
        self.steps.push(NavStep {
            rank,
            stage: stage.to_string(),
            case: case.to_string(),
            shear,
            nodes: nodes.iter().map(c2).collect(),
            values: values.iter().map(c2).collect(),
            residual: self.final_point.relative_residual(),
            killed: killed_size(&self.final_point, rank),
        });
    }

    /// Largest relative moment residual seen over all steps.
    pub fn max_residual(&self) -> f64 {
        self.steps.iter().map(|s| s.residual).fold(self.start.relative_residual(), f64::max)
    }

    pub fn steps_json(&self) -> serde_json::Value {
        serde_json::to_value(&self.steps).expect("steps serialize")
    }
}

/// Largest entry of `v_{•k}` and `w_{k•}`.
pub fn killed_size(pt: &RepPoint, k: usize) -> f64 {
    let col = pt.v.column(k - 1).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let row = pt.w.row(k - 1).iter().map(|z| z.norm()).fold(0.0, f64::max);
    col.max(row)
}

fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `[]` if `X` is regular semisimple, `[F₀]` if only `Y` is.
pub fn ensure_primed(pt: &RepPoint) -> Result<(RepPoint, GeneratorWord)> {
    if pt.x_regular() {
        Ok((pt.clone(), GeneratorWord::default()))
    } else if pt.y_regular() {
        let g = Generator::FourierZero;
        Ok((pt.act_generator(&g)?, GeneratorWord::new(vec![g])))
    } else {
        Err(Error::NotInR)
    }
}

/// Integer shear making the target row of `w` (or column of `v`) entrywise nonzero by mixing in
/// the lines listed in `mix`. Entries are read as given, so callers pass a gauged point.
pub fn denominator_fix(pt: &RepPoint, target: Target, mix: &[usize]) -> Result<(RepPoint, GeneratorWord)> {
    match shear(pt, target, mix)? {
        None => Ok((pt.clone(), GeneratorWord::default())),
        Some(t) => {
            let g = Generator::AffineGL(t);
            Ok((pt.act_generator(&g)?, GeneratorWord::new(vec![g])))
        }
    }
}

/// Target lines whose smallest entry is at least this fraction of the largest entry are left alone.
const SHEAR_QUALITY: f64 = 0.05;

/// The shear matrix, or `None` if the target line is already well away from zero.
///
/// Among integer shears the one maximizing `min |entry| / max |entry|` of the target line is
/// taken, stopping early once [`SHEAR_QUALITY`] is reached; interpolation divides by these
/// entries, so a barely nonzero one inflates every later generator.
fn shear(pt: &RepPoint, target: Target, mix: &[usize]) -> Result<Option<SMat>> {
    let (lines, t0): (CMat, usize) = match target {
        Target::WRow(rho) => (pt.w.clone(), rho),
        Target::VColumn(kappa) => (pt.v.transpose(), kappa),
    };
    let mix: Vec<usize> = mix.iter().copied().filter(|&b| b != t0).collect();
    let scale = 1.0 + max_abs(&lines);
    let nz_tol = 1e-8 * scale;
    let n = lines.ncols();
    let quality = |row: &DVector<Complex64>| {
        let lo = row.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
        let hi = row.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if lo <= nz_tol {
            0.0
        } else {
            lo / hi
        }
    };
    let target_row: DVector<Complex64> = lines.row(t0 - 1).transpose();
    if quality(&target_row) >= SHEAR_QUALITY {
        return Ok(None);
    }
    for k in 0..n {
        if std::iter::once(t0).chain(mix.iter().copied()).all(|b| lines[(b - 1, k)].norm() <= nz_tol) {
            return Err(Error::BadFiberPoint(format!("entry {} vanishes on every usable line", k + 1)));
        }
    }
    let r = pt.r;
    let trials = (n * r * 10) as i64;
    let mut best: Option<(f64, Vec<i64>)> = None;
    for t in (1..=trials).flat_map(|t| [t, -t]) {
        let coeffs: Vec<i64> = (0..mix.len()).map(|j| t.pow(j as u32 + 1)).collect();
        let mut row = target_row.clone();
        for (b, c) in mix.iter().zip(&coeffs) {
            row += lines.row(b - 1).transpose() * Complex64::new(*c as f64, 0.0);
        }
        let q = quality(&row);
        if q > best.as_ref().map_or(0.0, |b| b.0) {
            best = Some((q, coeffs));
        }
        if q >= SHEAR_QUALITY {
            break;
        }
    }
    let Some((q, coeffs)) = best else {
        return Err(Error::BadFiberPoint(format!("no shear clears line {t0} within {trials} trials")));
    };
    if q <= quality(&target_row) {
        return Ok(None);
    }
    let mut m = SMat::identity(r);
    for (b, c) in mix.iter().zip(&coeffs) {
        match target {
            Target::WRow(_) => m.set(b - 1, t0 - 1, GaussScalar::from_int(*c)),
            Target::VColumn(_) => m.set(t0 - 1, b - 1, GaussScalar::from_int(-*c)),
        }
    }
    Ok(Some(m))
}

/// Polynomial of degree `< nodes.len()` through the given values.
pub fn interpolate(nodes: &[Complex64], values: &[Complex64], var: Var) -> Result<UniPoly> {
    let n = nodes.len();
    if n != values.len() {
        return Err(Error::Invalid(format!("{n} nodes but {} values", values.len())));
    }
    let scale = nodes.iter().map(|z| z.norm()).fold(1.0, f64::max);
    for i in 0..n {
        for j in 0..i {
            if (nodes[i] - nodes[j]).norm() <= 1e-12 * scale {
                return Err(Error::NodesCollide);
            }
        }
    }
    let vander = DMatrix::from_fn(n, n, |i, k| nodes[i].powu(k as u32));
    let sol = vander.lu().solve(&DVector::from_column_slice(values)).ok_or(Error::NodesCollide)?;
    let coeffs = sol
        .iter()
        .map(|z| GaussScalar::from_c64(*z).ok_or(Error::NumericalDrift(f64::NAN)))
        .collect::<Result<Vec<_>>>()?;
    Ok(UniPoly::new(coeffs, var))
}

/// `p(a)·ℓ` (or `p(a*)·ℓ`) for a letter `ℓ` of the matching triangular alphabet.
fn poly_times_letter(p: &UniPoly, letter: Letter) -> CycSum {
    let mut f = CycSum::zero();
    for (k, c) in p.coeffs().iter().enumerate() {
        let mut w = vec![0; k];
        w.push(letter);
        f.add_word(&w, c.clone());
    }
    f
}

/// Antiderivative of `p` as a necklace in the single loop letter `0`.
fn antiderivative(p: &UniPoly) -> CycSum {
    let mut f = CycSum::zero();
    for (k, c) in p.coeffs().iter().enumerate() {
        f.add_word(&vec![0; k + 1], c * &GaussScalar::ratio(1, k as i64 + 1));
    }
    f
}

/// `a* ↦ a* + p(a)`.
pub fn shift_a_star(p: &UniPoly) -> Generator {
    Generator::Triangular(antiderivative(p))
}

/// `a ↦ a + q(a*)`.
pub fn shift_a(q: &UniPoly) -> Generator {
    Generator::OpTriangular(antiderivative(q))
}

/// Makes `Y` regular semisimple through `Y ↦ Y + p′(X)` with `p′(λ_i) = i·K`; expects `X` diagonal.
pub fn regularize(pt: &RepPoint) -> Result<(RepPoint, GeneratorWord)> {
    if pt.y_regular() {
        return Ok((pt.clone(), GeneratorWord::default()));
    }
    let nodes: Vec<Complex64> = (0..pt.n).map(|i| pt.x[(i, i)]).collect();
    let row_sum = (0..pt.n).map(|i| pt.y.row(i).iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max);
    let mut k = (2.0 * pt.n as f64 * row_sum).max(1.0);
    const ATTEMPTS: usize = 10;
    for _ in 0..ATTEMPTS {
        let values: Vec<Complex64> = (1..=pt.n).map(|i| Complex64::new(i as f64 * k, 0.0)).collect();
        let g = shift_a_star(&interpolate(&nodes, &values, Var::A)?);
        let out = pt.act_generator(&g)?;
        if out.y_regular() {
            return Ok((out, GeneratorWord::new(vec![g])));
        }
        k *= 2.0;
    }
    Err(Error::RegularizationFailed(ATTEMPTS))
}

/// Kills `v_{•r}` and `w_{r•}` for `r = pt.r`.
pub fn reduce_rank_once(pt: &RepPoint) -> Result<(RepPoint, GeneratorWord)> {
    if pt.r < 2 {
        return Err(Error::InvalidRank(pt.r));
    }
    let mut trace = NavTrace::new(pt);
    reduce_at(&mut trace, pt.r)?;
    Ok((trace.final_point, trace.word))
}

/// Iterates the rank step from `r` down to `2`.
pub fn reduce_to_rank1(pt: &RepPoint) -> Result<NavTrace> {
    let mut trace = NavTrace::new(pt);
    if pt.r > 1 {
        ensure_primed(pt)?;
    }
    for ra in (2..=pt.r).rev() {
        reduce_at(&mut trace, ra)?;
    }
    Ok(trace)
}

fn reduce_at(trace: &mut NavTrace, ra: usize) -> Result<()> {
    let cur = &trace.final_point;
    if killed_size(cur, ra) <= 1e-14 * (1.0 + cur.scale()) {
        return Ok(());
    }
    let spec = cur.spec();
    let odd = ra % 2 == 1;
    let case = if odd { "odd" } else { "even" };
    let s = ra / 2;
    let den = ra - 1;

    let (primed, w0) = ensure_primed(&trace.final_point)?;
    if !w0.is_empty() {
        trace.final_point = primed;
        trace.word.extend(w0);
        trace.record(ra, "prime", "", false, &[], &[]);
    }

    // First half: X diagonal, a triangular generator.
    let all: Vec<usize> = (1..=ra).collect();
    let target = if odd { Target::WRow(den) } else { Target::VColumn(den) };
    let (d, _) = trace.final_point.diagonalize_x()?;
    let t = shear(&d, target, &all)?;
    let sheared = t.is_some();
    let d = match t {
        Some(t) => {
            let g = Generator::AffineGL(t);
            trace.apply(g.clone())?;
            d.act_generator(&g)?
        }
        None => d,
    };
    let nodes: Vec<Complex64> = (0..d.n).map(|k| d.x[(k, k)]).collect();
    let values: Vec<Complex64> = (0..d.n)
        .map(|k| if odd { -d.w[(ra - 1, k)] / d.w[(den - 1, k)] } else { d.v[(k, ra - 1)] / d.v[(k, den - 1)] })
        .collect();
    let p = interpolate(&nodes, &values, Var::A)?;
    let letter = if odd { Alphabet::b_index(&spec, s + 1, s) } else { Alphabet::b_index(&spec, s, s) };
    if !p.is_zero() {
        trace.apply(Generator::Triangular(poly_times_letter(&p, letter)))?;
    }
    trace.record(ra, "first", case, sheared, &nodes, &values);

    // Second half: after F₀ the new Y is the old (regular) X, an op-triangular generator.
    trace.apply(Generator::FourierZero)?;
    let lower: Vec<usize> = (1..ra).collect();
    let target = if odd { Target::VColumn(den) } else { Target::WRow(den) };
    let (d, _) = trace.final_point.diagonalize_y()?;
    let t = shear(&d, target, &lower)?;
    let sheared = t.is_some();
    let d = match t {
        Some(t) => {
            let g = Generator::AffineGL(t);
            trace.apply(g.clone())?;
            d.act_generator(&g)?
        }
        None => d,
    };
    let nodes: Vec<Complex64> = (0..d.n).map(|k| d.y[(k, k)]).collect();
    let values: Vec<Complex64> = (0..d.n)
        .map(|k| if odd { d.v[(k, ra - 1)] / d.v[(k, den - 1)] } else { -d.w[(ra - 1, k)] / d.w[(den - 1, k)] })
        .collect();
    let q = interpolate(&nodes, &values, Var::AStar)?;
    let letter = if odd { Alphabet::b_star_index(&spec, s, s + 1) } else { Alphabet::b_star_index(&spec, s, s) };
    if !q.is_zero() {
        trace.apply(Generator::OpTriangular(poly_times_letter(&q, letter)))?;
    }
    trace.record(ra, "second", case, sheared, &nodes, &values);
    Ok(())
}

/// Word carrying `p` to a point gauge-equivalent to `p2`.
///
/// Both points are reduced to rank one, along each available reduction path, and pairs of paths
/// are tried in order of the larger rank-one scale. If the reductions differ, a rank-one bridge
/// built from `a* ↦ a* + h(a)` and `a ↦ a + g(a*)` joins them; `strict` refuses the bridge. The
/// result is verified by replay and [`RepPoint::orbit_equal`] at [`CONNECT_TOL`].
pub fn connect(p: &RepPoint, p2: &RepPoint, strict: bool) -> Result<GeneratorWord> {
    if p.n != p2.n || p.r != p2.r || (p.tau - p2.tau).norm() > 0.0 {
        return Err(Error::SpecMismatch);
    }
    ensure_primed(p)?;
    ensure_primed(p2)?;
    if p.orbit_equal(p2, CONNECT_TOL)? {
        return Ok(GeneratorWord::default());
    }
    let spec = p.spec();
    let paths1 = reduction_paths(p)?;
    let paths2 = reduction_paths(p2)?;
    let mut pairs: Vec<(&ReductionPath, &ReductionPath)> =
        paths1.iter().flat_map(|a| paths2.iter().map(move |b| (a, b))).collect();
    pairs.sort_by(|(a, b), (c, d)| a.1.scale().max(b.1.scale()).total_cmp(&c.1.scale().max(d.1.scale())));
    for ((w1, f1), (w2, f2)) in pairs {
        let back = w2.invert(&spec)?;
        let verify = |mid: GeneratorWord| -> Result<Option<GeneratorWord>> {
            let mut word = w1.clone();
            word.extend(mid);
            word.extend(back.clone());
            let reached = match p.act_word(&word) {
                Ok(q) => q,
                Err(Error::NumericalDrift(_)) => return Ok(None),
                Err(e) => return Err(e),
            };
            Ok(reached.orbit_equal(p2, CONNECT_TOL)?.then_some(word))
        };
        if f1.orbit_equal(f2, CONNECT_TOL)? {
            if let Some(word) = verify(GeneratorWord::default())? {
                return Ok(word);
            }
        }
        if strict {
            continue;
        }
        // Bridges differ in conditioning; take the first that verifies.
        for variant in 1..=BRIDGE_VARIANTS {
            if let Ok(mid) = rank_one_bridge(f1, f2, variant) {
                if let Some(word) = verify(mid)? {
                    return Ok(word);
                }
            }
            if let Ok(mid) = rank_one_bridge(f2, f1, variant).and_then(|b| b.invert(&spec)) {
                if let Some(word) = verify(mid)? {
                    return Ok(word);
                }
            }
        }
    }
    if strict {
        return Err(Error::NotConnectedAtRank1("reductions differ and the bridge is disabled".into()));
    }
    Err(Error::NotConnectedAtRank1("no bridge verifies".into()))
}

/// Word to rank one and the point it reaches.
type ReductionPath = (GeneratorWord, RepPoint);

/// Rank-one reductions of `pt`: the direct one and, when `Y` is regular as well, the one
/// started from `F₀(pt)`. The two differ greatly in conditioning on some points.
fn reduction_paths(pt: &RepPoint) -> Result<Vec<ReductionPath>> {
    let mut out = Vec::new();
    let direct = reduce_to_rank1(pt);
    if pt.x_regular() && pt.y_regular() {
        let f0 = Generator::FourierZero;
        if let Ok(t) = pt.act_generator(&f0).and_then(|q| reduce_to_rank1(&q)) {
            let mut word = GeneratorWord::new(vec![f0]);
            word.extend(t.word);
            out.push((word, t.final_point));
        }
    }
    match direct {
        Ok(t) => out.push((t.word, t.final_point)),
        Err(e) if out.is_empty() => return Err(e),
        Err(_) => {}
    }
    Ok(out)
}

/// Connects two points whose `v`, `w` are supported on index 1.
///
/// Each side is normalized to the unique point with `Y = diag(μ)` and zero diagonal of `X` in
/// the eigenbasis of `Y`. The common `μ` is the spectrum of `Y` at the second point after its
/// `Y`-diagonal (in the `X` eigenbasis) is set to `c = (variant/2)·(1, 2, …, n)`, moving on to the
/// next variant while that `Y` is not regular; the first point reaches it by solving
/// `spec(C + diag y) = μ` for the free diagonal `y` by Newton's method.
pub fn rank_one_bridge(q1: &RepPoint, q2: &RepPoint, variant: usize) -> Result<GeneratorWord> {
    let fail = |m: &str| Error::NotConnectedAtRank1(m.to_string());
    let spec = q1.spec();
    let (q1, pre1) = ensure_primed(q1)?;
    let (q2, pre2) = ensure_primed(q2)?;
    let n = q1.n;

    let (d2, _) = q2.diagonalize_x()?;
    let lam2: Vec<Complex64> = (0..n).map(|i| d2.x[(i, i)]).collect();
    let mut h2 = None;
    for attempt in variant..variant + 8 {
        let c: Vec<Complex64> = (0..n).map(|i| Complex64::new(0.5 * attempt as f64 * (i as f64 + 1.0), 0.0)).collect();
        let values: Vec<Complex64> = (0..n).map(|i| c[i] - d2.y[(i, i)]).collect();
        let g = shift_a_star(&interpolate(&lam2, &values, Var::A)?);
        let moved = q2.act_generator(&g)?;
        if moved.y_regular() {
            h2 = Some((g, moved));
            break;
        }
    }
    let (h2, q2m) = h2.ok_or_else(|| fail("no regular target spectrum"))?;
    let mu = RepPoint::regular_spectrum(&q2m.y).map_err(Error::NotRegularSemisimple)?;

    let (d1, _) = q1.diagonalize_x()?;
    let lam1: Vec<Complex64> = (0..n).map(|i| d1.x[(i, i)]).collect();
    let mut c_off = d1.y.clone();
    for i in 0..n {
        c_off[(i, i)] = Complex64::new(0.0, 0.0);
    }
    let y = solve_diagonal(&c_off, &mu).ok_or_else(|| fail("diagonal inverse eigenvalue problem did not converge"))?;
    let values: Vec<Complex64> = (0..n).map(|i| y[i] - d1.y[(i, i)]).collect();
    let h1 = shift_a_star(&interpolate(&lam1, &values, Var::A)?);
    let q1m = q1.act_generator(&h1)?;

    let normalizer = |pt: &RepPoint| -> Result<UniPoly> {
        let (e, _) = pt.diagonalize_y()?;
        let nodes: Vec<Complex64> = (0..n).map(|k| e.y[(k, k)]).collect();
        let values: Vec<Complex64> = (0..n).map(|k| -e.x[(k, k)]).collect();
        interpolate(&nodes, &values, Var::AStar)
    };
    let g1 = normalizer(&q1m)?;
    let g2 = normalizer(&q2m)?;

    let mut word = pre1;
    word.push(h1);
    word.push(shift_a(&g1.sub(&g2)));
    word.extend(GeneratorWord::new(vec![h2]).invert(&spec)?);
    word.extend(pre2.invert(&spec)?);
    Ok(word)
}

/// Coefficients `c_1..c_n` of `det(zI − m) = zⁿ + c_1 zⁿ⁻¹ + …` by Faddeev–LeVerrier.
fn charpoly(m: &CMat) -> Vec<Complex64> {
    let n = m.nrows();
    let id = CMat::identity(n, n);
    let mut mk = CMat::zeros(n, n);
    let mut out = Vec::with_capacity(n);
    let mut c = Complex64::new(1.0, 0.0);
    for k in 1..=n {
        mk = m * &mk + &id * c;
        c = -(m * &mk).trace() / Complex64::new(k as f64, 0.0);
        out.push(c);
    }
    out
}

/// `y` with `spec(c_off + diag y) = mu`, by damped Newton from permutations of `mu`.
fn solve_diagonal(c_off: &CMat, mu: &[Complex64]) -> Option<Vec<Complex64>> {
    let n = mu.len();
    let mut want = vec![Complex64::new(1.0, 0.0)];
    for m in mu {
        let mut next = vec![Complex64::new(0.0, 0.0); want.len() + 1];
        for (k, c) in want.iter().enumerate() {
            next[k] += c;
            next[k + 1] -= c * m;
        }
        want = next;
    }
    let want = &want[1..];
    let scale = mu.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let resid = |y: &DVector<Complex64>| -> DVector<Complex64> {
        let mut m = c_off.clone();
        for i in 0..n {
            m[(i, i)] += y[i];
        }
        let cp = charpoly(&m);
        DVector::from_fn(n, |k, _| (cp[k] - want[k]) / Complex64::new(scale.powi(k as i32 + 1), 0.0))
    };
    let norm = |v: &DVector<Complex64>| v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut starts: Vec<Vec<Complex64>> = Vec::new();
    permutations(mu.to_vec(), 0, &mut starts, 24);
    for start in starts {
        let mut y = DVector::from_vec(start);
        let mut f = resid(&y);
        for _ in 0..200 {
            if norm(&f) < 1e-14 {
                break;
            }
            let h = 1e-7 * scale;
            let mut jac = CMat::zeros(n, n);
            for j in 0..n {
                let mut yj = y.clone();
                yj[j] += Complex64::new(h, 0.0);
                jac.set_column(j, &((resid(&yj) - &f) / Complex64::new(h, 0.0)));
            }
            let Some(step) = jac.lu().solve(&f) else { break };
            let mut lambda = 1.0;
            let mut improved = false;
            while lambda > 1e-4 {
                let cand = &y - &step * Complex64::new(lambda, 0.0);
                let fc = resid(&cand);
                if norm(&fc) < norm(&f) {
                    y = cand;
                    f = fc;
                    improved = true;
                    break;
                }
                lambda /= 2.0;
            }
            if !improved {
                break;
            }
        }
        if norm(&f) < 1e-10 {
            return Some(y.iter().copied().collect());
        }
    }
    None
}

fn permutations(mut v: Vec<Complex64>, k: usize, out: &mut Vec<Vec<Complex64>>, cap: usize) {
    if out.len() >= cap {
        return;
    }
    if k == v.len() {
        out.push(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v.clone(), k + 1, out, cap);
        v.swap(k, i);
    }
}

/// Every arrow `d_α`, `b_α` with `α > rank` is fixed by every generator of `word`, hence by the word.
pub fn fixes_indices_above(word: &GeneratorWord, spec: &QuiverSpec, rank: usize) -> Result<bool> {
    use crate::quiver::{Arrow, NCPoly};
    for g in &word.gens {
        let e = g.build(spec)?;
        for al in (rank + 1)..=spec.r {
            for arrow in [Arrow::D(al as u16), Arrow::B(al as u16)] {
                if e.image(arrow) != &NCPoly::arrow(arrow) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// `{"start", "steps", "final"}` with points in the repspace schema; the word is serialized separately.
pub fn trace_summary(trace: &NavTrace) -> serde_json::Value {
    serde_json::json!({
        "start": trace.start.to_json(),
        "steps": trace.steps_json(),
        "final": trace.final_point.to_json(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repspace::FiberKind;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn interpolation_hits_nodes() {
        let nodes = [c(0.3), Complex64::new(-1.0, 0.5), c(2.0)];
        let values = [c(1.0), Complex64::new(0.0, 2.0), c(-3.0)];
        let p = interpolate(&nodes, &values, Var::A).unwrap();
        for (x, y) in nodes.iter().zip(&values) {
            let got = p.eval(&GaussScalar::from_c64(*x).unwrap()).to_c64();
            assert!((got - y).norm() < 1e-10);
        }
        assert!(interpolate(&[c(1.0)], &[c(4.0)], Var::A).unwrap().is_constant());
        assert_eq!(interpolate(&[c(1.0), c(1.0)], &[c(0.0), c(1.0)], Var::A), Err(Error::NodesCollide));
    }

    #[test]
    fn priming() {
        let p = RepPoint::random_fiber_point(3, 2, c(1.0), 5, FiberKind::Cprime).unwrap();
        assert!(ensure_primed(&p).unwrap().1.is_empty());
        let q = RepPoint::random_fiber_point(3, 2, c(1.0), 5, FiberKind::Cdoubleprime).unwrap();
        if !q.x_regular() {
            assert_eq!(ensure_primed(&q).unwrap().1.gens, vec![Generator::FourierZero]);
        }
        let z = CMat::zeros(2, 2);
        let mut nil = z.clone();
        nil[(0, 1)] = c(1.0);
        let bad = RepPoint { x: nil.clone(), y: nil, ..p.clone() };
        let bad = RepPoint { v: CMat::zeros(2, 2), w: CMat::zeros(2, 2), n: 2, ..bad };
        assert_eq!(ensure_primed(&bad).unwrap_err(), Error::NotInR);
    }

    #[test]
    fn reduces_small_points() {
        for (n, r, seed) in [(2, 3, 1), (3, 2, 2), (2, 4, 3), (1, 3, 4)] {
            let p = RepPoint::random_fiber_point(n, r, c(1.0), seed, FiberKind::Cprime).unwrap();
            let t = reduce_to_rank1(&p).unwrap();
            for k in 2..=r {
                assert!(killed_size(&t.final_point, k) < 1e-8, "n={n} r={r} k={k}");
            }
            assert!(t.max_residual() < 1e-7);
            assert_eq!(p.act_word(&t.word).unwrap(), t.final_point);
        }
    }

    #[test]
    fn regularize_separates() {
        let base = RepPoint::random_fiber_point(2, 1, c(1.0), 0, FiberKind::Cprime).unwrap();
        let mut x = CMat::zeros(2, 2);
        x[(1, 1)] = c(1.0);
        let pt = RepPoint { x, y: CMat::zeros(2, 2), ..base };
        let (out, w) = regularize(&pt).unwrap();
        assert_eq!(w.len(), 1);
        assert!((out.y[(0, 0)] - c(1.0)).norm() < 1e-12);
        assert!((out.y[(1, 1)] - c(2.0)).norm() < 1e-12);
    }
}
