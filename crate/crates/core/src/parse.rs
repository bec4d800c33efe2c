//! Parser and printers for noncommutative expressions.
//!
//! ```text
//! expr   := ("+"|"-")? term (("+"|"-") term)*
//! term   := factor+                      juxtaposition = product in composition order
//! factor := primary ("^" INT)?
//! primary:= NUM | NUM "i" | NAME | "(" expr ")" | "[" expr "," expr "]"
//! NAME   := [A-Za-z_][A-Za-z0-9_]* "*"?
//! ```
//!
//! In arrow mode names are arrows (`a`, `a*`, `dα`, `bα`), aliases (`x1`, `y2*`, …),
//! idempotents `e1`, `e2`, and as a fallback the triangular, op-triangular and cycle letters.
//! In letter mode a name is split into alphabet letters by longest prefix, and a trailing
//! power binds to the last letter. `i` is the imaginary unit in both modes.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::necklace::{Alphabet, CycSum, FreePoly, Letter, Named};
use crate::quiver::{write_atoms, write_linear, Arrow, NCPoly, Orientation, QuiverSpec};
use crate::scalar::GaussScalar;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Imag(BigRational),
    Name(String),
    Sym(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

/// Parse tree; atoms keep their source position for error reporting.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Scalar(GaussScalar),
    Atom { name: String, line: usize, col: usize },
    Sum(Vec<(bool, Expr)>),
    Product(Vec<Expr>),
    Pow(Box<Expr>, u32),
    Commutator(Box<Expr>, Box<Expr>),
}

fn perr(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let digits = |i: &mut usize, col: &mut usize| {
        let s = *i;
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
            *col += 1;
        }
        chars[s..*i].iter().collect::<String>()
    };
    while i < chars.len() {
        let ch = chars[i];
        let (l0, c0) = (line, col);
        if ch == '\n' {
            i += 1;
            line += 1;
            col = 1;
        } else if ch.is_whitespace() {
            i += 1;
            col += 1;
        } else if ch.is_ascii_digit() {
            let int = digits(&mut i, &mut col);
            let mut q = BigRational::from_integer(int.parse::<BigInt>().expect("digits"));
            if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                i += 1;
                col += 1;
                let frac = digits(&mut i, &mut col);
                let den = BigInt::from(10).pow(frac.len() as u32);
                q += BigRational::new(frac.parse::<BigInt>().expect("digits"), den);
            }
            if i + 1 < chars.len() && chars[i] == '/' && chars[i + 1].is_ascii_digit() {
                i += 1;
                col += 1;
                let den = digits(&mut i, &mut col).parse::<BigInt>().expect("digits");
                if den.is_zero() {
                    return Err(perr(l0, c0, "zero denominator"));
                }
                q /= BigRational::from_integer(den);
            }
            let imag = i < chars.len()
                && chars[i] == 'i'
                && !chars.get(i + 1).is_some_and(|c| c.is_alphanumeric() || *c == '_');
            if imag {
                i += 1;
                col += 1;
                out.push(Token { tok: Tok::Imag(q), line: l0, col: c0 });
            } else {
                out.push(Token { tok: Tok::Num(q), line: l0, col: c0 });
            }
        } else if ch.is_ascii_alphabetic() || ch == '_' {
            let s = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
                col += 1;
            }
            if i < chars.len() && chars[i] == '*' {
                i += 1;
                col += 1;
            }
            out.push(Token { tok: Tok::Name(chars[s..i].iter().collect()), line: l0, col: c0 });
        } else if "+-^()[],".contains(ch) {
            i += 1;
            col += 1;
            out.push(Token { tok: Tok::Sym(ch), line: l0, col: c0 });
        } else {
            return Err(perr(l0, c0, format!("unexpected character {ch:?}")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map_or(self.end, |t| (t.line, t.col))
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            Ok(())
        } else {
            let (l, col) = self.here();
            Err(perr(l, col, format!("expected '{c}'")))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut terms = Vec::new();
        let mut neg = false;
        if let Some(Tok::Sym(c @ ('+' | '-'))) = self.peek() {
            neg = *c == '-';
            self.pos += 1;
        }
        terms.push((neg, self.term()?));
        while let Some(Tok::Sym(c @ ('+' | '-'))) = self.peek() {
            let neg = *c == '-';
            self.pos += 1;
            terms.push((neg, self.term()?));
        }
        Ok(if terms.len() == 1 && !terms[0].0 { terms.pop().expect("one term").1 } else { Expr::Sum(terms) })
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(Tok::Num(_) | Tok::Imag(_) | Tok::Name(_) | Tok::Sym('(' | '[')))
    }

    fn term(&mut self) -> Result<Expr> {
        if !self.starts_factor() {
            let (l, c) = self.here();
            return Err(perr(l, c, "expected a term"));
        }
        let mut fs = Vec::new();
        while self.starts_factor() {
            fs.push(self.factor()?);
        }
        Ok(if fs.len() == 1 { fs.pop().expect("one factor") } else { Expr::Product(fs) })
    }

    fn factor(&mut self) -> Result<Expr> {
        let p = self.primary()?;
        if self.peek() == Some(&Tok::Sym('^')) {
            self.pos += 1;
            let (l, c) = self.here();
            match self.peek() {
                Some(Tok::Num(q)) if q.is_integer() => {
                    let k = q.to_integer().try_into().map_err(|_| perr(l, c, "exponent too large"))?;
                    self.pos += 1;
                    return Ok(Expr::Pow(Box::new(p), k));
                }
                _ => return Err(perr(l, c, "expected a nonnegative integer exponent")),
            }
        }
        Ok(p)
    }

    fn primary(&mut self) -> Result<Expr> {
        let t = self.toks[self.pos].clone();
        self.pos += 1;
        match t.tok {
            Tok::Num(q) => Ok(Expr::Scalar(GaussScalar::real(q))),
            Tok::Imag(q) => Ok(Expr::Scalar(GaussScalar::new(BigRational::zero(), q))),
            Tok::Name(name) => Ok(Expr::Atom { name, line: t.line, col: t.col }),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Sym('[') => {
                let p = self.expr()?;
                self.expect(',')?;
                let q = self.expr()?;
                self.expect(']')?;
                Ok(Expr::Commutator(Box::new(p), Box::new(q)))
            }
            Tok::Sym(c) => Err(perr(t.line, t.col, format!("unexpected '{c}'"))),
        }
    }
}

pub fn parse_expr(text: &str) -> Result<Expr> {
    let toks = lex(text)?;
    let last_line = text.lines().count().max(1);
    let last_col = text.lines().last().map_or(0, |l| l.chars().count()) + 1;
    let mut p = Parser { toks, pos: 0, end: (last_line, last_col) };
    if p.toks.is_empty() {
        return Err(perr(1, 1, "empty expression"));
    }
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        let (l, c) = p.here();
        return Err(perr(l, c, "trailing input"));
    }
    Ok(e)
}

/// Target algebra of the evaluator.
trait Ring: Sized + Clone {
    fn scalar(c: GaussScalar) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, o: &Self, at: (usize, usize)) -> Result<Self>;
}

impl Ring for NCPoly {
    fn scalar(c: GaussScalar) -> Self {
        &NCPoly::scalar(c.clone(), 1) + &NCPoly::scalar(c, 2)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, o: &Self, at: (usize, usize)) -> Result<Self> {
        let p = NCPoly::mul(self, o);
        if p.is_zero() && !self.is_zero() && !o.is_zero() {
            return Err(Error::BlockViolation(format!("factors at {}:{} do not compose", at.0, at.1)));
        }
        Ok(p)
    }
}

impl Ring for FreePoly {
    fn scalar(c: GaussScalar) -> Self {
        FreePoly::one().scale(&c)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn neg(&self) -> Self {
        self.scale(&GaussScalar::from_int(-1))
    }
    fn mul(&self, o: &Self, _: (usize, usize)) -> Result<Self> {
        Ok(FreePoly::mul(self, o))
    }
}

fn first_pos(e: &Expr) -> (usize, usize) {
    match e {
        Expr::Atom { line, col, .. } => (*line, *col),
        Expr::Sum(ts) => ts.first().map_or((1, 1), |t| first_pos(&t.1)),
        Expr::Product(fs) => fs.first().map_or((1, 1), first_pos),
        Expr::Pow(b, _) => first_pos(b),
        Expr::Commutator(p, _) => first_pos(p),
        Expr::Scalar(_) => (1, 1),
    }
}

fn pow<R: Ring>(x: &R, k: u32, at: (usize, usize)) -> Result<R> {
    let mut acc = R::scalar(GaussScalar::from_int(1));
    for _ in 0..k {
        acc = acc.mul(x, at)?;
    }
    Ok(acc)
}

/// Resolves a name at `(line, col)` to the factors it stands for (several in letter mode).
type AtomFn<'a, R> = dyn Fn(&str, usize, usize) -> Result<Vec<R>> + 'a;

fn eval<R: Ring>(e: &Expr, atom: &AtomFn<R>) -> Result<R> {
    let at = first_pos(e);
    match e {
        Expr::Scalar(c) => Ok(R::scalar(c.clone())),
        Expr::Atom { name, line, col } => {
            let fs = atom(name, *line, *col)?;
            product(&fs, (*line, *col))
        }
        Expr::Sum(ts) => {
            let mut acc = R::scalar(GaussScalar::zero());
            for (neg, t) in ts {
                let v = eval(t, atom)?;
                acc = acc.add(&if *neg { v.neg() } else { v });
            }
            Ok(acc)
        }
        Expr::Product(fs) => {
            let mut acc = R::scalar(GaussScalar::from_int(1));
            for f in fs {
                acc = acc.mul(&eval(f, atom)?, first_pos(f))?;
            }
            Ok(acc)
        }
        Expr::Pow(b, k) => match b.as_ref() {
            Expr::Atom { name, line, col } => {
                let mut fs = atom(name, *line, *col)?;
                let last = fs.pop().expect("atoms resolve to at least one factor");
                fs.push(pow(&last, *k, at)?);
                product(&fs, at)
            }
            other => pow(&eval(other, atom)?, *k, at),
        },
        Expr::Commutator(p, q) => {
            let (p, q) = (eval(p, atom)?, eval(q, atom)?);
            Ok(p.mul(&q, at)?.add(&q.mul(&p, at)?.neg()))
        }
    }
}

fn product<R: Ring>(fs: &[R], at: (usize, usize)) -> Result<R> {
    let mut acc = R::scalar(GaussScalar::from_int(1));
    for f in fs {
        acc = acc.mul(f, at)?;
    }
    Ok(acc)
}

fn imaginary_unit() -> GaussScalar {
    GaussScalar::i()
}

fn unknown(name: &str, line: usize, col: usize) -> Error {
    Error::UnknownLetter(format!("{name} at {line}:{col}"))
}

/// Resolves an arrow-mode name for `spec`.
pub fn resolve_arrow_name(spec: &QuiverSpec, name: &str) -> Option<NCPoly> {
    match name {
        "a" => return Some(NCPoly::arrow(Arrow::A)),
        "a*" => return Some(NCPoly::arrow(Arrow::AStar)),
        "e1" => return Some(NCPoly::idem(1)),
        "e2" => return Some(NCPoly::idem(2)),
        _ => {}
    }
    for (prefix, mk) in [("d", Arrow::D as fn(u16) -> Arrow), ("b", Arrow::B as fn(u16) -> Arrow)] {
        if let Some(rest) = name.strip_prefix(prefix) {
            if let Ok(k) = rest.parse::<u16>() {
                if (1..=spec.r as u16).contains(&k) && !rest.starts_with('0') {
                    return Some(NCPoly::arrow(mk(k)));
                }
            }
        }
    }
    for (alias, sign, arrow) in spec.aliases() {
        if alias == name {
            let p = NCPoly::arrow(arrow);
            return Some(if sign < 0 { -p } else { p });
        }
    }
    let letters = match spec.orientation {
        Orientation::Zigzag => Alphabet::combined(spec),
        Orientation::SingleX => Alphabet::single_x(spec),
        Orientation::AllD => Alphabet::cycles(spec),
    };
    letters.lookup(name).and_then(|l| letters.expansion(l).cloned())
}

/// Path-algebra element over the arrows of `spec`.
pub fn parse_ncpoly(text: &str, spec: &QuiverSpec) -> Result<NCPoly> {
    let e = parse_expr(text)?;
    eval::<NCPoly>(&e, &|name, line, col| {
        if name == "i" {
            return Ok(vec![NCPoly::scalar(imaginary_unit(), 1).add(&NCPoly::scalar(imaginary_unit(), 2))]);
        }
        resolve_arrow_name(spec, name).map(|p| vec![p]).ok_or_else(|| unknown(name, line, col))
    })
}

/// Splits `name` into letters of `alph` greedily by longest prefix.
pub fn split_letters(alph: &Alphabet, name: &str) -> Option<Vec<Letter>> {
    let mut out = Vec::new();
    let mut rest = name;
    while !rest.is_empty() {
        let best = alph
            .names()
            .iter()
            .enumerate()
            .filter(|(_, n)| !n.is_empty() && rest.starts_with(n.as_str()))
            .max_by_key(|(_, n)| n.len())?;
        out.push(best.0 as Letter);
        rest = &rest[best.1.len()..];
    }
    Some(out)
}

/// Free-algebra element over the letters of `alph`.
pub fn parse_free(text: &str, alph: &Alphabet) -> Result<FreePoly> {
    let e = parse_expr(text)?;
    eval::<FreePoly>(&e, &|name, line, col| {
        if name == "i" && alph.lookup("i").is_none() {
            return Ok(vec![FreePoly::one().scale(&imaginary_unit())]);
        }
        let ls = split_letters(alph, name).ok_or_else(|| unknown(name, line, col))?;
        Ok(ls.into_iter().map(FreePoly::letter).collect())
    })
}

/// Necklace over the letters of `alph`: the free polynomial read cyclically.
pub fn parse_cycsum(text: &str, alph: &Alphabet) -> Result<CycSum> {
    Ok(CycSum::from_free(&parse_free(text, alph)?))
}

/// A single exact scalar such as `-3/2`, `2i` or `(1/2+3i)`.
pub fn parse_scalar(text: &str) -> Result<GaussScalar> {
    let p = parse_free(text, &Alphabet::free::<&str>(&[]))?;
    if p.terms().any(|(w, _)| !w.is_empty()) {
        return Err(perr(1, 1, "expected a scalar"));
    }
    Ok(p.coeff(&[]))
}

fn compact(alph: &Alphabet) -> bool {
    alph.names().iter().all(|n| n.chars().count() == 1 && n != "i")
}

fn letter_word(alph: &Alphabet, w: &[Letter]) -> String {
    let mut s = String::new();
    if compact(alph) {
        for &l in w {
            s.push_str(alph.name(l));
        }
    } else {
        write_atoms(&mut s, w, |l| alph.name(l).to_string());
    }
    s
}

struct Linear<'a>(Vec<(String, &'a GaussScalar)>);

impl std::fmt::Display for Linear<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write_linear(f, self.0.iter().map(|(w, c)| (w.clone(), *c)))
    }
}

/// Letter-mode printer; single-character alphabets print words spelled out without separators.
pub fn print_free(p: &FreePoly, alph: &Alphabet) -> String {
    if !compact(alph) {
        return Named(p, alph).to_string();
    }
    Linear(p.terms().map(|(w, c)| (letter_word(alph, w), c)).collect()).to_string()
}

pub fn print_cycsum(f: &CycSum, alph: &Alphabet) -> String {
    if !compact(alph) {
        return Named(f, alph).to_string();
    }
    Linear(f.terms().map(|(w, c)| (letter_word(alph, w), c)).collect()).to_string()
}

/// Arrow-mode printer using the `x`/`y` aliases of `spec` where they exist; signs of the aliases
/// are folded into the coefficients.
pub fn print_aliased(p: &NCPoly, spec: &QuiverSpec) -> String {
    let mut names: Vec<(Arrow, i8, String)> = Vec::new();
    for (alias, sign, arrow) in spec.aliases() {
        match names.iter_mut().find(|(a, _, _)| *a == arrow) {
            Some(slot) if alias.len() < slot.2.len() => *slot = (arrow, sign, alias),
            Some(_) => {}
            None => names.push((arrow, sign, alias)),
        }
    }
    let coeffs: Vec<(String, GaussScalar)> = p
        .terms()
        .map(|(path, c)| {
            if path.arrows.is_empty() {
                return (if path.tgt == 1 { "e1" } else { "e2" }.to_string(), c.clone());
            }
            let mut neg = false;
            let atoms: Vec<String> = path
                .arrows
                .iter()
                .map(|a| match names.iter().find(|(x, _, _)| x == a) {
                    Some((_, sign, alias)) => {
                        neg ^= *sign < 0;
                        alias.clone()
                    }
                    None => a.name(),
                })
                .collect();
            let mut s = String::new();
            write_atoms(&mut s, &atoms.iter().map(|s| s.as_str()).collect::<Vec<_>>(), |x| x.to_string());
            (s, if neg { -c } else { c.clone() })
        })
        .collect();
    Linear(coeffs.iter().map(|(w, c)| (w.clone(), c)).collect()).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(r: usize) -> QuiverSpec {
        QuiverSpec::zigzag(r).unwrap()
    }

    #[test]
    fn moment_element_from_text() {
        let spec = z(1);
        let p = parse_ncpoly("[a,a*] - d1 b1 + b1 d1", &spec).unwrap();
        let want = &(&NCPoly::arrow(Arrow::A).commutator(&NCPoly::arrow(Arrow::AStar))
            - &NCPoly::word(&[Arrow::D(1), Arrow::B(1)]))
            + &NCPoly::word(&[Arrow::B(1), Arrow::D(1)]);
        assert_eq!(p, want);
        assert!(parse_ncpoly("0", &spec).unwrap().is_zero());
    }

    #[test]
    fn letters_split_by_longest_prefix() {
        let alph = Alphabet::free(&["a", "b"]);
        let f = parse_cycsum("1/2 a b a b + b b a", &alph).unwrap();
        assert_eq!(f, parse_cycsum("1/2 abab + bba", &alph).unwrap());
        assert_eq!(print_cycsum(&f, &alph), "abb + 1/2 abab");
        assert_eq!(parse_cycsum("ab^2", &alph).unwrap(), parse_cycsum("abb", &alph).unwrap());
        let tri = Alphabet::triangular(&z(3));
        let g = parse_cycsum("a^2b21", &tri).unwrap();
        assert_eq!(g, CycSum::word(&[0, 0, Alphabet::b_index(&z(3), 2, 1)], GaussScalar::from_int(1)));
    }

    #[test]
    fn scalars_and_errors() {
        assert_eq!(
            parse_scalar("(1/2-3i)").unwrap(),
            &GaussScalar::ratio(1, 2) - &(&GaussScalar::i() * &GaussScalar::from_int(3))
        );
        assert_eq!(parse_scalar("-0.25").unwrap(), GaussScalar::ratio(-1, 4));
        assert_eq!(parse_scalar("2 i").unwrap(), &GaussScalar::i() * &GaussScalar::from_int(2));
        assert!(matches!(parse_ncpoly("a +", &z(2)), Err(Error::Parse { line: 1, col: 4, .. })));
        assert!(matches!(parse_ncpoly("d5", &z(2)), Err(Error::UnknownLetter(_))));
        assert!(matches!(parse_ncpoly("d1 a", &z(2)), Err(Error::BlockViolation(_))));
        assert!(matches!(parse_ncpoly("a\n  + ]", &z(2)), Err(Error::Parse { line: 2, col: 5, .. })));
    }

    #[test]
    fn aliases_round_trip() {
        let spec = z(3);
        let p = parse_ncpoly("2 a x2 y - 1/3 y* x1* + (1+i) a*^2", &spec).unwrap();
        let text = print_aliased(&p, &spec);
        assert_eq!(parse_ncpoly(&text, &spec).unwrap(), p);
        assert_eq!(parse_ncpoly(&p.to_string(), &spec).unwrap(), p);
        assert_eq!(parse_ncpoly("b21", &spec).unwrap(), parse_ncpoly("x2 y", &spec).unwrap());
    }
}
