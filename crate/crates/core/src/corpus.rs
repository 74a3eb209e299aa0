//! Test signals with known moments.
//!
//! A [`PiecewiseSpec`] describes a function on `[a, b]`, zero outside, whose
//! pieces are either explicit polynomials or solutions of the attached
//! operator given by initial values at the left end of their interval.
//! [`standard_corpus`] collects the polynomial signals used by the
//! verification suites; [`series_corpus`] adds analytic, non-polynomial ones.

use std::fmt;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::concomitant::JumpData;
use crate::diffop::DiffOperator;
use crate::error::{Error, Result};
use crate::momrec::MomentSequence;
use crate::poly::Poly;
use crate::scalar::{parse_rat, rat, ratio, Rat, Scalar};
use crate::reconstruct::snap_to_nodes;
use crate::series::{taylor_coeffs, Propagator};

#[derive(Clone, Debug, PartialEq)]
pub enum Piece {
    Poly(Poly),
    /// `(f, f', ..., f^{(n-1)})` at the left end of the interval.
    Ic(Vec<Rat>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseSpec {
    breakpoints: Vec<Rat>,
    pieces: Vec<Piece>,
}

impl PiecewiseSpec {
    pub fn new(breakpoints: Vec<Rat>, pieces: Vec<Piece>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::InvalidInput("need at least two breakpoints".into()));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput("breakpoints must be strictly increasing".into()));
        }
        if pieces.len() != breakpoints.len() - 1 {
            return Err(Error::InvalidInput(format!(
                "{} breakpoints need {} pieces, got {}",
                breakpoints.len(),
                breakpoints.len() - 1,
                pieces.len()
            )));
        }
        Ok(PiecewiseSpec { breakpoints, pieces })
    }

    /// All pieces explicit polynomials.
    pub fn polynomial(breakpoints: Vec<Rat>, pieces: Vec<Poly>) -> Result<Self> {
        PiecewiseSpec::new(breakpoints, pieces.into_iter().map(Piece::Poly).collect())
    }

    pub fn breakpoints(&self) -> &[Rat] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Number of interior breakpoints.
    pub fn p(&self) -> usize {
        self.breakpoints.len() - 2
    }

    pub fn interval(&self) -> (&Rat, &Rat) {
        (&self.breakpoints[0], self.breakpoints.last().unwrap())
    }

    pub fn is_polynomial(&self) -> bool {
        self.pieces.iter().all(|p| matches!(p, Piece::Poly(_)))
    }

    fn explicit(&self) -> Result<Vec<&Poly>> {
        self.pieces
            .iter()
            .enumerate()
            .map(|(index, p)| match p {
                Piece::Poly(q) => Ok(q),
                Piece::Ic(_) => Err(Error::NonPolynomialPiece { index }),
            })
            .collect()
    }

    /// Check that explicit pieces are annihilated by `op` and that initial
    /// vectors have the right length.
    pub fn check_against(&self, op: &DiffOperator) -> Result<()> {
        for (index, piece) in self.pieces.iter().enumerate() {
            match piece {
                Piece::Poly(q) if !op.apply(q).is_zero() => {
                    return Err(Error::InvalidInput(format!("piece {index} is not annihilated by the operator")));
                }
                Piece::Ic(v) if v.len() != op.order() => {
                    return Err(Error::InvalidInput(format!(
                        "piece {index} has {} initial values, operator order is {}",
                        v.len(),
                        op.order()
                    )));
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Parse `breakpoints: ...` followed by one `poly: ...` or `ic: ...` line per piece.
    pub fn parse(text: &str) -> Result<Self> {
        let mut breakpoints = None;
        let mut pieces = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let err = |m: &str| Error::Parse(format!("signal line {}: {m}", lineno + 1));
            let (head, body) = line.split_once(':').ok_or_else(|| err("expected `key: values`"))?;
            let values = body.split_whitespace().map(parse_rat).collect::<Result<Vec<_>>>()?;
            match head.trim() {
                "breakpoints" if breakpoints.is_none() => breakpoints = Some(values),
                "breakpoints" => return Err(err("duplicate breakpoints line")),
                "poly" => pieces.push(Piece::Poly(Poly::new(values))),
                "ic" => pieces.push(Piece::Ic(values)),
                other => return Err(err(&format!("unknown key `{other}`"))),
            }
        }
        let breakpoints = breakpoints.ok_or_else(|| Error::Parse("missing breakpoints line".into()))?;
        PiecewiseSpec::new(breakpoints, pieces).map_err(|e| match e {
            Error::InvalidInput(m) => Error::Parse(m),
            other => other,
        })
    }

    pub fn to_text(&self) -> String {
        let join = |v: &[Rat]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ");
        let mut out = format!("breakpoints: {}\n", join(&self.breakpoints));
        for piece in &self.pieces {
            match piece {
                Piece::Poly(q) if q.is_zero() => out.push_str("poly: 0\n"),
                Piece::Poly(q) => out.push_str(&format!("poly: {}\n", join(q.coeffs()))),
                Piece::Ic(v) => out.push_str(&format!("ic: {}\n", join(v))),
            }
        }
        out
    }
}

impl fmt::Display for PiecewiseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// `Op_m = (1 - x²)∂² - 2x∂ + m(m+1)` and the Legendre polynomial `P_m`.
pub fn legendre(m: usize) -> (DiffOperator, Poly) {
    let mm = m as i64;
    let op = DiffOperator::from_i64(&[&[mm * (mm + 1)], &[0, -2], &[1, 0, -1]]).expect("valid operator");
    let (mut prev, mut cur) = (Poly::one(), Poly::x());
    if m == 0 {
        return (op, prev);
    }
    for k in 1..m as i64 {
        let next = (&(&Poly::x() * &cur).scale(&rat(2 * k + 1)) - &prev.scale(&rat(k))).scale(&ratio(1, k + 1));
        prev = std::mem::replace(&mut cur, next);
    }
    (op, cur)
}

/// The first-order operator `g ∂ - g'`, which annihilates `g`.
pub fn annihilator_of_poly(g: &Poly) -> Result<DiffOperator> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    DiffOperator::new(vec![-g.derivative(1), g.clone()])
}

/// The Wronskian operator `u ↦ W(g_1, ..., g_r, u)`, whose kernel is the span
/// of `basis`. Fails when the basis is linearly dependent.
pub fn span_annihilator(basis: &[Poly]) -> Result<DiffOperator> {
    let r = basis.len();
    if r == 0 {
        return Err(Error::InvalidInput("empty basis".into()));
    }
    // rows: derivative order 0..=r; columns: basis functions
    let table: Vec<Vec<Poly>> = (0..=r).map(|i| basis.iter().map(|g| g.derivative(i)).collect()).collect();
    let coeffs = (0..=r)
        .map(|i| {
            let minor: Vec<Vec<Poly>> = table.iter().enumerate().filter(|&(row, _)| row != i).map(|(_, v)| v.clone()).collect();
            let d = poly_det(&minor);
            if (i + r).is_multiple_of(2) {
                d
            } else {
                -d
            }
        })
        .collect();
    DiffOperator::new(coeffs)
}

fn poly_det(m: &[Vec<Poly>]) -> Poly {
    match m.len() {
        0 => Poly::one(),
        1 => m[0][0].clone(),
        n => (0..n).fold(Poly::zero(), |acc, col| {
            if m[0][col].is_zero() {
                return acc;
            }
            let minor: Vec<Vec<Poly>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(c, _)| c != col).map(|(_, p)| p.clone()).collect())
                .collect();
            let term = &m[0][col] * &poly_det(&minor);
            if col % 2 == 0 {
                acc + term
            } else {
                acc - term
            }
        }),
    }
}

/// `m_0 ..= m_last` by exact integration of explicit pieces.
pub fn exact_moments(spec: &PiecewiseSpec, last: usize) -> Result<MomentSequence<Rat>> {
    let pieces = spec.explicit()?;
    let prims: Vec<(Poly, &Rat, &Rat)> = pieces
        .iter()
        .zip(spec.breakpoints.windows(2))
        .map(|(q, w)| ((*q).clone(), &w[0], &w[1]))
        .collect();
    let values = (0..=last)
        .map(|k| prims.iter().fold(Rat::zero(), |acc, (q, a, b)| acc + q.shl(k).integrate(a, b)))
        .collect();
    Ok(MomentSequence::new(values))
}

/// Jump vectors of length `n` at every breakpoint, with `f ≡ 0` outside.
pub fn jump_data(spec: &PiecewiseSpec, n: usize) -> Result<JumpData<Rat>> {
    let pieces = spec.explicit()?;
    let count = spec.breakpoints.len();
    let jumps = spec
        .breakpoints
        .iter()
        .enumerate()
        .map(|(j, xi)| {
            (0..n)
                .map(|i| {
                    let right = if j + 1 < count { pieces[j].derivative(i).eval(xi) } else { Rat::zero() };
                    let left = if j > 0 { pieces[j - 1].derivative(i).eval(xi) } else { Rat::zero() };
                    right - left
                })
                .collect()
        })
        .collect();
    JumpData::new(spec.breakpoints.clone(), jumps)
}

/// Moments from the power-series path together with an error estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesMoments {
    pub moments: MomentSequence<f64>,
    /// Bound-style estimate from the last retained Taylor terms.
    pub error_estimate: f64,
}

/// Moments of a spec whose pieces may be given by initial values. Each such
/// piece is expanded once at its left end to `degree` terms, exactly, and
/// integrated term-wise; explicit pieces are integrated directly.
pub fn series_moments(op: &DiffOperator, spec: &PiecewiseSpec, last: usize, degree: usize, tol: f64) -> Result<SeriesMoments> {
    spec.check_against(op)?;
    let n = op.order();
    let mut polys = Vec::with_capacity(spec.pieces.len());
    let mut estimate = 0.0;
    for (piece, w) in spec.pieces.iter().zip(spec.breakpoints.windows(2)) {
        let (a, b) = (&w[0], &w[1]);
        match piece {
            Piece::Poly(q) => polys.push(q.clone()),
            Piece::Ic(ic) => {
                if op.leading().count_real_roots_in(a, b) > 0 {
                    return Err(Error::SingularExpansionPoint { a: a.to_string(), b: b.to_string() });
                }
                let coeffs = taylor_coeffs(op, a, ic, degree.max(n))?;
                let h = (b - a).to_f64();
                let reach = a.to_f64().abs().max(b.to_f64().abs()).max(1.0);
                let tail: f64 = coeffs.iter().enumerate().rev().take(n).map(|(t, c)| c.to_f64().abs() * h.powi(t as i32)).sum();
                estimate += tail * h * reach.powi(last as i32);
                polys.push(Poly::new(coeffs).shift(&-a.clone()));
            }
        }
    }
    if estimate > tol {
        return Err(Error::AccuracyNotMet { estimate, tol });
    }
    let exact = PiecewiseSpec::polynomial(spec.breakpoints.clone(), polys)?;
    Ok(SeriesMoments { moments: exact_moments(&exact, last)?.to_f64(), error_estimate: estimate })
}

/// Evaluate the signal on `grid`: right limits at breakpoints, the left limit
/// at `b`, zero outside `[a, b]`. Initial-value pieces are propagated by
/// Taylor steps in double precision. Points within rounding distance of a
/// breakpoint count as the breakpoint, as in signal reconstruction.
pub fn sample(op: &DiffOperator, spec: &PiecewiseSpec, grid: &[f64]) -> Result<Vec<f64>> {
    let bps: Vec<f64> = spec.breakpoints.iter().map(Scalar::to_f64).collect();
    let grid = &snap_to_nodes(grid, &bps)[..];
    let prop = Propagator::new(op);
    let mut out = vec![0.0; grid.len()];
    let last = spec.pieces.len() - 1;
    for (idx, piece) in spec.pieces.iter().enumerate() {
        let (a, b) = (bps[idx], bps[idx + 1]);
        let members: Vec<usize> = (0..grid.len())
            .filter(|&g| grid[g] >= a && (grid[g] < b || (idx == last && grid[g] <= b)))
            .collect();
        let mut order: Vec<usize> = members.clone();
        order.sort_by(|&i, &j| grid[i].total_cmp(&grid[j]));
        match piece {
            Piece::Poly(q) => {
                for g in order {
                    out[g] = q.eval_f64(grid[g]);
                }
            }
            Piece::Ic(ic) => {
                let xs: Vec<f64> = order.iter().map(|&g| grid[g]).collect();
                let v0: Vec<f64> = ic.iter().map(Scalar::to_f64).collect();
                let (vals, _) = prop.sweep(a, &v0, b, &xs)?;
                for (g, v) in order.into_iter().zip(vals) {
                    out[g] = v;
                }
            }
        }
    }
    Ok(out)
}

/// Jump data in double precision, valid for initial-value pieces too.
pub fn jump_data_f64(op: &DiffOperator, spec: &PiecewiseSpec) -> Result<JumpData<f64>> {
    let n = op.order();
    let bps: Vec<f64> = spec.breakpoints.iter().map(Scalar::to_f64).collect();
    let prop = Propagator::new(op);
    // (right limit at left end, left limit at right end) per piece
    let mut ends: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
    for (idx, piece) in spec.pieces.iter().enumerate() {
        let (a, b) = (&spec.breakpoints[idx], &spec.breakpoints[idx + 1]);
        ends.push(match piece {
            Piece::Poly(q) => (
                (0..n).map(|i| q.derivative(i).eval(a).to_f64()).collect(),
                (0..n).map(|i| q.derivative(i).eval(b).to_f64()).collect(),
            ),
            Piece::Ic(ic) => {
                let v0: Vec<f64> = ic.iter().map(Scalar::to_f64).collect();
                let (_, v1) = prop.sweep(bps[idx], &v0, bps[idx + 1], &[])?;
                (v0, v1)
            }
        });
    }
    let count = bps.len();
    let jumps = (0..count)
        .map(|j| {
            (0..n)
                .map(|i| {
                    let right = if j + 1 < count { ends[j].0[i] } else { 0.0 };
                    let left = if j > 0 { ends[j - 1].1[i] } else { 0.0 };
                    right - left
                })
                .collect()
        })
        .collect();
    JumpData::new(bps, jumps)
}

/// A named signal together with its annihilating operator.
#[derive(Clone, Debug, PartialEq)]
pub struct CorpusSignal {
    pub name: String,
    pub op: DiffOperator,
    pub spec: PiecewiseSpec,
}

impl CorpusSignal {
    fn new(name: impl Into<String>, op: DiffOperator, spec: PiecewiseSpec) -> Self {
        let signal = CorpusSignal { name: name.into(), op, spec };
        signal.spec.check_against(&signal.op).expect("corpus signal must satisfy its operator");
        signal
    }

    /// Whether `p_n` is nonzero on all of `[a, b]`.
    pub fn leading_nonvanishing(&self) -> bool {
        let (a, b) = self.spec.interval();
        self.op.leading().count_real_roots_in(a, b) == 0
    }

    /// Smallest gap between consecutive breakpoints.
    pub fn min_separation(&self) -> Rat {
        self.spec.breakpoints.windows(2).map(|w| &w[1] - &w[0]).min().unwrap()
    }
}

fn r(s: &str) -> Rat {
    parse_rat(s).expect("literal")
}

fn rs(items: &[&str]) -> Vec<Rat> {
    items.iter().map(|s| r(s)).collect()
}

fn p(coeffs: &[&str]) -> Poly {
    Poly::new(rs(coeffs))
}

/// Random piecewise polynomial of degree below `n`, annihilated by `∂^n`,
/// with a value jump at every breakpoint.
fn random_derivative_signal(rng: &mut ChaCha8Rng, n: usize, p: usize) -> PiecewiseSpec {
    let mut interior: Vec<i64> = Vec::new();
    while interior.len() < p {
        let c = rng.gen_range(-8..=8);
        if interior.iter().all(|&x: &i64| (x - c).abs() >= 3) {
            interior.push(c);
        }
    }
    interior.sort_unstable();
    let mut breakpoints = vec![rat(-1)];
    breakpoints.extend(interior.iter().map(|&c| ratio(c, 10)));
    breakpoints.push(rat(1));
    loop {
        let pieces: Vec<Poly> = (0..=p)
            .map(|_| {
                Poly::new(
                    (0..n)
                        .map(|_| ratio(rng.gen_range(-4..=4), rng.gen_range(1..=3)))
                        .collect(),
                )
            })
            .collect();
        let spec = PiecewiseSpec::polynomial(breakpoints.clone(), pieces).unwrap();
        let jumps = jump_data(&spec, n).unwrap();
        if jumps.jumps().iter().all(|d| !d[0].is_zero()) {
            return spec;
        }
    }
}

/// Polynomial signals with exact moment oracles.
///
/// Includes Legendre polynomials on `[-1, 1]` (jumps only at roots of `p_n`),
/// scaled and split Legendre signals away from those roots, random
/// piecewise polynomials under `∂^n`, and signals built from
/// [`annihilator_of_poly`] and [`span_annihilator`].
pub fn standard_corpus() -> Vec<CorpusSignal> {
    let mut out = Vec::new();
    for m in 0..=10 {
        let (op, pm) = legendre(m);
        out.push(CorpusSignal::new(
            format!("legendre-{m}"),
            op,
            PiecewiseSpec::polynomial(rs(&["-1", "1"]), vec![pm]).unwrap(),
        ));
    }
    for m in 0..=5 {
        let (op, pm) = legendre(m);
        out.push(CorpusSignal::new(
            format!("legendre-{m}-inner"),
            op,
            PiecewiseSpec::polynomial(rs(&["-1/2", "1/2"]), vec![pm]).unwrap(),
        ));
    }
    for m in 1..=5 {
        let (op, pm) = legendre(m);
        out.push(CorpusSignal::new(
            format!("legendre-{m}-split"),
            op,
            PiecewiseSpec::polynomial(rs(&["-1/2", "0", "1/2"]), vec![pm.clone(), pm.scale(&rat(2))]).unwrap(),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for n in 1..=3 {
        for pp in 0..=3 {
            for copy in 0..2 {
                let spec = random_derivative_signal(&mut rng, n, pp);
                let mut coeffs = vec![Poly::zero(); n + 1];
                coeffs[n] = Poly::one();
                out.push(CorpusSignal::new(
                    format!("d{n}-p{pp}-{copy}"),
                    DiffOperator::new(coeffs).unwrap(),
                    spec,
                ));
            }
        }
    }

    let d1 = DiffOperator::from_i64(&[&[], &[1]]).unwrap();
    out.push(CorpusSignal::new("unit-step", d1, PiecewiseSpec::polynomial(rs(&["0", "1"]), vec![Poly::one()]).unwrap()));
    let d2 = DiffOperator::from_i64(&[&[], &[], &[1]]).unwrap();
    out.push(CorpusSignal::new(
        "step-ramp",
        d2,
        PiecewiseSpec::polynomial(rs(&["0", "1/2", "1"]), vec![Poly::one(), Poly::x()]).unwrap(),
    ));

    let scaled = |g: &Poly, bps: &[&str], scales: &[&str]| {
        PiecewiseSpec::polynomial(rs(bps), scales.iter().map(|c| g.scale(&r(c))).collect()).unwrap()
    };
    let single = [
        ("shifted-line", p(&["2", "1"]), vec!["0", "1/2", "1"], vec!["1", "-2"]),
        ("quadratic-bump", p(&["1", "0", "1"]), vec!["-1", "0", "1"], vec!["3", "1"]),
        ("quadratic-far", p(&["-1", "0", "3"]), vec!["1", "3/2", "2"], vec!["1", "2"]),
        ("quadratic-roots", p(&["-1", "0", "3"]), vec!["-1", "0", "1"], vec!["1", "-1"]),
        ("cubic-reach", p(&["2", "0", "0", "1"]), vec!["0", "1/2", "1"], vec!["1", "-1"]),
        ("line-through-zero", p(&["0", "1"]), vec!["-1", "0", "1"], vec!["1", "3"]),
        ("line-right", p(&["0", "1"]), vec!["1/2", "1", "3/2"], vec!["1", "2"]),
        ("cubic-three", p(&["1", "-1", "0", "1/2"]), vec!["-1", "-2/5", "1/5", "1"], vec!["1", "-1/2", "2"]),
    ];
    for (name, g, bps, scales) in single {
        out.push(CorpusSignal::new(name, annihilator_of_poly(&g).unwrap(), scaled(&g, &bps, &scales)));
    }

    let spans: [(&str, Vec<Poly>, Vec<&str>, Vec<Poly>); 5] = [
        (
            "span-1-x2",
            vec![Poly::one(), p(&["0", "0", "1"])],
            vec!["1/2", "1", "3/2"],
            vec![p(&["1", "0", "1"]), p(&["2", "0", "-1"])],
        ),
        (
            "span-1-x2-origin",
            vec![Poly::one(), p(&["0", "0", "1"])],
            vec!["-1", "0", "1"],
            vec![p(&["0", "0", "1"]), p(&["1", "0", "-1"])],
        ),
        (
            "span-x-x3",
            vec![Poly::x(), p(&["0", "0", "0", "1"])],
            vec!["1/2", "1", "3/2"],
            vec![p(&["0", "1", "0", "1"]), p(&["0", "-2", "0", "1/2"])],
        ),
        (
            "span-1-x-x3",
            vec![Poly::one(), Poly::x(), p(&["0", "0", "0", "1"])],
            vec!["1/4", "3/4", "5/4"],
            vec![p(&["1", "0", "0", "1"]), p(&["0", "1", "0", "-2"])],
        ),
        (
            "span-1-x-plus-x3",
            vec![Poly::one(), p(&["0", "1", "0", "1"])],
            vec!["-1", "-2/5", "1/5", "1"],
            vec![p(&["1", "1", "0", "1"]), p(&["0", "-1", "0", "-1"]), p(&["2", "1/2", "0", "1/2"])],
        ),
    ];
    for (name, basis, bps, pieces) in spans {
        out.push(CorpusSignal::new(
            name,
            span_annihilator(&basis).unwrap(),
            PiecewiseSpec::polynomial(rs(&bps), pieces).unwrap(),
        ));
    }
    out
}

/// Signals with analytic, non-polynomial pieces given by initial values.
pub fn series_corpus() -> Vec<CorpusSignal> {
    let ic = |bps: &[&str], ics: &[&[&str]]| {
        PiecewiseSpec::new(rs(bps), ics.iter().map(|v| Piece::Ic(rs(v))).collect()).unwrap()
    };
    let exp = DiffOperator::from_i64(&[&[-1], &[1]]).unwrap();
    let osc = DiffOperator::from_i64(&[&[1], &[], &[1]]).unwrap();
    let airy = DiffOperator::from_i64(&[&[0, -1], &[], &[1]]).unwrap();
    let (op2, _) = legendre(2);
    vec![
        CorpusSignal::new("exp", exp.clone(), ic(&["0", "1"], &[&["1"]])),
        CorpusSignal::new("exp-split", exp, ic(&["0", "1/2", "1"], &[&["1"], &["-2"]])),
        CorpusSignal::new("cos-sin", osc, ic(&["0", "1", "3/2"], &[&["1", "0"], &["0", "2"]])),
        CorpusSignal::new("airy", airy, ic(&["-1", "1"], &[&["1", "0"]])),
        CorpusSignal::new("legendre-2-ic", op2, ic(&["-1/2", "1/2"], &[&["-1/8", "-3/2"]])),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_polynomials() {
        let (op, p2) = legendre(2);
        assert_eq!(p2, p(&["-1/2", "0", "3/2"]));
        assert!(op.apply(&p2).is_zero());
        assert_eq!(legendre(0).1, Poly::one());
        let (op1, p1) = legendre(1);
        assert_eq!(p1, Poly::x());
        assert_eq!(op1, DiffOperator::from_i64(&[&[2], &[0, -2], &[1, 0, -1]]).unwrap());
        for m in 0..=10 {
            let (op, pm) = legendre(m);
            assert!(op.apply(&pm).is_zero());
            assert_eq!(pm.eval(&rat(1)), rat(1));
        }
    }

    #[test]
    fn annihilators() {
        assert_eq!(annihilator_of_poly(&Poly::x()).unwrap(), DiffOperator::from_i64(&[&[-1], &[0, 1]]).unwrap());
        assert_eq!(annihilator_of_poly(&Poly::one()).unwrap(), DiffOperator::from_i64(&[&[], &[1]]).unwrap());
        assert_eq!(
            annihilator_of_poly(&p(&["-1", "0", "3"])).unwrap(),
            DiffOperator::from_i64(&[&[0, -6], &[-1, 0, 3]]).unwrap()
        );
        assert_eq!(annihilator_of_poly(&Poly::zero()), Err(Error::ZeroPolynomial));
        let w = span_annihilator(&[Poly::one(), p(&["0", "0", "1"])]).unwrap();
        assert_eq!(w, DiffOperator::from_i64(&[&[], &[-2], &[0, 2]]).unwrap());
        assert!(span_annihilator(&[Poly::x(), p(&["0", "2"])]).is_err());
    }

    #[test]
    fn moment_oracles() {
        let unit = PiecewiseSpec::polynomial(rs(&["0", "1"]), vec![Poly::one()]).unwrap();
        let m = exact_moments(&unit, 4).unwrap();
        assert_eq!(m.values(), &rs(&["1", "1/2", "1/3", "1/4", "1/5"])[..]);
        let p2 = PiecewiseSpec::polynomial(rs(&["-1", "1"]), vec![legendre(2).1]).unwrap();
        let m = exact_moments(&p2, 2).unwrap();
        assert_eq!(m.values(), &rs(&["0", "0", "4/15"])[..]);
        let step = PiecewiseSpec::polynomial(rs(&["0", "1/2", "1"]), vec![Poly::one(), Poly::x()]).unwrap();
        assert_eq!(exact_moments(&step, 0).unwrap().values()[0], r("7/8"));
        let series = PiecewiseSpec::new(rs(&["0", "1"]), vec![Piece::Ic(rs(&["1"]))]).unwrap();
        assert_eq!(exact_moments(&series, 3), Err(Error::NonPolynomialPiece { index: 0 }));
    }

    #[test]
    fn jump_vectors() {
        let unit = PiecewiseSpec::polynomial(rs(&["0", "1"]), vec![Poly::one()]).unwrap();
        let j = jump_data(&unit, 1).unwrap();
        assert_eq!(j.jumps(), &[rs(&["1"]), rs(&["-1"])]);
        let p2 = PiecewiseSpec::polynomial(rs(&["-1", "1"]), vec![legendre(2).1]).unwrap();
        let j = jump_data(&p2, 2).unwrap();
        assert_eq!(j.jumps(), &[rs(&["1", "-3"]), rs(&["-1", "-3"])]);
        let cont = PiecewiseSpec::polynomial(rs(&["0", "1", "2"]), vec![Poly::x(), Poly::x()]).unwrap();
        assert_eq!(jump_data(&cont, 2).unwrap().jumps()[1], rs(&["0", "0"]));
    }

    #[test]
    fn exponential_series_moments() {
        let exp = DiffOperator::from_i64(&[&[-1], &[1]]).unwrap();
        let spec = PiecewiseSpec::new(rs(&["0", "1"]), vec![Piece::Ic(rs(&["1"]))]).unwrap();
        let sm = series_moments(&exp, &spec, 3, 30, 1e-12).unwrap();
        assert!((sm.moments.values()[0] - (std::f64::consts::E - 1.0)).abs() < 1e-12);
        // ∫ x e^x over [0, 1] is 1
        assert!((sm.moments.values()[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn singular_series_piece() {
        let op = DiffOperator::from_i64(&[&[-1], &[0, 1]]).unwrap();
        let spec = PiecewiseSpec::new(rs(&["-1", "1"]), vec![Piece::Ic(rs(&["1"]))]).unwrap();
        assert!(matches!(series_moments(&op, &spec, 3, 20, 1e-12), Err(Error::SingularExpansionPoint { .. })));
    }

    #[test]
    fn spec_text_round_trip() {
        let text = "breakpoints: 0 1/2 1\npoly: 1\nic: 2 -1\n";
        let spec = PiecewiseSpec::parse(text).unwrap();
        assert_eq!(spec.to_text(), text);
        assert!(PiecewiseSpec::parse("poly: 1\n").is_err());
        assert!(PiecewiseSpec::parse("breakpoints: 0 1\npoly: 1\npoly: 2\n").is_err());
    }

    #[test]
    fn corpus_is_large_enough() {
        let corpus = standard_corpus();
        assert!(corpus.len() >= 50, "only {} signals", corpus.len());
        let mut names: Vec<&str> = corpus.iter().map(|s| s.name.as_str()).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), corpus.len());
        assert_eq!(series_corpus().len(), 5);
    }
}
