//! Dense complex linear algebra for the walk: reflection operators built
//! from tessellation cells, their exponentials in closed form, ordered
//! staggered products and powers, a continuous-time reference evolution, and
//! comparison up to a global phase.
//!
//! A reflection operator squares to the identity, so its exponential is
//! `cos(phi) I + i sin(phi) H` with no series evaluation. Angles are exact
//! rational multiples of pi and are reduced mod 2 pi in rational arithmetic
//! before any trigonometry, which keeps schedule values like full turns
//! exactly trivial.

use crate::cayley::AdjacencyMatrix;
use crate::error::{Error, Result};
use crate::group::ElementSet;
use crate::tessellation::{ConnectionPartition, CoveringKind, Tessellation};
use nalgebra::{Complex, DMatrix, SymmetricEigen};
use num_rational::Ratio;
use serde::Serialize;
use std::fmt;
use std::ops::Mul;

/// Dense complex matrix used for every operator in the walk.
pub type ComplexMatrix = DMatrix<Complex<f64>>;

/// Largest entry magnitude of `m - n`.
pub fn max_diff(m: &ComplexMatrix, n: &ComplexMatrix) -> f64 {
    (m - n).iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Largest entry magnitude.
pub fn max_norm(m: &ComplexMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// `‖M†M − I‖_max`.
pub fn unitarity_residual(m: &ComplexMatrix) -> f64 {
    let n = m.nrows();
    max_diff(&(m.adjoint() * m), &ComplexMatrix::identity(n, n))
}

/// An exact rational multiple of pi.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Angle(Ratio<i64>);

impl Angle {
    pub const ZERO: Angle = Angle(Ratio::new_raw(0, 1));

    /// The angle `(num / den) * pi`, reduced.
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::ZeroDenominator);
        }
        Ok(Angle(Ratio::new(num, den)))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    /// Pi multiple reduced into `[0, 2)` in rational arithmetic.
    fn reduced(&self) -> Ratio<i64> {
        let two = Ratio::from_integer(2);
        let mut r = self.0 % two;
        if r < Ratio::from_integer(0) {
            r += two;
        }
        r
    }

    /// Cosine and sine, with quarter-turn multiples returned exactly.
    pub fn cos_sin(&self) -> (f64, f64) {
        let r = self.reduced();
        let quarter = |n| Ratio::new(n, 2);
        if r == Ratio::from_integer(0) {
            (1.0, 0.0)
        } else if r == quarter(1) {
            (0.0, 1.0)
        } else if r == Ratio::from_integer(1) {
            (-1.0, 0.0)
        } else if r == quarter(3) {
            (0.0, -1.0)
        } else {
            let x = ratio_to_f64(r) * std::f64::consts::PI;
            (x.cos(), x.sin())
        }
    }

    /// The raw value in radians, not reduced; use when the angle scales a
    /// matrix whose eigenvalues are not half-integers.
    pub fn radians(&self) -> f64 {
        ratio_to_f64(self.0) * std::f64::consts::PI
    }

    /// `e^{i self}` as a complex scalar.
    pub fn cis(&self) -> Complex<f64> {
        let (c, s) = self.cos_sin();
        Complex::new(c, s)
    }

    /// Nearest rational multiple of pi to `x` radians, by continued-fraction
    /// approximation of `x / pi` with denominators up to 10^12.
    pub fn from_radians_approx(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::NonFiniteAngle(x));
        }
        let target = x / std::f64::consts::PI;
        let (num, den) = rational_approx(target, 1_000_000_000_000);
        Angle::new(num, den)
    }
}

impl Mul<i64> for Angle {
    type Output = Angle;

    fn mul(self, k: i64) -> Angle {
        Angle(self.0 * k)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = (self.numer(), self.denom());
        if n == 0 {
            write!(f, "0")
        } else if d == 1 {
            write!(f, "{n} pi")
        } else {
            write!(f, "{n}/{d} pi")
        }
    }
}

impl Serialize for Angle {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

fn ratio_to_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Best rational approximation of `x` with denominator at most `max_den`,
/// by the continued-fraction convergents.
fn rational_approx(x: f64, max_den: i64) -> (i64, i64) {
    let neg = x < 0.0;
    let mut t = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (1i64, 0i64, t.floor() as i64, 1i64);
    for _ in 0..64 {
        let frac = t - t.floor();
        if frac < 1e-18 {
            break;
        }
        t = 1.0 / frac;
        let a = t.floor() as i64;
        let (p2, q2) = (
            a.saturating_mul(p1).saturating_add(p0),
            a.saturating_mul(q1).saturating_add(q0),
        );
        if q2 > max_den {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    (if neg { -p1 } else { p1 }, q1)
}

/// One complex entry in the dump format `re±imj`, 17 significant digits
/// each, enough to round-trip a double exactly.
pub fn format_complex_entry(z: Complex<f64>) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{:.16e}{}{:.16e}j", z.re, sign, z.im.abs())
}

fn parse_complex_entry(s: &str) -> Option<Complex<f64>> {
    let body = s.trim().strip_suffix('j')?;
    let mut split = None;
    let mut prev = '\0';
    for (idx, ch) in body.char_indices() {
        if idx > 0 && (ch == '+' || ch == '-') && prev != 'e' && prev != 'E' {
            split = Some(idx);
            break;
        }
        prev = ch;
    }
    let split = split?;
    let re: f64 = body[..split].parse().ok()?;
    let im: f64 = body[split..].parse().ok()?;
    Some(Complex::new(re, im))
}

/// Render a matrix as CSV, row-major, one row per line.
pub fn matrix_to_csv(m: &ComplexMatrix) -> String {
    let mut out = String::new();
    for r in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .map(|c| format_complex_entry(m[(r, c)]))
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Parse a matrix dumped by [`matrix_to_csv`]. All rows must have the same
/// number of entries.
pub fn matrix_from_csv(text: &str) -> Result<ComplexMatrix> {
    let mut rows: Vec<Vec<Complex<f64>>> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for cell in line.split(',') {
            let z = parse_complex_entry(cell).ok_or_else(|| Error::CsvParse {
                line: idx + 1,
                message: format!("bad complex entry {cell:?}"),
            })?;
            row.push(z);
        }
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::CsvParse {
                    line: idx + 1,
                    message: format!("expected {} entries, found {}", first.len(), row.len()),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::CsvParse {
            line: 0,
            message: "no rows".into(),
        });
    }
    let (nr, nc) = (rows.len(), rows[0].len());
    Ok(ComplexMatrix::from_fn(nr, nc, |r, c| rows[r][c]))
}

/// A Hermitian unitary built from one tessellation's uniform cells.
#[derive(Debug, Clone)]
pub struct ReflectionOperator {
    piece: ElementSet,
    gamma: usize,
    cell_count: usize,
    matrix: DMatrix<f64>,
}

impl ReflectionOperator {
    /// Build the reflection from a tessellation, twice over: once as
    /// `2 sum |u><u| - I` from the uniform cell vectors, once as
    /// `(2A + (2 - gamma) I) / gamma` from the adjacency matrix. The two
    /// routes must agree to 1e-12.
    pub fn from_tessellation(t: &Tessellation) -> Result<Self> {
        let gamma = t.gamma();
        if t.cells().iter().any(|c| c.len() != gamma) {
            return Err(Error::NonUniformCells);
        }
        let n = t.dim();
        let mut projector_route = DMatrix::<f64>::from_diagonal_element(n, n, -1.0);
        let weight = 2.0 / gamma as f64;
        for cell in t.cells() {
            for a in cell.iter() {
                for b in cell.iter() {
                    projector_route[(a, b)] += weight;
                }
            }
        }
        let mut adjacency_route = DMatrix::<f64>::zeros(n, n);
        let shift = (2.0 - gamma as f64) / gamma as f64;
        for r in 0..n {
            for c in 0..n {
                adjacency_route[(r, c)] = weight * t.adjacency().0[(r, c)] as f64;
            }
            adjacency_route[(r, r)] += shift;
        }
        let gap = (&projector_route - &adjacency_route)
            .iter()
            .fold(0.0f64, |acc, x| acc.max(x.abs()));
        assert!(
            gap < 1e-12,
            "projector and adjacency constructions disagree by {gap}"
        );
        Ok(ReflectionOperator {
            piece: t.piece().clone(),
            gamma,
            cell_count: t.cells().len(),
            matrix: projector_route,
        })
    }

    pub fn piece(&self) -> &ElementSet {
        &self.piece
    }

    pub fn gamma(&self) -> usize {
        self.gamma
    }

    pub fn cell_count(&self) -> usize {
        self.cell_count
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn complex(&self) -> ComplexMatrix {
        self.matrix.map(|x| Complex::new(x, 0.0))
    }

    /// `‖H − Hᵀ‖_max`; the matrix is real, so this is the Hermiticity gap.
    pub fn hermiticity_residual(&self) -> f64 {
        (&self.matrix - self.matrix.transpose())
            .iter()
            .fold(0.0f64, |acc, x| acc.max(x.abs()))
    }

    /// `‖H² − I‖_max`.
    pub fn involution_residual(&self) -> f64 {
        let n = self.dim();
        (&self.matrix * &self.matrix - DMatrix::<f64>::identity(n, n))
            .iter()
            .fold(0.0f64, |acc, x| acc.max(x.abs()))
    }
}

/// `exp(i phi H) = cos(phi) I + i sin(phi) H`, exact because `H² = I`.
pub fn expi_reflection(h: &ReflectionOperator, phi: Angle) -> ComplexMatrix {
    let (c, s) = phi.cos_sin();
    let n = h.dim();
    let mut out = ComplexMatrix::zeros(n, n);
    for r in 0..n {
        for col in 0..n {
            let im = s * h.matrix[(r, col)];
            let re = if r == col { c } else { 0.0 };
            out[(r, col)] = Complex::new(re, im);
        }
    }
    out
}

/// One staggered step with its factor bookkeeping.
#[derive(Debug, Clone)]
pub struct EvolutionOperator {
    matrix: ComplexMatrix,
    provenance: Vec<(usize, Angle)>,
}

impl EvolutionOperator {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Ordered (tessellation index, angle) factors, leftmost first.
    pub fn provenance(&self) -> &[(usize, Angle)] {
        &self.provenance
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn unitarity_residual(&self) -> f64 {
        unitarity_residual(&self.matrix)
    }

    /// `U^T` by repeated squaring.
    pub fn power(&self, t: u64) -> ComplexMatrix {
        matrix_power(&self.matrix, t)
    }
}

/// Ordered product `exp(i theta_1 H_1) ... exp(i theta_k H_k)`; the first
/// list element is the leftmost factor.
pub fn staggered_step(hs: &[ReflectionOperator], thetas: &[Angle]) -> Result<EvolutionOperator> {
    if hs.len() != thetas.len() {
        return Err(Error::LengthMismatch {
            expected: hs.len(),
            got: thetas.len(),
        });
    }
    if hs.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = hs[0].dim();
    for h in hs {
        if h.dim() != n {
            return Err(Error::DimensionMismatch(n, h.dim()));
        }
    }
    let mut matrix = ComplexMatrix::identity(n, n);
    for (h, &theta) in hs.iter().zip(thetas) {
        matrix *= expi_reflection(h, theta);
    }
    Ok(EvolutionOperator {
        matrix,
        provenance: thetas.iter().copied().enumerate().collect(),
    })
}

/// `M^t` by repeated squaring.
pub fn matrix_power(m: &ComplexMatrix, t: u64) -> ComplexMatrix {
    let n = m.nrows();
    let mut result = ComplexMatrix::identity(n, n);
    let mut base = m.clone();
    let mut exp = t;
    while exp > 0 {
        if exp & 1 == 1 {
            result *= &base;
        }
        exp >>= 1;
        if exp > 0 {
            base = &base * &base;
        }
    }
    result
}

/// Continuous-time evolution `exp(i t A)` through the eigendecomposition of
/// the real symmetric adjacency matrix. Independent of the closed-form
/// reflection route, so the two can cross-check each other.
pub fn ctqw(a: &AdjacencyMatrix, t: f64) -> Result<ComplexMatrix> {
    let n = a.dim();
    let af = DMatrix::<f64>::from_fn(n, n, |r, c| a.0[(r, c)] as f64);
    debug_assert_eq!(af, af.transpose(), "adjacency input must be symmetric");
    let eig = SymmetricEigen::try_new(af, f64::EPSILON, 0).ok_or(Error::EigenFailure)?;
    let mut out = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let phase = Complex::new(0.0, t * eig.eigenvalues[j]).exp();
        let v = eig.eigenvectors.column(j);
        for r in 0..n {
            for c in 0..n {
                out[(r, c)] += phase * v[r] * v[c];
            }
        }
    }
    Ok(out)
}

/// Does `M = e^{i beta} N` for some real `beta`? The phase is read off at
/// the largest-magnitude entry of `N`, then checked entrywise.
pub fn phase_equal(m: &ComplexMatrix, n: &ComplexMatrix, tol: f64) -> Result<bool> {
    if m.nrows() != n.nrows() || m.ncols() != n.ncols() {
        return Err(Error::DimensionMismatch(m.nrows(), n.nrows()));
    }
    let mut anchor = (0usize, 0usize);
    let mut best = 0.0f64;
    for r in 0..n.nrows() {
        for c in 0..n.ncols() {
            let mag = n[(r, c)].norm();
            if mag > best {
                best = mag;
                anchor = (r, c);
            }
        }
    }
    if best == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let ratio = m[anchor] / n[anchor];
    if ratio.norm() == 0.0 {
        return Ok(false);
    }
    let phase = ratio / ratio.norm();
    Ok(max_diff(m, &(n * phase)) <= tol)
}

/// Per-step deviations between the staggered power and the scaled
/// continuous-time evolution it should reproduce.
#[derive(Debug, Clone, Serialize)]
pub struct DiscretizationReport {
    pub theta: Angle,
    pub k: usize,
    pub gamma_total: usize,
    /// `2k - gamma`, the exponent coefficient of the scalar prefactor.
    pub phase_coefficient: i64,
    pub tmax: u64,
    pub deviations: Vec<f64>,
    pub max_deviation: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Check that the staggered walk with angles `theta * gamma_i` discretizes
/// the continuous-time walk on the full graph: for every `T` up to `tmax`,
/// `U^T` must equal `e^{i theta (2k - gamma) T} exp(2 i theta T A)`.
///
/// Requires a uniform factorization with pairwise commuting pieces; the
/// right-hand side comes from the eigendecomposition route, the left from
/// the closed-form product, so agreement certifies both.
pub fn discretization_check(
    p: &ConnectionPartition,
    theta: Angle,
    tmax: u64,
    tol: f64,
) -> Result<DiscretizationReport> {
    let tessellations = p.build_tessellations();
    let report = p.classify_covering(&tessellations)?;
    if report.kind != CoveringKind::Factorization || !report.uniform {
        return Err(Error::NotFactorization);
    }
    for i in 0..tessellations.len() {
        for j in i + 1..tessellations.len() {
            if !tessellations[i]
                .adjacency()
                .commutes_with(tessellations[j].adjacency())
            {
                return Err(Error::NonCommutingPieces { i, j });
            }
        }
    }
    let reflections: Vec<ReflectionOperator> = tessellations
        .iter()
        .map(ReflectionOperator::from_tessellation)
        .collect::<Result<_>>()?;
    let thetas: Vec<Angle> = tessellations
        .iter()
        .map(|t| theta * t.gamma() as i64)
        .collect();
    let u = staggered_step(&reflections, &thetas)?;

    let k = tessellations.len();
    let gamma_total: usize = tessellations.iter().map(|t| t.gamma()).sum();
    let phase_coefficient = 2 * k as i64 - gamma_total as i64;
    let full_adjacency = p.connection().adjacency_matrix();
    let theta_rad = theta.radians();

    let mut deviations = Vec::with_capacity(tmax as usize + 1);
    for t in 0..=tmax {
        let lhs = u.power(t);
        let scalar = Complex::new(0.0, theta_rad * phase_coefficient as f64 * t as f64).exp();
        let rhs = ctqw(&full_adjacency, 2.0 * theta_rad * t as f64)? * scalar;
        deviations.push(max_diff(&lhs, &rhs));
    }
    let max_deviation = deviations.iter().cloned().fold(0.0, f64::max);
    Ok(DiscretizationReport {
        theta,
        k,
        gamma_total,
        phase_coefficient,
        tmax,
        deviations,
        max_deviation,
        tol,
        pass: max_deviation <= tol,
    })
}
