//! Catalog of connected Sato-Tate groups for abelian varieties of
//! dimension 1 and 2, with their Cartan embeddings, trace map, and
//! pushforward trace measure.
//!
//! A group is described by root data plus the integer matrix whose rows
//! give the diagonal torus characters of the standard representation;
//! the first q rows are always the identity. The trace map on the
//! parameter torus is `T(theta) = sum_l 2 cos(2 pi a_l . theta)`, and
//! the Haar pushforward is integrated with the Weyl density
//! `(1/#W) prod_(alpha > 0) 4 sin^2(pi alpha . theta)`.
//!
//! One non-connected entry, `N(U1)`, is carried as a measure-only
//! mixture `(1/2) delta_0 + (1/2) mu_U(1)`; it supports CM curves over Q
//! without dragging in disconnected-group character theory.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{self, CartanLabel, Mat, RootSystem, Weight, WeightFunction};
use crate::quad;

const TAU: f64 = std::f64::consts::TAU;

/// Closed subinterval of the trace range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !lower.is_finite() || !upper.is_finite() || !(lower < upper) {
            return Err(Error::invalid(format!(
                "interval bounds must be finite with lower < upper, got [{lower}, {upper}]"
            )));
        }
        Ok(Interval { lower, upper })
    }

    pub fn length(&self) -> f64 {
        self.upper - self.lower
    }

    /// Closed-interval membership; ties at endpoints count in.
    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    pub fn validate_for_dimension(&self, g: usize) -> Result<()> {
        let b = 2.0 * g as f64;
        if self.lower < -b || self.upper > b {
            return Err(Error::invalid(format!(
                "interval [{}, {}] exceeds the trace range [-{b}, {b}]",
                self.lower, self.upper
            )));
        }
        Ok(())
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", self.lower, self.upper)
    }
}

/// A connected compact group given by root data and its Cartan
/// embedding, or the measure-only `N(U1)` entry.
#[derive(Debug, Clone)]
pub struct StGroup {
    name: String,
    g: usize,
    root_system: RootSystem,
    embedding: Vec<Vec<i64>>,
    connected: bool,
}

/// Serialized form of a descriptor; the documented JSON schema.
#[derive(Debug, Serialize, Deserialize)]
struct DescriptorJson {
    name: String,
    g: usize,
    cartan_label: String,
    abelian_rank: usize,
    embedding: Vec<Vec<i64>>,
    connected: bool,
}

pub const CATALOG: [&str; 8] = [
    "U1", "SU2", "U1xU1", "SU2xU1", "SU2xSU2", "USp4", "U1_diag", "N(U1)",
];

/// Look up a descriptor by catalog name.
pub fn catalog_lookup(name: &str) -> Result<StGroup> {
    let (g, label, abelian, embedding, connected): (usize, CartanLabel, usize, Vec<Vec<i64>>, bool) =
        match name {
            "U1" => (1, CartanLabel::Trivial, 1, vec![vec![1]], true),
            "SU2" => (1, CartanLabel::A1, 0, vec![vec![1]], true),
            "U1xU1" => (2, CartanLabel::Trivial, 2, vec![vec![1, 0], vec![0, 1]], true),
            "SU2xU1" => (2, CartanLabel::A1, 1, vec![vec![1, 0], vec![0, 1]], true),
            "SU2xSU2" => (2, CartanLabel::A1xA1, 0, vec![vec![1, 0], vec![0, 1]], true),
            "USp4" => (2, CartanLabel::C2, 0, vec![vec![1, 0], vec![0, 1]], true),
            "U1_diag" => (2, CartanLabel::Trivial, 1, vec![vec![1], vec![1]], true),
            "N(U1)" => (1, CartanLabel::Trivial, 1, vec![vec![1]], false),
            other => return Err(Error::NotFound(format!("Sato-Tate group {other:?}"))),
        };
    StGroup::new(name.to_string(), g, label, abelian, embedding, connected)
}

impl StGroup {
    pub fn new(
        name: String,
        g: usize,
        label: CartanLabel,
        abelian_rank: usize,
        embedding: Vec<Vec<i64>>,
        connected: bool,
    ) -> Result<Self> {
        let root_system = RootSystem::new(label, abelian_rank);
        let q = root_system.total_rank();
        if g == 0 || g > 8 {
            return Err(Error::DataInvalid(format!("dimension g = {g} out of range 1..=8")));
        }
        if q == 0 || q > 4 {
            return Err(Error::DataInvalid(format!("rank q = {q} out of range 1..=4")));
        }
        if q > g {
            return Err(Error::DataInvalid(format!("rank q = {q} exceeds dimension g = {g}")));
        }
        if embedding.len() != g || embedding.iter().any(|row| row.len() != q) {
            return Err(Error::DataInvalid(format!(
                "embedding matrix must be {g} x {q}"
            )));
        }
        for (l, row) in embedding.iter().enumerate().take(q) {
            for (j, &e) in row.iter().enumerate() {
                if e != i64::from(l == j) {
                    return Err(Error::DataInvalid(
                        "first q rows of the embedding must be the identity".into(),
                    ));
                }
            }
        }
        if embedding.iter().flatten().any(|e| e.unsigned_abs() > 64) {
            return Err(Error::DataInvalid("embedding entries out of range".into()));
        }
        let group = StGroup { name, g, root_system, embedding, connected };
        if group.connected {
            // every connected descriptor must satisfy the Hodge condition
            group.hodge_circle_basis()?;
        } else if !(group.g == 1 && group.q() == 1 && group.h() == 0) {
            return Err(Error::Unsupported(
                "non-connected descriptors are limited to the N(U1) shape".into(),
            ));
        }
        Ok(group)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.root_system
    }

    pub fn embedding(&self) -> &[Vec<i64>] {
        &self.embedding
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    /// Total rank h + a of the parameter torus.
    pub fn q(&self) -> usize {
        self.root_system.total_rank()
    }

    pub fn h(&self) -> usize {
        self.root_system.rank_h()
    }

    pub fn abelian_rank(&self) -> usize {
        self.root_system.abelian_rank()
    }

    /// Number of positive roots.
    pub fn phi(&self) -> usize {
        self.root_system.phi()
    }

    pub fn to_json(&self) -> String {
        let d = DescriptorJson {
            name: self.name.clone(),
            g: self.g,
            cartan_label: self.root_system.label().as_str().to_string(),
            abelian_rank: self.abelian_rank(),
            embedding: self.embedding.clone(),
            connected: self.connected,
        };
        serde_json::to_string_pretty(&d).expect("descriptor serialization cannot fail")
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        let d: DescriptorJson = serde_json::from_slice(bytes)
            .map_err(|e| Error::DataInvalid(format!("descriptor JSON: {e}")))?;
        let label = CartanLabel::parse(&d.cartan_label)?;
        StGroup::new(d.name, d.g, label, d.abelian_rank, d.embedding, d.connected)
    }

    /// Trace of the standard representation at the torus point `theta`.
    pub fn trace_value(&self, theta: &[f64]) -> f64 {
        self.embedding
            .iter()
            .map(|row| {
                let dot: f64 = row.iter().zip(theta).map(|(&a, t)| a as f64 * t).sum();
                2.0 * (TAU * dot).cos()
            })
            .sum()
    }

    /// Uniform bound K on the gradient of the trace map:
    /// `4 pi sum_l |a_l|`.
    pub fn gradient_bound(&self) -> f64 {
        4.0 * std::f64::consts::PI
            * self
                .embedding
                .iter()
                .map(|row| (row.iter().map(|&a| (a * a) as f64).sum::<f64>()).sqrt())
                .sum::<f64>()
    }

    /// Bound C on the number of crossings of any level of the trace map
    /// along a coordinate line: `4 max |a_(l,j)|`.
    pub fn crossing_bound(&self) -> u64 {
        4 * self.embedding.iter().flatten().map(|a| a.unsigned_abs()).max().unwrap_or(0)
    }

    /// Exponent `1 / (2 (q + phi))` of the effective equidistribution
    /// error term.
    pub fn epsilon(&self) -> Result<Ratio<i64>> {
        if !self.connected {
            return Err(Error::Unsupported("epsilon needs a connected group".into()));
        }
        Ok(Ratio::new(1, 2 * (self.q() + self.phi()) as i64))
    }

    /// Two-variety exponent `1 / (2 (q + q' + phi + phi' - 1))`.
    pub fn epsilon_pair(&self, other: &StGroup) -> Result<Ratio<i64>> {
        if !self.connected || !other.connected {
            return Err(Error::Unsupported("epsilon needs connected groups".into()));
        }
        Ok(Ratio::new(
            1,
            2 * (self.q() + other.q() + self.phi() + other.phi() - 1) as i64,
        ))
    }

    /// Threshold factor `max(1, log(z)^6 / z^(1/epsilon))`.
    pub fn nu(&self, z: f64) -> Result<f64> {
        let eps = ratio_to_f64(self.epsilon()?);
        nu_value(z, 1.0 / eps, 6)
    }

    /// Pair version of [`Self::nu`] with the eighth log power.
    pub fn nu_pair(&self, other: &StGroup, z: f64) -> Result<f64> {
        let eps = ratio_to_f64(self.epsilon_pair(other)?);
        nu_value(z, 1.0 / eps, 8)
    }

    /// Explicit-constant form of the x0 threshold:
    /// `constant * nu(|I|) * log(2N)^2 * log(log(4N))^4`.
    pub fn x0_threshold(&self, interval_length: f64, n: u64, constant: f64) -> Result<f64> {
        if n < 1 {
            return Err(Error::invalid("conductor bound must be at least 1"));
        }
        let nu = self.nu(interval_length)?;
        let nf = n as f64;
        Ok(constant * nu * (2.0 * nf).ln().powi(2) * (4.0 * nf).ln().ln().powi(4))
    }

    /// Sign vectors v with `A v^t` again a sign vector, certifying that
    /// the torus is generated by Hodge circles. Returns q linearly
    /// independent solutions in deterministic order.
    pub fn hodge_circle_basis(&self) -> Result<Vec<Vec<i64>>> {
        let q = self.q();
        let mut basis: Vec<Vec<i64>> = Vec::new();
        for mask in 0u32..(1 << q) {
            let v: Vec<i64> =
                (0..q).map(|j| if mask >> (q - 1 - j) & 1 == 0 { 1 } else { -1 }).collect();
            let image = self.embedding.iter().map(|row| {
                row.iter().zip(&v).map(|(&a, &s)| a * s).sum::<i64>()
            });
            if image.clone().any(|u| u.abs() != 1) {
                continue;
            }
            let mut cand = basis.clone();
            cand.push(v);
            if integer_rank(&cand) == cand.len() {
                basis = cand;
                if basis.len() == q {
                    return Ok(basis);
                }
            }
        }
        Err(Error::DataInvalid(format!(
            "descriptor {} admits only {} independent Hodge circles (need {q})",
            self.name,
            basis.len()
        )))
    }

    /// Weyl density on the parameter torus (semisimple coordinates
    /// first); integrates to 1.
    pub fn weyl_density(&self, theta: &[f64]) -> f64 {
        let rs = &self.root_system;
        let theta_h = &theta[..rs.rank_h()];
        let mut prod = 1.0;
        for alpha in rs.positive_roots() {
            let eps = rs.to_torus_coords(alpha);
            let dot: f64 = eps.iter().zip(theta_h).map(|(&c, t)| c as f64 * t).sum();
            let s = (std::f64::consts::PI * dot).sin();
            prod *= 4.0 * s * s;
        }
        prod / rs.weyl_order() as f64
    }

    /// Weyl action on the full q-dimensional Fourier lattice (identity
    /// on the abelian coordinates).
    pub fn weyl_on_torus(&self) -> Vec<Mat> {
        let h = self.h();
        let q = self.q();
        self.root_system
            .weyl_on_torus()
            .into_iter()
            .map(|wh| {
                let mut m = vec![vec![0i64; q]; q];
                for i in 0..h {
                    m[i][..h].copy_from_slice(&wh[i]);
                }
                for i in h..q {
                    m[i][i] = 1;
                }
                m
            })
            .collect()
    }

    /// Haar-pushforward mass of the closed interval `i` under the trace.
    pub fn measure_interval(&self, i: Interval, tol: f64) -> Result<f64> {
        if !(tol > 0.0) {
            return Err(Error::invalid("tolerance must be positive"));
        }
        i.validate_for_dimension(self.g)?;
        if !self.connected {
            // N(U1): half an atom at 0, half the U(1) arc measure
            let atom = if i.contains(0.0) { 0.5 } else { 0.0 };
            return Ok(atom + 0.5 * u1_arc_measure(i, 2.0));
        }
        match self.q() {
            1 => self.measure_1d(i),
            2 => self.measure_2d(i, tol),
            q => Err(Error::Unsupported(format!("measure quadrature for rank {q}"))),
        }
    }

    fn all_rows_unit(&self) -> bool {
        self.embedding.iter().all(|row| row.len() == 1 && row[0].abs() == 1)
    }

    /// Preimage of `i` under the trace map on a rank-1 torus, as closed
    /// arcs (unit embedding rows only).
    pub(crate) fn preimage_arcs_1d(&self, i: Interval) -> Result<Vec<(f64, f64)>> {
        if self.q() != 1 || !self.all_rows_unit() {
            return Err(Error::Unsupported(
                "rank-1 preimage arcs need unit embedding rows".into(),
            ));
        }
        let amp = 2.0 * self.g as f64;
        Ok(cos_arcs(i.lower / amp, i.upper / amp))
    }

    fn measure_1d(&self, i: Interval) -> Result<f64> {
        if !self.all_rows_unit() {
            return Err(Error::Unsupported(
                "rank-1 measure needs unit embedding rows".into(),
            ));
        }
        let amp = 2.0 * self.g as f64;
        let arcs = cos_arcs(i.lower / amp, i.upper / amp);
        let mut mass = 0.0;
        for (a, b) in arcs {
            mass += match self.root_system.label() {
                CartanLabel::Trivial => b - a,
                CartanLabel::A1 => su2_density_antiderivative(b) - su2_density_antiderivative(a),
                _ => unreachable!("rank-1 label"),
            };
        }
        Ok(mass)
    }

    fn measure_2d(&self, i: Interval, tol: f64) -> Result<f64> {
        if !is_identity(&self.embedding) {
            return Err(Error::Unsupported(
                "rank-2 measure needs the identity embedding".into(),
            ));
        }
        let inner = |theta1: f64| -> f64 {
            let u = 2.0 * (TAU * theta1).cos();
            let arcs = cos_arcs((i.lower - u) / 2.0, (i.upper - u) / 2.0);
            self.inner_density_integral(theta1, &arcs)
        };
        let breaks = kink_points(i);
        quad::piecewise_simpson(&inner, 0.0, 1.0, &breaks, tol)
    }

    /// Closed-form integral of the density over `arcs` in the second
    /// coordinate, at fixed first coordinate.
    fn inner_density_integral(&self, theta1: f64, arcs: &[(f64, f64)]) -> f64 {
        let label = self.root_system.label();
        let a_rank = self.abelian_rank();
        let mut acc = 0.0;
        for &(p, q) in arcs {
            acc += match (label, a_rank) {
                // U1 x U1
                (CartanLabel::Trivial, 2) => q - p,
                // SU2 x U1: density 2 sin^2(2 pi theta1)
                (CartanLabel::A1, 1) => {
                    2.0 * (TAU * theta1).sin().powi(2) * (q - p)
                }
                // SU2 x SU2
                (CartanLabel::A1xA1, 0) => {
                    2.0 * (TAU * theta1).sin().powi(2)
                        * (su2_density_antiderivative(q) - su2_density_antiderivative(p))
                }
                // USp4: 8 sin^2 t1 sin^2 t2 (cos t2 - cos t1)^2
                (CartanLabel::C2, 0) => {
                    let u = (TAU * theta1).cos();
                    8.0 * (TAU * theta1).sin().powi(2)
                        * (usp4_inner_antiderivative(q, u) - usp4_inner_antiderivative(p, u))
                }
                _ => f64::NAN,
            };
        }
        acc
    }

    /// n-th moment of the trace under the Haar pushforward, by
    /// spectrally exact equispaced quadrature.
    pub fn moment(&self, n: u32, tol: f64) -> Result<f64> {
        if !(tol > 0.0) {
            return Err(Error::invalid("tolerance must be positive"));
        }
        if !self.connected {
            let u1 = catalog_lookup("U1")?;
            let cont = u1.moment(n, tol)?;
            let atom = if n == 0 { 0.5 } else { 0.0 };
            return Ok(atom + 0.5 * cont);
        }
        // integrand is a trigonometric polynomial of degree
        // <= n * max|a| + density degree; pick the grid accordingly
        let max_entry = self.embedding.iter().flatten().map(|a| a.unsigned_abs()).max().unwrap_or(1);
        let degree = n as usize * max_entry as usize + 4 * self.phi() + 4;
        let grid = (2 * degree + 8).next_power_of_two().max(64);
        match self.q() {
            1 => Ok(quad::periodic_trapezoid(
                &|t| self.trace_value(&[t]).powi(n as i32) * self.weyl_density(&[t]),
                grid,
            )),
            2 => Ok(quad::periodic_trapezoid_2d(
                &|t1, t2| {
                    self.trace_value(&[t1, t2]).powi(n as i32) * self.weyl_density(&[t1, t2])
                },
                grid.min(512),
            )),
            q => Err(Error::Unsupported(format!("moment quadrature for rank {q}"))),
        }
    }

    /// Weight multiset of the standard representation (rows of the
    /// embedding and their negatives).
    pub fn standard_weight_function(&self) -> Result<WeightFunction> {
        if !self.connected {
            return Err(Error::Unsupported("weights need a connected group".into()));
        }
        let h = self.h();
        let mut wf = WeightFunction::default();
        for row in &self.embedding {
            for sign in [1i64, -1] {
                let eps_h: Vec<i64> = row[..h].iter().map(|&c| sign * c).collect();
                let ab: Vec<i64> = row[h..].iter().map(|&c| sign * c).collect();
                let w = Weight::new(self.root_system.from_torus_coords(&eps_h), ab);
                wf.insert(w, 1);
            }
        }
        Ok(wf)
    }

    /// Multiplicity of the trivial representation in the n-th tensor
    /// power of the standard representation; exact integer arithmetic.
    /// This is the Lie-theoretic route to the n-th trace moment.
    pub fn moment_exact(&self, n: u32) -> Result<i64> {
        let std = self.standard_weight_function()?;
        let mut acc = WeightFunction::one(&self.root_system);
        for _ in 0..n {
            acc = acc.convolve(&std);
        }
        let dec = lie::decompose_virtual(&self.root_system, &acc)?;
        Ok(dec
            .get(&Weight::zero(self.h(), self.abelian_rank()))
            .copied()
            .unwrap_or(0))
    }
}

fn ratio_to_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn nu_value(z: f64, inv_eps: f64, log_power: i32) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::invalid("nu needs a positive argument"));
    }
    Ok(1f64.max(z.ln().powi(log_power) / z.powf(inv_eps)))
}

/// Asymptotic tail mass of the U(1) trace measure near 2:
/// `mu([2 - y^(-1/2), 2]) ~ 1/(pi y^(1/4))`, with the error bound
/// `2 y^(-3/4)` that the quadrature cross-check validates.
pub fn measure_tail_u1(y: f64) -> (f64, f64) {
    let approx = 1.0 / (std::f64::consts::PI * y.powf(0.25));
    (approx, 2.0 * y.powf(-0.75))
}

/// Arc measure of `{theta : amplitude * cos(2 pi theta) in i}` for the
/// flat measure on [0, 1].
fn u1_arc_measure(i: Interval, amplitude: f64) -> f64 {
    cos_arcs(i.lower / amplitude, i.upper / amplitude)
        .iter()
        .map(|(a, b)| b - a)
        .sum()
}

/// The set `{theta in [0,1] : cos(2 pi theta) in [lo, hi]}` as closed
/// arcs in increasing order (at most two).
pub(crate) fn cos_arcs(lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let lo = lo.max(-1.0);
    let hi = hi.min(1.0);
    if lo > hi {
        return Vec::new();
    }
    // arccos is decreasing: theta runs from t(hi) up to t(lo)
    let t_hi = hi.acos() / TAU;
    let t_lo = lo.acos() / TAU;
    if t_hi == 0.0 && t_lo == 0.5 {
        return vec![(0.0, 1.0)];
    }
    let mut arcs = vec![(t_hi, t_lo)];
    arcs.push((1.0 - t_lo, 1.0 - t_hi));
    arcs
}

/// Antiderivative of the SU(2) density `2 sin^2(2 pi t)`.
fn su2_density_antiderivative(t: f64) -> f64 {
    t - (2.0 * TAU * t).sin() / (2.0 * TAU)
}

/// Antiderivative in t of `sin^2(2 pi t) (cos(2 pi t) - u)^2`.
fn usp4_inner_antiderivative(t: f64, u: f64) -> f64 {
    // sin^2 c^2 term: t/8 - sin(8 pi t)/(64 pi)
    let sc2 = t / 8.0 - (4.0 * TAU * t).sin() / (16.0 * TAU);
    // sin^2 c term: sin^3(2 pi t)/(6 pi)
    let sc1 = (TAU * t).sin().powi(3) / (3.0 * TAU);
    // sin^2 term: t/2 - sin(4 pi t)/(8 pi)
    let s2 = t / 2.0 - (2.0 * TAU * t).sin() / (4.0 * TAU);
    sc2 - 2.0 * u * sc1 + u * u * s2
}

/// Candidate kinks of the 2-d sliced integrand: points where an arccos
/// argument crosses +-1.
fn kink_points(i: Interval) -> Vec<f64> {
    let mut pts = vec![0.5];
    for v in [i.lower - 2.0, i.lower + 2.0, i.upper - 2.0, i.upper + 2.0] {
        let c = v / 2.0;
        if (-1.0..=1.0).contains(&c) {
            let t = c.acos() / TAU;
            pts.push(t);
            pts.push(1.0 - t);
        }
    }
    pts
}

fn is_identity(m: &[Vec<i64>]) -> bool {
    m.len() == m.first().map_or(0, Vec::len)
        && m.iter().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(j, &e)| e == i64::from(i == j))
        })
}

/// Rank of a small integer matrix by fraction-free elimination.
fn integer_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        for r in rank + 1..m.len() {
            if m[r][c] != 0 {
                let (a, b) = (m[rank][c], m[r][c]);
                for k in 0..cols {
                    m[r][k] = m[r][k] * a - m[rank][k] * b;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(name: &str) -> StGroup {
        catalog_lookup(name).unwrap()
    }

    #[test]
    fn catalog_shapes() {
        let su2 = g("SU2");
        assert_eq!((su2.g(), su2.q(), su2.phi()), (1, 1, 1));
        let usp4 = g("USp4");
        assert_eq!((usp4.g(), usp4.q(), usp4.phi()), (2, 2, 4));
        let diag = g("U1_diag");
        assert_eq!((diag.g(), diag.q()), (2, 1));
        assert_eq!(diag.embedding(), &[vec![1], vec![1]]);
        assert!(!g("N(U1)").is_connected());
        assert!(catalog_lookup("SO3").is_err());
    }

    #[test]
    fn trace_values() {
        assert_eq!(g("SU2").trace_value(&[0.0]), 2.0);
        assert!((g("SU2").trace_value(&[0.5]) + 2.0).abs() < 1e-12);
        assert!(g("U1_diag").trace_value(&[0.25]).abs() < 1e-12);
    }

    #[test]
    fn epsilon_values() {
        assert_eq!(g("SU2").epsilon().unwrap(), Ratio::new(1, 4));
        assert_eq!(g("U1").epsilon().unwrap(), Ratio::new(1, 2));
        assert_eq!(g("USp4").epsilon().unwrap(), Ratio::new(1, 12));
        assert_eq!(g("SU2").epsilon_pair(&g("SU2")).unwrap(), Ratio::new(1, 6));
        assert_eq!(g("U1").epsilon_pair(&g("U1")).unwrap(), Ratio::new(1, 2));
        assert_eq!(g("USp4").epsilon_pair(&g("SU2")).unwrap(), Ratio::new(1, 14));
        assert!(g("N(U1)").epsilon().is_err());
    }

    #[test]
    fn nu_values() {
        assert_eq!(g("SU2").nu(1.0).unwrap(), 1.0);
        assert_eq!(g("SU2").nu(std::f64::consts::E).unwrap(), 1.0);
        let v = g("SU2").nu(0.1).unwrap();
        assert!((v - 0.1f64.ln().powi(6) / 0.1f64.powi(4)).abs() < 1e-6 * v);
        assert!(g("SU2").nu(0.0).is_err());
    }

    #[test]
    fn x0_threshold_example() {
        let v = g("SU2").x0_threshold(1.0, 1, 1.0).unwrap();
        let expect = 2f64.ln().powi(2) * 4f64.ln().ln().powi(4);
        assert!((v - expect).abs() < 1e-12);
        assert_eq!(g("SU2").x0_threshold(1.0, 1, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn hodge_bases() {
        assert_eq!(g("SU2").hodge_circle_basis().unwrap(), vec![vec![1]]);
        assert_eq!(
            g("SU2xSU2").hodge_circle_basis().unwrap(),
            vec![vec![1, 1], vec![1, -1]]
        );
        assert_eq!(g("U1_diag").hodge_circle_basis().unwrap(), vec![vec![1]]);
    }

    #[test]
    fn measure_su2_closed_forms() {
        let su2 = g("SU2");
        let full = su2.measure_interval(Interval::new(-2.0, 2.0).unwrap(), 1e-9).unwrap();
        assert!((full - 1.0).abs() < 1e-12);
        let tail = su2.measure_interval(Interval::new(1.0, 2.0).unwrap(), 1e-9).unwrap();
        let expect = 1.0 / 3.0 - 3f64.sqrt() / (4.0 * std::f64::consts::PI);
        assert!((tail - expect).abs() < 1e-12, "{tail} vs {expect}");
    }

    #[test]
    fn measure_nu1_mixture() {
        let nu1 = g("N(U1)");
        let v = nu1.measure_interval(Interval::new(-1.0, 1.0).unwrap(), 1e-9).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-12);
        let v = nu1.measure_interval(Interval::new(-2.0, 2.0).unwrap(), 1e-9).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn measure_2d_total_mass() {
        for name in ["U1xU1", "SU2xU1", "SU2xSU2", "USp4"] {
            let grp = g(name);
            let full = grp.measure_interval(Interval::new(-4.0, 4.0).unwrap(), 1e-9).unwrap();
            assert!((full - 1.0).abs() < 1e-7, "{name}: total mass {full}");
        }
    }

    #[test]
    fn measure_tail_matches_quadrature() {
        let u1 = g("U1");
        for y in [100.0, 1e4, 1e6] {
            let (approx, bound) = measure_tail_u1(y);
            let i = Interval::new(2.0 - y.powf(-0.5), 2.0).unwrap();
            let exact = u1.measure_interval(i, 1e-12).unwrap();
            assert!((exact - approx).abs() <= bound, "y={y}: {exact} vs {approx}");
        }
    }

    #[test]
    fn moments_match_exact_counts() {
        let su2 = g("SU2");
        assert!(su2.moment(1, 1e-9).unwrap().abs() < 1e-12);
        assert!((su2.moment(2, 1e-9).unwrap() - 1.0).abs() < 1e-12);
        assert!((su2.moment(4, 1e-9).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(su2.moment_exact(2).unwrap(), 1);
        assert_eq!(su2.moment_exact(4).unwrap(), 2);
        let usp4 = g("USp4");
        assert!((usp4.moment(2, 1e-7).unwrap() - 1.0).abs() < 1e-10);
        assert_eq!(usp4.moment_exact(2).unwrap(), 1);
        let u1 = g("U1");
        assert!((u1.moment(2, 1e-9).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(u1.moment_exact(2).unwrap(), 2);
        // U1_diag trace is 4 cos; second moment 8
        let diag = g("U1_diag");
        assert!((diag.moment(2, 1e-9).unwrap() - 8.0).abs() < 1e-12);
        assert_eq!(diag.moment_exact(2).unwrap(), 8);
    }

    #[test]
    fn json_round_trip() {
        for name in CATALOG {
            let grp = g(name);
            let json = grp.to_json();
            let back = StGroup::from_json(json.as_bytes()).unwrap();
            assert_eq!(back.name(), grp.name());
            assert_eq!(back.embedding(), grp.embedding());
            assert_eq!(back.q(), grp.q());
        }
    }

    #[test]
    fn json_rejects_bad_descriptors() {
        // embedding not starting with the identity
        let bad = r#"{"name":"X","g":2,"cartan_label":"trivial","abelian_rank":1,"embedding":[[2],[1]],"connected":true}"#;
        assert!(StGroup::from_json(bad.as_bytes()).is_err());
        // rank exceeding dimension
        let bad = r#"{"name":"X","g":1,"cartan_label":"C2","abelian_rank":0,"embedding":[[1,0]],"connected":true}"#;
        assert!(StGroup::from_json(bad.as_bytes()).is_err());
    }

    #[test]
    fn gradient_bound_dominates_grid() {
        // coarse grid here; the full 1e6-point sweep lives in the
        // integration suite
        for name in ["SU2", "U1", "U1_diag", "USp4"] {
            let grp = g(name);
            let k = grp.gradient_bound();
            let qdim = grp.q();
            let n = 200usize;
            let mut sup: f64 = 0.0;
            let eps = 1e-5;
            let mut idx = vec![0usize; qdim];
            loop {
                let theta: Vec<f64> = idx.iter().map(|&i| i as f64 / n as f64).collect();
                let base = grp.trace_value(&theta);
                let mut grad2 = 0.0;
                for j in 0..qdim {
                    let mut shifted = theta.clone();
                    shifted[j] += eps;
                    grad2 += ((grp.trace_value(&shifted) - base) / eps).powi(2);
                }
                sup = sup.max(grad2.sqrt());
                let mut j = 0;
                loop {
                    if j == qdim {
                        break;
                    }
                    idx[j] += 1;
                    if idx[j] == n {
                        idx[j] = 0;
                        j += 1;
                    } else {
                        break;
                    }
                }
                if j == qdim {
                    break;
                }
            }
            assert!(k >= sup, "{name}: K = {k} < grid sup {sup}");
        }
    }
}
