//! Exact representation machinery for small-rank compact Lie groups.
//!
//! Everything here is integer or rational arithmetic: the Kostant
//! partition function, weight multiplicities and the inverse of the
//! multiplicity matrix, Weyl dimensions, orbit data. The only
//! floating-point operation in the module is [`character_value`].
//!
//! Supported Cartan types are A1, A1xA1 and C2, optionally extended by an
//! abelian factor. Weights are stored in fundamental-weight coordinates;
//! conversion to torus (angle-dual) coordinates is provided for character
//! evaluation and Fourier bookkeeping. Weyl groups are kept as explicit
//! matrix lists, which is cheap at these ranks.

use std::cell::RefCell;
use std::collections::{btree_map::Entry, BTreeMap, HashMap};

use num_rational::Ratio;

use crate::error::{Error, Result};

/// Small integer matrix, row-major.
pub type Mat = Vec<Vec<i64>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CartanLabel {
    /// No semisimple part (abelian-only group).
    Trivial,
    A1,
    A1xA1,
    C2,
}

impl CartanLabel {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "A1" | "a1" => Ok(CartanLabel::A1),
            "A1xA1" | "a1xa1" => Ok(CartanLabel::A1xA1),
            "C2" | "c2" => Ok(CartanLabel::C2),
            "trivial" | "abelian" | "" => Ok(CartanLabel::Trivial),
            other => Err(Error::NotFound(format!("cartan label {other:?}"))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            CartanLabel::Trivial => "trivial",
            CartanLabel::A1 => "A1",
            CartanLabel::A1xA1 => "A1xA1",
            CartanLabel::C2 => "C2",
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            CartanLabel::Trivial => 0,
            CartanLabel::A1 => 1,
            CartanLabel::A1xA1 | CartanLabel::C2 => 2,
        }
    }
}

/// Integral weight: semisimple coordinates in the fundamental-weight
/// basis plus coordinates on the abelian factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    pub semisimple: Vec<i64>,
    pub abelian: Vec<i64>,
}

impl Weight {
    pub fn new(semisimple: Vec<i64>, abelian: Vec<i64>) -> Self {
        Weight { semisimple, abelian }
    }

    pub fn semisimple_only(coords: Vec<i64>) -> Self {
        Weight { semisimple: coords, abelian: Vec::new() }
    }

    pub fn zero(rank_h: usize, abelian_rank: usize) -> Self {
        Weight { semisimple: vec![0; rank_h], abelian: vec![0; abelian_rank] }
    }

    pub fn is_zero(&self) -> bool {
        self.semisimple.iter().all(|&c| c == 0) && self.abelian.iter().all(|&c| c == 0)
    }

    pub fn is_dominant(&self) -> bool {
        self.semisimple.iter().all(|&c| c >= 0)
    }

    /// Max absolute coordinate across both parts.
    pub fn fund_norm(&self) -> u64 {
        self.semisimple
            .iter()
            .chain(self.abelian.iter())
            .map(|c| c.unsigned_abs())
            .max()
            .unwrap_or(0)
    }

    fn sub(&self, other: &Weight) -> Weight {
        Weight {
            semisimple: vec_sub(&self.semisimple, &other.semisimple),
            abelian: vec_sub(&self.abelian, &other.abelian),
        }
    }
}

impl std::fmt::Display for Weight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let coords: Vec<String> = self
            .semisimple
            .iter()
            .chain(self.abelian.iter())
            .map(|c| c.to_string())
            .collect();
        write!(f, "({})", coords.join(","))
    }
}

fn vec_sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn vec_add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn mat_vec(m: &Mat, v: &[i64]) -> Vec<i64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

fn identity(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

fn det(m: &Mat) -> i64 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        _ => unreachable!("rank > 2 not supported"),
    }
}

/// Root data for a supported Cartan type plus an abelian factor.
///
/// All vectors and matrices are in fundamental-weight coordinates on the
/// semisimple part. `omega_to_eps` converts a weight to torus
/// coordinates, the basis in which the Cartan parametrization angles
/// live and Fourier frequencies are indexed.
#[derive(Debug, Clone)]
pub struct RootSystem {
    label: CartanLabel,
    rank_h: usize,
    abelian_rank: usize,
    simple_roots: Vec<Vec<i64>>,
    positive_roots: Vec<Vec<i64>>,
    weyl: Vec<Mat>,
    weyl_signs: Vec<i64>,
    rho: Vec<i64>,
    pairing: Mat,
    omega_to_eps: Mat,
    eps_to_omega: Mat,
    positive_roots_simple: Vec<Vec<i64>>,
}

impl RootSystem {
    pub fn new(label: CartanLabel, abelian_rank: usize) -> Self {
        let (simple, positive, pos_simple, omega_to_eps, eps_to_omega, pairing) = match label {
            CartanLabel::Trivial => (vec![], vec![], vec![], vec![], vec![], vec![]),
            CartanLabel::A1 => (
                vec![vec![2]],
                vec![vec![2]],
                vec![vec![1]],
                vec![vec![1]],
                vec![vec![1]],
                vec![vec![1]],
            ),
            CartanLabel::A1xA1 => (
                vec![vec![2, 0], vec![0, 2]],
                vec![vec![2, 0], vec![0, 2]],
                vec![vec![1, 0], vec![0, 1]],
                identity(2),
                identity(2),
                identity(2),
            ),
            CartanLabel::C2 => (
                // short root e1-e2, long root 2e2
                vec![vec![2, -1], vec![-2, 2]],
                vec![vec![2, -1], vec![-2, 2], vec![0, 1], vec![2, 0]],
                vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![2, 1]],
                vec![vec![1, 1], vec![0, 1]],
                vec![vec![1, -1], vec![0, 1]],
                vec![vec![1, 1], vec![1, 2]],
            ),
        };
        let rank_h = label.rank();
        let weyl = generate_weyl(rank_h, &simple);
        let weyl_signs = weyl.iter().map(det).collect();
        let rho = vec![1; rank_h];
        RootSystem {
            label,
            rank_h,
            abelian_rank,
            simple_roots: simple,
            positive_roots: positive,
            weyl,
            weyl_signs,
            rho,
            pairing,
            omega_to_eps,
            eps_to_omega,
            positive_roots_simple: pos_simple,
        }
    }

    pub fn label(&self) -> CartanLabel {
        self.label
    }

    pub fn rank_h(&self) -> usize {
        self.rank_h
    }

    pub fn abelian_rank(&self) -> usize {
        self.abelian_rank
    }

    /// Total rank h + a of the group.
    pub fn total_rank(&self) -> usize {
        self.rank_h + self.abelian_rank
    }

    pub fn simple_roots(&self) -> &[Vec<i64>] {
        &self.simple_roots
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    /// Number of positive roots.
    pub fn phi(&self) -> usize {
        self.positive_roots.len()
    }

    pub fn weyl_order(&self) -> usize {
        self.weyl.len()
    }

    pub fn weyl_elements(&self) -> &[Mat] {
        &self.weyl
    }

    pub fn rho(&self) -> Weight {
        Weight::new(self.rho.clone(), vec![0; self.abelian_rank])
    }

    pub fn pairing_matrix(&self) -> &Mat {
        &self.pairing
    }

    /// W-invariant positive-definite form on the weight lattice.
    pub fn pair(&self, u: &[i64], v: &[i64]) -> i128 {
        let mut acc: i128 = 0;
        for (i, &ui) in u.iter().enumerate() {
            for (j, &vj) in v.iter().enumerate() {
                acc += ui as i128 * self.pairing[i][j] as i128 * vj as i128;
            }
        }
        acc
    }

    /// Convert semisimple fundamental-weight coordinates to torus
    /// coordinates.
    pub fn to_torus_coords(&self, v: &[i64]) -> Vec<i64> {
        mat_vec(&self.omega_to_eps, v)
    }

    /// Inverse of [`Self::to_torus_coords`] (the basis change is
    /// unimodular).
    pub fn from_torus_coords(&self, v: &[i64]) -> Vec<i64> {
        mat_vec(&self.eps_to_omega, v)
    }

    /// Weyl action expressed on torus coordinates.
    pub fn weyl_on_torus(&self) -> Vec<Mat> {
        self.weyl
            .iter()
            .map(|w| mat_mul(&self.omega_to_eps, &mat_mul(w, &self.eps_to_omega)))
            .collect()
    }

    fn check_weight(&self, w: &Weight) -> Result<()> {
        if w.semisimple.len() != self.rank_h || w.abelian.len() != self.abelian_rank {
            return Err(Error::invalid(format!(
                "weight {w} has wrong rank for {} (h={}, a={})",
                self.label.as_str(),
                self.rank_h,
                self.abelian_rank
            )));
        }
        Ok(())
    }

    /// Express `v` in simple-root coordinates; `None` when `v` is not in
    /// the root lattice.
    fn to_simple_coords(&self, v: &[i64]) -> Option<Vec<i64>> {
        match self.rank_h {
            0 => Some(Vec::new()),
            1 => {
                let d = self.simple_roots[0][0];
                (v[0] % d == 0).then(|| vec![v[0] / d])
            }
            2 => {
                // solve x * R = v for the 2x2 matrix R with rows the simple roots
                let r = &self.simple_roots;
                let d = r[0][0] * r[1][1] - r[0][1] * r[1][0];
                let n0 = v[0] * r[1][1] - v[1] * r[1][0];
                let n1 = v[1] * r[0][0] - v[0] * r[0][1];
                (n0 % d == 0 && n1 % d == 0).then(|| vec![n0 / d, n1 / d])
            }
            _ => unreachable!(),
        }
    }

    /// Kostant partition function on semisimple coordinates; 0 outside
    /// the nonnegative root cone.
    fn partition_omega(&self, v: &[i64]) -> u64 {
        let Some(simple) = self.to_simple_coords(v) else {
            return 0;
        };
        if simple.iter().any(|&c| c < 0) {
            return 0;
        }
        partition_count(self.label, &self.positive_roots_simple, &simple, 0)
    }

    /// Size of the stabilizer of the semisimple part of `w` in the Weyl
    /// group.
    pub fn stabilizer_size(&self, w: &Weight) -> usize {
        self.weyl.iter().filter(|m| mat_vec(m, &w.semisimple) == w.semisimple).count()
    }

    /// True when some Weyl element sends the weight to its negative and
    /// the abelian part vanishes; such weights index selfdual characters.
    pub fn is_selfdual(&self, w: &Weight) -> bool {
        if w.abelian.iter().any(|&c| c != 0) {
            return false;
        }
        let neg: Vec<i64> = w.semisimple.iter().map(|c| -c).collect();
        self.weyl.iter().any(|m| mat_vec(m, &w.semisimple) == neg)
    }
}

fn generate_weyl(rank: usize, simple: &[Vec<i64>]) -> Vec<Mat> {
    let id = identity(rank);
    let gens: Vec<Mat> = (0..simple.len())
        .map(|j| {
            let mut m = identity(rank);
            for (i, row) in m.iter_mut().enumerate() {
                row[j] -= simple[j][i];
            }
            m
        })
        .collect();
    let mut elements = vec![id];
    let mut frontier = elements.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for w in &frontier {
            for s in &gens {
                let prod = mat_mul(s, w);
                if !elements.contains(&prod) && !next.contains(&prod) {
                    next.push(prod);
                }
            }
        }
        elements.extend(next.iter().cloned());
        frontier = next;
    }
    elements
}

thread_local! {
    static PARTITION_MEMO: RefCell<HashMap<(CartanLabel, Vec<i64>, usize), u64>> =
        RefCell::new(HashMap::new());
}

fn partition_count(label: CartanLabel, roots: &[Vec<i64>], v: &[i64], idx: usize) -> u64 {
    if v.iter().all(|&c| c == 0) {
        return 1;
    }
    if idx == roots.len() {
        return 0;
    }
    let key = (label, v.to_vec(), idx);
    if let Some(hit) = PARTITION_MEMO.with(|m| m.borrow().get(&key).copied()) {
        return hit;
    }
    let root = &roots[idx];
    let kmax = v
        .iter()
        .zip(root)
        .filter(|(_, &r)| r > 0)
        .map(|(&c, &r)| c / r)
        .min()
        .unwrap_or(0);
    let mut acc = 0u64;
    for k in 0..=kmax {
        let rest: Vec<i64> = v.iter().zip(root).map(|(&c, &r)| c - k * r).collect();
        acc += partition_count(label, roots, &rest, idx + 1);
    }
    PARTITION_MEMO.with(|m| m.borrow_mut().insert(key, acc));
    acc
}

/// Number of ways to write `v` as a nonnegative integer combination of
/// positive roots. The abelian part of `v` must vanish.
pub fn kostant_partition(rs: &RootSystem, v: &Weight) -> Result<u64> {
    rs.check_weight(v)?;
    if v.abelian.iter().any(|&c| c != 0) {
        return Err(Error::invalid("partition function needs a vanishing abelian part"));
    }
    Ok(rs.partition_omega(&v.semisimple))
}

/// Multiplicity of the weight `mu` in the irreducible representation of
/// highest weight `lambda`, by Kostant's alternating sum over the Weyl
/// group.
pub fn weight_multiplicity(rs: &RootSystem, lambda: &Weight, mu: &Weight) -> Result<u64> {
    rs.check_weight(lambda)?;
    rs.check_weight(mu)?;
    if !lambda.is_dominant() {
        return Err(Error::invalid(format!("{lambda} is not dominant")));
    }
    if lambda.abelian != mu.abelian {
        return Ok(0);
    }
    let lam_rho = vec_add(&lambda.semisimple, &rs.rho);
    let mu_rho = vec_add(&mu.semisimple, &rs.rho);
    let mut acc: i64 = 0;
    for (w, sign) in rs.weyl.iter().zip(&rs.weyl_signs) {
        let arg = vec_sub(&mat_vec(w, &lam_rho), &mu_rho);
        acc += sign * rs.partition_omega(&arg) as i64;
    }
    debug_assert!(acc >= 0, "negative multiplicity for {lambda}, {mu}");
    Ok(acc.max(0) as u64)
}

/// Coefficient of `e^v` in the expansion of
/// `e^rho * prod_(alpha > 0) (1 - e^(-alpha))`.
pub fn gupta_f(rs: &RootSystem, v: &Weight) -> Result<i64> {
    rs.check_weight(v)?;
    if v.abelian.iter().any(|&c| c != 0) {
        return Ok(0);
    }
    let phi = rs.phi();
    let mut acc = 0i64;
    for mask in 0u32..(1 << phi) {
        let mut target = rs.rho.clone();
        for (j, alpha) in rs.positive_roots.iter().enumerate() {
            if mask >> j & 1 == 1 {
                target = vec_sub(&target, alpha);
            }
        }
        if target == v.semisimple {
            acc += if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        }
    }
    Ok(acc)
}

/// Entry `d_lambda^mu` of the inverse of the weight-multiplicity matrix,
/// via Gupta's formula. The alternating sum is evaluated at
/// `w(mu + rho) - lambda` and divided by the stabilizer size of
/// `lambda`; this index convention is pinned by the `A1` check
/// `d_(2 omega)^0 = -1` below.
pub fn gupta_inverse_entry(rs: &RootSystem, lambda: &Weight, mu: &Weight) -> Result<Ratio<i64>> {
    rs.check_weight(lambda)?;
    rs.check_weight(mu)?;
    if !lambda.is_dominant() || !mu.is_dominant() {
        return Err(Error::invalid("inverse-matrix entries need dominant weights"));
    }
    if lambda.abelian != mu.abelian {
        return Ok(Ratio::from_integer(0));
    }
    let mu_rho = vec_add(&mu.semisimple, &rs.rho);
    let mut acc = 0i64;
    for (w, sign) in rs.weyl.iter().zip(&rs.weyl_signs) {
        let arg = vec_sub(&mat_vec(w, &mu_rho), &lambda.semisimple);
        acc += sign * gupta_f(rs, &Weight::new(arg, vec![0; rs.abelian_rank]))?;
    }
    Ok(Ratio::new(acc, rs.stabilizer_size(lambda) as i64))
}

/// Dimension of the irreducible representation of highest weight
/// `lambda`, by Weyl's formula in exact rational arithmetic.
pub fn weyl_dimension(rs: &RootSystem, lambda: &Weight) -> Result<u64> {
    rs.check_weight(lambda)?;
    if !lambda.is_dominant() {
        return Err(Error::invalid(format!("{lambda} is not dominant")));
    }
    let lam_rho = vec_add(&lambda.semisimple, &rs.rho);
    let mut dim = Ratio::<i128>::from_integer(1);
    for alpha in &rs.positive_roots {
        dim *= Ratio::new(rs.pair(&lam_rho, alpha), rs.pair(&rs.rho, alpha));
    }
    if !dim.is_integer() || dim <= Ratio::from_integer(0) {
        return Err(Error::NumericFailure(format!("non-integral dimension for {lambda}")));
    }
    Ok(dim.to_integer() as u64)
}

/// Partial order on weights: true iff `lambda - mu` is a nonnegative
/// integer combination of positive roots.
pub fn dominance_leq(rs: &RootSystem, mu: &Weight, lambda: &Weight) -> Result<bool> {
    rs.check_weight(mu)?;
    rs.check_weight(lambda)?;
    if mu.abelian != lambda.abelian {
        return Ok(false);
    }
    Ok(rs.partition_omega(&vec_sub(&lambda.semisimple, &mu.semisimple)) > 0)
}

/// Weyl orbit of a weight together with the stabilizer size; the product
/// of the two is the order of the Weyl group.
pub fn weyl_orbit(rs: &RootSystem, mu: &Weight) -> Result<(Vec<Weight>, usize)> {
    rs.check_weight(mu)?;
    let mut orbit: Vec<Vec<i64>> = rs.weyl.iter().map(|w| mat_vec(w, &mu.semisimple)).collect();
    orbit.sort();
    orbit.dedup();
    let stab = rs.weyl_order() / orbit.len();
    Ok((
        orbit.into_iter().map(|s| Weight::new(s, mu.abelian.clone())).collect(),
        stab,
    ))
}

/// Max absolute fundamental coordinate.
pub fn fund_norm(w: &Weight) -> u64 {
    w.fund_norm()
}

/// All dominant weights `mu` with `mu` below `lambda` in the dominance
/// order (same abelian part).
pub fn dominant_weights_below(rs: &RootSystem, lambda: &Weight) -> Result<Vec<Weight>> {
    rs.check_weight(lambda)?;
    if !lambda.is_dominant() {
        return Err(Error::invalid(format!("{lambda} is not dominant")));
    }
    if rs.rank_h == 0 {
        return Ok(vec![lambda.clone()]);
    }
    let bound: i64 = 2 * lambda.semisimple.iter().sum::<i64>();
    let mut out = Vec::new();
    let mut coords = vec![0i64; rs.rank_h];
    loop {
        let cand = Weight::new(coords.clone(), lambda.abelian.clone());
        if dominance_leq(rs, &cand, lambda)? {
            out.push(cand);
        }
        // odometer over the box [0, bound]^h
        let mut i = 0;
        loop {
            if i == rs.rank_h {
                out.sort();
                return Ok(out);
            }
            coords[i] += 1;
            if coords[i] > bound {
                coords[i] = 0;
                i += 1;
            } else {
                break;
            }
        }
    }
}

/// All dominant semisimple weights with fund norm at most `bound`.
pub fn dominant_weights_up_to(rs: &RootSystem, bound: u64) -> Vec<Weight> {
    let b = bound as i64;
    let mut out = Vec::new();
    let mut coords = vec![0i64; rs.rank_h];
    if rs.rank_h == 0 {
        return vec![Weight::zero(0, rs.abelian_rank)];
    }
    'outer: loop {
        out.push(Weight::new(coords.clone(), vec![0; rs.abelian_rank]));
        let mut i = 0;
        loop {
            if i == rs.rank_h {
                break 'outer;
            }
            coords[i] += 1;
            if coords[i] > b {
                coords[i] = 0;
                i += 1;
            } else {
                break;
            }
        }
    }
    out.sort();
    out
}

/// Evaluate the character of the irreducible representation `lambda` at
/// the torus point `angles` (length h + a, semisimple coordinates
/// first). For selfdual `lambda` the imaginary part is asserted to be
/// negligible; the real part is returned.
pub fn character_value(rs: &RootSystem, lambda: &Weight, angles: &[f64]) -> Result<f64> {
    rs.check_weight(lambda)?;
    if !lambda.is_dominant() {
        return Err(Error::invalid(format!("{lambda} is not dominant")));
    }
    if angles.len() != rs.total_rank() {
        return Err(Error::invalid(format!(
            "expected {} angles, got {}",
            rs.total_rank(),
            angles.len()
        )));
    }
    let (theta_h, theta_a) = angles.split_at(rs.rank_h);
    let tau = 2.0 * std::f64::consts::PI;
    let mut re = 0.0f64;
    let mut im = 0.0f64;
    let mut terms = 0usize;
    for mu in dominant_weights_below(rs, lambda)? {
        let mult = weight_multiplicity(rs, lambda, &mu)? as f64;
        if mult == 0.0 {
            continue;
        }
        for nu in weyl_orbit(rs, &mu)?.0 {
            let eps = rs.to_torus_coords(&nu.semisimple);
            let phase: f64 = tau * eps.iter().zip(theta_h).map(|(&c, t)| c as f64 * t).sum::<f64>();
            re += mult * phase.cos();
            im += mult * phase.sin();
            terms += 1;
        }
    }
    let ab_phase: f64 = tau * lambda.abelian.iter().zip(theta_a).map(|(&c, t)| c as f64 * t).sum::<f64>();
    let (s, c) = ab_phase.sin_cos();
    let (re, im) = (re * c - im * s, re * s + im * c);
    if rs.is_selfdual(lambda) && im.abs() > 1e-12 * (1.0 + terms as f64) {
        return Err(Error::NumericFailure(format!(
            "character of selfdual {lambda} came out non-real (im = {im:e})"
        )));
    }
    Ok(re)
}

/// A virtual character presented by its weight multiset (exact integer
/// multiplicities). Supports products and decomposition into
/// irreducibles, which is how trace moments are cross-checked exactly.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WeightFunction(pub BTreeMap<Weight, i64>);

impl WeightFunction {
    pub fn one(rs: &RootSystem) -> Self {
        let mut m = BTreeMap::new();
        m.insert(Weight::zero(rs.rank_h, rs.abelian_rank), 1);
        WeightFunction(m)
    }

    pub fn insert(&mut self, w: Weight, mult: i64) {
        match self.0.entry(w) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += mult;
                if *o.get() == 0 {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                if mult != 0 {
                    v.insert(mult);
                }
            }
        }
    }

    pub fn convolve(&self, other: &WeightFunction) -> WeightFunction {
        let mut out: BTreeMap<Weight, i64> = BTreeMap::new();
        for (u, cu) in &self.0 {
            for (v, cv) in &other.0 {
                let w = Weight::new(vec_add(&u.semisimple, &v.semisimple), vec_add(&u.abelian, &v.abelian));
                *out.entry(w).or_insert(0) += cu * cv;
            }
        }
        out.retain(|_, c| *c != 0);
        WeightFunction(out)
    }

    /// Multiplicity of the zero weight.
    pub fn zero_coefficient(&self, rs: &RootSystem) -> i64 {
        self.0.get(&Weight::zero(rs.rank_h, rs.abelian_rank)).copied().unwrap_or(0)
    }
}

/// Full weight system of the irreducible representation `lambda`.
pub fn weight_system(rs: &RootSystem, lambda: &Weight) -> Result<WeightFunction> {
    let mut out: BTreeMap<Weight, i64> = BTreeMap::new();
    for mu in dominant_weights_below(rs, lambda)? {
        let mult = weight_multiplicity(rs, lambda, &mu)? as i64;
        if mult == 0 {
            continue;
        }
        for nu in weyl_orbit(rs, &mu)?.0 {
            *out.entry(nu).or_insert(0) += mult;
        }
    }
    Ok(WeightFunction(out))
}

/// Decompose a virtual character given by its weight multiset into
/// irreducible highest weights with integer coefficients.
pub fn decompose_virtual(rs: &RootSystem, wf: &WeightFunction) -> Result<BTreeMap<Weight, i64>> {
    let mut rest = wf.clone();
    let mut out: BTreeMap<Weight, i64> = BTreeMap::new();
    let budget = 10_000 + 10 * wf.0.len();
    for _ in 0..budget {
        if rest.0.is_empty() {
            return Ok(out);
        }
        // pick the dominance-maximal dominant weight: maximize the
        // pairing with rho (strictly positive on positive roots),
        // break ties lexicographically
        let top = rest
            .0
            .keys()
            .filter(|w| w.is_dominant())
            .max_by_key(|w| {
                (
                    w.abelian.clone(),
                    rs.pair(&w.semisimple, &rs.rho),
                    w.semisimple.clone(),
                )
            })
            .cloned()
            .ok_or_else(|| Error::invalid("weight multiset is not Weyl-invariant"))?;
        let coeff = rest.0[&top];
        out.insert(top.clone(), coeff);
        for (w, m) in weight_system(rs, &top)?.0 {
            rest.insert(w, -coeff * m);
        }
    }
    Err(Error::NumericFailure("virtual-character decomposition did not terminate".into()))
}

/// Weight multiset of `chi(.^2)` for the irreducible character of
/// highest weight `lambda`: every weight is doubled.
pub fn squared_weight_system(rs: &RootSystem, lambda: &Weight) -> Result<WeightFunction> {
    let ws = weight_system(rs, lambda)?;
    let mut out = BTreeMap::new();
    for (w, m) in ws.0 {
        let dbl = Weight::new(
            w.semisimple.iter().map(|c| 2 * c).collect(),
            w.abelian.iter().map(|c| 2 * c).collect(),
        );
        *out.entry(dbl).or_insert(0) += m;
    }
    Ok(WeightFunction(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a1() -> RootSystem {
        RootSystem::new(CartanLabel::A1, 0)
    }

    fn c2() -> RootSystem {
        RootSystem::new(CartanLabel::C2, 0)
    }

    fn w(coords: &[i64]) -> Weight {
        Weight::semisimple_only(coords.to_vec())
    }

    #[test]
    fn weyl_group_orders() {
        assert_eq!(a1().weyl_order(), 2);
        assert_eq!(RootSystem::new(CartanLabel::A1xA1, 0).weyl_order(), 4);
        assert_eq!(c2().weyl_order(), 8);
        assert_eq!(RootSystem::new(CartanLabel::Trivial, 1).weyl_order(), 1);
    }

    #[test]
    fn weyl_elements_permute_roots() {
        for rs in [a1(), RootSystem::new(CartanLabel::A1xA1, 0), c2()] {
            let mut all_roots: Vec<Vec<i64>> = rs
                .positive_roots()
                .iter()
                .cloned()
                .chain(rs.positive_roots().iter().map(|r| r.iter().map(|c| -c).collect()))
                .collect();
            all_roots.sort();
            for m in rs.weyl_elements() {
                let mut image: Vec<Vec<i64>> = all_roots.iter().map(|r| mat_vec(m, r)).collect();
                image.sort();
                assert_eq!(image, all_roots);
            }
        }
    }

    #[test]
    fn change_of_basis_identity() {
        // 2 (omega_l, alpha_j) / (alpha_j, alpha_j) = delta_(l j)
        for rs in [a1(), RootSystem::new(CartanLabel::A1xA1, 0), c2()] {
            for l in 0..rs.rank_h() {
                let omega: Vec<i64> = (0..rs.rank_h()).map(|i| i64::from(i == l)).collect();
                for (j, alpha) in rs.simple_roots().iter().enumerate() {
                    let lhs = 2 * rs.pair(&omega, alpha);
                    let rhs = rs.pair(alpha, alpha) * i128::from(l == j);
                    assert_eq!(lhs, rhs, "l={l} j={j}");
                }
            }
        }
    }

    #[test]
    fn partition_examples() {
        let rs = a1();
        assert_eq!(kostant_partition(&rs, &w(&[0])).unwrap(), 1);
        assert_eq!(kostant_partition(&rs, &w(&[2])).unwrap(), 1); // alpha
        assert_eq!(kostant_partition(&rs, &w(&[1])).unwrap(), 0); // omega not in root lattice
        assert_eq!(kostant_partition(&rs, &w(&[-2])).unwrap(), 0);

        // C2: 2 alpha1 + alpha2 = {itself}, {a1, a1+a2}, {a1, a1, a2}
        let rs = c2();
        let v = w(&[2 * 2 - 2, -2 + 2]); // 2*(2,-1) + (-2,2) = (2, 0)
        assert_eq!(v, w(&[2, 0]));
        assert_eq!(kostant_partition(&rs, &v).unwrap(), 3);
    }

    #[test]
    fn multiplicity_examples() {
        let rs = a1();
        assert_eq!(weight_multiplicity(&rs, &w(&[2]), &w(&[0])).unwrap(), 1);
        assert_eq!(weight_multiplicity(&rs, &w(&[2]), &w(&[2])).unwrap(), 1);
        assert_eq!(weight_multiplicity(&rs, &w(&[2]), &w(&[4])).unwrap(), 0);
        let rs = c2();
        // 5-dimensional representation of C2
        assert_eq!(weight_multiplicity(&rs, &w(&[0, 1]), &w(&[0, 0])).unwrap(), 1);
        assert_eq!(weight_multiplicity(&rs, &w(&[0, 1]), &w(&[0, 1])).unwrap(), 1);
    }

    #[test]
    fn multiplicity_rejects_non_dominant() {
        let rs = a1();
        assert!(weight_multiplicity(&rs, &w(&[-2]), &w(&[0])).is_err());
    }

    #[test]
    fn gupta_f_a1() {
        let rs = a1();
        assert_eq!(gupta_f(&rs, &w(&[1])).unwrap(), 1);
        assert_eq!(gupta_f(&rs, &w(&[-1])).unwrap(), -1);
        assert_eq!(gupta_f(&rs, &w(&[0])).unwrap(), 0);
    }

    #[test]
    fn gupta_inverse_pinned_convention() {
        let rs = a1();
        let one = Ratio::from_integer(1);
        assert_eq!(gupta_inverse_entry(&rs, &w(&[0]), &w(&[0])).unwrap(), one);
        assert_eq!(
            gupta_inverse_entry(&rs, &w(&[2]), &w(&[0])).unwrap(),
            Ratio::from_integer(-1)
        );
        assert_eq!(gupta_inverse_entry(&rs, &w(&[2]), &w(&[2])).unwrap(), one);
    }

    #[test]
    fn dimensions() {
        let rs = a1();
        for n in 0..8 {
            assert_eq!(weyl_dimension(&rs, &w(&[n])).unwrap(), (n + 1) as u64);
        }
        let rs = c2();
        assert_eq!(weyl_dimension(&rs, &w(&[0, 0])).unwrap(), 1);
        assert_eq!(weyl_dimension(&rs, &w(&[1, 0])).unwrap(), 4);
        assert_eq!(weyl_dimension(&rs, &w(&[0, 1])).unwrap(), 5);
        assert_eq!(weyl_dimension(&rs, &w(&[1, 1])).unwrap(), 16);
    }

    #[test]
    fn dominance_examples() {
        let rs = a1();
        assert!(dominance_leq(&rs, &w(&[2]), &w(&[2])).unwrap());
        assert!(dominance_leq(&rs, &w(&[0]), &w(&[2])).unwrap());
        assert!(!dominance_leq(&rs, &w(&[0]), &w(&[1])).unwrap());
    }

    #[test]
    fn orbits() {
        let rs = a1();
        let (orbit, stab) = weyl_orbit(&rs, &w(&[0])).unwrap();
        assert_eq!((orbit.len(), stab), (1, 2));
        let (orbit, stab) = weyl_orbit(&rs, &w(&[1])).unwrap();
        assert_eq!((orbit.len(), stab), (2, 1));
        let rs = c2();
        let (orbit, stab) = weyl_orbit(&rs, &w(&[1, 0])).unwrap();
        assert_eq!((orbit.len(), stab), (4, 2));
    }

    #[test]
    fn characters_at_identity_and_quarter_turn() {
        let rs = a1();
        assert!((character_value(&rs, &w(&[1]), &[0.0]).unwrap() - 2.0).abs() < 1e-12);
        // trace of Sym^2 at theta = 1/4: e^(i pi) + 1 + e^(-i pi) = -1
        assert!((character_value(&rs, &w(&[2]), &[0.25]).unwrap() + 1.0).abs() < 1e-12);
        let rs = c2();
        assert!((character_value(&rs, &w(&[1, 0]), &[0.0, 0.0]).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn character_against_torus_weights_c2() {
        // standard 4-dim representation: weights +-e1, +-e2
        let rs = c2();
        let theta = [0.137, 0.289];
        let tau = 2.0 * std::f64::consts::PI;
        let expected = 2.0 * (tau * theta[0]).cos() + 2.0 * (tau * theta[1]).cos();
        let got = character_value(&rs, &w(&[1, 0]), &theta).unwrap();
        assert!((got - expected).abs() < 1e-12, "{got} vs {expected}");
    }

    #[test]
    fn tensor_square_decompositions() {
        let rs = a1();
        let std = weight_system(&rs, &w(&[1])).unwrap();
        let sq = std.convolve(&std);
        let dec = decompose_virtual(&rs, &sq).unwrap();
        assert_eq!(dec.get(&w(&[2])), Some(&1));
        assert_eq!(dec.get(&w(&[0])), Some(&1));

        let rs = c2();
        let std = weight_system(&rs, &w(&[1, 0])).unwrap();
        let sq = std.convolve(&std);
        let dec = decompose_virtual(&rs, &sq).unwrap();
        assert_eq!(dec.get(&w(&[2, 0])), Some(&1)); // 10-dim
        assert_eq!(dec.get(&w(&[0, 1])), Some(&1)); // 5-dim
        assert_eq!(dec.get(&w(&[0, 0])), Some(&1)); // trivial
    }

    #[test]
    fn squared_character_is_frobenius_schur() {
        let rs = a1();
        let dec = decompose_virtual(&rs, &squared_weight_system(&rs, &w(&[1])).unwrap()).unwrap();
        // chi(g^2) for the standard symplectic representation: delta = -1
        assert_eq!(dec.get(&w(&[0])), Some(&-1));
        assert_eq!(dec.get(&w(&[2])), Some(&1));
    }
}
