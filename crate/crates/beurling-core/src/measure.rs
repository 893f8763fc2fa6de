//! Stieltjes measures on `[1, cutoff]` and their multiplicative convolution
//! algebra: cumulatives, convolution, the convolution exponential and inverse,
//! log-weighting and the Chebyshev function.
//!
//! Every measure carries an explicit truncation cutoff. Convolution results
//! are only valid up to the smaller input cutoff and record that cutoff;
//! atom products beyond it are dropped. Continuous parts live on a
//! log-uniform grid and convolve as sequences in log coordinates.

use crate::error::{Error, Result};

/// Relative tolerance under which two atom locations are considered equal.
pub const MERGE_EPS: f64 = 1e-12;

/// Default ceiling on the number of convolution-series terms. A measure whose
/// atomic support starts too close to 1 would need more terms than this to
/// push its powers past the cutoff, and is rejected instead of silently
/// truncated.
pub const DEFAULT_MAX_TERMS: usize = 600;

/// A single point mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub location: f64,
    pub mass: f64,
}

// ---------------------------------------------------------------------------
// Log-uniform density grid
// ---------------------------------------------------------------------------

/// Continuous part of a measure, discretized to node masses on the grid
/// `u_i = exp(i * step)`. Node 0 sits at `u = 1` and must carry no mass;
/// point mass at 1 is always represented by an explicit atom.
#[derive(Debug, Clone, PartialEq)]
pub struct LogGrid {
    step: f64,
    masses: Vec<f64>,
}

impl LogGrid {
    pub fn new(step: f64, masses: Vec<f64>) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidMeasure(format!("bad grid step {step}")));
        }
        if masses.first().map_or(false, |&w| w != 0.0) {
            return Err(Error::InvalidMeasure(
                "grid node 0 (location 1) must carry no mass".into(),
            ));
        }
        Ok(LogGrid { step, masses })
    }

    /// Sample a density `g(u)` (mass per unit length du) on `[1, cutoff]`
    /// with `cells` cells, assigning trapezoidal node masses.
    ///
    /// In log coordinates `v = ln u` the mass density is `g(e^v) e^v`, so the
    /// node mass is `step * g(u_i) * u_i`, halved at the two endpoints.
    pub fn from_density<F: Fn(f64) -> f64>(cutoff: f64, cells: usize, g: F) -> Result<Self> {
        if !(cutoff > 1.0) || cells < 2 {
            return Err(Error::InvalidMeasure("grid needs cutoff > 1 and >= 2 cells".into()));
        }
        let step = cutoff.ln() / cells as f64;
        let masses = (0..=cells)
            .map(|i| {
                let v = i as f64 * step;
                let end = i == 0 || i == cells;
                let w = step * g(v.exp()) * v.exp();
                if end {
                    w / 2.0
                } else {
                    w
                }
            })
            .collect::<Vec<_>>();
        let mut grid = LogGrid { step, masses };
        grid.masses[0] = 0.0; // location 1 never carries grid mass
        Ok(grid)
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.iter().all(|&w| w == 0.0)
    }

    pub fn node_location(&self, i: usize) -> f64 {
        (i as f64 * self.step).exp()
    }

    fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    fn total_variation(&self) -> f64 {
        self.masses.iter().map(|w| w.abs()).sum()
    }

    /// Node mass with the endpoint halving undone: `h * G(v_i)` where `G` is
    /// the mass density in log coordinates.
    fn g_mass(&self, i: usize) -> f64 {
        if i == 0 || i == self.masses.len() - 1 {
            2.0 * self.masses[i]
        } else {
            self.masses[i]
        }
    }

    /// Mass accumulated up to `v = ln x`, read as the trapezoid integral of
    /// the sampled density (continuous in `v`, exact for linear densities).
    fn cumulative_log(&self, prefix: &[f64], v: f64) -> f64 {
        if v <= 0.0 {
            return 0.0;
        }
        let last = self.masses.len() - 1;
        let pos = v / self.step;
        let k = (pos.floor() as usize).min(last);
        let mut sum = if k == 0 { 0.0 } else { prefix[k - 1] } + self.g_mass(k) / 2.0;
        if k < last {
            let frac = (pos - k as f64).min(1.0);
            let gk = self.g_mass(k);
            let gk1 = self.g_mass(k + 1);
            sum += frac * gk + frac * frac * (gk1 - gk) / 2.0;
        }
        sum
    }

    /// Redistribute node masses onto a grid with a different step; each node
    /// mass is split linearly between the two enclosing target nodes.
    fn resampled(&self, step: f64, len: usize) -> LogGrid {
        let mut out = vec![0.0; len];
        for (i, &w) in self.masses.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let pos = i as f64 * self.step / step;
            let j = pos.floor() as usize;
            let f = pos - j as f64;
            if j < len {
                out[j] += w * (1.0 - f);
            }
            if f > 0.0 && j + 1 < len {
                out[j + 1] += w * f;
            }
        }
        LogGrid { step, masses: out }
    }
}

// ---------------------------------------------------------------------------
// Generic Stieltjes measure
// ---------------------------------------------------------------------------

/// A signed measure on `[1, cutoff]`: sorted atoms plus an optional
/// log-uniform continuous part. Immutable after construction; all operations
/// return fresh measures.
#[derive(Debug, Clone)]
pub struct StieltjesMeasure {
    atoms: Vec<Atom>,
    prefix: Vec<f64>,
    density: Option<LogGrid>,
    grid_prefix: Vec<f64>,
    cutoff: f64,
}

impl StieltjesMeasure {
    pub fn new(atoms: Vec<Atom>, density: Option<LogGrid>, cutoff: f64) -> Result<Self> {
        if !(cutoff > 1.0) {
            return Err(Error::InvalidMeasure(format!("cutoff {cutoff} must exceed 1")));
        }
        let atoms = normalize_atoms(atoms, cutoff)?;
        let prefix = prefix_sums(&atoms);
        let grid_prefix = density
            .as_ref()
            .map(|g| prefix_f64(g.masses()))
            .unwrap_or_default();
        Ok(StieltjesMeasure {
            atoms,
            prefix,
            density,
            grid_prefix,
            cutoff,
        })
    }

    /// The unit point mass at 1 (convolution identity).
    pub fn delta_one(cutoff: f64) -> Self {
        StieltjesMeasure::new(vec![Atom { location: 1.0, mass: 1.0 }], None, cutoff).unwrap()
    }

    pub fn point(location: f64, mass: f64, cutoff: f64) -> Result<Self> {
        StieltjesMeasure::new(vec![Atom { location, mass }], None, cutoff)
    }

    pub fn zero(cutoff: f64) -> Self {
        StieltjesMeasure::new(Vec::new(), None, cutoff).unwrap()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn density(&self) -> Option<&LogGrid> {
        self.density.as_ref()
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    /// Mass of the atom at location 1, if any.
    pub fn mass_at_one(&self) -> f64 {
        match self.atoms.first() {
            Some(a) if a.location <= 1.0 + MERGE_EPS => a.mass,
            _ => 0.0,
        }
    }

    /// Mass of the atom whose location matches `loc` within the merge
    /// tolerance; zero when none does.
    pub fn mass_at_location(&self, loc: f64) -> f64 {
        let i = self.atoms.partition_point(|a| a.location < loc * (1.0 - MERGE_EPS));
        match self.atoms.get(i) {
            Some(a) if a.location <= loc * (1.0 + MERGE_EPS) => a.mass,
            _ => 0.0,
        }
    }

    pub fn total_mass(&self) -> f64 {
        let a: f64 = self.atoms.iter().map(|a| a.mass).sum();
        a + self.density.as_ref().map_or(0.0, |g| g.total_mass())
    }

    pub fn total_variation(&self) -> f64 {
        let a: f64 = self.atoms.iter().map(|a| a.mass.abs()).sum();
        a + self.density.as_ref().map_or(0.0, |g| g.total_variation())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.atoms.iter().all(|a| a.mass >= 0.0)
            && self
                .density
                .as_ref()
                .map_or(true, |g| g.masses().iter().all(|&w| w >= 0.0))
    }

    /// Smallest support point strictly above 1, or `None` for measures
    /// concentrated at 1.
    pub fn inf_support_above_one(&self) -> Option<f64> {
        let atom = self
            .atoms
            .iter()
            .find(|a| a.location > 1.0 + MERGE_EPS)
            .map(|a| a.location);
        let grid = self.density.as_ref().and_then(|g| {
            g.masses()
                .iter()
                .position(|&w| w != 0.0)
                .map(|i| g.node_location(i))
        });
        match (atom, grid) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (x, None) => x,
            (None, y) => y,
        }
    }

    fn check_range(&self, x: f64) -> Result<()> {
        if !(1.0..=self.cutoff * (1.0 + MERGE_EPS)).contains(&x) {
            return Err(Error::Range { x, lo: 1.0, hi: self.cutoff });
        }
        Ok(())
    }

    /// Right-continuous cumulative `F(x)`: atoms at `x` are included.
    pub fn cumulative(&self, x: f64) -> Result<f64> {
        self.check_range(x)?;
        let idx = self.atoms.partition_point(|a| a.location <= x);
        let mut sum = if idx == 0 { 0.0 } else { self.prefix[idx - 1] };
        if let Some(grid) = &self.density {
            sum += grid.cumulative_log(&self.grid_prefix, x.ln());
        }
        Ok(sum)
    }

    /// Left limit `F(x-)`: atoms exactly at `x` are excluded.
    pub fn cumulative_left(&self, x: f64) -> Result<f64> {
        self.check_range(x)?;
        let idx = self.atoms.partition_point(|a| a.location < x * (1.0 - MERGE_EPS));
        let mut sum = if idx == 0 { 0.0 } else { self.prefix[idx - 1] };
        if let Some(grid) = &self.density {
            sum += grid.cumulative_log(&self.grid_prefix, x.ln());
        }
        Ok(sum)
    }

    /// Restriction to a smaller cutoff.
    pub fn truncated(&self, cutoff: f64) -> Result<Self> {
        if cutoff > self.cutoff * (1.0 + MERGE_EPS) {
            return Err(Error::Range { x: cutoff, lo: 1.0, hi: self.cutoff });
        }
        let atoms = self
            .atoms
            .iter()
            .filter(|a| a.location <= cutoff)
            .copied()
            .collect();
        let density = self.density.as_ref().map(|g| {
            let keep = (cutoff.ln() / g.step()).floor() as usize + 1;
            LogGrid {
                step: g.step(),
                masses: g.masses()[..keep.min(g.len())].to_vec(),
            }
        });
        StieltjesMeasure::new(atoms, density, cutoff)
    }
}

fn prefix_sums(atoms: &[Atom]) -> Vec<f64> {
    let mut acc = 0.0;
    atoms
        .iter()
        .map(|a| {
            acc += a.mass;
            acc
        })
        .collect()
}

fn prefix_f64(vals: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    vals.iter()
        .map(|&w| {
            acc += w;
            acc
        })
        .collect()
}

/// Sort, merge locations equal to within `MERGE_EPS` relative, drop zero
/// masses, and validate the support window. Idempotent.
fn normalize_atoms(mut atoms: Vec<Atom>, cutoff: f64) -> Result<Vec<Atom>> {
    for a in &atoms {
        if !a.location.is_finite() || a.location < 1.0 {
            return Err(Error::InvalidMeasure(format!(
                "atom location {} outside [1, inf)",
                a.location
            )));
        }
        if !a.mass.is_finite() {
            return Err(Error::InvalidMeasure("non-finite atom mass".into()));
        }
    }
    atoms.retain(|a| a.location <= cutoff * (1.0 + MERGE_EPS));
    atoms.sort_unstable_by(|p, q| p.location.total_cmp(&q.location));
    let mut out: Vec<Atom> = Vec::with_capacity(atoms.len());
    for a in atoms {
        match out.last_mut() {
            Some(last) if a.location <= last.location * (1.0 + MERGE_EPS) => {
                last.mass += a.mass;
            }
            _ => out.push(a),
        }
    }
    out.retain(|a| a.mass != 0.0);
    Ok(out)
}

// ---------------------------------------------------------------------------
// Lattice measure
// ---------------------------------------------------------------------------

/// Measure whose atoms sit exactly on the geometric lattice
/// `base^(m/denom)`. Convolution of two lattice measures with equal
/// `(base, denom)` stays on the lattice: exponents add, so the arithmetic is
/// exact integer indexing with no floating-point location merging.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeMeasure {
    base: f64,
    denom: u32,
    max_exponent: u32,
    /// Sorted `(exponent, mass)` pairs with no zero masses.
    coeffs: Vec<(u32, f64)>,
    prefix: Vec<f64>,
}

impl LatticeMeasure {
    pub fn new(base: f64, denom: u32, max_exponent: u32, coeffs: Vec<(u32, f64)>) -> Result<Self> {
        if !(base > 1.0) || denom == 0 {
            return Err(Error::InvalidMeasure(format!(
                "lattice needs base > 1 and denom >= 1, got base {base}, denom {denom}"
            )));
        }
        let mut coeffs: Vec<(u32, f64)> = coeffs.into_iter().filter(|&(_, w)| w != 0.0).collect();
        coeffs.sort_unstable_by_key(|&(m, _)| m);
        for pair in coeffs.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(Error::InvalidMeasure(format!(
                    "duplicate lattice exponent {}",
                    pair[0].0
                )));
            }
        }
        if let Some(&(m, _)) = coeffs.last() {
            if m > max_exponent {
                return Err(Error::InvalidMeasure(format!(
                    "exponent {m} exceeds max_exponent {max_exponent}"
                )));
            }
        }
        let prefix = prefix_f64(&coeffs.iter().map(|&(_, w)| w).collect::<Vec<_>>());
        Ok(LatticeMeasure { base, denom, max_exponent, coeffs, prefix })
    }

    pub fn delta_one(base: f64, denom: u32, max_exponent: u32) -> Self {
        LatticeMeasure::new(base, denom, max_exponent, vec![(0, 1.0)]).unwrap()
    }

    pub fn base(&self) -> f64 {
        self.base
    }

    pub fn denom(&self) -> u32 {
        self.denom
    }

    pub fn max_exponent(&self) -> u32 {
        self.max_exponent
    }

    pub fn coeffs(&self) -> &[(u32, f64)] {
        &self.coeffs
    }

    pub fn cutoff(&self) -> f64 {
        self.location_of(self.max_exponent)
    }

    pub fn location_of(&self, exponent: u32) -> f64 {
        (self.base.ln() * exponent as f64 / self.denom as f64).exp()
    }

    /// Largest lattice exponent whose location does not exceed `x`.
    pub fn exponent_floor(&self, x: f64) -> Result<u32> {
        if x < 1.0 {
            return Err(Error::Range { x, lo: 1.0, hi: self.cutoff() });
        }
        // Guard against an exact lattice point landing epsilon below its
        // integer index after the float log.
        let m = (self.denom as f64 * x.ln() / self.base.ln() + 1e-9).floor();
        Ok((m as u32).min(self.max_exponent))
    }

    pub fn mass_at(&self, exponent: u32) -> f64 {
        match self.coeffs.binary_search_by_key(&exponent, |&(m, _)| m) {
            Ok(i) => self.coeffs[i].1,
            Err(_) => 0.0,
        }
    }

    pub fn dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.max_exponent as usize + 1];
        for &(m, w) in &self.coeffs {
            out[m as usize] = w;
        }
        out
    }

    pub fn from_dense(base: f64, denom: u32, dense: Vec<f64>) -> Result<Self> {
        let max_exponent = dense.len().saturating_sub(1) as u32;
        let coeffs = dense
            .into_iter()
            .enumerate()
            .filter(|&(_, w)| w != 0.0)
            .map(|(m, w)| (m as u32, w))
            .collect();
        LatticeMeasure::new(base, denom, max_exponent, coeffs)
    }

    /// Cumulative over exponents `<= m` (right-continuous at lattice points).
    pub fn cumulative_at_exponent(&self, m: u32) -> f64 {
        let idx = self.coeffs.partition_point(|&(e, _)| e <= m);
        if idx == 0 {
            0.0
        } else {
            self.prefix[idx - 1]
        }
    }

    /// Cumulative over exponents `< m` (left limit at the lattice point `m`).
    pub fn cumulative_left_exponent(&self, m: u32) -> f64 {
        let idx = self.coeffs.partition_point(|&(e, _)| e < m);
        if idx == 0 {
            0.0
        } else {
            self.prefix[idx - 1]
        }
    }

    pub fn cumulative(&self, x: f64) -> Result<f64> {
        if !(1.0..=self.cutoff() * (1.0 + MERGE_EPS)).contains(&x) {
            return Err(Error::Range { x, lo: 1.0, hi: self.cutoff() });
        }
        Ok(self.cumulative_at_exponent(self.exponent_floor(x)?))
    }

    pub fn total_mass(&self) -> f64 {
        self.prefix.last().copied().unwrap_or(0.0)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|&(_, w)| w >= 0.0)
    }

    pub fn compatible_with(&self, other: &LatticeMeasure) -> bool {
        self.base == other.base && self.denom == other.denom
    }

    pub fn convolve(&self, other: &LatticeMeasure) -> Result<LatticeMeasure> {
        if !self.compatible_with(other) {
            return Err(Error::InvalidMeasure(
                "incompatible lattice parameters; convert to generic measures first".into(),
            ));
        }
        let n = self.max_exponent.min(other.max_exponent) as usize;
        let mut out = vec![0.0; n + 1];
        for &(i, wa) in &self.coeffs {
            if i as usize > n {
                break;
            }
            for &(j, wb) in &other.coeffs {
                let k = i as usize + j as usize;
                if k > n {
                    break;
                }
                out[k] += wa * wb;
            }
        }
        LatticeMeasure::from_dense(self.base, self.denom, out)
    }

    /// Convolution exponential `exp*(scale * self)` truncated at
    /// `max_exponent`. Exact on the lattice: one O(n^2) power-series pass.
    pub fn exp_star(&self, scale: f64) -> Result<LatticeMeasure> {
        let mut a = self.dense();
        if a[0] != 0.0 {
            return Err(Error::InvalidMeasure(
                "exp* input must carry no mass at location 1".into(),
            ));
        }
        for w in &mut a {
            *w *= scale;
        }
        let b = exp_series(&a);
        LatticeMeasure::from_dense(self.base, self.denom, b)
    }

    /// Convolution inverse of `delta_1 + R`.
    pub fn conv_inverse(&self) -> Result<LatticeMeasure> {
        let c = self.dense();
        if (c[0] - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidMeasure(format!(
                "inverse needs unit mass at location 1, found {}",
                c[0]
            )));
        }
        let d = inverse_series(&c);
        LatticeMeasure::from_dense(self.base, self.denom, d)
    }

    pub fn log_weight(&self) -> LatticeMeasure {
        let lnb = self.base.ln();
        let coeffs = self
            .coeffs
            .iter()
            .filter(|&&(m, _)| m != 0)
            .map(|&(m, w)| (m, w * (m as f64 * lnb / self.denom as f64)))
            .collect();
        LatticeMeasure::new(self.base, self.denom, self.max_exponent, coeffs).unwrap()
    }

    /// Expand to a generic measure with explicit float locations.
    pub fn to_stieltjes(&self) -> Result<StieltjesMeasure> {
        let atoms = self
            .coeffs
            .iter()
            .map(|&(m, w)| Atom { location: self.location_of(m), mass: w })
            .collect();
        StieltjesMeasure::new(atoms, None, self.cutoff())
    }
}

// ---------------------------------------------------------------------------
// Formal power-series kernels (shared by lattice and grid paths)
// ---------------------------------------------------------------------------

/// Coefficients of `exp(A)` for a series with `a[0] = 0`, via the standard
/// recurrence `k b_k = sum_j j a_j b_{k-j}`.
pub(crate) fn exp_series(a: &[f64]) -> Vec<f64> {
    debug_assert!(a.first().map_or(true, |&x| x == 0.0));
    let n = a.len();
    let mut b = vec![0.0; n];
    if n == 0 {
        return b;
    }
    b[0] = 1.0;
    for k in 1..n {
        let mut acc = 0.0;
        for j in 1..=k {
            if a[j] != 0.0 {
                acc += j as f64 * a[j] * b[k - j];
            }
        }
        b[k] = acc / k as f64;
    }
    b
}

/// Coefficients of `1 / C` for a series with `c[0] = 1`.
pub(crate) fn inverse_series(c: &[f64]) -> Vec<f64> {
    debug_assert!(c.first().map_or(true, |&x| (x - 1.0).abs() < 1e-9));
    let n = c.len();
    let mut d = vec![0.0; n];
    if n == 0 {
        return d;
    }
    d[0] = 1.0;
    for k in 1..n {
        let mut acc = 0.0;
        for j in 1..=k {
            if c[j] != 0.0 {
                acc += c[j] * d[k - j];
            }
        }
        d[k] = -acc;
    }
    d
}

// ---------------------------------------------------------------------------
// Unified measure
// ---------------------------------------------------------------------------

/// Either an exact lattice measure or a generic Stieltjes measure.
///
/// Binary operations stay on the lattice when both operands share
/// `(base, denom)`; otherwise the lattice side is expanded to a generic
/// measure first.
#[derive(Debug, Clone)]
pub enum Measure {
    Lattice(LatticeMeasure),
    Stieltjes(StieltjesMeasure),
}

impl From<LatticeMeasure> for Measure {
    fn from(m: LatticeMeasure) -> Self {
        Measure::Lattice(m)
    }
}

impl From<StieltjesMeasure> for Measure {
    fn from(m: StieltjesMeasure) -> Self {
        Measure::Stieltjes(m)
    }
}

impl Measure {
    pub fn delta_one(cutoff: f64) -> Measure {
        StieltjesMeasure::delta_one(cutoff).into()
    }

    pub fn cutoff(&self) -> f64 {
        match self {
            Measure::Lattice(m) => m.cutoff(),
            Measure::Stieltjes(m) => m.cutoff(),
        }
    }

    pub fn cumulative(&self, x: f64) -> Result<f64> {
        match self {
            Measure::Lattice(m) => m.cumulative(x),
            Measure::Stieltjes(m) => m.cumulative(x),
        }
    }

    pub fn cumulative_left(&self, x: f64) -> Result<f64> {
        match self {
            Measure::Lattice(m) => {
                let e = m.exponent_floor(x)?;
                // Exact lattice point: exclude its own mass.
                if (m.location_of(e) - x).abs() <= x * MERGE_EPS {
                    Ok(m.cumulative_left_exponent(e))
                } else {
                    Ok(m.cumulative_at_exponent(e))
                }
            }
            Measure::Stieltjes(m) => m.cumulative_left(x),
        }
    }

    pub fn total_mass(&self) -> f64 {
        match self {
            Measure::Lattice(m) => m.total_mass(),
            Measure::Stieltjes(m) => m.total_mass(),
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        match self {
            Measure::Lattice(m) => m.is_nonnegative(),
            Measure::Stieltjes(m) => m.is_nonnegative(),
        }
    }

    pub fn mass_at_one(&self) -> f64 {
        match self {
            Measure::Lattice(m) => m.mass_at(0),
            Measure::Stieltjes(m) => m.mass_at_one(),
        }
    }

    pub fn as_stieltjes(&self) -> Result<StieltjesMeasure> {
        match self {
            Measure::Lattice(m) => m.to_stieltjes(),
            Measure::Stieltjes(m) => Ok(m.clone()),
        }
    }

    pub fn log_weight(&self) -> Measure {
        match self {
            Measure::Lattice(m) => m.log_weight().into(),
            Measure::Stieltjes(m) => log_weight_stieltjes(m).into(),
        }
    }

    pub fn convolve(&self, other: &Measure) -> Result<Measure> {
        match (self, other) {
            (Measure::Lattice(a), Measure::Lattice(b)) if a.compatible_with(b) => {
                Ok(a.convolve(b)?.into())
            }
            _ => {
                let a = self.as_stieltjes()?;
                let b = other.as_stieltjes()?;
                Ok(convolve_stieltjes(&a, &b)?.into())
            }
        }
    }

    pub fn exp_star(&self, scale: f64) -> Result<Measure> {
        match self {
            Measure::Lattice(m) => Ok(m.exp_star(scale)?.into()),
            Measure::Stieltjes(m) => Ok(exp_star_stieltjes(m, scale, DEFAULT_MAX_TERMS)?.into()),
        }
    }

    pub fn conv_inverse(&self) -> Result<Measure> {
        match self {
            Measure::Lattice(m) => Ok(m.conv_inverse()?.into()),
            Measure::Stieltjes(m) => Ok(conv_inverse_stieltjes(m, DEFAULT_MAX_TERMS)?.into()),
        }
    }
}

/// The g-Chebyshev function `psi(x)` of a prime measure: the cumulative of
/// the log-weighted measure.
pub fn chebyshev_psi(pi: &Measure, x: f64) -> Result<f64> {
    if !pi.is_nonnegative() {
        return Err(Error::InvalidMeasure(
            "chebyshev_psi requires a nonnegative prime measure".into(),
        ));
    }
    pi.log_weight().cumulative(x)
}

// ---------------------------------------------------------------------------
// Generic-measure operation kernels
// ---------------------------------------------------------------------------

fn log_weight_stieltjes(m: &StieltjesMeasure) -> StieltjesMeasure {
    let atoms = m
        .atoms()
        .iter()
        .map(|a| Atom { location: a.location, mass: a.mass * a.location.ln() })
        .collect();
    let density = m.density().map(|g| {
        let masses = g
            .masses()
            .iter()
            .enumerate()
            .map(|(i, &w)| w * (i as f64 * g.step()))
            .collect();
        LogGrid { step: g.step(), masses }
    });
    StieltjesMeasure::new(atoms, density, m.cutoff()).unwrap()
}

/// Atom-by-atom product convolution truncated at `cutoff`; the result is
/// sorted and merged.
fn convolve_atom_lists(a: &[Atom], b: &[Atom], cutoff: f64, factor: f64) -> Vec<Atom> {
    let mut out: Vec<Atom> = Vec::new();
    for pa in a {
        let lim = cutoff / pa.location * (1.0 + MERGE_EPS);
        let hi = b.partition_point(|q| q.location <= lim);
        for pb in &b[..hi] {
            let location = pa.location * pb.location;
            if location <= cutoff * (1.0 + MERGE_EPS) {
                out.push(Atom { location, mass: pa.mass * pb.mass * factor });
            }
        }
    }
    merge_sorted(out)
}

fn merge_sorted(mut atoms: Vec<Atom>) -> Vec<Atom> {
    atoms.sort_unstable_by(|p, q| p.location.total_cmp(&q.location));
    let mut out: Vec<Atom> = Vec::with_capacity(atoms.len());
    for a in atoms {
        match out.last_mut() {
            Some(last) if a.location <= last.location * (1.0 + MERGE_EPS) => last.mass += a.mass,
            _ => out.push(a),
        }
    }
    out.retain(|a| a.mass != 0.0);
    out
}

/// Translate grid node masses up by `ln shift_location`, splitting each mass
/// linearly between the two enclosing nodes.
fn translate_grid(grid: &[f64], step: f64, shift_location: f64, mass: f64, out: &mut [f64]) {
    let shift = shift_location.ln() / step;
    let s = shift.floor() as usize;
    let f = shift - s as f64;
    for (j, &w) in grid.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let k = j + s;
        if k < out.len() {
            out[k] += w * mass * (1.0 - f);
        }
        if f > 0.0 && k + 1 < out.len() {
            out[k + 1] += w * mass * f;
        }
    }
}

pub(crate) fn convolve_stieltjes(
    a: &StieltjesMeasure,
    b: &StieltjesMeasure,
) -> Result<StieltjesMeasure> {
    let cutoff = a.cutoff().min(b.cutoff());
    let atoms = convolve_atom_lists(a.atoms(), b.atoms(), cutoff, 1.0);

    let mut grid: Option<LogGrid> = None;
    if a.density().is_some() || b.density().is_some() {
        let step = match (a.density(), b.density()) {
            (Some(ga), Some(gb)) => ga.step().min(gb.step()),
            (Some(g), None) | (None, Some(g)) => g.step(),
            (None, None) => unreachable!(),
        };
        let len = (cutoff.ln() / step).floor() as usize + 1;
        let mut out = vec![0.0; len];

        // atom x density, both ways
        let pairs: [(&StieltjesMeasure, &StieltjesMeasure); 2] = [(a, b), (b, a)];
        for (atom_side, grid_side) in pairs {
            if let Some(g) = grid_side.density() {
                let g = if (g.step() - step).abs() > step * 1e-12 {
                    g.resampled(step, len)
                } else {
                    g.clone()
                };
                for atom in atom_side.atoms() {
                    translate_grid(g.masses(), step, atom.location, atom.mass, &mut out);
                }
            }
        }

        // density x density: sequence convolution in log coordinates
        if let (Some(ga), Some(gb)) = (a.density(), b.density()) {
            let ga = ga.resampled(step, len);
            let gb = gb.resampled(step, len);
            let wa = ga.masses();
            let wb = gb.masses();
            for (i, &x) in wa.iter().enumerate() {
                if x == 0.0 || i >= len {
                    continue;
                }
                let top = len - i;
                for (j, &y) in wb.iter().enumerate().take(top) {
                    if y != 0.0 {
                        out[i + j] += x * y;
                    }
                }
            }
        }

        out[0] = 0.0;
        grid = Some(LogGrid { step, masses: out });
    }

    StieltjesMeasure::new(atoms, grid, cutoff)
}

/// Number of series terms needed before powers of the atomic part clear the
/// cutoff; errors out when the support floor makes that impractical.
fn series_term_bound(min_loc: f64, cutoff: f64, max_terms: usize) -> Result<usize> {
    if min_loc <= 1.0 + MERGE_EPS {
        return Err(Error::Config(
            "series input has support touching 1; no finite truncation exists".into(),
        ));
    }
    let k = (cutoff.ln() / min_loc.ln()).ceil() as usize;
    if k > max_terms {
        return Err(Error::Config(format!(
            "series needs {k} terms (support floor {min_loc:.6}, cutoff {cutoff:.3e}); \
             limit is {max_terms}"
        )));
    }
    Ok(k)
}

/// Convolution exponential `exp*(scale * mu)` for a generic measure.
///
/// The atomic part runs the factorial series, which terminates once atom
/// products clear the cutoff. A continuous part is exponentiated exactly in
/// grid-index space by the power-series recurrence, then the two results are
/// convolved.
pub(crate) fn exp_star_stieltjes(
    mu: &StieltjesMeasure,
    scale: f64,
    max_terms: usize,
) -> Result<StieltjesMeasure> {
    if mu.mass_at_one() != 0.0 {
        return Err(Error::InvalidMeasure(
            "exp* input must carry no mass at location 1".into(),
        ));
    }
    let cutoff = mu.cutoff();

    // Atomic series: delta_1 + sum_k (scale*mu_a)^{*k} / k!
    let scaled: Vec<Atom> = mu
        .atoms()
        .iter()
        .map(|a| Atom { location: a.location, mass: a.mass * scale })
        .collect();
    let mut atom_result = vec![Atom { location: 1.0, mass: 1.0 }];
    if !scaled.is_empty() {
        series_term_bound(scaled[0].location, cutoff, max_terms)?;
        let mut term = scaled.clone();
        let mut k = 1usize;
        while !term.is_empty() {
            atom_result.extend_from_slice(&term);
            k += 1;
            term = convolve_atom_lists(&term, &scaled, cutoff, 1.0 / k as f64);
            if k > max_terms {
                return Err(Error::Config("exp* series exceeded the term limit".into()));
            }
        }
    }
    let atom_result = merge_sorted(atom_result);

    let Some(g) = mu.density() else {
        return StieltjesMeasure::new(atom_result, None, cutoff);
    };

    // Grid part: exact index-space exponential, then one mixed convolution
    // with the atomic result.
    if g.masses().first().map_or(false, |&w| w != 0.0) {
        return Err(Error::InvalidMeasure(
            "exp* input must carry no mass at location 1".into(),
        ));
    }
    let scaled_grid: Vec<f64> = g.masses().iter().map(|&w| w * scale).collect();
    let e = exp_series(&scaled_grid);

    let mut out = vec![0.0; e.len()];
    for atom in &atom_result {
        // skip index 0 of e: that unit coefficient is the delta_1 already
        // carried by the atomic result
        translate_grid(&e[..], g.step(), atom.location, atom.mass, &mut out);
    }
    // remove the delta_1 * e[0] contribution that landed on node 0..
    // (translate_grid deposited e[0]=1 at the atom positions); strip it back
    // to keep point masses atomic
    for atom in &atom_result {
        let shift = atom.location.ln() / g.step();
        let s = shift.floor() as usize;
        let f = shift - s as f64;
        if s < out.len() {
            out[s] -= atom.mass * (1.0 - f);
        }
        if f > 0.0 && s + 1 < out.len() {
            out[s + 1] -= atom.mass * f;
        }
    }
    out[0] = 0.0;
    StieltjesMeasure::new(atom_result, Some(LogGrid { step: g.step(), masses: out }), cutoff)
}

/// Convolution inverse of `nu = delta_1 + R`.
///
/// Purely atomic and purely continuous inputs are solved exactly (terminating
/// alternating series, respectively an index-space series inversion). Mixed
/// inputs fall back to the Neumann series with a total-variation stopping
/// rule.
pub(crate) fn conv_inverse_stieltjes(
    nu: &StieltjesMeasure,
    max_terms: usize,
) -> Result<StieltjesMeasure> {
    if (nu.mass_at_one() - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidMeasure(format!(
            "inverse needs unit mass at location 1, found {}",
            nu.mass_at_one()
        )));
    }
    let cutoff = nu.cutoff();
    let rest: Vec<Atom> = nu
        .atoms()
        .iter()
        .filter(|a| a.location > 1.0 + MERGE_EPS)
        .copied()
        .collect();

    match nu.density() {
        None => {
            // delta_1 + sum_k (-1)^k R^{*k}, exact termination
            let mut result = vec![Atom { location: 1.0, mass: 1.0 }];
            if !rest.is_empty() {
                series_term_bound(rest[0].location, cutoff, max_terms)?;
                let mut term: Vec<Atom> =
                    rest.iter().map(|a| Atom { location: a.location, mass: -a.mass }).collect();
                let mut k = 1usize;
                while !term.is_empty() {
                    result.extend_from_slice(&term);
                    term = convolve_atom_lists(&term, &rest, cutoff, -1.0);
                    k += 1;
                    if k > max_terms {
                        return Err(Error::Config("inverse series exceeded the term limit".into()));
                    }
                }
            }
            StieltjesMeasure::new(merge_sorted(result), None, cutoff)
        }
        Some(g) if rest.is_empty() => {
            let mut c = g.masses().to_vec();
            c[0] = 1.0;
            let mut d = inverse_series(&c);
            d[0] = 0.0;
            StieltjesMeasure::new(
                vec![Atom { location: 1.0, mass: 1.0 }],
                Some(LogGrid { step: g.step(), masses: d }),
                cutoff,
            )
        }
        Some(_) => {
            // Mixed atoms + density: Neumann series with tolerance stopping.
            let r = StieltjesMeasure::new(rest, nu.density().cloned(), cutoff)?;
            let mut term = negated(&r);
            let mut acc = StieltjesMeasure::delta_one(cutoff);
            let mut k = 1usize;
            loop {
                acc = add_measures(&acc, &term)?;
                let next = convolve_stieltjes(&term, &r)?;
                let tv = next.total_variation();
                if tv < 1e-13 * acc.total_variation().max(1.0) {
                    break;
                }
                term = negated(&next);
                k += 1;
                if k > max_terms {
                    return Err(Error::Config(format!(
                        "inverse Neumann series did not shrink below tolerance \
                         after {max_terms} terms (last term variation {tv:.3e})"
                    )));
                }
            }
            Ok(acc)
        }
    }
}

fn negated(m: &StieltjesMeasure) -> StieltjesMeasure {
    let atoms = m
        .atoms()
        .iter()
        .map(|a| Atom { location: a.location, mass: -a.mass })
        .collect();
    let density = m.density().map(|g| LogGrid {
        step: g.step(),
        masses: g.masses().iter().map(|&w| -w).collect(),
    });
    StieltjesMeasure::new(atoms, density, m.cutoff()).unwrap()
}

/// Pointwise sum of two measures on the common cutoff.
pub(crate) fn add_measures(
    a: &StieltjesMeasure,
    b: &StieltjesMeasure,
) -> Result<StieltjesMeasure> {
    let cutoff = a.cutoff().min(b.cutoff());
    let mut atoms = a.atoms().to_vec();
    atoms.extend_from_slice(b.atoms());
    let density = match (a.density(), b.density()) {
        (None, None) => None,
        (Some(g), None) | (None, Some(g)) => Some(g.clone()),
        (Some(ga), Some(gb)) => {
            let step = ga.step().min(gb.step());
            let len = (cutoff.ln() / step).floor() as usize + 1;
            let ra = ga.resampled(step, len);
            let rb = gb.resampled(step, len);
            let masses = ra
                .masses()
                .iter()
                .zip(rb.masses())
                .map(|(&x, &y)| x + y)
                .collect();
            Some(LogGrid { step, masses })
        }
    };
    StieltjesMeasure::new(atoms, density, cutoff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn atoms(list: &[(f64, f64)], cutoff: f64) -> StieltjesMeasure {
        let v = list.iter().map(|&(l, m)| Atom { location: l, mass: m }).collect();
        StieltjesMeasure::new(v, None, cutoff).unwrap()
    }

    #[test]
    fn delta_one_cumulative() {
        let d = StieltjesMeasure::delta_one(100.0);
        assert_eq!(d.cumulative(7.0).unwrap(), 1.0);
        assert_eq!(d.cumulative(1.0).unwrap(), 1.0);
        assert_eq!(d.cumulative_left(1.0).unwrap(), 0.0);
    }

    #[test]
    fn cumulative_range_error() {
        let d = StieltjesMeasure::delta_one(100.0);
        assert!(d.cumulative(0.5).is_err());
        assert!(d.cumulative(101.0).is_err());
    }

    #[test]
    fn continuous_part_xlogx() {
        // delta_1 + log u du has cumulative x log x - x + 2; at x = e that is 2
        let grid = LogGrid::from_density(100.0, 1 << 14, |u| u.ln()).unwrap();
        let m = StieltjesMeasure::new(
            vec![Atom { location: 1.0, mass: 1.0 }],
            Some(grid),
            100.0,
        )
        .unwrap();
        let e = std::f64::consts::E;
        assert_relative_eq!(m.cumulative(e).unwrap(), 2.0, max_relative = 1e-6);
        assert_relative_eq!(
            m.cumulative(50.0).unwrap(),
            50.0 * 50.0_f64.ln() - 50.0 + 2.0,
            max_relative = 1e-6
        );
    }

    #[test]
    fn log_weight_drops_location_one() {
        let d = StieltjesMeasure::delta_one(10.0);
        let w = log_weight_stieltjes(&d);
        assert!(w.atoms().is_empty());

        let e = std::f64::consts::E;
        let m = atoms(&[(e, 3.0)], 10.0);
        let w = log_weight_stieltjes(&m);
        assert_relative_eq!(w.atoms()[0].mass, 3.0, max_relative = 1e-15);
    }

    #[test]
    fn log_weight_integral_of_continuous_part() {
        // cumulative(L(delta_1 + log u du), e) = \int_1^e ln^2 u du = e - 2
        let grid = LogGrid::from_density(100.0, 1 << 14, |u| u.ln()).unwrap();
        let m = StieltjesMeasure::new(
            vec![Atom { location: 1.0, mass: 1.0 }],
            Some(grid),
            100.0,
        )
        .unwrap();
        let w = log_weight_stieltjes(&m);
        let e = std::f64::consts::E;
        assert_relative_eq!(w.cumulative(e).unwrap(), e - 2.0, max_relative = 1e-5);
    }

    #[test]
    fn convolution_identity_exact() {
        let mu = atoms(&[(2.0, 1.5), (3.0, -0.5), (9.0, 2.0)], 20.0);
        let d = StieltjesMeasure::delta_one(20.0);
        let conv = convolve_stieltjes(&d, &mu).unwrap();
        assert_eq!(conv.atoms(), mu.atoms());
    }

    #[test]
    fn convolution_of_points() {
        let a = atoms(&[(2.0, 1.0)], 100.0);
        let b = atoms(&[(3.0, 1.0)], 100.0);
        let c = convolve_stieltjes(&a, &b).unwrap();
        assert_eq!(c.atoms().len(), 1);
        assert_eq!(c.atoms()[0].location, 6.0);
        assert_eq!(c.atoms()[0].mass, 1.0);
    }

    #[test]
    fn convolution_truncates_at_min_cutoff() {
        let a = atoms(&[(4.0, 1.0)], 100.0);
        let b = atoms(&[(5.0, 1.0)], 10.0);
        let c = convolve_stieltjes(&a, &b).unwrap();
        assert_eq!(c.cutoff(), 10.0);
        assert!(c.atoms().is_empty()); // 20 > 10 dropped
    }

    #[test]
    fn exp_star_of_zero_is_delta() {
        let z = StieltjesMeasure::zero(50.0);
        let e = exp_star_stieltjes(&z, 1.0, 100).unwrap();
        assert_eq!(e.atoms().len(), 1);
        assert_eq!(e.atoms()[0].location, 1.0);
        assert_eq!(e.atoms()[0].mass, 1.0);
    }

    #[test]
    fn exp_star_single_atom_series() {
        // exp*(delta_2): masses 1/k! at 2^k; cumulative at 4 = 1 + 1 + 1/2
        let m = atoms(&[(2.0, 1.0)], 100.0);
        let e = exp_star_stieltjes(&m, 1.0, 100).unwrap();
        assert_relative_eq!(e.cumulative(4.0).unwrap(), 2.5, max_relative = 1e-14);
        assert_relative_eq!(
            e.cumulative(64.0).unwrap(),
            (0..=6).map(|k| 1.0 / factorial(k)).sum::<f64>(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn exp_star_rejects_mass_at_one() {
        let m = atoms(&[(1.0, 0.5), (2.0, 1.0)], 10.0);
        assert!(exp_star_stieltjes(&m, 1.0, 100).is_err());
    }

    #[test]
    fn exp_star_rejects_support_floor_violation() {
        let m = atoms(&[(1.0 + 1e-8, 1.0)], 1e6);
        assert!(matches!(
            exp_star_stieltjes(&m, 1.0, 600),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn conv_inverse_of_delta() {
        let d = StieltjesMeasure::delta_one(10.0);
        let inv = conv_inverse_stieltjes(&d, 100).unwrap();
        assert_eq!(inv.atoms(), d.atoms());
    }

    #[test]
    fn conv_inverse_geometric() {
        // (delta_1 + delta_2)^{-1} has atoms (-1)^k at 2^k; cumulative at 5 = 1
        let m = atoms(&[(1.0, 1.0), (2.0, 1.0)], 100.0);
        let inv = conv_inverse_stieltjes(&m, 100).unwrap();
        assert_relative_eq!(inv.cumulative(5.0).unwrap(), 1.0, max_relative = 1e-14);
        let conv = convolve_stieltjes(&m, &inv).unwrap();
        assert_relative_eq!(conv.cumulative(90.0).unwrap(), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn conv_inverse_requires_unit_mass() {
        let m = atoms(&[(1.0, 0.5), (2.0, 1.0)], 10.0);
        assert!(conv_inverse_stieltjes(&m, 100).is_err());
    }

    #[test]
    fn inverse_matches_negative_exponential() {
        let m = atoms(&[(2.0, 0.7), (3.0, 0.4)], 200.0);
        let n = exp_star_stieltjes(&m, 1.0, 100).unwrap();
        let inv = conv_inverse_stieltjes(&n, 100).unwrap();
        let neg = exp_star_stieltjes(&m, -1.0, 100).unwrap();
        assert_eq!(inv.atoms().len(), neg.atoms().len());
        for (a, b) in inv.atoms().iter().zip(neg.atoms()) {
            assert_relative_eq!(a.location, b.location, max_relative = 1e-12);
            assert_relative_eq!(a.mass, b.mass, max_relative = 1e-9, epsilon = 1e-12);
        }
    }

    #[test]
    fn grid_exponential_against_convolution_series() {
        // density ln(u)/u vanishes at u = 1 like the systems this path is
        // built for; compare the index-space exponential against the raw
        // factorial series computed with repeated grid convolutions
        let grid = LogGrid::from_density(20.0, 4096, |u| u.ln() / u).unwrap();
        let mu = StieltjesMeasure::new(Vec::new(), Some(grid), 20.0).unwrap();
        let e = exp_star_stieltjes(&mu, 1.0, 200).unwrap();
        let mut brute_terms: Vec<StieltjesMeasure> = vec![mu.clone()];
        for _ in 0..5 {
            let next = convolve_stieltjes(brute_terms.last().unwrap(), &mu).unwrap();
            brute_terms.push(next);
        }
        for &x in &[3.0, 8.0, 18.0] {
            let mut brute = 1.0;
            let mut fact = 1.0;
            for (k, t) in brute_terms.iter().enumerate() {
                fact *= (k + 1) as f64;
                brute += t.cumulative(x).unwrap() / fact;
            }
            assert_relative_eq!(e.cumulative(x).unwrap(), brute, max_relative = 2e-5);
        }
    }

    #[test]
    fn mixed_inverse_round_trip() {
        let grid = LogGrid::from_density(40.0, 2048, |u| 0.05 / u).unwrap();
        let nu = StieltjesMeasure::new(
            vec![
                Atom { location: 1.0, mass: 1.0 },
                Atom { location: 2.0, mass: 0.5 },
            ],
            Some(grid),
            40.0,
        )
        .unwrap();
        let inv = conv_inverse_stieltjes(&nu, 400).unwrap();
        let conv = convolve_stieltjes(&nu, &inv).unwrap();
        for &x in &[1.5, 3.0, 10.0, 35.0] {
            assert_relative_eq!(conv.cumulative(x).unwrap(), 1.0, epsilon = 1e-6);
        }
    }

    #[test]
    fn lattice_convolution_is_exact() {
        let a = LatticeMeasure::new(2.0, 2, 10, vec![(3, 2.0), (5, 1.0)]).unwrap();
        let b = LatticeMeasure::new(2.0, 2, 10, vec![(2, 1.5)]).unwrap();
        let c = a.convolve(&b).unwrap();
        assert_eq!(c.mass_at(5), 3.0);
        assert_eq!(c.mass_at(7), 1.5);
    }

    #[test]
    fn lattice_exp_and_inverse_round_trip() {
        let pi = LatticeMeasure::new(2.0, 2, 40, vec![(3, 2.8), (5, 2.8), (7, 3.77)]).unwrap();
        let n = pi.exp_star(1.0).unwrap();
        let m = pi.exp_star(-1.0).unwrap();
        let inv = n.conv_inverse().unwrap();
        for e in 0..=40u32 {
            assert_relative_eq!(inv.mass_at(e), m.mass_at(e), epsilon = 1e-9);
        }
        let unit = n.convolve(&m).unwrap();
        assert_relative_eq!(unit.mass_at(0), 1.0, epsilon = 1e-12);
        for e in 1..=40u32 {
            assert_relative_eq!(unit.mass_at(e), 0.0, epsilon = 1e-7 * n.mass_at(e).abs().max(1.0));
        }
    }

    #[test]
    fn lattice_incompatible_falls_back() {
        let a: Measure = LatticeMeasure::new(2.0, 2, 10, vec![(2, 1.0)]).unwrap().into();
        let b: Measure = LatticeMeasure::new(3.0, 1, 5, vec![(1, 1.0)]).unwrap().into();
        let c = a.convolve(&b).unwrap();
        match c {
            Measure::Stieltjes(s) => {
                assert_eq!(s.atoms().len(), 1);
                assert_relative_eq!(s.atoms()[0].location, 6.0, max_relative = 1e-14);
            }
            _ => panic!("expected generic fallback"),
        }
    }

    #[test]
    fn chebyshev_psi_single_prime() {
        let pi: Measure = atoms(&[(2.0, 1.0)], 10.0).into();
        assert_relative_eq!(
            chebyshev_psi(&pi, 3.0).unwrap(),
            2.0_f64.ln(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn chebyshev_psi_rejects_signed_measure() {
        let pi: Measure = atoms(&[(2.0, -1.0)], 10.0).into();
        assert!(chebyshev_psi(&pi, 3.0).is_err());
    }

    #[test]
    fn merging_is_idempotent() {
        let m1 = atoms(&[(2.0, 1.0), (2.0 * (1.0 + 5e-13), 2.0), (3.0, 1.0)], 10.0);
        assert_eq!(m1.atoms().len(), 2);
        let again = StieltjesMeasure::new(m1.atoms().to_vec(), None, 10.0).unwrap();
        assert_eq!(again.atoms(), m1.atoms());
    }

    fn factorial(k: u64) -> f64 {
        (1..=k).map(|i| i as f64).product::<f64>().max(1.0)
    }
}
