//! Assembly of g-number systems: a prime measure dPi plus its derived
//! integer measure dN = exp*(dPi), Moebius measure dM = exp*(-dPi) and
//! Chebyshev measure L dPi, with builders for the classical integers and the
//! three example systems.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{Atom, LatticeMeasure, LogGrid, Measure, StieltjesMeasure};
use crate::quad::gl16;

/// A generalized number system over a truncated support window.
///
/// The prime measure uses the Riemann convention: a prime `p` of multiplicity
/// `w` contributes mass `w/k` at `p^k`. With that convention
/// `dN = exp*(dPi)` and `dM = exp*(-dPi)` hold uniformly for discrete and
/// continuous systems.
#[derive(Debug, Clone)]
pub struct GNumberSystem {
    pub label: String,
    /// Prime measure dPi (nonnegative).
    pub pi: Measure,
    /// Integer measure dN = exp*(dPi); carries a unit atom at 1.
    pub n: Measure,
    /// Moebius measure dM = exp*(-dPi), the convolution inverse of dN.
    pub m: Measure,
    /// Chebyshev measure L dPi; its cumulative is psi(x).
    pub psi: Measure,
    /// Density constant a when N(x) ~ a x holds; absent otherwise.
    pub density_a: Option<f64>,
    pub cutoff: f64,
}

impl GNumberSystem {
    fn derive(label: &str, pi: Measure, density_a: Option<f64>) -> Result<Self> {
        if !pi.is_nonnegative() {
            return Err(Error::InvalidMeasure("prime measure must be nonnegative".into()));
        }
        let cutoff = pi.cutoff();
        let n = pi.exp_star(1.0)?;
        let m = pi.exp_star(-1.0)?;
        let psi = pi.log_weight();
        Ok(GNumberSystem { label: label.to_string(), pi, n, m, psi, density_a, cutoff })
    }

    /// N(x): count (with multiplicity) of g-integers up to x.
    pub fn integers(&self, x: f64) -> Result<f64> {
        self.n.cumulative(x)
    }

    /// M(x): cumulative of the Moebius measure.
    pub fn mertens(&self, x: f64) -> Result<f64> {
        self.m.cumulative(x)
    }

    /// psi(x): the g-Chebyshev function.
    pub fn chebyshev_psi(&self, x: f64) -> Result<f64> {
        self.psi.cumulative(x)
    }

    pub fn chebyshev_psi_left(&self, x: f64) -> Result<f64> {
        self.psi.cumulative_left(x)
    }
}

// ---------------------------------------------------------------------------
// Discrete builders
// ---------------------------------------------------------------------------

/// Assemble a system from explicit primes `(p, multiplicity)`.
///
/// Prime powers `p^k <= cutoff` receive mass `multiplicity / k`.
pub fn from_discrete_primes(primes: &[(f64, f64)], cutoff: f64, label: &str) -> Result<GNumberSystem> {
    if !(cutoff > 1.0) {
        return Err(Error::InvalidMeasure(format!("cutoff {cutoff} must exceed 1")));
    }
    let mut atoms = Vec::new();
    for &(p, mult) in primes {
        if !(p > 1.0) {
            return Err(Error::InvalidMeasure(format!("prime {p} must exceed 1")));
        }
        if !(mult > 0.0) {
            return Err(Error::InvalidMeasure(format!("multiplicity {mult} must be positive")));
        }
        if p > cutoff {
            continue;
        }
        let mut power = p;
        let mut k = 1u32;
        loop {
            atoms.push(Atom { location: power, mass: mult / k as f64 });
            if power > cutoff / p {
                break;
            }
            power *= p;
            k += 1;
        }
    }
    let pi: Measure = StieltjesMeasure::new(atoms, None, cutoff)?.into();
    GNumberSystem::derive(label, pi, None)
}

/// Sieve of Eratosthenes.
pub fn classical_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for p in 2..=n {
        if !composite[p] {
            primes.push(p as u64);
            let mut q = p * p;
            while q <= n {
                composite[q] = true;
                q += p;
            }
        }
    }
    primes
}

/// The rational integers truncated at `cutoff`: the oracle system.
pub fn build_classical(cutoff: f64) -> Result<GNumberSystem> {
    if cutoff < 2.0 {
        return Err(Error::InvalidMeasure(format!("classical cutoff {cutoff} must be >= 2")));
    }
    let primes: Vec<(f64, f64)> = classical_primes(cutoff as u64)
        .into_iter()
        .map(|p| (p as f64, 1.0))
        .collect();
    let mut sys = from_discrete_primes(&primes, cutoff, "classical")?;
    sys.density_a = Some(1.0);
    Ok(sys)
}

// ---------------------------------------------------------------------------
// Example 1: the lattice system with prime mass 2^(k+1/2)/k at 2^(k+1/2)
// ---------------------------------------------------------------------------

/// Lattice system (base 2, denom 2) whose prime measure puts mass
/// `2^(k+1/2)/k` at `2^(k+1/2)` for `k >= 1`. Its Mertens function stays of
/// order x while m(x) remains bounded.
pub fn build_example1(max_exponent: u32) -> Result<GNumberSystem> {
    if max_exponent < 3 {
        return Err(Error::InvalidMeasure("example 1 needs max_exponent >= 3".into()));
    }
    let mut coeffs = Vec::new();
    let mut k = 1u32;
    while 2 * k + 1 <= max_exponent {
        let m = 2 * k + 1;
        let mass = 2f64.powf(k as f64 + 0.5) / k as f64;
        coeffs.push((m, mass));
        k += 1;
    }
    let pi = LatticeMeasure::new(2.0, 2, max_exponent, coeffs)?;
    GNumberSystem::derive("example1", pi.into(), None)
}

/// Example 1 carried as the u^{-1}-weighted lattice `d(mu)/u`, whose
/// coefficients stay of order one. This is the only viable representation for
/// very tall lattices (the raw masses grow like 2^(m/2) and overflow binary64
/// near exponent 2000), and it is what transform sweeps near `Re s = 1` need:
/// `Mellin(d mu)(s) = sum_m c_m 2^(-m(s-1)/2)` for `c_m = mass_m * 2^(-m/2)`.
#[derive(Debug, Clone)]
pub struct Example1Scaled {
    /// Coefficients of dPi / u: `1/k` at exponent `2k+1`.
    pub pi_over_u: Vec<f64>,
    /// Coefficients of dN / u.
    pub n_over_u: Vec<f64>,
    /// Coefficients of dM / u.
    pub m_over_u: Vec<f64>,
}

impl Example1Scaled {
    /// Half-integer powers of two: exponent `m` sits at `2^(m/2)`.
    pub const LOG_LOCATION_STEP: f64 = core::f64::consts::LN_2 / 2.0;

    pub fn build(max_exponent: u32) -> Self {
        let n = max_exponent as usize + 1;
        let mut pi = vec![0.0; n];
        let mut k = 1usize;
        while 2 * k + 1 < n {
            pi[2 * k + 1] = 1.0 / k as f64;
            k += 1;
        }
        let n_over_u = crate::measure::exp_series(&pi);
        let neg: Vec<f64> = pi.iter().map(|&w| -w).collect();
        let m_over_u = crate::measure::exp_series(&neg);
        Example1Scaled { pi_over_u: pi, n_over_u, m_over_u }
    }
}

// ---------------------------------------------------------------------------
// Example 2: the smoothed Buchstab-style continuous measure and its rounding
// ---------------------------------------------------------------------------

/// `(1 - cos v) / v` with the removable singularity at 0 filled in.
pub fn one_minus_cos_over(v: f64) -> f64 {
    if v.abs() < 1e-3 {
        // Taylor: v/2 - v^3/24 + v^5/720
        let v2 = v * v;
        v * (0.5 - v2 / 24.0 + v2 * v2 / 720.0)
    } else {
        (1.0 - v.cos()) / v
    }
}

/// Incremental evaluator for `PiB(x) = \int_1^x (1 - cos ln u)/ln u du`,
/// maintained as Gauss-Legendre panel checkpoints on a log-uniform ladder.
/// Panels are compensated-summed, so values are exact to rounding.
#[derive(Debug, Clone)]
pub struct PiB {
    panel_log: f64,
    /// checkpoint[i] = PiB(exp(i * panel_log))
    checkpoints: Vec<f64>,
    compensation: f64,
}

impl PiB {
    pub fn new() -> Self {
        PiB { panel_log: 0.25, checkpoints: vec![0.0], compensation: 0.0 }
    }

    // integrand in log coordinates: (1 - cos v) e^v / v
    fn integrand(v: f64) -> f64 {
        one_minus_cos_over(v) * v.exp()
    }

    fn extend_to(&mut self, panel: usize) {
        while self.checkpoints.len() <= panel {
            let i = self.checkpoints.len() - 1;
            let a = i as f64 * self.panel_log;
            let b = a + self.panel_log;
            let inc = gl16(a, b, Self::integrand);
            // Kahan step keeps the long checkpoint ladder from drifting.
            let y = inc - self.compensation;
            let last = *self.checkpoints.last().unwrap();
            let t = last + y;
            self.compensation = (t - last) - y;
            self.checkpoints.push(t);
        }
    }

    pub fn value(&mut self, x: f64) -> f64 {
        if x <= 1.0 {
            return 0.0;
        }
        let v = x.ln();
        let panel = (v / self.panel_log).floor() as usize;
        self.extend_to(panel);
        self.checkpoints[panel] + gl16(panel as f64 * self.panel_log, v, Self::integrand)
    }

    /// Solve `PiB(q) = target` by bracketed bisection with a secant polish.
    /// `lo` must satisfy `PiB(lo) < target`.
    pub fn inverse(&mut self, target: f64, mut lo: f64) -> Result<f64> {
        let mut hi = lo.max(1.0 + 1e-6);
        let mut flo = self.value(lo) - target;
        if flo >= 0.0 {
            return Err(Error::RootFind { target, lo, hi });
        }
        let mut fhi = self.value(hi) - target;
        let mut guard = 0;
        while fhi < 0.0 {
            lo = hi;
            flo = fhi;
            hi *= 1.25;
            fhi = self.value(hi) - target;
            guard += 1;
            if guard > 400 {
                return Err(Error::RootFind { target, lo, hi });
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break; // bracket at floating-point resolution
            }
            let fmid = self.value(mid) - target;
            if fmid.abs() <= 1e-11 {
                return Ok(mid);
            }
            if fmid < 0.0 {
                lo = mid;
                flo = fmid;
            } else {
                hi = mid;
                fhi = fmid;
            }
        }
        // Secant polish inside the final bracket.
        let mut root = if fhi != flo { lo - flo * (hi - lo) / (fhi - flo) } else { lo };
        for _ in 0..3 {
            let f = self.value(root) - target;
            if f.abs() <= 1e-11 {
                break;
            }
            let slope = (fhi - flo) / (hi - lo);
            if slope.abs() < 1e-300 {
                break;
            }
            root -= f / slope;
            root = root.clamp(lo, hi);
        }
        Ok(root)
    }
}

impl Default for PiB {
    fn default() -> Self {
        Self::new()
    }
}

/// The g-primes `q_k = PiB^{-1}(k)` for `k = 1..=k_max`, plus the largest
/// defining-equation residual `max_k |PiB(q_k) - k|` actually achieved.
pub fn example2_gprimes(k_max: usize) -> Result<(Vec<f64>, f64)> {
    let mut pib = PiB::new();
    let mut qs = Vec::with_capacity(k_max);
    let mut worst = 0.0f64;
    let mut lo = 1.0;
    for k in 1..=k_max {
        let q = pib.inverse(k as f64, lo)?;
        let resid = (pib.value(q) - k as f64).abs();
        worst = worst.max(resid);
        qs.push(q);
        lo = q;
    }
    Ok((qs, worst))
}

/// Smallest `k_max` with `q_k > bound`, so a prime list covering `[1, bound]`
/// is complete.
pub fn example2_k_for_cutoff(bound: f64) -> Result<usize> {
    let mut pib = PiB::new();
    Ok(pib.value(bound).floor() as usize + 1)
}

/// Discrete Example-2 system: every `q_k` taken `multiplicity` times.
/// The doubled system of interest uses multiplicity 2; the base system
/// (multiplicity 1) is the hyperbola-method input.
pub fn build_example2_discrete(k_max: usize, cutoff: f64, multiplicity: f64) -> Result<GNumberSystem> {
    let (qs, _) = example2_gprimes(k_max)?;
    let primes: Vec<(f64, f64)> = qs.into_iter().map(|q| (q, multiplicity)).collect();
    let label = if multiplicity == 1.0 { "example2-base" } else { "example2-discrete" };
    from_discrete_primes(&primes, cutoff, label)
}

/// Continuous Example-2 system with prime density `2 (1 - cos ln u)/ln u`.
pub fn build_example2_continuous(cutoff: f64, cells: usize) -> Result<GNumberSystem> {
    let grid = LogGrid::from_density(cutoff, cells, |u| {
        let v = u.ln();
        2.0 * one_minus_cos_over(v)
    })?;
    let pi: Measure = StieltjesMeasure::new(Vec::new(), Some(grid), cutoff)?.into();
    GNumberSystem::derive("example2-continuous", pi, None)
}

// ---------------------------------------------------------------------------
// Example 3: a piecewise counting function with doubly exponential plateaus
// ---------------------------------------------------------------------------

/// `N(x) = x` off the plateau intervals `[f(n), e^(n/3) f(n)]` with
/// `f(n) = e^(e^n)`, and `N(x) = e^(n/3) f(n)` on them. Not a g-number
/// system: it exists to feed the L1 regularity integral.
#[derive(Debug, Clone, Copy, Default)]
pub struct PiecewiseN;

impl PiecewiseN {
    /// Largest plateau index whose left endpoint is representable in binary64.
    pub const MAX_PLATEAU: u32 = 6;

    /// Left endpoint in log form: `ln f(n) = e^n`.
    pub fn ln_f(n: u32) -> f64 {
        (n as f64).exp()
    }

    pub fn f(n: u32) -> Result<f64> {
        if n > Self::MAX_PLATEAU {
            return Err(Error::Range {
                x: n as f64,
                lo: 1.0,
                hi: Self::MAX_PLATEAU as f64,
            });
        }
        Ok(Self::ln_f(n).exp())
    }

    pub fn eval(&self, x: f64) -> f64 {
        assert!(x >= 1.0, "N is defined on [1, inf)");
        let v = x.ln();
        for n in 1..=Self::MAX_PLATEAU + 1 {
            let start = Self::ln_f(n);
            if v < start {
                break;
            }
            if v <= start + n as f64 / 3.0 {
                return (n as f64 / 3.0).exp() * start.exp();
            }
        }
        x
    }
}

pub fn build_example3_n() -> PiecewiseN {
    PiecewiseN
}

// ---------------------------------------------------------------------------
// Build specs (the CLI exchange format)
// ---------------------------------------------------------------------------

/// JSON-facing description of a buildable system.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SystemSpec {
    /// Explicit primes with multiplicities.
    DiscretePrimes { primes: Vec<(f64, f64)>, cutoff: f64 },
    /// The rational integers up to `cutoff`.
    Classical { cutoff: f64 },
    /// A prime measure loaded from a measure file.
    PrimeMeasure { path: String, density_a: Option<f64> },
    /// Example 1: the half-integer power-of-two lattice.
    Lattice { max_exponent: u32 },
    /// Example 2, continuous prime density on a log grid.
    ContinuousDensity { cutoff: f64, cells: usize },
    /// Example 2, discrete roots of PiB with a common multiplicity.
    GPrimeRoots { k_max: usize, cutoff: f64, multiplicity: f64 },
    /// Example 3 counting function (no primes; `build` reports its shape).
    PiecewiseN,
}

impl SystemSpec {
    pub fn build(&self) -> Result<GNumberSystem> {
        match self {
            SystemSpec::DiscretePrimes { primes, cutoff } => {
                from_discrete_primes(primes, *cutoff, "discrete-primes")
            }
            SystemSpec::Classical { cutoff } => build_classical(*cutoff),
            SystemSpec::PrimeMeasure { path, density_a } => {
                let pi = crate::io::read_measure(std::path::Path::new(path))?;
                let mut sys = GNumberSystem::derive("prime-measure", pi, None)?;
                sys.density_a = *density_a;
                Ok(sys)
            }
            SystemSpec::Lattice { max_exponent } => build_example1(*max_exponent),
            SystemSpec::ContinuousDensity { cutoff, cells } => {
                build_example2_continuous(*cutoff, *cells)
            }
            SystemSpec::GPrimeRoots { k_max, cutoff, multiplicity } => {
                build_example2_discrete(*k_max, *cutoff, *multiplicity)
            }
            SystemSpec::PiecewiseN => Err(Error::Config(
                "piecewise-n describes a bare counting function, not a g-number system".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn powers_of_two_system() {
        let sys = from_discrete_primes(&[(2.0, 1.0)], 10.0, "two").unwrap();
        let pi = sys.pi.as_stieltjes().unwrap();
        let locs: Vec<f64> = pi.atoms().iter().map(|a| a.location).collect();
        let masses: Vec<f64> = pi.atoms().iter().map(|a| a.mass).collect();
        assert_eq!(locs, vec![2.0, 4.0, 8.0]);
        assert_eq!(masses, vec![1.0, 0.5, 1.0 / 3.0]);
        // g-integers 1, 2, 4, 8
        assert_relative_eq!(sys.integers(10.0).unwrap(), 4.0, max_relative = 1e-12);
    }

    #[test]
    fn empty_prime_list_gives_unit_system() {
        let sys = from_discrete_primes(&[], 10.0, "unit").unwrap();
        assert_eq!(sys.integers(10.0).unwrap(), 1.0);
        assert_eq!(sys.mertens(10.0).unwrap(), 1.0);
    }

    #[test]
    fn invalid_prime_rejected() {
        assert!(from_discrete_primes(&[(0.9, 1.0)], 10.0, "bad").is_err());
    }

    #[test]
    fn classical_counts_integers() {
        let sys = build_classical(100.0).unwrap();
        assert_relative_eq!(sys.integers(10.0).unwrap(), 10.0, max_relative = 1e-9);
        assert_relative_eq!(sys.integers(100.0).unwrap(), 100.0, max_relative = 1e-9);
        // psi(10) = 3 ln 2 + 2 ln 3 + ln 5 + ln 7
        let expect = 3.0 * 2f64.ln() + 2.0 * 3f64.ln() + 5f64.ln() + 7f64.ln();
        assert_relative_eq!(sys.chebyshev_psi(10.0).unwrap(), expect, max_relative = 1e-12);
    }

    #[test]
    fn example1_first_atom() {
        let sys = build_example1(20).unwrap();
        let Measure::Lattice(pi) = &sys.pi else { panic!("expected lattice") };
        assert_eq!(pi.coeffs()[0].0, 3);
        assert_relative_eq!(pi.coeffs()[0].1, 2f64.powf(1.5), max_relative = 1e-15);
        assert_relative_eq!(pi.location_of(3), 2f64.powf(1.5), max_relative = 1e-15);
        // dN supported on the full lattice, nonnegative
        let Measure::Lattice(n) = &sys.n else { panic!() };
        assert!(n.is_nonnegative());
        assert_eq!(n.mass_at(0), 1.0);
    }

    #[test]
    fn example1_scaled_matches_plain_lattice() {
        let sys = build_example1(40).unwrap();
        let scaled = Example1Scaled::build(40);
        let Measure::Lattice(m) = &sys.m else { panic!() };
        for e in 0..=40u32 {
            let expect = m.mass_at(e) * 2f64.powf(-(e as f64) / 2.0);
            assert_relative_eq!(scaled.m_over_u[e as usize], expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn pib_matches_direct_quadrature() {
        let mut pib = PiB::new();
        let direct = crate::quad::gl16_panels(1.0, 50.0, 400, |u| {
            (1.0 - u.ln().cos()) / u.ln()
        });
        assert_relative_eq!(pib.value(50.0), direct, max_relative = 1e-10);
    }

    #[test]
    fn gprime_roots_meet_their_equation() {
        let (qs, worst) = example2_gprimes(50).unwrap();
        assert_eq!(qs.len(), 50);
        assert!(worst <= 1e-10, "max residual {worst}");
        assert!(qs.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn example2_continuous_density_vanishes_at_one() {
        assert_eq!(one_minus_cos_over(0.0), 0.0);
        let sys = build_example2_continuous(100.0, 4096).unwrap();
        let pi = sys.pi.as_stieltjes().unwrap();
        assert_eq!(pi.density().unwrap().masses()[0], 0.0);
    }

    #[test]
    fn example3_growth_values() {
        let n = build_example3_n();
        for k in 1..=3u32 {
            let f = PiecewiseN::f(k).unwrap();
            assert_relative_eq!(
                n.eval(f) / f,
                (k as f64 / 3.0).exp(),
                max_relative = 1e-14
            );
        }
        // between the first plateau and the second: identity
        let x = (PiecewiseN::ln_f(1) + 1.0).exp(); // past e^{1/3} f(1), before f(2)
        assert_eq!(n.eval(x), x);
        assert!(PiecewiseN::f(7).is_err());
    }

    #[test]
    fn example3_monotone_across_breakpoints() {
        let n = build_example3_n();
        let mut prev = 0.0;
        let mut v = 0.0f64;
        while v < 25.0 {
            let x = v.exp();
            let val = n.eval(x);
            assert!(val >= prev, "N not monotone at x = {x}");
            assert!(val >= x, "N below identity at x = {x}");
            prev = val;
            v += 0.01;
        }
    }

    #[test]
    fn spec_round_trip_json() {
        let spec = SystemSpec::GPrimeRoots { k_max: 10, cutoff: 100.0, multiplicity: 2.0 };
        let text = serde_json::to_string(&spec).unwrap();
        let back: SystemSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
    }
}
