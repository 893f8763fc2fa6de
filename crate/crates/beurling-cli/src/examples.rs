//! The `example` subcommand: run one of the three example studies end to
//! end, write its CSV artifacts, and summarize pass/fail flags as JSON.

use std::fs;
use std::path::Path;

use beurling_core::diagnostics::{self, Counting, FitModel};
use beurling_core::studies::{self, GAMMA_THIRD};
use beurling_core::systems::{self, PiecewiseN};
use beurling_core::zeta;
use num_complex::Complex64;

const LN2: f64 = std::f64::consts::LN_2;
const PI: f64 = std::f64::consts::PI;

struct Flags(Vec<(String, bool, String)>);

impl Flags {
    fn new() -> Self {
        Flags(Vec::new())
    }

    fn add(&mut self, name: &str, pass: bool, detail: String) {
        self.0.push((name.to_string(), pass, detail));
    }

    fn finish(self, which: u8, dir: &Path) -> anyhow::Result<bool> {
        let all = self.0.iter().all(|(_, p, _)| *p);
        let mut json = String::from("{\n");
        json.push_str(&format!("  \"example\": {which},\n  \"flags\": [\n"));
        for (i, (name, pass, detail)) in self.0.iter().enumerate() {
            json.push_str(&format!(
                "    {{\"name\": \"{name}\", \"pass\": {pass}, \"detail\": \"{detail}\"}}{}\n",
                if i + 1 < self.0.len() { "," } else { "" }
            ));
        }
        json.push_str(&format!("  ],\n  \"all_pass\": {all}\n}}\n"));
        fs::write(dir.join("summary.json"), &json)?;
        for (name, pass, detail) in &self.0 {
            eprintln!("{} {name}: {detail}", if *pass { "pass" } else { "FAIL" });
        }
        Ok(all)
    }
}

pub fn cmd_example(which: u8, out_dir: &Path, x_max: f64) -> anyhow::Result<bool> {
    fs::create_dir_all(out_dir)?;
    match which {
        1 => example1(out_dir),
        2 => example2(out_dir, x_max),
        3 => example3(out_dir),
        other => anyhow::bail!("no example {other}; valid: 1, 2, 3"),
    }
}

// ---------------------------------------------------------------------------
// Example 1: the half-integer power-of-two lattice
// ---------------------------------------------------------------------------

fn example1(dir: &Path) -> anyhow::Result<bool> {
    let mut flags = Flags::new();

    // trigonometric minorant of N(x)/x
    let spec = studies::ingham_params(36.0)?;
    let period = 2.0 * PI / spec.frequencies[2];
    let mut csv = String::from("u,f_star\n");
    let samples = 4096;
    for i in 0..=samples {
        let u = 2.0 * period * i as f64 / samples as f64;
        csv.push_str(&format!("{u},{}\n", studies::wobble_minorant(&spec, u).re));
    }
    fs::write(dir.join("wobble_minorant.csv"), csv)?;
    let ext = studies::wobble_extrema(&spec, 0.0, 2.0 * period, 4096)?;
    let (inf_closed, sup_closed) = studies::wobble_closed_extrema(&spec);
    flags.add(
        "minorant-sup",
        ext.sup > 1.52 && ext.sup < 1.53 && (ext.sup - sup_closed).abs() < 1e-6,
        format!("sup F*_36 = {:.6} (closed {:.6})", ext.sup, sup_closed),
    );
    flags.add(
        "minorant-inf",
        ext.inf > 1.36 && ext.inf < 1.37 && (ext.inf - inf_closed).abs() < 1e-6,
        format!("inf F*_36 = {:.6} (closed {:.6})", ext.inf, inf_closed),
    );

    // empirical N(x)/x wobble on the lattice
    let sys = systems::build_example1(80)?;
    let beurling_core::Measure::Lattice(n) = &sys.n else { unreachable!() };
    let mut csv = String::from("exponent,x,n_over_x_left,n_over_x_right\n");
    for m in 40..=80u32 {
        let x = n.location_of(m);
        csv.push_str(&format!(
            "{m},{x},{},{}\n",
            n.cumulative_left_exponent(m) / x,
            n.cumulative_at_exponent(m) / x
        ));
    }
    fs::write(dir.join("wobble_empirical.csv"), csv)?;
    let (lo, hi) = studies::wobble_empirical(&sys, 40, 80)?;
    flags.add(
        "empirical-spread",
        hi - lo >= 0.1,
        format!("N(x)/x spans [{lo:.4}, {hi:.4}] on [2^20, 2^40]"),
    );

    // closed-form zeta against the direct lattice transform
    let tall = systems::build_example1(400)?;
    let mut worst = 0.0f64;
    for &s in &[
        Complex64::new(1.5, 0.0),
        Complex64::new(2.0, 5.0),
        Complex64::new(1.2, 2.0 * PI / LN2),
    ] {
        let direct = zeta::mellin_transform(&tall.pi, s, zeta::TransformOptions::plain())?.exp();
        let closed = zeta::example1_closed(s)?;
        worst = worst.max((direct - closed).norm() / closed.norm());
    }
    flags.add(
        "zeta-closed-form",
        worst <= 1e-6,
        format!("max relative gap over probe points = {worst:.3e}"),
    );

    // right-hand zero of order 1 at t0 = 2 pi / ln 2
    let grid = [1.1, 1.01, 1e-4 + 1.0, 1e-6 + 1.0];
    let probe = zeta::right_hand_zero_probe(zeta::example1_closed, 2.0 * PI / LN2, 1.0, &grid)?;
    let mut csv = String::from("sigma,scaled_re,scaled_im\n");
    for &(s, v) in &probe {
        csv.push_str(&format!("{s},{},{}\n", v.re, v.im));
    }
    fs::write(dir.join("right_hand_zero.csv"), csv)?;
    let last = probe.last().unwrap().1;
    flags.add(
        "right-hand-zero",
        (last - Complex64::from(LN2)).norm() <= 0.01 * LN2,
        format!("(sigma-1)^-1 zeta(sigma + 2 pi i/ln 2) -> {:.6}+{:.2e}i", last.re, last.im),
    );

    // Mertens stays of order x while m stays bounded
    let beurling_core::Measure::Lattice(mm) = &sys.m else { unreachable!() };
    let mut csv = String::from("exponent,x,mertens_over_x,m_small\n");
    let mut run_m = 0.0;
    let mut run_ms = 0.0;
    let mut oct_last: f64 = 0.0;
    let mut oct_prev: f64 = 0.0;
    let mut sup_window: f64 = 0.0;
    let mut sup_lastdec: f64 = 0.0;
    for e in 0..=80u32 {
        let x = mm.location_of(e);
        run_m += mm.mass_at(e);
        run_ms += mm.mass_at(e) / x;
        csv.push_str(&format!("{e},{x},{},{run_ms}\n", run_m / x));
        if e >= 78 {
            oct_last = oct_last.max((run_m / x).abs());
        } else if e >= 76 {
            oct_prev = oct_prev.max((run_m / x).abs());
        }
        if e >= 40 {
            sup_window = sup_window.max(run_ms.abs());
        }
        if e >= 74 {
            sup_lastdec = sup_lastdec.max(run_ms.abs());
        }
    }
    fs::write(dir.join("mertens.csv"), csv)?;
    flags.add(
        "mertens-of-order-x",
        oct_last >= 0.01 && oct_prev >= 0.01,
        format!("max |M|/x over the last two octaves: {oct_prev:.4}, {oct_last:.4}"),
    );
    flags.add(
        "m-bounded",
        sup_lastdec >= 0.95 * sup_window,
        format!("sup |m| over [2^20, 2^40] = {sup_window:.5}, last decade {sup_lastdec:.5}"),
    );

    // refined log-density remainders
    let exps: Vec<u32> = (4..=80).step_by(2).collect();
    let rem = diagnostics::refined_logdensity_example1(&sys, &exps)?;
    let mut csv = String::from("exponent,remainder\n");
    for (&e, &r) in exps.iter().zip(&rem) {
        csv.push_str(&format!("{e},{r}\n"));
    }
    fs::write(dir.join("refined_logdensity.csv"), csv)?;
    let rhi = rem.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let rlo = rem.iter().cloned().fold(f64::INFINITY, f64::min);
    flags.add(
        "refined-log-density",
        rhi - rlo <= 2.0,
        format!("remainder band width {:.4}", rhi - rlo),
    );

    flags.finish(1, dir)
}

// ---------------------------------------------------------------------------
// Example 2: the continuous prime density and its doubled discrete rounding
// ---------------------------------------------------------------------------

fn example2(dir: &Path, x_max: f64) -> anyhow::Result<bool> {
    let mut flags = Flags::new();

    // defining-equation residuals of the g-primes
    let k_max = systems::example2_k_for_cutoff(x_max)?;
    let (qs, worst_resid) = systems::example2_gprimes(k_max)?;
    flags.add(
        "gprime-residuals",
        worst_resid <= 1e-10,
        format!("max |PiB(q_k) - k| = {worst_resid:.3e} over k <= {k_max}"),
    );

    // N_C from the convolution exponential of the continuous prime density
    let cont = systems::build_example2_continuous(2000.0, 1 << 13)?;
    let mut worst = 0.0f64;
    for &x in &[10.0, 100.0, 1000.0] {
        let got = cont.integers(x)?;
        let want = x * x.ln() - x + 2.0;
        worst = worst.max(((got - want) / want).abs());
    }
    flags.add(
        "nc-closed-form",
        worst <= 1e-3,
        format!("max relative error of N_C at {{10, 100, 1000}} = {worst:.3e}"),
    );

    // zeta_C: closed form against direct quadrature of the prime density
    let mut csv = String::from("sigma,t,re_direct,im_direct,re_closed,im_closed\n");
    let mut worst = 0.0f64;
    for &(sigma, t) in &[(1.2, 0.0), (1.2, 1.0), (1.5, 2.0), (2.0, 0.0), (3.0, -1.0)] {
        let s = Complex64::new(sigma, t);
        let direct = zeta::example2_log_zeta_quadrature(s)?.exp();
        let closed = zeta::example2_closed(s)?;
        worst = worst.max((direct - closed).norm() / closed.norm().max(1e-3));
        csv.push_str(&format!(
            "{sigma},{t},{},{},{},{}\n",
            direct.re, direct.im, closed.re, closed.im
        ));
    }
    fs::write(dir.join("zeta_c.csv"), csv)?;
    flags.add(
        "zeta-c-closed-form",
        worst <= 1e-4,
        format!("max relative gap = {worst:.3e} for sigma >= 1.2"),
    );

    // pi_P(x) = 2 floor(PiB(x)) and Pi_P(x) - pi_P(x) = O(sqrt x)
    let p_sys = systems::build_example2_discrete(k_max, x_max, 2.0)?;
    let mut pib = systems::PiB::new();
    let mut identity_ok = true;
    let mut worst_sqrt = 0.0f64;
    for i in 0..=24 {
        let x = 10.0 * (x_max / 10.0).powf(i as f64 / 24.0);
        let by_count = 2.0 * qs.iter().take_while(|&&q| q <= x).count() as f64;
        identity_ok &= by_count == 2.0 * pib.value(x).floor();
        let big_pi = p_sys.pi.cumulative(x)?;
        worst_sqrt = worst_sqrt.max((big_pi - by_count).abs() / (x.sqrt() * (1.0 + x.ln())));
    }
    flags.add("pi-p-floor-identity", identity_ok, "pi_P(x) = 2 floor(PiB(x))".into());
    flags.add(
        "pi-p-sqrt-gap",
        worst_sqrt <= 2.0,
        format!("max |Pi_P - pi_P| / (sqrt x (1 + ln x)) = {worst_sqrt:.4}"),
    );

    // hyperbola method against the naive convolution on the overlap
    let small_top = x_max.min(1e4);
    let d_small =
        systems::build_example2_discrete(systems::example2_k_for_cutoff(small_top)?, small_top, 1.0)?;
    let conv = d_small.n.convolve(&d_small.n)?;
    let input = studies::HyperbolaInput::from_system(&d_small, small_top)?;
    let mut worst = 0.0f64;
    for i in 0..=20 {
        let x = 10.0 * (small_top / 10.0).powf(i as f64 / 20.0);
        let naive = conv.cumulative(x)?;
        let hyper = studies::hyperbola_np(&input, x)?;
        worst = worst.max(((hyper - naive) / naive).abs());
    }
    flags.add(
        "hyperbola-overlap",
        worst <= 1e-9,
        format!("max relative gap hyperbola vs naive convolution = {worst:.3e}"),
    );

    // N_P samples and the x log x fit
    let d_sys = systems::build_example2_discrete(k_max, x_max, 1.0)?;
    let input = studies::HyperbolaInput::from_system(&d_sys, x_max)?;
    let samples: Vec<(f64, f64)> = (0..=40)
        .map(|i| {
            let x = 100.0 * (x_max / 100.0).powf(i as f64 / 40.0);
            Ok((x, studies::hyperbola_np(&input, x)?))
        })
        .collect::<beurling_core::Result<_>>()?;
    let fit = studies::fit_np(&samples)?;
    let FitModel::XLogX { c_squared, b } = fit.model else { unreachable!() };
    let mut csv = String::from("x,n_p,fit,residual_scaled\n");
    for &(x, y) in &samples {
        let model = c_squared * x * x.ln() + b * x;
        csv.push_str(&format!("{x},{y},{model},{}\n", (y - model) / (x / x.ln().sqrt())));
    }
    fs::write(dir.join("np_fit.csv"), csv)?;
    flags.add(
        "np-fit-residuals",
        fit.residual_max <= 1.0,
        format!(
            "N_P ~ {c_squared:.4} x ln x + {b:.4} x, max residual {:.4} in x/sqrt(ln x) units",
            fit.residual_max
        ),
    );

    // consistency: fitted c^2 against the square of N_D's density constant
    let grid = diagnostics::top_grid(d_sys.cutoff, 2.0, 32);
    let (points, values) = diagnostics::counting_steps(&d_sys.n);
    let dfit = diagnostics::density_fit(&Counting::Steps { points: &points, values: &values }, &grid)?;
    let FitModel::Linear { a } = dfit.model else { unreachable!() };
    flags.add(
        "c-squared-consistency",
        (c_squared / (a * a) - 1.0).abs() <= 0.10,
        format!("fitted c^2 = {c_squared:.4} vs density c = {a:.4} squared = {:.4}", a * a),
    );

    flags.finish(2, dir)
}

// ---------------------------------------------------------------------------
// Example 3: the plateau counting function
// ---------------------------------------------------------------------------

fn example3(dir: &Path) -> anyhow::Result<bool> {
    let mut flags = Flags::new();

    let shallow = [1.1, 1.01, 1.001, 1.0001];
    let deep: Vec<f64> = (5..=8).map(|k| 1.0 + 10f64.powi(-k)).collect();
    let mut csv = String::from("sigma,integral,scaled\n");
    let mut shallow_max = 0.0f64;
    for &s in shallow.iter().chain(&deep) {
        let v = studies::example3_l1_integral(s)?;
        let scaled = v * (s - 1.0).powf(1.0 / 3.0);
        csv.push_str(&format!("{s},{v},{scaled}\n"));
        if shallow.contains(&s) {
            shallow_max = shallow_max.max(scaled);
        }
    }
    fs::write(dir.join("l1_integral.csv"), csv)?;
    flags.add(
        "l1-gamma-headroom",
        shallow_max <= 1.5 * GAMMA_THIRD,
        format!("max scaled integral {shallow_max:.4} vs 1.5 Gamma(1/3) = {:.4}", 1.5 * GAMMA_THIRD),
    );
    let deep_vals: Vec<f64> = deep
        .iter()
        .map(|&s| Ok(studies::example3_l1_integral(s)? * (s - 1.0).powf(1.0 / 3.0)))
        .collect::<beurling_core::Result<_>>()?;
    let dlo = deep_vals.iter().cloned().fold(f64::INFINITY, f64::min);
    let dhi = deep_vals.iter().cloned().fold(0.0f64, f64::max);
    flags.add(
        "l1-asymptotic-band",
        dhi / dlo <= 2.0 && dhi <= GAMMA_THIRD,
        format!("scaled integral in [{dlo:.4}, {dhi:.4}] for sigma - 1 in [1e-8, 1e-5]"),
    );

    // exponent fit on the deep ladder
    let ladder: Vec<f64> = (8..=12).map(|k| 1.0 + 10f64.powi(-k)).collect();
    let vals: Vec<f64> = ladder
        .iter()
        .map(|&s| studies::example3_l1_integral(s))
        .collect::<beurling_core::Result<_>>()?;
    let rep = diagnostics::fit_power(&ladder, &vals)?;
    let FitModel::Power { constant, beta } = rep.model else { unreachable!() };
    flags.add(
        "l1-exponent-one-third",
        (beta - 1.0 / 3.0).abs() <= 0.05,
        format!("beta-hat = {beta:.4}, constant = {constant:.4} on sigma - 1 in [1e-12, 1e-8]"),
    );

    // plateau growth ratios
    let ratios = studies::example3_growth(6)?;
    let mut csv = String::from("n,ratio,expected\n");
    let mut exact = true;
    for (i, &r) in ratios.iter().enumerate() {
        let n = i as u32 + 1;
        let want = (n as f64 / 3.0).exp();
        exact &= r == want;
        csv.push_str(&format!("{n},{r},{want}\n"));
    }
    fs::write(dir.join("growth_ratios.csv"), csv)?;
    flags.add(
        "growth-ratios-exact",
        exact && ratios.windows(2).all(|w| w[0] < w[1]),
        format!("N(f(n))/f(n) = e^(n/3) bit-exact for n <= {}", PiecewiseN::MAX_PLATEAU),
    );

    flags.finish(3, dir)
}
