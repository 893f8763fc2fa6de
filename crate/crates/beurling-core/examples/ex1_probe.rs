// scratch probe: example 1 lattice quantities at the acceptance scales
use beurling_core::measure::Measure;
use beurling_core::systems::build_example1;

fn main() {
    let sys = build_example1(80).unwrap();
    let Measure::Lattice(m) = &sys.m else { panic!() };
    let Measure::Lattice(_n) = &sys.n else { panic!() };

    // psi/x extremes over m in [40, 80], both one-sided values
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for e in 40..=80u32 {
        let x = m.location_of(e);
        let r = sys.chebyshev_psi(x).unwrap() / x;
        let l = sys.chebyshev_psi_left(x).unwrap() / x;
        lo = lo.min(l.min(r));
        hi = hi.max(l.max(r));
    }
    let ln2 = std::f64::consts::LN_2;
    println!("psi/x: min={lo:.6} ({:+.3}% of ln2)  max={hi:.6} ({:+.3}% of 2ln2)",
        100.0*(lo/ln2 - 1.0), 100.0*(hi/(2.0*ln2) - 1.0));

    // |M(x)|/x over the lattice; per-octave maxima for the last few octaves
    let mut global_max: f64 = 0.0;
    let mut octave_max = vec![0.0f64; 41]; // octave = floor(m/2)
    let mut run = 0.0;
    for e in 0..=80u32 {
        run += m.mass_at(e);
        let x = m.location_of(e);
        let v = run.abs() / x;
        global_max = global_max.max(v);
        octave_max[(e / 2) as usize] = octave_max[(e / 2) as usize].max(v);
    }
    println!("max |M|/x = {global_max:.4}; octaves 37..40: {:?}",
        &octave_max[37..=40].iter().map(|v| (v*1000.0).round()/1000.0).collect::<Vec<_>>());

    // m(x) = running sum of mass/loc; sup over all, sup over last decade
    let mut msup: f64 = 0.0;
    let mut msup_lastdec: f64 = 0.0;
    let mut run = 0.0;
    let top = m.location_of(80);
    let mut trace = Vec::new();
    for e in 0..=80u32 {
        let x = m.location_of(e);
        run += m.mass_at(e) / x;
        msup = msup.max(run.abs());
        if x > top / 10.0 {
            msup_lastdec = msup_lastdec.max(run.abs());
        }
        if e % 8 == 0 { trace.push((e, (run*1000.0).round()/1000.0)); }
    }
    println!("sup |m| = {msup:.4}; last-decade sup = {msup_lastdec:.4}; ratio = {:.4}",
        msup_lastdec / msup);
    println!("m trace (e, m): {trace:?}");

    // log-density fit over top two decades + refined remainders
    let xs: Vec<f64> = (54..=80).map(|e| m.location_of(e)).collect();
    let fit = beurling_core::diagnostics::log_density_fit(&sys, &xs).unwrap();
    println!("log-density fit: {:?}", fit.model);
    let exps: Vec<u32> = (4..=80).step_by(2).collect();
    let rem = beurling_core::diagnostics::refined_logdensity_example1(&sys, &exps).unwrap();
    let rlo = rem.iter().cloned().fold(f64::INFINITY, f64::min);
    let rhi = rem.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    println!("refined remainders: band [{rlo:.4}, {rhi:.4}] width {:.4}", rhi - rlo);
    // without the loglog/2 term
    let drift: Vec<f64> = exps.iter().zip(&rem).map(|(&e, &r)| {
        let lnx = e as f64 * std::f64::consts::LN_2 / 2.0;
        r + lnx.ln() / 2.0
    }).collect();
    println!("alt-model drift across range: {:.4}", drift.last().unwrap() - drift.first().unwrap());

    // wobble empirical spread on [2^20, 2^40]
    let (wlo, whi) = beurling_core::studies::wobble_empirical(&sys, 40, 80).unwrap();
    println!("N/x on lattice [2^20,2^40]: [{wlo:.4}, {whi:.4}] spread {:.4}", whi - wlo);

    // moebius log average at top
    let x = m.location_of(80);
    let f = beurling_core::diagnostics::moebius_log_average(&sys, x).unwrap();
    println!("f(2^40)/(x ln x) = {:.4}", f / (x * x.ln()));
    let mut best = 0.0f64;
    for e in 60..=80u32 {
        let x = m.location_of(e);
        let f = beurling_core::diagnostics::moebius_log_average(&sys, x).unwrap();
        best = best.max((f / (x * x.ln())).abs());
    }
    println!("max |f|/(x ln x) over m in [60,80] = {best:.4}");
}
