// scratch probe: example 2 discrete machinery at full scale
use beurling_core::studies::{fit_np, hyperbola_np, HyperbolaInput};
use beurling_core::systems::{
    build_example2_discrete, example2_gprimes, example2_k_for_cutoff, PiB,
};
use std::time::Instant;

fn main() {
    let t0 = Instant::now();
    let k_needed = example2_k_for_cutoff(1e6).unwrap();
    println!("k covering 1e6: {k_needed} ({:?})", t0.elapsed());

    let t1 = Instant::now();
    let (qs, worst) = example2_gprimes(k_needed).unwrap();
    println!(
        "roots: {} in {:?}; max residual {worst:.3e}; q1={:.6} q_last={:.1}",
        qs.len(),
        t1.elapsed(),
        qs[0],
        qs.last().unwrap()
    );

    let t2 = Instant::now();
    let d_sys = build_example2_discrete(k_needed, 1e6, 1.0).unwrap();
    println!("D-system exp* at 1e6: {:?}", t2.elapsed());
    let nd = d_sys.n.as_stieltjes().unwrap();
    println!("dN_D atoms: {}; N_D(1e6) = {:.1}", nd.atoms().len(), d_sys.integers(1e6).unwrap());

    // density fit of N_D
    let (points, values) = beurling_core::diagnostics::counting_steps(&d_sys.n);
    let c = beurling_core::diagnostics::Counting::Steps { points: &points, values: &values };
    let grid: Vec<f64> = (0..=40).map(|i| 1e3 * (1e3f64).powf(i as f64 / 40.0)).collect();
    let fit = beurling_core::diagnostics::density_fit(&c, &grid).unwrap();
    println!("N_D density fit: {:?} (diverging: {})", fit.model, fit.diverging);

    // hyperbola N_P over [1e2, 1e6], fit (4.11)
    let t3 = Instant::now();
    let input = HyperbolaInput::from_system(&d_sys, 1e6).unwrap();
    let samples: Vec<(f64, f64)> = (0..=40)
        .map(|i| {
            let x = 1e2 * (1e4f64).powf(i as f64 / 40.0);
            (x, hyperbola_np(&input, x).unwrap())
        })
        .collect();
    println!("hyperbola sweep: {:?}", t3.elapsed());
    let rep = fit_np(&samples).unwrap();
    println!("fit (4.11): {:?} res_max={:.4} res_l2={:.4}", rep.model, rep.residual_max, rep.residual_l2);

    // overlap with naive convolution at small scale
    let t4 = Instant::now();
    let d_small = build_example2_discrete(example2_k_for_cutoff(1e4).unwrap(), 1e4, 1.0).unwrap();
    let conv = d_small.n.convolve(&d_small.n).unwrap();
    let input_small = HyperbolaInput::from_system(&d_small, 1e4).unwrap();
    let mut worst_rel = 0.0f64;
    for i in 0..=20 {
        let x = 10.0 * (1e3f64).powf(i as f64 / 20.0);
        let naive = conv.cumulative(x).unwrap();
        let hyper = hyperbola_np(&input_small, x).unwrap();
        worst_rel = worst_rel.max(((hyper - naive) / naive).abs());
    }
    println!("hyperbola vs naive overlap worst rel: {worst_rel:.3e} ({:?})", t4.elapsed());

    // pi_P(x) = 2 floor(PiB(x)) and Pi_P - pi_P = O(sqrt x)
    let p_sys = build_example2_discrete(example2_k_for_cutoff(1e5).unwrap(), 1e5, 2.0).unwrap();
    let mut pib = PiB::new();
    let mut worst_sqrt = 0.0f64;
    for i in 0..=20 {
        let x = 10.0 * (1e4f64).powf(i as f64 / 20.0);
        let pi_p = 2.0 * (qs.iter().take_while(|&&q| q <= x).count() as f64);
        let from_floor = 2.0 * pib.value(x).floor();
        assert_eq!(pi_p, from_floor, "x={x}");
        let big_pi = p_sys.pi.cumulative(x).unwrap();
        worst_sqrt = worst_sqrt.max((big_pi - pi_p).abs() / (x.sqrt() * (1.0 + x.ln())));
        let _ = big_pi;
    }
    println!("max |Pi_P - pi_P| / (sqrt x (1+ln x)) = {worst_sqrt:.4}");
    println!("total: {:?}", t0.elapsed());
}
