// scratch probe: classical system at 1e6
use beurling_core::diagnostics as diag;
use beurling_core::systems::build_classical;
use std::time::Instant;

fn main() {
    let t0 = Instant::now();
    let sys = build_classical(1e6).unwrap();
    println!("build_classical(1e6): {:?}", t0.elapsed());
    let n = sys.n.as_stieltjes().unwrap();
    println!("dN atoms: {}", n.atoms().len());
    let m = sys.m.as_stieltjes().unwrap();
    println!("dM atoms: {}", m.atoms().len());
    println!("N(1e6) = {}", sys.integers(1e6).unwrap());
    println!("M(1e4) = {}", sys.mertens(1e4).unwrap());
    println!("M(1e6) = {}", sys.mertens(1e6).unwrap());
    let t1 = Instant::now();
    let r3 = diag::main_identity_residual(&sys, 1e3).unwrap();
    let r6 = diag::main_identity_residual(&sys, 1e6).unwrap();
    println!("r(1e3) = {r3:.6}, r(1e6) = {r6:.6} ({:?})", t1.elapsed());
    let t2 = Instant::now();
    let f5 = diag::moebius_log_average(&sys, 1e5).unwrap();
    println!("f(1e5)/(x ln x) = {:.6} ({:?})", f5 / (1e5 * (1e5f64).ln()), t2.elapsed());
    // psi/x over [1e4, 1e6]
    let xs: Vec<f64> = (0..=120).map(|i| 1e4 * (1e2f64).powf(i as f64 / 120.0)).collect();
    let (lo, hi) = diag::chebyshev_bounds_estimate(&sys, &xs).unwrap();
    println!("classical psi/x on [1e4,1e6]: [{lo:.5}, {hi:.5}]");
    // density fit
    let (points, values) = diag::counting_steps(&sys.n);
    let c = diag::Counting::Steps { points: &points, values: &values };
    let grid: Vec<f64> = (0..=40).map(|i| 1e2 * (1e4f64).powf(i as f64 / 40.0)).collect();
    let fit = diag::density_fit(&c, &grid).unwrap();
    println!("density fit: {:?} diverging={} res_max={:.3}", fit.model, fit.diverging, fit.residual_max);
    // l1 exponent on steps to 1e5
    let t3 = Instant::now();
    let sigmas = [1.1, 1.05, 1.02, 1.01];
    let take = points.iter().position(|&p| p > 1e5).unwrap_or(points.len());
    let cc = diag::Counting::Steps { points: &points[..take], values: &values[..take] };
    let (vals, rep) = diag::l1_exponent(&cc, 1.0, &sigmas).unwrap();
    println!("classical I(sigma) = {vals:?} model {:?} ({:?})", rep.model, t3.elapsed());
    // m(1e6)
    println!("m(1e6) = {:.8}", diag::m_small(&sys, 1e6).unwrap());
    println!("total: {:?}", t0.elapsed());
}
