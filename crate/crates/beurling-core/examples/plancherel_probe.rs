// scratch probe: (sigma-1) * line integral for classical dN and lattice dM
use beurling_core::systems::{build_classical, Example1Scaled};
use beurling_core::zeta::{line_integral_sq, SweepTable, TransformOptions};
use std::time::Instant;

fn main() {
    let t0 = Instant::now();
    let sys = build_classical(1e6).unwrap();
    println!("classical build: {:?}", t0.elapsed());
    for &sigma in &[1.1, 1.01, 1.001] {
        let t = Instant::now();
        let table = SweepTable::new(&sys.n, sigma, TransformOptions::with_tail(1.0)).unwrap();
        let v = line_integral_sq(&table, 50.0);
        println!("classical dN: sigma={sigma}: (s-1)*I = {:.6} ({:?})", (sigma - 1.0) * v, t.elapsed());
    }
    for &max_exp in &[4096u32, 8192, 16384] {
        let t1 = Instant::now();
        let scaled = Example1Scaled::build(max_exp);
        println!("scaled lattice E={max_exp}: {:?}", t1.elapsed());
        for &sigma in &[1.1, 1.01, 1.001] {
            let t = Instant::now();
            let table = SweepTable::from_scaled_lattice(
                &scaled.m_over_u,
                Example1Scaled::LOG_LOCATION_STEP,
                sigma,
            )
            .unwrap();
            let v = line_integral_sq(&table, 50.0);
            println!("  lattice dM: sigma={sigma}: (s-1)*I = {:.6} ({:?})", (sigma - 1.0) * v, t.elapsed());
        }
    }
}
