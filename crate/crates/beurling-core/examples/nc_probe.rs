// scratch probe built as an example
use beurling_core::systems::build_example2_continuous;

fn main() {
    for &cells in &[1usize << 12, 1 << 13, 1 << 14] {
        let t0 = std::time::Instant::now();
        let sys = build_example2_continuous(2000.0, cells).unwrap();
        let dt = t0.elapsed();
        print!("cells={cells} ({dt:?}): ");
        for &x in &[10.0, 100.0, 1000.0] {
            let got = sys.integers(x).unwrap();
            let want = x * x.ln() - x + 2.0;
            print!(" x={x}: rel={:+.2e}", (got - want) / want);
        }
        println!();
    }
}
