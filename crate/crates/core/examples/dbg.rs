use itx_core::transforms::{self, TransformFamily};
fn main() {
    let fam = TransformFamily::MehlerFock { mu: 0.3 };
    let f = |x: f64| (-x).exp();
    let support = (1.0 + 1e-9, 45.0);
    // forward samples at a few large tau to see the decay
    for &tau in &[10.0, 20.0, 40.0, 80.0, 160.0] {
        let v = transforms::forward_scaled(fam, f, support, tau).unwrap();
        println!("tau={tau:>5}: F={v:.6e}  tau^2.3*F={:.4e}", v * tau.powf(2.3));
    }
    // adaptive inverse (expands tau panels as needed)
    let t0 = std::time::Instant::now();
    let x = 2.0;
    let rec = transforms::inverse_scaled(fam, |tau| transforms::forward_scaled(fam, f, support, tau).unwrap_or(0.0), x).unwrap();
    println!("adaptive inverse at {x}: {rec:.8e} vs exact {:.8e} rel {:.3e} [{:?}]", f(x), (rec-f(x)).abs()/f(x), t0.elapsed());
}
