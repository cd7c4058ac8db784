//! The reflected golden system with `p₀ = r²` has a density; compare `P_n`
//! against the exact mass of that density, and estimate the local dimension
//! along an aperiodic symbolic path.
//!
//! `cargo run --release --example density [max_generation]`

use finitype::dimension::{approx_local_dim, density_check_sr};
use finitype::{catalog, net};

fn main() -> finitype::Result<()> {
    let max_n: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(12);
    let graph = net::analyze(&catalog::golden_sr_absolutely_continuous(), 1000)?;
    println!(" n  intervals  sum|P_n - mass|  max rel. dev.  sum P_n");
    for n in 1..=max_n {
        let d = density_check_sr(&graph, n)?;
        println!(
            "{:>2}  {:>9}  {:>15.6e}  {:>13.6}  {:.6}",
            n, d.intervals, d.total_deviation, d.max_relative_deviation, d.total_pn
        );
    }
    // child choices driven by a Sturmian sequence, which never becomes periodic
    let alpha = 2f64.sqrt() - 1.0;
    let mut path = vec![0usize];
    for k in 0..30 {
        let v = *path.last().unwrap();
        let kids = graph.children(v);
        let digit = ((k + 1) as f64 * alpha).floor() - (k as f64 * alpha).floor();
        let pick = if digit > 0.5 { kids.len() / 2 } else { 0 };
        path.push(kids[pick]);
    }
    for n in [10, 20, 30] {
        let est = approx_local_dim(&graph, &path[..=n])?;
        println!("n = {n}: single {:.6}, three-interval {:.6}", est.single, est.three);
    }
    Ok(())
}
