//! Sufficient condition for generalized regularity on several systems, and
//! the edge-path / transition-ratio diagnostics for the three-map system.
//!
//! `cargo run --example regularity`

use finitype::dimension::{generalized_regular_sufficient, regularity_diagnostics};
use finitype::{catalog, net};

fn main() -> finitype::Result<()> {
    let systems = [
        ("golden SS, p0 = 2/5", catalog::golden_ss_ratio(2, 5)),
        ("golden SS, p0 = 1/2", catalog::golden_ss_ratio(1, 2)),
        ("golden SR, p0 = 2/5", catalog::golden_sr_ratio(2, 5)),
        ("golden SR, p0 = 3/5", catalog::golden_sr_ratio(3, 5)),
        ("thirds (2/5, 1/5, 2/5)", catalog::thirds_ratio([(2, 5), (1, 5), (2, 5)])),
        ("three-map, p = 2/5", catalog::exreg_ratio(2, 5)),
    ];
    for (name, ifs) in &systems {
        let rep = generalized_regular_sufficient(ifs);
        let ratios: Vec<String> = rep.ratios.iter().map(|b| format!("{:.4}", b.mid())).collect();
        println!(
            "{name}: {:?} (case {}), log p_j / log |r_j| = [{}]",
            rep.verdict,
            rep.case.map_or("-".to_string(), |c| c.to_string()),
            ratios.join(", ")
        );
    }
    let graph = net::analyze(&catalog::exreg_ratio(2, 5), 1000)?;
    println!("\nthree-map system, p = 2/5");
    println!(" n  max edge-path mass  min ratio  lower bound on B(n)");
    for row in regularity_diagnostics(&graph, 6, 3)? {
        println!(
            "{:>2}  {:>18}  {:>9.3e}  {:>8.4}{}",
            row.n,
            row.gamma_max,
            row.r_hat_f64,
            row.b_hat,
            if row.truncated { " (search capped)" } else { "" }
        );
    }
    Ok(())
}
