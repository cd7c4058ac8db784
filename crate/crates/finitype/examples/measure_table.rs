//! Net intervals of one generation with their exact neighbour masses `Q_n`
//! and `P_n`, left to right.
//!
//! `cargo run --example measure_table [generation]`

use finitype::dimension::measure_table;
use finitype::transitions::labels;
use finitype::{catalog, net};

fn main() -> finitype::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let graph = net::analyze(&catalog::golden_sr_ratio(2, 5), 1000)?;
    for row in measure_table(&graph, n) {
        let q: Vec<String> = row.q.iter().map(ToString::to_string).collect();
        println!(
            "[{:.6}, {:.6}]  path {:?}  Q = ({})  P = {}",
            row.interval.left.to_f64(),
            row.interval.right.to_f64(),
            labels(&row.path),
            q.join(", "),
            row.p_n
        );
    }
    Ok(())
}
