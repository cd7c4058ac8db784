//! Transition matrices of the basic loops in the essential class of the
//! golden-mean systems, with symbolic probabilities evaluated at `p₀ = 2/5`.
//!
//! `cargo run --example loop_matrices`

use finitype::transitions::path_matrix;
use finitype::{catalog, net};

fn main() -> finitype::Result<()> {
    let ss = net::analyze(&catalog::golden_ss_ratio(2, 5), 1000)?;
    let sr = net::analyze(&catalog::golden_sr_ratio(2, 5), 1000)?;
    // 1-based vector labels as printed by the `structure` example
    let loops: [(&str, &finitype::VectorGraph, &[usize]); 6] = [
        ("SS 5-6-3-5", &ss, &[5, 6, 3, 5]),
        ("SS 5-7-5", &ss, &[5, 7, 5]),
        ("SS 5-3-5", &ss, &[5, 3, 5]),
        ("SR 5-7-3-5", &sr, &[5, 7, 3, 5]),
        ("SR 5-6-5", &sr, &[5, 6, 5]),
        ("SR 5-8-5", &sr, &[5, 8, 5]),
    ];
    for (name, graph, path) in loops {
        let ids: Vec<usize> = path.iter().map(|l| l - 1).collect();
        let m = path_matrix(graph, &ids)?;
        println!("{name}: {m}");
    }
    Ok(())
}
