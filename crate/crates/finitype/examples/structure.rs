//! Characteristic vectors, children and the essential class of the standard
//! systems.
//!
//! `cargo run --example structure [ss|sr|exreg|n3|thirds]`

use finitype::transitions::labels;
use finitype::{catalog, net, Ifs};

fn main() -> finitype::Result<()> {
    let which = std::env::args().nth(1).unwrap_or_else(|| "ss".into());
    let ifs: Ifs = match which.as_str() {
        "ss" => catalog::golden_ss_ratio(2, 5),
        "sr" => catalog::golden_sr_ratio(2, 5),
        "exreg" => catalog::exreg_ratio(3, 10),
        "n3" => catalog::n_map_example(3, 1, Vec::new()),
        "thirds" => catalog::thirds_ratio([(2, 5), (1, 5), (2, 5)]),
        other => {
            eprintln!("unknown system {other}; try ss, sr, exreg, n3 or thirds");
            std::process::exit(2);
        }
    };
    let graph = net::analyze(&ifs, 10_000)?;
    let reduced = graph.reduced_labels();
    println!(
        "{} characteristic vectors, {} reduced",
        graph.len(),
        graph.reduced_count()
    );
    for (id, node) in graph.nodes().iter().enumerate() {
        println!(
            "{:>3}  [reduced {}]  {}  ->  {:?}",
            id + 1,
            reduced[id] + 1,
            node.vector,
            labels(&graph.children(id))
        );
    }
    println!("essential class: {:?}", labels(graph.essential_class()?));
    Ok(())
}
