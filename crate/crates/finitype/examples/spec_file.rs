//! Loading a system from a JSON spec, with a parameter substituted.
//!
//! `cargo run --example spec_file [path] [param]`

use std::path::PathBuf;

use finitype::dimension::{endpoint, essential_bracket, BracketOptions};
use finitype::numberfield::parse_rational;
use finitype::specfile::SpecFile;
use finitype::net;

fn main() -> finitype::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args.next().map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/golden_sr_param.json")
    });
    let param = args.next().map(|s| parse_rational(&s)).transpose()?;
    let spec = SpecFile::load(&path)?;
    let ifs = spec.ifs(param.as_ref())?;
    println!("{} maps over a degree {} field, r_min = {}", ifs.len(), ifs.field().degree(), ifs.r_min());
    let graph = net::analyze(&ifs, spec.options.max_vectors)?;
    println!("{} characteristic vectors", graph.len());
    let opts = BracketOptions {
        max_cycle_len: spec.options.max_cycle_len,
        ..BracketOptions::default()
    };
    let b = essential_bracket(&graph, &opts)?;
    println!("a in [{:.9}, {:.9}], b in [{:.9}, {:.9}]", b.a_lo.lo, b.a_hi.hi, b.b_lo.lo, b.b_hi.hi);
    for point in [0, 1] {
        let e = endpoint(&graph, point)?;
        println!("dim at {point}: {:.9}", e.dimension.dimension.mid());
    }
    Ok(())
}
