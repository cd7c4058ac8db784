//! Brackets for the upper and lower ends of the essential interval of both
//! golden systems as `p₀` runs over `(0, 1/2)`, written as CSV for plotting.
//!
//! `cargo run --release --example figure_sweep [steps] [out_dir]`

use std::path::PathBuf;

use finitype::cli::{grid, sweep_rows, SWEEP_HEADER};
use finitype::dimension::BracketOptions;
use finitype::numberfield::parse_rational;
use finitype::specfile::SpecFile;

fn main() -> finitype::Result<()> {
    let mut args = std::env::args().skip(1);
    let steps: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(99);
    let out_dir = PathBuf::from(args.next().unwrap_or_else(|| ".".into()));
    let data = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data");
    let params = grid(&parse_rational("1/200")?, &parse_rational("99/200")?, steps);
    for name in ["golden_ss_param", "golden_sr_param"] {
        let spec = SpecFile::load(&data.join(format!("{name}.json")))?;
        let rows = sweep_rows(&spec, &params, &BracketOptions::default())?;
        let mut csv = format!("{SWEEP_HEADER}\n");
        for r in &rows {
            csv.push_str(&r.to_csv());
            csv.push('\n');
        }
        let path = out_dir.join(format!("{name}.csv"));
        std::fs::write(&path, csv).expect("writable output directory");
        println!("{} rows -> {}", rows.len(), path.display());
    }
    Ok(())
}
