//! Bounds on the interval of local dimensions of the essential class, plus
//! the local dimensions at the endpoints 0 and 1.
//!
//! `cargo run --example essential_bracket [ss|sr|exreg] [p] [max_cycle_len]`
//! or `cargo run --example essential_bracket sr-density - [max_cycle_len]`
//!
//! `p` is a rational such as `2/5`; it is `p₀` for the golden systems and the
//! outer weight for the three-map system.

use finitype::dimension::{endpoint, essential_bracket, BracketOptions};
use finitype::numberfield::{parse_rational, NumberField};
use finitype::transitions::labels;
use finitype::{catalog, net};

fn main() -> finitype::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let which = args.first().map(String::as_str).unwrap_or("ss");
    let p = match which {
        "sr-density" => parse_rational("0")?,
        _ => parse_rational(args.get(1).map(String::as_str).unwrap_or("2/5"))?,
    };
    let max_cycle_len = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(8);
    let golden = NumberField::golden();
    let ifs = match which {
        "ss" => catalog::golden_ss(golden.rational(p)),
        "sr" => catalog::golden_sr(golden.rational(p)),
        "sr-density" => catalog::golden_sr_absolutely_continuous(),
        "exreg" => catalog::exreg(NumberField::rationals().rational(p)),
        other => {
            eprintln!("unknown system {other}");
            std::process::exit(2);
        }
    };
    let graph = net::analyze(&ifs, 10_000)?;
    let opts = BracketOptions {
        max_cycle_len,
        ..BracketOptions::default()
    };
    let b = essential_bracket(&graph, &opts)?;
    println!("a in [{:.9}, {:.9}]", b.a_lo.lo, b.a_hi.hi);
    println!("b in [{:.9}, {:.9}]", b.b_lo.lo, b.b_hi.hi);
    println!(
        "a_lo from {:?} ({:?} sums), b_hi from {:?} ({:?} sums)",
        labels(&b.a_lo_witness.generator),
        b.a_lo_witness.variant,
        labels(&b.b_hi_witness.generator),
        b.b_hi_witness.variant
    );
    println!(
        "a_hi at cycle {:?}, b_lo at cycle {:?}; {} cycles sampled",
        labels(&b.a_hi_witness),
        labels(&b.b_lo_witness),
        b.cycles_sampled
    );
    for point in [0u8, 1] {
        let e = endpoint(&graph, point)?;
        let d = e.dimension.dimension;
        let isolated = !e.essential && (d.lo > b.b_hi.hi || d.hi < b.a_lo.lo);
        println!(
            "dim at {point}: {:.9} via cycle {:?}{}{}",
            d.mid(),
            labels(&e.representation.cycle),
            if e.essential { ", essential" } else { "" },
            if isolated { ", isolated" } else { "" }
        );
    }
    Ok(())
}
