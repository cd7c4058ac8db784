//! Local dimension at a point with two symbolic representations. In the
//! golden system the point 1 − r is the left end of a chain of net intervals
//! cycling through vectors 3 and 5, and the right end of a chain cycling
//! through 5 and 7. The smaller quotient is the local dimension.
//!
//! `cargo run --example periodic_point`

use finitype::dimension::{periodic_dim, PeriodicPoint};
use finitype::transitions::labels;
use finitype::{catalog, net};

fn main() -> finitype::Result<()> {
    let graph = net::analyze(&catalog::golden_ss_ratio(2, 5), 1000)?;
    let ids = |v: &[usize]| v.iter().map(|l| l - 1).collect::<Vec<_>>();
    let left = PeriodicPoint::new(&graph, ids(&[1, 3]), ids(&[3, 5, 3]))?;
    let both = left
        .clone()
        .with_alternate(&graph, ids(&[1, 2, 3, 5]), ids(&[5, 7, 5]))?;
    let x = both.value(&graph)?;
    println!("point {x} ~ {:.9}", x.to_f64());
    let only_left = periodic_dim(&graph, &left)?;
    println!(
        "  via {:?} repeated: {:.12}",
        labels(&left.cycle),
        only_left.dimension.mid()
    );
    let d = periodic_dim(&graph, &both)?;
    let (_, alt) = both.alternate.as_ref().expect("set above");
    println!(
        "  via {:?} repeated: {:.12}",
        labels(alt),
        d.dimension.mid()
    );
    println!(
        "local dimension {:.12} from representation {}, spectral radius {}",
        d.dimension.mid(),
        d.representation + 1,
        d.exact_spectral_radius.as_deref().unwrap_or("irrational")
    );
    Ok(())
}
