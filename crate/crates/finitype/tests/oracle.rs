mod common;

use finitype::net::analyze;

#[test]
fn measure_tables_match_brute_force() {
    for (name, ifs) in common::worked_systems() {
        let g = analyze(&ifs, 1000).unwrap();
        for n in 0..=4 {
            let count = common::check_generation(&g, n).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(count > 0);
        }
    }
}
