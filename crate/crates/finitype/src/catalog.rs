//! Ready-made systems over the golden field and the rationals.
//!
//! The golden field is `Q(r)` with `r² + r − 1 = 0`, `r ≈ 0.618`.

use crate::ifs::{AffineMap, Ifs};
use crate::numberfield::{FieldElement, NumberField};

fn two_probs(p0: FieldElement) -> Vec<FieldElement> {
    let p1 = p0.field().one() - &p0;
    vec![p0, p1]
}

/// `S₀(x) = rx`, `S₁(x) = rx + 1 − r` with probabilities `(p₀, 1 − p₀)`.
pub fn golden_ss(p0: FieldElement) -> Ifs {
    let k = p0.field().clone();
    let r = k.generator();
    let maps = vec![
        AffineMap { r: r.clone(), t: k.zero() },
        AffineMap { r: r.clone(), t: k.one() - &r },
    ];
    Ifs::new(k, maps, two_probs(p0)).expect("golden SS system is valid")
}

pub fn golden_ss_ratio(num: i64, den: i64) -> Ifs {
    golden_ss(NumberField::golden().ratio(num, den))
}

/// `S₀(x) = rx`, `R₁(x) = 1 − rx` with probabilities `(p₀, 1 − p₀)`.
pub fn golden_sr(p0: FieldElement) -> Ifs {
    let k = p0.field().clone();
    let r = k.generator();
    let maps = vec![
        AffineMap { r: r.clone(), t: k.zero() },
        AffineMap { r: -&r, t: k.one() },
    ];
    Ifs::new(k, maps, two_probs(p0)).expect("golden SR system is valid")
}

pub fn golden_sr_ratio(num: i64, den: i64) -> Ifs {
    golden_sr(NumberField::golden().ratio(num, den))
}

/// The reflected system with `p₀ = r²`, whose measure has a density.
pub fn golden_sr_absolutely_continuous() -> Ifs {
    let r = NumberField::golden().generator();
    golden_sr(&r * &r)
}

/// `x/2`, `x/2 + 1/4`, `x/2 + 1/2` with probabilities `(p, 1 − 2p, p)`, `0 < p < 1/2`.
pub fn exreg(p: FieldElement) -> Ifs {
    let k = p.field().clone();
    let half = k.ratio(1, 2);
    let maps = vec![
        AffineMap { r: half.clone(), t: k.zero() },
        AffineMap { r: half.clone(), t: k.ratio(1, 4) },
        AffineMap { r: half, t: k.ratio(1, 2) },
    ];
    let mid = k.one() - &p - &p;
    Ifs::new(k, maps, vec![p.clone(), mid, p]).expect("three-map system is valid")
}

pub fn exreg_ratio(num: i64, den: i64) -> Ifs {
    exreg(NumberField::rationals().ratio(num, den))
}

/// `S_i(x) = x/N + i/N` for `i = 0..N−1` plus `S_N(x) = x/N² + i₀/N`.
///
/// `i₀` ranges over `1..=N−2`; `probs` has `N + 1` entries, or is empty for
/// the uniform choice.
pub fn n_map_example(n: i64, i0: i64, probs: Vec<FieldElement>) -> Ifs {
    assert!((1..=n - 2).contains(&i0), "need 1 ≤ i0 ≤ N − 2");
    let k = NumberField::rationals();
    let mut maps: Vec<AffineMap> = (0..n)
        .map(|i| AffineMap {
            r: k.ratio(1, n),
            t: k.ratio(i, n),
        })
        .collect();
    maps.push(AffineMap {
        r: k.ratio(1, n * n),
        t: k.ratio(i0, n),
    });
    let probs = if probs.is_empty() {
        vec![k.ratio(1, n + 1); (n + 1) as usize]
    } else {
        probs
    };
    Ifs::new(k, maps, probs).expect("N-map system is valid")
}

/// `x/3 + i/3` for `i = 0, 1, 2`.
pub fn thirds(p: [FieldElement; 3]) -> Ifs {
    let k = p[0].field().clone();
    let maps = (0..3)
        .map(|i| AffineMap {
            r: k.ratio(1, 3),
            t: k.ratio(i, 3),
        })
        .collect();
    Ifs::new(k, maps, p.to_vec()).expect("thirds system is valid")
}

pub fn thirds_ratio(p: [(i64, i64); 3]) -> Ifs {
    let k = NumberField::rationals();
    thirds(p.map(|(n, d)| k.ratio(n, d)))
}

/// Middle-thirds Cantor system with equal weights.
pub fn cantor() -> Ifs {
    let k = NumberField::rationals();
    let maps = vec![
        AffineMap { r: k.ratio(1, 3), t: k.zero() },
        AffineMap { r: k.ratio(1, 3), t: k.ratio(2, 3) },
    ];
    Ifs::new(k.clone(), maps, vec![k.ratio(1, 2), k.ratio(1, 2)]).expect("Cantor system is valid")
}
