//! Iterated function systems of affine contractions on the line.

use std::cmp::Ordering;
use std::fmt;

use crate::numberfield::{FieldElement, NumberField};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IfsError {
    #[error("an IFS needs at least two maps")]
    TooFewMaps,
    #[error("{maps} maps but {probs} probabilities")]
    ProbabilityCount { maps: usize, probs: usize },
    #[error("map {0} is not a contraction: need 0 < |r| < 1")]
    NotContraction(usize),
    #[error("probability {0} must be positive")]
    NonPositiveProbability(usize),
    #[error("probabilities must sum to 1")]
    ProbabilitySum,
    #[error("convex hull of the attractor is not [0, 1]")]
    HullNotUnitInterval,
    #[error("letter {letter} out of range for an IFS with {maps} maps")]
    LetterOutOfRange { letter: usize, maps: usize },
    #[error(transparent)]
    Field(#[from] crate::numberfield::FieldError),
}

/// `x ↦ r·x + t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineMap {
    pub r: FieldElement,
    pub t: FieldElement,
}

impl AffineMap {
    pub fn identity(field: &NumberField) -> AffineMap {
        AffineMap {
            r: field.one(),
            t: field.zero(),
        }
    }

    pub fn apply(&self, x: &FieldElement) -> FieldElement {
        &self.r * x + &self.t
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AffineMap) -> AffineMap {
        AffineMap {
            r: &self.r * &inner.r,
            t: &self.r * &inner.t + &self.t,
        }
    }

    /// `S[0,1]` as an ordered pair `(min, max)`.
    pub fn image_of_unit(&self) -> (FieldElement, FieldElement) {
        let a = self.t.clone();
        let b = &self.r + &self.t;
        if self.r.is_negative() {
            (b, a)
        } else {
            (a, b)
        }
    }
}

/// A finite word over the alphabet of map indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

/// Result of the bounded search for commensurability exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Commensurability {
    /// `exponents[j] = (b, c)` with `|r_j|^b = r_min^c`, so `q_j = b/c`.
    Exponents(Vec<(u32, u32)>),
    NotCommensurable { map: usize },
}

/// An IFS `S_j(x) = r_j x + d_j` with probabilities `p_j`.
#[derive(Debug, Clone)]
pub struct Ifs {
    field: NumberField,
    maps: Vec<AffineMap>,
    probs: Vec<FieldElement>,
    abs_r: Vec<FieldElement>,
    r_min: FieldElement,
}

impl Ifs {
    pub fn new(
        field: NumberField,
        maps: Vec<AffineMap>,
        probs: Vec<FieldElement>,
    ) -> Result<Ifs, IfsError> {
        if maps.len() < 2 {
            return Err(IfsError::TooFewMaps);
        }
        if maps.len() != probs.len() {
            return Err(IfsError::ProbabilityCount {
                maps: maps.len(),
                probs: probs.len(),
            });
        }
        let one = field.one();
        let mut abs_r = Vec::with_capacity(maps.len());
        for (j, m) in maps.iter().enumerate() {
            let a = m.r.abs();
            if a.is_zero() || a.cmp_value(&one) != Ordering::Less {
                return Err(IfsError::NotContraction(j));
            }
            abs_r.push(a);
        }
        let r_min = abs_r
            .iter()
            .cloned()
            .reduce(FieldElement::min_value)
            .expect("at least two maps");
        let ifs = Ifs {
            field,
            maps,
            probs: Vec::new(),
            abs_r,
            r_min,
        };
        ifs.check_hull()?;
        ifs.with_probabilities(probs)
    }

    fn check_hull(&self) -> Result<(), IfsError> {
        let mut lo: Option<FieldElement> = None;
        let mut hi: Option<FieldElement> = None;
        for m in &self.maps {
            let (a, b) = m.image_of_unit();
            lo = Some(match lo {
                None => a,
                Some(x) => x.min_value(a),
            });
            hi = Some(match hi {
                None => b,
                Some(x) => x.max_value(b),
            });
        }
        if lo.unwrap().is_zero() && hi.unwrap().is_one() {
            Ok(())
        } else {
            Err(IfsError::HullNotUnitInterval)
        }
    }

    /// Same maps, new probabilities.
    pub fn with_probabilities(&self, probs: Vec<FieldElement>) -> Result<Ifs, IfsError> {
        if probs.len() != self.maps.len() {
            return Err(IfsError::ProbabilityCount {
                maps: self.maps.len(),
                probs: probs.len(),
            });
        }
        let mut total = self.field.zero();
        for (j, p) in probs.iter().enumerate() {
            if !p.is_positive() {
                return Err(IfsError::NonPositiveProbability(j));
            }
            total = total.try_add(p)?;
        }
        if !total.is_one() {
            return Err(IfsError::ProbabilitySum);
        }
        Ok(Ifs {
            probs,
            ..self.clone()
        })
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn maps(&self) -> &[AffineMap] {
        &self.maps
    }

    pub fn probs(&self) -> &[FieldElement] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn r_min(&self) -> &FieldElement {
        &self.r_min
    }

    /// `|r_j|`.
    pub fn abs_ratio(&self, j: usize) -> &FieldElement {
        &self.abs_r[j]
    }

    pub fn is_equicontractive(&self) -> bool {
        let r0 = &self.maps[0].r;
        r0.is_positive() && self.maps.iter().all(|m| &m.r == r0)
    }

    /// `S_σ = S_{σ₁} ∘ … ∘ S_{σ_j}`; the empty word gives the identity.
    pub fn compose(&self, word: &Word) -> Result<AffineMap, IfsError> {
        let mut acc = AffineMap::identity(&self.field);
        for &l in &word.0 {
            let m = self.maps.get(l).ok_or(IfsError::LetterOutOfRange {
                letter: l,
                maps: self.maps.len(),
            })?;
            acc = acc.compose(m);
        }
        Ok(acc)
    }

    /// `p_σ`.
    pub fn word_probability(&self, word: &Word) -> FieldElement {
        word.0
            .iter()
            .fold(self.field.one(), |acc, &l| acc * &self.probs[l])
    }

    /// `|r_σ|`.
    pub fn word_abs_ratio(&self, word: &Word) -> FieldElement {
        word.0
            .iter()
            .fold(self.field.one(), |acc, &l| acc * &self.abs_r[l])
    }

    /// Words `τ` with `|r_τ| ≤ bound < |r_{τ⁻}|`, in lexicographic order.
    ///
    /// For `bound ≥ 1` only the empty word qualifies.
    pub fn words_below(&self, bound: &FieldElement) -> Vec<Word> {
        let one = self.field.one();
        if one.cmp_value(bound) != Ordering::Greater {
            return vec![Word::empty()];
        }
        let mut out = Vec::new();
        let mut stack = Vec::new();
        self.extend_below(bound, &one, &mut stack, &mut out);
        out
    }

    fn extend_below(
        &self,
        bound: &FieldElement,
        current: &FieldElement,
        stack: &mut Vec<usize>,
        out: &mut Vec<Word>,
    ) {
        for j in 0..self.maps.len() {
            let next = current * &self.abs_r[j];
            stack.push(j);
            if next.cmp_value(bound) == Ordering::Greater {
                self.extend_below(bound, &next, stack, out);
            } else {
                out.push(Word(stack.clone()));
            }
            stack.pop();
        }
    }

    /// `Λ_n = {σ : |r_σ| ≤ r_min^n < |r_{σ⁻}|}`; `Λ₀` is the empty word.
    pub fn generation_words(&self, n: u32) -> Vec<Word> {
        if n == 0 {
            return vec![Word::empty()];
        }
        self.words_below(&self.r_min.pow(n))
    }

    /// Bounded search for `b, c ≤ search_bound` with `|r_j|^b = r_min^c`,
    /// preferring the smallest `c`.
    pub fn commensurability_exponents(&self, search_bound: u32) -> Commensurability {
        let bound = search_bound.max(1);
        let min_powers: Vec<FieldElement> = (0..=bound).map(|c| self.r_min.pow(c)).collect();
        let log_min = self.r_min.to_f64().ln();
        let mut out = Vec::with_capacity(self.maps.len());
        'maps: for (j, a) in self.abs_r.iter().enumerate() {
            if a == &self.r_min {
                out.push((1, 1));
                continue;
            }
            let log_a = a.to_f64().ln();
            for c in 1..=bound {
                for b in c..=bound {
                    let gap = b as f64 * log_a - c as f64 * log_min;
                    if gap.abs() > 1e-6 * (1.0 + (c as f64 * log_min).abs()) {
                        continue;
                    }
                    if a.pow(b) == min_powers[c as usize] {
                        out.push((b, c));
                        continue 'maps;
                    }
                }
            }
            return Commensurability::NotCommensurable { map: j };
        }
        Commensurability::Exponents(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::numberfield::NumberField;

    #[test]
    fn compose_golden_maps() {
        let ss = catalog::golden_ss_ratio(2, 5);
        let k = ss.field().clone();
        let r = k.generator();
        let m = ss.compose(&Word(vec![1])).unwrap();
        assert_eq!(m.r, r);
        assert_eq!(m.t, k.one() - &r);
        assert_eq!(ss.compose(&Word::empty()).unwrap(), AffineMap::identity(&k));

        let sr = catalog::golden_sr_ratio(2, 5);
        let m = sr.compose(&Word(vec![1, 1])).unwrap();
        assert_eq!(m.r, &r * &r);
        assert_eq!(m.t, k.one() - &r);
        assert_eq!(m.apply(&k.one()), &r * &r + k.one() - &r);
        assert!(ss.compose(&Word(vec![2])).is_err());
    }

    #[test]
    fn generation_zero_and_equicontractive() {
        let ifs = catalog::exreg_ratio(2, 5);
        assert_eq!(ifs.generation_words(0), vec![Word::empty()]);
        let g3 = ifs.generation_words(3);
        assert_eq!(g3.len(), 27);
        assert!(g3.iter().all(|w| w.len() == 3));
        assert!(g3.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn mixed_slopes_generation() {
        // slopes r and r^2 over the golden field
        let k = NumberField::golden();
        let r = k.generator();
        let maps = vec![
            AffineMap { r: r.clone(), t: k.zero() },
            AffineMap { r: &r * &r, t: k.one() - &r * &r },
        ];
        let ifs = Ifs::new(k.clone(), maps, vec![k.ratio(1, 2), k.ratio(1, 2)]).unwrap();
        assert_eq!(ifs.r_min(), &(&r * &r));
        // generation 2 means |r_σ| ≤ r^4
        let g2 = ifs.generation_words(2);
        assert!(g2.contains(&Word(vec![1, 1])));
        assert!(g2.contains(&Word(vec![0, 0, 0, 0])));
        assert!(!g2.contains(&Word(vec![0, 1])));
        // |r_(0,1)| = r^3 > r^4, so both one-letter extensions qualify
        assert!(g2.contains(&Word(vec![0, 1, 0])));
        assert!(g2.contains(&Word(vec![0, 1, 1])));
        // Λ_1 is bounded by r^2 and contains the mixed word of ratio r^3
        assert!(ifs.generation_words(1).contains(&Word(vec![0, 1])));
    }

    #[test]
    fn commensurability() {
        let k = NumberField::rationals();
        let third = AffineMap { r: k.ratio(1, 3), t: k.zero() };
        let ninth = AffineMap { r: k.ratio(1, 9), t: k.ratio(8, 9) };
        let ifs = Ifs::new(k.clone(), vec![third, ninth], vec![k.ratio(1, 2), k.ratio(1, 2)]).unwrap();
        assert_eq!(ifs.commensurability_exponents(8), Commensurability::Exponents(vec![(2, 1), (1, 1)]));

        let half = AffineMap { r: k.ratio(1, 2), t: k.zero() };
        let third = AffineMap { r: k.ratio(1, 3), t: k.ratio(2, 3) };
        let ifs = Ifs::new(k.clone(), vec![half, third], vec![k.ratio(1, 2), k.ratio(1, 2)]).unwrap();
        assert_eq!(ifs.commensurability_exponents(64), Commensurability::NotCommensurable { map: 0 });

        let ss = catalog::golden_ss_ratio(1, 3);
        assert_eq!(ss.commensurability_exponents(4), Commensurability::Exponents(vec![(1, 1), (1, 1)]));
    }

    #[test]
    fn invariants_are_enforced() {
        let k = NumberField::rationals();
        let a = AffineMap { r: k.ratio(1, 2), t: k.zero() };
        let b = AffineMap { r: k.ratio(1, 2), t: k.ratio(1, 2) };
        let bad = Ifs::new(k.clone(), vec![a.clone(), b.clone()], vec![k.ratio(1, 2), k.ratio(49, 100)]);
        assert_eq!(bad.unwrap_err(), IfsError::ProbabilitySum);
        let bad = Ifs::new(k.clone(), vec![a.clone(), b.clone()], vec![k.integer(1), k.zero()]);
        assert_eq!(bad.unwrap_err(), IfsError::NonPositiveProbability(1));
        let c = AffineMap { r: k.ratio(1, 4), t: k.ratio(1, 2) };
        let bad = Ifs::new(k.clone(), vec![a.clone(), c], vec![k.ratio(1, 2), k.ratio(1, 2)]);
        assert_eq!(bad.unwrap_err(), IfsError::HullNotUnitInterval);
        let d = AffineMap { r: k.integer(-1), t: k.integer(1) };
        let bad = Ifs::new(k.clone(), vec![a, d], vec![k.ratio(1, 2), k.ratio(1, 2)]);
        assert_eq!(bad.unwrap_err(), IfsError::NotContraction(1));
    }
}
