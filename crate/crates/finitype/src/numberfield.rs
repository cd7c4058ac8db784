//! Exact arithmetic in a real algebraic number field `Q(ρ)`.
//!
//! A field is given by the minimal polynomial of `ρ` together with a rational
//! interval isolating the real root we mean. Elements are coefficient vectors
//! over the rationals, always reduced modulo the minimal polynomial, so equality
//! of elements is equality of coefficient vectors. Signs are decided by
//! evaluating the element on a shrinking enclosure of `ρ` until the result
//! excludes zero; the zero element is recognised symbolically.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different number fields")]
    MixedFields,
    #[error("invalid minimal polynomial: {0}")]
    InvalidMinpoly(String),
    #[error("invalid root interval: {0}")]
    InvalidIsolation(String),
    #[error("element has {got} coefficients but the field has degree {degree}")]
    WrongLength { got: usize, degree: usize },
    #[error("cannot parse rational number {0:?}")]
    ParseRational(String),
}

/// Parses `"3/5"`, `"-2"` or a plain decimal such as `"0.25"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational, FieldError> {
    let s = text.trim();
    let err = || FieldError::ParseRational(text.to_string());
    if let Some((num, den)) = s.split_once('/') {
        let num = BigInt::from_str(num.trim()).map_err(|_| err())?;
        let den = BigInt::from_str(den.trim()).map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let negative = int.trim_start().starts_with('-');
        let int_part = if int.is_empty() || int == "-" || int == "+" {
            BigInt::zero()
        } else {
            BigInt::from_str(int).map_err(|_| err())?
        };
        let scale = num_traits::pow(BigInt::from(10u32), frac.len());
        let frac_part = BigInt::from_str(frac).map_err(|_| err())?;
        let magnitude = BigRational::new(int_part.abs() * &scale + frac_part, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    BigInt::from_str(s)
        .map(BigRational::from_integer)
        .map_err(|_| err())
}

/// Formats a rational as `"n"` or `"n/d"`.
pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

// ---------------------------------------------------------------------------
// dense univariate polynomials over Q, low degree first

type Poly = Vec<BigRational>;

fn trim(p: &mut Poly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_eval(p: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Poly {
    let n = a.len().max(b.len());
    let mut out: Poly = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
            x - y
        })
        .collect();
    trim(&mut out);
    out
}

/// Quotient and remainder of `a / b`; `b` must be nonzero and trimmed.
fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Poly, Poly) {
    let mut rem: Poly = a.to_vec();
    trim(&mut rem);
    let db = b.len() - 1;
    let lead = b[db].clone();
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let c = rem.last().unwrap() / &lead;
        for (i, bc) in b.iter().enumerate() {
            rem[shift + i] -= &c * bc;
        }
        quot[shift] = c;
        rem.pop();
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

fn poly_derivative(p: &[BigRational]) -> Poly {
    let mut out: Poly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
        .collect();
    trim(&mut out);
    out
}

fn poly_gcd(a: &[BigRational], b: &[BigRational]) -> Poly {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = poly_divrem(&x, &y);
        x = y;
        y = r;
    }
    x
}

fn sign_of(q: &BigRational) -> i8 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

fn sturm_chain(p: &[BigRational]) -> Vec<Poly> {
    let mut chain = vec![p.to_vec(), poly_derivative(p)];
    loop {
        let n = chain.len();
        if chain[n - 1].is_empty() {
            chain.pop();
            break;
        }
        let (_, r) = poly_divrem(&chain[n - 2], &chain[n - 1]);
        if r.is_empty() {
            break;
        }
        chain.push(r.into_iter().map(|c| -c).collect());
    }
    chain
}

fn sign_variations(chain: &[Poly], x: &BigRational) -> usize {
    let signs: Vec<i8> = chain
        .iter()
        .map(|p| sign_of(&poly_eval(p, x)))
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

// ---------------------------------------------------------------------------
// rational interval arithmetic used for sign determination

#[derive(Debug, Clone)]
struct RatInterval {
    lo: BigRational,
    hi: BigRational,
}

impl RatInterval {
    fn point(x: BigRational) -> Self {
        RatInterval {
            lo: x.clone(),
            hi: x,
        }
    }

    fn add_scalar(&self, c: &BigRational) -> Self {
        RatInterval {
            lo: &self.lo + c,
            hi: &self.hi + c,
        }
    }

    fn mul(&self, other: &RatInterval) -> Self {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().unwrap().clone();
        let hi = products.iter().max().unwrap().clone();
        RatInterval { lo, hi }
    }
}

/// A certified rational enclosure `[lo, hi]` of a real number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: BigRational,
    pub hi: BigRational,
}

fn f64_down(q: &BigRational) -> f64 {
    let v = q.to_f64().unwrap_or(f64::NAN);
    match BigRational::from_float(v) {
        Some(exact) if &exact > q => v.next_down(),
        _ => v,
    }
}

fn f64_up(q: &BigRational) -> f64 {
    let v = q.to_f64().unwrap_or(f64::NAN);
    match BigRational::from_float(v) {
        Some(exact) if &exact < q => v.next_up(),
        _ => v,
    }
}

impl Enclosure {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    /// Lower end rounded towards minus infinity.
    pub fn lo_f64(&self) -> f64 {
        f64_down(&self.lo)
    }

    /// Upper end rounded towards plus infinity.
    pub fn hi_f64(&self) -> f64 {
        f64_up(&self.hi)
    }

    pub fn mid_f64(&self) -> f64 {
        ((&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2)))
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }
}

// ---------------------------------------------------------------------------

struct FieldInner {
    minpoly: Poly,
    isolation: (BigRational, BigRational),
    lo_sign: i8,
    root: Mutex<(BigRational, BigRational)>,
    symbol: String,
}

/// A real number field `Q(ρ)`, `ρ` being the unique root of the minimal
/// polynomial inside the isolating interval.
#[derive(Clone)]
pub struct NumberField(Arc<FieldInner>);

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NumberField")
            .field(
                "minpoly",
                &self.0.minpoly.iter().map(format_rational).collect::<Vec<_>>(),
            )
            .field(
                "root_interval",
                &(
                    format_rational(&self.0.isolation.0),
                    format_rational(&self.0.isolation.1),
                ),
            )
            .finish()
    }
}

impl NumberField {
    /// Builds `Q(ρ)` from the minimal polynomial (coefficients low degree first)
    /// and an interval `[lo, hi]` isolating `ρ`. The interval is verified with a
    /// Sturm sequence; irreducibility is only sanity-checked via square-freeness.
    pub fn new(
        minpoly: Vec<BigRational>,
        lo: BigRational,
        hi: BigRational,
    ) -> Result<NumberField, FieldError> {
        let mut p = minpoly;
        trim(&mut p);
        if p.len() < 2 {
            return Err(FieldError::InvalidMinpoly(
                "degree must be at least 1".into(),
            ));
        }
        let lead = p.last().unwrap().clone();
        let p: Poly = p.into_iter().map(|c| c / &lead).collect();
        if lo >= hi {
            return Err(FieldError::InvalidIsolation(
                "lower end must be below upper end".into(),
            ));
        }
        let g = poly_gcd(&p, &poly_derivative(&p));
        if g.len() > 1 {
            return Err(FieldError::InvalidMinpoly(
                "polynomial is not square-free".into(),
            ));
        }
        let s_lo = sign_of(&poly_eval(&p, &lo));
        let s_hi = sign_of(&poly_eval(&p, &hi));
        if s_lo == 0 || s_hi == 0 || s_lo == s_hi {
            return Err(FieldError::InvalidIsolation(
                "minimal polynomial must take strictly opposite signs at the interval ends".into(),
            ));
        }
        let chain = sturm_chain(&p);
        let roots = sign_variations(&chain, &lo) as i64 - sign_variations(&chain, &hi) as i64;
        if roots != 1 {
            return Err(FieldError::InvalidIsolation(format!(
                "interval contains {roots} real roots, expected exactly one"
            )));
        }
        let root = if p.len() == 2 {
            let r = -&p[0];
            (r.clone(), r)
        } else {
            (lo.clone(), hi.clone())
        };
        Ok(NumberField(Arc::new(FieldInner {
            minpoly: p,
            isolation: (lo, hi),
            lo_sign: s_lo,
            root: Mutex::new(root),
            symbol: "ρ".to_string(),
        })))
    }

    /// Parses the textual form used in spec files.
    pub fn from_strings(minpoly: &[String], interval: (&str, &str)) -> Result<NumberField, FieldError> {
        let coeffs = minpoly
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>, _>>()?;
        NumberField::new(coeffs, parse_rational(interval.0)?, parse_rational(interval.1)?)
    }

    /// The rationals, presented as `Q(ρ)` with `ρ = 0`.
    pub fn rationals() -> NumberField {
        NumberField::new(
            vec![BigRational::zero(), BigRational::one()],
            BigRational::from_integer((-1).into()),
            BigRational::one(),
        )
        .expect("x has a single root in [-1, 1]")
    }

    /// `Q(r)` with `r = (√5 − 1)/2`, the root of `r² + r − 1` in `[3/5, 2/3]`.
    pub fn golden() -> NumberField {
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        NumberField::new(vec![q(-1, 1), q(1, 1), q(1, 1)], q(3, 5), q(2, 3))
            .expect("golden mean field is well formed")
            .with_symbol("r")
    }

    /// Renames the generator used when printing elements.
    pub fn with_symbol(self, symbol: &str) -> NumberField {
        let inner = &self.0;
        let root = inner.root.lock().unwrap().clone();
        NumberField(Arc::new(FieldInner {
            minpoly: inner.minpoly.clone(),
            isolation: inner.isolation.clone(),
            lo_sign: inner.lo_sign,
            root: Mutex::new(root),
            symbol: symbol.to_string(),
        }))
    }

    pub fn degree(&self) -> usize {
        self.0.minpoly.len() - 1
    }

    /// Monic minimal polynomial, low degree first.
    pub fn minpoly(&self) -> &[BigRational] {
        &self.0.minpoly
    }

    pub fn isolation(&self) -> (&BigRational, &BigRational) {
        (&self.0.isolation.0, &self.0.isolation.1)
    }

    pub fn symbol(&self) -> &str {
        &self.0.symbol
    }

    pub fn same_field(&self, other: &NumberField) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.minpoly == other.0.minpoly && self.0.isolation == other.0.isolation)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            field: self.clone(),
            coeffs: vec![BigRational::zero(); self.degree()],
        }
    }

    pub fn one(&self) -> FieldElement {
        self.rational(BigRational::one())
    }

    pub fn rational(&self, q: BigRational) -> FieldElement {
        let mut coeffs = vec![BigRational::zero(); self.degree()];
        coeffs[0] = q;
        FieldElement {
            field: self.clone(),
            coeffs,
        }
    }

    pub fn integer(&self, n: i64) -> FieldElement {
        self.rational(BigRational::from_integer(n.into()))
    }

    pub fn ratio(&self, num: i64, den: i64) -> FieldElement {
        self.rational(BigRational::new(num.into(), den.into()))
    }

    /// The generator `ρ` itself.
    pub fn generator(&self) -> FieldElement {
        let d = self.degree();
        if d == 1 {
            return self.rational(-self.0.minpoly[0].clone());
        }
        let mut coeffs = vec![BigRational::zero(); d];
        coeffs[1] = BigRational::one();
        FieldElement {
            field: self.clone(),
            coeffs,
        }
    }

    /// Builds an element from arbitrary-length coefficients, reducing them.
    pub fn element(&self, coeffs: Vec<BigRational>) -> FieldElement {
        let mut p = coeffs;
        trim(&mut p);
        self.reduce(p)
    }

    /// Builds an element from exactly `degree` coefficients.
    pub fn element_exact(&self, coeffs: Vec<BigRational>) -> Result<FieldElement, FieldError> {
        if coeffs.len() != self.degree() {
            return Err(FieldError::WrongLength {
                got: coeffs.len(),
                degree: self.degree(),
            });
        }
        Ok(FieldElement {
            field: self.clone(),
            coeffs,
        })
    }

    pub fn parse_element(&self, coeffs: &[String]) -> Result<FieldElement, FieldError> {
        let parsed = coeffs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.element(parsed))
    }

    fn reduce(&self, mut p: Poly) -> FieldElement {
        let m = &self.0.minpoly;
        let d = m.len() - 1;
        while p.len() > d {
            let c = p.pop().unwrap();
            if c.is_zero() {
                continue;
            }
            let shift = p.len() - d;
            for (i, mc) in m.iter().take(d).enumerate() {
                p[shift + i] -= &c * mc;
            }
        }
        p.resize(d, BigRational::zero());
        FieldElement {
            field: self.clone(),
            coeffs: p,
        }
    }

    /// Enclosure of `ρ` of width at most `2^-bits`.
    fn root_box(&self, bits: u32) -> (BigRational, BigRational) {
        let target = BigRational::new(BigInt::one(), BigInt::one() << bits);
        let mut guard = self.0.root.lock().unwrap();
        let two = BigRational::from_integer(2.into());
        while &guard.1 - &guard.0 > target {
            let mid = (&guard.0 + &guard.1) / &two;
            let s = sign_of(&poly_eval(&self.0.minpoly, &mid));
            if s == 0 {
                *guard = (mid.clone(), mid);
            } else if s == self.0.lo_sign {
                guard.0 = mid;
            } else {
                guard.1 = mid;
            }
        }
        guard.clone()
    }

    fn evaluate(&self, coeffs: &[BigRational], bits: u32) -> RatInterval {
        let (lo, hi) = self.root_box(bits);
        let x = RatInterval { lo, hi };
        let mut acc = RatInterval::point(coeffs.last().cloned().unwrap_or_else(BigRational::zero));
        for c in coeffs.iter().rev().skip(1) {
            acc = acc.mul(&x).add_scalar(c);
        }
        acc
    }
}

/// An element `c₀ + c₁ρ + … + c_{d−1}ρ^{d−1}` of a [`NumberField`].
#[derive(Clone)]
pub struct FieldElement {
    field: NumberField,
    coeffs: Vec<BigRational>,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = self.field.symbol();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag_text = format_rational(&mag);
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag_text}")?,
                (1, true) => write!(f, "{sym}")?,
                (1, false) => write!(f, "{mag_text}{sym}")?,
                (_, true) => write!(f, "{sym}^{i}")?,
                (_, false) => write!(f, "{mag_text}{sym}^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl FieldElement {
    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rational).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// The rational value, when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.coeffs[1..]
            .iter()
            .all(|c| c.is_zero())
            .then(|| &self.coeffs[0])
    }

    fn check(&self, other: &FieldElement) -> Result<(), FieldError> {
        if self.field.same_field(&other.field) {
            Ok(())
        } else {
            Err(FieldError::MixedFields)
        }
    }

    pub fn try_add(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(FieldElement {
            field: self.field.clone(),
            coeffs,
        })
    }

    pub fn try_sub(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(FieldElement {
            field: self.field.clone(),
            coeffs,
        })
    }

    pub fn try_mul(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(other)?;
        if self.field.degree() == 1 {
            return Ok(self.field.rational(&self.coeffs[0] * &other.coeffs[0]));
        }
        let mut a = self.coeffs.clone();
        let mut b = other.coeffs.clone();
        trim(&mut a);
        trim(&mut b);
        Ok(self.field.reduce(poly_mul(&a, &b)))
    }

    pub fn try_div(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(other)?;
        let inv = other.inverse()?;
        self.try_mul(&inv)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    pub fn inverse(&self) -> Result<FieldElement, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if self.field.degree() == 1 {
            return Ok(self.field.rational(self.coeffs[0].recip()));
        }
        let m = self.field.minpoly().to_vec();
        let mut a = self.coeffs.clone();
        trim(&mut a);
        // invariant: old_s * a ≡ old_r (mod m)
        let (mut old_r, mut r) = (a, m);
        let (mut old_s, mut s): (Poly, Poly) = (vec![BigRational::one()], Vec::new());
        while !r.is_empty() {
            let (q, rem) = poly_divrem(&old_r, &r);
            old_r = std::mem::replace(&mut r, rem);
            let next_s = poly_sub(&old_s, &poly_mul(&q, &s));
            old_s = std::mem::replace(&mut s, next_s);
        }
        if old_r.len() != 1 {
            return Err(FieldError::InvalidMinpoly(
                "element shares a factor with the minimal polynomial".into(),
            ));
        }
        let scale = old_r[0].recip();
        let inv: Poly = old_s.into_iter().map(|c| c * &scale).collect();
        Ok(self.field.element(inv))
    }

    pub fn pow(&self, exp: u32) -> FieldElement {
        let mut result = self.field.one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn scale(&self, q: &BigRational) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// Sign of the real number this element denotes.
    pub fn sign(&self) -> i8 {
        if self.is_zero() {
            return 0;
        }
        if let Some(q) = self.as_rational() {
            return sign_of(q);
        }
        let mut bits = 64u32;
        loop {
            let iv = self.field.evaluate(&self.coeffs, bits);
            if iv.lo.is_positive() {
                return 1;
            }
            if iv.hi.is_negative() {
                return -1;
            }
            bits = bits.saturating_mul(2);
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    pub fn abs(&self) -> FieldElement {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Compares the real values of two elements of the same field.
    pub fn cmp_value(&self, other: &FieldElement) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        match (self - other).sign() {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        }
    }

    pub fn max_value(self, other: FieldElement) -> FieldElement {
        if other.cmp_value(&self) == Ordering::Greater {
            other
        } else {
            self
        }
    }

    pub fn min_value(self, other: FieldElement) -> FieldElement {
        if other.cmp_value(&self) == Ordering::Less {
            other
        } else {
            self
        }
    }

    /// Enclosure of width at most `2^(2 − precision_bits) · max(1, |x|)`.
    pub fn to_enclosure(&self, precision_bits: u32) -> Enclosure {
        let bits = precision_bits.max(16);
        if let Some(q) = self.as_rational() {
            return Enclosure {
                lo: q.clone(),
                hi: q.clone(),
            };
        }
        let target = BigRational::new(BigInt::from(4), BigInt::one() << bits);
        let mut work = bits + 8;
        loop {
            let iv = self.field.evaluate(&self.coeffs, work);
            if &iv.hi - &iv.lo <= target {
                return Enclosure { lo: iv.lo, hi: iv.hi };
            }
            work += bits;
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_enclosure(64).mid_f64()
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).expect("mixed-field arithmetic")
            }
        }
        impl $trait<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$checked(&rhs).expect("mixed-field arithmetic")
            }
        }
        impl $trait<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                (&self).$checked(rhs).expect("mixed-field arithmetic")
            }
        }
        impl $trait<FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                self.$checked(&rhs).expect("mixed-field arithmetic")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Div<&FieldElement> for &FieldElement {
    type Output = FieldElement;
    fn div(self, rhs: &FieldElement) -> FieldElement {
        self.try_div(rhs).expect("division by zero or mixed fields")
    }
}

impl Div<FieldElement> for FieldElement {
    type Output = FieldElement;
    fn div(self, rhs: FieldElement) -> FieldElement {
        &self / &rhs
    }
}

impl Div<&FieldElement> for FieldElement {
    type Output = FieldElement;
    fn div(self, rhs: &FieldElement) -> FieldElement {
        &self / rhs
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn golden_relation() {
        let k = NumberField::golden();
        let r = k.generator();
        assert_eq!(&r * &r, k.one() - &r);
        assert_eq!(&r * &(&r * &r), k.integer(2) * &r - k.one());
        let x = k.element(vec![q(1, 3), q(-2, 7)]);
        assert_eq!(&x + &k.zero(), x);
        assert_eq!((&r * &r + &r - k.one()).sign(), 0);
    }

    #[test]
    fn signs() {
        let k = NumberField::golden();
        let r = k.generator();
        assert_eq!(k.zero().sign(), 0);
        assert_eq!((&r - &k.ratio(1, 2)).sign(), 1);
        assert_eq!((&k.ratio(5, 8) - &r).sign(), 1);
        // 0.6180339887 vs 0.6180339888
        assert_eq!((&r - &k.ratio(6180339887, 10_000_000_000)).sign(), 1);
        assert_eq!((&r - &k.ratio(6180339888, 10_000_000_000)).sign(), -1);
    }

    #[test]
    fn enclosures_of_golden_values() {
        let k = NumberField::golden();
        let r = k.generator();
        let e = r.to_enclosure(53);
        assert!(e.lo_f64() <= 0.618_033_988_749_894_9 && 0.618_033_988_749_894_8 <= e.hi_f64());
        assert!(e.width() <= BigRational::new(4.into(), BigInt::one() << 53));
        let r2 = (&r * &r).to_enclosure(53);
        assert!((r2.mid_f64() - 0.381_966_011_250_105_1).abs() < 1e-15);
        let one = k.one().to_enclosure(53);
        assert_eq!(one.lo, one.hi);
    }

    #[test]
    fn division() {
        let k = NumberField::golden();
        let r = k.generator();
        let y = k.element(vec![q(3, 2), q(-1, 5)]);
        let x = k.element(vec![q(-7, 3), q(2, 1)]);
        assert_eq!(&(&x * &y) / &y, x);
        assert_eq!(r.inverse().unwrap(), k.one() + &r);
        assert_eq!(k.one().try_div(&k.zero()), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let a = NumberField::golden().one();
        let b = NumberField::rationals().one();
        assert_eq!(a.try_add(&b), Err(FieldError::MixedFields));
    }

    #[test]
    fn isolation_is_verified() {
        // both roots of x^2 - 2 lie in [-2, 2]
        let err = NumberField::new(vec![q(-2, 1), q(0, 1), q(1, 1)], q(-2, 1), q(2, 1));
        assert!(err.is_err());
        let ok = NumberField::new(vec![q(-2, 1), q(0, 1), q(1, 1)], q(1, 1), q(2, 1)).unwrap();
        let s = ok.generator();
        assert_eq!(&s * &s, ok.integer(2));
        assert!((s.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
        // not square-free
        assert!(NumberField::new(vec![q(1, 1), q(-2, 1), q(1, 1)], q(0, 1), q(2, 1)).is_err());
    }

    #[test]
    fn cubic_field() {
        // x^3 - x - 1, plastic number ≈ 1.3247
        let k = NumberField::new(vec![q(-1, 1), q(-1, 1), q(0, 1), q(1, 1)], q(1, 1), q(3, 2)).unwrap();
        let p = k.generator();
        assert_eq!(p.pow(3), &p + &k.one());
        assert!((p.to_f64() - 1.324_717_957_244_746).abs() < 1e-14);
        let x = k.element(vec![q(2, 1), q(-1, 3), q(5, 7)]);
        assert_eq!(&x * &x.inverse().unwrap(), k.one());
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3/5").unwrap(), q(3, 5));
        assert_eq!(parse_rational("-0.25").unwrap(), q(-1, 4));
        assert_eq!(parse_rational("7").unwrap(), q(7, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        let k = NumberField::golden();
        assert_eq!(format!("{}", k.one() - k.generator()), "1 - r");
    }
}
