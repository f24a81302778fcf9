//! Rational scalars and small helpers around [`BigRational`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number. `BigRational` keeps itself in canonical form
/// (positive denominator, reduced), which is all we rely on.
pub type Rat = BigRational;

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn big(n: &BigInt) -> Rat {
    Rat::from_integer(n.clone())
}

pub fn to_f64(r: &Rat) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Large numerator or denominator: shift both down before dividing.
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift_n = (nb - 900).max(0) as usize;
    let shift_d = (db - 900).max(0) as usize;
    let n = (r.numer() >> shift_n).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> shift_d).to_f64().unwrap_or(1.0);
    n / d * 2f64.powi((shift_n as i64 - shift_d as i64) as i32)
}

/// Exact conversion of a finite double.
pub fn from_f64(x: f64) -> Rat {
    Rat::from_float(x).unwrap_or_else(Rat::zero)
}

/// Best rational approximation of `x` with denominator at most `max_den`
/// (continued-fraction convergents).
pub fn approx_f64(x: f64, max_den: i64) -> Rat {
    if !x.is_finite() {
        return Rat::zero();
    }
    let neg = x < 0.0;
    let mut y = x.abs();
    let (mut p0, mut q0, mut p1, mut q1): (i128, i128, i128, i128) = (0, 1, 1, 0);
    for _ in 0..64 {
        let a = y.floor();
        if a > 1e18 {
            break;
        }
        let ai = a as i128;
        let p2 = ai * p1 + p0;
        let q2 = ai * q1 + q0;
        if q2 > max_den as i128 {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let frac = y - a;
        if frac < 1e-15 {
            break;
        }
        y = 1.0 / frac;
    }
    if q1 == 0 {
        return Rat::zero();
    }
    let r = Rat::new(BigInt::from(p1), BigInt::from(q1));
    if neg {
        -r
    } else {
        r
    }
}

/// Round down onto the dyadic grid 2^-bits.
pub fn floor_dyadic(r: &Rat, bits: u32) -> Rat {
    let scale = BigInt::one() << bits;
    let scaled = (r * big(&scale)).floor();
    scaled / big(&scale)
}

pub fn ceil_dyadic(r: &Rat, bits: u32) -> Rat {
    -floor_dyadic(&-r.clone(), bits)
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rat::from_integer(n))
        }
    }
}

pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Scale a rational vector to the primitive integer vector on the same ray.
/// Returns `None` for the zero vector.
pub fn primitive(v: &[Rat]) -> Option<Vec<BigInt>> {
    if v.iter().all(Zero::is_zero) {
        return None;
    }
    let mut l = BigInt::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * big(&l)).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    Some(ints.into_iter().map(|x| x / &g).collect())
}

/// Same as [`primitive`] but returned as rationals.
pub fn normalize_ray(v: &[Rat]) -> Option<Vec<Rat>> {
    primitive(v).map(|p| p.iter().map(big).collect())
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub fn sign(r: &Rat) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

pub fn int_vec(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| int(x)).collect()
}

/// Floor of `r` as an `i64`.
pub fn floor_i64(r: &Rat) -> i64 {
    r.floor().to_integer().to_i64().expect("integer out of i64 range")
}

pub fn ceil_i64(r: &Rat) -> i64 {
    r.ceil().to_integer().to_i64().expect("integer out of i64 range")
}

/// Nearest integer, ties towards +infinity.
pub fn round_i64(r: &Rat) -> i64 {
    floor_i64(&(r + rat(1, 2)))
}

/// Lower bound on exp(y), exact rational.
pub fn exp_lower(y: &Rat) -> Rat {
    if y.is_negative() {
        let up = exp_upper(&-y.clone());
        return floor_dyadic(&(Rat::one() / up), 200);
    }
    let (z, k) = reduce_arg(y);
    // All Taylor terms are positive for z >= 0, so partial sums bound from below.
    let mut sum = Rat::zero();
    let mut term = Rat::one();
    for i in 1..=40 {
        sum += &term;
        term = floor_dyadic(&(&term * &z / int(i)), 220);
    }
    let mut r = floor_dyadic(&sum, 200);
    for _ in 0..k {
        r = floor_dyadic(&(&r * &r), 200);
    }
    r
}

/// Upper bound on exp(y), exact rational.
pub fn exp_upper(y: &Rat) -> Rat {
    if y.is_negative() {
        let lo = exp_lower(&-y.clone());
        return ceil_dyadic(&(Rat::one() / lo), 200);
    }
    let (z, k) = reduce_arg(y);
    // z <= 1/2: the tail after N terms is at most 2 * z^N / N!.
    let mut sum = Rat::zero();
    let mut term = Rat::one();
    for i in 1..=40 {
        sum += &term;
        term = ceil_dyadic(&(&term * &z / int(i)), 220);
    }
    sum += &term * int(2);
    let mut r = ceil_dyadic(&sum, 200);
    for _ in 0..k {
        r = ceil_dyadic(&(&r * &r), 200);
    }
    r
}

fn reduce_arg(y: &Rat) -> (Rat, u32) {
    let mut z = y.clone();
    let mut k = 0;
    let half = rat(1, 2);
    while z > half {
        z /= int(2);
        k += 1;
    }
    (z, k)
}
