//! Dense univariate polynomials over Q and Sturm-sequence root isolation.

use num_traits::{One, Signed, Zero};

use crate::qcore::rat::{int, rat, Rat};

/// Coefficients from the constant term upwards, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(Vec<Rat>);

impl Poly {
    pub fn new(mut c: Vec<Rat>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Poly(c)
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&x| int(x)).collect())
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with `-1` for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn lead(&self) -> Rat {
        self.0.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.0.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * int(i as i64)).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly(Vec::new());
        }
        let mut c = vec![Rat::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }

    /// Remainder of division by a nonzero polynomial.
    pub fn rem(&self, m: &Poly) -> Poly {
        let dm = m.0.len();
        let mut r = self.0.clone();
        let lead = m.lead();
        while r.len() >= dm {
            let q = r.last().expect("nonempty") / &lead;
            let shift = r.len() - dm;
            for (i, c) in m.0.iter().enumerate() {
                r[shift + i] -= &q * c;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        Poly(r)
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c.clone()).collect())
    }

    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }

    /// Sturm sequence `p, p′, −rem(p, p′), …`.
    pub fn sturm(&self) -> Vec<Poly> {
        let mut s = vec![self.clone(), self.derivative()];
        while !s.last().expect("nonempty").is_zero() {
            let k = s.len();
            let r = s[k - 2].rem(&s[k - 1]).neg();
            s.push(r);
        }
        s.pop();
        s
    }

    /// `1 + max |a_i / a_n|`: all real roots lie strictly inside.
    pub fn root_bound(&self) -> Rat {
        let l = self.lead().abs();
        Rat::one() + self.0[..self.0.len().saturating_sub(1)].iter().map(|c| c.abs() / &l).max().unwrap_or_else(Rat::zero)
    }
}

fn sign_changes(seq: &[Poly], x: &Rat) -> usize {
    let mut last = 0i8;
    let mut n = 0;
    for p in seq {
        let v = p.eval(x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                n += 1;
            }
            last = s;
        }
    }
    n
}

/// Number of distinct real roots in `(a, b]`.
pub fn count_roots(seq: &[Poly], a: &Rat, b: &Rat) -> usize {
    sign_changes(seq, a) - sign_changes(seq, b)
}

/// Disjoint intervals `(a, b]`, each containing exactly one real root of the
/// squarefree polynomial `p`, in increasing order.
pub fn isolate_roots(p: &Poly) -> Vec<(Rat, Rat)> {
    let seq = p.sturm();
    let bound = p.root_bound();
    let mut out = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((a, b)) = stack.pop() {
        match count_roots(&seq, &a, &b) {
            0 => {}
            1 => out.push((a, b)),
            _ => {
                let m = (&a + &b) * rat(1, 2);
                stack.push((a, m.clone()));
                stack.push((m, b));
            }
        }
    }
    out.sort();
    out
}

/// Halves `(a, b]` keeping the unique root of the Sturm sequence's head.
pub fn bisect(seq: &[Poly], a: &Rat, b: &Rat) -> (Rat, Rat) {
    let m = (a + b) * rat(1, 2);
    if count_roots(seq, a, &m) == 1 {
        (a.clone(), m)
    } else {
        (m, b.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let p = Poly::from_i64(&[-1, 0, 1]);
        let q = Poly::from_i64(&[1, 1]);
        assert_eq!(p.rem(&q), Poly::new(vec![]));
        assert_eq!(p.gcd(&q).degree(), 1);
        assert_eq!(p.mul(&q), Poly::from_i64(&[-1, -1, 1, 1]));
        assert_eq!(p.derivative(), Poly::from_i64(&[0, 2]));
        assert_eq!(p.eval(&int(3)), int(8));
    }

    #[test]
    fn isolation() {
        let p = Poly::from_i64(&[1, -4, 1, 1]);
        let roots = isolate_roots(&p);
        assert_eq!(roots.len(), 3);
        let q = Poly::from_i64(&[1, 0, 1]);
        assert!(isolate_roots(&q).is_empty());
    }
}
