//! Dense univariate polynomials over the rationals, and elementary
//! symmetric polynomials evaluated at (affine) arguments.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::arith::Rational;
use crate::error::{Error, Result};

/// Polynomial with ascending coefficients; no trailing zeros, and the zero
/// polynomial is the empty list.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "Vec<Rational>", into = "Vec<Rational>")]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl From<Vec<Rational>> for Polynomial {
    fn from(coeffs: Vec<Rational>) -> Self {
        Polynomial::new(coeffs)
    }
}

impl From<Polynomial> for Vec<Rational> {
    fn from(p: Polynomial) -> Self {
        p.coeffs
    }
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Polynomial::new(vec![c])
    }

    /// `a + b·t`
    pub fn linear(a: Rational, b: Rational) -> Self {
        Polynomial::new(vec![a, b])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `t^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coefficient(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * t + c)
    }

    pub fn scale(&self, factor: &Rational) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from(k as i64))
                .collect(),
        )
    }

    /// `p(t + c)`, by Horner's rule in the shifted variable.
    pub fn shift(&self, c: &Rational) -> Polynomial {
        let arg = Polynomial::linear(c.clone(), Rational::one());
        self.coeffs
            .iter()
            .rev()
            .fold(Polynomial::zero(), |acc, coef| {
                &(&acc * &arg) + &Polynomial::constant(coef.clone())
            })
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() {
                ("-", c.abs())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let unit = mag == Rational::one();
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !unit {
                        write!(f, "{mag}*")?;
                    }
                    if k == 1 {
                        f.write_str("t")?;
                    } else {
                        write!(f, "t^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// `s_j(values)`, the `j`-th elementary symmetric polynomial; `s_0 = 1`.
pub fn elementary_symmetric(j: usize, values: &[Rational]) -> Result<Rational> {
    if j > values.len() {
        return Err(Error::Domain(format!(
            "s_{j} needs at least {j} arguments, got {}",
            values.len()
        )));
    }
    // e[m] accumulates s_m of the prefix seen so far
    let mut e = vec![Rational::zero(); j + 1];
    e[0] = Rational::one();
    for y in values {
        for m in (1..=j).rev() {
            let term = &e[m - 1] * y;
            e[m] += term;
        }
    }
    Ok(e.swap_remove(j))
}

/// `s_j(o_1 + slope·t, …, o_n + slope·t)` expanded as a polynomial in `t`.
pub fn symmetric_poly_in_t(j: usize, offsets: &[Rational], slope: &Rational) -> Result<Polynomial> {
    if j > offsets.len() {
        return Err(Error::Domain(format!(
            "s_{j} needs at least {j} arguments, got {}",
            offsets.len()
        )));
    }
    let mut e = vec![Polynomial::zero(); j + 1];
    e[0] = Polynomial::constant(Rational::one());
    for o in offsets {
        let arg = Polynomial::linear(o.clone(), slope.clone());
        for m in (1..=j).rev() {
            let term = &e[m - 1] * &arg;
            e[m] = &e[m] + &term;
        }
    }
    Ok(e.swap_remove(j))
}

/// Generalised binomial `C(x + n, n) = (x+1)(x+2)⋯(x+n)/n!`.
pub fn binomial_shifted(x: &Rational, n: usize) -> Rational {
    let mut acc = Rational::one();
    for i in 1..=n {
        let i = Rational::from(i as i64);
        acc = acc * (x + &i) / i;
    }
    acc
}

/// `C(n, k)` as a rational.
pub fn binomial(n: usize, k: usize) -> Rational {
    if k > n {
        return Rational::zero();
    }
    binomial_shifted(&Rational::from((n - k) as i64), k)
}

pub fn factorial(n: usize) -> Rational {
    (1..=n).map(|i| Rational::from(i as i64)).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn ints(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| Rational::from(x)).collect()
    }

    /// Sum over all `j`-subsets, straight from the definition.
    fn symmetric_by_subsets(j: usize, values: &[Rational]) -> Rational {
        let n = values.len();
        (0u32..1 << n)
            .filter(|mask| mask.count_ones() as usize == j)
            .map(|mask| {
                (0..n)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| values[i].clone())
                    .product::<Rational>()
            })
            .sum()
    }

    #[test]
    fn elementary_symmetric_examples() {
        assert_eq!(elementary_symmetric(0, &ints(&[4, 5])).unwrap(), q("1"));
        assert_eq!(elementary_symmetric(2, &ints(&[1, 2, 3])).unwrap(), q("11"));
        assert_eq!(elementary_symmetric(3, &ints(&[1, 2, 3])).unwrap(), q("6"));
        assert!(elementary_symmetric(4, &ints(&[1, 2, 3])).is_err());
    }

    #[test]
    fn symmetric_poly_examples() {
        let (a, b, s) = (q("2/3"), q("-5"), q("7/2"));
        let p = symmetric_poly_in_t(1, &[a.clone(), b.clone()], &s).unwrap();
        assert_eq!(p, Polynomial::new(vec![&a + &b, q("2") * &s]));
        let p = symmetric_poly_in_t(0, &ints(&[1, 2, 3]), &s).unwrap();
        assert_eq!(p, Polynomial::constant(q("1")));
        let p = symmetric_poly_in_t(2, &ints(&[0, 0]), &q("1")).unwrap();
        assert_eq!(p, Polynomial::new(ints(&[0, 0, 1])));
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(4, 2), q("6"));
        assert_eq!(binomial(3, 0), q("1"));
        assert_eq!(binomial_shifted(&q("-1"), 3), q("0"));
        // C(x+3, 3) at x = -5: (-4)(-3)(-2)/6 = -4
        assert_eq!(binomial_shifted(&q("-5"), 3), q("-4"));
        assert_eq!(binomial_shifted(&q("1/2"), 1), q("3/2"));
    }

    #[test]
    fn shift_and_derivative() {
        let p = Polynomial::new(ints(&[1, 2, 3]));
        assert_eq!(p.shift(&q("1")), Polynomial::new(ints(&[6, 8, 3])));
        assert_eq!(p.derivative(), Polynomial::new(ints(&[2, 6])));
        assert_eq!(
            Polynomial::constant(q("5")).derivative(),
            Polynomial::zero()
        );
        assert_eq!(p.to_string(), "3*t^2 + 2*t + 1");
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-40i64..40, 1i64..9).prop_map(|(n, d)| Rational::frac(n, d))
    }

    proptest! {
        #[test]
        fn symmetric_matches_subset_sum(values in proptest::collection::vec(arb_rational(), 0..6), j in 0usize..6) {
            if j <= values.len() {
                prop_assert_eq!(elementary_symmetric(j, &values).unwrap(), symmetric_by_subsets(j, &values));
            }
        }

        #[test]
        fn symmetric_poly_evaluates_pointwise(
            offsets in proptest::collection::vec(arb_rational(), 0..5),
            slope in arb_rational(),
            t in arb_rational(),
            j in 0usize..5,
        ) {
            if j <= offsets.len() {
                let p = symmetric_poly_in_t(j, &offsets, &slope).unwrap();
                let args: Vec<Rational> = offsets.iter().map(|o| o + &(&slope * &t)).collect();
                prop_assert_eq!(p.eval(&t), elementary_symmetric(j, &args).unwrap());
                prop_assert!(p.degree().is_none_or(|deg| deg <= j));
            }
        }

        #[test]
        fn shift_evaluates_pointwise(cs in proptest::collection::vec(arb_rational(), 0..5), c in arb_rational(), t in arb_rational()) {
            let p = Polynomial::new(cs);
            prop_assert_eq!(p.shift(&c).eval(&t), p.eval(&(&t + &c)));
        }

        #[test]
        fn binomial_expansion_identity(x in arb_rational(), y in arb_rational(), n in 0usize..5) {
            // C(x+y+n, n) = (1/n!) Σ_k x^k s_{n-k}(y+1, …, y+n)
            let shifted: Vec<Rational> = (1..=n).map(|i| &y + Rational::from(i as i64)).collect();
            let rhs: Rational = (0..=n)
                .map(|k| x.pow(k as u32) * elementary_symmetric(n - k, &shifted).unwrap())
                .sum::<Rational>() / factorial(n);
            prop_assert_eq!(binomial_shifted(&(&x + &y), n), rhs);
        }
    }
}
