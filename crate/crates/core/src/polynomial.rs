//! Sparse multivariate polynomials with exact rational coefficients.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num::rational::BigRational;
use num::traits::{One, Signed, Zero};

use crate::rational::format_rational;

/// Sorted `(variable, exponent)` pairs with positive exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<(usize, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn variable(v: usize) -> Self {
        Self(vec![(v, 1)])
    }

    pub fn factors(&self) -> &[(usize, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    fn times_variable(&self, v: usize) -> Self {
        let mut out = self.0.clone();
        match out.binary_search_by_key(&v, |&(x, _)| x) {
            Ok(pos) => out[pos].1 += 1,
            Err(pos) => out.insert(pos, (v, 1)),
        }
        Self(out)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        let mut p = Self::zero();
        p.terms.insert(Monomial::one(), BigRational::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// `self += c * m`.
    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    /// `self += scale * other * (sum_k coeff_k x_{var_k})`.
    pub fn add_product_with_linear(&mut self, other: &Polynomial, linear: &[(usize, BigRational)], scale: &BigRational) {
        for (m, c) in &other.terms {
            for (v, a) in linear {
                self.add_term(m.times_variable(*v), c * a * scale);
            }
        }
    }

    pub fn evaluate(&self, point: &[BigRational]) -> BigRational {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.factors()
                    .iter()
                    .fold(c.clone(), |acc, &(v, e)| acc * num::pow::pow(point[v].clone(), e as usize))
            })
            .fold(BigRational::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let magnitude = c.abs();
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let show_coeff = !magnitude.is_one() || m.factors().is_empty();
            if show_coeff {
                write!(f, "{}", format_rational(&magnitude))?;
            }
            for (i, &(v, e)) in m.factors().iter().enumerate() {
                if show_coeff || i > 0 {
                    write!(f, "*")?;
                }
                write!(f, "t{}", v + 1)?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}
