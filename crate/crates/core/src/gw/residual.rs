use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

use serde::Serialize;

use super::tilde::{vars_of, TildeElement, VarSet};
use super::univ::UnivElement;

/// `a + b·ε` in `F2[ε]/(ε² - 1)`, the quotient `GW^univ/(2, h)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ResidualElement {
    pub a: bool,
    pub b: bool,
}

impl ResidualElement {
    pub const ZERO: Self = Self { a: false, b: false };
    pub const ONE: Self = Self { a: true, b: false };
    pub const EPS: Self = Self { a: false, b: true };
    pub const ONE_PLUS_EPS: Self = Self { a: true, b: true };

    pub fn is_zero(self) -> bool {
        self == Self::ZERO
    }

    /// `(a mod 2, b mod 2)` as integers.
    pub fn bits(self) -> (u8, u8) {
        (self.a as u8, self.b as u8)
    }
}

impl Add for ResidualElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            a: self.a ^ rhs.a,
            b: self.b ^ rhs.b,
        }
    }
}

impl Mul for ResidualElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self {
            a: (self.a & rhs.a) ^ (self.b & rhs.b),
            b: (self.a & rhs.b) ^ (self.b & rhs.a),
        }
    }
}

impl fmt::Display for ResidualElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (false, false) => write!(f, "0"),
            (true, false) => write!(f, "1"),
            (false, true) => write!(f, "e"),
            (true, true) => write!(f, "1+e"),
        }
    }
}

pub fn residual_reduce(e: UnivElement) -> ResidualElement {
    ResidualElement {
        a: e.one.rem_euclid(2) == 1,
        b: e.two.rem_euclid(2) == 1,
    }
}

/// Element of `R_s = F2[ε][x_1..x_s]/(x_l² - 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ResidualTilde {
    s: usize,
    terms: BTreeMap<VarSet, ResidualElement>,
}

impl ResidualTilde {
    pub fn zero(s: usize) -> Self {
        ResidualTilde {
            s,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(s: usize, set: VarSet, c: ResidualElement) -> Self {
        let mut e = Self::zero(s);
        e.add_term(set, c);
        e
    }

    pub fn constant(s: usize, c: ResidualElement) -> Self {
        Self::monomial(s, 0, c)
    }

    pub fn one(s: usize) -> Self {
        Self::constant(s, ResidualElement::ONE)
    }

    pub fn num_vars(&self) -> usize {
        self.s
    }

    pub fn add_term(&mut self, set: VarSet, c: ResidualElement) {
        let slot = self.terms.entry(set).or_default();
        *slot = *slot + c;
        if slot.is_zero() {
            self.terms.remove(&set);
        }
    }

    pub fn coeff(&self, set: VarSet) -> ResidualElement {
        self.terms.get(&set).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (VarSet, ResidualElement)> + '_ {
        self.terms.iter().map(|(k, v)| (*k, *v))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn top_coefficient(&self) -> ResidualElement {
        self.coeff(super::tilde::full_set(self.s))
    }
}

impl Add for &ResidualTilde {
    type Output = ResidualTilde;
    fn add(self, rhs: &ResidualTilde) -> ResidualTilde {
        assert_eq!(self.s, rhs.s, "variable count mismatch");
        let mut out = self.clone();
        for (k, c) in rhs.terms() {
            out.add_term(k, c);
        }
        out
    }
}

impl Mul for &ResidualTilde {
    type Output = ResidualTilde;
    fn mul(self, rhs: &ResidualTilde) -> ResidualTilde {
        assert_eq!(self.s, rhs.s, "variable count mismatch");
        let mut out = ResidualTilde::zero(self.s);
        for (a, ca) in self.terms() {
            for (b, cb) in rhs.terms() {
                out.add_term(a ^ b, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for ResidualTilde {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(set, c)| {
                let vars: String = vars_of(set).iter().map(|l| format!("x{l}")).collect();
                format!("({c}){vars}")
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub fn residual_reduce_tilde(e: &TildeElement) -> ResidualTilde {
    let mut out = ResidualTilde::zero(e.num_vars());
    for (set, c) in e.terms() {
        out.add_term(set, residual_reduce(c));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reduction_examples() {
        assert_eq!(residual_reduce(UnivElement::H), ResidualElement::ZERO);
        assert_eq!(residual_reduce(UnivElement::TWO), ResidualElement::EPS);
        assert_eq!(
            residual_reduce(UnivElement::new(2, 5, 1)),
            ResidualElement::EPS
        );
        assert_eq!(
            residual_reduce(UnivElement::MINUS_ONE),
            ResidualElement::ONE
        );
    }

    #[test]
    fn epsilon_squares_to_one() {
        assert_eq!(
            ResidualElement::EPS * ResidualElement::EPS,
            ResidualElement::ONE
        );
        let x = ResidualElement::ONE_PLUS_EPS;
        assert_eq!(x * x, ResidualElement::ZERO);
    }

    proptest! {
        #[test]
        fn reduction_is_multiplicative(
            a in (-20i64..20, -20i64..20, -20i64..20),
            b in (-20i64..20, -20i64..20, -20i64..20),
        ) {
            let x = UnivElement::new(a.0, a.1, a.2);
            let y = UnivElement::new(b.0, b.1, b.2);
            prop_assert_eq!(residual_reduce(x * y), residual_reduce(x) * residual_reduce(y));
            prop_assert_eq!(residual_reduce(x + y), residual_reduce(x) + residual_reduce(y));
        }
    }

    #[test]
    fn tilde_reduction_is_multiplicative() {
        let s = 2;
        let mut a = TildeElement::monomial(s, 0b01, UnivElement::new(3, 1, 1));
        a.add_term(0, UnivElement::TWO);
        let mut b = TildeElement::monomial(s, 0b11, UnivElement::new(1, 0, 1));
        b.add_term(0b10, UnivElement::new(0, 7, 3));
        assert_eq!(
            residual_reduce_tilde(&(&a * &b)),
            &residual_reduce_tilde(&a) * &residual_reduce_tilde(&b)
        );
    }
}
