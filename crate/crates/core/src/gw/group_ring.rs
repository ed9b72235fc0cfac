use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use super::arith;
use super::square_class::SquareClassMonomial;

/// Element of the integral group ring `Z[G]` of a square class group.
///
/// No Witt relation is imposed: `<g> + <-g>` is not identified with anything.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GroupRingElement {
    terms: BTreeMap<SquareClassMonomial, i64>,
}

impl GroupRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::symbol(SquareClassMonomial::IDENTITY)
    }

    /// The rank-one symbol `<g>`.
    pub fn symbol(g: SquareClassMonomial) -> Self {
        Self::term(g, 1)
    }

    pub fn term(g: SquareClassMonomial, c: i64) -> Self {
        let mut e = Self::zero();
        e.add_term(g, c);
        e
    }

    pub fn add_term(&mut self, g: SquareClassMonomial, c: i64) {
        if c == 0 {
            return;
        }
        let slot = self.terms.entry(g).or_insert(0);
        *slot = arith::add(*slot, c);
        if *slot == 0 {
            self.terms.remove(&g);
        }
    }

    pub fn coeff(&self, g: SquareClassMonomial) -> i64 {
        self.terms.get(&g).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (SquareClassMonomial, i64)> + '_ {
        self.terms.iter().map(|(g, c)| (*g, *c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut out = Self::zero();
        for (g, c) in self.terms() {
            out.add_term(g, arith::mul(c, k));
        }
        out
    }

    /// Augmentation: the rank of the formal combination.
    pub fn rank(&self) -> i64 {
        self.terms().fold(0, |acc, (_, c)| arith::add(acc, c))
    }
}

impl Add for &GroupRingElement {
    type Output = GroupRingElement;
    fn add(self, rhs: &GroupRingElement) -> GroupRingElement {
        let mut out = self.clone();
        for (g, c) in rhs.terms() {
            out.add_term(g, c);
        }
        out
    }
}

impl Sub for &GroupRingElement {
    type Output = GroupRingElement;
    fn sub(self, rhs: &GroupRingElement) -> GroupRingElement {
        let mut out = self.clone();
        for (g, c) in rhs.terms() {
            out.add_term(g, arith::neg(c));
        }
        out
    }
}

impl Neg for &GroupRingElement {
    type Output = GroupRingElement;
    fn neg(self) -> GroupRingElement {
        self.scale(-1)
    }
}

impl Mul for &GroupRingElement {
    type Output = GroupRingElement;
    fn mul(self, rhs: &GroupRingElement) -> GroupRingElement {
        let mut out = GroupRingElement::zero();
        for (a, ca) in self.terms() {
            for (b, cb) in rhs.terms() {
                out.add_term(a.mul(b), arith::mul(ca, cb));
            }
        }
        out
    }
}
