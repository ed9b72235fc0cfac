use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use super::arith;
use super::group_ring::GroupRingElement;
use super::square_class::{Generator, SquareClassGroup, SquareClassMonomial};
use super::univ::UnivElement;
use crate::error::{Error, Result};

const MINUS_ONE_BIT: u64 = 1;

/// Element of `Z[G] / (<g> + <-g> - <1> - <-1>)`.
///
/// Canonical coordinates are over `{<1>, h}` together with one symbol per
/// `±` pair of non-identity classes; the representative of a pair is the
/// class without the `-1` bit. The group this lives over must contain `-1`
/// (bit 0).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct HypUnivElement {
    h: i64,
    /// Keys never carry the `-1` bit; the identity key is the `<1>` coordinate.
    reps: BTreeMap<SquareClassMonomial, i64>,
}

/// Reduce a group-ring element by `<-g> -> h - <g>`.
pub fn hyp_univ_reduce(e: &GroupRingElement, group: &SquareClassGroup) -> Result<HypUnivElement> {
    if !group.has_minus_one() {
        return Err(Error::MissingMinusOne);
    }
    Ok(reduce_unchecked(e))
}

fn reduce_unchecked(e: &GroupRingElement) -> HypUnivElement {
    let mut out = HypUnivElement::zero();
    for (g, c) in e.terms() {
        if g.0 & MINUS_ONE_BIT != 0 {
            out.h = arith::add(out.h, c);
            out.add_rep(SquareClassMonomial(g.0 ^ MINUS_ONE_BIT), arith::neg(c));
        } else {
            out.add_rep(g, c);
        }
    }
    out
}

impl HypUnivElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        let mut e = Self::zero();
        e.add_rep(SquareClassMonomial::IDENTITY, 1);
        e
    }

    pub fn hyperbolic() -> Self {
        HypUnivElement {
            h: 1,
            reps: BTreeMap::new(),
        }
    }

    /// The symbol `<g>` for an arbitrary class of `group`.
    pub fn symbol(group: &SquareClassGroup, g: SquareClassMonomial) -> Result<Self> {
        hyp_univ_reduce(&GroupRingElement::symbol(g), group)
    }

    /// The symbol `<n>` of a nonzero integer.
    pub fn int_symbol(group: &SquareClassGroup, n: i64) -> Result<Self> {
        Self::symbol(group, group.class_of_int(n)?)
    }

    fn add_rep(&mut self, g: SquareClassMonomial, c: i64) {
        if c == 0 {
            return;
        }
        let slot = self.reps.entry(g).or_insert(0);
        *slot = arith::add(*slot, c);
        if *slot == 0 {
            self.reps.remove(&g);
        }
    }

    pub fn h_coeff(&self) -> i64 {
        self.h
    }

    /// Coefficient of the representative symbol `<g>` (`g` without the `-1` bit).
    pub fn coeff(&self, g: SquareClassMonomial) -> i64 {
        self.reps.get(&g).copied().unwrap_or(0)
    }

    pub fn reps(&self) -> impl Iterator<Item = (SquareClassMonomial, i64)> + '_ {
        self.reps.iter().map(|(g, c)| (*g, *c))
    }

    pub fn is_zero(&self) -> bool {
        self.h == 0 && self.reps.is_empty()
    }

    pub fn rank(&self) -> i64 {
        self.reps()
            .fold(arith::mul(2, self.h), |acc, (_, c)| arith::add(acc, c))
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut out = HypUnivElement {
            h: arith::mul(self.h, k),
            reps: BTreeMap::new(),
        };
        for (g, c) in self.reps() {
            out.add_rep(g, arith::mul(c, k));
        }
        out
    }

    /// Lift to the free group ring with `h = <1> + <-1>`.
    pub fn lift(&self) -> GroupRingElement {
        let mut out = GroupRingElement::zero();
        out.add_term(SquareClassMonomial::IDENTITY, self.h);
        out.add_term(SquareClassMonomial(MINUS_ONE_BIT), self.h);
        for (g, c) in self.reps() {
            out.add_term(g, c);
        }
        out
    }

    /// Coordinates in `GW^univ` when only `-1` and `2` occur.
    pub fn to_univ(&self, group: &SquareClassGroup) -> Result<UnivElement> {
        let two = group.generator(Generator::Two).ok();
        let mut out = UnivElement::zero();
        out.h = self.h;
        for (g, c) in self.reps() {
            if g.is_identity() {
                out.one = c;
            } else if Some(g) == two {
                out.two = c;
            } else {
                return Err(Error::OutsideSubring(format!(
                    "symbol <{}> is not in GW^univ",
                    group.display(g)
                )));
            }
        }
        Ok(out)
    }

    pub fn display(&self, group: &SquareClassGroup) -> String {
        let mut parts = Vec::new();
        for (g, c) in self.reps() {
            parts.push(format!("{c}<{}>", group.display(g)));
        }
        if self.h != 0 {
            parts.push(format!("{}h", self.h));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl Add for &HypUnivElement {
    type Output = HypUnivElement;
    fn add(self, rhs: &HypUnivElement) -> HypUnivElement {
        let mut out = self.clone();
        out.h = arith::add(out.h, rhs.h);
        for (g, c) in rhs.reps() {
            out.add_rep(g, c);
        }
        out
    }
}

impl Sub for &HypUnivElement {
    type Output = HypUnivElement;
    fn sub(self, rhs: &HypUnivElement) -> HypUnivElement {
        self + &(-rhs)
    }
}

impl Neg for &HypUnivElement {
    type Output = HypUnivElement;
    fn neg(self) -> HypUnivElement {
        self.scale(-1)
    }
}

/// Product computed in the free group ring and reduced afterwards.
impl Mul for &HypUnivElement {
    type Output = HypUnivElement;
    fn mul(self, rhs: &HypUnivElement) -> HypUnivElement {
        reduce_unchecked(&(&self.lift() * &rhs.lift()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn klein_symbol(n: i64) -> HypUnivElement {
        HypUnivElement::int_symbol(&SquareClassGroup::klein(), n).unwrap()
    }

    #[test]
    fn rational_witt_relation_is_not_imposed() {
        let g = SquareClassGroup::klein();
        let e = &(&(&klein_symbol(-1) + &klein_symbol(2)) - &klein_symbol(1)) - &klein_symbol(-2);
        let u = e.to_univ(&g).unwrap();
        assert_eq!((u.one, u.h, u.two), (-2, 0, 2));
    }

    #[test]
    fn symbol_plus_negative_is_hyperbolic() {
        let g = SquareClassGroup::for_integers(&[15], 2);
        for n in [1i64, 2, 3, 5, 6, 10, 15, 30] {
            let a = HypUnivElement::int_symbol(&g, n).unwrap();
            let b = HypUnivElement::int_symbol(&g, -n).unwrap();
            assert_eq!(&a + &b, HypUnivElement::hyperbolic());
        }
        let d = g.generator(Generator::Param(2)).unwrap();
        let m1 = g.generator(Generator::MinusOne).unwrap();
        let x = HypUnivElement::symbol(&g, d).unwrap();
        let y = HypUnivElement::symbol(&g, d.mul(m1)).unwrap();
        assert_eq!(&x + &y, HypUnivElement::hyperbolic());
    }

    #[test]
    fn identity_has_unit_coordinates() {
        let e = HypUnivElement::one();
        assert_eq!(
            e.to_univ(&SquareClassGroup::klein()).unwrap(),
            UnivElement::ONE
        );
    }

    #[test]
    fn requires_minus_one() {
        let g = SquareClassGroup::new(vec![Generator::Two]).unwrap();
        assert_eq!(
            hyp_univ_reduce(&GroupRingElement::one(), &g),
            Err(Error::MissingMinusOne)
        );
    }

    #[test]
    fn symbols_multiply_as_classes() {
        let g = SquareClassGroup::for_integers(&[3, 5, 7], 1);
        let vals = [1i64, -1, 2, -2, 3, -3, 5, -6, 7, -35, 105, -210];
        for &a in &vals {
            for &b in &vals {
                let lhs = &HypUnivElement::int_symbol(&g, a).unwrap()
                    * &HypUnivElement::int_symbol(&g, b).unwrap();
                let rhs = HypUnivElement::int_symbol(&g, a * b).unwrap();
                assert_eq!(lhs, rhs, "<{a}><{b}>");
            }
        }
    }

    #[test]
    fn klein_carrier_agrees_with_univ_table() {
        let g = SquareClassGroup::klein();
        let basis = [
            (HypUnivElement::one(), UnivElement::ONE),
            (HypUnivElement::hyperbolic(), UnivElement::H),
            (klein_symbol(2), UnivElement::TWO),
        ];
        for (a, ua) in &basis {
            for (b, ub) in &basis {
                assert_eq!((a * b).to_univ(&g).unwrap(), *ua * *ub);
            }
        }
    }
}
