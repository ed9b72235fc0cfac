use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::arith;

/// Element of the rank-3 universal ring `GW^univ = Z[V4]/(<2> + <-2> - h)`
/// in coordinates over the basis `{<1>, h, <2>}`.
///
/// Multiplication table: `<1>` is the unit, `h·h = 2h`, `h·<2> = h`,
/// `<2>·<2> = <1>`.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub struct UnivElement {
    pub one: i64,
    pub h: i64,
    pub two: i64,
}

impl UnivElement {
    pub const ZERO: Self = Self::new(0, 0, 0);
    pub const ONE: Self = Self::new(1, 0, 0);
    pub const H: Self = Self::new(0, 1, 0);
    pub const TWO: Self = Self::new(0, 0, 1);
    /// `<-1> = h - <1>`.
    pub const MINUS_ONE: Self = Self::new(-1, 1, 0);
    /// `<-2> = h - <2>`.
    pub const MINUS_TWO: Self = Self::new(0, 1, -1);

    pub const fn new(one: i64, h: i64, two: i64) -> Self {
        UnivElement { one, h, two }
    }

    pub fn zero() -> Self {
        Self::ZERO
    }

    pub fn is_zero(&self) -> bool {
        *self == Self::ZERO
    }

    pub fn rank(&self) -> i64 {
        arith::add(arith::add(self.one, arith::mul(2, self.h)), self.two)
    }

    /// Real signature of the image: `<1>, <2> -> 1`, `h -> 0`.
    pub fn signature(&self) -> i64 {
        arith::add(self.one, self.two)
    }

    pub fn scale(self, k: i64) -> Self {
        Self::new(
            arith::mul(self.one, k),
            arith::mul(self.h, k),
            arith::mul(self.two, k),
        )
    }

    pub fn checked_mul(self, rhs: Self) -> Option<Self> {
        let one = self
            .one
            .checked_mul(rhs.one)?
            .checked_add(self.two.checked_mul(rhs.two)?)?;
        let two = self
            .one
            .checked_mul(rhs.two)?
            .checked_add(self.two.checked_mul(rhs.one)?)?;
        let rhs_weight = rhs
            .one
            .checked_add(rhs.two)?
            .checked_add(rhs.h.checked_mul(2)?)?;
        let h = self
            .h
            .checked_mul(rhs_weight)?
            .checked_add(rhs.h.checked_mul(self.one.checked_add(self.two)?)?)?;
        Some(Self::new(one, h, two))
    }

    pub fn checked_add(self, rhs: Self) -> Option<Self> {
        Some(Self::new(
            self.one.checked_add(rhs.one)?,
            self.h.checked_add(rhs.h)?,
            self.two.checked_add(rhs.two)?,
        ))
    }
}

/// `(n1, n2, m)` with `e = n1<1> + n2<2> + m h`; unique since the basis is free.
pub fn univ_coords(e: UnivElement) -> (i64, i64, i64) {
    (e.one, e.two, e.h)
}

impl Add for UnivElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.checked_add(rhs)
            .expect("coefficient overflow in addition")
    }
}

impl AddAssign for UnivElement {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Sub for UnivElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for UnivElement {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(
            arith::neg(self.one),
            arith::neg(self.h),
            arith::neg(self.two),
        )
    }
}

impl Mul for UnivElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(rhs)
            .expect("coefficient overflow in multiplication")
    }
}

impl Sum for UnivElement {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for UnivElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.one != 0 {
            parts.push(format!("{}<1>", self.one));
        }
        if self.two != 0 {
            parts.push(format!("{}<2>", self.two));
        }
        if self.h != 0 {
            parts.push(format!("{}h", self.h));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}
