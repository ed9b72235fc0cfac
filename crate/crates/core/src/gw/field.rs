use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use super::square_class::{factorize, is_prime};
use super::tilde::{vars_of, TildeElement};
use super::univ::UnivElement;
use crate::error::{Error, Result};

/// Concrete target for `φ_k: GW~ → GW(k)` once the parameters are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", content = "q", rename_all = "snake_case")]
pub enum FieldModel {
    Real,
    Closed,
    Finite(u64),
}

/// Image of an element under a field model.
///
/// Finite fields use `GW(F_q) ≅ Z ⊕ Z/2` via rank and discriminant bit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldValue {
    Real { rank: i64, signature: i64 },
    Closed { rank: i64 },
    Finite { rank: i64, disc: u8 },
}

/// Square class of one parameter: `true` means the nontrivial class
/// (negative over the reals, non-square over `F_q`). Ignored over closed fields.
pub type Assignment = Vec<bool>;

impl FieldModel {
    pub fn finite(q: u64) -> Result<Self> {
        let f = factorize(q);
        let ok = q > 3 && q % 2 == 1 && f.len() == 1 && is_prime(f[0].0);
        if ok {
            Ok(FieldModel::Finite(q))
        } else {
            Err(Error::UnsupportedField(format!(
                "F_{q}: need an odd prime power greater than 3"
            )))
        }
    }

    /// Parse `real`, `closed`, or `fq:Q`.
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "real" => Ok(FieldModel::Real),
            "closed" => Ok(FieldModel::Closed),
            _ => match text.strip_prefix("fq:").map(str::parse::<u64>) {
                Some(Ok(q)) => Self::finite(q),
                _ => Err(Error::UnsupportedField(text.to_string())),
            },
        }
    }

    pub fn name(&self) -> String {
        match self {
            FieldModel::Real => "real".into(),
            FieldModel::Closed => "closed".into(),
            FieldModel::Finite(q) => format!("fq:{q}"),
        }
    }

    /// Number of distinct square classes a single parameter can take.
    pub fn parameter_classes(&self) -> usize {
        match self {
            FieldModel::Closed => 1,
            _ => 2,
        }
    }

    /// Every assignment of square classes to `s` parameters.
    pub fn all_assignments(&self, s: usize) -> Vec<Assignment> {
        if self.parameter_classes() == 1 {
            return vec![vec![false; s]];
        }
        (0..1u32 << s)
            .map(|bits| (0..s).map(|i| bits >> i & 1 == 1).collect())
            .collect()
    }

    pub fn zero(&self) -> FieldValue {
        self.value(0, 0)
    }

    fn value(&self, rank: i64, aux: i64) -> FieldValue {
        match self {
            FieldModel::Real => FieldValue::Real {
                rank,
                signature: aux,
            },
            FieldModel::Closed => FieldValue::Closed { rank },
            FieldModel::Finite(_) => FieldValue::Finite {
                rank,
                disc: aux.rem_euclid(2) as u8,
            },
        }
    }

    /// Image of a rank-one symbol whose class is nontrivial iff `nontrivial`.
    pub fn symbol(&self, nontrivial: bool) -> FieldValue {
        match self {
            FieldModel::Real => self.value(1, if nontrivial { -1 } else { 1 }),
            _ => self.value(1, nontrivial as i64),
        }
    }

    /// Whether `-1` is in the nontrivial class.
    pub fn minus_one_class(&self) -> bool {
        match self {
            FieldModel::Real => true,
            FieldModel::Closed => false,
            FieldModel::Finite(q) => q % 4 == 3,
        }
    }

    /// Whether `2` is in the nontrivial class.
    pub fn two_class(&self) -> bool {
        match self {
            FieldModel::Real | FieldModel::Closed => false,
            FieldModel::Finite(q) => !matches!(q % 8, 1 | 7),
        }
    }

    /// Square class of a nonzero integer.
    pub fn class_of_int(&self, n: i64) -> Result<bool> {
        if n == 0 {
            return Err(Error::ZeroParameter);
        }
        match self {
            FieldModel::Real => Ok(n < 0),
            FieldModel::Closed => Ok(false),
            FieldModel::Finite(q) => {
                let (p, k) = factorize(*q)[0];
                let r = n.rem_euclid(p as i64) as u64;
                if r == 0 {
                    return Err(Error::ZeroParameter);
                }
                // Every element of F_p is a square in F_{p^k} for even k.
                Ok(k % 2 == 1 && legendre(r, p) != 1)
            }
        }
    }

    pub fn assignment_from_integers(&self, values: &[i64]) -> Result<Assignment> {
        values.iter().map(|&v| self.class_of_int(v)).collect()
    }

    pub fn hyperbolic(&self) -> FieldValue {
        &self.symbol(false) + &self.symbol(self.minus_one_class())
    }

    pub fn specialize_univ(&self, e: UnivElement) -> FieldValue {
        let one = self.symbol(false).scale(e.one);
        let two = self.symbol(self.two_class()).scale(e.two);
        let h = self.hyperbolic().scale(e.h);
        &(&one + &two) + &h
    }
}

fn legendre(a: u64, p: u64) -> i64 {
    let mut result = 1u64;
    let mut base = a % p;
    let mut exp = (p - 1) / 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    if result == 1 {
        1
    } else {
        -1
    }
}

/// `φ_k(e)` with `x_l` sent to the symbol of the class `assign[l-1]`.
pub fn specialize_field(
    e: &TildeElement,
    model: FieldModel,
    assign: &[bool],
) -> Result<FieldValue> {
    if assign.len() != e.num_vars() {
        return Err(Error::AssignmentLength {
            expected: e.num_vars(),
            got: assign.len(),
        });
    }
    let mut out = model.zero();
    for (set, c) in e.terms() {
        let class = vars_of(set)
            .iter()
            .fold(false, |acc, &l| acc ^ assign[l - 1]);
        out = &out + &(&model.specialize_univ(c) * &model.symbol(class));
    }
    Ok(out)
}

impl FieldValue {
    pub fn rank(&self) -> i64 {
        match *self {
            FieldValue::Real { rank, .. }
            | FieldValue::Closed { rank }
            | FieldValue::Finite { rank, .. } => rank,
        }
    }

    pub fn signature(&self) -> Option<i64> {
        match *self {
            FieldValue::Real { signature, .. } => Some(signature),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match *self {
            FieldValue::Real { rank, signature } => rank == 0 && signature == 0,
            FieldValue::Closed { rank } => rank == 0,
            FieldValue::Finite { rank, disc } => rank == 0 && disc == 0,
        }
    }

    pub fn scale(&self, k: i64) -> FieldValue {
        match *self {
            FieldValue::Real { rank, signature } => FieldValue::Real {
                rank: rank * k,
                signature: signature * k,
            },
            FieldValue::Closed { rank } => FieldValue::Closed { rank: rank * k },
            FieldValue::Finite { rank, disc } => FieldValue::Finite {
                rank: rank * k,
                disc: ((disc as i64 * k).rem_euclid(2)) as u8,
            },
        }
    }
}

impl Add for &FieldValue {
    type Output = FieldValue;
    fn add(self, rhs: &FieldValue) -> FieldValue {
        use FieldValue::*;
        match (*self, *rhs) {
            (
                Real {
                    rank: r1,
                    signature: s1,
                },
                Real {
                    rank: r2,
                    signature: s2,
                },
            ) => Real {
                rank: r1 + r2,
                signature: s1 + s2,
            },
            (Closed { rank: r1 }, Closed { rank: r2 }) => Closed { rank: r1 + r2 },
            (Finite { rank: r1, disc: d1 }, Finite { rank: r2, disc: d2 }) => Finite {
                rank: r1 + r2,
                disc: d1 ^ d2,
            },
            _ => panic!("adding values of different field models"),
        }
    }
}

impl Neg for &FieldValue {
    type Output = FieldValue;
    fn neg(self) -> FieldValue {
        self.scale(-1)
    }
}

impl Sub for &FieldValue {
    type Output = FieldValue;
    fn sub(self, rhs: &FieldValue) -> FieldValue {
        self + &(-rhs)
    }
}

impl Mul for &FieldValue {
    type Output = FieldValue;
    fn mul(self, rhs: &FieldValue) -> FieldValue {
        use FieldValue::*;
        match (*self, *rhs) {
            (
                Real {
                    rank: r1,
                    signature: s1,
                },
                Real {
                    rank: r2,
                    signature: s2,
                },
            ) => Real {
                rank: r1 * r2,
                signature: s1 * s2,
            },
            (Closed { rank: r1 }, Closed { rank: r2 }) => Closed { rank: r1 * r2 },
            (Finite { rank: r1, disc: d1 }, Finite { rank: r2, disc: d2 }) => Finite {
                rank: r1 * r2,
                disc: ((r2 * d1 as i64 + r1 * d2 as i64).rem_euclid(2)) as u8,
            },
            _ => panic!("multiplying values of different field models"),
        }
    }
}

impl fmt::Display for FieldValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldValue::Real { rank, signature } => write!(f, "rank {rank}, signature {signature}"),
            FieldValue::Closed { rank } => write!(f, "rank {rank}"),
            FieldValue::Finite { rank, disc } => write!(f, "rank {rank}, disc {disc}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const QS: [u64; 5] = [5, 7, 11, 13, 17];

    fn models() -> Vec<FieldModel> {
        let mut v = vec![FieldModel::Real, FieldModel::Closed];
        v.extend(QS.iter().map(|&q| FieldModel::Finite(q)));
        v
    }

    #[test]
    fn parsing_and_validation() {
        assert_eq!(FieldModel::parse("fq:9").unwrap(), FieldModel::Finite(9));
        assert!(FieldModel::parse("fq:3").is_err());
        assert!(FieldModel::parse("fq:15").is_err());
        assert!(FieldModel::parse("fq:8").is_err());
        assert!(FieldModel::parse("complex").is_err());
    }

    #[test]
    fn quadratic_characters_match_brute_force() {
        for q in [5u64, 7, 11, 13, 17, 19, 23, 29, 31] {
            let squares: Vec<u64> = (1..q).map(|x| x * x % q).collect();
            let m = FieldModel::Finite(q);
            for n in 1..q as i64 {
                assert_eq!(
                    m.class_of_int(n).unwrap(),
                    !squares.contains(&(n as u64)),
                    "q={q} n={n}"
                );
            }
            assert_eq!(m.minus_one_class(), !squares.contains(&(q - 1)));
            assert_eq!(m.two_class(), !squares.contains(&2));
        }
    }

    #[test]
    fn non_prime_field_sees_base_field_as_squares() {
        let m = FieldModel::Finite(9);
        assert!(!m.class_of_int(2).unwrap());
        assert!(!m.two_class());
        assert!(!m.minus_one_class());
    }

    #[test]
    fn zero_parameter_is_rejected() {
        assert_eq!(FieldModel::Real.class_of_int(0), Err(Error::ZeroParameter));
        assert_eq!(
            FieldModel::Finite(7).class_of_int(14),
            Err(Error::ZeroParameter)
        );
    }

    #[test]
    fn hyperbolic_laws_in_every_model() {
        for m in models() {
            let h = m.hyperbolic();
            assert_eq!(h.rank(), 2);
            for a in [false, true] {
                let sa = m.symbol(a);
                assert_eq!(&h * &sa, h, "{m:?}");
                for d in [false, true] {
                    let diff = &m.symbol(d) - &m.symbol(false);
                    assert!((&h * &diff).is_zero());
                }
                let two_a = m.symbol(a ^ m.two_class());
                assert!((&sa - &two_a).scale(2).is_zero() || m == FieldModel::Real);
            }
            assert_eq!(&h * &h, h.scale(2));
        }
    }

    #[test]
    fn specialisation_examples() {
        let e = &TildeElement::constant(1, UnivElement::TWO)
            + &TildeElement::monomial(1, 1, UnivElement::TWO);
        let v = specialize_field(&e, FieldModel::Real, &[true]).unwrap();
        assert_eq!(
            v,
            FieldValue::Real {
                rank: 2,
                signature: 0
            }
        );

        let hx = &TildeElement::monomial(1, 1, UnivElement::H)
            - &TildeElement::constant(1, UnivElement::H);
        for m in models() {
            for a in m.all_assignments(1) {
                assert!(specialize_field(&hx, m, &a).unwrap().is_zero());
            }
            let h = specialize_field(&TildeElement::constant(0, UnivElement::H), m, &[]).unwrap();
            assert_eq!(h.rank(), 2);
            assert_eq!(h.signature().unwrap_or(0), 0);
        }
        assert!(specialize_field(&hx, FieldModel::Real, &[]).is_err());
    }

    #[test]
    fn specialisation_is_a_ring_homomorphism_and_keeps_rank() {
        let s = 2;
        let mut a = TildeElement::monomial(s, 0b01, UnivElement::new(3, -1, 2));
        a.add_term(0b11, UnivElement::new(0, 2, -5));
        let mut b = TildeElement::monomial(s, 0b10, UnivElement::new(1, 1, 1));
        b.add_term(0, UnivElement::new(-4, 0, 7));
        for m in models() {
            for asg in m.all_assignments(s) {
                let fa = specialize_field(&a, m, &asg).unwrap();
                let fb = specialize_field(&b, m, &asg).unwrap();
                assert_eq!(specialize_field(&(&a * &b), m, &asg).unwrap(), &fa * &fb);
                assert_eq!(specialize_field(&(&a + &b), m, &asg).unwrap(), &fa + &fb);
                assert_eq!(fa.rank(), a.rank());
            }
        }
    }
}
