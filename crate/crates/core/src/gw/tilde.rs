use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::de::Deserializer;
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use super::hyp_univ::HypUnivElement;
use super::square_class::{Generator, SquareClassGroup};
use super::univ::UnivElement;
use crate::error::{Error, Result};

/// Subset of `{1..s}` as a bit mask: bit `l-1` stands for `x_l`.
pub type VarSet = u32;

pub const MAX_VARS: usize = 31;

pub fn var_bit(l: usize) -> VarSet {
    debug_assert!((1..=MAX_VARS).contains(&l));
    1 << (l - 1)
}

pub fn full_set(s: usize) -> VarSet {
    if s == 0 {
        0
    } else {
        u32::MAX >> (32 - s)
    }
}

pub fn vars_of(set: VarSet) -> Vec<usize> {
    (1..=MAX_VARS).filter(|&l| set & var_bit(l) != 0).collect()
}

/// Element of `GW~ = GW^univ[x_1..x_s]/(x_l^2 - 1)`.
///
/// The `x_l` are free involutive variables: the hyperbolic relation is *not*
/// imposed on them, so `h·x_1 != h` here even though every field image agrees.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TildeElement {
    s: usize,
    terms: BTreeMap<VarSet, UnivElement>,
}

impl TildeElement {
    pub fn zero(s: usize) -> Self {
        assert!(s <= MAX_VARS, "at most {MAX_VARS} variables");
        TildeElement {
            s,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(s: usize, c: UnivElement) -> Self {
        Self::monomial(s, 0, c)
    }

    pub fn one(s: usize) -> Self {
        Self::constant(s, UnivElement::ONE)
    }

    /// `c · x_I`.
    pub fn monomial(s: usize, set: VarSet, c: UnivElement) -> Self {
        let mut e = Self::zero(s);
        e.add_term(set, c);
        e
    }

    /// The variable `x_l`, 1-based.
    pub fn var(s: usize, l: usize) -> Self {
        assert!((1..=s).contains(&l), "variable x_{l} outside 1..={s}");
        Self::monomial(s, var_bit(l), UnivElement::ONE)
    }

    pub fn num_vars(&self) -> usize {
        self.s
    }

    pub fn add_term(&mut self, set: VarSet, c: UnivElement) {
        assert!(
            set & !full_set(self.s) == 0,
            "monomial outside 1..={}",
            self.s
        );
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(set).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&set);
        }
    }

    pub fn coeff(&self, set: VarSet) -> UnivElement {
        self.terms.get(&set).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (VarSet, UnivElement)> + '_ {
        self.terms.iter().map(|(k, v)| (*k, *v))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut out = Self::zero(self.s);
        for (set, c) in self.terms() {
            out.add_term(set, c.scale(k));
        }
        out
    }

    pub fn scale_univ(&self, k: UnivElement) -> Self {
        let mut out = Self::zero(self.s);
        for (set, c) in self.terms() {
            out.add_term(set, c * k);
        }
        out
    }

    /// Rank, read with every `x_l` as a rank-one class.
    pub fn rank(&self) -> i64 {
        self.terms().map(|(_, c)| c.rank()).sum()
    }

    /// Same element viewed with `s` variables (`s >= ` highest variable used).
    pub fn with_num_vars(&self, s: usize) -> Result<Self> {
        if let Some(&max) = self.terms.keys().max() {
            if max & !full_set(s) != 0 {
                return Err(Error::VariableMismatch(self.s, s));
            }
        }
        Ok(TildeElement {
            s,
            terms: self.terms.clone(),
        })
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.s != rhs.s {
            return Err(Error::VariableMismatch(self.s, rhs.s));
        }
        let mut out = Self::zero(self.s);
        for (a, ca) in self.terms() {
            for (b, cb) in rhs.terms() {
                out.add_term(a ^ b, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        if self.s != rhs.s {
            return Err(Error::VariableMismatch(self.s, rhs.s));
        }
        let mut out = self.clone();
        for (set, c) in rhs.terms() {
            out.add_term(set, c);
        }
        Ok(out)
    }

    /// Coefficient of the full monomial `x_1···x_s`.
    pub fn top_coefficient(&self) -> UnivElement {
        self.coeff(full_set(self.s))
    }

    /// Substitute `x_j = 1` and shift the variables above `j` down by one.
    pub fn dissolve(&self, j: usize) -> Result<Self> {
        if !(1..=self.s).contains(&j) {
            return Err(Error::VariableOutOfRange {
                index: j,
                s: self.s,
            });
        }
        let low = var_bit(j) - 1;
        let mut out = Self::zero(self.s - 1);
        for (set, c) in self.terms() {
            let rest = set & !var_bit(j);
            let shifted = (rest & low) | ((rest >> 1) & !low);
            out.add_term(shifted, c);
        }
        Ok(out)
    }

    /// Substitute `x_j = 1` keeping the variable count.
    pub fn set_var_to_one(&self, j: usize) -> Self {
        let mut out = Self::zero(self.s);
        for (set, c) in self.terms() {
            out.add_term(set & !var_bit(j), c);
        }
        out
    }

    /// `(A, B)` with `self = A + x_j B`, both free of `x_j`.
    pub fn split_var(&self, j: usize) -> (Self, Self) {
        let bit = var_bit(j);
        let mut a = Self::zero(self.s);
        let mut b = Self::zero(self.s);
        for (set, c) in self.terms() {
            if set & bit == 0 {
                a.add_term(set, c);
            } else {
                b.add_term(set ^ bit, c);
            }
        }
        (a, b)
    }

    /// Highest power of any single variable occurring in a monomial; always
    /// `<= 1` by construction of the key type.
    pub fn is_multi_affine(&self) -> bool {
        self.terms.keys().all(|k| k & !full_set(self.s) == 0)
    }

    /// Image in the hyperbolic carrier over `group`, sending `x_l` to the
    /// generator `Param(l)`.
    pub fn to_hyp_univ(&self, group: &SquareClassGroup) -> Result<HypUnivElement> {
        let two = HypUnivElement::symbol(group, group.generator(Generator::Two)?)?;
        let mut out = HypUnivElement::zero();
        for (set, c) in self.terms() {
            let mut mono = super::square_class::SquareClassMonomial::IDENTITY;
            for l in vars_of(set) {
                mono = mono.mul(group.generator(Generator::Param(l))?);
            }
            let x = HypUnivElement::symbol(group, mono)?;
            let coeff = &(&HypUnivElement::one().scale(c.one) + &two.scale(c.two))
                + &HypUnivElement::hyperbolic().scale(c.h);
            out = &out + &(&coeff * &x);
        }
        Ok(out)
    }
}

/// `∏_{l in vars} (x_l - <1>)`.
pub fn binomial_product(s: usize, vars: &[usize]) -> TildeElement {
    vars.iter().fold(TildeElement::one(s), |acc, &l| {
        &acc * &(&TildeElement::var(s, l) - &TildeElement::one(s))
    })
}

/// Result of the multi-affine cascade along a fixed variable order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cascade {
    pub order: Vec<usize>,
    /// `S_q` for `q = 1..s`, each free of `x_{j_1}..x_{j_q}`.
    pub specialisations: Vec<TildeElement>,
    /// Coefficient of the full monomial.
    pub top: UnivElement,
}

impl Cascade {
    /// The summand `S_q · ∏_{p<q}(x_{j_p} - 1)`, `q` 1-based.
    pub fn summand(&self, q: usize) -> TildeElement {
        let s_q = &self.specialisations[q - 1];
        s_q * &binomial_product(s_q.num_vars(), &self.order[..q - 1])
    }

    /// `Σ_q S_q ∏_{p<q}(x_{j_p} - 1) + top · ∏_p (x_{j_p} - 1)`.
    pub fn reconstruct(&self, s: usize) -> TildeElement {
        let mut out = binomial_product(s, &self.order).scale_univ(self.top);
        for q in 1..=self.specialisations.len() {
            out = &out + &self.summand(q);
        }
        out
    }
}

/// Decompose `e` along `order` (a permutation of `1..=s`).
pub fn cascade_decompose(e: &TildeElement, order: &[usize]) -> Result<Cascade> {
    let s = e.num_vars();
    let mut seen = vec![false; s + 1];
    if order.len() != s {
        return Err(Error::VariableMismatch(order.len(), s));
    }
    for &j in order {
        if !(1..=s).contains(&j) || seen[j] {
            return Err(Error::VariableOutOfRange { index: j, s });
        }
        seen[j] = true;
    }
    let mut current = e.clone();
    let mut specialisations = Vec::with_capacity(s);
    for &j in order {
        let (a, b) = current.split_var(j);
        specialisations.push(&a + &b);
        current = b;
    }
    let top = current.coeff(0);
    debug_assert!(current.terms().all(|(k, _)| k == 0));
    Ok(Cascade {
        order: order.to_vec(),
        specialisations,
        top,
    })
}

pub fn top_coefficient(e: &TildeElement) -> UnivElement {
    e.top_coefficient()
}

impl Add for &TildeElement {
    type Output = TildeElement;
    fn add(self, rhs: &TildeElement) -> TildeElement {
        self.try_add(rhs).expect("variable count mismatch")
    }
}

impl Sub for &TildeElement {
    type Output = TildeElement;
    fn sub(self, rhs: &TildeElement) -> TildeElement {
        self + &(-rhs)
    }
}

impl Neg for &TildeElement {
    type Output = TildeElement;
    fn neg(self) -> TildeElement {
        self.scale(-1)
    }
}

impl Mul for &TildeElement {
    type Output = TildeElement;
    fn mul(self, rhs: &TildeElement) -> TildeElement {
        self.try_mul(rhs).expect("variable count mismatch")
    }
}

impl fmt::Display for TildeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(set, c)| {
                let vars: String = vars_of(set).iter().map(|l| format!("x{l}")).collect();
                if vars.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c}){vars}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    vars: Vec<usize>,
    coeff: UnivElement,
}

/// Serialised as a list of `{"vars": [...], "coeff": {...}}`.
impl Serialize for TildeElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (set, coeff) in self.terms() {
            seq.serialize_element(&TermJson {
                vars: vars_of(set),
                coeff,
            })?;
        }
        seq.end()
    }
}

/// The variable count is the largest index that occurs.
impl<'de> Deserialize<'de> for TildeElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<TermJson>::deserialize(deserializer)?;
        let s = terms
            .iter()
            .flat_map(|t| t.vars.iter().copied())
            .max()
            .unwrap_or(0);
        if s > MAX_VARS {
            return Err(serde::de::Error::custom("too many variables"));
        }
        let mut out = TildeElement::zero(s);
        for t in terms {
            let mut set = 0;
            for l in t.vars {
                if l == 0 {
                    return Err(serde::de::Error::custom("variables are 1-based"));
                }
                set ^= var_bit(l);
            }
            out.add_term(set, t.coeff);
        }
        Ok(out)
    }
}
