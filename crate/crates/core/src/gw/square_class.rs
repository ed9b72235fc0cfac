use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A generator of a finite elementary abelian 2-group of square classes.
///
/// The derived ordering is the canonical generator order: `-1`, `2`, odd
/// primes ascending, then the formal double-point parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Generator {
    MinusOne,
    Two,
    Prime(u64),
    /// Formal parameter `x_l`, 1-based.
    Param(usize),
}

/// Exponent-bit vector over the generators of a [`SquareClassGroup`].
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub struct SquareClassMonomial(pub u64);

impl SquareClassMonomial {
    pub const IDENTITY: Self = SquareClassMonomial(0);

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: Self) -> Self {
        SquareClassMonomial(self.0 ^ other.0)
    }

    pub fn is_identity(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, bit: usize) -> bool {
        self.0 >> bit & 1 == 1
    }
}

/// Ordered generator list. The class of `-1`, when present, is always bit 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareClassGroup {
    gens: Vec<Generator>,
}

impl SquareClassGroup {
    pub fn new(mut gens: Vec<Generator>) -> Result<Self> {
        gens.sort();
        gens.dedup();
        if gens.len() > 64 {
            return Err(Error::TooManyGenerators(gens.len()));
        }
        for g in &gens {
            if let Generator::Prime(p) = *g {
                if p < 3 || !is_prime(p) {
                    return Err(Error::NotAnOddPrime(p));
                }
            }
        }
        Ok(SquareClassGroup { gens })
    }

    /// The Klein four-group generated by the classes of `-1` and `2`.
    pub fn klein() -> Self {
        SquareClassGroup {
            gens: vec![Generator::MinusOne, Generator::Two],
        }
    }

    /// Group generated by `-1`, `2` and the odd primes dividing `values`,
    /// extended by the parameters `x_1..x_params`.
    pub fn for_integers(values: &[u64], params: usize) -> Self {
        let mut gens = vec![Generator::MinusOne, Generator::Two];
        for &v in values {
            for (p, _) in factorize(v) {
                if p != 2 {
                    gens.push(Generator::Prime(p));
                }
            }
        }
        gens.extend((1..=params).map(Generator::Param));
        Self::new(gens).expect("odd primes from factorisation")
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn has_minus_one(&self) -> bool {
        self.gens.first() == Some(&Generator::MinusOne)
    }

    pub fn index_of(&self, g: Generator) -> Option<usize> {
        self.gens.binary_search(&g).ok()
    }

    pub fn generator(&self, g: Generator) -> Result<SquareClassMonomial> {
        self.index_of(g)
            .map(|i| SquareClassMonomial(1 << i))
            .ok_or(Error::UnknownGenerator(g))
    }

    /// Square class of a nonzero integer, reduced modulo squares.
    pub fn class_of_int(&self, n: i64) -> Result<SquareClassMonomial> {
        if n == 0 {
            return Err(Error::ZeroParameter);
        }
        let mut mono = SquareClassMonomial::IDENTITY;
        if n < 0 {
            mono = mono.mul(self.generator(Generator::MinusOne)?);
        }
        for (p, e) in factorize(n.unsigned_abs()) {
            if e % 2 == 1 {
                let g = if p == 2 {
                    Generator::Two
                } else {
                    Generator::Prime(p)
                };
                mono = mono.mul(self.generator(g)?);
            }
        }
        Ok(mono)
    }

    /// Generators whose bits are set in `mono`, in canonical order.
    pub fn support(&self, mono: SquareClassMonomial) -> Vec<Generator> {
        self.gens
            .iter()
            .enumerate()
            .filter(|(i, _)| mono.contains(*i))
            .map(|(_, g)| *g)
            .collect()
    }

    pub fn display(&self, mono: SquareClassMonomial) -> String {
        let parts: Vec<String> = self.support(mono).iter().map(|g| g.to_string()).collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("·")
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::MinusOne => write!(f, "-1"),
            Generator::Two => write!(f, "2"),
            Generator::Prime(p) => write!(f, "{p}"),
            Generator::Param(l) => write!(f, "d{l}"),
        }
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// Trial-division factorisation; `factorize(1)` is empty.
pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}
