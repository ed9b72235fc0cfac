//! Local multiplicity factors and the identities tying them together.

use serde::Serialize;

use crate::check::Check;
use crate::error::{Error, Result};
use crate::gw::residual::{ResidualElement, ResidualTilde};
use crate::gw::tilde::{var_bit, VarSet};
use crate::gw::{Generator, HypUnivElement, SquareClassGroup, TildeElement, UnivElement};

fn weight(m: u64) -> Result<i64> {
    if m == 0 {
        Err(Error::ZeroWeight)
    } else {
        i64::try_from(m).map_err(|_| Error::ZeroWeight)
    }
}

/// Carrier group for the raw identities at weight `m`. Besides the primes of
/// `m` it holds one formal parameter `d`.
pub fn raw_carrier(m: u64) -> SquareClassGroup {
    SquareClassGroup::for_integers(&[m], 1)
}

/// The value taken by the parameter `d` inside `γ̂(m, d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DParam {
    Formal,
    One,
}

fn d_symbol(group: &SquareClassGroup, d: DParam, sign: i64, k: i64) -> Result<HypUnivElement> {
    let base = group.class_of_int(sign * k)?;
    let mono = match d {
        DParam::One => base,
        DParam::Formal => base.mul(group.generator(Generator::Param(1))?),
    };
    HypUnivElement::symbol(group, mono)
}

/// `m^{A1}`: `<m> + ((m-1)/2) h` for odd `m`, `(m/2) h` for even `m`.
pub fn m_a1_raw(m: u64, group: &SquareClassGroup) -> Result<HypUnivElement> {
    let mi = weight(m)?;
    if mi % 2 == 1 {
        let sym = HypUnivElement::int_symbol(group, mi)?;
        Ok(&sym + &HypUnivElement::hyperbolic().scale((mi - 1) / 2))
    } else {
        Ok(HypUnivElement::hyperbolic().scale(mi / 2))
    }
}

/// The rank-`m` normal form `γ̂(m, d)`.
pub fn gamma_hat_raw(m: u64, d: DParam, group: &SquareClassGroup) -> Result<HypUnivElement> {
    let mi = weight(m)?;
    let pair = &d_symbol(group, DParam::One, 1, 2 * mi)? + &d_symbol(group, d, -1, 2 * mi)?;
    let h = HypUnivElement::hyperbolic();
    Ok(match mi % 4 {
        1 | 3 => &HypUnivElement::int_symbol(group, mi)? + &pair.scale((mi - 1) / 2),
        0 => &pair.scale(mi / 4) + &h.scale(mi / 4),
        _ => {
            let c = (mi - 2) / 4;
            let head = &HypUnivElement::one() + &d_symbol(group, d, -1, 1)?;
            &(&head + &pair.scale(c)) + &h.scale(c)
        }
    })
}

/// `(m^{A1})²` in closed form.
pub fn elevator_square(m: u64) -> Result<UnivElement> {
    let mi = weight(m)?;
    let sq = mi.checked_mul(mi).expect("weight overflow");
    Ok(if mi % 2 == 1 {
        UnivElement::new(1, (sq - 1) / 2, 0)
    } else {
        UnivElement::new(0, sq / 2, 0)
    })
}

/// Closed form of `γ̂(m, d_j)·m^{A1}` with `d_j = x_j`.
pub fn type_a_factor(m: u64, j: usize, s: usize) -> Result<TildeElement> {
    let mi = weight(m)?;
    check_label(j, s)?;
    if mi % 2 == 0 {
        return Ok(TildeElement::constant(s, UnivElement::H.scale(mi * mi / 2)));
    }
    let c = (mi - 1) / 2;
    let mut e = TildeElement::constant(
        s,
        UnivElement::ONE + UnivElement::TWO.scale(c) + UnivElement::H.scale(mi * (mi - 1) / 2),
    );
    e.add_term(var_bit(j), UnivElement::MINUS_TWO.scale(c));
    Ok(e)
}

/// `β_j = <2> + <2>x_j`.
pub fn type_r_factor(j: usize, s: usize) -> Result<TildeElement> {
    check_label(j, s)?;
    let mut e = TildeElement::constant(s, UnivElement::TWO);
    e.add_term(var_bit(j), UnivElement::TWO);
    Ok(e)
}

/// Multiplicity of a bounded twin edge of weight `m` carrying the point `x_i`.
pub fn twin_edge_factor(m: u64, i: usize, s: usize) -> Result<TildeElement> {
    let mi = weight(m)?;
    check_label(i, s)?;
    let sq = mi * mi;
    let quartic = sq.checked_mul(sq).expect("weight overflow");
    // <1> + <-1> x_i
    let mut pair = TildeElement::one(s);
    pair.add_term(var_bit(i), UnivElement::MINUS_ONE);
    let k = if mi % 2 == 1 { (sq - 1) / 2 } else { sq / 2 };
    let mut e = pair.scale(k);
    e.add_term(0, UnivElement::H.scale((quartic - sq) / 2));
    if mi % 2 == 1 {
        e.add_term(0, UnivElement::ONE);
    }
    Ok(e)
}

fn check_label(j: usize, s: usize) -> Result<()> {
    if (1..=s).contains(&j) {
        Ok(())
    } else {
        Err(Error::VariableOutOfRange { index: j, s })
    }
}

/// Combinatorial data of one twin tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TwinTreeDescriptor {
    pub t: usize,
    pub m_circ: u64,
    /// Bounded twin edges as `(weight, label)`.
    pub edges: Vec<(u64, usize)>,
    /// Labels of the double points, in marking order.
    pub labels: Vec<usize>,
}

impl TwinTreeDescriptor {
    pub fn new(m_circ: u64, edges: Vec<(u64, usize)>, labels: Vec<usize>) -> Result<Self> {
        let d = TwinTreeDescriptor {
            t: labels.len(),
            m_circ,
            edges,
            labels,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidDescriptor(msg.to_string()));
        if self.labels.is_empty() {
            return bad("no double points");
        }
        if self.t != self.labels.len() {
            return bad("t differs from the number of labels");
        }
        let mut sorted = self.labels.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != self.labels.len() {
            return bad("repeated label");
        }
        if self.edges.len() > self.t {
            return bad("more bounded twin edges than double points");
        }
        for &(w, l) in &self.edges {
            if w == 0 {
                return bad("zero weight twin edge");
            }
            if !self.labels.contains(&l) {
                return bad("twin edge label is not a double point of the tree");
            }
        }
        Ok(())
    }

    fn label_mask(&self) -> VarSet {
        self.labels.iter().fold(0, |acc, &l| acc | var_bit(l))
    }
}

/// `Σ_{I ⊆ labels, |I| ≡ parity} x_I`.
pub fn parity_subset_sum(labels: &[usize], parity: u64, s: usize) -> TildeElement {
    let mut e = TildeElement::zero(s);
    for sub in 0u32..(1 << labels.len()) {
        if u64::from(sub.count_ones() % 2) == parity % 2 {
            let set = labels
                .iter()
                .enumerate()
                .filter(|(k, _)| sub >> k & 1 == 1)
                .fold(0, |acc, (_, &l)| acc | var_bit(l));
            e.add_term(set, UnivElement::ONE);
        }
    }
    e
}

pub fn twin_tree_factor(desc: &TwinTreeDescriptor, s: usize) -> Result<TildeElement> {
    desc.validate()?;
    for &l in &desc.labels {
        check_label(l, s)?;
    }
    let power_of_two = if desc.t % 2 == 1 {
        UnivElement::ONE
    } else {
        UnivElement::TWO
    };
    let mut e = parity_subset_sum(&desc.labels, desc.m_circ, s).scale_univ(power_of_two);
    for &(w, l) in &desc.edges {
        e = &e * &twin_edge_factor(w, l, s)?;
    }
    Ok(e)
}

/// A single factor of the vertex-product multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LocalFactor {
    ElevatorSquare { m: u64 },
    TypeA { m: u64, j: usize },
    TypeR { j: usize },
    TwinEdge { m: u64, i: usize },
    TwinTree(TwinTreeDescriptor),
    UnitEnd,
}

impl LocalFactor {
    pub fn evaluate(&self, s: usize) -> Result<TildeElement> {
        match self {
            LocalFactor::ElevatorSquare { m } => {
                Ok(TildeElement::constant(s, elevator_square(*m)?))
            }
            LocalFactor::TypeA { m, j } => type_a_factor(*m, *j, s),
            LocalFactor::TypeR { j } => type_r_factor(*j, s),
            LocalFactor::TwinEdge { m, i } => twin_edge_factor(*m, *i, s),
            LocalFactor::TwinTree(desc) => twin_tree_factor(desc, s),
            LocalFactor::UnitEnd => Ok(TildeElement::one(s)),
        }
    }

    /// Rank read off the weights alone.
    pub fn expected_rank(&self) -> i64 {
        let sq = |m: u64| (m * m) as i64;
        match self {
            LocalFactor::ElevatorSquare { m } | LocalFactor::TypeA { m, .. } => sq(*m),
            LocalFactor::TypeR { .. } => 2,
            LocalFactor::TwinEdge { m, .. } => sq(*m) * sq(*m),
            LocalFactor::TwinTree(d) => {
                d.edges.iter().map(|&(w, _)| sq(w) * sq(w)).product::<i64>() << (d.t - 1)
            }
            LocalFactor::UnitEnd => 1,
        }
    }

    /// Image in `R_s` from the residual table, without evaluating in `GW~`.
    pub fn residual_factor(&self, s: usize) -> Result<ResidualTilde> {
        let eps = ResidualElement::EPS;
        let one = ResidualElement::ONE;
        // ε(1 + x_j)
        let beta = |j: usize| {
            let mut r = ResidualTilde::constant(s, eps);
            r.add_term(var_bit(j), eps);
            r
        };
        Ok(match self {
            LocalFactor::ElevatorSquare { m } => {
                weight(*m)?;
                ResidualTilde::constant(
                    s,
                    if m % 2 == 1 {
                        one
                    } else {
                        ResidualElement::ZERO
                    },
                )
            }
            LocalFactor::TypeA { m, j } => {
                weight(*m)?;
                check_label(*j, s)?;
                if m % 2 == 0 {
                    ResidualTilde::zero(s)
                } else if m % 4 == 3 {
                    &ResidualTilde::one(s) + &beta(*j)
                } else {
                    ResidualTilde::one(s)
                }
            }
            LocalFactor::TypeR { j } => {
                check_label(*j, s)?;
                beta(*j)
            }
            LocalFactor::TwinEdge { m, i } => {
                weight(*m)?;
                check_label(*i, s)?;
                ResidualTilde::constant(
                    s,
                    if m % 2 == 1 {
                        one
                    } else {
                        ResidualElement::ZERO
                    },
                )
            }
            LocalFactor::TwinTree(d) => {
                d.validate()?;
                if d.edges.iter().any(|&(w, _)| w % 2 == 0) {
                    ResidualTilde::zero(s)
                } else {
                    let coeff = if d.t % 2 == 1 { one } else { eps };
                    let mask = d.label_mask();
                    let mut r = ResidualTilde::zero(s);
                    let mut sub = mask;
                    // enumerate the submasks of `mask`
                    loop {
                        if u64::from(sub.count_ones() % 2) == d.m_circ % 2 {
                            r.add_term(sub, coeff);
                        }
                        if sub == 0 {
                            break;
                        }
                        sub = (sub - 1) & mask;
                    }
                    r
                }
            }
            LocalFactor::UnitEnd => ResidualTilde::one(s),
        })
    }
}

/// Constructors under test; swapping one out lets a suite see a broken build.
#[derive(Clone, Copy)]
pub struct FactorTable {
    pub m_a1: fn(u64, &SquareClassGroup) -> Result<HypUnivElement>,
    pub gamma_hat: fn(u64, DParam, &SquareClassGroup) -> Result<HypUnivElement>,
    pub elevator_square: fn(u64) -> Result<UnivElement>,
    pub type_a: fn(u64, usize, usize) -> Result<TildeElement>,
}

impl Default for FactorTable {
    fn default() -> Self {
        FactorTable {
            m_a1: m_a1_raw,
            gamma_hat: gamma_hat_raw,
            elevator_square,
            type_a: type_a_factor,
        }
    }
}

fn lift(e: &TildeElement, group: &SquareClassGroup) -> Result<HypUnivElement> {
    e.to_hyp_univ(group)
}

/// The four identity families at every weight `1..=m_max`, in a fixed order.
pub fn identity_checks(table: &FactorTable, m_max: u64) -> Vec<Check> {
    let mut out = Vec::new();
    for m in 1..=m_max {
        out.extend(identity_checks_at(table, m));
    }
    out
}

fn identity_checks_at(table: &FactorTable, m: u64) -> Vec<Check> {
    let group = raw_carrier(m);
    let run = |id: String, f: &dyn Fn() -> Result<(String, String)>| match f() {
        Ok((got, want)) => {
            if got == want {
                Check::new(id, true)
            } else {
                Check::with_detail(id, false, format!("got {got}, expected {want}"))
            }
        }
        Err(e) => Check::with_detail(id, false, e.to_string()),
    };
    vec![
        run(format!("type_a_product/m={m}"), &|| {
            let raw = &(table.gamma_hat)(m, DParam::Formal, &group)? * &(table.m_a1)(m, &group)?;
            let closed = lift(&(table.type_a)(m, 1, 1)?, &group)?;
            Ok((raw.display(&group), closed.display(&group)))
        }),
        run(format!("square_field/m={m}"), &|| {
            let g = (table.gamma_hat)(m, DParam::One, &group)?;
            Ok((g.display(&group), (table.m_a1)(m, &group)?.display(&group)))
        }),
        run(format!("elevator_square/m={m}"), &|| {
            let a = (table.m_a1)(m, &group)?;
            let closed = lift(
                &TildeElement::constant(0, (table.elevator_square)(m)?),
                &group,
            )?;
            Ok(((&a * &a).display(&group), closed.display(&group)))
        }),
        run(format!("universal_square_field/m={m}"), &|| {
            let prod = &(table.gamma_hat)(m, DParam::One, &group)? * &(table.m_a1)(m, &group)?;
            let univ = prod.to_univ(&group)?;
            let dissolved = (table.type_a)(m, 1, 1)?.dissolve(1)?.coeff(0);
            let want = (table.elevator_square)(m)?;
            if dissolved != want {
                return Ok((format!("dissolved {dissolved}"), format!("{want}")));
            }
            Ok((univ.to_string(), want.to_string()))
        }),
    ]
}

/// Residual table against reduction of the evaluated factor, weights `1..=m_max`.
pub fn residual_table_checks(m_max: u64) -> Vec<Check> {
    let s = 3;
    let mut factors = vec![LocalFactor::TypeR { j: 2 }, LocalFactor::UnitEnd];
    for m in 1..=m_max {
        factors.push(LocalFactor::ElevatorSquare { m });
        factors.push(LocalFactor::TypeA { m, j: 1 });
        factors.push(LocalFactor::TwinEdge { m, i: 3 });
    }
    for t in 1..=3usize {
        for m_circ in 1..=2 {
            for w in [1u64, 2, 3] {
                let labels: Vec<usize> = (1..=t).collect();
                let d = TwinTreeDescriptor::new(m_circ, vec![(w, 1)], labels).expect("valid");
                factors.push(LocalFactor::TwinTree(d));
            }
        }
    }
    factors
        .iter()
        .map(|f| {
            let id = format!(
                "residual/{}",
                serde_json::to_string(f).expect("serialisable")
            );
            match (f.residual_factor(s), f.evaluate(s)) {
                (Ok(table), Ok(value)) => {
                    let reduced = crate::gw::residual_reduce_tilde(&value);
                    Check::equal(id, &table, &reduced)
                }
                (Err(e), _) | (_, Err(e)) => Check::with_detail(id, false, e.to_string()),
            }
        })
        .collect()
}
