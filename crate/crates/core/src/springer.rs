//! Anisotropy of diagonal forms over `Q((u_1))…((u_s))` by Springer's theorem.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::check::Check;
use crate::error::{Error, Result};

/// `unit · ∏ u_l^{bit_l}` with `unit ∈ {±1, ±2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Entry {
    pub unit: i8,
    /// Bit `l-1` is the exponent of `u_l` modulo 2.
    pub vars: u32,
}

impl Entry {
    /// Reduce `n · ∏ u^{bits}` modulo rational squares.
    pub fn new(n: i64, vars: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidForm("zero entry".into()));
        }
        let mut rest = n.unsigned_abs();
        let mut two = 0;
        while rest.is_multiple_of(2) {
            rest /= 2;
            two ^= 1;
        }
        let root = (rest as f64).sqrt().round() as u64;
        if root * root != rest {
            return Err(Error::InvalidForm(format!(
                "{n} is not ±1 or ±2 times a square"
            )));
        }
        let unit = if two == 1 { 2 } else { 1 } * if n < 0 { -1 } else { 1 };
        Ok(Entry { unit, vars })
    }

    fn negate(self) -> Self {
        Entry {
            unit: -self.unit,
            vars: self.vars,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DiagonalForm {
    pub entries: Vec<Entry>,
}

impl DiagonalForm {
    pub fn new(entries: Vec<Entry>) -> Self {
        DiagonalForm { entries }
    }

    /// Form over the rationals from integer entries.
    pub fn rational(values: &[i64]) -> Result<Self> {
        Ok(DiagonalForm {
            entries: values
                .iter()
                .map(|&v| Entry::new(v, 0))
                .collect::<Result<_>>()?,
        })
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn negate(&self) -> Self {
        DiagonalForm {
            entries: self.entries.iter().map(|e| e.negate()).collect(),
        }
    }

    /// `self ⊗ <1, c·u^{vars}>`.
    pub fn tensor_binary(&self, unit: i8, vars: u32) -> Self {
        let mut entries = self.entries.clone();
        entries.extend(self.entries.iter().map(|e| Entry {
            unit: normalise(e.unit * unit),
            vars: e.vars ^ vars,
        }));
        DiagonalForm { entries }
    }

    /// Highest Laurent variable that occurs, 1-based.
    pub fn outermost_variable(&self) -> Option<usize> {
        let all = self.entries.iter().fold(0u32, |acc, e| acc | e.vars);
        (all != 0).then(|| 32 - all.leading_zeros() as usize)
    }

    pub fn num_vars(&self) -> usize {
        self.outermost_variable().unwrap_or(0)
    }
}

/// Products of units in `{±1, ±2}` taken modulo squares.
fn normalise(u: i8) -> i8 {
    match u {
        4 => 1,
        -4 => -1,
        other => other,
    }
}

impl fmt::Display for DiagonalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|e| {
                let vars: String = (1..=32)
                    .filter(|l| e.vars >> (l - 1) & 1 == 1)
                    .map(|l| format!("u{l}"))
                    .collect();
                format!("{}{}", e.unit, vars)
            })
            .collect();
        write!(f, "<{}>", parts.join(", "))
    }
}

/// `<1, -2> ⊗ <1, -u_1> ⊗ … ⊗ <1, -u_s>`.
pub fn pfister_concrete(s: usize) -> DiagonalForm {
    let base = DiagonalForm::new(vec![
        Entry { unit: 1, vars: 0 },
        Entry { unit: -2, vars: 0 },
    ]);
    (1..=s).fold(base, |f, l| f.tensor_binary(-1, 1 << (l - 1)))
}

/// First and second residue forms with respect to `u_var`.
pub fn springer_split(f: &DiagonalForm, var: usize) -> (DiagonalForm, DiagonalForm) {
    let bit = 1u32 << (var - 1);
    let mut unit = Vec::new();
    let mut uniformizer = Vec::new();
    for e in &f.entries {
        if e.vars & bit == 0 {
            unit.push(*e);
        } else {
            uniformizer.push(Entry {
                unit: e.unit,
                vars: e.vars ^ bit,
            });
        }
    }
    (DiagonalForm::new(unit), DiagonalForm::new(uniformizer))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Anisotropic,
    Isotropic,
    Unsupported,
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(match self {
            Verdict::Anisotropic => "aniso",
            Verdict::Isotropic => "iso",
            Verdict::Unsupported => "unsupported",
        })
    }
}

fn rational_verdict(f: &DiagonalForm) -> Verdict {
    let units: Vec<i64> = f.entries.iter().map(|e| i64::from(e.unit)).collect();
    if units.len() <= 1 || units.iter().all(|&u| u > 0) || units.iter().all(|&u| u < 0) {
        return Verdict::Anisotropic;
    }
    if let [a, b] = units[..] {
        return if matches!(-a * b, 1 | 4) {
            Verdict::Isotropic
        } else {
            Verdict::Anisotropic
        };
    }
    Verdict::Unsupported
}

/// Strip the outermost variable until only rational forms remain.
pub fn is_anisotropic(f: &DiagonalForm) -> Verdict {
    let Some(var) = f.outermost_variable() else {
        return rational_verdict(f);
    };
    let (a, b) = springer_split(f, var);
    match (is_anisotropic(&a), is_anisotropic(&b)) {
        (Verdict::Isotropic, _) | (_, Verdict::Isotropic) => Verdict::Isotropic,
        (Verdict::Unsupported, _) | (_, Verdict::Unsupported) => Verdict::Unsupported,
        _ => Verdict::Anisotropic,
    }
}

#[derive(Serialize)]
pub struct FormReport {
    pub schema_version: u32,
    pub form: Vec<(i8, Vec<u8>)>,
    pub verdict: Verdict,
}

pub fn form_report(f: &DiagonalForm) -> FormReport {
    let s = f.num_vars();
    FormReport {
        schema_version: crate::wallcross::SCHEMA_VERSION,
        form: f
            .entries
            .iter()
            .map(|e| (e.unit, (0..s).map(|l| (e.vars >> l & 1) as u8).collect()))
            .collect(),
        verdict: is_anisotropic(f),
    }
}

/// Anisotropy of `Π_s` for `s = 1..=s_max` together with its residue forms.
pub fn springer_checks(s_max: usize) -> Vec<Check> {
    let mut out = Vec::new();
    for s in 1..=s_max {
        let p = pfister_concrete(s);
        out.push(Check::equal(
            format!("pfister_anisotropic/s={s}/rank={}", p.rank()),
            &is_anisotropic(&p),
            &Verdict::Anisotropic,
        ));
    }
    let hyperbolic = DiagonalForm::rational(&[1, -1]).expect("units");
    out.push(Check::equal(
        "base/<1,-1>",
        &is_anisotropic(&hyperbolic),
        &Verdict::Isotropic,
    ));
    let base = DiagonalForm::rational(&[1, -2]).expect("units");
    out.push(Check::equal(
        "base/<1,-2>",
        &is_anisotropic(&base),
        &Verdict::Anisotropic,
    ));
    for i in 1..=s_max {
        let (a, b) = springer_split(&pfister_concrete(i), i);
        let prev = pfister_concrete(i - 1);
        let shape = a == prev && b == prev.negate();
        let stripped = a.num_vars() < i && b.num_vars() < i;
        out.push(Check::new(format!("residues/i={i}"), shape && stripped));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(unit: i8, vars: u32) -> Entry {
        Entry { unit, vars }
    }

    #[test]
    fn pfister_expansion() {
        assert_eq!(
            pfister_concrete(0),
            DiagonalForm::rational(&[1, -2]).unwrap()
        );
        assert_eq!(
            pfister_concrete(1),
            DiagonalForm::new(vec![e(1, 0), e(-2, 0), e(-1, 1), e(2, 1)])
        );
        for s in 0..=8 {
            assert_eq!(pfister_concrete(s).rank(), 1 << (s + 1));
        }
    }

    #[test]
    fn split_examples() {
        let (a, b) = springer_split(&pfister_concrete(1), 1);
        assert_eq!(a, DiagonalForm::rational(&[1, -2]).unwrap());
        assert_eq!(b, DiagonalForm::rational(&[-1, 2]).unwrap());
        let plain = DiagonalForm::rational(&[1, 2]).unwrap();
        assert_eq!(
            springer_split(&plain, 1),
            (plain.clone(), DiagonalForm::default())
        );
        let (a, b) = springer_split(&DiagonalForm::new(vec![e(1, 1), e(-1, 1)]), 1);
        assert_eq!(a.rank(), 0);
        assert_eq!(b, DiagonalForm::rational(&[1, -1]).unwrap());
    }

    #[test]
    fn split_preserves_rank() {
        for s in 1..=6 {
            let p = pfister_concrete(s);
            for var in 1..=s {
                let (a, b) = springer_split(&p, var);
                assert_eq!(a.rank() + b.rank(), p.rank());
            }
        }
    }

    #[test]
    fn verdicts() {
        assert_eq!(
            is_anisotropic(&DiagonalForm::rational(&[1, -1]).unwrap()),
            Verdict::Isotropic
        );
        assert_eq!(
            is_anisotropic(&DiagonalForm::rational(&[1, -2]).unwrap()),
            Verdict::Anisotropic
        );
        assert_eq!(
            is_anisotropic(&DiagonalForm::rational(&[2, -8]).unwrap()),
            Verdict::Isotropic
        );
        assert_eq!(
            is_anisotropic(&DiagonalForm::rational(&[1, 1, 2]).unwrap()),
            Verdict::Anisotropic
        );
        assert_eq!(
            is_anisotropic(&DiagonalForm::rational(&[1, 1, -2]).unwrap()),
            Verdict::Unsupported
        );
        assert_eq!(
            is_anisotropic(&DiagonalForm::default()),
            Verdict::Anisotropic
        );
        // <1, -u1, u1, -1>: second residue <-1, 1> is isotropic
        let f = DiagonalForm::new(vec![e(1, 0), e(-1, 1), e(1, 1), e(2, 0)]);
        assert_eq!(is_anisotropic(&f), Verdict::Isotropic);
    }

    #[test]
    fn entries_reduce_modulo_squares() {
        assert_eq!(Entry::new(-18, 0).unwrap(), e(-2, 0));
        assert_eq!(Entry::new(16, 3).unwrap(), e(1, 3));
        assert!(Entry::new(3, 0).is_err());
        assert!(Entry::new(0, 0).is_err());
    }

    #[test]
    fn suite_passes() {
        let checks = springer_checks(8);
        assert_eq!(checks.len(), 8 + 2 + 8);
        assert!(checks.iter().all(|c| c.pass), "{checks:?}");
    }

    #[test]
    fn json_shape() {
        let text = serde_json::to_string(&form_report(&pfister_concrete(1))).unwrap();
        assert_eq!(
            text,
            r#"{"schema_version":1,"form":[[1,[0]],[-2,[0]],[-1,[1]],[2,[1]]],"verdict":"aniso"}"#
        );
    }
}
