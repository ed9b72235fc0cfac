//! Wall-crossing differences between merge configurations and their checks.

use rayon::prelude::*;
use serde::Serialize;

use crate::check::Check;
use crate::error::{Error, Result};
use crate::floor::{floor_count, MergeConfiguration};
use crate::gw::residual::{residual_reduce, residual_reduce_tilde, ResidualElement, ResidualTilde};
use crate::gw::tilde::full_set;
use crate::gw::{
    binomial_product, cascade_decompose, specialize_field, univ_coords, Cascade, FieldModel,
    TildeElement, UnivElement,
};

pub const SCHEMA_VERSION: u32 = 1;

/// `N(d, from) - N(d, to)`.
pub fn delta_count(
    d: u32,
    from: &MergeConfiguration,
    to: &MergeConfiguration,
) -> Result<TildeElement> {
    if from.s() != to.s() {
        return Err(Error::InvalidConfig(format!(
            "{from} and {to} have different numbers of pairs"
        )));
    }
    Ok(&floor_count(d, from)? - &floor_count(d, to)?)
}

/// `(<1> - <2>) · ∏_l (<1> - x_l)`.
pub fn pfister_element(s: usize) -> TildeElement {
    let base = TildeElement::constant(s, UnivElement::ONE - UnivElement::TWO);
    (1..=s).fold(base, |acc, l| {
        &acc * &(&TildeElement::one(s) - &TildeElement::var(s, l))
    })
}

/// Pair `s` first, then the remaining labels in increasing order.
pub fn proof_order(s: usize) -> Vec<usize> {
    if s == 0 {
        return Vec::new();
    }
    std::iter::once(s).chain(1..s).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniversalCoefficient {
    pub c: UnivElement,
    pub cascade: Cascade,
}

pub fn extract_universal_coefficient(delta: &TildeElement) -> UniversalCoefficient {
    extract_with_order(delta, &proof_order(delta.num_vars())).expect("proof order is a permutation")
}

pub fn extract_with_order(delta: &TildeElement, order: &[usize]) -> Result<UniversalCoefficient> {
    let cascade = cascade_decompose(delta, order)?;
    Ok(UniversalCoefficient {
        c: cascade.top,
        cascade,
    })
}

/// Field models and assignments to test a wall-crossing against.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldSweep {
    pub real: bool,
    pub closed: bool,
    pub finite: Vec<u64>,
    /// Finite fields used for the witness terms.
    pub witness_fields: Vec<u64>,
}

impl Default for FieldSweep {
    fn default() -> Self {
        FieldSweep {
            real: true,
            closed: true,
            finite: vec![5, 7, 11, 13],
            witness_fields: vec![5, 7, 11],
        }
    }
}

impl FieldSweep {
    fn models(&self, d: u32) -> Result<Vec<FieldModel>> {
        let mut out = Vec::new();
        if self.real {
            out.push(FieldModel::Real);
        }
        for &q in &self.finite {
            out.push(finite_for_degree(q, d)?);
        }
        if self.closed {
            out.push(FieldModel::Closed);
        }
        Ok(out)
    }
}

fn finite_for_degree(q: u64, d: u32) -> Result<FieldModel> {
    let model = FieldModel::finite(q)?;
    if q <= u64::from(d) {
        return Err(Error::UnsupportedField(format!(
            "F_{q} needs q > degree {d}"
        )));
    }
    Ok(model)
}

pub fn assignment_label(model: FieldModel, assign: &[bool]) -> String {
    assign
        .iter()
        .map(|&b| match (model, b) {
            (FieldModel::Real, false) => '+',
            (FieldModel::Real, true) => '-',
            (FieldModel::Closed, _) => '*',
            (_, false) => 's',
            (_, true) => 'n',
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldZero {
    pub model: String,
    pub assign: String,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportChecks {
    /// `n1 + n2 = 0`.
    pub broccoli: bool,
    /// `n1` even.
    pub parity: bool,
    pub field_zero: Vec<FieldZero>,
    /// Every cascade summand vanishes in the witness fields.
    pub witnesses_zero: bool,
    pub rank_zero: bool,
    pub reconstruction: bool,
    /// Real signature of `ΔN` at all-negative parameters equals `(n1 + n2)(-2)^s`.
    pub signature_reduction: bool,
}

impl ReportChecks {
    pub fn all_pass(&self) -> bool {
        self.broccoli
            && self.parity
            && self.field_zero.iter().all(|f| f.ok)
            && self.witnesses_zero
            && self.rank_zero
            && self.reconstruction
            && self.signature_reduction
    }
}

/// One cascade term and whether it vanishes in the witness fields.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub q: usize,
    pub variable: usize,
    /// `S_q` itself.
    pub specialisation: TildeElement,
    /// `S_q · ∏_{p<q}(x_{j_p} - 1)` vanishes in every witness field.
    pub summand_zero: bool,
    /// `S_q` alone vanishes in every witness field.
    pub specialisation_zero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WallCrossReport {
    pub schema_version: u32,
    pub d: u32,
    pub s: usize,
    pub from: Vec<usize>,
    pub to: Vec<usize>,
    pub delta: TildeElement,
    pub c: UnivElement,
    pub n1: i64,
    pub n2: i64,
    pub m: i64,
    pub witnesses: Vec<Witness>,
    pub checks: ReportChecks,
    pub pass: bool,
}

fn vanishes_in(e: &TildeElement, models: &[FieldModel]) -> Result<bool> {
    for &model in models {
        for a in model.all_assignments(e.num_vars()) {
            if !specialize_field(e, model, &a)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn wallcross_report(
    d: u32,
    from: &MergeConfiguration,
    to: &MergeConfiguration,
    sweep: &FieldSweep,
) -> Result<WallCrossReport> {
    let delta = delta_count(d, from, to)?;
    report_for_delta(d, from, to, delta, sweep)
}

pub fn report_for_delta(
    d: u32,
    from: &MergeConfiguration,
    to: &MergeConfiguration,
    delta: TildeElement,
    sweep: &FieldSweep,
) -> Result<WallCrossReport> {
    let s = delta.num_vars();
    let extracted = extract_universal_coefficient(&delta);
    let c = extracted.c;
    let (n1, n2, m) = univ_coords(c);

    let mut field_zero = Vec::new();
    for model in sweep.models(d)? {
        for a in model.all_assignments(s) {
            field_zero.push(FieldZero {
                model: model.name(),
                assign: assignment_label(model, &a),
                ok: specialize_field(&delta, model, &a)?.is_zero(),
            });
        }
    }

    let witness_models = sweep
        .witness_fields
        .iter()
        .map(|&q| finite_for_degree(q, d))
        .collect::<Result<Vec<_>>>()?;
    let mut witnesses = Vec::new();
    for q in 1..=s {
        let spec = extracted.cascade.specialisations[q - 1].clone();
        witnesses.push(Witness {
            q,
            variable: extracted.cascade.order[q - 1],
            summand_zero: vanishes_in(&extracted.cascade.summand(q), &witness_models)?,
            specialisation_zero: vanishes_in(&spec, &witness_models)?,
            specialisation: spec,
        });
    }

    let all_negative = vec![true; s];
    let sig = specialize_field(&delta, FieldModel::Real, &all_negative)?
        .signature()
        .expect("real model");
    let checks = ReportChecks {
        broccoli: n1 + n2 == 0,
        parity: n1 % 2 == 0,
        field_zero,
        witnesses_zero: witnesses.iter().all(|w| w.summand_zero),
        rank_zero: delta.rank() == 0,
        reconstruction: extracted.cascade.reconstruct(s) == delta,
        signature_reduction: sig == (n1 + n2) * (-2i64).pow(s as u32),
    };
    let pass = checks.all_pass();
    Ok(WallCrossReport {
        schema_version: SCHEMA_VERSION,
        d,
        s,
        from: from.positions.clone(),
        to: to.positions.clone(),
        delta,
        c,
        n1,
        n2,
        m,
        witnesses,
        checks,
        pass,
    })
}

/// Every unit shift `(cfg, cfg')` with `cfg < cfg'` for the given `(n, s)`.
pub fn unit_shift_pairs(n: usize, s: usize) -> Vec<(MergeConfiguration, MergeConfiguration)> {
    let mut out = Vec::new();
    for cfg in crate::floor::enumerate_merge_configs(n, s) {
        for next in cfg.unit_shifts() {
            if cfg < next {
                out.push((cfg.clone(), next));
            }
        }
    }
    out
}

/// Reports for every unit shift at `(d, s)`, in a fixed order.
pub fn sweep_unit_shifts(d: u32, s: usize, sweep: &FieldSweep) -> Result<Vec<WallCrossReport>> {
    let n = 3 * d as usize - 1;
    unit_shift_pairs(n, s)
        .par_iter()
        .map(|(a, b)| wallcross_report(d, a, b, sweep))
        .collect()
}

/// Transfer congruence against one dissolved target shift.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Transfer {
    pub dissolved_pair: usize,
    pub target_from: Vec<usize>,
    pub target_to: Vec<usize>,
    /// `n2 mod 2` of the target shift.
    pub target_n2: u8,
    pub congruent: bool,
    pub both_zero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidualReport {
    pub schema_version: u32,
    pub d: u32,
    pub s: usize,
    pub from: Vec<usize>,
    pub to: Vec<usize>,
    pub residual_delta: String,
    /// `(n1 mod 2, n2 mod 2)`.
    pub top: (u8, u8),
    /// Reduce then extract agrees with extract then reduce.
    pub two_way_agree: bool,
    /// For `s = 1`: the `<1>`-coordinate of the top coefficient vanishes.
    pub base_case: Option<bool>,
    pub transfers: Vec<Transfer>,
    pub pass: bool,
}

pub fn residual_report(
    d: u32,
    from: &MergeConfiguration,
    to: &MergeConfiguration,
) -> Result<ResidualReport> {
    let delta = delta_count(d, from, to)?;
    let s = delta.num_vars();
    let reduced: ResidualTilde = residual_reduce_tilde(&delta);
    let via_residual = reduced.coeff(full_set(s));
    let via_lift: ResidualElement = residual_reduce(delta.top_coefficient());
    let top = via_lift.bits();
    let base_case = (s == 1).then_some(top.0 == 0);
    let mut transfers = Vec::new();
    if s >= 2 {
        for j in 1..=s {
            let (a, b) = (from.dissolve(j)?, to.dissolve(j)?);
            if a == b {
                continue;
            }
            let target = residual_reduce(delta_count(d, &a, &b)?.top_coefficient()).bits();
            transfers.push(Transfer {
                dissolved_pair: j,
                target_from: a.positions,
                target_to: b.positions,
                target_n2: target.1,
                congruent: top.0 == target.1,
                both_zero: top.0 == 0 && target.1 == 0,
            });
        }
    }
    let two_way_agree = via_residual == via_lift;
    let pass = two_way_agree
        && base_case.unwrap_or(true)
        && transfers.iter().all(|t| t.congruent && t.both_zero);
    Ok(ResidualReport {
        schema_version: SCHEMA_VERSION,
        d,
        s,
        from: from.positions.clone(),
        to: to.positions.clone(),
        residual_delta: reduced.to_string(),
        top,
        two_way_agree,
        base_case,
        transfers,
        pass,
    })
}

/// Checks on the virtual Pfister element over the finite field models.
pub fn pfister_checks(s_max: usize, qs: &[u64]) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for s in 0..=s_max {
        let p = pfister_element(s);
        for &q in qs {
            let model = FieldModel::finite(q)?;
            let mut twice_zero = true;
            let mut plain_zero = true;
            for a in model.all_assignments(s) {
                let v = specialize_field(&p, model, &a)?;
                twice_zero &= v.scale(2).is_zero();
                plain_zero &= v.is_zero();
            }
            out.push(Check::new(
                format!("pfister_two_torsion/s={s}/q={q}"),
                twice_zero,
            ));
            if matches!(q % 8, 1 | 7) {
                out.push(Check::new(
                    format!("pfister_vanishes_with_sqrt2/s={s}/q={q}"),
                    plain_zero,
                ));
            }
        }
    }
    Ok(out)
}

/// `sgn` of `∏(x_l - <1>)` with every parameter negative is `(-2)^s`.
pub fn binomial_signature(s: usize) -> i64 {
    specialize_field(
        &binomial_product(s, &(1..=s).collect::<Vec<_>>()),
        FieldModel::Real,
        &vec![true; s],
    )
    .expect("assignment length")
    .signature()
    .expect("real model")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n: usize, p: &[usize]) -> MergeConfiguration {
        MergeConfiguration::new(n, p.to_vec()).unwrap()
    }

    #[test]
    fn pfister_examples() {
        assert_eq!(
            pfister_element(0),
            TildeElement::constant(0, UnivElement::ONE - UnivElement::TWO)
        );
        let mut p1 = TildeElement::constant(1, UnivElement::ONE - UnivElement::TWO);
        p1.add_term(1, UnivElement::TWO - UnivElement::ONE);
        assert_eq!(pfister_element(1), p1);
        let checks = pfister_checks(3, &[5, 7, 11, 13, 17]).unwrap();
        assert!(checks.iter().all(|c| c.pass));
    }

    #[test]
    fn equal_configurations_cross_to_zero() {
        let a = cfg(8, &[3]);
        assert!(delta_count(3, &a, &a).unwrap().is_zero());
        let r = residual_report(3, &a, &a).unwrap();
        assert_eq!(r.top, (0, 0));
        assert_eq!(r.residual_delta, "0");
    }

    #[test]
    fn hyperbolic_difference_extracts_h() {
        let delta = &TildeElement::monomial(1, 1, UnivElement::H)
            - &TildeElement::constant(1, UnivElement::H);
        let u = extract_universal_coefficient(&delta);
        assert_eq!(u.c, UnivElement::H);
        assert!(u.cascade.specialisations[0].is_zero());
    }

    #[test]
    fn pure_product_has_no_witnesses() {
        let c = UnivElement::new(2, 1, -2);
        let delta = binomial_product(3, &[1, 2, 3]).scale_univ(c);
        let u = extract_universal_coefficient(&delta);
        assert_eq!(u.c, c);
        assert!(u.cascade.specialisations.iter().all(|t| t.is_zero()));
    }

    #[test]
    fn proof_order_starts_with_last_pair() {
        assert_eq!(proof_order(4), vec![4, 1, 2, 3]);
        assert!(proof_order(0).is_empty());
    }

    #[test]
    fn degree_three_single_pair_shift() {
        let r = wallcross_report(3, &cfg(8, &[1]), &cfg(8, &[2]), &FieldSweep::default()).unwrap();
        assert!(r.pass, "{:?}", r.checks);
        assert_eq!(r.n1 + r.n2, 0);
        assert!(binomial_signature(3) == -8);
    }

    #[test]
    fn degree_field_restriction() {
        let sweep = FieldSweep {
            finite: vec![5],
            ..FieldSweep::default()
        };
        assert!(sweep.models(4).is_ok());
        assert!(finite_for_degree(5, 5).is_err());
    }
}
