//! Named verification suites with deterministic, serialisable results.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::check::{all_pass, Check};
use crate::error::{Error, Result};
use crate::floor::{
    dissolve_specialize, enumerate_merge_configs, floor_count, kontsevich_nd, unit_shift_graph,
    MergeConfiguration,
};
use crate::gw::tilde::var_bit;
use crate::gw::{specialize_field, FieldModel, FieldValue, TildeElement, UnivElement};
use crate::local_factors::{
    identity_checks, residual_table_checks, twin_tree_factor, type_a_factor, type_r_factor,
    FactorTable, TwinTreeDescriptor,
};
use crate::springer::springer_checks;
use crate::wallcross::{
    pfister_checks, residual_report, sweep_unit_shifts, unit_shift_pairs, FieldSweep,
    SCHEMA_VERSION,
};

pub const SUITE_NAMES: [&str; 9] = [
    "identities",
    "laws",
    "counts",
    "anchors",
    "dissolution",
    "wallcross",
    "residual",
    "springer",
    "graph",
];

#[derive(Clone, Copy)]
pub struct SuiteOptions {
    pub table: FactorTable,
    /// Largest degree swept by the wall-crossing suite.
    pub wallcross_max_degree: u32,
    /// Record wall-clock time per block. Off by default so output is reproducible.
    pub timings: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            table: FactorTable::default(),
            wallcross_max_degree: 3,
            timings: false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Block {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub schema_version: u32,
    pub suite: String,
    pub pass: bool,
    pub checks_run: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
    pub blocks: Vec<Block>,
}

impl SuiteResult {
    pub fn checks(&self) -> impl Iterator<Item = &Check> {
        self.blocks.iter().flat_map(|b| &b.checks)
    }
}

pub fn run_suite(name: &str, options: &SuiteOptions) -> Result<SuiteResult> {
    let names: Vec<&str> = match name {
        "all" => SUITE_NAMES.to_vec(),
        n if SUITE_NAMES.contains(&n) => vec![n],
        other => return Err(Error::UnknownSuite(other.to_string())),
    };
    let mut blocks = Vec::new();
    for n in names {
        let start = Instant::now();
        let checks = block_checks(n, options)?;
        blocks.push(Block {
            name: n.to_string(),
            pass: all_pass(&checks),
            elapsed_ms: options.timings.then(|| start.elapsed().as_secs_f64() * 1e3),
            checks,
        });
    }
    let all: Vec<&Check> = blocks.iter().flat_map(|b| &b.checks).collect();
    let failures = all.iter().filter(|c| !c.pass).count();
    Ok(SuiteResult {
        schema_version: SCHEMA_VERSION,
        suite: name.to_string(),
        pass: failures == 0,
        checks_run: all.len(),
        failures,
        first_failure: all.iter().find(|c| !c.pass).map(|c| c.id.clone()),
        blocks,
    })
}

fn block_checks(name: &str, options: &SuiteOptions) -> Result<Vec<Check>> {
    match name {
        "identities" => Ok(identity_checks(&options.table, 60)),
        "laws" => law_checks(),
        "counts" => count_checks(),
        "anchors" => anchor_checks(),
        "dissolution" => dissolution_checks(),
        "wallcross" => wallcross_checks(options.wallcross_max_degree),
        "residual" => residual_checks(),
        "springer" => Ok(springer_checks(8)),
        "graph" => Ok(graph_checks(12)),
        other => Err(Error::UnknownSuite(other.to_string())),
    }
}

fn marks(d: u32) -> usize {
    3 * d as usize - 1
}

/// Relations of the Grothendieck-Witt ring in each finite field, plus
/// two-torsion of the Pfister element.
pub fn law_checks() -> Result<Vec<Check>> {
    let qs = [5, 7, 11, 13, 17];
    let mut out = Vec::new();
    for q in qs {
        let model = FieldModel::finite(q)?;
        let h = model.hyperbolic();
        let one = model.symbol(false);
        let two = model.symbol(model.two_class());
        let mut ok = [true; 4];
        for a in [false, true] {
            let sa = model.symbol(a);
            ok[0] &= &h * &sa == h;
            ok[3] &= (&sa - &(&two * &sa)).scale(2).is_zero();
            for d in [false, true] {
                ok[2] &= (&h * &(&model.symbol(d) - &one)).is_zero();
            }
        }
        ok[1] = &h * &h == h.scale(2);
        for (law, pass) in ["h<a>=h", "h^2=2h", "h(<d>-<1>)=0", "2(<a>-<2a>)=0"]
            .iter()
            .zip(ok)
        {
            out.push(Check::new(format!("law/{law}/q={q}"), pass));
        }
    }
    out.extend(pfister_checks(3, &qs)?);
    Ok(out)
}

/// Ranks against the Kontsevich numbers and the cubic count with its
/// Welschinger signatures.
pub fn count_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (d, n_d) in [(1, 1), (2, 1), (3, 12), (4, 620)] {
        out.push(Check::equal(
            format!("kontsevich/d={d}"),
            &kontsevich_nd(d),
            &n_d,
        ));
    }
    for d in 1..=4u32 {
        let n = marks(d);
        for s in 0..=n / 2 {
            let configs = enumerate_merge_configs(n, s);
            let ranks: Vec<i64> = configs
                .par_iter()
                .map(|c| floor_count(d, c).map(|e| e.rank()))
                .collect::<Result<_>>()?;
            let bad: Vec<String> = configs
                .iter()
                .zip(&ranks)
                .filter(|(_, &r)| i128::from(r) != kontsevich_nd(d))
                .map(|(c, r)| format!("{c}: {r}"))
                .collect();
            out.push(Check::with_detail(
                format!("rank/d={d}/s={s}/configs={}", configs.len()),
                bad.is_empty(),
                bad.join("; "),
            ));
        }
    }
    let cubic = floor_count(3, &MergeConfiguration::empty(8))?;
    out.push(Check::equal(
        "cubic/unmerged",
        &cubic,
        &TildeElement::constant(0, UnivElement::new(8, 2, 0)),
    ));
    for s in 0..=4 {
        let sigs: Vec<i64> = enumerate_merge_configs(8, s)
            .par_iter()
            .map(|c| {
                let e = floor_count(3, c)?;
                Ok(specialize_field(&e, FieldModel::Real, &vec![true; s])?
                    .signature()
                    .unwrap_or(i64::MIN))
            })
            .collect::<Result<_>>()?;
        let constant = sigs.windows(2).all(|w| w[0] == w[1]);
        let detail = format!("signature {}", sigs[0]);
        out.push(Check::with_detail(
            format!("cubic/signature_constant/s={s}"),
            constant,
            detail,
        ));
    }
    let base = specialize_field(&cubic, FieldModel::Real, &[])?;
    out.push(Check::equal(
        "cubic/signature/s=0",
        &base.signature(),
        &Some(8),
    ));
    Ok(out)
}

/// Closed-form local factors compared with hand-expanded values.
pub fn anchor_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();

    let mut gamma = TildeElement::constant(2, UnivElement::new(1, 3, 1));
    gamma.add_term(var_bit(2), UnivElement::MINUS_TWO);
    out.push(Check::equal(
        "anchor/type_a/m=3",
        &type_a_factor(3, 2, 2)?,
        &gamma,
    ));

    let t1 = TwinTreeDescriptor::new(2, vec![], vec![1])?;
    out.push(Check::equal(
        "anchor/twin/T1",
        &twin_tree_factor(&t1, 1)?,
        &TildeElement::one(1),
    ));

    let t2 = TwinTreeDescriptor::new(1, vec![], vec![1, 2])?;
    let mut want = TildeElement::monomial(2, var_bit(1), UnivElement::TWO);
    want.add_term(var_bit(2), UnivElement::TWO);
    out.push(Check::equal(
        "anchor/twin/T2",
        &twin_tree_factor(&t2, 2)?,
        &want,
    ));

    let t3 = TwinTreeDescriptor::new(3, vec![(2, 1)], (1..=7).collect())?;
    let mut edge = TildeElement::constant(7, UnivElement::new(2, 6, 0));
    edge.add_term(var_bit(1), UnivElement::MINUS_ONE.scale(2));
    let mut odd = TildeElement::zero(7);
    for mask in (0u32..128).filter(|m| m.count_ones() % 2 == 1) {
        odd.add_term(mask, UnivElement::ONE);
    }
    out.push(Check::equal(
        "anchor/twin/T3",
        &twin_tree_factor(&t3, 7)?,
        &(&edge * &odd),
    ));

    let twin = TwinTreeDescriptor::new(1, vec![], vec![1, 2])?;
    let product = &twin_tree_factor(&twin, 4)? * &type_r_factor(4, 4)?;
    let mut want = TildeElement::zero(4);
    for mask in [0b0001, 0b0010, 0b1001, 0b1010] {
        want.add_term(mask, UnivElement::ONE);
    }
    out.push(Check::equal("anchor/twin_times_type_r", &product, &want));
    Ok(out)
}

fn field_images(e: &TildeElement, model: FieldModel) -> Result<Vec<FieldValue>> {
    model
        .all_assignments(e.num_vars())
        .iter()
        .map(|a| specialize_field(e, model, a))
        .collect()
}

/// Setting one parameter to a square against recounting with that pair split.
pub fn dissolution_checks() -> Result<Vec<Check>> {
    let models = [5, 7, 11].map(|q| FieldModel::finite(q).expect("odd prime"));
    let mut jobs = Vec::new();
    for d in 1..=3u32 {
        let n = marks(d);
        for s in 1..=n / 2 {
            for cfg in enumerate_merge_configs(n, s) {
                for j in 1..=s {
                    jobs.push((d, cfg.clone(), j));
                }
            }
        }
    }
    jobs.par_iter()
        .map(|(d, cfg, j)| {
            let lhs = dissolve_specialize(&floor_count(*d, cfg)?, *j)?;
            let rhs = floor_count(*d, &cfg.dissolve(*j)?)?;
            let mut ok = true;
            for model in models {
                ok &= field_images(&lhs, model)? == field_images(&rhs, model)?;
            }
            Ok(Check::new(format!("dissolve/d={d}/cfg={cfg}/j={j}"), ok))
        })
        .collect()
}

pub fn wallcross_checks(max_degree: u32) -> Result<Vec<Check>> {
    let sweep = FieldSweep::default();
    let mut out = Vec::new();
    for d in 2..=max_degree {
        for s in 0..=marks(d) / 2 {
            for r in sweep_unit_shifts(d, s, &sweep)? {
                let id = format!(
                    "wallcross/d={d}/{}->{}",
                    fmt_positions(&r.from),
                    fmt_positions(&r.to)
                );
                let detail = if r.pass {
                    String::new()
                } else {
                    serde_json::to_string(&r.checks).expect("serialisable")
                };
                out.push(Check::with_detail(id, r.pass, detail));
            }
        }
    }
    Ok(out)
}

fn fmt_positions(p: &[usize]) -> String {
    MergeConfiguration {
        n: 0,
        positions: p.to_vec(),
    }
    .to_string()
}

/// Residual table from two code paths, then every unit shift at `d ≤ 3`.
pub fn residual_checks() -> Result<Vec<Check>> {
    let mut out = residual_table_checks(40);
    for d in 2..=3u32 {
        let n = marks(d);
        for s in 1..=n / 2 {
            let reports: Vec<Check> = unit_shift_pairs(n, s)
                .par_iter()
                .map(|(from, to)| {
                    let r = residual_report(d, from, to)?;
                    let detail = if r.pass {
                        String::new()
                    } else {
                        serde_json::to_string(&r).expect("serialisable")
                    };
                    Ok(Check::with_detail(
                        format!("residual/d={d}/{from}->{to}"),
                        r.pass,
                        detail,
                    ))
                })
                .collect::<Result<_>>()?;
            out.extend(reports);
        }
    }
    Ok(out)
}

pub fn graph_checks(n_max: usize) -> Vec<Check> {
    let mut out = Vec::new();
    for n in 0..=n_max {
        for s in 0..=n / 2 {
            let g = unit_shift_graph(&enumerate_merge_configs(n, s));
            out.push(Check::new(format!("graph/n={n}/s={s}"), g.is_connected()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identities_suite_has_four_families_per_weight() {
        let r = run_suite("identities", &SuiteOptions::default()).unwrap();
        assert!(r.pass);
        assert_eq!(r.checks_run, 240);
    }

    #[test]
    fn unknown_suite_is_an_error() {
        assert!(matches!(
            run_suite("nope", &SuiteOptions::default()),
            Err(Error::UnknownSuite(_))
        ));
    }

    #[test]
    fn small_suites_pass() {
        for name in ["laws", "anchors", "springer", "graph"] {
            let r = run_suite(name, &SuiteOptions::default()).unwrap();
            assert!(r.pass, "{name}: {:?}", r.first_failure);
        }
    }

    #[test]
    fn json_is_stable() {
        let a = serde_json::to_string(&run_suite("anchors", &SuiteOptions::default()).unwrap())
            .unwrap();
        let b = serde_json::to_string(&run_suite("anchors", &SuiteOptions::default()).unwrap())
            .unwrap();
        assert_eq!(a, b);
        assert!(!a.contains("elapsed"));
    }
}
