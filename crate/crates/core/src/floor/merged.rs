use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use super::diagram::{check_degree, enumerate_diagrams, MarkedDiagram, ObjectId, Token};
use super::merge::MergeConfiguration;
use crate::error::{Error, Result};
use crate::gw::residual::ResidualTilde;
use crate::gw::TildeElement;
use crate::local_factors::{LocalFactor, TwinTreeDescriptor};

/// Classification of one merged pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PairTag {
    /// A floor merged with an incident edge of weight `m`.
    TypeA {
        edge: ObjectId,
        floor: ObjectId,
        m: u64,
    },
    /// Two marks whose exchange gives a different marked diagram.
    TypeR { objects: [ObjectId; 2] },
    /// Part of the twin tree with the given index.
    Twin { tree: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwinTree {
    pub descriptor: TwinTreeDescriptor,
    /// Marked objects exchanged by the automorphism.
    pub objects: Vec<ObjectId>,
}

/// An orbit of marked diagrams under exchange of merged marks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergedDiagram {
    /// Lexicographically least member of the orbit.
    pub representative: MarkedDiagram,
    pub config: MergeConfiguration,
    /// Indexed by pair label minus one.
    pub tags: Vec<PairTag>,
    pub twin_trees: Vec<TwinTree>,
    pub orbit_size: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum SwapKind {
    Incident {
        edge: usize,
        floor: usize,
        weight: u8,
    },
    Free,
}

fn floor_index(tokens: &[Token], pos: usize) -> u8 {
    tokens[..pos].iter().filter(|t| **t == Token::Floor).count() as u8
}

fn swap_kind(tokens: &[Token], p0: usize) -> SwapKind {
    let (a, b) = (tokens[p0], tokens[p0 + 1]);
    let incident = |edge: Token, f: u8| match edge {
        Token::Elevator { lo, hi, w } => (lo == f || hi == f).then_some(w),
        Token::End { floor } => (floor == f).then_some(1),
        Token::Floor => None,
    };
    match (a, b) {
        (Token::Floor, Token::Floor) => SwapKind::Free,
        (Token::Floor, e) => match incident(e, floor_index(tokens, p0)) {
            Some(weight) => SwapKind::Incident {
                edge: p0 + 1,
                floor: p0,
                weight,
            },
            None => SwapKind::Free,
        },
        (e, Token::Floor) => match incident(e, floor_index(tokens, p0 + 1)) {
            Some(weight) => SwapKind::Incident {
                edge: p0,
                floor: p0 + 1,
                weight,
            },
            None => SwapKind::Free,
        },
        _ => SwapKind::Free,
    }
}

/// Exchange the marks at `p0` and `p0 + 1`, renumbering floors if two floors move.
fn apply_swap(tokens: &mut [Token], p0: usize) {
    if tokens[p0] == Token::Floor && tokens[p0 + 1] == Token::Floor {
        let k = floor_index(tokens, p0);
        let flip = |f: u8| {
            if f == k {
                k + 1
            } else if f == k + 1 {
                k
            } else {
                f
            }
        };
        for t in tokens.iter_mut() {
            match t {
                Token::Elevator { lo, hi, .. } => {
                    *lo = flip(*lo);
                    *hi = flip(*hi);
                }
                Token::End { floor } => *floor = flip(*floor),
                Token::Floor => {}
            }
        }
    } else {
        tokens.swap(p0, p0 + 1);
    }
}

/// Classify `marked` under `cfg`. `None` when `marked` is not the least
/// member of its orbit, so that each merged diagram is produced once.
pub fn classify(marked: &MarkedDiagram, cfg: &MergeConfiguration) -> Result<Option<MergedDiagram>> {
    let tokens = marked.tokens();
    if cfg.n != tokens.len() {
        return Err(Error::InvalidConfig(format!(
            "configuration has {} marks, diagram has {}",
            cfg.n,
            tokens.len()
        )));
    }
    let kinds: Vec<SwapKind> = cfg
        .positions
        .iter()
        .map(|&p| swap_kind(tokens, p - 1))
        .collect();
    let free: Vec<usize> = (0..kinds.len())
        .filter(|&k| kinds[k] == SwapKind::Free)
        .collect();

    let mut stabiliser = Vec::new();
    let mut orbit_members = std::collections::BTreeSet::new();
    for mask in 0u32..(1 << free.len()) {
        let mut image = tokens.to_vec();
        for (bit, &k) in free.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                apply_swap(&mut image, cfg.positions[k] - 1);
            }
        }
        if image == tokens {
            stabiliser.push(mask);
        }
        if image.as_slice() < tokens {
            return Ok(None);
        }
        orbit_members.insert(image);
    }

    let atoms: Vec<u32> = stabiliser
        .iter()
        .copied()
        .filter(|&m| m != 0 && !stabiliser.iter().any(|&o| o != 0 && o != m && o & m == o))
        .collect();
    let union = atoms.iter().fold(0u32, |acc, &a| acc | a);
    let disjoint = atoms.iter().map(|a| a.count_ones()).sum::<u32>() == union.count_ones();
    if !disjoint || stabiliser.len() != 1 << atoms.len() {
        return Err(Error::InconsistentTags(format!(
            "automorphisms of {marked} under {cfg} do not split into disjoint twin trees"
        )));
    }

    let objects = marked.marking();
    let mut tags: Vec<Option<PairTag>> = vec![None; kinds.len()];
    for (k, kind) in kinds.iter().enumerate() {
        if let SwapKind::Incident {
            edge,
            floor,
            weight,
        } = *kind
        {
            tags[k] = Some(PairTag::TypeA {
                edge: objects[edge],
                floor: objects[floor],
                m: u64::from(weight),
            });
        }
    }
    let mut twin_trees = Vec::new();
    for &atom in &atoms {
        let pairs: Vec<usize> = free
            .iter()
            .enumerate()
            .filter(|(bit, _)| atom >> bit & 1 == 1)
            .map(|(_, &k)| k)
            .collect();
        let tree = twin_tree(tokens, &objects, cfg, &pairs)?;
        for &k in &pairs {
            tags[k] = Some(PairTag::Twin {
                tree: twin_trees.len(),
            });
        }
        twin_trees.push(tree);
    }
    for &k in &free {
        if tags[k].is_none() {
            let p = cfg.positions[k] - 1;
            tags[k] = Some(PairTag::TypeR {
                objects: [objects[p], objects[p + 1]],
            });
        }
    }
    Ok(Some(MergedDiagram {
        representative: marked.clone(),
        config: cfg.clone(),
        tags: tags
            .into_iter()
            .map(|t| t.expect("every pair tagged"))
            .collect(),
        twin_trees,
        orbit_size: orbit_members.len(),
    }))
}

fn twin_tree(
    tokens: &[Token],
    objects: &[ObjectId],
    cfg: &MergeConfiguration,
    pairs: &[usize],
) -> Result<TwinTree> {
    let mut moved_floors = Vec::new();
    let mut edges = Vec::new();
    let mut end_pairs = 0u64;
    let mut moved = Vec::new();
    for &k in pairs {
        let p = cfg.positions[k] - 1;
        moved.extend([objects[p], objects[p + 1]]);
        match (tokens[p], tokens[p + 1]) {
            (Token::Floor, Token::Floor) => {
                let f = floor_index(tokens, p);
                moved_floors.extend([f, f + 1]);
            }
            (Token::Elevator { w, .. }, Token::Elevator { .. }) => {
                edges.push((u64::from(w), k + 1))
            }
            (Token::End { .. }, Token::End { .. }) => end_pairs += 1,
            _ => {
                return Err(Error::InconsistentTags(
                    "automorphism exchanges marks of different kinds".into(),
                ))
            }
        }
    }
    let m_root = if moved_floors.is_empty() {
        if pairs.len() != 1 || end_pairs != 1 {
            return Err(Error::InconsistentTags(
                "twin tree without a doubled floor".into(),
            ));
        }
        1
    } else {
        let roots: Vec<u64> = pairs
            .iter()
            .filter_map(|&k| match tokens[cfg.positions[k] - 1] {
                Token::Elevator { lo, hi, w }
                    if !moved_floors.contains(&lo) || !moved_floors.contains(&hi) =>
                {
                    Some(u64::from(w))
                }
                _ => None,
            })
            .collect();
        match roots[..] {
            [w] => w,
            _ => {
                return Err(Error::InconsistentTags(format!(
                    "twin tree has {} root edges",
                    roots.len()
                )))
            }
        }
    };
    let labels = pairs.iter().map(|&k| k + 1).collect();
    Ok(TwinTree {
        descriptor: TwinTreeDescriptor::new(m_root + end_pairs, edges, labels)?,
        objects: moved,
    })
}

impl MergedDiagram {
    pub fn s(&self) -> usize {
        self.config.s()
    }

    /// The local factors whose product is the multiplicity.
    pub fn factors(&self) -> Vec<LocalFactor> {
        let tokens = self.representative.tokens();
        let mut consumed = vec![false; tokens.len()];
        let mut out = Vec::new();
        for tree in &self.twin_trees {
            out.push(LocalFactor::TwinTree(tree.descriptor.clone()));
        }
        for (k, tag) in self.tags.iter().enumerate() {
            let p = self.config.positions[k] - 1;
            match tag {
                PairTag::TypeA { m, .. } => {
                    out.push(LocalFactor::TypeA { m: *m, j: k + 1 });
                    consumed[p] = true;
                    consumed[p + 1] = true;
                }
                PairTag::TypeR { .. } => out.push(LocalFactor::TypeR { j: k + 1 }),
                PairTag::Twin { .. } => {
                    consumed[p] = true;
                    consumed[p + 1] = true;
                }
            }
        }
        for (p, t) in tokens.iter().enumerate() {
            if consumed[p] {
                continue;
            }
            match *t {
                Token::Elevator { w, .. } => {
                    out.push(LocalFactor::ElevatorSquare { m: u64::from(w) })
                }
                Token::End { .. } => out.push(LocalFactor::UnitEnd),
                Token::Floor => {}
            }
        }
        out
    }

    pub fn multiplicity(&self) -> Result<TildeElement> {
        let s = self.s();
        self.factors()
            .iter()
            .try_fold(TildeElement::one(s), |acc, f| Ok(&acc * &f.evaluate(s)?))
    }

    pub fn residual_multiplicity(&self) -> Result<ResidualTilde> {
        let s = self.s();
        self.factors()
            .iter()
            .try_fold(ResidualTilde::one(s), |acc, f| {
                Ok(&acc * &f.residual_factor(s)?)
            })
    }

    /// Sum of complex multiplicities over the orbit.
    pub fn complex_weight(&self) -> u64 {
        self.orbit_size as u64 * self.representative.complex_multiplicity()
    }
}

#[derive(Serialize)]
struct MergeJson<'a> {
    pair: usize,
    tag: &'a PairTag,
}

#[derive(Serialize)]
struct MergedJson<'a> {
    d: u32,
    elevators: Vec<[u32; 3]>,
    ends: Vec<u32>,
    marking: Vec<ObjectId>,
    merges: Vec<MergeJson<'a>>,
    twin_trees: &'a [TwinTree],
}

impl Serialize for MergedDiagram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let shape = self.representative.diagram();
        MergedJson {
            d: shape.d,
            elevators: shape.elevators,
            ends: shape.ends,
            marking: self.representative.marking(),
            merges: self
                .tags
                .iter()
                .enumerate()
                .map(|(k, tag)| MergeJson { pair: k + 1, tag })
                .collect(),
            twin_trees: &self.twin_trees,
        }
        .serialize(s)
    }
}

static CACHE: [OnceLock<Vec<MarkedDiagram>>; 4] = [
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
];

/// Marked diagrams of degree `d`, computed once per process.
pub fn cached_diagrams(d: u32) -> Result<&'static [MarkedDiagram]> {
    check_degree(d)?;
    let slot = &CACHE[d as usize - 1];
    if let Some(v) = slot.get() {
        return Ok(v);
    }
    let v = enumerate_diagrams(d, usize::MAX)?;
    Ok(slot.get_or_init(|| v))
}

fn check_config(d: u32, cfg: &MergeConfiguration) -> Result<()> {
    check_degree(d)?;
    cfg.validate()?;
    let n = 3 * d as usize - 1;
    if cfg.n != n {
        return Err(Error::InvalidConfig(format!(
            "degree {d} has {n} marks, not {}",
            cfg.n
        )));
    }
    Ok(())
}

/// All merged diagrams of degree `d` under `cfg`, in representative order.
pub fn enumerate_merged_diagrams(d: u32, cfg: &MergeConfiguration) -> Result<Vec<MergedDiagram>> {
    check_config(d, cfg)?;
    let found: Vec<Option<MergedDiagram>> = cached_diagrams(d)?
        .par_iter()
        .map(|m| classify(m, cfg))
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

/// `N^{floor}(d, cfg)`: the sum of multiplicities over merged diagrams.
pub fn floor_count(d: u32, cfg: &MergeConfiguration) -> Result<TildeElement> {
    check_config(d, cfg)?;
    let s = cfg.s();
    cached_diagrams(d)?
        .par_iter()
        .map(|m| match classify(m, cfg)? {
            Some(md) => md.multiplicity(),
            None => Ok(TildeElement::zero(s)),
        })
        .try_reduce(|| TildeElement::zero(s), |a, b| Ok(&a + &b))
}

/// `x_j ↦ 1` followed by relabelling the later variables.
pub fn dissolve_specialize(count: &TildeElement, j: usize) -> Result<TildeElement> {
    count.dissolve(j)
}
