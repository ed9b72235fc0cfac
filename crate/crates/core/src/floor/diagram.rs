use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

pub const MAX_DEGREE: u32 = 4;

/// One marked object, written in marking order.
///
/// Floors carry no index: the `k`-th `Floor` token is floor `k`, so floors are
/// numbered by the order in which their marks appear.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Token {
    Floor,
    Elevator { lo: u8, hi: u8, w: u8 },
    End { floor: u8 },
}

/// Name of a marked object in a serialised marking.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ObjectId {
    Floor(usize),
    Elevator(usize),
    End(usize),
}

impl fmt::Display for ObjectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObjectId::Floor(k) => write!(f, "F{k}"),
            ObjectId::Elevator(k) => write!(f, "E{k}"),
            ObjectId::End(k) => write!(f, "D{k}"),
        }
    }
}

impl Serialize for ObjectId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Shape of a plane floor diagram: floors `0..d` in marking order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FloorDiagram {
    pub d: u32,
    /// Bounded elevators `[lo, hi, w]`, listed in marking order.
    pub elevators: Vec<[u32; 3]>,
    /// Number of weight-one down ends at each floor.
    pub ends: Vec<u32>,
}

impl FloorDiagram {
    pub fn bounded_weight_product(&self) -> u64 {
        self.elevators
            .iter()
            .map(|e| u64::from(e[2]).pow(2))
            .product()
    }

    /// Divergence at every floor, tree shape and end count.
    pub fn is_valid(&self) -> bool {
        let d = self.d as usize;
        if self.ends.len() != d || self.elevators.len() + 1 != d {
            return false;
        }
        if self.ends.iter().sum::<u32>() != self.d {
            return false;
        }
        let mut out = vec![0i64; d];
        let mut inn = vec![0i64; d];
        let mut parent: Vec<usize> = (0..d).collect();
        fn root(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in &self.elevators {
            let (lo, hi, w) = (e[0] as usize, e[1] as usize, i64::from(e[2]));
            if lo >= hi || hi >= d || w == 0 {
                return false;
            }
            out[lo] += w;
            inn[hi] += w;
            let (a, b) = (root(&mut parent, lo), root(&mut parent, hi));
            if a == b {
                return false;
            }
            parent[a] = b;
        }
        (0..d).all(|f| out[f] + 1 == inn[f] + i64::from(self.ends[f]))
    }
}

/// A floor diagram together with a compatible total order of its marks.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MarkedDiagram {
    tokens: Vec<Token>,
}

impl MarkedDiagram {
    pub fn from_tokens(tokens: Vec<Token>) -> Result<Self> {
        let m = MarkedDiagram { tokens };
        if m.is_compatible() && m.diagram().is_valid() {
            Ok(m)
        } else {
            Err(Error::InvalidConfig(
                "token sequence is not a marked floor diagram".into(),
            ))
        }
    }

    pub(crate) fn from_tokens_unchecked(tokens: Vec<Token>) -> Self {
        MarkedDiagram { tokens }
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn degree(&self) -> u32 {
        self.tokens.iter().filter(|t| **t == Token::Floor).count() as u32
    }

    pub fn num_marks(&self) -> usize {
        self.tokens.len()
    }

    /// Index of the floor whose mark is at `pos`, if any.
    pub fn floor_at(&self, pos: usize) -> Option<u8> {
        (self.tokens[pos] == Token::Floor).then(|| {
            self.tokens[..pos]
                .iter()
                .filter(|t| **t == Token::Floor)
                .count() as u8
        })
    }

    /// Every mark respects the floor order.
    pub fn is_compatible(&self) -> bool {
        let mut placed = 0u8;
        for t in &self.tokens {
            match *t {
                Token::Floor => placed += 1,
                Token::Elevator { lo, hi, .. } => {
                    if lo >= placed || hi < placed {
                        return false;
                    }
                }
                Token::End { floor } => {
                    if floor < placed {
                        return false;
                    }
                }
            }
        }
        let d = placed;
        self.tokens.iter().all(|t| match *t {
            Token::Elevator { hi, .. } => hi < d,
            Token::End { floor } => floor < d,
            Token::Floor => true,
        })
    }

    pub fn diagram(&self) -> FloorDiagram {
        let d = self.degree();
        let mut ends = vec![0; d as usize];
        let mut elevators = Vec::new();
        for t in &self.tokens {
            match *t {
                Token::Elevator { lo, hi, w } => elevators.push([lo.into(), hi.into(), w.into()]),
                Token::End { floor } => {
                    if let Some(c) = ends.get_mut(floor as usize) {
                        *c += 1
                    }
                }
                Token::Floor => {}
            }
        }
        FloorDiagram { d, elevators, ends }
    }

    pub fn marking(&self) -> Vec<ObjectId> {
        let mut floors = 0;
        let mut elevators = 0;
        self.tokens
            .iter()
            .map(|t| match *t {
                Token::Floor => {
                    floors += 1;
                    ObjectId::Floor(floors - 1)
                }
                Token::Elevator { .. } => {
                    elevators += 1;
                    ObjectId::Elevator(elevators - 1)
                }
                Token::End { floor } => ObjectId::End(floor as usize),
            })
            .collect()
    }

    pub fn object_at(&self, pos: usize) -> ObjectId {
        self.marking()[pos]
    }

    /// Product of squared bounded weights: the complex multiplicity.
    pub fn complex_multiplicity(&self) -> u64 {
        self.diagram().bounded_weight_product()
    }
}

impl fmt::Display for MarkedDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .tokens
            .iter()
            .map(|t| match *t {
                Token::Floor => "F".to_string(),
                Token::Elevator { lo, hi, w } => format!("E({lo}-{hi},{w})"),
                Token::End { floor } => format!("D({floor})"),
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

pub fn check_degree(d: u32) -> Result<()> {
    if (1..=MAX_DEGREE).contains(&d) {
        Ok(())
    } else {
        Err(Error::DegreeOutOfRange(d))
    }
}

/// All labelled trees on `0..d`, as edge lists `(lo, hi)` with `lo < hi`.
fn labelled_trees(d: usize) -> Vec<Vec<(usize, usize)>> {
    let all: Vec<(usize, usize)> = (0..d)
        .flat_map(|a| (a + 1..d).map(move |b| (a, b)))
        .collect();
    let mut out = Vec::new();
    let mut pick = Vec::new();
    fn rec(
        all: &[(usize, usize)],
        start: usize,
        need: usize,
        d: usize,
        pick: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if need == 0 {
            let mut parent: Vec<usize> = (0..d).collect();
            let find = |p: &mut Vec<usize>, mut x: usize| {
                while p[x] != x {
                    x = p[x];
                }
                x
            };
            for &(a, b) in pick.iter() {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra == rb {
                    return;
                }
                parent[ra] = rb;
            }
            out.push(pick.clone());
            return;
        }
        for i in start..all.len() {
            pick.push(all[i]);
            rec(all, i + 1, need - 1, d, pick, out);
            pick.pop();
        }
    }
    rec(&all, 0, d.saturating_sub(1), d, &mut pick, &mut out);
    out
}

/// Weight of tree edge `(lo, hi)`: with `C` the side containing `hi`,
/// divergence forces `w = |C| - ends(C)`.
fn forced_weights(d: usize, tree: &[(usize, usize)], ends: &[u32]) -> Option<Vec<u8>> {
    tree.iter()
        .enumerate()
        .map(|(skip, &(lo, hi))| {
            let mut side = vec![false; d];
            side[hi] = true;
            let mut stack = vec![hi];
            while let Some(v) = stack.pop() {
                for (k, &(a, b)) in tree.iter().enumerate() {
                    if k == skip {
                        continue;
                    }
                    let other = if a == v {
                        b
                    } else if b == v {
                        a
                    } else {
                        continue;
                    };
                    if !side[other] {
                        side[other] = true;
                        stack.push(other);
                    }
                }
            }
            debug_assert!(!side[lo]);
            let size = side.iter().filter(|x| **x).count() as i64;
            let end_count: i64 = (0..d)
                .filter(|&f| side[f])
                .map(|f| i64::from(ends[f]))
                .sum();
            let w = size - end_count;
            (w >= 1).then_some(w as u8)
        })
        .collect()
}

fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Every floor diagram of degree `d`, floors labelled `0..d`.
pub fn enumerate_shapes(d: u32) -> Result<Vec<FloorDiagram>> {
    check_degree(d)?;
    let du = d as usize;
    let mut out = Vec::new();
    for tree in labelled_trees(du) {
        for ends in compositions(d, du) {
            if let Some(ws) = forced_weights(du, &tree, &ends) {
                let elevators = tree
                    .iter()
                    .zip(&ws)
                    .map(|(&(lo, hi), &w)| [lo as u32, hi as u32, u32::from(w)])
                    .collect();
                let shape = FloorDiagram { d, elevators, ends };
                debug_assert!(shape.is_valid());
                out.push(shape);
            }
        }
    }
    Ok(out)
}

/// Linear extensions of the mark order of `shape`, ends at a floor identified.
fn markings(shape: &FloorDiagram, budget: usize, out: &mut Vec<MarkedDiagram>) -> Result<()> {
    struct State<'a> {
        shape: &'a FloorDiagram,
        next_floor: usize,
        elevator_done: Vec<bool>,
        ends_left: Vec<u32>,
        seq: Vec<Token>,
    }
    fn rec(st: &mut State, budget: usize, out: &mut Vec<MarkedDiagram>) -> Result<()> {
        let d = st.shape.d as usize;
        if st.next_floor == d {
            if out.len() >= budget {
                return Err(Error::BudgetExceeded(budget));
            }
            out.push(MarkedDiagram::from_tokens_unchecked(st.seq.clone()));
            return Ok(());
        }
        let f = st.next_floor;
        let ready = st.ends_left[f] == 0
            && st
                .shape
                .elevators
                .iter()
                .zip(&st.elevator_done)
                .all(|(e, done)| e[1] as usize != f || *done);
        if ready {
            st.seq.push(Token::Floor);
            st.next_floor += 1;
            rec(st, budget, out)?;
            st.next_floor -= 1;
            st.seq.pop();
        }
        for k in 0..st.shape.elevators.len() {
            let e = st.shape.elevators[k];
            if !st.elevator_done[k] && (e[0] as usize) < f {
                st.elevator_done[k] = true;
                st.seq.push(Token::Elevator {
                    lo: e[0] as u8,
                    hi: e[1] as u8,
                    w: e[2] as u8,
                });
                rec(st, budget, out)?;
                st.seq.pop();
                st.elevator_done[k] = false;
            }
        }
        for g in f..d {
            if st.ends_left[g] > 0 {
                st.ends_left[g] -= 1;
                st.seq.push(Token::End { floor: g as u8 });
                rec(st, budget, out)?;
                st.seq.pop();
                st.ends_left[g] += 1;
            }
        }
        Ok(())
    }
    let mut st = State {
        shape,
        next_floor: 0,
        elevator_done: vec![false; shape.elevators.len()],
        ends_left: shape.ends.clone(),
        seq: Vec::new(),
    };
    rec(&mut st, budget, out)
}

/// All marked floor diagrams of degree `d`, sorted and duplicate-free.
pub fn enumerate_diagrams(d: u32, budget: usize) -> Result<Vec<MarkedDiagram>> {
    let mut out = Vec::new();
    for shape in enumerate_shapes(d)? {
        markings(&shape, budget, &mut out)?;
    }
    out.sort();
    let distinct: BTreeSet<&MarkedDiagram> = out.iter().collect();
    assert_eq!(distinct.len(), out.len(), "duplicate marked diagram");
    Ok(out)
}

/// Rational plane curve counts from Kontsevich's recursion.
pub fn kontsevich_nd(d: u32) -> i128 {
    let d = d as usize;
    let mut n = vec![0i128; d.max(1) + 1];
    n[1] = 1;
    let binom = |a: i128, b: i128| -> i128 {
        if b < 0 || b > a {
            return 0;
        }
        let mut r = 1i128;
        for i in 0..b {
            r = r * (a - i) / (i + 1);
        }
        r
    };
    for e in 2..=d {
        let e_i = e as i128;
        let mut total = 0i128;
        for d1 in 1..e {
            let (a, b) = (d1 as i128, (e - d1) as i128);
            let term = b * binom(3 * e_i - 4, 3 * a - 2) - a * binom(3 * e_i - 4, 3 * a - 1);
            total += n[d1] * n[e - d1] * a * a * b * term;
        }
        n[e] = total;
    }
    n[d]
}

#[cfg(test)]
mod tests {
    use super::*;

    impl FloorDiagram {
        fn elevators_sorted(&self) -> Vec<[u32; 3]> {
            let mut e = self.elevators.clone();
            e.sort();
            e
        }
    }

    const BIG: usize = 1 << 20;

    #[test]
    fn kontsevich_values() {
        let want = [1i128, 1, 12, 620, 87304, 26312976, 14616808192];
        for (k, w) in want.iter().enumerate() {
            assert_eq!(kontsevich_nd(k as u32 + 1), *w);
        }
    }

    #[test]
    fn low_degree_enumeration() {
        let d1 = enumerate_diagrams(1, BIG).unwrap();
        assert_eq!(d1.len(), 1);
        assert_eq!(d1[0].tokens(), &[Token::End { floor: 0 }, Token::Floor]);
        let d2 = enumerate_diagrams(2, BIG).unwrap();
        assert_eq!(d2.len(), 1);
        assert_eq!(d2[0].to_string(), "D(0) D(0) F E(0-1,1) F");
    }

    #[test]
    fn degree_three_shapes() {
        let all = enumerate_diagrams(3, BIG).unwrap();
        let mut by_shape: std::collections::BTreeMap<String, (usize, u64)> = Default::default();
        for m in &all {
            let s = m.diagram();
            let entry = by_shape
                .entry(format!("{:?} {:?}", s.elevators_sorted(), s.ends))
                .or_default();
            entry.0 += 1;
            entry.1 = s.bounded_weight_product();
        }
        let total: u64 = all.iter().map(|m| m.complex_multiplicity()).sum();
        assert_eq!(total, 12);
        let summary: Vec<(usize, u64)> = by_shape.values().copied().collect();
        assert!(summary.contains(&(1, 4)));
        assert!(summary.contains(&(5, 1)));
        assert!(summary.contains(&(3, 1)));
        assert_eq!(summary.len(), 3);
    }

    #[test]
    fn complex_counts_match_oracle() {
        for d in 1..=4 {
            let total: u64 = enumerate_diagrams(d, BIG)
                .unwrap()
                .iter()
                .map(|m| m.complex_multiplicity())
                .sum();
            assert_eq!(i128::from(total), kontsevich_nd(d), "d={d}");
        }
    }

    #[test]
    fn markings_are_compatible_and_complete() {
        for d in 1..=4 {
            for m in enumerate_diagrams(d, BIG).unwrap() {
                assert!(m.is_compatible());
                assert_eq!(m.num_marks(), 3 * d as usize - 1);
                assert!(MarkedDiagram::from_tokens(m.tokens().to_vec()).is_ok());
            }
        }
    }

    #[test]
    fn budget_and_degree_errors() {
        assert_eq!(enumerate_diagrams(3, 2), Err(Error::BudgetExceeded(2)));
        assert_eq!(enumerate_diagrams(5, BIG), Err(Error::DegreeOutOfRange(5)));
        assert_eq!(enumerate_diagrams(0, BIG), Err(Error::DegreeOutOfRange(0)));
    }
}
