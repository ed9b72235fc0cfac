use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Merged positions `p_1 < … < p_s` among `n` marks; pair `i` fuses
/// positions `p_i` and `p_i + 1` (1-based).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct MergeConfiguration {
    pub n: usize,
    pub positions: Vec<usize>,
}

impl MergeConfiguration {
    pub fn new(n: usize, positions: Vec<usize>) -> Result<Self> {
        let cfg = MergeConfiguration { n, positions };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn empty(n: usize) -> Self {
        MergeConfiguration {
            n,
            positions: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        for (k, &p) in self.positions.iter().enumerate() {
            if p == 0 || p + 1 > self.n {
                return bad(format!(
                    "position {p} outside 1..={}",
                    self.n.saturating_sub(1)
                ));
            }
            if k > 0 && p < self.positions[k - 1] + 2 {
                return bad(format!(
                    "positions {} and {p} overlap or are unsorted",
                    self.positions[k - 1]
                ));
            }
        }
        Ok(())
    }

    pub fn s(&self) -> usize {
        self.positions.len()
    }

    pub fn r(&self) -> usize {
        self.n - 2 * self.s()
    }

    /// Pair label (1-based) occupying the 1-based position `pos`, if merged.
    pub fn pair_at(&self, pos: usize) -> Option<usize> {
        self.positions
            .iter()
            .position(|&p| p == pos || p + 1 == pos)
            .map(|k| k + 1)
    }

    /// Configuration with pair `j` turned back into two simple positions.
    pub fn dissolve(&self, j: usize) -> Result<Self> {
        if !(1..=self.s()).contains(&j) {
            return Err(Error::VariableOutOfRange {
                index: j,
                s: self.s(),
            });
        }
        let mut positions = self.positions.clone();
        positions.remove(j - 1);
        Ok(MergeConfiguration {
            n: self.n,
            positions,
        })
    }

    /// Configurations reached by moving one pair by one position.
    pub fn unit_shifts(&self) -> Vec<MergeConfiguration> {
        let mut out = Vec::new();
        for k in 0..self.s() {
            for delta in [-1i64, 1] {
                let p = self.positions[k] as i64 + delta;
                if p < 1 {
                    continue;
                }
                let mut positions = self.positions.clone();
                positions[k] = p as usize;
                let cand = MergeConfiguration {
                    n: self.n,
                    positions,
                };
                if cand.validate().is_ok() {
                    out.push(cand);
                }
            }
        }
        out
    }

    /// Parse `p1,p2,…`; an empty string is the configuration with no pairs.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Self::empty(n));
        }
        let positions = text
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidConfig(format!("bad position `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, positions)
    }
}

impl fmt::Display for MergeConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps: Vec<String> = self.positions.iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", ps.join(","))
    }
}

/// All configurations of `s` pairs among `n` marks, lexicographically.
pub fn enumerate_merge_configs(n: usize, s: usize) -> Vec<MergeConfiguration> {
    fn rec(
        n: usize,
        s: usize,
        start: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<MergeConfiguration>,
    ) {
        if cur.len() == s {
            out.push(MergeConfiguration {
                n,
                positions: cur.clone(),
            });
            return;
        }
        let left = s - cur.len();
        // the remaining pairs need 2·left marks starting at `start`
        let mut p = start;
        while p + 2 * left - 1 <= n {
            cur.push(p);
            rec(n, s, p + 2, cur, out);
            cur.pop();
            p += 1;
        }
    }
    let mut out = Vec::new();
    if 2 * s <= n {
        rec(n, s, 1, &mut Vec::new(), &mut out);
    }
    out
}

/// Unit-shift graph on the configurations with a fixed `(n, s)`.
#[derive(Clone, Debug, Serialize)]
pub struct MergeGraph {
    pub configs: Vec<MergeConfiguration>,
    pub edges: Vec<(usize, usize)>,
}

impl MergeGraph {
    pub fn is_connected(&self) -> bool {
        if self.configs.is_empty() {
            return true;
        }
        let mut adj = vec![Vec::new(); self.configs.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; self.configs.len()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.iter().all(|x| *x)
    }
}

pub fn unit_shift_graph(configs: &[MergeConfiguration]) -> MergeGraph {
    let index: BTreeMap<&MergeConfiguration, usize> =
        configs.iter().enumerate().map(|(k, c)| (c, k)).collect();
    let mut edges = Vec::new();
    for (a, cfg) in configs.iter().enumerate() {
        for next in cfg.unit_shifts() {
            if let Some(&b) = index.get(&next) {
                if a < b {
                    edges.push((a, b));
                }
            }
        }
    }
    MergeGraph {
        configs: configs.to_vec(),
        edges,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(a: usize, b: usize) -> usize {
        if b > a {
            return 0;
        }
        (0..b).fold(1, |acc, i| acc * (a - i) / (i + 1))
    }

    #[test]
    fn configuration_counts() {
        assert_eq!(enumerate_merge_configs(8, 2).len(), 15);
        assert_eq!(
            enumerate_merge_configs(8, 4),
            vec![MergeConfiguration::new(8, vec![1, 3, 5, 7]).unwrap()]
        );
        assert!(enumerate_merge_configs(8, 5).is_empty());
        for n in 0..=12 {
            for s in 0..=n / 2 {
                // s pairs in n marks: choose the pair starts among n - s slots
                assert_eq!(
                    enumerate_merge_configs(n, s).len(),
                    binom(n - s, s),
                    "n={n} s={s}"
                );
            }
        }
    }

    #[test]
    fn validation() {
        assert!(MergeConfiguration::new(8, vec![1, 2]).is_err());
        assert!(MergeConfiguration::new(8, vec![8]).is_err());
        assert!(MergeConfiguration::new(8, vec![0]).is_err());
        assert!(MergeConfiguration::new(8, vec![3, 1]).is_err());
        assert!(MergeConfiguration::parse(8, "1, 4").is_ok());
        assert!(MergeConfiguration::parse(8, "x").is_err());
    }

    #[test]
    fn unit_shift_graphs_are_connected() {
        for n in 0..=12 {
            for s in 0..=n / 2 {
                let g = unit_shift_graph(&enumerate_merge_configs(n, s));
                assert!(g.is_connected(), "n={n} s={s}");
            }
        }
    }

    #[test]
    fn dissolving_relabels_later_pairs() {
        let cfg = MergeConfiguration::new(8, vec![1, 4, 7]).unwrap();
        assert_eq!(cfg.dissolve(2).unwrap().positions, vec![1, 7]);
        assert_eq!(cfg.pair_at(5), Some(2));
        assert_eq!(cfg.pair_at(3), None);
        assert!(cfg.dissolve(4).is_err());
    }
}
