//! Covering / Turán-system checks, block graphs and connectivity.
//!
//! Every construction and every search result in this crate is passed
//! through these functions before it is handed out.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{
    binom_u64, k_subsets, sub_blocks, Block, CoverParams, DesignFamily, DesignParams, SubsetIndex,
    TuranParams,
};
use crate::union_find::UnionFind;

/// Upper limit on the number of subset slots marked in one coverage check.
const MARKING_LIMIT: u64 = 1 << 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    /// Lexicographically first subset violating the property.
    Violated(Block),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn witness(&self) -> Option<Block> {
        match self {
            Verdict::Holds => None,
            Verdict::Violated(b) => Some(*b),
        }
    }
}

fn expect_params(fam: &DesignFamily, params: DesignParams) -> Result<()> {
    if fam.params() != params {
        return Err(Error::ParamMismatch(format!(
            "family is a {} but {} was requested",
            fam.params(),
            params
        )));
    }
    Ok(())
}

/// Checks that every `r`-subset of `[n]` lies inside some block.
pub fn is_covering(params: CoverParams, fam: &DesignFamily) -> Result<Verdict> {
    expect_params(fam, DesignParams::Covering(params))?;
    Ok(first_uncovered(params.n(), params.r(), fam.blocks()))
}

pub(crate) fn first_uncovered(n: usize, r: usize, blocks: &[Block]) -> Verdict {
    let total = binom_u64(n, r as i64);
    let per_block = blocks.first().map_or(0, |b| binom_u64(b.len(), r as i64));
    if total <= MARKING_LIMIT && per_block.saturating_mul(blocks.len() as u64) <= MARKING_LIMIT {
        let index = SubsetIndex::new(n, r);
        let mut covered = vec![false; index.count()];
        for &b in blocks {
            for s in sub_blocks(b, r) {
                covered[index.rank(s)] = true;
            }
        }
        for s in k_subsets(n, r) {
            if !covered[index.rank(s)] {
                return Verdict::Violated(s);
            }
        }
        Verdict::Holds
    } else {
        for s in k_subsets(n, r) {
            if !blocks.iter().any(|&b| s.is_subset(b)) {
                return Verdict::Violated(s);
            }
        }
        Verdict::Holds
    }
}

/// Checks that every `m`-subset of `[n]` contains some block.
///
/// The reported violation is the complement of the first uncovered subset of
/// the dual covering, so witnesses correspond exactly under [`dualize`].
pub fn is_turan_system(params: TuranParams, fam: &DesignFamily) -> Result<Verdict> {
    expect_params(fam, DesignParams::Turan(params))?;
    let full = Block::full(params.n());
    let dual: Vec<Block> = fam.blocks().iter().map(|&b| full.difference(b)).collect();
    Ok(match first_uncovered(params.n(), params.n() - params.m(), &dual) {
        Verdict::Holds => Verdict::Holds,
        Verdict::Violated(s) => Verdict::Violated(full.difference(s)),
    })
}

/// Blocks as vertices; `i ~ j` when the blocks share at least `threshold` elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockGraph {
    vertices: usize,
    threshold: usize,
    edges: Vec<(usize, usize)>,
}

impl BlockGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }

    /// Edges `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

/// Builds the block graph of `fam` (vertex `i` is `fam.blocks()[i]`).
pub fn block_graph(fam: &DesignFamily, threshold: usize) -> BlockGraph {
    let blocks = fam.blocks();
    let size = fam.block_size();
    let mut edges = Vec::new();
    if size > 0 && threshold == size - 1 {
        // distinct equal-size blocks meet in size-1 points iff they share a (size-1)-subset
        let mut buckets: HashMap<u64, Vec<usize>> = HashMap::new();
        for (i, &b) in blocks.iter().enumerate() {
            for e in b.elements() {
                buckets.entry(b.without(e).mask()).or_default().push(i);
            }
        }
        for members in buckets.values() {
            for (a, &i) in members.iter().enumerate() {
                for &j in &members[a + 1..] {
                    edges.push((i.min(j), i.max(j)));
                }
            }
        }
        edges.sort_unstable();
        edges.dedup();
    } else {
        for i in 0..blocks.len() {
            for j in i + 1..blocks.len() {
                if blocks[i].intersection_len(blocks[j]) >= threshold {
                    edges.push((i, j));
                }
            }
        }
    }
    BlockGraph {
        vertices: blocks.len(),
        threshold,
        edges,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Connectivity {
    /// Components ordered by their smallest vertex; each sorted ascending.
    pub components: Vec<Vec<usize>>,
}

impl Connectivity {
    pub fn is_connected(&self) -> bool {
        self.components.len() == 1
    }

    pub fn count(&self) -> usize {
        self.components.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.components.iter().map(Vec::len).collect()
    }
}

pub fn connectivity(g: &BlockGraph) -> Connectivity {
    let mut uf = UnionFind::new(g.vertices);
    for &(i, j) in &g.edges {
        uf.union(i, j);
    }
    let mut slot: HashMap<usize, usize> = HashMap::new();
    let mut components: Vec<Vec<usize>> = Vec::new();
    for v in 0..g.vertices {
        let root = uf.find(v);
        let idx = *slot.entry(root).or_insert_with(|| {
            components.push(Vec::new());
            components.len() - 1
        });
        components[idx].push(v);
    }
    Connectivity { components }
}

/// Complements every block: `(n,k,r)`-coverings and `(n,n-r,n-k)`-Turán systems swap.
pub fn dualize(fam: &DesignFamily) -> DesignFamily {
    let n = fam.n();
    let full = Block::full(n);
    let blocks = fam.blocks().iter().map(|b| full.difference(*b));
    DesignFamily::new(fam.params().dual(), blocks).expect("complements of distinct blocks are distinct")
}

/// True when the block graphs of `fam` and `dualize(fam)` correspond edge for
/// edge under the complement bijection (thresholds `t` and `n - 2s + t`,
/// where `s` is the block size and `t` the family's own threshold).
pub fn dual_adjacency_preserved(fam: &DesignFamily) -> Result<bool> {
    let t = fam
        .params()
        .adjacency_threshold()
        .ok_or_else(|| Error::ParamMismatch("family has no block-graph threshold".into()))?;
    let n = fam.n() as isize;
    let s = fam.block_size() as isize;
    let dual_t = n - 2 * s + t as isize;
    if dual_t < 0 || dual_t > n - s {
        return Err(Error::ParamMismatch(format!(
            "dual threshold {dual_t} outside 0..={}",
            n - s
        )));
    }
    let dual = dualize(fam);
    let g = block_graph(fam, t);
    let dg = block_graph(&dual, dual_t as usize);
    let full = Block::full(fam.n());
    let position: HashMap<Block, usize> = dual.blocks().iter().enumerate().map(|(i, &b)| (b, i)).collect();
    let image = |i: usize| position[&full.difference(fam.blocks()[i])];
    let mut mapped: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|&(i, j)| {
            let (a, b) = (image(i), image(j));
            (a.min(b), a.max(b))
        })
        .collect();
    mapped.sort_unstable();
    Ok(mapped == dg.edges())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub is_valid_design: bool,
    pub first_uncovered_witness: Option<Block>,
    pub is_connected: bool,
    pub component_count: usize,
    pub component_sizes: Vec<usize>,
}

impl VerifyReport {
    fn assemble(verdict: Verdict, conn: Connectivity) -> Self {
        VerifyReport {
            is_valid_design: verdict.holds(),
            first_uncovered_witness: verdict.witness(),
            is_connected: conn.is_connected(),
            component_count: conn.count(),
            component_sizes: conn.sizes(),
        }
    }

    /// Valid and connected.
    pub fn is_connected_design(&self) -> bool {
        self.is_valid_design && self.is_connected
    }
}

pub fn verify_connected_covering(params: CoverParams, fam: &DesignFamily) -> Result<VerifyReport> {
    let verdict = is_covering(params, fam)?;
    let conn = connectivity(&block_graph(fam, params.r()));
    Ok(VerifyReport::assemble(verdict, conn))
}

/// Turán analogue; fails when `2p - m` is not a valid threshold.
pub fn verify_connected_turan(params: TuranParams, fam: &DesignFamily) -> Result<VerifyReport> {
    let verdict = is_turan_system(params, fam)?;
    let t = params
        .threshold()
        .ok_or_else(|| Error::ParamMismatch(format!("{params}: 2p-m outside 0..=p")))?;
    let conn = connectivity(&block_graph(fam, t));
    Ok(VerifyReport::assemble(verdict, conn))
}

/// Dispatches on the family's own kind.
pub fn verify_family(fam: &DesignFamily) -> Result<VerifyReport> {
    match fam.params() {
        DesignParams::Covering(p) => verify_connected_covering(p, fam),
        DesignParams::Turan(p) => verify_connected_turan(p, fam),
    }
}

/// Errors unless `fam` is a valid design, and connected when `connected` is set.
pub(crate) fn ensure_verified(fam: &DesignFamily, connected: bool, what: &str) -> Result<VerifyReport> {
    let report = verify_family(fam)?;
    if !report.is_valid_design {
        return Err(Error::Verification(format!(
            "{what}: {} not satisfied, first violation {}",
            fam.params(),
            report.first_uncovered_witness.map_or("-".to_string(), |b| b.to_string())
        )));
    }
    if connected && !report.is_connected {
        return Err(Error::Verification(format!(
            "{what}: block graph has {} components",
            report.component_count
        )));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blk(v: &[usize]) -> Block {
        Block::new(v).unwrap()
    }

    fn cov(n: usize, k: usize, r: usize, blocks: &[&[usize]]) -> DesignFamily {
        DesignFamily::covering(CoverParams::new(n, k, r).unwrap(), blocks.iter().map(|b| blk(b))).unwrap()
    }

    fn tur(n: usize, m: usize, p: usize, blocks: &[&[usize]]) -> DesignFamily {
        DesignFamily::turan(TuranParams::new(n, m, p).unwrap(), blocks.iter().map(|b| blk(b))).unwrap()
    }

    #[test]
    fn covering_examples() {
        let f = cov(3, 3, 2, &[&[1, 2, 3]]);
        assert!(is_covering(f.cover_params().unwrap(), &f).unwrap().holds());

        let f = cov(4, 3, 2, &[&[1, 2, 3]]);
        assert_eq!(
            is_covering(f.cover_params().unwrap(), &f).unwrap(),
            Verdict::Violated(blk(&[1, 4]))
        );
    }

    #[test]
    fn example_layers_cover_7_5_4() {
        let f = cov(
            7,
            5,
            4,
            &[
                &[1, 2, 3, 4, 5],
                &[1, 2, 3, 4, 6],
                &[1, 2, 3, 4, 7],
                &[1, 2, 5, 6, 7],
                &[1, 3, 5, 6, 7],
                &[1, 4, 5, 6, 7],
                &[2, 3, 5, 6, 7],
                &[2, 4, 5, 6, 7],
                &[3, 4, 5, 6, 7],
            ],
        );
        assert!(is_covering(f.cover_params().unwrap(), &f).unwrap().holds());
        // without the connector the two layers are separate components
        assert_eq!(connectivity(&block_graph(&f, 4)).count(), 2);
        let mut blocks = f.blocks().to_vec();
        blocks.push(blk(&[1, 2, 4, 5, 6]));
        let g = DesignFamily::covering(f.cover_params().unwrap(), blocks).unwrap();
        let report = verify_connected_covering(g.cover_params().unwrap(), &g).unwrap();
        assert!(report.is_connected_design());
        assert_eq!(report.component_sizes, vec![10]);
    }

    #[test]
    fn turan_examples() {
        let f = tur(4, 3, 2, &[&[1, 2], &[3, 4]]);
        assert!(is_turan_system(f.turan_params().unwrap(), &f).unwrap().holds());
        let f = tur(3, 3, 3, &[&[1, 2, 3]]);
        assert!(is_turan_system(f.turan_params().unwrap(), &f).unwrap().holds());
        let f = tur(5, 3, 2, &[&[1, 2]]);
        assert_eq!(
            is_turan_system(f.turan_params().unwrap(), &f).unwrap(),
            Verdict::Violated(blk(&[3, 4, 5]))
        );
    }

    #[test]
    fn mismatched_params_are_rejected() {
        let f = cov(4, 3, 2, &[&[1, 2, 3]]);
        assert!(matches!(
            is_covering(CoverParams::new(5, 3, 2).unwrap(), &f),
            Err(Error::ParamMismatch(_))
        ));
    }

    #[test]
    fn small_graphs() {
        let single = cov(3, 3, 2, &[&[1, 2, 3]]);
        let g = block_graph(&single, 2);
        assert_eq!((g.vertex_count(), g.edge_count()), (1, 0));

        let two = cov(6, 3, 2, &[&[1, 2, 3], &[4, 5, 6]]);
        let g = block_graph(&two, 2);
        assert_eq!((g.vertex_count(), g.edge_count()), (2, 0));

        let empty = DesignFamily::covering(CoverParams::new(4, 3, 2).unwrap(), []).unwrap();
        let c = connectivity(&block_graph(&empty, 2));
        assert_eq!(c.count(), 0);
        assert!(!c.is_connected());
    }

    #[test]
    fn disconnected_mantel_system() {
        // two disjoint triangles K3 + K3 on six points, before the bridge edge
        let f = tur(6, 3, 2, &[&[1, 2], &[1, 3], &[2, 3], &[4, 5], &[4, 6], &[5, 6]]);
        let report = verify_connected_turan(f.turan_params().unwrap(), &f).unwrap();
        assert!(report.is_valid_design);
        assert_eq!(report.component_count, 2);
        assert_eq!(report.component_sizes, vec![3, 3]);
    }

    #[test]
    fn bucketed_and_pairwise_edges_agree() {
        let all: Vec<Block> = k_subsets(7, 4).step_by(3).collect();
        let f = DesignFamily::covering(CoverParams::new(7, 4, 3).unwrap(), all).unwrap();
        let fast = block_graph(&f, 3);
        let mut slow = Vec::new();
        for i in 0..f.len() {
            for j in i + 1..f.len() {
                if f.blocks()[i].intersection_len(f.blocks()[j]) >= 3 {
                    slow.push((i, j));
                }
            }
        }
        assert_eq!(fast.edges(), &slow[..]);
    }

    #[test]
    fn dualize_5_3_2() {
        let f = cov(
            5,
            3,
            2,
            &[&[1, 2, 3], &[1, 4, 5], &[2, 4, 5], &[3, 4, 5]],
        );
        assert!(is_covering(f.cover_params().unwrap(), &f).unwrap().holds());
        let d = dualize(&f);
        assert_eq!(d.turan_params(), Some(TuranParams::new(5, 3, 2).unwrap()));
        assert!(is_turan_system(d.turan_params().unwrap(), &d).unwrap().holds());
        assert_eq!(dualize(&d), f);
        assert!(dual_adjacency_preserved(&f).unwrap());
    }

    #[test]
    fn comparisons_below_threshold_fail_cleanly() {
        let f = cov(4, 3, 2, &[&[1, 2, 3], &[2, 3, 4]]);
        assert!(ensure_verified(&f, false, "test").is_err());
    }
}
