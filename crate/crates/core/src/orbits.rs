//! Covering search under a prescribed permutation group.
//!
//! A family invariant under a group is a union of block orbits, and it covers
//! an `r`-subset exactly when it covers that subset's whole orbit. The search
//! therefore runs over orbits, which is far smaller than the block space for
//! tight coverings with symmetry.

use std::collections::{HashSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::solver::Rng;
use crate::model::{binom_u64, k_subsets, Block, CoverParams, DesignFamily, SubsetIndex};
use crate::union_find::UnionFind;
use crate::verify::ensure_verified;

/// Permutations of `1..=n` given by image tables (`images[e - 1]` is the image of `e`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PermutationGroup {
    n: usize,
    name: String,
    generators: Vec<Vec<usize>>,
}

impl PermutationGroup {
    pub fn new(n: usize, name: impl Into<String>, generators: Vec<Vec<usize>>) -> Result<Self> {
        for g in &generators {
            let mut seen = vec![false; n + 1];
            if g.len() != n || g.iter().any(|&e| e == 0 || e > n || std::mem::replace(&mut seen[e], true)) {
                return Err(Error::params(format!("generator {g:?} is not a permutation of 1..={n}")));
            }
        }
        Ok(PermutationGroup {
            n,
            name: name.into(),
            generators,
        })
    }

    /// `cycles` disjoint cycles of length `len` on `1..=cycles*len`, fixing the rest.
    pub fn cycle_power(n: usize, len: usize, cycles: usize) -> Result<Self> {
        if len == 0 || len * cycles > n {
            return Err(Error::params(format!("{cycles} cycles of length {len} do not fit in {n} points")));
        }
        let mut g: Vec<usize> = (1..=n).collect();
        for c in 0..cycles {
            for i in 0..len {
                g[c * len + i] = c * len + (i + 1) % len + 1;
            }
        }
        let fixed = n - len * cycles;
        Self::new(n, format!("{cycles}x{len}-cycle+{fixed}"), vec![g])
    }

    /// Maps `x -> a*x + b` over the prime field on points `1..=p`, fixing the rest;
    /// `multiplier` generates the multiplicative part.
    pub fn affine(n: usize, p: usize, multiplier: usize) -> Result<Self> {
        if p > n || p < 2 || (2..p).any(|d| p.is_multiple_of(d)) {
            return Err(Error::params(format!("affine group needs a prime at most {n}, got {p}")));
        }
        let shift: Vec<usize> = (1..=n).map(|e| if e <= p { e % p + 1 } else { e }).collect();
        let scale: Vec<usize> = (1..=n)
            .map(|e| if e <= p { ((e - 1) * multiplier) % p + 1 } else { e })
            .collect();
        let order = (1..p).find(|&d| (0..d).fold(1, |acc, _| acc * multiplier % p) == 1).unwrap_or(1);
        Self::new(n, format!("AGL1({p})[{order}]+{}", n - p), vec![shift, scale])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generators(&self) -> &[Vec<usize>] {
        &self.generators
    }

    pub fn apply(&self, g: usize, b: Block) -> Block {
        let img = &self.generators[g];
        b.elements().fold(Block::EMPTY, |acc, e| acc.with(img[e - 1]))
    }

    /// Group order by closure; `None` past `cap` elements.
    pub fn order(&self, cap: usize) -> Option<usize> {
        let id: Vec<usize> = (1..=self.n).collect();
        let mut seen: HashSet<Vec<usize>> = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(p) = queue.pop_front() {
            for g in &self.generators {
                let q: Vec<usize> = p.iter().map(|&e| g[e - 1]).collect();
                if seen.insert(q.clone()) {
                    if seen.len() > cap {
                        return None;
                    }
                    queue.push_back(q);
                }
            }
        }
        Some(seen.len())
    }
}

/// Cyclic and affine groups worth trying on `n` points, largest first.
pub fn candidate_groups(n: usize) -> Vec<PermutationGroup> {
    let mut out = Vec::new();
    for fixed in 0..=3usize.min(n.saturating_sub(2)) {
        let m = n - fixed;
        for len in (2..=m).rev().filter(|l| m.is_multiple_of(*l)) {
            out.extend(PermutationGroup::cycle_power(n, len, m / len));
        }
        if m >= 3 && (2..m).all(|d| !m.is_multiple_of(d)) {
            for w in 2..m {
                if let Ok(g) = PermutationGroup::affine(n, m, w) {
                    if !out.iter().any(|o: &PermutationGroup| o.name == g.name) {
                        out.push(g);
                    }
                }
            }
        }
    }
    out.sort_by_key(|g| std::cmp::Reverse(g.order(100_000).unwrap_or(usize::MAX)));
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitOutcome {
    pub witness: Option<DesignFamily>,
    pub group: String,
    /// Search nodes spent, summed over groups tried.
    pub nodes: u64,
    /// True when the node budget ran out before the orbit space was exhausted.
    pub truncated: bool,
}

/// Partitions the `k`-subsets of `1..=n` into orbits; returns (orbit of each rank, members).
fn orbits_of(group: &PermutationGroup, k: usize) -> (Vec<usize>, Vec<Vec<Block>>) {
    let index = SubsetIndex::new(group.n, k);
    let count = index.count();
    let mut uf = UnionFind::new(count);
    for x in 0..count {
        let b = index.unrank(x);
        for g in 0..group.generators.len() {
            uf.union(x, index.rank(group.apply(g, b)));
        }
    }
    let mut id = vec![usize::MAX; count];
    let mut members: Vec<Vec<Block>> = Vec::new();
    for x in 0..count {
        let root = uf.find(x);
        if id[root] == usize::MAX {
            id[root] = members.len();
            members.push(Vec::new());
        }
        id[x] = id[root];
        members[id[x]].push(index.unrank(x));
    }
    (id, members)
}

struct OrbitDfs {
    r_size: Vec<usize>,
    covers: Vec<Vec<usize>>,
    k_size: Vec<usize>,
    containing: Vec<Vec<usize>>,
    hits: Vec<u32>,
    uncovered_weight: usize,
    per_block: usize,
    chosen: Vec<usize>,
    in_family: Vec<bool>,
    nodes: u64,
    budget: u64,
}

impl OrbitDfs {
    fn toggle(&mut self, c: usize, on: bool) {
        self.in_family[c] = on;
        for idx in 0..self.covers[c].len() {
            let x = self.covers[c][idx];
            if on {
                if self.hits[x] == 0 {
                    self.uncovered_weight -= self.r_size[x];
                }
                self.hits[x] += 1;
            } else {
                self.hits[x] -= 1;
                if self.hits[x] == 0 {
                    self.uncovered_weight += self.r_size[x];
                }
            }
        }
    }

    /// Depth-first search for a cover using at most `left` blocks; `accept` filters leaves.
    fn dfs(&mut self, left: usize, accept: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            return false;
        }
        if self.uncovered_weight == 0 {
            return accept(&self.chosen);
        }
        if self.uncovered_weight > left * self.per_block {
            return false;
        }
        // branch on the uncovered orbit with fewest affordable options
        let mut best: Option<(usize, usize)> = None;
        for x in 0..self.hits.len() {
            if self.hits[x] != 0 {
                continue;
            }
            let opts = self.containing[x].iter().filter(|&&c| !self.in_family[c] && self.k_size[c] <= left).count();
            if best.is_none_or(|(_, o)| opts < o) {
                best = Some((x, opts));
                if opts <= 1 {
                    break;
                }
            }
        }
        let (target, _) = best.expect("an uncovered orbit exists");
        for idx in 0..self.containing[target].len() {
            let c = self.containing[target][idx];
            if self.in_family[c] || self.k_size[c] > left {
                continue;
            }
            self.toggle(c, true);
            self.chosen.push(c);
            if self.dfs(left - self.k_size[c], accept) {
                return true;
            }
            self.chosen.pop();
            self.toggle(c, false);
        }
        false
    }
}

/// Searches for a `group`-invariant covering with at most `size_cap` blocks.
pub fn orbit_search(
    params: CoverParams,
    group: &PermutationGroup,
    size_cap: usize,
    require_connected: bool,
    node_budget: u64,
) -> Result<OrbitOutcome> {
    let (n, k, r) = (params.n(), params.k(), params.r());
    if group.n != n {
        return Err(Error::params(format!("group acts on {} points, design on {n}", group.n)));
    }
    if binom_u64(n, k as i64) > 1 << 20 {
        return Err(Error::Search(format!("{params}: too many blocks for orbit enumeration")));
    }
    let (r_id, r_members) = orbits_of(group, r);
    let (_, k_members) = orbits_of(group, k);
    let r_index = SubsetIndex::new(n, r);
    let covers: Vec<Vec<usize>> = k_members
        .iter()
        .map(|m| {
            let mut ids: Vec<usize> = k_subsets(k, r)
                .map(|s| s.elements().fold(Block::EMPTY, |acc, i| acc.with(m[0].to_vec()[i - 1])))
                .map(|s| r_id[r_index.rank(s)])
                .collect();
            ids.sort_unstable();
            ids.dedup();
            ids
        })
        .collect();
    let mut containing = vec![Vec::new(); r_members.len()];
    for (c, ids) in covers.iter().enumerate() {
        for &x in ids {
            containing[x].push(c);
        }
    }
    let mut dfs = OrbitDfs {
        r_size: r_members.iter().map(Vec::len).collect(),
        k_size: k_members.iter().map(Vec::len).collect(),
        covers,
        containing,
        hits: vec![0; r_members.len()],
        uncovered_weight: binom_u64(n, r as i64) as usize,
        per_block: binom_u64(k, r as i64) as usize,
        chosen: Vec::new(),
        in_family: vec![false; k_members.len()],
        nodes: 0,
        budget: node_budget,
    };
    let mut accept = |chosen: &[usize]| {
        if !require_connected {
            return true;
        }
        let blocks: Vec<Block> = chosen.iter().flat_map(|&c| k_members[c].iter().copied()).collect();
        DesignFamily::covering(params, blocks)
            .ok()
            .and_then(|f| crate::verify::verify_connected_covering(params, &f).ok())
            .is_some_and(|rep| rep.is_connected_design())
    };
    let found = dfs.dfs(size_cap, &mut accept);
    let witness = if found {
        let blocks: Vec<Block> = dfs.chosen.iter().flat_map(|&c| k_members[c].iter().copied()).collect();
        let fam = DesignFamily::covering(params, blocks)?;
        ensure_verified(&fam, require_connected, "orbit search")?;
        Some(fam)
    } else {
        None
    };
    Ok(OrbitOutcome {
        witness,
        group: group.name.clone(),
        nodes: dfs.nodes,
        truncated: dfs.nodes > node_budget,
    })
}

/// Orbit tables shared by the exhaustive and annealing searches.
struct OrbitTables {
    k_members: Vec<Vec<Block>>,
    r_size: Vec<usize>,
    covers: Vec<Vec<usize>>,
    containing: Vec<Vec<usize>>,
}

impl OrbitTables {
    fn new(params: CoverParams, group: &PermutationGroup) -> Result<Self> {
        let (n, k, r) = (params.n(), params.k(), params.r());
        if group.n != n {
            return Err(Error::params(format!("group acts on {} points, design on {n}", group.n)));
        }
        if binom_u64(n, k as i64) > 1 << 20 {
            return Err(Error::Search(format!("{params}: too many blocks for orbit enumeration")));
        }
        let (r_id, r_members) = orbits_of(group, r);
        let (_, k_members) = orbits_of(group, k);
        let r_index = SubsetIndex::new(n, r);
        let covers: Vec<Vec<usize>> = k_members
            .iter()
            .map(|m| {
                let rep = m[0].to_vec();
                let mut ids: Vec<usize> = k_subsets(k, r)
                    .map(|s| s.elements().fold(Block::EMPTY, |acc, i| acc.with(rep[i - 1])))
                    .map(|s| r_id[r_index.rank(s)])
                    .collect();
                ids.sort_unstable();
                ids.dedup();
                ids
            })
            .collect();
        let mut containing = vec![Vec::new(); r_members.len()];
        for (c, ids) in covers.iter().enumerate() {
            for &x in ids {
                containing[x].push(c);
            }
        }
        Ok(OrbitTables {
            r_size: r_members.iter().map(Vec::len).collect(),
            k_members,
            covers,
            containing,
        })
    }

    fn family(&self, params: CoverParams, chosen: &[usize]) -> Result<DesignFamily> {
        DesignFamily::covering(params, chosen.iter().flat_map(|&c| self.k_members[c].iter().copied()))
    }
}

/// Simulated annealing over `group`-invariant families of at most `size_cap` blocks,
/// at constant `temperature`, for `budget` moves.
pub fn orbit_anneal(
    params: CoverParams,
    group: &PermutationGroup,
    size_cap: usize,
    budget: u64,
    seed: u64,
    temperature: f64,
) -> Result<OrbitOutcome> {
    let t = OrbitTables::new(params, group)?;
    let mut rng = Rng::new(seed);
    let k_size: Vec<usize> = t.k_members.iter().map(Vec::len).collect();
    let mut hits = vec![0u32; t.r_size.len()];
    let mut in_family = vec![false; k_size.len()];
    let mut chosen: Vec<usize> = Vec::new();
    let mut total = 0usize;
    let mut weight = binom_u64(params.n(), params.r() as i64) as usize;
    let mut uncovered: Vec<usize> = (0..t.r_size.len()).collect();
    let toggle = |c: usize, on: bool, hits: &mut Vec<u32>, weight: &mut usize| {
        for &x in &t.covers[c] {
            if on {
                if hits[x] == 0 {
                    *weight -= t.r_size[x];
                }
                hits[x] += 1;
            } else {
                hits[x] -= 1;
                if hits[x] == 0 {
                    *weight += t.r_size[x];
                }
            }
        }
    };
    let mut order: Vec<usize> = (0..k_size.len()).collect();
    for i in (1..order.len()).rev() {
        order.swap(i, rng.below(i + 1));
    }
    for c in order {
        if total + k_size[c] <= size_cap {
            toggle(c, true, &mut hits, &mut weight);
            in_family[c] = true;
            chosen.push(c);
            total += k_size[c];
        }
    }
    let mut moves = 0u64;
    while weight > 0 && moves < budget {
        moves += 1;
        if moves % 64 == 1 {
            uncovered.clear();
            uncovered.extend((0..hits.len()).filter(|&x| hits[x] == 0));
        }
        let x = uncovered[rng.below(uncovered.len())];
        if hits[x] != 0 {
            continue;
        }
        let opts = &t.containing[x];
        let c = opts[rng.below(opts.len())];
        if in_family[c] || k_size[c] > size_cap {
            continue;
        }
        let before = weight;
        toggle(c, true, &mut hits, &mut weight);
        in_family[c] = true;
        chosen.push(c);
        total += k_size[c];
        let mut removed = Vec::new();
        chosen.pop();
        while total > size_cap {
            let i = rng.below(chosen.len());
            let d = chosen.swap_remove(i);
            toggle(d, false, &mut hits, &mut weight);
            in_family[d] = false;
            total -= k_size[d];
            removed.push(d);
        }
        chosen.push(c);
        let accept = weight <= before || rng.unit() < (-((weight - before) as f64) / temperature).exp();
        if !accept {
            let pos = chosen.iter().position(|&o| o == c).expect("just added");
            chosen.swap_remove(pos);
            toggle(c, false, &mut hits, &mut weight);
            in_family[c] = false;
            total -= k_size[c];
            for d in removed {
                toggle(d, true, &mut hits, &mut weight);
                in_family[d] = true;
                chosen.push(d);
                total += k_size[d];
            }
        }
    }
    let witness = if weight == 0 {
        let fam = t.family(params, &chosen)?;
        ensure_verified(&fam, false, "orbit annealing")?;
        Some(fam)
    } else {
        None
    };
    Ok(OrbitOutcome {
        witness,
        group: group.name.clone(),
        nodes: moves,
        truncated: weight > 0,
    })
}

/// Tries each candidate group in turn with `node_budget` nodes apiece.
pub fn orbit_search_any(
    params: CoverParams,
    size_cap: usize,
    require_connected: bool,
    node_budget: u64,
) -> Result<OrbitOutcome> {
    let mut nodes = 0;
    let mut truncated = false;
    for group in candidate_groups(params.n()) {
        let out = orbit_search(params, &group, size_cap, require_connected, node_budget)?;
        nodes += out.nodes;
        truncated |= out.truncated;
        if out.witness.is_some() {
            return Ok(OrbitOutcome { nodes, truncated, ..out });
        }
    }
    Ok(OrbitOutcome {
        witness: None,
        group: String::new(),
        nodes,
        truncated,
    })
}
