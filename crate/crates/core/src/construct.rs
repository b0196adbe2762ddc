//! Explicit constructions of connected coverings and Turán systems.
//!
//! Every public constructor verifies its output before returning it, so a
//! returned family is always a valid design (and connected where promised).

use std::collections::HashSet;

use serde::Serialize;

use crate::bounds;
use crate::error::{Error, Result};
use crate::model::{k_subsets, Block, CoverParams, DesignFamily, TuranParams};
use crate::solver::{local_search, SearchConfig};
use crate::verify::{dualize, ensure_verified, is_covering};

fn construction(msg: impl Into<String>) -> Error {
    Error::Construction(msg.into())
}

fn blk(elems: &[usize]) -> Block {
    elems.iter().fold(Block::EMPTY, |b, &e| b.with(e))
}

fn connected_covering(params: CoverParams, blocks: impl IntoIterator<Item = Block>, what: &str) -> Result<DesignFamily> {
    let fam = DesignFamily::covering(params, blocks)?;
    ensure_verified(&fam, true, what)?;
    Ok(fam)
}

/// Minimal connected coverings for `r` in `{0, 1, n-2, n-1}`.
pub fn trivial_cases(n: usize, r: usize) -> Result<DesignFamily> {
    if n == 0 {
        return Err(Error::params("need n >= 1"));
    }
    let params = CoverParams::new(n, r + 1, r)?;
    let blocks: Vec<Block> = if r + 1 == n {
        vec![Block::full(n)]
    } else if r == 0 {
        vec![blk(&[1])]
    } else if r == 1 {
        (1..n).map(|i| blk(&[i, i + 1])).collect()
    } else if r + 2 == n {
        // every (n-1)-subset except {2, .., n}
        (1..n).map(|i| Block::full(n).without(i)).collect()
    } else {
        return Err(Error::params(format!("r = {r} is not a trivial case for n = {n}")));
    };
    connected_covering(params, blocks, "trivial case")
}

/// Triangle sequence for `CC(n,2)`: each triangle after the first shares exactly one
/// edge with those before it, except that the final one may share two.
pub fn r2_sequence(n: usize) -> Result<Vec<Block>> {
    if n < 3 {
        return Err(Error::params(format!("need n >= 3, got {n}")));
    }
    let mut seq = vec![blk(&[1, 2, 3])];
    // the last triangle shares two edges and contributes the single edge {p, q}
    let mut trailing: Option<(usize, usize)> = None;
    for u in 4..=n {
        let t = u - 1;
        let mut rest: Vec<usize> = (1..=t).collect();
        let mut anchor = None;
        if let Some((p, q)) = trailing.take() {
            seq.pop();
            let y = (1..=t).find(|&v| v != p && v != q).expect("at least three old vertices");
            seq.push(blk(&[p, y, u]));
            seq.push(blk(&[p, q, u]));
            rest.retain(|&v| v != p && v != q && v != y);
            anchor = Some(p);
        }
        let mut pairs = rest.chunks_exact(2);
        for pair in pairs.by_ref() {
            seq.push(blk(&[pair[0], pair[1], u]));
        }
        if let [z] = pairs.remainder() {
            let w = anchor.unwrap_or(rest[0]);
            seq.push(blk(&[*z, w, u]));
            trailing = Some((*z.min(&u), *z.max(&u)));
        }
    }
    Ok(seq)
}

/// Connected `(n,3,2)`-covering of size `ceil((C(n,2) - 1) / 2)`.
pub fn construct_r2(n: usize) -> Result<DesignFamily> {
    connected_covering(CoverParams::standard(n, 2)?, r2_sequence(n)?, "triangle chain")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Parity {
    /// `n - r = 2m + 1`.
    Odd,
    /// `n - r = 2m`; the last layer comes from an `(n-2, r-1, r-2)`-covering.
    Even,
}

/// Layers and connector blocks of the connector construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NConstructionPlan {
    pub n: usize,
    pub r: usize,
    pub m: usize,
    pub parity: Parity,
    pub layers: Vec<Vec<Block>>,
    pub connectors: Vec<Block>,
}

impl NConstructionPlan {
    /// Layer `i`: an `(r-2)`-prefix from `[r+2i-2]`, then `r+2i-1, r+2i`, then one tail in `(r+2i, top]`.
    fn layer(r: usize, i: usize, top: usize) -> Vec<Block> {
        let mut out = Vec::new();
        for prefix in k_subsets(r + 2 * i - 2, r - 2) {
            let core = prefix.with(r + 2 * i - 1).with(r + 2 * i);
            for tail in r + 2 * i + 1..=top {
                out.push(core.with(tail));
            }
        }
        out
    }

    /// `{1, .., r-2, r+2i, r+2i+1, r+2i+2}`.
    fn connector(r: usize, i: usize) -> Block {
        Block::full(r - 2).with(r + 2 * i).with(r + 2 * i + 1).with(r + 2 * i + 2)
    }

    pub fn new(n: usize, r: usize, sub_covering: Option<&DesignFamily>) -> Result<Self> {
        if r < 2 || n < r + 1 {
            return Err(Error::params(format!("need n >= r + 1 >= 3, got n = {n}, r = {r}")));
        }
        let d = n - r;
        if d % 2 == 1 {
            let m = d / 2;
            return Ok(NConstructionPlan {
                n,
                r,
                m,
                parity: Parity::Odd,
                layers: (0..=m).map(|i| Self::layer(r, i, n)).collect(),
                connectors: (0..m).map(|i| Self::connector(r, i)).collect(),
            });
        }
        let m = d / 2;
        let want = CoverParams::new(n - 2, r - 1, r - 2)?;
        let sub = sub_covering.ok_or_else(|| {
            Error::params(format!("n - r = {d} is even: a {want}-covering must be supplied"))
        })?;
        if sub.cover_params() != Some(want) {
            return Err(Error::ParamMismatch(format!("sub-covering is {}, expected {want}-covering", sub.params())));
        }
        ensure_verified(sub, false, "sub-covering")?;
        let mut layers: Vec<Vec<Block>> = (0..m).map(|i| Self::layer(r, i, n)).collect();
        layers.push(sub.blocks().iter().map(|b| b.with(n - 1).with(n)).collect());
        Ok(NConstructionPlan {
            n,
            r,
            m,
            parity: Parity::Even,
            layers,
            connectors: (0..m.saturating_sub(1)).map(|i| Self::connector(r, i)).collect(),
        })
    }

    pub fn blocks(&self) -> impl Iterator<Item = Block> + '_ {
        self.layers.iter().flatten().copied().chain(self.connectors.iter().copied())
    }

    pub fn size(&self) -> usize {
        self.layers.iter().map(Vec::len).sum::<usize>() + self.connectors.len()
    }
}

/// Connected `(n, r+1, r)`-covering from layers and connectors, of size `N(n, r, |sub|)`.
pub fn construct_n(n: usize, r: usize, sub_covering: Option<&DesignFamily>) -> Result<DesignFamily> {
    let plan = NConstructionPlan::new(n, r, sub_covering)?;
    let fam = connected_covering(CoverParams::standard(n, r)?, plan.blocks(), "connector construction")?;
    if fam.len() != plan.size() {
        return Err(construction("connector construction produced repeated blocks"));
    }
    Ok(fam)
}

/// `(v, t+1, t)`-covering: a covering of `[v-2]` plus `{v-1, v} ∪ S` for every `(t-1)`-subset `S`,
/// bottoming out at one block (`v = t+1`) or all but one `(t+1)`-subset (`v = t+2`).
pub fn gordon_covering(v: usize, t: usize) -> Result<DesignFamily> {
    let params = CoverParams::new(v, t + 1, t)?;
    let mut blocks = Vec::new();
    let mut w = v;
    while w > t + 2 {
        if t >= 1 {
            blocks.extend(k_subsets(w - 2, t - 1).map(|s| s.with(w - 1).with(w)));
        }
        w -= 2;
    }
    if w == t + 1 {
        blocks.push(Block::full(w));
    } else {
        blocks.extend(k_subsets(w, t + 1).take(t + 1));
    }
    let fam = DesignFamily::covering(params, blocks)?;
    ensure_verified(&fam, false, "recursive pair construction")?;
    Ok(fam)
}

/// Edges of two near-equal cliques on `[ceil(n/2)]` and the rest, plus one bridge edge.
pub fn mantel_turan_system(n: usize) -> Result<DesignFamily> {
    if n < 4 {
        return Err(Error::params(format!("need n >= 4, got {n}")));
    }
    let h = n.div_ceil(2);
    let params = TuranParams::new(n, 3, 2)?;
    let mut edges: Vec<Block> = k_subsets(h, 2).collect();
    edges.extend(k_subsets(n - h, 2).map(|e| Block::from_mask(e.mask() << h)));
    edges.push(blk(&[h, h + 1]));
    let fam = DesignFamily::turan(params, edges)?;
    ensure_verified(&fam, true, "bridged clique system")?;
    Ok(fam)
}

/// Connected `(n, n-2, n-3)`-covering dual to [`mantel_turan_system`].
pub fn construct_mantel_dual(n: usize) -> Result<DesignFamily> {
    let fam = dualize(&mantel_turan_system(n)?);
    ensure_verified(&fam, true, "bridged clique dual")?;
    Ok(fam)
}

/// Which pair set the third block class draws from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum T3Variant {
    /// Pairs from `B_{i-1} ∪ {x_{i+1}, y_{i-1}}`.
    AsPrinted,
    /// Pairs from `B_{i-1} ∪ {x_{i+1}, y_{i+1}}`.
    Symmetric,
}

/// Tripartition of `[base]` into consecutive parts with two special elements each.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KostochkaLayout {
    pub base: usize,
    pub parts: [Block; 3],
    pub x: [usize; 3],
    pub y: [usize; 3],
    pub rest: [Block; 3],
}

impl KostochkaLayout {
    pub fn new(base: usize) -> Result<Self> {
        if !base.is_multiple_of(3) || base < 9 {
            return Err(Error::params(format!("base must be a multiple of 3 and at least 9, got {base}")));
        }
        let s = base / 3;
        let parts: [Block; 3] = std::array::from_fn(|i| Block::from_mask(Block::full(s).mask() << (i * s)));
        let x: [usize; 3] = std::array::from_fn(|i| i * s + 1);
        let y: [usize; 3] = std::array::from_fn(|i| i * s + 2);
        let rest: [Block; 3] = std::array::from_fn(|i| parts[i].without(x[i]).without(y[i]));
        Ok(KostochkaLayout { base, parts, x, y, rest })
    }

    fn blocks(&self, variant: T3Variant) -> Vec<Block> {
        let mut out = Vec::new();
        let pairs = |set: Block| -> Vec<Block> { crate::model::sub_blocks(set, 2).collect() };
        for i in 0..3 {
            let (next, prev) = ((i + 1) % 3, (i + 2) % 3);
            out.extend(crate::model::sub_blocks(self.parts[i], 3));
            out.extend(pairs(self.parts[next]).into_iter().map(|p| p.with(self.x[i])));
            let t2 = self.rest[prev].with(self.x[next]).with(self.y[next]);
            out.extend(pairs(t2).into_iter().map(|p| p.with(self.y[i])));
            let partner = match variant {
                T3Variant::AsPrinted => self.y[prev],
                T3Variant::Symmetric => self.y[next],
            };
            let t3 = self.rest[prev].with(self.x[next]).with(partner);
            for b in self.rest[i].elements() {
                out.extend(pairs(t3).into_iter().map(|p| p.with(b)));
            }
        }
        out
    }
}

/// Removes the given elements: blocks containing any are dropped, the rest relabelled in order.
pub fn delete_elements(fam: &DesignFamily, doomed: &[usize]) -> Result<DesignFamily> {
    let gone = blk(doomed);
    let n = fam.n();
    let keep: Vec<usize> = (1..=n).filter(|&e| !gone.contains(e)).collect();
    let mut relabel = vec![0; n + 1];
    for (i, &e) in keep.iter().enumerate() {
        relabel[e] = i + 1;
    }
    let blocks = fam
        .blocks()
        .iter()
        .filter(|b| b.intersection_len(gone) == 0)
        .map(|b| b.elements().fold(Block::EMPTY, |acc, e| acc.with(relabel[e])));
    let d = doomed.len();
    let params = match fam.params() {
        crate::model::DesignParams::Turan(p) => {
            crate::model::DesignParams::Turan(TuranParams::new(n - d, p.m(), p.p())?)
        }
        crate::model::DesignParams::Covering(p) => {
            crate::model::DesignParams::Covering(CoverParams::new(n - d, p.k(), p.r())?)
        }
    };
    DesignFamily::new(params, blocks)
}

/// A connected `(n,4,3)`-Turán system with its dual `(n, n-3, n-4)`-covering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KostochkaSystem {
    pub layout: KostochkaLayout,
    pub turan: DesignFamily,
    pub covering: DesignFamily,
    /// Third-class variant used; `None` for the nine-point systems, which have no third class.
    pub t3_variant: Option<T3Variant>,
    /// Elements of the layout deleted to reach `n`.
    pub deleted: Vec<usize>,
    /// Set when the size is not known to be optimal among connected systems.
    pub optimality_open: bool,
}

/// Nine-point system made of in-part triples and one element of a part with a pair of the next,
/// plus a transversal connector when `connector` is set.
pub fn turan_nine(connector: bool) -> Result<DesignFamily> {
    let lay = KostochkaLayout::new(9)?;
    let mut blocks = Vec::new();
    for i in 0..3 {
        let next = (i + 1) % 3;
        blocks.extend(crate::model::sub_blocks(lay.parts[i], 3));
        for a in lay.parts[i].elements() {
            blocks.extend(crate::model::sub_blocks(lay.parts[next], 2).map(|p| p.with(a)));
        }
    }
    if connector {
        blocks.push(blk(&lay.x));
    }
    let fam = DesignFamily::turan(TuranParams::new(9, 4, 3)?, blocks)?;
    ensure_verified(&fam, connector, "nine-point system")?;
    Ok(fam)
}

/// The other nine-point system: in-part triples, `x_i` with pairs of the next part, and
/// `B_i` elements with pairs of `B_{i-1} ∪ {x_{i+1}}`. It is valid and disconnected.
pub fn kostochka_nine_first() -> Result<DesignFamily> {
    let lay = KostochkaLayout::new(9)?;
    let b: [Block; 3] = std::array::from_fn(|i| lay.parts[i].without(lay.x[i]));
    let mut blocks = Vec::new();
    for i in 0..3 {
        let (next, prev) = ((i + 1) % 3, (i + 2) % 3);
        blocks.extend(crate::model::sub_blocks(lay.parts[i], 3));
        blocks.extend(crate::model::sub_blocks(lay.parts[next], 2).map(|p| p.with(lay.x[i])));
        for a in b[i].elements() {
            blocks.extend(crate::model::sub_blocks(b[prev].with(lay.x[next]), 2).map(|p| p.with(a)));
        }
    }
    let fam = DesignFamily::turan(TuranParams::new(9, 4, 3)?, blocks)?;
    ensure_verified(&fam, false, "first nine-point system")?;
    Ok(fam)
}

fn finish_kostochka(
    layout: KostochkaLayout,
    turan: DesignFamily,
    t3_variant: Option<T3Variant>,
    deleted: Vec<usize>,
    optimality_open: bool,
) -> Result<KostochkaSystem> {
    ensure_verified(&turan, true, "Kostochka system")?;
    let covering = dualize(&turan);
    ensure_verified(&covering, true, "Kostochka dual covering")?;
    Ok(KostochkaSystem {
        layout,
        turan,
        covering,
        t3_variant,
        deleted,
        optimality_open,
    })
}

/// Kostochka-type connected `(n,4,3)`-Turán system for `n >= 8`, sized `kostochka_cc_upper(n)`.
pub fn construct_kostochka(n: usize) -> Result<KostochkaSystem> {
    if n < 8 {
        return Err(Error::params(format!("the tripartite construction needs n >= 8, got {n}")));
    }
    if n <= 9 {
        let layout = KostochkaLayout::new(9)?;
        let nine = turan_nine(true)?;
        if n == 9 {
            return finish_kostochka(layout, nine, None, Vec::new(), false);
        }
        // the connector uses each part's minimum; drop the largest element instead
        let eight = delete_elements(&nine, &[9])?;
        return finish_kostochka(layout, eight, None, vec![9], true);
    }
    let base = n.max(12).div_ceil(3) * 3;
    let layout = KostochkaLayout::new(base)?;
    let doomed: Vec<usize> = match base - n {
        0 => vec![],
        1 => vec![layout.x[0]],
        _ => vec![layout.x[0], layout.x[1]],
    };
    let params = TuranParams::new(base, 4, 3)?;
    let mut last_err = None;
    for variant in [T3Variant::AsPrinted, T3Variant::Symmetric] {
        let full = DesignFamily::turan(params, layout.blocks(variant))?;
        if ensure_verified(&full, true, "Kostochka base system").is_err() {
            last_err = Some(variant);
            continue;
        }
        let fam = delete_elements(&full, &doomed)?;
        return finish_kostochka(layout, fam, Some(variant), doomed, false);
    }
    Err(construction(format!(
        "no third-class variant yields a connected ({base},4,3)-Turán system (last tried {last_err:?})"
    )))
}

/// `prev ∪ { B ∪ {n} : B ∈ sub }`: a connected `(n, r+1, r)`-covering from a connected
/// `(n-1, r+1, r)`-covering and an `(n-1, r, r-1)`-covering.
pub fn extend_by_recursion(prev: &DesignFamily, sub: &DesignFamily) -> Result<DesignFamily> {
    let p = prev
        .cover_params()
        .ok_or_else(|| Error::ParamMismatch("first input must be a covering".into()))?;
    let s = sub
        .cover_params()
        .ok_or_else(|| Error::ParamMismatch("second input must be a covering".into()))?;
    let (n1, r) = (p.n(), p.r());
    if p.k() != r + 1 || r == 0 || s != CoverParams::new(n1, r, r - 1)? {
        return Err(Error::ParamMismatch(format!(
            "need a connected (m, r+1, r)-covering and an (m, r, r-1)-covering, got {p} and {s}"
        )));
    }
    ensure_verified(prev, true, "recursion base")?;
    ensure_verified(sub, false, "recursion sub-covering")?;
    let n = n1 + 1;
    let blocks = prev.blocks().iter().copied().chain(sub.blocks().iter().map(|b| b.with(n)));
    connected_covering(CoverParams::standard(n, r)?, blocks, "recursive extension")
}

/// The 19 triples of the `(11,3,2)`-covering appended (with element 12) in the `n = 12` assembly.
pub const CC12_PAIR_COVER: [[usize; 3]; 19] = [
    [1, 3, 11],
    [1, 4, 6],
    [1, 2, 8],
    [1, 5, 9],
    [1, 7, 10],
    [3, 4, 9],
    [2, 3, 10],
    [3, 5, 6],
    [3, 7, 8],
    [2, 4, 6],
    [4, 5, 7],
    [4, 10, 11],
    [4, 6, 8],
    [2, 5, 11],
    [2, 7, 9],
    [5, 8, 10],
    [6, 7, 11],
    [8, 9, 11],
    [6, 9, 10],
];

/// How [`assemble_cc12_3`] obtained its result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Assembly {
    /// The named block was deleted before appending the 19 extended triples.
    Deleted(Block),
    /// No deletion worked; the family came from local search.
    Searched,
}

/// Connected 73-block `(12,4,3)`-covering from a 55-block connected `(11,4,3)`-covering.
pub fn assemble_cc12_3(cc11: &DesignFamily) -> Result<(DesignFamily, Assembly)> {
    let p11 = CoverParams::standard(11, 3)?;
    if cc11.cover_params() != Some(p11) || cc11.len() != 55 {
        return Err(Error::ParamMismatch(format!("need a 55-block {p11}-covering, got {} blocks of {}", cc11.len(), cc11.params())));
    }
    ensure_verified(cc11, true, "n = 11 witness")?;
    let pair_cover = DesignFamily::covering(CoverParams::new(11, 3, 2)?, CC12_PAIR_COVER.iter().map(|t| blk(t)))?;
    ensure_verified(&pair_cover, false, "listed pair covering")?;
    let p12 = CoverParams::standard(12, 3)?;
    let added: Vec<Block> = pair_cover.blocks().iter().map(|b| b.with(12)).collect();
    for &gone in cc11.blocks() {
        let kept: Vec<Block> = cc11.blocks().iter().copied().filter(|&b| b != gone).collect();
        if !is_covering(p11, &DesignFamily::covering(p11, kept.iter().copied())?)?.holds() {
            continue;
        }
        let fam = DesignFamily::covering(p12, kept.into_iter().chain(added.iter().copied()))?;
        if ensure_verified(&fam, true, "n = 12 assembly").is_ok() {
            return Ok((fam, Assembly::Deleted(gone)));
        }
    }
    let cfg = SearchConfig {
        target_size: Some(73),
        require_connected: true,
        budget: 10_000_000,
        ..SearchConfig::default()
    };
    let out = local_search(p12, &cfg)?;
    match out.witness {
        Some(fam) => Ok((fam, Assembly::Searched)),
        None => Err(construction("no deletion connects the assembly and the search fallback failed")),
    }
}

/// Whether `seq` adds exactly one new edge pair per triangle: each triangle after the first
/// shares exactly one previously seen edge, except that the last may share two.
pub fn exact_augmentation(seq: &[Block]) -> bool {
    let mut seen: HashSet<Block> = HashSet::new();
    for (idx, &t) in seq.iter().enumerate() {
        let edges: Vec<Block> = crate::model::sub_blocks(t, 2).collect();
        let shared = edges.iter().filter(|e| seen.contains(e)).count();
        let ok = match idx {
            0 => shared == 0,
            _ if idx + 1 == seq.len() => shared == 1 || shared == 2,
            _ => shared == 1,
        };
        if !ok {
            return false;
        }
        seen.extend(edges);
    }
    true
}

/// Size promised by the N construction, for checking plans against the closed form.
pub fn n_construction_size(n: usize, r: usize, sub: Option<&DesignFamily>) -> Result<u64> {
    bounds::n_upper(n, r, sub.map(|s| s.len() as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::binom_u64;

    fn b(v: &[usize]) -> Block {
        Block::new(v).unwrap()
    }

    #[test]
    fn trivial_examples() {
        assert_eq!(trivial_cases(5, 1).unwrap().len(), 4);
        assert_eq!(trivial_cases(5, 3).unwrap().len(), 4);
        assert_eq!(trivial_cases(5, 4).unwrap().len(), 1);
        assert_eq!(trivial_cases(5, 0).unwrap().len(), 1);
        assert!(trivial_cases(7, 3).is_err());
    }

    #[test]
    fn triangle_chain_sizes() {
        let want = [1, 3, 5, 7, 10, 14, 18, 22, 27, 33, 39, 45];
        for n in 3..=14 {
            assert_eq!(construct_r2(n).unwrap().len(), want[n - 3], "n = {n}");
        }
        for n in 3..=40 {
            let seq = r2_sequence(n).unwrap();
            assert!(exact_augmentation(&seq), "n = {n}");
            assert_eq!(seq.len() as u64, (binom_u64(n, 2) - 1).div_ceil(2));
        }
    }

    #[test]
    fn connector_example_is_verbatim() {
        let plan = NConstructionPlan::new(7, 4, None).unwrap();
        assert_eq!(plan.layers[0], vec![b(&[1, 2, 3, 4, 5]), b(&[1, 2, 3, 4, 6]), b(&[1, 2, 3, 4, 7])]);
        let l1: HashSet<Block> = plan.layers[1].iter().copied().collect();
        let want: HashSet<Block> = k_subsets(4, 2).map(|p| p.with(5).with(6).with(7)).collect();
        assert_eq!(l1, want);
        assert_eq!(plan.connectors, vec![b(&[1, 2, 4, 5, 6])]);
        assert_eq!(construct_n(7, 4, None).unwrap().len(), 10);
        assert_eq!(construct_n(5, 4, None).unwrap().len(), 1);
    }

    #[test]
    fn connector_even_case() {
        let sub = crate::solver::exhaustive_min(CoverParams::new(6, 3, 2).unwrap(), false, 6).unwrap().witness.unwrap();
        assert_eq!(sub.len(), 6);
        let fam = construct_n(8, 4, Some(&sub)).unwrap();
        assert_eq!(fam.len(), 23);
        assert!(construct_n(8, 4, None).is_err());
        let wrong = gordon_covering(6, 3).unwrap();
        assert!(construct_n(8, 4, Some(&wrong)).is_err());
    }

    #[test]
    fn connector_sizes_match_formula() {
        for n in 4..=12 {
            for r in 2..n {
                let sub = if (n - r) % 2 == 0 { Some(gordon_covering(n - 2, r - 2).unwrap()) } else { None };
                let plan = NConstructionPlan::new(n, r, sub.as_ref()).unwrap();
                for (i, layer) in plan.layers.iter().enumerate().take(plan.m + usize::from(plan.parity == Parity::Odd)) {
                    if plan.parity == Parity::Even && i == plan.m {
                        continue;
                    }
                    assert_eq!(layer.len() as u64, binom_u64(r - 2 + 2 * i, (r - 2) as i64) * (n - r - 2 * i) as u64);
                }
                let fam = construct_n(n, r, sub.as_ref()).unwrap();
                assert_eq!(fam.len() as u64, n_construction_size(n, r, sub.as_ref()).unwrap(), "({n},{r})");
            }
        }
    }

    #[test]
    fn gordon_sizes() {
        for v in 1..=12 {
            for t in 0..v {
                let fam = gordon_covering(v, t).unwrap();
                assert_eq!(fam.len() as u64, bounds::gordon_c_upper(v, t).unwrap(), "({v},{t})");
            }
        }
    }

    #[test]
    fn mantel_sizes() {
        for (n, want) in [(4, 3), (7, 10), (8, 13)] {
            assert_eq!(construct_mantel_dual(n).unwrap().len(), want);
        }
        assert!(construct_mantel_dual(3).is_err());
    }

    #[test]
    fn kostochka_sizes() {
        for (n, want) in [(9, 31), (10, 45), (11, 63), (12, 84), (13, 112), (14, 144)] {
            let sys = construct_kostochka(n).unwrap();
            assert_eq!(sys.turan.len(), want, "n = {n}");
            assert_eq!(sys.covering.len(), want);
            assert!(!sys.optimality_open);
            if n >= 10 {
                assert_eq!(sys.t3_variant, Some(T3Variant::AsPrinted));
            }
        }
        let eight = construct_kostochka(8).unwrap();
        assert_eq!(eight.turan.len(), 21);
        assert!(eight.optimality_open);
        assert!(construct_kostochka(7).is_err());
    }

    #[test]
    fn nine_point_systems_are_disconnected() {
        for fam in [turan_nine(false).unwrap(), kostochka_nine_first().unwrap()] {
            assert_eq!(fam.len(), 30);
            let rep = crate::verify::verify_family(&fam).unwrap();
            assert!(rep.is_valid_design && !rep.is_connected);
        }
    }

    #[test]
    fn deletion_relabels() {
        let fam = DesignFamily::covering(CoverParams::new(5, 3, 2).unwrap(), [b(&[1, 2, 3]), b(&[2, 4, 5]), b(&[1, 3, 5])]).unwrap();
        let d = delete_elements(&fam, &[2]).unwrap();
        assert_eq!(d.n(), 4);
        assert_eq!(d.blocks(), &[b(&[1, 2, 4])]);
    }

    #[test]
    fn recursion_small_cases() {
        let one = trivial_cases(3, 2).unwrap();
        let sub = DesignFamily::covering(CoverParams::new(3, 2, 1).unwrap(), [b(&[1, 2]), b(&[2, 3])]).unwrap();
        assert!(extend_by_recursion(&one, &sub).is_ok());
        let r2 = construct_r2(6).unwrap();
        let sub = DesignFamily::covering(CoverParams::new(6, 2, 1).unwrap(), [b(&[1, 2]), b(&[3, 4]), b(&[5, 6])]).unwrap();
        let fam = extend_by_recursion(&r2, &sub).unwrap();
        assert_eq!(fam.len(), 10);
        assert!(extend_by_recursion(&sub, &r2).is_err());
    }
}
