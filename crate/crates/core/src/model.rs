//! Parameters, blocks and design families, plus exact binomial helpers.
//!
//! A [`Block`] is a subset of the ground set `{1, .., n}` stored as a bit
//! mask (bit `i - 1` set for element `i`), so ground sets are limited to
//! [`MAX_GROUND`] points. Families keep their blocks in canonical
//! lexicographic order, which makes equality and file output deterministic.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported ground set.
pub const MAX_GROUND: usize = 64;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Block(u64);

impl Block {
    pub const EMPTY: Block = Block(0);

    pub const fn from_mask(mask: u64) -> Self {
        Block(mask)
    }

    pub const fn mask(self) -> u64 {
        self.0
    }

    /// Builds a block from distinct elements in `1..=64`, in any order.
    pub fn new(elements: &[usize]) -> Result<Self> {
        let mut mask = 0u64;
        for &e in elements {
            if e == 0 || e > MAX_GROUND {
                return Err(Error::ElementOutOfRange {
                    element: e,
                    n: MAX_GROUND,
                });
            }
            let bit = 1u64 << (e - 1);
            if mask & bit != 0 {
                return Err(Error::params(format!("element {e} repeated in block")));
            }
            mask |= bit;
        }
        Ok(Block(mask))
    }

    /// The full ground set `{1, .., n}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_GROUND);
        if n == MAX_GROUND {
            Block(u64::MAX)
        } else {
            Block((1u64 << n) - 1)
        }
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, e: usize) -> bool {
        (1..=MAX_GROUND).contains(&e) && self.0 & (1u64 << (e - 1)) != 0
    }

    pub fn with(self, e: usize) -> Self {
        Block(self.0 | (1u64 << (e - 1)))
    }

    pub fn without(self, e: usize) -> Self {
        Block(self.0 & !(1u64 << (e - 1)))
    }

    pub fn union(self, other: Block) -> Self {
        Block(self.0 | other.0)
    }

    pub fn intersection(self, other: Block) -> Self {
        Block(self.0 & other.0)
    }

    pub fn difference(self, other: Block) -> Self {
        Block(self.0 & !other.0)
    }

    pub fn intersection_len(self, other: Block) -> usize {
        (self.0 & other.0).count_ones() as usize
    }

    pub fn is_subset(self, other: Block) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn min_element(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize + 1)
    }

    pub fn max_element(self) -> Option<usize> {
        (self.0 != 0).then(|| 64 - self.0.leading_zeros() as usize)
    }

    /// True when every element lies in `1..=n`.
    pub fn within(self, n: usize) -> bool {
        self.is_subset(Block::full(n))
    }

    pub fn elements(self) -> Elements {
        Elements(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.elements().collect()
    }

    /// `{1..n} \ self`. Fails if the block has elements above `n`.
    pub fn complement(self, n: usize) -> Result<Block> {
        complement_block(self, n)
    }
}

/// Set complement inside the ground set `{1, .., n}`.
pub fn complement_block(b: Block, n: usize) -> Result<Block> {
    if n > MAX_GROUND {
        return Err(Error::params(format!("ground set {n} exceeds {MAX_GROUND}")));
    }
    if let Some(e) = b.max_element().filter(|&e| e > n) {
        return Err(Error::ElementOutOfRange { element: e, n });
    }
    Ok(Block(Block::full(n).0 & !b.0))
}

pub struct Elements(u64);

impl Iterator for Elements {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let e = self.0.trailing_zeros() as usize + 1;
        self.0 &= self.0 - 1;
        Some(e)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Elements {}

// Lexicographic order on the ascending element sequences.
impl Ord for Block {
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        let low = diff & diff.wrapping_neg();
        let above = !(low | (low - 1));
        if self.0 & low != 0 {
            // self has the smaller element at the first difference, unless
            // other has already run out there.
            if other.0 & above != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        } else if self.0 & above != 0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

impl PartialOrd for Block {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Block {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.elements())
    }
}

impl<'de> Deserialize<'de> for Block {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        Block::new(&v).map_err(serde::de::Error::custom)
    }
}

/// All `k`-subsets of `{1, .., n}` in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> KSubsets {
    assert!(n <= MAX_GROUND);
    KSubsets {
        n,
        idx: if k <= n { Some((1..=k).collect()) } else { None },
    }
}

/// All `k`-subsets of the given block, in lexicographic order.
pub fn sub_blocks(b: Block, k: usize) -> impl Iterator<Item = Block> {
    let elems = b.to_vec();
    let size = elems.len();
    k_subsets(size, k).map(move |s| Block(s.elements().fold(0u64, |m, i| m | 1u64 << (elems[i - 1] - 1))))
}

pub struct KSubsets {
    n: usize,
    idx: Option<Vec<usize>>,
}

impl Iterator for KSubsets {
    type Item = Block;

    fn next(&mut self) -> Option<Block> {
        let idx = self.idx.as_mut()?;
        let out = Block(idx.iter().fold(0u64, |m, &e| m | 1u64 << (e - 1)));
        let k = idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.idx = None;
                break;
            }
            i -= 1;
            if idx[i] < self.n - (k - 1 - i) {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Dense colexicographic ranking of the `r`-subsets of `{1, .., n}`.
#[derive(Clone, Debug)]
pub struct SubsetIndex {
    r: usize,
    count: usize,
    // pascal[a][b] = C(a, b) for a <= n, b <= r
    pascal: Vec<Vec<u64>>,
}

impl SubsetIndex {
    pub fn new(n: usize, r: usize) -> Self {
        let mut pascal = vec![vec![0u64; r + 2]; n + 1];
        for a in 0..=n {
            pascal[a][0] = 1;
            for b in 1..=r.min(a) {
                pascal[a][b] = pascal[a - 1][b - 1].saturating_add(if b < a { pascal[a - 1][b] } else { 0 });
            }
        }
        let count = if r <= n { pascal[n][r] as usize } else { 0 };
        SubsetIndex { r, count, pascal }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// Rank of an `r`-subset; the block must have exactly `r` elements.
    pub fn rank(&self, b: Block) -> usize {
        debug_assert_eq!(b.len(), self.r);
        b.elements()
            .enumerate()
            .map(|(i, e)| self.pascal[e - 1][i + 1] as usize)
            .sum()
    }

    pub fn unrank(&self, mut rank: usize) -> Block {
        let mut mask = 0u64;
        let mut a = self.pascal.len() - 1;
        for i in (1..=self.r).rev() {
            while self.pascal[a][i] as usize > rank {
                a -= 1;
            }
            rank -= self.pascal[a][i] as usize;
            mask |= 1u64 << a;
        }
        Block(mask)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoverParams {
    n: usize,
    k: usize,
    r: usize,
}

impl CoverParams {
    pub fn new(n: usize, k: usize, r: usize) -> Result<Self> {
        if n == 0 || n > MAX_GROUND {
            return Err(Error::params(format!("n = {n} must lie in 1..={MAX_GROUND}")));
        }
        if !(n >= k && k >= r) {
            return Err(Error::params(format!("need n >= k >= r, got ({n},{k},{r})")));
        }
        Ok(CoverParams { n, k, r })
    }

    /// `(n, r + 1, r)`, the shape used throughout for `C(n,r)` and `CC(n,r)`.
    pub fn standard(n: usize, r: usize) -> Result<Self> {
        Self::new(n, r + 1, r)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Parameters of the complementary Turán system `(n, n - r, n - k)`.
    pub fn dual(&self) -> TuranParams {
        TuranParams {
            n: self.n,
            m: self.n - self.r,
            p: self.n - self.k,
        }
    }
}

impl fmt::Display for CoverParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.n, self.k, self.r)
    }
}

/// Parameters of an `(n, m, p)`-Turán system: `p`-sets hitting every `m`-set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TuranParams {
    n: usize,
    m: usize,
    p: usize,
}

impl TuranParams {
    /// `p = 0` is accepted so that coverings with `k = n` have a dual.
    pub fn new(n: usize, m: usize, p: usize) -> Result<Self> {
        if n == 0 || n > MAX_GROUND {
            return Err(Error::params(format!("n = {n} must lie in 1..={MAX_GROUND}")));
        }
        if !(n >= m && m >= p) {
            return Err(Error::params(format!("need n >= m >= p, got ({n},{m},{p})")));
        }
        Ok(TuranParams { n, m, p })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Shared-subset size `2p - m` defining adjacency, when `0 <= 2p - m <= p`.
    pub fn threshold(&self) -> Option<usize> {
        let t = 2 * self.p as isize - self.m as isize;
        (t >= 0 && t as usize <= self.p).then_some(t as usize)
    }

    pub fn dual(&self) -> CoverParams {
        CoverParams {
            n: self.n,
            k: self.n - self.p,
            r: self.n - self.m,
        }
    }
}

impl fmt::Display for TuranParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.n, self.m, self.p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DesignKind {
    Covering,
    Turan,
}

impl fmt::Display for DesignKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DesignKind::Covering => "covering",
            DesignKind::Turan => "turan",
        })
    }
}

impl FromStr for DesignKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "covering" => Ok(DesignKind::Covering),
            "turan" => Ok(DesignKind::Turan),
            other => Err(Error::params(format!("unknown design kind `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DesignParams {
    Covering(CoverParams),
    Turan(TuranParams),
}

impl DesignParams {
    pub fn n(&self) -> usize {
        match self {
            DesignParams::Covering(p) => p.n,
            DesignParams::Turan(p) => p.n,
        }
    }

    pub fn block_size(&self) -> usize {
        match self {
            DesignParams::Covering(p) => p.k,
            DesignParams::Turan(p) => p.p,
        }
    }

    pub fn kind(&self) -> DesignKind {
        match self {
            DesignParams::Covering(_) => DesignKind::Covering,
            DesignParams::Turan(_) => DesignKind::Turan,
        }
    }

    /// Header triple as written in design files: `(n, k, r)` or `(n, m, p)`.
    pub fn triple(&self) -> (usize, usize, usize) {
        match self {
            DesignParams::Covering(p) => (p.n, p.k, p.r),
            DesignParams::Turan(p) => (p.n, p.m, p.p),
        }
    }

    /// Block-graph threshold: `r` for coverings, `2p - m` for Turán systems.
    pub fn adjacency_threshold(&self) -> Option<usize> {
        match self {
            DesignParams::Covering(p) => Some(p.r),
            DesignParams::Turan(p) => p.threshold(),
        }
    }

    pub fn dual(&self) -> DesignParams {
        match self {
            DesignParams::Covering(p) => DesignParams::Turan(p.dual()),
            DesignParams::Turan(p) => DesignParams::Covering(p.dual()),
        }
    }
}

impl fmt::Display for DesignParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DesignParams::Covering(p) => write!(f, "{p}-covering"),
            DesignParams::Turan(p) => write!(f, "{p}-Turan system"),
        }
    }
}

/// A set of equal-size blocks with the parameters they are meant to satisfy.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DesignFamily {
    params: DesignParams,
    blocks: Vec<Block>,
}

impl DesignFamily {
    pub fn new(params: DesignParams, blocks: impl IntoIterator<Item = Block>) -> Result<Self> {
        let n = params.n();
        let size = params.block_size();
        let mut blocks: Vec<Block> = blocks.into_iter().collect();
        for &b in &blocks {
            if let Some(e) = b.max_element().filter(|&e| e > n) {
                return Err(Error::ElementOutOfRange { element: e, n });
            }
            if b.len() != size {
                return Err(Error::BlockSize {
                    block: b,
                    found: b.len(),
                    expected: size,
                });
            }
        }
        blocks.sort_unstable();
        if let Some(w) = blocks.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateBlock(w[0]));
        }
        Ok(DesignFamily { params, blocks })
    }

    pub fn covering(params: CoverParams, blocks: impl IntoIterator<Item = Block>) -> Result<Self> {
        Self::new(DesignParams::Covering(params), blocks)
    }

    pub fn turan(params: TuranParams, blocks: impl IntoIterator<Item = Block>) -> Result<Self> {
        Self::new(DesignParams::Turan(params), blocks)
    }

    pub fn params(&self) -> DesignParams {
        self.params
    }

    pub fn kind(&self) -> DesignKind {
        self.params.kind()
    }

    pub fn n(&self) -> usize {
        self.params.n()
    }

    pub fn block_size(&self) -> usize {
        self.params.block_size()
    }

    /// Blocks in canonical (lexicographic) order.
    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn contains(&self, b: Block) -> bool {
        self.blocks.binary_search(&b).is_ok()
    }

    pub fn cover_params(&self) -> Option<CoverParams> {
        match self.params {
            DesignParams::Covering(p) => Some(p),
            DesignParams::Turan(_) => None,
        }
    }

    pub fn turan_params(&self) -> Option<TuranParams> {
        match self.params {
            DesignParams::Turan(p) => Some(p),
            DesignParams::Covering(_) => None,
        }
    }
}

/// Exact binomial coefficients `C(a, b)` for `a <= cap`, built by Pascal's rule.
#[derive(Clone, Debug)]
pub struct BinomialTable {
    rows: Vec<Vec<BigUint>>,
}

impl BinomialTable {
    pub fn new(cap: usize) -> Self {
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(cap + 1);
        for a in 0..=cap {
            let mut row = vec![BigUint::one(); a + 1];
            for b in 1..a {
                row[b] = &rows[a - 1][b - 1] + &rows[a - 1][b];
            }
            rows.push(row);
        }
        BinomialTable { rows }
    }

    pub fn cap(&self) -> usize {
        self.rows.len() - 1
    }

    /// `C(a, b)`, zero when `b < 0` or `b > a`; `None` above the cap.
    pub fn get(&self, a: usize, b: i64) -> Option<BigUint> {
        let row = self.rows.get(a)?;
        if b < 0 || b as usize > a {
            return Some(BigUint::zero());
        }
        Some(row[b as usize].clone())
    }
}

const BINOMIAL_CAP: usize = 128;

fn shared_table() -> &'static BinomialTable {
    static TABLE: OnceLock<BinomialTable> = OnceLock::new();
    TABLE.get_or_init(|| BinomialTable::new(BINOMIAL_CAP))
}

/// Exact `C(a, b)` with `C(a, b) = 0` for `b < 0` or `b > a`.
pub fn binom(a: usize, b: i64) -> BigUint {
    if let Some(v) = shared_table().get(a, b) {
        return v;
    }
    if b < 0 || b as usize > a {
        return BigUint::zero();
    }
    let b = (b as usize).min(a - b as usize);
    let mut acc = BigUint::one();
    for i in 0..b {
        acc = acc * BigUint::from(a - i) / BigUint::from(i + 1);
    }
    acc
}

/// `C(a, b)` as a machine integer; exact for every `a <= 64`.
pub fn binom_u64(a: usize, b: i64) -> u64 {
    binom(a, b)
        .to_u64()
        .unwrap_or_else(|| panic!("C({a},{b}) does not fit in 64 bits"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blk(v: &[usize]) -> Block {
        Block::new(v).unwrap()
    }

    #[test]
    fn complement_examples() {
        assert_eq!(complement_block(blk(&[1, 2, 3]), 5).unwrap(), blk(&[4, 5]));
        assert_eq!(complement_block(Block::EMPTY, 3).unwrap(), blk(&[1, 2, 3]));
        assert!(matches!(
            complement_block(blk(&[1, 7]), 5),
            Err(Error::ElementOutOfRange { element: 7, n: 5 })
        ));
    }

    #[test]
    fn binom_values() {
        assert_eq!(binom(7, 3), BigUint::from(35u32));
        assert_eq!(binom(4, -1), BigUint::zero());
        assert_eq!(binom(3, 5), BigUint::zero());
        assert_eq!(binom_u64(14, 7), 3432);
        assert_eq!(binom_u64(60, 30), 118_264_581_564_861_424);
        assert_eq!(binom(200, 3), BigUint::from(1_313_400u32));
    }

    #[test]
    fn binomial_table_pascal_and_symmetry() {
        let t = BinomialTable::new(100);
        for a in 1..=100usize {
            for b in 0..=a as i64 {
                let v = t.get(a, b).unwrap();
                assert_eq!(v, t.get(a, a as i64 - b).unwrap());
                if b >= 1 {
                    assert_eq!(v, t.get(a - 1, b - 1).unwrap() + t.get(a - 1, b).unwrap());
                }
            }
        }
        assert!(t.get(101, 3).is_none());
    }

    #[test]
    fn lexicographic_block_order() {
        let mut v = vec![blk(&[1, 3, 4]), blk(&[1, 2, 5]), blk(&[2, 3]), blk(&[1, 2]), blk(&[1, 2, 3])];
        v.sort();
        assert_eq!(
            v,
            vec![blk(&[1, 2]), blk(&[1, 2, 3]), blk(&[1, 2, 5]), blk(&[1, 3, 4]), blk(&[2, 3])]
        );
    }

    #[test]
    fn k_subsets_are_lexicographic_and_complete() {
        let all: Vec<Block> = k_subsets(6, 3).collect();
        assert_eq!(all.len(), 20);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(all[0], blk(&[1, 2, 3]));
        assert_eq!(all[19], blk(&[4, 5, 6]));
        assert_eq!(k_subsets(4, 0).collect::<Vec<_>>(), vec![Block::EMPTY]);
        assert_eq!(k_subsets(3, 4).count(), 0);
    }

    #[test]
    fn subset_index_is_a_bijection() {
        let idx = SubsetIndex::new(9, 4);
        assert_eq!(idx.count(), 126);
        let mut seen = vec![false; idx.count()];
        for b in k_subsets(9, 4) {
            let r = idx.rank(b);
            assert!(!seen[r]);
            seen[r] = true;
            assert_eq!(idx.unrank(r), b);
        }
    }

    #[test]
    fn family_rejects_bad_blocks() {
        let p = CoverParams::new(5, 3, 2).unwrap();
        assert!(matches!(
            DesignFamily::covering(p, [blk(&[1, 2])]),
            Err(Error::BlockSize { .. })
        ));
        assert!(matches!(
            DesignFamily::covering(p, [blk(&[1, 2, 6])]),
            Err(Error::ElementOutOfRange { .. })
        ));
        assert!(matches!(
            DesignFamily::covering(p, [blk(&[1, 2, 3]), blk(&[3, 2, 1])]),
            Err(Error::DuplicateBlock(_))
        ));
        let f = DesignFamily::covering(p, [blk(&[3, 4, 5]), blk(&[1, 2, 3])]).unwrap();
        assert_eq!(f.blocks()[0], blk(&[1, 2, 3]));
    }

    #[test]
    fn params_validation_and_threshold() {
        assert!(CoverParams::new(3, 4, 2).is_err());
        assert!(CoverParams::new(65, 3, 2).is_err());
        assert_eq!(TuranParams::new(7, 4, 3).unwrap().threshold(), Some(2));
        assert_eq!(TuranParams::new(7, 3, 2).unwrap().threshold(), Some(1));
        assert_eq!(TuranParams::new(7, 5, 2).unwrap().threshold(), None);
        let c = CoverParams::new(7, 4, 3).unwrap();
        assert_eq!(c.dual(), TuranParams::new(7, 4, 3).unwrap());
        assert_eq!(c.dual().dual(), c);
    }

    proptest::proptest! {
        #[test]
        fn complement_is_involutive(mask in proptest::num::u64::ANY, n in 1usize..=20) {
            let b = Block::from_mask(mask & Block::full(n).mask());
            let c = complement_block(b, n).unwrap();
            proptest::prop_assert_eq!(c.len() + b.len(), n);
            proptest::prop_assert_eq!(complement_block(c, n).unwrap(), b);
        }

        #[test]
        fn block_order_matches_vec_order(a in 0u64..(1 << 12), b in 0u64..(1 << 12)) {
            let (x, y) = (Block::from_mask(a), Block::from_mask(b));
            proptest::prop_assert_eq!(x.cmp(&y), x.to_vec().cmp(&y.to_vec()));
        }
    }
}
