//! Closed-form lower and upper bounds on connected covering numbers.
//!
//! Ceiled values are `u64` (exact for every `n <= 64`); the pre-ceiling
//! values of the rational lower bounds are kept as [`BigRational`] so that
//! comparisons never go through floating point.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::model::binom;

/// Formula a bound value was computed from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundSource {
    /// `(C(n,r) - 1) / r`: each added block contributes at most `r` new `r`-subsets.
    CountingLower,
    /// Sidorenko's Turán bound transported through complementation.
    TuranLower,
    /// Iterated Schönheim bound on the plain covering number.
    Schoenheim,
    /// One Schönheim step on top of a known lower bound for `C(n-1, r-1)`.
    SchoenheimStep,
    /// The layered sum `S(n,r)`.
    LayeredSum,
    /// The connector construction `N(n,r)`.
    ConnectorConstruction,
    /// `CC(n-1,r) + C(n-1,r-1)`.
    Recursive,
    /// `sum_{i=r}^{n-1} C(i, r-1)`.
    RecursiveSum,
    /// `2 C(n,r) - 1`.
    DoubledCovering,
    /// Two cliques plus a bridge edge (`r = n - 3`).
    Mantel,
    /// Connected Kostochka systems (`r = n - 4`).
    Kostochka,
    /// Exact triangle-chain value (`r = 2`).
    TriangleChain,
    /// `CC(n,0)`, `CC(n,1)`, `CC(n,n-2)`, `CC(n,n-1)`.
    Trivial,
    /// Literature value stored in the catalog.
    Embedded,
    /// A verified witness file.
    Witness,
}

impl BoundSource {
    pub fn id(self) -> &'static str {
        match self {
            BoundSource::CountingLower => "cc1",
            BoundSource::TuranLower => "cc2",
            BoundSource::Schoenheim => "schoenheim",
            BoundSource::SchoenheimStep => "schoenheim_step",
            BoundSource::LayeredSum => "S",
            BoundSource::ConnectorConstruction => "N",
            BoundSource::Recursive => "recursive",
            BoundSource::RecursiveSum => "recursive_sum",
            BoundSource::DoubledCovering => "2C-1",
            BoundSource::Mantel => "mantel",
            BoundSource::Kostochka => "kostochka",
            BoundSource::TriangleChain => "triangle_chain",
            BoundSource::Trivial => "trivial",
            BoundSource::Embedded => "embedded",
            BoundSource::Witness => "witness",
        }
    }
}

fn ratio_string<S: Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

/// A rational lower bound together with its ceiling.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalBound {
    #[serde(serialize_with = "ratio_string")]
    pub exact: BigRational,
    pub ceiling: u64,
}

impl RationalBound {
    fn new(exact: BigRational) -> Result<Self> {
        let ceiling = exact
            .ceil()
            .to_integer()
            .to_u64()
            .ok_or_else(|| Error::params(format!("ceiling of {exact} exceeds 64 bits")))?;
        Ok(RationalBound { exact, ceiling })
    }
}

fn big(x: BigUint) -> BigInt {
    BigInt::from(x)
}

fn to_u64(x: &BigUint) -> u64 {
    x.to_u64().expect("bound fits in 64 bits")
}

fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

fn check_cc_range(n: usize, r: usize, min_r: usize) -> Result<()> {
    if r < min_r || n < r + 1 {
        return Err(Error::params(format!("need n >= r + 1 and r >= {min_r}, got n = {n}, r = {r}")));
    }
    Ok(())
}

fn cc1_rational(n: usize, r: usize) -> Result<BigRational> {
    check_cc_range(n, r, 1)?;
    let num = big(binom(n, r as i64)) - BigInt::one();
    Ok(BigRational::new(num, BigInt::from(r)))
}

fn cc2_rational(n: usize, r: usize) -> Result<BigRational> {
    if n < r + 2 {
        return Err(Error::params(format!("need n >= r + 2, got n = {n}, r = {r}")));
    }
    let num = BigInt::from(r + 1) * big(binom(n, r as i64 + 1));
    let den = BigInt::from((r + 2) * (n - r - 1));
    Ok(BigRational::new(num, den))
}

/// Counting lower bound `(C(n,r) - 1) / r`.
pub fn cc1_lower(n: usize, r: usize) -> Result<RationalBound> {
    RationalBound::new(cc1_rational(n, r)?)
}

/// Turán-side lower bound `((r+1)/(r+2)) C(n,r+1) / (n-r-1)`.
pub fn cc2_lower(n: usize, r: usize) -> Result<RationalBound> {
    RationalBound::new(cc2_rational(n, r)?)
}

/// Larger of the two ceiled lower bounds (the second only where defined).
pub fn cc_lower(n: usize, r: usize) -> Result<u64> {
    let first = cc1_lower(n, r)?.ceiling;
    Ok(match cc2_lower(n, r) {
        Ok(second) => first.max(second.ceiling),
        Err(_) => first,
    })
}

/// True when the rational comparison of the two lower bounds agrees with the
/// threshold rule: the second strictly exceeds the first iff `3r >= 2(n-1)`.
pub fn lower_threshold_holds(n: usize, r: usize) -> Result<bool> {
    let first = cc1_rational(n, r)?;
    let second = cc2_rational(n, r)?;
    Ok((second > first) == (3 * r >= 2 * (n - 1)))
}

/// Iterated Schönheim bound for `C(n,k,r)`:
/// `ceil(n/k ceil((n-1)/(k-1) ... ceil((n-r+1)/(k-r+1))))`.
pub fn schoenheim(n: usize, k: usize, r: usize) -> Result<u64> {
    if !(n >= k && k >= r) || (k == 0 && n > 0) {
        return Err(Error::params(format!("need n >= k >= r, got ({n},{k},{r})")));
    }
    let mut acc = 1u64;
    for i in (0..r).rev() {
        acc = ceil_div((n - i) as u64 * acc, (k - i) as u64);
    }
    Ok(acc)
}

/// Schönheim bound `L(n,r)` for `C(n, r+1, r)`.
pub fn schoenheim_l(n: usize, r: usize) -> Result<u64> {
    check_cc_range(n, r, 1)?;
    schoenheim(n, r + 1, r)
}

/// One Schönheim step: `ceil(n/(r+1) * c_prev)` where `c_prev <= C(n-1, r-1)`.
pub fn schoenheim_step(n: usize, r: usize, c_lower_prev: u64) -> u64 {
    ceil_div(n as u64 * c_lower_prev, r as u64 + 1)
}

/// Exact pair covering number `C(n,3,2) = ceil(n/3 ceil((n-1)/2))`.
pub fn fort_hedlund(n: usize) -> Result<u64> {
    if n < 3 {
        return Err(Error::params(format!("pair coverings by triples need n >= 3, got {n}")));
    }
    Ok(ceil_div(n as u64 * ceil_div(n as u64 - 1, 2), 3))
}

/// `S(n,r) = sum_{i=1}^{floor((n-r+1)/2)} C(n-2i, r-1) + floor((n-r)/2)`.
pub fn s_upper(n: usize, r: usize) -> Result<u64> {
    check_cc_range(n, r, 2)?;
    let mut acc = BigUint::zero();
    for i in 1..=(n - r).div_ceil(2) {
        acc += binom(n - 2 * i, r as i64 - 1);
    }
    acc += BigUint::from((n - r) / 2);
    Ok(to_u64(&acc))
}

/// Parity of `n - r`: `delta0 = 1` iff it is even.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ParityFlag {
    pub delta0: u8,
}

impl ParityFlag {
    pub fn of(n: usize, r: usize) -> Self {
        ParityFlag {
            delta0: u8::from((n - r).is_multiple_of(2)),
        }
    }

    pub fn is_even(self) -> bool {
        self.delta0 == 1
    }
}

/// Size of the connector construction:
/// `sum_{i=0}^{ceil((n-r)/2)-1} (n-r-2i) C(r-2+2i, r-2) + ceil((n-r)/2) - 1 + delta0 c_sub`,
/// where `c_sub` is the size of an `(n-2, r-1, r-2)`-covering (needed only when `n - r` is even).
pub fn n_upper(n: usize, r: usize, c_sub: Option<u64>) -> Result<u64> {
    check_cc_range(n, r, 2)?;
    let d = n - r;
    let half_up = d.div_ceil(2);
    let mut acc = BigUint::zero();
    for i in 0..half_up {
        acc += BigUint::from(d - 2 * i) * binom(r - 2 + 2 * i, r as i64 - 2);
    }
    let mut total = to_u64(&acc) + half_up as u64 - 1;
    if ParityFlag::of(n, r).is_even() {
        let c = c_sub.ok_or_else(|| {
            Error::params(format!("n - r = {d} is even: an ({}, {}, {})-covering size is required", n - 2, r - 1, r - 2))
        })?;
        total += c;
    }
    Ok(total)
}

/// `CC(n,r) <= CC(n-1,r) + C(n-1,r-1)`.
pub fn recursive_cc_upper(cc_prev: u64, c_value: u64) -> u64 {
    cc_prev + c_value
}

/// Iterated recursion: `sum_{i=r}^{n-1} C(i, r-1)`, with `c_values[j]` bounding `C(r+j, r-1)`.
pub fn sum_upper(n: usize, r: usize, c_values: &[u64]) -> Result<u64> {
    check_cc_range(n, r, 1)?;
    if c_values.len() != n - r {
        return Err(Error::params(format!(
            "expected {} covering values for i = {r}..{}, got {}",
            n - r,
            n - 1,
            c_values.len()
        )));
    }
    Ok(c_values.iter().sum())
}

/// Any covering becomes connected after adding at most `C - 1` blocks.
pub fn two_c_bound(c_value: u64) -> u64 {
    (2 * c_value).saturating_sub(1)
}

/// `T(n,3,2)`: edges of two disjoint near-equal cliques.
pub fn mantel_turan(n: usize) -> u64 {
    to_u64(&(binom(n.div_ceil(2), 2) + binom(n / 2, 2)))
}

/// `CC(n, n-3)`: the two cliques plus one bridge edge.
pub fn mantel_cc(n: usize) -> Result<u64> {
    if n < 4 {
        return Err(Error::params(format!("the clique construction needs n >= 4, got {n}")));
    }
    Ok(mantel_turan(n) + 1)
}

/// Kostochka's `(n,4,3)`-Turán system size, conjectured to equal `T(n,4,3)`.
pub fn kostochka_formula(n: usize) -> u64 {
    let m = (n / 3) as u64;
    match n % 3 {
        0 => m * m.saturating_sub(1) * (2 * m).saturating_sub(1),
        1 => m * m * (2 * m).saturating_sub(1),
        _ => m * m * (2 * m + 1),
    }
}

/// Upper bound on `CC(n, n-4)`: the formula, one larger for `n` in `{5, 6, 9}`.
/// For `n = 8` this is the 21 of the deletion construction; see [`kostochka_open_interval`].
pub fn kostochka_cc_upper(n: usize) -> Result<u64> {
    if n < 4 {
        return Err(Error::params(format!("need n >= 4, got {n}")));
    }
    let base = kostochka_formula(n);
    Ok(match n {
        5 | 6 | 8 | 9 => base + 1,
        _ => base,
    })
}

/// Cells where the connected value is only known to lie in an interval.
pub fn kostochka_open_interval(n: usize) -> Option<(u64, u64)> {
    (n == 8).then(|| (kostochka_formula(8), kostochka_formula(8) + 1))
}

/// Constructive upper bound on `C(v, t+1, t)` from `C(v,t) <= C(v-2, t-1) + C(v-2, t)`
/// iterated down to `v = t+1` (one block) or `v = t+2` (`t + 1` blocks).
pub fn gordon_c_upper(v: usize, t: usize) -> Result<u64> {
    if v < t + 1 {
        return Err(Error::params(format!("need v >= t + 1, got v = {v}, t = {t}")));
    }
    let mut acc = BigUint::zero();
    let mut w = v;
    while w > t + 2 {
        acc += binom(w - 2, t as i64 - 1);
        w -= 2;
    }
    let base = if w == t + 1 { 1 } else { t as u64 + 1 };
    Ok(to_u64(&acc) + base)
}

fn gap_sum(r: usize, upper: usize, weight: impl Fn(usize) -> usize) -> BigInt {
    let mut acc = BigInt::zero();
    for i in 0..upper {
        acc += BigInt::from(weight(i)) * big(binom(r - 2 + 2 * i, r as i64 - 3));
    }
    acc
}

/// Checks `S = N + sum_{i<h} (h - i) C(r-2+2i, r-3) + delta0 (1 - c_sub)` with `h = floor((n-r)/2)`,
/// using the same `c_sub` inside `N`.
pub fn thm1_check(n: usize, r: usize, c_sub: u64) -> Result<bool> {
    check_cc_range(n, r, 2)?;
    let h = (n - r) / 2;
    let even = ParityFlag::of(n, r).is_even();
    let s = BigInt::from(s_upper(n, r)?);
    let nn = BigInt::from(n_upper(n, r, Some(c_sub))?);
    let mut rhs = nn + gap_sum(r, h, |i| h - i);
    if even {
        rhs += BigInt::one() - BigInt::from(c_sub);
    }
    Ok(s == rhs)
}

/// Checks `S >= N + sum_{i=0}^{h-2} (h - i - 1) C(r-2+2i, r-3)` for even `n - r = 2h`,
/// with `N` fed the constructive value [`gordon_c_upper`]`(n-2, r-2)`.
pub fn thgen_check(n: usize, r: usize) -> Result<bool> {
    check_cc_range(n, r, 2)?;
    if !(n - r).is_multiple_of(2) || n < r + 2 {
        return Err(Error::params(format!("need n - r even and positive, got n = {n}, r = {r}")));
    }
    let h = (n - r) / 2;
    let c_sub = gordon_c_upper(n - 2, r - 2)?;
    let s = BigInt::from(s_upper(n, r)?);
    let rhs = BigInt::from(n_upper(n, r, Some(c_sub))?) + gap_sum(r, h - 1, |i| h - i - 1);
    Ok(s >= rhs)
}

/// Inputs for a [`BoundRecord`] that depend on covering numbers rather than closed forms.
#[derive(Clone, Debug, Default)]
pub struct BoundInputs {
    /// Size of an `(n-2, r-1, r-2)`-covering, for `N` when `n - r` is even.
    pub c_sub: Option<u64>,
    /// Upper bound on `CC(n-1, r)`.
    pub cc_prev: Option<u64>,
    /// Upper bound on `C(n-1, r-1)`.
    pub c_prev: Option<u64>,
    /// Upper bound on `C(n, r)`.
    pub c_value: Option<u64>,
    /// Upper bounds on `C(i, r-1)` for `i = r..n-1`.
    pub c_chain: Option<Vec<u64>>,
    /// Lower bound on `C(n-1, r-1)` for one Schönheim step.
    pub c_lower_prev: Option<u64>,
}

/// A single bound value with the formula it came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tagged {
    pub value: u64,
    pub source: &'static str,
}

impl Tagged {
    fn new(value: u64, source: BoundSource) -> Self {
        Tagged {
            value,
            source: source.id(),
        }
    }
}

/// Every bound on `CC(n,r)` that applies, each tagged by its formula.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundRecord {
    pub n: usize,
    pub r: usize,
    pub lower_cc1: Option<RationalBound>,
    pub lower_cc2: Option<RationalBound>,
    pub lower_schoenheim: Option<Tagged>,
    pub lower_schoenheim_step: Option<Tagged>,
    pub upper_s: Option<Tagged>,
    pub upper_n: Option<Tagged>,
    pub upper_recursive: Option<Tagged>,
    pub upper_sum: Option<Tagged>,
    pub upper_2c_minus_1: Option<Tagged>,
    pub upper_mantel: Option<Tagged>,
    pub upper_kostochka: Option<Tagged>,
}

impl BoundRecord {
    pub fn compute(n: usize, r: usize, inputs: &BoundInputs) -> Result<Self> {
        check_cc_range(n, r, 1)?;
        let opt = |x: Result<u64>, src| x.ok().map(|v| Tagged::new(v, src));
        Ok(BoundRecord {
            n,
            r,
            lower_cc1: cc1_lower(n, r).ok(),
            lower_cc2: cc2_lower(n, r).ok(),
            lower_schoenheim: opt(schoenheim_l(n, r), BoundSource::Schoenheim),
            lower_schoenheim_step: inputs
                .c_lower_prev
                .map(|c| Tagged::new(schoenheim_step(n, r, c), BoundSource::SchoenheimStep)),
            upper_s: opt(s_upper(n, r), BoundSource::LayeredSum),
            upper_n: opt(n_upper(n, r, inputs.c_sub), BoundSource::ConnectorConstruction),
            upper_recursive: match (inputs.cc_prev, inputs.c_prev) {
                (Some(a), Some(b)) => Some(Tagged::new(recursive_cc_upper(a, b), BoundSource::Recursive)),
                _ => None,
            },
            upper_sum: inputs
                .c_chain
                .as_ref()
                .and_then(|c| opt(sum_upper(n, r, c), BoundSource::RecursiveSum)),
            upper_2c_minus_1: inputs
                .c_value
                .map(|c| Tagged::new(two_c_bound(c), BoundSource::DoubledCovering)),
            upper_mantel: (n >= 4 && r + 3 == n)
                .then(|| opt(mantel_cc(n), BoundSource::Mantel))
                .flatten(),
            upper_kostochka: (n >= 4 && r + 4 == n)
                .then(|| opt(kostochka_cc_upper(n), BoundSource::Kostochka))
                .flatten(),
        })
    }

    /// Largest lower bound present.
    pub fn best_lower(&self) -> Option<Tagged> {
        let mut best: Option<Tagged> = None;
        let mut offer = |t: Tagged| {
            if best.as_ref().is_none_or(|b| t.value > b.value) {
                best = Some(t);
            }
        };
        if let Some(b) = &self.lower_cc1 {
            offer(Tagged::new(b.ceiling, BoundSource::CountingLower));
        }
        if let Some(b) = &self.lower_cc2 {
            offer(Tagged::new(b.ceiling, BoundSource::TuranLower));
        }
        for t in [&self.lower_schoenheim, &self.lower_schoenheim_step].into_iter().flatten() {
            offer(t.clone());
        }
        best
    }

    /// Smallest upper bound present.
    pub fn best_upper(&self) -> Option<Tagged> {
        [
            &self.upper_mantel,
            &self.upper_kostochka,
            &self.upper_n,
            &self.upper_recursive,
            &self.upper_s,
            &self.upper_sum,
            &self.upper_2c_minus_1,
        ]
        .into_iter()
        .flatten()
        .min_by_key(|t| t.value)
        .cloned()
    }
}

/// Exact ratios of bounds to `C(n,r)`, for trend inspection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AsymptoticRatios {
    #[serde(serialize_with = "opt_ratio")]
    pub lower: Option<BigRational>,
    #[serde(serialize_with = "opt_ratio")]
    pub upper: Option<BigRational>,
    #[serde(serialize_with = "opt_ratio")]
    pub layered_sum: Option<BigRational>,
}

fn opt_ratio<S: Serializer>(q: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_some(&q.to_string()),
        None => s.serialize_none(),
    }
}

pub fn asymptotic_ratios(n: usize, r: usize, record: &BoundRecord) -> AsymptoticRatios {
    let total = big(binom(n, r as i64));
    let ratio = |v: u64| BigRational::new(BigInt::from(v), total.clone());
    AsymptoticRatios {
        lower: record.best_lower().map(|t| ratio(t.value)),
        upper: record.best_upper().map(|t| ratio(t.value)),
        layered_sum: record.upper_s.as_ref().map(|t| ratio(t.value)),
    }
}
