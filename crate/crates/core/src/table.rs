//! The `CC(n,r)` table: best lower and upper bounds for every `0 <= r < n <= n_max`,
//! each tagged by the formulas attaining it, and a cell-by-cell comparison with the
//! published grid for `n <= 14`.
//!
//! Upper bounds from the recursion `CC(n,r) <= CC(n-1,r) + C(n-1,r,r-1)` are chained down
//! each column, so columns are computed independently and in parallel.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds;
use crate::catalog::{stated_connected_lower, Catalog, CoveringNumberEntry};
use crate::error::{Error, Result};
use crate::model::CoverParams;

/// Largest `n` covered by the published grid.
pub const PUBLISHED_N_MAX: usize = 14;

/// Published grid, one line per `r`; the first entry of each line is `n = r + 1`.
/// `v^x` tags a value with key letters, `[a,b]` is an interval.
const PUBLISHED_GRID: &str = "\
0: 1 1 1 1 1 1 1 1 1 1 1 1 1 1
1: 1 2 3 4 5 6 7 8 9 10 11 12 13
2: 1 3 5^{e,t} 7^e 10^e 14^e 18^e 22^e 27^e 33^e 39^e 45^e
3: 1 4 7^{p,t} 12^{p,u} 19^p 28^p 40^p 55^p 73^p [95^l,97^r] [121^l,123^r]
4: 1 5 10^t [20,21^u] [32^l,35^r] [53^l,59^r] [83^l,89^r] [124^l,136^r] [179^l,193^r] [250^l,271^r]
5: 1 6 13^t 31^u [51^l,61^r] [96^a,111^r] [159^l,177^r] [258^l,290^r] [401^l,447^r]
6: 1 7 17^t 45^u [84^a,95^r] [165^a,195^r] [286^l,327^r] [501^l,572^r]
7: 1 8 21^t 63^u [126^a,147^r] [269^a,323^r] [491^l,587^r]
8: 1 9 26^t 84^u [185^a,210^r] [419^a,505^r]
9: 1 10 31^t 112^u [259^s,297^r]
10: 1 11 37^t [143^s,144^u]
11: 1 12 43^t
12: 1 13
13: 1
";

/// A value with its key letters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tagged {
    pub value: u64,
    pub letters: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PublishedCell {
    pub n: usize,
    pub r: usize,
    /// Exact cells carry the same value and letters on both sides.
    pub lower: Tagged,
    pub upper: Tagged,
    pub text: String,
}

impl PublishedCell {
    pub fn is_exact(&self) -> bool {
        self.lower.value == self.upper.value
    }
}

fn parse_tagged(tok: &str) -> Result<Tagged> {
    let bad = || Error::parse(0, format!("bad grid entry {tok:?}"));
    let (value, letters) = match tok.split_once('^') {
        None => (tok, vec![]),
        Some((v, l)) => {
            let l = l.strip_prefix('{').and_then(|l| l.strip_suffix('}')).unwrap_or(l);
            (v, l.split(',').map(str::to_owned).collect())
        }
    };
    Ok(Tagged { value: value.parse().map_err(|_| bad())?, letters })
}

fn parse_grid(text: &str) -> Result<Vec<PublishedCell>> {
    let mut cells = Vec::new();
    for line in text.lines() {
        let (r, rest) = line.split_once(':').ok_or_else(|| Error::parse(0, format!("bad grid line {line:?}")))?;
        let r: usize = r.parse().map_err(|_| Error::parse(0, format!("bad row index {r:?}")))?;
        for (i, tok) in rest.split_whitespace().enumerate() {
            let (lower, upper) = match tok.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
                Some(inner) => {
                    let (a, b) = inner.split_once(',').ok_or_else(|| Error::parse(0, format!("bad interval {tok:?}")))?;
                    (parse_tagged(a)?, parse_tagged(b)?)
                }
                None => {
                    let t = parse_tagged(tok)?;
                    (t.clone(), t)
                }
            };
            cells.push(PublishedCell { n: r + 1 + i, r, lower, upper, text: tok.to_owned() });
        }
    }
    cells.sort_by_key(|c| (c.n, c.r));
    Ok(cells)
}

/// The published grid, ordered by `(n, r)`.
pub fn published_table() -> Vec<PublishedCell> {
    parse_grid(PUBLISHED_GRID).expect("embedded grid parses")
}

pub fn published_cell(n: usize, r: usize) -> Option<PublishedCell> {
    published_table().into_iter().find(|c| (c.n, c.r) == (n, r))
}

/// Every candidate attaining the best value on one side of a cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Side {
    pub value: u64,
    pub sources: Vec<String>,
    pub letters: Vec<String>,
}

#[derive(Default)]
struct SideBuilder {
    best: Option<Side>,
}

impl SideBuilder {
    fn offer(&mut self, value: u64, source: impl Into<String>, letters: &[&str], better: fn(u64, u64) -> bool) {
        let side = match &mut self.best {
            Some(s) if s.value == value => s,
            Some(s) if !better(value, s.value) => return,
            slot => slot.insert(Side { value, sources: vec![], letters: vec![] }),
        };
        side.sources.push(source.into());
        for l in letters {
            if !side.letters.iter().any(|x| x == l) {
                side.letters.push((*l).to_owned());
            }
        }
    }

    fn finish(self) -> Side {
        let mut s = self.best.expect("trivial bounds are always offered");
        s.letters.sort();
        s
    }
}

fn greater(a: u64, b: u64) -> bool {
    a > b
}

fn smaller(a: u64, b: u64) -> bool {
    a < b
}

/// Comparison of a computed cell with the published one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Match {
    Agree,
    /// Inside the published interval and strictly tighter on some side.
    WithinInterval,
    /// The lower side agrees or tightens, but the published recursive upper needs
    /// plain covering sizes the catalog does not hold.
    InsufficientData,
    Mismatch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableCell {
    pub n: usize,
    pub r: usize,
    pub lower: Side,
    pub upper: Side,
    /// `lower == upper`.
    pub exact: bool,
    /// Bounds on the plain covering number `C(n, r+1, r) <= CC(n,r)`.
    pub covering: Sandwich,
    pub published: Option<String>,
    #[serde(rename = "match")]
    pub matched: Option<Match>,
    /// Published letters are a subset of the computed ones, side by side
    /// (for exact cells, of the letters on either side).
    pub letters_match: Option<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Sandwich {
    pub lower: u64,
    pub upper: Option<u64>,
}

fn covering(cat: &Catalog, n: usize, k: usize, r: usize) -> Option<CoveringNumberEntry> {
    cat.covering_number(n, k, r).ok()
}

fn entry_tag(e: &CoveringNumberEntry, upper: bool) -> String {
    let srcs = if upper { &e.upper_sources } else { &e.lower_sources };
    format!("C({},{},{}):{}", e.n, e.k, e.r, srcs.join("+"))
}

/// Key letter of the counting bound in column `r`.
fn counting_letter(n: usize, r: usize) -> &'static str {
    match r {
        2 => "e",
        3 if n <= 12 => "p",
        _ => "l",
    }
}

fn compute_cell(cat: &Catalog, n: usize, r: usize, prev_upper: Option<u64>) -> Result<TableCell> {
    let mut lo = SideBuilder::default();
    let mut hi = SideBuilder::default();
    let trivial = match r {
        _ if r + 1 == n || r == 0 => Some(1),
        _ if r == 1 || r + 2 == n => Some(n as u64 - 1),
        _ => None,
    };
    if let Some(v) = trivial {
        lo.offer(v, "trivial", &[], greater);
        hi.offer(v, "trivial", &[], smaller);
    }
    if r >= 1 {
        lo.offer(bounds::cc1_lower(n, r)?.ceiling, "cc1", &[counting_letter(n, r)], greater);
        if let Ok(b) = bounds::cc2_lower(n, r) {
            lo.offer(b.ceiling, "cc2", &["l"], greater);
        }
        lo.offer(bounds::schoenheim_l(n, r)?, "schoenheim", &[], greater);
        if n > r + 1 {
            if let Some(prev) = covering(cat, n - 1, r, r - 1) {
                let v = bounds::schoenheim_step(n, r, prev.lower());
                lo.offer(v, format!("schoenheim_step[{}]", entry_tag(&prev, false)), &["s"], greater);
            }
        }
    }
    let plain = covering(cat, n, r + 1, r);
    if let Some(e) = &plain {
        let mut letters = vec![];
        if e.lower_sources.iter().any(|s| s == "table-embedded") {
            letters.push("a");
        }
        if e.lower_sources.iter().any(|s| s.starts_with("paper-stated")) {
            letters.push("u");
        }
        lo.offer(e.lower(), entry_tag(e, false), &letters, greater);
        if let Some(u) = e.upper() {
            if r >= 1 {
                hi.offer(bounds::two_c_bound(u), format!("2C-1[{}]", entry_tag(e, true)), &[], smaller);
            }
        }
    }
    if let Some(v) = stated_connected_lower(n, r) {
        lo.offer(v, "stated:disconnected-optima", &["u"], greater);
    }
    if n >= 4 && r + 3 == n {
        let v = bounds::mantel_cc(n)?;
        lo.offer(v, "mantel", &["t"], greater);
        hi.offer(v, "mantel", &["t"], smaller);
    }
    if r == 2 && n >= 3 {
        hi.offer(bounds::cc1_lower(n, 2)?.ceiling, "triangle-chain", &["e"], smaller);
    }
    if n >= 8 && r + 4 == n {
        hi.offer(bounds::kostochka_cc_upper(n)?, "kostochka", &["u"], smaller);
    }
    if r >= 1 {
        if let Some((v, file)) = cat.connected_upper(CoverParams::new(n, r + 1, r)?) {
            let mut letters = vec!["w"];
            if r == 3 && n <= 12 {
                letters.push("p");
            }
            if r + 4 == n {
                letters.push("u");
            }
            hi.offer(v, format!("witness:{file}"), &letters, smaller);
        }
    }
    if r >= 2 && n > r + 1 {
        hi.offer(bounds::s_upper(n, r)?, "S", &[], smaller);
        let c_sub = if (n - r).is_multiple_of(2) {
            covering(cat, n - 2, r - 1, r - 2).and_then(|e| e.upper().map(|u| (u, entry_tag(&e, true))))
        } else {
            None
        };
        if (n - r) % 2 == 1 || c_sub.is_some() {
            let v = bounds::n_upper(n, r, c_sub.as_ref().map(|c| c.0))?;
            let tag = c_sub.map_or_else(|| "N".to_owned(), |(_, t)| format!("N[{t}]"));
            hi.offer(v, tag, &[], smaller);
        }
    }
    if let (Some(prev), true) = (prev_upper, r >= 1 && n > r + 1) {
        if let Some(e) = covering(cat, n - 1, r, r - 1) {
            if let Some(c) = e.upper() {
                let v = bounds::recursive_cc_upper(prev, c);
                hi.offer(v, format!("recursive[CC({},{})+{}]", n - 1, r, entry_tag(&e, true)), &["r"], smaller);
            }
        }
    }
    let lower = lo.finish();
    let upper = hi.finish();
    if lower.value > upper.value {
        return Err(Error::Verification(format!(
            "CC({n},{r}): lower {} ({:?}) exceeds upper {} ({:?})",
            lower.value, lower.sources, upper.value, upper.sources
        )));
    }
    let covering = Sandwich {
        lower: plain.as_ref().map_or(1, CoveringNumberEntry::lower),
        upper: plain.as_ref().and_then(CoveringNumberEntry::upper),
    };
    let mut cell = TableCell {
        n,
        r,
        exact: lower.value == upper.value,
        lower,
        upper,
        covering,
        published: None,
        matched: None,
        letters_match: None,
    };
    if n <= PUBLISHED_N_MAX {
        if let Some(p) = published_cell(n, r) {
            cell.matched = Some(classify(&cell, &p));
            cell.letters_match = Some(letters_agree(&cell, &p));
            cell.published = Some(p.text);
        }
    }
    Ok(cell)
}

/// Compares values; see [`Match`].
pub fn classify(cell: &TableCell, p: &PublishedCell) -> Match {
    let (lo, hi) = (cell.lower.value, cell.upper.value);
    if lo == p.lower.value && hi == p.upper.value {
        return Match::Agree;
    }
    if lo < p.lower.value || lo > p.upper.value {
        return Match::Mismatch;
    }
    if hi <= p.upper.value {
        return Match::WithinInterval;
    }
    if p.upper.letters.iter().any(|l| l == "r") {
        Match::InsufficientData
    } else {
        Match::Mismatch
    }
}

fn letters_agree(cell: &TableCell, p: &PublishedCell) -> bool {
    let has = |side: &Side, l: &String| side.letters.contains(l);
    if p.is_exact() {
        p.lower.letters.iter().all(|l| has(&cell.lower, l) || has(&cell.upper, l))
    } else {
        p.lower.letters.iter().all(|l| has(&cell.lower, l)) && p.upper.letters.iter().all(|l| has(&cell.upper, l))
    }
}

fn compute_column(cat: &Catalog, r: usize, n_max: usize) -> Result<Vec<TableCell>> {
    let mut out: Vec<TableCell> = Vec::with_capacity(n_max.saturating_sub(r));
    for n in r + 1..=n_max {
        let prev = out.last().map(|c| c.upper.value);
        out.push(compute_cell(cat, n, r, prev)?);
    }
    Ok(out)
}

/// The single cell `(n, r)`, with its recursive chain computed from `n = r + 1`.
pub fn compute_single(cat: &Catalog, n: usize, r: usize) -> Result<TableCell> {
    if r >= n || n > crate::model::MAX_GROUND {
        return Err(Error::params(format!("need 0 <= r < n <= {}, got n = {n}, r = {r}", crate::model::MAX_GROUND)));
    }
    Ok(compute_column(cat, r, n)?.pop().expect("column ends at n"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatchCounts {
    pub agree: usize,
    pub within_interval: usize,
    pub insufficient_data: usize,
    pub mismatch: usize,
    pub letter_mismatch: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableReport {
    pub n_max: usize,
    /// Ordered by `(n, r)`.
    pub cells: Vec<TableCell>,
    pub counts: MatchCounts,
}

impl TableReport {
    pub fn cell(&self, n: usize, r: usize) -> Option<&TableCell> {
        self.cells.iter().find(|c| (c.n, c.r) == (n, r))
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &TableCell> {
        self.cells.iter().filter(|c| c.matched == Some(Match::Mismatch))
    }
}

/// Table for `0 <= r < n <= n_max`; `n_max` is limited to the 64-element ground set.
pub fn compute_table(cat: &Catalog, n_max: usize) -> Result<TableReport> {
    if !(1..=crate::model::MAX_GROUND).contains(&n_max) {
        return Err(Error::params(format!("n_max must lie in 1..={}, got {n_max}", crate::model::MAX_GROUND)));
    }
    let columns: Vec<Vec<TableCell>> = (0..n_max).into_par_iter().map(|r| compute_column(cat, r, n_max)).collect::<Result<_>>()?;
    let mut cells: Vec<TableCell> = columns.into_iter().flatten().collect();
    cells.sort_by_key(|c| (c.n, c.r));
    let count = |m| cells.iter().filter(|c| c.matched == Some(m)).count();
    let counts = MatchCounts {
        agree: count(Match::Agree),
        within_interval: count(Match::WithinInterval),
        insufficient_data: count(Match::InsufficientData),
        mismatch: count(Match::Mismatch),
        letter_mismatch: cells.iter().filter(|c| c.letters_match == Some(false)).count(),
    };
    Ok(TableReport { n_max, cells, counts })
}

fn cell_text(c: &TableCell) -> String {
    let side = |s: &Side| {
        let shown = |l: &&str| *l != "w" && !s.sources.iter().any(|x| x == "trivial");
        let l: Vec<&str> = s.letters.iter().map(String::as_str).filter(shown).collect();
        match l.len() {
            0 => s.value.to_string(),
            1 => format!("{}^{}", s.value, l[0]),
            _ => format!("{}^{{{}}}", s.value, l.join(",")),
        }
    };
    if c.exact {
        let mut merged = c.lower.clone();
        for l in &c.upper.letters {
            if !merged.letters.contains(l) {
                merged.letters.push(l.clone());
            }
        }
        merged.letters.sort();
        side(&merged)
    } else {
        format!("[{},{}]", side(&c.lower), side(&c.upper))
    }
}

fn match_mark(m: Option<Match>) -> &'static str {
    match m {
        Some(Match::Agree) | None => "",
        Some(Match::WithinInterval) => "<",
        Some(Match::InsufficientData) => "?",
        Some(Match::Mismatch) => "!",
    }
}

/// Grid with one line per `r`, followed by the counts and every cell that does not agree.
/// Marks: `<` tighter than published, `?` insufficient catalog data, `!` mismatch.
pub fn render_text(rep: &TableReport) -> String {
    let mut s = String::new();
    for r in 0..rep.n_max {
        let row: Vec<String> = rep
            .cells
            .iter()
            .filter(|c| c.r == r)
            .map(|c| format!("{}{}", cell_text(c), match_mark(c.matched)))
            .collect();
        let _ = writeln!(s, "r={r:<2} n={}..: {}", r + 1, row.join(" "));
    }
    let k = &rep.counts;
    let _ = writeln!(
        s,
        "\nagree {}, within interval {}, insufficient data {}, mismatch {}, letter differences {}",
        k.agree, k.within_interval, k.insufficient_data, k.mismatch, k.letter_mismatch
    );
    for c in rep.cells.iter().filter(|c| c.matched.is_some_and(|m| m != Match::Agree) || c.letters_match == Some(false)) {
        let _ = writeln!(
            s,
            "  ({},{}) computed {} published {} {:?}: upper via {}",
            c.n,
            c.r,
            cell_text(c),
            c.published.as_deref().unwrap_or("-"),
            c.matched.unwrap_or(Match::Agree),
            c.upper.sources.join(" | ")
        );
    }
    s
}

pub const CSV_HEADER: &str =
    "n,r,lower,lower_sources,lower_letters,upper,upper_sources,upper_letters,exact,covering_lower,covering_upper,published,match,letters_match";

pub fn render_csv(rep: &TableReport) -> String {
    let quote = |v: &[String]| format!("\"{}\"", v.join(" ").replace('"', "\"\""));
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for c in &rep.cells {
        let matched = c.matched.map_or(String::new(), |m| serde_json::to_value(m).expect("enum").as_str().unwrap_or("").to_owned());
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            c.n,
            c.r,
            c.lower.value,
            quote(&c.lower.sources),
            quote(&c.lower.letters),
            c.upper.value,
            quote(&c.upper.sources),
            quote(&c.upper.letters),
            c.exact,
            c.covering.lower,
            c.covering.upper.map_or(String::new(), |u| u.to_string()),
            c.published.as_deref().unwrap_or(""),
            matched,
            c.letters_match.map_or(String::new(), |b| b.to_string()),
        );
    }
    s
}

pub fn render_json(rep: &TableReport) -> String {
    serde_json::to_string_pretty(rep).expect("report serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_has_every_cell_once() {
        let t = published_table();
        assert_eq!(t.len(), 105);
        for n in 1..=14 {
            for r in 0..n {
                assert_eq!(t.iter().filter(|c| (c.n, c.r) == (n, r)).count(), 1, "({n},{r})");
            }
        }
    }

    #[test]
    fn grid_entries_parse() {
        let c = published_cell(7, 3).unwrap();
        assert_eq!((c.lower.value, c.upper.value), (12, 12));
        assert_eq!(c.lower.letters, ["p", "u"]);
        let c = published_cell(8, 4).unwrap();
        assert_eq!((c.lower.value, c.upper.value), (20, 21));
        assert!(c.lower.letters.is_empty());
        assert_eq!(c.upper.letters, ["u"]);
        let c = published_cell(14, 9).unwrap();
        assert_eq!((c.lower.value, c.lower.letters[0].as_str()), (259, "s"));
        assert_eq!(published_cell(14, 13).unwrap().upper.value, 1);
    }

    #[test]
    fn closed_form_cells_without_witnesses() {
        let rep = compute_table(&Catalog::in_memory(), 14).unwrap();
        assert_eq!(rep.cells.len(), 105);
        let exact = |n, r| {
            let c = rep.cell(n, r).unwrap();
            assert!(c.exact, "({n},{r}) {c:?}");
            c.lower.value
        };
        assert_eq!(exact(14, 2), 45);
        assert_eq!(exact(14, 11), 43);
        assert_eq!(exact(13, 9), 112);
        assert_eq!(exact(9, 5), 31);
        let c = rep.cell(14, 9).unwrap();
        assert_eq!(c.lower.value, 259);
        assert!(c.lower.letters.contains(&"s".to_owned()));
        let c = rep.cell(14, 10).unwrap();
        assert_eq!((c.lower.value, c.upper.value), (143, 144));
        let c = rep.cell(8, 4).unwrap();
        assert_eq!((c.lower.value, c.upper.value), (20, 21));
        assert_eq!(c.matched, Some(Match::Agree));
        let r3 = rep.mismatches().map(|c| (c.n, c.r)).collect::<Vec<_>>();
        assert_eq!(r3, [(7, 3), (8, 3), (9, 3), (10, 3), (11, 3), (12, 3)], "these need witnesses");
    }

    #[test]
    fn classification() {
        let p = published_cell(13, 3).unwrap();
        let mut cell = compute_table(&Catalog::in_memory(), 13).unwrap().cell(13, 3).unwrap().clone();
        cell.lower.value = 95;
        cell.upper.value = 97;
        assert_eq!(classify(&cell, &p), Match::Agree);
        cell.upper.value = 96;
        assert_eq!(classify(&cell, &p), Match::WithinInterval);
        cell.upper.value = 99;
        assert_eq!(classify(&cell, &p), Match::InsufficientData);
        cell.lower.value = 94;
        assert_eq!(classify(&cell, &p), Match::Mismatch);
        let exact = published_cell(10, 2).unwrap();
        cell.lower.value = 27;
        cell.upper.value = 28;
        assert_eq!(classify(&cell, &exact), Match::Mismatch);
    }

    #[test]
    fn reaches_sixty() {
        let rep = compute_table(&Catalog::in_memory(), 60).unwrap();
        assert_eq!(rep.cells.len(), 60 * 61 / 2);
        assert!(rep.cells.iter().all(|c| c.lower.value <= c.upper.value));
        assert_eq!(rep.cell(60, 2).unwrap().upper.value, (60 * 59 / 2 - 1u64).div_ceil(2));
    }

    #[test]
    fn csv_columns_fixed() {
        let rep = compute_table(&Catalog::in_memory(), 5).unwrap();
        let csv = render_csv(&rep);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        assert_eq!(lines.count(), 15);
        assert!(render_json(&rep).contains("\"match\": \"agree\""));
    }
}
