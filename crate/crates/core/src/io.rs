//! Plain-text design files.
//!
//! ```text
//! 7 4 3 covering
//! # optional comments
//! 1 2 3 4
//! 1 2 5 6
//! ```
//!
//! The header holds `n k r` for coverings and `n m p` for Turán systems.
//! Blocks are written one per line in canonical order, comments directly
//! after the header, so `serialize(parse(serialize(x)))` reproduces the bytes
//! of `serialize(x)`.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{Block, CoverParams, DesignFamily, DesignKind, DesignParams, TuranParams};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DesignFile {
    pub family: DesignFamily,
    /// Comment text with the leading `#` removed.
    pub comments: Vec<String>,
}

impl DesignFile {
    pub fn new(family: DesignFamily) -> Self {
        DesignFile {
            family,
            comments: Vec::new(),
        }
    }

    pub fn with_comment(mut self, text: impl Into<String>) -> Self {
        self.comments.push(text.into());
        self
    }
}

fn parse_usize(tok: &str, line: usize, what: &str) -> Result<usize> {
    tok.parse::<usize>()
        .map_err(|_| Error::parse(line, format!("{what} `{tok}` is not a non-negative integer")))
}

fn parse_header(text: &str, line: usize) -> Result<DesignParams> {
    let toks: Vec<&str> = text.split_whitespace().collect();
    if toks.len() != 4 {
        return Err(Error::parse(line, format!("header needs `n k r kind`, found `{text}`")));
    }
    let a = parse_usize(toks[0], line, "n")?;
    let b = parse_usize(toks[1], line, "header value")?;
    let c = parse_usize(toks[2], line, "header value")?;
    let kind: DesignKind = toks[3]
        .parse()
        .map_err(|_| Error::parse(line, format!("kind `{}` is neither covering nor turan", toks[3])))?;
    let params = match kind {
        DesignKind::Covering => CoverParams::new(a, b, c).map(DesignParams::Covering),
        DesignKind::Turan => TuranParams::new(a, b, c).map(DesignParams::Turan),
    };
    params.map_err(|e| Error::parse(line, e.to_string()))
}

/// Parses a design file; every malformation is reported as [`Error::Parse`].
pub fn parse(text: &str) -> Result<DesignFile> {
    let mut params: Option<DesignParams> = None;
    let mut comments = Vec::new();
    let mut blocks = Vec::new();
    let mut seen: HashMap<Block, usize> = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(c) = raw.trim_start().strip_prefix('#') {
            comments.push(c.trim_end().to_string());
            continue;
        }
        let Some(p) = params else {
            params = Some(parse_header(trimmed, line)?);
            continue;
        };
        let mut elems = Vec::new();
        for tok in trimmed.split_whitespace() {
            let e = parse_usize(tok, line, "element")?;
            if e == 0 || e > p.n() {
                return Err(Error::parse(line, format!("element {e} outside 1..={}", p.n())));
            }
            elems.push(e);
        }
        if elems.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::parse(line, "block elements must be strictly increasing"));
        }
        if elems.len() != p.block_size() {
            return Err(Error::parse(
                line,
                format!("block has {} elements, expected {}", elems.len(), p.block_size()),
            ));
        }
        let b = Block::new(&elems).map_err(|e| Error::parse(line, e.to_string()))?;
        if let Some(first) = seen.insert(b, line) {
            return Err(Error::parse(line, format!("block {b} already listed on line {first}")));
        }
        blocks.push(b);
    }
    let params = params.ok_or_else(|| Error::parse(text.lines().count().max(1), "missing header line"))?;
    let family = DesignFamily::new(params, blocks)?;
    Ok(DesignFile { family, comments })
}

pub fn serialize(file: &DesignFile) -> String {
    let fam = &file.family;
    let (a, b, c) = fam.params().triple();
    let mut out = format!("{a} {b} {c} {}\n", fam.kind());
    for comment in &file.comments {
        out.push('#');
        out.push_str(comment);
        out.push('\n');
    }
    for block in fam.blocks() {
        let mut first = true;
        for e in block.elements() {
            if !first {
                out.push(' ');
            }
            out.push_str(&e.to_string());
            first = false;
        }
        out.push('\n');
    }
    out
}

pub fn read_design(path: impl AsRef<Path>) -> Result<DesignFile> {
    parse(&fs::read_to_string(path)?)
}

pub fn write_design(path: impl AsRef<Path>, file: &DesignFile) -> Result<()> {
    let path = path.as_ref();
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, serialize(file))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const SAMPLE: &str = "# leading comment\n5 3 2 covering\n3 4 5\n1 2 3\n\n# trailing\n1 4 5\n2 4 5\n";

    #[test]
    fn parses_and_canonicalizes() {
        let f = parse(SAMPLE).unwrap();
        assert_eq!(f.family.len(), 4);
        assert_eq!(f.comments, vec![" leading comment", " trailing"]);
        let text = serialize(&f);
        assert_eq!(
            text,
            "5 3 2 covering\n# leading comment\n# trailing\n1 2 3\n1 4 5\n2 4 5\n3 4 5\n"
        );
        assert_eq!(serialize(&parse(&text).unwrap()), text);
    }

    #[test]
    fn turan_header() {
        let f = parse("4 3 2 turan\n1 2\n3 4\n").unwrap();
        assert_eq!(f.family.kind(), DesignKind::Turan);
        assert_eq!(f.family.params().triple(), (4, 3, 2));
    }

    #[test]
    fn empty_family_round_trips() {
        let text = "6 3 2 covering\n";
        let f = parse(text).unwrap();
        assert!(f.family.is_empty());
        assert_eq!(serialize(&f), text);
    }

    #[test]
    fn malformed_inputs_report_lines() {
        let cases = [
            ("", 1),
            ("5 3 covering\n", 1),
            ("5 3 2 design\n", 1),
            ("5 6 2 covering\n", 1),
            ("5 3 2 covering\n1 2\n", 2),
            ("5 3 2 covering\n1 2 9\n", 2),
            ("5 3 2 covering\n1 3 2\n", 2),
            ("5 3 2 covering\n1 2 x\n", 2),
            ("5 3 2 covering\n1 2 3\n1 2 3\n", 3),
        ];
        for (text, want) in cases {
            match parse(text) {
                Err(Error::Parse { line, .. }) => assert_eq!(line, want, "{text:?}"),
                other => panic!("{text:?}: expected parse error, got {other:?}"),
            }
        }
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nested/x.design");
        let f = parse(SAMPLE).unwrap();
        write_design(&path, &f).unwrap();
        assert_eq!(read_design(&path).unwrap(), f);
    }

    fn arb_family() -> impl Strategy<Value = DesignFile> {
        (2usize..=10)
            .prop_flat_map(|n| (Just(n), 1usize..=n))
            .prop_flat_map(|(n, k)| {
                let blocks = proptest::collection::vec(proptest::sample::subsequence((1..=n).collect::<Vec<usize>>(), k), 0..20);
                let comments = proptest::collection::vec("[ -~]{0,12}", 0..3);
                (Just(n), Just(k), 0usize..=k, any::<bool>(), blocks, comments)
            })
            .prop_map(|(n, k, r, turan, blocks, comments)| {
                let blocks = blocks
                    .into_iter()
                    .map(|s| Block::new(&s).unwrap())
                    .collect::<std::collections::BTreeSet<_>>();
                let params = if turan && k > 0 {
                    DesignParams::Turan(TuranParams::new(n, n, k).unwrap())
                } else {
                    DesignParams::Covering(CoverParams::new(n, k, r).unwrap())
                };
                let comments = comments.into_iter().map(|c: String| c.trim_end().to_string()).collect();
                DesignFile {
                    family: DesignFamily::new(params, blocks).unwrap(),
                    comments,
                }
            })
    }

    proptest! {
        #[test]
        fn serialize_parse_is_identity(f in arb_family()) {
            let text = serialize(&f);
            let back = parse(&text).unwrap();
            prop_assert_eq!(&back, &f);
            prop_assert_eq!(serialize(&back), text);
        }
    }
}
