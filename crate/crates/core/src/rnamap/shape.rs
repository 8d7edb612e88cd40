use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Shape of a structure without any base pairs.
pub const OPEN_CHAIN: &str = "_";

/// A balanced dot-bracket string.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DotBracketStructure(String);

impl DotBracketStructure {
    pub(super) fn from_validated(s: String) -> Self {
        Self(s)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Matched `(i, j)` pairs in order of the opening index.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut stack = Vec::new();
        let mut pairs = Vec::new();
        for (i, c) in self.0.bytes().enumerate() {
            match c {
                b'(' => stack.push(i),
                b')' => pairs.push((stack.pop().expect("validated"), i)),
                _ => {}
            }
        }
        pairs.sort_unstable();
        pairs
    }

    /// True when every hairpin encloses at least `min_loop` unpaired bases.
    pub fn satisfies_min_loop(&self, min_loop: usize) -> bool {
        self.pairs().iter().all(|&(i, j)| j - i > min_loop)
    }
}

impl FromStr for DotBracketStructure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_dotbracket(s)?;
        Ok(Self(s.to_string()))
    }
}

impl fmt::Display for DotBracketStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for DotBracketStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DotBracketStructure({})", self.0)
    }
}

/// One base pair and the pairs directly nested inside it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairNode {
    pub open: usize,
    pub close: usize,
    pub children: Vec<PairNode>,
}

/// Builds the pair forest in one stack pass; roots ordered by open index.
pub fn parse_dotbracket(s: &str) -> Result<Vec<PairNode>> {
    // each frame holds the open index and the children collected so far
    let mut stack: Vec<(usize, Vec<PairNode>)> = Vec::new();
    let mut roots = Vec::new();
    for (i, c) in s.chars().enumerate() {
        match c {
            '.' => {}
            '(' => stack.push((i, Vec::new())),
            ')' => {
                let (open, children) = stack.pop().ok_or_else(|| {
                    Error::MalformedStructure(format!("unmatched ')' at position {i}"))
                })?;
                let node = PairNode {
                    open,
                    close: i,
                    children,
                };
                match stack.last_mut() {
                    Some((_, siblings)) => siblings.push(node),
                    None => roots.push(node),
                }
            }
            other => {
                return Err(Error::MalformedStructure(format!(
                    "unexpected symbol {other:?} at position {i}"
                )))
            }
        }
    }
    if let Some((open, _)) = stack.last() {
        return Err(Error::MalformedStructure(format!("unmatched '(' at position {open}")));
    }
    Ok(roots)
}

/// Renders a forest back to dot-bracket over `len` positions.
pub fn render_forest(forest: &[PairNode], len: usize) -> String {
    fn mark(node: &PairNode, out: &mut [u8]) {
        out[node.open] = b'(';
        out[node.close] = b')';
        for child in &node.children {
            mark(child, out);
        }
    }
    let mut out = vec![b'.'; len];
    for node in forest {
        mark(node, &mut out);
    }
    String::from_utf8(out).expect("ascii")
}

/// A level-5 abstract shape: nested helices only, or the open chain `_`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbstractShape(String);

impl AbstractShape {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }

    pub fn is_open_chain(&self) -> bool {
        self.0 == OPEN_CHAIN
    }
}

impl FromStr for AbstractShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == OPEN_CHAIN {
            return Ok(Self(s.to_string()));
        }
        if s.is_empty() {
            return Err(Error::EmptyShape);
        }
        let mut depth = 0i64;
        for c in s.chars() {
            depth += match c {
                '[' => 1,
                ']' => -1,
                _ => return Err(Error::MalformedShape(s.to_string())),
            };
            if depth < 0 {
                return Err(Error::MalformedShape(s.to_string()));
            }
        }
        if depth != 0 {
            return Err(Error::MalformedShape(s.to_string()));
        }
        Ok(Self(s.to_string()))
    }
}

impl fmt::Display for AbstractShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for AbstractShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AbstractShape({})", self.0)
    }
}

/// Level-5 coarse-graining of a pair forest.
///
/// Unpaired bases vanish, every chain of single-child nodes (a stem with
/// its bulges and interior loops) collapses into one helix, and each helix
/// renders as `[` children `]`.
pub fn abstract_shape(forest: &[PairNode]) -> AbstractShape {
    fn render(node: &PairNode, out: &mut String) {
        let mut helix = node;
        while helix.children.len() == 1 {
            helix = &helix.children[0];
        }
        out.push('[');
        for child in &helix.children {
            render(child, out);
        }
        out.push(']');
    }
    if forest.is_empty() {
        return AbstractShape(OPEN_CHAIN.to_string());
    }
    let mut out = String::new();
    for node in forest {
        render(node, &mut out);
    }
    AbstractShape(out)
}
