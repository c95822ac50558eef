//! Windows into locally finite vertex-transitive infinite graphs: finite
//! radius-R balls around a root, with machinery for suborbits, stabilizer
//! restrictions, block towers, and the interleaved colouring construction.

pub mod ball;
mod extend;
mod interleave;
mod maps;
mod stabilizer;
mod suborbit;
mod tower;
mod tree_code;
mod verify;

pub use ball::{BallTruncation, DEFAULT_WINDOW_LIMIT};
pub use extend::extendable_automorphisms;
pub use interleave::{
    interleave_construct, CosetBudget, CosetRecord, InterleaveOutcome, InterleavePlan,
    WindowColouring,
};
pub use maps::{coset_representative, coset_suborbit_image, sample_coset_maps, WindowMap};
pub use stabilizer::{stabilizer_restriction, StabilizerRestriction};
pub use suborbit::{suborbits, SuborbitDecomposition};
pub use tower::{build_block_tower, BlockTower};
pub use tree_code::{tree_structural_check, StructuralReport, StructuralWitness};
pub use verify::{verify_truncation, CosetCheck, TruncationVerdict, VerificationRoute};

use std::cmp::Ordering;
use std::fmt;

use crate::error::Error;

/// The built-in families. Each is vertex-transitive, connected, and locally
/// finite, with every sphere around a vertex finite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// The two-way infinite path on the integers.
    Path,
    /// The d-regular infinite tree, 3 <= d <= 9.
    Tree(u8),
    /// The square grid on integer pairs.
    Grid2,
}

impl Family {
    pub fn parse(spec: &str) -> Result<Self, Error> {
        match spec {
            "path" => Ok(Family::Path),
            "grid:2" => Ok(Family::Grid2),
            _ => {
                if let Some(d) = spec.strip_prefix("tree:") {
                    if let Ok(d) = d.parse::<u8>() {
                        if (3..=9).contains(&d) {
                            return Ok(Family::Tree(d));
                        }
                    }
                }
                Err(Error::UnknownFamily { spec: spec.into() })
            }
        }
    }

    pub fn spec_string(&self) -> String {
        match self {
            Family::Path => "path".into(),
            Family::Tree(d) => format!("tree:{d}"),
            Family::Grid2 => "grid:2".into(),
        }
    }

    pub(crate) fn root(&self) -> VertexName {
        match self {
            Family::Path => VertexName::Line(0),
            Family::Tree(_) => VertexName::Node(Vec::new()),
            Family::Grid2 => VertexName::Cell(0, 0),
        }
    }

    /// Neighbours in the infinite graph, in increasing name order.
    pub(crate) fn neighbours(&self, v: &VertexName) -> Vec<VertexName> {
        match (self, v) {
            (Family::Path, VertexName::Line(x)) => {
                vec![VertexName::Line(x - 1), VertexName::Line(x + 1)]
            }
            (Family::Grid2, VertexName::Cell(x, y)) => vec![
                VertexName::Cell(x - 1, *y),
                VertexName::Cell(*x, y - 1),
                VertexName::Cell(*x, y + 1),
                VertexName::Cell(x + 1, *y),
            ],
            (Family::Tree(d), VertexName::Node(addr)) => {
                let mut out = Vec::new();
                let child_digits = if addr.is_empty() { *d } else { *d - 1 };
                if !addr.is_empty() {
                    out.push(VertexName::Node(addr[..addr.len() - 1].to_vec()));
                }
                for digit in 0..child_digits {
                    let mut child = addr.clone();
                    child.push(digit);
                    out.push(VertexName::Node(child));
                }
                out
            }
            _ => unreachable!("vertex name does not belong to this family"),
        }
    }

    /// Graph distance in the infinite graph.
    pub fn distance(&self, a: &VertexName, b: &VertexName) -> usize {
        match (self, a, b) {
            (Family::Path, VertexName::Line(x), VertexName::Line(y)) => x.abs_diff(*y) as usize,
            (Family::Grid2, VertexName::Cell(x1, y1), VertexName::Cell(x2, y2)) => {
                (x1.abs_diff(*x2) + y1.abs_diff(*y2)) as usize
            }
            (Family::Tree(_), VertexName::Node(p), VertexName::Node(q)) => {
                let lcp = p.iter().zip(q.iter()).take_while(|(a, b)| a == b).count();
                (p.len() - lcp) + (q.len() - lcp)
            }
            _ => unreachable!("vertex names do not belong to this family"),
        }
    }
}

/// Canonical vertex names. Tree addresses order by (length, digits), so
/// parents precede children and siblings sort by digit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum VertexName {
    Line(i64),
    Cell(i64, i64),
    Node(Vec<u8>),
}

impl Ord for VertexName {
    fn cmp(&self, other: &Self) -> Ordering {
        use VertexName::*;
        match (self, other) {
            (Line(a), Line(b)) => a.cmp(b),
            (Cell(x1, y1), Cell(x2, y2)) => (x1, y1).cmp(&(x2, y2)),
            (Node(p), Node(q)) => p.len().cmp(&q.len()).then_with(|| p.cmp(q)),
            (Line(_), _) => Ordering::Less,
            (_, Line(_)) => Ordering::Greater,
            (Cell(..), _) => Ordering::Less,
            (_, Cell(..)) => Ordering::Greater,
        }
    }
}

impl PartialOrd for VertexName {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for VertexName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexName::Line(x) => write!(f, "{x}"),
            VertexName::Cell(x, y) => write!(f, "{x},{y}"),
            VertexName::Node(addr) if addr.is_empty() => write!(f, "root"),
            VertexName::Node(addr) => {
                for d in addr {
                    write!(f, "{d}")?;
                }
                Ok(())
            }
        }
    }
}

impl VertexName {
    pub fn parse(family: Family, s: &str) -> Result<Self, Error> {
        let bad = || Error::InvalidBase {
            detail: format!("cannot parse vertex name {s:?} for family {}", family.spec_string()),
        };
        match family {
            Family::Path => s.parse::<i64>().map(VertexName::Line).map_err(|_| bad()),
            Family::Grid2 => {
                let (x, y) = s.split_once(',').ok_or_else(bad)?;
                match (x.trim().parse::<i64>(), y.trim().parse::<i64>()) {
                    (Ok(x), Ok(y)) => Ok(VertexName::Cell(x, y)),
                    _ => Err(bad()),
                }
            }
            Family::Tree(d) => {
                if s == "root" {
                    return Ok(VertexName::Node(Vec::new()));
                }
                let mut addr = Vec::new();
                for (pos, ch) in s.chars().enumerate() {
                    let digit = ch.to_digit(10).ok_or_else(bad)? as u8;
                    let limit = if pos == 0 { d } else { d - 1 };
                    if digit >= limit {
                        return Err(bad());
                    }
                    addr.push(digit);
                }
                if addr.is_empty() {
                    return Err(bad());
                }
                Ok(VertexName::Node(addr))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_specs_round_trip() {
        for spec in ["path", "tree:3", "tree:9", "grid:2"] {
            assert_eq!(Family::parse(spec).unwrap().spec_string(), spec);
        }
        for bad in ["", "tree", "tree:2", "tree:10", "grid", "grid:3", "Path"] {
            assert!(Family::parse(bad).is_err(), "{bad:?} should fail");
        }
    }

    #[test]
    fn tree_names_order_by_level_then_digits() {
        let names = ["root", "0", "1", "2", "00", "01", "10", "000"];
        let parsed: Vec<VertexName> = names
            .iter()
            .map(|s| VertexName::parse(Family::Tree(3), s).unwrap())
            .collect();
        assert!(parsed.windows(2).all(|w| w[0] < w[1]));
        for (name, v) in names.iter().zip(&parsed) {
            assert_eq!(&v.to_string(), name);
        }
        // Non-root vertices have d-1 child digits: "02" is invalid for d=3.
        assert!(VertexName::parse(Family::Tree(3), "02").is_err());
        assert!(VertexName::parse(Family::Tree(3), "2").is_ok());
    }

    #[test]
    fn distances_match_neighbour_structure() {
        let f = Family::Tree(3);
        let a = VertexName::parse(f, "00").unwrap();
        let b = VertexName::parse(f, "10").unwrap();
        // Up two to the root, down two the other side.
        assert_eq!(f.distance(&a, &b), 4);
        let parent = VertexName::parse(f, "0").unwrap();
        assert_eq!(f.distance(&a, &parent), 1);
        assert!(f.neighbours(&parent).contains(&a));

        let g = Family::Grid2;
        assert_eq!(
            g.distance(&VertexName::Cell(2, -1), &VertexName::Cell(-1, 1)),
            5
        );
        assert_eq!(Family::Path.distance(&VertexName::Line(-3), &VertexName::Line(4)), 7);
    }

    #[test]
    fn neighbour_lists_are_sorted_and_regular() {
        let f = Family::Tree(4);
        let root = f.root();
        let ns = f.neighbours(&root);
        assert_eq!(ns.len(), 4);
        assert!(ns.windows(2).all(|w| w[0] < w[1]));
        let child = &ns[0];
        let ns2 = f.neighbours(child);
        assert_eq!(ns2.len(), 4);
        assert_eq!(ns2[0], root);

        let g = Family::Grid2;
        let ns = g.neighbours(&VertexName::Cell(0, 0));
        assert_eq!(ns.len(), 4);
        assert!(ns.windows(2).all(|w| w[0] < w[1]));
    }
}
