use std::collections::BTreeSet;
use std::fmt;

use crate::error::Error;

/// A permutation of {0, ..., degree-1} stored as an image table.
///
/// The derived `Ord` is lexicographic on the image table, which is the
/// canonical order used everywhere a deterministic "first" element or a
/// sorted element list is promised.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Box<[usize]>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, Error> {
        let n = images.len();
        let mut seen = vec![false; n];
        for (x, &y) in images.iter().enumerate() {
            if y >= n {
                return Err(Error::NotAPermutation {
                    detail: format!("image {y} of point {x} out of range for degree {n}"),
                });
            }
            if seen[y] {
                return Err(Error::NotAPermutation {
                    detail: format!("image {y} repeated"),
                });
            }
            seen[y] = true;
        }
        Ok(Permutation {
            images: images.into_boxed_slice(),
        })
    }

    /// Test convenience: build from disjoint cycles over {0, ..., degree-1}.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self, Error> {
        let mut images: Vec<usize> = (0..degree).collect();
        for cycle in cycles {
            for (pos, &x) in cycle.iter().enumerate() {
                let y = cycle[(pos + 1) % cycle.len()];
                if x >= degree || y >= degree {
                    return Err(Error::NotAPermutation {
                        detail: format!("cycle point out of range for degree {degree}"),
                    });
                }
                if images[x] != x {
                    return Err(Error::NotAPermutation {
                        detail: format!("point {x} occurs in two cycles"),
                    });
                }
                images[x] = y;
            }
        }
        Permutation::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(x, &y)| x == y)
    }

    /// Apply `b` first, then `a`: the returned map sends x to a(b(x)).
    pub fn compose(a: &Self, b: &Self) -> Self {
        debug_assert_eq!(a.degree(), b.degree());
        Permutation {
            images: b.images.iter().map(|&y| a.images[y]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0usize; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y] = x;
        }
        Permutation {
            images: inv.into_boxed_slice(),
        }
    }

    pub fn support(&self) -> BTreeSet<usize> {
        self.images
            .iter()
            .enumerate()
            .filter(|&(x, &y)| x != y)
            .map(|(x, _)| x)
            .collect()
    }

    /// Number of moved points, without allocating the support set.
    pub fn support_len(&self) -> usize {
        self.images
            .iter()
            .enumerate()
            .filter(|&(x, &y)| x != y)
            .count()
    }
}

impl fmt::Display for Permutation {
    /// Disjoint cycle notation; the identity prints as `id`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.images.len();
        let mut done = vec![false; n];
        let mut wrote = false;
        for start in 0..n {
            if done[start] || self.images[start] == start {
                continue;
            }
            write!(f, "(")?;
            let mut x = start;
            let mut first = true;
            loop {
                done[x] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
                first = false;
                x = self.images[x];
                if x == start {
                    break;
                }
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "id")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "perm[{self}]")
    }
}
