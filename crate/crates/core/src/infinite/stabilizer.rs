use crate::error::Error;
use crate::infinite::ball::BallTruncation;
use crate::infinite::extend::extendable_automorphisms;
use crate::infinite::suborbit::SuborbitDecomposition;
use crate::perm::Permutation;

/// Window restriction of the group of automorphisms fixing every suborbit
/// with index at least `n` setwise.
///
/// These are the residual symmetries a colouring built from the first n - 1
/// suborbits cannot see; the tower colourings exist to break exactly them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerRestriction {
    n: usize,
    elements: Vec<Permutation>,
}

impl StabilizerRestriction {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Window permutations in the restriction, lexicographically sorted,
    /// identity included.
    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub(crate) fn from_certified(
        certified: &[Permutation],
        s: &SuborbitDecomposition,
        n: usize,
    ) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::OutOfWindow { index: 0 });
        }
        let elements = certified
            .iter()
            .filter(|g| {
                (n..=s.count()).all(|i| {
                    let orbit = s.suborbit(i).unwrap();
                    orbit.iter().all(|&v| orbit.contains(&g.image(v)))
                })
            })
            .cloned()
            .collect();
        Ok(StabilizerRestriction { n, elements })
    }
}

/// Filter the certified window automorphisms down to those fixing the
/// suborbits n, n + 1, ... setwise. When the base sits at the window centre
/// every automorphism of the infinite graph in that stabiliser maps the
/// window onto itself, so nothing is missed by working with restrictions.
pub fn stabilizer_restriction(
    t: &BallTruncation,
    s: &SuborbitDecomposition,
    n: usize,
    cap: usize,
) -> Result<StabilizerRestriction, Error> {
    let certified = extendable_automorphisms(t, cap)?;
    StabilizerRestriction::from_certified(&certified, s, n)
}
