use crate::error::Error;
use crate::graph::search_automorphisms;
use crate::infinite::ball::BallTruncation;
use crate::par;
use crate::perm::Permutation;

/// Automorphisms of the window graph that extend to the ball `margin`
/// layers wider, as permutations of window indices.
///
/// Any automorphism of the infinite graph that maps the window onto itself
/// fixes the centre, hence maps every concentric ball onto itself, so its
/// restriction always appears here. The converse culls boundary artifacts:
/// a permutation of the window that cannot be continued even `margin`
/// layers outward is an accident of cutting the graph, not a symmetry the
/// construction needs to break. Artifacts that do survive the extension are
/// handled later by scope filtering, never silently trusted.
///
/// Windows are indexed level by level with each level sorted by name, so
/// the window's vertices occupy the same indices in the wider ball and a
/// window permutation can be handed to the wider search as a prefix
/// verbatim. Full enumeration of the window automorphisms stops with
/// `CapExceeded` once more than `cap` maps accumulate.
pub fn extendable_automorphisms(
    t: &BallTruncation,
    cap: usize,
) -> Result<Vec<Permutation>, Error> {
    let n = t.len();
    let all = search_automorphisms(t.adjacency(), &[], false, cap)?;
    if t.margin() == 0 {
        return Ok(all.maps);
    }
    let big = BallTruncation::build(t.family(), t.radius() + t.margin(), 0)?;
    debug_assert_eq!(&big.names()[..n], t.names());
    Ok(par::filter_in_order(all.maps, |g| {
        let prefix: Vec<(usize, usize)> = (0..n).map(|v| (v, g.image(v))).collect();
        match search_automorphisms(big.adjacency(), &prefix, true, 1) {
            Ok(outcome) => !outcome.maps.is_empty(),
            Err(_) => false,
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::infinite::{Family, VertexName};

    #[test]
    fn path_window_keeps_identity_and_reflection() {
        let t = BallTruncation::build(Family::Path, 5, 2).unwrap();
        let auts = extendable_automorphisms(&t, 1_000).unwrap();
        assert_eq!(auts.len(), 2);
        assert!(auts[0].is_identity());
        let one = t.index_of(&VertexName::Line(1)).unwrap();
        let minus_one = t.index_of(&VertexName::Line(-1)).unwrap();
        assert_eq!(auts[1].image(one), minus_one);
    }

    #[test]
    fn grid_window_keeps_the_eight_plane_symmetries() {
        let t = BallTruncation::build(Family::Grid2, 2, 1).unwrap();
        let auts = extendable_automorphisms(&t, 1_000).unwrap();
        assert_eq!(auts.len(), 8);
        for g in &auts {
            // Window symmetries fix the centre and preserve levels.
            assert_eq!(g.image(0), 0);
            for v in 0..t.len() {
                assert_eq!(t.dist(g.image(v)), t.dist(v));
            }
        }
    }

    #[test]
    fn small_tree_windows_enumerate_fully() {
        let t2 = BallTruncation::build(Family::Tree(3), 2, 2).unwrap();
        assert_eq!(extendable_automorphisms(&t2, 1_000).unwrap().len(), 48);
        let t3 = BallTruncation::build(Family::Tree(3), 3, 2).unwrap();
        assert_eq!(extendable_automorphisms(&t3, 10_000).unwrap().len(), 3072);
    }

    #[test]
    fn deep_tree_windows_exhaust_the_cap() {
        let t = BallTruncation::build(Family::Tree(3), 4, 2).unwrap();
        assert_eq!(
            extendable_automorphisms(&t, 10_000),
            Err(Error::CapExceeded { cap: 10_000 })
        );
    }

    #[test]
    fn zero_margin_accepts_every_window_automorphism() {
        let t = BallTruncation::build(Family::Path, 3, 0).unwrap();
        let auts = extendable_automorphisms(&t, 1_000).unwrap();
        assert_eq!(auts.len(), 2);
    }
}
