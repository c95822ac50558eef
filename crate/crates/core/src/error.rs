use thiserror::Error;

/// Failure modes across the crate. The CLI maps these onto exit classes:
/// resource exhaustion vs invalid input. Verification failures and
/// unsuccessful searches are ordinary return values, not errors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("generator {index} has degree {found}, expected {expected}")]
    DegreeMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("not a permutation: {detail}")]
    NotAPermutation { detail: String },
    #[error("point {point} outside domain of degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("element enumeration exceeded the cap of {cap}")]
    CapExceeded { cap: usize },
    #[error("subset not invariant: generator {generator} moves point {point} out of the set")]
    NotInvariant { generator: usize, point: usize },
    #[error("restricted action not faithful: a non-identity element fixes the subset pointwise")]
    NotFaithful,
    #[error("point {point} lies in a support but carries no colour")]
    UncolouredPoint { point: usize },
    #[error("blocks overlap at point {point}")]
    BlocksOverlap { point: usize },
    #[error("block {block} is not setwise fixed by the group")]
    BlockNotInvariant { block: usize },
    #[error("pointwise-stabilizer nesting fails between block {earlier} and block {later}")]
    NestingViolated { earlier: usize, later: usize },
    #[error("the given block prefix cannot break every element; extend the tower")]
    NeedMoreBlocks,
    #[error("graph has {vertices} vertices, over the search limit of {limit}")]
    LimitExceeded { vertices: usize, limit: usize },
    #[error("malformed header: {detail}")]
    MalformedHeader { detail: String },
    #[error("vertex {vertex} out of range for vertex count {count}")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error("self-loop at vertex {vertex}")]
    SelfLoop { vertex: usize },
    #[error("duplicate edge {u} {v}")]
    DuplicateEdge { u: usize, v: usize },
    #[error("malformed generator file: {detail}")]
    MalformedGenerators { detail: String },
    #[error("unknown family {spec:?} (expected `path`, `tree:<d>` with d >= 3, or `grid:2`)")]
    UnknownFamily { spec: String },
    #[error("window of radius {radius} has {size} vertices, over the limit of {limit}")]
    WindowTooLarge {
        radius: usize,
        size: usize,
        limit: usize,
    },
    #[error("window cannot host the construction: {detail}")]
    RadiusExhausted { detail: String },
    #[error("no automorphism of the family maps the base set onto the target")]
    NotRealizable,
    #[error("suborbit {index} leaves the window under the representative")]
    OutOfWindow { index: usize },
    #[error("invalid base set: {detail}")]
    InvalidBase { detail: String },
    #[error("colouring file inconsistent with the window: {detail}")]
    BadColouringFile { detail: String },
    #[error("io error: {detail}")]
    Io { detail: String },
    #[error("bad argument: {detail}")]
    BadArgument { detail: String },
}

impl Error {
    /// True for errors meaning the computation outgrew a configured bound,
    /// as opposed to being handed bad input.
    pub fn is_resource_exhaustion(&self) -> bool {
        matches!(
            self,
            Error::CapExceeded { .. }
                | Error::LimitExceeded { .. }
                | Error::WindowTooLarge { .. }
                | Error::RadiusExhausted { .. }
                | Error::NeedMoreBlocks
        )
    }
}
