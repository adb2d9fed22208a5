use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(
        "({g},{n}) is not a pseudostable index: the pseudostable moduli space is empty for \
         (g,n) in {{(0,0), (0,1), (0,2), (1,0), (1,1), (2,0)}}"
    )]
    NotPseudostable { g: u32, n: u32 },

    #[error(
        "({g},{n}) is not a stable index: the moduli space of stable curves is empty for \
         (g,n) in {{(0,0), (0,1), (0,2), (1,0)}}"
    )]
    NotStable { g: u32, n: u32 },

    #[error("classes live on different moduli spaces: ({0},{1}) and ({2},{3})")]
    AmbientMismatch(u32, u32, u32, u32),

    #[error("invalid partition {0:?}: parts must be positive")]
    InvalidPartition(Vec<u32>),

    #[error(
        "enumeration refused: degree {d} with {m} transpositions exceeds the bound \
         (degree <= 6, at most 8 transpositions)"
    )]
    EnumerationTooLarge { d: u32, m: u32 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
