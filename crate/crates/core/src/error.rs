use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by table validation and by the algebraic checks that guard
/// preconditions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid group table: {0}")]
    InvalidGroup(String),

    #[error("group table is not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),

    #[error("invalid action: {0}")]
    InvalidAction(String),

    #[error("invalid groupoid: {0}")]
    InvalidGroupoid(String),

    #[error("groupoid composition is not associative at arrows ({0}, {1}, {2})")]
    GroupoidNotAssociative(usize, usize, usize),

    #[error("invalid functor: {0}")]
    InvalidFunctor(String),

    #[error("invalid loop: {0}")]
    InvalidLoop(String),

    #[error("invalid cochain: {0}")]
    InvalidCochain(String),

    #[error("cochain is not a cocycle: coboundary is {exponent}/{modulus} at tuple {tuple:?}")]
    NotCocycle {
        tuple: Vec<usize>,
        exponent: u32,
        modulus: u32,
    },

    #[error("cochain is not normalised: exponent {exponent} at tuple {tuple:?}")]
    NotNormalized { tuple: Vec<usize>, exponent: u32 },

    #[error("linear system over Z/{modulus} has no solution")]
    Unsolvable { modulus: u32 },

    #[error("resource budget exceeded: {what} needs {needed}, budget is {budget}")]
    Budget {
        what: String,
        needed: u64,
        budget: u64,
    },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("element {0} is not central")]
    NotCentral(usize),

    #[error("{0}")]
    Precondition(String),
}

impl Error {
    /// True for errors caused by exceeding a resource budget.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}
