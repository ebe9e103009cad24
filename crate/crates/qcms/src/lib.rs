//! Channel-hopping sequence construction and blind-rendezvous simulation for
//! distributed cognitive radio networks.
//!
//! Two users that share no clock, no identity, and only partially overlapping
//! channel sets must land on a common channel in the same time slot. Each
//! user builds its hop schedule from a randomly selected channel `R`:
//!
//! 1. [`coding`] encodes `R` in base 4, maps digit pairs through a 16-entry
//!    quaternary-to-quinary table, and prefixes `R00` to form the bootstrap
//!    sequence that labels the columns of a virtual hop matrix.
//! 2. [`subseq`] generates the six column templates: the `R`-type subsequence
//!    and the five λ-type subsequences with pairwise-coprime lengths derived
//!    from a prime `P ≥ max(|C|, 5)`.
//! 3. [`engine`] answers "which channel does this user occupy at slot `t`"
//!    by indexing the virtual matrix row by row, and computes the worst-case
//!    rendezvous bound `max{(P_A+4)(P_B+6), (P_A+6)(P_B+4)} · L`.
//! 4. [`sim`] runs two-user trials under clock drift, verifies the bound
//!    exhaustively with adversarial wildcards, and estimates ETTR/MTTR by
//!    Monte Carlo.
//! 5. [`cli`] exposes all of the above as the `qcms` command-line tool.

pub mod channels;
pub mod cli;
pub mod coding;
pub mod engine;
pub mod sim;
pub mod subseq;

mod error;
pub(crate) mod util;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Outcome of an exhaustive invariant check: how many cases were examined
/// and the first violation found, if any.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    /// Number of cases enumerated.
    pub cases: u64,
    /// Description of the first violation, or `None` if the check passed.
    pub violation: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}
