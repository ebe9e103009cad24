//! Column templates for the virtual hop matrix: the R-type subsequence and
//! the five λ-type subsequences.
//!
//! A λ-type subsequence over a channel set of size `n` has length
//! `P + (0, 2, 3, 4, 6)[λ]` where `P` is the smallest prime not below
//! `max(n, 5)`. The five lengths are pairwise coprime, which is what lets two
//! users' columns sweep every channel pair within the product of their
//! lengths.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::channels::{Channel, ChannelSet};
use crate::util::{gcd, splitmix64};
use crate::{CheckOutcome, Error, Result};

/// Length offsets over `P` for λ = 0..4.
pub const LAMBDA_OFFSETS: [u64; 5] = [0, 2, 3, 4, 6];

/// Fixed length of the R-type subsequence.
pub const R_TYPE_LEN: usize = 10;

/// One slot of a subsequence: a fixed channel, or a wildcard to be filled at
/// hop time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Fixed(Channel),
    Wildcard,
}

impl Slot {
    pub fn fixed_channel(self) -> Option<Channel> {
        match self {
            Slot::Fixed(c) => Some(c),
            Slot::Wildcard => None,
        }
    }
}

/// Which of the six column types a subsequence implements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubseqKind {
    RType,
    Lambda(u8),
}

/// A column template: an ordered list of fixed and wildcard slots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subsequence {
    kind: SubseqKind,
    slots: Vec<Slot>,
}

impl Subsequence {
    pub fn kind(&self) -> SubseqKind {
        self.kind
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    /// The subsequence length `K`.
    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// The fixed channels in slot order.
    pub fn fixed_channels(&self) -> impl Iterator<Item = Channel> + '_ {
        self.slots.iter().filter_map(|s| s.fixed_channel())
    }
}

/// How the fixed prefix of a λ-type subsequence orders the channel set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PermPolicy {
    /// Channels in ascending index order. Deterministic default.
    Ascending,
    /// Seeded shuffle. Each λ value derives its own permutation stream from
    /// the seed, so the five λ-types of one schedule are shuffled
    /// independently but reproducibly.
    Shuffled { seed: u64 },
}

/// Least prime `p ≥ m`, by trial division. Callers pass the already-clamped
/// bound `max(n, 5)`.
pub fn smallest_prime_geq(m: u64) -> u64 {
    let mut candidate = m.max(2);
    loop {
        if is_prime(candidate) {
            return candidate;
        }
        candidate += 1;
    }
}

fn is_prime(x: u64) -> bool {
    if x < 2 {
        return false;
    }
    if x.is_multiple_of(2) {
        return x == 2;
    }
    let mut d = 3;
    while d * d <= x {
        if x.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Length of the λ-type subsequence for a channel set of size `n`.
pub fn lambda_len(n: usize, lambda: u8) -> Result<u64> {
    if lambda > 4 {
        return Err(Error::InvalidLambda(lambda));
    }
    let p = smallest_prime_geq((n as u64).max(5));
    Ok(p + LAMBDA_OFFSETS[lambda as usize])
}

/// Generates the R-type subsequence: ten slots, the first five and the last
/// fixed to the selected channel, the rest wildcards.
pub fn gen_r_type(selected: Channel) -> Subsequence {
    let slots = (1..=R_TYPE_LEN)
        .map(|t| {
            if t <= 5 || t == R_TYPE_LEN {
                Slot::Fixed(selected)
            } else {
                Slot::Wildcard
            }
        })
        .collect();
    Subsequence {
        kind: SubseqKind::RType,
        slots,
    }
}

/// Generates the λ-type subsequence for a channel set: a permutation of the
/// set followed by wildcards up to length `P + offset(λ)`.
pub fn gen_lambda_type(
    channels: &ChannelSet,
    lambda: u8,
    policy: PermPolicy,
) -> Result<Subsequence> {
    let n = channels.len();
    let len = lambda_len(n, lambda)? as usize;
    let mut ordered: Vec<Channel> = channels.as_slice().to_vec();
    if let PermPolicy::Shuffled { seed } = policy {
        let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ (u64::from(lambda) << 32)));
        ordered.shuffle(&mut rng);
    }
    let mut slots: Vec<Slot> = ordered.into_iter().map(Slot::Fixed).collect();
    slots.resize(len, Slot::Wildcard);
    Ok(Subsequence {
        kind: SubseqKind::Lambda(lambda),
        slots,
    })
}

/// Checks that `{P, P+2, P+3, P+4, P+6}` are pairwise coprime for every prime
/// `P` in `[5, limit]`.
pub fn check_prime_family_coprime(limit: u64) -> CheckOutcome {
    let mut cases = 0u64;
    for p in 5..=limit {
        if !is_prime(p) {
            continue;
        }
        let family: Vec<u64> = LAMBDA_OFFSETS.iter().map(|off| p + off).collect();
        for i in 0..family.len() {
            for j in (i + 1)..family.len() {
                cases += 1;
                if gcd(family[i], family[j]) != 1 {
                    return CheckOutcome {
                        cases,
                        violation: Some(format!(
                            "P={p}: gcd({}, {}) > 1",
                            family[i], family[j]
                        )),
                    };
                }
            }
        }
    }
    CheckOutcome {
        cases,
        violation: None,
    }
}

/// A pair-coverage scenario for [`check_pair_coverage`]: two λ-type
/// subsequences with coprime lengths, cycled against each other.
struct CoverageCase {
    set_a: &'static [Channel],
    lambda_a: u8,
    set_b: &'static [Channel],
    lambda_b: u8,
}

const COVERAGE_CASES: [CoverageCase; 3] = [
    // lengths 9 and 5
    CoverageCase {
        set_a: &[1, 2, 3, 4, 5, 6],
        lambda_a: 1,
        set_b: &[1, 7, 8, 9],
        lambda_b: 0,
    },
    // lengths 7 and 5
    CoverageCase {
        set_a: &[1, 2, 3, 4, 5, 6],
        lambda_a: 0,
        set_b: &[2, 4, 6, 8],
        lambda_b: 0,
    },
    // lengths 13 and 10
    CoverageCase {
        set_a: &[10, 20, 30, 40, 50, 60],
        lambda_a: 4,
        set_b: &[3, 5, 7, 9, 11, 13],
        lambda_b: 2,
    },
];

/// Verifies pair coverage for up to `max_cases` built-in coprime-length
/// subsequence pairs: cycling both subsequences for `K_A · K_B` slots from
/// every relative offset visits all `n_A · n_B` fixed channel pairs.
pub fn check_pair_coverage(max_cases: usize) -> CheckOutcome {
    let mut cases = 0u64;
    for scenario in COVERAGE_CASES.iter().take(max_cases) {
        let set_a = ChannelSet::new(scenario.set_a.to_vec()).expect("built-in set");
        let set_b = ChannelSet::new(scenario.set_b.to_vec()).expect("built-in set");
        let seq_a = gen_lambda_type(&set_a, scenario.lambda_a, PermPolicy::Ascending)
            .expect("built-in lambda");
        let seq_b = gen_lambda_type(&set_b, scenario.lambda_b, PermPolicy::Ascending)
            .expect("built-in lambda");
        let (ka, kb) = (seq_a.len() as u64, seq_b.len() as u64);
        assert_eq!(gcd(ka, kb), 1, "built-in cases must have coprime lengths");
        let want = set_a.len() * set_b.len();
        for offset in 0..ka * kb {
            cases += 1;
            let mut seen = vec![false; want];
            let mut found = 0usize;
            for slot in 0..ka * kb {
                let a = seq_a.slots()[(slot % ka) as usize];
                let b = seq_b.slots()[((slot + offset) % kb) as usize];
                if let (Slot::Fixed(x), Slot::Fixed(y)) = (a, b) {
                    let ix = set_a.as_slice().iter().position(|&c| c == x).unwrap()
                        * set_b.len()
                        + set_b.as_slice().iter().position(|&c| c == y).unwrap();
                    if !seen[ix] {
                        seen[ix] = true;
                        found += 1;
                    }
                }
            }
            if found != want {
                return CheckOutcome {
                    cases,
                    violation: Some(format!(
                        "K_A={ka} K_B={kb} offset={offset}: visited {found} of {want} pairs"
                    )),
                };
            }
        }
    }
    CheckOutcome {
        cases,
        violation: None,
    }
}
