//! The hop schedule: a user's virtual hop matrix and the slot-to-channel map.
//!
//! The matrix is never materialized. It has `L` columns (one per bootstrap
//! symbol) and is traversed row by row, so slot `t` (zero-based) lands in
//! column `t mod L` and row `t / L`. Each column repeats its subsequence
//! downward; the R-type column is special in that only its back half repeats
//! after the first five rows. [`HopSchedule::channel_at`] computes any cell
//! on demand, and [`HopCursor`] walks consecutive slots without divisions for
//! the simulation hot path.

use std::fmt;

use crate::channels::{Channel, ChannelSet};
use crate::coding::{self, BootstrapSequence, BootstrapSymbol};
use crate::subseq::{self, PermPolicy, Slot, Subsequence};
use crate::util::{lcm, splitmix64};
use crate::{CheckOutcome, Error, Result};

/// How wildcard slots are resolved at hop time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WildcardPolicy {
    /// Every wildcard yields a sentinel that matches nothing. Used to verify
    /// the rendezvous guarantee adversarially: wildcards can never help.
    NoMatch,
    /// Every wildcard draws uniformly from the user's channel set, keyed by
    /// the absolute slot index, so the draw is reproducible and independent
    /// of evaluation order.
    RandomFill { seed: u64 },
}

impl WildcardPolicy {
    pub fn seed(&self) -> Option<u64> {
        match self {
            WildcardPolicy::NoMatch => None,
            WildcardPolicy::RandomFill { seed } => Some(*seed),
        }
    }
}

/// The channel a user occupies in one slot, or the no-match sentinel from an
/// unfilled wildcard.
///
/// Equality on `Hop` is structural (two sentinels compare equal); rendezvous
/// must be decided with [`Hop::matches`], under which a sentinel matches
/// nothing, including another sentinel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hop {
    Channel(Channel),
    NoMatch,
}

impl Hop {
    /// The rendezvous predicate: `Some(channel)` when both sides occupy the
    /// same real channel.
    pub fn matches(self, other: Hop) -> Option<Channel> {
        match (self, other) {
            (Hop::Channel(a), Hop::Channel(b)) if a == b => Some(a),
            _ => None,
        }
    }

    pub fn channel(self) -> Option<Channel> {
        match self {
            Hop::Channel(c) => Some(c),
            Hop::NoMatch => None,
        }
    }
}

impl fmt::Display for Hop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hop::Channel(c) => write!(f, "{c}"),
            Hop::NoMatch => write!(f, "*"),
        }
    }
}

/// Column kind, with λ columns resolved to an index into the schedule's
/// subsequence table.
#[derive(Debug, Clone, Copy)]
enum ColumnKind {
    Selected,
    Lambda(usize),
}

/// A user's complete channel-hopping state: bootstrap sequence, one
/// subsequence per distinct bootstrap symbol, and the derived periods.
#[derive(Debug, Clone)]
pub struct HopSchedule {
    channel_count: u32,
    channels: ChannelSet,
    selected: Channel,
    bootstrap: BootstrapSequence,
    columns: Vec<ColumnKind>,
    r_template: Subsequence,
    lambda_ids: Vec<u8>,
    lambda_templates: Vec<Subsequence>,
    transient_len: u64,
    row_period: u64,
    full_period: u64,
}

/// Builds the schedule for one user.
///
/// Exactly one R-type subsequence is generated, plus one λ-type subsequence
/// per distinct digit in the bootstrap sequence; columns sharing a digit
/// share the identical subsequence object.
pub fn build_schedule(
    channel_count: u32,
    channels: &ChannelSet,
    selected: Channel,
    perm: PermPolicy,
) -> Result<HopSchedule> {
    channels.check_within(channel_count)?;
    if !channels.contains(selected) {
        return Err(Error::SelectedChannelNotAvailable(selected));
    }
    let bootstrap = coding::build_bootstrap(channel_count, selected)?;

    let lambda_ids = bootstrap.distinct_digits();
    let lambda_templates: Vec<Subsequence> = lambda_ids
        .iter()
        .map(|&lambda| subseq::gen_lambda_type(channels, lambda, perm))
        .collect::<Result<_>>()?;

    let columns: Vec<ColumnKind> = bootstrap
        .symbols()
        .iter()
        .map(|sym| match sym {
            BootstrapSymbol::Marker => ColumnKind::Selected,
            BootstrapSymbol::Digit(d) => ColumnKind::Lambda(
                lambda_ids
                    .iter()
                    .position(|x| x == d)
                    .expect("digit present by construction"),
            ),
        })
        .collect();

    let len = bootstrap.len() as u64;
    // The R column settles into a 5-row cycle after row 5, so the row period
    // is the lcm of 5 and every λ subsequence length in use.
    let row_period = lambda_templates
        .iter()
        .fold(5u64, |acc, seq| lcm(acc, seq.len() as u64));

    Ok(HopSchedule {
        channel_count,
        channels: channels.clone(),
        selected,
        bootstrap,
        columns,
        r_template: subseq::gen_r_type(selected),
        lambda_ids,
        lambda_templates,
        transient_len: 5 * len,
        row_period,
        full_period: len * row_period,
    })
}

impl HopSchedule {
    pub fn channel_count(&self) -> u32 {
        self.channel_count
    }

    pub fn channels(&self) -> &ChannelSet {
        &self.channels
    }

    pub fn selected(&self) -> Channel {
        self.selected
    }

    pub fn bootstrap(&self) -> &BootstrapSequence {
        &self.bootstrap
    }

    /// The λ-type subsequences in use, keyed by λ.
    pub fn lambda_subsequences(&self) -> impl Iterator<Item = (u8, &Subsequence)> {
        self.lambda_ids
            .iter()
            .copied()
            .zip(self.lambda_templates.iter())
    }

    pub fn r_subsequence(&self) -> &Subsequence {
        &self.r_template
    }

    /// Slots before the hop stream becomes periodic: the first five matrix
    /// rows.
    pub fn transient_len(&self) -> u64 {
        self.transient_len
    }

    /// Row count after which every column repeats.
    pub fn row_period(&self) -> u64 {
        self.row_period
    }

    /// Slot period of the hop stream beyond the transient.
    pub fn full_period(&self) -> u64 {
        self.full_period
    }

    /// The matrix cell for a slot, before wildcard resolution.
    fn slot_template(&self, slot: u64) -> Slot {
        let len = self.columns.len() as u64;
        let column = (slot % len) as usize;
        let row = slot / len;
        match self.columns[column] {
            ColumnKind::Selected => {
                if row < 5 {
                    Slot::Fixed(self.selected)
                } else {
                    self.r_template.slots()[5 + ((row - 5) % 5) as usize]
                }
            }
            ColumnKind::Lambda(ix) => {
                let template = &self.lambda_templates[ix];
                template.slots()[(row % template.len() as u64) as usize]
            }
        }
    }

    /// The channel this user occupies at `slot` (zero-based) under the given
    /// wildcard policy. Pure in `(self, slot, policy)`.
    pub fn channel_at(&self, slot: u64, policy: WildcardPolicy) -> Hop {
        match self.slot_template(slot) {
            Slot::Fixed(c) => Hop::Channel(c),
            Slot::Wildcard => match policy {
                WildcardPolicy::NoMatch => Hop::NoMatch,
                WildcardPolicy::RandomFill { seed } => {
                    Hop::Channel(self.wildcard_channel(slot, seed))
                }
            },
        }
    }

    /// Uniform draw from the channel set, keyed by `(seed, slot)`.
    fn wildcard_channel(&self, slot: u64, seed: u64) -> Channel {
        let h = splitmix64(seed ^ slot.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let n = self.channels.len() as u128;
        let ix = ((u128::from(h) * n) >> 64) as usize;
        self.channels.as_slice()[ix]
    }
}

/// Streaming walker over consecutive slots of a schedule.
///
/// Produces exactly the same hops as [`HopSchedule::channel_at`] but advances
/// column and row phases incrementally, avoiding per-slot divisions. Used by
/// the trial loop, where hundreds of millions of slots are evaluated.
pub struct HopCursor<'a> {
    sched: &'a HopSchedule,
    policy: WildcardPolicy,
    slot: u64,
    column: usize,
    row: u64,
    /// `(row - 5) % 5` once `row >= 5`; unused before that.
    back_phase: usize,
    /// `row % K` for each λ template.
    lambda_phase: Vec<usize>,
}

impl<'a> HopCursor<'a> {
    pub fn new(sched: &'a HopSchedule, start_slot: u64, policy: WildcardPolicy) -> Self {
        let len = sched.columns.len() as u64;
        let row = start_slot / len;
        HopCursor {
            sched,
            policy,
            slot: start_slot,
            column: (start_slot % len) as usize,
            row,
            back_phase: if row >= 5 { ((row - 5) % 5) as usize } else { 0 },
            lambda_phase: sched
                .lambda_templates
                .iter()
                .map(|t| (row % t.len() as u64) as usize)
                .collect(),
        }
    }

    /// The hop at the cursor's current slot; advances to the next slot.
    pub fn next_hop(&mut self) -> Hop {
        let sched = self.sched;
        let template = match sched.columns[self.column] {
            ColumnKind::Selected => {
                if self.row < 5 {
                    Slot::Fixed(sched.selected)
                } else {
                    sched.r_template.slots()[5 + self.back_phase]
                }
            }
            ColumnKind::Lambda(ix) => sched.lambda_templates[ix].slots()[self.lambda_phase[ix]],
        };
        let hop = match template {
            Slot::Fixed(c) => Hop::Channel(c),
            Slot::Wildcard => match self.policy {
                WildcardPolicy::NoMatch => Hop::NoMatch,
                WildcardPolicy::RandomFill { seed } => {
                    Hop::Channel(sched.wildcard_channel(self.slot, seed))
                }
            },
        };

        self.slot += 1;
        self.column += 1;
        if self.column == sched.columns.len() {
            self.column = 0;
            self.row += 1;
            if self.row > 5 {
                self.back_phase += 1;
                if self.back_phase == 5 {
                    self.back_phase = 0;
                }
            }
            for (phase, template) in self
                .lambda_phase
                .iter_mut()
                .zip(sched.lambda_templates.iter())
            {
                *phase += 1;
                if *phase == template.len() {
                    *phase = 0;
                }
            }
        }
        hop
    }
}

/// Worst-case rendezvous bound in slots for two users with `n_a` and `n_b`
/// available channels out of `channel_count`:
/// `max{(P_A+4)(P_B+6), (P_A+6)(P_B+4)} · L`.
pub fn mttr_bound(n_a: usize, n_b: usize, channel_count: u32) -> Result<u64> {
    if n_a == 0 || n_b == 0 {
        return Err(Error::EmptyChannelSet);
    }
    let p_a = subseq::smallest_prime_geq((n_a as u64).max(5));
    let p_b = subseq::smallest_prime_geq((n_b as u64).max(5));
    let len = coding::bootstrap_len(channel_count)? as u64;
    Ok(((p_a + 4) * (p_b + 6)).max((p_a + 6) * (p_b + 4)) * len)
}

/// Checks that two users hopping the R-type column stream with the same
/// selected channel rendezvous within five slots of the later start, for
/// every drift in `[0, max_drift]` and hostile wildcards.
pub fn check_r_column_rendezvous(max_drift: u64) -> CheckOutcome {
    let mut cases = 0u64;
    for selected in [1u32, 5, 123] {
        let template = subseq::gen_r_type(selected);
        // column stream: rows 1..5 directly, then the back half repeats
        let stream = |k: u64| -> Slot {
            if k < 5 {
                template.slots()[k as usize]
            } else {
                template.slots()[5 + ((k - 5) % 5) as usize]
            }
        };
        for drift in 0..=max_drift {
            cases += 1;
            let met = (1u64..=5).any(|t| {
                let leader = stream(t - 1 + drift);
                let follower = stream(t - 1);
                matches!(
                    (leader, follower),
                    (Slot::Fixed(a), Slot::Fixed(b)) if a == b
                )
            });
            if !met {
                return CheckOutcome {
                    cases,
                    violation: Some(format!(
                        "R={selected} drift={drift}: no rendezvous within 5 slots"
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
