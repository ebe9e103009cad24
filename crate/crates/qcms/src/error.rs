use thiserror::Error;

/// Errors produced by sequence construction and simulation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("channel {channel} outside [1, {channel_count}]")]
    ChannelOutOfRange { channel: u32, channel_count: u32 },

    #[error("channel count must be at least 2, got {0}")]
    ChannelCountTooSmall(u32),

    #[error("digit {0} is not a quaternary digit")]
    InvalidQuaternaryDigit(u8),

    #[error("({0}, {1}) is not in the image of the pair coding")]
    InvalidQuinaryPair(u8, u8),

    #[error("rotation distance {distance} outside [1, {len_minus_one}]")]
    InvalidRotation { distance: usize, len_minus_one: usize },

    #[error("channel set is empty")]
    EmptyChannelSet,

    #[error("lambda {0} outside [0, 4]")]
    InvalidLambda(u8),

    #[error("selected channel {0} is not in the available channel set")]
    SelectedChannelNotAvailable(u32),

    #[error("schedules use different channel counts ({0} and {1})")]
    MismatchedChannelCount(u32, u32),

    #[error("no rendezvous within the slot budget of {0}")]
    BudgetExceeded(u64),

    #[error("infeasible scenario: {0}")]
    InfeasibleScenario(String),

    #[error("channel sets share no common channel")]
    NoCommonChannel,

    #[error("invalid channel set syntax: {0}")]
    ChannelSetSyntax(String),

    #[error("i/o failure: {0}")]
    Io(String),
}
