//! Channel indices and validated channel sets.

use std::fmt;

use crate::{Error, Result};

/// A channel index. Channels are numbered from 1.
pub type Channel = u32;

/// A nonempty, sorted, duplicate-free set of channel indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelSet {
    channels: Vec<Channel>,
}

impl ChannelSet {
    /// Builds a set from arbitrary channel indices. Sorts and deduplicates;
    /// rejects empty input and the index 0.
    pub fn new(mut channels: Vec<Channel>) -> Result<Self> {
        if channels.is_empty() {
            return Err(Error::EmptyChannelSet);
        }
        channels.sort_unstable();
        channels.dedup();
        if channels[0] == 0 {
            return Err(Error::ChannelOutOfRange {
                channel: 0,
                channel_count: 0,
            });
        }
        Ok(Self { channels })
    }

    /// Parses comma-separated indices and inclusive ranges, e.g. `1-6` or
    /// `1,7,8,9` or `1-3,10`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut channels = Vec::new();
        for part in text.split(',') {
            let part = part.trim();
            if part.is_empty() {
                return Err(Error::ChannelSetSyntax(text.to_string()));
            }
            match part.split_once('-') {
                Some((lo, hi)) => {
                    let lo: Channel = lo
                        .trim()
                        .parse()
                        .map_err(|_| Error::ChannelSetSyntax(text.to_string()))?;
                    let hi: Channel = hi
                        .trim()
                        .parse()
                        .map_err(|_| Error::ChannelSetSyntax(text.to_string()))?;
                    if lo > hi {
                        return Err(Error::ChannelSetSyntax(text.to_string()));
                    }
                    channels.extend(lo..=hi);
                }
                None => channels.push(
                    part.parse()
                        .map_err(|_| Error::ChannelSetSyntax(text.to_string()))?,
                ),
            }
        }
        Self::new(channels)
    }

    /// Checks that every channel lies in `[1, channel_count]`.
    pub fn check_within(&self, channel_count: u32) -> Result<()> {
        let last = *self.channels.last().expect("set is nonempty");
        if last > channel_count {
            return Err(Error::ChannelOutOfRange {
                channel: last,
                channel_count,
            });
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.channels.len()
    }

    /// Always false: construction rejects empty sets.
    pub fn is_empty(&self) -> bool {
        self.channels.is_empty()
    }

    pub fn contains(&self, channel: Channel) -> bool {
        self.channels.binary_search(&channel).is_ok()
    }

    pub fn as_slice(&self) -> &[Channel] {
        &self.channels
    }

    pub fn iter(&self) -> impl Iterator<Item = Channel> + '_ {
        self.channels.iter().copied()
    }

    /// Channels present in both sets.
    pub fn intersection(&self, other: &ChannelSet) -> Vec<Channel> {
        self.channels
            .iter()
            .copied()
            .filter(|&c| other.contains(c))
            .collect()
    }
}

impl fmt::Display for ChannelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.channels.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn new_sorts_and_dedups() {
        let set = ChannelSet::new(vec![9, 1, 7, 8, 1]).unwrap();
        assert_eq!(set.as_slice(), &[1, 7, 8, 9]);
        assert_eq!(set.len(), 4);
    }

    #[test]
    fn empty_rejected() {
        assert_eq!(ChannelSet::new(vec![]), Err(Error::EmptyChannelSet));
    }

    #[test]
    fn zero_rejected() {
        assert!(ChannelSet::new(vec![0, 1]).is_err());
    }

    #[test]
    fn parse_ranges_and_lists() {
        assert_eq!(
            ChannelSet::parse("1-6").unwrap().as_slice(),
            &[1, 2, 3, 4, 5, 6]
        );
        assert_eq!(
            ChannelSet::parse("1,7,8,9").unwrap().as_slice(),
            &[1, 7, 8, 9]
        );
        assert_eq!(
            ChannelSet::parse("1-3,10").unwrap().as_slice(),
            &[1, 2, 3, 10]
        );
        assert!(ChannelSet::parse("6-1").is_err());
        assert!(ChannelSet::parse("").is_err());
        assert!(ChannelSet::parse("1,,2").is_err());
        assert!(ChannelSet::parse("a-b").is_err());
    }

    #[test]
    fn within_bounds_check() {
        let set = ChannelSet::parse("1,7,8,9").unwrap();
        assert!(set.check_within(9).is_ok());
        assert_eq!(
            set.check_within(8),
            Err(Error::ChannelOutOfRange {
                channel: 9,
                channel_count: 8
            })
        );
    }

    #[test]
    fn intersection_is_sorted_common_channels() {
        let a = ChannelSet::parse("1-6").unwrap();
        let b = ChannelSet::parse("1,7,8,9").unwrap();
        assert_eq!(a.intersection(&b), vec![1]);
        assert_eq!(b.intersection(&a), vec![1]);
    }

    #[test]
    fn display_round_trips() {
        let set = ChannelSet::parse("1,7,8,9").unwrap();
        assert_eq!(set.to_string(), "1,7,8,9");
        assert_eq!(ChannelSet::parse(&set.to_string()).unwrap(), set);
    }
}
