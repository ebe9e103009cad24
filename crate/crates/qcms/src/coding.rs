//! Quaternary channel encoding, the quaternary-to-quinary pair coding, and
//! bootstrap sequence construction.
//!
//! The bootstrap sequence is the symbol string `R00` followed by the quinary
//! encoding of the selected channel. Its length `L` fixes the number of
//! columns of the virtual hop matrix, and each symbol selects the subsequence
//! type repeated in that column.

use std::fmt;

use crate::{CheckOutcome, Error, Result};

/// Base-4 digit string of even length, left-padded with zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuaternaryDigits(Vec<u8>);

impl QuaternaryDigits {
    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Base-4 value of the digit string.
    pub fn value(&self) -> u64 {
        self.0.iter().fold(0u64, |acc, &d| acc * 4 + u64::from(d))
    }
}

/// Base-5 digit string produced by the pair coding. Within every digit pair
/// the first digit is nonzero and the two digits differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuinaryDigits(Vec<u8>);

impl QuinaryDigits {
    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// One symbol of a bootstrap sequence: the marker for the selected channel,
/// or a quinary digit selecting a λ-type column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BootstrapSymbol {
    /// The `R` marker. Appears exactly once, at position 1.
    Marker,
    /// A digit in `[0, 4]`.
    Digit(u8),
}

impl fmt::Display for BootstrapSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BootstrapSymbol::Marker => write!(f, "R"),
            BootstrapSymbol::Digit(d) => write!(f, "{d}"),
        }
    }
}

/// The symbol string `R00 ∥ Q` that labels the hop-matrix columns.
///
/// Always starts with `(Marker, 0, 0)` and has odd length `L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BootstrapSequence {
    symbols: Vec<BootstrapSymbol>,
}

impl BootstrapSequence {
    pub fn symbols(&self) -> &[BootstrapSymbol] {
        &self.symbols
    }

    /// The sequence length `L` (odd, equal to the padded quaternary length
    /// plus three).
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// The distinct digits appearing in the sequence, sorted ascending.
    /// Always contains 0 because of the `R00` prefix.
    pub fn distinct_digits(&self) -> Vec<u8> {
        let mut seen = [false; 5];
        for sym in &self.symbols {
            if let BootstrapSymbol::Digit(d) = sym {
                seen[*d as usize] = true;
            }
        }
        (0u8..5).filter(|&d| seen[d as usize]).collect()
    }
}

impl fmt::Display for BootstrapSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for sym in &self.symbols {
            write!(f, "{sym}")?;
        }
        Ok(())
    }
}

/// Number of base-4 digits of `n` itself (`⌊log₄ n⌋ + 1` for `n ≥ 1`).
fn base4_digit_count(mut n: u32) -> usize {
    let mut count = 0;
    while n > 0 {
        n /= 4;
        count += 1;
    }
    count
}

/// Bootstrap sequence length for a given channel count, without building a
/// sequence: the base-4 digit count of `channel_count`, padded to even, plus
/// the three-symbol prefix.
pub fn bootstrap_len(channel_count: u32) -> Result<usize> {
    if channel_count < 2 {
        return Err(Error::ChannelCountTooSmall(channel_count));
    }
    let digits = base4_digit_count(channel_count);
    Ok(digits + digits % 2 + 3)
}

/// Represents channel index `channel` as a fixed-length quaternary number.
///
/// The digit count is that of `channel_count` itself, padded with one extra
/// leading zero when odd so the result can be grouped into pairs.
pub fn to_quaternary(channel: u32, channel_count: u32) -> Result<QuaternaryDigits> {
    if channel_count < 2 {
        return Err(Error::ChannelCountTooSmall(channel_count));
    }
    if channel < 1 || channel > channel_count {
        return Err(Error::ChannelOutOfRange {
            channel,
            channel_count,
        });
    }
    let width = base4_digit_count(channel_count);
    let width = width + width % 2;
    let mut digits = vec![0u8; width];
    let mut value = channel;
    for slot in digits.iter_mut().rev() {
        *slot = (value % 4) as u8;
        value /= 4;
    }
    debug_assert_eq!(value, 0, "channel must fit in the padded width");
    Ok(QuaternaryDigits(digits))
}

/// Maps a 2-digit quaternary number to its 2-digit quinary code.
///
/// Closed form of the 16-entry coding table: the first output digit is
/// `hi + 1`; the second is `lo`, skipped past the first digit's value so the
/// two never collide. The image is exactly the set of quinary pairs whose
/// first digit is nonzero and whose digits differ.
pub fn code_pair(hi: u8, lo: u8) -> Result<(u8, u8)> {
    if hi > 3 {
        return Err(Error::InvalidQuaternaryDigit(hi));
    }
    if lo > 3 {
        return Err(Error::InvalidQuaternaryDigit(lo));
    }
    let first = hi + 1;
    let second = if lo < first { lo } else { lo + 1 };
    Ok((first, second))
}

/// Inverse of [`code_pair`]. Fails for pairs outside the coding's image.
pub fn decode_pair(hi5: u8, lo5: u8) -> Result<(u8, u8)> {
    if !(1..=4).contains(&hi5) || lo5 > 4 || hi5 == lo5 {
        return Err(Error::InvalidQuinaryPair(hi5, lo5));
    }
    let hi = hi5 - 1;
    let lo = if lo5 < hi5 { lo5 } else { lo5 - 1 };
    Ok((hi, lo))
}

/// Encodes an even-length quaternary string pair by pair.
fn encode_quinary(quaternary: &QuaternaryDigits) -> QuinaryDigits {
    let mut out = Vec::with_capacity(quaternary.len());
    for pair in quaternary.digits().chunks_exact(2) {
        let (a, b) = code_pair(pair[0], pair[1]).expect("digits validated at construction");
        out.push(a);
        out.push(b);
    }
    QuinaryDigits(out)
}

/// Builds the bootstrap sequence `R00 ∥ Q` for the selected channel.
pub fn build_bootstrap(channel_count: u32, channel: u32) -> Result<BootstrapSequence> {
    let quaternary = to_quaternary(channel, channel_count)?;
    let quinary = encode_quinary(&quaternary);
    let mut symbols = Vec::with_capacity(quinary.len() + 3);
    symbols.push(BootstrapSymbol::Marker);
    symbols.push(BootstrapSymbol::Digit(0));
    symbols.push(BootstrapSymbol::Digit(0));
    symbols.extend(quinary.digits().iter().map(|&d| BootstrapSymbol::Digit(d)));
    Ok(BootstrapSequence { symbols })
}

/// Left-rotation by `distance`: output position `j` holds input position
/// `(j + distance) mod L` (zero-based). `distance` must lie in `[1, L-1]`.
pub fn rotate(sequence: &BootstrapSequence, distance: usize) -> Result<Vec<BootstrapSymbol>> {
    let len = sequence.len();
    if distance < 1 || distance >= len {
        return Err(Error::InvalidRotation {
            distance,
            len_minus_one: len - 1,
        });
    }
    Ok((0..len)
        .map(|j| sequence.symbols[(j + distance) % len])
        .collect())
}

/// Scans every concatenation of `max_pairs` coded pairs for a run of three
/// identical digits. The pair coding forbids such runs: within a pair the
/// digits differ, so a run of three would need two equal digits inside one
/// pair.
pub fn check_no_triple_repeats(max_pairs: usize) -> CheckOutcome {
    scan_pair_concatenations(max_pairs, |digits| {
        digits
            .windows(3)
            .position(|w| w[0] == w[1] && w[1] == w[2])
            .map(|at| format!("triple {} at digit {}", digits[at], at + 1))
    })
}

/// Scans every concatenation of `max_pairs` coded pairs for a repeated digit
/// pair that starts at an odd (1-based) position. Equal adjacent digits can
/// only arise across a pair boundary, i.e. starting at an even position.
pub fn check_doubles_start_even(max_pairs: usize) -> CheckOutcome {
    scan_pair_concatenations(max_pairs, |digits| {
        digits
            .windows(2)
            .enumerate()
            .find(|(i, w)| w[0] == w[1] && (i + 1) % 2 == 1)
            .map(|(i, w)| format!("double {} starting at odd position {}", w[0], i + 1))
    })
}

fn scan_pair_concatenations(
    max_pairs: usize,
    find_violation: impl Fn(&[u8]) -> Option<String>,
) -> CheckOutcome {
    let mut cases = 0u64;
    let mut digits = vec![0u8; max_pairs * 2];
    let total: u64 = 16u64.checked_pow(max_pairs as u32).unwrap_or(0);
    if max_pairs == 0 {
        return CheckOutcome {
            cases: 0,
            violation: None,
        };
    }
    for combo in 0..total {
        let mut rest = combo;
        for k in 0..max_pairs {
            let pair = (rest % 16) as u8;
            rest /= 16;
            let (a, b) = code_pair(pair / 4, pair % 4).expect("pair index in range");
            digits[2 * k] = a;
            digits[2 * k + 1] = b;
        }
        cases += 1;
        if let Some(found) = find_violation(&digits) {
            return CheckOutcome {
                cases,
                violation: Some(format!("combination {combo}: {found}")),
            };
        }
    }
    CheckOutcome {
        cases,
        violation: None,
    }
}

/// Exhaustively checks, for each channel count in `channel_counts`, that any
/// two bootstrap sequences overlap a zero with a nonzero digit under every
/// nontrivial rotation: there is a position where one sequence holds 0 and
/// the rotation of the other holds a digit in `[1, 4]`.
pub fn check_rotation_overlap(channel_counts: &[u32]) -> CheckOutcome {
    let mut cases = 0u64;
    for &n in channel_counts {
        let sequences: Vec<BootstrapSequence> = match (1..=n)
            .map(|r| build_bootstrap(n, r))
            .collect::<Result<_>>()
        {
            Ok(seqs) => seqs,
            Err(e) => {
                return CheckOutcome {
                    cases,
                    violation: Some(format!("N={n}: {e}")),
                }
            }
        };
        let len = sequences[0].len();
        for (r1, first) in sequences.iter().enumerate() {
            for (r2, second) in sequences.iter().enumerate() {
                for d in 1..len {
                    cases += 1;
                    let overlap = (0..len).any(|i| {
                        let a = first.symbols[i];
                        let b = second.symbols[(i + d) % len];
                        zero_meets_digit(a, b) || zero_meets_digit(b, a)
                    });
                    if !overlap {
                        return CheckOutcome {
                            cases,
                            violation: Some(format!(
                                "N={n} R1={} R2={} d={d}: no zero/nonzero overlap",
                                r1 + 1,
                                r2 + 1
                            )),
                        };
                    }
                }
            }
        }
    }
    CheckOutcome {
        cases,
        violation: None,
    }
}

fn zero_meets_digit(a: BootstrapSymbol, b: BootstrapSymbol) -> bool {
    a == BootstrapSymbol::Digit(0) && matches!(b, BootstrapSymbol::Digit(1..=4))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// The 16-entry coding table, transcribed literally. Anchors the closed
    /// form in [`code_pair`] against the reference row by row.
    const PAIR_TABLE: [((u8, u8), (u8, u8)); 16] = [
        ((0, 0), (1, 0)),
        ((0, 1), (1, 2)),
        ((0, 2), (1, 3)),
        ((0, 3), (1, 4)),
        ((1, 0), (2, 0)),
        ((1, 1), (2, 1)),
        ((1, 2), (2, 3)),
        ((1, 3), (2, 4)),
        ((2, 0), (3, 0)),
        ((2, 1), (3, 1)),
        ((2, 2), (3, 2)),
        ((2, 3), (3, 4)),
        ((3, 0), (4, 0)),
        ((3, 1), (4, 1)),
        ((3, 2), (4, 2)),
        ((3, 3), (4, 3)),
    ];

    fn symbols(text: &str) -> Vec<BootstrapSymbol> {
        text.chars()
            .map(|c| match c {
                'R' => BootstrapSymbol::Marker,
                d => BootstrapSymbol::Digit(d.to_digit(10).unwrap() as u8),
            })
            .collect()
    }

    #[test]
    fn code_pair_matches_literal_table() {
        for ((hi, lo), expected) in PAIR_TABLE {
            assert_eq!(code_pair(hi, lo).unwrap(), expected, "input {hi}{lo}");
        }
    }

    #[test]
    fn code_pair_is_injective_with_valid_image() {
        let mut seen = std::collections::HashSet::new();
        for hi in 0..4u8 {
            for lo in 0..4u8 {
                let (a, b) = code_pair(hi, lo).unwrap();
                assert!((1..=4).contains(&a), "first digit {a} out of range");
                assert!(b <= 4, "second digit {b} out of range");
                assert_ne!(a, b, "digits equal for input {hi}{lo}");
                assert!(seen.insert((a, b)), "duplicate image ({a}, {b})");
            }
        }
        assert_eq!(seen.len(), 16);
    }

    #[test]
    fn code_pair_rejects_non_quaternary_digits() {
        assert_eq!(code_pair(4, 0), Err(Error::InvalidQuaternaryDigit(4)));
        assert_eq!(code_pair(0, 5), Err(Error::InvalidQuaternaryDigit(5)));
    }

    #[test]
    fn decode_pair_inverts_all_sixteen() {
        for ((hi, lo), (a, b)) in PAIR_TABLE {
            assert_eq!(decode_pair(a, b).unwrap(), (hi, lo));
        }
    }

    #[test]
    fn decode_pair_rejects_pairs_outside_image() {
        assert_eq!(decode_pair(1, 1), Err(Error::InvalidQuinaryPair(1, 1)));
        assert_eq!(decode_pair(0, 1), Err(Error::InvalidQuinaryPair(0, 1)));
        assert_eq!(decode_pair(5, 0), Err(Error::InvalidQuinaryPair(5, 0)));
        assert_eq!(decode_pair(1, 5), Err(Error::InvalidQuinaryPair(1, 5)));
    }

    #[test]
    fn quaternary_worked_examples() {
        assert_eq!(to_quaternary(5, 200).unwrap().digits(), &[0, 0, 1, 1]);
        assert_eq!(to_quaternary(1, 4).unwrap().digits(), &[0, 1]);
        // 16 = 100 in base 4; three digits pad to four
        assert_eq!(to_quaternary(16, 16).unwrap().digits(), &[0, 1, 0, 0]);
    }

    #[test]
    fn quaternary_rejects_out_of_range() {
        assert!(to_quaternary(0, 200).is_err());
        assert!(to_quaternary(201, 200).is_err());
        assert_eq!(to_quaternary(1, 1), Err(Error::ChannelCountTooSmall(1)));
    }

    #[test]
    fn quaternary_round_trips_for_all_channels_up_to_1024() {
        for n in 2..=1024u32 {
            for r in 1..=n {
                let digits = to_quaternary(r, n).unwrap();
                assert_eq!(digits.value(), u64::from(r), "N={n} R={r}");
                assert_eq!(digits.len() % 2, 0);
            }
        }
    }

    #[test]
    fn bootstrap_length_bounded_by_nine_up_to_1024() {
        for n in 2..=1024u32 {
            let len = bootstrap_len(n).unwrap();
            assert!(len <= 9, "N={n} gives L={len}");
            assert_eq!(len % 2, 1, "L must be odd");
            assert_eq!(build_bootstrap(n, 1).unwrap().len(), len);
        }
    }

    #[test]
    fn bootstrap_worked_examples() {
        assert_eq!(
            build_bootstrap(200, 5).unwrap().symbols(),
            symbols("R001021").as_slice()
        );
        assert_eq!(
            build_bootstrap(4, 1).unwrap().symbols(),
            symbols("R0012").as_slice()
        );
        // 200 = 3020 in base 4; pairs 30 and 20 code to 40 and 30
        assert_eq!(
            build_bootstrap(200, 200).unwrap().symbols(),
            symbols("R004030").as_slice()
        );
    }

    #[test]
    fn bootstrap_display_is_compact() {
        assert_eq!(build_bootstrap(200, 5).unwrap().to_string(), "R001021");
    }

    #[test]
    fn bootstrap_prefix_and_marker_invariants() {
        for n in [2u32, 4, 5, 16, 17, 200, 256, 1024] {
            for r in [1, n / 2 + 1, n] {
                let bs = build_bootstrap(n, r).unwrap();
                assert_eq!(bs.symbols()[0], BootstrapSymbol::Marker);
                assert_eq!(bs.symbols()[1], BootstrapSymbol::Digit(0));
                assert_eq!(bs.symbols()[2], BootstrapSymbol::Digit(0));
                let markers = bs
                    .symbols()
                    .iter()
                    .filter(|s| **s == BootstrapSymbol::Marker)
                    .count();
                assert_eq!(markers, 1);
            }
        }
    }

    #[test]
    fn distinct_digits_sorted_and_zero_always_present() {
        let bs = build_bootstrap(200, 5).unwrap(); // R001021
        assert_eq!(bs.distinct_digits(), vec![0, 1, 2]);
        let bs = build_bootstrap(200, 200).unwrap(); // R004030
        assert_eq!(bs.distinct_digits(), vec![0, 3, 4]);
    }

    #[test]
    fn rotation_worked_examples() {
        let bs = build_bootstrap(200, 5).unwrap(); // R001021
        assert_eq!(rotate(&bs, 2).unwrap(), symbols("01021R0"));
        let bs = build_bootstrap(4, 1).unwrap(); // R0012
        assert_eq!(rotate(&bs, 4).unwrap(), symbols("2R001"));
    }

    #[test]
    fn rotation_rejects_out_of_range_distances() {
        let bs = build_bootstrap(4, 1).unwrap();
        assert_eq!(
            rotate(&bs, 0),
            Err(Error::InvalidRotation {
                distance: 0,
                len_minus_one: 4
            })
        );
        assert!(rotate(&bs, 5).is_err());
    }

    #[test]
    fn rotating_full_cycle_returns_original() {
        let bs = build_bootstrap(200, 77).unwrap();
        let len = bs.len();
        let mut current = bs.symbols().to_vec();
        for _ in 0..len {
            let tmp = BootstrapSequence { symbols: current };
            current = rotate(&tmp, 1).unwrap();
        }
        assert_eq!(current, bs.symbols());
    }

    #[test]
    fn no_triple_repeats_in_four_pair_concatenations() {
        let outcome = check_no_triple_repeats(4);
        assert_eq!(outcome.cases, 65536);
        assert!(outcome.passed(), "{:?}", outcome.violation);
    }

    #[test]
    fn doubles_start_at_even_positions_in_four_pair_concatenations() {
        let outcome = check_doubles_start_even(4);
        assert_eq!(outcome.cases, 65536);
        assert!(outcome.passed(), "{:?}", outcome.violation);
    }

    #[test]
    fn zero_pair_concatenation_check_is_vacuous() {
        let outcome = check_no_triple_repeats(0);
        assert_eq!(outcome.cases, 0);
        assert!(outcome.passed());
    }

    #[test]
    fn rotation_overlap_holds_for_small_channel_counts() {
        let outcome = check_rotation_overlap(&[4, 5]);
        assert!(outcome.passed(), "{:?}", outcome.violation);
        // 4*(16 + 25) rotations per rotation distance times (L-1)=4 distances
        assert_eq!(outcome.cases, (16 + 25) * 4);
    }

    proptest! {
        #[test]
        fn quaternary_value_round_trip(n in 2u32..100_000, offset in 0u32..100_000) {
            let r = 1 + offset % n;
            let digits = to_quaternary(r, n).unwrap();
            prop_assert_eq!(digits.value(), u64::from(r));
        }

        #[test]
        fn code_then_decode_is_identity(hi in 0u8..4, lo in 0u8..4) {
            let coded = code_pair(hi, lo).unwrap();
            prop_assert_eq!(decode_pair(coded.0, coded.1).unwrap(), (hi, lo));
        }
    }
}
