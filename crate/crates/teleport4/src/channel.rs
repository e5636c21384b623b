//! Four-qubit channel states: the builtin catalog, a plain-text file
//! format, and seeded random channels for property checks.
//!
//! # File format
//!
//! UTF-8 text. Lines starting with `#` are comments. Exactly 16 other
//! lines must appear, each `BBBB RE IM` where `BBBB` is the basis
//! bitstring for qubits `(3,4,5,6)` in that order and `RE`/`IM` are
//! decimal reals; every bitstring appears exactly once. Surrounding
//! whitespace is ignored.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bellkit::{bell_state_on, BellIndex};
use crate::qmath::{c64, Complex64, StateVector};

/// Qubit labels of every channel state, most significant first.
pub const CHANNEL_LABELS: [u8; 4] = [3, 4, 5, 6];

/// Largest tolerated deviation of a channel's norm from one.
pub const NORM_TOLERANCE: f64 = 1e-6;

/// Errors from channel construction and parsing.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ChannelError {
    #[error("unknown channel name `{0}`")]
    UnknownName(String),
    #[error("bad channel parameter: {0}")]
    BadParameter(String),
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: duplicate basis bitstring {bits}")]
    DuplicateBasis { line: usize, bits: String },
    #[error("expected 16 amplitude lines, found {found}")]
    WrongCount { found: usize },
    #[error("channel norm {norm} is not 1 (tolerance {NORM_TOLERANCE:e})")]
    NotNormalized { norm: f64 },
    #[error("channel amplitudes are all zero")]
    ZeroNorm,
    #[error("channel must live on qubits (3,4,5,6)")]
    WrongLabels,
}

/// A normalized four-qubit state over qubits `(3, 4, 5, 6)`; the
/// entanglement resource shared by Alice (3, 4) and Bob (5, 6).
#[derive(Clone, Debug, PartialEq)]
pub struct Channel {
    state: StateVector,
    name: Option<String>,
}

impl Channel {
    pub fn new(state: StateVector) -> Result<Self, ChannelError> {
        if state.labels() != CHANNEL_LABELS {
            return Err(ChannelError::WrongLabels);
        }
        let norm = state.norm();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(ChannelError::NotNormalized { norm });
        }
        Ok(Self { state, name: None })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn amps(&self) -> &[Complex64] {
        self.state.amps()
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }
}

/// Name of a builtin channel, possibly parameterised.
///
/// The text form is `name` or `name:key=value[,key=value]`, e.g.
/// `bell-pairs:i=1,j=2` or `partial-pair:theta=0.5235987755982988`.
#[derive(Clone, Debug, PartialEq)]
pub enum CatalogName {
    /// The genuine four-qubit channel of Yeo and Chua.
    YeoChua,
    /// Four-qubit Greenberger-Horne-Zeilinger state.
    Ghz4,
    /// Four-qubit W state.
    W4,
    /// Channel whose first transformation operator is a C-NOT.
    CnotChannel,
    /// Product of Bell pairs `(3,5)` and `(4,6)`; the reducible reference.
    BellPairs(BellIndex, BellIndex),
    /// Partially entangled pair `cosθ|00⟩ + sinθ|11⟩` on `(3,5)` times a
    /// Bell pair on `(4,6)`; `θ ∈ (0, π/2)`.
    PartialPair(f64),
}

impl fmt::Display for CatalogName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogName::YeoChua => write!(f, "yeo-chua"),
            CatalogName::Ghz4 => write!(f, "ghz4"),
            CatalogName::W4 => write!(f, "w4"),
            CatalogName::CnotChannel => write!(f, "cnot-channel"),
            CatalogName::BellPairs(i, j) => write!(f, "bell-pairs:i={i},j={j}"),
            CatalogName::PartialPair(theta) => write!(f, "partial-pair:theta={theta}"),
        }
    }
}

impl FromStr for CatalogName {
    type Err = ChannelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (base, params) = match s.split_once(':') {
            Some((base, params)) => (base, Some(params)),
            None => (s, None),
        };
        let reject_params = |name: &str| match params {
            None => Ok(()),
            Some(_) => Err(ChannelError::BadParameter(format!(
                "`{name}` takes no parameters"
            ))),
        };
        match base {
            "yeo-chua" => reject_params(base).map(|()| CatalogName::YeoChua),
            "ghz4" => reject_params(base).map(|()| CatalogName::Ghz4),
            "w4" => reject_params(base).map(|()| CatalogName::W4),
            "cnot-channel" => reject_params(base).map(|()| CatalogName::CnotChannel),
            "bell-pairs" => {
                let pairs = parse_params(params.unwrap_or(""), &["i", "j"])?;
                let index = |raw: &str| {
                    raw.parse::<u8>()
                        .ok()
                        .and_then(BellIndex::new)
                        .ok_or_else(|| {
                            ChannelError::BadParameter(format!(
                                "Bell index `{raw}` is not in 1..=4"
                            ))
                        })
                };
                Ok(CatalogName::BellPairs(index(pairs[0])?, index(pairs[1])?))
            }
            "partial-pair" => {
                let pairs = parse_params(params.unwrap_or(""), &["theta"])?;
                let theta: f64 = pairs[0].parse().map_err(|_| {
                    ChannelError::BadParameter(format!("theta `{}` is not a real", pairs[0]))
                })?;
                Ok(CatalogName::PartialPair(theta))
            }
            other => Err(ChannelError::UnknownName(other.to_string())),
        }
    }
}

fn parse_params<'a>(params: &'a str, keys: &[&str]) -> Result<Vec<&'a str>, ChannelError> {
    let mut values: Vec<Option<&str>> = vec![None; keys.len()];
    for item in params.split(',') {
        let (key, value) = item.split_once('=').ok_or_else(|| {
            ChannelError::BadParameter(format!("expected key=value, found `{item}`"))
        })?;
        match keys.iter().position(|k| *k == key.trim()) {
            Some(slot) if values[slot].is_none() => values[slot] = Some(value.trim()),
            Some(_) => {
                return Err(ChannelError::BadParameter(format!(
                    "parameter `{key}` given twice"
                )))
            }
            None => {
                return Err(ChannelError::BadParameter(format!(
                    "unknown parameter `{key}`"
                )))
            }
        }
    }
    values
        .into_iter()
        .enumerate()
        .map(|(slot, value)| {
            value.ok_or_else(|| {
                ChannelError::BadParameter(format!("missing parameter `{}`", keys[slot]))
            })
        })
        .collect()
}

/// Builds a builtin channel.
pub fn catalog(name: &CatalogName) -> Result<Channel, ChannelError> {
    let state = match name {
        CatalogName::YeoChua => {
            // (|0000⟩ − |0011⟩ − |0101⟩ + |0110⟩ + |1001⟩ + |1010⟩ + |1100⟩ + |1111⟩)/(2√2)
            let a = 0.5 * std::f64::consts::FRAC_1_SQRT_2;
            from_sparse(&[
                (0b0000, a),
                (0b0011, -a),
                (0b0101, -a),
                (0b0110, a),
                (0b1001, a),
                (0b1010, a),
                (0b1100, a),
                (0b1111, a),
            ])
        }
        CatalogName::Ghz4 => {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            from_sparse(&[(0b0000, h), (0b1111, h)])
        }
        CatalogName::W4 => from_sparse(&[(0b0001, 0.5), (0b0010, 0.5), (0b0100, 0.5), (0b1000, 0.5)]),
        CatalogName::CnotChannel => {
            from_sparse(&[(0b0000, 0.5), (0b0101, 0.5), (0b1011, 0.5), (0b1110, 0.5)])
        }
        CatalogName::BellPairs(i, j) => bell_state_on(*i, 3, 5)
            .tensor(&bell_state_on(*j, 4, 6))
            .expect("pairs (3,5) and (4,6) are disjoint")
            .reordered(&CHANNEL_LABELS)
            .expect("same label set"),
        CatalogName::PartialPair(theta) => {
            if !theta.is_finite() || *theta <= 0.0 || *theta >= std::f64::consts::FRAC_PI_2 {
                return Err(ChannelError::BadParameter(format!(
                    "theta {theta} is outside (0, pi/2)"
                )));
            }
            let pair = StateVector::new(
                vec![3, 5],
                vec![
                    c64(theta.cos(), 0.0),
                    c64(0.0, 0.0),
                    c64(0.0, 0.0),
                    c64(theta.sin(), 0.0),
                ],
            )
            .expect("well formed");
            pair.tensor(&bell_state_on(BellIndex::ALL[0], 4, 6))
                .expect("pairs (3,5) and (4,6) are disjoint")
                .reordered(&CHANNEL_LABELS)
                .expect("same label set")
        }
    };
    Ok(Channel::new(state)?.with_name(name.to_string()))
}

fn from_sparse(terms: &[(usize, f64)]) -> StateVector {
    let mut amps = vec![c64(0.0, 0.0); 16];
    for &(index, value) in terms {
        amps[index] = c64(value, 0.0);
    }
    StateVector::new(CHANNEL_LABELS.to_vec(), amps).expect("well formed")
}

/// Parses the channel file format.
///
/// Amplitudes are kept exactly as written. Without `normalize` the norm
/// must already be 1 within [`NORM_TOLERANCE`]; with it, amplitudes are
/// rescaled by the inverse norm.
pub fn parse_channel(text: &str, normalize: bool) -> Result<Channel, ChannelError> {
    let mut amps: [Option<Complex64>; 16] = [None; 16];
    let mut found = 0usize;
    for (offset, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let number = offset + 1;
        let malformed = |reason: &str| ChannelError::Malformed {
            line: number,
            reason: reason.to_string(),
        };
        let mut fields = line.split_whitespace();
        let bits = fields.next().ok_or_else(|| malformed("empty line"))?;
        if bits.len() != 4 || bits.bytes().any(|b| b != b'0' && b != b'1') {
            return Err(malformed(&format!("`{bits}` is not a 4-bit basis label")));
        }
        let index = usize::from_str_radix(bits, 2).expect("validated above");
        let mut real = |what: &str| -> Result<f64, ChannelError> {
            let field = fields
                .next()
                .ok_or_else(|| malformed(&format!("missing {what} part")))?;
            let value: f64 = field
                .parse()
                .map_err(|_| malformed(&format!("{what} part `{field}` is not a real")))?;
            if !value.is_finite() {
                return Err(malformed(&format!("{what} part is not finite")));
            }
            Ok(value)
        };
        let re = real("real")?;
        let im = real("imaginary")?;
        if fields.next().is_some() {
            return Err(malformed("trailing fields after the amplitude"));
        }
        if amps[index].is_some() {
            return Err(ChannelError::DuplicateBasis {
                line: number,
                bits: bits.to_string(),
            });
        }
        amps[index] = Some(c64(re, im));
        found += 1;
    }
    if found != 16 {
        return Err(ChannelError::WrongCount { found });
    }
    let amps: Vec<Complex64> = amps.into_iter().map(|a| a.expect("counted")).collect();
    let state = StateVector::new(CHANNEL_LABELS.to_vec(), amps).expect("validated");
    if normalize {
        let normalized = state.normalized().map_err(|_| ChannelError::ZeroNorm)?;
        Channel::new(normalized)
    } else {
        Channel::new(state)
    }
}

/// Renders a channel in the file format, with full round-trip precision.
pub fn serialize_channel(channel: &Channel) -> String {
    let mut out = String::new();
    out.push_str("# four-qubit channel over qubits (3,4,5,6)\n");
    if let Some(name) = channel.name() {
        let _ = writeln!(out, "# name: {name}");
    }
    out.push_str("# bits re im\n");
    for (index, amp) in channel.amps().iter().enumerate() {
        let _ = writeln!(out, "{index:04b} {} {}", amp.re, amp.im);
    }
    out
}

/// Standard normal draw by the Box-Muller transform; one value per pair of
/// uniforms, so streams are easy to reproduce elsewhere.
fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    let u: f64 = rng.gen();
    let v: f64 = rng.gen();
    (-2.0 * (1.0 - u).ln()).sqrt() * (std::f64::consts::TAU * v).cos()
}

/// A deterministic normalized vector of `count` complex amplitudes with
/// standard-normal components, from a ChaCha8 stream seeded by `seed`.
pub fn random_amplitudes(seed: u64, count: usize) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut amps: Vec<Complex64> = (0..count)
        .map(|_| {
            let re = standard_normal(&mut rng);
            let im = standard_normal(&mut rng);
            c64(re, im)
        })
        .collect();
    let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        amps[0] = c64(1.0, 0.0);
        return amps;
    }
    for amp in &mut amps {
        *amp /= norm;
    }
    amps
}

/// A seeded random channel; the same seed always yields the same state.
pub fn random_channel(seed: u64) -> Channel {
    let state = StateVector::new(CHANNEL_LABELS.to_vec(), random_amplitudes(seed, 16))
        .expect("well formed");
    Channel::new(state)
        .expect("normalized by construction")
        .with_name(format!("random:{seed}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn name(s: &str) -> CatalogName {
        s.parse().unwrap()
    }

    #[test]
    fn yeo_chua_amplitudes() {
        let channel = catalog(&name("yeo-chua")).unwrap();
        let a = 0.5 * std::f64::consts::FRAC_1_SQRT_2;
        let signs = [
            (0b0000, 1.0),
            (0b0011, -1.0),
            (0b0101, -1.0),
            (0b0110, 1.0),
            (0b1001, 1.0),
            (0b1010, 1.0),
            (0b1100, 1.0),
            (0b1111, 1.0),
        ];
        for (index, amp) in channel.amps().iter().enumerate() {
            let expected = signs
                .iter()
                .find(|(i, _)| *i == index)
                .map_or(0.0, |(_, s)| s * a);
            assert_eq!(*amp, c64(expected, 0.0), "index {index:04b}");
        }
    }

    #[test]
    fn cnot_channel_amplitudes() {
        let channel = catalog(&name("cnot-channel")).unwrap();
        for (index, amp) in channel.amps().iter().enumerate() {
            let expected = match index {
                0b0000 | 0b0101 | 0b1011 | 0b1110 => 0.5,
                _ => 0.0,
            };
            assert_eq!(*amp, c64(expected, 0.0), "index {index:04b}");
        }
    }

    #[test]
    fn bell_pairs_one_one() {
        let channel = catalog(&name("bell-pairs:i=1,j=1")).unwrap();
        for (index, amp) in channel.amps().iter().enumerate() {
            let expected = match index {
                0b0000 | 0b0101 | 0b1010 | 0b1111 => 0.5,
                _ => 0.0,
            };
            assert!((amp - c64(expected, 0.0)).norm() < 1e-15, "index {index:04b}");
        }
    }

    #[test]
    fn catalog_channels_are_normalized() {
        let names = [
            name("yeo-chua"),
            name("ghz4"),
            name("w4"),
            name("cnot-channel"),
            name("bell-pairs:i=2,j=4"),
            name("partial-pair:theta=0.3"),
        ];
        for n in names {
            let channel = catalog(&n).unwrap();
            assert!((channel.state().norm() - 1.0).abs() < 1e-12, "{n}");
        }
    }

    #[test]
    fn catalog_name_round_trips_through_text() {
        let names = [
            name("yeo-chua"),
            name("bell-pairs:i=3,j=1"),
            name("partial-pair:theta=0.5235987755982988"),
        ];
        for n in names {
            assert_eq!(name(&n.to_string()), n);
        }
    }

    #[test]
    fn bad_names_and_parameters() {
        assert!(matches!(
            "nope".parse::<CatalogName>().unwrap_err(),
            ChannelError::UnknownName(_)
        ));
        assert!(matches!(
            "bell-pairs:i=5,j=1".parse::<CatalogName>().unwrap_err(),
            ChannelError::BadParameter(_)
        ));
        assert!(matches!(
            "ghz4:theta=0.5".parse::<CatalogName>().unwrap_err(),
            ChannelError::BadParameter(_)
        ));
        assert!(matches!(
            catalog(&CatalogName::PartialPair(0.0)).unwrap_err(),
            ChannelError::BadParameter(_)
        ));
        assert!(matches!(
            catalog(&CatalogName::PartialPair(std::f64::consts::FRAC_PI_2)).unwrap_err(),
            ChannelError::BadParameter(_)
        ));
    }

    #[test]
    fn partial_pair_at_quarter_pi_is_bell_pairs() {
        let a = catalog(&name("partial-pair:theta=0.7853981633974483")).unwrap();
        let b = catalog(&name("bell-pairs:i=1,j=1")).unwrap();
        for (x, y) in a.amps().iter().zip(b.amps()) {
            assert!((x - y).norm() < 1e-15);
        }
    }

    #[test]
    fn parse_reproduces_catalog_exactly() {
        let original = catalog(&name("yeo-chua")).unwrap();
        let text = serialize_channel(&original);
        let parsed = parse_channel(&text, false).unwrap();
        assert_eq!(parsed.amps(), original.amps());
    }

    #[test]
    fn parse_rejects_fifteen_lines() {
        let original = catalog(&name("yeo-chua")).unwrap();
        let text = serialize_channel(&original);
        let truncated: String = text
            .lines()
            .filter(|l| !l.starts_with("1111"))
            .map(|l| format!("{l}\n"))
            .collect();
        assert_eq!(
            parse_channel(&truncated, false).unwrap_err(),
            ChannelError::WrongCount { found: 15 }
        );
    }

    #[test]
    fn parse_rejects_duplicates_and_junk() {
        let mut text = serialize_channel(&catalog(&name("ghz4")).unwrap());
        text.push_str("0000 0.1 0\n");
        assert!(matches!(
            parse_channel(&text, false).unwrap_err(),
            ChannelError::DuplicateBasis { bits, .. } if bits == "0000"
        ));
        assert!(matches!(
            parse_channel("0000 not-a-number 0\n", false).unwrap_err(),
            ChannelError::Malformed { .. }
        ));
        assert!(matches!(
            parse_channel("00x0 0.5 0\n", false).unwrap_err(),
            ChannelError::Malformed { .. }
        ));
    }

    #[test]
    fn uniform_channel_is_normalized() {
        let lines: String = (0..16).map(|i| format!("{i:04b} 0.25 0\n")).collect();
        let channel = parse_channel(&lines, false).unwrap();
        assert!((channel.state().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unnormalized_requires_flag() {
        let lines: String = (0..16).map(|i| format!("{i:04b} 1 0\n")).collect();
        assert!(matches!(
            parse_channel(&lines, false).unwrap_err(),
            ChannelError::NotNormalized { .. }
        ));
        let channel = parse_channel(&lines, true).unwrap();
        assert!((channel.state().norm() - 1.0).abs() < 1e-12);
        assert_eq!(channel.amps()[0], c64(0.25, 0.0));
    }

    #[test]
    fn ghz_serialization_mentions_only_two_basis_states() {
        let text = serialize_channel(&catalog(&name("ghz4")).unwrap());
        let nonzero: Vec<&str> = text
            .lines()
            .filter(|l| !l.starts_with('#'))
            .filter(|l| !l.ends_with(" 0 0"))
            .collect();
        assert_eq!(nonzero.len(), 2);
        assert!(nonzero[0].starts_with("0000 0.7071067811865476"));
        assert!(nonzero[1].starts_with("1111 0.7071067811865476"));
    }

    #[test]
    fn round_trip_is_exact_on_random_channels() {
        for seed in 0..100 {
            let original = random_channel(seed);
            let rebuilt = parse_channel(&serialize_channel(&original), false).unwrap();
            for (a, b) in original.amps().iter().zip(rebuilt.amps()) {
                assert!((a - b).norm() < 1e-15, "seed {seed}");
            }
        }
    }

    #[test]
    fn random_channel_is_deterministic_and_normalized() {
        let a = random_channel(7);
        let b = random_channel(7);
        assert_eq!(a.amps(), b.amps());
        assert!((a.state().norm() - 1.0).abs() < 1e-12);
        let c = random_channel(8);
        assert_ne!(a.amps(), c.amps());
    }
}
