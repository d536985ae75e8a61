//! Seed modes shared by every subcommand.

use std::fmt;
use std::str::FromStr;

use hhlattice::lattice::{random_positive, SeedValues};
use hhlattice::scalar::{Rational, Scalar};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `ones`, `symbolic`, `random[:N]` or comma-separated values.
#[derive(Clone, Debug, PartialEq)]
pub enum SeedMode {
    Ones,
    Symbolic,
    Random(u64),
    Explicit(Vec<Rational>),
}

impl SeedMode {
    pub fn is_symbolic(&self) -> bool {
        matches!(self, SeedMode::Symbolic)
    }

    /// Lattice seed values; `None` for symbolic mode.
    pub fn lattice(&self) -> Option<SeedValues> {
        match self {
            SeedMode::Ones => Some(SeedValues::Ones),
            SeedMode::Random(s) => Some(SeedValues::Random(*s)),
            SeedMode::Explicit(v) => Some(SeedValues::Explicit(v.clone())),
            SeedMode::Symbolic => None,
        }
    }

    /// `count` numeric initial values of a sequence.
    pub fn sequence_init(&self, count: usize) -> Result<Vec<Rational>, String> {
        match self {
            SeedMode::Ones => Ok(vec![Rational::one(); count]),
            SeedMode::Random(s) => {
                let mut rng = ChaCha8Rng::seed_from_u64(*s);
                Ok((0..count).map(|_| random_positive(&mut rng)).collect())
            }
            SeedMode::Explicit(v) if v.len() == count => Ok(v.clone()),
            SeedMode::Explicit(v) => Err(format!("expected {count} seed values, got {}", v.len())),
            SeedMode::Symbolic => Err("symbolic seeds have no numeric values".into()),
        }
    }
}

impl fmt::Display for SeedMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeedMode::Ones => f.write_str("ones"),
            SeedMode::Symbolic => f.write_str("symbolic"),
            SeedMode::Random(s) => write!(f, "random:{s}"),
            SeedMode::Explicit(v) => {
                let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

impl FromStr for SeedMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "ones" => Ok(SeedMode::Ones),
            "symbolic" => Ok(SeedMode::Symbolic),
            // drawn here so the value can be recorded
            "random" => Ok(SeedMode::Random(rand::random())),
            _ => {
                if let Some(n) = s.strip_prefix("random:") {
                    return n.parse().map(SeedMode::Random).map_err(|_| format!("bad random seed {n:?}"));
                }
                s.split(',')
                    .map(|v| Rational::parse_value(v.trim()).map_err(|e| format!("bad seed value {v:?}: {e}")))
                    .collect::<Result<_, _>>()
                    .map(SeedMode::Explicit)
            }
        }
    }
}
