//! Text formats: sequence and fingerprint JSON, corner CSV.
//!
//! Rationals are always written as reduced `"p/q"` strings (`"n"` for
//! integers), so output is exact and a parse/serialize cycle is byte-stable.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pwl::{Corner, PiecewiseLinear};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::sequence::PeriodicSequence;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SequenceFile {
    period: String,
    motif: Vec<String>,
}

fn json_error(err: serde_json::Error) -> Error {
    Error::Format(format!("line {}, column {}: {err}", err.line(), err.column()))
}

/// Reads `{"period": "p/q", "motif": ["a/b", ...]}`.
pub fn parse_sequence(text: &str) -> Result<PeriodicSequence> {
    let file: SequenceFile = serde_json::from_str(text).map_err(json_error)?;
    let period = parse_rational(&file.period)?;
    let motif = file
        .motif
        .iter()
        .map(|p| parse_rational(p))
        .collect::<Result<Vec<_>>>()?;
    PeriodicSequence::new(period, motif)
}

pub fn write_sequence(seq: &PeriodicSequence) -> String {
    let file = SequenceFile {
        period: format_rational(seq.period()),
        motif: seq.motif().iter().map(format_rational).collect(),
    };
    let mut out = serde_json::to_string_pretty(&file).expect("plain data serializes");
    out.push('\n');
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionEntry {
    pub k: usize,
    pub corners: Vec<[String; 2]>,
}

impl FunctionEntry {
    pub fn new(k: usize, f: &PiecewiseLinear) -> Self {
        Self {
            k,
            corners: f
                .corners()
                .iter()
                .map(|c| [format_rational(&c.x), format_rational(&c.y)])
                .collect(),
        }
    }

    pub fn function(&self) -> Result<PiecewiseLinear> {
        let corners = self
            .corners
            .iter()
            .map(|[x, y]| Ok(Corner::new(parse_rational(x)?, parse_rational(y)?)))
            .collect::<Result<Vec<_>>>()?;
        PiecewiseLinear::from_corners(corners)
    }
}

/// On-disk form of a set of density functions and their areas.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FingerprintDocument {
    pub motif_size: usize,
    pub period: String,
    pub functions: Vec<FunctionEntry>,
    /// Area under each entry of `functions`, in the same order.
    pub rho: Vec<String>,
}

impl FingerprintDocument {
    pub fn new(motif_size: usize, period: &Rational, functions: &[(usize, PiecewiseLinear)]) -> Self {
        Self {
            motif_size,
            period: format_rational(period),
            functions: functions.iter().map(|(k, f)| FunctionEntry::new(*k, f)).collect(),
            rho: functions
                .iter()
                .map(|(_, f)| format_rational(&f.integral()))
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(json_error)
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("plain data serializes");
        out.push('\n');
        out
    }

    pub fn period(&self) -> Result<Rational> {
        parse_rational(&self.period)
    }

    /// All entries parsed into functions, keeping their `k`.
    pub fn functions(&self) -> Result<Vec<(usize, PiecewiseLinear)>> {
        self.functions
            .iter()
            .map(|e| Ok((e.k, e.function()?)))
            .collect()
    }

    pub fn function(&self, k: usize) -> Result<PiecewiseLinear> {
        self.functions
            .iter()
            .find(|e| e.k == k)
            .ok_or_else(|| Error::Format(format!("no function with k = {k}")))?
            .function()
    }

    /// Parses and rewrites every value, which puts the document in
    /// canonical form.
    pub fn canonicalize(&self) -> Result<Self> {
        let functions = self.functions()?;
        Ok(Self::new(self.motif_size, &self.period()?, &functions))
    }

    /// One row per corner: `k,x_num,x_den,y_num,y_den`.
    pub fn to_csv(&self) -> Result<String> {
        let mut out = String::from("k,x_num,x_den,y_num,y_den\n");
        for (k, f) in self.functions()? {
            for c in f.corners() {
                out.push_str(&format!(
                    "{k},{},{},{},{}\n",
                    c.x.numer(),
                    c.x.denom(),
                    c.y.numer(),
                    c.y.denom()
                ));
            }
        }
        Ok(out)
    }
}
