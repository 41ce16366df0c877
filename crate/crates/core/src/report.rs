use std::fmt;

use crate::f2::BitVector;

/// Outcome of an exhaustive check. `passed` is true exactly when no
/// counterexample was found.
#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub passed: bool,
    pub counterexample: Option<Counterexample>,
    /// Number of elementary cases examined (meaning depends on the verifier).
    pub checked: u64,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn pass(checked: u64) -> Self {
        VerificationReport {
            passed: true,
            counterexample: None,
            checked,
            notes: Vec::new(),
        }
    }

    pub fn fail(counterexample: Counterexample, checked: u64) -> Self {
        VerificationReport {
            passed: false,
            counterexample: Some(counterexample),
            checked,
            notes: Vec::new(),
        }
    }

    pub fn from_outcome(counterexample: Option<Counterexample>, checked: u64) -> Self {
        match counterexample {
            Some(c) => Self::fail(c, checked),
            None => Self::pass(checked),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "result={} checked={}",
            if self.passed { "pass" } else { "fail" },
            self.checked
        )?;
        if let Some(c) = &self.counterexample {
            writeln!(f, "counterexample {c}")?;
        }
        for n in &self.notes {
            writeln!(f, "note {n}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Counterexample {
    /// A difference vector whose first nonzero coordinate is at (1-based)
    /// position `i` but whose codeword prefix of length `j` is too light.
    Prefix {
        i: usize,
        j: usize,
        difference: BitVector,
        achieved: usize,
        required: f64,
    },
    /// Two messages agreeing before position `i` (1-based first difference)
    /// whose codeword prefixes of length `j` are too close.
    MessagePair {
        i: usize,
        j: usize,
        x: BitVector,
        y: BitVector,
        achieved: usize,
        required: f64,
    },
    /// Two points in different subsets that are too close.
    CrossPair {
        subsets: (usize, usize),
        points: (BitVector, BitVector),
        achieved: usize,
        required: usize,
    },
    /// A point that appears in two subsets.
    Overlap { subsets: (usize, usize), point: BitVector },
    /// A subset that is smaller than the advertised `T`.
    Undersized { subset: usize, size: usize, required: usize },
    /// A codeword of a plain block code below the required weight.
    LightCodeword {
        message: BitVector,
        achieved: usize,
        required: usize,
    },
    /// A profile inequality `lhs <= rhs` that failed at (`i`, `j`).
    Inequality {
        i: usize,
        j: Option<usize>,
        lhs: f64,
        rhs: f64,
    },
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Counterexample::Prefix {
                i,
                j,
                difference,
                achieved,
                required,
            } => write!(
                f,
                "i={i} j={j} x={difference} weight={achieved} required={required}"
            ),
            Counterexample::MessagePair {
                i,
                j,
                x,
                y,
                achieved,
                required,
            } => write!(
                f,
                "i={i} j={j} x={x} y={y} distance={achieved} required={required}"
            ),
            Counterexample::CrossPair {
                subsets,
                points,
                achieved,
                required,
            } => write!(
                f,
                "sets={},{} x={} y={} distance={achieved} required={required}",
                subsets.0, subsets.1, points.0, points.1
            ),
            Counterexample::Overlap { subsets, point } => {
                write!(f, "sets={},{} shared={point}", subsets.0, subsets.1)
            }
            Counterexample::Undersized {
                subset,
                size,
                required,
            } => write!(f, "set={subset} size={size} required={required}"),
            Counterexample::LightCodeword {
                message,
                achieved,
                required,
            } => write!(f, "x={message} weight={achieved} required={required}"),
            Counterexample::Inequality { i, j, lhs, rhs } => match j {
                Some(j) => write!(f, "i={i} j={j} lhs={lhs} rhs={rhs}"),
                None => write!(f, "i={i} lhs={lhs} rhs={rhs}"),
            },
        }
    }
}
