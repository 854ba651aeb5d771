//! Pauli strings over the crate's qubit ordering.
//!
//! Letter `q` of a string acts on qubit `q`, so the first character of the
//! printed form belongs to the most significant bit of a basis index.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PauliOp {
    I,
    X,
    Y,
    Z,
}

impl PauliOp {
    pub fn to_char(self) -> char {
        match self {
            PauliOp::I => 'I',
            PauliOp::X => 'X',
            PauliOp::Y => 'Y',
            PauliOp::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Result<PauliOp> {
        match c {
            'I' => Ok(PauliOp::I),
            'X' => Ok(PauliOp::X),
            'Y' => Ok(PauliOp::Y),
            'Z' => Ok(PauliOp::Z),
            other => Err(Error::Parse(format!("invalid Pauli letter {other:?}"))),
        }
    }
}

/// A tensor product of Pauli letters with a real coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliString {
    pub ops: Vec<PauliOp>,
    pub coefficient: f64,
}

impl PauliString {
    pub fn new(ops: Vec<PauliOp>, coefficient: f64) -> PauliString {
        PauliString { ops, coefficient }
    }

    pub fn identity(n: usize) -> PauliString {
        PauliString::new(vec![PauliOp::I; n], 1.0)
    }

    pub fn num_qubits(&self) -> usize {
        self.ops.len()
    }

    pub fn is_identity(&self) -> bool {
        self.ops.iter().all(|&op| op == PauliOp::I)
    }

    /// Number of non-identity letters.
    pub fn support(&self) -> usize {
        self.ops.iter().filter(|&&op| op != PauliOp::I).count()
    }

    /// Letters as a compact label like "IZXY".
    pub fn label(&self) -> String {
        self.ops.iter().map(|op| op.to_char()).collect()
    }

    pub fn parse(label: &str, coefficient: f64) -> Result<PauliString> {
        let ops = label.chars().map(PauliOp::from_char).collect::<Result<Vec<_>>>()?;
        Ok(PauliString::new(ops, coefficient))
    }

    /// Bit masks over basis-index space for fast application:
    /// `flip` marks X/Y positions, `sign` marks Y/Z positions, and `num_y`
    /// counts Y letters (each contributes a factor of i).
    pub fn masks(&self) -> PauliMasks {
        let n = self.ops.len();
        let mut flip = 0usize;
        let mut sign = 0usize;
        let mut num_y = 0u32;
        for (q, &op) in self.ops.iter().enumerate() {
            let bit = 1usize << (n - 1 - q);
            match op {
                PauliOp::I => {}
                PauliOp::X => flip |= bit,
                PauliOp::Y => {
                    flip |= bit;
                    sign |= bit;
                    num_y += 1;
                }
                PauliOp::Z => sign |= bit,
            }
        }
        PauliMasks { flip, sign, num_y }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} * {}", self.coefficient, self.label())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PauliMasks {
    pub flip: usize,
    pub sign: usize,
    pub num_y: u32,
}
