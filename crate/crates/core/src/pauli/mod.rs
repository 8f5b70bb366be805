//! Signed-phase Pauli strings and sums.

pub(crate) mod kernel;
mod string;
mod sum;
mod text;

pub use string::{Letters, Pauli, PauliString, Phase};
pub use sum::{apply, commutator, expectation, expectation_mixed, multiply, string, PauliSum};
pub use text::{format_sum, parse_string, parse_sum};

impl std::str::FromStr for PauliSum {
    type Err = crate::Error;
    fn from_str(s: &str) -> crate::Result<Self> {
        parse_sum(s)
    }
}

impl std::str::FromStr for PauliString {
    type Err = crate::Error;
    fn from_str(s: &str) -> crate::Result<Self> {
        parse_string(s)
    }
}
