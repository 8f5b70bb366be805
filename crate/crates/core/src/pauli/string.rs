use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

/// Single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    /// `self * other = i^k * letter`.
    pub fn product(self, other: Pauli) -> (Phase, Pauli) {
        use Pauli::*;
        match (self, other) {
            (I, p) | (p, I) => (Phase::ONE, p),
            (X, X) | (Y, Y) | (Z, Z) => (Phase::ONE, I),
            (X, Y) => (Phase::I, Z),
            (Y, X) => (Phase::MINUS_I, Z),
            (Y, Z) => (Phase::I, X),
            (Z, Y) => (Phase::MINUS_I, X),
            (Z, X) => (Phase::I, Y),
            (X, Z) => (Phase::MINUS_I, Y),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Pauli> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    /// Whether the letter exchanges `|u>` and `|d>`.
    pub fn flips(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }
}

/// Power of `i`, stored mod 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_power(k: i64) -> Phase {
        Phase(k.rem_euclid(4) as u8)
    }

    pub fn power(self) -> u8 {
        self.0
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    pub fn conj(self) -> Phase {
        Phase((4 - self.0) % 4)
    }

    pub fn is_real(self) -> bool {
        self.0.is_multiple_of(2)
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

/// Map from qubit label to letter; identity letters are never stored.
pub type Letters = BTreeMap<String, Pauli>;

/// `phase * (tensor product of letters)`, identity on absent labels.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PauliString {
    phase: Phase,
    letters: Letters,
}

impl PauliString {
    pub fn identity() -> Self {
        PauliString::default()
    }

    pub fn new<S: Into<String>>(phase: Phase, letters: impl IntoIterator<Item = (S, Pauli)>) -> Self {
        let mut s = PauliString::identity();
        for (label, p) in letters {
            s = s.multiply(&PauliString::single(label, p));
        }
        s.phase = s.phase * phase;
        s
    }

    pub fn single(label: impl Into<String>, p: Pauli) -> Self {
        let mut letters = Letters::new();
        if p != Pauli::I {
            letters.insert(label.into(), p);
        }
        PauliString {
            phase: Phase::ONE,
            letters,
        }
    }

    pub fn from_letters(letters: Letters) -> Self {
        let letters = letters.into_iter().filter(|(_, p)| *p != Pauli::I).collect();
        PauliString {
            phase: Phase::ONE,
            letters,
        }
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    pub fn letters(&self) -> &Letters {
        &self.letters
    }

    pub fn letter(&self, label: &str) -> Pauli {
        self.letters.get(label).copied().unwrap_or(Pauli::I)
    }

    pub fn weight(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &str> {
        self.letters.keys().map(String::as_str)
    }

    /// Letters are Hermitian, so the string is Hermitian iff its phase is real.
    pub fn is_hermitian(&self) -> bool {
        self.phase.is_real()
    }

    pub fn adjoint(&self) -> Self {
        PauliString {
            phase: self.phase.conj(),
            letters: self.letters.clone(),
        }
    }

    /// Letterwise product with accumulated phase.
    pub fn multiply(&self, other: &PauliString) -> PauliString {
        let mut phase = self.phase * other.phase;
        let mut letters = self.letters.clone();
        for (label, &q) in &other.letters {
            let p = letters.get(label).copied().unwrap_or(Pauli::I);
            let (ph, r) = p.product(q);
            phase = phase * ph;
            if r == Pauli::I {
                letters.remove(label);
            } else {
                letters.insert(label.clone(), r);
            }
        }
        PauliString { phase, letters }
    }

    /// Two strings commute iff they differ (non-identically) on an even
    /// number of shared labels.
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let clashes = self
            .letters
            .iter()
            .filter(|(label, p)| matches!(other.letters.get(*label), Some(q) if q != *p))
            .count();
        clashes % 2 == 0
    }
}

impl std::ops::Mul for &PauliString {
    type Output = PauliString;
    fn mul(self, rhs: &PauliString) -> PauliString {
        self.multiply(rhs)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase.0 {
            0 => "",
            1 => "i*",
            2 => "-",
            _ => "-i*",
        };
        f.write_str(prefix)?;
        if self.letters.is_empty() {
            return f.write_str("I");
        }
        let body: Vec<String> = self
            .letters
            .iter()
            .map(|(l, p)| format!("{}{}", p.as_char(), l))
            .collect();
        f.write_str(&body.join("*"))
    }
}
