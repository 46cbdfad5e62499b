use num_complex::Complex64;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::numeric::{real, CMatrix, I, ZERO};

/// Below this many amplitudes operators are applied on the calling thread.
const PAR_THRESHOLD: usize = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Option<Pauli> {
        match (x, z) {
            (true, false) => Some(Pauli::X),
            (true, true) => Some(Pauli::Y),
            (false, true) => Some(Pauli::Z),
            (false, false) => None,
        }
    }

    /// Single-site product `a b = phase * letter`.
    pub fn mul(a: Option<Pauli>, b: Option<Pauli>) -> (Complex64, Option<Pauli>) {
        use Pauli::*;
        match (a, b) {
            (None, p) | (p, None) => (real(1.0), p),
            (Some(p), Some(q)) if p == q => (real(1.0), None),
            (Some(X), Some(Y)) => (I, Some(Z)),
            (Some(Y), Some(Z)) => (I, Some(X)),
            (Some(Z), Some(X)) => (I, Some(Y)),
            (Some(Y), Some(X)) => (-I, Some(Z)),
            (Some(Z), Some(Y)) => (-I, Some(X)),
            (Some(X), Some(Z)) => (-I, Some(Y)),
            _ => unreachable!(),
        }
    }
}

/// `coeff * prod_site letter(site)` with letters packed into bit masks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliString {
    pub coeff: Complex64,
    x: u64,
    z: u64,
}

impl PauliString {
    pub fn identity(coeff: Complex64) -> Self {
        Self { coeff, x: 0, z: 0 }
    }

    pub fn single(site: usize, p: Pauli) -> Self {
        Self::from_letters(real(1.0), [(site, p)])
    }

    /// Later letters on the same site multiply onto earlier ones.
    pub fn from_letters<It: IntoIterator<Item = (usize, Pauli)>>(coeff: Complex64, letters: It) -> Self {
        let mut s = Self::identity(coeff);
        for (site, p) in letters {
            s = s * Self::raw(site, p);
        }
        s
    }

    fn raw(site: usize, p: Pauli) -> Self {
        assert!(site < 64, "qubit index {site} beyond 64");
        let (x, z) = p.bits();
        Self { coeff: real(1.0), x: (x as u64) << site, z: (z as u64) << site }
    }

    pub fn letter(&self, site: usize) -> Option<Pauli> {
        Pauli::from_bits(self.x >> site & 1 == 1, self.z >> site & 1 == 1)
    }

    pub fn letters(&self) -> BTreeMap<usize, Pauli> {
        let support = self.support();
        (0..64)
            .filter(|k| support >> k & 1 == 1)
            .map(|k| (k, self.letter(k).expect("site in support")))
            .collect()
    }

    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    pub fn masks(&self) -> (u64, u64) {
        (self.x, self.z)
    }

    pub fn is_identity(&self) -> bool {
        self.support() == 0
    }

    pub fn adjoint(&self) -> Self {
        Self { coeff: self.coeff.conj(), ..*self }
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        let anti = (self.x & other.z).count_ones() + (self.z & other.x).count_ones();
        anti % 2 == 0
    }

    /// Image of basis state `b`: `P |b> = phase |b ^ x>`.
    #[inline]
    pub fn apply_basis(&self, b: u64) -> (u64, Complex64) {
        let y = self.x & self.z;
        let z_only = self.z & !self.x;
        // Y|up> = i|down>, Y|down> = -i|up>, Z|down> = -|down>
        let e = (y & b).count_ones() + 3 * (y & !b).count_ones() + 2 * (z_only & !b).count_ones();
        let phase = match e % 4 {
            0 => real(1.0),
            1 => I,
            2 => real(-1.0),
            _ => -I,
        };
        (b ^ self.x, self.coeff * phase)
    }
}

impl Mul for PauliString {
    type Output = PauliString;

    fn mul(self, rhs: Self) -> Self {
        let mut coeff = self.coeff * rhs.coeff;
        let support = self.support() | rhs.support();
        let (mut x, mut z) = (0u64, 0u64);
        let mut rest = support;
        while rest != 0 {
            let k = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let (phase, p) = Pauli::mul(self.letter(k), rhs.letter(k));
            coeff *= phase;
            if let Some(p) = p {
                let (px, pz) = p.bits();
                x |= (px as u64) << k;
                z |= (pz as u64) << k;
            }
        }
        Self { coeff, x, z }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.coeff)?;
        for (k, p) in self.letters() {
            write!(f, " {p:?}{k}")?;
        }
        Ok(())
    }
}

/// Sum of Pauli strings kept in canonical order with like terms merged.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PauliOp {
    terms: Vec<PauliString>,
}

impl PauliOp {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::from(PauliString::identity(real(1.0)))
    }

    pub fn scalar(c: Complex64) -> Self {
        Self::from(PauliString::identity(c))
    }

    pub fn x(site: usize) -> Self {
        Self::from(PauliString::single(site, Pauli::X))
    }

    pub fn y(site: usize) -> Self {
        Self::from(PauliString::single(site, Pauli::Y))
    }

    pub fn z(site: usize) -> Self {
        Self::from(PauliString::single(site, Pauli::Z))
    }

    /// `(X + iY) / 2`, raising down to up.
    pub fn sigma_plus(site: usize) -> Self {
        (Self::x(site) + Self::y(site).scale(I)).scale(real(0.5))
    }

    /// `(X - iY) / 2`.
    pub fn sigma_minus(site: usize) -> Self {
        (Self::x(site) - Self::y(site).scale(I)).scale(real(0.5))
    }

    pub fn from_terms<It: IntoIterator<Item = PauliString>>(terms: It) -> Self {
        let mut merged: BTreeMap<(u64, u64), Complex64> = BTreeMap::new();
        for t in terms {
            *merged.entry((t.x, t.z)).or_insert(ZERO) += t.coeff;
        }
        Self {
            terms: merged
                .into_iter()
                .filter(|(_, c)| *c != ZERO)
                .map(|((x, z), coeff)| PauliString { coeff, x, z })
                .collect(),
        }
    }

    pub fn terms(&self) -> &[PauliString] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_terms(self.terms.iter().map(|t| PauliString { coeff: t.coeff * c, ..*t }))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_terms(self.terms.iter().map(PauliString::adjoint))
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        &(self * other) + &(other * self)
    }

    /// Sum of absolute coefficients; bounds every matrix entry from above.
    pub fn l1_norm(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.norm()).sum()
    }

    /// Highest qubit touched, if any.
    pub fn max_site(&self) -> Option<usize> {
        let support = self.terms.iter().fold(0u64, |acc, t| acc | t.support());
        (support != 0).then(|| 63 - support.leading_zeros() as usize)
    }

    /// Applies the operator to a state vector of `2^n` amplitudes.
    pub fn apply(&self, input: &[Complex64]) -> Vec<Complex64> {
        let entry = |i: usize| {
            let mut acc = ZERO;
            for t in &self.terms {
                // P|b> lands on b ^ x, so the source of output i is i ^ x
                let src = i as u64 ^ t.x;
                let (_, phase) = t.apply_basis(src);
                acc += phase * input[src as usize];
            }
            acc
        };
        if input.len() >= PAR_THRESHOLD {
            (0..input.len()).into_par_iter().map(entry).collect()
        } else {
            (0..input.len()).map(entry).collect()
        }
    }

    /// Dense `2^n x 2^n` matrix.
    pub fn to_dense(&self, n_qubits: usize) -> CMatrix {
        let dim = 1usize << n_qubits;
        let mut m = CMatrix::zeros(dim, dim);
        for b in 0..dim {
            for t in &self.terms {
                let (r, v) = t.apply_basis(b as u64);
                m[(r as usize, b)] += v;
            }
        }
        m
    }
}

impl From<PauliString> for PauliOp {
    fn from(s: PauliString) -> Self {
        Self::from_terms([s])
    }
}

impl Add for &PauliOp {
    type Output = PauliOp;

    fn add(self, rhs: &PauliOp) -> PauliOp {
        PauliOp::from_terms(self.terms.iter().chain(&rhs.terms).copied())
    }
}

impl Sub for &PauliOp {
    type Output = PauliOp;

    fn sub(self, rhs: &PauliOp) -> PauliOp {
        self + &(-rhs)
    }
}

impl Neg for &PauliOp {
    type Output = PauliOp;

    fn neg(self) -> PauliOp {
        self.scale(real(-1.0))
    }
}

impl Mul for &PauliOp {
    type Output = PauliOp;

    fn mul(self, rhs: &PauliOp) -> PauliOp {
        PauliOp::from_terms(
            self.terms
                .iter()
                .flat_map(|a| rhs.terms.iter().map(move |b| *a * *b)),
        )
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for PauliOp {
            type Output = PauliOp;
            fn $f(self, rhs: PauliOp) -> PauliOp {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}
