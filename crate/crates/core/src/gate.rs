//! Single-qubit gate set and 2x2 matrix helpers.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use num_complex::Complex64;

pub type C64 = Complex64;

/// Row-major 2x2 complex matrix.
pub type Mat2 = [[C64; 2]; 2];

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    PauliX,
    PauliY,
    PauliZ,
    RotX(f64),
    RotY(f64),
    RotZ(f64),
    Phase(f64),
    Hadamard,
}

/// Coarse grouping used by decomposition selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateClass {
    Pauli,
    Rotation,
    Phase,
    Hadamard,
}

impl GateKind {
    pub fn class(&self) -> GateClass {
        match self {
            GateKind::PauliX | GateKind::PauliY | GateKind::PauliZ => GateClass::Pauli,
            GateKind::RotX(_) | GateKind::RotY(_) | GateKind::RotZ(_) => GateClass::Rotation,
            GateKind::Phase(_) => GateClass::Phase,
            GateKind::Hadamard => GateClass::Hadamard,
        }
    }

    pub fn matrix(&self) -> Mat2 {
        let i = C64::i();
        match *self {
            GateKind::PauliX => [[ZERO, ONE], [ONE, ZERO]],
            GateKind::PauliY => [[ZERO, -i], [i, ZERO]],
            GateKind::PauliZ => [[ONE, ZERO], [ZERO, -ONE]],
            GateKind::RotX(t) => {
                let (c, s) = ((t / 2.0).cos(), (t / 2.0).sin());
                [
                    [C64::new(c, 0.0), C64::new(0.0, -s)],
                    [C64::new(0.0, -s), C64::new(c, 0.0)],
                ]
            }
            GateKind::RotY(t) => {
                let (c, s) = ((t / 2.0).cos(), (t / 2.0).sin());
                [
                    [C64::new(c, 0.0), C64::new(-s, 0.0)],
                    [C64::new(s, 0.0), C64::new(c, 0.0)],
                ]
            }
            GateKind::RotZ(t) => [
                [C64::from_polar(1.0, -t / 2.0), ZERO],
                [ZERO, C64::from_polar(1.0, t / 2.0)],
            ],
            GateKind::Phase(t) => [[ONE, ZERO], [ZERO, C64::from_polar(1.0, t)]],
            GateKind::Hadamard => {
                let h = C64::new(FRAC_1_SQRT_2, 0.0);
                [[h, h], [h, -h]]
            }
        }
    }

    pub fn inverse(&self) -> GateKind {
        match *self {
            GateKind::RotX(t) => GateKind::RotX(-t),
            GateKind::RotY(t) => GateKind::RotY(-t),
            GateKind::RotZ(t) => GateKind::RotZ(-t),
            GateKind::Phase(t) => GateKind::Phase(-t),
            g => g,
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match *self {
            GateKind::RotX(t) | GateKind::RotY(t) | GateKind::RotZ(t) | GateKind::Phase(t) => {
                vec![t]
            }
            _ => Vec::new(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GateKind::PauliX => "x",
            GateKind::PauliY => "y",
            GateKind::PauliZ => "z",
            GateKind::RotX(_) => "rx",
            GateKind::RotY(_) => "ry",
            GateKind::RotZ(_) => "rz",
            GateKind::Phase(_) => "p",
            GateKind::Hadamard => "h",
        }
    }

    /// Inverse of [`GateKind::name`] plus params. `None` for unknown names or bad arity.
    pub fn from_name(name: &str, params: &[f64]) -> Option<GateKind> {
        let one = || {
            if params.len() == 1 {
                Some(params[0])
            } else {
                None
            }
        };
        let none = |g| if params.is_empty() { Some(g) } else { None };
        match name {
            "x" => none(GateKind::PauliX),
            "y" => none(GateKind::PauliY),
            "z" => none(GateKind::PauliZ),
            "h" => none(GateKind::Hadamard),
            "rx" => one().map(GateKind::RotX),
            "ry" => one().map(GateKind::RotY),
            "rz" => one().map(GateKind::RotZ),
            "p" => one().map(GateKind::Phase),
            _ => None,
        }
    }

    /// True for parameterized gates whose angle is exactly zero.
    pub fn is_zero_angle(&self) -> bool {
        matches!(self, GateKind::RotX(t) | GateKind::RotY(t) | GateKind::RotZ(t) | GateKind::Phase(t) if *t == 0.0)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.params().first() {
            Some(t) => write!(f, "{}({})", self.name(), t),
            None => f.write_str(self.name()),
        }
    }
}

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, v) in row.iter_mut().enumerate() {
            *v = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

pub fn dagger(a: &Mat2) -> Mat2 {
    [
        [a[0][0].conj(), a[1][0].conj()],
        [a[0][1].conj(), a[1][1].conj()],
    ]
}

pub fn det(a: &Mat2) -> C64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

pub fn scale(a: &Mat2, s: C64) -> Mat2 {
    [[a[0][0] * s, a[0][1] * s], [a[1][0] * s, a[1][1] * s]]
}

pub fn identity() -> Mat2 {
    [[ONE, ZERO], [ZERO, ONE]]
}

pub fn max_deviation(a: &Mat2, b: &Mat2) -> f64 {
    let mut m: f64 = 0.0;
    for r in 0..2 {
        for c in 0..2 {
            m = m.max((a[r][c] - b[r][c]).norm());
        }
    }
    m
}

/// Matrix of `e^{i phase} * gate`.
pub fn phased_matrix(gate: &GateKind, phase: f64) -> Mat2 {
    scale(&gate.matrix(), C64::from_polar(1.0, phase))
}

/// `(H̄, φ)` with `H = e^{iφ} H̄` and `H̄ = RX(π)·RY(π/2)` special unitary.
pub fn hadamard_su2() -> (Mat2, f64) {
    (
        mat_mul(
            &GateKind::RotX(PI).matrix(),
            &GateKind::RotY(PI / 2.0).matrix(),
        ),
        PI / 2.0,
    )
}
