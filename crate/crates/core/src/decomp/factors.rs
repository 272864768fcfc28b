//! ZYZ and SU(2) eigen factorizations of single-qubit unitaries.

use crate::error::DecompError;
use crate::gate::{dagger, det, mat_mul, max_deviation, scale, GateKind, Mat2, C64};

const DEGENERATE: f64 = 1e-12;

/// `U = e^{iα} RZ(β) RY(γ) RZ(δ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZyzFactors {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl ZyzFactors {
    pub fn of(u: &Mat2) -> Self {
        let alpha = det(u).arg() / 2.0;
        let v = scale(u, C64::from_polar(1.0, -alpha));
        let (c, s) = (v[0][0].norm(), v[1][0].norm());
        let gamma = 2.0 * s.atan2(c);
        let (beta, delta) = if s < DEGENERATE {
            (2.0 * v[1][1].arg(), 0.0)
        } else if c < DEGENERATE {
            (2.0 * v[1][0].arg(), 0.0)
        } else {
            let sum = 2.0 * v[1][1].arg();
            let diff = 2.0 * v[1][0].arg();
            ((sum + diff) / 2.0, (sum - diff) / 2.0)
        };
        ZyzFactors {
            alpha,
            beta,
            gamma,
            delta,
        }
    }

    pub fn matrix(&self) -> Mat2 {
        let m = mat_mul(
            &mat_mul(
                &GateKind::RotZ(self.beta).matrix(),
                &GateKind::RotY(self.gamma).matrix(),
            ),
            &GateKind::RotZ(self.delta).matrix(),
        );
        scale(&m, C64::from_polar(1.0, self.alpha))
    }

    /// Gates of `RZ(β) RY(γ) RZ(δ)` in circuit order.
    pub fn sequence(&self) -> [GateKind; 3] {
        [
            GateKind::RotZ(self.delta),
            GateKind::RotY(self.gamma),
            GateKind::RotZ(self.beta),
        ]
    }

    /// `(A, B, C)` in circuit order with `U = e^{iα} A X B X C` and `ABC = I`.
    pub fn abc(&self) -> ([GateKind; 2], [GateKind; 2], GateKind) {
        let a = [GateKind::RotY(self.gamma / 2.0), GateKind::RotZ(self.beta)];
        let b = [
            GateKind::RotZ(-(self.delta + self.beta) / 2.0),
            GateKind::RotY(-self.gamma / 2.0),
        ];
        let c = GateKind::RotZ((self.delta - self.beta) / 2.0);
        (a, b, c)
    }
}

/// `U = V D V†` with `D = diag(e^{iλ}, e^{-iλ})` and `D = (A† X A X)²` for `A = RZ(λ/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su2Factors {
    pub v: Mat2,
    pub lambda: f64,
}

impl Su2Factors {
    pub fn of(u: &Mat2) -> Result<Self, DecompError> {
        let d = (det(u) - 1.0).norm();
        if d > 1e-9 {
            return Err(DecompError::NotSpecialUnitary(d));
        }
        let lambda = (u[0][0].im.hypot(u[1][0].norm())).atan2(u[0][0].re);
        let ev = C64::from_polar(1.0, lambda);
        // Two candidate eigenvectors for e^{iλ}; take the better conditioned one.
        let p = [u[0][1], ev - u[0][0]];
        let q = [ev - u[1][1], u[1][0]];
        let (np, nq) = (
            p[0].norm_sqr() + p[1].norm_sqr(),
            q[0].norm_sqr() + q[1].norm_sqr(),
        );
        let v = if np.max(nq) < 1e-20 {
            crate::gate::identity()
        } else {
            let (w, n) = if np >= nq {
                (p, np.sqrt())
            } else {
                (q, nq.sqrt())
            };
            let (v0, v1) = (w[0] / n, w[1] / n);
            [[v0, -v1.conj()], [v1, v0.conj()]]
        };
        Ok(Su2Factors { v, lambda })
    }

    pub fn d(&self) -> Mat2 {
        GateKind::RotZ(-2.0 * self.lambda).matrix()
    }

    pub fn a(&self) -> GateKind {
        GateKind::RotZ(self.lambda / 2.0)
    }

    pub fn reconstruct(&self) -> Mat2 {
        mat_mul(&mat_mul(&self.v, &self.d()), &dagger(&self.v))
    }
}

/// Splits a unitary into `(e^{iα}, Ū)` with `Ū` special unitary.
pub fn split_phase(u: &Mat2) -> (f64, Mat2) {
    let alpha = det(u).arg() / 2.0;
    (alpha, scale(u, C64::from_polar(1.0, -alpha)))
}

pub fn approx_eq(a: &Mat2, b: &Mat2, tol: f64) -> bool {
    max_deviation(a, b) <= tol
}
