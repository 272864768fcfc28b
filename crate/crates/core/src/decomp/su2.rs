//! Constructions driven by a 2x2 matrix: CU(2), Network, SU(2), SU(2) Rewrite and Linear-Depth.

use super::factors::{split_phase, Su2Factors, ZyzFactors};
use super::toffoli::{rccx, rccx_dg, with_basis};
use super::vchain::mcx_dirty;
use super::Emitter;
use crate::circuit::QubitRef;
use crate::error::DecompError;
use crate::gate::{dagger, GateKind, Mat2};

/// Singly controlled `u` with two CNOTs; the phase of `u` lands on the control.
pub fn cu2(em: &mut Emitter, u: &Mat2, c: QubitRef, t: QubitRef) {
    let z = ZyzFactors::of(u);
    let (a, b, cc) = z.abc();
    em.gate(cc, t);
    em.cx(c, t);
    for g in b {
        em.gate(g, t);
    }
    em.cx(c, t);
    for g in a {
        em.gate(g, t);
    }
    em.gate(GateKind::Phase(z.alpha), c);
}

/// Singly controlled Pauli: one CNOT plus a basis change.
pub fn cu2_pauli(
    em: &mut Emitter,
    pauli: GateKind,
    c: QubitRef,
    t: QubitRef,
) -> Result<(), DecompError> {
    with_basis(em, pauli, t, |em| {
        em.cx(c, t);
        Ok(())
    })
}

/// AND cascade into clean `aux` (n - 1 lines), one CU(2) at the apex, mirrored uncompute.
pub fn network(
    em: &mut Emitter,
    u: &Mat2,
    controls: &[QubitRef],
    t: QubitRef,
    aux: &[QubitRef],
) -> Result<(), DecompError> {
    let n = controls.len();
    if n < 2 {
        return Err(DecompError::Unsupported {
            family: "Network",
            what: format!("{n} controls"),
        });
    }
    if aux.len() < n - 1 {
        return Err(DecompError::AuxCount {
            family: "Network",
            needed: n - 1,
            got: aux.len(),
        });
    }
    rccx(em, controls[0], controls[1], aux[0]);
    for j in 1..n - 1 {
        rccx(em, controls[j + 1], aux[j - 1], aux[j]);
    }
    cu2(em, u, aux[n - 2], t);
    for j in (1..n - 1).rev() {
        rccx_dg(em, controls[j + 1], aux[j - 1], aux[j]);
    }
    rccx_dg(em, controls[0], controls[1], aux[0]);
    Ok(())
}

fn emit_zyz(em: &mut Emitter, m: &Mat2, t: QubitRef) {
    for g in ZyzFactors::of(m).sequence() {
        em.gate(g, t);
    }
}

/// Ancilla-free `C^n U` for special-unitary `u`: `V (A† X A X)² V†` with the X gates
/// controlled by alternating halves of the control set.
pub fn su2(
    em: &mut Emitter,
    u: &Mat2,
    controls: &[QubitRef],
    t: QubitRef,
) -> Result<(), DecompError> {
    let f = Su2Factors::of(u)?;
    let n = controls.len();
    match n {
        0 => {
            emit_zyz(em, u, t);
            return Ok(());
        }
        1 => {
            cu2(em, u, controls[0], t);
            return Ok(());
        }
        _ => {}
    }
    let (g0, g1) = controls.split_at(n / 2);
    let mut b0 = g1.to_vec();
    b0.sort();
    let mut b1 = g0.to_vec();
    b1.sort();
    let a = f.a();
    emit_zyz(em, &dagger(&f.v), t);
    for _ in 0..2 {
        mcx_dirty(em, g1, t, &b1)?;
        em.gate(a, t);
        mcx_dirty(em, g0, t, &b0)?;
        em.gate(a.inverse(), t);
    }
    emit_zyz(em, &f.v, t);
    Ok(())
}

/// `C^n H` or `C^n P(θ)` (with optional extra phase) using one clean line `a`.
pub fn su2_rewrite(
    em: &mut Emitter,
    gate: GateKind,
    global_phase: f64,
    controls: &[QubitRef],
    t: QubitRef,
    a: QubitRef,
) -> Result<(), DecompError> {
    if let (GateKind::Phase(theta), true) = (gate, global_phase == 0.0) {
        let mut all = controls.to_vec();
        all.push(t);
        return su2(em, &GateKind::RotZ(-2.0 * theta).matrix(), &all, a);
    }
    let u = crate::gate::phased_matrix(&gate, global_phase);
    let (phi, ubar) = split_phase(&u);
    su2(em, &ubar, controls, t)?;
    if phi != 0.0 {
        su2(em, &GateKind::RotZ(-2.0 * phi).matrix(), controls, a)?;
    }
    Ok(())
}

/// `C^k P(φ)` without auxiliary lines: `C^k RZ(φ)` then `C^{k-1} P(φ/2)` on the last control.
pub fn mc_phase(
    em: &mut Emitter,
    phi: f64,
    controls: &[QubitRef],
    t: QubitRef,
) -> Result<(), DecompError> {
    if phi == 0.0 {
        return Ok(());
    }
    match controls.split_last() {
        None => {
            em.gate(GateKind::Phase(phi), t);
            Ok(())
        }
        Some((&last, rest)) => {
            su2(em, &GateKind::RotZ(phi).matrix(), controls, t)?;
            mc_phase(em, phi / 2.0, rest, last)
        }
    }
}

/// Ancilla-free `C^n U` for any unitary: the special-unitary part through [`su2`], the phase
/// through an [`mc_phase`] ladder over the controls. Quadratic CNOT count.
pub fn linear_depth(
    em: &mut Emitter,
    u: &Mat2,
    controls: &[QubitRef],
    t: QubitRef,
) -> Result<(), DecompError> {
    match controls.len() {
        0 => {
            emit_zyz(em, u, t);
            Ok(())
        }
        1 => {
            cu2(em, u, controls[0], t);
            Ok(())
        }
        n => {
            let (alpha, ubar) = split_phase(u);
            su2(em, &ubar, controls, t)?;
            mc_phase(em, alpha, &controls[..n - 1], controls[n - 1])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::factors::ZyzFactors;
    use crate::gate::phased_matrix;
    use crate::sim::{standard_lines, verify_decomposition, AuxInit};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn random_u2(rng: &mut ChaCha8Rng) -> Mat2 {
        ZyzFactors {
            alpha: rng.gen_range(-PI..PI),
            beta: rng.gen_range(-PI..PI),
            gamma: rng.gen_range(0.0..PI),
            delta: rng.gen_range(-PI..PI),
        }
        .matrix()
    }

    /// Verifies against an arbitrary matrix by expressing it as `e^{iα} RZ RY RZ` on one line.
    fn check_matrix(
        u: &Mat2,
        n: usize,
        out: &[crate::circuit::Instruction],
        aux: usize,
        init: AuxInit,
    ) -> bool {
        let (c, t, a) = standard_lines(n, aux);
        let z = ZyzFactors::of(u);
        let ideal: Vec<_> = z
            .sequence()
            .iter()
            .enumerate()
            .map(|(k, g)| {
                let i = crate::circuit::Instruction::controlled(*g, &c, t);
                if k == 0 {
                    i.with_phase(z.alpha)
                } else {
                    i
                }
            })
            .collect();
        let mut mains = c;
        mains.push(t);
        crate::sim::verify_lines(&ideal, out, &mains, &a, init, 1e-9)
            .unwrap()
            .equal
    }

    #[test]
    fn cu2_random_unitaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let u = random_u2(&mut rng);
            let (c, t, _) = standard_lines(1, 0);
            let mut em = Emitter::new(None);
            cu2(&mut em, &u, c[0], t);
            assert_eq!(em.cnot_count(), 2);
            assert!(check_matrix(&u, 1, &em.out, 0, AuxInit::Clean));
        }
    }

    #[test]
    fn cu2_sqrt_x_with_phase() {
        let u = phased_matrix(&GateKind::RotX(PI / 2.0), PI / 4.0);
        let (c, t, _) = standard_lines(1, 0);
        let mut em = Emitter::new(None);
        cu2(&mut em, &u, c[0], t);
        let r = verify_decomposition(
            GateKind::RotX(PI / 2.0),
            PI / 4.0,
            1,
            &em.out,
            0,
            AuxInit::Clean,
            1e-12,
        )
        .unwrap();
        assert!(r.equal);
    }

    #[test]
    fn network_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for n in 2..=5 {
            let u = random_u2(&mut rng);
            let (c, t, a) = standard_lines(n, n - 1);
            let mut em = Emitter::new(None);
            network(&mut em, &u, &c, t, &a).unwrap();
            assert_eq!(em.cnot_count(), 6 * n - 4);
            assert!(check_matrix(&u, n, &em.out, n - 1, AuxInit::Clean), "n={n}");
        }
    }

    #[test]
    fn su2_random_and_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 1..=6 {
            let (_, u) = split_phase(&random_u2(&mut rng));
            let (c, t, _) = standard_lines(n, 0);
            let mut em = Emitter::new(None);
            su2(&mut em, &u, &c, t).unwrap();
            assert!(check_matrix(&u, n, &em.out, 0, AuxInit::Clean), "n={n}");
        }
        let (c, t, _) = standard_lines(10, 0);
        let mut em = Emitter::new(None);
        su2(&mut em, &GateKind::RotY(0.3).matrix(), &c, t).unwrap();
        assert_eq!(em.cnot_count(), 136);
    }

    #[test]
    fn su2_rejects_hadamard() {
        let (c, t, _) = standard_lines(2, 0);
        let mut em = Emitter::new(None);
        assert!(su2(&mut em, &GateKind::Hadamard.matrix(), &c, t).is_err());
    }

    #[test]
    fn rewrite_phase_and_hadamard() {
        for n in 1..=4 {
            let (c, t, a) = standard_lines(n, 1);
            let mut em = Emitter::new(None);
            su2_rewrite(&mut em, GateKind::Phase(1.3), 0.0, &c, t, a[0]).unwrap();
            assert!(
                verify_decomposition(
                    GateKind::Phase(1.3),
                    0.0,
                    n,
                    &em.out,
                    1,
                    AuxInit::Clean,
                    1e-10
                )
                .unwrap()
                .equal
            );
            let mut em = Emitter::new(None);
            su2_rewrite(&mut em, GateKind::Hadamard, 0.0, &c, t, a[0]).unwrap();
            assert!(
                verify_decomposition(
                    GateKind::Hadamard,
                    0.0,
                    n,
                    &em.out,
                    1,
                    AuxInit::Clean,
                    1e-10
                )
                .unwrap()
                .equal
            );
            let mut em = Emitter::new(None);
            su2_rewrite(&mut em, GateKind::Phase(0.4), 0.9, &c, t, a[0]).unwrap();
            assert!(
                verify_decomposition(
                    GateKind::Phase(0.4),
                    0.9,
                    n,
                    &em.out,
                    1,
                    AuxInit::Clean,
                    1e-10
                )
                .unwrap()
                .equal
            );
        }
    }

    #[test]
    fn linear_depth_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for n in 0..=6 {
            let u = random_u2(&mut rng);
            let (c, t, _) = standard_lines(n, 0);
            let mut em = Emitter::new(None);
            linear_depth(&mut em, &u, &c, t).unwrap();
            assert!(check_matrix(&u, n, &em.out, 0, AuxInit::Clean), "n={n}");
        }
    }

    #[test]
    fn mc_phase_ladder() {
        for k in 0..=5 {
            let (c, t, _) = standard_lines(k, 0);
            let mut em = Emitter::new(None);
            mc_phase(&mut em, 1.1, &c, t).unwrap();
            assert!(
                verify_decomposition(
                    GateKind::Phase(1.1),
                    0.0,
                    k,
                    &em.out,
                    0,
                    AuxInit::Clean,
                    1e-10
                )
                .unwrap()
                .equal
            );
        }
    }
}
