//! Diagonal fusion pre-pass.
//!
//! Two local rewrites on adjacent instructions, applied greedily left to right:
//! `X t; C-P(a) t; X t`, with each X bare or sharing the phase's controls, becomes `C-[e^{ia} P(-a)] t`, and consecutive controlled phases on the
//! same target with the same control set merge into one. Both rewrites are exact.

use crate::circuit::Instruction;
use crate::gate::GateKind;

/// An X on `mid`'s target, either bare or sharing `mid`'s control set.
fn is_flip_for(x: &Instruction, mid: &Instruction) -> bool {
    x.gate == GateKind::PauliX
        && x.target == mid.target
        && (x.controls.is_empty() || same_controls(x, mid))
}

fn same_controls(a: &Instruction, b: &Instruction) -> bool {
    a.controls.len() == b.controls.len() && a.controls.iter().all(|c| b.controls.contains(c))
}

fn try_flip(out: &mut Vec<Instruction>, src: &mut Vec<usize>) -> bool {
    let n = out.len();
    if n < 3 {
        return false;
    }
    let (x1, mid, x2) = (&out[n - 3], &out[n - 2], &out[n - 1]);
    let GateKind::Phase(a) = mid.gate else {
        return false;
    };
    if mid.controls.is_empty() || !is_flip_for(x1, mid) || !is_flip_for(x2, mid) {
        return false;
    }
    let mut fused = mid.clone();
    fused.gate = GateKind::Phase(-a);
    fused.global_phase += a;
    out.truncate(n - 3);
    let first = src[n - 3];
    src.truncate(n - 3);
    out.push(fused);
    src.push(first);
    true
}

fn try_merge(out: &mut Vec<Instruction>, src: &mut Vec<usize>) -> bool {
    let n = out.len();
    if n < 2 {
        return false;
    }
    let (a, b) = (&out[n - 2], &out[n - 1]);
    let (GateKind::Phase(pa), GateKind::Phase(pb)) = (a.gate, b.gate) else {
        return false;
    };
    if a.controls.is_empty() || a.target != b.target || !same_controls(a, b) {
        return false;
    }
    let mut fused = a.clone();
    fused.gate = GateKind::Phase(pa + pb);
    fused.global_phase += b.global_phase;
    out.truncate(n - 2);
    src.pop();
    out.push(fused);
    true
}

/// Returns the fused instructions and, for each, the index of the first source instruction it covers.
pub fn fuse_diagonals(instrs: &[Instruction]) -> (Vec<Instruction>, Vec<usize>) {
    let mut out: Vec<Instruction> = Vec::with_capacity(instrs.len());
    let mut src = Vec::with_capacity(instrs.len());
    for (k, i) in instrs.iter().enumerate() {
        out.push(i.clone());
        src.push(k);
        while try_flip(&mut out, &mut src) || try_merge(&mut out, &mut src) {}
    }
    (out, src)
}
