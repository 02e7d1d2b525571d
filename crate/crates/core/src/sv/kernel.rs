//! In-place strided update kernels over raw amplitude slices.
//!
//! For a one-qubit gate on qubit `q`, pair `i` in `[0, 2^(n-1))` touches
//! `s_i = floor(i / 2^q) * 2^(q+1) + (i mod 2^q)` and `s_i + 2^q`. For a
//! two-qubit gate on `p < q`, block `i` in `[0, 2^(n-2))` touches
//! `s_i, s_i + 2^p, s_i + 2^q, s_i + 2^p + 2^q` with
//! `s_i = floor(floor(i/2^p) / 2^(q-p-1)) * 2^(q+1) + (floor(i/2^p) mod 2^(q-p-1)) * 2^(p+1) + (i mod 2^p)`.
//!
//! Large slices take a chunked rayon path that visits exactly the same pairs
//! and blocks; each block's arithmetic is identical, so results do not depend
//! on the thread count.

use rayon::prelude::*;

use crate::circuits::gate::{mat4_swap_targets, Mat2, Mat4};
use crate::scalar::{Scalar, C};

/// Slices at least this long use the parallel path.
pub const PAR_MIN_LEN: usize = 1 << 16;

#[inline(always)]
fn mul2<T: Scalar>(u: &Mat2<T>, a: &mut C<T>, b: &mut C<T>) {
    let (x, y) = (*a, *b);
    *a = u[0][0] * x + u[0][1] * y;
    *b = u[1][0] * x + u[1][1] * y;
}

#[inline(always)]
fn mul4<T: Scalar>(u: &Mat4<T>, a: &mut C<T>, b: &mut C<T>, c: &mut C<T>, d: &mut C<T>) {
    let v = [*a, *b, *c, *d];
    let row = |r: usize| u[r][0] * v[0] + u[r][1] * v[1] + u[r][2] * v[2] + u[r][3] * v[3];
    *a = row(0);
    *b = row(1);
    *c = row(2);
    *d = row(3);
}

/// Serial one-qubit kernel, written directly in terms of `s_i`.
pub fn apply_1q_strided<T: Scalar>(amps: &mut [C<T>], u: &Mat2<T>, q: usize) {
    let stride = 1usize << q;
    let half = amps.len() / 2;
    for i in 0..half {
        let s = (i / stride) * (stride << 1) + (i % stride);
        let (x, y) = (amps[s], amps[s + stride]);
        amps[s] = u[0][0] * x + u[0][1] * y;
        amps[s + stride] = u[1][0] * x + u[1][1] * y;
    }
}

/// Serial two-qubit kernel for `p < q`, written directly in terms of `s_i`.
pub fn apply_2q_strided<T: Scalar>(amps: &mut [C<T>], u: &Mat4<T>, p: usize, q: usize) {
    debug_assert!(p < q);
    let (sp, sq) = (1usize << p, 1usize << q);
    let mid = 1usize << (q - p - 1);
    let quarter = amps.len() / 4;
    for i in 0..quarter {
        let ip = i / sp;
        let s = (ip / mid) * (sq << 1) + (ip % mid) * (sp << 1) + (i % sp);
        let idx = [s, s + sp, s + sq, s + sp + sq];
        let v = idx.map(|k| amps[k]);
        for (r, &k) in idx.iter().enumerate() {
            amps[k] = u[r][0] * v[0] + u[r][1] * v[1] + u[r][2] * v[2] + u[r][3] * v[3];
        }
    }
}

fn apply_1q_par<T: Scalar>(amps: &mut [C<T>], u: &Mat2<T>, q: usize) {
    let stride = 1usize << q;
    let chunks = amps.len() / (stride << 1);
    if chunks >= 64 {
        amps.par_chunks_mut(stride << 1).for_each(|chunk| {
            let (lo, hi) = chunk.split_at_mut(stride);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                mul2(u, a, b);
            }
        });
    } else {
        for chunk in amps.chunks_mut(stride << 1) {
            let (lo, hi) = chunk.split_at_mut(stride);
            lo.par_iter_mut()
                .zip(hi.par_iter_mut())
                .for_each(|(a, b)| mul2(u, a, b));
        }
    }
}

fn apply_2q_par<T: Scalar>(amps: &mut [C<T>], u: &Mat4<T>, p: usize, q: usize) {
    let (sp, sq) = (1usize << p, 1usize << q);
    for chunk in amps.chunks_mut(sq << 1) {
        let (lo, hi) = chunk.split_at_mut(sq);
        lo.par_chunks_mut(sp << 1)
            .zip(hi.par_chunks_mut(sp << 1))
            .for_each(|(l, h)| {
                let (l0, l1) = l.split_at_mut(sp);
                let (h0, h1) = h.split_at_mut(sp);
                for (((a, b), c), d) in l0.iter_mut().zip(l1.iter_mut()).zip(h0.iter_mut()).zip(h1.iter_mut()) {
                    mul4(u, a, b, c, d);
                }
            });
    }
}

/// `U` on qubit `q` of the state stored in `amps` (length a power of two).
/// No validation.
pub fn apply_1q_raw<T: Scalar>(amps: &mut [C<T>], u: &Mat2<T>, q: usize) {
    if amps.len() >= PAR_MIN_LEN {
        apply_1q_par(amps, u, q);
    } else {
        apply_1q_strided(amps, u, q);
    }
}

/// `U` on qubits `(p, q)` in local order `b(p) + 2 b(q)`. When `p > q` the
/// targets are swapped and `U` conjugated by the local bit swap. No validation.
pub fn apply_2q_raw<T: Scalar>(amps: &mut [C<T>], u: &Mat4<T>, p: usize, q: usize) {
    if p > q {
        let w = mat4_swap_targets(u);
        return apply_2q_raw(amps, &w, q, p);
    }
    if amps.len() >= PAR_MIN_LEN {
        apply_2q_par(amps, u, p, q);
    } else {
        apply_2q_strided(amps, u, p, q);
    }
}
