//! Small fixed-size vector/matrix helpers over any [`Scalar`].

use crate::scalar::Scalar;

pub type V3<S> = [S; 3];
pub type M3<S> = [[S; 3]; 3];

#[inline]
pub fn v3<S: Scalar>(x: f64, y: f64, z: f64) -> V3<S> {
    [S::from_f64(x), S::from_f64(y), S::from_f64(z)]
}

#[inline]
pub fn dot<S: Scalar>(a: &V3<S>, b: &V3<S>) -> S {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn cross<S: Scalar>(a: &V3<S>, b: &V3<S>) -> V3<S> {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub fn add<S: Scalar>(a: &V3<S>, b: &V3<S>) -> V3<S> {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub fn sub<S: Scalar>(a: &V3<S>, b: &V3<S>) -> V3<S> {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn scale<S: Scalar>(a: &V3<S>, s: S) -> V3<S> {
    [a[0] * s, a[1] * s, a[2] * s]
}

#[inline]
pub fn norm<S: Scalar>(a: &V3<S>) -> S {
    dot(a, a).sqrt()
}

/// Returns `None` when the norm is below `tol`.
pub fn normalize<S: Scalar>(a: &V3<S>, tol: S) -> Option<V3<S>> {
    let n = norm(a);
    if n < tol {
        None
    } else {
        Some(scale(a, S::ONE / n))
    }
}

#[inline]
pub fn mat_vec<S: Scalar>(m: &M3<S>, v: &V3<S>) -> V3<S> {
    [dot(&m[0], v), dot(&m[1], v), dot(&m[2], v)]
}

pub fn mat_mul<S: Scalar>(a: &M3<S>, b: &M3<S>) -> M3<S> {
    let mut out = [[S::ZERO; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
        }
    }
    out
}

pub fn identity<S: Scalar>() -> M3<S> {
    let mut m = [[S::ZERO; 3]; 3];
    m[0][0] = S::ONE;
    m[1][1] = S::ONE;
    m[2][2] = S::ONE;
    m
}

pub fn mat_trace<S: Scalar>(m: &M3<S>) -> S {
    m[0][0] + m[1][1] + m[2][2]
}

pub fn mat_det<S: Scalar>(m: &M3<S>) -> S {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Sum of the three principal 2x2 minors.
pub fn mat_minor_sum<S: Scalar>(m: &M3<S>) -> S {
    (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        + (m[0][0] * m[2][2] - m[0][2] * m[2][0])
        + (m[0][0] * m[1][1] - m[0][1] * m[1][0])
}
