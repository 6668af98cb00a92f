//! The reduced dynamical system on {a, b, c} x S^2.
//!
//! Rescaling all gaps by one factor and all relative velocities by another
//! leaves the collision order unchanged, so a trajectory between collisions
//! is characterized by the plane spanned by (p, q) plus the contact index.
//! This module implements that reduced map in two interchangeable forms: a
//! trigonometric one on angles (theta, phi) and a vectorial one on the
//! oriented plane normal, using only cross products.
//!
//! Unlike the physical system, the reduced map never separates: every state
//! has a successor (up to numerical breaks), which is what makes long orbit
//! statistics possible at any restitution coefficient.
//!
//! The angular step and the lift to full states are generic over
//! [`Scalar`]: near the octant corners the map's derivative is unbounded
//! (a corner is a triple collision), so verification runs that pass close
//! to a corner need more precision than binary64 to stay meaningful. The
//! public API works in `f64` and delegates to the generic kernels.

use serde::Serialize;
use thiserror::Error;

use crate::dynamics::{apply_collision, CollisionType, Restitution, SingularityKind};
use crate::math::{add, cross, dot, norm, normalize, scale, sub, V3};
use crate::scalar::{
    scaled_tol, Scalar, CORNER_TOL, DEGENERATE_TANGENT_TOL, PHI_SIGN_TOL, UNIT_NORM_TOL,
};

/// Reduced state, trigonometric form. `theta` fixes the contact point on the
/// octant (the gap vector up to scale), `phi` the direction of the
/// tangential velocity part; the sign of cos(phi) selects the successor
/// contact.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SphericalConfig {
    pub contact: CollisionType,
    pub theta: f64,
    pub phi: f64,
}

#[derive(Debug, Error, PartialEq)]
pub enum SphericalError {
    #[error("theta = {theta} outside the domain of contact {contact}")]
    ThetaOutOfDomain { contact: CollisionType, theta: f64 },
    #[error("phi = {0} outside (0, pi)")]
    PhiOutOfDomain(f64),
    #[error("tangential part of q has norm {0:e}; phi is undefined")]
    DegenerateTangent(f64),
    #[error("p must have exactly one zero component, found {0}")]
    WrongZeroPattern(usize),
    #[error("normal must have unit norm, got {0}")]
    NotUnitNorm(f64),
    #[error("normal violates the orientation convention for contact {0}")]
    WrongOrientation(CollisionType),
}

impl SphericalConfig {
    /// Validates the angle domains. theta = 0 is allowed only for contact a
    /// and theta = pi/2 only for contact c (the double-contact corners);
    /// everything else on the boundary is a triple contact.
    pub fn new(contact: CollisionType, theta: f64, phi: f64) -> Result<Self, SphericalError> {
        let half_pi = std::f64::consts::FRAC_PI_2;
        let lo_ok = if contact == CollisionType::A {
            theta >= 0.0
        } else {
            theta > 0.0
        };
        let hi_ok = if contact == CollisionType::C {
            theta <= half_pi
        } else {
            theta < half_pi
        };
        if !(lo_ok && hi_ok) || !theta.is_finite() {
            return Err(SphericalError::ThetaOutOfDomain { contact, theta });
        }
        if !(phi > 0.0 && phi < std::f64::consts::PI) {
            return Err(SphericalError::PhiOutOfDomain(phi));
        }
        Ok(Self {
            contact,
            theta,
            phi,
        })
    }
}

/// Reduced state, vectorial form: the oriented unit normal of the plane.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PlaneState {
    pub contact: CollisionType,
    pub normal: V3<f64>,
}

impl PlaneState {
    pub fn new(contact: CollisionType, normal: V3<f64>) -> Result<Self, SphericalError> {
        let n = norm(&normal);
        if (n - 1.0).abs() > UNIT_NORM_TOL {
            return Err(SphericalError::NotUnitNorm(n));
        }
        if normal[orientation_axis(contact)] < -UNIT_NORM_TOL {
            return Err(SphericalError::WrongOrientation(contact));
        }
        Ok(Self { contact, normal })
    }
}

/// Basis axis whose index equals the colliding gap (the face of the octant
/// the contact lives on).
#[inline]
fn face_axis<S: Scalar>(contact: CollisionType) -> V3<S> {
    let mut e = [S::ZERO; 3];
    e[contact.index()] = S::ONE;
    e
}

/// Index whose component of the plane normal is kept non-negative: y for
/// contact a, z for b, x for c.
#[inline]
pub fn orientation_axis(contact: CollisionType) -> usize {
    (contact.index() + 1) % 3
}

/// Unit gap vector of a contact configuration.
fn p_unit<S: Scalar>(contact: CollisionType, theta: S) -> V3<S> {
    let (st, ct) = theta.sin_cos();
    let z = S::ZERO;
    match contact {
        CollisionType::A => [z, ct, st],
        CollisionType::B => [st, z, ct],
        CollisionType::C => [ct, st, z],
    }
}

/// Meridian tangent at `p_unit`, paired with the face axis to span the
/// tangent plane.
fn e_theta<S: Scalar>(contact: CollisionType, theta: S) -> V3<S> {
    let (st, ct) = theta.sin_cos();
    let z = S::ZERO;
    match contact {
        CollisionType::A => [z, -st, ct],
        CollisionType::B => [ct, z, -st],
        CollisionType::C => [-st, ct, z],
    }
}

/// Unit tangential velocity of a configuration.
fn q_unit<S: Scalar>(contact: CollisionType, theta: S, phi: S) -> V3<S> {
    let (sp, cp) = phi.sin_cos();
    add(
        &scale(&e_theta(contact, theta), cp),
        &scale(&face_axis(contact), sp),
    )
}

/// Successor contact: cos(phi) > 0 moves to the cyclically next contact,
/// cos(phi) < 0 to the previous one.
pub fn successor_contact(contact: CollisionType, cos_phi_positive: bool) -> CollisionType {
    let i = contact.index();
    let j = if cos_phi_positive {
        (i + 1) % 3
    } else {
        (i + 2) % 3
    };
    CollisionType::from_index(j).unwrap()
}

/// Reads (theta, phi) off a contact configuration given the unit gap vector
/// and the unit tangential velocity. Two-argument arctangents keep the
/// extraction stable near the domain boundaries.
fn extract_angles<S: Scalar>(contact: CollisionType, p: &V3<S>, q: &V3<S>) -> (S, S) {
    let theta = match contact {
        CollisionType::A => p[2].atan2(p[1]),
        CollisionType::B => p[0].atan2(p[2]),
        CollisionType::C => p[1].atan2(p[0]),
    };
    let phi = dot(q, &face_axis(contact)).atan2(dot(q, &e_theta(contact, theta)));
    (theta, phi)
}

fn corner_check<S: Scalar>(contact: CollisionType, theta: S) -> Result<(), SingularityKind> {
    let tol: S = scaled_tol(CORNER_TOL);
    let lo_closed = contact == CollisionType::A;
    let hi_closed = contact == CollisionType::C;
    let lo_bad = if lo_closed { theta < -tol } else { theta < tol };
    let hi_bad = if hi_closed {
        theta > S::HALF_PI + tol
    } else {
        theta > S::HALF_PI - tol
    };
    if lo_bad || hi_bad {
        Err(SingularityKind::CornerHit)
    } else {
        Ok(())
    }
}

/// One step of the reduced map in the trigonometric form, generic over the
/// scalar. Returns the successor (contact, theta, phi).
pub fn step_trig_in<S: Scalar>(
    contact: CollisionType,
    theta: S,
    phi: S,
    r: Restitution,
) -> Result<(CollisionType, S, S), SingularityKind> {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    if cp.abs() < scaled_tol(PHI_SIGN_TOL) {
        return Err(SingularityKind::PhiAtBoundary);
    }
    let forward = cp > S::ZERO;
    let next = successor_contact(contact, forward);

    // Intersection of the plane with the landing face, already oriented into
    // the first octant.
    let z = S::ZERO;
    let p1_raw = match (contact, forward) {
        (CollisionType::A, true) => [ct * sp, z, cp],
        (CollisionType::A, false) => [st * sp, -cp, z],
        (CollisionType::B, true) => [cp, ct * sp, z],
        (CollisionType::B, false) => [z, st * sp, -cp],
        (CollisionType::C, true) => [z, cp, ct * sp],
        (CollisionType::C, false) => [-cp, z, st * sp],
    };
    let p1 = normalize(&p1_raw, S::from_f64(1e-300)).ok_or(SingularityKind::CornerHit)?;

    let kq = apply_collision(&q_unit(contact, theta, phi), next, r);
    let q1_raw = sub(&kq, &scale(&p1, dot(&kq, &p1)));
    let q1 = normalize(&q1_raw, scaled_tol(DEGENERATE_TANGENT_TOL))
        .ok_or(SingularityKind::PhiAtBoundary)?;

    let (theta1, phi1) = extract_angles(next, &p1, &q1);
    corner_check(next, theta1)?;
    Ok((next, theta1, phi1))
}

/// One step of the reduced map in the trigonometric form.
pub fn step_trig(c: &SphericalConfig, r: Restitution) -> Result<SphericalConfig, SingularityKind> {
    let (contact, theta, phi) = step_trig_in(c.contact, c.theta, c.phi, r)?;
    Ok(SphericalConfig {
        contact,
        theta,
        phi,
    })
}

/// One step of the reduced map in the vectorial form. Only cross products
/// and one collision matrix touch the state; the parenthesization matters
/// because the cross product is not associative.
pub fn step_vectorial(s: &PlaneState, r: Restitution) -> Result<PlaneState, SingularityKind> {
    let u = s.normal;
    let cos_phi = u[s.contact.index()];
    if cos_phi.abs() < PHI_SIGN_TOL {
        return Err(SingularityKind::PhiAtBoundary);
    }
    let next = successor_contact(s.contact, cos_phi > 0.0);

    // e_face ^ u recovers the gap direction, u ^ (e_face ^ u) the tangential
    // velocity with its orientation; the landing direction is u ^ e_face'.
    let own = face_axis::<f64>(s.contact);
    let q_dir = cross(&u, &cross(&own, &u));
    let p1_dir = cross(&u, &face_axis::<f64>(next));
    let ut = cross(&p1_dir, &apply_collision(&q_dir, next, r));
    let u1 = normalize(&ut, DEGENERATE_TANGENT_TOL).ok_or(SingularityKind::PhiAtBoundary)?;

    // Guard the excluded octant corners, same bands as the trigonometric path.
    let cfg = plane_to_config(&PlaneState {
        contact: next,
        normal: u1,
    });
    corner_check(next, cfg.theta)?;
    Ok(PlaneState {
        contact: next,
        normal: u1,
    })
}

/// Oriented unit normal of a configuration's plane: p ^ q, which satisfies
/// the orientation convention by construction.
pub fn plane_normal_in<S: Scalar>(contact: CollisionType, theta: S, phi: S) -> V3<S> {
    cross(&p_unit(contact, theta), &q_unit(contact, theta, phi))
}

/// Oriented unit normal of a configuration's plane.
pub fn config_to_plane(c: &SphericalConfig) -> PlaneState {
    PlaneState {
        contact: c.contact,
        normal: plane_normal_in(c.contact, c.theta, c.phi),
    }
}

/// Inverse of [`config_to_plane`].
pub fn plane_to_config(s: &PlaneState) -> SphericalConfig {
    let u = s.normal;
    let i = s.contact.index();
    // Component layout is cyclic: u[i] = cos(phi), u[i+1] = sin(theta)
    // sin(phi), u[i+2] = -cos(theta) sin(phi).
    let c1 = u[(i + 1) % 3];
    let c2 = u[(i + 2) % 3];
    let theta = c1.atan2(-c2);
    let phi = c1.hypot(c2).atan2(u[i]);
    SphericalConfig {
        contact: s.contact,
        theta,
        phi,
    }
}

/// Splits a full state with one zero gap into its reduced configuration, the
/// radial velocity component (in units of the tangential norm) and the gap
/// scale. Reconstruction via [`to_full_state`] assumes a unit tangential
/// part, the normalization the radial component is reported in.
pub fn from_full_state(
    p: V3<f64>,
    q: V3<f64>,
) -> Result<(SphericalConfig, f64, f64), SphericalError> {
    let zeros: Vec<usize> = (0..3).filter(|&i| p[i] == 0.0).collect();
    // The outer gaps may vanish together (pairs 1-2 and 3-4 in simultaneous
    // contact); that corner is read as contact a at theta = 0, matching the
    // a-before-c convention. Any other multiple-zero pattern is ill-posed.
    let contact = match zeros.as_slice() {
        [i] => CollisionType::from_index(*i).unwrap(),
        [0, 2] => CollisionType::A,
        _ => return Err(SphericalError::WrongZeroPattern(zeros.len())),
    };
    let scale_len = norm(&p);
    let pu = scale(&p, 1.0 / scale_len);
    let theta = match contact {
        CollisionType::A => pu[2].atan2(pu[1]),
        CollisionType::B => pu[0].atan2(pu[2]),
        CollisionType::C => pu[1].atan2(pu[0]),
    };
    let c_theta = dot(&q, &e_theta(contact, theta));
    let c_axis = dot(&q, &face_axis(contact));
    let c_radial = dot(&q, &pu);
    let tangential = c_theta.hypot(c_axis);
    if tangential < DEGENERATE_TANGENT_TOL {
        return Err(SphericalError::DegenerateTangent(tangential));
    }
    let phi = c_axis.atan2(c_theta);
    Ok((
        SphericalConfig {
            contact,
            theta,
            phi,
        },
        c_radial / tangential,
        scale_len,
    ))
}

/// Generic lift: p = scale * p_unit, q = cos(phi) e_theta + sin(phi) e_face
/// + radial * e_r, with unit tangential norm.
pub fn to_full_state_in<S: Scalar>(
    contact: CollisionType,
    theta: S,
    phi: S,
    radial: S,
    scale_len: S,
) -> (V3<S>, V3<S>) {
    let pu = p_unit(contact, theta);
    let q = add(&q_unit(contact, theta, phi), &scale(&pu, radial));
    (scale(&pu, scale_len), q)
}

/// Lifts a reduced configuration back to a full state with unit tangential
/// velocity.
pub fn to_full_state(c: &SphericalConfig, radial: f64, scale_len: f64) -> (V3<f64>, V3<f64>) {
    to_full_state_in(c.contact, c.theta, c.phi, radial, scale_len)
}

/// One recorded step of a reduced orbit.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct OrbitStep {
    pub index: usize,
    pub contact: CollisionType,
    pub theta: f64,
    pub phi: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OrbitTermination {
    Completed,
    NumericalSingularity {
        kind: SingularityKind,
        at_step: usize,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct ReducedOrbit {
    /// States after each map application, indices starting at 1.
    pub steps: Vec<OrbitStep>,
    /// Trailing phi values of the contact-b steps, oldest first.
    pub b_phi_samples: Vec<f64>,
    pub termination: OrbitTermination,
}

impl ReducedOrbit {
    pub fn contact_sequence(&self) -> Vec<CollisionType> {
        self.steps.iter().map(|s| s.contact).collect()
    }

    pub fn letters(&self) -> String {
        self.steps.iter().map(|s| s.contact.letter()).collect()
    }
}

/// Iterates the trigonometric map `n` times, keeping the full contact
/// sequence and the trailing `keep_last_b` contact-b phi samples.
/// Singularities terminate the orbit and are reported, never raised.
pub fn iterate(c0: &SphericalConfig, r: Restitution, n: usize, keep_last_b: usize) -> ReducedOrbit {
    let mut steps = Vec::with_capacity(n.min(1 << 20));
    let mut b_phis: std::collections::VecDeque<f64> = std::collections::VecDeque::new();
    let mut state = *c0;
    for k in 1..=n {
        match step_trig(&state, r) {
            Ok(next) => {
                if next.contact == CollisionType::B && keep_last_b > 0 {
                    if b_phis.len() == keep_last_b {
                        b_phis.pop_front();
                    }
                    b_phis.push_back(next.phi);
                }
                steps.push(OrbitStep {
                    index: k,
                    contact: next.contact,
                    theta: next.theta,
                    phi: next.phi,
                });
                state = next;
            }
            Err(kind) => {
                return ReducedOrbit {
                    steps,
                    b_phi_samples: b_phis.into(),
                    termination: OrbitTermination::NumericalSingularity { kind, at_step: k },
                };
            }
        }
    }
    ReducedOrbit {
        steps,
        b_phi_samples: b_phis.into(),
        termination: OrbitTermination::Completed,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SequenceVerdict {
    Ok,
    ViolatesNoRepeat,
    ViolatesAcaCac,
    ViolatesBGap,
}

/// Checks the structural rules every realizable collision sequence obeys:
/// no immediate repetition, no aca/cac, and another b within three steps of
/// every b (the last rule only where the window fits inside the word).
///
/// Note three consecutive non-b letters without repetition are necessarily
/// aca or cac, so the b-gap verdict is subsumed by the earlier rules; it is
/// kept for completeness of the contract.
pub fn validate_sequence(word: &[CollisionType]) -> SequenceVerdict {
    use CollisionType::{A, B, C};
    for w in word.windows(2) {
        if w[0] == w[1] {
            return SequenceVerdict::ViolatesNoRepeat;
        }
    }
    for w in word.windows(3) {
        if (w[0] == A && w[1] == C && w[2] == A) || (w[0] == C && w[1] == A && w[2] == C) {
            return SequenceVerdict::ViolatesAcaCac;
        }
    }
    for (k, &ck) in word.iter().enumerate() {
        if ck == B && k + 3 < word.len() && !word[k + 1..=k + 3].contains(&B) {
            return SequenceVerdict::ViolatesBGap;
        }
    }
    SequenceVerdict::Ok
}

/// True when the subword after the first b parses greedily into the blocks
/// ab, cb, acb, cab (an incomplete trailing block is accepted).
pub fn decomposes_into_blocks(word: &[CollisionType]) -> bool {
    use CollisionType::{A, B, C};
    let Some(first_b) = word.iter().position(|&c| c == B) else {
        return word.len() <= 2;
    };
    let tail = &word[first_b + 1..];
    let mut j = 0;
    while j < tail.len() {
        let rest = &tail[j..];
        match rest {
            [A, B, ..] | [C, B, ..] => j += 2,
            [A, C, B, ..] | [C, A, B, ..] => j += 3,
            // Incomplete block at the end of the recorded window.
            [A] | [C] | [A, C] | [C, A] => break,
            _ => return false,
        }
    }
    true
}
