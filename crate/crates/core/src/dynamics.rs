//! Event-driven dynamics of four inelastic point particles on a line.
//!
//! The main representation works in relative coordinates: `p` holds the three
//! gaps between adjacent particles, `q` their time derivatives. Between
//! collisions the state moves along a straight line `p(t) = p(0) + t q(0)` in
//! the first octant; when a gap reaches zero the corresponding collision
//! matrix is applied to `q`. An independent absolute-coordinate simulation
//! ([`simulate_absolute`]) serves as cross-validation oracle.

use serde::Serialize;
use thiserror::Error;

use crate::math::{mat_vec, M3, V3};
use crate::scalar::{
    scaled_tol, Scalar, SIMULTANEITY_REL_TOL, TIME_UNDERFLOW_REL_TOL, TRIPLE_COLLISION_REL_TOL,
};

/// Restitution coefficient, strictly inside (0, 1).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Restitution(f64);

impl Restitution {
    pub fn new(r: f64) -> Result<Self, DynamicsError> {
        if r.is_finite() && r > 0.0 && r < 1.0 {
            Ok(Self(r))
        } else {
            Err(DynamicsError::InvalidRestitution(r))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Which adjacent pair collides: `A` is pair 1-2 (gap 1), `B` pair 2-3
/// (gap 2), `C` pair 3-4 (gap 3).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CollisionType {
    A,
    B,
    C,
}

pub const COLLISION_TYPES: [CollisionType; 3] =
    [CollisionType::A, CollisionType::B, CollisionType::C];

impl CollisionType {
    /// Zero-based gap index (a -> 0, b -> 1, c -> 2).
    #[inline]
    pub fn index(self) -> usize {
        match self {
            CollisionType::A => 0,
            CollisionType::B => 1,
            CollisionType::C => 2,
        }
    }

    pub fn from_index(i: usize) -> Option<Self> {
        COLLISION_TYPES.get(i).copied()
    }

    pub fn letter(self) -> char {
        match self {
            CollisionType::A => 'a',
            CollisionType::B => 'b',
            CollisionType::C => 'c',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c {
            'a' => Some(CollisionType::A),
            'b' => Some(CollisionType::B),
            'c' => Some(CollisionType::C),
            _ => None,
        }
    }

    /// Adjacent pairs share a particle; three particles meeting at once is
    /// ill-posed. a/c are the only non-adjacent combination.
    pub fn adjacent(self, other: Self) -> bool {
        self.index().abs_diff(other.index()) == 1
    }
}

impl std::fmt::Display for CollisionType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// The 3x3 velocity-update matrix of one collision type at restitution `r`.
///
/// The colliding component flips to `-r` times itself; the neighbouring
/// relative velocities pick up `(1+r)/2` of it.
pub fn collision_matrix<S: Scalar>(kind: CollisionType, r: Restitution) -> M3<S> {
    let z = S::ZERO;
    let one = S::ONE;
    let rs = S::from_f64(r.value());
    // Entries are formed in S so extended-precision runs see the exact
    // (1+r)/2 of their own arithmetic, not an f64-rounded constant.
    let mr = -rs;
    let h = (one + rs) / S::from_f64(2.0);
    match kind {
        CollisionType::A => [[mr, z, z], [h, one, z], [z, z, one]],
        CollisionType::B => [[one, h, z], [z, mr, z], [z, h, one]],
        CollisionType::C => [[one, z, z], [z, one, h], [z, z, mr]],
    }
}

/// Applies one collision to a relative-velocity vector.
pub fn apply_collision<S: Scalar>(q: &V3<S>, kind: CollisionType, r: Restitution) -> V3<S> {
    mat_vec(&collision_matrix(kind, r), q)
}

#[derive(Debug, Error, PartialEq)]
pub enum DynamicsError {
    #[error("restitution must lie strictly inside (0, 1), got {0}")]
    InvalidRestitution(f64),
    #[error("gap {index} is negative: {value}")]
    NegativeGap { index: usize, value: f64 },
    #[error("more than one gap is zero; the configuration is not a binary contact")]
    MultipleZeroGaps,
    #[error("two adjacent gaps vanish together: triple collision, dynamics ill-posed")]
    TripleCollision,
}

/// State between collisions: gaps `p` (componentwise >= 0), relative
/// velocities `q`, current time, and the contact created by the previous
/// collision when exactly one gap is zero.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RelativeState<S> {
    pub p: V3<S>,
    pub q: V3<S>,
    pub t: S,
    pub contact: Option<CollisionType>,
}

impl<S: Scalar> RelativeState<S> {
    /// Builds an initial state at t = 0, validating the gap invariants
    /// (componentwise >= 0, at most one zero) and inferring the contact.
    pub fn initial(p: V3<S>, q: V3<S>) -> Result<Self, DynamicsError> {
        let mut contact = None;
        for (i, &gap) in p.iter().enumerate() {
            if gap < S::ZERO {
                return Err(DynamicsError::NegativeGap {
                    index: i,
                    value: gap.to_f64(),
                });
            }
            if gap == S::ZERO {
                if contact.is_some() {
                    return Err(DynamicsError::MultipleZeroGaps);
                }
                contact = CollisionType::from_index(i);
            }
        }
        Ok(Self {
            p,
            q,
            t: S::ZERO,
            contact,
        })
    }
}

/// One recorded collision. For a simultaneous a/c pair two events share the
/// same time, a first; `q_after` of the second event carries the composed
/// update.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CollisionEvent<S> {
    pub index: usize,
    pub time: S,
    #[serde(rename = "type")]
    pub kind: CollisionType,
    pub p_after: V3<S>,
    pub q_after: V3<S>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SingularityKind {
    TimeUnderflow,
    PhiAtBoundary,
    CornerHit,
}

impl SingularityKind {
    pub fn name(self) -> &'static str {
        match self {
            SingularityKind::TimeUnderflow => "TimeUnderflow",
            SingularityKind::PhiAtBoundary => "PhiAtBoundary",
            SingularityKind::CornerHit => "CornerHit",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Termination {
    MaxCollisions,
    Separation,
    NumericalSingularity(SingularityKind),
    TripleCollision,
}

#[derive(Clone, Debug, Serialize)]
pub struct Trajectory<S> {
    pub events: Vec<CollisionEvent<S>>,
    pub termination: Termination,
}

impl<S: Scalar> Trajectory<S> {
    pub fn type_sequence(&self) -> Vec<CollisionType> {
        self.events.iter().map(|e| e.kind).collect()
    }

    pub fn letters(&self) -> String {
        self.events.iter().map(|e| e.kind.letter()).collect()
    }
}

/// Break thresholds of the event loop. All are relative: the simultaneity
/// band scales with the candidate collision time and the triple-collision
/// band with the largest gap, so a deeply collapsed configuration (all
/// scales shrunk by many orders of magnitude) is treated the same as a
/// fresh one.
#[derive(Clone, Copy, Debug)]
pub struct SimParams<S> {
    /// |dt_a - dt_c| <= simultaneity_rel * dt marks candidates simultaneous.
    pub simultaneity_rel: S,
    /// Adjacent gaps both <= triple_rel * max_gap terminate the trajectory.
    pub triple_rel: S,
    /// dt < tol * max(1, t) terminates with TimeUnderflow; `None` disables
    /// the break (event times may then stop being distinguishable while the
    /// gap/velocity arithmetic stays accurate).
    pub time_underflow_rel: Option<S>,
}

impl<S: Scalar> Default for SimParams<S> {
    fn default() -> Self {
        Self {
            simultaneity_rel: scaled_tol(SIMULTANEITY_REL_TOL),
            triple_rel: scaled_tol(TRIPLE_COLLISION_REL_TOL),
            time_underflow_rel: Some(scaled_tol(TIME_UNDERFLOW_REL_TOL)),
        }
    }
}

/// Next scheduled collision of a state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NextCollision<S> {
    pub kind: CollisionType,
    pub dt: S,
    pub simultaneous_ac: bool,
}

/// Finds the earliest strictly positive time at which a gap reaches zero.
///
/// Returns `Ok(None)` when no gap is closing (the particles separate
/// forever) and `Err(TripleCollision)` when adjacent gaps vanish together
/// within the simultaneity band, or the state already holds two adjacent
/// near-zero gaps.
pub fn next_collision<S: Scalar>(
    s: &RelativeState<S>,
    params: &SimParams<S>,
) -> Result<Option<NextCollision<S>>, DynamicsError> {
    let gap_scale = s.p[0].max(s.p[1]).max(s.p[2]);
    let triple_band = params.triple_rel * gap_scale;
    if (s.p[0] <= triple_band && s.p[1] <= triple_band)
        || (s.p[1] <= triple_band && s.p[2] <= triple_band)
    {
        return Err(DynamicsError::TripleCollision);
    }

    let mut candidates: [Option<S>; 3] = [None; 3];
    let mut dt_min: Option<S> = None;
    for (i, slot) in candidates.iter_mut().enumerate() {
        if s.q[i] < S::ZERO && s.p[i] > S::ZERO {
            let dt = -s.p[i] / s.q[i];
            *slot = Some(dt);
            dt_min = Some(match dt_min {
                Some(m) if m < dt => m,
                _ => dt,
            });
        }
    }
    let Some(dt_min) = dt_min else {
        return Ok(None);
    };

    let band = params.simultaneity_rel * dt_min;
    let hit = |i: usize| candidates[i].is_some_and(|dt| dt - dt_min <= band);
    let (ha, hb, hc) = (hit(0), hit(1), hit(2));
    if (ha && hb) || (hb && hc) {
        return Err(DynamicsError::TripleCollision);
    }
    let (kind, simultaneous_ac) = if ha && hc {
        (CollisionType::A, true)
    } else if ha {
        (CollisionType::A, false)
    } else if hb {
        (CollisionType::B, false)
    } else {
        (CollisionType::C, false)
    };
    Ok(Some(NextCollision {
        kind,
        dt: dt_min,
        simultaneous_ac,
    }))
}

/// Outcome of one event-loop step.
#[derive(Clone, Debug)]
pub enum StepResult<S> {
    /// The state advanced through one collision (two for a simultaneous a/c
    /// pair, recorded a first at the shared time).
    Advanced {
        state: RelativeState<S>,
        events: Vec<CollisionEvent<S>>,
    },
    Terminated(Termination),
}

/// Advances the state to its next collision. The colliding gap is assigned
/// zero exactly after transport; event indices start at `next_index`.
pub fn step<S: Scalar>(
    s: &RelativeState<S>,
    r: Restitution,
    next_index: usize,
    params: &SimParams<S>,
) -> StepResult<S> {
    let next = match next_collision(s, params) {
        Err(DynamicsError::TripleCollision) => {
            return StepResult::Terminated(Termination::TripleCollision)
        }
        Err(_) => unreachable!("next_collision only fails with TripleCollision"),
        Ok(None) => return StepResult::Terminated(Termination::Separation),
        Ok(Some(n)) => n,
    };

    if let Some(tol) = params.time_underflow_rel {
        if next.dt < tol * S::ONE.max(s.t.abs()) {
            return StepResult::Terminated(Termination::NumericalSingularity(
                SingularityKind::TimeUnderflow,
            ));
        }
    }

    let t = s.t + next.dt;
    let mut p = crate::math::add(&s.p, &crate::math::scale(&s.q, next.dt));
    let kinds: &[CollisionType] = if next.simultaneous_ac {
        &[CollisionType::A, CollisionType::C]
    } else {
        &[next.kind]
    };
    for k in kinds {
        p[k.index()] = S::ZERO;
    }

    let mut q = s.q;
    let mut events = Vec::with_capacity(kinds.len());
    for (off, &k) in kinds.iter().enumerate() {
        q = apply_collision(&q, k, r);
        events.push(CollisionEvent {
            index: next_index + off,
            time: t,
            kind: k,
            p_after: p,
            q_after: q,
        });
    }

    let contact = if kinds.len() == 1 {
        Some(kinds[0])
    } else {
        None
    };
    StepResult::Advanced {
        state: RelativeState { p, q, t, contact },
        events,
    }
}

/// Runs the event loop from `(p0, q0)` until `max_collisions`, separation or
/// a singular configuration. Failures are reported through the termination
/// field, never by aborting.
///
/// Expects gaps componentwise nonnegative with at most one zero (see
/// [`RelativeState::initial`] for a validating constructor).
pub fn simulate_with<S: Scalar>(
    p0: V3<S>,
    q0: V3<S>,
    r: Restitution,
    max_collisions: usize,
    params: &SimParams<S>,
) -> Trajectory<S> {
    let mut state = RelativeState {
        p: p0,
        q: q0,
        t: S::ZERO,
        contact: None,
    };
    let mut events = Vec::new();
    while events.len() < max_collisions {
        match step(&state, r, events.len() + 1, params) {
            StepResult::Advanced {
                state: s,
                events: ev,
            } => {
                events.extend(ev);
                state = s;
            }
            StepResult::Terminated(t) => {
                return Trajectory {
                    events,
                    termination: t,
                };
            }
        }
    }
    Trajectory {
        events,
        termination: Termination::MaxCollisions,
    }
}

/// Binary64 simulation with the default break thresholds.
pub fn simulate(
    p0: V3<f64>,
    q0: V3<f64>,
    r: Restitution,
    max_collisions: usize,
) -> Trajectory<f64> {
    simulate_with(p0, q0, r, max_collisions, &SimParams::default())
}

/// Independent oracle in absolute coordinates: four positions and four
/// velocities, the pairwise collision law applied directly. Events are
/// emitted in relative coordinates for comparison against [`simulate`].
pub fn simulate_absolute(
    x0: [f64; 4],
    v0: [f64; 4],
    r: Restitution,
    max_collisions: usize,
) -> Trajectory<f64> {
    let params = SimParams::<f64>::default();
    let mut x = x0;
    let mut v = v0;
    let mut t = 0.0;
    let mut events: Vec<CollisionEvent<f64>> = Vec::new();

    while events.len() < max_collisions {
        let gaps = [x[1] - x[0], x[2] - x[1], x[3] - x[2]];
        let gap_scale = gaps[0].max(gaps[1]).max(gaps[2]);
        // Gaps are differences of O(|x|) positions, so a collapsing cluster
        // drives them into the cancellation floor where they carry too few
        // significant bits to order candidate collisions; stop before
        // emitting unresolvable events. (The relative representation has no
        // such limit: its gaps are primary quantities.)
        let resolution = 1e-11 * x.iter().fold(0.0_f64, |m, xi| m.max(xi.abs()));
        if gaps.iter().any(|&g| g > 0.0 && g < resolution) {
            return Trajectory {
                events,
                termination: Termination::NumericalSingularity(SingularityKind::TimeUnderflow),
            };
        }
        let band = params.triple_rel * gap_scale;
        if (gaps[0] <= band && gaps[1] <= band) || (gaps[1] <= band && gaps[2] <= band) {
            return Trajectory {
                events,
                termination: Termination::TripleCollision,
            };
        }

        let mut dt_min = f64::INFINITY;
        let mut cand = [None::<f64>; 3];
        for i in 0..3 {
            let rel = v[i + 1] - v[i];
            if rel < 0.0 && gaps[i] > 0.0 {
                let dt = -gaps[i] / rel;
                cand[i] = Some(dt);
                dt_min = dt_min.min(dt);
            }
        }
        if !dt_min.is_finite() {
            return Trajectory {
                events,
                termination: Termination::Separation,
            };
        }
        let hit =
            |i: usize| cand[i].is_some_and(|dt| dt - dt_min <= params.simultaneity_rel * dt_min);
        let (ha, hb, hc) = (hit(0), hit(1), hit(2));
        if (ha && hb) || (hb && hc) {
            return Trajectory {
                events,
                termination: Termination::TripleCollision,
            };
        }
        if let Some(tol) = params.time_underflow_rel {
            if dt_min < tol * 1.0_f64.max(t.abs()) {
                return Trajectory {
                    events,
                    termination: Termination::NumericalSingularity(SingularityKind::TimeUnderflow),
                };
            }
        }

        t += dt_min;
        for i in 0..4 {
            x[i] += dt_min * v[i];
        }
        let mut pairs: Vec<usize> = (0..3).filter(|&i| hit(i)).collect();
        pairs.sort_unstable();
        for &i in &pairs {
            // Pin the colliding pair to a shared position to kill drift.
            let mid = 0.5 * (x[i] + x[i + 1]);
            x[i] = mid;
            x[i + 1] = mid;
            let (vi, vj) = (v[i], v[i + 1]);
            let rr = r.value();
            v[i] = ((1.0 - rr) * vi + (1.0 + rr) * vj) / 2.0;
            v[i + 1] = ((1.0 + rr) * vi + (1.0 - rr) * vj) / 2.0;
            events.push(CollisionEvent {
                index: events.len() + 1,
                time: t,
                kind: CollisionType::from_index(i).unwrap(),
                p_after: [x[1] - x[0], x[2] - x[1], x[3] - x[2]],
                q_after: [v[1] - v[0], v[2] - v[1], v[3] - v[2]],
            });
        }
    }
    Trajectory {
        events,
        termination: Termination::MaxCollisions,
    }
}
