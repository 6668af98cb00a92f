//! Self-similar collapse analysis for periodic collision words.
//!
//! A word fixes the order in which collisions are assumed to occur. Over one
//! period the relative velocities are multiplied by the word matrix (the
//! product of collision matrices, last collision leftmost), so candidate
//! self-similar data take the velocities along an eigenvector. Positions are
//! then tracked with one free coordinate `x`: every transport-and-collide
//! step is affine in `x`, the shape map after a full period is a Möbius map,
//! and its positive fixed points are the candidate self-similar shapes. The
//! candidate is realizable only if every scheduled collision is the one that
//! actually happens, which reduces to sign conditions on the intermediate
//! velocities and gaps.

use serde::Serialize;
use thiserror::Error;

use crate::dynamics::{collision_matrix, CollisionType, Restitution};
use crate::math::{
    cross, identity, mat_det, mat_minor_sum, mat_mul, mat_trace, mat_vec, norm, M3, V3,
};
use crate::scalar::Scalar;
use crate::spherical::{validate_sequence, SequenceVerdict};

/// Finite collision pattern over {a, b, c}, read cyclically when it names a
/// period.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(into = "String")]
pub struct CollisionWord(Vec<CollisionType>);

#[derive(Debug, Error, PartialEq)]
pub enum WordParseError {
    #[error("collision words use only the letters a, b, c; found {0:?}")]
    BadLetter(char),
    #[error("collision word must be nonempty")]
    Empty,
}

impl CollisionWord {
    pub fn parse(s: &str) -> Result<Self, WordParseError> {
        if s.is_empty() {
            return Err(WordParseError::Empty);
        }
        s.chars()
            .map(|c| CollisionType::from_letter(c).ok_or(WordParseError::BadLetter(c)))
            .collect::<Result<Vec<_>, _>>()
            .map(Self)
    }

    pub fn letters(&self) -> &[CollisionType] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Structural rules applied around the wrap, i.e. to the infinite
    /// repetition of the word.
    pub fn cyclic_verdict(&self) -> SequenceVerdict {
        let n = self.0.len();
        let wrapped: Vec<CollisionType> = self
            .0
            .iter()
            .chain(self.0.iter().take(3.min(n)))
            .copied()
            .collect();
        let head = validate_sequence(&wrapped);
        if head != SequenceVerdict::Ok {
            return head;
        }
        // The b-gap rule on a cycle: every b sees another b within three
        // steps, indices mod n.
        use CollisionType::B;
        for (k, &c) in self.0.iter().enumerate() {
            if c == B && !(1..=3).any(|d| self.0[(k + d) % n] == B) {
                return SequenceVerdict::ViolatesBGap;
            }
        }
        SequenceVerdict::Ok
    }
}

impl std::fmt::Display for CollisionWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for c in &self.0 {
            write!(f, "{}", c.letter())?;
        }
        Ok(())
    }
}

impl From<CollisionWord> for String {
    fn from(w: CollisionWord) -> String {
        w.to_string()
    }
}

impl std::str::FromStr for CollisionWord {
    type Err = WordParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

/// Product of collision matrices over the word, last collision leftmost, so
/// that `q(after one period) = M q(0)`.
pub fn word_matrix_in<S: Scalar>(w: &CollisionWord, r: Restitution) -> M3<S> {
    let mut m = identity::<S>();
    for &k in w.letters() {
        m = mat_mul(&collision_matrix(k, r), &m);
    }
    m
}

pub fn word_matrix(w: &CollisionWord, r: Restitution) -> M3<f64> {
    word_matrix_in(w, r)
}

/// Coefficients (c2, c1, c0) of the characteristic polynomial
/// lambda^3 + c2 lambda^2 + c1 lambda + c0 of the word matrix.
pub fn char_poly(w: &CollisionWord, r: Restitution) -> (f64, f64, f64) {
    let m = word_matrix(w, r);
    (-mat_trace(&m), mat_minor_sum(&m), -mat_det(&m))
}

/// Real eigenvalue branches of a word matrix, ordered by value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Upper,
    Middle,
    Lower,
}

impl std::str::FromStr for Branch {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "upper" => Ok(Branch::Upper),
            "middle" => Ok(Branch::Middle),
            "lower" => Ok(Branch::Lower),
            other => Err(format!("unknown branch {other:?}; use upper|middle|lower")),
        }
    }
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Branch::Upper => "upper",
            Branch::Middle => "middle",
            Branch::Lower => "lower",
        })
    }
}

/// Real spectrum of a word matrix at one restitution coefficient.
#[derive(Clone, Debug, Serialize)]
pub struct EigenBranches {
    /// Real eigenvalues, descending. Labels follow the descending order;
    /// coinciding values are both labeled middle.
    pub real: Vec<(Branch, f64)>,
    /// Modulus of the complex-conjugate pair when only one root is real.
    pub complex_pair_modulus: Option<f64>,
}

impl EigenBranches {
    pub fn eigenvalue(&self, branch: Branch) -> Option<f64> {
        self.real
            .iter()
            .find(|(b, _)| *b == branch)
            .map(|&(_, v)| v)
    }

    /// Whether the branch eigenvalue strictly dominates every other
    /// eigenvalue in absolute value (complex pair included). Velocities
    /// iterated under the word matrix converge to the branch eigenvector
    /// only in that case.
    pub fn is_dominant(&self, branch: Branch) -> bool {
        let Some(lam) = self.eigenvalue(branch) else {
            return false;
        };
        let mag = lam.abs();
        self.real
            .iter()
            .filter(|(b, _)| *b != branch)
            .all(|&(_, v)| mag > v.abs())
            && self.complex_pair_modulus.is_none_or(|m| mag > m)
    }
}

/// Roots of x^3 + c2 x^2 + c1 x + c0, closed form with one Newton polish per
/// root. The discriminant decides the real-vs-complex casework.
fn solve_cubic(c2: f64, c1: f64, c0: f64) -> (Vec<f64>, Option<f64>) {
    let p = c1 - c2 * c2 / 3.0;
    let q = 2.0 * c2.powi(3) / 27.0 - c2 * c1 / 3.0 + c0;
    let shift = -c2 / 3.0;
    let disc = -4.0 * p.powi(3) - 27.0 * q * q;

    let polish = |x: f64| {
        let f = ((x + c2) * x + c1) * x + c0;
        let fp = (3.0 * x + 2.0 * c2) * x + c1;
        if fp != 0.0 {
            x - f / fp
        } else {
            x
        }
    };

    if disc >= 0.0 {
        let mut roots = if p >= 0.0 {
            // Degenerate: p and q vanish together, triple root.
            vec![shift; 3]
        } else {
            let m = 2.0 * (-p / 3.0).sqrt();
            let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
            let phase = arg.acos() / 3.0;
            (0..3)
                .map(|k| m * (phase - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() + shift)
                .collect()
        };
        for rt in &mut roots {
            *rt = polish(*rt);
        }
        roots.sort_by(|a, b| b.partial_cmp(a).unwrap());
        (roots, None)
    } else {
        let half_q = q / 2.0;
        let s = (half_q * half_q + p.powi(3) / 27.0).sqrt();
        let root = polish((-half_q + s).cbrt() + (-half_q - s).cbrt() + shift);
        // Product of the three roots is -c0, so the conjugate pair has
        // modulus sqrt(|c0 / root|).
        let modulus = (c0 / root).abs().sqrt();
        (vec![root], Some(modulus))
    }
}

pub fn eigen_branches(w: &CollisionWord, r: Restitution) -> EigenBranches {
    let (c2, c1, c0) = char_poly(w, r);
    let (roots, complex_pair_modulus) = solve_cubic(c2, c1, c0);
    let real = if roots.len() == 3 {
        let labels = if (roots[0] - roots[1]).abs() <= 1e-12 * roots[0].abs().max(1.0) {
            [Branch::Middle, Branch::Middle, Branch::Lower]
        } else if (roots[1] - roots[2]).abs() <= 1e-12 * roots[1].abs().max(1.0) {
            [Branch::Upper, Branch::Middle, Branch::Middle]
        } else {
            [Branch::Upper, Branch::Middle, Branch::Lower]
        };
        labels.into_iter().zip(roots).collect()
    } else {
        vec![(Branch::Upper, roots[0])]
    };
    EigenBranches {
        real,
        complex_pair_modulus,
    }
}

/// Newton-polishes an eigenvalue seed in the scalar type `S` against the
/// characteristic polynomial of the word matrix evaluated in `S`.
pub fn refine_eigenvalue<S: Scalar>(w: &CollisionWord, r: Restitution, seed: f64) -> S {
    let m = word_matrix_in::<S>(w, r);
    let c2 = -mat_trace(&m);
    let c1 = mat_minor_sum(&m);
    let c0 = -mat_det(&m);
    let three = S::from_f64(3.0);
    let two = S::from_f64(2.0);
    let mut x = S::from_f64(seed);
    for _ in 0..6 {
        let f = ((x + c2) * x + c1) * x + c0;
        let fp = (three * x + two * c2) * x + c1;
        x = x - f / fp;
    }
    x
}

/// Eigenvector of `m` for eigenvalue `lam`, scaled so component `norm_index`
/// equals -1. Uses the cross product of the two most independent rows of
/// (m - lam I).
pub fn eigenvector(m: &M3<f64>, lam: f64, norm_index: usize) -> Option<V3<f64>> {
    let mut n = *m;
    for (i, row) in n.iter_mut().enumerate() {
        row[i] -= lam;
    }
    let cands = [
        cross(&n[0], &n[1]),
        cross(&n[0], &n[2]),
        cross(&n[1], &n[2]),
    ];
    let best = cands
        .iter()
        .max_by(|a, b| norm(a).partial_cmp(&norm(b)).unwrap())?;
    let scale = best[norm_index];
    if scale.abs() < 1e-14 * norm(best) {
        return None;
    }
    Some([-best[0] / scale, -best[1] / scale, -best[2] / scale])
}

/// Homography x -> (a x + b) / (c x + d) governing the free position
/// coordinate across one word period.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct MobiusMap {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl MobiusMap {
    pub fn eval(&self, x: f64) -> f64 {
        (self.a * x + self.b) / (self.c * x + self.d)
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let den = self.c * x + self.d;
        (self.a * self.d - self.b * self.c) / (den * den)
    }

    /// Fixed points `x = (a - d +/- sqrt((a-d)^2 + 4bc)) / (2c)`; with c = 0
    /// the map is affine and has the single fixed point b / (d - a).
    pub fn fixed_points(&self) -> (Option<f64>, Option<f64>) {
        if self.c == 0.0 {
            if self.a == self.d {
                return (None, None);
            }
            return (Some(self.b / (self.d - self.a)), None);
        }
        let ad = self.a - self.d;
        let disc = ad * ad + 4.0 * self.b * self.c;
        if disc < 0.0 {
            return (None, None);
        }
        let s = disc.sqrt();
        (
            Some((ad + s) / (2.0 * self.c)),
            Some((ad - s) / (2.0 * self.c)),
        )
    }
}

/// One scheduled transport-and-collide step of the symbolic composition.
/// Positions are affine in the free coordinate: value = const + x_coeff * x.
#[derive(Clone, Debug)]
pub struct StepRecord {
    pub step: usize,
    pub kind: CollisionType,
    /// Velocities entering the step (x-independent).
    pub q_entering: V3<f64>,
    pub dt_const: f64,
    pub dt_x: f64,
    /// Gaps at the event time, colliding component snapped to zero.
    pub p_const: V3<f64>,
    pub p_x: V3<f64>,
}

#[derive(Debug, Error, PartialEq)]
pub enum PatternError {
    #[error("word is not a valid cyclic collision pattern: {0:?}")]
    InvalidWord(SequenceVerdict),
    #[error("the {0} branch has no real eigenvalue at this restitution coefficient")]
    BranchNotReal(Branch),
    #[error("eigenvector has no usable component at the first scheduled gap")]
    DegenerateEigenvector,
    #[error("scheduled velocity vanishes at step {step}; composition undefined")]
    DegenerateComposition { step: usize },
    #[error("word not realizable at its candidate datum: {description}")]
    InfeasibleKinematics {
        step: usize,
        scheduled: CollisionType,
        description: String,
    },
}

/// Homography coefficients (a, b, c, d) straight out of the composition.
type RawMap = (f64, f64, f64, f64);

/// Composes the word symbolically in the free coordinate. Returns the raw
/// homography (a, b, c, d) of the shape map and the per-step records; the
/// two non-contact indices of the start configuration come back as
/// `[unit_slot, x_slot]`.
fn compose_word(
    w: &CollisionWord,
    r: Restitution,
    q0: &V3<f64>,
) -> Result<(RawMap, Vec<StepRecord>, [usize; 2]), PatternError> {
    let contact0 = *w.letters().last().expect("word is nonempty");
    let i0 = contact0.index();
    let free: Vec<usize> = (0..3).filter(|&i| i != i0).collect();
    let (unit_slot, x_slot) = (free[0], free[1]);

    let mut p_const = [0.0; 3];
    let mut p_x = [0.0; 3];
    p_const[unit_slot] = 1.0;
    p_x[x_slot] = 1.0;
    let mut q = *q0;
    let mut records = Vec::with_capacity(w.len());

    for (k, &kind) in w.letters().iter().enumerate() {
        let i = kind.index();
        let qi = q[i];
        if qi == 0.0 {
            return Err(PatternError::DegenerateComposition { step: k + 1 });
        }
        let dt_const = -p_const[i] / qi;
        let dt_x = -p_x[i] / qi;
        for j in 0..3 {
            p_const[j] += dt_const * q[j];
            p_x[j] += dt_x * q[j];
        }
        p_const[i] = 0.0;
        p_x[i] = 0.0;
        records.push(StepRecord {
            step: k + 1,
            kind,
            q_entering: q,
            dt_const,
            dt_x,
            p_const,
            p_x,
        });
        q = mat_vec(&collision_matrix(kind, r), &q);
    }

    let homog = (
        p_x[x_slot],
        p_const[x_slot],
        p_x[unit_slot],
        p_const[unit_slot],
    );
    Ok((homog, records, [unit_slot, x_slot]))
}

/// One evaluated feasibility inequality of the schedule.
#[derive(Clone, Debug, Serialize)]
pub struct FeasibilityCheck {
    pub name: String,
    pub value: f64,
    pub ok: bool,
}

#[derive(Clone, Debug)]
struct Violation {
    step: usize,
    scheduled: CollisionType,
    description: String,
}

/// Evaluates every sign condition of the schedule at a concrete free
/// coordinate: the initial contact must separate, each scheduled gap must be
/// closing, each collision time positive, and every non-colliding gap
/// positive at every event. Returns the checks plus the first violation.
fn kinematics_at(
    x: f64,
    q0: &V3<f64>,
    contact0: CollisionType,
    records: &[StepRecord],
) -> (Vec<FeasibilityCheck>, Option<Violation>) {
    let mut checks = Vec::new();
    let mut violation: Option<Violation> = None;
    let mut note = |name: String,
                    value: f64,
                    ok: bool,
                    step: usize,
                    scheduled: CollisionType,
                    desc: String| {
        checks.push(FeasibilityCheck { name, value, ok });
        if !ok && violation.is_none() {
            violation = Some(Violation {
                step,
                scheduled,
                description: desc,
            });
        }
    };

    let i0 = contact0.index();
    note(
        format!("q{}(t0) > 0", i0 + 1),
        q0[i0],
        q0[i0] > 0.0,
        0,
        contact0,
        format!(
            "the datum is not attainable right after a collision {}: the contact pair is not separating (q{} = {:.3e})",
            contact0.letter(),
            i0 + 1,
            q0[i0]
        ),
    );

    for (k, rec) in records.iter().enumerate() {
        let i = rec.kind.index();
        let prev: Option<&StepRecord> = if k == 0 { None } else { Some(&records[k - 1]) };
        let after = |p: &str| -> String {
            match prev {
                None => "from the initial configuration".into(),
                Some(pr) => format!("after collision {} ({}){}", pr.step, pr.kind.letter(), p),
            }
        };

        let qi = rec.q_entering[i];
        note(
            format!("q{}(t{}) < 0", i + 1, rec.step - 1),
            qi,
            qi < 0.0,
            rec.step,
            rec.kind,
            format!(
                "{}, gap {} is not closing (q{} = {:.3e} >= 0): the scheduled {} cannot occur",
                after(""),
                i + 1,
                i + 1,
                qi,
                rec.kind.letter()
            ),
        );

        let dt = rec.dt_const + rec.dt_x * x;
        note(
            format!("dt{} > 0", rec.step),
            dt,
            dt > 0.0,
            rec.step,
            rec.kind,
            format!(
                "{}, the scheduled collision {} ({}) would need a non-positive time ({:.3e})",
                after(""),
                rec.step,
                rec.kind.letter(),
                dt
            ),
        );

        for j in 0..3 {
            if j == i {
                continue;
            }
            let pj = rec.p_const[j] + rec.p_x[j] * x;
            // A non-colliding gap at zero or below means some other pair
            // actually collides first; name the earliest one.
            let desc = if pj <= 0.0 {
                let actual = earliest_other_collision(x, k, records, q0, contact0);
                let actual_letter = actual
                    .map(|t| t.letter().to_string())
                    .unwrap_or_else(|| "another collision".into());
                format!(
                    "{}, the next collision is {}, not the scheduled {} (gap {} = {:.3e} at t{})",
                    after(""),
                    actual_letter,
                    rec.kind.letter(),
                    j + 1,
                    pj,
                    rec.step
                )
            } else {
                String::new()
            };
            note(
                format!("p{}(t{}) > 0", j + 1, rec.step),
                pj,
                pj > 0.0,
                rec.step,
                rec.kind,
                desc,
            );
        }
    }
    (checks, violation)
}

/// Which gap actually reaches zero first from the state entering step_index
/// (0-based into `records`).
fn earliest_other_collision(
    x: f64,
    step_index: usize,
    records: &[StepRecord],
    _q0: &V3<f64>,
    contact0: CollisionType,
) -> Option<CollisionType> {
    let (p_entering, q): (V3<f64>, V3<f64>) = if step_index == 0 {
        let i0 = contact0.index();
        let free: Vec<usize> = (0..3).filter(|&i| i != i0).collect();
        let mut p = [0.0; 3];
        p[free[0]] = 1.0;
        p[free[1]] = x;
        (p, records[0].q_entering)
    } else {
        let pr = &records[step_index - 1];
        (
            [
                pr.p_const[0] + pr.p_x[0] * x,
                pr.p_const[1] + pr.p_x[1] * x,
                pr.p_const[2] + pr.p_x[2] * x,
            ],
            records[step_index].q_entering,
        )
    };
    let mut best: Option<(f64, usize)> = None;
    for i in 0..3 {
        if q[i] < 0.0 && p_entering[i] >= 0.0 {
            let dt = -p_entering[i] / q[i];
            if best.is_none_or(|(b, _)| dt < b) {
                best = Some((dt, i));
            }
        }
    }
    best.and_then(|(_, i)| CollisionType::from_index(i))
}

/// Everything the word-level operations derive before feasibility is judged.
struct WordAnalysis {
    lambda: f64,
    q0: V3<f64>,
    map: MobiusMap,
    raw: (f64, f64, f64, f64),
    records: Vec<StepRecord>,
    free: [usize; 2],
    branches: EigenBranches,
}

fn is_ababcb(w: &CollisionWord) -> bool {
    use CollisionType::{A, B, C};
    w.letters() == [A, B, A, B, C, B]
}

fn analyze_word(
    w: &CollisionWord,
    r: Restitution,
    branch: Branch,
) -> Result<WordAnalysis, PatternError> {
    let verdict = w.cyclic_verdict();
    if verdict != SequenceVerdict::Ok {
        return Err(PatternError::InvalidWord(verdict));
    }
    let branches = eigen_branches(w, r);
    let lambda = branches
        .eigenvalue(branch)
        .ok_or(PatternError::BranchNotReal(branch))?;

    let first_idx = w.letters()[0].index();
    let q0: V3<f64> = if is_ababcb(w) {
        let (u, v) = ababcb_eigvec_uv(r.value(), lambda);
        [-1.0, u, v]
    } else {
        let m = word_matrix(w, r);
        eigenvector(&m, lambda, first_idx).ok_or(PatternError::DegenerateEigenvector)?
    };

    let (raw, records, free) = compose_word(w, r, &q0)?;
    let map = if is_ababcb(w) {
        let (a, b, c, d) = ababcb_mobius_coeffs(r.value(), lambda);
        MobiusMap { a, b, c, d }
    } else {
        MobiusMap {
            a: raw.0,
            b: raw.1,
            c: raw.2,
            d: raw.3,
        }
    };
    Ok(WordAnalysis {
        lambda,
        q0,
        map,
        raw,
        records,
        free,
        branches,
    })
}

/// Positive fixed-point candidates in the order x_plus, x_minus.
fn positive_fixed_points(map: &MobiusMap) -> Vec<f64> {
    let (xp, xm) = map.fixed_points();
    [xp, xm]
        .into_iter()
        .flatten()
        .filter(|&x| x > 0.0)
        .collect()
}

/// The Möbius map of the word at one eigenvalue branch.
///
/// For the six-letter word ababcb the closed-form coefficients are returned;
/// any other word gets the numerically composed homography. When a positive
/// fixed point exists but the schedule is not realizable at it (a required
/// collision time non-positive, a gap closed early, a wrong velocity sign),
/// the construction fails with `InfeasibleKinematics`.
pub fn mobius_map(
    w: &CollisionWord,
    r: Restitution,
    branch: Branch,
) -> Result<MobiusMap, PatternError> {
    let analysis = analyze_word(w, r, branch)?;
    let contact0 = *w.letters().last().unwrap();
    if let Some(&x) = positive_fixed_points(&analysis.map).first() {
        let (_, violation) = kinematics_at(x, &analysis.q0, contact0, &analysis.records);
        if let Some(v) = violation {
            return Err(PatternError::InfeasibleKinematics {
                step: v.step,
                scheduled: v.scheduled,
                description: v.description,
            });
        }
    }
    Ok(analysis.map)
}

#[derive(Clone, Debug, Serialize, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum InfeasibleReason {
    InvalidWord {
        verdict: SequenceVerdict,
    },
    BranchNotReal,
    DegenerateEigenvector,
    DegenerateComposition {
        step: usize,
    },
    NoRealFixedPoint,
    NoPositiveFixedPoint,
    Kinematics {
        step: usize,
        scheduled: char,
        description: String,
    },
}

impl std::fmt::Display for InfeasibleReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InfeasibleReason::InvalidWord { verdict } => {
                write!(f, "invalid cyclic word: {verdict:?}")
            }
            InfeasibleReason::BranchNotReal => write!(f, "branch has no real eigenvalue"),
            InfeasibleReason::DegenerateEigenvector => write!(f, "degenerate eigenvector"),
            InfeasibleReason::DegenerateComposition { step } => {
                write!(f, "composition degenerates at step {step}")
            }
            InfeasibleReason::NoRealFixedPoint => write!(f, "shape map has no real fixed point"),
            InfeasibleReason::NoPositiveFixedPoint => {
                write!(f, "shape map has no positive fixed point")
            }
            InfeasibleReason::Kinematics { description, .. } => write!(f, "{description}"),
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    FeasibleStable,
    FeasibleUnstable,
    Infeasible { reason: InfeasibleReason },
}

impl Verdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Verdict::FeasibleStable | Verdict::FeasibleUnstable)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Datum {
    pub p0: V3<f64>,
    pub q0: V3<f64>,
}

/// Full analysis of one (word, r, branch) triple.
#[derive(Clone, Debug, Serialize)]
pub struct SelfSimilarReport {
    pub word: String,
    pub r: f64,
    pub branch: Branch,
    pub lambda: Option<f64>,
    pub datum: Option<Datum>,
    pub fixed_point: Option<f64>,
    /// Position scaling over one period.
    pub mu: Option<f64>,
    pub feasibility: Vec<FeasibilityCheck>,
    /// |f'(x)| at the selected fixed point: > 1 means the shape is repelled
    /// from the self-similar one.
    pub stability_ratio: Option<f64>,
    pub verdict: Verdict,
}

/// Builds and judges the candidate self-similar datum of a word on one
/// eigenvalue branch. All failures are verdicts, not errors.
pub fn self_similar_datum(w: &CollisionWord, r: Restitution, branch: Branch) -> SelfSimilarReport {
    let base = |verdict: Verdict, lambda: Option<f64>| SelfSimilarReport {
        word: w.to_string(),
        r: r.value(),
        branch,
        lambda,
        datum: None,
        fixed_point: None,
        mu: None,
        feasibility: Vec::new(),
        stability_ratio: None,
        verdict,
    };

    let analysis = match analyze_word(w, r, branch) {
        Ok(a) => a,
        Err(e) => {
            let reason = match e {
                PatternError::InvalidWord(verdict) => InfeasibleReason::InvalidWord { verdict },
                PatternError::BranchNotReal(_) => InfeasibleReason::BranchNotReal,
                PatternError::DegenerateEigenvector => InfeasibleReason::DegenerateEigenvector,
                PatternError::DegenerateComposition { step } => {
                    InfeasibleReason::DegenerateComposition { step }
                }
                PatternError::InfeasibleKinematics { .. } => {
                    unreachable!("analysis does not validate")
                }
            };
            return base(Verdict::Infeasible { reason }, None);
        }
    };

    let contact0 = *w.letters().last().unwrap();
    let candidates = positive_fixed_points(&analysis.map);
    if candidates.is_empty() {
        let (xp, _) = analysis.map.fixed_points();
        let reason = if xp.is_none() {
            InfeasibleReason::NoRealFixedPoint
        } else {
            InfeasibleReason::NoPositiveFixedPoint
        };
        return base(Verdict::Infeasible { reason }, Some(analysis.lambda));
    }

    let mut first_failure: Option<(Vec<FeasibilityCheck>, Violation, f64)> = None;
    let mut chosen: Option<(Vec<FeasibilityCheck>, f64)> = None;
    for &x in &candidates {
        let (checks, violation) = kinematics_at(x, &analysis.q0, contact0, &analysis.records);
        match violation {
            None => {
                chosen = Some((checks, x));
                break;
            }
            Some(v) => {
                if first_failure.is_none() {
                    first_failure = Some((checks, v, x));
                }
            }
        }
    }

    let build_datum = |x: f64| {
        let i0 = contact0.index();
        let mut p0 = [0.0; 3];
        p0[analysis.free[0]] = 1.0;
        p0[analysis.free[1]] = x;
        p0[i0] = 0.0;
        Datum {
            p0,
            q0: analysis.q0,
        }
    };

    match chosen {
        Some((checks, x)) => {
            let mu = analysis.raw.2 * x + analysis.raw.3;
            let ratio = analysis.map.derivative(x).abs();
            let stable = analysis.branches.is_dominant(branch) && ratio < 1.0;
            SelfSimilarReport {
                word: w.to_string(),
                r: r.value(),
                branch,
                lambda: Some(analysis.lambda),
                datum: Some(build_datum(x)),
                fixed_point: Some(x),
                mu: Some(mu),
                feasibility: checks,
                stability_ratio: Some(ratio),
                verdict: if stable {
                    Verdict::FeasibleStable
                } else {
                    Verdict::FeasibleUnstable
                },
            }
        }
        None => {
            let (checks, v, x) = first_failure.expect("at least one candidate was evaluated");
            SelfSimilarReport {
                word: w.to_string(),
                r: r.value(),
                branch,
                lambda: Some(analysis.lambda),
                datum: Some(build_datum(x)),
                fixed_point: Some(x),
                mu: None,
                feasibility: checks,
                stability_ratio: Some(analysis.map.derivative(x).abs()),
                verdict: Verdict::Infeasible {
                    reason: InfeasibleReason::Kinematics {
                        step: v.step,
                        scheduled: v.scheduled.letter(),
                        description: v.description,
                    },
                },
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Closed forms for the word ababcb.
// ---------------------------------------------------------------------------

/// Eigenvector components (u, v) of q(0) = (-1, u, v) for the word matrix of
/// ababcb, valid for any eigenvalue branch, without solving for the
/// eigenvalue itself.
pub fn ababcb_eigvec_uv<S: Scalar>(r: S, lam: S) -> (S, S) {
    let k = S::from_f64;
    let r2 = r * r;
    let r3 = r2 * r;
    let r4 = r2 * r2;
    let r5 = r4 * r;
    let r6 = r3 * r3;
    let s4 = r4 - k(8.0) * r3 - k(2.0) * r2 - k(8.0) * r + S::ONE;
    let den = -r3 + k(6.0) * r2 - r + k(4.0) * lam;
    let u = r * (k(16.0) * lam - s4) / (k(2.0) * (r + S::ONE) * den);
    let v = -(lam
        * (k(64.0) * lam - r6 + k(10.0) * r5 - k(23.0) * r4 + k(44.0) * r3 + r2 + k(42.0) * r
            - k(9.0))
        + r2 * (k(20.0) * r4 - k(32.0) * r3 + k(8.0) * r2 + k(4.0)))
        / (k(4.0) * (r + S::ONE) * (r + S::ONE) * den);
    (u, v)
}

/// Closed-form Möbius coefficients (a, b, c, d) of the ababcb shape map.
pub fn ababcb_mobius_coeffs<S: Scalar>(r: S, lam: S) -> (S, S, S, S) {
    let k = S::from_f64;
    let r2 = r * r;
    let r3 = r2 * r;
    let r4 = r2 * r2;
    let r5 = r4 * r;
    let r6 = r3 * r3;
    let r7 = r6 * r;
    let r8 = r4 * r4;
    let r9 = r8 * r;
    let r10 = r5 * r5;
    let s4 = r4 - k(8.0) * r3 - k(2.0) * r2 - k(8.0) * r + S::ONE;
    let one = S::ONE;

    let a = -k(64.0) * r2 * s4 * lam + k(1024.0) * r6;
    let b = k(256.0) * r2 * (r2 - k(6.0) * r + one) * lam * lam
        - k(4.0) * r2 * (r - one) * (r - one) * (r - k(3.0)) * (r - k(3.0)) * s4 * lam
        + k(64.0) * r6 * (r4 - k(8.0) * r3 + k(18.0) * r2 + k(5.0));
    let c =
        k(16.0) * (r - one) * (r - one) * (r + one) * (r + one) * (r2 - k(10.0) * r + one) * lam;
    let d = -k(64.0) * s4 * lam * lam
        + (r10 - k(18.0) * r9 + k(101.0) * r8 - k(216.0) * r7
            + k(66.0) * r6
            + k(372.0) * r5
            + k(594.0) * r4
            - k(24.0) * r3
            + k(253.0) * r2
            - k(114.0) * r
            + k(9.0))
            * lam;
    (a, b, c, d)
}

/// Self-similar datum of the word ababcb computed entirely in the scalar
/// type `S`: eigenvalue Newton-polished from the binary64 branch value, then
/// the closed forms above. `None` when the branch is not real or no positive
/// fixed point exists.
#[derive(Clone, Copy, Debug)]
pub struct ClosedFormDatum<S> {
    pub lambda: S,
    pub u: S,
    pub v: S,
    pub x: S,
}

impl<S: Scalar> ClosedFormDatum<S> {
    pub fn p0(&self) -> V3<S> {
        [S::ONE, S::ZERO, self.x]
    }

    pub fn q0(&self) -> V3<S> {
        [-S::ONE, self.u, self.v]
    }
}

pub fn ababcb_closed_form_datum<S: Scalar>(
    r: Restitution,
    branch: Branch,
) -> Option<ClosedFormDatum<S>> {
    let w = CollisionWord::parse("ababcb").unwrap();
    let seed = eigen_branches(&w, r).eigenvalue(branch)?;
    let lam = refine_eigenvalue::<S>(&w, r, seed);
    let rs = S::from_f64(r.value());
    let (u, v) = ababcb_eigvec_uv(rs, lam);
    let (a, b, c, d) = ababcb_mobius_coeffs(rs, lam);
    let ad = a - d;
    let disc = ad * ad + S::from_f64(4.0) * b * c;
    if disc < S::ZERO || c == S::ZERO {
        return None;
    }
    let x = (ad + disc.sqrt()) / (S::from_f64(2.0) * c);
    if x <= S::ZERO {
        return None;
    }
    Some(ClosedFormDatum {
        lambda: lam,
        u,
        v,
        x,
    })
}

// ---------------------------------------------------------------------------
// Named critical restitution coefficients.
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, Serialize)]
pub struct NamedThreshold {
    pub name: &'static str,
    pub expression: &'static str,
    pub value: f64,
}

/// P(r) whose unique root in [0, 1] bounds the existence of the abcb-driven
/// collapse construction.
pub fn existence_polynomial(r: f64) -> f64 {
    (((((17.0 * r - 138.0) * r + 831.0) * r - 3148.0) * r + 831.0) * r - 138.0) * r + 17.0
}

/// Bisection on a bracketing interval; deterministic iteration count.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    debug_assert!(
        flo * f(hi) <= 0.0,
        "bisection interval does not bracket a root"
    );
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi.abs() {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// The known critical restitution coefficients: upper edges of the
/// (ab)^n(cb)^n stability windows for n = 2..6, the existence bound of the
/// four-particle collapse, and the three-particle critical value.
pub fn known_thresholds() -> Vec<NamedThreshold> {
    let sqrt2 = 2.0_f64.sqrt();
    let sqrt3 = 3.0_f64.sqrt();
    let sqrt5 = 5.0_f64.sqrt();
    let sqrt6 = 6.0_f64.sqrt();
    vec![
        NamedThreshold {
            name: "r_max_(ab)^2(cb)^2",
            expression: "3 - 2*sqrt(2)",
            value: 3.0 - 2.0 * sqrt2,
        },
        NamedThreshold {
            name: "r_max_(ab)^3(cb)^3",
            expression: "5 - 2*sqrt(6)",
            value: 5.0 - 2.0 * sqrt6,
        },
        NamedThreshold {
            name: "r_max_(ab)^4(cb)^4",
            expression: "3 + 2*sqrt(2) - 2*sqrt(4 + 3*sqrt(2))",
            value: 3.0 + 2.0 * sqrt2 - 2.0 * (4.0 + 3.0 * sqrt2).sqrt(),
        },
        NamedThreshold {
            name: "r_max_(ab)^5(cb)^5",
            expression: "4 + sqrt(5) - 2*sqrt(5 + 2*sqrt(5))",
            value: 4.0 + sqrt5 - 2.0 * (5.0 + 2.0 * sqrt5).sqrt(),
        },
        NamedThreshold {
            name: "r_max_(ab)^6(cb)^6",
            expression: "3 + 2*sqrt(3) - 2*sqrt(5 + 3*sqrt(3))",
            value: 3.0 + 2.0 * sqrt3 - 2.0 * (5.0 + 3.0 * sqrt3).sqrt(),
        },
        NamedThreshold {
            name: "r_exist_abcb",
            expression:
                "root in [0.19, 0.192] of 17r^6 - 138r^5 + 831r^4 - 3148r^3 + 831r^2 - 138r + 17",
            value: bisect(existence_polynomial, 0.19, 0.192),
        },
        NamedThreshold {
            name: "r_crit_3_particles",
            expression: "7 - 4*sqrt(3)",
            value: 7.0 - 4.0 * sqrt3,
        },
    ]
}
