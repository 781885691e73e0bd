//! Piecewise cost curves ("flight plans") that drive every kinetic event.
//!
//! A [`FlightPlan`] tiles either a time interval `[0, T)` or the angle circle
//! `[0, 2π)` with [`CostPiece`]s. A piece is affine in time, the upper envelope of
//! one or two rectified sinusoids, or identically zero. All crossing times are
//! computed in closed form, see [`next_crossing`].

mod crossing;
mod integrate;

use thiserror::Error;

use crate::scalar::{wrap_angle, Scalar};

pub use crossing::{candidate_roots, cmp_after, next_crossing, next_sign_change};
pub use integrate::{integrate, integrate_form, upper_envelope};

/// Default tolerance for value continuity across piece junctions.
pub const CONTINUITY_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurveError {
    #[error("time {t} lies outside the plan domain [0, {end}]")]
    OutOfDomain { t: f64, end: f64 },
    #[error("flight plan has no pieces")]
    Empty,
    #[error("pieces do not tile the domain: gap or overlap at {at}")]
    Tiling { at: f64 },
    #[error("empty piece [{t0}, {t1})")]
    EmptyPiece { t0: f64, t1: f64 },
    #[error("discontinuity of {jump} at junction {at}")]
    Discontinuous { at: f64, jump: f64 },
    #[error("negative cost {value} at {at}")]
    Negative { at: f64, value: f64 },
    #[error("max-abs piece must hold 1 or 2 sinusoids, got {0}")]
    SinusoidCount(usize),
    #[error("invalid domain: {0}")]
    Domain(String),
}

/// `R·cos(θ − φ)` stored together with its `A·cosθ + B·sinθ` coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sinusoid<T> {
    amplitude: T,
    phase: T,
    cos_coeff: T,
    sin_coeff: T,
}

impl<T: Scalar> Sinusoid<T> {
    /// Canonical form of `A·cosθ + B·sinθ`.
    pub fn from_coeffs(a: T, b: T) -> Self {
        let amplitude = a.hypot(b);
        let phase = if amplitude == T::zero() {
            T::zero()
        } else {
            wrap_angle(b.atan2(a))
        };
        Self {
            amplitude,
            phase,
            cos_coeff: a,
            sin_coeff: b,
        }
    }

    /// `amplitude · cos(θ − phase)`; a negative amplitude is folded into the phase.
    pub fn new(amplitude: T, phase: T) -> Self {
        Self::from_coeffs(amplitude * phase.cos(), amplitude * phase.sin())
    }

    pub fn amplitude(&self) -> T {
        self.amplitude
    }

    pub fn phase(&self) -> T {
        self.phase
    }

    /// `(A, B)` such that the value is `A·cosθ + B·sinθ`.
    pub fn coeffs(&self) -> (T, T) {
        (self.cos_coeff, self.sin_coeff)
    }

    pub fn eval(&self, theta: T) -> T {
        self.eval_cs(theta.cos(), theta.sin())
    }

    #[inline]
    pub(crate) fn eval_cs(&self, c: T, s: T) -> T {
        self.cos_coeff * c + self.sin_coeff * s
    }

    pub fn neg(&self) -> Self {
        Self::from_coeffs(-self.cos_coeff, -self.sin_coeff)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_coeffs(
            self.cos_coeff - other.cos_coeff,
            self.sin_coeff - other.sin_coeff,
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_coeffs(
            self.cos_coeff + other.cos_coeff,
            self.sin_coeff + other.sin_coeff,
        )
    }

    pub fn scale(&self, k: T) -> Self {
        Self::from_coeffs(self.cos_coeff * k, self.sin_coeff * k)
    }
}

/// Functional form of one piece.
#[derive(Debug, Clone, PartialEq)]
pub enum CostForm<T> {
    /// `a + b·t`
    Linear { a: T, b: T },
    /// `max_i |R_i·cos(θ − φ_i)|` over one or two sinusoids.
    MaxAbs(Vec<Sinusoid<T>>),
    Zero,
}

impl<T: Scalar> CostForm<T> {
    pub fn constant(c: T) -> Self {
        CostForm::Linear { a: c, b: T::zero() }
    }

    pub fn abs_sinusoid(s: Sinusoid<T>) -> Self {
        CostForm::MaxAbs(vec![s])
    }

    /// Upper envelope of `|s1|` and `|s2|`, collapsed to one entry when both agree.
    pub fn max_abs2(s1: Sinusoid<T>, s2: Sinusoid<T>) -> Self {
        let (a1, b1) = s1.coeffs();
        let (a2, b2) = s2.coeffs();
        let scale = T::one() + s1.amplitude() + s2.amplitude();
        let tol = T::zero_tol() * scale;
        match (s1.amplitude() <= tol, s2.amplitude() <= tol) {
            (true, true) => return CostForm::Zero,
            (true, false) => return CostForm::MaxAbs(vec![s2]),
            (false, true) => return CostForm::MaxAbs(vec![s1]),
            (false, false) => {}
        }
        let same = (a1 - a2).abs() <= tol && (b1 - b2).abs() <= tol;
        let opposite = (a1 + a2).abs() <= tol && (b1 + b2).abs() <= tol;
        if same || opposite {
            CostForm::MaxAbs(vec![s1])
        } else {
            CostForm::MaxAbs(vec![s1, s2])
        }
    }

    pub fn eval(&self, t: T) -> T {
        match self {
            CostForm::Linear { a, b } => *a + *b * t,
            CostForm::MaxAbs(list) => {
                let (c, s) = (t.cos(), t.sin());
                list.iter()
                    .map(|x| x.eval_cs(c, s).abs())
                    .fold(T::zero(), T::max)
            }
            CostForm::Zero => T::zero(),
        }
    }

    /// Re-expresses the form for a time axis shifted by `offset`, i.e. the
    /// returned form evaluated at `t + offset` equals `self` evaluated at `t`.
    pub fn shifted(&self, offset: T) -> Self {
        match self {
            CostForm::Linear { a, b } => CostForm::Linear {
                a: *a - *b * offset,
                b: *b,
            },
            other => other.clone(),
        }
    }

    fn validate(&self) -> Result<(), CurveError> {
        if let CostForm::MaxAbs(list) = self {
            if list.is_empty() || list.len() > 2 {
                return Err(CurveError::SinusoidCount(list.len()));
            }
        }
        Ok(())
    }
}

/// One piece of a plan, live on `[t0, t1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CostPiece<T> {
    pub t0: T,
    pub t1: T,
    pub form: CostForm<T>,
}

impl<T: Scalar> CostPiece<T> {
    pub fn new(t0: T, t1: T, form: CostForm<T>) -> Self {
        Self { t0, t1, form }
    }

    pub fn eval(&self, t: T) -> T {
        self.form.eval(t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain<T> {
    /// `[0, end]`
    Interval { end: T },
    /// `[0, 2π)` with wraparound.
    Circle,
}

impl<T: Scalar> Domain<T> {
    pub fn end(&self) -> T {
        match self {
            Domain::Interval { end } => *end,
            Domain::Circle => T::two_pi(),
        }
    }

    pub fn is_circle(&self) -> bool {
        matches!(self, Domain::Circle)
    }
}

/// Continuous, nonnegative, piecewise cost curve of one element.
#[derive(Debug, Clone, PartialEq)]
pub struct FlightPlan<T> {
    domain: Domain<T>,
    pieces: Vec<CostPiece<T>>,
}

impl<T: Scalar> FlightPlan<T> {
    /// Validates tiling, continuity (within [`CONTINUITY_TOL`]) and nonnegativity.
    pub fn new(domain: Domain<T>, pieces: Vec<CostPiece<T>>) -> Result<Self, CurveError> {
        Self::with_tolerance(domain, pieces, T::lit(CONTINUITY_TOL))
    }

    pub fn with_tolerance(
        domain: Domain<T>,
        mut pieces: Vec<CostPiece<T>>,
        tol: T,
    ) -> Result<Self, CurveError> {
        let end = domain.end();
        if let Domain::Interval { end } = domain {
            if !(end > T::zero()) || !end.is_finite() {
                return Err(CurveError::Domain(format!("interval end {end} must be positive")));
            }
        }
        if pieces.is_empty() {
            return Err(CurveError::Empty);
        }
        let snap = tol.max(T::time_eps());
        let f = |x: T| x.to_f64().unwrap_or(f64::NAN);
        if (pieces[0].t0 - T::zero()).abs() > snap {
            return Err(CurveError::Tiling { at: f(pieces[0].t0) });
        }
        pieces[0].t0 = T::zero();
        let last = pieces.len() - 1;
        if (pieces[last].t1 - end).abs() > snap {
            return Err(CurveError::Tiling { at: f(pieces[last].t1) });
        }
        pieces[last].t1 = end;
        for i in 0..pieces.len() {
            pieces[i].form.validate()?;
            if i > 0 {
                let prev_end = pieces[i - 1].t1;
                if (pieces[i].t0 - prev_end).abs() > snap {
                    return Err(CurveError::Tiling { at: f(prev_end) });
                }
                pieces[i].t0 = prev_end;
            }
            if !(pieces[i].t0 < pieces[i].t1) {
                return Err(CurveError::EmptyPiece {
                    t0: f(pieces[i].t0),
                    t1: f(pieces[i].t1),
                });
            }
        }
        let near = |x: T, y: T| (x - y).abs() <= tol * (T::one() + x.abs().max(y.abs()));
        for w in pieces.windows(2) {
            let at = w[1].t0;
            let (l, r) = (w[0].eval(at), w[1].eval(at));
            if !near(l, r) {
                return Err(CurveError::Discontinuous {
                    at: f(at),
                    jump: f((l - r).abs()),
                });
            }
        }
        if domain.is_circle() {
            let l = pieces[last].eval(end);
            let r = pieces[0].eval(T::zero());
            if !near(l, r) {
                return Err(CurveError::Discontinuous {
                    at: 0.0,
                    jump: f((l - r).abs()),
                });
            }
        }
        for p in &pieces {
            if let CostForm::Linear { .. } = p.form {
                for at in [p.t0, p.t1] {
                    let v = p.eval(at);
                    if v < -tol {
                        return Err(CurveError::Negative { at: f(at), value: f(v) });
                    }
                }
            }
        }
        Ok(Self { domain, pieces })
    }

    pub fn single(domain: Domain<T>, form: CostForm<T>) -> Result<Self, CurveError> {
        let end = domain.end();
        Self::new(domain, vec![CostPiece::new(T::zero(), end, form)])
    }

    pub fn constant(domain: Domain<T>, c: T) -> Result<Self, CurveError> {
        Self::single(domain, CostForm::constant(c))
    }

    pub fn linear(end: T, a: T, b: T) -> Result<Self, CurveError> {
        Self::single(Domain::Interval { end }, CostForm::Linear { a, b })
    }

    /// Continuous piecewise-linear interpolant through `knots` (sorted by time,
    /// first at 0 and last at the interval end).
    pub fn piecewise_linear(knots: &[(T, T)]) -> Result<Self, CurveError> {
        if knots.len() < 2 {
            return Err(CurveError::Empty);
        }
        let end = knots[knots.len() - 1].0;
        let pieces = knots
            .windows(2)
            .map(|w| {
                let ((t0, v0), (t1, v1)) = (w[0], w[1]);
                let b = (v1 - v0) / (t1 - t0);
                CostPiece::new(t0, t1, CostForm::Linear { a: v0 - b * t0, b })
            })
            .collect();
        Self::new(Domain::Interval { end }, pieces)
    }

    pub fn domain(&self) -> Domain<T> {
        self.domain
    }

    pub fn pieces(&self) -> &[CostPiece<T>] {
        &self.pieces
    }

    /// Value at `t`; circle times are reduced modulo 2π.
    pub fn eval(&self, t: T) -> Result<T, CurveError> {
        if let Domain::Interval { end } = self.domain {
            if !(t >= T::zero() && t <= end) {
                return Err(CurveError::OutOfDomain {
                    t: t.to_f64().unwrap_or(f64::NAN),
                    end: end.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(self.value_at(t))
    }

    /// Value at `t` with circle reduction and interval clamping; never fails.
    pub fn value_at(&self, t: T) -> T {
        let r = self.reduce(t);
        self.piece_at(r).eval(r)
    }

    pub(crate) fn reduce(&self, t: T) -> T {
        match self.domain {
            Domain::Circle => wrap_angle(t),
            Domain::Interval { end } => t.max(T::zero()).min(end),
        }
    }

    /// The piece whose half-open span contains the reduced time `r`.
    pub(crate) fn piece_at(&self, r: T) -> &CostPiece<T> {
        &self.pieces[self.piece_index(r)]
    }

    pub(crate) fn piece_index(&self, r: T) -> usize {
        let idx = self.pieces.partition_point(|p| p.t0 <= r);
        idx.saturating_sub(1).min(self.pieces.len() - 1)
    }

    /// Pieces restricted to the unrolled window `[from, to)`, with linear forms
    /// rewritten for the unrolled axis.
    pub fn pieces_in(&self, from: T, to: T) -> Vec<CostPiece<T>> {
        let mut out = Vec::new();
        if !(from < to) {
            return out;
        }
        let period = self.domain.end();
        let mut cursor = from;
        while cursor < to {
            let r = self.reduce(cursor);
            let offset = match self.domain {
                Domain::Circle => cursor - r,
                Domain::Interval { .. } => T::zero(),
            };
            let idx = self.piece_index(r);
            let piece = &self.pieces[idx];
            let mut stop = piece.t1 + offset;
            if stop <= cursor {
                // reduction landed exactly on a junction due to rounding
                stop = if idx + 1 < self.pieces.len() {
                    self.pieces[idx + 1].t1 + offset
                } else {
                    period + offset
                };
            }
            let stop = stop.min(to);
            out.push(CostPiece::new(cursor, stop, piece.form.shifted(offset)));
            if !self.domain.is_circle() && stop >= period {
                break;
            }
            cursor = stop;
        }
        out
    }
}
