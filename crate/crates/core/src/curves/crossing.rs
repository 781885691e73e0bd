//! Closed-form crossing times between two flight plans.

use std::cmp::Ordering;

use super::{CostForm, Domain, FlightPlan, Sinusoid};
use crate::scalar::Scalar;

/// Samples per span for the bisection fallback on mixed linear/sinusoid spans.
const FALLBACK_SAMPLES: usize = 64;

/// A maximal stretch on which both plans are given by a single form.
/// `s0..s1` is in reduced coordinates; add `offset` for the unrolled time.
pub(crate) struct Span<'a, T> {
    pub s0: T,
    pub s1: T,
    pub offset: T,
    pub fa: &'a CostForm<T>,
    pub fb: &'a CostForm<T>,
}

pub(crate) struct SpanIter<'a, T> {
    a: &'a FlightPlan<T>,
    b: &'a FlightPlan<T>,
    ia: usize,
    ib: usize,
    cur: T,
    offset: T,
    window_end: T,
    done: bool,
}

/// Spans covering `[after, window end)`: one revolution on the circle, up to
/// the interval end otherwise.
pub(crate) fn spans_from<'a, T: Scalar>(
    a: &'a FlightPlan<T>,
    b: &'a FlightPlan<T>,
    after: T,
) -> SpanIter<'a, T> {
    let (cur, offset, window_end) = match (a.domain, b.domain) {
        (Domain::Circle, Domain::Circle) => {
            let r = a.reduce(after);
            (r, after - r, after + T::two_pi())
        }
        _ => {
            let end = a.domain.end().min(b.domain.end());
            (after.max(T::zero()).min(end), T::zero(), end)
        }
    };
    SpanIter {
        a,
        b,
        ia: a.piece_index(cur),
        ib: b.piece_index(cur),
        cur,
        offset,
        window_end,
        done: !(cur + offset < window_end),
    }
}

impl<'a, T: Scalar> Iterator for SpanIter<'a, T> {
    type Item = Span<'a, T>;

    fn next(&mut self) -> Option<Self::Item> {
        while !self.done {
            let pa = &self.a.pieces[self.ia];
            let pb = &self.b.pieces[self.ib];
            let s1 = pa.t1.min(pb.t1);
            let mut span_end = s1;
            if span_end + self.offset >= self.window_end {
                span_end = self.window_end - self.offset;
                self.done = true;
            }
            let span = Span {
                s0: self.cur,
                s1: span_end,
                offset: self.offset,
                fa: &pa.form,
                fb: &pb.form,
            };
            if pa.t1 <= s1 {
                self.ia += 1;
            }
            if pb.t1 <= s1 {
                self.ib += 1;
            }
            self.cur = s1;
            if self.ia >= self.a.pieces.len() || self.ib >= self.b.pieces.len() {
                if self.a.domain.is_circle() {
                    self.ia = 0;
                    self.ib = 0;
                    self.cur = T::zero();
                    self.offset = self.offset + T::two_pi();
                } else {
                    self.done = true;
                }
            }
            if span.s1 > span.s0 {
                return Some(span);
            }
        }
        None
    }
}

/// Sign of `fa − fb` at `t`, `None` when the difference is numerically zero.
pub(crate) fn diff_sign<T: Scalar>(fa: &CostForm<T>, fb: &CostForm<T>, t: T) -> Option<Ordering> {
    let va = fa.eval(t);
    let vb = fb.eval(t);
    value_sign(va, vb)
}

fn value_sign<T: Scalar>(va: T, vb: T) -> Option<Ordering> {
    let d = va - vb;
    if d.abs() <= T::zero_tol() * (T::one() + va.abs() + vb.abs()) {
        None
    } else if d > T::zero() {
        Some(Ordering::Greater)
    } else {
        Some(Ordering::Less)
    }
}

/// Roots of `C·cosθ + S·sinθ = 0` strictly inside `(s0, s1)`.
fn push_sinusoid_zeros<T: Scalar>(mut c: T, mut s: T, scale: T, s0: T, s1: T, out: &mut Vec<T>) {
    // canonical sign so that (C, S) and (−C, −S) give bitwise identical roots
    if c < T::zero() || (c == T::zero() && s < T::zero()) {
        c = -c;
        s = -s;
    }
    let r = c.hypot(s);
    if r <= T::zero_tol() * (T::one() + scale) {
        return;
    }
    let pi = T::PI();
    let base = s.atan2(c) + T::FRAC_PI_2();
    let mut k = ((s0 - base) / pi).floor();
    loop {
        let root = base + k * pi;
        if root >= s1 {
            break;
        }
        if root > s0 {
            out.push(root);
        }
        k = k + T::one();
    }
}

/// Candidate crossing times of two forms strictly inside `(s0, s1)`, sorted.
///
/// For rectified sinusoids these are the roots of the `±s_i = ±s_j` equalities;
/// for affine forms the single linear root. Mixed spans fall back to sampling
/// with bisection.
pub fn candidate_roots<T: Scalar>(fa: &CostForm<T>, fb: &CostForm<T>, s0: T, s1: T) -> Vec<T> {
    let mut out = Vec::new();
    match (fa, fb) {
        (CostForm::Zero, CostForm::Zero) => {}
        (CostForm::Linear { .. } | CostForm::Zero, CostForm::Linear { .. } | CostForm::Zero) => {
            let (a1, b1) = linear_parts(fa);
            let (a2, b2) = linear_parts(fb);
            let db = b1 - b2;
            if db != T::zero() {
                let root = (a2 - a1) / db;
                if root > s0 && root < s1 {
                    out.push(root);
                }
            }
        }
        (CostForm::MaxAbs(_) | CostForm::Zero, CostForm::MaxAbs(_) | CostForm::Zero) => {
            let la = sinusoid_list(fa);
            let lb = sinusoid_list(fb);
            if la.is_empty() || lb.is_empty() {
                for x in la.iter().chain(lb.iter()) {
                    let (c, s) = x.coeffs();
                    push_sinusoid_zeros(c, s, x.amplitude(), s0, s1, &mut out);
                }
            } else {
                for x in la {
                    for y in lb {
                        let (c1, s1c) = x.coeffs();
                        let (c2, s2c) = y.coeffs();
                        let scale = x.amplitude() + y.amplitude();
                        push_sinusoid_zeros(c1 - c2, s1c - s2c, scale, s0, s1, &mut out);
                        push_sinusoid_zeros(c1 + c2, s1c + s2c, scale, s0, s1, &mut out);
                    }
                }
            }
        }
        _ => bisection_roots(fa, fb, s0, s1, &mut out),
    }
    out.sort_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal));
    out.dedup();
    out
}

fn linear_parts<T: Scalar>(f: &CostForm<T>) -> (T, T) {
    match f {
        CostForm::Linear { a, b } => (*a, *b),
        _ => (T::zero(), T::zero()),
    }
}

fn sinusoid_list<T: Scalar>(f: &CostForm<T>) -> &[Sinusoid<T>] {
    match f {
        CostForm::MaxAbs(list) => list,
        _ => &[],
    }
}

fn bisection_roots<T: Scalar>(fa: &CostForm<T>, fb: &CostForm<T>, s0: T, s1: T, out: &mut Vec<T>) {
    let n = T::from_usize(FALLBACK_SAMPLES).unwrap();
    let h = (s1 - s0) / n;
    let mut prev_t = s0;
    let mut prev = diff_sign(fa, fb, s0);
    for i in 1..=FALLBACK_SAMPLES {
        let t = if i == FALLBACK_SAMPLES {
            s1
        } else {
            s0 + h * T::from_usize(i).unwrap()
        };
        let cur = diff_sign(fa, fb, t);
        if let (Some(p), Some(c)) = (prev, cur) {
            if p != c {
                let (mut lo, mut hi) = (prev_t, t);
                for _ in 0..200 {
                    let mid = (lo + hi) * T::half();
                    if hi - lo <= T::time_eps() * (T::one() + mid.abs()) {
                        break;
                    }
                    match diff_sign(fa, fb, mid) {
                        Some(m) if m == p => lo = mid,
                        Some(_) => hi = mid,
                        None => {
                            lo = mid;
                            hi = mid;
                        }
                    }
                }
                let root = (lo + hi) * T::half();
                if root > s0 && root < s1 {
                    out.push(root);
                }
            }
        }
        if cur.is_some() {
            prev = cur;
            prev_t = t;
        }
    }
}

/// First time strictly after `after` at which the sign of `a − b` changes.
///
/// Stretches on which the two plans coincide take the sign `tie` (or are skipped
/// when `tie` is `None`); tangential contacts are never reported. Candidates
/// within [`Scalar::time_eps`] of `after` are ignored so that a crossing that was
/// just processed is not reported again.
pub fn next_sign_change<T: Scalar>(
    a: &FlightPlan<T>,
    b: &FlightPlan<T>,
    after: T,
    tie: Option<Ordering>,
) -> Option<T> {
    let mut prev: Option<Ordering> = None;
    let eps = T::time_eps() * (T::one() + after.abs());
    for span in spans_from(a, b, after) {
        let roots = candidate_roots(span.fa, span.fb, span.s0, span.s1);
        let mut c0 = span.s0;
        let cuts = roots
            .into_iter()
            .filter(|r| *r + span.offset > after + eps)
            .chain(std::iter::once(span.s1));
        for c1 in cuts {
            if c1 <= c0 {
                continue;
            }
            let mid = (c0 + c1) * T::half();
            if let Some(s) = diff_sign(span.fa, span.fb, mid).or(tie) {
                if let Some(p) = prev {
                    if p != s {
                        return Some(c0 + span.offset);
                    }
                }
                prev = Some(s);
            }
            c0 = c1;
        }
    }
    None
}

/// Smallest `t > after` where `a` and `b` cross with a strict sign change of
/// `a − b`; `None` if none occurs before the interval end (one revolution on the
/// circle).
pub fn next_crossing<T: Scalar>(a: &FlightPlan<T>, b: &FlightPlan<T>, after: T) -> Option<T> {
    next_sign_change(a, b, after, None)
}

/// Order of `a` versus `b` just after `t`: by value at `t` when the values are
/// clearly apart, otherwise by the sign of `a − b` on the stretch up to the next
/// candidate crossing (evaluated at its midpoint). `Equal` when the plans
/// coincide there.
pub fn cmp_after<T: Scalar>(a: &FlightPlan<T>, b: &FlightPlan<T>, t: T) -> Ordering {
    if let Some(s) = value_sign(a.value_at(t), b.value_at(t)) {
        return s;
    }
    let eps = T::time_eps() * (T::one() + t.abs());
    if let Some(span) = spans_from(a, b, t).next() {
        let first_cut = candidate_roots(span.fa, span.fb, span.s0, span.s1)
            .into_iter()
            .find(|r| *r + span.offset > t + eps)
            .unwrap_or(span.s1);
        let mid = (span.s0 + first_cut) * T::half();
        return diff_sign(span.fa, span.fb, mid).unwrap_or(Ordering::Equal);
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{CostPiece, Domain};
    use std::f64::consts::{FRAC_PI_4, PI, TAU};

    fn circ(form: CostForm<f64>) -> FlightPlan<f64> {
        FlightPlan::<f64>::single(Domain::Circle, form).unwrap()
    }

    fn abs_s(a: f64, b: f64) -> CostForm<f64> {
        CostForm::abs_sinusoid(Sinusoid::<f64>::from_coeffs(a, b))
    }

    #[test]
    fn linear_crossing_example() {
        let a = FlightPlan::<f64>::linear(3.0, 1.0, 1.0).unwrap();
        let b = FlightPlan::<f64>::linear(3.0, 3.0, -1.0).unwrap();
        let t = next_crossing(&a, &b, 0.0).unwrap();
        assert!((t - 1.0).abs() < 1e-15);
        assert_eq!(next_crossing(&a, &b, 1.0), None);
    }

    #[test]
    fn abs_cos_sin_crossing_example() {
        let a = circ(abs_s(1.0, 0.0));
        let b = circ(abs_s(0.0, 1.0));
        let t = next_crossing(&a, &b, 0.0).unwrap();
        assert!((t - FRAC_PI_4).abs() < 1e-12);
        let t2 = next_crossing(&a, &b, t).unwrap();
        assert!((t2 - 3.0 * FRAC_PI_4).abs() < 1e-12);
    }

    #[test]
    fn circle_search_wraps_past_two_pi() {
        let a = circ(abs_s(1.0, 0.0));
        let b = circ(abs_s(0.0, 1.0));
        let t = next_crossing(&a, &b, 7.0 * FRAC_PI_4 + 0.1).unwrap();
        assert!((t - (TAU + FRAC_PI_4)).abs() < 1e-12);
    }

    #[test]
    fn tangential_contact_is_not_a_crossing() {
        // |cos| touches 0 at π/2 without changing sign against Zero.
        let a = circ(abs_s(1.0, 0.0));
        let z = circ(CostForm::Zero);
        assert_eq!(next_crossing(&a, &z, 0.0), None);
        // (t-1)^2-like touch with piecewise linear: v-shape touching a constant.
        let v = FlightPlan::<f64>::piecewise_linear(&[(0.0, 2.0), (1.0, 1.0), (2.0, 2.0)]).unwrap();
        let c = FlightPlan::<f64>::constant(Domain::Interval { end: 2.0 }, 1.0).unwrap();
        assert_eq!(next_crossing(&v, &c, 0.0), None);
    }

    #[test]
    fn crossing_at_piece_junction() {
        let a = FlightPlan::<f64>::piecewise_linear(&[(0.0, 0.0), (1.0, 1.0), (2.0, 2.0)]).unwrap();
        let b = FlightPlan::<f64>::piecewise_linear(&[(0.0, 2.0), (1.0, 1.0), (2.0, 0.0)]).unwrap();
        let t = next_crossing(&a, &b, 0.0).unwrap();
        assert!((t - 1.0).abs() < 1e-15);
    }

    #[test]
    fn identical_stretch_uses_tie_sign() {
        let a = FlightPlan::<f64>::piecewise_linear(&[(0.0, 0.0), (1.0, 1.0), (2.0, 1.0), (3.0, 3.0)]).unwrap();
        let b = FlightPlan::<f64>::piecewise_linear(&[(0.0, 2.0), (1.0, 1.0), (2.0, 1.0), (3.0, 0.0)]).unwrap();
        // a < b, equal on [1,2], then a > b: reported at the end of the tie.
        let t = next_crossing(&a, &b, 0.0).unwrap();
        assert!((t - 2.0).abs() < 1e-12);
        // if ties count as a > b, the change happens entering the tie
        let t = next_sign_change(&a, &b, 0.0, Some(Ordering::Greater)).unwrap();
        assert!((t - 1.0).abs() < 1e-12);
        assert_eq!(next_sign_change(&a, &b, 1.0, Some(Ordering::Greater)), None);
    }

    #[test]
    fn cmp_after_resolves_ties_by_future() {
        let a = FlightPlan::<f64>::linear(3.0, 1.0, 1.0).unwrap();
        let b = FlightPlan::<f64>::linear(3.0, 3.0, -1.0).unwrap();
        assert_eq!(cmp_after(&a, &b, 1.0), Ordering::Greater);
        assert_eq!(cmp_after(&a, &b, 0.5), Ordering::Less);
        assert_eq!(cmp_after(&a, &a, 0.5), Ordering::Equal);
    }

    #[test]
    fn mixed_forms_use_bisection() {
        let plan_a = FlightPlan::<f64>::new(
            Domain::Circle,
            vec![CostPiece::new(0.0, TAU, CostForm::constant(0.5))],
        )
        .unwrap();
        let b = circ(abs_s(1.0, 0.0));
        let t = next_crossing(&plan_a, &b, 0.0).unwrap();
        // |cos t| = 0.5 first at π/3
        assert!((t - PI / 3.0).abs() < 1e-10);
    }

    #[test]
    fn degenerate_equal_sinusoids_have_no_roots() {
        let s = Sinusoid::<f64>::from_coeffs(0.3, 0.4);
        let roots = candidate_roots(&CostForm::abs_sinusoid(s), &CostForm::abs_sinusoid(s), 0.0, TAU);
        // only the s + s equation contributes (zeros of s itself)
        assert_eq!(roots.len(), 2);
    }
}
