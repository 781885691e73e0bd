//! Exact integrals and upper envelopes of piece lists.

use super::crossing::candidate_roots;
use super::{CostForm, CostPiece, Sinusoid};
use crate::scalar::Scalar;

/// `∫ |s(θ)| dθ` over `[t0, t1]`, split at the zeros of `s`.
fn integrate_abs_sinusoid<T: Scalar>(s: &Sinusoid<T>, t0: T, t1: T) -> T {
    if s.amplitude() == T::zero() || !(t1 > t0) {
        return T::zero();
    }
    let (a, b) = s.coeffs();
    let anti = |t: T| a * t.sin() - b * t.cos();
    let zeros = candidate_roots(&CostForm::abs_sinusoid(*s), &CostForm::Zero, t0, t1);
    let mut total = T::zero();
    let mut lo = t0;
    for hi in zeros.into_iter().chain(std::iter::once(t1)) {
        total = total + (anti(hi) - anti(lo)).abs();
        lo = hi;
    }
    total
}

/// Closed-form integral of one form over `[t0, t1]`.
pub fn integrate_form<T: Scalar>(form: &CostForm<T>, t0: T, t1: T) -> T {
    if !(t1 > t0) {
        return T::zero();
    }
    match form {
        CostForm::Zero => T::zero(),
        CostForm::Linear { a, b } => *a * (t1 - t0) + *b * (t1 * t1 - t0 * t0) * T::half(),
        CostForm::MaxAbs(list) => match list.as_slice() {
            [s] => integrate_abs_sinusoid(s, t0, t1),
            [s1, s2] => {
                let single1 = CostForm::abs_sinusoid(*s1);
                let single2 = CostForm::abs_sinusoid(*s2);
                let cuts = candidate_roots(&single1, &single2, t0, t1);
                let mut total = T::zero();
                let mut lo = t0;
                for hi in cuts.into_iter().chain(std::iter::once(t1)) {
                    let mid = (lo + hi) * T::half();
                    let dominant = if s1.eval(mid).abs() >= s2.eval(mid).abs() { s1 } else { s2 };
                    total = total + integrate_abs_sinusoid(dominant, lo, hi);
                    lo = hi;
                }
                total
            }
            _ => T::zero(),
        },
    }
}

/// Sum of the exact integrals of each piece over its own `[t0, t1)`.
pub fn integrate<T: Scalar>(pieces: &[CostPiece<T>]) -> T {
    pieces
        .iter()
        .fold(T::zero(), |acc, p| acc + integrate_form(&p.form, p.t0, p.t1))
}

/// Pointwise maximum of two piece lists tiling the same window. Every output
/// piece carries whichever input form dominates on it.
pub fn upper_envelope<T: Scalar>(a: &[CostPiece<T>], b: &[CostPiece<T>]) -> Vec<CostPiece<T>> {
    let mut out: Vec<CostPiece<T>> = Vec::new();
    let (mut ia, mut ib) = (0, 0);
    if a.is_empty() {
        return b.to_vec();
    }
    if b.is_empty() {
        return a.to_vec();
    }
    let mut cur = a[0].t0.max(b[0].t0);
    while ia < a.len() && ib < b.len() {
        let (pa, pb) = (&a[ia], &b[ib]);
        let end = pa.t1.min(pb.t1);
        if end > cur {
            let cuts = candidate_roots(&pa.form, &pb.form, cur, end);
            let mut lo = cur;
            for hi in cuts.into_iter().chain(std::iter::once(end)) {
                let mid = (lo + hi) * T::half();
                let form = if pa.form.eval(mid) >= pb.form.eval(mid) {
                    &pa.form
                } else {
                    &pb.form
                };
                match out.last_mut() {
                    Some(last) if last.t1 == lo && last.form == *form => last.t1 = hi,
                    _ => out.push(CostPiece::new(lo, hi, form.clone())),
                }
                lo = hi;
            }
            cur = end;
        }
        if pa.t1 <= end {
            ia += 1;
        }
        if pb.t1 <= end {
            ib += 1;
        }
    }
    out
}
