//! Log-spaced grids, high-order cumulative quadrature and Hermite resampling
//! of integrated profiles. Shared plumbing for the potential and identity
//! modules.

use crate::integrator::RadialProfile;
use crate::scalar::{lit, Real};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("grid error: {0}")]
    Invalid(String),
}

/// Log-spaced grid with `count` nodes on `[lo, hi]`.
pub fn log_grid<R: Real>(lo: R, hi: R, count: usize) -> Result<Vec<R>, GridError> {
    if !(lo > R::zero()) || !(hi > lo) {
        return Err(GridError::Invalid(format!(
            "log grid needs 0 < lo < hi, got [{lo}, {hi}]"
        )));
    }
    if count < 2 {
        return Err(GridError::Invalid("log grid needs at least 2 nodes".into()));
    }
    let (llo, lhi) = (lo.ln(), hi.ln());
    let step = (lhi - llo) / R::from_usize(count - 1).unwrap();
    let mut g: Vec<R> = (0..count)
        .map(|k| (llo + step * R::from_usize(k).unwrap()).exp())
        .collect();
    // pin the endpoints exactly
    g[0] = lo;
    g[count - 1] = hi;
    Ok(g)
}

/// Per-interval integrals of samples `w` on a uniform grid `x`, fourth
/// order: each interval is integrated with the cubic through its four
/// nearest nodes (one-sided at the ends). Returns `m - 1` segments.
pub fn segment_integrals<R: Real>(x: &[R], w: &[R]) -> Vec<R> {
    assert_eq!(x.len(), w.len());
    let m = x.len();
    if m < 2 {
        return Vec::new();
    }
    if m < 4 {
        return (0..m - 1)
            .map(|k| (x[k + 1] - x[k]) * (w[k] + w[k + 1]) * lit(0.5))
            .collect();
    }
    let inv24 = lit::<R>(1.0 / 24.0);
    (0..m - 1)
        .map(|k| {
            let h = x[k + 1] - x[k];
            let seg = if k == 0 {
                (lit::<R>(9.0) * w[0] + lit::<R>(19.0) * w[1] - lit::<R>(5.0) * w[2] + w[3])
                    * inv24
            } else if k == m - 2 {
                (w[m - 4] - lit::<R>(5.0) * w[m - 3] + lit::<R>(19.0) * w[m - 2]
                    + lit::<R>(9.0) * w[m - 1])
                    * inv24
            } else {
                (lit::<R>(13.0) * (w[k] + w[k + 1]) - w[k - 1] - w[k + 2]) * inv24
            };
            h * seg
        })
        .collect()
}

/// Cumulative integral from the left end: `c[0] = 0`,
/// `c[k] = int_{x0}^{xk} w dx`.
pub fn cumulative_uniform<R: Real>(x: &[R], w: &[R]) -> Vec<R> {
    let segs = segment_integrals(x, w);
    let mut c = vec![R::zero(); x.len().max(1)];
    for (k, s) in segs.iter().enumerate() {
        c[k + 1] = c[k] + *s;
    }
    c
}

/// Cumulative integral toward the right end: `s[k] = int_{xk}^{x_end} w dx`,
/// `s[last] = 0`. Summed backward so the small remainders near the end do
/// not come from cancelling two large prefix sums.
pub fn suffix_uniform<R: Real>(x: &[R], w: &[R]) -> Vec<R> {
    let segs = segment_integrals(x, w);
    let mut s = vec![R::zero(); x.len().max(1)];
    for k in (0..segs.len()).rev() {
        s[k] = s[k + 1] + segs[k];
    }
    s
}

/// Piecewise cubic Hermite interpolant of a profile, with derivative data
/// taken from the integrator (values paired with stored first derivatives,
/// first derivatives paired with the exact second derivatives from the
/// right-hand side).
pub struct ProfileInterp<R> {
    r: Vec<R>,
    u: Vec<R>,
    du: Vec<R>,
    ddu: Vec<R>,
    v: Vec<R>,
    dv: Vec<R>,
    ddv: Vec<R>,
}

impl<R: Real> ProfileInterp<R> {
    pub fn new(profile: &RadialProfile<R>) -> Self {
        let params = &profile.params;
        let m = profile.samples.len();
        let mut r = Vec::with_capacity(m);
        let (mut u, mut du, mut ddu) = (
            Vec::with_capacity(m),
            Vec::with_capacity(m),
            Vec::with_capacity(m),
        );
        let (mut v, mut dv, mut ddv) = (
            Vec::with_capacity(m),
            Vec::with_capacity(m),
            Vec::with_capacity(m),
        );
        let nm1 = params.n_real() - R::one();
        let sp = params.sqrt_p();
        let pm1 = params.p() - R::one();
        for s in &profile.samples {
            r.push(s.r);
            u.push(s.u);
            du.push(s.du);
            v.push(s.v);
            dv.push(s.dv);
            let f = sp * s.u.max(R::zero()).powf(pm1);
            ddu.push(-nm1 * s.du / s.r - f * s.v);
            ddv.push(-nm1 * s.dv / s.r - f * s.u);
        }
        Self {
            r,
            u,
            du,
            ddu,
            v,
            dv,
            ddv,
        }
    }

    pub fn r_min(&self) -> R {
        self.r[0]
    }

    pub fn r_max(&self) -> R {
        *self.r.last().unwrap()
    }

    fn bracket(&self, x: R) -> usize {
        match self
            .r
            .binary_search_by(|probe| probe.partial_cmp(&x).unwrap())
        {
            Ok(i) => i.min(self.r.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.r.len() - 2),
        }
    }

    fn hermite(x0: R, x1: R, f0: R, f1: R, d0: R, d1: R, x: R) -> R {
        let h = x1 - x0;
        let t = (x - x0) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let two = lit::<R>(2.0);
        let three = lit::<R>(3.0);
        (two * t3 - three * t2 + R::one()) * f0
            + (t3 - two * t2 + t) * h * d0
            + (three * t2 - two * t3) * f1
            + (t3 - t2) * h * d1
    }

    pub fn u_at(&self, x: R) -> R {
        let i = self.bracket(x);
        Self::hermite(
            self.r[i],
            self.r[i + 1],
            self.u[i],
            self.u[i + 1],
            self.du[i],
            self.du[i + 1],
            x,
        )
    }

    pub fn v_at(&self, x: R) -> R {
        let i = self.bracket(x);
        Self::hermite(
            self.r[i],
            self.r[i + 1],
            self.v[i],
            self.v[i + 1],
            self.dv[i],
            self.dv[i + 1],
            x,
        )
    }

    pub fn du_at(&self, x: R) -> R {
        let i = self.bracket(x);
        Self::hermite(
            self.r[i],
            self.r[i + 1],
            self.du[i],
            self.du[i + 1],
            self.ddu[i],
            self.ddu[i + 1],
            x,
        )
    }

    pub fn dv_at(&self, x: R) -> R {
        let i = self.bracket(x);
        Self::hermite(
            self.r[i],
            self.r[i + 1],
            self.dv[i],
            self.dv[i + 1],
            self.ddv[i],
            self.ddv[i + 1],
            x,
        )
    }
}
