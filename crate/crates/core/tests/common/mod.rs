#![allow(dead_code)]

//! Shared oracles for the integration-test suites. Everything here is
//! deliberately independent of the library's stepping and event machinery:
//! fixed-step classical RK4 with linear event interpolation.

/// Outcome of a fixed-step RK4 run.
pub struct Rk4Run {
    pub tag: &'static str,
    pub radius: f64,
    pub max_sync: f64,
    /// Final state (r, u, du, v, dv) at the horizon or the event step.
    pub end: [f64; 5],
}

/// Classical RK4 with step `h` from the quadratic series start at `r0`.
pub fn rk4_run(n: u32, p: f64, a: f64, r0: f64, h: f64, r_max: f64) -> Rk4Run {
    let sp = p.sqrt();
    let nn = n as f64;
    let nm1 = nn - 1.0;
    let rhs = |r: f64, y: &[f64; 4]| -> [f64; 4] {
        let f = sp * y[0].max(0.0).powf(p - 1.0);
        [y[1], -nm1 / r * y[1] - f * y[2], y[3], -nm1 / r * y[3] - f * y[0]]
    };
    // series start (quadratic terms suffice at r0 = 1e-4)
    let q2 = sp * r0 * r0 / (2.0 * nn);
    let d2 = sp * r0 / nn;
    let mut y = [1.0 - q2 * a, -d2 * a, a - q2, -d2];
    let mut r = r0;
    let mut max_sync = (y[0] - y[2]).abs();

    while r < r_max {
        let step = h.min(r_max - r);
        let k1 = rhs(r, &y);
        let y2 = add(&y, &k1, step / 2.0);
        let k2 = rhs(r + step / 2.0, &y2);
        let y3 = add(&y, &k2, step / 2.0);
        let k3 = rhs(r + step / 2.0, &y3);
        let y4 = add(&y, &k3, step);
        let k4 = rhs(r + step, &y4);
        let mut y_new = y;
        for i in 0..4 {
            y_new[i] += step / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let r_new = r + step;

        let cross_u = y[0] > 0.0 && y_new[0] <= 0.0;
        let cross_v = y[2] > 0.0 && y_new[2] <= 0.0;
        if cross_u || cross_v {
            let interp = |w0: f64, w1: f64| r + step * w0 / (w0 - w1);
            let ru = if cross_u {
                interp(y[0], y_new[0])
            } else {
                f64::INFINITY
            };
            let rv = if cross_v {
                interp(y[2], y_new[2])
            } else {
                f64::INFINITY
            };
            let (tag, radius) = if (ru - rv).abs() < 1e-8 {
                ("both_vanished", ru.min(rv))
            } else if ru < rv {
                ("u_vanished", ru)
            } else {
                ("v_vanished", rv)
            };
            return Rk4Run {
                tag,
                radius,
                max_sync,
                end: [r_new, y_new[0], y_new[1], y_new[2], y_new[3]],
            };
        }

        y = y_new;
        r = r_new;
        max_sync = max_sync.max((y[0] - y[2]).abs());
    }
    Rk4Run {
        tag: "entire_positive",
        radius: r_max,
        max_sync,
        end: [r, y[0], y[1], y[2], y[3]],
    }
}

fn add(y: &[f64; 4], k: &[f64; 4], c: f64) -> [f64; 4] {
    let mut out = *y;
    for i in 0..4 {
        out[i] += c * k[i];
    }
    out
}

/// Richardson-extrapolated central differences: `(f'(x), f''(x))`.
pub fn richardson_derivatives(f: &dyn Fn(f64) -> f64, x: f64, h: f64) -> (f64, f64) {
    let d1 = |h: f64| (f(x + h) - f(x - h)) / (2.0 * h);
    let d2 = |h: f64| (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
    (
        (4.0 * d1(h / 2.0) - d1(h)) / 3.0,
        (4.0 * d2(h / 2.0) - d2(h)) / 3.0,
    )
}
