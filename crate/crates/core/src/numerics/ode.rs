//! Dormand–Prince 5(4) integrator with event location.
//!
//! Events are functions of the state that start positive; integration stops at
//! the first accepted step that drives any of them to `<= 0`. The crossing is
//! then pinned down by Brent's method on the length of a single step taken
//! from the last accepted state, so located events carry the integrator's own
//! local accuracy instead of an interpolant's.

use crate::error::{Error, Result};
use crate::numerics::roots::brent;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone, Copy)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: f64,
    pub h_min: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for Dopri5 {
    fn default() -> Self {
        Self {
            rtol: 1e-11,
            atol: 1e-13,
            h_init: 1e-3,
            h_min: 1e-14,
            h_max: f64::INFINITY,
            max_steps: 200_000,
        }
    }
}

/// Result of a single trial step.
#[derive(Debug, Clone, Copy)]
pub struct Trial<const N: usize> {
    pub y: [f64; N],
    /// Scaled RMS error norm; the step is acceptable when `<= 1`.
    pub err: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Stop {
    /// Event `index` reached zero at the final state.
    Event(usize),
    /// Integration reached `t_end` with no event.
    End,
}

#[derive(Debug, Clone)]
pub struct Solution<const N: usize> {
    pub t: Vec<f64>,
    pub y: Vec<[f64; N]>,
    pub stop: Stop,
    pub steps: usize,
}

impl<const N: usize> Solution<N> {
    pub fn last(&self) -> (f64, [f64; N]) {
        (
            *self.t.last().expect("solution holds the initial state"),
            *self.y.last().expect("solution holds the initial state"),
        )
    }
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        *o += h * acc;
    }
    out
}

impl Dopri5 {
    pub fn with_tolerances(rtol: f64, atol: f64) -> Self {
        Self {
            rtol,
            atol,
            ..Self::default()
        }
    }

    /// One Dormand–Prince step of size `h` from `(t, y)`.
    pub fn trial<const N: usize, F>(&self, f: &F, t: f64, y: &[f64; N], h: f64) -> Trial<N>
    where
        F: Fn(f64, &[f64; N]) -> [f64; N],
    {
        let k1 = f(t, y);
        let k2 = f(t + C2 * h, &axpy(y, h, &[(A21, &k1)]));
        let k3 = f(t + C3 * h, &axpy(y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(t + C4 * h, &axpy(y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(
            t + C5 * h,
            &axpy(y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = f(
            t + h,
            &axpy(
                y,
                h,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            ),
        );
        let y_new = axpy(
            y,
            h,
            &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
        );
        let k7 = f(t + h, &y_new);

        let mut sum = 0.0;
        for i in 0..N {
            let e = h
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let scale = self.atol + self.rtol * y[i].abs().max(y_new[i].abs());
            sum += (e / scale).powi(2);
        }
        let err = (sum / N as f64).sqrt();
        Trial {
            y: y_new,
            err: if err.is_finite() { err } else { f64::INFINITY },
        }
    }

    fn next_h(h: f64, err: f64) -> f64 {
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h * factor
    }

    /// Integrate from `t0` until `t_end` or the first event crossing.
    pub fn solve<const N: usize, F, G>(
        &self,
        f: F,
        t0: f64,
        y0: [f64; N],
        t_end: f64,
        events: &[G],
    ) -> Result<Solution<N>>
    where
        F: Fn(f64, &[f64; N]) -> [f64; N],
        G: Fn(f64, &[f64; N]) -> f64,
    {
        let mut sol = Solution {
            t: vec![t0],
            y: vec![y0],
            stop: Stop::End,
            steps: 0,
        };
        let (mut t, mut y) = (t0, y0);
        let mut h = self.h_init.min(t_end - t0);

        while t < t_end {
            if sol.steps >= self.max_steps {
                return Err(Error::Integration(format!(
                    "step budget of {} exhausted at t = {t}",
                    self.max_steps
                )));
            }
            let h_try = h.min(t_end - t).min(self.h_max);
            let trial = self.trial(&f, t, &y, h_try);
            if trial.err > 1.0 {
                h = Self::next_h(h_try, trial.err).min(0.9 * h_try);
                if h < self.h_min {
                    return Err(Error::Integration(format!(
                        "step size underflow ({h:e}) at t = {t}, state {y:?}"
                    )));
                }
                continue;
            }
            sol.steps += 1;

            let fired: Vec<usize> = events
                .iter()
                .enumerate()
                .filter(|(_, g)| g(t + h_try, &trial.y) <= 0.0)
                .map(|(i, _)| i)
                .collect();
            if !fired.is_empty() {
                let mut best: Option<(f64, usize)> = None;
                for &i in &fired {
                    let g = &events[i];
                    let located = brent(
                        |hh| {
                            let y_h = self.trial(&f, t, &y, hh).y;
                            g(t + hh, &y_h)
                        },
                        0.0,
                        h_try,
                        1e-15 * (t.abs() + h_try),
                    );
                    let hh = match located {
                        Ok(hh) => hh,
                        // endpoint already at or below zero without a clean bracket
                        Err(_) => h_try,
                    };
                    if best.is_none_or(|(b, _)| hh < b) {
                        best = Some((hh, i));
                    }
                }
                let (hh, i) = best.expect("at least one event fired");
                let y_ev = self.trial(&f, t, &y, hh).y;
                sol.t.push(t + hh);
                sol.y.push(y_ev);
                sol.stop = Stop::Event(i);
                return Ok(sol);
            }

            t += h_try;
            y = trial.y;
            if y.iter().any(|v| !v.is_finite()) {
                return Err(Error::Integration(format!("state became non-finite at t = {t}")));
            }
            sol.t.push(t);
            sol.y.push(y);
            h = Self::next_h(h_try, trial.err);
        }
        Ok(sol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Event = fn(f64, &[f64; 2]) -> f64;

    #[test]
    fn harmonic_oscillator_period() {
        let solver = Dopri5::with_tolerances(1e-12, 1e-14);
        let sol = solver
            .solve(
                |_, y: &[f64; 2]| [y[1], -y[0]],
                0.0,
                [1.0, 0.0],
                2.0 * std::f64::consts::PI,
                &[] as &[Event],
            )
            .unwrap();
        let (_, y) = sol.last();
        assert!((y[0] - 1.0).abs() < 1e-10);
        assert!(y[1].abs() < 1e-10);
        assert_eq!(sol.stop, Stop::End);
    }

    #[test]
    fn event_is_located_to_step_accuracy() {
        let solver = Dopri5::with_tolerances(1e-12, 1e-14);
        let ev: [Event; 1] = [|_, y| y[0]];
        let sol = solver
            .solve(|_, y: &[f64; 2]| [y[1], -y[0]], 0.0, [1.0, 0.0], 10.0, &ev)
            .unwrap();
        let (t, y) = sol.last();
        assert_eq!(sol.stop, Stop::Event(0));
        assert!((t - std::f64::consts::FRAC_PI_2).abs() < 1e-11);
        assert!(y[0].abs() < 1e-11);
    }

    #[test]
    fn exponential_decay() {
        let solver = Dopri5::default();
        let sol = solver
            .solve(|_, y: &[f64; 1]| [-y[0]], 0.0, [1.0], 3.0, &[] as &[fn(f64, &[f64; 1]) -> f64])
            .unwrap();
        let (_, y) = sol.last();
        assert!((y[0] - (-3.0f64).exp()).abs() < 1e-11);
    }
}
