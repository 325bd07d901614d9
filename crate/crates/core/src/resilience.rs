//! Resistance, recoverability and composite resilience of a trajectory.
//!
//! All areas are losses measured against the baseline `NE(t_0)` with a unit
//! step and the right-rectangle rule, so larger values mean a worse outcome.
//! The shock phase integrates steps `(t_d, t_r]`, recovery `(t_r, t_rs]`.

use serde::Serialize;

use crate::simulation::Trajectory;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StagePhase {
    Shock,
    Recovery,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResilienceReport {
    /// Lowest NE strictly between `t_d` and `t_rs`.
    pub r: f64,
    pub roc_ds: Vec<f64>,
    pub roc_rs: Vec<f64>,
    pub lone_ds: f64,
    pub lone_rs: f64,
    /// `lone_ds + lone_rs`.
    pub resilience: f64,
    pub ne0: f64,
    /// False when the trajectory has no recovery phase.
    pub complete: bool,
}

/// NE samples of a phase including its starting point
/// (`t_d..=t_r` for shock, `t_r..=t_rs` for recovery).
fn phase_samples(traj: &Trajectory, phase: StagePhase) -> &[crate::simulation::Step] {
    let m = traj.markers;
    match phase {
        StagePhase::Shock => &traj.steps[m.td..=m.tr],
        StagePhase::Recovery => &traj.steps[m.tr..=m.trs],
    }
}

pub fn min_performance(traj: &Trajectory) -> f64 {
    let m = traj.markers;
    traj.steps
        .iter()
        .filter(|s| s.t > m.td && s.t < m.trs)
        .map(|s| s.ne)
        .chain(std::iter::once(traj.steps[m.tr].ne))
        .fold(traj.ne0(), f64::min)
}

/// Forward differences `NE(t_i) - NE(t_i - 1)` across a phase.
pub fn rate_of_change(traj: &Trajectory, phase: StagePhase) -> Vec<f64> {
    phase_samples(traj, phase)
        .windows(2)
        .map(|w| w[1].ne - w[0].ne)
        .collect()
}

/// Loss area `Σ (NE(t_0) - NE(t))` over the steps of a phase, excluding its
/// starting point. The sum is correctly rounded, so a flat phase gives exactly
/// zero and the result does not depend on summation order.
pub fn lone(traj: &Trajectory, phase: StagePhase) -> f64 {
    let ne0 = traj.ne0();
    let samples = &phase_samples(traj, phase)[1..];
    exact_sum(samples.iter().flat_map(|s| [ne0, -s.ne]))
}

/// Correctly rounded sum of finite values (Shewchuk partials, round-half-even
/// fix-up at the end).
fn exact_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut partials: Vec<f64> = Vec::new();
    for mut x in values {
        let mut i = 0;
        for j in 0..partials.len() {
            let mut y = partials[j];
            if x.abs() < y.abs() {
                std::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            let lo = y - (hi - x);
            if lo != 0.0 {
                partials[i] = lo;
                i += 1;
            }
            x = hi;
        }
        partials.truncate(i);
        partials.push(x);
    }
    let Some(mut n) = partials.len().checked_sub(1) else {
        return 0.0;
    };
    let mut hi = partials[n];
    let mut lo = 0.0;
    while n > 0 {
        let x = hi;
        n -= 1;
        let y = partials[n];
        hi = x + y;
        lo = y - (hi - x);
        if lo != 0.0 {
            break;
        }
    }
    if n > 0 && ((lo < 0.0 && partials[n - 1] < 0.0) || (lo > 0.0 && partials[n - 1] > 0.0)) {
        let y = lo * 2.0;
        let x = hi + y;
        if y == x - hi {
            hi = x;
        }
    }
    hi
}

pub fn summarize(traj: &Trajectory) -> ResilienceReport {
    let lone_ds = lone(traj, StagePhase::Shock);
    let lone_rs = lone(traj, StagePhase::Recovery);
    ResilienceReport {
        r: min_performance(traj),
        roc_ds: rate_of_change(traj, StagePhase::Shock),
        roc_rs: rate_of_change(traj, StagePhase::Recovery),
        lone_ds,
        lone_rs,
        resilience: lone_ds + lone_rs,
        ne0: traj.ne0(),
        complete: traj.recovery_steps() > 0,
    }
}
