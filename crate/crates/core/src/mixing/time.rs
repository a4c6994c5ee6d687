use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::mixing::TimeMode;

/// Bounds for [`time_search`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeLimits {
    /// Real-time horizon; defaults to `2π·10⁴ / min θ_r`.
    pub t_max: Option<f64>,
    /// Largest integer time scanned.
    pub integer_budget: u64,
    /// Cap on real-time grid evaluations.
    pub max_grid_points: u64,
}

impl Default for TimeLimits {
    fn default() -> Self {
        TimeLimits {
            t_max: None,
            integer_budget: 1_000_000,
            max_grid_points: 200_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeHit {
    pub t: f64,
    pub deficit: f64,
}

/// No time within the limits met the target; `best` is the smallest deficit
/// seen and `horizon` the largest time examined.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BudgetExhausted {
    pub best: TimeHit,
    pub horizon: f64,
}

/// `max_r |e^{i(tθ_r + σ_rπ)} − 1|`.
pub fn phase_deficit(angles: &[f64], sigma: &[u8], t: f64) -> f64 {
    angles
        .iter()
        .zip(sigma)
        .map(|(&theta, &s)| {
            let phase = (t * theta + f64::from(s) * PI).rem_euclid(2.0 * PI);
            2.0 * (phase / 2.0).sin().abs()
        })
        .fold(0.0, f64::max)
}

const CHUNK: u64 = 1 << 16;

/// Scans grid indices `0..count` in ordered parallel batches and returns
/// the first accepted point, plus the best grid point seen. `probe` maps an
/// index to its deficit and, when the point qualifies, an accepted hit.
fn scan<F>(count: u64, probe: F) -> (Option<TimeHit>, (u64, f64))
where
    F: Fn(u64) -> (f64, Option<TimeHit>) + Sync,
{
    let chunks = count.div_ceil(CHUNK);
    let batch = (rayon::current_num_threads() as u64).max(1) * 4;
    let mut best = (0u64, f64::INFINITY);
    let mut start = 0;
    while start < chunks {
        let end = (start + batch).min(chunks);
        let results: Vec<(Option<TimeHit>, (u64, f64))> = (start..end)
            .into_par_iter()
            .map(|c| {
                let lo = c * CHUNK;
                let hi = (lo + CHUNK).min(count);
                let mut local_best = (lo, f64::INFINITY);
                for i in lo..hi {
                    let (d, hit) = probe(i);
                    if d < local_best.1 {
                        local_best = (i, d);
                    }
                    if hit.is_some() {
                        return (hit, local_best);
                    }
                }
                (None, local_best)
            })
            .collect();
        for (hit, local_best) in results {
            if local_best.1 < best.1 {
                best = local_best;
            }
            if hit.is_some() {
                return (hit, best);
            }
        }
        start = end;
    }
    (None, best)
}

/// Golden-section minimisation of the deficit on `[lo, hi]`.
fn refine(angles: &[f64], sigma: &[u8], lo: f64, hi: f64) -> TimeHit {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let f = |t: f64| phase_deficit(angles, sigma, t);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    let t = (a + b) / 2.0;
    TimeHit { t, deficit: f(t) }
}

/// Searches for `t` with `max_r |e^{i(tθ_r + σ_rπ)} − 1| < ε`.
///
/// Integer mode scans `t = 0, 1, …, budget`. Real mode solves a single
/// angle in closed form; several angles are scanned on a grid of step
/// `ε/(4·max θ)` up to the horizon, and the first grid point close enough is
/// refined locally.
pub fn time_search(
    angles: &[f64],
    sigma: &[u8],
    eps: f64,
    mode: TimeMode,
    limits: &TimeLimits,
) -> Result<TimeHit, BudgetExhausted> {
    let deficit = |t: f64| phase_deficit(angles, sigma, t);
    if sigma.iter().all(|&s| s == 0) {
        return Ok(TimeHit {
            t: 0.0,
            deficit: deficit(0.0),
        });
    }
    match mode {
        TimeMode::Integer => {
            let count = limits.integer_budget + 1;
            let (hit, best) = scan(count, |i| {
                let d = deficit(i as f64);
                (
                    d,
                    (d < eps).then_some(TimeHit {
                        t: i as f64,
                        deficit: d,
                    }),
                )
            });
            hit.ok_or(BudgetExhausted {
                best: TimeHit {
                    t: best.0 as f64,
                    deficit: best.1,
                },
                horizon: limits.integer_budget as f64,
            })
        }
        TimeMode::Real if angles.len() == 1 => {
            let theta = angles[0];
            let t = (2.0 * PI - f64::from(sigma[0]) * PI).rem_euclid(2.0 * PI) / theta;
            let hit = TimeHit {
                t,
                deficit: deficit(t),
            };
            if hit.deficit < eps {
                Ok(hit)
            } else {
                Err(BudgetExhausted {
                    best: hit,
                    horizon: t,
                })
            }
        }
        TimeMode::Real => {
            let min_theta = angles.iter().copied().fold(f64::INFINITY, f64::min);
            let max_theta = angles.iter().copied().fold(0.0, f64::max);
            let step = eps / (4.0 * max_theta);
            let t_max = limits.t_max.unwrap_or(2.0 * PI * 1e4 / min_theta);
            let full = (t_max / step).ceil() as u64 + 1;
            let count = full.min(limits.max_grid_points);
            if count < full {
                log::warn!(
                    "real-time grid truncated to {count} points (horizon {:.3e})",
                    count as f64 * step
                );
            }
            // Grid neighbours of a solution can be up to ε/8 worse.
            let (hit, best) = scan(count, |i| {
                let centre = i as f64 * step;
                let d = deficit(centre);
                if d >= 1.25 * eps {
                    return (d, None);
                }
                let refined = refine(angles, sigma, (centre - step).max(0.0), centre + step);
                let chosen = if refined.deficit < d {
                    refined
                } else {
                    TimeHit {
                        t: centre,
                        deficit: d,
                    }
                };
                (d, (chosen.deficit < eps).then_some(chosen))
            });
            if let Some(hit) = hit {
                return Ok(hit);
            }
            Err(BudgetExhausted {
                best: TimeHit {
                    t: best.0 as f64 * step,
                    deficit: best.1,
                },
                horizon: (count - 1) as f64 * step,
            })
        }
    }
}
