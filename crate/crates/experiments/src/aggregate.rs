//! Learning curves averaged over repetitions.

use crate::config::EvalMode;
use crate::runner::{ArmRecord, RunRecord};

#[derive(Clone, Debug, PartialEq)]
pub struct CurveRow {
    pub step: usize,
    pub mean_return: f64,
    pub stderr: f64,
    pub agent: String,
    pub env: String,
}

/// Mean and standard error of the mean (sample standard deviation over `sqrt(n)`).
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Centered moving average, window truncated at the edges.
pub fn moving_average(values: &[f64], window: usize) -> Vec<f64> {
    let (left, right) = ((window - 1) / 2, window / 2);
    (0..values.len())
        .map(|i| {
            let lo = i.saturating_sub(left);
            let hi = (i + right + 1).min(values.len());
            values[lo..hi].iter().sum::<f64>() / (hi - lo) as f64
        })
        .collect()
}

/// Per-repetition curve points `(step, value)` for one arm.
fn repetition_points(arm: &ArmRecord, record: &RunRecord) -> Vec<Vec<(usize, f64)>> {
    arm.repetitions
        .iter()
        .map(|rep| match record.eval {
            EvalMode::GreedyEvery(_) => rep.evaluations.iter().map(|e| (e.step, e.ret)).collect(),
            EvalMode::Online => {
                let v = rep.step_values();
                v.chunks(record.bin_size)
                    .enumerate()
                    .map(|(i, c)| (i * record.bin_size + c.len(), c.iter().sum::<f64>() / c.len() as f64))
                    .collect()
            }
        })
        .collect()
}

pub fn aggregate(record: &RunRecord, window: usize) -> Vec<CurveRow> {
    assert!(window >= 1, "smoothing window must be at least 1");
    let mut rows = Vec::new();
    for arm in &record.arms {
        let points = repetition_points(arm, record);
        let len = points.iter().map(Vec::len).min().unwrap_or(0);
        let steps: Vec<usize> = points.first().map(|p| p[..len].iter().map(|x| x.0).collect()).unwrap_or_default();
        let (means, errs): (Vec<f64>, Vec<f64>) = (0..len)
            .map(|i| mean_stderr(&points.iter().map(|p| p[i].1).collect::<Vec<_>>()))
            .unzip();
        let (means, errs) = (moving_average(&means, window), moving_average(&errs, window));
        for i in 0..len {
            rows.push(CurveRow {
                step: steps[i],
                mean_return: means[i],
                stderr: errs[i],
                agent: arm.agent.clone(),
                env: arm.env.clone(),
            });
        }
    }
    rows
}

/// Last curve value per (agent, env), in arm order.
pub fn final_means(curve: &[CurveRow]) -> Vec<(String, String, f64, f64)> {
    let mut out: Vec<(String, String, f64, f64)> = Vec::new();
    for r in curve {
        match out.iter_mut().find(|o| o.0 == r.agent && o.1 == r.env) {
            Some(o) => {
                o.2 = r.mean_return;
                o.3 = r.stderr;
            }
            None => out.push((r.agent.clone(), r.env.clone(), r.mean_return, r.stderr)),
        }
    }
    out
}
