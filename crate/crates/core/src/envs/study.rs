//! Study: credit-assignment depth.
//!
//! Each day the student picks Study, Sleep, Go out, or one of several
//! irrelevant actions. Studying only raises knowledge on lecture days; sleep
//! and going out move energy up and down. Every action pays a noisy reward
//! around a per-instance mean, and studying on the exam day (day `H`) with
//! enough knowledge and energy pays an extra 10.

use serde::{Deserialize, Serialize};

use crate::env::{Dynamics, EnvironmentHandle, Transition};
use crate::error::EnvError;
use crate::rng::RngStream;
use crate::space::{Element, SpaceDescriptor};

pub const STUDY: usize = 0;
pub const SLEEP: usize = 1;
pub const GO_OUT: usize = 2;
pub const MAX_LEVEL: usize = 4;
pub const EXAM_REWARD: f64 = 10.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StudyConfig {
    pub num_other_actions: usize,
    pub reward_noise_mean: f64,
    pub reward_noise_sigma: f64,
    pub total_days: usize,
    pub lecture_days: usize,
    pub lectures_needed: usize,
    pub energy_needed: usize,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            num_other_actions: 2,
            reward_noise_mean: 1.0,
            reward_noise_sigma: 0.5,
            total_days: 10,
            lecture_days: 3,
            lectures_needed: 3,
            energy_needed: 1,
        }
    }
}

impl StudyConfig {
    pub fn validate(&self) -> Result<(), EnvError> {
        let err = |m: &str| Err(EnvError::Parameter(m.into()));
        if self.total_days < 2 {
            return err("study total_days must be >= 2");
        }
        if self.lecture_days > self.total_days - 1 {
            return err("lecture days must fit before the exam day");
        }
        if self.lectures_needed > self.lecture_days {
            return err("lectures_needed cannot exceed lecture_days");
        }
        if self.energy_needed > MAX_LEVEL {
            return err("energy_needed must be <= 4");
        }
        if !(self.reward_noise_mean >= 0.0) || !(self.reward_noise_sigma >= 0.0) {
            return err("reward noise parameters must be >= 0");
        }
        Ok(())
    }

    pub fn num_actions(&self) -> usize {
        3 + self.num_other_actions
    }
}

/// `L` lecture days spread evenly over days `1..H` (day `H` is the exam).
pub fn lecture_schedule(total_days: usize, lecture_days: usize) -> Vec<usize> {
    let span = total_days - 1;
    (0..lecture_days).map(|i| 1 + i * span / lecture_days).collect()
}

#[derive(Clone, Debug)]
pub struct Study {
    config: StudyConfig,
    action_means: Vec<f64>,
    lectures: Vec<bool>,
    pub knowledge: usize,
    pub energy: usize,
    pub day: usize,
}

impl Study {
    /// Per-action reward means are drawn uniformly from `[-m, 0]` using `layout_rng`.
    pub fn new(config: StudyConfig, layout_rng: &mut RngStream) -> Result<Self, EnvError> {
        config.validate()?;
        let m = config.reward_noise_mean;
        let action_means = (0..config.num_actions()).map(|_| -m * layout_rng.uniform()).collect();
        let mut lectures = vec![false; config.total_days + 1];
        for d in lecture_schedule(config.total_days, config.lecture_days) {
            lectures[d] = true;
        }
        Ok(Self { config, action_means, lectures, knowledge: 0, energy: 0, day: 0 })
    }

    pub fn config(&self) -> &StudyConfig {
        &self.config
    }

    pub fn action_means(&self) -> &[f64] {
        &self.action_means
    }

    pub fn set_action_means(&mut self, means: Vec<f64>) {
        assert_eq!(means.len(), self.config.num_actions());
        self.action_means = means;
    }

    pub fn is_lecture_day(&self, day: usize) -> bool {
        self.lectures.get(day).copied().unwrap_or(false)
    }

    fn observe(&self) -> Element {
        Element::MultiDiscrete(vec![self.knowledge, self.energy, self.day])
    }

    pub fn step_action(&mut self, action: usize, rng: &mut RngStream) -> Transition {
        self.day += 1;
        let today = self.day;
        match action {
            STUDY if self.is_lecture_day(today) => self.knowledge = (self.knowledge + 1).min(MAX_LEVEL),
            SLEEP => self.energy = (self.energy + 1).min(MAX_LEVEL),
            GO_OUT => self.energy = self.energy.saturating_sub(1),
            _ => {}
        }
        let mut reward = rng.normal(self.action_means[action], self.config.reward_noise_sigma);
        let exam = today == self.config.total_days;
        let mut passed = 0.0;
        if exam
            && action == STUDY
            && self.knowledge >= self.config.lectures_needed
            && self.energy > self.config.energy_needed
        {
            reward += EXAM_REWARD;
            passed = 1.0;
        }
        let t = Transition::new(self.observe(), reward, exam);
        if exam {
            t.with_info("passed", passed)
        } else {
            t
        }
    }
}

impl Dynamics for Study {
    fn name(&self) -> &'static str {
        "study"
    }

    fn observation_space(&self) -> SpaceDescriptor {
        SpaceDescriptor::MultiDiscrete { dims: vec![MAX_LEVEL + 1, MAX_LEVEL + 1, self.config.total_days + 1] }
    }

    fn action_space(&self) -> SpaceDescriptor {
        SpaceDescriptor::Discrete { n: self.config.num_actions() }
    }

    fn default_max_steps(&self) -> usize {
        self.config.total_days + 1
    }

    /// Gaussian noise is unbounded.
    fn reward_range(&self) -> (f64, f64) {
        if self.config.reward_noise_sigma == 0.0 {
            (-self.config.reward_noise_mean, EXAM_REWARD)
        } else {
            (f64::NEG_INFINITY, f64::INFINITY)
        }
    }

    fn reset(&mut self, _rng: &mut RngStream) -> Element {
        self.knowledge = 0;
        self.energy = 0;
        self.day = 0;
        self.observe()
    }

    fn transition(&mut self, action: &Element, rng: &mut RngStream) -> Transition {
        self.step_action(action.as_discrete().expect("validated discrete action"), rng)
    }

    fn render(&self) -> String {
        let cal: String = (1..=self.config.total_days)
            .map(|d| {
                if d == self.config.total_days {
                    'X'
                } else if self.is_lecture_day(d) {
                    'L'
                } else {
                    '.'
                }
            })
            .collect();
        let marker = format!("{}^", " ".repeat(self.day));
        format!(
            "days  {cal}\n     {marker}\nknowledge {}/{}  energy {}/{}  (need k>={} e>{})",
            self.knowledge, MAX_LEVEL, self.energy, MAX_LEVEL, self.config.lectures_needed, self.config.energy_needed
        )
    }
}

pub fn make(config: StudyConfig, seed: u64) -> Result<EnvironmentHandle<Study>, EnvError> {
    let mut layout = RngStream::new(seed).child("layout");
    Ok(EnvironmentHandle::new(Study::new(config, &mut layout)?, seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quiet(cfg: StudyConfig) -> Study {
        let mut s = Study::new(StudyConfig { reward_noise_sigma: 0.0, ..cfg }, &mut RngStream::new(0)).unwrap();
        let n = s.config().num_actions();
        s.set_action_means(vec![0.0; n]);
        s
    }

    #[test]
    fn schedule_is_even_and_before_exam() {
        assert_eq!(lecture_schedule(10, 3), vec![1, 4, 7]);
        assert_eq!(lecture_schedule(10, 9), (1..10).collect::<Vec<_>>());
        for (h, l) in [(5, 2), (20, 6), (3, 1)] {
            let s = lecture_schedule(h, l);
            assert_eq!(s.len(), l);
            assert!(s.windows(2).all(|w| w[0] < w[1]));
            assert!(s.iter().all(|&d| d >= 1 && d < h));
        }
    }

    #[test]
    fn sleep_clamps_at_max() {
        let mut s = quiet(StudyConfig::default());
        s.energy = 4;
        s.step_action(SLEEP, &mut RngStream::new(1));
        assert_eq!(s.energy, 4);
    }

    #[test]
    fn going_out_clamps_at_zero() {
        let mut s = quiet(StudyConfig::default());
        s.step_action(GO_OUT, &mut RngStream::new(1));
        assert_eq!(s.energy, 0);
    }

    #[test]
    fn study_only_counts_on_lecture_days() {
        let mut s = quiet(StudyConfig::default());
        // day 1 is a lecture day, day 2 is not
        s.step_action(STUDY, &mut RngStream::new(1));
        assert_eq!(s.knowledge, 1);
        s.step_action(STUDY, &mut RngStream::new(1));
        assert_eq!(s.knowledge, 1);
    }

    #[test]
    fn exam_pays_exactly_ten() {
        let cfg = StudyConfig::default();
        let mut s = quiet(cfg.clone());
        s.knowledge = cfg.lectures_needed;
        s.energy = cfg.energy_needed + 1;
        s.day = cfg.total_days - 1;
        let t = s.step_action(STUDY, &mut RngStream::new(1));
        assert!(t.terminated);
        assert_eq!(t.reward, 10.0);
        assert_eq!(t.info.get("passed"), Some(&1.0));
    }

    #[test]
    fn exam_fails_without_energy() {
        let cfg = StudyConfig::default();
        let mut s = quiet(cfg.clone());
        s.knowledge = 4;
        s.energy = cfg.energy_needed;
        s.day = cfg.total_days - 1;
        let t = s.step_action(STUDY, &mut RngStream::new(1));
        assert!(t.terminated);
        assert_eq!(t.reward, 0.0);
    }

    #[test]
    fn action_means_within_range() {
        let cfg = StudyConfig { reward_noise_mean: 2.0, num_other_actions: 7, ..Default::default() };
        let s = Study::new(cfg, &mut RngStream::new(5)).unwrap();
        assert!(s.action_means().iter().all(|m| (-2.0..=0.0).contains(m)));
    }

    #[test]
    fn validation() {
        assert!(StudyConfig { lectures_needed: 4, lecture_days: 3, ..Default::default() }.validate().is_err());
        assert!(StudyConfig { lecture_days: 10, total_days: 10, ..Default::default() }.validate().is_err());
        assert!(StudyConfig { reward_noise_sigma: -1.0, ..Default::default() }.validate().is_err());
    }
}
