/// Discounted sum `Σ γ^i · r_i`; zero for an empty slice.
///
/// Evaluated back to front so that it satisfies
/// `G(r) = r[0] + γ · G(r[1..])` exactly in floating point.
pub fn discounted_return(rewards: &[f64], gamma: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&gamma), "discount must lie in [0, 1]");
    rewards.iter().rev().fold(0.0, |acc, r| r + gamma * acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(discounted_return(&[1.0, 1.0, 1.0], 0.0), 1.0);
        assert!((discounted_return(&[0.0, 0.0, 1.0], 0.9) - 0.81).abs() < 1e-12);
        assert_eq!(discounted_return(&[-3.5], 0.37), -3.5);
        assert_eq!(discounted_return(&[], 0.5), 0.0);
    }

    proptest! {
        #[test]
        fn recursive_definition(rewards in prop::collection::vec(-10.0f64..10.0, 1..30), gamma in 0.0f64..=1.0) {
            let whole = discounted_return(&rewards, gamma);
            let rest = discounted_return(&rewards[1..], gamma);
            prop_assert_eq!(whole, rewards[0] + gamma * rest);
        }

        #[test]
        fn matches_forward_sum(rewards in prop::collection::vec(-10.0f64..10.0, 0..30), gamma in 0.0f64..=1.0) {
            let forward: f64 = rewards.iter().enumerate().map(|(i, r)| gamma.powi(i as i32) * r).sum();
            prop_assert!((discounted_return(&rewards, gamma) - forward).abs() < 1e-9);
        }
    }
}
