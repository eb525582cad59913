//! The nine challenge environments and a name-based registry.

pub mod boulder;
pub mod catch;
pub mod golf;
pub mod memory_corridor;
pub mod roadrunner;
pub mod study;
pub mod supermarket;
pub mod tamagotchi;
pub mod trashbot;

use serde::de::DeserializeOwned;
use serde_json::Value;

use crate::env::Environment;
use crate::error::EnvError;

/// Catalog entry for one environment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnvInfo {
    pub label: char,
    pub name: &'static str,
    pub challenge: &'static str,
    pub parameters: &'static str,
}

pub const CATALOG: [EnvInfo; 9] = [
    EnvInfo { label: 'a', name: "boulder", challenge: "Exploration", parameters: "height, num_grips" },
    EnvInfo { label: 'b', name: "roadrunner", challenge: "Policy: on-policy vs off-policy", parameters: "width, negative_reward, max_speed" },
    EnvInfo {
        label: 'c',
        name: "study",
        challenge: "Credit assignment depth",
        parameters: "num_other_actions, reward_noise_mean, reward_noise_sigma, total_days, lecture_days, lectures_needed, energy_needed",
    },
    EnvInfo { label: 'd', name: "catch", challenge: "State: dimensionality", parameters: "rows, columns, observation_type" },
    EnvInfo { label: 'e', name: "memory_corridor", challenge: "State: partial observability", parameters: "num_doors" },
    EnvInfo { label: 'f', name: "tamagotchi", challenge: "State: amount of signal", parameters: "tau, max_msg_length, vocab_size" },
    EnvInfo { label: 'g', name: "trashbot", challenge: "State/action: discrete vs continuous", parameters: "action_mode, num_bins, container_width" },
    EnvInfo { label: 'h', name: "golf", challenge: "Dynamics: stochasticity", parameters: "stochasticity_level, width, length, max_hits" },
    EnvInfo { label: 'i', name: "supermarket", challenge: "Model-based reinforcement learning", parameters: "step_timeout, noise" },
];

pub fn info(name: &str) -> Option<&'static EnvInfo> {
    CATALOG.iter().find(|e| e.name == name)
}

fn config<C: DeserializeOwned + Default>(params: &Value) -> Result<C, EnvError> {
    if params.is_null() {
        return Ok(C::default());
    }
    serde_json::from_value(params.clone()).map_err(|e| EnvError::Parameter(e.to_string()))
}

/// Build an environment by name from a JSON parameter object (`null` for defaults).
pub fn build(name: &str, params: &Value, seed: u64) -> Result<Box<dyn Environment>, EnvError> {
    Ok(match name {
        "boulder" => Box::new(boulder::make(config(params)?, seed)?),
        "roadrunner" => Box::new(roadrunner::make(config(params)?, seed)?),
        "study" => Box::new(study::make(config(params)?, seed)?),
        "catch" => Box::new(catch::make(config(params)?, seed)?),
        "memory_corridor" => Box::new(memory_corridor::make(config(params)?, seed)?),
        "tamagotchi" => Box::new(tamagotchi::make(config(params)?, seed)?),
        "trashbot" => Box::new(trashbot::make(config(params)?, seed)?),
        "golf" => Box::new(golf::make(config(params)?, seed)?),
        "supermarket" => Box::new(supermarket::make(config(params)?, seed)?),
        other => {
            let names: Vec<&str> = CATALOG.iter().map(|e| e.name).collect();
            return Err(EnvError::Parameter(format!("unknown environment '{other}'; expected one of {}", names.join(", "))));
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn catalog_is_ordered_a_to_i() {
        let labels: String = CATALOG.iter().map(|e| e.label).collect();
        assert_eq!(labels, "abcdefghi");
        assert_eq!(info("boulder").unwrap().challenge, "Exploration");
    }

    #[test]
    fn every_catalog_entry_builds() {
        for e in CATALOG {
            let env = build(e.name, &Value::Null, 0).unwrap();
            assert_eq!(env.name(), e.name);
        }
    }

    #[test]
    fn unknown_names_and_keys_rejected() {
        assert!(build("chess", &Value::Null, 0).is_err());
        let err = build("boulder", &json!({"heigth": 3}), 0).err().unwrap();
        assert!(err.to_string().contains("heigth"));
    }
}
