//! Keyboard bindings for human play.

use std::fmt;

use rlcourse::envs::{golf, study, supermarket, tamagotchi};
use rlcourse::{Element, SpaceDescriptor};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Key {
    Char(char),
    Up,
    Down,
    Left,
    Right,
    Quit,
}

impl fmt::Display for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Key::Char(' ') => write!(f, "space"),
            Key::Char(c) => write!(f, "{c}"),
            Key::Up => write!(f, "up"),
            Key::Down => write!(f, "down"),
            Key::Left => write!(f, "left"),
            Key::Right => write!(f, "right"),
            Key::Quit => write!(f, "q"),
        }
    }
}

/// Splits raw terminal input into keys. Arrow keys arrive as `ESC [ A..D`;
/// `q` and Ctrl-C quit.
pub fn parse_keys(bytes: &[u8]) -> Vec<Key> {
    let mut keys = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == 0x1b && i + 2 < bytes.len() && bytes[i + 1] == b'[' {
            let arrow = match bytes[i + 2] {
                b'A' => Some(Key::Up),
                b'B' => Some(Key::Down),
                b'C' => Some(Key::Right),
                b'D' => Some(Key::Left),
                _ => None,
            };
            if let Some(k) = arrow {
                keys.push(k);
                i += 3;
                continue;
            }
        }
        keys.push(match bytes[i] {
            b'q' | 0x03 => Key::Quit,
            b => Key::Char(char::from(b)),
        });
        i += 1;
    }
    keys
}

#[derive(Clone, Debug)]
pub struct Binding {
    pub key: Key,
    pub label: String,
    pub action: Element,
}

#[derive(Clone, Debug)]
pub struct KeyMap {
    pub bindings: Vec<Binding>,
}

fn digit(i: usize) -> Key {
    Key::Char(char::from(b'1' + i as u8))
}

fn bind(key: Key, label: impl Into<String>, action: Element) -> Binding {
    Binding { key, label: label.into(), action }
}

const TRASHBOT_STEP: f64 = 0.25;

impl KeyMap {
    pub fn for_env(name: &str, actions: &SpaceDescriptor) -> KeyMap {
        let d = Element::Discrete;
        let bindings = match (name, actions) {
            ("boulder", SpaceDescriptor::Discrete { n }) => {
                (0..(*n).min(9)).map(|i| bind(digit(i), format!("grip {}", i + 1), d(i))).collect()
            }
            ("memory_corridor", SpaceDescriptor::Discrete { n }) => {
                (0..(*n).min(9)).map(|i| bind(digit(i), format!("door {}", i + 1), d(i))).collect()
            }
            ("roadrunner", _) => vec![
                bind(Key::Left, "brake", d(0)),
                bind(Key::Down, "hold speed", d(1)),
                bind(Key::Right, "accelerate", d(2)),
            ],
            ("catch", _) => vec![
                bind(Key::Left, "move left", d(0)),
                bind(Key::Down, "stay", d(1)),
                bind(Key::Right, "move right", d(2)),
            ],
            ("study", SpaceDescriptor::Discrete { n }) => (0..(*n).min(9))
                .map(|i| {
                    let label = match i {
                        study::STUDY => "study".to_string(),
                        study::SLEEP => "sleep".to_string(),
                        study::GO_OUT => "go out".to_string(),
                        other => format!("other {}", other - study::GO_OUT),
                    };
                    bind(digit(i), label, d(i))
                })
                .collect(),
            ("golf", _) => golf::SWINGS.iter().enumerate().map(|(i, s)| bind(digit(i), *s, d(i))).collect(),
            ("tamagotchi", _) => tamagotchi::NEEDS
                .iter()
                .enumerate()
                .map(|(i, need)| bind(Key::Char(need.chars().next().unwrap_or('?')), *need, d(i)))
                .collect(),
            ("supermarket", _) => [Key::Up, Key::Down, Key::Left, Key::Right]
                .into_iter()
                .zip(supermarket::ACTIONS)
                .enumerate()
                .map(|(i, (k, label))| bind(k, label, d(i)))
                .collect(),
            ("trashbot", SpaceDescriptor::MultiDiscrete { dims }) => {
                let (lo, mid, hi) = (0, dims[0] / 2, dims[0] - 1);
                let md = |a: usize, b: usize| Element::MultiDiscrete(vec![a, b]);
                vec![
                    bind(Key::Char('u'), "shoulder +", md(hi, mid)),
                    bind(Key::Char('j'), "shoulder -", md(lo, mid)),
                    bind(Key::Char('i'), "elbow +", md(mid, hi)),
                    bind(Key::Char('k'), "elbow -", md(mid, lo)),
                    bind(Key::Char(' '), "wait", md(mid, mid)),
                ]
            }
            ("trashbot", _) => {
                let r = |a: f64, b: f64| Element::Real(vec![a, b]);
                vec![
                    bind(Key::Char('u'), "shoulder +", r(TRASHBOT_STEP, 0.0)),
                    bind(Key::Char('j'), "shoulder -", r(-TRASHBOT_STEP, 0.0)),
                    bind(Key::Char('i'), "elbow +", r(0.0, TRASHBOT_STEP)),
                    bind(Key::Char('k'), "elbow -", r(0.0, -TRASHBOT_STEP)),
                    bind(Key::Char(' '), "wait", r(0.0, 0.0)),
                ]
            }
            _ => Vec::new(),
        };
        KeyMap { bindings }
    }

    pub fn action(&self, key: Key) -> Option<&Element> {
        self.bindings.iter().find(|b| b.key == key).map(|b| &b.action)
    }

    pub fn describe(&self) -> String {
        let mut parts: Vec<String> = self.bindings.iter().map(|b| format!("{} {}", b.key, b.label)).collect();
        parts.push("q quit".into());
        parts.join(" | ")
    }
}
