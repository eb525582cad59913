//! Interactive play: a terminal-independent session plus a raw-mode driver.

use std::io::{self, Read, Write};

use anyhow::{bail, Context};
use rlcourse::Environment;

use crate::keymap::{parse_keys, Key, KeyMap};
use crate::style::Style;

#[derive(Clone, Debug, PartialEq)]
pub enum Event {
    Stepped { reward: f64, terminated: bool, truncated: bool },
    Invalid(Key),
    Quit,
}

#[derive(Clone, Debug)]
enum Status {
    Ready,
    Hint(String),
    Reward { reward: f64, ended: Option<String> },
}

pub struct PlaySession {
    env: Box<dyn Environment>,
    keys: KeyMap,
    episode_return: f64,
    finished: Vec<f64>,
    status: Status,
}

impl PlaySession {
    pub fn new(mut env: Box<dyn Environment>) -> Self {
        let keys = KeyMap::for_env(env.name(), env.action_space());
        env.reset(None);
        Self { env, keys, episode_return: 0.0, finished: Vec::new(), status: Status::Ready }
    }

    pub fn keys(&self) -> &KeyMap {
        &self.keys
    }

    pub fn episode_return(&self) -> f64 {
        self.episode_return
    }

    pub fn finished_returns(&self) -> &[f64] {
        &self.finished
    }

    pub fn steps(&self) -> usize {
        self.env.elapsed_steps()
    }

    /// Applies one key. Unbound keys only set a hint; no step is taken.
    pub fn handle(&mut self, key: Key) -> anyhow::Result<Event> {
        if key == Key::Quit {
            return Ok(Event::Quit);
        }
        let Some(action) = self.keys.action(key).cloned() else {
            self.status = Status::Hint(format!("key '{key}' does nothing here; keys: {}", self.keys.describe()));
            return Ok(Event::Invalid(key));
        };
        let out = self.env.step(&action)?;
        self.episode_return += out.reward;
        let mut ended = None;
        if out.done() {
            let how = if out.terminated { "episode over" } else { "time limit reached" };
            ended = Some(format!("{how}, return {}; new episode", self.episode_return));
            self.finished.push(self.episode_return);
            self.episode_return = 0.0;
            self.env.reset(None);
        }
        self.status = Status::Reward { reward: out.reward, ended };
        Ok(Event::Stepped { reward: out.reward, terminated: out.terminated, truncated: out.truncated })
    }

    fn status_line(&self, style: &Style) -> String {
        match &self.status {
            Status::Ready => String::new(),
            Status::Hint(h) => style.bad(h),
            Status::Reward { reward, ended } => {
                let text = format!("reward {reward:+}");
                let mut line = match reward.partial_cmp(&0.0) {
                    Some(std::cmp::Ordering::Greater) => style.good(&text),
                    Some(std::cmp::Ordering::Less) => style.bad(&text),
                    _ => text,
                };
                if let Some(e) = ended {
                    line.push_str("; ");
                    line.push_str(e);
                }
                line
            }
        }
    }

    pub fn frame(&self, style: &Style) -> String {
        format!(
            "{}{}\n\n{}\n\nreturn so far {}   step {}\n{}\n{}\n",
            style.clear(),
            style.bold(self.env.name()),
            self.env.render(),
            self.episode_return,
            self.steps(),
            style.dim(&self.keys.describe()),
            self.status_line(style)
        )
    }

    pub fn summary(&self) -> String {
        let mut s = format!("return so far {}", self.episode_return());
        if !self.finished_returns().is_empty() {
            let shown: Vec<String> = self.finished_returns().iter().map(|r| r.to_string()).collect();
            s.push_str(&format!("; finished episodes: {}", shown.join(", ")));
        }
        s
    }
}

/// Puts the terminal in non-canonical, no-echo mode until dropped.
struct RawMode {
    original: libc::termios,
}

impl RawMode {
    fn enable() -> anyhow::Result<Self> {
        // SAFETY: termios is plain data and is fully written by tcgetattr before use.
        unsafe {
            let mut original: libc::termios = std::mem::zeroed();
            if libc::tcgetattr(libc::STDIN_FILENO, &mut original) != 0 {
                bail!("cannot read terminal attributes: {}", io::Error::last_os_error());
            }
            let mut raw = original;
            raw.c_lflag &= !(libc::ICANON | libc::ECHO | libc::ISIG);
            raw.c_cc[libc::VMIN] = 1;
            raw.c_cc[libc::VTIME] = 0;
            if libc::tcsetattr(libc::STDIN_FILENO, libc::TCSANOW, &raw) != 0 {
                bail!("cannot set terminal attributes: {}", io::Error::last_os_error());
            }
            Ok(Self { original })
        }
    }
}

impl Drop for RawMode {
    fn drop(&mut self) {
        // SAFETY: restores the attributes read in `enable`.
        unsafe {
            libc::tcsetattr(libc::STDIN_FILENO, libc::TCSANOW, &self.original);
        }
    }
}

pub fn is_interactive() -> bool {
    // SAFETY: isatty only inspects the descriptor.
    unsafe { libc::isatty(libc::STDIN_FILENO) == 1 && libc::isatty(libc::STDOUT_FILENO) == 1 }
}

/// Runs a session on the controlling terminal and returns the summary line.
pub fn run_terminal(mut session: PlaySession, style: &Style) -> anyhow::Result<String> {
    let mut out = io::stdout();
    writeln!(out, "keys: {}", session.keys().describe())?;
    let _raw = RawMode::enable()?;
    let mut stdin = io::stdin();
    let mut buf = [0u8; 16];
    write!(out, "{}", session.frame(style))?;
    out.flush()?;
    loop {
        let n = stdin.read(&mut buf).context("reading keyboard input")?;
        if n == 0 {
            break;
        }
        for key in parse_keys(&buf[..n]) {
            if session.handle(key)? == Event::Quit {
                return Ok(session.summary());
            }
        }
        write!(out, "{}", session.frame(style))?;
        out.flush()?;
    }
    Ok(session.summary())
}
